/** Minimal CSV reading/writing with double-quote escaping. */

export function parseCsv(text: string): string[][] {
	const rows: string[][] = [];
	let row: string[] = [];
	let field = "";
	let quoted = false;
	let i = 0;
	const pushField = () => {
		row.push(field);
		field = "";
	};
	const pushRow = () => {
		pushField();
		if (row.length > 1 || row[0] !== "") rows.push(row);
		row = [];
	};
	while (i < text.length) {
		const ch = text[i];
		if (quoted) {
			if (ch === '"') {
				if (text[i + 1] === '"') {
					field += '"';
					i += 2;
					continue;
				}
				quoted = false;
				i += 1;
				continue;
			}
			field += ch;
			i += 1;
			continue;
		}
		if (ch === '"' && field === "") {
			quoted = true;
		} else if (ch === ",") {
			pushField();
		} else if (ch === "\n") {
			pushRow();
		} else if (ch !== "\r") {
			field += ch;
		}
		i += 1;
	}
	if (field !== "" || row.length) pushRow();
	return rows;
}

function escapeField(value: string): string {
	return /[",\n]/.test(value) ? `"${value.replace(/"/g, '""')}"` : value;
}

export function renderCsv(rows: (string | number)[][]): string {
	return rows.map((row) => row.map((v) => escapeField(String(v))).join(",")).join("\n") + "\n";
}
