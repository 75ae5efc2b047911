/**
 * Pronoun-prediction bias probing.
 *
 * Each entity row becomes one masked sentence; its score is the raw
 * probability difference prob(he) - prob(she).  Per-occupation scores are
 * the arithmetic means of their groups.
 */

import { parseCsv, renderCsv } from "./csv";
import { FillMaskModel } from "./model";
import { TemplateSpec } from "./template";

export interface EntityRow {
	occupation: string | null;
	period: string | null;
	continent: string | null;
	gender: string;
}

export interface ExampleScore extends EntityRow {
	sentence: string;
	probHe: number;
	probShe: number;
	score: number;
}

export interface OccupationScore {
	occupation: string;
	count: number;
	score: number;
}

export interface PpbsResult {
	examples: ExampleScore[];
	occupations: OccupationScore[];
	warnings: string[];
}

const COLUMNS = ["occupation", "period", "continent", "gender"] as const;

export function parseEntities(text: string): EntityRow[] {
	const rows = parseCsv(text);
	if (!rows.length) throw new Error("entities file is empty");
	const header = rows[0].map((h) => h.trim().toLowerCase());
	const index: Record<string, number> = {};
	for (const column of COLUMNS) {
		const at = header.indexOf(column);
		if (at < 0) throw new Error(`entities file is missing the ${column} column`);
		index[column] = at;
	}
	const unknown = (value: string) => (value === "" || value === "-" ? null : value);
	return rows.slice(1).map((row, line) => {
		const gender = row[index.gender]?.trim();
		if (!gender) throw new Error(`row ${line + 2}: gender is required`);
		return {
			occupation: unknown(row[index.occupation]?.trim() ?? ""),
			period: unknown(row[index.period]?.trim() ?? ""),
			continent: unknown(row[index.continent]?.trim() ?? ""),
			gender,
		};
	});
}

export async function scoreEntities(
	entities: EntityRow[],
	template: TemplateSpec,
	model: FillMaskModel,
): Promise<PpbsResult> {
	const examples: ExampleScore[] = [];
	for (const entity of entities) {
		const bits = template.schema.encode(
			new Map<string, string | null>([
				["occupation", entity.occupation],
				["period", entity.period],
				["continent", entity.continent],
				["gender", entity.gender],
			]),
		);
		const { sentence } = template.vectorToSentence(bits);
		const { probHe, probShe } = await model.predict(sentence);
		examples.push({ ...entity, sentence, probHe, probShe, score: probHe - probShe });
	}
	const groups = new Map<string, ExampleScore[]>();
	for (const example of examples) {
		const key = example.occupation ?? "";
		if (!groups.has(key)) groups.set(key, []);
		groups.get(key)!.push(example);
	}
	const warnings: string[] = [];
	const occupations: OccupationScore[] = [];
	for (const [occupation, members] of groups) {
		if (!occupation) {
			warnings.push(`omitting ${members.length} example(s) without an occupation`);
			continue;
		}
		const mean = members.reduce((acc, m) => acc + m.score, 0) / members.length;
		occupations.push({ occupation, count: members.length, score: mean });
	}
	occupations.sort((a, b) => b.score - a.score || a.occupation.localeCompare(b.occupation));
	return { examples, occupations, warnings };
}

export function occupationsCsv(result: PpbsResult): string {
	return renderCsv([
		["occupation", "count", "ppbs"],
		...result.occupations.map((o) => [o.occupation, o.count, o.score.toFixed(6)]),
	]);
}

export function examplesCsv(result: PpbsResult): string {
	return renderCsv([
		["occupation", "period", "continent", "gender", "sentence", "prob_he", "prob_she", "ppbs"],
		...result.examples.map((e) => [
			e.occupation ?? "-",
			e.period ?? "-",
			e.continent ?? "-",
			e.gender,
			e.sentence,
			e.probHe.toFixed(6),
			e.probShe.toFixed(6),
			e.score.toFixed(6),
		]),
	]);
}
