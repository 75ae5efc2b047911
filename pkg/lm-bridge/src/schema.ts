/**
 * One-hot attribute schema shared with the learner side: each
 * (attribute, value) pair is one Boolean position, in declaration order.
 * Exactly one attribute is the label block (gender here); label blocks
 * require exactly one bit, other blocks allow all-zeros for "unknown".
 */

import * as fs from "node:fs";

export interface AttributeSpec {
	name: string;
	values: string[];
	allow_unknown?: boolean;
	label?: boolean;
}

export interface SchemaFile {
	attributes: AttributeSpec[];
}

export interface Block {
	name: string;
	values: string[];
	allowUnknown: boolean;
	label: boolean;
	start: number;
}

export class Schema {
	readonly blocks: Block[];
	readonly variables: string[];

	constructor(spec: SchemaFile) {
		if (!spec.attributes?.length) throw new Error("schema needs at least one attribute");
		this.blocks = [];
		this.variables = [];
		let labels = 0;
		for (const attribute of spec.attributes) {
			if (!attribute.values?.length) {
				throw new Error(`attribute ${attribute.name} has no values`);
			}
			const label = Boolean(attribute.label);
			const allowUnknown = attribute.allow_unknown ?? true;
			if (label) {
				labels += 1;
				if (allowUnknown) {
					throw new Error(`label attribute ${attribute.name} must not allow unknown`);
				}
			}
			this.blocks.push({
				name: attribute.name,
				values: [...attribute.values],
				allowUnknown,
				label,
				start: this.variables.length,
			});
			this.variables.push(...attribute.values);
		}
		if (new Set(this.variables).size !== this.variables.length) {
			throw new Error("duplicate (attribute, value) names");
		}
		if (labels !== 1) throw new Error("exactly one label attribute is required");
	}

	get size(): number {
		return this.variables.length;
	}

	get labelBlock(): Block {
		return this.blocks.find((b) => b.label)!;
	}

	/**
	 * Per-block chosen value of a 0/1 vector, or null for an all-zeros block.
	 * Throws when a block carries two bits or a label bit is missing.
	 */
	decode(bits: number[]): Map<string, string | null> {
		return this._decode(bits, true)
	}

	/** Like decode but tolerates an unset label block (used for queries about
	 * intersections of examples with opposite labels). */
	decodeUnlabelled(bits: number[]): Map<string, string | null> {
		return this._decode(bits, false)
	}

	private _decode(bits: number[], requireLabel: boolean): Map<string, string | null> {
		if (bits.length !== this.size) {
			throw new Error(`model must have length ${this.size}, got ${bits.length}`);
		}
		if (bits.some((b) => b !== 0 && b !== 1)) {
			throw new Error("model entries must be 0 or 1");
		}
		const chosen = new Map<string, string | null>();
		for (const block of this.blocks) {
			const picked: string[] = [];
			block.values.forEach((value, offset) => {
				if (bits[block.start + offset] === 1) picked.push(value);
			});
			if (picked.length > 1) {
				throw new Error(`attribute ${block.name} has ${picked.length} bits set`);
			}
			if (picked.length === 0 && !block.allowUnknown && requireLabel) {
				throw new Error(`attribute ${block.name} requires exactly one bit`);
			}
			chosen.set(block.name, picked[0] ?? null);
		}
		return chosen;
	}

	/** Inverse of decode for building vectors from attribute values. */
	encode(values: Map<string, string | null>): number[] {
		const bits = new Array(this.size).fill(0);
		for (const block of this.blocks) {
			const value = values.get(block.name) ?? null;
			if (value === null) {
				if (!block.allowUnknown) {
					throw new Error(`attribute ${block.name} requires a value`);
				}
				continue;
			}
			const offset = block.values.indexOf(value);
			if (offset < 0) {
				throw new Error(`unknown value ${value} for attribute ${block.name}`);
			}
			bits[block.start + offset] = 1;
		}
		return bits;
	}
}

export function loadSchema(path: string): Schema {
	return new Schema(JSON.parse(fs.readFileSync(path, "utf-8")) as SchemaFile);
}
