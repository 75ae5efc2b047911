/**
 * Boolean vector -> template sentence conversion.
 *
 * The template carries one mask slot and one slot per non-label attribute;
 * a lookup table maps every (attribute, value) position to its phrase
 * fragment, with a dedicated fragment for the all-zeros "unknown" block.
 */

import * as fs from "node:fs";
import { Schema } from "./schema";

export interface TemplateFile {
	template: string;
	mask_token: string;
	slots: Record<string, string>;
	fragments: Record<string, string>;
	unknown_fragments: Record<string, string>;
	pronouns: Record<string, string>;
}

export interface RenderedExample {
	sentence: string;
	label: string;
}

export class TemplateSpec {
	constructor(
		readonly spec: TemplateFile,
		readonly schema: Schema,
	) {
		const maskHits = spec.template.split(spec.mask_token).length - 1;
		if (maskHits !== 1) {
			throw new Error(`template must contain the mask token exactly once, found ${maskHits}`);
		}
		for (const block of schema.blocks) {
			if (block.label) continue;
			const slot = spec.slots[block.name];
			if (!slot) throw new Error(`attribute ${block.name} has no template slot`);
			if (!spec.template.includes(slot)) {
				throw new Error(`slot ${slot} for ${block.name} is missing from the template`);
			}
			for (const value of block.values) {
				if (!(value in spec.fragments)) {
					throw new Error(`no fragment for value ${value}`);
				}
			}
			if (!(block.name in spec.unknown_fragments)) {
				throw new Error(`no unknown fragment for attribute ${block.name}`);
			}
		}
		for (const value of schema.labelBlock.values) {
			if (!(value in spec.pronouns)) {
				throw new Error(`no pronoun for label value ${value}`);
			}
		}
	}

	get maskToken(): string {
		return this.spec.mask_token;
	}

	/** Fill the slots; the mask token stays in place for the model to fill. */
	vectorToSentence(bits: number[]): RenderedExample {
		const chosen = this.schema.decode(bits);
		let sentence = this.spec.template;
		for (const block of this.schema.blocks) {
			if (block.label) continue;
			const value = chosen.get(block.name) ?? null;
			const fragment =
				value === null ? this.spec.unknown_fragments[block.name] : this.spec.fragments[value];
			sentence = sentence.replace(this.spec.slots[block.name], fragment);
		}
		const label = chosen.get(this.schema.labelBlock.name);
		if (!label) throw new Error("label attribute is unset");
		return { sentence, label };
	}

	pronounFor(label: string): string {
		const pronoun = this.spec.pronouns[label];
		if (!pronoun) throw new Error(`no pronoun for label ${label}`);
		return pronoun;
	}

	/** The label value whose pronoun is predicted, given raw probabilities. */
	labelFromProbabilities(probHe: number, probShe: number): string {
		const heLabel = Object.keys(this.spec.pronouns).find(
			(k) => this.spec.pronouns[k] === "he",
		)!;
		const sheLabel = Object.keys(this.spec.pronouns).find(
			(k) => this.spec.pronouns[k] === "she",
		)!;
		return probHe > probShe ? heLabel : sheLabel;
	}
}

export function loadTemplate(path: string, schema: Schema): TemplateSpec {
	return new TemplateSpec(JSON.parse(fs.readFileSync(path, "utf-8")) as TemplateFile, schema);
}
