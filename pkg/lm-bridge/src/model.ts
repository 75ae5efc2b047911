/**
 * Fill-mask scoring back ends.
 *
 * Every back end reports the raw probabilities of "he" and "she" for the
 * masked slot (no renormalisation over the pair).  The stub back end is a
 * deterministic rule table keyed on sentence substrings, so the whole wire
 * protocol runs without any ML dependency; real models are reached through a
 * configurable HTTP scoring endpoint, with per-model mask-token presets.
 */

import * as fs from "node:fs";

export interface PronounScores {
	probHe: number;
	probShe: number;
}

export interface FillMaskModel {
	/** Deterministic: equal sentences yield equal scores within a session. */
	predict(sentence: string): Promise<PronounScores>;
	readonly maskToken: string;
}

export interface StubRule {
	contains: string;
	he: number;
	she: number;
}

export interface StubFile {
	default: { he: number; she: number };
	rules: StubRule[];
}

function checkScore(value: number, where: string): number {
	if (!(value >= 0 && value <= 1)) {
		throw new Error(`${where} must be a probability in [0, 1], got ${value}`);
	}
	return value;
}

export class StubModel implements FillMaskModel {
	readonly maskToken = "<mask>";

	constructor(private readonly table: StubFile) {
		checkScore(table.default.he, "default.he");
		checkScore(table.default.she, "default.she");
		for (const rule of table.rules) {
			checkScore(rule.he, `rule '${rule.contains}'.he`);
			checkScore(rule.she, `rule '${rule.contains}'.she`);
		}
	}

	async predict(sentence: string): Promise<PronounScores> {
		for (const rule of this.table.rules) {
			if (sentence.includes(rule.contains)) {
				return { probHe: rule.he, probShe: rule.she };
			}
		}
		return { probHe: this.table.default.he, probShe: this.table.default.she };
	}
}

export function loadStubModel(path: string): StubModel {
	return new StubModel(JSON.parse(fs.readFileSync(path, "utf-8")) as StubFile);
}

/** Mask-token conventions for the named model families. */
export const MODEL_PRESETS: Record<string, { maskToken: string }> = {
	"bert-base-uncased": { maskToken: "[MASK]" },
	"bert-large-uncased": { maskToken: "[MASK]" },
	"roberta-base": { maskToken: "<mask>" },
	"roberta-large": { maskToken: "<mask>" },
};

export type FetchLike = (
	url: string,
	init: { method: string; headers: Record<string, string>; body: string },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

/**
 * Scores sentences by POSTing {model, sentence, mask_token} to an external
 * fill-mask endpoint that replies {prob_he, prob_she}.
 */
export class HttpModel implements FillMaskModel {
	readonly maskToken: string;

	constructor(
		private readonly endpoint: string,
		private readonly modelId: string,
		private readonly fetchImpl: FetchLike = fetch as unknown as FetchLike,
	) {
		this.maskToken = MODEL_PRESETS[modelId]?.maskToken ?? "<mask>";
	}

	async predict(sentence: string): Promise<PronounScores> {
		const response = await this.fetchImpl(this.endpoint, {
			method: "POST",
			headers: { "content-type": "application/json" },
			body: JSON.stringify({
				model: this.modelId,
				sentence,
				mask_token: this.maskToken,
			}),
		});
		if (!response.ok) {
			throw new Error(`scoring endpoint returned status ${response.status}`);
		}
		const payload = (await response.json()) as { prob_he?: number; prob_she?: number };
		if (typeof payload.prob_he !== "number" || typeof payload.prob_she !== "number") {
			throw new Error("scoring endpoint must return prob_he and prob_she");
		}
		return {
			probHe: checkScore(payload.prob_he, "prob_he"),
			probShe: checkScore(payload.prob_she, "prob_she"),
		};
	}
}
