/**
 * Protocol session: answers membership queries by rendering the queried
 * vector as a sentence, predicting the masked pronoun, and comparing the
 * predicted gender with the vector's own label.  Match means positive.
 */

import { FillMaskModel } from "./model";
import {
	AnswerFrame,
	ErrorFrame,
	Frame,
	ReadyFrame,
	encodeFrame,
	parseFrame,
} from "./protocol";
import { TemplateSpec } from "./template";

export interface SessionReply {
	payload: string | null;
	done: boolean;
}

export class OracleSession {
	private ready = false;
	private lastId = 0;
	private cache = new Map<string, "positive" | "negative">();

	constructor(
		private readonly template: TemplateSpec,
		private readonly model: FillMaskModel,
	) {}

	private error(reason: string, extra: Partial<ErrorFrame> = {}): SessionReply {
		return { payload: encodeFrame({ type: "error", reason, ...extra }), done: false };
	}

	async handleLine(line: string): Promise<SessionReply> {
		const frame = parseFrame(line);
		if (frame === null) return this.error("frame is not a JSON object with a type");
		return this.handleFrame(frame);
	}

	async handleFrame(frame: Frame): Promise<SessionReply> {
		switch (frame.type) {
			case "hello": {
				const expected = this.template.schema.variables;
				const got = Array.isArray(frame.vars) ? frame.vars : [];
				if (got.length !== expected.length || got.some((v, i) => v !== expected[i])) {
					return {
						payload: encodeFrame({
							type: "error",
							reason: "variable universe mismatch",
							vars: expected,
						}),
						done: true,
					};
				}
				this.ready = true;
				const ready: ReadyFrame = { type: "ready", vars: expected };
				return { payload: encodeFrame(ready), done: false };
			}
			case "bye":
				return { payload: null, done: true };
			case "membership": {
				if (!this.ready) return this.error("membership before hello");
				if (!Number.isInteger(frame.id) || frame.id <= this.lastId) {
					return this.error("ids must be strictly increasing", { id: frame.id });
				}
				this.lastId = frame.id;
				let label: "positive" | "negative";
				try {
					label = await this.classify(frame.model);
				} catch (e) {
					return this.error((e as Error).message, { id: frame.id });
				}
				const answer: AnswerFrame = { type: "answer", id: frame.id, label };
				return { payload: encodeFrame(answer), done: false };
			}
			default:
				return this.error(`unknown frame type ${(frame as Frame).type}`);
		}
	}

	async classify(bits: number[]): Promise<"positive" | "negative"> {
		const key = bits.join("");
		const cached = this.cache.get(key);
		if (cached) return cached;
		const answer = await this.classifyUncached(bits);
		this.cache.set(key, answer);
		return answer;
	}

	private async classifyUncached(bits: number[]): Promise<"positive" | "negative"> {
		// A vector with no label bit (queries about intersections of examples
		// with opposite labels) has no given gender the prediction could
		// match, so it is negative by definition.  Two bits anywhere in a
		// block are still a protocol error, raised by the decode.
		const label = this.template.schema.labelBlock;
		const labelCount = label.values.reduce(
			(acc, _v, offset) => acc + (bits[label.start + offset] === 1 ? 1 : 0),
			0,
		);
		if (labelCount === 0) {
			this.template.schema.decodeUnlabelled(bits); // validates widths and blocks
			return "negative";
		}
		const { sentence, label: given } = this.template.vectorToSentence(bits);
		const { probHe, probShe } = await this.model.predict(sentence);
		const predicted = this.template.labelFromProbabilities(probHe, probShe);
		return predicted === given ? "positive" : "negative";
	}
}
