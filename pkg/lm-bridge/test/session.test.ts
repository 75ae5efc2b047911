import * as path from "node:path";
import { beforeEach, describe, expect, it } from "vitest";
import { loadStubModel } from "../src/model";
import { AnswerFrame, ErrorFrame, Frame, encodeFrame, parseFrame } from "../src/protocol";
import { loadSchema } from "../src/schema";
import { OracleSession } from "../src/session";
import { loadTemplate } from "../src/template";

const CONFIG = path.join(__dirname, "..", "config");
const schema = loadSchema(path.join(CONFIG, "default.schema.json"));
const template = loadTemplate(path.join(CONFIG, "default.template.json"), schema);
const stub = () => loadStubModel(path.join(CONFIG, "stub.biased.json"));

function freshSession(): OracleSession {
	return new OracleSession(template, stub());
}

async function exchange(session: OracleSession, frame: Frame): Promise<Frame | null> {
	const { payload } = await session.handleFrame(frame);
	return payload === null ? null : parseFrame(payload);
}

/** Small deterministic generator for valid one-hot vectors. */
function* vectorStream(count: number): Generator<number[]> {
	let state = 0x2545f491;
	const next = (bound: number) => {
		state = (state * 1103515245 + 12345) & 0x7fffffff;
		return state % bound;
	};
	for (let i = 0; i < count; i++) {
		const bits = new Array(schema.size).fill(0);
		for (const block of schema.blocks) {
			const options = block.values.length + (block.allowUnknown ? 1 : 0);
			const pick = next(options);
			if (pick < block.values.length) bits[block.start + pick] = 1;
		}
		yield bits;
	}
}

describe("handshake", () => {
	it("acknowledges a matching universe", async () => {
		const reply = await exchange(freshSession(), { type: "hello", vars: schema.variables });
		expect(reply).toEqual({ type: "ready", vars: schema.variables });
	});

	it("rejects a mismatched universe and ends the session", async () => {
		const session = freshSession();
		const { payload, done } = await session.handleFrame({
			type: "hello",
			vars: schema.variables.slice(0, 10),
		});
		expect(done).toBe(true);
		const frame = parseFrame(payload!) as ErrorFrame;
		expect(frame.type).toBe("error");
		expect(frame.reason).toMatch(/universe mismatch/);
	});

	it("refuses membership before hello", async () => {
		const reply = (await exchange(freshSession(), {
			type: "membership",
			id: 1,
			model: new Array(schema.size).fill(0),
		})) as ErrorFrame;
		expect(reply.type).toBe("error");
	});
});

describe("membership answering", () => {
	let session: OracleSession;

	beforeEach(async () => {
		session = freshSession();
		await session.handleFrame({ type: "hello", vars: schema.variables });
	});

	it("answers the documented probe vector", async () => {
		// dancer reads as female-biased in the stub: prediction matches the label
		const probe = [0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0];
		const reply = (await exchange(session, {
			type: "membership",
			id: 1,
			model: probe,
		})) as AnswerFrame;
		expect(reply).toEqual({ type: "answer", id: 1, label: "positive" });
		const flipped = [...probe];
		flipped[24] = 0;
		flipped[25] = 1; // same sentence, male label: prediction no longer matches
		const second = (await exchange(session, {
			type: "membership",
			id: 2,
			model: flipped,
		})) as AnswerFrame;
		expect(second.label).toBe("negative");
	});

	it("answers 1000 queries with zero protocol errors and deterministically", async () => {
		const vectors = [...vectorStream(1000)];
		const labels: string[] = [];
		let id = 0;
		for (const bits of vectors) {
			const reply = (await exchange(session, {
				type: "membership",
				id: ++id,
				model: bits,
			})) as AnswerFrame;
			expect(reply.type).toBe("answer");
			expect(reply.id).toBe(id);
			labels.push(reply.label);
		}
		// a replayed session produces the identical label sequence
		const replay = freshSession();
		await replay.handleFrame({ type: "hello", vars: schema.variables });
		id = 0;
		for (let i = 0; i < vectors.length; i++) {
			const reply = (await exchange(replay, {
				type: "membership",
				id: ++id,
				model: vectors[i],
			})) as AnswerFrame;
			expect(reply.label).toBe(labels[i]);
		}
		expect(labels.filter((l) => l === "positive").length).toBeGreaterThan(0);
		expect(labels.filter((l) => l === "negative").length).toBeGreaterThan(0);
	});

	it("enforces strictly increasing ids", async () => {
		const bits = [...vectorStream(1)][0];
		await exchange(session, { type: "membership", id: 5, model: bits });
		const reply = (await exchange(session, {
			type: "membership",
			id: 5,
			model: bits,
		})) as ErrorFrame;
		expect(reply.type).toBe("error");
		expect(reply.reason).toMatch(/strictly increasing/);
	});

	it("answers negative when a male-biased model contradicts the female label", async () => {
		const { StubModel } = await import("../src/model");
		const maleBiased = new OracleSession(
			template,
			new StubModel({ default: { he: 0.9, she: 0.1 }, rules: [] }),
		);
		await maleBiased.handleFrame({ type: "hello", vars: schema.variables });
		const probe = [0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0];
		const reply = (await exchange(maleBiased, {
			type: "membership",
			id: 1,
			model: probe,
		})) as AnswerFrame;
		expect(reply.label).toBe("negative");
	});

	it("answers label-less vectors negative instead of erroring", async () => {
		// intersections of opposite-label examples have an empty gender block;
		// with no given gender the prediction cannot match, so: negative
		const nurseOnly = new Array(schema.size).fill(0);
		nurseOnly[15] = 1; // nurse, no gender bit
		const reply = (await exchange(session, {
			type: "membership",
			id: 1,
			model: nurseOnly,
		})) as AnswerFrame;
		expect(reply).toEqual({ type: "answer", id: 1, label: "negative" });
	});

	it("reports invalid vectors as error frames and keeps going", async () => {
		const twoGenders = new Array(schema.size).fill(0);
		twoGenders[24] = twoGenders[25] = 1;
		const bad = (await exchange(session, {
			type: "membership",
			id: 1,
			model: twoGenders,
		})) as ErrorFrame;
		expect(bad.type).toBe("error");
		expect(bad.reason).toMatch(/gender has 2 bits/);
		const good = (await exchange(session, {
			type: "membership",
			id: 2,
			model: [...vectorStream(1)][0],
		})) as AnswerFrame;
		expect(good.type).toBe("answer");
	});

	it("handles malformed lines and unknown types", async () => {
		const malformed = await session.handleLine("this is not a frame");
		expect((parseFrame(malformed.payload!) as ErrorFrame).type).toBe("error");
		const unknown = (await exchange(session, { type: "bogus" } as unknown as Frame)) as ErrorFrame;
		expect(unknown.reason).toMatch(/unknown frame type/);
	});

	it("ends cleanly on bye", async () => {
		const { payload, done } = await session.handleFrame({ type: "bye" });
		expect(payload).toBeNull();
		expect(done).toBe(true);
	});
});
