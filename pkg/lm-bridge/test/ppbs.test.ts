import * as path from "node:path";
import { describe, expect, it } from "vitest";
import { parseCsv } from "../src/csv";
import { StubModel } from "../src/model";
import { examplesCsv, occupationsCsv, parseEntities, scoreEntities } from "../src/ppbs";
import { loadSchema } from "../src/schema";
import { loadTemplate } from "../src/template";

const CONFIG = path.join(__dirname, "..", "config");
const schema = loadSchema(path.join(CONFIG, "default.schema.json"));
const template = loadTemplate(path.join(CONFIG, "default.template.json"), schema);

const ENTITIES = [
	"occupation,period,continent,gender",
	"nurse,after_1970,europe,female",
	"nurse,before_1875,asia,male",
	"banker,1925_1951,europe,male",
	"banker,-,americas,female",
	",after_1970,africa,female",
].join("\n");

describe("entity parsing", () => {
	it("reads rows with unknown markers", () => {
		const rows = parseEntities(ENTITIES);
		expect(rows).toHaveLength(5);
		expect(rows[3]).toEqual({
			occupation: "banker",
			period: null,
			continent: "americas",
			gender: "female",
		});
		expect(rows[4].occupation).toBeNull();
	});

	it("requires the four columns and a gender", () => {
		expect(() => parseEntities("occupation,period,continent\nnurse,-,-")).toThrow(/gender/);
		expect(() => parseEntities("occupation,period,continent,gender\nnurse,-,-,")).toThrow(
			/gender is required/,
		);
	});
});

describe("scoring", () => {
	it("computes constant scores under a constant stub", async () => {
		const constant = new StubModel({ default: { he: 0.8, she: 0.2 }, rules: [] });
		const result = await scoreEntities(parseEntities(ENTITIES), template, constant);
		for (const example of result.examples) {
			expect(example.score).toBeCloseTo(0.6, 12);
		}
		for (const occ of result.occupations) {
			expect(occ.score).toBeCloseTo(0.6, 12);
		}
	});

	it("averages per occupation to machine precision", async () => {
		const rules = new StubModel({
			default: { he: 0.5, she: 0.5 },
			rules: [
				{ contains: "in Europe", he: 0.7, she: 0.3 }, // score 0.4
				{ contains: "in Asia", he: 0.4, she: 0.6 }, // score -0.2
			],
		});
		const twoNurses = parseEntities(
			"occupation,period,continent,gender\nnurse,-,europe,female\nnurse,-,asia,male",
		);
		const result = await scoreEntities(twoNurses, template, rules);
		expect(result.occupations).toHaveLength(1);
		expect(result.occupations[0].count).toBe(2);
		expect(Math.abs(result.occupations[0].score - 0.1)).toBeLessThan(1e-12);
	});

	it("keeps every score within [-1, 1] and sorts the report", async () => {
		const biased = new StubModel({
			default: { he: 0, she: 1 },
			rules: [{ contains: "banker", he: 1, she: 0 }],
		});
		const result = await scoreEntities(parseEntities(ENTITIES), template, biased);
		for (const example of result.examples) {
			expect(example.score).toBeGreaterThanOrEqual(-1);
			expect(example.score).toBeLessThanOrEqual(1);
		}
		const scores = result.occupations.map((o) => o.score);
		expect(scores).toEqual([...scores].sort((a, b) => b - a));
		expect(result.occupations[0].occupation).toBe("banker");
	});

	it("omits entities without an occupation, with a warning", async () => {
		const constant = new StubModel({ default: { he: 0.5, she: 0.5 }, rules: [] });
		const result = await scoreEntities(parseEntities(ENTITIES), template, constant);
		expect(result.occupations.map((o) => o.occupation).sort()).toEqual(["banker", "nurse"]);
		expect(result.warnings).toHaveLength(1);
	});

	it("emits per-example and per-occupation CSVs that agree", async () => {
		const constant = new StubModel({ default: { he: 0.75, she: 0.25 }, rules: [] });
		const result = await scoreEntities(parseEntities(ENTITIES), template, constant);
		const byOcc = parseCsv(occupationsCsv(result));
		expect(byOcc[0]).toEqual(["occupation", "count", "ppbs"]);
		const perExample = parseCsv(examplesCsv(result));
		// recompute each group mean from the per-example file
		const header = perExample[0];
		const occAt = header.indexOf("occupation");
		const ppbsAt = header.indexOf("ppbs");
		for (const [occ, count, mean] of byOcc.slice(1)) {
			const members = perExample.slice(1).filter((row) => row[occAt] === occ);
			expect(members).toHaveLength(Number(count));
			const recomputed = members.reduce((acc, row) => acc + Number(row[ppbsAt]), 0) / members.length;
			expect(recomputed).toBeCloseTo(Number(mean), 6);
		}
	});
});
