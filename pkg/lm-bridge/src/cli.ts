#!/usr/bin/env node
/**
 * lm-bridge: a membership-oracle server that answers Boolean queries by
 * masked-pronoun prediction, plus a pronoun-bias probing command.
 *
 *   lm-bridge serve --stub FILE [--schema FILE] [--template FILE] [--tcp PORT]
 *   lm-bridge serve --model ID --endpoint URL ...
 *   lm-bridge ppbs  --stub FILE --entities CSV --out CSV
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { parseArgs } from "node:util";
import { FillMaskModel, HttpModel, MODEL_PRESETS, loadStubModel } from "./model";
import { examplesCsv, occupationsCsv, parseEntities, scoreEntities } from "./ppbs";
import { Schema, loadSchema } from "./schema";
import { serveStdio, serveTcp } from "./server";
import { TemplateSpec, loadTemplate } from "./template";

const CONFIG_DIR = path.join(__dirname, "..", "config");

interface CommonOptions {
	schema: Schema;
	template: TemplateSpec;
	model: FillMaskModel;
}

function resolveCommon(values: {
	schema?: string;
	template?: string;
	stub?: string;
	model?: string;
	endpoint?: string;
}): CommonOptions {
	const schema = loadSchema(values.schema ?? path.join(CONFIG_DIR, "default.schema.json"));
	const template = loadTemplate(
		values.template ?? path.join(CONFIG_DIR, "default.template.json"),
		schema,
	);
	let model: FillMaskModel;
	if (values.stub) {
		model = loadStubModel(values.stub);
	} else if (values.model) {
		if (!values.endpoint) {
			const known = Object.keys(MODEL_PRESETS).join(", ");
			throw new Error(
				`--model needs --endpoint URL (an external fill-mask scorer); presets: ${known}`,
			);
		}
		model = new HttpModel(values.endpoint, values.model);
	} else {
		throw new Error("choose a back end: --stub FILE or --model ID --endpoint URL");
	}
	return { schema, template, model };
}

async function cmdServe(argv: string[]): Promise<number> {
	const { values } = parseArgs({
		args: argv,
		options: {
			schema: { type: "string" },
			template: { type: "string" },
			stub: { type: "string" },
			model: { type: "string" },
			endpoint: { type: "string" },
			tcp: { type: "string" },
		},
	});
	const { template, model } = resolveCommon(values);
	if (values.tcp !== undefined) {
		serveTcp(template, model, Number(values.tcp), (port) => {
			process.stdout.write(`PORT ${port}\n`);
		});
		return 0;
	}
	await serveStdio(template, model);
	return 0;
}

async function cmdPpbs(argv: string[]): Promise<number> {
	const { values } = parseArgs({
		args: argv,
		options: {
			schema: { type: "string" },
			template: { type: "string" },
			stub: { type: "string" },
			model: { type: "string" },
			endpoint: { type: "string" },
			entities: { type: "string" },
			out: { type: "string" },
		},
	});
	if (!values.entities || !values.out) {
		throw new Error("ppbs needs --entities CSV and --out CSV");
	}
	const { template, model } = resolveCommon(values);
	const entities = parseEntities(fs.readFileSync(values.entities, "utf-8"));
	const result = await scoreEntities(entities, template, model);
	for (const warning of result.warnings) process.stderr.write(`warning: ${warning}\n`);
	fs.writeFileSync(values.out, occupationsCsv(result));
	const examplesPath = values.out.replace(/(\.csv)?$/, ".examples.csv");
	fs.writeFileSync(examplesPath, examplesCsv(result));
	process.stderr.write(
		`scored ${result.examples.length} examples over ${result.occupations.length} occupations\n`,
	);
	return 0;
}

export async function main(argv: string[]): Promise<number> {
	const [command, ...rest] = argv;
	try {
		if (command === "serve") return await cmdServe(rest);
		if (command === "ppbs") return await cmdPpbs(rest);
		process.stderr.write("usage: lm-bridge <serve|ppbs> [options]\n");
		return 2;
	} catch (e) {
		process.stderr.write(`error: ${(e as Error).message}\n`);
		return 1;
	}
}

if (require.main === module) {
	main(process.argv.slice(2)).then((code) => {
		if (code !== 0) process.exitCode = code;
	});
}
