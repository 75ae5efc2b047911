/**
 * Newline-delimited JSON frames for the membership-oracle wire protocol.
 *
 *   client -> {"type":"hello","vars":[...]}
 *   server -> {"type":"ready","vars":[...]}        (must match)
 *   client -> {"type":"membership","id":n,"model":[0,1,...]}
 *   server -> {"type":"answer","id":n,"label":"positive"|"negative"}
 *   client -> {"type":"bye"}
 *
 * A malformed or rejected frame gets {"type":"error","reason":...}.
 */

export interface HelloFrame {
	type: "hello";
	vars: string[];
}

export interface ReadyFrame {
	type: "ready";
	vars: string[];
}

export interface MembershipFrame {
	type: "membership";
	id: number;
	model: number[];
}

export interface AnswerFrame {
	type: "answer";
	id: number;
	label: "positive" | "negative";
}

export interface ErrorFrame {
	type: "error";
	reason: string;
	id?: number;
	vars?: string[];
}

export interface ByeFrame {
	type: "bye";
}

export type Frame =
	| HelloFrame
	| ReadyFrame
	| MembershipFrame
	| AnswerFrame
	| ErrorFrame
	| ByeFrame;

export function encodeFrame(frame: Frame): string {
	return JSON.stringify(frame) + "\n";
}

export function parseFrame(line: string): Frame | null {
	let value: unknown;
	try {
		value = JSON.parse(line);
	} catch {
		return null;
	}
	if (typeof value !== "object" || value === null) return null;
	const type = (value as { type?: unknown }).type;
	if (typeof type !== "string") return null;
	return value as Frame;
}

/** Splits a stream chunk buffer into complete lines plus the unfinished rest. */
export class LineBuffer {
	private rest = "";

	push(chunk: string): string[] {
		this.rest += chunk;
		const lines: string[] = [];
		for (;;) {
			const index = this.rest.indexOf("\n");
			if (index < 0) break;
			lines.push(this.rest.slice(0, index));
			this.rest = this.rest.slice(index + 1);
		}
		return lines.filter((line) => line.trim().length > 0);
	}
}
