/**
 * Transports for the oracle session: stdio (one session) or TCP (sequential
 * sessions, one per connection).  Requests inside a session are answered
 * strictly in arrival order.
 */

import * as net from "node:net";
import { FillMaskModel } from "./model";
import { LineBuffer } from "./protocol";
import { OracleSession } from "./session";
import { TemplateSpec } from "./template";

export async function serveStdio(template: TemplateSpec, model: FillMaskModel): Promise<void> {
	const session = new OracleSession(template, model);
	const buffer = new LineBuffer();
	process.stdin.setEncoding("utf-8");
	for await (const chunk of process.stdin) {
		for (const line of buffer.push(chunk as string)) {
			const { payload, done } = await session.handleLine(line);
			if (payload !== null) process.stdout.write(payload);
			if (done) return;
		}
	}
}

export function serveTcp(
	template: TemplateSpec,
	model: FillMaskModel,
	port: number,
	onListen?: (port: number) => void,
): net.Server {
	const server = net.createServer((socket) => {
		const session = new OracleSession(template, model);
		const buffer = new LineBuffer();
		let queue: Promise<void> = Promise.resolve();
		socket.setEncoding("utf-8");
		socket.on("data", (chunk: string) => {
			for (const line of buffer.push(chunk)) {
				queue = queue.then(async () => {
					const { payload, done } = await session.handleLine(line);
					if (payload !== null) socket.write(payload);
					if (done) socket.end();
				});
			}
		});
		socket.on("error", () => socket.destroy());
	});
	server.listen(port, "127.0.0.1", () => {
		const address = server.address() as net.AddressInfo;
		if (onListen) onListen(address.port);
	});
	return server;
}
