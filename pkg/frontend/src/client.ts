/**
 * Newline-delimited JSON client for a session connection. One request
 * is answered by exactly one reply on the same connection, in order;
 * the client still tags every request with an id and checks the echo,
 * so a desynchronized stream fails loudly instead of silently pairing
 * the wrong frames.
 */

import * as net from "node:net";

import { parseReply, Reply, Request } from "./protocol.js";

export type FrameDirection = "send" | "recv";
export type FrameListener = (dir: FrameDirection, line: string) => void;

interface Pending {
  id: number;
  resolve: (reply: Reply) => void;
  reject: (err: Error) => void;
}

export class SessionClient {
  private buffer = "";
  private pending: Pending[] = [];
  private nextId = 1;
  private closed: Error | null = null;
  private frameListeners: FrameListener[] = [];

  private constructor(private readonly socket: net.Socket) {
    socket.setEncoding("utf8");
    socket.on("data", (chunk: string) => this.onData(chunk));
    socket.on("error", (err) => this.fail(err));
    socket.on("close", () => this.fail(new Error("connection closed")));
  }

  static connect(host: string, port: number, timeoutMs = 5000): Promise<SessionClient> {
    return new Promise((resolve, reject) => {
      const socket = net.createConnection({ host, port });
      const timer = setTimeout(() => {
        socket.destroy();
        reject(new Error(`connect timeout after ${timeoutMs}ms`));
      }, timeoutMs);
      socket.once("connect", () => {
        clearTimeout(timer);
        resolve(new SessionClient(socket));
      });
      socket.once("error", (err) => {
        clearTimeout(timer);
        reject(err);
      });
    });
  }

  /** Observe raw frames in both directions (used to record transcripts). */
  onFrame(listener: FrameListener): void {
    this.frameListeners.push(listener);
  }

  request(req: Request): Promise<Reply> {
    if (this.closed) return Promise.reject(this.closed);
    const id = this.nextId++;
    const line = JSON.stringify({ ...req, id });
    return new Promise<Reply>((resolve, reject) => {
      this.pending.push({ id, resolve, reject });
      for (const fn of this.frameListeners) fn("send", line);
      this.socket.write(line + "\n");
    });
  }

  close(): void {
    this.closed ??= new Error("client closed");
    this.socket.destroy();
  }

  private onData(chunk: string): void {
    this.buffer += chunk;
    let nl: number;
    while ((nl = this.buffer.indexOf("\n")) >= 0) {
      const line = this.buffer.slice(0, nl);
      this.buffer = this.buffer.slice(nl + 1);
      if (!line.trim()) continue;
      for (const fn of this.frameListeners) fn("recv", line);
      this.dispatch(line);
    }
  }

  private dispatch(line: string): void {
    const waiter = this.pending.shift();
    if (!waiter) return; // unsolicited frame: transcript replays tolerate it
    let reply: Reply;
    try {
      reply = parseReply(line);
    } catch (err) {
      waiter.reject(err instanceof Error ? err : new Error(String(err)));
      return;
    }
    if (reply.id !== undefined && reply.id !== waiter.id) {
      waiter.reject(new Error(`reply id ${reply.id} does not match request id ${waiter.id}`));
      return;
    }
    waiter.resolve(reply);
  }

  private fail(err: Error): void {
    if (this.closed) return;
    this.closed = err;
    for (const waiter of this.pending.splice(0)) waiter.reject(err);
  }
}
