/**
 * Scripted drivers for the named-production session on a 2-cell screen:
 * teach all eight productions by dictation, pre-tune a target function
 * by auditory names alone, and examine every input. Each step sends
 * ordinary protocol commands; the mirror of this flow as a batch script
 * ships with the server package (scripts/mentalset_k2_console.script).
 */

import { SessionClient } from "./client.js";
import {
  Delta,
  FullSnapshot,
  Reply,
  Snapshot,
  isBrainRecord,
  isUnitRecord,
} from "./protocol.js";

export const K2_SESSION = [
  "ALPHABET names a1 a2 a3 a4 a5 a6 a7 a8",
  "ALPHABET bit 0 1",
  "ALPHABET speech s0 s1",
  "SCREEN cells=2 data=bit",
  "UNIT AM in=names,bit,bit,speech out=speech wx=4,1,1,1 a=0.07 tau=100 cap=8",
  "ASSEMBLY aud=names refresh=on",
  "SEED 7",
].join("\n") + "\n";

export interface Production {
  name: string;
  bits: [string, string];
  speech: string;
}

/** One production per (pattern, utterance) pair, names in storage order. */
export const PRODUCTIONS: Production[] = [
  { name: "a1", bits: ["0", "0"], speech: "s0" },
  { name: "a2", bits: ["0", "0"], speech: "s1" },
  { name: "a3", bits: ["0", "1"], speech: "s0" },
  { name: "a4", bits: ["0", "1"], speech: "s1" },
  { name: "a5", bits: ["1", "0"], speech: "s0" },
  { name: "a6", bits: ["1", "0"], speech: "s1" },
  { name: "a7", bits: ["1", "1"], speech: "s0" },
  { name: "a8", bits: ["1", "1"], speech: "s1" },
];

export const INPUTS: [string, string][] = [
  ["0", "0"],
  ["0", "1"],
  ["1", "0"],
  ["1", "1"],
];

/** Names realizing a truth table given as one output bit per INPUTS row. */
export function tableNames(truthBits: [number, number, number, number]): string[] {
  return truthBits.map((bit, i) => {
    const input = INPUTS[i]!;
    const hit = PRODUCTIONS.find(
      (p) => p.bits[0] === input[0] && p.bits[1] === input[1] && p.speech === `s${bit}`,
    );
    if (!hit) throw new Error(`no production for input ${input.join("")} -> s${bit}`);
    return hit.name;
  });
}

export const AND_BITS: [number, number, number, number] = [0, 0, 0, 1];
export const XOR_BITS: [number, number, number, number] = [0, 1, 1, 0];

function expectEvent<T extends Reply["event"]>(reply: Reply, event: T): Extract<Reply, { event: T }> {
  if (reply.event === "error") {
    throw new Error(`server error: ${reply.message}`);
  }
  if (reply.event !== event) {
    throw new Error(`expected ${event} reply, got ${reply.event}`);
  }
  return reply as Extract<Reply, { event: T }>;
}

export async function loadK2(client: SessionClient, seed?: number): Promise<FullSnapshot> {
  const req = seed === undefined
    ? { cmd: "load_script" as const, text: K2_SESSION }
    : { cmd: "load_script" as const, text: K2_SESSION, seed };
  const snap = expectEvent(await client.request(req), "snapshot");
  if (!snap.loaded) throw new Error("load_script left no session");
  return snap;
}

export async function setSignal(client: SessionClient, name: string, value: string): Promise<Snapshot> {
  return expectEvent(await client.request({ cmd: "set", name, value }), "snapshot");
}

export async function cycle(client: SessionClient, fields: Record<string, string>): Promise<Delta> {
  return expectEvent(await client.request({ cmd: "cycle", fields }), "delta");
}

export async function snapshot(client: SessionClient): Promise<FullSnapshot> {
  const snap = expectEvent(await client.request({ cmd: "snapshot" }), "snapshot");
  if (!snap.loaded) throw new Error("no session loaded");
  return snap;
}

export async function resetSession(client: SessionClient): Promise<Snapshot> {
  return expectEvent(await client.request({ cmd: "reset" }), "snapshot");
}

/** The utterance of a cycle: the motor tokens from its brain record. */
export function spokenOf(delta: Delta): string[] {
  for (const rec of delta.records) {
    if (isBrainRecord(rec)) return rec.motor;
  }
  throw new Error("delta carries no brain record");
}

/** The motor unit's excitation array after a cycle, from its trace record. */
export function tracedE(delta: Delta, unit = "AM"): number[] {
  for (const rec of delta.records) {
    if (isUnitRecord(rec) && rec.unit === unit) return rec.e;
  }
  throw new Error(`delta carries no ${unit} record`);
}

/** Paint one screen cell; the machine runs (and may babble) while we edit. */
export async function paintCell(client: SessionClient, cell: number, token: string): Promise<Delta> {
  return cycle(client, { addr: String(cell), din: token });
}

/**
 * Dictation pass over all eight productions: paint the pattern with
 * writing off, then hold the mouth (NM.sel=1) and write one production
 * per cycle with its name on the auditory line.
 */
export async function teachAll(client: SessionClient): Promise<Delta[]> {
  const deltas: Delta[] = [];
  await setSignal(client, "nm_sel", "1");
  await setSignal(client, "feedback", "on");
  let shown: [string, string] | null = null;
  for (const prod of PRODUCTIONS) {
    if (shown === null || shown[0] !== prod.bits[0]) {
      deltas.push(await paintCell(client, 1, prod.bits[0]));
    }
    if (shown === null || shown[1] !== prod.bits[1]) {
      deltas.push(await paintCell(client, 2, prod.bits[1]));
    }
    shown = prod.bits;
    await setSignal(client, "wen_am", "1");
    deltas.push(await cycle(client, { aud: prod.name, y1: prod.speech }));
    await setSignal(client, "wen_am", "0");
  }
  return deltas;
}

/** Release the mouth, clear excitations, and call out the set's names. */
export async function pretune(client: SessionClient, names: string[]): Promise<Delta[]> {
  await setSignal(client, "nm_sel", "0");
  await setSignal(client, "wen_am", "0");
  await resetSession(client);
  const deltas: Delta[] = [];
  for (const name of names) {
    deltas.push(await cycle(client, { aud: name }));
  }
  return deltas;
}

/** Show one input pattern; the answer is the utterance of the last edit cycle. */
export async function probe(client: SessionClient, bits: [string, string]): Promise<{ spoken: string[]; delta: Delta }> {
  await paintCell(client, 1, bits[0]);
  const delta = await paintCell(client, 2, bits[1]);
  return { spoken: spokenOf(delta), delta };
}

export interface ExamResult {
  input: [string, string];
  spoken: string[];
  expected: string;
  pass: boolean;
  delta: Delta;
}

/** Probe all four inputs against a truth table. */
export async function examAll(client: SessionClient, truthBits: [number, number, number, number]): Promise<ExamResult[]> {
  const results: ExamResult[] = [];
  for (let i = 0; i < INPUTS.length; i++) {
    const input = INPUTS[i]!;
    const expected = `s${truthBits[i]}`;
    const { spoken, delta } = await probe(client, input);
    results.push({ input, spoken, expected, pass: spoken[0] === expected, delta });
  }
  return results;
}
