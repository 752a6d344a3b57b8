/**
 * End-to-end: spawn the real session server, drive the complete k=2
 * mental-set flow (teach by dictation, pre-tune, exam, re-tune, exam),
 * and check that everything the console would display equals the
 * server's own trace records. Set RECORD_TRANSCRIPT=1 to refresh the
 * recorded transcript fixture from this run.
 */

import { ChildProcess, spawn } from "node:child_process";
import * as fs from "node:fs";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { SessionClient } from "../src/client.js";
import {
  AND_BITS,
  PRODUCTIONS,
  XOR_BITS,
  cycle,
  examAll,
  loadK2,
  pretune,
  snapshot,
  tableNames,
  teachAll,
  tracedE,
} from "../src/flow.js";
import { buildModel, contextOf } from "../src/view.js";

const HERE = path.dirname(fileURLToPath(import.meta.url));
const REPO = path.resolve(HERE, "..", "..");
const FIXTURE = path.join(HERE, "..", "fixtures", "k2_transcript.ndjson");

let server: ChildProcess;
let port = 0;

beforeAll(async () => {
  server = spawn("python3", ["-m", "emsim.cli", "serve", "--port", "0"], {
    cwd: REPO,
    stdio: ["ignore", "pipe", "pipe"],
  });
  port = await new Promise<number>((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error("server never announced a port")), 15000);
    let out = "";
    server.stdout!.on("data", (chunk: Buffer) => {
      out += chunk.toString();
      const m = out.match(/listening on [^:]+:(\d+)/);
      if (m) {
        clearTimeout(timer);
        resolve(Number(m[1]));
      }
    });
    server.on("exit", (code) => reject(new Error(`server exited early (${code})`)));
  });
}, 20000);

afterAll(() => {
  server?.kill();
});

describe("k=2 mental set over a live server", () => {
  it("teaches, pre-tunes, and exams with display equal to the trace", async () => {
    const client = await SessionClient.connect("127.0.0.1", port);
    const frames: string[] = [];
    client.onFrame((dir, line) => frames.push(`${dir} ${line}`));

    const loaded = await loadK2(client);
    expect(loaded.kind).toBe("assembly");
    expect(loaded.eloss).toBe(2);
    expect(loaded.units["AM"]!.rows).toHaveLength(0);

    // --- teaching: one production per write cycle, dictated ---
    await teachAll(client);
    const taughtSnap = await snapshot(client);
    const am = taughtSnap.units["AM"]!;
    expect(am.rows).toHaveLength(8);
    PRODUCTIONS.forEach((prod, i) => {
      // dictation records name, both screen bits, and the spoken output
      expect(am.rows[i]!.gx).toEqual([prod.name, prod.bits[0], prod.bits[1], prod.speech]);
      expect(am.rows[i]!.gy).toEqual([prod.speech]);
    });

    for (const [bits, answers] of [
      [AND_BITS, ["s0", "s0", "s0", "s1"]],
      [XOR_BITS, ["s0", "s1", "s1", "s0"]],
    ] as const) {
      // --- pre-tuning: excitations cleared, then names called out ---
      const tuneDeltas = await pretune(client, tableNames(bits));
      const tunedSnap = await snapshot(client);
      const tunedModel = buildModel(tunedSnap, contextOf(tuneDeltas.at(-1)!.records, tunedSnap.world))!;
      const bars = tunedModel.units.find((u) => u.name === "AM")!.bars;

      // displayed e values are exactly the server's, and exactly the trace's
      const traceE = tracedE(tuneDeltas.at(-1)!);
      bars.forEach((bar, i) => {
        expect(bar.e).toBe(tunedSnap.units["AM"]!.e[i]);
        expect(bar.e).toBe(traceE[i]);
      });

      // the four named locations sit above the loss line, the rest below
      const tunedLocs = tableNames(bits).map((n) => Number(n.slice(1)));
      bars.forEach((bar) => {
        expect(bar.tuned).toBe(tunedLocs.includes(bar.location));
      });

      // --- exam: all four inputs answered from memory ---
      const results = await examAll(client, bits);
      expect(results.map((r) => r.spoken[0])).toEqual(answers);
      expect(results.every((r) => r.pass)).toBe(true);

      // display after the last probe still mirrors the concurrent trace
      const finalSnap = await snapshot(client);
      const finalModel = buildModel(finalSnap, contextOf(results.at(-1)!.delta.records, finalSnap.world))!;
      const finalBars = finalModel.units.find((u) => u.name === "AM")!.bars;
      const finalTraceE = tracedE(results.at(-1)!.delta);
      finalBars.forEach((bar, i) => {
        expect(bar.e).toBe(finalTraceE[i]);
      });
      const cols = finalModel.units.find((u) => u.name === "AM")!.columns;
      cols.forEach((col, i) => {
        expect(col.gx).toEqual(finalSnap.units["AM"]!.rows[i]!.gx);
        expect(col.gy).toEqual(finalSnap.units["AM"]!.rows[i]!.gy);
      });
      // the eye marker tracks the scanned square of the last probe edit
      expect(finalModel.screen!.eye).toBe(1);
    }

    if (process.env["RECORD_TRANSCRIPT"]) {
      fs.mkdirSync(path.dirname(FIXTURE), { recursive: true });
      fs.writeFileSync(FIXTURE, frames.join("\n") + "\n");
    }
    client.close();
  }, 60000);

  it("keeps the session alive across errors and isolates connections", async () => {
    const client = await SessionClient.connect("127.0.0.1", port);
    await loadK2(client);
    const bad = await client.request({ cmd: "cycle", fields: { aud: "nope" } });
    expect(bad.event).toBe("error");
    const snap = await snapshot(client);
    expect(snap.loaded).toBe(true);
    expect(snap.nu).toBe(0);

    const other = await SessionClient.connect("127.0.0.1", port);
    const fresh = await other.request({ cmd: "snapshot" });
    expect(fresh.event).toBe("snapshot");
    expect((fresh as { loaded: boolean }).loaded).toBe(false);
    other.close();
    client.close();
  }, 30000);

  it("free-runs: empty cycles advance nu and decay excitation", async () => {
    const client = await SessionClient.connect("127.0.0.1", port);
    await loadK2(client);
    await teachAll(client);
    const before = await snapshot(client);
    const d1 = await cycle(client, {});
    const d2 = await cycle(client, {});
    expect(d2.nu).toBe(d1.nu + 1);
    const after = await snapshot(client);
    expect(after.nu).toBe(before.nu + 2);
    // taught rows keep decaying between the two snapshots
    const c = after.units["AM"]!.c;
    expect(after.units["AM"]!.e[0]).toBeCloseTo(before.units["AM"]!.e[0] * c * c, 12);
    client.close();
  }, 30000);
});
