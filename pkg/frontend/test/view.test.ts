/**
 * Smoke test over the recorded protocol transcript: every server frame
 * from a real k=2 session must parse against the wire schemas, the
 * snapshot state shown to the user must equal the concurrent trace
 * records, and the renderers must show exactly those values.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { PRODUCTIONS } from "../src/flow.js";
import {
  Delta,
  FullSnapshot,
  Reply,
  TraceRecord,
  isUnitRecord,
  parseReply,
} from "../src/protocol.js";
import { buildModel, contextOf, renderLtm, renderModel, renderScreen } from "../src/view.js";

const HERE = path.dirname(fileURLToPath(import.meta.url));
const FIXTURE = path.join(HERE, "..", "fixtures", "k2_transcript.ndjson");

interface Frame {
  dir: "send" | "recv";
  payload: Record<string, unknown>;
  reply?: Reply;
}

function loadTranscript(): Frame[] {
  const lines = fs.readFileSync(FIXTURE, "utf8").trim().split("\n");
  return lines.map((line) => {
    const space = line.indexOf(" ");
    const dir = line.slice(0, space) as Frame["dir"];
    const payload = JSON.parse(line.slice(space + 1)) as Record<string, unknown>;
    const frame: Frame = { dir, payload };
    if (dir === "recv") frame.reply = parseReply(line.slice(space + 1));
    return frame;
  });
}

function amTraceE(delta: Delta): number[] | null {
  let e: number[] | null = null;
  for (const rec of delta.records as TraceRecord[]) {
    if (isUnitRecord(rec) && rec.unit === "AM") e = rec.e;
  }
  return e;
}

describe("recorded k=2 transcript", () => {
  const frames = loadTranscript();

  it("has a full conversation and every reply parses", () => {
    expect(frames.length).toBeGreaterThan(100);
    const sends = frames.filter((f) => f.dir === "send");
    const recvs = frames.filter((f) => f.dir === "recv");
    expect(sends.length).toBe(recvs.length);
    for (const f of recvs) expect(f.reply).toBeDefined();
  });

  it("echoes every request id on the matching reply, in order", () => {
    const sends = frames.filter((f) => f.dir === "send");
    const recvs = frames.filter((f) => f.dir === "recv");
    sends.forEach((send, i) => {
      expect(recvs[i]!.reply!.id).toBe(send.payload["id"]);
    });
  });

  it("cycle counter never goes backwards without a reload", () => {
    let nu = -1;
    for (const f of frames) {
      if (f.dir === "send" && (f.payload["cmd"] === "load_script" || f.payload["cmd"] === "reset")) {
        // nu survives reset, but a fresh load starts over
        if (f.payload["cmd"] === "load_script") nu = -1;
        continue;
      }
      const reply = f.reply;
      if (!reply) continue;
      if (reply.event === "delta") {
        expect(reply.nu).toBeGreaterThan(nu - 1);
        nu = reply.nu;
      } else if (reply.event === "snapshot" && reply.loaded) {
        expect(reply.nu).toBeGreaterThanOrEqual(nu);
        nu = reply.nu;
      }
    }
  });

  it("snapshots shown to the user equal the concurrent trace records", () => {
    let lastE: number[] | null = null;
    let checked = 0;
    for (let i = 0; i < frames.length; i++) {
      const f = frames[i]!;
      if (f.dir === "send") {
        const cmd = f.payload["cmd"];
        if (cmd === "load_script" || cmd === "reset") lastE = null;
        continue;
      }
      const reply = f.reply!;
      if (reply.event === "delta") {
        lastE = amTraceE(reply) ?? lastE;
      } else if (reply.event === "snapshot" && reply.loaded && lastE) {
        expect(reply.units["AM"]!.e).toEqual(lastE);
        checked++;
      }
    }
    expect(checked).toBeGreaterThanOrEqual(4); // after tuning and after each exam
  });

  it("replays the taught memory and both exams from the recorded frames", () => {
    const finalSnap = [...frames]
      .reverse()
      .find((f) => f.reply?.event === "snapshot" && f.reply.loaded)!.reply as FullSnapshot;
    expect(finalSnap.units["AM"]!.rows).toHaveLength(8);
    PRODUCTIONS.forEach((prod, i) => {
      expect(finalSnap.units["AM"]!.rows[i]!.gx).toEqual([
        prod.name,
        prod.bits[0],
        prod.bits[1],
        prod.speech,
      ]);
    });

    // the eight answer cycles are the second screen edit of each probe
    const answers: string[] = [];
    for (let i = 0; i < frames.length; i++) {
      const f = frames[i]!;
      if (f.dir !== "send" || f.payload["cmd"] !== "cycle") continue;
      const fields = f.payload["fields"] as Record<string, string>;
      if (fields["addr"] !== "2" || "aud" in fields || "y1" in fields) continue;
      const reply = frames
        .slice(i + 1)
        .find((g) => g.dir === "recv" && g.reply?.id === f.payload["id"])!.reply as Delta;
      for (const rec of reply.records) {
        if (rec.unit === "brain") answers.push((rec as { motor: string[] }).motor[0]!);
      }
    }
    expect(answers.slice(-8)).toEqual(["s0", "s0", "s0", "s1", "s0", "s1", "s1", "s0"]);
  });

  it("renders the final state with the server's own numbers", () => {
    const lastDeltaFrame = [...frames].reverse().find((f) => f.reply?.event === "delta")!;
    const finalSnap = [...frames]
      .reverse()
      .find((f) => f.reply?.event === "snapshot" && f.reply.loaded)!.reply as FullSnapshot;
    const ctx = contextOf((lastDeltaFrame.reply as Delta).records, finalSnap.world);
    const model = buildModel(finalSnap, ctx)!;

    const amUnit = model.units.find((u) => u.name === "AM")!;
    amUnit.bars.forEach((bar, i) => {
      expect(bar.e).toBe(finalSnap.units["AM"]!.e[i]);
    });
    amUnit.columns.forEach((col, i) => {
      expect(col.gx).toEqual(finalSnap.units["AM"]!.rows[i]!.gx);
      expect(col.gy).toEqual(finalSnap.units["AM"]!.rows[i]!.gy);
    });

    const text = renderModel(model);
    for (const bar of amUnit.bars) {
      expect(text).toContain(`e=${bar.e}`); // numbers displayed verbatim
    }
    expect(text).toContain("loss line at 2");
    expect(text).toContain("spoken: s0"); // XOR(1,1)

    const screenText = renderScreen(model.screen!);
    expect(screenText).toContain("[ 1 ] [ 1 ]");
    expect(screenText).toContain("^eye");

    const ltmText = renderLtm(amUnit.columns, amUnit.inputSlots, amUnit.outputSlots);
    expect(ltmText).toContain("a7");
    const lines = ltmText.split("\n");
    expect(lines.filter((l) => l.startsWith("  x"))).toHaveLength(4);
    expect(lines.filter((l) => l.startsWith("  y"))).toHaveLength(1);
  });
});
