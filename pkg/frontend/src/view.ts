/**
 * Pure view layer. A DisplayModel is assembled from the latest snapshot
 * plus per-cycle context (eye position, winner, spoken output) taken
 * from the latest delta records. Every number and token in the model is
 * copied verbatim from server frames; nothing is recomputed client-side.
 */

import {
  FullSnapshot,
  Snapshot,
  TraceRecord,
  UnitState,
  isBrainRecord,
  isUnitRecord,
  isWorldRecord,
} from "./protocol.js";

export interface EBar {
  location: number; // 1-based
  e: number; // exactly the server's value
  written: boolean;
  tuned: boolean; // e above the loss threshold
  winner: boolean;
}

export interface LtmColumn {
  location: number;
  gx: string[];
  gy: string[];
  winner: boolean;
}

export interface DisplayModel {
  nu: number;
  phase: string;
  kind: string;
  toggles: { label: string; value: string }[];
  screen: { cells: string[]; eye: number | null } | null; // eye is a cell index
  eloss: number | null;
  units: {
    name: string;
    emax: number;
    bars: EBar[];
    columns: LtmColumn[];
    inputSlots: number;
    outputSlots: number;
  }[];
  spoken: string[] | null;
  lastAssert: { expected: string; actual: string; pass: boolean } | null;
}

export interface CycleContext {
  eye: number | null;
  winners: Map<string, number>; // unit name -> 1-based winner location
  spoken: string[] | null;
}

/** Pull the per-cycle context out of one delta's records. */
export function contextOf(records: TraceRecord[], world: FullSnapshot["world"]): CycleContext {
  const ctx: CycleContext = { eye: null, winners: new Map(), spoken: null };
  for (const rec of records) {
    if (isWorldRecord(rec)) {
      if (world && rec.addr !== "_") {
        const idx = world.addr.indexOf(rec.addr);
        ctx.eye = idx >= 0 ? idx : null;
      }
    } else if (isBrainRecord(rec)) {
      ctx.spoken = rec.motor;
    } else if (isUnitRecord(rec)) {
      if (rec.iwin !== null) ctx.winners.set(rec.unit, rec.iwin);
      if (rec.unit === "AS" && ctx.spoken === null) ctx.spoken = rec.y;
    }
  }
  return ctx;
}

export function buildModel(snapshot: Snapshot, ctx?: CycleContext): DisplayModel | null {
  if (!snapshot.loaded) return null;
  const snap = snapshot;
  const toggles: { label: string; value: string }[] = [];
  const t = snap.toggles;
  toggles.push({ label: "NS.sel", value: String(t.ns_sel) });
  if (t.nm_sel !== null) toggles.push({ label: "NM.sel", value: String(t.nm_sel) });
  toggles.push({ label: "wen.AS", value: String(t.wen_as) });
  toggles.push({ label: "wen.AM", value: String(t.wen_am) });
  if (t.feedback !== null) toggles.push({ label: "feedback", value: t.feedback ? "ON" : "OFF" });
  if (t.refresh !== null) toggles.push({ label: "refresh", value: t.refresh ? "ON" : "OFF" });
  if (snap.aud !== null) toggles.push({ label: "aud", value: snap.aud });

  const screen = snap.world
    ? { cells: snap.world.mem, eye: ctx?.eye ?? null }
    : null;

  const units = Object.entries(snap.units).map(([name, unit]) => ({
    name,
    emax: unit.wx.reduce((a, b) => a + b, 0),
    bars: buildBars(unit, snap.eloss, ctx?.winners.get(name) ?? null),
    columns: buildColumns(unit, ctx?.winners.get(name) ?? null),
    inputSlots: unit.m,
    outputSlots: unit.p,
  }));

  const lastAssert = snap.asserts.length
    ? {
        expected: snap.asserts[snap.asserts.length - 1]!.expected,
        actual: snap.asserts[snap.asserts.length - 1]!.actual,
        pass: snap.asserts[snap.asserts.length - 1]!.pass,
      }
    : null;

  return {
    nu: snap.nu,
    phase: snap.phase ?? "manual",
    kind: snap.kind,
    toggles,
    screen,
    eloss: snap.eloss,
    units,
    spoken: ctx?.spoken ?? null,
    lastAssert,
  };
}

function buildBars(unit: UnitState, eloss: number | null, winner: number | null): EBar[] {
  return unit.e.map((e, i) => ({
    location: i + 1,
    e,
    written: i < unit.rows.length,
    tuned: eloss !== null && e > eloss,
    winner: winner === i + 1,
  }));
}

function buildColumns(unit: UnitState, winner: number | null): LtmColumn[] {
  return unit.rows.map((row, i) => ({
    location: i + 1,
    gx: row.gx,
    gy: row.gy,
    winner: winner === i + 1,
  }));
}

// ------------------------------------------------------------ rendering

const BAR_WIDTH = 30;

function barLine(bar: EBar, emax: number, eloss: number | null): string {
  const clamped = Math.max(0, Math.min(bar.e, emax));
  const filled = Math.round((clamped / emax) * BAR_WIDTH);
  let cells = "#".repeat(filled) + ".".repeat(BAR_WIDTH - filled);
  if (eloss !== null && eloss >= 0 && eloss <= emax) {
    const tick = Math.min(BAR_WIDTH - 1, Math.round((eloss / emax) * BAR_WIDTH));
    cells = cells.slice(0, tick) + "|" + cells.slice(tick + 1);
  }
  const mark = bar.winner ? ">" : " ";
  const tag = bar.written ? String(bar.location).padStart(3) : "  -";
  return `${mark}${tag} [${cells}] e=${bar.e}`;
}

export function renderScreen(screen: { cells: string[]; eye: number | null }): string {
  const squares = screen.cells.map((tok) => `[ ${tok === "_" ? " " : tok} ]`).join(" ");
  if (screen.eye === null) return `  screen  ${squares}`;
  const marker = "  ".repeat(0) + " ".repeat(10 + screen.eye * 6) + "^eye";
  return `  screen  ${squares}\n${marker}`;
}

export function renderLtm(columns: LtmColumn[], inputSlots: number, outputSlots: number): string {
  if (!columns.length) return "  LTM: empty";
  const width = Math.max(4, ...columns.flatMap((c) => [...c.gx, ...c.gy].map((s) => s.length)), 3);
  const pad = (s: string) => s.padStart(width);
  const head = "  loc   " + columns.map((c) => pad(c.winner ? `*${c.location}` : String(c.location))).join(" ");
  const lines = [head];
  for (let j = 0; j < inputSlots; j++) {
    lines.push(`  x${j + 1}    ` + columns.map((c) => pad(c.gx[j] ?? "")).join(" "));
  }
  lines.push("  " + "-".repeat(head.length - 2));
  for (let j = 0; j < outputSlots; j++) {
    lines.push(`  y${j + 1}    ` + columns.map((c) => pad(c.gy[j] ?? "")).join(" "));
  }
  return lines.join("\n");
}

export function renderModel(model: DisplayModel | null, banner?: string | null): string {
  const lines: string[] = [];
  if (banner) lines.push(`!! ${banner}`, "");
  if (!model) {
    lines.push("no session loaded (use: demo, or load <path>)");
    return lines.join("\n");
  }
  const toggles = model.toggles.map((t) => `${t.label}=${t.value}`).join("  ");
  lines.push(`nu=${model.nu}  phase=${model.phase}  kind=${model.kind}`);
  lines.push(`  ${toggles}`);
  if (model.screen) lines.push("", renderScreen(model.screen));
  if (model.spoken) lines.push("", `  spoken: ${model.spoken.join(" ")}`);
  for (const unit of model.units) {
    lines.push("", `  ${unit.name} excitation` + (model.eloss !== null ? ` (| marks loss line at ${model.eloss})` : ""));
    for (const bar of unit.bars) {
      if (bar.written || bar.e > 0) lines.push("  " + barLine(bar, unit.emax, model.eloss));
    }
    lines.push("", renderLtm(unit.columns, unit.inputSlots, unit.outputSlots));
  }
  if (model.lastAssert) {
    const a = model.lastAssert;
    lines.push("", `  last assert: expected ${a.expected}, got ${a.actual} -> ${a.pass ? "ok" : "FAIL"}`);
  }
  return lines.join("\n");
}
