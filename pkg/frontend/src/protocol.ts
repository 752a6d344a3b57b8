/**
 * Wire types for the emsim session protocol: newline-delimited JSON
 * frames over TCP. Requests carry a cmd and an optional id; the server
 * echoes the id on the matching reply. Replies are snapshot, delta, or
 * error events. Every schema here mirrors the server's serialization
 * exactly; the console renders these values and computes none of them.
 */

import { z } from "zod";

// ------------------------------------------------------------ requests

export type Request =
  | { cmd: "load_script"; text: string; seed?: number }
  | { cmd: "cycle"; fields: Record<string, string> }
  | { cmd: "set"; name: string; value: string }
  | { cmd: "step"; line: string }
  | { cmd: "reset" }
  | { cmd: "snapshot" };

// ------------------------------------------------------------- replies

export const UnitStateSchema = z.object({
  m: z.number().int(),
  p: z.number().int(),
  wx: z.array(z.number()),
  a: z.number(),
  tau: z.number(),
  c: z.number(),
  capacity: z.number().int(),
  wptr: z.number().int(),
  e: z.array(z.number()),
  rows: z.array(z.object({ gx: z.array(z.string()), gy: z.array(z.string()) })),
});
export type UnitState = z.infer<typeof UnitStateSchema>;

export const WorldStateSchema = z.object({
  screen: z.boolean(),
  addr: z.array(z.string()),
  mem: z.array(z.string()),
});
export type WorldState = z.infer<typeof WorldStateSchema>;

export const TogglesSchema = z.object({
  ns_sel: z.number().int(),
  nm_sel: z.number().int().nullable(),
  feedback: z.number().int().nullable(),
  refresh: z.number().int().nullable(),
  wen_as: z.number().int(),
  wen_am: z.number().int(),
});
export type Toggles = z.infer<typeof TogglesSchema>;

export const AssertRecordSchema = z.object({
  nu: z.number().int(),
  kind: z.string(),
  expected: z.string(),
  actual: z.string(),
  pass: z.boolean(),
});

const base = { id: z.union([z.number(), z.string()]).optional() };

export const EmptySnapshotSchema = z.object({
  ...base,
  event: z.literal("snapshot"),
  loaded: z.literal(false),
});

export const FullSnapshotSchema = z.object({
  ...base,
  event: z.literal("snapshot"),
  loaded: z.literal(true),
  kind: z.enum(["world", "sensory", "assembly"]),
  seed: z.number().int(),
  nu: z.number().int(),
  phase: z.string().nullable(),
  aud: z.string().nullable(),
  toggles: TogglesSchema,
  alphabets: z.record(z.array(z.string())),
  world: WorldStateSchema.nullable(),
  units: z.record(UnitStateSchema),
  eloss: z.number().nullable(),
  asserts: z.array(AssertRecordSchema),
});
export type FullSnapshot = z.infer<typeof FullSnapshotSchema>;

export const SnapshotSchema = z.union([FullSnapshotSchema, EmptySnapshotSchema]);
export type Snapshot = z.infer<typeof SnapshotSchema>;

// one trace record per unit evaluation, in evaluation order
export const WorldRecordSchema = z.object({
  nu: z.number().int(),
  unit: z.literal("world"),
  addr: z.string(),
  din: z.string(),
  dout: z.string(),
  mem: z.array(z.string()),
});
export type WorldRecord = z.infer<typeof WorldRecordSchema>;

export const UnitRecordSchema = z.object({
  nu: z.number().int(),
  unit: z.string(),
  x: z.array(z.string()),
  xy: z.array(z.string()),
  wen: z.number().int(),
  s: z.array(z.number()),
  se: z.array(z.number()),
  e: z.array(z.number()),
  iwin: z.number().int().nullable(),
  y: z.array(z.string()),
  wptr: z.number().int(),
  oracle: z.string().optional(),
});
export type UnitRecord = z.infer<typeof UnitRecordSchema>;

export const BrainRecordSchema = z.object({
  nu: z.number().int(),
  unit: z.literal("brain"),
  ns_sel: z.number().int(),
  nm_sel: z.number().int(),
  feedback: z.number().int(),
  wen_as: z.number().int(),
  wen_am: z.number().int(),
  motor: z.array(z.string()),
  feedback_reg: z.string(),
});
export type BrainRecord = z.infer<typeof BrainRecordSchema>;

export const TraceRecordSchema = z.union([
  WorldRecordSchema,
  BrainRecordSchema,
  UnitRecordSchema,
]);
export type TraceRecord = z.infer<typeof TraceRecordSchema>;

export const DeltaSchema = z.object({
  ...base,
  event: z.literal("delta"),
  nu: z.number().int(),
  records: z.array(TraceRecordSchema),
});
export type Delta = z.infer<typeof DeltaSchema>;

export const ErrorEventSchema = z.object({
  ...base,
  event: z.literal("error"),
  message: z.string(),
});
export type ErrorEvent = z.infer<typeof ErrorEventSchema>;

export type Reply = Snapshot | Delta | ErrorEvent;

export function parseReply(line: string): Reply {
  const data: unknown = JSON.parse(line);
  const probe = z.object({ event: z.string() }).parse(data);
  switch (probe.event) {
    case "snapshot":
      return SnapshotSchema.parse(data);
    case "delta":
      return DeltaSchema.parse(data);
    case "error":
      return ErrorEventSchema.parse(data);
    default:
      throw new Error(`unknown event ${JSON.stringify(probe.event)}`);
  }
}

export function isUnitRecord(r: TraceRecord): r is UnitRecord {
  return r.unit !== "world" && r.unit !== "brain";
}

export function isWorldRecord(r: TraceRecord): r is WorldRecord {
  return r.unit === "world";
}

export function isBrainRecord(r: TraceRecord): r is BrainRecord {
  return r.unit === "brain";
}
