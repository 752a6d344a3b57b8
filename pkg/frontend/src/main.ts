/**
 * Interactive teaching console. Connects to a running session server
 * (emsim serve) and drives one session by hand: paint screen cells,
 * call auditory names, dictate outputs, flip the muxes, and watch the
 * excitation bars and the long-term memory table move. All displayed
 * state comes from server frames.
 *
 * Usage: node dist/main.js [--host 127.0.0.1] [--port 7340]
 */

import * as fs from "node:fs";
import * as readline from "node:readline";

import { SessionClient } from "./client.js";
import {
  AND_BITS,
  K2_SESSION,
  XOR_BITS,
  cycle,
  examAll,
  loadK2,
  paintCell,
  pretune,
  probe,
  resetSession,
  setSignal,
  snapshot as fetchSnapshot,
  spokenOf,
  tableNames,
  teachAll,
} from "./flow.js";
import { Delta, Snapshot } from "./protocol.js";
import { buildModel, contextOf, renderModel } from "./view.js";

const HELP = `commands
  demo                 load the k=2 session, teach all 8 productions,
                       pre-tune AND, exam, then re-tune XOR and exam
  load <path>          load a script file into the session
  k2                   load the empty k=2 mental-set session
  cell <i> <tok>       paint screen cell i (one machine cycle)
  say <name> [out]     cycle with aud=name, optionally dictating y1=out
  cycle                one machine cycle with no experimenter input
  probe <b1> <b2>      paint both cells and report the utterance
  tune <n1> <n2> ...   reset excitations, then call out names
  ns|nm|was|wam <0|1>  muxes and write enables
  feedback <on|off>    speech feedback wire
  aud <tok>            sticky auditory input (_ clears)
  go [ms]              free-run: one cycle every ms (default 400)
  stop                 stop free-running
  reset                clear excitations and registers
  snap                 re-render from a fresh snapshot
  record <path>        append all wire frames to a transcript file
  quit`;

interface UiState {
  snapshot: Snapshot | null;
  lastDelta: Delta | null;
  banner: string | null;
  log: string[];
}

function parseArgs(argv: string[]): { host: string; port: number } {
  let host = "127.0.0.1";
  let port = 7340;
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--host" && argv[i + 1]) host = argv[++i]!;
    else if (argv[i] === "--port" && argv[i + 1]) port = Number(argv[++i]);
  }
  if (!Number.isInteger(port) || port <= 0) {
    console.error("usage: main.js [--host H] [--port P]");
    process.exit(2);
  }
  return { host, port };
}

function render(ui: UiState): void {
  console.clear();
  const snap = ui.snapshot;
  const ctx = ui.lastDelta && snap?.loaded
    ? contextOf(ui.lastDelta.records, snap.world)
    : undefined;
  const model = snap ? buildModel(snap, ctx) : null;
  console.log(renderModel(model, ui.banner));
  if (ui.log.length) {
    console.log("\n  log");
    for (const line of ui.log.slice(-6)) console.log(`    ${line}`);
  }
  console.log("\ntype 'help' for commands");
}

async function main(): Promise<number> {
  const { host, port } = parseArgs(process.argv.slice(2));
  let client: SessionClient;
  try {
    client = await SessionClient.connect(host, port);
  } catch (err) {
    console.error(`cannot connect to ${host}:${port}: ${(err as Error).message}`);
    console.error("start the server first: emsim serve --port " + port);
    return 1;
  }

  const ui: UiState = { snapshot: null, lastDelta: null, banner: null, log: [] };
  let goTimer: NodeJS.Timeout | null = null;
  const recorder: { stream: fs.WriteStream | null } = { stream: null };

  client.onFrame((dir, line) => {
    recorder.stream?.write(`${dir} ${line}\n`);
  });

  const refresh = async () => {
    ui.snapshot = await fetchSnapshot(client);
  };

  const say = (line: string) => ui.log.push(line);

  const runDemo = async () => {
    say("loading k=2 session");
    ui.snapshot = await loadK2(client);
    render(ui);
    say("teaching 8 productions by dictation");
    const taught = await teachAll(client);
    ui.lastDelta = taught[taught.length - 1] ?? null;
    await refresh();
    render(ui);
    for (const [label, bits] of [["AND", AND_BITS], ["XOR", XOR_BITS]] as const) {
      say(`pre-tuning ${label}: ${tableNames(bits).join(" ")}`);
      const tuned = await pretune(client, tableNames(bits));
      ui.lastDelta = tuned[tuned.length - 1] ?? null;
      await refresh();
      render(ui);
      const results = await examAll(client, bits);
      for (const r of results) {
        say(`${label}(${r.input.join(",")}) -> ${r.spoken.join(" ")} (${r.pass ? "ok" : "MISS"})`);
      }
      ui.lastDelta = results[results.length - 1]?.delta ?? null;
      await refresh();
      render(ui);
    }
  };

  const dispatch = async (input: string): Promise<boolean> => {
    const parts = input.trim().split(/\s+/).filter(Boolean);
    if (!parts.length) return true;
    const [op, ...args] = parts;
    switch (op) {
      case "quit":
      case "exit":
        return false;
      case "help":
        ui.banner = null;
        render(ui);
        console.log(HELP);
        return true;
      case "demo":
        await runDemo();
        return true;
      case "k2":
        ui.snapshot = await loadK2(client);
        ui.lastDelta = null;
        break;
      case "load": {
        if (!args[0]) throw new Error("load <path>");
        const text = fs.readFileSync(args[0], "utf8");
        const reply = await client.request({ cmd: "load_script", text });
        if (reply.event === "error") throw new Error(reply.message);
        ui.snapshot = reply as Snapshot;
        ui.lastDelta = null;
        break;
      }
      case "cell": {
        if (args.length < 2) throw new Error("cell <i> <tok>");
        ui.lastDelta = await paintCell(client, Number(args[0]), args[1]!);
        await refresh();
        break;
      }
      case "say": {
        if (!args[0]) throw new Error("say <name> [out]");
        const fields: Record<string, string> = { aud: args[0] };
        if (args[1]) fields["y1"] = args[1];
        ui.lastDelta = await cycle(client, fields);
        say(`said ${args[0]}, robot spoke ${spokenOf(ui.lastDelta).join(" ")}`);
        await refresh();
        break;
      }
      case "cycle": {
        ui.lastDelta = await cycle(client, {});
        await refresh();
        break;
      }
      case "probe": {
        if (args.length < 2) throw new Error("probe <b1> <b2>");
        const { spoken, delta } = await probe(client, [args[0]!, args[1]!]);
        ui.lastDelta = delta;
        say(`probe ${args[0]} ${args[1]} -> ${spoken.join(" ")}`);
        await refresh();
        break;
      }
      case "tune": {
        if (!args.length) throw new Error("tune <name> ...");
        const deltas = await pretune(client, args);
        ui.lastDelta = deltas[deltas.length - 1] ?? null;
        say(`pre-tuned ${args.join(" ")}`);
        await refresh();
        break;
      }
      case "ns":
      case "nm": {
        await setSignal(client, op === "ns" ? "ns_sel" : "nm_sel", args[0] ?? "1");
        await refresh();
        break;
      }
      case "was":
      case "wam": {
        await setSignal(client, op === "was" ? "wen_as" : "wen_am", args[0] ?? "1");
        await refresh();
        break;
      }
      case "feedback":
      case "aud": {
        await setSignal(client, op, args[0] ?? "_");
        await refresh();
        break;
      }
      case "go": {
        const ms = args[0] ? Number(args[0]) : 400;
        goTimer ??= setInterval(() => {
          void dispatch("cycle").then(() => render(ui)).catch(() => undefined);
        }, ms);
        say(`free-running every ${ms}ms (stop with 'stop')`);
        break;
      }
      case "stop": {
        if (goTimer) clearInterval(goTimer);
        goTimer = null;
        say("stopped");
        break;
      }
      case "reset": {
        ui.snapshot = await resetSession(client);
        ui.lastDelta = null;
        break;
      }
      case "snap": {
        await refresh();
        ui.lastDelta = null;
        break;
      }
      case "record": {
        recorder.stream?.end();
        recorder.stream = args[0] ? fs.createWriteStream(args[0], { flags: "a" }) : null;
        say(args[0] ? `recording frames to ${args[0]}` : "recording off");
        break;
      }
      case "script": {
        // escape hatch: send one raw script line
        const line = args.join(" ");
        const reply = await client.request({ cmd: "step", line });
        if (reply.event === "error") throw new Error(reply.message);
        if (reply.event === "delta") ui.lastDelta = reply;
        await refresh();
        break;
      }
      default:
        throw new Error(`unknown command ${op} (try 'help')`);
    }
    render(ui);
    return true;
  };

  const rl = readline.createInterface({ input: process.stdin, output: process.stdout });
  render(ui);
  console.log(HELP);

  // buffer lines that arrive while a command is still round-tripping
  const queued: string[] = [];
  let waiter: ((line: string | null) => void) | null = null;
  let eof = false;
  rl.on("line", (line) => {
    if (waiter) {
      const w = waiter;
      waiter = null;
      w(line);
    } else queued.push(line);
  });
  rl.on("close", () => {
    eof = true;
    if (waiter) {
      const w = waiter;
      waiter = null;
      w(null);
    }
  });
  const prompt = (): Promise<string | null> => {
    if (queued.length) return Promise.resolve(queued.shift()!);
    if (eof) return Promise.resolve(null);
    process.stdout.write("> ");
    return new Promise((res) => {
      waiter = res;
    });
  };

  for (;;) {
    const line = await prompt();
    if (line === null) break;
    ui.banner = null;
    try {
      if (!(await dispatch(line))) break;
    } catch (err) {
      ui.banner = (err as Error).message;
      render(ui);
    }
  }
  if (goTimer) clearInterval(goTimer);
  recorder.stream?.end();
  rl.close();
  client.close();
  return 0;
}

main().then(
  (code) => process.exit(code),
  (err) => {
    console.error(err instanceof Error ? err.message : String(err));
    process.exit(1);
  },
);
