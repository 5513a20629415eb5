/**
 * Golden parity: every panel payload of the recorded FIX-A3 session
 * (flip 1, undo, mutate 1, verify 1) must be byte-identical to the
 * corresponding CLI output. Goldens come straight from the CLI; see
 * generate_fixtures.py.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { canonicalText } from "../src/canonical.js";
import { Action, HistoryStore, SessionPayload } from "../src/state.js";

const here = dirname(fileURLToPath(import.meta.url));
const session = JSON.parse(
  readFileSync(join(here, "fixtures", "session.json"), "utf-8")
);

function golden(name: string): string {
  return readFileSync(join(here, "golden", name), "utf-8");
}

function record(store: HistoryStore): Record<string, string> {
  const flipped: Record<string, string> = {};
  for (const entry of session) {
    if (entry.action === "create") {
      store.apply({
        kind: "session-created",
        id: entry.response.id,
        report: entry.response.report,
      });
    } else if (entry.action === "state" || entry.action === "undo") {
      store.apply({
        kind: "state-loaded",
        entry: entry.action === "undo" ? { action: "undo", arc: null } : null,
        payload: entry.response as SessionPayload,
      });
    } else if (entry.action === "flip") {
      store.apply({
        kind: "state-loaded",
        entry: { action: "flip", arc: entry.arc },
        payload: entry.response as SessionPayload,
      });
      flipped.surface = canonicalText(entry.response.surface);
    } else if (entry.action === "mutate") {
      store.apply({
        kind: "mutation-computed",
        vertex: entry.vertex,
        payload: entry.response,
      });
    } else if (entry.action === "verify") {
      store.apply({ kind: "verify-computed", arc: entry.arc, payload: entry.response });
    }
  }
  return flipped;
}

describe("panel payloads vs CLI output", () => {
  const store = new HistoryStore();
  const flipped = record(store);

  it("qsp panel matches `dgonlab qsp FIX-A3.json`", () => {
    expect(store.present.qspText).toBe(golden("qsp.json"));
  });

  it("flipped surface matches `dgonlab flip FIX-A3.json --arc 1`", () => {
    expect(flipped.surface).toBe(golden("flip.json"));
  });

  it("mutation panel matches `dgonlab mutate FIX-A3.json --arc 1`", () => {
    expect(store.present.mutationText).toBe(golden("mutate.json"));
  });

  it("verify panel matches the CLI verify-commute report", () => {
    expect(store.present.verifyText).toBe(golden("verify.json"));
  });

  it("trace step count matches the CLI trace length", () => {
    const cli = JSON.parse(golden("verify.json"));
    const panel = JSON.parse(store.present.verifyText!);
    expect(panel.trace.length).toBe(cli.trace.length);
  });
});
