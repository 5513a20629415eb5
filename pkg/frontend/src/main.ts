/** Wiring: every action round-trips to the server; the view is a pure
 * projection of the responses (no client-side math). */

import * as api from "./api.js";
import { Json } from "./canonical.js";
import { renderPotential, renderQuiver, renderSurface, renderTrace } from "./render.js";
import { HistoryStore, ViewState } from "./state.js";

const store = new HistoryStore();

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function setError(message: string | null): void {
  const box = el<HTMLDivElement>("error");
  box.textContent = message ?? "";
  box.style.display = message ? "block" : "none";
}

function parsePanel(text: string | null): any {
  return text ? JSON.parse(text) : null;
}

function paint(state: ViewState): void {
  el<HTMLButtonElement>("undo").disabled = !store.canUndo();
  const surface = parsePanel(state.surfaceText);
  const surfaceBox = el<HTMLDivElement>("surface-view");
  surfaceBox.replaceChildren();
  if (surface) {
    surfaceBox.appendChild(
      renderSurface(
        surface,
        (arc) => doFlip(arc),
        () => setError("boundary edges cannot be flipped")
      )
    );
  }
  const qsp = parsePanel(state.qspText);
  const quiverBox = el<HTMLDivElement>("quiver-view");
  quiverBox.replaceChildren();
  if (qsp) {
    quiverBox.appendChild(renderQuiver(qsp));
    quiverBox.appendChild(renderPotential(qsp));
    const picker = el<HTMLSelectElement>("vertex");
    picker.replaceChildren();
    for (const v of qsp.vertices as string[]) {
      const option = document.createElement("option");
      option.value = v;
      option.textContent = v;
      picker.appendChild(option);
    }
  }
  el<HTMLPreElement>("report-panel").textContent = state.reportText ?? "";
  el<HTMLPreElement>("qsp-panel").textContent = state.qspText ?? "";
  el<HTMLPreElement>("mutation-panel").textContent = state.mutationText ?? "";
  const verifyBox = el<HTMLDivElement>("verify-view");
  verifyBox.replaceChildren();
  const verify = parsePanel(state.verifyText);
  if (verify) verifyBox.appendChild(renderTrace(verify));
  const timeline = el<HTMLOListElement>("timeline");
  timeline.replaceChildren();
  state.timeline.forEach((entry) => {
    const li = document.createElement("li");
    li.textContent = entry.arc ? `${entry.action} ${entry.arc}` : entry.action;
    timeline.appendChild(li);
  });
  if (state.returnedToStart) {
    const marker = document.createElement("li");
    marker.textContent = "↺ returned to start";
    marker.className = "return-marker";
    timeline.appendChild(marker);
  }
}

async function guard<T>(work: () => Promise<T>): Promise<T | undefined> {
  try {
    setError(null);
    return await work();
  } catch (err) {
    if (err instanceof api.ApiError) {
      const body = err.body as any;
      setError(body?.detail?.message ?? body?.message ?? `error ${err.status}`);
    } else {
      setError(String(err));
    }
    return undefined;
  }
}

async function doLoad(): Promise<void> {
  const text = el<HTMLTextAreaElement>("surface-input").value;
  await guard(async () => {
    const surface = JSON.parse(text) as Json;
    const created = await api.createSession(surface);
    store.apply({ kind: "session-created", id: created.id, report: created.report });
    const payload = await api.getState(created.id);
    paint(store.apply({ kind: "state-loaded", entry: null, payload }));
  });
}

async function doFlip(arc: string): Promise<void> {
  const id = store.present.sessionId;
  if (!id) return;
  await guard(async () => {
    const payload = await api.flipArc(id, arc);
    paint(store.apply({ kind: "state-loaded", entry: { action: "flip", arc }, payload }));
  });
}

async function doUndo(): Promise<void> {
  const id = store.present.sessionId;
  if (!id || !store.canUndo()) return;
  const target = store.undoTarget();
  await guard(async () => {
    // only flips changed the server-side surface; compute panels did not
    if (target?.kind === "state-loaded" && target.entry?.action === "flip") {
      await api.undo(id);
    }
    paint(store.undo());
  });
}

async function doMutate(): Promise<void> {
  const id = store.present.sessionId;
  if (!id) return;
  const vertex = el<HTMLSelectElement>("vertex").value;
  const mode = el<HTMLSelectElement>("mutate-mode").value as "surface" | "oppermann";
  await guard(async () => {
    const payload = await api.mutate(id, vertex, mode);
    paint(store.apply({ kind: "mutation-computed", vertex, payload }));
  });
}

async function doVerify(): Promise<void> {
  const id = store.present.sessionId;
  if (!id) return;
  const arc = el<HTMLSelectElement>("vertex").value;
  const mode = el<HTMLSelectElement>("verify-mode").value as
    | "strict"
    | "sign-relaxed"
    | "support";
  await guard(async () => {
    const payload = await api.verify(id, arc, mode);
    paint(store.apply({ kind: "verify-computed", arc, payload }));
  });
}

export function boot(): void {
  el<HTMLButtonElement>("load").addEventListener("click", doLoad);
  el<HTMLButtonElement>("undo").addEventListener("click", doUndo);
  el<HTMLButtonElement>("mutate").addEventListener("click", doMutate);
  el<HTMLButtonElement>("verify").addEventListener("click", doVerify);
  paint(store.present);
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", boot);
}
