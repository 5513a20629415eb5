/**
 * View state: a pure projection of the last server responses, and a
 * history store whose undo/redo are exact inverses. No math happens
 * here; panels carry the raw payloads in canonical text form.
 */

import { Json, canonicalText } from "./canonical.js";

export interface TimelineEntry {
  action: string;
  arc: string | null;
}

export interface ViewState {
  sessionId: string | null;
  initialSurfaceText: string | null;
  surfaceText: string | null;
  reportText: string | null;
  qspText: string | null;
  ginzburgText: string | null;
  mutationText: string | null;
  verifyText: string | null;
  timeline: TimelineEntry[];
  returnedToStart: boolean;
}

export const initialState: ViewState = {
  sessionId: null,
  initialSurfaceText: null,
  surfaceText: null,
  reportText: null,
  qspText: null,
  ginzburgText: null,
  mutationText: null,
  verifyText: null,
  timeline: [],
  returnedToStart: false,
};

export type Action =
  | { kind: "session-created"; id: string; report: Json }
  | { kind: "state-loaded"; entry: TimelineEntry | null; payload: SessionPayload }
  | { kind: "mutation-computed"; vertex: string; payload: Json }
  | { kind: "verify-computed"; arc: string; payload: Json };

export interface SessionPayload {
  surface: Json;
  report: Json;
  qsp: Json;
  ginzburg: Json;
  [extra: string]: Json;
}

export function reduce(state: ViewState, action: Action): ViewState {
  switch (action.kind) {
    case "session-created":
      return {
        ...initialState,
        sessionId: action.id,
        reportText: canonicalText(action.report),
      };
    case "state-loaded": {
      const surfaceText = canonicalText(action.payload.surface);
      const timeline = action.entry
        ? [...state.timeline, action.entry]
        : state.timeline;
      const initialSurfaceText = state.initialSurfaceText ?? surfaceText;
      return {
        ...state,
        initialSurfaceText,
        surfaceText,
        reportText: canonicalText(action.payload.report),
        qspText: canonicalText(action.payload.qsp),
        ginzburgText: canonicalText(action.payload.ginzburg),
        timeline,
        returnedToStart: timeline.length > 0 && surfaceText === initialSurfaceText,
      };
    }
    case "mutation-computed":
      return {
        ...state,
        mutationText: canonicalText(action.payload),
        timeline: [...state.timeline, { action: "mutate", arc: action.vertex }],
      };
    case "verify-computed":
      return {
        ...state,
        verifyText: canonicalText(action.payload),
        timeline: [...state.timeline, { action: "verify", arc: action.arc }],
      };
  }
}

/** Snapshot-based history: undo/redo are exact inverses by construction. */
export class HistoryStore {
  past: ViewState[] = [];
  pastActions: Action[] = [];
  future: ViewState[] = [];
  futureActions: Action[] = [];
  present: ViewState = initialState;

  apply(action: Action): ViewState {
    this.past.push(this.present);
    this.pastActions.push(action);
    this.future = [];
    this.futureActions = [];
    this.present = reduce(this.present, action);
    return this.present;
  }

  canUndo(): boolean {
    return this.past.length > 0;
  }

  /** The action that produced the present state (what undo reverts). */
  undoTarget(): Action | null {
    return this.pastActions[this.pastActions.length - 1] ?? null;
  }

  undo(): ViewState {
    const previous = this.past.pop();
    const action = this.pastActions.pop();
    if (previous !== undefined && action !== undefined) {
      this.future.push(this.present);
      this.futureActions.push(action);
      this.present = previous;
    }
    return this.present;
  }

  redo(): ViewState {
    const next = this.future.pop();
    const action = this.futureActions.pop();
    if (next !== undefined && action !== undefined) {
      this.past.push(this.present);
      this.pastActions.push(action);
      this.present = next;
    }
    return this.present;
  }
}
