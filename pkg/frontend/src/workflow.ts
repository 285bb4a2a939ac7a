/**
 * Session workflow state machine.
 *
 * One active session per tab. Optimistic updates are disabled on purpose:
 * every edit waits for the service response and the response replaces the
 * local state wholesale, so what the analyst sees is always what the
 * backend computed. The UI layer subscribes and re-renders on change.
 */

import { ApiError, LandsigApi } from "./api.js";
import type { Bbox, ClassificationView, OverlapView, SessionView } from "./types.js";

export type Stage = "idle" | "active" | "accepted" | "discarded";

export interface WorkflowState {
  stage: Stage;
  session: SessionView | null;
  classification: ClassificationView | null;
  overlap: OverlapView | null;
  /** Why the overlap panel is disabled, when it is. */
  overlapDisabled: string | null;
  busy: boolean;
  lastError: ApiError | null;
}

type Listener = (state: WorkflowState) => void;

export class SessionWorkflow {
  private state: WorkflowState = {
    stage: "idle",
    session: null,
    classification: null,
    overlap: null,
    overlapDisabled: null,
    busy: false,
    lastError: null,
  };
  private listeners: Listener[] = [];

  constructor(
    private api: LandsigApi,
    private dataset: string,
  ) {}

  getState(): WorkflowState {
    return this.state;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(patch: Partial<WorkflowState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  /** Run one API call; on failure surface the error and keep state as-is. */
  private async guarded<T>(call: () => Promise<T>): Promise<T | null> {
    if (this.state.busy) return null; // edits are serialized, no queueing
    this.emit({ busy: true, lastError: null });
    try {
      return await call();
    } catch (err) {
      const apiError =
        err instanceof ApiError ? err : new ApiError("IoError", String(err));
      this.emit({ lastError: apiError });
      return null;
    } finally {
      this.emit({ busy: false });
    }
  }

  /** Draw gesture finished with no active session: open a new one. */
  async open(bbox: Bbox): Promise<void> {
    await this.guarded(async () => {
      const session = await this.api.openSession(this.dataset, bbox);
      this.emit({
        stage: "active",
        session,
        classification: null,
        overlap: null,
        overlapDisabled: null,
      });
    });
  }

  /** Draw/resize gesture with an active session: revise it. */
  async revise(bbox: Bbox): Promise<void> {
    const session = this.state.session;
    if (!session || this.state.stage !== "active") return;
    await this.guarded(async () => {
      const revised = await this.api.reviseSession(session.session_id, bbox);
      this.emit({ session: revised });
    });
  }

  /** Route a completed rectangle gesture to open or revise. */
  async placeRectangle(bbox: Bbox): Promise<void> {
    if (this.state.stage === "active") {
      await this.revise(bbox);
    } else if (this.state.stage === "idle") {
      await this.open(bbox);
    }
  }

  async accept(): Promise<void> {
    const session = this.state.session;
    if (!session || this.state.stage !== "active") return;
    await this.guarded(async () => {
      const finalized = await this.api.finalizeSession(session.session_id, "accept");
      const cluster = finalized.cluster;
      if (!cluster) throw new ApiError("IoError", "accept returned no cluster");
      this.emit({
        stage: "accepted",
        session: { ...session, status: "accepted" },
      });

      const classification = await this.api.classify(this.dataset, cluster.bbox);
      this.emit({ classification });

      try {
        const overlap = await this.api.overlap(
          this.dataset,
          cluster.bbox,
          classification.label,
        );
        this.emit({ overlap, overlapDisabled: null });
      } catch (err) {
        if (err instanceof ApiError && err.code === "NoZonesForLabel") {
          this.emit({ overlapDisabled: "no official zones of this type loaded" });
        } else if (err instanceof ApiError && err.code === "NotFound") {
          this.emit({ overlapDisabled: "no zone file loaded for this dataset" });
        } else {
          throw err;
        }
      }
    });
  }

  async discard(): Promise<void> {
    const session = this.state.session;
    if (!session || this.state.stage !== "active") return;
    await this.guarded(async () => {
      await this.api.finalizeSession(session.session_id, "discard");
      this.emit({ stage: "discarded", session: { ...session, status: "discarded" } });
    });
  }

  /** Forget the finished session and start over. */
  reset(): void {
    this.emit({
      stage: "idle",
      session: null,
      classification: null,
      overlap: null,
      overlapDisabled: null,
      lastError: null,
    });
  }
}
