import { ApiClient, ApiRequestError } from "./api.js";
import type { ActionRequest, Report, SessionState } from "./types.js";

/**
 * Interaction modes replacing the original middle-button menu cycling.
 * Each mode decides what terminal clicks mean; trained users get the
 * same gestures (two picks + build, thrice-left, left + n right).
 */
export type Mode = "stretch" | "omit" | "fermat" | "polygonal";

export interface Notice {
  id: number;
  text: string;
  tone: "info" | "error";
}

/**
 * Client-side session driver: buffers terminal picks per mode, posts one
 * action at a time (controls are disabled while a request is in flight)
 * and keeps the last server state as the single source of truth.
 */
export class WorkbenchController {
  mode: Mode = "stretch";
  state: SessionState | null = null;
  sessionId: string | null = null;
  lastReport: Report | null = null;
  notices: Notice[] = [];
  /** Picked terminal indices for the current gesture, in click order. */
  picks: number[] = [];
  busy = false;

  private noticeSeq = 0;
  private listeners: (() => void)[] = [];

  constructor(private readonly api: ApiClient) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const l of this.listeners) l();
  }

  private notify(text: string, tone: Notice["tone"] = "info"): void {
    this.notices.push({ id: this.noticeSeq++, text, tone });
    this.emit();
  }

  dismissNotice(id: number): void {
    this.notices = this.notices.filter((n) => n.id !== id);
    this.emit();
  }

  async start(terminals: [number, number][]): Promise<void> {
    const created = await this.api.createSession(terminals);
    this.sessionId = created.session_id;
    this.state = created.state;
    this.picks = [];
    this.emit();
  }

  async startFromFile(fileText: string): Promise<void> {
    const created = await this.api.createSessionFromFile(fileText);
    this.sessionId = created.session_id;
    this.state = created.state;
    this.picks = [];
    this.emit();
  }

  async refresh(): Promise<void> {
    if (!this.sessionId) return;
    const got = await this.api.getState(this.sessionId);
    this.state = got.state;
    this.emit();
  }

  setMode(mode: Mode): void {
    this.mode = mode;
    this.picks = [];
    this.emit();
  }

  /**
   * A terminal click. Stretch picks keep the last two (extra clicks
   * replace the earlier ones); a third fermat pick fires the join.
   */
  async clickTerminal(index: number): Promise<void> {
    if (this.busy || !this.state || this.state.phase === "done") return;
    switch (this.mode) {
      case "stretch":
        this.picks.push(index);
        if (this.picks.length > 2) this.picks = this.picks.slice(-2);
        this.emit();
        break;
      case "omit":
        await this.dispatch({ kind: "omit_points", indices: [index] });
        break;
      case "fermat":
        this.picks.push(index);
        this.emit();
        if (this.picks.length === 3) {
          const refs = this.picks as [number, number, number];
          this.picks = [];
          await this.dispatch({ kind: "fermat_join", refs });
        }
        break;
      case "polygonal":
        this.picks.push(index);
        this.emit();
        break;
    }
  }

  /** Build the stretch between the two picked hull vertices (ccw). */
  async buildStretch(): Promise<void> {
    if (this.picks.length !== 2) {
      this.notify("pick two hull vertices first", "error");
      return;
    }
    const [first, last] = this.picks;
    await this.dispatch({ kind: "full_stretch", first, last });
  }

  /** Commit the accumulated polygonal path. */
  async commitPolygonal(): Promise<void> {
    if (this.picks.length < 2) {
      this.notify("pick at least two terminals first", "error");
      return;
    }
    await this.dispatch({ kind: "polygonal_edge", refs: [...this.picks] });
  }

  async fullTreeAll(): Promise<void> {
    await this.dispatch({ kind: "full_tree_all" });
  }

  async undo(): Promise<void> {
    await this.dispatch({ kind: "undo" });
  }

  async finish(): Promise<void> {
    await this.dispatch({ kind: "finish" });
  }

  private async dispatch(action: ActionRequest): Promise<void> {
    if (!this.sessionId || this.busy) return;
    this.busy = true;
    this.emit();
    try {
      const res = await this.api.postAction(this.sessionId, action);
      this.state = res.state;
      this.lastReport = res.report;
      if (res.report.rejected) {
        // rejected stretches drop back into selection so the user
        // can pick another subgroup right away
        this.notify(`${res.report.action} rejected: ${res.report.rejected}`, "error");
      } else {
        this.picks = [];
        for (const message of res.report.messages) this.notify(message);
      }
    } catch (err) {
      if (err instanceof ApiRequestError) {
        this.notify(err.message, "error");
      } else {
        this.notify(String(err), "error");
      }
    } finally {
      this.busy = false;
      this.emit();
    }
  }
}
