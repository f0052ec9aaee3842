/** Wires the API client to the view model.

One mutation at a time: while a request is running further submit, accept
and reject calls are ignored, and the page keeps its buttons disabled.  A
conflict answer from the server means our picture is stale, so the
controller refetches the session instead of guessing.
*/

import { ApiClient, ApiError } from "./api.js";
import type { KbSummaryDoc, PartitionDoc } from "./api.js";
import type { QueryForm } from "./form.js";
import { toRequestBody } from "./form.js";
import { sessionView } from "./state.js";
import type { SessionView } from "./state.js";

export interface InlineError {
  code: string;
  message: string;
  canRetry: boolean;
}

export type Listener = () => void;

const REFRESH_CODES = new Set(["session-busy", "session-not-active"]);

export class SessionController {
  readonly client: ApiClient;
  kb: KbSummaryDoc | null = null;
  partition: PartitionDoc | null = null;
  view: SessionView | null = null;
  busy = false;
  error: InlineError | null = null;

  private sessionId: string | null = null;
  private lastAction: (() => Promise<void>) | null = null;
  private readonly listeners: Listener[] = [];

  constructor(client: ApiClient) {
    this.client = client;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  async loadOverview(): Promise<void> {
    await this.run(async () => {
      this.kb = await this.client.kbSummary();
      this.partition = await this.client.partition();
    });
  }

  async submit(form: QueryForm): Promise<void> {
    await this.run(async () => {
      const opened = await this.client.openSession(toRequestBody(form));
      this.sessionId = opened.session_id;
      await this.refresh();
    });
  }

  async reject(): Promise<void> {
    const id = this.sessionId;
    if (id === null) return;
    await this.run(async () => {
      await this.client.reject(id);
      await this.refresh();
    });
  }

  async accept(): Promise<void> {
    const id = this.sessionId;
    if (id === null) return;
    await this.run(async () => {
      await this.client.accept(id);
      await this.refresh();
    });
  }

  async retry(): Promise<void> {
    const action = this.lastAction;
    if (action === null || this.busy) return;
    this.error = null;
    this.busy = true;
    this.notify();
    await this.perform(action);
  }

  private async refresh(): Promise<void> {
    if (this.sessionId === null) return;
    const doc = await this.client.sessionState(this.sessionId);
    this.view = sessionView(doc);
  }

  private async run(action: () => Promise<void>): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    this.error = null;
    this.lastAction = action;
    this.notify();
    await this.perform(action);
  }

  private async perform(action: () => Promise<void>): Promise<void> {
    try {
      await action();
    } catch (error) {
      if (error instanceof ApiError && REFRESH_CODES.has(error.code)) {
        // someone else advanced or closed the dialog: show the truth
        try {
          await this.refresh();
        } catch {
          this.error = { code: error.code, message: error.message, canRetry: true };
        }
      } else if (error instanceof ApiError) {
        this.error = { code: error.code, message: error.message, canRetry: true };
      } else {
        const message = error instanceof Error ? error.message : String(error);
        this.error = { code: "network", message, canRetry: true };
      }
    } finally {
      this.busy = false;
      this.notify();
    }
  }
}
