/**
 * Application controller: owns the model, talks to the API, re-renders
 * after every confirmed server response.
 *
 * Every gesture funnels through `submitText`, so a click produces exactly
 * the same command text (and therefore the same server-side script log)
 * as typing it. At most one mutating request is in flight; further input
 * is refused until the confirmed state arrives.
 */

import { ApiClient, HttpError, StaleRevisionError } from "./api.js";
import { AppModel, Handlers, emptyModel } from "./model.js";
import { render } from "./render.js";
import { MalformedPayloadError } from "./types.js";

export class App {
  readonly model: AppModel = emptyModel();
  private history: string[] = [];
  private historyIndex = 0;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {}

  readonly handlers: Handlers = {
    onSubmit: (text) => void this.submitText(text),
    onHistory: (direction) => this.navigateHistory(direction),
    onPoClick: (name) => void this.openPo(name),
    onContextClick: (name) => void this.submitText(`chctx(${name})`),
    onLexiconClick: (name) => void this.submitText(`chlex(${name})`),
    onAdd: () => void this.submitText("ah"),
    onRemove: () => void this.submitText("dh"),
    onMkctxSome: () => void this.submitText("mkctx(Some)"),
    onMkctxAll: () => void this.submitText("mkctx(All)"),
    onMklex: () => void this.submitText("mklex"),
    onNext: () => void this.submitText("ne"),
    onPrev: () => void this.submitText("pv"),
    onRunProvers: () => void this.submitText("pr"),
    onReload: () => void this.reload(),
  };

  async init(): Promise<void> {
    try {
      this.model.pos = await this.api.listPos();
      this.model.provers = await this.api.listProvers();
    } catch (error) {
      this.model.renderError = `cannot reach the workbench server: ${String(error)}`;
    }
    this.rerender();
  }

  rerender(): void {
    render(this.root, this.model, this.handlers);
  }

  private say(kind: string, text: string): void {
    this.model.clientMessages.push({ kind, text });
  }

  /** Submit one line of command text, exactly as the REPL would see it. */
  async submitText(rawText: string): Promise<void> {
    const text = rawText.trim();
    if (!text) {
      return;
    }
    if (this.model.busy) {
      this.say("error", "a command is already running");
      this.rerender();
      return;
    }
    if (this.history[this.history.length - 1] !== text) {
      this.history.push(text);
    }
    this.historyIndex = this.history.length;

    if (!this.model.view) {
      if (text === "ne") {
        await this.openPo(this.model.pos[0]?.name);
      } else {
        this.say("error", "no proof obligation open (type ne)");
        this.rerender();
      }
      return;
    }

    this.model.busy = true;
    this.rerender();
    try {
      const view = await this.api.command(
        this.model.view.session_id,
        text,
        this.model.view.revision,
      );
      this.model.view = view;
      this.model.renderError = null;
      this.model.pos = await this.api.listPos();
    } catch (error) {
      this.absorb(error);
    } finally {
      this.model.busy = false;
      this.rerender();
    }
  }

  async openPo(name: string | undefined): Promise<void> {
    if (!name) {
      this.say("error", "no proof obligations loaded");
      this.rerender();
      return;
    }
    if (this.model.busy) {
      return;
    }
    this.model.busy = true;
    this.rerender();
    try {
      this.model.view = await this.api.createSession(name);
      this.model.staleConflict = false;
      this.model.renderError = null;
    } catch (error) {
      this.absorb(error);
    } finally {
      this.model.busy = false;
      this.rerender();
    }
  }

  /** Fetch the confirmed latest state after a stale-revision conflict. */
  async reload(): Promise<void> {
    if (!this.model.view) {
      return;
    }
    try {
      this.model.view = await this.api.getSession(this.model.view.session_id);
      this.model.staleConflict = false;
      this.model.pos = await this.api.listPos();
    } catch (error) {
      this.absorb(error);
    }
    this.rerender();
  }

  private absorb(error: unknown): void {
    if (error instanceof StaleRevisionError) {
      this.model.staleConflict = true;
    } else if (error instanceof MalformedPayloadError) {
      this.model.renderError = error.message;
    } else if (error instanceof HttpError) {
      this.say("error", `server refused the request: ${error.message}`);
    } else {
      this.say("error", String(error));
    }
  }

  private navigateHistory(direction: -1 | 1): void {
    const input = this.root.querySelector<HTMLInputElement>("#command-input");
    if (!input || this.history.length === 0) {
      return;
    }
    this.historyIndex = Math.min(
      Math.max(this.historyIndex + direction, 0),
      this.history.length,
    );
    input.value = this.history[this.historyIndex] ?? "";
  }
}
