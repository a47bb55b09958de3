/**
 * Thin fetch client for the workbench HTTP API. Stale-revision conflicts
 * (409) surface as StaleRevisionError so the app can offer a reload.
 */

import {
  PortfolioView,
  PoSummary,
  ProverView,
  StateView,
  validateStateView,
} from "./types.js";

export class StaleRevisionError extends Error {}

export class HttpError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function raiseFor(response: Response): Promise<void> {
  if (response.ok) {
    return;
  }
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (body && typeof body.detail === "string") {
      detail = body.detail;
    }
  } catch {
    // keep the status text
  }
  if (response.status === 409) {
    throw new StaleRevisionError(detail);
  }
  throw new HttpError(response.status, detail);
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async getJson(path: string): Promise<unknown> {
    const response = await fetch(this.base + path);
    await raiseFor(response);
    return response.json();
  }

  private async postJson(path: string, body: unknown): Promise<unknown> {
    const response = await fetch(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    await raiseFor(response);
    return response.json();
  }

  listPos(): Promise<PoSummary[]> {
    return this.getJson("/pos") as Promise<PoSummary[]>;
  }

  listProvers(): Promise<ProverView[]> {
    return this.getJson("/provers") as Promise<ProverView[]>;
  }

  async createSession(poName: string): Promise<StateView> {
    return validateStateView(await this.postJson("/sessions", { po: poName }));
  }

  async getSession(sessionId: string): Promise<StateView> {
    return validateStateView(await this.getJson(`/sessions/${sessionId}`));
  }

  async command(sessionId: string, text: string, revision: number): Promise<StateView> {
    return validateStateView(
      await this.postJson(`/sessions/${sessionId}/command`, { text, revision }),
    );
  }

  prove(sessionId: string, stopOnValid: boolean): Promise<PortfolioView> {
    return this.postJson(`/sessions/${sessionId}/prove`, {
      stop_on_valid: stopOnValid,
    }) as Promise<PortfolioView>;
  }
}
