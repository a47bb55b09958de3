import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient, StaleRevisionError } from "../src/api.js";
import { App } from "../src/app.js";
import { PoSummary, ProverView, StateView } from "../src/types.js";
import { SAMPLE_POS, SAMPLE_PROVERS, freshView } from "./fixtures.js";

/**
 * In-memory stand-in for the server: records every command text verbatim
 * and echoes it into the session log, which is enough to check that every
 * gesture funnels through the same textual-command path.
 */
class FakeApi {
  commands: string[] = [];
  created: string[] = [];
  view: StateView = freshView();
  failNextWith: unknown = null;

  async listPos(): Promise<PoSummary[]> {
    return SAMPLE_POS;
  }

  async listProvers(): Promise<ProverView[]> {
    return SAMPLE_PROVERS;
  }

  async createSession(poName: string): Promise<StateView> {
    this.created.push(poName);
    this.view = freshView({ po: { name: poName, group: "operations" } });
    return this.view;
  }

  async getSession(): Promise<StateView> {
    return this.view;
  }

  async command(_id: string, text: string, revision: number): Promise<StateView> {
    if (this.failNextWith) {
      const error = this.failNextWith;
      this.failNextWith = null;
      throw error;
    }
    this.commands.push(text);
    this.view = {
      ...this.view,
      revision: revision + 1,
      log: [...this.view.log, text],
    };
    return this.view;
  }

  async prove(): Promise<never> {
    throw new Error("unused in these tests");
  }
}

function makeApp() {
  const root = document.createElement("div");
  document.body.replaceChildren(root);
  const api = new FakeApi();
  const app = new App(root, api as unknown as ApiClient);
  return { root, api, app };
}

beforeEach(() => {
  document.body.innerHTML = "";
});

describe("gesture-to-command translation", () => {
  it("click path emits exactly chctx(all) then ah", async () => {
    const { root, api, app } = makeApp();
    await app.init();
    await app.openPo("inc.1");

    root.querySelector<HTMLButtonElement>('li[data-context="all"] .ctx-name')!.click();
    await until(() => !app.model.busy && api.commands.length === 1);
    root.querySelector<HTMLButtonElement>("#btn-ah")!.click();
    await until(() => !app.model.busy && api.commands.length === 2);

    expect(api.commands).toEqual(["chctx(all)", "ah"]);
    const logged = [...root.querySelectorAll(".script-log li")].map((li) => li.textContent);
    expect(logged).toEqual(["chctx(all)", "ah"]);
  });

  it("typed path produces a byte-identical command stream", async () => {
    const clicked = makeApp();
    await clicked.app.init();
    await clicked.app.openPo("inc.1");
    clicked.root.querySelector<HTMLButtonElement>('li[data-context="all"] .ctx-name')!.click();
    await until(() => !clicked.app.model.busy && clicked.api.commands.length === 1);
    clicked.root.querySelector<HTMLButtonElement>("#btn-ah")!.click();
    await until(() => !clicked.app.model.busy && clicked.api.commands.length === 2);

    const typed = makeApp();
    await typed.app.init();
    await typed.app.openPo("inc.1");
    await typed.app.submitText("chctx(all)");
    await typed.app.submitText("ah");

    expect(typed.api.commands).toEqual(clicked.api.commands);
    expect(typed.api.view.log).toEqual(clicked.api.view.log);
  });

  it("lexicon row, Some/All, mklex, navigation and prover buttons map to their commands", async () => {
    const { root, api, app } = makeApp();
    await app.init();
    await app.openPo("inc.1");
    const press = async (selector: string) => {
      const size = api.commands.length;
      root.querySelector<HTMLButtonElement>(selector)!.click();
      await until(() => !app.model.busy && api.commands.length === size + 1);
    };
    await press('li[data-lexicon="goal"] .lex-name');
    await press("#btn-mkctx-some");
    await press("#btn-mkctx-all");
    await press("#btn-mklex");
    await press("#btn-dh");
    await press("#btn-next");
    await press("#btn-prev");
    await press("#btn-run-provers");
    expect(api.commands).toEqual([
      "chlex(goal)", "mkctx(Some)", "mkctx(All)", "mklex", "dh", "ne", "pv", "pr",
    ]);
  });

  it("clicking an obligation in the tree opens a fresh session on it", async () => {
    const { root, api, app } = makeApp();
    await app.init();
    root.querySelector<HTMLButtonElement>('li[data-po="set_value.2"] .po-name')!.click();
    await until(() => api.created.length === 1);
    expect(api.created).toEqual(["set_value.2"]);
    expect(app.model.view?.po.name).toBe("set_value.2");
  });
});

describe("session lifecycle", () => {
  it("typing ne with no session opens the first obligation", async () => {
    const { api, app } = makeApp();
    await app.init();
    await app.submitText("ne");
    expect(api.created).toEqual(["inc.1"]);
    expect(api.commands).toEqual([]);
  });

  it("other commands without a session produce a message, not a request", async () => {
    const { root, api, app } = makeApp();
    await app.init();
    await app.submitText("ah");
    expect(api.commands).toEqual([]);
    const messages = [...root.querySelectorAll(".message-list li")];
    expect(messages.some((m) => m.textContent?.includes("no proof obligation"))).toBe(true);
  });

  it("a stale revision shows the reload prompt and reload clears it", async () => {
    const { root, api, app } = makeApp();
    await app.init();
    await app.openPo("inc.1");
    api.failNextWith = new StaleRevisionError("stale revision 0, session is at 3");
    await app.submitText("ah");
    expect(app.model.staleConflict).toBe(true);
    expect(root.querySelector<HTMLElement>("#banner-stale")?.hidden).toBe(false);

    root.querySelector<HTMLButtonElement>("#btn-reload")!.click();
    await until(() => !app.model.staleConflict);
    expect(root.querySelector<HTMLElement>("#banner-stale")?.hidden).toBe(true);
  });

  it("refuses overlapping submissions", async () => {
    const { app } = makeApp();
    await app.init();
    await app.openPo("inc.1");
    app.model.busy = true;
    await app.submitText("ah");
    expect(app.model.clientMessages.some((m) => m.text.includes("already running"))).toBe(true);
  });

  it("arrow-up recalls the previous command", async () => {
    const { root, app } = makeApp();
    await app.init();
    await app.openPo("inc.1");
    await app.submitText("chctx(all)");
    await app.submitText("ah");
    const input = root.querySelector<HTMLInputElement>("#command-input")!;
    input.dispatchEvent(new KeyboardEvent("keydown", { key: "ArrowUp", bubbles: true }));
    expect(input.value).toBe("ah");
    input.dispatchEvent(new KeyboardEvent("keydown", { key: "ArrowUp", bubbles: true }));
    expect(input.value).toBe("chctx(all)");
    input.dispatchEvent(new KeyboardEvent("keydown", { key: "ArrowDown", bubbles: true }));
    expect(input.value).toBe("ah");
  });

  it("submitting the form sends the input text", async () => {
    const { root, api, app } = makeApp();
    await app.init();
    await app.openPo("inc.1");
    const input = root.querySelector<HTMLInputElement>("#command-input")!;
    input.value = "mkctx(Some)";
    root.querySelector<HTMLFormElement>("#command-form")!.dispatchEvent(
      new Event("submit", { bubbles: true, cancelable: true }),
    );
    await until(() => api.commands.length === 1);
    expect(api.commands).toEqual(["mkctx(Some)"]);
    expect(input.value).toBe("");
  });
});

async function until(condition: () => boolean, timeoutMs = 3000): Promise<void> {
  const start = Date.now();
  while (!condition()) {
    if (Date.now() - start > timeoutMs) {
      throw new Error("condition not reached in time");
    }
    await new Promise((resolve) => setTimeout(resolve, 5));
  }
}
