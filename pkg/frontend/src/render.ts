/**
 * DOM rendering for the workbench window. `ensureShell` builds the static
 * two-column skeleton once and wires the event handlers; `render` fills
 * every pane from the current model. Panes show exactly what the server's
 * state view says: no hypothesis subset is computed client-side.
 */

import { AppModel, Handlers } from "./model.js";
import { ContextView, HypothesisView, LexiconView } from "./types.js";

const MAX_LISTED_HYPOTHESES = 500;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function ensureShell(root: HTMLElement, handlers: Handlers): void {
  if (root.querySelector("#pane-goal")) {
    return;
  }
  root.innerHTML = `
    <div id="banner-error" class="banner error" hidden></div>
    <div id="banner-stale" class="banner warn" hidden>
      Another client changed this session.
      <button id="btn-reload" type="button">Reload latest state</button>
    </div>
    <div class="columns">
      <div class="column side">
        <section id="pane-provers"><h2>Provers</h2><ul></ul></section>
        <section id="pane-pos"><h2>Proof obligations</h2><div class="tree"></div></section>
      </div>
      <div class="column main">
        <section id="pane-goal"><h2>Goal</h2><div class="po-title"></div><pre class="goal-text"></pre></section>
        <section id="pane-contexts"><h2>Context manager</h2>
          <div class="actions">
            <button id="btn-ah" type="button">Add hypotheses</button>
            <button id="btn-dh" type="button">Remove hypotheses</button>
            <button id="btn-mkctx-some" type="button">New context from lexicon (Some)</button>
            <button id="btn-mkctx-all" type="button">New context from lexicon (All)</button>
          </div>
          <ul class="context-list"></ul>
          <div class="members"><h3>Hypotheses in current context</h3><ul class="member-list"></ul></div>
        </section>
        <section id="pane-lexicons"><h2>Lexicon manager</h2>
          <div class="actions">
            <button id="btn-mklex" type="button">New lexicon from context</button>
          </div>
          <ul class="lexicon-list"></ul>
        </section>
        <section id="pane-command"><h2>Command</h2>
          <form id="command-form">
            <input id="command-input" type="text" autocomplete="off"
                   placeholder="ne | ah | chctx(all) | mkctx(Some) | pr ..." />
            <button id="btn-exec" type="submit">Execute</button>
          </form>
          <div class="actions">
            <button id="btn-prev" type="button">Previous</button>
            <button id="btn-next" type="button">Next</button>
            <button id="btn-run-provers" type="button">Run provers</button>
          </div>
        </section>
        <section id="pane-script"><h2>Script</h2><ol class="script-log"></ol></section>
        <section id="pane-messages"><h2>Messages</h2><ul class="message-list"></ul></section>
      </div>
    </div>`;

  const input = root.querySelector<HTMLInputElement>("#command-input")!;
  root.querySelector<HTMLFormElement>("#command-form")!.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const text = input.value;
    input.value = "";
    handlers.onSubmit(text);
  });
  input.addEventListener("keydown", (ev) => {
    if (ev.key === "ArrowUp") {
      ev.preventDefault();
      handlers.onHistory(-1);
    } else if (ev.key === "ArrowDown") {
      ev.preventDefault();
      handlers.onHistory(1);
    }
  });
  const click = (selector: string, fn: () => void) =>
    root.querySelector<HTMLButtonElement>(selector)!.addEventListener("click", fn);
  click("#btn-ah", handlers.onAdd);
  click("#btn-dh", handlers.onRemove);
  click("#btn-mkctx-some", handlers.onMkctxSome);
  click("#btn-mkctx-all", handlers.onMkctxAll);
  click("#btn-mklex", handlers.onMklex);
  click("#btn-next", handlers.onNext);
  click("#btn-prev", handlers.onPrev);
  click("#btn-run-provers", handlers.onRunProvers);
  click("#btn-reload", handlers.onReload);
}

export function render(root: HTMLElement, model: AppModel, handlers: Handlers): void {
  ensureShell(root, handlers);

  const errorBanner = root.querySelector<HTMLElement>("#banner-error")!;
  errorBanner.hidden = model.renderError === null;
  errorBanner.textContent = model.renderError ?? "";

  root.querySelector<HTMLElement>("#banner-stale")!.hidden = !model.staleConflict;

  renderProvers(root, model);
  renderPoTree(root, model, handlers);

  const view = model.view;
  root.querySelector<HTMLElement>(".po-title")!.textContent = view
    ? `${view.po.name} [${view.po.group}]${view.po.proved ? " — proved" : ""}`
    : "no proof obligation open (type ne)";
  root.querySelector<HTMLElement>(".goal-text")!.textContent = view ? view.goal : "";

  renderContexts(root, model, handlers);
  renderLexicons(root, model, handlers);
  renderScript(root, model);
  renderMessages(root, model);

  for (const button of root.querySelectorAll<HTMLButtonElement>(".actions button, #btn-exec")) {
    button.disabled = model.busy;
  }
}

function renderProvers(root: HTMLElement, model: AppModel): void {
  const list = root.querySelector<HTMLElement>("#pane-provers ul")!;
  list.textContent = "";
  for (const prover of model.provers) {
    const item = el("li", prover.enabled ? "prover enabled" : "prover disabled");
    item.dataset.prover = prover.name;
    item.append(
      el("span", "name", prover.name),
      el("span", "status", prover.enabled ? "enabled" : `disabled ${prover.note}`.trim()),
    );
    list.append(item);
  }
}

function renderPoTree(root: HTMLElement, model: AppModel, handlers: Handlers): void {
  const tree = root.querySelector<HTMLElement>("#pane-pos .tree")!;
  tree.textContent = "";
  const groups = new Map<string, typeof model.pos>();
  for (const po of model.pos) {
    const bucket = groups.get(po.group) ?? [];
    bucket.push(po);
    groups.set(po.group, bucket);
  }
  for (const [group, pos] of groups) {
    tree.append(el("h3", "group", group));
    const list = el("ul", "po-list");
    for (const po of pos) {
      const item = el("li");
      item.dataset.po = po.name;
      if (model.view && model.view.po.name === po.name) {
        item.classList.add("selected");
      }
      const button = el("button", "po-name", po.name);
      button.type = "button";
      button.addEventListener("click", () => handlers.onPoClick(po.name));
      item.append(button);
      if (po.proved) {
        item.classList.add("proved");
        item.append(el("span", "badge", "proved"));
      }
      list.append(item);
    }
    tree.append(list);
  }
}

function renderContexts(root: HTMLElement, model: AppModel, handlers: Handlers): void {
  const list = root.querySelector<HTMLElement>(".context-list")!;
  list.textContent = "";
  const view = model.view;
  if (!view) {
    root.querySelector<HTMLElement>(".member-list")!.textContent = "";
    return;
  }
  let current: ContextView | undefined;
  for (const context of view.contexts) {
    const item = el("li");
    item.dataset.context = context.name;
    if (context.current) {
      item.classList.add("current");
      current = context;
    }
    const button = el("button", "ctx-name", context.name);
    button.type = "button";
    button.addEventListener("click", () => handlers.onContextClick(context.name));
    item.append(button, el("span", "size", `(${context.size})`));
    list.append(item);
  }
  renderMembers(root, view.hypotheses, current);
}

function renderMembers(
  root: HTMLElement,
  hypotheses: HypothesisView[],
  current: ContextView | undefined,
): void {
  const list = root.querySelector<HTMLElement>(".member-list")!;
  list.textContent = "";
  if (!current) {
    return;
  }
  const members = new Set(current.members);
  let listed = 0;
  for (const hyp of hypotheses) {
    if (!members.has(hyp.id)) {
      continue;
    }
    if (listed >= MAX_LISTED_HYPOTHESES) {
      list.append(el("li", "truncated", `... ${members.size - listed} more`));
      break;
    }
    const item = el("li", hyp.selected ? "hyp selected" : "hyp");
    item.dataset.hyp = hyp.id;
    item.append(
      el("span", "mark", hyp.selected ? "[x]" : "[ ]"),
      el("span", "hyp-id", hyp.id),
      el("span", "origin", `[${hyp.origin}]`),
      el("span", "text", hyp.text),
    );
    list.append(item);
    listed += 1;
  }
}

function renderLexicons(root: HTMLElement, model: AppModel, handlers: Handlers): void {
  const list = root.querySelector<HTMLElement>(".lexicon-list")!;
  list.textContent = "";
  if (!model.view) {
    return;
  }
  for (const lexicon of model.view.lexicons) {
    const item = el("li");
    item.dataset.lexicon = lexicon.name;
    if (lexicon.current) {
      item.classList.add("current");
    }
    const button = el("button", "lex-name", lexicon.name);
    button.type = "button";
    button.addEventListener("click", () => handlers.onLexiconClick(lexicon.name));
    item.append(button, el("span", "size", `(${lexicon.size})`));
    item.append(el("span", "ids", formatIds(lexicon)));
    list.append(item);
  }
}

function formatIds(lexicon: LexiconView): string {
  const shown = lexicon.ids.slice(0, 50);
  const suffix = lexicon.ids.length > shown.length ? " ..." : "";
  return shown.join(" ") + suffix;
}

function renderScript(root: HTMLElement, model: AppModel): void {
  const log = root.querySelector<HTMLElement>(".script-log")!;
  log.textContent = "";
  if (!model.view) {
    return;
  }
  for (const entry of model.view.log) {
    log.append(el("li", "entry", entry));
  }
}

function renderMessages(root: HTMLElement, model: AppModel): void {
  const list = root.querySelector<HTMLElement>(".message-list")!;
  list.textContent = "";
  const serverMessages = model.view ? model.view.messages : [];
  for (const message of [...serverMessages, ...model.clientMessages]) {
    list.append(el("li", message.kind, message.text));
  }
}
