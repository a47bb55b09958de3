/**
 * Shapes of the JSON payloads served by the workbench HTTP API, plus a
 * defensive validator for the session state view (everything the panes
 * render comes straight out of these payloads).
 */

export interface PoSummary {
  name: string;
  group: string;
  proved: boolean;
}

export interface PoRef {
  name: string;
  group: string;
  index?: number;
  count?: number;
  proved?: boolean;
}

export interface HypothesisView {
  id: string;
  origin: string;
  text: string;
  selected: boolean;
}

export interface ContextView {
  name: string;
  size: number;
  current: boolean;
  members: string[];
}

export interface LexiconView {
  name: string;
  size: number;
  current: boolean;
  ids: string[];
}

export interface MessageView {
  kind: string;
  text: string;
}

export interface StateView {
  session_id: string;
  revision: number;
  po: PoRef;
  goal: string;
  hypotheses: HypothesisView[];
  contexts: ContextView[];
  lexicons: LexiconView[];
  selected: string[];
  log: string[];
  messages: MessageView[];
}

export interface ProverView {
  name: string;
  command: string;
  timeout_s: number;
  enabled: boolean;
  valid_patterns: string[];
  invalid_patterns: string[];
  note: string;
}

export interface VerdictView {
  prover: string;
  kind: string;
  elapsed_s: number;
  detail: string;
}

export interface PortfolioView {
  overall_valid: boolean;
  fingerprint: string;
  verdicts: VerdictView[];
}

export class MalformedPayloadError extends Error {}

function fail(where: string): never {
  throw new MalformedPayloadError(`malformed state view: ${where}`);
}

function isStringArray(x: unknown): x is string[] {
  return Array.isArray(x) && x.every((s) => typeof s === "string");
}

/**
 * Validate a raw payload as a StateView; throws MalformedPayloadError so the
 * caller can show the render-error banner instead of a broken page.
 */
export function validateStateView(raw: unknown): StateView {
  if (typeof raw !== "object" || raw === null) fail("not an object");
  const v = raw as Record<string, unknown>;
  if (typeof v.session_id !== "string") fail("session_id");
  if (typeof v.revision !== "number") fail("revision");
  const po = v.po as Record<string, unknown> | undefined;
  if (!po || typeof po.name !== "string" || typeof po.group !== "string") fail("po");
  if (typeof v.goal !== "string") fail("goal");
  if (!Array.isArray(v.hypotheses)) fail("hypotheses");
  for (const h of v.hypotheses as Array<Record<string, unknown>>) {
    if (typeof h.id !== "string" || typeof h.text !== "string") fail("hypothesis entry");
    if (typeof h.origin !== "string" || typeof h.selected !== "boolean") fail("hypothesis entry");
  }
  if (!Array.isArray(v.contexts)) fail("contexts");
  for (const c of v.contexts as Array<Record<string, unknown>>) {
    if (typeof c.name !== "string" || typeof c.size !== "number") fail("context entry");
    if (typeof c.current !== "boolean" || !isStringArray(c.members)) fail("context entry");
  }
  if (!Array.isArray(v.lexicons)) fail("lexicons");
  for (const l of v.lexicons as Array<Record<string, unknown>>) {
    if (typeof l.name !== "string" || typeof l.size !== "number") fail("lexicon entry");
    if (typeof l.current !== "boolean" || !isStringArray(l.ids)) fail("lexicon entry");
  }
  if (!isStringArray(v.selected)) fail("selected");
  if (!isStringArray(v.log)) fail("log");
  if (!Array.isArray(v.messages)) fail("messages");
  for (const m of v.messages as Array<Record<string, unknown>>) {
    if (typeof m.kind !== "string" || typeof m.text !== "string") fail("message entry");
  }
  return raw as StateView;
}
