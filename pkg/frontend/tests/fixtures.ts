import { PoSummary, ProverView, StateView } from "../src/types.js";

export function freshView(overrides: Partial<StateView> = {}): StateView {
  return {
    session_id: "s1",
    revision: 0,
    po: { name: "inc.1", group: "operations", index: 0, count: 2, proved: false },
    goal: "counter + delta <= max_count",
    hypotheses: [
      { id: "h1", origin: "properties", text: "max_count : NAT", selected: false },
      { id: "h2", origin: "local", text: "counter < max_count", selected: false },
      { id: "h3", origin: "local", text: "delta = 1", selected: false },
    ],
    contexts: [
      { name: "all", size: 3, current: false, members: ["h1", "h2", "h3"] },
      { name: "local", size: 2, current: true, members: ["h2", "h3"] },
      { name: "global", size: 1, current: false, members: ["h1"] },
      { name: "properties", size: 1, current: false, members: ["h1"] },
    ],
    lexicons: [
      { name: "goal", size: 3, current: true, ids: ["counter", "delta", "max_count"] },
    ],
    selected: [],
    log: [],
    messages: [],
    ...overrides,
  };
}

export const SAMPLE_POS: PoSummary[] = [
  { name: "inc.1", group: "operations", proved: false },
  { name: "set_value.2", group: "operations", proved: true },
  { name: "init.1", group: "initialization", proved: false },
];

export const SAMPLE_PROVERS: ProverView[] = [
  {
    name: "builtin",
    command: "",
    timeout_s: 10,
    enabled: true,
    valid_patterns: [],
    invalid_patterns: [],
    note: "",
  },
  {
    name: "z3",
    command: "z3 {input}",
    timeout_s: 10,
    enabled: false,
    valid_patterns: ["unsat"],
    invalid_patterns: ["sat"],
    note: "executable not found: z3",
  },
];
