import { MessageView, PoSummary, ProverView, StateView } from "./types.js";

export interface AppModel {
  pos: PoSummary[];
  provers: ProverView[];
  view: StateView | null;
  clientMessages: MessageView[];
  staleConflict: boolean;
  renderError: string | null;
  busy: boolean;
}

export function emptyModel(): AppModel {
  return {
    pos: [],
    provers: [],
    view: null,
    clientMessages: [],
    staleConflict: false,
    renderError: null,
    busy: false,
  };
}

/** Everything the panes can ask the application to do. */
export interface Handlers {
  onSubmit(text: string): void;
  onHistory(direction: -1 | 1): void;
  onPoClick(name: string): void;
  onContextClick(name: string): void;
  onLexiconClick(name: string): void;
  onAdd(): void;
  onRemove(): void;
  onMkctxSome(): void;
  onMkctxAll(): void;
  onMklex(): void;
  onNext(): void;
  onPrev(): void;
  onRunProvers(): void;
  onReload(): void;
}
