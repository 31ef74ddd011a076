/** Action bar: merge/split/undo/redo/export, enabled per the current
 * selection and pending split marks. */

import type { SessionState } from "./api.js";
import { pendingSource, type ViewState } from "./state.js";

export interface ActionHandlers {
  onMerge(): void;
  onSplit(): void;
  onUndo(): void;
  onRedo(): void;
  onExport(): void;
}

function button(
  label: string,
  id: string,
  enabled: boolean,
  onClick: () => void,
): HTMLButtonElement {
  const b = document.createElement("button");
  b.id = id;
  b.textContent = label;
  b.disabled = !enabled;
  b.addEventListener("click", onClick);
  return b;
}

export function renderActionBar(
  session: SessionState,
  view: ViewState,
  handlers: ActionHandlers,
): HTMLElement {
  const bar = document.createElement("div");
  bar.className = "actions";
  const split = pendingSource(view, session);
  bar.appendChild(
    button(
      view.pendingSplit.length
        ? `Split (${view.pendingSplit.length} marked)`
        : "Split",
      "btn-split",
      split !== null,
      handlers.onSplit,
    ),
  );
  bar.appendChild(
    button("Merge", "btn-merge", view.selected.length >= 2, handlers.onMerge),
  );
  bar.appendChild(button("Undo", "btn-undo", true, handlers.onUndo));
  bar.appendChild(button("Redo", "btn-redo", true, handlers.onRedo));
  bar.appendChild(button("Export", "btn-export", true, handlers.onExport));

  const status = document.createElement("span");
  status.className = "status";
  status.id = "session-status";
  const sel = view.selected.length ? ` · selected ${view.selected.join(", ")}` : "";
  status.textContent = `${session.clusters.length} clusters · revision ${session.revision}${sel}`;
  bar.appendChild(status);
  return bar;
}
