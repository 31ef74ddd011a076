/** Wires panes, state and the API client together.
 *
 * The UI never mutates the partition locally: every change round-trips
 * through the service and the panes re-render from the authoritative
 * payload. A 409 (stale revision, conflict, cyclic dependency) triggers a
 * refetch plus a banner, leaving the UI consistent with the server.
 */

import { ApiError, Client, type SessionState } from "./api.js";
import { renderActionBar } from "./actions.js";
import { renderDiff, type DiffResult } from "./diff.js";
import { renderList } from "./list.js";
import { renderMap } from "./map.js";
import {
  initialView,
  pendingSource,
  reconcile,
  toggleCluster,
  togglePending,
  type ViewState,
} from "./state.js";

export interface AppHooks {
  prompt(message: string, fallback: string): string | null;
  notify(message: string, kind: "info" | "error"): void;
}

export class App {
  view: ViewState = initialView();
  session: SessionState | null = null;
  private diffResult: DiffResult = { kind: "empty" };
  private diffFetch = 0;
  private readonly hooks: AppHooks;

  constructor(
    private readonly root: HTMLElement,
    readonly client: Client,
    hooks?: Partial<AppHooks>,
  ) {
    this.hooks = {
      prompt: hooks?.prompt ?? ((m, f) => window.prompt(m, f)),
      notify: hooks?.notify ?? ((m, kind) => this.banner(m, kind)),
    };
    const slider = this.root.querySelector<HTMLInputElement>("#scale-slider");
    slider?.addEventListener("input", () => {
      const value = Number(slider.value);
      if (value > 0) {
        this.view = { ...this.view, timeScale: value };
        this.renderMapPane();
      }
    });
  }

  async start(): Promise<void> {
    await this.refresh();
  }

  /** Refetch the authoritative session payload and re-render everything. */
  async refresh(): Promise<void> {
    this.session = await this.client.getSession();
    this.view = reconcile(this.view, this.session);
    await this.fetchDiff();
    this.render();
  }

  private async fetchDiff(): Promise<void> {
    const token = ++this.diffFetch;
    if (this.view.selected.length === 0) {
      this.diffResult = { kind: "empty" };
      return;
    }
    try {
      const lines = await this.client.getDiff(this.view.selected);
      if (token === this.diffFetch) {
        this.diffResult = { kind: "ok", lines };
      }
    } catch (err) {
      if (!(err instanceof ApiError) || token !== this.diffFetch) {
        throw err;
      }
      if (err.kind === "selection-patch-conflict") {
        this.diffResult = {
          kind: "conflict",
          seq: Number(err.payload.seq ?? -1),
          message: err.message,
        };
      } else {
        this.diffResult = { kind: "empty" };
        this.hooks.notify(err.message, "error");
      }
    }
  }

  private banner(message: string, kind: "info" | "error"): void {
    const el = this.root.querySelector<HTMLElement>("#banner");
    if (!el) {
      return;
    }
    el.textContent = message;
    el.className = message ? `banner ${kind}` : "banner";
  }

  render(): void {
    if (!this.session) {
      return;
    }
    const session = this.session;
    const actionBar = this.root.querySelector<HTMLElement>("#action-bar");
    if (actionBar) {
      actionBar.replaceChildren(
        renderActionBar(session, this.view, {
          onMerge: () => void this.doMerge(),
          onSplit: () => void this.doSplit(),
          onUndo: () => void this.doUndoRedo("undo"),
          onRedo: () => void this.doUndoRedo("redo"),
          onExport: () => void this.doExport(),
        }),
      );
    }
    this.renderMapPane();
    const list = this.root.querySelector<HTMLElement>("#list-body");
    if (list) {
      list.replaceChildren(
        renderList(session, this.view, {
          onRowClick: (beadId) => this.markPending(beadId),
        }),
      );
    }
    const diff = this.root.querySelector<HTMLElement>("#diff-body");
    if (diff) {
      diff.replaceChildren(
        renderDiff(this.diffResult, session, this.view, {
          onExtractToggle: (beadId) => this.markPending(beadId),
        }),
      );
    }
  }

  private renderMapPane(): void {
    const map = this.root.querySelector<HTMLElement>("#map-canvas");
    if (map && this.session) {
      map.replaceChildren(
        renderMap(this.session, this.view, {
          onBeadClick: (beadId, additive) => void this.selectBead(beadId, additive),
          onHover: (beadId) => {
            this.view = { ...this.view, hover: beadId };
          },
        }),
      );
    }
  }

  async selectBead(beadId: string, additive: boolean): Promise<void> {
    if (!this.session) {
      return;
    }
    const bead = this.session.beads.find((b) => b.id === beadId);
    if (!bead) {
      return;
    }
    this.view = toggleCluster(this.view, bead.cluster_id, additive);
    await this.fetchDiff();
    this.render();
  }

  markPending(beadId: string): void {
    this.view = togglePending(this.view, beadId);
    this.render();
  }

  private async mutate(op: () => Promise<unknown>): Promise<void> {
    try {
      await op();
      this.banner("", "info");
    } catch (err) {
      if (err instanceof ApiError) {
        if (err.kind === "cyclic-cluster-dependency") {
          const clusters = (err.payload.clusters as string[] | undefined) ?? [];
          this.hooks.notify(
            `Export blocked: clusters ${clusters.join(" -> ")} depend on each ` +
              `other. Merge them or re-split. (${err.message})`,
            "error",
          );
        } else {
          this.hooks.notify(err.message, "error");
        }
      } else {
        throw err;
      }
    }
    await this.refresh();
  }

  async doSplit(): Promise<void> {
    if (!this.session) {
      return;
    }
    const req = pendingSource(this.view, this.session);
    if (!req) {
      return;
    }
    await this.mutate(async () => {
      const resp = await this.client.split(this.view.revision, req.clusterId, req.beadIds);
      this.view = {
        ...this.view,
        pendingSplit: [],
        selected: [req.clusterId, resp.new_cluster],
      };
    });
  }

  async doMerge(): Promise<void> {
    if (this.view.selected.length < 2) {
      return;
    }
    await this.mutate(async () => {
      const resp = await this.client.merge(this.view.revision, this.view.selected);
      this.view = { ...this.view, selected: [resp.surviving_cluster], pendingSplit: [] };
    });
  }

  async doUndoRedo(which: "undo" | "redo"): Promise<void> {
    await this.mutate(() =>
      which === "undo"
        ? this.client.undo(this.view.revision)
        : this.client.redo(this.view.revision),
    );
  }

  async doExport(): Promise<void> {
    const outPath = this.hooks.prompt("Write the untangled repository to:", "untangled-repo");
    if (!outPath) {
      return;
    }
    try {
      const resp = await this.client.exportRepo(outPath);
      this.hooks.notify(
        `Exported ${resp.commits.length} commits to ${outPath}`,
        "info",
      );
    } catch (err) {
      if (!(err instanceof ApiError)) {
        throw err;
      }
      if (err.kind === "cyclic-cluster-dependency") {
        const clusters = (err.payload.clusters as string[] | undefined) ?? [];
        this.hooks.notify(
          `Export blocked: clusters ${clusters.join(" -> ")} depend on each ` +
            `other. Merge them or re-split.`,
          "error",
        );
      } else {
        this.hooks.notify(err.message, "error");
      }
    }
  }
}

export function mount(root: HTMLElement, client?: Client): App {
  const app = new App(root, client ?? new Client());
  void app.start();
  return app;
}

if (typeof document !== "undefined" && document.getElementById("map-canvas")) {
  mount(document.body);
}
