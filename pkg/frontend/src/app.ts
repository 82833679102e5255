/**
 * Review-queue dashboard.
 *
 * The page is a thin view over the triage service: every label, score, and
 * span it shows comes from the service, and every state change maps to one
 * endpoint. The only thing kept across reloads is the reviewer name.
 */

import { ApiError, TriageApi } from "./api";
import type { Entry, Label, ModelInfo, QueuePage, QueueStatus } from "./api";
import { segmentByByteSpans } from "./highlights";

const PAGE_SIZE = 20;
const REVIEWER_KEY = "patrol.reviewer";

const HIGHLIGHT_LEGEND: Array<[kind: string, title: string]> = [
  ["vulgarity", "vulgarity"],
  ["rule", "rule trigger"],
  ["expression", "emotive expression"],
  ["emoteme", "emoteme"],
];

export interface AppOptions {
  baseUrl: string;
  /** Injectable for tests; defaults to the page's fetch. */
  fetchFn?: typeof fetch;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    return err.status === 0
      ? "service unreachable — is it running?"
      : `service rejected the request: ${err.detail}`;
  }
  return String(err);
}

export class TriageApp {
  private readonly api: TriageApi;
  private readonly inflight = new Set<Promise<unknown>>();

  private queue: QueuePage | null = null;
  private model: ModelInfo | null = null;
  private status: QueueStatus = "pending";
  private page = 1;
  private selectedId: string | null = null;
  private loadError: string | null = null;
  private inlineMessage: string | null = null;
  private noticeMessage: string | null = null;
  private stopped = false;

  private readonly queueList: HTMLUListElement;
  private readonly detailPane: HTMLElement;
  private readonly banner: HTMLElement;
  private readonly notice: HTMLElement;
  private readonly errorBanner: HTMLElement;
  private readonly errorText: HTMLElement;
  private readonly reviewerInput: HTMLInputElement;
  private readonly statusSelect: HTMLSelectElement;
  private readonly pageLabel: HTMLElement;
  private readonly prevButton: HTMLButtonElement;
  private readonly nextButton: HTMLButtonElement;

  constructor(
    private readonly root: HTMLElement,
    options: AppOptions,
  ) {
    this.api = new TriageApi(options.baseUrl, options.fetchFn);
    this.root.innerHTML = `
      <header class="topbar">
        <div class="brand">
          <h1>patrol review queue</h1>
          <span class="model-banner" data-role="model-banner">model —</span>
        </div>
        <div class="topbar-controls">
          <label class="reviewer-label">reviewer
            <input data-role="reviewer" class="reviewer-input" placeholder="your name" />
          </label>
          <button data-role="retrain" class="retrain-btn" type="button">Retrain</button>
        </div>
      </header>
      <div class="notice" data-role="notice" hidden></div>
      <div class="error-banner" data-role="error" hidden>
        <span data-role="error-text"></span>
        <button data-role="retry" type="button">Retry</button>
      </div>
      <main class="panes">
        <section class="queue-pane">
          <div class="queue-controls">
            <select data-role="status-filter" aria-label="queue filter">
              <option value="pending">pending</option>
              <option value="decided">decided</option>
              <option value="all">all</option>
            </select>
            <div class="pager">
              <button data-role="prev" type="button">&lsaquo;</button>
              <span data-role="page-label">&ndash;</span>
              <button data-role="next" type="button">&rsaquo;</button>
            </div>
          </div>
          <ul class="queue-list" data-role="queue"></ul>
        </section>
        <section class="detail-pane" data-role="detail"></section>
      </main>
    `;
    const pick = <T extends HTMLElement>(role: string): T =>
      this.root.querySelector(`[data-role="${role}"]`) as T;
    this.queueList = pick<HTMLUListElement>("queue");
    this.detailPane = pick("detail");
    this.banner = pick("model-banner");
    this.notice = pick("notice");
    this.errorBanner = pick("error");
    this.errorText = pick("error-text");
    this.reviewerInput = pick<HTMLInputElement>("reviewer");
    this.statusSelect = pick<HTMLSelectElement>("status-filter");
    this.pageLabel = pick("page-label");
    this.prevButton = pick<HTMLButtonElement>("prev");
    this.nextButton = pick<HTMLButtonElement>("next");

    this.reviewerInput.value = window.localStorage.getItem(REVIEWER_KEY) ?? "";
    this.reviewerInput.addEventListener("input", () => {
      window.localStorage.setItem(REVIEWER_KEY, this.reviewerInput.value.trim());
    });
    this.statusSelect.addEventListener("change", () => {
      this.status = this.statusSelect.value as QueueStatus;
      this.page = 1;
      this.track(this.refresh());
    });
    this.prevButton.addEventListener("click", () => this.turnPage(-1));
    this.nextButton.addEventListener("click", () => this.turnPage(1));
    pick<HTMLButtonElement>("retry").addEventListener("click", () => {
      this.track(this.start());
    });
    pick<HTMLButtonElement>("retrain").addEventListener("click", () => {
      this.track(this.retrain());
    });
  }

  /** Initial load; shows the error state instead of throwing. */
  async start(): Promise<void> {
    document.removeEventListener("keydown", this.onKey);
    document.addEventListener("keydown", this.onKey);
    try {
      await Promise.all([this.loadQueue(), this.loadModel()]);
      this.loadError = null;
      if (this.selectedId === null) this.selectFallback();
    } catch (err) {
      this.loadError = describe(err);
    }
    this.render();
  }

  /** Detach from the document; the root can then be discarded. */
  stop(): void {
    document.removeEventListener("keydown", this.onKey);
    this.stopped = true;
  }

  /** Resolves once every in-flight action (loads, decisions) has settled. */
  async whenIdle(): Promise<void> {
    while (this.inflight.size > 0) {
      await Promise.allSettled([...this.inflight]);
    }
  }

  select(id: string): void {
    this.selectedId = id;
    this.inlineMessage = null;
    this.render();
  }

  /**
   * Record a decision on the selected entry. The view flips immediately and
   * rolls back if the service refuses.
   */
  async decide(label: Label): Promise<void> {
    const item = this.selectedItem();
    if (!item) {
      this.inlineMessage = "select an entry first";
      this.render();
      return;
    }
    if (item.decision) {
      this.inlineMessage = "entry is already decided";
      this.render();
      return;
    }
    const reviewer = this.reviewerInput.value.trim();
    if (!reviewer) {
      this.inlineMessage = "set a reviewer name first";
      this.render();
      return;
    }

    const index = this.queue ? this.queue.items.indexOf(item) : 0;
    item.decision = {
      label,
      reviewer,
      note: "",
      decided_at: new Date().toISOString(),
    };
    this.inlineMessage = null;
    this.render();
    try {
      await this.api.decide(item.id, { label, reviewer });
      await this.loadQueue();
      this.selectNextPending(index);
      await this.loadModel();
    } catch (err) {
      item.decision = null;
      this.inlineMessage = describe(err);
    }
    this.render();
  }

  async retrain(): Promise<void> {
    this.noticeMessage = null;
    try {
      const result = await this.api.retrain();
      this.noticeMessage =
        `model v${result.model_version}: trained on ${result.trained_on} decisions, ` +
        `rescored ${result.rescored} pending entries`;
      await Promise.all([this.loadQueue(), this.loadModel()]);
    } catch (err) {
      this.noticeMessage = describe(err);
    }
    this.render();
  }

  private async refresh(): Promise<void> {
    try {
      await Promise.all([this.loadQueue(), this.loadModel()]);
      this.loadError = null;
      this.selectFallback();
    } catch (err) {
      this.loadError = describe(err);
    }
    this.render();
  }

  private async loadQueue(): Promise<void> {
    let page = await this.api.queue({
      status: this.status,
      page: this.page,
      page_size: PAGE_SIZE,
    });
    if (page.items.length === 0 && this.page > 1) {
      // the queue shrank under us; fall back to the first page
      this.page = 1;
      page = await this.api.queue({ status: this.status, page: 1, page_size: PAGE_SIZE });
    }
    this.queue = page;
  }

  private async loadModel(): Promise<void> {
    this.model = await this.api.model();
  }

  private turnPage(step: number): void {
    const pages = this.pageCount();
    const target = Math.min(Math.max(this.page + step, 1), pages);
    if (target === this.page) return;
    this.page = target;
    this.track(this.refresh());
  }

  private pageCount(): number {
    if (!this.queue) return 1;
    return Math.max(1, Math.ceil(this.queue.total / this.queue.page_size));
  }

  private selectedItem(): Entry | null {
    if (!this.queue || this.selectedId === null) return null;
    return this.queue.items.find((item) => item.id === this.selectedId) ?? null;
  }

  /** Keep the selection on a visible entry, preferring pending ones. */
  private selectFallback(): void {
    if (!this.queue) return;
    if (this.selectedItem()) return;
    const pending = this.queue.items.find((item) => !item.decision);
    this.selectedId = pending?.id ?? this.queue.items[0]?.id ?? null;
  }

  private selectNextPending(fromIndex: number): void {
    if (!this.queue) return;
    const items = this.queue.items;
    const after = items.find((item, i) => i >= fromIndex && !item.decision);
    const any = after ?? items.find((item) => !item.decision);
    if (any) {
      this.selectedId = any.id;
    } else {
      this.selectFallback();
    }
  }

  private track<T>(promise: Promise<T>): Promise<T> {
    this.inflight.add(promise);
    const done = () => this.inflight.delete(promise);
    promise.then(done, done);
    return promise;
  }

  private readonly onKey = (event: KeyboardEvent): void => {
    const target = event.target as HTMLElement | null;
    if (target && ["INPUT", "TEXTAREA", "SELECT"].includes(target.tagName)) return;
    const key = event.key.toUpperCase();
    if (key === "N" || key === "D" || key === "H") {
      this.track(this.decide(key as Label));
    }
  };

  // ------------------------------------------------------------- rendering

  private render(): void {
    if (this.stopped) return;
    this.renderBanner();
    this.renderNotice();
    this.renderErrorBanner();
    this.renderQueue();
    this.renderPager();
    this.renderDetail();
  }

  private renderBanner(): void {
    if (!this.model) {
      this.banner.textContent = "model —";
      return;
    }
    const m = this.model;
    this.banner.textContent =
      `model v${m.version} · ${m.cell} · ${m.entries_pending} pending of ${m.entries_total} · ` +
      `${m.decisions_since_retrain}/${m.min_new_decisions} decisions toward retrain`;
  }

  private renderNotice(): void {
    this.notice.hidden = this.noticeMessage === null;
    this.notice.textContent = this.noticeMessage ?? "";
  }

  private renderErrorBanner(): void {
    this.errorBanner.hidden = this.loadError === null;
    this.errorText.textContent = this.loadError ?? "";
  }

  private renderQueue(): void {
    this.queueList.textContent = "";
    if (!this.queue) return;
    if (this.queue.items.length === 0) {
      this.queueList.append(el("li", "queue-empty", `no ${this.status} entries`));
      return;
    }
    for (const item of this.queue.items) {
      const row = el("li", "queue-row");
      row.dataset.id = item.id;
      if (item.id === this.selectedId) row.classList.add("selected");
      row.append(el("span", "row-score", item.machine.svm_score.toFixed(2)));
      row.append(el("span", `badge label-${item.machine.label}`, item.machine.label));
      row.append(
        item.decision
          ? el("span", "badge status-decided", `decided · ${item.decision.label}`)
          : el("span", "badge status-pending", "pending"),
      );
      row.append(el("span", "row-text", truncate(item.text, 80)));
      row.addEventListener("click", () => this.select(item.id));
      this.queueList.append(row);
    }
  }

  private renderPager(): void {
    const pages = this.pageCount();
    this.pageLabel.textContent = `${this.page} / ${pages}`;
    this.prevButton.disabled = this.page <= 1;
    this.nextButton.disabled = this.page >= pages;
  }

  private renderDetail(): void {
    this.detailPane.textContent = "";
    const item = this.selectedItem();
    if (!item) {
      this.detailPane.append(el("p", "detail-empty", "select an entry to review"));
      if (this.inlineMessage) {
        this.detailPane.append(el("p", "inline-error", this.inlineMessage));
      }
      return;
    }

    const head = el("div", "detail-head");
    head.append(el("h2", "detail-id", item.id));
    head.append(el("span", "detail-source", item.source));
    head.append(el("span", "detail-timestamp", item.timestamp));
    this.detailPane.append(head);

    const body = el("div", "entry-text");
    for (const segment of segmentByByteSpans(item.text, item.machine.highlights)) {
      if (segment.kind === null) {
        body.append(document.createTextNode(segment.text));
      } else {
        const mark = el("span", `hl hl-${segment.kind}`, segment.text);
        if (segment.detail) mark.title = segment.detail;
        body.append(mark);
      }
    }
    this.detailPane.append(body);

    const legend = el("div", "legend");
    for (const [kind, title] of HIGHLIGHT_LEGEND) {
      const swatch = el("span", `legend-item hl-${kind}`, title);
      legend.append(swatch);
    }
    this.detailPane.append(legend);

    const summary = el("dl", "machine-summary");
    const pair = (term: string, value: string) => {
      summary.append(el("dt", undefined, term));
      summary.append(el("dd", undefined, value));
    };
    pair("machine label", item.machine.label);
    pair("svm score", item.machine.svm_score.toFixed(3));
    pair("rule label", item.machine.rule_label);
    const affect = item.machine.affect;
    pair(
      "affect",
      affect.emotive
        ? `value ${affect.emotive_value}${affect.emotions.length ? ` · ${affect.emotions.join(", ")}` : ""}`
        : "non-emotive",
    );
    pair("scored by", `model v${item.machine.model_version}`);
    this.detailPane.append(summary);

    const box = el("div", "decision-box");
    if (item.decision) {
      const d = item.decision;
      box.append(
        el(
          "div",
          "decision-record",
          `decided ${d.label} by ${d.reviewer} at ${d.decided_at}${d.note ? ` — ${d.note}` : ""}`,
        ),
      );
    }
    const actions = el("div", "decision-actions");
    for (const label of ["N", "D", "H"] as Label[]) {
      const button = el("button", `decide-btn decide-${label}`);
      button.type = "button";
      button.dataset.label = label;
      button.append(el("span", "decide-name", labelName(label)));
      button.append(el("kbd", undefined, label));
      button.disabled = item.decision !== null;
      button.addEventListener("click", () => this.track(this.decide(label)));
      actions.append(button);
    }
    box.append(actions);
    const inline = el("p", "inline-error", this.inlineMessage ?? "");
    inline.hidden = this.inlineMessage === null;
    box.append(inline);
    this.detailPane.append(box);
  }
}

function labelName(label: Label): string {
  switch (label) {
    case "N":
      return "Normal";
    case "D":
      return "Doubtful";
    case "H":
      return "Harmful";
  }
}

function truncate(text: string, limit: number): string {
  const chars = Array.from(text);
  if (chars.length <= limit) return text;
  return `${chars.slice(0, limit - 1).join("")}…`;
}

export function createApp(root: HTMLElement, options: AppOptions): TriageApp {
  return new TriageApp(root, options);
}
