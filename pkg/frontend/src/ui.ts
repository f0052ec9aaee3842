/** Plain-DOM rendering.

Every score, level and count in the result panes is written with
String(value) on a field of a server response; the page never computes a
number of its own.  The query form is the one place numbers originate with
the user.
*/

import type { PartitionDoc } from "./api.js";
import type { SessionController } from "./controller.js";
import { canSubmit, emptyForm, quantizeDegree } from "./form.js";
import type { FormRow, QueryForm, QueryKind, SessionMode } from "./form.js";

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  for (const child of children) {
    node.append(typeof child === "string" ? doc.createTextNode(child) : child);
  }
  return node;
}

function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

// ---------------------------------------------------------------------------
// result panes
// ---------------------------------------------------------------------------

function renderSummary(target: HTMLElement, controller: SessionController): void {
  clear(target);
  const doc = target.ownerDocument;
  if (controller.kb === null) {
    target.append(el(doc, "p", { class: "muted" }, ["loading knowledge base..."]));
    return;
  }
  const counts = controller.kb.counts;
  target.append(
    el(doc, "p", {}, [
      el(doc, "strong", {}, [controller.kb.name]),
      ` · ${String(counts.objects)} objects, ${String(counts.goals)} goals, ` +
        `${String(counts.instances)} instances`,
    ]),
  );
}

function renderPartition(target: HTMLElement, partition: PartitionDoc | null): void {
  clear(target);
  const doc = target.ownerDocument;
  if (partition === null) {
    target.append(el(doc, "p", { class: "muted" }, ["no partition loaded"]));
    return;
  }
  const byLevel = new Map(partition.classes.map((cls) => [cls.level, cls]));
  for (const level of [4, 3, 2, 1]) {
    const cls = byLevel.get(level);
    const panel = el(doc, "section", { class: "panel", "data-level": String(level) });
    panel.append(el(doc, "h3", {}, [`level ${String(level)}`]));
    const members = cls === undefined ? [] : cls.members;
    if (members.length === 0) {
      panel.append(el(doc, "p", { class: "muted" }, ["(empty)"]));
    } else {
      const list = el(doc, "ul", { class: "members" });
      for (const member of members) {
        list.append(
          el(doc, "li", { "data-name": member.name }, [
            el(doc, "span", { class: "name" }, [member.name]),
            " ",
            el(doc, "span", { class: "score" }, [String(member.score)]),
          ]),
        );
      }
      panel.append(list);
    }
    target.append(panel);
  }
}

function outcomeMark(outcome: string): string {
  if (outcome === "accepted") return "✓";
  if (outcome === "rejected") return "✗";
  return "·";
}

function renderSession(target: HTMLElement, controller: SessionController): void {
  clear(target);
  const doc = target.ownerDocument;
  const view = controller.view;
  if (view === null) {
    target.append(el(doc, "p", { class: "muted" }, ["no session yet; describe a query and submit"]));
    return;
  }

  const status = el(doc, "p", { class: "status" }, [
    el(doc, "span", { class: "state", "data-state": view.state }, [view.state]),
    ` · ${view.mode} · query "${view.label}" · evaluations `,
    el(doc, "span", { class: "evaluations" }, [String(view.evaluations)]),
  ]);
  target.append(status);

  if (view.route.length > 0) {
    const route = el(doc, "p", { class: "route" }, ["route: "]);
    for (const level of view.route) {
      const visited = view.visitedLevels.includes(level);
      route.append(
        el(
          doc,
          "span",
          { class: visited ? "chip visited" : "chip", "data-level": String(level) },
          [String(level)],
        ),
        " ",
      );
    }
    target.append(route);
  }

  if (view.candidate !== null && view.state === "active") {
    const candidate = view.candidate;
    const disabled: Record<string, string> = controller.busy ? { disabled: "" } : {};
    const card = el(doc, "div", { class: "candidate" }, [
      el(doc, "p", {}, [
        "candidate ",
        el(doc, "strong", { class: "candidate-name" }, [candidate.name]),
        " score ",
        el(doc, "span", { class: "candidate-score" }, [String(candidate.score)]),
        candidate.level === null ? "" : " from level ",
        candidate.level === null
          ? ""
          : el(doc, "span", { class: "candidate-level" }, [String(candidate.level)]),
      ]),
    ]);
    const accept = el(doc, "button", { class: "accept", type: "button", ...disabled }, ["accept"]);
    const reject = el(doc, "button", { class: "reject", type: "button", ...disabled }, ["reject"]);
    accept.addEventListener("click", () => controller.accept());
    reject.addEventListener("click", () => controller.reject());
    card.append(accept, " ", reject);
    target.append(card);
  } else if (view.state === "accepted" && view.accepted !== null) {
    target.append(
      el(doc, "p", { class: "verdict accepted" }, [
        "accepted ",
        el(doc, "strong", {}, [view.accepted.name]),
        " with score ",
        el(doc, "span", { class: "accepted-score" }, [String(view.accepted.score)]),
      ]),
    );
  } else if (view.state === "exhausted") {
    target.append(
      el(doc, "p", { class: "verdict exhausted" }, [
        "no candidate was accepted; the knowledge base is exhausted",
      ]),
    );
  }

  if (view.history.length > 0) {
    const history = el(doc, "ol", { class: "history" });
    for (const entry of view.history) {
      history.append(
        el(doc, "li", { "data-outcome": entry.outcome, "data-name": entry.name }, [
          el(doc, "span", { class: "mark" }, [outcomeMark(entry.outcome)]),
          " ",
          el(doc, "span", { class: "name" }, [entry.name]),
          " ",
          el(doc, "span", { class: "score" }, [String(entry.score)]),
        ]),
      );
    }
    target.append(history);
  }

  if (view.incomparable.length > 0) {
    target.append(
      el(doc, "p", { class: "incomparable" }, [
        `could not compare: ${view.incomparable.join(", ")}`,
      ]),
    );
  }
}

function renderError(target: HTMLElement, controller: SessionController): void {
  clear(target);
  if (controller.error === null) return;
  const doc = target.ownerDocument;
  const box = el(doc, "div", { class: "error", role: "alert" }, [
    el(doc, "span", { class: "message" }, [`${controller.error.code}: ${controller.error.message}`]),
  ]);
  if (controller.error.canRetry) {
    const retry = el(doc, "button", { class: "retry", type: "button" }, ["retry"]);
    retry.addEventListener("click", () => controller.retry());
    box.append(" ", retry);
  }
  target.append(box);
}

// ---------------------------------------------------------------------------
// query form
// ---------------------------------------------------------------------------

interface FormHandles {
  element: HTMLFormElement;
  model(): QueryForm;
  setBusy(busy: boolean): void;
  addRow(row?: FormRow): void;
}

function buildForm(doc: Document, onSubmit: (form: QueryForm) => void): FormHandles {
  const form = el(doc, "form", { class: "query-form" });
  const kind = el(doc, "select", { class: "kind", name: "kind" }, [
    el(doc, "option", { value: "objects" }, ["objects"]),
    el(doc, "option", { value: "goals" }, ["goals"]),
  ]);
  const mode = el(doc, "select", { class: "mode", name: "mode" }, [
    el(doc, "option", { value: "routed" }, ["routed"]),
    el(doc, "option", { value: "exhaustive" }, ["exhaustive"]),
  ]);
  const label = el(doc, "input", { class: "label", name: "label", placeholder: "query label" });
  const rows = el(doc, "div", { class: "rows" });
  const add = el(doc, "button", { class: "add-row", type: "button" }, ["add row"]);
  const submit = el(doc, "button", { class: "submit", type: "submit", disabled: "" }, ["submit"]);
  form.append(
    el(doc, "div", { class: "controls" }, [kind, " ", mode, " ", label]),
    rows,
    el(doc, "div", { class: "actions" }, [add, " ", submit]),
  );

  let busy = false;

  const model = (): QueryForm => {
    const collected: FormRow[] = [];
    for (const row of rows.querySelectorAll<HTMLElement>(".row")) {
      const group = row.querySelector<HTMLInputElement>(".group");
      const option = row.querySelector<HTMLInputElement>(".option");
      const degree = row.querySelector<HTMLInputElement>(".degree");
      if (group === null || option === null || degree === null) continue;
      collected.push({
        group: group.value,
        option: option.value,
        degree: quantizeDegree(Number(degree.value)),
      });
    }
    return {
      kind: kind.value as QueryKind,
      mode: mode.value as SessionMode,
      label: label.value,
      rows: collected,
    };
  };

  const refreshSubmit = (): void => {
    submit.disabled = busy || !canSubmit(model());
  };

  const addRow = (preset?: FormRow): void => {
    const group = el(doc, "input", { class: "group", placeholder: "attribute or facet" });
    const option = el(doc, "input", { class: "option", placeholder: "option label" });
    const degree = el(doc, "input", {
      class: "degree",
      type: "range",
      min: "0",
      max: "1",
      step: "0.01",
      value: "0",
    });
    const shown = el(doc, "output", { class: "degree-value" }, ["0"]);
    if (preset !== undefined) {
      group.value = preset.group;
      option.value = preset.option;
      degree.value = String(quantizeDegree(preset.degree));
      shown.textContent = degree.value;
    }
    degree.addEventListener("input", () => {
      degree.value = String(quantizeDegree(Number(degree.value)));
      shown.textContent = degree.value;
      refreshSubmit();
    });
    for (const input of [group, option]) input.addEventListener("input", refreshSubmit);
    const remove = el(doc, "button", { class: "remove-row", type: "button" }, ["remove"]);
    const row = el(doc, "div", { class: "row" }, [group, " ", option, " ", degree, " ", shown, " ", remove]);
    remove.addEventListener("click", () => {
      row.remove();
      refreshSubmit();
    });
    rows.append(row);
    refreshSubmit();
  };

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const current = model();
    if (busy || !canSubmit(current)) return;
    onSubmit(current);
  });

  return {
    element: form,
    model,
    setBusy(next: boolean): void {
      busy = next;
      refreshSubmit();
    },
    addRow,
  };
}

// ---------------------------------------------------------------------------
// page assembly
// ---------------------------------------------------------------------------

export interface AppHandle {
  controller: SessionController;
  form: { addRow(row?: FormRow): void; element: HTMLFormElement };
  /** Wait until no operation started so far is still running. */
  settle(): Promise<void>;
}

export function mountApp(root: HTMLElement, controller: SessionController): AppHandle {
  const doc = root.ownerDocument;
  let pending: Promise<void> = Promise.resolve();
  const track = (operation: Promise<void>): Promise<void> => {
    pending = pending.then(() => operation);
    return operation;
  };

  const summary = el(doc, "div", { class: "kb-summary" });
  const errorBox = el(doc, "div", { class: "error-box" });
  const session = el(doc, "div", { class: "session-panel" });
  const partition = el(doc, "div", { class: "partition-panels" });

  const form = buildForm(doc, (model) => {
    void track(controller.submit(model));
  });

  clear(root);
  root.append(
    el(doc, "h1", {}, ["fuzzy network explorer"]),
    summary,
    el(doc, "h2", {}, ["query"]),
    form.element,
    errorBox,
    el(doc, "h2", {}, ["session"]),
    session,
    el(doc, "h2", {}, ["similarity classes"]),
    partition,
  );
  form.addRow();

  const render = (): void => {
    form.setBusy(controller.busy);
    renderSummary(summary, controller);
    renderError(errorBox, controller);
    renderSession(session, controller);
    renderPartition(partition, controller.partition);
  };
  controller.subscribe(render);
  render();

  // wrap the controller actions the session pane triggers so settle() sees them
  const accept = controller.accept.bind(controller);
  const reject = controller.reject.bind(controller);
  controller.accept = () => track(accept());
  controller.reject = () => track(reject());

  void track(controller.loadOverview());

  return {
    controller,
    form: { addRow: form.addRow, element: form.element },
    async settle(): Promise<void> {
      let settled = pending;
      await settled;
      while (settled !== pending) {
        settled = pending;
        await settled;
      }
    },
  };
}

export { emptyForm };
