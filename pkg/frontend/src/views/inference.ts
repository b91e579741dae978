/** Inference panel: choose a dependent feature and predictors, submit to the
 * server, and show the coefficient table. All statistics come from the API;
 * the panel only validates the spec shape client-side (non-empty predictors,
 * no duplicates, dependent not among predictors) before submitting. A
 * session history records past fits together with the filter they ran under,
 * and can re-run a past spec against the current filter. */

import { clear, el } from "../dom.js";
import { formatNumber } from "../scales.js";
import type { InferencePayload, MetaPayload, ModelSpecBody } from "../types.js";

export interface FitRecord {
  spec: ModelSpecBody;
  filter: string | null;
  result: InferencePayload;
}

export interface InferenceHandlers {
  onSubmit(spec: ModelSpecBody): void;
  onRerun(spec: ModelSpecBody): void;
}

export function specProblems(spec: ModelSpecBody): string[] {
  const problems: string[] = [];
  if (!spec.dependent) problems.push("choose a dependent variable");
  if (!spec.predictors.length) problems.push("choose at least one predictor");
  if (new Set(spec.predictors).size !== spec.predictors.length) {
    problems.push("duplicate predictors");
  }
  if (spec.predictors.includes(spec.dependent)) {
    problems.push("dependent variable cannot also be a predictor");
  }
  return problems;
}

export function renderInference(
  container: HTMLElement,
  meta: MetaPayload,
  history: FitRecord[],
  error: string | null,
  handlers: InferenceHandlers,
): void {
  clear(container);
  container.appendChild(el("div", { class: "view-title" }, "Inference"));

  const variables = [...Object.keys(meta.features), ...meta.context_fields];
  const form = el("form", { class: "inference-form" });
  const dep = el("select", { class: "dependent-select", name: "dependent" });
  for (const v of variables) dep.appendChild(el("option", { value: v }, v));
  const preds = el("select", {
    class: "predictor-select",
    name: "predictors",
    multiple: "multiple",
    size: "6",
  });
  for (const v of variables) preds.appendChild(el("option", { value: v }, v));
  // duplicate selection is impossible by construction: a multi-select lists
  // each variable once, and the dependent is excluded at submit time
  const submit = el("button", { type: "submit", class: "fit-button" }, "fit model");
  form.appendChild(el("label", {}, "dependent"));
  form.appendChild(dep);
  form.appendChild(el("label", {}, "predictors"));
  form.appendChild(preds);
  form.appendChild(submit);
  const problemBox = el("div", { class: "spec-problems" });
  form.appendChild(problemBox);
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const spec: ModelSpecBody = {
      dependent: dep.value,
      predictors: Array.from(preds.selectedOptions).map((o) => o.value),
    };
    const problems = specProblems(spec);
    if (problems.length) {
      problemBox.textContent = problems.join("; ");
      return;
    }
    problemBox.textContent = "";
    handlers.onSubmit(spec);
  });
  container.appendChild(form);

  if (error) {
    container.appendChild(el("div", { class: "server-error" }, error));
  }

  const historyBox = el("div", { class: "fit-history" });
  for (let i = history.length - 1; i >= 0; i--) {
    historyBox.appendChild(fitCard(history[i], handlers));
  }
  container.appendChild(historyBox);
}

function fitCard(record: FitRecord, handlers: InferenceHandlers): HTMLElement {
  const { spec, result } = record;
  const card = el("div", { class: "fit-card" });
  card.appendChild(
    el(
      "div",
      { class: "fit-title" },
      `${spec.dependent} ~ ${spec.predictors.join(" + ")}`,
    ),
  );
  card.appendChild(
    el(
      "div",
      { class: "fit-filter" },
      record.filter ? `filter: ${record.filter}` : "filter: none",
    ),
  );

  const table = el("table", { class: "coef-table" });
  const head = el("tr", {});
  for (const h of ["term", "coef", "std err", "t", "p"]) {
    head.appendChild(el("th", {}, h));
  }
  table.appendChild(head);
  const m = result.model;
  m.terms.forEach((term, i) => {
    const tr = el("tr", { "data-term": term });
    tr.appendChild(el("td", {}, term));
    tr.appendChild(el("td", { class: "coef" }, formatNumber(m.coefficients[i], 4)));
    tr.appendChild(el("td", {}, formatNumber(m.std_errors[i], 4)));
    tr.appendChild(el("td", {}, formatNumber(m.t_stats[i], 3)));
    tr.appendChild(el("td", { class: "p-value" }, formatNumber(m.p_values[i], 4)));
    table.appendChild(tr);
  });
  card.appendChild(table);
  card.appendChild(
    el(
      "div",
      { class: "fit-stats" },
      `R²=${formatNumber(m.r_squared, 4)}, n=${m.n_observations}, dof=${m.dof}` +
        (m.excluded_rows ? `, ${m.excluded_rows} rows excluded` : ""),
    ),
  );
  const rerun = el("button", { type: "button", class: "rerun-button" }, "re-run");
  rerun.addEventListener("click", () => handlers.onRerun(spec));
  card.appendChild(rerun);
  return card;
}
