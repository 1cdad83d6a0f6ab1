/**
 * Parameter forms generated from GET /v1/ops, one per operation, so new
 * server-side stages show up in the UI without frontend changes.
 * Validation happens before any request: an invalid field shows an
 * inline error and nothing is sent.
 */

import type { OpSchema, ParamSchema, StageRequest } from "./types";

export type SubmitHandler = (stage: StageRequest) => void;

export function validateParam(schema: ParamSchema, raw: string): string | null {
  if (schema.kind === "int" || schema.kind === "seed") {
    if (!/^[+-]?\d+$/.test(raw.trim())) return `${schema.name} must be an integer`;
    if (schema.kind === "seed" && parseInt(raw, 10) < 0) {
      return `${schema.name} must be >= 0`;
    }
  }
  if (schema.kind === "enum" && schema.choices && !schema.choices.includes(raw)) {
    return `${schema.name} must be one of ${schema.choices.join(", ")}`;
  }
  return null;
}

function fieldFor(schema: ParamSchema, doc: Document): HTMLElement {
  const label = doc.createElement("label");
  label.className = "param";
  label.append(`${schema.name} `);
  if (schema.kind === "enum" && schema.choices) {
    const select = doc.createElement("select");
    select.name = schema.name;
    for (const choice of schema.choices) {
      const option = doc.createElement("option");
      option.value = choice;
      option.textContent = choice;
      option.selected = choice === schema.default;
      select.append(option);
    }
    label.append(select);
  } else {
    const input = doc.createElement("input");
    input.name = schema.name;
    input.value = schema.default;
    input.type = schema.kind === "str" ? "text" : "number";
    label.append(input);
  }
  return label;
}

export function buildOpForm(
  op: OpSchema,
  onSubmit: SubmitHandler,
  doc: Document = document,
): HTMLFormElement {
  const form = doc.createElement("form");
  form.className = `op-form op-${op.kind}`;
  form.dataset.op = op.name;

  const title = doc.createElement("strong");
  title.textContent = op.name;
  title.title = op.description;
  form.append(title);

  for (const param of op.params) {
    form.append(fieldFor(param, doc));
  }

  const error = doc.createElement("span");
  error.className = "form-error";
  const run = doc.createElement("button");
  run.type = "submit";
  run.textContent = "run";
  form.append(run, error);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const params: Record<string, string> = {};
    for (const param of op.params) {
      const field = form.elements.namedItem(param.name) as
        | HTMLInputElement
        | HTMLSelectElement;
      const message = validateParam(param, field.value);
      if (message) {
        error.textContent = message;
        return; // invalid: no request leaves the browser
      }
      params[param.name] = field.value;
    }
    error.textContent = "";
    onSubmit({ name: op.name, params });
  });
  return form;
}

export function buildOpsPanel(
  ops: OpSchema[],
  onSubmit: SubmitHandler,
  doc: Document = document,
): HTMLElement {
  const panel = doc.createElement("div");
  panel.className = "ops-panel";
  for (const kind of ["transformation", "analysis", "export"] as const) {
    const section = doc.createElement("section");
    const heading = doc.createElement("h3");
    heading.textContent = kind;
    section.append(heading);
    for (const op of ops.filter((o) => o.kind === kind)) {
      section.append(buildOpForm(op, onSubmit, doc));
    }
    panel.append(section);
  }
  return panel;
}
