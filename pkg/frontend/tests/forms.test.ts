import { describe, expect, it, vi } from "vitest";

import { buildOpForm, buildOpsPanel, validateParam } from "../src/forms";
import type { OpSchema } from "../src/types";

const ADDER: OpSchema = {
  name: "generate.adder",
  kind: "transformation",
  description: "Ripple-carry adder on 2n+2 wires",
  params: [{ name: "n", kind: "int", default: "4" }],
};

const REWRITE: OpSchema = {
  name: "rewrite",
  kind: "transformation",
  description: "Template optimization",
  params: [
    { name: "objective", kind: "enum", default: "gate_count", choices: ["gate_count", "t_count"] },
    { name: "budget", kind: "int", default: "100000" },
  ],
};

describe("validateParam", () => {
  it("accepts integers and rejects junk", () => {
    expect(validateParam({ name: "n", kind: "int", default: "4" }, "12")).toBeNull();
    expect(validateParam({ name: "n", kind: "int", default: "4" }, "-3")).toBeNull();
    expect(validateParam({ name: "n", kind: "int", default: "4" }, "four")).toMatch(/integer/);
  });

  it("rejects negative seeds", () => {
    expect(validateParam({ name: "seed", kind: "seed", default: "0" }, "-1")).toMatch(/>= 0/);
  });

  it("checks enum membership", () => {
    const schema = { name: "objective", kind: "enum" as const, default: "a", choices: ["a", "b"] };
    expect(validateParam(schema, "a")).toBeNull();
    expect(validateParam(schema, "c")).toMatch(/one of/);
  });
});

describe("buildOpForm", () => {
  it("renders one integer field with the schema default", () => {
    const form = buildOpForm(ADDER, () => {}, document);
    const input = form.elements.namedItem("n") as HTMLInputElement;
    expect(input.value).toBe("4");
    expect(input.type).toBe("number");
  });

  it("renders enums as selects with the default chosen", () => {
    const form = buildOpForm(REWRITE, () => {}, document);
    const select = form.elements.namedItem("objective") as HTMLSelectElement;
    expect(select.tagName).toBe("SELECT");
    expect(select.value).toBe("gate_count");
  });

  it("submits the edited parameters", () => {
    const onSubmit = vi.fn();
    const form = buildOpForm(ADDER, onSubmit, document);
    (form.elements.namedItem("n") as HTMLInputElement).value = "8";
    form.dispatchEvent(new Event("submit", { cancelable: true }));
    expect(onSubmit).toHaveBeenCalledWith({ name: "generate.adder", params: { n: "8" } });
  });

  it("shows an inline error and sends nothing when invalid", () => {
    const onSubmit = vi.fn();
    const form = buildOpForm(ADDER, onSubmit, document);
    (form.elements.namedItem("n") as HTMLInputElement).value = "-x";
    form.dispatchEvent(new Event("submit", { cancelable: true }));
    expect(onSubmit).not.toHaveBeenCalled();
    expect(form.querySelector(".form-error")!.textContent).toMatch(/integer/);
  });
});

describe("buildOpsPanel", () => {
  it("groups operations by component kind", () => {
    const panel = buildOpsPanel([ADDER, REWRITE], () => {}, document);
    const headings = [...panel.querySelectorAll("h3")].map((h) => h.textContent);
    expect(headings).toEqual(["transformation", "analysis", "export"]);
    expect(panel.querySelectorAll("form")).toHaveLength(2);
  });
});
