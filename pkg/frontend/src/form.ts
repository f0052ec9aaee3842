/** Query form model: rows of (group, option, degree) edited with sliders.

For an objects query each distinct group becomes one simple attribute; for
a goals query each group becomes one facet.  Degrees are quantized to the
slider step of 0.01 and clamped into [0, 1].
*/

export type QueryKind = "objects" | "goals";
export type SessionMode = "routed" | "exhaustive";

export interface FormRow {
  group: string;
  option: string;
  degree: number;
}

export interface QueryForm {
  kind: QueryKind;
  mode: SessionMode;
  label: string;
  rows: FormRow[];
}

export function emptyForm(): QueryForm {
  return { kind: "objects", mode: "routed", label: "", rows: [] };
}

export function quantizeDegree(raw: number): number {
  if (Number.isNaN(raw)) return 0;
  const clamped = Math.min(1, Math.max(0, raw));
  return Math.round(clamped * 100) / 100;
}

function complete(row: FormRow): boolean {
  return row.group.trim() !== "" && row.option.trim() !== "" && row.degree > 0;
}

/** The form can be sent once it describes at least one positive degree. */
export function canSubmit(form: QueryForm): boolean {
  return form.rows.some(complete);
}

function groupedDegrees(rows: FormRow[]): Map<string, Record<string, number>> {
  const groups = new Map<string, Record<string, number>>();
  for (const row of rows) {
    if (!complete(row)) continue;
    const name = row.group.trim();
    let degrees = groups.get(name);
    if (degrees === undefined) {
      degrees = {};
      groups.set(name, degrees);
    }
    degrees[row.option.trim()] = quantizeDegree(row.degree);
  }
  return groups;
}

export function toRequestBody(form: QueryForm): Record<string, unknown> {
  const groups = groupedDegrees(form.rows);
  let description: Record<string, unknown>;
  if (form.kind === "objects") {
    description = {
      attributes: [...groups.entries()].map(([name, possible]) => ({
        name,
        kind: "simple",
        possible,
      })),
    };
  } else {
    const facets: Record<string, unknown> = {};
    for (const [name, possible] of groups.entries()) {
      facets[name] = { possible };
    }
    description = { facets };
  }
  const body: Record<string, unknown> = {
    kind: form.kind,
    mode: form.mode,
    description,
  };
  const label = form.label.trim();
  if (label !== "") body.label = label;
  return body;
}
