/** Figure kinds and the CSV columns each one requires.
 *
 * The CSVs are the contract: a missing column is a hard error carrying the
 * exact column diff, never a guess.
 */

export type FigureKind =
  | "gap-plateau"
  | "mixing-scaling"
  | "convergence"
  | "bound-overlay";

export const FIGURE_KINDS: FigureKind[] = [
  "gap-plateau",
  "mixing-scaling",
  "convergence",
  "bound-overlay",
];

export const REQUIRED_COLUMNS: Record<FigureKind, string[]> = {
  "gap-plateau": ["n", "chain", "gap", "n_times_gap"],
  "mixing-scaling": ["n", "chain", "tau_eps", "eps"],
  convergence: ["n", "k", "length", "metric", "value", "stderr"],
  "bound-overlay": ["experiment", "params", "bound", "empirical_freq"],
};

export class SchemaError extends Error {
  constructor(kind: FigureKind, missing: string[], present: string[]) {
    super(
      `CSV does not match the '${kind}' schema: missing column(s) [${missing.join(
        ", "
      )}]; present: [${present.join(", ")}]`
    );
    this.name = "SchemaError";
  }
}

export function validateColumns(kind: FigureKind, columns: string[]): void {
  const missing = REQUIRED_COLUMNS[kind].filter((c) => !columns.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(kind, missing, columns);
  }
}
