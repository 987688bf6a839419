import { execFileSync, spawnSync } from "child_process";
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { beforeAll, describe, expect, it } from "vitest";

import { renderSvg } from "../src/render.js";
import { SchemaError, validateColumns } from "../src/schemas.js";

const SAMPLES = join(__dirname, "..", "samples");
const CLI = join(__dirname, "..", "dist", "cli.js");

const CASES: [string, string][] = [
  ["gap-plateau", "gap-scan.csv"],
  ["mixing-scaling", "mixing-scan.csv"],
  ["convergence", "circuit-converge.csv"],
  ["bound-overlay", "purity-exp.csv"],
  ["bound-overlay", "thermal-exp.csv"],
];

describe("figure rendering from shipped sample CSVs", () => {
  it.each(CASES)("renders %s from %s", (kind, csv) => {
    const svg = renderSvg({
      kind: kind as never,
      csvPath: join(SAMPLES, csv),
      outPath: "",
    });
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg).toContain("<path");
    expect(svg).toContain("<text");
  });

  it("renders deterministically across invocations", () => {
    // the renderer tags classes with a per-process instance counter, so the
    // byte-identical guarantee is per CLI invocation
    const dir = mkdtempSync(join(tmpdir(), "det-"));
    const a = join(dir, "a.svg");
    const b = join(dir, "b.svg");
    for (const out of [a, b]) {
      execFileSync("node", [CLI, "gap-plateau", join(SAMPLES, "gap-scan.csv"), "-o", out]);
    }
    expect(readFileSync(a, "utf8")).toBe(readFileSync(b, "utf8"));
  });
});

describe("schema validation", () => {
  it("rejects missing columns with the column diff", () => {
    expect(() => validateColumns("convergence", ["n", "chain", "gap"])).toThrowError(
      /missing column\(s\) \[k, length, metric, value, stderr\]/
    );
  });

  it("accepts supersets of the required columns", () => {
    expect(() =>
      validateColumns("gap-plateau", ["n", "chain", "gap", "n_times_gap", "tau_eps", "eps"])
    ).not.toThrow();
  });

  it("is a SchemaError for programmatic handling", () => {
    try {
      validateColumns("bound-overlay", ["a"]);
      expect.unreachable();
    } catch (err) {
      expect(err).toBeInstanceOf(SchemaError);
    }
  });
});

describe("command-line interface", () => {
  let dir: string;
  beforeAll(() => {
    dir = mkdtempSync(join(tmpdir(), "plots-"));
  });

  it.each(CASES)("writes an SVG for %s <- %s", (kind, csv) => {
    const out = join(dir, `${kind}-${csv}.svg`);
    execFileSync("node", [CLI, kind, join(SAMPLES, csv), "-o", out]);
    expect(existsSync(out)).toBe(true);
    expect(readFileSync(out, "utf8")).toContain("<svg");
  });

  it("exits 3 on a schema violation with the column diff on stderr", () => {
    const res = spawnSync("node", [
      CLI,
      "convergence",
      join(SAMPLES, "gap-scan.csv"),
      "-o",
      join(dir, "never.svg"),
    ]);
    expect(res.status).toBe(3);
    expect(res.stderr.toString()).toContain("missing column(s)");
  });

  it("exits 2 on usage errors", () => {
    expect(spawnSync("node", [CLI]).status).toBe(2);
    expect(spawnSync("node", [CLI, "not-a-kind", "x.csv", "-o", "y.svg"]).status).toBe(2);
  });

  it("exits 1 on an empty-data CSV", () => {
    const empty = join(dir, "empty.csv");
    writeFileSync(empty, "n,chain,gap,n_times_gap\n");
    const res = spawnSync("node", [CLI, "gap-plateau", empty, "-o", join(dir, "e.svg")]);
    expect(res.status).toBe(1);
    expect(res.stderr.toString()).toContain("no data rows");
  });
});
