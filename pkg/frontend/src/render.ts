import { writeFileSync } from "fs";
import { createRequire } from "module";

// echarts ships mismatched ESM/CJS typings under Node16 resolution; the CJS
// build via createRequire sidesteps the dual-package hazard.
const echarts: typeof import("echarts") = createRequire(import.meta.url)("echarts");
import { Table, num, readCsv } from "./csv.js";
import { FigureKind, validateColumns } from "./schemas.js";

export interface PlotSpec {
  kind: FigureKind;
  csvPath: string;
  outPath: string;
  width?: number;
  height?: number;
}

const BASE = {
  animation: false,
  backgroundColor: "#ffffff",
  grid: { left: 70, right: 30, top: 60, bottom: 60 },
};

function finite(rows: [number, number][]): [number, number][] {
  return rows.filter(([x, y]) => Number.isFinite(x) && Number.isFinite(y));
}

function gapPlateauOption(table: Table) {
  const chains = [...new Set(table.rows.map((r) => r["chain"] || "zero"))];
  const series = chains.map((chain) => ({
    name: chain,
    type: "line" as const,
    symbol: "circle",
    symbolSize: 7,
    data: finite(
      table.rows
        .filter((r) => (r["chain"] || "zero") === chain)
        .map((r) => [num(r, "n"), num(r, "n_times_gap")] as [number, number])
    ),
  }));
  return {
    ...BASE,
    title: { text: "Spectral gap scaling: n x gap plateau" },
    legend: { top: 28 },
    xAxis: { type: "log" as const, name: "n", nameLocation: "middle" as const, nameGap: 30 },
    yAxis: { type: "value" as const, name: "n x gap" },
    series,
  };
}

function mixingScalingOption(table: Table) {
  const pts = finite(
    table.rows.map((r) => [num(r, "n"), num(r, "tau_eps")] as [number, number])
  );
  const eps = table.rows.length ? table.rows[0]["eps"] : "?";
  const last = pts[pts.length - 1];
  const scale = last ? last[1] / (last[0] * Math.log(last[0])) : 1;
  const reference = pts.map(([n]) => [n, scale * n * Math.log(n)] as [number, number]);
  return {
    ...BASE,
    title: { text: `Mixing time tau(${eps}) against n log n` },
    legend: { top: 28 },
    xAxis: { type: "log" as const, name: "n", nameLocation: "middle" as const, nameGap: 30 },
    yAxis: { type: "log" as const, name: "steps" },
    series: [
      { name: "tau", type: "line" as const, symbol: "circle", symbolSize: 7, data: pts },
      {
        name: "c n log n",
        type: "line" as const,
        lineStyle: { type: "dashed" as const },
        symbol: "none",
        data: reference,
      },
    ],
  };
}

function convergenceOption(table: Table) {
  const metric = table.rows.length ? table.rows[0]["metric"] : "distance";
  const pts: [number, number][] = [];
  const lower: [number, number][] = [];
  const upper: [number, number][] = [];
  let hasBand = false;
  for (const r of table.rows) {
    const x = num(r, "length");
    const y = num(r, "value");
    const s = num(r, "stderr");
    if (!Number.isFinite(x) || !Number.isFinite(y) || y <= 0) continue;
    pts.push([x, y]);
    if (Number.isFinite(s) && s > 0) {
      hasBand = true;
      lower.push([x, Math.max(y - s, y * 1e-3)]);
      upper.push([x, y + s]);
    }
  }
  const series: object[] = [
    { name: metric, type: "line", symbol: "circle", symbolSize: 6, data: pts },
  ];
  if (hasBand) {
    series.push(
      {
        name: "-stderr",
        type: "line",
        symbol: "none",
        lineStyle: { width: 0.5, type: "dotted" },
        data: lower,
      },
      {
        name: "+stderr",
        type: "line",
        symbol: "none",
        lineStyle: { width: 0.5, type: "dotted" },
        data: upper,
      }
    );
  }
  return {
    ...BASE,
    title: { text: `Circuit-moment convergence (${metric})` },
    legend: { top: 28 },
    xAxis: { type: "value" as const, name: "circuit length", nameLocation: "middle" as const, nameGap: 30 },
    yAxis: { type: "log" as const, name: "distance" },
    series,
  };
}

function boundOverlayOption(table: Table) {
  const labels: string[] = [];
  const bounds: (number | null)[] = [];
  const empirical: (number | null)[] = [];
  for (const r of table.rows) {
    labels.push(r["experiment"]);
    const b = num(r, "bound");
    const e = num(r, "empirical_freq");
    bounds.push(Number.isFinite(b) && b > 0 ? b : null);
    empirical.push(Number.isFinite(e) && e > 0 ? e : null);
  }
  return {
    ...BASE,
    grid: { left: 70, right: 30, top: 60, bottom: 110 },
    title: { text: "Tail bounds against sampled frequencies" },
    legend: { top: 28 },
    xAxis: {
      type: "category" as const,
      data: labels,
      axisLabel: { rotate: 35 },
    },
    yAxis: { type: "log" as const, name: "probability / bound" },
    series: [
      { name: "bound", type: "scatter" as const, symbol: "diamond", symbolSize: 12, data: bounds },
      { name: "empirical", type: "scatter" as const, symbol: "circle", symbolSize: 10, data: empirical },
    ],
  };
}

const BUILDERS: Record<FigureKind, (t: Table) => object> = {
  "gap-plateau": gapPlateauOption,
  "mixing-scaling": mixingScalingOption,
  convergence: convergenceOption,
  "bound-overlay": boundOverlayOption,
};

export function renderSvg(spec: PlotSpec): string {
  const table = readCsv(spec.csvPath);
  validateColumns(spec.kind, table.columns);
  if (table.rows.length === 0) {
    throw new Error(`no data rows in ${spec.csvPath}`);
  }
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: spec.width ?? 860,
    height: spec.height ?? 520,
  });
  try {
    chart.setOption(BUILDERS[spec.kind](table));
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}

export function render(spec: PlotSpec): void {
  writeFileSync(spec.outPath, renderSvg(spec));
}
