/**
 * Figure styles: how a set of sweep tables becomes panels.
 *
 * fig1  one panel per spin; reference plus every dynamics variant found
 *       (meant for classical vs first-correction comparisons).
 * fig2  one panel per spin; reference plus the (exact-field) dynamics.
 * fig3  a single overlay panel: one dynamics curve per input file
 *       (anisotropy sweeps), reference curves dotted.
 */

import * as path from "path";
import { Panel, Series } from "./render";
import { SweepTable, spinLabel } from "./schema";

export const STYLES = ["fig1", "fig2", "fig3"] as const;
export type StyleName = (typeof STYLES)[number];

const REFERENCE_COLOR = "#d62728"; // red, solid

function dynamicsColor(model: string): { color: string; dash: string } {
  if (model === "classical") return { color: "#000000", dash: "6 4" };
  if (model.startsWith("hight")) return { color: "#ff7f0e", dash: "6 4" };
  return { color: "#1f77b4", dash: "6 4" }; // exact
}

function referenceSeries(table: SweepTable, label = "exact quantum"): Series {
  return {
    label,
    color: REFERENCE_COLOR,
    dash: "",
    x: table.rows.map((r) => r.temperature_K),
    y: table.rows.map((r) => r.oracle_mean_sz_over_s),
  };
}

function dynamicsSeries(table: SweepTable, label?: string): Series | null {
  if (!table.rows.some((r) => r.mean_mz !== null)) return null;
  const model = table.rows[0].model;
  const { color, dash } = dynamicsColor(model);
  return {
    label: label ?? model,
    color,
    dash,
    x: table.rows.map((r) => r.temperature_K),
    y: table.rows.map((r) => r.mean_mz),
    yerr: table.rows.map((r) => r.stderr_mz),
  };
}

function groupBySpin(tables: SweepTable[]): Map<number, SweepTable[]> {
  const groups = new Map<number, SweepTable[]>();
  for (const table of tables) {
    const twoS = table.rows.length > 0 ? table.rows[0].two_s : 0;
    const bucket = groups.get(twoS) ?? [];
    bucket.push(table);
    groups.set(twoS, bucket);
  }
  return new Map([...groups.entries()].sort((a, b) => a[0] - b[0]));
}

function stem(file: string): string {
  return path.basename(file).replace(/\.[^.]*$/, "");
}

function spinPanels(tables: SweepTable[]): Panel[] {
  const panels: Panel[] = [];
  for (const [twoS, group] of groupBySpin(tables)) {
    const series: Series[] = [referenceSeries(group[0])];
    for (const table of group) {
      const dyn = dynamicsSeries(table);
      if (dyn) series.push(dyn);
    }
    panels.push({ title: spinLabel(twoS), series });
  }
  return panels;
}

function overlayPanel(tables: SweepTable[]): Panel[] {
  const series: Series[] = [];
  for (const table of tables) {
    const ref = referenceSeries(table, `${stem(table.path)} exact`);
    ref.dash = "2 3";
    series.push(ref);
    const dyn = dynamicsSeries(table, stem(table.path));
    if (dyn) series.push(dyn);
  }
  const twoS = tables[0].rows.length > 0 ? tables[0].rows[0].two_s : 0;
  return [{ title: `${spinLabel(twoS)}, anisotropy sweep`, series }];
}

export function buildPanels(style: StyleName, tables: SweepTable[]): Panel[] {
  if (tables.length === 0) {
    throw new Error("no input tables");
  }
  return style === "fig3" ? overlayPanel(tables) : spinPanels(tables);
}
