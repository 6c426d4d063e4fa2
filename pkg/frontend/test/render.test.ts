import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import {
  CsvFormatError,
  PLOT_H,
  computeLayout,
  parseCsv,
  renderSvg,
  yScale,
} from "../src/render.js";

const FIXTURES = join(__dirname, "fixtures");
const read = (name: string) => readFileSync(join(FIXTURES, name), "utf8");

describe("parseCsv", () => {
  it("parses the generated sylow CSV", () => {
    const rows = parseCsv(read("sylow2_d50.csv"));
    expect(rows[0].label).toBe("0");
    expect(rows.map((r) => r.label)).toContain("(Z/2)^2");
    for (const r of rows) {
      expect(r.ciLo).toBeLessThanOrEqual(r.freq);
      expect(r.ciHi).toBeGreaterThanOrEqual(r.freq);
    }
  });

  it("names the missing column", () => {
    const bad = "group_label,empirical_freq,ci_lo,ci_hi,theory_value\n0,1,1,1,1\n";
    expect(() => parseCsv(bad)).toThrowError(CsvFormatError);
    expect(() => parseCsv(bad)).toThrowError(/missing column: theory_status/);
  });

  it("keeps empty theory cells as null", () => {
    const rows = parseCsv(read("small.csv"));
    expect(rows[2].theory).toBeNull();
  });
});

describe("geometry", () => {
  it("tallest bar is the trivial group for the sylow-2 data", () => {
    const rows = parseCsv(read("sylow2_d50.csv"));
    const layout = computeLayout(rows);
    const tallest = layout.bars.reduce((a, b) => (b.height > a.height ? b : a));
    expect(tallest.label).toBe("0");
  });

  it("bar heights encode the CSV values exactly", () => {
    const rows = parseCsv(read("sylow2_d50.csv"));
    const layout = computeLayout(rows);
    layout.bars.forEach((bar, i) => {
      expect(bar.value).toBe(rows[i].freq);
      expect(bar.height).toBe((PLOT_H * rows[i].freq) / layout.yMax);
    });
  });

  it("y scale covers intervals and theory marks", () => {
    const rows = parseCsv(read("small.csv"));
    expect(yScale(rows, true)).toBeCloseTo(0.6, 12);
    const noTheory = parseCsv(
      "group_label,empirical_freq,ci_lo,ci_hi,theory_value,theory_status\nA,0.02,0.01,0.03,0.9,theorem\n",
    );
    expect(yScale(noTheory, false)).toBeCloseTo(0.05, 12);
    expect(yScale(noTheory, true)).toBeCloseTo(0.9, 12);
  });

  it("all-zero frequencies still produce a well-formed layout", () => {
    const rows = parseCsv(
      "group_label,empirical_freq,ci_lo,ci_hi,theory_value,theory_status\nA,0,0,0,,\nB,0,0,0,,\n",
    );
    const layout = computeLayout(rows);
    expect(layout.yMax).toBeCloseTo(0.05, 12);
    for (const bar of layout.bars) {
      expect(bar.height).toBe(0);
    }
    expect(renderSvg(rows)).toContain("</svg>");
  });
});

describe("renderSvg", () => {
  it("matches the golden file byte for byte", () => {
    const svg = renderSvg(parseCsv(read("small.csv")), { title: "small fixture" });
    expect(svg).toBe(read("small_golden.svg"));
  });

  it("is a pure function of its input", () => {
    const rows = parseCsv(read("sylow2_d50.csv"));
    expect(renderSvg(rows)).toBe(renderSvg(rows));
  });

  it("draws one bar per row and theory dashes only when present", () => {
    const svg = renderSvg(parseCsv(read("small.csv")));
    const bars = svg.match(/fill="#4878a8"/g) ?? [];
    expect(bars.length).toBe(3);
    const dashes = svg.match(/stroke-dasharray/g) ?? [];
    expect(dashes.length).toBe(2); // third row has no theory value
  });

  it("omits theory marks with showTheory false", () => {
    const svg = renderSvg(parseCsv(read("small.csv")), { showTheory: false });
    expect(svg).not.toContain("stroke-dasharray");
  });

  it("renders a single-row file", () => {
    const svg = renderSvg(
      parseCsv("group_label,empirical_freq,ci_lo,ci_hi,theory_value,theory_status\nZ/3,0.5,0.4,0.6,,\n"),
    );
    expect((svg.match(/fill="#4878a8"/g) ?? []).length).toBe(1);
  });
});

describe("cli", () => {
  const cliPath = join(__dirname, "..", "dist", "cli.js");

  it("writes an SVG and exits 0", () => {
    const dir = mkdtempSync(join(tmpdir(), "plot-"));
    const out = join(dir, "chart.svg");
    execFileSync("node", [cliPath, "--in", join(FIXTURES, "sylow2_d50.csv"), "--out", out]);
    expect(readFileSync(out, "utf8")).toContain("<svg");
  });

  it("fails with the column name on malformed input", () => {
    const dir = mkdtempSync(join(tmpdir(), "plot-"));
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "group_label,empirical_freq\nA,0.5\n");
    let code = 0;
    let stderr = "";
    try {
      execFileSync("node", [cliPath, "--in", bad, "--out", join(dir, "x.svg")], {
        stdio: "pipe",
      });
    } catch (err: any) {
      code = err.status;
      stderr = String(err.stderr);
    }
    expect(code).toBe(2);
    expect(stderr).toContain("missing column: ci_lo");
  });
});
