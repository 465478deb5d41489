import { describe, expect, it } from "vitest";
import { parsePositionsCsv } from "../src/csv";

describe("parsePositionsCsv", () => {
  it("parses the dimer", () => {
    const { coords, issues } = parsePositionsCsv("0,0,0\n1.122462,0,0\n");
    expect(issues).toEqual([]);
    expect(coords).toEqual([0, 0, 0, 1_122_462, 0, 0]);
  });

  it("skips blank lines and trims fields", () => {
    const { coords, issues } = parsePositionsCsv("\n0, 0 ,0\n\n1.5,0,0\n");
    expect(issues).toEqual([]);
    expect(coords).toEqual([0, 0, 0, 1_500_000, 0, 0]);
  });

  it("reports the offending line for wrong column counts", () => {
    const { issues } = parsePositionsCsv("0,0\n1,2,3\n");
    expect(issues).toEqual([{ line: 1, message: "expected 3 fields, got 2" }]);
  });

  it("reports non-numeric fields per line", () => {
    const { issues } = parsePositionsCsv("0,0,0\n1,x,3\n");
    expect(issues[0].line).toBe(2);
    expect(issues[0].message).toContain("non-numeric");
  });

  it("rejects duplicates, negatives, out-of-range and tiny clusters", () => {
    expect(parsePositionsCsv("0,0,0\n0,0,0\n").issues[0].message).toContain("duplicate");
    expect(parsePositionsCsv("0,0,0\n-1,0,0\n").issues[0].message).toContain("non-negative");
    expect(parsePositionsCsv("0,0,0\n101,0,0\n").issues[0].message).toContain("100 sigma");
    expect(parsePositionsCsv("0,0,0\n").issues[0].message).toContain("at least 2");
  });

  it("returns no coords when any line is bad", () => {
    const { coords } = parsePositionsCsv("0,0,0\nbad\n1,0,0\n");
    expect(coords).toEqual([]);
  });
});
