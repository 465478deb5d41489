// Client-side mirror of the node's positions-CSV grammar, used only to gate
// the submit button and feed the plot. The node re-parses submitted CSV
// authoritatively, so this parser favors clear per-line errors over
// bit-exact rounding.

export interface CsvIssue {
  line: number;
  message: string;
}

export interface ParsedCsv {
  /** Flat micro-sigma coordinates, x0,y0,z0,x1,... */
  coords: number[];
  issues: CsvIssue[];
}

const COORD_MAX = 100_000_000; // 100 sigma in micro-sigma

export function parsePositionsCsv(text: string): ParsedCsv {
  const coords: number[] = [];
  const issues: CsvIssue[] = [];
  const seen = new Set<string>();
  const lines = text.split(/\r?\n/);
  lines.forEach((raw, index) => {
    const line = raw.trim();
    if (!line) return;
    const lineNo = index + 1;
    const fields = line.split(",");
    if (fields.length !== 3) {
      issues.push({ line: lineNo, message: `expected 3 fields, got ${fields.length}` });
      return;
    }
    const point: number[] = [];
    for (const field of fields) {
      const value = Number(field.trim());
      if (field.trim() === "" || !Number.isFinite(value)) {
        issues.push({ line: lineNo, message: `non-numeric field "${field.trim()}"` });
        return;
      }
      const micro = Math.round(value * 1_000_000);
      if (micro < 0) {
        issues.push({ line: lineNo, message: "coordinates must be non-negative" });
        return;
      }
      if (micro > COORD_MAX) {
        issues.push({ line: lineNo, message: "coordinate exceeds 100 sigma" });
        return;
      }
      point.push(micro);
    }
    const key = point.join(",");
    if (seen.has(key)) {
      issues.push({ line: lineNo, message: "duplicate particle position" });
      return;
    }
    seen.add(key);
    coords.push(...point);
  });
  const n = coords.length / 3;
  if (issues.length === 0 && n < 2) {
    issues.push({ line: Math.max(lines.length, 1), message: "need at least 2 particles" });
  }
  if (issues.length === 0 && n > 50) {
    issues.push({ line: lines.length, message: "at most 50 particles" });
  }
  return { coords: issues.length === 0 ? coords : [], issues };
}
