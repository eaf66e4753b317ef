/** Per-metric diff between two report versions. */

import { compareDec, formatDec, parseDec, subtractDec } from "./decimals.js";

export interface MetricChange {
  name: string;
  kind: "added" | "removed" | "changed" | "unchanged";
  before?: string;
  after?: string;
  delta?: string;
}

export function diffMetrics(
  before: Record<string, string>,
  after: Record<string, string>,
): MetricChange[] {
  const names = [...new Set([...Object.keys(before), ...Object.keys(after)])].sort();
  const changes: MetricChange[] = [];
  for (const name of names) {
    const hasBefore = name in before;
    const hasAfter = name in after;
    if (!hasBefore) {
      changes.push({ name, kind: "added", after: after[name] });
    } else if (!hasAfter) {
      changes.push({ name, kind: "removed", before: before[name] });
    } else {
      const oldValue = parseDec(before[name]);
      const newValue = parseDec(after[name]);
      if (compareDec(oldValue, newValue) === 0) {
        changes.push({ name, kind: "unchanged", before: before[name], after: after[name] });
      } else {
        changes.push({
          name,
          kind: "changed",
          before: before[name],
          after: after[name],
          delta: formatDec(subtractDec(newValue, oldValue)),
        });
      }
    }
  }
  return changes;
}
