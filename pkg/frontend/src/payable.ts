/** Payable preview: dry-run evaluation rendered as labeled lines. */

import { ApiClient, PayableViewJson } from "./api.js";

export interface PayableLine {
  label: string;
  value: string;
  isDecision: boolean;
  highlight: boolean;
}

export interface PayablePreview {
  ok: boolean;
  error?: string;
  total?: string;
  lines: PayableLine[];
  programDigest?: string;
}

export function renderPayable(view: PayableViewJson): PayablePreview {
  const lines: PayableLine[] = view.trace.map((entry) => ({
    label: entry.label,
    value: typeof entry.value === "boolean" ? (entry.value ? "true" : "false") : entry.value,
    isDecision: typeof entry.value === "boolean",
    highlight: entry.label === "payable",
  }));
  return {
    ok: true,
    total: view.statement.total,
    lines,
    programDigest: view.statement.program_digest,
  };
}

/** Evaluation failures surface inline; voting stays enabled regardless. */
export async function payablePreview(
  api: ApiClient,
  proposalId: string,
): Promise<PayablePreview> {
  try {
    return renderPayable(await api.payable(proposalId));
  } catch (error) {
    return { ok: false, error: error instanceof Error ? error.message : String(error), lines: [] };
  }
}
