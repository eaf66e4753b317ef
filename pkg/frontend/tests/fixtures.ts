/** Helpers for building view JSON around the shared fixtures. */

import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

import { ContractJson, ProposalJson } from "../src/api.js";
import { ReportJson } from "../src/codec.js";

const fixturesDir = fileURLToPath(new URL("../../fixtures/", import.meta.url));

export function loadFixture<T>(name: string): T {
  return JSON.parse(readFileSync(fixturesDir + name, "utf-8")) as T;
}

interface CodecVectors {
  vectors: { report: ReportJson; canonical_bytes: string; digest: string }[];
}

interface SigVectors {
  vectors: { curve: string; d: string; address: string }[];
}

export function conformanceReport(): { report: ReportJson; digest: string } {
  const { vectors } = loadFixture<CodecVectors>("codecvectors.json");
  return { report: vectors[1].report, digest: vectors[1].digest };
}

export function toyAddresses(): string[] {
  const { vectors } = loadFixture<SigVectors>("sigvectors.json");
  const seen = new Map<string, string>();
  for (const vector of vectors) {
    if (vector.curve === "toy") seen.set(vector.d, vector.address);
  }
  return [...seen.values()];
}

export function proposalFixture(overrides: Partial<ProposalJson> = {}): ProposalJson {
  const { report, digest } = conformanceReport();
  return {
    proposal_id: "p".repeat(64),
    contract_id: report.contract_id,
    period_id: report.period_id,
    state: "PendingReview",
    current_version: 1,
    versions: [
      {
        version: 1,
        report: { ...report, notes: report.notes ?? "", attachment_digests: [] },
        report_digest: digest,
        anchor_ref: "contract/x/period/2023-04/v1",
      },
    ],
    votes: { "1": [] },
    observations: { "1": [] },
    next_seq: 2,
    ...overrides,
  };
}

export function contractFixture(
  participants: Record<string, number>,
  threshold: number,
  proposers: string[],
  proposalId: string,
): ContractJson {
  return {
    contract_id: proposalFixture().contract_id,
    policy: {
      participants,
      approval_threshold: threshold,
      proposer_roles: proposers,
    },
    program: "metric U\npayable: U",
    program_digest: "00".repeat(32),
    proposals: {
      "2023-04": { proposal_id: proposalId, state: "PendingReview", current_version: 1 },
    },
  };
}
