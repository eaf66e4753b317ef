/** The approval decision rule, mirrored client-side.
 *
 * A vote that will finalize or reject the current version must ship a
 * signature over the follow-up timeline event, so the client forecasts
 * the outcome with the same arithmetic the engine applies.
 */

import { PolicyJson, ProposalJson } from "./api.js";

export type Outcome = "finalize" | "reject" | "pending";

export function totalWeight(policy: PolicyJson): number {
  return Object.values(policy.participants).reduce((a, b) => a + b, 0);
}

export function decisionOutcome(
  policy: PolicyJson,
  approveWeight: number,
  rejectWeight: number,
): Outcome {
  if (approveWeight >= policy.approval_threshold) return "finalize";
  if (totalWeight(policy) - rejectWeight < policy.approval_threshold) return "reject";
  return "pending";
}

export function forecastVote(
  policy: PolicyJson,
  proposal: ProposalJson,
  voter: string,
  decision: "approve" | "reject",
): Outcome {
  const votes = proposal.votes[String(proposal.current_version)] ?? [];
  let approve = 0;
  let reject = 0;
  for (const vote of votes) {
    const weight = policy.participants[vote.voter] ?? 0;
    if (vote.decision === "approve") approve += weight;
    else reject += weight;
  }
  const weight = policy.participants[voter] ?? 0;
  if (decision === "approve") approve += weight;
  else reject += weight;
  return decisionOutcome(policy, approve, reject);
}

export function hasVoted(proposal: ProposalJson, voter: string): boolean {
  const votes = proposal.votes[String(proposal.current_version)] ?? [];
  return votes.some((v) => v.voter === voter);
}
