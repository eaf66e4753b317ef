/** The participant's inbox: proposals where this address may act now. */

import { ApiClient, ContractJson, ProposalJson } from "./api.js";
import { hasVoted } from "./rules.js";

export interface InboxItem {
  proposalId: string;
  contractId: string;
  periodId: string;
  state: ProposalJson["state"];
  currentVersion: number;
  actions: ("vote" | "observe" | "resubmit")[];
  lastEventTs: string;
}

function actionsFor(
  proposal: ProposalJson,
  contract: ContractJson,
  address: string,
): InboxItem["actions"] {
  const actions: InboxItem["actions"] = [];
  const participant = address in contract.policy.participants;
  if (!participant) return actions;
  if (proposal.state === "PendingReview") {
    actions.push("observe");
    if (!hasVoted(proposal, address)) actions.push("vote");
  } else if (
    proposal.state === "Rejected" &&
    contract.policy.proposer_roles.includes(address)
  ) {
    actions.push("resubmit");
  }
  return actions;
}

function lastTimestamp(proposal: ProposalJson): string {
  let latest = "";
  for (const votes of Object.values(proposal.votes)) {
    for (const vote of votes) if (vote.timestamp > latest) latest = vote.timestamp;
  }
  for (const observations of Object.values(proposal.observations)) {
    for (const obs of observations) if (obs.timestamp > latest) latest = obs.timestamp;
  }
  return latest;
}

export async function inbox(
  api: ApiClient,
  contractIds: string[],
  address: string,
): Promise<InboxItem[]> {
  const items: InboxItem[] = [];
  for (const contractId of contractIds) {
    const contract = await api.contract(contractId);
    for (const [periodId, summary] of Object.entries(contract.proposals)) {
      const proposal = await api.proposal(summary.proposal_id);
      const actions = actionsFor(proposal, contract, address);
      if (actions.length > 0) {
        items.push({
          proposalId: summary.proposal_id,
          contractId,
          periodId,
          state: proposal.state,
          currentVersion: proposal.current_version,
          actions,
          lastEventTs: lastTimestamp(proposal),
        });
      }
    }
  }
  // oldest first: the longest-waiting item is worked first
  items.sort((a, b) => (a.lastEventTs < b.lastEventTs ? -1 : 1));
  return items;
}
