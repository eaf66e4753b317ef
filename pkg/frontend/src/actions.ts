/** Signed action submission: votes, observations, proposals, resubmissions.
 *
 * Every byte that gets signed is built here from the displayed state; a
 * 409 from the server means the proposal moved underneath the user and
 * surfaces as StaleProposalError so the UI can prompt a refresh.
 */

import { ApiClient, ApiError, EnvelopeBody, ProposalJson } from "./api.js";
import { hexToBytes } from "./bytes.js";
import { JsonValue } from "./canonical.js";
import { reportDigest, ReportJson } from "./codec.js";
import {
  envelopeSigningDigest,
  eventSigningDigest,
  observationDigest,
  payloadDigest,
  voteBytes,
} from "./layouts.js";
import { forecastVote } from "./rules.js";
import { SessionKey } from "./session.js";
import { sha256 } from "./sha256.js";

export class StaleProposalError extends Error {
  constructor() {
    super("proposal changed, review the new version");
  }
}

async function nextNonce(api: ApiClient, address: string): Promise<number> {
  const health = await api.healthz();
  return (health.nonces[address] ?? 0) + 1;
}

async function submitEnvelope(
  api: ApiClient,
  key: SessionKey,
  action: string,
  path: string,
  payload: JsonValue,
): Promise<{ proposal?: ProposalJson }> {
  const nonce = await nextNonce(api, key.address);
  const digest = payloadDigest(payload);
  const envelope: EnvelopeBody = {
    actor: key.address,
    action,
    payload,
    nonce,
    pubkey: key.pubkeyHex(),
    sig: key.signDigestHex(envelopeSigningDigest(digest, nonce)),
  };
  try {
    return await api.submit(path, envelope);
  } catch (error) {
    if (error instanceof ApiError && error.status === 409) {
      throw new StaleProposalError();
    }
    throw error;
  }
}

/** Sign and cast a vote on the version currently displayed. */
export async function signAndVote(
  api: ApiClient,
  key: SessionKey,
  proposal: ProposalJson,
  decision: "approve" | "reject",
): Promise<{ proposal?: ProposalJson }> {
  const contract = await api.contract(proposal.contract_id);
  const version = proposal.current_version;
  const entry = proposal.versions[version - 1];
  const vb = voteBytes(
    proposal.contract_id,
    proposal.period_id,
    version,
    decision,
    entry.report_digest,
  );
  const voteDigest = sha256(vb);
  const seq = proposal.next_seq;
  const payload: Record<string, JsonValue> = {
    contract_id: proposal.contract_id,
    period_id: proposal.period_id,
    version,
    decision,
    expected_seq: seq,
    vote_sig: key.signDigestHex(voteDigest),
    event_sig: key.signDigestHex(eventSigningDigest("voted", voteDigest, seq)),
  };
  const outcome = forecastVote(contract.policy, proposal, key.address, decision);
  if (outcome !== "pending") {
    const kind = outcome === "finalize" ? "finalized" : "rejected";
    payload["transition_sig"] = key.signDigestHex(
      eventSigningDigest(kind, hexToBytes(entry.report_digest), seq + 1),
    );
  }
  return submitEnvelope(
    api,
    key,
    "proposal.vote",
    `/v1/proposals/${proposal.proposal_id}/votes`,
    payload,
  );
}

export async function observe(
  api: ApiClient,
  key: SessionKey,
  proposal: ProposalJson,
  text: string,
): Promise<{ proposal?: ProposalJson }> {
  const seq = proposal.next_seq;
  const payload: Record<string, JsonValue> = {
    contract_id: proposal.contract_id,
    period_id: proposal.period_id,
    text,
    expected_seq: seq,
    event_sig: key.signDigestHex(eventSigningDigest("observed", observationDigest(text), seq)),
  };
  return submitEnvelope(
    api,
    key,
    "proposal.observe",
    `/v1/proposals/${proposal.proposal_id}/observations`,
    payload,
  );
}

export async function propose(
  api: ApiClient,
  key: SessionKey,
  report: ReportJson,
): Promise<{ proposal?: ProposalJson }> {
  const digest = reportDigest(report);
  const payload: Record<string, JsonValue> = {
    report: report as unknown as JsonValue,
    report_sig: key.signDigestHex(digest),
    event_sig: key.signDigestHex(eventSigningDigest("proposed", digest, 1)),
  };
  return submitEnvelope(
    api,
    key,
    "proposal.propose",
    `/v1/contracts/${report.contract_id}/proposals`,
    payload,
  );
}

export async function resubmit(
  api: ApiClient,
  key: SessionKey,
  proposal: ProposalJson,
  report: ReportJson,
): Promise<{ proposal?: ProposalJson }> {
  const digest = reportDigest(report);
  const seq = proposal.next_seq;
  const payload: Record<string, JsonValue> = {
    report: report as unknown as JsonValue,
    report_sig: key.signDigestHex(digest),
    event_sig: key.signDigestHex(eventSigningDigest("resubmitted", digest, seq)),
    expected_seq: seq,
  };
  return submitEnvelope(
    api,
    key,
    "proposal.resubmit",
    `/v1/proposals/${proposal.proposal_id}/resubmit`,
    payload,
  );
}
