/** Proposal snapshot assembly: metric diffs plus digest verification.
 *
 * The digest badge is computed locally: the report fetched from the
 * server is re-encoded and hashed here, then compared against the
 * server-claimed digest *and* the anchor chain entry.  A mismatch means
 * the server returned a report that is not what was anchored.
 */

import { ApiClient, ProposalJson } from "./api.js";
import { bytesToHex } from "./bytes.js";
import { reportDigest } from "./codec.js";
import { diffMetrics, MetricChange } from "./diff.js";

export type DigestStatus = "verified" | "mismatch" | "unanchored";

export interface ProposalView {
  proposal: ProposalJson;
  diff: MetricChange[];
  localDigest: string;
  digestStatus: DigestStatus;
  anchorHeights: number[];
}

export async function buildProposalView(
  api: ApiClient,
  proposalId: string,
): Promise<ProposalView> {
  const proposal = await api.proposal(proposalId);
  const current = proposal.versions[proposal.current_version - 1];
  const previous =
    proposal.current_version > 1 ? proposal.versions[proposal.current_version - 2] : null;
  const diff = diffMetrics(previous?.report.metrics ?? {}, current.report.metrics);

  const localDigest = bytesToHex(reportDigest(current.report));
  let digestStatus: DigestStatus;
  let anchorHeights: number[] = [];
  if (localDigest !== current.report_digest) {
    digestStatus = "mismatch";
  } else {
    const hits = await api.anchors(localDigest);
    anchorHeights = hits.map((h) => h.height);
    digestStatus = hits.length > 0 ? "verified" : "unanchored";
  }
  return { proposal, diff, localDigest, digestStatus, anchorHeights };
}

/** Badge color: green only when the locally recomputed digest is anchored. */
export function digestBadge(view: ProposalView): "green" | "red" {
  return view.digestStatus === "verified" ? "green" : "red";
}
