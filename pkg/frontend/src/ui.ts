/** DOM rendering for the workbench panels.
 *
 * Renders into any Document-compatible object, so tests can drive it with
 * a light shim; the browser entry point in app.ts passes the real one.
 */

import { CertificateJson, TimelineEventJson } from "./api.js";
import { InboxItem } from "./inbox.js";
import { PayablePreview } from "./payable.js";
import { digestBadge, ProposalView } from "./proposal.js";

type Doc = Pick<Document, "createElement">;

function el(
  doc: Doc,
  tag: string,
  className: string,
  text?: string,
): HTMLElement {
  const node = doc.createElement(tag) as HTMLElement;
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderInbox(
  doc: Doc,
  items: InboxItem[],
  onOpen: (item: InboxItem) => void,
): HTMLElement {
  const root = el(doc, "ul", "inbox");
  if (items.length === 0) {
    root.appendChild(el(doc, "li", "inbox-empty", "nothing waiting on you"));
    return root;
  }
  for (const item of items) {
    const row = el(
      doc,
      "li",
      `inbox-item state-${item.state.toLowerCase()}`,
      `${item.periodId} v${item.currentVersion} [${item.state}] — ${item.actions.join(", ")}`,
    );
    (row as unknown as { onclick: () => void }).onclick = () => onOpen(item);
    root.appendChild(row);
  }
  return root;
}

export function renderProposal(doc: Doc, view: ProposalView): HTMLElement {
  const root = el(doc, "section", "proposal");
  const badge = digestBadge(view);
  const header = el(
    doc,
    "header",
    `digest-badge digest-${badge}`,
    badge === "green"
      ? `report digest anchored (${view.localDigest.slice(0, 16)}…)`
      : `report digest NOT verified: ${view.digestStatus}`,
  );
  root.appendChild(header);
  const list = el(doc, "ul", "metric-diff");
  for (const change of view.diff) {
    let text: string;
    switch (change.kind) {
      case "added":
        text = `+ ${change.name} = ${change.after}`;
        break;
      case "removed":
        text = `- ${change.name} (was ${change.before})`;
        break;
      case "changed":
        text = `~ ${change.name}: ${change.before} -> ${change.after} (Δ ${change.delta})`;
        break;
      default:
        text = `  ${change.name} = ${change.after}`;
    }
    list.appendChild(el(doc, "li", `metric-${change.kind}`, text));
  }
  root.appendChild(list);
  return root;
}

export function renderPayablePanel(doc: Doc, preview: PayablePreview): HTMLElement {
  const root = el(doc, "section", "payable");
  if (!preview.ok) {
    root.appendChild(el(doc, "p", "payable-error", `evaluation failed: ${preview.error}`));
    return root;
  }
  const list = el(doc, "ul", "payable-trace");
  for (const line of preview.lines) {
    list.appendChild(
      el(
        doc,
        "li",
        line.highlight ? "payable-total" : line.isDecision ? "payable-decision" : "payable-line",
        `${line.label} = ${line.value}`,
      ),
    );
  }
  root.appendChild(list);
  return root;
}

export function renderTimeline(doc: Doc, events: TimelineEventJson[]): HTMLElement {
  const root = el(doc, "ol", "timeline");
  for (const event of events) {
    root.appendChild(
      el(doc, "li", `event-${event.kind}`, `#${event.seq} ${event.kind} by ${event.actor} at ${event.timestamp}`),
    );
  }
  return root;
}

export function renderCertificate(doc: Doc, cert: CertificateJson): HTMLElement {
  const root = el(doc, "section", "certificate");
  root.appendChild(
    el(
      doc,
      "header",
      cert.verified ? "cert-ok" : "cert-bad",
      cert.verified
        ? `certificate verified (${cert.certificate_digest.slice(0, 16)}…)`
        : `certificate REJECTED: ${cert.verification_reason}`,
    ),
  );
  const votes = el(doc, "ul", "cert-votes");
  for (const vote of cert.votes) {
    votes.appendChild(el(doc, "li", `vote-${vote.decision}`, `${vote.voter}: ${vote.decision}`));
  }
  root.appendChild(votes);
  if (cert.payable) {
    root.appendChild(el(doc, "p", "cert-total", `payable total ${cert.payable.total}`));
  }
  return root;
}
