/** Browser entry point: wires session, API, and panels together. */

import { ApiClient } from "./api.js";
import { observe, signAndVote, StaleProposalError } from "./actions.js";
import { inbox } from "./inbox.js";
import { payablePreview } from "./payable.js";
import { buildProposalView } from "./proposal.js";
import { Session } from "./session.js";
import {
  renderCertificate,
  renderInbox,
  renderPayablePanel,
  renderProposal,
  renderTimeline,
} from "./ui.js";

export interface AppConfig {
  endpoint: string;
}

export function startApp(root: HTMLElement, config: AppConfig): void {
  const doc = root.ownerDocument;
  const session = new Session(window.localStorage);
  const key = session.load();
  if (key === null) {
    root.textContent = "no session key; store one under ags.session.key";
    return;
  }
  const api = new ApiClient(config.endpoint);

  async function showProposal(proposalId: string): Promise<void> {
    const view = await buildProposalView(api, proposalId);
    const panel = renderProposal(doc, view);
    const preview = await payablePreview(api, proposalId);
    panel.appendChild(renderPayablePanel(doc, preview));
    panel.appendChild(renderTimeline(doc, await api.timeline(proposalId)));
    if (view.proposal.state === "Finalized") {
      const cert = await api.certificate(view.proposal.contract_id, view.proposal.period_id);
      panel.appendChild(renderCertificate(doc, cert));
    } else {
      for (const decision of ["approve", "reject"] as const) {
        const button = doc.createElement("button");
        button.className = `vote-${decision}`;
        button.textContent = decision;
        button.onclick = async () => {
          try {
            await signAndVote(api, key!, view.proposal, decision);
          } catch (error) {
            if (error instanceof StaleProposalError) {
              button.textContent = error.message;
            } else {
              throw error;
            }
          }
          await refresh();
        };
        panel.appendChild(button);
      }
      const note = doc.createElement("button");
      note.className = "observe";
      note.textContent = "observe";
      note.onclick = async () => {
        const text = window.prompt("observation") ?? "";
        if (text) await observe(api, key!, view.proposal, text);
        await refresh();
      };
      panel.appendChild(note);
    }
    root.replaceChildren(panel);
  }

  async function refresh(): Promise<void> {
    const items = await inbox(api, session.watchedContracts(), key!.address);
    root.replaceChildren(
      renderInbox(doc, items, (item) => void showProposal(item.proposalId)),
    );
  }

  void refresh();
}
