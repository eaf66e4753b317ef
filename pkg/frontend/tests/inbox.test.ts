/** Inbox: only actionable proposals for the signed-in address. */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { inbox } from "../src/inbox.js";
import { contractFixture, proposalFixture, toyAddresses } from "./fixtures.js";
import { stubFetch } from "./stubserver.js";

const PID = "p".repeat(64);

describe("inbox", () => {
  const [alice, bob, carol] = toyAddresses();

  function routes(stateOverrides: Record<string, unknown> = {}) {
    const proposal = proposalFixture(stateOverrides as never);
    const contract = contractFixture({ [alice]: 2, [bob]: 1 }, 2, [alice], PID);
    return {
      [`/v1/contracts/${contract.contract_id}`]: contract,
      [`/v1/proposals/${PID}`]: proposal,
      contract,
    };
  }

  it("shows pending proposals with vote and observe actions", async () => {
    const { contract, ...rest } = routes();
    const { impl } = stubFetch(rest as Record<string, unknown>);
    const items = await inbox(new ApiClient("http://stub", impl), [contract.contract_id], bob);
    expect(items).toHaveLength(1);
    expect(items[0].actions).toEqual(["observe", "vote"]);
    expect(items[0].periodId).toBe("2023-04");
  });

  it("is empty for a non-participant", async () => {
    const { contract, ...rest } = routes();
    const { impl } = stubFetch(rest as Record<string, unknown>);
    const items = await inbox(new ApiClient("http://stub", impl), [contract.contract_id], carol);
    expect(items).toEqual([]);
  });

  it("omits finalized proposals", async () => {
    const { contract, ...rest } = routes({ state: "Finalized" });
    const { impl } = stubFetch(rest as Record<string, unknown>);
    const items = await inbox(new ApiClient("http://stub", impl), [contract.contract_id], bob);
    expect(items).toEqual([]);
  });

  it("offers resubmit to the proposer on a rejected proposal", async () => {
    const { contract, ...rest } = routes({ state: "Rejected" });
    const { impl } = stubFetch(rest as Record<string, unknown>);
    const aliceItems = await inbox(
      new ApiClient("http://stub", impl),
      [contract.contract_id],
      alice,
    );
    expect(aliceItems[0].actions).toEqual(["resubmit"]);
    const bobItems = await inbox(new ApiClient("http://stub", impl), [contract.contract_id], bob);
    expect(bobItems).toEqual([]);
  });

  it("hides the vote action after the user has voted", async () => {
    const voted = {
      votes: {
        "1": [
          {
            voter: bob,
            version: 1,
            decision: "approve",
            signature: "00",
            pubkey: "00",
            timestamp: "2024-01-01T00:00:00.000000Z",
          },
        ],
      },
    };
    const { contract, ...rest } = routes(voted);
    const { impl } = stubFetch(rest as Record<string, unknown>);
    const items = await inbox(new ApiClient("http://stub", impl), [contract.contract_id], bob);
    expect(items[0].actions).toEqual(["observe"]);
  });
});
