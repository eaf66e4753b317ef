/** Scripted session against a live backend service.
 *
 * Spawns the real service (secp256k1), then drives the console's own
 * action layer end to end: propose -> approve to threshold ->
 * certificate.  Every request flows through an intercepting fetch that
 * records the payloads; the private scalars must never appear in any of
 * them.  No browser binary exists in this environment, so the session is
 * scripted over the console's view-model and action modules, which is
 * the same code a browser would run.
 */

import { spawn, ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { observe, propose, signAndVote } from "../src/actions.js";
import { ApiClient, EnvelopeBody } from "../src/api.js";
import { bytesToHex } from "../src/bytes.js";
import { JsonValue } from "../src/canonical.js";
import { SECP256K1, serializePoint } from "../src/curves.js";
import { derivePublic } from "../src/ecdsa.js";
import { inbox } from "../src/inbox.js";
import { envelopeSigningDigest, payloadDigest } from "../src/layouts.js";
import { payablePreview } from "../src/payable.js";
import { buildProposalView, digestBadge } from "../src/proposal.js";
import { MemoryStorage, Session, SessionKey } from "../src/session.js";

const ALICE_D = 0x1f4c7a3d9e5b60217fa9d03c55aa11ee8899a03b4cd2e671fedcba9876543210n;
const BOB_D = 0x2a9e8d7c6b5a493827161504f3e2d1c0bfae9d8c7b6a59483726150493e2d1c0n;

let service: ChildProcess;
let endpoint = "";
let requests: { url: string; body: string }[] = [];

function interceptingFetch(input: string, init?: RequestInit): Promise<Response> {
  requests.push({ url: input, body: (init?.body as string) ?? "" });
  return fetch(input, init);
}

function sessionFor(d: bigint): SessionKey {
  const session = new Session(new MemoryStorage());
  return session.save(d.toString(16).padStart(64, "0"), "secp256k1");
}

beforeAll(async () => {
  const storeDir = mkdtempSync(join(tmpdir(), "ags-e2e-"));
  service = spawn(
    "python3",
    ["-m", "ags.cli", "--store", storeDir, "--curve", "secp256k1", "serve", "--addr", "127.0.0.1:0"],
    { stdio: ["ignore", "pipe", "inherit"] },
  );
  endpoint = await new Promise<string>((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error("service did not start")), 15000);
    service.stdout!.on("data", (chunk: Buffer) => {
      const match = chunk.toString().match(/listening on (http:\/\/[\d.]+:\d+)/);
      if (match) {
        clearTimeout(timer);
        resolve(match[1]);
      }
    });
  });
}, 20000);

afterAll(() => {
  service?.kill();
});

describe("scripted end-to-end session", () => {
  const alice = sessionFor(ALICE_D);
  const bob = sessionFor(BOB_D);
  let contractId = "";
  let proposalId = "";

  it("opens a contract via the operator CLI (session setup)", async () => {
    // contract creation is operator tooling, outside the console's scope;
    // the workbench session starts from an existing contract
    const policy = {
      participants: { [alice.address]: 1, [bob.address]: 1 },
      approval_threshold: 2,
      proposer_roles: [alice.address],
    };
    const program =
      "param base = 1000\nparam C = 100\nmetric U\n" +
      "payable: if U >= 99.9 then base else base - C * (99.9 - U)\n";
    const { execFileSync } = await import("node:child_process");
    const { writeFileSync } = await import("node:fs");
    const dir = mkdtempSync(join(tmpdir(), "ags-setup-"));
    writeFileSync(join(dir, "policy.json"), JSON.stringify(policy));
    writeFileSync(join(dir, "program.sla"), program);
    writeFileSync(
      join(dir, "alice.key"),
      JSON.stringify({ curve: "secp256k1", d: ALICE_D.toString(16).padStart(64, "0") }),
    );
    const out = execFileSync("python3", [
      "-m",
      "ags.cli",
      "--json",
      "--endpoint",
      endpoint,
      "--key",
      join(dir, "alice.key"),
      "contract",
      "create",
      "--policy",
      join(dir, "policy.json"),
      "--program",
      join(dir, "program.sla"),
    ]);
    contractId = JSON.parse(out.toString()).contract_id;
    expect(contractId).toMatch(/^[0-9a-f]{64}$/);
  }, 30000);

  it("alice proposes a report from the console", async () => {
    const api = new ApiClient(endpoint, interceptingFetch);
    const result = await propose(api, alice, {
      contract_id: contractId,
      period_id: "2023-04",
      version: 1,
      author: alice.address,
      metrics: { U: "99.4" },
      notes: "april measurement",
      attachment_digests: [],
    });
    expect(result.proposal?.state).toBe("PendingReview");
    proposalId = result.proposal!.proposal_id;
  }, 30000);

  it("bob sees the proposal in his inbox with a green digest badge", async () => {
    const api = new ApiClient(endpoint, interceptingFetch);
    const items = await inbox(api, [contractId], bob.address);
    expect(items).toHaveLength(1);
    expect(items[0].actions).toContain("vote");
    const view = await buildProposalView(api, proposalId);
    expect(digestBadge(view)).toBe("green");
  }, 30000);

  it("payable preview shows the penalty math", async () => {
    const api = new ApiClient(endpoint, interceptingFetch);
    const preview = await payablePreview(api, proposalId);
    expect(preview.ok).toBe(true);
    expect(preview.total).toBe("950");
    expect(preview.lines.some((l) => l.label === "U >= 99.9" && l.value === "false")).toBe(true);
    expect(preview.lines.some((l) => l.label === "C * (99.9 - U)" && l.value === "50")).toBe(true);
  }, 30000);

  it("bob observes, both approve, certificate issues and verifies", async () => {
    const api = new ApiClient(endpoint, interceptingFetch);
    let view = await api.proposal(proposalId);
    await observe(api, bob, view, "router logs agree");
    view = await api.proposal(proposalId);
    await signAndVote(api, bob, view, "approve");
    view = await api.proposal(proposalId);
    expect(view.state).toBe("PendingReview");
    const result = await signAndVote(api, alice, view, "approve");
    expect(result.proposal?.state).toBe("Finalized");

    const cert = await api.certificate(contractId, "2023-04");
    expect(cert.verified).toBe(true);
    expect(cert.payable?.total).toBe("950");
    expect(cert.votes).toHaveLength(2);

    // the deciding vote left bob's and alice's inbox
    expect(await inbox(api, [contractId], bob.address)).toEqual([]);
    expect(await inbox(api, [contractId], alice.address)).toEqual([]);
  }, 30000);

  it("no network payload ever contained a private key", () => {
    expect(requests.length).toBeGreaterThan(10);
    const secrets = [
      ALICE_D.toString(16).padStart(64, "0"),
      BOB_D.toString(16).padStart(64, "0"),
      ALICE_D.toString(16),
      BOB_D.toString(16),
      ALICE_D.toString(10),
      BOB_D.toString(10),
    ];
    for (const request of requests) {
      const haystack = (request.url + request.body).toLowerCase();
      for (const secret of secrets) {
        expect(haystack).not.toContain(secret.toLowerCase());
      }
    }
    // while the public halves do appear
    const alicePub = bytesToHex(serializePoint(derivePublic(ALICE_D, SECP256K1), SECP256K1));
    expect(requests.some((r) => r.body.includes(alicePub))).toBe(true);
  });

  it("envelope signatures were real (spot-check one against the layout)", async () => {
    const post = requests.find((r) => r.body.includes('"action":"proposal.propose"'));
    expect(post).toBeDefined();
    const envelope = JSON.parse(post!.body) as EnvelopeBody;
    const digest = payloadDigest(envelope.payload as JsonValue);
    const signing = envelopeSigningDigest(digest, envelope.nonce);
    const { verify, signatureFromBytes } = await import("../src/ecdsa.js");
    const { parsePoint } = await import("../src/curves.js");
    const { hexToBytes } = await import("../src/bytes.js");
    const pub = parsePoint(hexToBytes(envelope.pubkey), SECP256K1);
    expect(verify(pub, signing, signatureFromBytes(hexToBytes(envelope.sig), SECP256K1), SECP256K1)).toBe(true);
  });
});
