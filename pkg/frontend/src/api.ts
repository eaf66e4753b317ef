/** Typed REST client over fetch (injectable for tests and interception). */

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface PolicyJson {
  participants: Record<string, number>;
  approval_threshold: number;
  proposer_roles: string[];
}

export interface VoteJson {
  voter: string;
  version: number;
  decision: "approve" | "reject";
  signature: string;
  pubkey: string;
  timestamp: string;
}

export interface VersionJson {
  version: number;
  report: {
    contract_id: string;
    period_id: string;
    version: number;
    author: string;
    metrics: Record<string, string>;
    notes: string;
    attachment_digests: string[];
  };
  report_digest: string;
  anchor_ref: string;
}

export interface ProposalJson {
  proposal_id: string;
  contract_id: string;
  period_id: string;
  state: "PendingReview" | "Rejected" | "Finalized";
  current_version: number;
  versions: VersionJson[];
  votes: Record<string, VoteJson[]>;
  observations: Record<
    string,
    { author: string; version: number; text: string; timestamp: string; seq: number }[]
  >;
  next_seq: number;
  certificate?: CertificateJson;
}

export interface CertificateJson {
  contract_id: string;
  period_id: string;
  final_version: number;
  report_digest: string;
  payable_digest: string;
  votes: { voter: string; decision: string; signature: string; pubkey: string }[];
  timeline_digest: string;
  anchor_ref: string;
  certificate_digest: string;
  verified?: boolean;
  verification_reason?: string;
  payable?: PayableStatementJson;
}

export interface PayableStatementJson {
  line_items: { label: string; amount: string }[];
  total: string;
  input_digest: string;
  program_digest: string;
  payable_digest: string;
}

export interface PayableViewJson {
  proposal_id: string;
  version: number;
  statement: PayableStatementJson;
  trace: { label: string; value: string | boolean }[];
}

export interface ContractJson {
  contract_id: string;
  policy: PolicyJson;
  program: string;
  program_digest: string;
  proposals: Record<string, { proposal_id: string; state: string; current_version: number }>;
}

export interface TimelineEventJson {
  seq: number;
  kind: string;
  actor: string;
  payload_digest: string;
  signature: string;
  pubkey: string;
  timestamp: string;
  digest: string;
}

export interface HealthJson {
  store_height: number;
  chain_height: number;
  chain_tip: string;
  nonces: Record<string, number>;
}

export interface AnchorHit {
  height: number;
  index: number;
  kind: string;
  ref: string;
}

export interface EnvelopeBody {
  actor: string;
  action: string;
  payload: unknown;
  nonce: number;
  pubkey: string;
  sig: string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private endpoint: string,
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {
    this.endpoint = endpoint.replace(/\/$/, "");
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(this.endpoint + path, {
      method,
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    const data = text ? JSON.parse(text) : null;
    if (!response.ok) {
      throw new ApiError(response.status, data?.error ?? response.statusText);
    }
    return data as T;
  }

  healthz(): Promise<HealthJson> {
    return this.request("GET", "/v1/healthz");
  }

  contract(contractId: string): Promise<ContractJson> {
    return this.request("GET", `/v1/contracts/${contractId}`);
  }

  proposal(proposalId: string): Promise<ProposalJson> {
    return this.request("GET", `/v1/proposals/${proposalId}`);
  }

  timeline(proposalId: string): Promise<TimelineEventJson[]> {
    return this.request("GET", `/v1/proposals/${proposalId}/timeline`);
  }

  payable(proposalId: string): Promise<PayableViewJson> {
    return this.request("GET", `/v1/proposals/${proposalId}/payable`);
  }

  certificate(contractId: string, periodId: string): Promise<CertificateJson> {
    return this.request("GET", `/v1/contracts/${contractId}/certificates/${periodId}`);
  }

  anchors(digestHex: string): Promise<AnchorHit[]> {
    return this.request("GET", `/v1/anchors?digest=${digestHex}`);
  }

  submit(path: string, envelope: EnvelopeBody): Promise<{ proposal?: ProposalJson }> {
    return this.request("POST", path, envelope);
  }
}
