/** Client-side canonical report encoding.
 *
 * Duplicates the backend's byte layout on purpose: the console never
 * trusts server-provided digests, it recomputes them from the fetched
 * report and compares against the anchored digest (the conformance
 * fixtures pin the two implementations together).
 */

import { concat, hexToBytes, intToBytesBE, utf8 } from "./bytes.js";
import { encodeDec, parseDec } from "./decimals.js";
import { sha256 } from "./sha256.js";

export interface ReportJson {
  contract_id: string;
  period_id: string;
  version: number;
  author: string;
  metrics: Record<string, string>;
  notes?: string;
  attachment_digests?: string[];
}

const FIELD_CONTRACT = 0x01;
const FIELD_PERIOD = 0x02;
const FIELD_VERSION = 0x03;
const FIELD_AUTHOR = 0x04;
const FIELD_METRICS = 0x05;
const FIELD_NOTES = 0x06;
const FIELD_ATTACHMENTS = 0x07;

function frame(code: number, payload: Uint8Array): Uint8Array {
  return concat(new Uint8Array([code]), intToBytesBE(payload.length, 4), payload);
}

export function canonicalReportBytes(report: ReportJson): Uint8Array {
  const names = Object.keys(report.metrics).sort();
  const metricEntries = names.map((name) => {
    const encoded = utf8(name);
    return concat(intToBytesBE(encoded.length, 2), encoded, encodeDec(parseDec(report.metrics[name])));
  });
  return concat(
    frame(FIELD_CONTRACT, hexToBytes(report.contract_id)),
    frame(FIELD_PERIOD, utf8(report.period_id)),
    frame(FIELD_VERSION, intToBytesBE(report.version, 4)),
    frame(FIELD_AUTHOR, utf8(report.author)),
    frame(FIELD_METRICS, concat(...metricEntries)),
    frame(FIELD_NOTES, utf8(report.notes ?? "")),
    frame(FIELD_ATTACHMENTS, concat(...(report.attachment_digests ?? []).map(hexToBytes))),
  );
}

export function reportDigest(report: ReportJson): Uint8Array {
  return sha256(canonicalReportBytes(report));
}
