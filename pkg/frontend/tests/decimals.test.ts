import { describe, expect, it } from "vitest";

import { bytesToHex } from "../src/bytes.js";
import { compareDec, encodeDec, formatDec, parseDec, subtractDec } from "../src/decimals.js";

describe("decimal strings", () => {
  it("parses and canonicalizes", () => {
    expect(parseDec("99.40")).toEqual({ sign: 0, unscaled: 994n, scale: 1 });
    expect(parseDec("-0.000")).toEqual({ sign: 0, unscaled: 0n, scale: 0 });
    expect(parseDec("+2.500")).toEqual({ sign: 0, unscaled: 25n, scale: 1 });
    expect(() => parseDec("1.0000000001")).toThrow();
    expect(() => parseDec("1e3")).toThrow();
    expect(() => parseDec(".5")).toThrow();
  });

  it("formats canonically", () => {
    expect(formatDec(parseDec("99.40"))).toBe("99.4");
    expect(formatDec(parseDec("-12.34"))).toBe("-12.34");
    expect(formatDec(parseDec("0.001"))).toBe("0.001");
    expect(formatDec(parseDec("1000"))).toBe("1000");
  });

  it("encodes the shared wire form", () => {
    expect(bytesToHex(encodeDec(parseDec("99.9")))).toBe("00010000000203e7");
    expect(bytesToHex(encodeDec(parseDec("0")))).toBe("000000000000");
    expect(bytesToHex(encodeDec(parseDec("-1")))).toBe("010000000001" + "01");
  });

  it("compares and subtracts exactly", () => {
    expect(compareDec(parseDec("2.5"), parseDec("2.50"))).toBe(0);
    expect(compareDec(parseDec("-1"), parseDec("1"))).toBe(-1);
    expect(formatDec(subtractDec(parseDec("99.5"), parseDec("99.2")))).toBe("0.3");
    expect(formatDec(subtractDec(parseDec("1"), parseDec("2.5")))).toBe("-1.5");
    expect(formatDec(subtractDec(parseDec("2.5"), parseDec("2.5")))).toBe("0");
  });
});
