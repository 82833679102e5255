import { describe, expect, test } from "vitest";

import { byteBoundaries, segmentByByteSpans } from "../src/highlights";
import type { ByteSpan } from "../src/highlights";

const span = (start: number, end: number, kind = "vulgarity"): ByteSpan => ({
  start,
  end,
  kind,
  detail: kind,
});

describe("byteBoundaries", () => {
  test("ascii text maps one byte per unit", () => {
    const bounds = byteBoundaries("abc");
    expect(bounds.bytes).toEqual([0, 1, 2, 3]);
    expect(bounds.units).toEqual([0, 1, 2, 3]);
  });

  test("kana characters take three bytes but one unit", () => {
    const bounds = byteBoundaries("あい");
    expect(bounds.bytes).toEqual([0, 3, 6]);
    expect(bounds.units).toEqual([0, 1, 2]);
  });

  test("astral characters take four bytes and two units", () => {
    const bounds = byteBoundaries("😀a");
    expect(bounds.bytes).toEqual([0, 4, 5]);
    expect(bounds.units).toEqual([0, 2, 3]);
  });
});

describe("segmentByByteSpans", () => {
  test("ascii span slices exactly", () => {
    const segments = segmentByByteSpans("omae wa baka da", [span(8, 12)]);
    expect(segments).toEqual([
      { text: "omae wa ", kind: null, detail: null },
      { text: "baka", kind: "vulgarity", detail: "vulgarity" },
      { text: " da", kind: null, detail: null },
    ]);
  });

  test("three-byte kana offsets land on the right characters", () => {
    const segments = segmentByByteSpans("あいつはうざい", [span(12, 21)]);
    expect(segments.map((s) => s.text)).toEqual(["あいつは", "うざい"]);
    expect(segments[1].kind).toBe("vulgarity");
  });

  test("spans after an astral character do not split surrogate pairs", () => {
    const segments = segmentByByteSpans("😀abc", [span(4, 7)]);
    expect(segments.map((s) => s.text)).toEqual(["😀", "abc"]);
    const emoji = segmentByByteSpans("😀abc", [span(0, 4)]);
    expect(emoji[0]).toEqual({ text: "😀", kind: "vulgarity", detail: "vulgarity" });
  });

  test("adjacent spans of different kinds stay separate", () => {
    const segments = segmentByByteSpans("abcd", [span(0, 2, "rule"), span(2, 4, "emoteme")]);
    expect(segments).toEqual([
      { text: "ab", kind: "rule", detail: "rule" },
      { text: "cd", kind: "emoteme", detail: "emoteme" },
    ]);
  });

  test("an offset inside a multi-byte character snaps down to its start", () => {
    const segments = segmentByByteSpans("😀abc", [span(2, 7)]);
    expect(segments).toEqual([{ text: "😀abc", kind: "vulgarity", detail: "vulgarity" }]);
  });

  test("overlapping spans truncate to the uncovered part", () => {
    const segments = segmentByByteSpans("abcdef", [span(0, 4, "rule"), span(2, 6, "emoteme")]);
    expect(segments).toEqual([
      { text: "abcd", kind: "rule", detail: "rule" },
      { text: "ef", kind: "emoteme", detail: "emoteme" },
    ]);
  });

  test("out-of-range spans clamp without throwing", () => {
    const segments = segmentByByteSpans("ab", [span(-3, 99)]);
    expect(segments).toEqual([{ text: "ab", kind: "vulgarity", detail: "vulgarity" }]);
  });

  test("empty text and empty span lists produce no segments", () => {
    expect(segmentByByteSpans("", [])).toEqual([]);
    expect(segmentByByteSpans("", [span(0, 3)])).toEqual([]);
    expect(segmentByByteSpans("ab", [])).toEqual([{ text: "ab", kind: null, detail: null }]);
  });

  test("segments always reconstruct the original text", () => {
    // deterministic xorshift so failures are reproducible
    let state = 20080416;
    const rand = (bound: number): number => {
      state ^= state << 13;
      state ^= state >>> 17;
      state ^= state << 5;
      state >>>= 0;
      return state % bound;
    };
    const pool = [..."aん😀bいざ!ー~cう "];
    for (let round = 0; round < 200; round++) {
      const length = rand(13);
      let text = "";
      for (let i = 0; i < length; i++) text += pool[rand(pool.length)];
      const bounds = byteBoundaries(text).bytes;
      const byteLength = bounds[bounds.length - 1];
      const spans: ByteSpan[] = [];
      for (let i = 0, n = rand(5); i < n; i++) {
        const a = rand(byteLength + 1);
        const b = rand(byteLength + 1);
        spans.push(span(Math.min(a, b), Math.max(a, b)));
      }
      const joined = segmentByByteSpans(text, spans)
        .map((s) => s.text)
        .join("");
      expect(joined).toBe(text);
    }
  });
});
