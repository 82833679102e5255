/**
 * Conversion of service highlight spans to renderable text segments.
 *
 * The service addresses spans as byte offsets into the UTF-8 encoding of the
 * entry text; JavaScript strings index UTF-16 code units. A kana character is
 * three bytes but one unit, an astral-plane emoji four bytes but two units,
 * so the offsets must be remapped before slicing.
 */

export interface ByteSpan {
  start: number;
  end: number;
  kind: string;
  detail: string;
}

export interface Segment {
  text: string;
  kind: string | null;
  detail: string | null;
}

interface Boundaries {
  bytes: number[];
  units: number[];
}

/** UTF-8 byte offset and UTF-16 unit index of every code-point boundary. */
export function byteBoundaries(text: string): Boundaries {
  const bytes: number[] = [];
  const units: number[] = [];
  let byte = 0;
  let unit = 0;
  for (const ch of text) {
    bytes.push(byte);
    units.push(unit);
    const cp = ch.codePointAt(0) as number;
    byte += cp < 0x80 ? 1 : cp < 0x800 ? 2 : cp < 0x10000 ? 3 : 4;
    unit += ch.length;
  }
  bytes.push(byte);
  units.push(unit);
  return { bytes, units };
}

/** Unit index of the largest boundary at or below the byte offset, clamped. */
function unitFor(bounds: Boundaries, byte: number): number {
  const last = bounds.bytes.length - 1;
  if (byte <= 0) return 0;
  if (byte >= bounds.bytes[last]) return bounds.units[last];
  let lo = 0;
  let hi = last;
  while (lo < hi) {
    const mid = (lo + hi + 1) >> 1;
    if (bounds.bytes[mid] <= byte) lo = mid;
    else hi = mid - 1;
  }
  return bounds.units[lo];
}

/**
 * Split the text into an ordered list of plain and highlighted segments
 * whose concatenation is exactly the original text.
 *
 * Spans are taken in start order. An offset that is out of range or inside a
 * multi-byte character snaps down to the nearest code-point boundary; a span
 * that overlaps an earlier one is truncated to the part not yet covered, and
 * dropped if nothing is left.
 */
export function segmentByByteSpans(text: string, spans: ByteSpan[]): Segment[] {
  const bounds = byteBoundaries(text);
  const ordered = [...spans].sort((a, b) => a.start - b.start || a.end - b.end);
  const segments: Segment[] = [];
  let cursor = 0;
  for (const span of ordered) {
    const start = Math.max(unitFor(bounds, span.start), cursor);
    const end = Math.max(unitFor(bounds, span.end), start);
    if (end === start) continue;
    if (start > cursor) {
      segments.push({ text: text.slice(cursor, start), kind: null, detail: null });
    }
    segments.push({ text: text.slice(start, end), kind: span.kind, detail: span.detail });
    cursor = end;
  }
  if (cursor < text.length) {
    segments.push({ text: text.slice(cursor), kind: null, detail: null });
  }
  return segments;
}
