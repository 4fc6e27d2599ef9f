import type { PalettePayload, PaletteVariant } from "./api/types";

export type Rgb = [number, number, number]; // 0..255

const SHADE_RE = /^(ACCEPT|BORDER|UNACCEPT)_(\d+)$/;
const DIVERGE_RE = /^DIVERGE\((\d*(?:\.\d+)?)\)$/;
const FALLBACK: Rgb = [128, 128, 128];

function hexToRgb(hex: string): Rgb {
  const h = hex.startsWith("#") ? hex.slice(1) : hex;
  const n = parseInt(h, 16);
  if (Number.isNaN(n) || h.length !== 6) return FALLBACK;
  return [(n >> 16) & 0xff, (n >> 8) & 0xff, n & 0xff];
}

/**
 * Resolves the server's abstract color tokens against one palette variant.
 *
 * Category tokens (``ACCEPT_2``) index the variant's shade ramp, single
 * tokens (``NONE``, ``UNDEFINED``, ``MARK``) map directly, and parametric
 * ``DIVERGE(t)`` tokens interpolate the diverging ramp stops at t.
 */
export class TokenColors {
  private readonly variant: PaletteVariant;
  private readonly cache = new Map<string, Rgb>();

  constructor(payload: PalettePayload, variant = "default") {
    const chosen = payload[variant] ?? payload["default"] ?? Object.values(payload)[0];
    if (!chosen) throw new Error("palette payload carries no variants");
    this.variant = chosen;
  }

  rgb(token: string): Rgb {
    const hit = this.cache.get(token);
    if (hit) return hit;
    const resolved = this.resolve(token);
    this.cache.set(token, resolved);
    return resolved;
  }

  css(token: string): string {
    const [r, g, b] = this.rgb(token);
    return `rgb(${r},${g},${b})`;
  }

  private resolve(token: string): Rgb {
    const v = this.variant;
    if (token === "UNDEFINED") return hexToRgb(v.UNDEFINED);
    if (token === "NONE") return hexToRgb(v.NONE);
    if (token === "MARK") return hexToRgb(v.MARK);
    const shade = SHADE_RE.exec(token);
    if (shade) {
      const ramp = v[shade[1] as "ACCEPT" | "BORDER" | "UNACCEPT"];
      const hex = ramp[Math.min(Number(shade[2]), ramp.length - 1)];
      return hex ? hexToRgb(hex) : FALLBACK;
    }
    const div = DIVERGE_RE.exec(token);
    if (div) return this.diverge(Number(div[1]));
    return FALLBACK;
  }

  private diverge(t: number): Rgb {
    const stops = this.variant.DIVERGE_STOPS;
    if (stops.length === 0) return FALLBACK;
    if (stops.length === 1) return hexToRgb(stops[0]!);
    const x = Math.min(Math.max(t, 0), 1) * (stops.length - 1);
    const i = Math.min(Math.floor(x), stops.length - 2);
    const f = x - i;
    const a = hexToRgb(stops[i]!);
    const b = hexToRgb(stops[i + 1]!);
    return [
      Math.round(a[0] + (b[0] - a[0]) * f),
      Math.round(a[1] + (b[1] - a[1]) * f),
      Math.round(a[2] + (b[2] - a[2]) * f),
    ];
  }
}
