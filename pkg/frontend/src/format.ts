// Display formatting. Balances are shown verbatim as received from the API;
// the only client-side arithmetic is the trade preview, which mirrors the
// contract's floor(value * rate / 1e9) in BigInt.

export const BASE_UNITS_PER_COIN = 1_000_000_000n;

/** Micro-epsilon integer to a fixed six-decimal epsilon string: -1000000 -> "-1.000000". */
export function formatEnergyMicro(micro: number): string {
  const sign = micro < 0 ? "-" : "";
  const abs = Math.abs(micro);
  const whole = Math.floor(abs / 1_000_000);
  const frac = String(abs % 1_000_000).padStart(6, "0");
  return `${sign}${whole}.${frac}`;
}

/** Decimal coin amount ("0.5") to native base units (500000000n). */
export function parseCoinsToBaseUnits(text: string): bigint {
  const trimmed = text.trim();
  if (!/^\d+(\.\d+)?$/.test(trimmed)) {
    throw new Error(`not a coin amount: ${text}`);
  }
  const [whole, frac = ""] = trimmed.split(".");
  if (frac.length > 9) {
    throw new Error("at most 9 decimal places (base units)");
  }
  return BigInt(whole) * BASE_UNITS_PER_COIN + BigInt(frac.padEnd(9, "0"));
}

/** Base units back to a trimmed coin string: 500000000 -> "0.5". */
export function formatBaseUnits(value: number | bigint): string {
  const v = BigInt(value);
  const whole = v / BASE_UNITS_PER_COIN;
  const frac = (v % BASE_UNITS_PER_COIN).toString().padStart(9, "0").replace(/0+$/, "");
  return frac ? `${whole}.${frac}` : `${whole}`;
}

/** The contract's purchase rule: floor(value * rate / 1e9) tokens. */
export function previewTokens(valueBaseUnits: bigint, rate: number): bigint {
  return (valueBaseUnits * BigInt(rate)) / BASE_UNITS_PER_COIN;
}

export function shortAddress(address: string): string {
  return address.length > 12 ? `${address.slice(0, 8)}…${address.slice(-4)}` : address;
}
