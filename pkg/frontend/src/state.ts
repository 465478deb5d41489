// Session: the selected wallet plus the last values received from the API.
// Numbers are cached exactly as served - rendering never recomputes them.

import type { AccessInfo, BalanceInfo, NativeInfo, RateInfo } from "./api";

export interface Session {
  nodeUrl: string;
  wallet: string | null;
  balance: BalanceInfo | null;
  native: NativeInfo | null;
  access: AccessInfo | null;
  rate: RateInfo | null;
  /** Set when the last refresh failed; rendered values are greyed. */
  stale: boolean;
  refreshedAt: number | null;
}

export function newSession(nodeUrl: string): Session {
  return {
    nodeUrl,
    wallet: null,
    balance: null,
    native: null,
    access: null,
    rate: null,
    stale: false,
    refreshedAt: null,
  };
}
