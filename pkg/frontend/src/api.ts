// Typed client for the LJT node's JSON API. State-changing calls carry the
// simulated identity in the X-Caller header; 422 responses embed the sealed
// failure receipt and are returned, not thrown.

export interface MineResult {
  accepted: boolean;
  energy: number;
  n: number;
  previous_energy: number;
  reward: number;
}

export interface Receipt {
  ok: boolean;
  caller: string;
  nonce: number;
  call_type: string;
  height?: number;
  error?: string;
  mine_result?: MineResult;
}

export interface BalanceInfo {
  address: string;
  ljt: number;
}

export interface NativeInfo {
  address: string;
  native: number;
}

export interface AccessInfo {
  address: string;
  access: number[];
  contributed: number[];
}

export interface RateInfo {
  address: string;
  rate: number;
  explicit: boolean;
}

export interface ClusterData {
  n: number;
  energy: number;
  coords: number[];
  contributor: string;
}

export interface EnergyResult {
  energy: number;
  n: number;
}

export type Call =
  | { type: "MineToken"; pos?: number[]; csv?: string }
  | { type: "GainAccess"; n: number }
  | { type: "SetExchangeRate"; rate: number }
  | { type: "BuyToken"; seller: string; value: number }
  | { type: "TransferLJT"; to: string; amount: number };

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string = "",
  ) {
    super(`HTTP ${status}: ${code}${detail ? ` (${detail})` : ""}`);
  }
}

export class NodeApi {
  caller: string | null = null;

  constructor(
    public baseUrl: string,
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request(method: string, path: string, body?: unknown): Promise<unknown> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.caller) headers["X-Caller"] = this.caller;
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl.replace(/\/$/, "") + path, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(0, "ConnectionError", String(err));
    }
    let payload: unknown;
    try {
      payload = await response.json();
    } catch {
      payload = {};
    }
    if (response.status === 200 || response.status === 422) return payload;
    const obj = (payload ?? {}) as { error?: string; detail?: string };
    throw new ApiError(response.status, obj.error ?? `http_${response.status}`, obj.detail ?? "");
  }

  wallets(): Promise<{ addresses: string[] }> {
    return this.request("GET", "/dev/wallets") as Promise<{ addresses: string[] }>;
  }

  balance(address: string): Promise<BalanceInfo> {
    return this.request("GET", `/balance/${address}`) as Promise<BalanceInfo>;
  }

  native(address: string): Promise<NativeInfo> {
    return this.request("GET", `/native/${address}`) as Promise<NativeInfo>;
  }

  access(address: string): Promise<AccessInfo> {
    return this.request("GET", `/access/${address}`) as Promise<AccessInfo>;
  }

  rates(address: string): Promise<RateInfo> {
    return this.request("GET", `/rates/${address}`) as Promise<RateInfo>;
  }

  topBalances(): Promise<{ balances: [string, number][] }> {
    return this.request("GET", "/top/balances") as Promise<{ balances: [string, number][] }>;
  }

  topRates(): Promise<{ rates: [string, number][] }> {
    return this.request("GET", "/top/rates") as Promise<{ rates: [string, number][] }>;
  }

  data(n: number): Promise<ClusterData> {
    return this.request("GET", `/data/${n}`) as Promise<ClusterData>;
  }

  calcEnergyCsv(csv: string): Promise<EnergyResult> {
    return this.request("POST", "/calc-energy", { csv }) as Promise<EnergyResult>;
  }

  submit(call: Call): Promise<Receipt> {
    return this.request("POST", "/tx", call) as Promise<Receipt>;
  }
}
