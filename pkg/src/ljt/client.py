"""HTTP client for a running LJT node.

Thin wrapper over the node's JSON endpoints. State-changing calls send the
simulated identity in the X-Caller header; the node assigns nonces. The
default node URL comes from the LJT_NODE_URL environment variable.
"""

from __future__ import annotations

import json
import os
from typing import Any, Sequence

import requests

DEFAULT_NODE_URL = "http://127.0.0.1:8545"


def node_url_from_env() -> str:
    return os.environ.get("LJT_NODE_URL", DEFAULT_NODE_URL)


class ApiError(Exception):
    """Non-2xx response that does not embed a transaction receipt."""

    def __init__(self, status: int, body: Any):
        self.status = status
        self.body = body if isinstance(body, dict) else {"error": str(body)}
        super().__init__(f"HTTP {status}: {self.body.get('error', self.body)}")

    @property
    def code(self) -> str:
        return str(self.body.get("error", f"http_{self.status}"))


class NodeClient:
    def __init__(self, base_url: str | None = None, caller: str | None = None,
                 timeout: float = 30.0):
        self.base_url = (base_url or node_url_from_env()).rstrip("/")
        self.caller = caller
        self.timeout = timeout
        self.session = requests.Session()

    # -- plumbing --

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.caller:
            headers["X-Caller"] = self.caller
        return headers

    def _decode(self, resp: requests.Response) -> Any:
        try:
            return resp.json()
        except (ValueError, json.JSONDecodeError):
            return {"error": f"http_{resp.status_code}", "detail": resp.text[:200]}

    def get(self, path: str) -> Any:
        resp = self.session.get(self.base_url + path, headers=self._headers(),
                                timeout=self.timeout)
        body = self._decode(resp)
        if resp.status_code != 200:
            raise ApiError(resp.status_code, body)
        return body

    def post(self, path: str, payload: Any) -> Any:
        resp = self.session.post(self.base_url + path, data=json.dumps(payload),
                                 headers=self._headers(), timeout=self.timeout)
        body = self._decode(resp)
        # 422 embeds the sealed failure receipt; that is a result, not an error
        if resp.status_code not in (200, 422):
            raise ApiError(resp.status_code, body)
        return body

    # -- transactions (the receipt dict is returned for both 200 and 422) --

    def submit(self, call: dict) -> dict:
        return self.post("/tx", call)

    def mine(self, coords: Sequence[int]) -> dict:
        return self.submit({"type": "MineToken", "pos": list(coords)})

    def mine_csv(self, csv_text: str) -> dict:
        return self.submit({"type": "MineToken", "csv": csv_text})

    def gain_access(self, n: int) -> dict:
        return self.submit({"type": "GainAccess", "n": n})

    def set_rate(self, rate: int) -> dict:
        return self.submit({"type": "SetExchangeRate", "rate": rate})

    def buy(self, seller: str, value: int) -> dict:
        return self.submit({"type": "BuyToken", "seller": seller, "value": value})

    def transfer(self, to: str, amount: int) -> dict:
        return self.submit({"type": "TransferLJT", "to": to, "amount": amount})

    def faucet(self, address: str, value: int) -> dict:
        return self.post("/dev/faucet", {"address": address, "value": value})

    # -- reads --

    def calc_energy(self, coords: Sequence[int] | None = None,
                    csv_text: str | None = None) -> dict:
        payload: dict[str, Any] = {}
        if coords is not None:
            payload["coords"] = list(coords)
        if csv_text is not None:
            payload["csv"] = csv_text
        return self.post("/calc-energy", payload)

    def balance(self, address: str) -> dict:
        return self.get(f"/balance/{address}")

    def native(self, address: str) -> dict:
        return self.get(f"/native/{address}")

    def access(self, address: str) -> dict:
        return self.get(f"/access/{address}")

    def rate(self, address: str) -> dict:
        return self.get(f"/rates/{address}")

    def data(self, n: int) -> dict:
        return self.get(f"/data/{n}")

    def top_balances(self) -> dict:
        return self.get("/top/balances")

    def top_rates(self) -> dict:
        return self.get("/top/rates")

    def head(self) -> dict:
        return self.get("/chain/head")

    def blocks(self, start: int | None = None, end: int | None = None) -> dict:
        query = []
        if start is not None:
            query.append(f"from={start}")
        if end is not None:
            query.append(f"to={end}")
        suffix = ("?" + "&".join(query)) if query else ""
        return self.get("/chain/blocks" + suffix)

    def state_root(self) -> dict:
        return self.get("/state-root")

    def params(self) -> dict:
        return self.get("/params")

    def wallets(self) -> dict:
        return self.get("/dev/wallets")
