"""Canonical JSON serialization and content hashing.

Every hash in the system (block hashes, state roots) is SHA-256 over these
canonical bytes, so the encoding is part of the consensus contract:

- object keys sorted ascending bytewise, no insignificant whitespace
- integers base-10, no leading zeros; floats are rejected outright
- byte strings rendered as 0x-prefixed lowercase hex
- lists kept in order

Maps keyed by cluster size are encoded as ``[[n, value], ...]`` pairs sorted
numerically (a JSON object would sort "10" before "2").
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

_HEX_DIGITS = set("0123456789abcdef")


def _check(value: Any) -> Any:
    if isinstance(value, bool) or value is None:
        raise TypeError(f"non-canonical value: {value!r}")
    if isinstance(value, float):
        raise TypeError("floats are not allowed in canonical JSON")
    if isinstance(value, int):
        return value
    if isinstance(value, bytes):
        return "0x" + value.hex()
    if isinstance(value, str):
        return value
    if isinstance(value, dict):
        out = {}
        for k, v in value.items():
            if not isinstance(k, str):
                raise TypeError(f"non-string object key: {k!r}")
            out[k] = _check(v)
        return out
    if isinstance(value, (list, tuple)):
        return [_check(v) for v in value]
    raise TypeError(f"unserializable type: {type(value).__name__}")


def dumps(value: Any) -> bytes:
    """Canonical JSON bytes of a jsonable structure (dict/list/int/str/bytes)."""
    return json.dumps(
        _check(value),
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
        allow_nan=False,
    ).encode("utf-8")


def dumps_loose(value: Any) -> bytes:
    """Deterministic JSON for HTTP responses: canonical ordering and spacing,
    but booleans and null are permitted (receipts are not consensus-hashed)."""
    return json.dumps(
        value,
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
        allow_nan=False,
    ).encode("utf-8")


def loads(data: bytes | str) -> Any:
    """Parse JSON produced by :func:`dumps`. Does not verify canonical form;
    callers that need byte-exactness re-encode and compare."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return json.loads(data, parse_float=_reject_float, parse_constant=_reject_float)


def _reject_float(tok: str) -> Any:
    raise ValueError(f"non-integer number in canonical JSON: {tok}")


def sha256(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()


def digest(value: Any) -> bytes:
    """SHA-256 over the canonical serialization of ``value``."""
    return sha256(dumps(value))


def hex_to_bytes(text: Any, length: int | None = None) -> bytes:
    """Strict decode of a 0x-prefixed lowercase hex string."""
    if not isinstance(text, str) or not text.startswith("0x"):
        raise ValueError(f"expected 0x-prefixed hex string, got {text!r}")
    body = text[2:]
    if len(body) % 2 != 0 or not set(body) <= _HEX_DIGITS:
        raise ValueError(f"invalid hex string: {text!r}")
    raw = bytes.fromhex(body)
    if length is not None and len(raw) != length:
        raise ValueError(f"expected {length} bytes, got {len(raw)}")
    return raw


def require_uint(value: Any, bits: int = 64, what: str = "value") -> int:
    """Validate an unsigned integer field decoded from JSON."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{what} must be an integer, got {value!r}")
    if value < 0 or value >= (1 << bits):
        raise ValueError(f"{what} out of uint{bits} range: {value}")
    return value
