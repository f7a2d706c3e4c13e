"""Machine numbering and pairing functions.

A machine's number is its canonical serialization read as a big-endian
integer behind a two-byte header (magic 0x51, version 0x01).  Decoding
re-serializes the parsed machine and insists on byte equality, so exactly
one number maps to each machine and everything else is rejected.
"""

from __future__ import annotations

from math import isqrt

from .errors import MachineSyntaxError, NotAMachineCode, PairingRangeError, ValidationError
from .dsl import parse_machine, serialize_machine
from .machines import MachineDesc

_HEADER = b"\x51\x01"


def encode_machine(m: MachineDesc) -> int:
    payload = _HEADER + serialize_machine(m).encode("utf-8")
    return int.from_bytes(payload, "big")


def decode_machine(n: int) -> MachineDesc:
    if not isinstance(n, int) or isinstance(n, bool) or n <= 0:
        raise NotAMachineCode(f"not a machine code: {n!r}")
    raw = n.to_bytes((n.bit_length() + 7) // 8, "big")
    if len(raw) <= len(_HEADER) or raw[: len(_HEADER)] != _HEADER:
        raise NotAMachineCode(f"not a machine code: bad header in {n}")
    try:
        text = raw[len(_HEADER):].decode("utf-8")
    except UnicodeDecodeError as e:
        raise NotAMachineCode(f"not a machine code: {e}") from None
    try:
        m = parse_machine(text)
    except (MachineSyntaxError, ValidationError) as e:
        raise NotAMachineCode(f"not a machine code: {e}") from None
    if serialize_machine(m) != text:
        raise NotAMachineCode("not a machine code: payload is not canonical")
    return m


def pair_exp(x: int, y: int) -> int:
    """2^x * 3^y; injective but not surjective (5 has no preimage)."""
    _require_nat(x)
    _require_nat(y)
    return 2**x * 3**y


def unpair_exp(n: int) -> tuple:
    if not isinstance(n, int) or n < 1:
        raise PairingRangeError(f"{n!r} is not in the range of pair_exp")
    x = 0
    while n % 2 == 0:
        n //= 2
        x += 1
    y = 0
    while n % 3 == 0:
        n //= 3
        y += 1
    if n != 1:
        raise PairingRangeError("not in range: a prime factor other than 2 and 3")
    return (x, y)


def pair_cantor(x: int, y: int) -> int:
    """The diagonal bijection (x+y)(x+y+1)/2 + y."""
    _require_nat(x)
    _require_nat(y)
    s = x + y
    return s * (s + 1) // 2 + y


def unpair_cantor(n: int) -> tuple:
    _require_nat(n)
    w = (isqrt(8 * n + 1) - 1) // 2
    y = n - w * (w + 1) // 2
    return (w - y, y)


def _require_nat(v):
    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
        raise ValueError(f"expected a natural number, got {v!r}")
