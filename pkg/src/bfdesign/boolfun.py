"""Boolean functions: truth tables, Walsh spectra, and cryptographic criteria.

Bit ordering convention, used everywhere in this package: a truth-table
index u encodes the input (x_1, ..., x_n) with x_1 as the most significant
bit, so the table reads [f(0,...,0), f(0,...,1), ..., f(1,...,1)].
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class TruthTable:
    """An n-variable Boolean function as its 2^n output bits."""

    n: int
    bits: tuple

    def __post_init__(self):
        if not 1 <= self.n <= 16:
            raise ValueError(f"n must be in [1, 16], got {self.n}")
        if len(self.bits) != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} bits, got {len(self.bits)}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("truth table entries must be 0 or 1")
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))

    @classmethod
    def from_hex(cls, hex_str: str, n: Optional[int] = None) -> "TruthTable":
        """Parse the hex interchange form: bit 0 first, MSB of each nibble first."""
        if n is None:
            size = 4 * len(hex_str)
            n = size.bit_length() - 1
            if 1 << n != size:
                raise ValueError(f"hex length {len(hex_str)} is not a power-of-two bit count")
        bits = []
        for ch in hex_str:
            v = int(ch, 16)
            bits.extend([(v >> 3) & 1, (v >> 2) & 1, (v >> 1) & 1, v & 1])
        return cls(n, tuple(bits[: 1 << n]))

    def to_hex(self) -> str:
        if self.n < 2:
            raise ValueError("hex form requires n >= 2")
        digits = []
        for i in range(0, len(self.bits), 4):
            b = self.bits[i : i + 4]
            digits.append("0123456789ABCDEF"[b[0] * 8 + b[1] * 4 + b[2] * 2 + b[3]])
        return "".join(digits)

    def weight(self) -> int:
        return sum(self.bits)

    def complement(self) -> "TruthTable":
        return TruthTable(self.n, tuple(1 - b for b in self.bits))


@dataclass(frozen=True)
class SignVector:
    """The +/-1 form b_u = 1 - 2*lambda_u of a truth table."""

    n: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != 1 << self.n:
            raise ValueError("length mismatch")
        if any(e not in (-1, 1) for e in self.entries):
            raise ValueError("sign vector entries must be +/-1")

    def to_truth_table(self) -> TruthTable:
        return TruthTable(self.n, tuple((1 - e) // 2 for e in self.entries))


@dataclass(frozen=True)
class WalshSpectrum:
    """The 2^n integer Walsh coefficients W_f(a), same index ordering as TruthTable."""

    n: int
    coefficients: tuple

    def __post_init__(self):
        if len(self.coefficients) != 1 << self.n:
            raise ValueError("length mismatch")
        total = sum(c * c for c in self.coefficients)
        if total != 1 << (2 * self.n):
            raise ValueError(f"Parseval violation: sum W^2 = {total}, expected {1 << (2 * self.n)}")
        if any((c - (1 << self.n)) % 2 for c in self.coefficients):
            raise ValueError("Walsh coefficient parity violation")


@dataclass(frozen=True)
class AnfForm:
    """Algebraic-normal-form coefficients lambda_u, indexed by monomial mask u."""

    n: int
    coefficients: tuple

    def __post_init__(self):
        if len(self.coefficients) != 1 << self.n:
            raise ValueError("length mismatch")
        if any(c not in (0, 1) for c in self.coefficients):
            raise ValueError("ANF coefficients must be 0 or 1")


def sign_vector(tt: TruthTable) -> SignVector:
    return SignVector(tt.n, tuple(1 - 2 * b for b in tt.bits))


def _fwht_inplace(a: np.ndarray) -> np.ndarray:
    """In-place fast Walsh-Hadamard butterfly, O(n * 2^n)."""
    h = 1
    size = a.shape[-1]
    while h < size:
        for i in range(0, size, h * 2):
            x = a[..., i : i + h].copy()
            y = a[..., i + h : i + 2 * h].copy()
            a[..., i : i + h] = x + y
            a[..., i + h : i + 2 * h] = x - y
        h *= 2
    return a


def walsh_transform(tt: TruthTable) -> WalshSpectrum:
    """W_f(a) = sum_x (-1)^(f(x) + a.x), via the fast Walsh-Hadamard transform."""
    b = np.array(sign_vector(tt).entries, dtype=np.int64)
    w = _fwht_inplace(b)
    return WalshSpectrum(tt.n, tuple(int(c) for c in w))


def walsh_transform_naive(tt: TruthTable) -> WalshSpectrum:
    """Direct O(4^n) evaluation of the Walsh sum; the oracle for the FWHT."""
    size = 1 << tt.n
    coeffs = []
    for a in range(size):
        s = 0
        for x in range(size):
            s += (-1) ** (tt.bits[x] ^ (popcount(a & x) & 1))
        coeffs.append(s)
    return WalshSpectrum(tt.n, tuple(coeffs))


def inverse_walsh(ws: WalshSpectrum) -> SignVector:
    """Recover the sign vector: apply the same butterfly and divide by 2^n."""
    w = np.array(ws.coefficients, dtype=np.int64)
    b = _fwht_inplace(w) >> ws.n
    return SignVector(ws.n, tuple(int(e) for e in b))


def nonlinearity(ws: WalshSpectrum) -> int:
    """nl(f) = 2^(n-1) - max_a |W_f(a)| / 2."""
    return (1 << (ws.n - 1)) - max(abs(c) for c in ws.coefficients) // 2


def is_bent(ws: WalshSpectrum) -> bool:
    """Bent iff every |W_f(a)| equals 2^(n/2); defined for even n only."""
    if ws.n % 2:
        raise ValueError("bentness is defined for even n only")
    target = 1 << (ws.n // 2)
    return all(abs(c) == target for c in ws.coefficients)


def resiliency_profile(tt: TruthTable):
    """Return (balanced, ci_order, resiliency).

    ci_order is the largest m with W_f(a) = 0 for all 1 <= wt(a) <= m;
    resiliency equals ci_order when the function is balanced, else None.
    """
    ws = walsh_transform(tt)
    balanced = ws.coefficients[0] == 0
    ci = tt.n
    for a in range(1, 1 << tt.n):
        if ws.coefficients[a] != 0:
            ci = min(ci, popcount(a) - 1)
    return balanced, ci, (ci if balanced else None)


def anf(tt: TruthTable) -> AnfForm:
    """ANF coefficients via the binary Moebius transform (GF(2) butterfly)."""
    a = np.array(tt.bits, dtype=np.uint8)
    h = 1
    size = a.size
    while h < size:
        for i in range(0, size, h * 2):
            a[i + h : i + 2 * h] ^= a[i : i + h]
        h *= 2
    return AnfForm(tt.n, tuple(int(c) for c in a))


def algebraic_degree(form: AnfForm) -> int:
    """Max Hamming weight of a monomial mask in the ANF support; 0 for the zero function."""
    return max((popcount(u) for u, c in enumerate(form.coefficients) if c), default=0)


def from_anf(form: AnfForm) -> TruthTable:
    """Evaluate an ANF back to its truth table (the Moebius butterfly is an involution)."""
    rebuilt = anf(TruthTable(form.n, form.coefficients))
    return TruthTable(form.n, rebuilt.coefficients)


@lru_cache(maxsize=None)
def hadamard_matrix(n: int) -> np.ndarray:
    """Sylvester-ordered Hadamard matrix, H[a, x] = (-1)^popcount(a & x)."""
    size = 1 << n
    idx = np.arange(size)
    pc = np.bitwise_count(idx[:, None] & idx[None, :]).astype(np.int64)
    return 1 - 2 * (pc & 1)


def analysis_record(tt: TruthTable) -> dict:
    """The structured analysis report for one function."""
    ws = walsh_transform(tt)
    balanced, ci, resil = resiliency_profile(tt)
    return {
        "n": tt.n,
        "tt_hex": tt.to_hex(),
        "nonlinearity": nonlinearity(ws),
        "bent": is_bent(ws) if tt.n % 2 == 0 else False,
        "balanced": balanced,
        "ci_order": ci,
        "resiliency": resil,
        "degree": algebraic_degree(anf(tt)),
    }


def analysis_report_text(tt: TruthTable) -> str:
    rec = analysis_record(tt)
    lines = [f"Boolean function 0x{rec['tt_hex']} ({rec['n']} variables)"]
    lines.append(f"  nonlinearity : {rec['nonlinearity']}")
    lines.append(f"  bent         : {rec['bent']}")
    lines.append(f"  balanced     : {rec['balanced']}")
    lines.append(f"  ci order     : {rec['ci_order']}")
    lines.append(f"  resiliency   : {rec['resiliency'] if rec['resiliency'] is not None else '-'}")
    lines.append(f"  degree       : {rec['degree']}")
    return "\n".join(lines)
