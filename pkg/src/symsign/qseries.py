"""Exact integer q-expansions of level-one cusp forms.

Everything here stays in arbitrary-precision integers, so series
arithmetic is exact at any truncation; the coefficients only become
floating point once the hecke module normalizes them.

The discriminant form of weight 12 is built from the sparse cube of the
eta-type product,

    prod_{n>=1} (1 - q^n)^3 = sum_{k>=0} (-1)^k (2k+1) q^{k(k+1)/2},

raised to the 8th power by three dense squarings.  Dense products use
Kronecker substitution (pack the coefficients into one big integer and
let GMP multiply), which keeps an exact expansion to 10^6 terms in the
seconds range; small or sparse products fall back to schoolbook.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2
import numpy as np

__all__ = [
    "IntSeries",
    "series_mul",
    "euler_product_series",
    "delta_series",
    "eisenstein_series",
    "cusp_form_series",
    "CUSP_FORM_LABELS",
]


@dataclass(frozen=True)
class IntSeries:
    """Power series with exact integer coefficients, known modulo q^(trunc+1).

    coeffs[i] is the coefficient of q^i; there are exactly trunc+1 entries,
    the q^0 slot included even when zero.  Python integers are arbitrary
    precision, so arithmetic never wraps.
    """

    trunc: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.trunc < 0:
            raise ValueError(f"trunc must be >= 0, got {self.trunc}")
        if len(self.coeffs) != self.trunc + 1:
            raise ValueError(
                f"need trunc+1 = {self.trunc + 1} coefficients, got {len(self.coeffs)}"
            )

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i]

    def restrict(self, n: int) -> "IntSeries":
        """The same series truncated at a lower order."""
        if not 0 <= n <= self.trunc:
            raise ValueError(f"cannot restrict trunc {self.trunc} to {n}")
        return IntSeries(n, self.coeffs[: n + 1])


def _conv_schoolbook(a, b, n):
    out = [0] * (n + 1)
    for i, ai in enumerate(a[: n + 1]):
        if ai:
            lim = n + 1 - i
            for k, bk in enumerate(b[:lim]):
                if bk:
                    out[i + k] += ai * bk
    return out


_INT64_MAX = (1 << 62) - 1


def _pack_signed(coeffs, width):
    """sum_i coeffs[i] * 2^(8*width*i) as a Python int, signed coefficients.

    width is a whole number of 64-bit words.
    """
    words = width // 8
    if all(-_INT64_MAX <= c <= _INT64_MAX for c in coeffs):
        arr = np.asarray(coeffs, dtype=np.int64)
        lanes = np.zeros((len(coeffs), words), dtype="<u8")
        lanes[:, 0] = np.where(arr > 0, arr, 0).astype(np.uint64)
        p = int.from_bytes(lanes.tobytes(), "little")
        lanes[:, 0] = np.where(arr < 0, -arr, 0).astype(np.uint64)
        q = int.from_bytes(lanes.tobytes(), "little")
        return p - q
    pos = bytearray(len(coeffs) * width)
    neg = bytearray(len(coeffs) * width)
    for i, c in enumerate(coeffs):
        if c > 0:
            nb = (c.bit_length() + 7) // 8
            pos[i * width : i * width + nb] = c.to_bytes(nb, "little")
        elif c < 0:
            c = -c
            nb = (c.bit_length() + 7) // 8
            neg[i * width : i * width + nb] = c.to_bytes(nb, "little")
    return int.from_bytes(bytes(pos), "little") - int.from_bytes(bytes(neg), "little")


def _unpack_signed(packed, width, count):
    """First `count` signed base-2^(8*width) digits of `packed`."""
    bits = 8 * width
    half = 1 << (bits - 1)
    mask = (1 << (bits * count)) - 1
    # Shift every digit up by half: the result has plain unsigned digits.
    offset = int.from_bytes((b"\x00" * (width - 1) + b"\x80") * count, "little")
    w = ((packed & mask) + offset) & mask
    raw = w.to_bytes(count * width, "little")
    words = width // 8
    lanes = np.frombuffer(raw, dtype="<u8").reshape(count, words)
    if words == 1:
        # d + 2^63 reinterpreted: flip the top bit and view signed.
        return (lanes[:, 0] ^ np.uint64(1 << 63)).view(np.int64).tolist()
    acc = lanes[:, words - 1].astype(object)
    for w_i in range(words - 2, -1, -1):
        acc = acc * (1 << 64) + lanes[:, w_i].astype(object)
    return (acc - half).tolist()


def _conv_kronecker(a, b, n):
    amax = max(map(abs, a), default=0) or 1
    bmax = max(map(abs, b), default=0) or 1
    bound = min(len(a), len(b)) * amax * bmax
    width = ((bound.bit_length() + 2 + 63) // 64) * 8  # whole 64-bit words
    prod = gmpy2.mpz(_pack_signed(a, width)) * gmpy2.mpz(_pack_signed(b, width))
    return _unpack_signed(int(prod), width, n + 1)


_SCHOOLBOOK_COST_LIMIT = 4_000_000


def _convolve(a, b, n):
    nnz_a = sum(1 for c in a[: n + 1] if c)
    nnz_b = sum(1 for c in b[: n + 1] if c)
    if min(nnz_a, nnz_b) * (n + 1) <= _SCHOOLBOOK_COST_LIMIT:
        if nnz_b < nnz_a:
            a, b = b, a
        return _conv_schoolbook(a, b, n)
    return _conv_kronecker(a, b, n)


def series_mul(a: IntSeries, b: IntSeries, n: int) -> IntSeries:
    """Exact Cauchy product of a and b, truncated at q^n."""
    if n > min(a.trunc, b.trunc):
        raise ValueError(
            f"product truncation {n} exceeds operand truncation "
            f"min({a.trunc}, {b.trunc})"
        )
    if n < 0:
        raise ValueError("truncation must be >= 0")
    return IntSeries(n, tuple(_convolve(a.coeffs, b.coeffs, n)))


def euler_product_series(n: int) -> IntSeries:
    """prod_{k>=1} (1 - q^k) mod q^(n+1): the pentagonal-number expansion.

    Nonzero coefficients sit exactly at the generalized pentagonal numbers
    k(3k-1)/2 and k(3k+1)/2 with value (-1)^k.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    c = [0] * (n + 1)
    c[0] = 1
    k = 1
    while True:
        p1 = k * (3 * k - 1) // 2
        p2 = k * (3 * k + 1) // 2
        if p1 > n:
            break
        sign = -1 if k % 2 else 1
        c[p1] = sign
        if p2 <= n:
            c[p2] = sign
        k += 1
    return IntSeries(n, tuple(c))


def _eta_cube_series(n: int) -> list[int]:
    # prod (1-q^k)^3 = sum_{k>=0} (-1)^k (2k+1) q^{k(k+1)/2}
    c = [0] * (n + 1)
    k = 0
    while k * (k + 1) // 2 <= n:
        c[k * (k + 1) // 2] = (2 * k + 1) * (-1 if k % 2 else 1)
        k += 1
    return c


def delta_series(n: int) -> IntSeries:
    """Weight-12 discriminant cusp form: coefficient of q^m is tau(m), m <= n.

    Computed as q * (prod (1-q^k))^24, with the 24th power obtained from
    the sparse cube identity squared three times: three dense convolutions
    instead of twenty-four.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    u = _eta_cube_series(n - 1)
    for _ in range(3):
        u = _convolve(u, u, n - 1)
    return IntSeries(n, (0, *u))


def _sigma_series(power: int, n: int) -> list[int]:
    # sigma_power(m) for m = 0..n via the divisor sieve; index 0 unused.
    sig = [0] * (n + 1)
    for d in range(1, n + 1):
        dk = d**power
        for m in range(d, n + 1, d):
            sig[m] += dk
    return sig


def eisenstein_series(k: int, n: int) -> IntSeries:
    """Normalized Eisenstein series E4 or E6 with exact integer coefficients."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if k == 4:
        scale, power = 240, 3
    elif k == 6:
        scale, power = -504, 5
    else:
        raise ValueError(f"only weights 4 and 6 are supported, got {k}")
    sig = _sigma_series(power, n)
    return IntSeries(n, (1, *(scale * s for s in sig[1:])))


# One-dimensional spaces of cusp forms for the full modular group: the
# normalized generator is delta times a monomial in E4, E6.
CUSP_FORM_LABELS: dict[str, tuple[int, int, int]] = {
    # label: (weight, e4 exponent, e6 exponent)
    "delta": (12, 0, 0),
    "delta_e4": (16, 1, 0),
    "delta_e6": (18, 0, 1),
    "delta_e4sq": (20, 2, 0),
    "delta_e4e6": (22, 1, 1),
    "delta_e4sq_e6": (26, 2, 1),
}


def cusp_form_series(label: str, n: int) -> tuple[IntSeries, int]:
    """q-expansion and weight of a named one-dimensional cusp form."""
    try:
        weight, a4, a6 = CUSP_FORM_LABELS[label]
    except KeyError:
        known = ", ".join(sorted(CUSP_FORM_LABELS))
        raise ValueError(f"unknown form label {label!r}; known: {known}") from None
    series = delta_series(n)
    for _ in range(a4):
        series = series_mul(series, eisenstein_series(4, n), n)
    for _ in range(a6):
        series = series_mul(series, eisenstein_series(6, n), n)
    return series, weight
