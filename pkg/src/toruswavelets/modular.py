"""Exact integer SL(2,Z) machinery: Bezout representatives, orbits, cosets.

Matrices are rows [[m, n], [p, q]] with determinant m*q - n*p = 1.  The
action on Fourier index pairs is by row vectors: (n1, n2) * M.  Orbits of
this action are the sets of pairs with fixed gcd g; the representative
M_{n1,n2} maps (n1, n2) to the diagonal point (g, g), and the stabilizer
of (g, g) is the cyclic group generated by [[2, 1], [-1, 0]].

Python integers are exact, so no overflow handling is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


@dataclass(frozen=True)
class ModularMatrix:
    m: int
    n: int
    p: int
    q: int

    def __post_init__(self):
        for value in (self.m, self.n, self.p, self.q):
            if not isinstance(value, int):
                raise TypeError("modular matrix entries must be integers")
        if self.det() != 1:
            raise ValueError(f"matrix {self.rows()} has determinant {self.det()}, expected 1")

    def rows(self):
        return [[self.m, self.n], [self.p, self.q]]

    def det(self) -> int:
        return self.m * self.q - self.n * self.p

    def inverse(self) -> "ModularMatrix":
        return ModularMatrix(self.q, -self.n, -self.p, self.m)

    def __matmul__(self, other: "ModularMatrix") -> "ModularMatrix":
        return ModularMatrix(
            self.m * other.m + self.n * other.p,
            self.m * other.n + self.n * other.q,
            self.p * other.m + self.q * other.p,
            self.p * other.n + self.q * other.q,
        )

    def __pow__(self, k: int) -> "ModularMatrix":
        if k < 0:
            return self.inverse() ** (-k)
        out = identity_matrix()
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def is_identity(self) -> bool:
        return (self.m, self.n, self.p, self.q) == (1, 0, 0, 1)


def identity_matrix() -> ModularMatrix:
    return ModularMatrix(1, 0, 0, 1)


def mod_mul(a: ModularMatrix, b: ModularMatrix) -> ModularMatrix:
    return a @ b


def mod_inv(a: ModularMatrix) -> ModularMatrix:
    return a.inverse()


def mod_det(a: ModularMatrix) -> int:
    return a.det()


def extended_gcd(n1: int, n2: int):
    """Return (g, m, n) with g = gcd(n1, n2) > 0 and m*n1 + n*n2 = g."""
    if n1 == 0 and n2 == 0:
        raise ValueError("extended_gcd is undefined at (0, 0)")
    m, next_m = 1, 0
    n, next_n = 0, 1
    g, next_g = n1, n2
    while next_g:
        quot = g // next_g
        m, next_m = next_m, m - quot * next_m
        n, next_n = next_n, n - quot * next_n
        g, next_g = next_g, g - quot * next_g
    if g < 0:
        g, m, n = -g, -m, -n
    return g, m, n


def orbit_representative(n1: int, n2: int) -> ModularMatrix:
    """Unimodular M with (n1, n2) * M = (g, g), built from a Bezout pair.

    M = [[m, m - n2/g], [n, n + n1/g]] where m*n1 + n*n2 = g; the
    representative is canonical only modulo the diagonal stabilizer.
    """
    g, m, n = extended_gcd(n1, n2)
    return ModularMatrix(m, m - n2 // g, n, n + n1 // g)


_STABILIZERS = {
    "diag": (2, 1, -1, 0),
    "axis1": (1, 0, 1, 1),
    "axis2": (1, 1, 0, 1),
}


def stabilizer_power(k: int, point_kind: str = "diag") -> ModularMatrix:
    """k-th power of the stabilizer generator of (g,g), (g,0) or (0,g)."""
    try:
        gen = ModularMatrix(*_STABILIZERS[point_kind])
    except KeyError:
        raise ValueError(f"unknown point kind {point_kind!r}") from None
    return gen**k


def index_action(n1: int, n2: int, mat: ModularMatrix):
    """Row-vector action (n1, n2) * M."""
    return (mat.m * n1 + mat.p * n2, mat.n * n1 + mat.q * n2)


@dataclass(frozen=True)
class OrbitLabel:
    """Orbit label (g, rep) of an index pair; g = 0 labels only (0, 0)."""

    g: int
    rep: ModularMatrix

    def __post_init__(self):
        if self.g < 0:
            raise ValueError("gcd label must be nonnegative")
        if self.g == 0 and not self.rep.is_identity():
            raise ValueError("the (0, 0) orbit is labeled by the identity")


def orbit_label(n1: int, n2: int) -> OrbitLabel:
    if n1 == 0 and n2 == 0:
        return OrbitLabel(0, identity_matrix())
    return OrbitLabel(gcd(n1, n2), orbit_representative(n1, n2))


def label_to_index(label: OrbitLabel):
    """Inverse of orbit_label: (g, g) * rep^{-1} recovers the pair."""
    if label.g == 0:
        return (0, 0)
    return index_action(label.g, label.g, label.rep.inverse())


def coprime_pairs(height: int):
    """Coprime pairs (k1, k2) != (0, 0) with max(|k1|, |k2|) <= height."""
    if height < 1:
        raise ValueError("height must be at least 1")
    pairs = []
    for k1 in range(-height, height + 1):
        for k2 in range(-height, height + 1):
            if (k1, k2) != (0, 0) and gcd(k1, k2) == 1:
                pairs.append((k1, k2))
    return pairs


def enumerate_cosets(height: int):
    """One stabilizer-coset representative per coprime pair of bounded height.

    The coset space of SL(2,Z) modulo the diagonal stabilizer is in
    bijection with the gcd-1 orbit; M_{k1,k2} represents the coset that
    sends (k1, k2) to (1, 1).
    """
    return [orbit_representative(k1, k2) for (k1, k2) in coprime_pairs(height)]


def in_diagonal_stabilizer(mat: ModularMatrix, max_power: int = 20) -> bool:
    """Bounded membership test in the cyclic stabilizer of (g, g)."""
    gen = ModularMatrix(2, 1, -1, 0)
    probe = identity_matrix()
    if mat == probe:
        return True
    fwd = bwd = probe
    gen_inv = gen.inverse()
    for _ in range(max_power):
        fwd = fwd @ gen
        bwd = bwd @ gen_inv
        if mat == fwd or mat == bwd:
            return True
    return False
