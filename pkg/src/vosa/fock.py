"""Fermionic Fock monomials, Koszul signs and graded basis enumeration.

A monomial is a tuple of (mode, generator_id) factors sorted strictly
ascending; the empty tuple is the vacuum.  States are sparse dicts
mapping monomials to Fractions.  A Sector fixes the generator set, the
bilinear pairing, the coset of allowed modes per generator and the
zero-mode behaviour, and provides the elementary creation/annihilation
action every higher operation is built from.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .exact import vec_iadd

Monomial = tuple
State = dict

VACUUM: Monomial = ()

# zero-mode policies
NO_ZERO = "none"
ZERO_ANNIHILATE = "annihilate"
ZERO_CREATE = "create"
ZERO_SPLIT = "split"


def normalize(factors: Iterable[tuple]):
    """Sort factors into canonical order, tracking the Koszul sign.

    Returns (monomial, sign) with sign in {1, -1}, or (None, 0) when a
    factor repeats (fermion square).
    """
    fs = list(factors)
    sign = 1
    # insertion sort; fermionic factors are odd so each swap flips the sign
    for i in range(1, len(fs)):
        j = i
        while j > 0 and fs[j - 1] > fs[j]:
            fs[j - 1], fs[j] = fs[j], fs[j - 1]
            sign = -sign
            j -= 1
        if j > 0 and fs[j - 1] == fs[j]:
            return None, 0
    return tuple(fs), sign


def weight(mono: Monomial) -> Fraction:
    """Sum of -mode over factors; the vacuum has weight 0."""
    return -sum((m for m, _ in mono), Fraction(0))


def parity(mono: Monomial) -> int:
    return len(mono) & 1


def state_weight(st: State):
    """Weight of a homogeneous state, or None for 0 / non-homogeneous."""
    ws = {weight(m) for m in st}
    return ws.pop() if len(ws) == 1 else None


def graded_key(mono: Monomial):
    """Total order on monomials: by weight, then lexicographic."""
    return (weight(mono), mono)


class Sector:
    """Generator/mode data for one fermionic Fock space.

    pairing is a symmetric dict {(i, j): Fraction}; support maps each
    generator to the fractional part of its allowed mode indices; zero_mode
    assigns each generator with integer support one of the zero-mode
    policies.  The policies encode which half of the normal ordering the
    zero mode belongs to: 'create'/'annihilate' put it entirely on one
    side, 'split' acts as multiplication plus (e,e)/2 times the derivation
    so the Clifford square comes out right.
    """

    def __init__(self, labels, pairing, support, zero_mode=None, embed=None,
                 algebra=None, vstate=None):
        self.labels = list(labels)
        self.gids = list(range(len(self.labels)))
        self.pairing = {}
        for (i, j), c in pairing.items():
            c = Fraction(c)
            if c:
                self.pairing[(i, j)] = c
                self.pairing[(j, i)] = c
        self.support = {g: Fraction(support[g]) % 1 for g in self.gids}
        self.zero_mode = dict(zero_mode or {})
        for g in self.gids:
            self.zero_mode.setdefault(
                g, NO_ZERO if self.support[g] else ZERO_ANNIHILATE
            )
        # how algebra generators act on this space; identity unless set
        self.embed = embed or {g: [(g, Fraction(1))] for g in self.gids}
        # the algebra whose module this is, and each generator of this
        # space expressed as a state of that algebra (needed for the
        # twist corrections in the mode recursion)
        self.algebra = algebra if algebra is not None else self
        self.vstate = vstate or {
            g: {((Fraction(-1, 2), g),): Fraction(1)} for g in self.gids
        }
        self._check()

    def _check(self):
        for g in self.gids:
            if self.support[g] != 0 and self.zero_mode[g] != NO_ZERO:
                raise ValueError("zero-mode policy on fractional support")
        for g in self.gids:
            if not any((g, h) in self.pairing for h in self.gids):
                raise ValueError(f"degenerate pairing at generator {g}")

    def pair(self, i: int, j: int) -> Fraction:
        return self.pairing.get((i, j), Fraction(0))

    def partners(self, g: int):
        return [(h, c) for (i, h), c in self.pairing.items() if i == g]

    def is_creation(self, gid: int, mode: Fraction) -> bool:
        if mode < 0:
            return True
        if mode == 0:
            return self.zero_mode[gid] in (ZERO_CREATE, ZERO_SPLIT)
        return False

    def charge(self, gid: int) -> Fraction:
        """Fractional twist charge of a generator, in [0, 1).

        Zero for half-integer mode support (untwisted behaviour); one half
        for integer support.  Generators with nonzero charge pick up
        correction terms in the mode recursion.
        """
        return (self.support[gid] + Fraction(1, 2)) % 1

    def creation_modes(self, gid: int, lo: Fraction):
        """Basis-building modes q with lo <= q: those whose operator has a
        multiplication part, descending from the largest."""
        off = self.support[gid]
        if off:
            q = off - 1  # in (-1, 0)
        else:
            q = Fraction(0)
            if self.zero_mode[gid] not in (ZERO_CREATE, ZERO_SPLIT):
                q = Fraction(-1)
        out = []
        while q >= lo:
            out.append(q)
            q -= 1
        return out

    def left_modes(self, gid: int, lo: Fraction):
        """Modes on the left of the normal ordering, descending, >= lo.

        The split point depends only on the twist charge: modes q <=
        charge - 1/2 sit on the left, so a zero mode always does,
        whatever operator it happens to act by.
        """
        q = self.charge(gid) - Fraction(1, 2)
        if (q - self.support[gid]) % 1:
            raise AssertionError("split point off the mode lattice")
        out = []
        while q >= lo:
            out.append(q)
            q -= 1
        return out

    def ann_modes(self, gid: int, mono: Monomial):
        """Right-of-normal-ordering modes that can act on mono, ascending."""
        out = {
            -mu
            for mu, h in mono
            if mu < 0 and self.pair(gid, h)
        }
        return sorted(out)

    def degree(self, mono: Monomial) -> Fraction:
        return weight(mono)

    def apply_gen(self, gid: int, mode: Fraction, mono: Monomial) -> State:
        """Action of generator mode gid(mode) on one monomial.

        Creation modes multiply on the left (then normalize); annihilation
        modes act as the pairing-weighted super-derivation.  A split zero
        mode does both, with the derivation halved.
        """
        if (mode - self.support[gid]) % 1 != 0:
            raise ValueError(
                f"mode {mode} outside support of {self.labels[gid]}"
            )
        out: State = {}
        split = mode == 0 and self.zero_mode[gid] == ZERO_SPLIT
        if self.is_creation(gid, mode):
            m, s = normalize(((mode, gid),) + mono)
            if s:
                out[m] = Fraction(s)
        if split or not self.is_creation(gid, mode):
            half = Fraction(1, 2) if split else Fraction(1)
            sign = 1
            for i, (mu, h) in enumerate(mono):
                if mu == -mode:
                    c = self.pair(gid, h)
                    if c:
                        rest = mono[:i] + mono[i + 1 :]
                        vec_iadd(out, {rest: Fraction(sign) * c * half})
                sign = -sign
        return out

    def apply_gen_state(self, gid: int, mode: Fraction, st: State) -> State:
        out: State = {}
        for mono, c in st.items():
            vec_iadd(out, self.apply_gen(gid, mode, mono), c)
        return out

    def basis(self, max_weight) -> list[Monomial]:
        """All monomials of weight <= max_weight in graded-lex order."""
        max_weight = Fraction(max_weight)
        factors = []
        for g in self.gids:
            for q in self.creation_modes(g, -max_weight):
                factors.append((q, g))
        factors.sort()
        out = []

        def grow(start: int, acc: list, w):
            out.append(tuple(acc))
            for i in range(start, len(factors)):
                dw = -factors[i][0]
                if w + dw <= max_weight:
                    acc.append(factors[i])
                    grow(i + 1, acc, w + dw)
                    acc.pop()

        grow(0, [], Fraction(0))
        out.sort(key=graded_key)
        return out

    def graded_dims(self, max_weight) -> dict:
        dims: dict = {}
        for m in self.basis(max_weight):
            w = weight(m)
            dims[w] = dims.get(w, 0) + 1
        return dims

    def basis_by_degree(self, max_weight) -> dict:
        by: dict = {}
        for m in self.basis(max_weight):
            by.setdefault(weight(m), []).append(m)
        return by

    def describe(self) -> dict:
        """Stable JSON-friendly description (used for cache keys)."""
        return {
            "labels": self.labels,
            "pairing": sorted(
                [i, j, str(c)] for (i, j), c in self.pairing.items() if i <= j
            ),
            "support": [str(self.support[g]) for g in self.gids],
            "zero_mode": [self.zero_mode[g] for g in self.gids],
        }


def ns_orthonormal(l: int) -> Sector:
    """The algebra's own Fock space on an orthonormal generator basis."""
    labels = [f"a{i+1}" for i in range(l)]
    pairing = {(i, i): Fraction(1) for i in range(l)}
    support = {i: Fraction(1, 2) for i in range(l)}
    return Sector(labels, pairing, support)


def ns_polarized(l: int) -> Sector:
    """The algebra's Fock space on a polarized basis.

    For l = 2k the generators are b_1..b_k, b*_1..b*_k with (b_i, b*_j) =
    delta_ij; odd l adds a self-paired e with (e, e) = 2.  This basis keeps
    every twisted-module computation rational.
    """
    k = l // 2
    labels = [f"b{i+1}" for i in range(k)] + [f"B{i+1}" for i in range(k)]
    pairing = {(i, k + i): Fraction(1) for i in range(k)}
    if l % 2:
        labels.append("e")
        pairing[(l - 1, l - 1)] = Fraction(2)
    support = {i: Fraction(1, 2) for i in range(l)}
    return Sector(labels, pairing, support)
