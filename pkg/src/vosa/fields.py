"""Vertex-operator mode actions on Fock-type spaces.

The mode u_n of a state u acting on a target w is computed recursively:
the leading (smallest-mode) free-field factor of u splits around the
normal ordering into the modes left of the split point (applied after
the tail field) and those right of it (commuted through the tail with a
Koszul sign and applied first).  Generators whose module modes sit on
the shifted lattice carry a fractional twist charge chi, which adds
finitely many correction terms binom(chi-related) z^{-t} for the states
a_{t-1}u of lower weight.  Grading bounds keep every sum finite, so no
formal series is ever materialized.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .exact import gen_binomial, vec_iadd
from .fock import Monomial, State, normalize, parity, state_weight, weight

HALF = Fraction(1, 2)


def _cache(space) -> dict:
    c = getattr(space, "_mode_cache", None)
    if c is None:
        c = space._mode_cache = {}
    return c


def twist_correction(chi: Fraction, p: int, t: int) -> Fraction:
    """Coefficient of -z^{-p-t} Y(a_{t-1}u, z) in the mode recursion."""
    return sum(
        (gen_binomial(-chi, j) * gen_binomial(chi, p + t - j)
         for j in range(p + 1)),
        Fraction(0),
    )


def mode_mono(space, u: Monomial, n: Fraction, w) -> State:
    """u_n applied to a single target basis element w; returns a State."""
    cache = _cache(space)
    key = (u, n, w)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if not u:
        res = {w: Fraction(1)} if n == -1 else {}
        cache[key] = res
        return res
    deg_w = space.degree(w)
    if deg_w + weight(u) - n - 1 < 0:
        cache[key] = {}
        return {}
    mu, a = u[0]
    tail = u[1:]
    p = -mu - HALF  # divided-power order of the leading factor
    if p < 0 or p.denominator != 1:
        raise ValueError("states must live in the half-integer Fock space")
    p = int(p)
    tail_sign = -1 if parity(tail) else 1
    wt_tail = weight(tail)
    out: State = {}
    for k, c in space.embed[a]:
        # right of the normal ordering: act on w first, sign past the tail
        for q in space.ann_modes(k, w):
            aw = space.apply_gen(k, q, w)
            if not aw:
                continue
            coeff = c * gen_binomial(-q - HALF, p) * tail_sign
            n2 = n - q - p - HALF
            for m2, c2 in aw.items():
                vec_iadd(out, mode_mono(space, tail, n2, m2), coeff * c2)
        # left of the normal ordering: act after the tail's result
        lo = n - p - HALF - (deg_w + wt_tail - 1)
        for q in space.left_modes(k, lo):
            res = mode_mono(space, tail, n - q - p - HALF, w)
            if not res:
                continue
            coeff = c * gen_binomial(-q - HALF, p)
            for m2, c2 in res.items():
                vec_iadd(out, space.apply_gen(k, q, m2), coeff * c2)
        # twist corrections: lower-weight products of this component
        # with the tail, taken inside the algebra itself
        chi = space.charge(k)
        if chi:
            alg = space.algebra
            t = 1
            while HALF + wt_tail - t >= 0:
                ct = twist_correction(chi, p, t)
                if ct:
                    prod = mode(alg, space.vstate[k], t - 1, {tail: Fraction(1)},
                                check_index=False)
                    for m2, c2 in prod.items():
                        vec_iadd(out, mode_mono(space, m2, n - p - t, w),
                                 -c * ct * c2)
                t += 1
    cache[key] = out
    return out


def mode_offset(space, u: Monomial):
    """Coset of indices n for which u_n can act on this space, or None.

    Well defined only when every embedding target of each factor has one
    mode support; mixed supports give None (no single coset).
    """
    off = weight(u) - 1
    for _, a in u:
        supports = {space.support[k] for k, _ in space.embed[a]}
        if len(supports) != 1:
            return None
        off += supports.pop()
    return off % 1


def mode(space, u: State, n, w: State, check_index: bool = True) -> State:
    """The operator u_n applied to w, for weight-homogeneous u."""
    n = Fraction(n)
    if u and state_weight(u) is None:
        raise ValueError("mode requires a weight-homogeneous state")
    out: State = {}
    for um, cu in u.items():
        if check_index:
            off = mode_offset(space, um)
            if off is not None and (n - off) % 1 != 0:
                raise ValueError(f"index {n} not in the twist class of u")
        for wm, cw in w.items():
            vec_iadd(out, mode_mono(space, um, n, wm), cu * cw)
    return out


def product_mode(sector, u: State, i, v: State) -> State:
    """u_i v inside the algebra itself (both arguments in its Fock space)."""
    return mode(sector, u, i, v)


def gram_inverse(sector):
    """Inverse of the generator Gram matrix, as a dense Fraction grid."""
    n = len(sector.gids)
    aug = [
        [sector.pair(i, j) for j in range(n)]
        + [Fraction(int(i == j)) for j in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        d = aug[col][col]
        aug[col] = [x / d for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


class Virasoro:
    """The conformal vector and its modes, with the computed central term."""

    def __init__(self, sector):
        self.sector = sector
        ginv = gram_inverse(sector)
        omega: State = {}
        for i in sector.gids:
            for j in sector.gids:
                if ginv[i][j]:
                    m, s = normalize([(Fraction(-3, 2), i), (-HALF, j)])
                    if s:
                        vec_iadd(omega, {m: HALF * ginv[i][j] * s})
        self.omega = omega

    def L(self, space, m, w: State) -> State:
        return mode(space, self.omega, Fraction(m) + 1, w)

    def central_charge(self) -> Fraction:
        quad = product_mode(self.sector, self.omega, 3, self.omega)
        return 2 * quad.get((), Fraction(0))


def state_parity(st: State) -> int:
    ps = {parity(m) for m in st}
    if len(ps) != 1:
        raise ValueError("state has mixed parity")
    return ps.pop()


def verify_commutator(space, u: State, v: State, samples) -> dict:
    """Check [u_m, v_n]+- w = sum_i C(m,i) (u_i v)_{m+n-i} w exactly.

    samples is an iterable of (m, n, w) triples.  Returns a report with
    the first failing tuple, if any.
    """
    alg = space.algebra
    sgn = -1 if state_parity(u) and state_parity(v) else 1
    wu, wv = state_weight(u), state_weight(v)
    checked = 0
    for m, n, w in samples:
        m, n = Fraction(m), Fraction(n)
        # off-coset indices kill u_m but not the product side, so the
        # identity only makes sense on the proper mode lattice
        lhs = mode(space, u, m, mode(space, v, n, w))
        vec_iadd(lhs, mode(space, v, n, mode(space, u, m, w)),
                 Fraction(-sgn))
        i = 0
        while i <= wu + wv - 1:
            uiv = product_mode(alg, u, i, v)
            if uiv:
                c = gen_binomial(m, i)
                if c:
                    vec_iadd(lhs,
                             mode(space, uiv, m + n - i, w,
                                  check_index=False),
                             -c)
            i += 1
        if lhs:
            return {"ok": False, "checked": checked,
                    "failure": {"m": str(m), "n": str(n)}}
        checked += 1
    return {"ok": True, "checked": checked}


def min_assoc_exponent(space, a: State, w: State) -> Fraction:
    """Smallest kappa with z^kappa a(z) w free of negative powers of z."""
    wa = state_weight(a)
    deg = max(space.degree(m) for m in w)
    n = wa + deg - 1
    while n > -10:
        if mode(space, a, n, w, check_index=False):
            return n + 1
        n -= HALF
    return Fraction(0)


def verify_associativity(space, a: State, u: State, w: State, kappa,
                         a_max: int = 3, b_max=3) -> dict:
    """Compare the two expansions of z^kappa a(x) acting through u on w.

    Coefficients of z0^A z2^B are matched exactly for |A| <= a_max and
    |B| <= b_max: composing modes of a and u on one side, modes of the
    products a_i u on the other.  kappa must make z^kappa a(z) w regular.
    """
    kappa = Fraction(kappa)
    alg = space.algebra
    wa, wu = state_weight(a), state_weight(u)
    deg = max(space.degree(m) for m in w)
    if kappa < min_assoc_exponent(space, a, w):
        raise ValueError("kappa too small for a regular product")
    checked = nonzero = 0
    b_vals = []
    b = Fraction(-b_max)
    while b <= b_max:
        b_vals.append(b)
        b += HALF
    for A in range(-a_max, a_max + 1):
        for B in b_vals:
            lhs: State = {}
            j = 0
            while j <= wu + deg + B:
                c0 = gen_binomial(A + j, j)
                if c0:
                    uw = mode(space, u, j - B - 1, w, check_index=False)
                    if uw:
                        vec_iadd(lhs,
                                 mode(space, a, kappa - 1 - A - j, uw,
                                      check_index=False), c0)
                j += 1
            rhs: State = {}
            i = 0
            while i <= A + wa + wu:
                c0 = gen_binomial(kappa, i)
                if c0:
                    prod = product_mode(alg, a, i - A - 1, u)
                    if prod:
                        vec_iadd(rhs,
                                 mode(space, prod, kappa - B - 1 - i, w,
                                      check_index=False), c0)
                i += 1
            vec_iadd(lhs, rhs, Fraction(-1))
            if lhs:
                return {"ok": False, "checked": checked,
                        "failure": {"A": str(A), "B": str(B)}}
            checked += 1
            if rhs:
                nonzero += 1
    return {"ok": True, "checked": checked, "nonzero": nonzero}


def verify_translation(space, omega: State, v: State, samples) -> dict:
    """Check (L(-1)v)_n = -n v_{n-1} on sample (n, w) pairs."""
    alg = space.algebra
    dv = mode(alg, omega, 0, v)
    checked = 0
    for n, w in samples:
        n = Fraction(n)
        lhs = mode(space, dv, n, w, check_index=False)
        vec_iadd(lhs, mode(space, v, n - 1, w, check_index=False), n)
        if lhs:
            return {"ok": False, "checked": checked, "failure": str(n)}
        checked += 1
    return {"ok": True, "checked": checked}


def verify_skew_symmetry(sector, omega: State, u: State, v: State) -> dict:
    """Check u_n v = eta sum_j (-1)^{n+j+1} L(-1)^j v_{n+j} u / j!."""
    eta = -1 if state_parity(u) and state_parity(v) else 1
    wu, wv = state_weight(u), state_weight(v)
    checked = 0
    n = int(wu + wv)  # products vanish above wu + wv - 1
    lo = -int(wu + wv) - 2
    for n in range(lo, n + 1):
        lhs = product_mode(sector, u, n, v)
        j = 0
        while j <= wu + wv - n - 1:
            vju = product_mode(sector, v, n + j, u)
            if vju:
                for _ in range(j):
                    vju = mode(sector, omega, 0, vju)
                sign = eta * (-1 if (n + j + 1) % 2 else 1)
                vec_iadd(lhs, vju, Fraction(-sign, factorial(j)))
            j += 1
        if lhs:
            return {"ok": False, "checked": checked, "failure": str(n)}
        checked += 1
    return {"ok": True, "checked": checked}
