"""Concrete twisted modules, lowest-weight spaces and module functors.

Builds the Fock-type twisted modules attached to a twist context, the
lowest-weight subspace Omega(M) (joint kernel of all degree-lowering
generator and Virasoro modes), the zero-mode representation of the Zhu
algebra on Omega(M) with the certification rank, parity submodules cut
out by a split zero mode, contragredient duals at matrix level, and a
truncated Verma-type induction from a Zhu-algebra module back to a
twisted module.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import Echelon, gen_binomial, nullspace, solve_in_span, vec_iadd
from .fock import (
    Monomial,
    Sector,
    State,
    ZERO_ANNIHILATE,
    ZERO_CREATE,
    ZERO_SPLIT,
    normalize,
    parity,
    state_weight,
    weight,
)
from .fields import Virasoro, mode, state_parity
from .zhu import TwistContext, ZhuAlgebra, _mono_state

HALF = Fraction(1, 2)


def _zero_mode_policies(ctx: TwistContext) -> dict:
    """Assign zero-mode behaviour on the twisted module per generator:
    self-paired generators split their zero mode (Clifford square 1),
    dual pairs get one annihilating and one creating member."""
    sector = ctx.sector
    policies = {}
    for g in sector.gids:
        if ctx.module_support(g) != 0:
            continue
        if sector.pair(g, g):
            policies[g] = ZERO_SPLIT
        else:
            partner = next(h for h, _ in sector.partners(g) if h != g)
            policies[g] = ZERO_ANNIHILATE if g < partner else ZERO_CREATE
    return policies


def twisted_module(ctx: TwistContext) -> Sector:
    """The canonical Fock-type g-twisted module of the context."""
    sector = ctx.sector
    support = {g: ctx.module_support(g) for g in sector.gids}
    if all(support[g] == HALF for g in sector.gids):
        return sector  # untwisted: the algebra is its own module
    return Sector(sector.labels, sector.pairing, support,
                  zero_mode=_zero_mode_policies(ctx), algebra=sector)


def lowering_mode_labels(space, gid: int, max_degree) -> list:
    """Mode labels q > 0 of one generator that can lower degrees <= max."""
    q = space.support[gid]
    if q == 0:
        q = Fraction(1)
    out = []
    while q <= max_degree:
        out.append(q)
        q += 1
    return out


class OmegaSpace:
    """Joint kernel of all degree-lowering modes, degree by degree.

    The kernel is computed against the generator modes and the positive
    Virasoro modes; the recursion expresses every other lowering mode
    through these, so the joint kernel is the full lowest-weight space.
    """

    def __init__(self, space, max_degree, virasoro: Virasoro | None = None):
        self.space = space
        self.max_degree = Fraction(max_degree)
        if virasoro is None:
            virasoro = Virasoro(space.algebra)
        self.virasoro = virasoro
        self.basis: list[State] = []
        by_deg = space.basis_by_degree(self.max_degree)
        for d in sorted(by_deg):
            monos = by_deg[d]
            images = []
            for m in monos:
                img: dict = {}
                for g in space.gids:
                    for q in lowering_mode_labels(space, g, d):
                        for m2, c in space.apply_gen(g, q, m).items():
                            vec_iadd(img, {("a", g, q, m2): c})
                lm = 1
                while lm <= d:
                    lv = virasoro.L(space, lm, {m: Fraction(1)})
                    for m2, c in lv.items():
                        vec_iadd(img, {("L", lm, m2): c})
                    lm += 1
                images.append(img)
            for ker in nullspace(images):
                self.basis.append({monos[j]: c for j, c in ker.items()})

    @property
    def dim(self) -> int:
        return len(self.basis)

    def degrees(self) -> list:
        return sorted(state_weight(v) for v in self.basis)

    def coords(self, st: State):
        """Coordinates of a state in the kernel basis, or None."""
        if not st:
            return [Fraction(0)] * self.dim
        return solve_in_span(self.basis, st)


def o_action(space, a: State, w: State) -> State:
    """The degree-preserving zero mode o(a) = a_{wt a - 1} applied to w."""
    return mode(space, a, state_weight(a) - 1, w, check_index=False)


def o_matrix(om: OmegaSpace, a: State):
    """Matrix of o(a) on the kernel basis; None if it leaves the space."""
    cols = []
    for v in om.basis:
        img = o_action(om.space, a, v)
        coords = om.coords(img)
        if coords is None:
            return None
        cols.append(coords)
    return [[cols[j][i] for j in range(om.dim)] for i in range(om.dim)]


def zhu_rank(alg: ZhuAlgebra, omegas: list) -> int:
    """Rank of the joint zero-mode representation on the kernel spaces.

    This is a true lower bound for dim A_g(V): the zero-mode map factors
    through the quotient by O_g, whatever the truncation missed.
    """
    ech = Echelon()
    rank = 0
    for i, m in enumerate(alg.basis):
        flat: dict = {}
        for s, om in enumerate(omegas):
            for j, v in enumerate(om.basis):
                img = o_action(om.space, _mono_state(m), v)
                for m2, c in img.items():
                    flat[(s, j, m2)] = c
        if ech.add(flat):
            rank += 1
    return rank


def zhu_action_report(alg: ZhuAlgebra, om: OmegaSpace,
                      o_samples: int = 20) -> dict:
    """Exact checks that Omega(M) is a module for the quotient algebra.

    Verifies o(1) = id, o(a)o(b) = o(a star b) for all table pairs,
    o(x) = 0 for sampled elements of the relation ideal, and reports the
    commutant dimension of the image (1 means the action is simple)."""
    mats = {}
    for i, m in enumerate(alg.basis):
        mat = o_matrix(om, _mono_state(m))
        if mat is None:
            return {"ok": False, "failure": f"o({i}) leaves the space"}
        mats[i] = mat
    n = om.dim
    unit = alg.unit_coords()
    ident = _combine(mats, unit, n)
    if ident != [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]:
        return {"ok": False, "failure": "o(1) is not the identity"}
    for i in range(alg.dim):
        for j in range(alg.dim):
            lhs = _matmul(mats[i], mats[j])
            rhs = _combine(mats, alg.star_coords(i, j), n)
            if lhs != rhs:
                return {"ok": False, "failure": f"o(a)o(b)!=o(a*b) at {i},{j}"}
    # sampled ideal elements must act by zero
    count = 0
    ctx = alg.ctx
    for u in ctx.sector.basis(Fraction(2)):
        if not u or count >= o_samples:
            continue
        for v in ctx.sector.basis(Fraction(1)):
            circ = ctx.circ(_mono_state(u), _mono_state(v))
            if not circ or state_weight(circ) is None:
                continue
            for w in om.basis:
                if o_action(om.space, circ, w):
                    return {"ok": False,
                            "failure": "o of an ideal element is nonzero"}
            count += 1
            break
    # commutant of the image
    flat_rows = []
    for x in range(n):
        for y in range(n):
            img: dict = {}
            for i, mat in mats.items():
                # [E_xy, o(m_i)] entries
                for t in range(n):
                    vec_iadd(img, {(i, x, t): mat[y][t]})
                    vec_iadd(img, {(i, t, y): -mat[t][x]})
            flat_rows.append(img)
    commutant_dim = len(nullspace(flat_rows))
    return {"ok": True, "ideal_samples": count,
            "commutant_dim": commutant_dim, "simple": commutant_dim == 1}


def _matmul(a, b):
    n = len(a)
    return [
        [sum((a[i][t] * b[t][j] for t in range(n)), Fraction(0))
         for j in range(n)]
        for i in range(n)
    ]


def _combine(mats, coords, n):
    out = [[Fraction(0)] * n for _ in range(n)]
    for i, c in coords.items():
        for x in range(n):
            for y in range(n):
                out[x][y] += c * mats[i][x][y]
    return out


def certified_zhu(ctx: TwistContext, max_weight, margin=Fraction(1),
                  depth: int = 1, omega_degree=Fraction(1)) -> dict:
    """Full certification: stabilized upper bound against zero-mode rank."""
    from .zhu import ZhuAlgebra

    alg = ZhuAlgebra(ctx, max_weight, margin, depth)
    alg2 = ZhuAlgebra(ctx, Fraction(max_weight) + HALF, margin, depth)
    stable = alg.dim == alg2.dim and alg.basis == alg2.basis
    space = twisted_module(ctx)
    om = OmegaSpace(space, omega_degree)
    lower = zhu_rank(alg, [om])
    certified = stable and alg.high_covered and lower == alg.dim
    return {
        "algebra": alg,
        "omega": om,
        "dim_upper": alg.dim,
        "dim_lower": lower,
        "stabilized": stable,
        "high_covered": alg.high_covered,
        "certified": certified,
    }


class ParitySubmodule:
    """One of the two halves cut out by a split zero mode e(0).

    The basis consists of (1 + s e(0)) y for even-length y and
    (1 - s e(0)) y for odd-length y, with y running over the monomials
    free of the zero-mode symbol; s is +1 or -1.  Invariance under all
    modes is checked computationally, never assumed.
    """

    def __init__(self, space: Sector, egid: int, sign: int, max_degree):
        if space.zero_mode.get(egid) != ZERO_SPLIT:
            raise ValueError("submodule requires a split zero mode")
        self.space = space
        self.egid = egid
        self.sign = sign
        self.max_degree = Fraction(max_degree)
        self.basis: list[State] = []
        for m in space.basis(self.max_degree):
            if (Fraction(0), egid) in m:
                continue
            s = sign if parity(m) == 0 else -sign
            vec = {m: Fraction(1)}
            em, es = normalize(((Fraction(0), egid),) + m)
            if es:
                vec[em] = Fraction(s * es)
            self.basis.append(vec)

    def graded_dims(self) -> dict:
        dims: dict = {}
        for v in self.basis:
            w = state_weight(v)
            dims[w] = dims.get(w, 0) + 1
        return dims

    def contains(self, st: State) -> bool:
        deg = {weight(m) for m in st}
        cand = [v for v in self.basis if state_weight(v) in deg]
        return solve_in_span(cand, st) is not None

    def check_invariance(self, test_weight=Fraction(1)) -> bool:
        """Every generator mode keeps the subspace inside itself."""
        for v in self.basis:
            if state_weight(v) > test_weight:
                continue
            for g in self.space.gids:
                qs = list(self.space.left_modes(g, -1)) + \
                    lowering_mode_labels(self.space, g, state_weight(v))
                for q in qs:
                    img = self.space.apply_gen_state(g, q, v)
                    if not img:
                        continue
                    if state_weight(img) > self.max_degree:
                        continue
                    if not self.contains(img):
                        return False
        return True

    def omega_basis(self, max_degree) -> list[State]:
        """Lowest-weight vectors of the submodule."""
        om = OmegaSpace(self.space, max_degree)
        out = []
        for v in om.basis:
            # project the ambient kernel onto this half
            half: State = {}
            vec_iadd(half, v, HALF)
            ev = self.space.apply_gen_state(self.egid, Fraction(0), v)
            vec_iadd(half, ev, HALF * (1 if self.sign > 0 else -1))
            # the parity rule makes the projector sign length-dependent
            proj: State = {}
            for m, c in v.items():
                s = self.sign if parity(m) == 0 else -self.sign
                vec_iadd(proj, {m: c * HALF})
                em = self.space.apply_gen(self.egid, Fraction(0), m)
                vec_iadd(proj, em, c * s * HALF)
            if proj and self.contains(proj):
                out.append(proj)
        ech = Echelon()
        return [v for v in out if ech.add(v)]


class Contragredient:
    """Matrix-level dual module with phase-normalized mode action.

    For states of half-integer weight the defining involution produces
    a unit-modulus phase; it is stripped, leaving rational matrices R
    that satisfy the clean twisted commutator identity [R_u, R_v]_pm =
    sum_i binom(m, i) R_{u_i v}(m + n - i): the stripped phases square
    to the Koszul sign the odd-odd case needs.  Dual vectors are stored
    as coefficient dicts against the primal monomial basis.
    """

    def __init__(self, space, max_degree, virasoro: Virasoro | None = None):
        self.space = space
        self.max_degree = Fraction(max_degree)
        self.vir = virasoro or Virasoro(space.algebra)
        self.by_degree = space.basis_by_degree(self.max_degree)

    def graded_dims(self) -> dict:
        return {d: len(ms) for d, ms in self.by_degree.items()}

    def _phase_free_sign(self, h: Fraction, par: int) -> Fraction:
        # (-1)^h = i^{par} * (-1)^{(2h - par)/2}
        e = (2 * h - par) / 2
        if e.denominator != 1:
            raise ValueError("weight/parity mismatch")
        return Fraction((-1) ** (int(e) % 2))

    def rmode(self, a: State, n, f: dict) -> dict:
        """Phase-normalized action of the dual mode a'_n on a dual vector."""
        n = Fraction(n)
        h = state_weight(a)
        par = state_parity(a)
        sign = self._phase_free_sign(h, par)
        # build the finite list of L(1)-descendants of a
        terms = []
        cur = dict(a)
        j = 0
        fact = Fraction(1)
        while cur:
            terms.append((j, {m: c / fact for m, c in cur.items()}))
            cur = mode(self.space.algebra, self.vir.omega, 2, cur)
            j += 1
            fact *= j
        deg_f = {weight(m) for m in f}
        out: dict = {}
        for d in deg_f:
            dm = d + h - n - 1
            if dm > self.max_degree:
                raise ValueError("dual mode leaves the truncated range")
            for m in self.by_degree.get(dm, []):
                val = Fraction(0)
                for j, aj in terms:
                    img = mode(self.space, aj, 2 * h - n - j - 2,
                               {m: Fraction(1)}, check_index=False)
                    for m2, c in img.items():
                        if m2 in f:
                            val += sign * c * f[m2]
                if val:
                    out[m] = out.get(m, Fraction(0)) + val
        return {m: c for m, c in out.items() if c}

    def dual_vacuum(self) -> dict:
        return {(): Fraction(1)}

    def verify_commutator(self, u: State, v: State, samples) -> dict:
        """The twisted commutator identity transported to the dual side."""
        alg = self.space.algebra
        pu, pv = state_parity(u), state_parity(v)
        sgn = -1 if pu and pv else 1
        wu, wv = state_weight(u), state_weight(v)
        checked = skipped = 0
        for m, n, f in samples:
            m, n = Fraction(m), Fraction(n)
            try:
                lhs = self.rmode(u, m, self.rmode(v, n, f))
                vec_iadd(lhs, self.rmode(v, n, self.rmode(u, m, f)),
                         Fraction(-sgn))
                i = 0
                while i <= wu + wv - 1:
                    uiv = mode(alg, u, i, v)
                    if uiv:
                        c = gen_binomial(m, i)
                        if c:
                            vec_iadd(lhs, self.rmode(uiv, m + n - i, f), -c)
                    i += 1
            except ValueError:
                # an intermediate dual degree left the truncated range
                skipped += 1
                continue
            if lhs:
                return {"ok": False, "checked": checked,
                        "failure": {"m": str(m), "n": str(n)}}
            checked += 1
        return {"ok": True, "checked": checked, "skipped": skipped}


class InducedSpace:
    """Truncated Verma-type module over a certified Zhu algebra module.

    Basis elements are (symbol-monomial, j): an exterior monomial in the
    strictly-raising generator symbols applied to the j-th basis vector
    of U.  Zero modes anticommute through the symbols and act on U by
    the Zhu-algebra matrices; lowering modes contract against symbols by
    the Clifford pairing and annihilate U.  The mode recursion then
    gives the action of every state; the quotient relations hold because
    the zero modes already satisfy the quotient algebra's multiplication.
    """

    def __init__(self, alg: ZhuAlgebra, umats: dict, udim: int, max_degree):
        ctx = alg.ctx
        sector = ctx.sector
        self.alg = alg
        self.udim = udim
        self.max_degree = Fraction(max_degree)
        self.labels = sector.labels
        self.gids = sector.gids
        self.pairing = sector.pairing
        self.support = {g: ctx.module_support(g) for g in sector.gids}
        self.embed = {g: [(g, Fraction(1))] for g in sector.gids}
        self.algebra = sector
        self.vstate = {g: {((-HALF, g),): Fraction(1)} for g in sector.gids}
        # matrix of each generator's class, for the zero-mode action
        self._zmat = {}
        for g in sector.gids:
            if self.support[g] == 0:
                coords = alg.reduce({((-HALF, g),): Fraction(1)})
                mat = [[Fraction(0)] * udim for _ in range(udim)]
                for i, c in coords.items():
                    for x in range(udim):
                        for y in range(udim):
                            mat[x][y] += c * umats[i][x][y]
                self._zmat[g] = mat

    # -- sector protocol -------------------------------------------------
    def pair(self, i, j):
        return self.pairing.get((i, j), Fraction(0))

    def charge(self, gid):
        return (self.support[gid] + HALF) % 1

    def degree(self, el):
        return weight(el[0])

    def left_modes(self, gid, lo):
        q = self.charge(gid) - HALF
        out = []
        while q >= lo:
            out.append(q)
            q -= 1
        return out

    def ann_modes(self, gid, el):
        return sorted({-mu for mu, h in el[0]
                       if mu < 0 and self.pair(gid, h)})

    def _symbol_modes(self, gid):
        q = -1 if self.support[gid] == 0 else -HALF
        return q  # largest raising symbol mode

    def apply_gen(self, gid, q, el) -> State:
        mono, j = el
        out: State = {}
        if q < 0:
            m2, s = normalize(((q, gid),) + mono)
            if s:
                out[(m2, j)] = Fraction(s)
        elif q == 0:
            sign = -1 if parity(mono) else 1
            mat = self._zmat[gid]
            for x in range(self.udim):
                c = mat[x][j]
                if c:
                    out[(mono, x)] = Fraction(sign) * c
        else:
            sign = 1
            for i, (mu, h) in enumerate(mono):
                if mu == -q:
                    c = self.pair(gid, h)
                    if c:
                        rest = mono[:i] + mono[i + 1:]
                        vec_iadd(out, {(rest, j): Fraction(sign) * c})
                sign = -sign
        return out

    def apply_gen_state(self, gid, q, st: State) -> State:
        out: State = {}
        for el, c in st.items():
            vec_iadd(out, self.apply_gen(gid, q, el), c)
        return out

    def basis(self, max_degree) -> list:
        max_degree = Fraction(max_degree)
        factors = []
        for g in self.gids:
            q = self._symbol_modes(g)
            while q >= -max_degree:
                factors.append((q, g))
                q -= 1
        factors.sort()
        monos = []

        def grow(start, acc, w):
            monos.append(tuple(acc))
            for i in range(start, len(factors)):
                dw = -factors[i][0]
                if w + dw <= max_degree:
                    acc.append(factors[i])
                    grow(i + 1, acc, w + dw)
                    acc.pop()

        grow(0, [], Fraction(0))
        monos.sort(key=lambda m: (weight(m), m))
        return [(m, j) for m in monos for j in range(self.udim)]

    def basis_by_degree(self, max_degree) -> dict:
        by: dict = {}
        for el in self.basis(max_degree):
            by.setdefault(weight(el[0]), []).append(el)
        return by

    def graded_dims(self, max_degree) -> dict:
        return {d: len(els)
                for d, els in self.basis_by_degree(max_degree).items()}


def regular_umats(alg: ZhuAlgebra) -> tuple:
    """The algebra acting on itself by left multiplication."""
    mats = {i: alg.multiplication_matrix({i: Fraction(1)})
            for i in range(alg.dim)}
    return mats, alg.dim


def omega_umats(alg: ZhuAlgebra, om: OmegaSpace) -> tuple:
    """The zero-mode matrices of a lowest-weight space as a seed module."""
    mats = {}
    for i, m in enumerate(alg.basis):
        mat = o_matrix(om, _mono_state(m))
        if mat is None:
            raise ValueError("zero modes leave the kernel space")
        mats[i] = mat
    return mats, om.dim


def induce_truncated(alg: ZhuAlgebra, umats: dict, udim: int,
                     max_degree) -> dict:
    """Induce a twisted module from a Zhu-algebra module and validate it.

    Returns the induced space, its graded dimensions, and whether the
    lowest-weight space of the result recovers exactly the seed (the
    degree-0 piece and nothing else at the truncation).
    """
    if udim == 0:
        return {"space": None, "graded_dims": {}, "omega_dim": 0,
                "omega_is_seed": True}
    space = InducedSpace(alg, umats, udim, max_degree)
    om = OmegaSpace(space, max_degree)
    deg0 = all(space.degree(el) == 0 for v in om.basis for el in v)
    return {
        "space": space,
        "graded_dims": space.graded_dims(max_degree),
        "omega_dim": om.dim,
        "omega_is_seed": deg0 and om.dim == udim,
    }
