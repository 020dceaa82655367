"""Twisted modules, lowest-weight spaces and the module functors."""

from fractions import Fraction

import pytest

from vosa.fields import Virasoro
from vosa.fock import ZERO_ANNIHILATE, ZERO_CREATE, ZERO_SPLIT
from vosa.modules import (Contragredient, InducedSpace, OmegaSpace,
                          ParitySubmodule, certified_zhu, induce_truncated,
                          o_action, omega_umats, regular_umats,
                          twisted_module, zhu_action_report, zhu_rank)
from vosa.zhu import ZhuAlgebra, ctx_identity, ctx_sigma, ctx_tau

H = Fraction(1, 2)
ONE = Fraction(1)


def gen(g):
    return {((-H, g),): ONE}


# ------------------------------------------------------------- modules
def test_sigma_module_zero_mode_policies():
    M = twisted_module(ctx_sigma(2))
    assert M.zero_mode[0] == ZERO_ANNIHILATE
    assert M.zero_mode[1] == ZERO_CREATE
    M3 = twisted_module(ctx_sigma(3))
    assert M3.zero_mode[2] == ZERO_SPLIT


def test_identity_module_is_the_algebra():
    ctx = ctx_identity(2)
    assert twisted_module(ctx) is ctx.sector


@pytest.mark.parametrize("k", [1, 2])
def test_sigma_module_graded_dims(k):
    # the integer-moded Fock space over a 2^k-dimensional ground space
    M = twisted_module(ctx_sigma(2 * k))
    dims = M.graded_dims(Fraction(2))
    assert dims[Fraction(0)] == 2 ** k
    # first excited level: one mode per generator on each ground vector
    assert dims[Fraction(1)] == 2 * k * 2 ** k


# --------------------------------------------------------------- omega
@pytest.mark.parametrize("k", [1, 2])
def test_omega_equals_ground_space(k):
    ctx = ctx_sigma(2 * k)
    om = OmegaSpace(twisted_module(ctx), Fraction(1))
    assert om.dim == 2 ** k
    assert all(d == 0 for d in om.degrees())


def test_omega_of_untwisted_space_is_vacuum():
    ctx = ctx_identity(2)
    om = OmegaSpace(twisted_module(ctx), Fraction(2))
    assert om.dim == 1
    assert om.basis == [{(): ONE}]


def test_omega_rechecked_against_all_low_weight_states():
    # beyond the generator and Virasoro modes, every state of weight <= 2
    # must annihilate the computed kernel through its lowering modes
    from vosa.fields import mode, mode_offset
    from vosa.fock import state_weight

    ctx = ctx_sigma(2)
    M = twisted_module(ctx)
    om = OmegaSpace(M, Fraction(1))
    for u in ctx.sector.basis(Fraction(2)):
        if not u:
            continue
        ust = {u: ONE}
        wu = state_weight(ust)
        off = mode_offset(M, u)
        n = wu  # degree-lowering indices n > wt - 1
        while n <= wu + 1:
            if off is None or (n - off) % 1 == 0:
                for v in om.basis:
                    assert mode(M, ust, n, v, check_index=False) == {}
            n += H


def test_tau_omega():
    om = OmegaSpace(twisted_module(ctx_tau()), Fraction(1))
    assert om.dim == 2
    assert all(d == 0 for d in om.degrees())


# -------------------------------------------------------- certification
@pytest.mark.parametrize("ctx,w,dim", [
    (ctx_sigma(1), Fraction(2), 2),
    (ctx_sigma(2), Fraction(5, 2), 4),
    (ctx_identity(2), Fraction(2), 1),
    (ctx_tau(), Fraction(2), 2),
])
def test_certified_dimensions(ctx, w, dim):
    rep = certified_zhu(ctx, w)
    assert rep["certified"]
    assert rep["dim_upper"] == rep["dim_lower"] == dim


def test_zhu_rank_is_lower_bound():
    ctx = ctx_sigma(2)
    alg = ZhuAlgebra(ctx, Fraction(5, 2))
    om = OmegaSpace(twisted_module(ctx), Fraction(1))
    assert zhu_rank(alg, [om]) <= alg.dim


def test_zero_mode_action_represents_the_algebra():
    ctx = ctx_sigma(2)
    alg = ZhuAlgebra(ctx, Fraction(5, 2))
    om = OmegaSpace(twisted_module(ctx), Fraction(1))
    rep = zhu_action_report(alg, om)
    assert rep["ok"]
    assert rep["simple"]


def test_tau_action_not_simple():
    # the pair-swap module splits, so the commutant is 2-dimensional
    ctx = ctx_tau()
    alg = ZhuAlgebra(ctx, Fraction(2))
    om = OmegaSpace(twisted_module(ctx), Fraction(1))
    rep = zhu_action_report(alg, om)
    assert rep["ok"]
    assert rep["commutant_dim"] == 2


# ----------------------------------------------------- parity submodules
@pytest.mark.parametrize("sign", [1, -1])
def test_odd_rank_parity_submodules(sign):
    ctx = ctx_sigma(1)
    M = twisted_module(ctx)
    sub = ParitySubmodule(M, 0, sign, Fraction(2))
    assert sub.check_invariance(Fraction(1))
    dims = sub.graded_dims()
    assert dims[Fraction(0)] == 1
    assert len(sub.omega_basis(Fraction(1))) == 1


def test_parity_submodules_partition_the_module():
    ctx = ctx_sigma(1)
    M = twisted_module(ctx)
    plus = ParitySubmodule(M, 0, 1, Fraction(2))
    minus = ParitySubmodule(M, 0, -1, Fraction(2))
    whole = M.graded_dims(Fraction(2))
    for d, n in whole.items():
        assert plus.graded_dims().get(d, 0) + \
            minus.graded_dims().get(d, 0) == n


def test_tau_parity_submodules():
    M = twisted_module(ctx_tau())
    for sign in (1, -1):
        sub = ParitySubmodule(M, 0, sign, Fraction(2))
        assert sub.check_invariance(Fraction(1))
        assert len(sub.omega_basis(Fraction(1))) == 1


def test_block_count_matches_simple_module_count():
    # even rank: one simple twisted module and one block; odd rank: two
    from vosa.zhu import block_profile

    for l, count in [(1, 2), (2, 1), (3, 2)]:
        alg = ZhuAlgebra(ctx_sigma(l), Fraction(5, 2))
        assert len(block_profile(alg)["blocks"]) == count


# --------------------------------------------------------- contragredient
def test_contragredient_graded_dims_match():
    ctx = ctx_sigma(2)
    M = twisted_module(ctx)
    C = Contragredient(M, Fraction(2))
    assert C.graded_dims() == M.graded_dims(Fraction(2))


def test_contragredient_vacuum_pairing():
    M = twisted_module(ctx_sigma(2))
    C = Contragredient(M, Fraction(2))
    assert C.dual_vacuum() == {(): ONE}


def test_contragredient_commutators():
    ctx = ctx_sigma(2)
    M = twisted_module(ctx)
    C = Contragredient(M, Fraction(3))
    vir = Virasoro(ctx.sector)
    f0 = C.dual_vacuum()
    f1 = {((-Fraction(1), 0), (Fraction(0), 1)): ONE}
    half = [(m, n, f) for m in (-H, H, Fraction(3, 2)) for n in (-H, H)
            for f in (f0, f1)]
    ints = [(m, n, f) for m in (-1, 0, 1, 2) for n in (-1, 0, 1)
            for f in (f0, f1)]
    mix = [(m, n, f) for m in (-1, 0, 1) for n in (-H, H, Fraction(3, 2))
           for f in (f0, f1)]
    assert C.verify_commutator(gen(0), gen(1), half)["ok"]
    assert C.verify_commutator(gen(0), gen(0), half)["ok"]
    assert C.verify_commutator(vir.omega, vir.omega, ints)["ok"]
    assert C.verify_commutator(vir.omega, gen(0), mix)["ok"]
    assert C.verify_commutator(vir.omega, gen(1), mix)["ok"]


def test_contragredient_of_untwisted_space():
    ctx = ctx_identity(2)
    V = twisted_module(ctx)
    C = Contragredient(V, Fraction(3))
    f0 = C.dual_vacuum()
    ints = [(m, n, f0) for m in (-1, 0, 1) for n in (-1, 0, 1)]
    assert C.verify_commutator(gen(0), gen(1), ints)["ok"]


def test_contragredient_mode_raises_beyond_truncation():
    M = twisted_module(ctx_sigma(2))
    C = Contragredient(M, Fraction(1))
    vir = Virasoro(M.algebra)
    with pytest.raises(ValueError):
        C.rmode(vir.omega, -2, C.dual_vacuum())


# -------------------------------------------------------------- induction
def test_induction_from_omega_recovers_the_module():
    ctx = ctx_sigma(2)
    rep = certified_zhu(ctx, Fraction(5, 2))
    umats, udim = omega_umats(rep["algebra"], rep["omega"])
    res = induce_truncated(rep["algebra"], umats, udim, Fraction(3, 2))
    M = twisted_module(ctx)
    assert res["graded_dims"] == M.graded_dims(Fraction(3, 2))
    assert res["omega_is_seed"]


def test_induction_from_zero_module_is_zero():
    ctx = ctx_sigma(2)
    alg = ZhuAlgebra(ctx, Fraction(5, 2))
    res = induce_truncated(alg, {}, 0, Fraction(1))
    assert res["graded_dims"] == {}
    assert res["omega_is_seed"]


def test_induction_from_regular_module():
    # the regular module of the rank-one twisted Zhu algebra induces the
    # direct sum of the two parity halves
    ctx = ctx_sigma(1)
    alg = ZhuAlgebra(ctx, Fraction(2))
    umats, udim = regular_umats(alg)
    res = induce_truncated(alg, umats, udim, Fraction(1))
    M = twisted_module(ctx)
    assert res["graded_dims"] == M.graded_dims(Fraction(1))
    assert res["omega_is_seed"]


def test_induced_space_commutator_identity():
    from vosa.fields import verify_commutator

    ctx = ctx_sigma(2)
    rep = certified_zhu(ctx, Fraction(5, 2))
    umats, udim = omega_umats(rep["algebra"], rep["omega"])
    space = InducedSpace(rep["algebra"], umats, udim, Fraction(2))
    targets = [{el: ONE} for el in space.basis(Fraction(1))]
    samples = [(m, n, w) for m in (-H, H, Fraction(3, 2)) for n in (-H, H)
               for w in targets[:4]]
    assert verify_commutator(space, gen(0), gen(1), samples)["ok"]
    vir = Virasoro(ctx.sector)
    ints = [(m, n, w) for m in (0, 1) for n in (-1, 0) for w in targets[:4]]
    assert verify_commutator(space, vir.omega, vir.omega, ints)["ok"]
