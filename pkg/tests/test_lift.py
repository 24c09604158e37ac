import random
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chainsd.chain_ring import preset
from chainsd.codes import CodeChain, LinearCodeR, LinearCodeT, satisfies_property_P
from chainsd.enumeration import ChainConditionError, count_with_torsion_chain
from chainsd.lift import (
    ExistenceFailure,
    Frame,
    LiftState,
    LiftSystem,
    WrongMode,
    _system,
    construct,
    full_flags,
    lift_base,
    lift_step,
    plan_steps,
    sample_construction,
    solve_lift_system,
)
from chainsd.oracle import codeword_set

R52 = preset("R52")
Q = 4


def example_chain():
    D = LinearCodeT.span(R52.field, [(1, 1, 0)], 3)
    return CodeChain(R52, 3, (D, D, D), (1, 0, 0, 0, 0))


def test_empty_system():
    sys = LiftSystem(R52, ((0, 0),), (), ((0, 0, (0, 1)),))
    sol = solve_lift_system(sys)
    assert sol.consistent and sol.count() == 1 and list(sol.solutions()) == [()]


def test_example_level3_system():
    ch = example_chain()
    (flag,) = list(full_flags(ch))
    sys, _ = _system(Frame.from_flag(R52, flag), None, 3)
    sol = solve_lift_system(sys)
    assert sol.count() == 4
    rows = {tuple(sys.substitute(v)[0]) for v in sol.solutions()}
    found = {((r[1] // Q) % Q, (r[2] // Q) % Q, (r[1] // Q**2) % Q, (r[2] // Q**2) % Q) for r in rows}
    assert found == {(0, 1, a2, b2) for a2, b2 in [(0, 0), (1, 0), (2, 1), (3, 1)]}


@pytest.mark.parametrize("a1,b1", [(a, b) for a in range(4) for b in range(4) if (a, b) != (0, 1)])
def test_level5_system_needs_property_P(a1, b1):
    slots = tuple((0, c, k) for c in (1, 2) for k in (2, 3, 4))
    sys = LiftSystem(R52, ((1, 1 + a1 * Q, b1 * Q),), slots, ((0, 0, (0, 1, 2, 3, 4)),))
    assert not solve_lift_system(sys).consistent


def test_level5_system_valid_start():
    slots = tuple((0, c, k) for c in (1, 2) for k in (2, 3, 4))
    sys = LiftSystem(R52, ((1, 1, Q),), slots, ((0, 0, (0, 1, 2, 3, 4)),))
    assert solve_lift_system(sys).count() == 4 * 256


def _random_system(seed):
    rnd = random.Random(seed)
    R = preset(rnd.choice(["R41", "R42", "R51", "R31"]))
    n, nrows = rnd.randint(1, 3), rnd.randint(1, 2)
    rows = []
    for _ in range(nrows):
        rows.append(tuple(rnd.randrange(R.q) for _ in range(n)))
    cand = [(r, c, k) for r in range(nrows) for c in range(n) for k in range(1, R.e)]
    rnd.shuffle(cand)
    slots = tuple(cand[: min(len(cand), 6 if R.q == 2 else 3)])
    cons = []
    for a in range(nrows):
        for b in range(a, nrows):
            ds = tuple(sorted(rnd.sample(range(R.e), rnd.randint(1, R.e))))
            cons.append((a, b, ds))
    return LiftSystem(R, tuple(rows), slots, tuple(cons))


@given(st.integers(0, 10**6))
def test_solver_against_exhaustive_search(seed):
    sys = _random_system(seed)
    q = sys.ring.q
    brute = {v for v in product(range(q), repeat=len(sys.slots)) if not sys.violations(v)}
    sol = solve_lift_system(sys)
    got = list(sol.solutions())
    assert len(got) == len(set(got)) == sol.count() == len(brute)
    assert set(got) == brute
    assert sol.consistent == bool(brute)


def test_plan_steps():
    assert [(p.level, p.rule) for p in plan_steps(preset("R41"))] == [(2, "base:even"), (4, "X:k+2")]
    assert [(p.level, p.rule) for p in plan_steps(preset("R51"))] == [(3, "base:odd-k4"), (5, "Y:tail")]
    assert [(p.level, p.rule) for p in plan_steps(preset("F2u2"))] == [(2, "base:e=k=2")]
    assert [p.level for p in plan_steps(preset("R71"), "Y")] == [3, 5, 7]
    with pytest.raises(WrongMode):
        plan_steps(preset("R51"), "X")
    with pytest.raises(WrongMode):
        plan_steps(preset("R41"), "Y")


def test_base_lift_e_equals_kappa_two():
    F = preset("F2u2")
    D = LinearCodeT.span(F.field, [(1, 1)], 2)
    ch = CodeChain(F, 2, (D,), (1, 0))
    codes = list(construct(ch, strategy="enumerate"))
    assert len(codes) == 2 == count_with_torsion_chain(ch)
    assert all(C.is_self_orthogonal() for C in codes)
    (flag,) = list(full_flags(ch))
    frame = Frame.from_flag(F, flag)
    states = list(lift_base(frame, plan_steps(F)[0]))
    assert len({s.code() for s in states}) == 2


def test_step_from_example_c3():
    """C_3 = <[1, 1, u]> lifted to level 5: all 256 completions, matching exhaustive filtering."""
    ch = example_chain()
    (flag,) = list(full_flags(ch))
    frame = Frame.from_flag(R52, flag)
    plans = plan_steps(R52, lam=ch.lam)
    base = [s for s in lift_base(frame, plans[0]) if s.blocks[0][0] == (1, 1, Q)]
    assert len(base) == 1
    lifted = {s.code() for s in lift_step(base[0], plans[1], d_prime=flag[plans[1].gamma])}
    brute = set()
    for a3, b3, a4, b4 in product(range(4), repeat=4):
        C = LinearCodeR(R52, 5, 3, [(1, 1 + a3 * Q**3 + a4 * Q**4, Q + b3 * Q**3 + b4 * Q**4)])
        if C.is_self_orthogonal():
            brute.add(C)
    assert len(brute) == 256 and lifted == brute


def test_example_construction_and_certificate():
    res = sample_construction(example_chain(), seed=3)
    cert = res.certificate
    assert cert["self_orthogonal"] and all(cert["torsion_match"])
    assert all(x["self_orthogonal"] and x["property_P"] for x in cert["property_P_per_level"])
    row = res.code.howell[1][0]
    assert row[0] == 1 and (row[1] // Q) % Q == 0 and (row[2] // Q) % Q == 1
    assert [s["solutions"] for s in res.steps] == [4, 256]
    assert len(list(construct(example_chain(), strategy="enumerate"))) == 1024


def test_zero_chain_gives_zero_code():
    R = preset("R41")
    Z = LinearCodeT.zero(R.field, 3)
    C = construct(CodeChain(R, 3, (Z, Z), (0, 0, 0, 0)))
    assert C == LinearCodeR.zero(R, 4, 3)


def test_self_dual_certificate():
    R = preset("R41")
    D1 = LinearCodeT.zero(R.field, 2)
    D2 = LinearCodeT.span(R.field, [(1, 1)], 2)
    res = sample_construction(CodeChain(R, 2, (D1, D2), (0, 1, 0, 1)), seed=0)
    assert res.certificate["self_dual"] is True


@pytest.mark.parametrize("name,n", [("R41", 3), ("R51", 2), ("R61", 2), ("R31", 3), ("F4u2", 2), ("R71", 2)])
def test_constructed_codes_are_self_orthogonal(name, n):
    from chainsd.enumeration import iter_types
    from chainsd.oracle import iter_so_flags
    from chainsd.codes import check_chain_conditions

    R = preset(name)
    top = R.s + R.theta
    rnd = random.Random(1)
    built = 0
    for lam in iter_types(n, R.e):
        dims = [sum(lam[: i + 1]) for i in range(top)]
        flags = [fl for fl in iter_so_flags(R.field, n, dims) if check_chain_conditions(CodeChain(R, n, fl, lam)).ok]
        if not flags:
            continue
        ch = CodeChain(R, n, rnd.choice(flags), lam)
        C = construct(ch, seed=rnd.randrange(100))
        assert C.type == lam
        assert codeword_set(C) <= codeword_set(C.dual())
        assert satisfies_property_P(C)
        built += 1
    assert built >= 2


def test_inadmissible_chain():
    R = preset("R71")
    D = LinearCodeT.span(R.field, [(1, 1)], 2)
    ch = CodeChain(R, 2, (D,) * 4, (1, 0, 0, 0, 0, 0, 0))
    with pytest.raises(ChainConditionError) as info:
        construct(ch)
    assert tuple(info.value.failed) == ("B2",)
    with pytest.raises(ExistenceFailure) as info:
        sample_construction(ch, check=False)
    assert info.value.level == 3 and info.value.clauses == ("B2",)


def test_step_level_mismatch():
    ch = example_chain()
    (flag,) = list(full_flags(ch))
    frame = Frame.from_flag(R52, flag)
    base = next(lift_base(frame, plan_steps(R52)[0]))
    with pytest.raises(ValueError):
        list(lift_step(base, plan_steps(R52)[0]))
    assert isinstance(base, LiftState)
