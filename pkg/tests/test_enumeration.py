import pytest
from hypothesis import given
from hypothesis import strategies as st

from chainsd.chain_ring import preset, ring_new
from chainsd.codes import CodeChain, LinearCodeT
from chainsd.enumeration import (
    S_THETA_RULES,
    CountContext,
    FormulaInapplicable,
    chain_count,
    count_sd_type,
    count_so_type,
    count_with_torsion_chain,
    first_one_count,
    is_symmetric_type,
    iter_types,
    s_theta_case,
    total_counts,
)
from chainsd.oracle import oracle_chain_counts, oracle_count_SD, so_summary
from reference_tables import TABLES


def so(name, n, lam):
    return count_so_type(CountContext.make(preset(name), n, lam))


def sd(name, n, lam):
    return count_sd_type(CountContext.make(preset(name), n, lam))


@pytest.mark.parametrize(
    "name,n,lam,want",
    [
        ("R42", 3, (0, 0, 1, 0), 336),
        ("R42", 3, (1, 0, 0, 0), 1280),
        ("R42", 3, (0, 0, 0, 3), 1),
        ("R51", 3, (0, 0, 1, 0, 0), 48),
        ("R51", 3, (1, 0, 0, 0, 0), 192),
        ("R41", 4, (1, 0, 0, 0), 1024),
        ("R41", 4, (0, 2, 0, 0), 384),
        ("R41", 2, (1, 0, 0, 0), 0),
        ("R41", 2, (0, 1, 0, 1), 2),
        ("R61", 2, (0, 0, 1, 0, 0, 0), 8),
        ("R71", 2, (0, 0, 0, 1, 0, 0, 0), 8),
        ("F2u2", 2, (1, 0), 2),
    ],
)
def test_so_counts(name, n, lam, want):
    assert so(name, n, lam) == want


def test_sd_counts():
    assert sd("R41", 2, (0, 1, 0, 1)) == 2
    assert sd("R41", 2, (0, 0, 1, 0)) == 0
    R = preset("R31")
    assert sd("R31", 2, (0, 1, 1)) == oracle_count_SD(R, 2, (0, 1, 1))


def test_zero_cases():
    R = preset("R51")
    assert chain_count("B", CountContext.make(R, 4, (0,) * 5)) == 1
    assert chain_count("Z", CountContext.make(R, 4, (0, 1, 0, 0, 0))) == 0
    for name in ("R41", "R42", "R71", "F2u2", "R31"):
        R = preset(name)
        assert count_so_type(CountContext.make(R, 3, (0,) * R.e)) == 1
        t = total_counts(R, 0)
        assert (t.total_so, t.total_sd) == (1, 1)


def test_table1_total():
    t = total_counts(preset("R42"), 3)
    assert t.total_so == sum(TABLES[("R42", 3)].values()) + 1


def test_example_chain_count():
    R = preset("R52")
    D = LinearCodeT.span(R.field, [(1, 1, 0)], 3)
    assert count_with_torsion_chain(CodeChain(R, 3, (D, D, D), (1, 0, 0, 0, 0))) == 1024


def test_bad_chain_rejected():
    from chainsd.enumeration import ChainConditionError

    R = preset("R52")
    D = LinearCodeT.span(R.field, [(1, 1)], 2)
    with pytest.raises(ChainConditionError) as info:
        count_with_torsion_chain(CodeChain(R, 2, (D, D, D), (1, 0, 0, 0, 0)))
    assert "A2" in info.value.failed


def test_inapplicable_is_distinct_from_zero():
    R = ring_new({"s_exp": 1, "m": 1, "g": [[1], [0], [0], [0]], "t": 4})  # F2[u]/u^4
    ctx = CountContext.make(R, 2, (1, 0, 0, 0))
    with pytest.raises(FormulaInapplicable):
        ctx.eta(0)
    with pytest.raises(FormulaInapplicable):
        ctx.eta32
    # the eta-free branch still covers every type here, and agrees with the census
    for n in (2, 3):
        census = so_summary(R, n)
        for lam in iter_types(n, 4):
            assert count_so_type(CountContext.make(R, n, lam)) == census.so.get(lam, 0)


def test_rule_table_is_data():
    assert all(isinstance(name, str) and callable(p) and callable(v) for name, p, v in S_THETA_RULES)
    names = [r[0] for r in S_THETA_RULES]
    assert len(names) == len(set(names))


@pytest.mark.parametrize("name,nmax", [("R41", 4), ("R42", 3), ("R61", 5), ("R71", 4), ("R51", 4), ("R31", 5)])
def test_chain_counts_against_flag_census(name, nmax):
    R = preset(name)
    for n in range(1, nmax + 1):
        for lam in iter_types(n, R.e):
            ctx = CountContext.make(R, n, lam)
            dims = [ctx.Lam(i) for i in range(1, ctx.top + 1)]
            P = ctx.s - ctx.k1
            cons = {P: False} if n % 2 == 0 and P >= 1 else {}
            assert chain_count("B", ctx) == oracle_chain_counts(R.field, n, dims, cons), (n, lam)
            for p in range(ctx.top):
                c = {p + 1: True}
                if p >= 1:
                    c[p] = False
                assert first_one_count(ctx, p) == oracle_chain_counts(R.field, n, dims, c), (n, lam, p)


@pytest.mark.slow
@pytest.mark.parametrize("name,lam", [("R71", (1, 1, 0, 0, 0, 0, 0)), ("R61", (1, 1, 0, 0, 0, 0)), ("R41", (1, 1, 0, 0))])
def test_bee_at_length_six(name, lam):
    R = preset(name)
    ctx = CountContext.make(R, 6, lam)
    dims = [ctx.Lam(i) for i in range(1, ctx.top + 1)]
    P = ctx.s - ctx.k1
    assert chain_count("B", ctx) == oracle_chain_counts(R.field, 6, dims, {P: False} if P >= 1 else {})


@pytest.mark.parametrize("name,n", [("R41", 3), ("R31", 4), ("F2u2", 4), ("F4u2", 3), ("R61", 3), ("R51", 3)])
def test_totals_match_census(name, n):
    R = preset(name)
    t = total_counts(R, n)
    c = so_summary(R, n)
    assert (t.total_so, t.total_sd) == (c.total_so, c.total_sd)
    assert +t.so == +c.so and +t.sd == +c.sd


@given(st.sampled_from(["R41", "R51", "R61", "R71", "R42", "R31", "F2u2", "F4u2"]), st.integers(1, 6), st.data())
def test_sd_bounded_by_so(name, n, data):
    R = preset(name)
    lam = data.draw(st.sampled_from(list(iter_types(n, R.e))))
    ctx = CountContext.make(R, n, lam)
    a, b = count_so_type(ctx), count_sd_type(ctx)
    assert 0 <= b <= a
    if b:
        assert is_symmetric_type(n, lam)
