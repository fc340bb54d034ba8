import itertools
import json
import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (
    B0_23_M3,
    B1_23,
    B1_23_M3,
    PAIRS3,
    example_23,
    example_23_m3,
    four_party_scheme,
    random_scheme,
    semi_white_24,
)
from sxvcs import oracle
from sxvcs.access import AccessStructure, forbidden_family, threshold_structure, to_mask
from sxvcs.builder2n import build_optimal_2n
from sxvcs.gf2 import BitMatrix, enumerate_solutions, iter_bits, popcount
from sxvcs.scheme import (
    InconsistentSystem,
    LinearScheme,
    PixelDistribution,
    SchemeError,
    SchemeKind,
    StackUndetermined,
    best_member,
    check_contrast,
    check_security,
    check_security_pw,
    classify,
    decompose_semi,
    describe_security_sets,
    insert,
    pxvcs_contrast_bound,
    scheme_from_json,
    scheme_to_dict,
    scheme_to_json,
    stack_result,
    to_perfect_white,
    to_pxvcs,
)

F = Fraction




def schemes(max_n=4):
    return st.integers(0, 2**32 - 1).map(lambda seed: random_scheme(random.Random(seed), n_range=(2, max_n)))


class TestBuild:
    def test_dimensions(self):
        s = example_23()
        assert (s.n, s.t, s.m, s.k) == (3, 3, 2, 1)

    def test_inconsistent_rejected(self):
        st_ = AccessStructure.from_sets(2, [{1, 2}], declared=[{1, 2}, {1, 2}])
        with pytest.raises(InconsistentSystem):
            LinearScheme.build(st_, BitMatrix.zeros(2, 1), BitMatrix.from_lists([[1], [0]]))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            LinearScheme.build(PAIRS3, BitMatrix.zeros(3, 2), BitMatrix.zeros(3, 1))

    def test_unequal_k(self):
        with pytest.raises(ValueError):
            LinearScheme.build(PAIRS3, [BitMatrix.zeros(3, 1)] * 2, [BitMatrix.ones(3, 1)])

    @given(schemes())
    def test_shared_nullspace(self, s):
        bases = {r.nullspace_basis for r in s.solve0 + s.solve1}
        assert len(bases) == 1


class TestContrast:
    def test_example_23(self):
        rep = check_contrast(example_23())
        assert rep.passed
        assert rep.alpha == (F(1, 2), F(1, 2), F(1))
        assert rep.average == F(2, 3)
        assert rep.minimum == F(1, 2)

    def test_equal_sides_fail_everywhere(self):
        s = LinearScheme.build(PAIRS3, B1_23, B1_23)
        rep = check_contrast(s)
        assert not rep.passed
        assert all(a == 0 for a in rep.alpha)
        assert rep.failure.reason == "weight"

    def test_example_m3(self):
        rep = check_contrast(example_23_m3())
        assert rep.passed
        assert rep.alpha == (F(1, 3), F(1, 3), F(2, 3))

    def test_failure_names_set(self):
        b1 = BitMatrix.from_lists([[1, 0], [1, 0], [0, 0]])
        rep = check_contrast(LinearScheme.build(PAIRS3, BitMatrix.zeros(3, 2), b1))
        assert rep.failure.q == to_mask({2, 3})
        assert "{2,3}" in str(rep.failure)

    @given(schemes())
    def test_static_weights_match_enumeration(self, s):
        rep = check_contrast(s)
        c0, c1 = oracle.solution_sets(s)
        for q, a in zip(rep.sets, rep.alpha):
            rows = list(iter_bits(q))
            w0 = [popcount(x.stack_rows(rows)) for x in c0]
            w1 = [popcount(x.stack_rows(rows)) for x in c1]
            assert a == F(sum(w1), len(c1) * s.m) - F(sum(w0), len(c0) * s.m)

    @given(schemes())
    def test_alpha_bounds(self, s):
        rep = check_contrast(s)
        if rep.passed:
            assert all(0 < a <= 1 for a in rep.alpha)
            assert rep.average == sum(rep.alpha) / len(rep.alpha)


class TestStack:
    def test_path_pair(self):
        s = build_optimal_2n(5)
        e0, e1 = stack_result(s, {1, 3})
        b1 = s.b1_list[0]
        assert e1 == (b1.rows[0] ^ b1.rows[1],)
        assert e0 == (0,)

    def test_single_row(self):
        s = example_23_m3()
        for r, q in enumerate(s.qualified.row_sets):
            e0, e1 = stack_result(s, q)
            assert e0 == (B0_23_M3.rows[r],) and e1 == (B1_23_M3.rows[r],)

    def test_undetermined(self):
        with pytest.raises(StackUndetermined):
            stack_result(example_23(), {1})

    @given(schemes())
    def test_pw_stacks_blank(self, s):
        pw = LinearScheme.build(s.structure, [BitMatrix.zeros(s.t, s.m)], [s.b1_list[0]])
        for q in s.structure.qualified_sets:
            if pw.determines(q):
                assert stack_result(pw, q)[0] == (0,)

    @given(schemes())
    def test_determined_matches_enumeration(self, s):
        c0, _ = oracle.solution_sets(s)
        for q in range(1, 1 << s.n):
            rows = list(iter_bits(q))
            constant = len({x.stack_rows(rows) for x in c0[: len(c0) // s.k]}) == 1
            assert s.determines(q) == constant


class TestSecurity:
    def test_example_23_all_methods(self):
        s = example_23()
        for method in ("block", "coset"):
            assert check_security(s, method=method).passed
        assert check_security_pw(s).passed

    def test_four_party_counterexample(self):
        s = four_party_scheme()
        for rep in (check_security(s), check_security(s, method="coset"), check_security_pw(s)):
            assert not rep.passed
            assert rep.witness == to_mask({2})
            assert "F={2}" in rep.detail
            assert "S0[F]={0,0} != S1[F]={1,1}" in rep.detail

    def test_four_party_solution_sets(self):
        s = four_party_scheme()
        assert sorted(x.to_strings()[0] + x.to_strings()[1] + x.to_strings()[2] + x.to_strings()[3]
                      for x in enumerate_solutions(s.solve0[0])) == ["0000", "1011"]
        assert describe_security_sets(s, {2}) == (["0", "0"], ["1", "1"])

    def test_identical_sides_secure(self):
        s = LinearScheme.build(PAIRS3, B1_23, B1_23)
        assert check_security(s).passed

    @pytest.mark.parametrize("m", [1, 2])
    def test_three_of_four_pw_fails(self, m):
        st_ = threshold_structure(3, 4)
        rng = random.Random(m)
        for _ in range(20):
            rows = tuple(rng.randrange(1, 1 << m) for _ in range(4))
            s = LinearScheme.build(st_, BitMatrix.zeros(4, m), BitMatrix(4, m, rows))
            assert not check_security_pw(s).passed

    def test_zero_black_secure_but_not_contrast(self):
        s = LinearScheme.build(PAIRS3, BitMatrix.zeros(3, 2), BitMatrix.zeros(3, 2))
        assert check_security_pw(s).passed
        assert not check_contrast(s).passed

    def test_pw_method_needs_pw(self):
        with pytest.raises(SchemeError):
            check_security_pw(example_23_m3())

    @given(schemes(max_n=5))
    def test_methods_agree(self, s):
        coset = check_security(s, method="coset").passed
        if s.k == 1:
            assert check_security(s, method="block").passed == coset
            pw = LinearScheme.build(s.structure, [BitMatrix.zeros(s.t, s.m)], [s.b1_list[0] ^ s.b0_list[0]])
            assert check_security_pw(pw).passed == check_security(pw, method="block").passed

    @given(schemes())
    def test_block_consistency_means_restrictions_meet(self, s):
        if s.k != 1:
            return
        for f in forbidden_family(s.structure).all_forbidden():
            if f:
                from sxvcs.scheme import _secure_on_block

                assert _secure_on_block(s, f) == oracle.restrictions_meet(s, f)

    @given(schemes())
    def test_maximal_sets_suffice(self, s):
        fam = forbidden_family(s.structure)
        ok = check_security(s, method="coset").passed
        if ok:
            for f in fam.all_forbidden():
                assert oracle.restricted_equal(s, f)


class TestClassify:
    def test_example_23(self):
        c = classify(example_23())
        assert c.kind is SchemeKind.SXVCS and c.perfect_white
        assert c.name == "SXVCS+PW"
        assert c.is_semi_white and c.is_semi_black

    def test_example_m3(self):
        c = classify(example_23_m3())
        assert c.name == "SXVCS"

    def test_semi_white(self):
        s = semi_white_24()
        c = classify(s)
        assert c.name == "SemiSXVCS_White+PW"
        assert oracle.classify_scheme(s) == (SchemeKind.SEMI_WHITE, True)
        assert oracle.is_semi(*oracle.solution_sets(s), s.structure).reason == "white"
        assert not oracle.is_sxvcs(*oracle.solution_sets(s), s.structure)

    def test_not_a_scheme_diagnostics(self):
        c = classify(four_party_scheme())
        assert c.kind is SchemeKind.NOT_A_SCHEME
        assert any("F={2}" in d for d in c.diagnostics)

    @given(schemes())
    def test_sxvcs_static_literally(self, s):
        c = classify(s)
        if c.is_sxvcs:
            c0, c1 = oracle.solution_sets(s)
            for q in s.structure.qualified_sets:
                rows = list(iter_bits(q))
                assert len({x.stack_rows(rows) for x in c0}) == 1
                assert len({x.stack_rows(rows) for x in c1}) == 1


class TestInsert:
    def test_n_of_n(self):
        for n in range(2, 6):
            st_ = threshold_structure(n, n)
            s = insert([BitMatrix.zeros(n, 2)], [BitMatrix.ones(n, 2)], st_)
            assert s.b0_list[0].is_zero()
            assert s.b1_list[0].rows == ((0b11 if n % 2 else 0),)

    def test_idempotent_on_example(self):
        c0 = [BitMatrix.from_lists(x) for x in _printed(0)]
        c1 = [BitMatrix.from_lists(x) for x in _printed(1)]
        s = insert(c0[:1], c1[:1], PAIRS3)
        assert s.b0_list[0].is_zero() and s.b1_list[0] == B1_23
        ref = example_23()
        assert set(enumerate_solutions(s.solve0[0])) == set(enumerate_solutions(ref.solve0[0]))
        assert set(enumerate_solutions(s.solve1[0])) == set(enumerate_solutions(ref.solve1[0]))

    def test_replication(self):
        x = BitMatrix.zeros(3, 1)
        s = insert([x, x], [BitMatrix.ones(3, 1)] * 3, PAIRS3)
        assert s.k == 6

    @given(schemes())
    def test_members_are_solutions(self, s):
        c0, c1 = oracle.solution_sets(s)
        c0, c1 = c0[:3], c1[:2]
        t = insert(c0, c1, s.structure)
        for x, r in zip(c0 * len(c1), t.solve0):
            assert x in set(enumerate_solutions(r))
        for x, r in zip(c1 * len(c0), t.solve1):
            assert x in set(enumerate_solutions(r))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            insert([BitMatrix.zeros(3, 1)], [BitMatrix.zeros(3, 2)], PAIRS3)


def _printed(color):
    from helpers import S0_23, S1_23

    return S0_23 if color == 0 else S1_23


class TestPerfectWhite:
    def test_example_m3(self):
        p = to_perfect_white(example_23_m3())
        assert p.b0_list[0].is_zero()
        assert p.b1_list[0].to_lists() == [[1, 0, 0], [0, 1, 0], [1, 1, 0]]
        assert classify(p).name == "SXVCS+PW"
        assert check_security_pw(p).passed

    def test_fixed_point(self):
        s = example_23()
        p = to_perfect_white(s)
        assert p.b0_list == s.b0_list and p.b1_list == s.b1_list

    def test_rejects_non_sxvcs(self):
        with pytest.raises(SchemeError):
            to_perfect_white(four_party_scheme())

    def test_contrast_can_grow(self):
        # white stack 100, black stack 011: alpha 1/3 before, 1 after
        st_ = threshold_structure(2, 2)
        s = LinearScheme.build(st_, BitMatrix.from_strings(["100"]), BitMatrix.from_strings(["011"]))
        assert check_contrast(s).alpha == (F(1, 3),)
        assert check_contrast(to_perfect_white(s)).alpha == (F(1),)

    @given(schemes())
    def test_alpha_law(self, s):
        """New contrast is |E0 ^ E1| / m: never smaller, equal iff E0 lies inside E1."""
        if not classify(s).is_sxvcs:
            return
        p = to_perfect_white(s)
        assert classify(p).name == "SXVCS+PW"
        assert check_security_pw(p).passed
        before, after = check_contrast(s), check_contrast(p)
        for q, a, b in zip(before.sets, before.alpha, after.alpha):
            e0, e1 = stack_result(s, q)
            assert b == F(popcount(e0[0] ^ e1[0]), s.m)
            assert b >= a
            assert (a == b) == (e0[0] & ~e1[0] == 0)


class TestDecompose:
    def test_single(self):
        s = example_23()
        assert decompose_semi(s) == [s]

    def test_semi_white(self):
        s = semi_white_24()
        parts = decompose_semi(s)
        assert len(parts) == 2
        for p in parts:
            assert classify(p).name == "SXVCS+PW"
            c0, c1 = oracle.solution_sets(p)
            assert oracle.is_sxvcs(c0, c1, p.structure)
        c0, c1 = oracle.solution_sets(s)
        u0 = Counter(x for p in parts for x in oracle.solution_sets(p)[0])
        u1 = Counter(x for p in parts for x in oracle.solution_sets(p)[1])
        assert u0 == Counter(c0) and u1 == Counter(c1)

    def test_best_member(self):
        parts = decompose_semi(semi_white_24())
        best = best_member(parts)
        avg = check_contrast(semi_white_24()).average
        assert check_contrast(best).average >= avg

    def test_rejects_general(self):
        with pytest.raises(SchemeError):
            decompose_semi(four_party_scheme())


class TestPXVCS:
    def test_optimal_24(self):
        p = to_pxvcs(build_optimal_2n(4))
        assert (p.m, p.k) == (1, 2)
        rep = check_contrast(p)
        assert rep.average == F(4, 6)
        assert rep.pxvcs_passed
        c0, c1 = oracle.solution_sets(p)
        assert oracle.is_pxvcs(c0, c1, p.structure)

    def test_m1_unchanged(self):
        s = build_optimal_2n(2)
        assert to_pxvcs(s) is s

    @given(schemes())
    def test_average_preserved(self, s):
        if classify(s).is_sxvcs:
            assert check_contrast(to_pxvcs(s)).average == check_contrast(s).average

    @pytest.mark.parametrize("n,expected", [(2, F(1)), (3, F(2, 3)), (5, F(6, 10)), (8, F(16, 28))])
    def test_bound(self, n, expected):
        assert pxvcs_contrast_bound(n) == expected

    def test_bound_rejects(self):
        with pytest.raises(ValueError):
            pxvcs_contrast_bound(1)

    def test_distribution(self):
        d = PixelDistribution.uniform(4, [0b0011, 0b0101])
        assert d.marginals() == (F(1), F(1, 2), F(1, 2), F(0))
        with pytest.raises(ValueError):
            PixelDistribution(2, ((1, F(1, 2)),))


class TestSerialization:
    def test_field_order(self):
        d = scheme_to_dict(example_23())
        assert list(d) == ["n", "m", "k", "qualified_rows", "minimal_qualified", "b0", "b1", "class"]
        assert d["qualified_rows"] == ["110", "101", "011"]
        assert d["b1"] == [["10", "01", "11"]]
        assert d["class"] == "SXVCS+PW"

    @given(schemes())
    def test_round_trip(self, s):
        text = scheme_to_json(s)
        back = scheme_from_json(text)
        assert back.b0_list == s.b0_list and back.b1_list == s.b1_list
        assert back.qualified.matrix == s.qualified.matrix
        assert scheme_to_json(back) == text

    def test_declared_round_trip(self):
        s = build_optimal_2n(4)
        d = json.loads(scheme_to_json(s))
        assert d["qualified_rows"] == ["1100", "0110", "0011"]
        assert "declared_qualified" not in d and len(d["minimal_qualified"]) == 6
        back = scheme_from_json(scheme_to_json(s))
        assert check_contrast(back).average == F(4, 6)

    def test_missing_field(self):
        d = scheme_to_dict(example_23())
        del d["b1"]
        with pytest.raises(ValueError, match="b1"):
            scheme_from_json(json.dumps(d))
