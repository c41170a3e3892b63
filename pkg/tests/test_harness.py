from fractions import Fraction

import pytest

from slval.exactnum import Scalar
from slval.linalg import Matrix, Vector, det, random_sl_matrix
from slval.polytope import (
    Halfspace,
    Polytope,
    clip,
    cone_hull,
    contains,
    dim,
    from_points,
    relint_contains_origin,
)
from slval.harness import (
    FAMILIES,
    SplitCase,
    check_cone_decomposition,
    check_sl_invariance,
    check_valuation_identity,
    classify_split,
    fit_classification,
    gen_polytope,
    gen_split,
    probe_matrix,
    probe_polytopes,
    run_suite,
    usc_sequences,
)
from slval.triangulate import volume
from slval.valuation import ClassifiedValuation, evaluate, relint_sign

from oracles import shoelace_area


def P(*tuples):
    return from_points([Vector(t) for t in tuples])


SQUARE_AROUND_0 = P((-2, -1), (2, -1), (-2, 1), (2, 1))


class TestGenPolytope:
    def test_deterministic(self):
        for family in FAMILIES:
            assert gen_polytope(5, 2, family=family) == gen_polytope(5, 2, family=family)
        assert gen_polytope(5, 2) != gen_polytope(6, 2)

    def test_family_contracts(self):
        for seed in range(12):
            zero2 = Vector.zero(2)
            assert contains(gen_polytope(seed, 2, family="contains_origin"), zero2)
            assert relint_contains_origin(gen_polytope(seed, 2, family="origin_in_relint"))
            assert not contains(gen_polytope(seed, 2, family="avoids_origin"), zero2)
            assert dim(gen_polytope(seed, 2, family="lower_dim")) < 2
            assert dim(gen_polytope(seed, 3, family="generic")) == 3

    def test_vertex_budget(self):
        poly = gen_polytope(3, 2, max_vertices=5)
        assert len(poly.vertices) <= 5
        with pytest.raises(ValueError):
            gen_polytope(0, 2, max_vertices=13)
        with pytest.raises(ValueError):
            gen_polytope(0, 2, family="weird")


class TestGenSplit:
    def test_deterministic(self):
        a = gen_split(7, SQUARE_AROUND_0)
        b = gen_split(7, SQUARE_AROUND_0)
        assert a == b

    def test_rejects_points(self):
        with pytest.raises(ValueError):
            gen_split(0, P((0, 0)))

    def test_cover_certificate(self):
        # offsets of the opposite halfspaces never leave a gap
        for seed in range(40):
            case = gen_split(seed, SQUARE_AROUND_0)
            assert (case.hyperplane.offset + case.opposite.offset).sign() >= 0
            assert case.left == clip(case.whole, case.hyperplane)
            assert case.right == clip(case.whole, case.opposite)
            assert not case.left.is_empty and not case.right.is_empty
            assert dim(case.left) == dim(case.whole) == dim(case.right)

    def test_volume_never_double_counted(self):
        for seed in range(30):
            case = gen_split(seed, SQUARE_AROUND_0)
            assert volume(case.left) + volume(case.right) == volume(case.whole) + volume(
                case.meet
            )

    def test_degenerate_residues_pass_through_origin(self):
        for seed in (0, 20, 40, 61, 82, 3):
            if seed % 20 < 5:
                case = gen_split(seed, SQUARE_AROUND_0)
                assert case.through_origin
                assert case.is_classic

    def test_segment_split_through_origin(self):
        seg = P((-1, 0), (1, 0))
        case = gen_split(0, seg)
        assert case.through_origin
        assert case.meet == P((0, 0))
        assert {case.left, case.right} == {P((-1, 0), (0, 0)), P((0, 0), (1, 0))}

    def test_all_five_labels_reachable(self):
        # a polytope with the origin deep inside can never produce
        # origin-in-neither, so sweep a shifted copy as well
        shifted = P((1, 1), (3, 1), (1, 2), (3, 2))
        labels = set()
        for seed in range(60):
            labels.add(classify_split(gen_split(seed, SQUARE_AROUND_0)))
            labels.add(classify_split(gen_split(seed, shifted)))
        assert labels == {
            "inclusion",
            "origin-in-both",
            "origin-in-one",
            "origin-in-neither",
            "dimension-drop",
        }

    def test_dimension_drop_label_is_honest(self):
        seg = P((-1, 0), (1, 0))
        case = gen_split(0, seg)
        assert classify_split(case) == "dimension-drop"
        assert dim(case.whole) == dim(case.meet) + 1


class TestIdentityCheck:
    def test_relint_sign_on_degenerate_segment_split(self):
        case = gen_split(0, P((-1, 0), (1, 0)))
        assert check_valuation_identity(relint_sign, case) is True
        # the four values realize 0 + 0 = -1 + 1
        assert relint_sign(case.left) == Scalar(0)
        assert relint_sign(case.whole) == Scalar(-1)
        assert relint_sign(case.meet) == Scalar(1)

    def test_volume_on_half_square(self):
        sq = P((0, 0), (1, 0), (0, 1), (1, 1))
        h = Halfspace(Vector((1, 0)), Fraction(1, 2))
        case = SplitCase(
            whole=sq,
            left=clip(sq, h),
            right=clip(sq, h.complement()),
            meet=clip(clip(sq, h), h.complement()),
            hyperplane=h,
            opposite=h.complement(),
        )
        assert check_valuation_identity(volume, case) is True

    def test_broken_functional_yields_witness(self):
        sq = P((0, 0), (1, 0), (0, 1), (1, 1))
        h = Halfspace(Vector((1, 0)), Fraction(1, 2))
        case = SplitCase(
            whole=sq,
            left=clip(sq, h),
            right=clip(sq, h.complement()),
            meet=clip(clip(sq, h), h.complement()),
            hyperplane=h,
            opposite=h.complement(),
        )
        witness = check_valuation_identity(lambda p: Scalar(dim(p)), case)
        assert witness is not True
        assert witness["left"] + witness["right"] != witness["whole"] + witness["meet"]


class TestSlInvariance:
    def test_basis_valuations_invariant(self):
        for seed in range(10):
            poly = gen_polytope(seed, 2, family="generic")
            a = random_sl_matrix(seed, 2, 8)
            assert check_sl_invariance(volume, poly, a) is True
            assert check_sl_invariance(relint_sign, poly, a) is True

    def test_non_unimodular_rejected(self):
        with pytest.raises(ValueError):
            check_sl_invariance(volume, SQUARE_AROUND_0, Matrix([[2, 0], [0, 1]]))


class TestFit:
    def test_probe_matrix_n2_values(self):
        rows = probe_matrix(2).rows
        expected = [
            [1, 1, 0, 1, 0],
            [1, 0, 0, 0, 0],
            [1, -1, 0, 1, 0],
            [1, 0, Fraction(1, 2), 1, Fraction(1, 2)],
            [1, 0, Fraction(1, 2), 0, 1],
        ]
        assert [[c.a for c in row] for row in rows] == expected

    def test_probe_cone_volume_against_area_oracle(self):
        p5 = probe_polytopes(2)[4]
        pts = [(v[0].a, v[1].a) for v in cone_hull(p5).vertices]
        assert shoelace_area(pts) == Fraction(1)

    def test_probe_matrix_invertible(self):
        for n in (2, 3):
            assert det(probe_matrix(n)) != Scalar(0)

    def test_round_trip_simple(self):
        blackbox = ClassifiedValuation.linear(2, 0, 3, 0, 0)
        report = fit_classification(lambda p: evaluate(blackbox, p), 2, validation_count=30)
        assert report.coefficients == tuple(Scalar(c) for c in (2, 0, 3, 0, 0))
        assert report.residual_max == Scalar(0)

    def test_round_trip_full(self):
        blackbox = ClassifiedValuation.linear(1, 2, 3, 4, 5)
        report = fit_classification(lambda p: evaluate(blackbox, p), 2, validation_count=30)
        assert report.coefficients == tuple(Scalar(c) for c in (1, 2, 3, 4, 5))
        assert report.residual_max == Scalar(0)

    def test_residual_detects_non_valuation(self):
        report = fit_classification(lambda p: Scalar(dim(p)), 2, validation_count=30)
        assert report.residual_max != Scalar(0)


class TestConeDecomposition:
    def test_triangle_worked_example(self):
        tri = P((1, 0), (2, 0), (1, 1))
        assert shoelace_area([(0, 0), (1, 0), (2, 0), (1, 1)]) == Fraction(1)
        assert volume(cone_hull(tri)) == Scalar(1)
        assert check_cone_decomposition(tri) is True

    def test_square_worked_example(self):
        sq = P((1, 1), (2, 1), (1, 2), (2, 2))
        assert shoelace_area([(0, 0), (2, 1), (1, 2), (2, 2)]) == Fraction(2)
        assert volume(cone_hull(sq)) == Scalar(2)
        assert check_cone_decomposition(sq) is True

    def test_origin_inside_rejected(self):
        with pytest.raises(ValueError):
            check_cone_decomposition(P((0, 0), (1, 0), (0, 1)))

    def test_flat_branch(self):
        seg = P((1, 0), (0, 1))
        assert check_cone_decomposition(seg) is True

    def test_flat_branch_needs_origin_off_hull(self):
        with pytest.raises(ValueError):
            check_cone_decomposition(P((1, 0), (2, 0)))  # aff contains 0


class TestUscSequences:
    scales = [Scalar(Fraction(1, 2**k)) for k in range(4)]

    def test_nonzero_c0p_violates(self):
        report = usc_sequences(Scalar(1), Scalar(0), self.scales)
        assert [v == Scalar(-1) for v in report["sequence1"]["values"]] == [True] * 4
        assert report["sequence1"]["limit_value"] == Scalar(1)
        assert not report["sequence1"]["violation"]
        assert [v == Scalar(1) for v in report["sequence2"]["values"]] == [True] * 4
        assert report["sequence2"]["limit_value"] == Scalar(-1)
        assert report["sequence2"]["violation"]
        assert report["violation"]

    def test_negative_c0p_violates_on_first_sequence(self):
        report = usc_sequences(Scalar(-1), Scalar(0), self.scales)
        assert report["sequence1"]["violation"]
        assert not report["sequence2"]["violation"]

    def test_origin_indicator_alone_is_fine(self):
        report = usc_sequences(Scalar(0), Scalar(1), self.scales)
        assert not report["violation"]
        assert report["sequence1"]["values"] == [Scalar(1)] * 4

    def test_zero_functional(self):
        assert not usc_sequences(Scalar(0), Scalar(0), self.scales)["violation"]

    def test_scale_validation(self):
        with pytest.raises(ValueError):
            usc_sequences(Scalar(1), Scalar(0), [])
        with pytest.raises(ValueError):
            usc_sequences(Scalar(1), Scalar(0), [Scalar(1), Scalar(1)])
        with pytest.raises(ValueError):
            usc_sequences(Scalar(1), Scalar(0), [Scalar(-1)])


class TestSuite:
    def test_default_suite_passes(self):
        lines = list(run_suite(2, seed=1, cases=8))
        assert lines and all(line["pass"] for line in lines)

    def test_suite_is_deterministic(self):
        a = list(run_suite(2, seed=3, cases=6))
        b = list(run_suite(2, seed=3, cases=6))
        assert a == b

    def test_broken_plugin_reports_witness(self):
        lines = list(run_suite(2, seed=1, cases=4, include_broken=True))
        broken = [line for line in lines if line["check"] == "broken_plugin"]
        assert len(broken) == 1
        assert not broken[0]["pass"]
        assert "witness" in broken[0]
