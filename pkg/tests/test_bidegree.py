from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from nkhodge.bidegree import (
    counting_operator,
    d_c,
    decompose_form,
    differential_split,
    j_apply,
    j_inverse_apply,
    j_operator,
    lefschetz_triple,
    pq_basis,
    pq_projector,
    _split_by_derivations,
    _split_by_projectors,
)
from nkhodge.exterior import Form
from nkhodge.operators import GradedOperator, graded_commutator
from nkhodge.scalars import I, ONE, Scalar, rational


class TestPQBasis:
    @pytest.mark.parametrize("name", ["torus6", "s3xs3-nk", "kodaira-thurston"])
    def test_dimension_count(self, name, request):
        model = __import__("nkhodge.models", fromlist=["builtin_model"]).builtin_model(name)
        pqb = pq_basis(model)
        n = model.dim // 2
        for k in range(model.dim + 1):
            total = sum(
                len(pqb.monomial_masks(p, k - p)) for p in range(max(0, k - n), min(n, k) + 1)
            )
            assert total == comb(model.dim, k)
        for p in range(n + 1):
            for q in range(n + 1):
                assert len(pqb.monomial_masks(p, q)) == comb(n, p) * comb(n, q)

    def test_roundtrip(self, s3xs3):
        pqb = pq_basis(s3xs3)
        for mask in range(64):
            f = Form.basis(6, mask)
            assert pqb.pq_coords_to_form(pqb.form_to_pq(f)) == f

    def test_projector_on_one_form(self, torus6):
        # pi^{1,0} e^1 = (e^1 - i J e^1)/2 = (e^1 + i e^2)/2 with Je_1 = e_2
        proj = pq_projector(torus6, 1, 0)
        got = proj.apply(Form.basis(6, 0b000001))
        expect = (Form.basis(6, 0b000001) + Form.basis(6, 0b000010).scale(I)).scale(
            rational(1, 2)
        )
        assert got == expect

    def test_projectors_resolve_identity(self, s3xs3):
        acc = GradedOperator.zero(6, 0)
        for p in range(4):
            for q in range(4):
                acc = acc + pq_projector(s3xs3, p, q)
        assert acc == GradedOperator.identity(6)

    def test_projectors_idempotent_orthogonal(self, s3xs3):
        p20 = pq_projector(s3xs3, 2, 0)
        p11 = pq_projector(s3xs3, 1, 1)
        assert p20.compose(p20) == p20
        assert p20.compose(p11).is_zero()

    def test_out_of_range(self, s3xs3):
        with pytest.raises(ValueError):
            pq_projector(s3xs3, 4, 0)


class TestJAction:
    def test_multiplicative(self, s3xs3):
        a = Form.basis(6, 0b000001)
        b = Form.basis(6, 0b001010)
        lhs = j_apply(s3xs3, a.wedge(b))
        rhs = j_apply(s3xs3, a).wedge(j_apply(s3xs3, b))
        assert lhs == rhs

    @given(
        st.lists(st.tuples(st.integers(0, 63), st.integers(-3, 3), st.integers(-3, 3)), max_size=3),
        st.lists(st.tuples(st.integers(0, 63), st.integers(-3, 3), st.integers(-3, 3)), max_size=3),
    )
    @settings(max_examples=30, deadline=None)
    def test_multiplicative_random(self, terms_a, terms_b):
        model = __import__("nkhodge.models", fromlist=["builtin_model"]).builtin_model("s3xs3-nk")
        a = Form(6, {m: Scalar(x, y, 0, 0, 1, 3) for m, x, y in terms_a})
        b = Form(6, {m: Scalar(x, 0, y, 0, 1, 3) for m, x, y in terms_b})
        assert j_apply(model, a.wedge(b)) == j_apply(model, a).wedge(j_apply(model, b))

    def test_eigenvalues(self, s3xs3):
        pqb = pq_basis(s3xs3)
        for p in range(4):
            for q in range(4):
                eig = I ** ((p - q) % 4)
                for v in pqb.basis_forms(p, q):
                    assert j_apply(s3xs3, v) == v.scale(eig)

    def test_omega_fixed(self, s3xs3, torus6):
        for m in (s3xs3, torus6):
            assert j_apply(m, m.omega()) == m.omega()

    def test_inverse(self, s3xs3):
        f = Form(6, {0b000111: ONE, 0b000001: I})
        assert j_inverse_apply(s3xs3, j_apply(s3xs3, f)) == f

    def test_operator_matrix_matches_action(self, kodaira):
        op = j_operator(kodaira)
        f = Form(4, {0b0011: ONE, 0b0101: I})
        assert op.apply(f) == j_apply(kodaira, f)


class TestSplit:
    def test_routes_agree_dim6(self, s3xs3, torus6):
        for m in (s3xs3, torus6):
            a = _split_by_projectors(m)
            b = _split_by_derivations(m)
            for name in ("mu", "del", "delbar", "mubar"):
                assert a.components()[name] == b.components()[name]

    def test_total_and_conjugation(self, s3xs3):
        split = differential_split(s3xs3)
        assert split.total() == s3xs3.d()
        assert split.mubar == split.mu.conjugated()
        assert split.delbar == split.del_.conjugated()

    def test_bidegree_images(self, s3xs3):
        split = differential_split(s3xs3)
        for op, (dp, dq) in (
            (split.mu, (2, -1)),
            (split.del_, (1, 0)),
            (split.delbar, (0, 1)),
            (split.mubar, (-1, 2)),
        ):
            for p in range(4):
                for q in range(4):
                    pt, qt = p + dp, q + dq
                    for v in pq_basis(s3xs3).basis_forms(p, q):
                        img = op.apply(v)
                        if img.is_zero():
                            continue
                        parts = decompose_form(s3xs3, img)
                        assert set(parts) == {(pt, qt)}

    def test_torus_components_vanish(self, torus6):
        split = differential_split(torus6)
        assert all(op.is_zero() for op in split.components().values())

    def test_strictness_mu_nonzero(self, s3xs3):
        assert not differential_split(s3xs3).mu.is_zero()

    def test_kodaira_integrable(self, kodaira):
        split = differential_split(kodaira)
        assert split.mu.is_zero()
        assert split.delbar.compose(split.delbar).is_zero()


class TestDC:
    def test_torus_dc_zero(self, torus6):
        assert d_c(torus6).is_zero()

    def test_dc_nonzero_strict(self, s3xs3):
        assert not d_c(s3xs3).is_zero()

    def test_dc_differs_from_adjoint_bracket_by_torsion(self, s3xs3):
        # [d*, L] + d^c = 3i(mu - mubar) != 0 in the strict case
        from nkhodge.operators import adjoint

        dstar = adjoint(s3xs3.d(), s3xs3.gram())
        l_op = lefschetz_triple(s3xs3)[0]
        split = differential_split(s3xs3)
        gap = graded_commutator(dstar, l_op) + d_c(s3xs3)
        expect = (split.mu - split.mubar).scale(Scalar(0, 0, 3, 0))
        assert gap == expect
        assert not gap.is_zero()


class TestLefschetz:
    def test_counting_operator_values(self, s3xs3):
        h = counting_operator(s3xs3)
        assert h.apply(Form.basis(6, 0)) == Form.basis(6, 0, rational(-3))
        assert h.apply(Form.basis(6, 0b000111)).is_zero()  # degree 3 = n
        assert h.apply(Form.basis(6, 0b111111)) == Form.basis(6, 0b111111, rational(3))

    def test_sl2_relations(self, s3xs3, torus6, kodaira):
        for m in (s3xs3, torus6, kodaira):
            l_op, lam, h = lefschetz_triple(m)
            assert graded_commutator(l_op, lam) == h
            assert graded_commutator(h, l_op) == l_op.scale(rational(2))
            assert graded_commutator(h, lam) == lam.scale(rational(-2))
