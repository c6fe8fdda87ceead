"""Harmonic spaces, Betti numbers, and Hodge tables.

Harmonic spaces are exact kernels of the Hodge Laplacian [[d*, d]], computed
by sparse fraction-free elimination (the dense oracle in ``linalg`` recomputes
them independently in the tests).  Betti numbers are deliberately computed
metric-free, from ranks of d alone, so that the sum rule
b^k = sum_{p+q=k} h^{p,q} compares two genuinely different computations:
harmonic dimensions against homology of the complex.

Models of dimension >= 10 are handled in their exactly orthogonalized
presentation (the numbers are coframe-invariant; returned basis forms are
mapped back to the native coframe).
"""

from __future__ import annotations

from dataclasses import dataclass

from .exterior import Form, graded_lex_key
from .linalg import SparseRow, dense_kernel, sparse_kernel, sparse_rank
from .operators import GradedOperator, laplacian
from .scalars import ZERO

_ORTHO_DIM_THRESHOLD = 10


@dataclass
class HodgeReport:
    h: list[list[int]]  # h[p][q]
    betti: list[int]
    harmonic_bases: dict[tuple[int, int], list[Form]]

    def h_table(self) -> list[list[int]]:
        return [row[:] for row in self.h]

    def sum_rule_holds(self) -> bool:
        n = len(self.h) - 1
        for k in range(2 * n + 1):
            total = sum(
                self.h[p][k - p] for p in range(max(0, k - n), min(n, k) + 1)
            )
            if total != self.betti[k]:
                return False
        return True


def computation_model(model):
    """Presentation used for heavy exact computation (coframe-invariant)."""
    if model.dim >= _ORTHO_DIM_THRESHOLD:
        return model.orthogonalized()
    return model


def _to_native(model, comp, forms: list[Form]) -> list[Form]:
    if comp is model:
        return forms
    from .operators import _ortho_frame

    frame = _ortho_frame(model.gram())
    return [frame.from_v.apply(f) for f in forms]


def hodge_laplacian(model) -> GradedOperator:
    return model._memo("lap:d", lambda: laplacian(model.d(), model.gram()))


def degree_masks(dim: int, k: int) -> list[int]:
    return sorted((m for m in range(1 << dim) if m.bit_count() == k), key=graded_lex_key)


def operator_degree_rows(op: GradedOperator, k: int, dim: int) -> tuple[list[SparseRow], list[int]]:
    """Row-sparse matrix of the degree-k block (columns indexed by mask order)."""
    masks = degree_masks(dim, k)
    index = {m: i for i, m in enumerate(masks)}
    rows: dict[int, SparseRow] = {}
    for c, col in op.cols.items():
        ci = index.get(c)
        if ci is None:
            continue
        for r, v in col.items():
            rows.setdefault(r, {})[ci] = v
    return list(rows.values()), masks


def harmonic_space(model, k: int) -> list[Form]:
    """Exact basis of the Delta_d-kernel in degree k (sparse elimination)."""
    comp = computation_model(model)

    def build():
        lap = hodge_laplacian(comp)
        rows, masks = operator_degree_rows(lap, k, comp.dim)
        vectors = sparse_kernel(rows, len(masks))
        return [Form(comp.dim, {masks[i]: v for i, v in vec.items()}) for vec in vectors]

    forms = comp._memo(f"harmonic:{k}", build)
    return _to_native(model, comp, forms)


def harmonic_space_dense_oracle(model, k: int) -> list[Form]:
    """Same space via the independent dense elimination (oracle route)."""
    comp = computation_model(model)
    lap = hodge_laplacian(comp)
    masks = degree_masks(comp.dim, k)
    index = {m: i for i, m in enumerate(masks)}
    dense = [[ZERO] * len(masks) for _ in masks]
    for c, col in lap.cols.items():
        ci = index.get(c)
        if ci is None:
            continue
        for r, v in col.items():
            dense[index[r]][ci] = v
    vectors = dense_kernel(dense, len(masks))
    return _to_native(
        model,
        comp,
        [
            Form(comp.dim, {masks[i]: v for i, v in enumerate(vec) if not v.is_zero()})
            for vec in vectors
        ],
    )


def harmonic_pq(model, p: int, q: int) -> list[Form]:
    """Exact basis of the Delta_d-harmonic (p,q)-forms."""
    comp = computation_model(model)

    def build():
        from .bidegree import pq_basis

        pqb = pq_basis(comp)
        basis = pqb.basis_forms(p, q)
        if not basis:
            return []
        lap = hodge_laplacian(comp)
        rows: dict[int, SparseRow] = {}
        for j, b in enumerate(basis):
            img = lap.apply(b)
            for mask, v in img.coeffs.items():
                rows.setdefault(mask, {})[j] = v
        vectors = sparse_kernel(list(rows.values()), len(basis))
        out = []
        for vec in vectors:
            f = Form.zero(comp.dim)
            for j, v in vec.items():
                f = f + basis[j].scale(v)
            out.append(f)
        return out

    forms = comp._memo(f"harmonic_pq:{p},{q}", build)
    return _to_native(model, comp, forms)


def betti_numbers(model) -> list[int]:
    """Homology dimensions of (invariant forms, d); no metric involved."""
    comp = computation_model(model)

    def build():
        d = comp.d()
        dim = comp.dim
        ranks = []
        for k in range(dim + 1):
            rows, masks = operator_degree_rows(d, k, dim)
            ranks.append(sparse_rank(rows))
        from math import comb

        out = []
        for k in range(dim + 1):
            rank_in = ranks[k - 1] if k >= 1 else 0
            out.append(comb(dim, k) - ranks[k] - rank_in)
        return out

    return comp._memo("betti", build)


def hodge_numbers(model) -> HodgeReport:
    from .models import nearly_kahler_residual

    report = model._memo("nk_report", lambda: nearly_kahler_residual(model))
    if not report.nearly_kahler:
        raise ValueError(
            f"not nearly Kahler: residual witness {report.witness}"
        )
    n = model.dim // 2
    h = [[0] * (n + 1) for _ in range(n + 1)]
    bases: dict[tuple[int, int], list[Form]] = {}
    for p in range(n + 1):
        for q in range(n + 1):
            basis = harmonic_pq(model, p, q)
            h[p][q] = len(basis)
            bases[(p, q)] = basis
    betti = betti_numbers(model)
    out = HodgeReport(h, betti, bases)
    if not out.sum_rule_holds():
        raise AssertionError("harmonic (p,q) dimensions do not sum to Betti numbers")
    for p in range(n + 1):
        for q in range(n + 1):
            if h[p][q] != h[q][p]:
                raise AssertionError(f"h[{p}][{q}] != h[{q}][{p}]")
            if h[p][q] != h[n - p][n - q]:
                raise AssertionError(f"h table breaks Poincare symmetry at ({p},{q})")
    return out
