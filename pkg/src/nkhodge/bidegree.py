"""Bidegree structure: (p,q) projections, the split of d, and the sl2 triple.

The (1,0)-coframe is built from P^{1,0} = (Id - iJ)/2 on degree one; a
maximal independent subset of its images under the coframe basis is chosen
exactly and every 1-form is re-expressed through it.  Monomials in the
Chosen (1,0)/(0,1) generators give bases of every Lambda^{p,q}; expanding
basis forms through them yields the bidegree projectors without any
eigen-decomposition.

``differential_split`` produces the four components with bidegrees
(2,-1), (1,0), (0,1), (-1,2).  Small models use the literal
projector-sandwich definition; large ones use the fact that each component
is a derivation, so its coframe values determine it (the two routes are
checked against each other in the test suite on six-dimensional models).
"""

from __future__ import annotations

from dataclasses import dataclass

from .exterior import Form, wedge_masks
from .operators import GradedOperator, adjoint, derivation_from_one_forms, mult_operator
from .scalars import I, ONE, ZERO, Scalar, rational

_PROJECTOR_ROUTE_MAX_DIM = 8


class PQBasis:
    """Chosen (1,0)/(0,1) coframe generators and everything indexed by them."""

    def __init__(self, model):
        dim = model.dim
        n = dim // 2
        self.dim = dim
        self.n = n
        half_i = Scalar(0, 0, -1, 0, 2)  # -i/2
        j_rows = model.j_one_form_rows()
        self.eta_all = [
            Form.basis(dim, 1 << i).scale(Scalar(1, 0, 0, 0, 2)) + j_rows[i].scale(half_i)
            for i in range(dim)
        ]
        chosen, coords = self._choose_basis(self.eta_all, dim, n)
        self.chosen = chosen
        self.eta = [self.eta_all[i] for i in chosen]
        self.eta_bar = [f.conjugate() for f in self.eta]
        # S[i][a]: eta_all[i] = sum_a S[i][a] eta[a]
        self.S = coords
        self._pq_form_table: dict[int, Form] = {0: Form.basis(dim, 0)}
        self._col_cache: dict[int, dict[int, Scalar]] = {}

    @staticmethod
    def _choose_basis(forms: list[Form], dim: int, n: int):
        """Greedy exact independence scan, then exact coordinates in the basis."""
        basis_rows: list[tuple[dict[int, Scalar], int]] = []  # (reduced row, pivot)
        chosen: list[int] = []
        for idx, f in enumerate(forms):
            row = dict(f.coeffs)
            for brow, piv in basis_rows:
                v = row.get(piv)
                if v is None:
                    continue
                fac = v / brow[piv]
                for c, w in brow.items():
                    t = row.get(c, ZERO) - fac * w
                    if t.is_zero():
                        row.pop(c, None)
                    else:
                        row[c] = t
            if row:
                basis_rows.append((row, min(row)))
                chosen.append(idx)
        if len(chosen) != n:
            raise ValueError("(1,0)-coframe does not have the expected rank")
        coords = [
            PQBasis._solve_in_basis(f, [forms[c] for c in chosen]) for f in forms
        ]
        return chosen, coords

    @staticmethod
    def _solve_in_basis(f: Form, basis: list[Form]) -> dict[int, Scalar]:
        masks = sorted(set().union(f.coeffs, *[b.coeffs for b in basis]))
        rows = []
        for m in masks:
            rows.append([b.coeffs.get(m, ZERO) for b in basis] + [f.coeffs.get(m, ZERO)])
        ncols = len(basis)
        # dense elimination with the target as the augmented column
        r = 0
        pivots = []
        for c in range(ncols):
            piv = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = rows[r][c].inverse()
            rows[r] = [v * inv for v in rows[r]]
            for i in range(len(rows)):
                if i != r and not rows[i][c].is_zero():
                    fac = rows[i][c]
                    rows[i] = [a - fac * b for a, b in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
        for i in range(r, len(rows)):
            if not rows[i][ncols].is_zero():
                raise ValueError("form not in the span of the chosen coframe")
        out = {}
        for row_idx, c in enumerate(pivots):
            v = rows[row_idx][ncols]
            if not v.is_zero():
                out[c] = v
        return out

    # -- monomial indexing --------------------------------------------------
    # bit a (a < n): generator eta^a; bit n + a: generator conj(eta^a)

    def bidegree_of_mask(self, pqmask: int) -> tuple[int, int]:
        low = pqmask & ((1 << self.n) - 1)
        return low.bit_count(), (pqmask >> self.n).bit_count()

    def monomial_masks(self, p: int, q: int) -> list[int]:
        if not (0 <= p <= self.n and 0 <= q <= self.n):
            raise ValueError(f"bidegree ({p},{q}) out of range")
        out = []
        for pqmask in range(1 << self.dim):
            if self.bidegree_of_mask(pqmask) == (p, q):
                out.append(pqmask)
        return out

    def monomial_form(self, pqmask: int) -> Form:
        """Real-coordinate expansion of one eta-monomial (cached, built by DP)."""
        cached = self._pq_form_table.get(pqmask)
        if cached is not None:
            return cached
        low = pqmask & -pqmask
        rest = pqmask ^ low
        a = low.bit_length() - 1
        gen = self.eta[a] if a < self.n else self.eta_bar[a - self.n]
        val = gen.wedge(self.monomial_form(rest))
        self._pq_form_table[pqmask] = val
        return val

    def form_to_pq(self, form: Form) -> dict[int, Scalar]:
        """Coordinates of a form in the eta-monomial basis."""
        out: dict[int, Scalar] = {}
        for mask, coeff in form.coeffs.items():
            for pqmask, v in self._mask_expansion(mask).items():
                t = out.get(pqmask)
                piece = v * coeff
                piece = piece if t is None else t + piece
                if piece.is_zero():
                    out.pop(pqmask, None)
                else:
                    out[pqmask] = piece
        return out

    def _mask_expansion(self, mask: int) -> dict[int, Scalar]:
        cached = self._col_cache.get(mask)
        if cached is not None:
            return cached
        if mask == 0:
            out = {0: ONE}
        else:
            low = mask & -mask
            rest = mask ^ low
            i = low.bit_length() - 1
            slots: list[tuple[int, Scalar]] = []
            for a, s in self.S[i].items():
                slots.append((1 << a, s))
                slots.append((1 << (self.n + a), s.conjugate()))
            out = {}
            for pqrest, v in self._mask_expansion(rest).items():
                for bit, s in slots:
                    sign, m = wedge_masks(bit, pqrest)
                    if sign == 0:
                        continue
                    piece = s * v
                    if sign < 0:
                        piece = -piece
                    t = out.get(m)
                    piece = piece if t is None else t + piece
                    if piece.is_zero():
                        out.pop(m, None)
                    else:
                        out[m] = piece
        self._col_cache[mask] = out
        return out

    def pq_coords_to_form(self, coords: dict[int, Scalar]) -> Form:
        out = Form.zero(self.dim)
        for pqmask, v in coords.items():
            out = out + self.monomial_form(pqmask).scale(v)
        return out

    def basis_forms(self, p: int, q: int) -> list[Form]:
        return [self.monomial_form(m) for m in self.monomial_masks(p, q)]


def pq_basis(model) -> PQBasis:
    return model._memo("pq_basis", lambda: PQBasis(model))


def decompose_form(model, form: Form) -> dict[tuple[int, int], Form]:
    """Split a form into its pure-bidegree pieces (zero pieces omitted)."""
    pq = pq_basis(model)
    groups: dict[tuple[int, int], dict[int, Scalar]] = {}
    for pqmask, v in pq.form_to_pq(form).items():
        groups.setdefault(pq.bidegree_of_mask(pqmask), {})[pqmask] = v
    return {bid: pq.pq_coords_to_form(coords) for bid, coords in groups.items()}


def form_bidegree_coords(model, form: Form) -> dict[tuple[int, int], dict[int, Scalar]]:
    pq = pq_basis(model)
    groups: dict[tuple[int, int], dict[int, Scalar]] = {}
    for pqmask, v in pq.form_to_pq(form).items():
        groups.setdefault(pq.bidegree_of_mask(pqmask), {})[pqmask] = v
    return groups


def pq_projector(model, p: int, q: int) -> GradedOperator:
    """Projector onto Lambda^{p,q} as a matrix over the real-index basis."""
    pq = pq_basis(model)
    if not (0 <= p <= pq.n and 0 <= q <= pq.n):
        raise ValueError(f"bidegree ({p},{q}) out of range")

    def build():
        cols = {}
        k = p + q
        for mask in range(1 << model.dim):
            if mask.bit_count() != k:
                continue
            wanted = {
                m: v
                for m, v in pq._mask_expansion(mask).items()
                if pq.bidegree_of_mask(m) == (p, q)
            }
            if wanted:
                col = pq.pq_coords_to_form(wanted)
                if not col.is_zero():
                    cols[mask] = dict(col.coeffs)
        return GradedOperator(model.dim, cols, 0, (0, 0), check=False)

    return model._memo(f"projector{p},{q}", build)


# ---------------------------------------------------------------------------
# J acting multiplicatively on forms

def j_apply(model, form: Form) -> Form:
    """(J alpha)(X_1,...,X_k) = alpha(J X_1,...,J X_k), extended linearly."""
    rows = model._memo("j_rows", model.j_one_form_rows)
    dim = model.dim
    table = model._cache.setdefault("j_table", {0: Form.basis(dim, 0)})
    out = Form.zero(dim)
    for mask, coeff in form.coeffs.items():
        img = table.get(mask)
        if img is None:
            low = mask & -mask
            rest = mask ^ low
            if rest not in table:
                # fill ancestors iteratively to keep recursion shallow
                stack = [rest]
                while stack:
                    m = stack[-1]
                    if m in table:
                        stack.pop()
                        continue
                    lw = m & -m
                    rs = m ^ lw
                    if rs in table:
                        table[m] = rows[lw.bit_length() - 1].wedge(table[rs])
                        stack.pop()
                    else:
                        stack.append(rs)
            img = rows[low.bit_length() - 1].wedge(table[rest])
            table[mask] = img
        out = out + img.scale(coeff)
    return out


def j_inverse_apply(model, form: Form) -> Form:
    """J^{-1} = (-1)^k J on degree k (since J^2 = (-1)^k there)."""
    out = Form.zero(model.dim)
    for k in range(model.dim + 1):
        piece = Form(model.dim, {m: v for m, v in form.coeffs.items() if m.bit_count() == k})
        if piece.is_zero():
            continue
        img = j_apply(model, piece)
        out = out + (img if k % 2 == 0 else -img)
    return out


def j_operator(model) -> GradedOperator:
    """J as an explicit matrix (small models; the action is used elsewhere)."""

    def build():
        cols = {}
        for mask in range(1 << model.dim):
            f = j_apply(model, Form.basis(model.dim, mask))
            if not f.is_zero():
                cols[mask] = dict(f.coeffs)
        return GradedOperator(model.dim, cols, 0, check=False)

    return model._memo("j_operator", build)


# ---------------------------------------------------------------------------
# the split of d

@dataclass
class DifferentialSplit:
    mu: GradedOperator
    del_: GradedOperator
    delbar: GradedOperator
    mubar: GradedOperator

    def components(self) -> dict[str, GradedOperator]:
        return {"mu": self.mu, "del": self.del_, "delbar": self.delbar, "mubar": self.mubar}

    def total(self) -> GradedOperator:
        return self.mu + self.del_ + self.delbar + self.mubar


def differential_split(model) -> DifferentialSplit:
    def build():
        if model.dim <= _PROJECTOR_ROUTE_MAX_DIM:
            split = _split_by_projectors(model)
        else:
            split = _split_by_derivations(model)
        d = model.d()
        if split.total() != d:
            raise AssertionError("bidegree split does not reassemble d")
        if split.mubar != split.mu.conjugated() or split.delbar != split.del_.conjugated():
            raise AssertionError("bidegree split breaks conjugation symmetry")
        return split

    return model._memo("split", build)


def _split_by_projectors(model) -> DifferentialSplit:
    d = model.d()
    n = model.dim // 2
    shifts = {"mu": (2, -1), "del": (1, 0), "delbar": (0, 1), "mubar": (-1, 2)}
    parts = {}
    for name, (dp, dq) in shifts.items():
        acc = GradedOperator.zero(model.dim, 1)
        for p in range(n + 1):
            for q in range(n + 1):
                if not (0 <= p + dp <= n and 0 <= q + dq <= n):
                    continue
                left = pq_projector(model, p + dp, q + dq)
                right = pq_projector(model, p, q)
                acc = acc + left.compose(d.compose(right))
        parts[name] = GradedOperator(model.dim, acc.cols, 1, (dp, dq), check=False)
    return DifferentialSplit(parts["mu"], parts["del"], parts["delbar"], parts["mubar"])


def _split_by_derivations(model) -> DifferentialSplit:
    """Each component of d is a derivation; its coframe values determine it."""
    pq = pq_basis(model)
    d = model.d()
    dim = model.dim
    mu_im, del_im, delbar_im, mubar_im = [], [], [], []
    for i in range(dim):
        eta = pq.eta_all[i]
        etabar = eta.conjugate()
        d_eta = _pieces(model, d.apply(eta))
        d_etabar = _pieces(model, d.apply(etabar))
        mu_im.append(d_etabar.get((2, 0), Form.zero(dim)))
        del_im.append(d_eta.get((2, 0), Form.zero(dim)) + d_etabar.get((1, 1), Form.zero(dim)))
        delbar_im.append(d_eta.get((1, 1), Form.zero(dim)) + d_etabar.get((0, 2), Form.zero(dim)))
        mubar_im.append(d_eta.get((0, 2), Form.zero(dim)))
    ops = []
    for images, bid in (
        (mu_im, (2, -1)),
        (del_im, (1, 0)),
        (delbar_im, (0, 1)),
        (mubar_im, (-1, 2)),
    ):
        op = derivation_from_one_forms(dim, images)
        ops.append(GradedOperator(dim, op.cols, 1, bid, check=False))
    return DifferentialSplit(*ops)


def _pieces(model, form: Form) -> dict[tuple[int, int], Form]:
    return decompose_form(model, form)


# ---------------------------------------------------------------------------
# derived operators

def d_c(model) -> GradedOperator:
    """J^{-1} d J, cross-checked against i(mu - del + delbar - mubar)."""

    def build():
        dim = model.dim
        images = []
        for i in range(dim):
            ju = j_apply(model, Form.basis(dim, 1 << i))
            images.append(j_inverse_apply(model, model.d().apply(ju)))
        twisted = derivation_from_one_forms(dim, images)
        split = differential_split(model)
        alt = (split.mu - split.del_ + split.delbar - split.mubar).scale(I)
        if twisted != alt:
            raise AssertionError("J^{-1} d J disagrees with i(mu - del + delbar - mubar)")
        return twisted

    return model._memo("d_c", build)


def counting_operator(model) -> GradedOperator:
    n = model.dim // 2
    return GradedOperator.diagonal(model.dim, lambda m: rational(m.bit_count() - n))


def lefschetz_triple(model) -> tuple[GradedOperator, GradedOperator, GradedOperator]:
    def build():
        l_op = mult_operator(model.omega())
        l_op = GradedOperator(model.dim, l_op.cols, 2, (1, 1), check=False)
        lam = adjoint(l_op, model.gram())
        return (l_op, lam, counting_operator(model))

    return model._memo("lefschetz", build)
