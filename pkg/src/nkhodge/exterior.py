"""Complexified exterior algebra of a 2n-dimensional inner-product space.

Basis multi-indices are bitmasks over {1, ..., 2n} (bit ``i-1`` set means
index ``i`` is present); the canonical form of a multi-index is the mask
itself, and wedge signs come from transposition parity.  Forms are sparse
maps mask -> Scalar with zero coefficients never stored.

``GramData`` holds the metric on 1-forms and everything derived from it:
the inverse metric (which is the pairing of coframe elements), the induced
Hermitian pairing on each exterior power via minor determinants, an exact
LDL^T orthogonalization used by the fast adjoint path, and the Hodge star
when det(g) is a perfect square in the field.
"""

from __future__ import annotations

from .scalars import ONE, ZERO, Scalar, sqrt_in_field


# ---------------------------------------------------------------------------
# multi-index helpers

def mask_from_indices(indices: tuple[int, ...] | list[int], dim: int) -> int:
    """Mask for a strictly increasing tuple of 1-based indices."""
    mask = 0
    prev = 0
    for i in indices:
        if not 1 <= i <= dim:
            raise ValueError(f"index {i} out of range 1..{dim}")
        if i <= prev:
            raise ValueError(f"indices not strictly increasing: {tuple(indices)}")
        prev = i
        mask |= 1 << (i - 1)
    return mask


def indices_from_mask(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def mask_degree(mask: int) -> int:
    return mask.bit_count()


def wedge_masks(m1: int, m2: int) -> tuple[int, int]:
    """(sign, union) for u^m1 ^ u^m2; sign 0 when they overlap."""
    if m1 & m2:
        return 0, 0
    # sign = parity of #{(i, j) : i in m1, j in m2, j < i}
    sign = 1
    m = m1
    while m:
        low = m & -m
        if (m2 & (low - 1)).bit_count() & 1:
            sign = -sign
        m ^= low
    return sign, m1 | m2


def _wedge_sign(m1: int, m2: int) -> int:
    sign, _ = wedge_masks(m1, m2)
    return sign


def graded_lex_key(mask: int) -> tuple[int, tuple[int, ...]]:
    """Sort key: by degree, then lexicographic on the index tuple."""
    return (mask.bit_count(), indices_from_mask(mask))


def mask_label(mask: int) -> str:
    if mask == 0:
        return "1"
    return "e" + "^e".join(str(i) for i in indices_from_mask(mask))


# ---------------------------------------------------------------------------
# forms

class Form:
    """Sparse complex-valued form; possibly inhomogeneous."""

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs: dict[int, Scalar] | None = None):
        self.dim = dim
        self.coeffs = {m: s for m, s in (coeffs or {}).items() if not s.is_zero()}

    @classmethod
    def zero(cls, dim: int) -> Form:
        return cls(dim)

    @classmethod
    def basis(cls, dim: int, mask: int, coeff: Scalar = ONE) -> Form:
        return cls(dim, {mask: coeff})

    @classmethod
    def one_form(cls, dim: int, coeffs: list[Scalar]) -> Form:
        return cls(dim, {1 << i: s for i, s in enumerate(coeffs)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int | None:
        """Homogeneous degree, or None for a mixed or zero form."""
        degs = {m.bit_count() for m in self.coeffs}
        return degs.pop() if len(degs) == 1 else None

    def terms(self):
        for m in sorted(self.coeffs, key=graded_lex_key):
            yield m, self.coeffs[m]

    def __add__(self, other: Form) -> Form:
        self._check(other)
        out = dict(self.coeffs)
        for m, s in other.coeffs.items():
            t = out.get(m)
            v = s if t is None else t + s
            if v.is_zero():
                out.pop(m, None)
            else:
                out[m] = v
        return Form(self.dim, out)

    def __sub__(self, other: Form) -> Form:
        return self + (-other)

    def __neg__(self) -> Form:
        return Form(self.dim, {m: -s for m, s in self.coeffs.items()})

    def scale(self, s: Scalar) -> Form:
        if s.is_zero():
            return Form(self.dim)
        return Form(self.dim, {m: v * s for m, v in self.coeffs.items()})

    def wedge(self, other: Form) -> Form:
        self._check(other)
        out: dict[int, Scalar] = {}
        for m1, s1 in self.coeffs.items():
            for m2, s2 in other.coeffs.items():
                sign, m = wedge_masks(m1, m2)
                if sign == 0:
                    continue
                v = s1 * s2
                if sign < 0:
                    v = -v
                t = out.get(m)
                v = v if t is None else t + v
                if v.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = v
        return Form(self.dim, out)

    def conjugate(self) -> Form:
        return Form(self.dim, {m: s.conjugate() for m, s in self.coeffs.items()})

    def contract_vector(self, vec: list[Scalar]) -> Form:
        """Interior product by a (complex) vector given in frame coordinates."""
        out: dict[int, Scalar] = {}
        for m, s in self.coeffs.items():
            rem = m
            pos = 0
            while rem:
                low = rem & -rem
                i = low.bit_length() - 1
                v = vec[i]
                if not v.is_zero():
                    coeff = s * v
                    if pos & 1:
                        coeff = -coeff
                    key = m ^ low
                    t = out.get(key)
                    coeff = coeff if t is None else t + coeff
                    if coeff.is_zero():
                        out.pop(key, None)
                    else:
                        out[key] = coeff
                rem ^= low
                pos += 1
        return Form(self.dim, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return self.dim == other.dim and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.dim, tuple(sorted(self.coeffs.items(), key=lambda kv: kv[0]))))

    def _check(self, other: Form) -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def max_abs_approx(self) -> float:
        return max((abs(s.approx()) for s in self.coeffs.values()), default=0.0)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Form(0)"
        parts = [f"({s.literal()})*{mask_label(m)}" for m, s in self.terms()]
        return "Form(" + " + ".join(parts) + ")"


def wedge(a: Form, b: Form) -> Form:
    return a.wedge(b)


# ---------------------------------------------------------------------------
# metric data

def _det_sparse(rows: list[dict[int, Scalar]], cols: tuple[int, ...]) -> Scalar:
    """Determinant of the submatrix rows x cols, expanding along sparse rows."""
    n = len(rows)
    if n == 0:
        return ONE
    if n != len(cols):
        raise ValueError("non-square minor")

    def rec(row_ids: tuple[int, ...], col_ids: tuple[int, ...]) -> Scalar:
        if not row_ids:
            return ONE
        # expand along the row with fewest live entries
        best, best_live = None, None
        for ri in row_ids:
            live = [c for c in col_ids if c in rows[ri]]
            if best_live is None or len(live) < len(best_live):
                best, best_live = ri, live
                if len(live) <= 1:
                    break
        if not best_live:
            return ZERO
        rest_rows = tuple(r for r in row_ids if r != best)
        acc = ZERO
        for c in best_live:
            j = col_ids.index(c)
            sub = rec(rest_rows, col_ids[:j] + col_ids[j + 1:])
            if sub.is_zero():
                continue
            i = row_ids.index(best)
            term = rows[best][c] * sub
            if (i + j) & 1:
                term = -term
            acc = acc + term
        return acc

    return rec(tuple(range(n)), tuple(cols))


class GramData:
    """Metric on 1-forms plus every derived pairing the operators need."""

    def __init__(self, g: list[list[Scalar]], ext_d: int = 1):
        self.dim = len(g)
        self.ext_d = ext_d
        self.g = g
        for i in range(self.dim):
            for j in range(self.dim):
                if not g[i][j].is_real():
                    raise ValueError("metric entries must be real")
                if g[i][j] != g[j][i]:
                    raise ValueError(f"metric not symmetric at ({i + 1},{j + 1})")
        self._check_positive_definite()
        self.g_inv = self._invert(g)
        self._g_rows = [
            {j: v for j, v in enumerate(row) if not v.is_zero()} for j, row in enumerate(g)
        ]
        self._ginv_rows = [
            {j: v for j, v in enumerate(row) if not v.is_zero()} for row in self.g_inv
        ]
        self._pair_cache: dict[tuple[int, int], Scalar] = {}
        self._ldl: tuple[list[list[Scalar]], list[Scalar]] | None = None
        self._star_data: tuple[Scalar, dict[int, tuple[int, int]]] | None | bool = False

    # -- construction helpers -----------------------------------------------

    def _check_positive_definite(self) -> None:
        for k in range(1, self.dim + 1):
            rows = [
                {j: v for j, v in enumerate(self.g[i][:k]) if not v.is_zero()}
                for i in range(k)
            ]
            minor = _det_sparse(rows, tuple(range(k)))
            if minor.sign() <= 0:
                raise ValueError(f"metric not positive-definite (leading minor {k})")

    @staticmethod
    def _invert(m: list[list[Scalar]]) -> list[list[Scalar]]:
        n = len(m)
        a = [row[:] + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(m)]
        for col in range(n):
            piv = next(r for r in range(col, n) if not a[r][col].is_zero())
            a[col], a[piv] = a[piv], a[col]
            inv = a[col][col].inverse()
            a[col] = [v * inv for v in a[col]]
            for r in range(n):
                if r != col and not a[r][col].is_zero():
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return [row[n:] for row in a]

    # -- pairings ---------------------------------------------------------

    def pairing(self, mask_i: int, mask_j: int) -> Scalar:
        """<u^I, u^J> = det of the g^{-1} minor on (I, J)."""
        if mask_i.bit_count() != mask_j.bit_count():
            return ZERO
        key = (mask_i, mask_j)
        cached = self._pair_cache.get(key)
        if cached is not None:
            return cached
        rows = [self._ginv_rows[i - 1] for i in indices_from_mask(mask_i)]
        cols = tuple(j - 1 for j in indices_from_mask(mask_j))
        val = _det_sparse(rows, cols)
        self._pair_cache[key] = val
        return val

    def metric_minor(self, mask_i: int, mask_j: int) -> Scalar:
        """det of the g minor on (I, J): the inverse Gram matrix entry."""
        rows = [self._g_rows[i - 1] for i in indices_from_mask(mask_i)]
        cols = tuple(j - 1 for j in indices_from_mask(mask_j))
        return _det_sparse(rows, cols)

    def inner(self, a: Form, b: Form) -> Scalar:
        """Hermitian pairing, linear in the first slot."""
        if a.dim != self.dim or b.dim != self.dim:
            raise ValueError("dimension mismatch with metric")
        acc = ZERO
        for mi, sa in a.coeffs.items():
            ki = mi.bit_count()
            for mj, sb in b.coeffs.items():
                if mj.bit_count() != ki:
                    continue
                p = self.pairing(mi, mj)
                if not p.is_zero():
                    acc = acc + sa * sb.conjugate() * p
        return acc

    def sharp(self, one_form: Form) -> list[Scalar]:
        """Metric-dual vector of a 1-form, in frame coordinates."""
        vec = [ZERO] * self.dim
        for m, s in one_form.coeffs.items():
            if m.bit_count() != 1:
                raise ValueError("sharp expects a 1-form")
            i = m.bit_length() - 1
            for j, gij in self._ginv_rows[i].items():
                vec[j] = vec[j] + s * gij
        return vec

    def contract(self, alpha: Form, target: Form) -> Form:
        """Contraction of ``target`` by the metric dual of the 1-form ``alpha``."""
        if alpha.dim != self.dim or target.dim != self.dim:
            raise ValueError("dimension mismatch with metric")
        return target.contract_vector(self.sharp(alpha))

    # -- exact orthogonalization (for the fast adjoint path) -----------------

    def ldl(self) -> tuple[list[list[Scalar]], list[Scalar]]:
        """g = M diag(D) M^T with M unit lower triangular; computed once."""
        if self._ldl is None:
            n = self.dim
            m = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
            dvals = [ZERO] * n
            for j in range(n):
                acc = self.g[j][j]
                for k in range(j):
                    acc = acc - m[j][k] * m[j][k] * dvals[k]
                dvals[j] = acc
                for i in range(j + 1, n):
                    s = self.g[i][j]
                    for k in range(j):
                        s = s - m[i][k] * m[j][k] * dvals[k]
                    m[i][j] = s / dvals[j]
            self._ldl = (m, dvals)
        return self._ldl

    def det(self) -> Scalar:
        _, dvals = self.ldl()
        out = ONE
        for v in dvals:
            out = out * v
        return out

    # -- Hodge star ---------------------------------------------------------

    def _star_table(self):
        if self._star_data is False:
            root = sqrt_in_field(self.det(), self.ext_d)
            if root is None:
                self._star_data = None
            else:
                full = (1 << self.dim) - 1
                signs = {}
                for m in range(1 << self.dim):
                    comp = full ^ m
                    s, _ = wedge_masks(m, comp)
                    signs[m] = (s, comp)
                self._star_data = (root, signs)
        return self._star_data

    def star_available(self) -> bool:
        return self._star_table() is not None

    def volume_form(self) -> Form:
        table = self._star_table()
        if table is None:
            raise ValueError("star unavailable: det(g) is not a square in the field")
        root, _ = table
        return Form.basis(self.dim, (1 << self.dim) - 1, root)

    def star(self, a: Form) -> Form:
        """Complex-linear star with a ^ star(b) = <a, conj(b)> vol."""
        table = self._star_table()
        if table is None:
            raise ValueError("star unavailable: det(g) is not a square in the field")
        root, signs = table
        out = Form.zero(self.dim)
        for mj, s in a.coeffs.items():
            k = mj.bit_count()
            piece: dict[int, Scalar] = {}
            for mi in self._same_degree_masks(k):
                p = self.pairing(mi, mj)
                if p.is_zero():
                    continue
                sgn, comp = signs[mi]
                v = p * s * root
                if sgn < 0:
                    v = -v
                t = piece.get(comp)
                v = v if t is None else t + v
                if not v.is_zero():
                    piece[comp] = v
                elif comp in piece:
                    del piece[comp]
            out = out + Form(self.dim, piece)
        return out

    def _same_degree_masks(self, k: int):
        # iterate all masks of degree k (Gosper's hack)
        if k == 0:
            yield 0
            return
        m = (1 << k) - 1
        top = 1 << self.dim
        while m < top:
            yield m
            c = m & -m
            r = m + c
            m = (((r ^ m) >> 2) // c) | r
