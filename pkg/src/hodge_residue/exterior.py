"""Exterior algebra over R^n and exact Clifford actions on it.

The exterior algebra ``Lambda^*(R^n)`` has dimension ``2^n``; the wedge
monomial ``e_{i_1} ^ ... ^ e_{i_k}`` (indices increasing, 1-based) is encoded
as the bitmask with bits ``i_1 - 1, ..., i_k - 1`` set.  Operators are stored
column-sparse: ``cols[m]`` maps target masks to exact coefficients and
describes the image of basis monomial ``m``.

Two families of Clifford actions are provided for each direction ``j``:

* ``c_j = wedge_raise(j) - contract_lower(j)`` squaring to ``-1``,
* ``chat_j = wedge_raise(j) + contract_lower(j)`` squaring to ``+1``,

with all mixed pairs anticommuting.  Both are signed permutations of the
monomial basis, which keeps products of generators cheap to compose exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from .scalars import GaussianRational, as_gaussian

FLAVORS = ("c", "chat")

MAX_DIMENSION = 14


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_DIMENSION:
        raise ValueError(f"dimension n must satisfy 1 <= n <= {MAX_DIMENSION}, got {n}")


def _check_index(n: int, j: int) -> None:
    if not 1 <= j <= n:
        raise ValueError(f"direction index must satisfy 1 <= j <= n, got {j}")


def _wedge_sign_and_mask(mask_a: int, mask_b: int) -> Tuple[int, int]:
    """Sign and mask of ``e_A ^ e_B`` for disjoint increasing monomials."""
    sign = 1
    b = mask_b
    acc = mask_a
    while b:
        low = b & -b
        pos = low.bit_length()  # bits strictly above this position
        if (acc >> pos).bit_count() & 1:
            sign = -sign
        acc |= low
        b ^= low
    return sign, acc


class Multivector:
    """An element of ``Lambda^*(R^n)`` with exact coefficients."""

    __slots__ = ("n", "components")

    def __init__(self, n: int, components: Dict[int, object] | None = None):
        _check_n(n)
        comps: Dict[int, object] = {}
        if components:
            for mask, coeff in components.items():
                if not 0 <= mask < (1 << n):
                    raise ValueError(f"mask {mask} out of range for n={n}")
                if coeff:
                    comps[mask] = coeff
        self.n = n
        self.components = comps

    @classmethod
    def basis(cls, n: int, indices: Sequence[int] = ()) -> "Multivector":
        """The monomial ``e_{i_1} ^ ... ^ e_{i_k}``; repeated indices give 0."""
        mask = 0
        sign = 1
        for j in indices:
            _check_index(n, j)
            bit = 1 << (j - 1)
            if mask & bit:
                return cls(n)
            term_sign, mask = _wedge_sign_and_mask(mask, bit)
            sign *= term_sign
        return cls(n, {mask: sign})

    @property
    def is_zero(self) -> bool:
        return not self.components

    def __add__(self, other: "Multivector") -> "Multivector":
        if not isinstance(other, Multivector) or other.n != self.n:
            return NotImplemented
        comps = dict(self.components)
        for mask, coeff in other.components.items():
            total = comps.get(mask, 0) + coeff
            if total:
                comps[mask] = total
            else:
                comps.pop(mask, None)
        return Multivector(self.n, comps)

    def __sub__(self, other: "Multivector") -> "Multivector":
        return self + (-other)

    def __neg__(self) -> "Multivector":
        return Multivector(self.n, {m: -c for m, c in self.components.items()})

    def __rmul__(self, scalar) -> "Multivector":
        return Multivector(
            self.n, {m: scalar * c for m, c in self.components.items()}
        )

    def wedge(self, other: "Multivector") -> "Multivector":
        if other.n != self.n:
            raise ValueError("wedge requires matching dimensions")
        comps: Dict[int, object] = {}
        for ma, ca in self.components.items():
            for mb, cb in other.components.items():
                if ma & mb:
                    continue
                sign, mask = _wedge_sign_and_mask(ma, mb)
                total = comps.get(mask, 0) + sign * ca * cb
                if total:
                    comps[mask] = total
                else:
                    comps.pop(mask, None)
        return Multivector(self.n, comps)

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.n == other.n and self.components == other.components

    def __repr__(self) -> str:
        return f"Multivector(n={self.n}, components={self.components!r})"


class LinearOp:
    """A linear operator on ``Lambda^*(R^n)``, stored column-sparse.

    ``cols[m]`` is a dict ``{target_mask: coefficient}`` giving the image of
    the basis monomial ``m``.  Coefficients may be ``int``, ``Fraction`` or
    :class:`~hodge_residue.scalars.GaussianRational`; zeros are never stored.
    """

    __slots__ = ("n", "dim", "cols", "_sperm")

    def __init__(self, n: int, cols: List[Dict[int, object]] | None = None):
        _check_n(n)
        dim = 1 << n
        if cols is None:
            cols = [dict() for _ in range(dim)]
        elif len(cols) != dim:
            raise ValueError(f"expected {dim} columns, got {len(cols)}")
        else:
            cols = [
                {r: c for r, c in col.items() if c} for col in cols
            ]
        self.n = n
        self.dim = dim
        self.cols = cols

    # -- constructors ------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "LinearOp":
        dim = 1 << n
        return cls(n, [{m: 1} for m in range(dim)])

    @classmethod
    def zero(cls, n: int) -> "LinearOp":
        return cls(n)

    @classmethod
    def from_entries(cls, n: int, entries: Iterable[Tuple[int, int, object]]) -> "LinearOp":
        op = cls(n)
        for row, col, coeff in entries:
            if coeff:
                total = op.cols[col].get(row, 0) + coeff
                if total:
                    op.cols[col][row] = total
                else:
                    op.cols[col].pop(row, None)
        return op

    # -- structure ----------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return all(not col for col in self.cols)

    def entry(self, row: int, col: int):
        return self.cols[col].get(row, 0)

    def apply(self, vec: Multivector) -> Multivector:
        if vec.n != self.n:
            raise ValueError("operator/vector dimension mismatch")
        comps: Dict[int, object] = {}
        for mask, coeff in vec.components.items():
            for row, c in self.cols[mask].items():
                total = comps.get(row, 0) + c * coeff
                if total:
                    comps[row] = total
                else:
                    comps.pop(row, None)
        return Multivector(self.n, comps)

    def _signed_permutation(self):
        """``(rows, signs)`` when every column is ``±1`` times one basis
        monomial and the rows are distinct, else ``None`` (memoized)."""
        try:
            return self._sperm
        except AttributeError:
            pass
        rows: List[int] = []
        signs: List[int] = []
        seen = set()
        result = None
        for col in self.cols:
            if len(col) != 1:
                break
            ((r, s),) = col.items()
            if r in seen or s * s != 1:
                break
            seen.add(r)
            rows.append(r)
            signs.append(s)
        else:
            result = (rows, signs)
        self._sperm = result
        return result

    # -- algebra --------------------------------------------------------------
    def compose(self, other: "LinearOp") -> "LinearOp":
        """``self o other`` (``other`` is applied first)."""
        if other.n != self.n:
            raise ValueError("operator dimension mismatch")
        scols = self.cols
        sperm: object = False
        out: List[Dict[int, object]] = []
        for col in other.cols:
            if not col:
                out.append({})
                continue
            if len(col) == 1:
                ((k, v),) = col.items()
                if v == 1:
                    out.append(dict(scols[k]))
                elif v == -1:
                    out.append({r: -c for r, c in scols[k].items()})
                else:
                    out.append({r: c * v for r, c in scols[k].items()})
                continue
            if sperm is False:
                sperm = self._signed_permutation()
            if sperm is not None:
                rows, signs = sperm
                out.append({rows[k]: v if signs[k] > 0 else -v for k, v in col.items()})
                continue
            acc: Dict[int, object] = {}
            for k, v in col.items():
                for r, c in scols[k].items():
                    cur = acc.get(r)
                    total = c * v if cur is None else cur + c * v
                    if total:
                        acc[r] = total
                    else:
                        acc.pop(r, None)
            out.append(acc)
        result = LinearOp.__new__(LinearOp)
        result.n = self.n
        result.dim = self.dim
        result.cols = out
        return result

    def __matmul__(self, other: "LinearOp") -> "LinearOp":
        return self.compose(other)

    def __add__(self, other: "LinearOp") -> "LinearOp":
        if not isinstance(other, LinearOp) or other.n != self.n:
            return NotImplemented
        cols = []
        for a, b in zip(self.cols, other.cols):
            col = dict(a)
            for r, c in b.items():
                cur = col.get(r)
                total = c if cur is None else cur + c
                if total:
                    col[r] = total
                else:
                    col.pop(r, None)
            cols.append(col)
        result = LinearOp.__new__(LinearOp)
        result.n = self.n
        result.dim = self.dim
        result.cols = cols
        return result

    def __sub__(self, other: "LinearOp") -> "LinearOp":
        return self + (-other)

    def __neg__(self) -> "LinearOp":
        return self.scale(-1)

    def scale(self, scalar) -> "LinearOp":
        if not scalar:
            return LinearOp.zero(self.n)
        cols = [{r: scalar * c for r, c in col.items()} for col in self.cols]
        result = LinearOp.__new__(LinearOp)
        result.n = self.n
        result.dim = self.dim
        result.cols = cols
        return result

    def __rmul__(self, scalar) -> "LinearOp":
        if isinstance(scalar, (int, Fraction, GaussianRational)):
            return self.scale(scalar)
        return NotImplemented

    def trace(self) -> GaussianRational:
        total = 0
        for m, col in enumerate(self.cols):
            c = col.get(m)
            if c:
                total = total + c
        return as_gaussian(total)

    def __eq__(self, other):
        if not isinstance(other, LinearOp):
            return NotImplemented
        return self.n == other.n and self.cols == other.cols

    __hash__ = None  # mutable container semantics

    def to_dense(self) -> List[List[object]]:
        """Row-major nested lists (exact coefficients)."""
        rows = [[0] * self.dim for _ in range(self.dim)]
        for col_index, col in enumerate(self.cols):
            for row_index, coeff in col.items():
                rows[row_index][col_index] = coeff
        return rows

    def __repr__(self) -> str:
        nnz = sum(len(col) for col in self.cols)
        return f"LinearOp(n={self.n}, nnz={nnz})"


def op_add(a: LinearOp, b: LinearOp) -> LinearOp:
    return a + b


def op_scale(scalar, a: LinearOp) -> LinearOp:
    return a.scale(scalar)


def commutator(a: LinearOp, b: LinearOp) -> LinearOp:
    return a.compose(b) - b.compose(a)


def trace_product(a: LinearOp, b: LinearOp) -> GaussianRational:
    """``tr(a o b)`` computed without materializing the product."""
    if a.n != b.n:
        raise ValueError("operator dimension mismatch")
    rational = _rational_views(a, b)
    if rational is not None:
        (acols, aden), (bcols, bden) = rational
        total = 0
        for col_index, col in enumerate(bcols):
            for k, v in col.items():
                c = acols[k].get(col_index)
                if c:
                    total += c * v
        return as_gaussian(Fraction(total, aden * bden))
    total = 0
    acols = a.cols
    for col_index, col in enumerate(b.cols):
        for k, v in col.items():
            c = acols[k].get(col_index)
            if c:
                total = total + c * v
    return as_gaussian(total)


def _rational_views(a: LinearOp, b: LinearOp):
    """Integer-scaled copies of both operators, or ``None`` if any entry is
    not a plain rational.  Scaling both sides once lets the trace loop run in
    machine-integer arithmetic."""
    views = []
    for op in (a, b):
        den = 1
        all_int = True
        for col in op.cols:
            for v in col.values():
                if type(v) is int:
                    continue
                if type(v) is Fraction:
                    all_int = False
                    den = math.lcm(den, v.denominator)
                else:
                    return None
        if all_int:
            views.append((op.cols, 1))
        else:
            views.append((
                [
                    {r: v.numerator * (den // v.denominator) for r, v in col.items()}
                    for col in op.cols
                ],
                den,
            ))
    return views[0], views[1]


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

_GENERATOR_CACHE: Dict[Tuple[str, int, int], LinearOp] = {}


def _interior_sign(mask: int, bit: int) -> int:
    """Parity sign from anticommuting past the indices below ``bit``."""
    return -1 if (mask & (bit - 1)).bit_count() & 1 else 1


def wedge_raise(n: int, j: int) -> LinearOp:
    """Exterior multiplication ``e_j ^ .`` (1-based ``j``)."""
    return _generator("eps", n, j)


def contract_lower(n: int, j: int) -> LinearOp:
    """Interior contraction with ``e_j`` (1-based ``j``)."""
    return _generator("iota", n, j)


def clifford_generator(flavor: str, n: int, j: int) -> LinearOp:
    """The generator ``c_j`` (flavor ``"c"``) or ``chat_j`` (flavor ``"chat"``)."""
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}, got {flavor!r}")
    return _generator(flavor, n, j)


def _generator(kind: str, n: int, j: int) -> LinearOp:
    _check_n(n)
    _check_index(n, j)
    key = (kind, n, j)
    cached = _GENERATOR_CACHE.get(key)
    if cached is not None:
        return cached
    bit = 1 << (j - 1)
    cols: List[Dict[int, object]] = []
    for mask in range(1 << n):
        sign = _interior_sign(mask, bit)
        if kind == "eps":
            col = {} if mask & bit else {mask | bit: sign}
        elif kind == "iota":
            col = {mask ^ bit: sign} if mask & bit else {}
        elif kind == "c":
            col = {mask ^ bit: -sign} if mask & bit else {mask | bit: sign}
        else:  # chat
            col = {mask ^ bit: sign} if mask & bit else {mask | bit: sign}
        cols.append(col)
    op = LinearOp(n, cols)
    _GENERATOR_CACHE[key] = op
    return op


def clifford(flavor: str, u: Sequence) -> LinearOp:
    """Clifford action of the vector ``u`` in the requested flavor.

    ``flavor="c"`` gives ``sum_j u_j (eps_j - iota_j)`` (squares to
    ``-|u|^2``); ``flavor="chat"`` gives ``sum_j u_j (eps_j + iota_j)``
    (squares to ``+|u|^2``).
    """
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}, got {flavor!r}")
    n = len(u)
    _check_n(n)
    scaled = _integer_scaled(u)
    if scaled is None:
        op = LinearOp.zero(n)
        for j, coeff in enumerate(u, start=1):
            if coeff:
                op = op + clifford_generator(flavor, n, j).scale(coeff)
        return op
    ints, den = scaled
    cols: List[Dict[int, object]] = [{} for _ in range(1 << n)]
    for j, k in enumerate(ints, start=1):
        if not k:
            continue
        gcols = clifford_generator(flavor, n, j).cols
        for cidx, gcol in enumerate(gcols):
            target = cols[cidx]
            for r, s in gcol.items():
                total = target.get(r, 0) + s * k
                if total:
                    target[r] = total
                else:
                    target.pop(r, None)
    op = LinearOp.__new__(LinearOp)
    op.n = n
    op.dim = 1 << n
    op.cols = cols
    if den != 1:
        op = op.scale(Fraction(1, den))
    return op


def _integer_scaled(u: Sequence) -> Tuple[List[int], int] | None:
    """``(den * u, den)`` with integer entries when ``u`` is rational."""
    den = 1
    for coeff in u:
        if not isinstance(coeff, (int, Fraction)):
            return None
        den = math.lcm(den, coeff.denominator)
    return [int(coeff * den) for coeff in u], den


def clifford_word(n: int, letters: Sequence[Tuple[str, Sequence]]) -> LinearOp:
    """Product of Clifford actions, leftmost letter outermost.

    ``letters`` is a sequence of ``(flavor, vector)`` pairs; the returned
    operator is ``clifford(f_1, u_1) o ... o clifford(f_k, u_k)``.
    """
    op = LinearOp.identity(n)
    den_total = 1
    for flavor, u in letters:
        if len(u) != n:
            raise ValueError("vector length must equal n")
        scaled = _integer_scaled(u)
        if scaled is None:
            op = op.compose(clifford(flavor, u))
        else:
            ints, den = scaled
            den_total *= den
            op = op.compose(clifford(flavor, ints))
    if den_total != 1:
        op = op.scale(Fraction(1, den_total))
    return op


def generator_word(n: int, letters: Sequence[Tuple[str, int]]) -> LinearOp:
    """Product of single-direction generators ``[(flavor, j), ...]``."""
    op = LinearOp.identity(n)
    for flavor, j in letters:
        op = op.compose(clifford_generator(flavor, n, j))
    return op


def exterior_signed_permutation(n: int, perm: Sequence[int], signs: Sequence[int]) -> LinearOp:
    """Functorial action on ``Lambda^*`` of ``e_j -> signs[j-1] * e_{perm[j-1]}``.

    ``perm`` must be a permutation of ``1..n`` and each sign ``+1`` or ``-1``;
    the result is the induced signed permutation of wedge monomials.
    """
    _check_n(n)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError("perm must be a permutation of 1..n")
    if any(s not in (1, -1) for s in signs):
        raise ValueError("signs must be +1 or -1")
    cols: List[Dict[int, object]] = []
    for mask in range(1 << n):
        sign = 1
        images = []
        m = mask
        while m:
            low = m & -m
            j = low.bit_length()
            images.append(perm[j - 1])
            sign *= signs[j - 1]
            m ^= low
        # sort the image indices, tracking the permutation parity
        out_mask = 0
        for pos, img in enumerate(images):
            inversions = sum(1 for later in images[pos + 1:] if later < img)
            if inversions & 1:
                sign = -sign
            out_mask |= 1 << (img - 1)
        cols.append({out_mask: sign})
    return LinearOp(n, cols)
