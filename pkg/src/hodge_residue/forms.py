"""Antisymmetric multilinear forms and their Clifford operator lifts.

A degree-``k`` antisymmetric form on ``R^n`` is stored by its values on
increasing index tuples (1-based); values at arbitrary tuples follow by
permutation sign.  The lifts replace each index slot of the form with a
Clifford generator of a prescribed flavor, producing the curvature-type
operators whose traces the residue densities consume:

* ``lift_monotone`` sums over increasing tuples (used when every slot has the
  same flavor, or when the flavor pattern is constant on blocks),
* ``lift_ordered`` sums over all pairwise-distinct ordered tuples with the
  antisymmetrically extended coefficient (needed for mixed-flavor patterns
  that do not factor through increasing tuples),
* ``lift_torsion_assembly`` is the weighted combination
  ``(3/2) * lift(c,c,c) - (1/4) * lift_ordered(c,chat,chat)`` entering the
  degree-3 density computations.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

from .exterior import LinearOp, clifford_generator, generator_word
from .scalars import GaussianRational


def _sort_with_sign(indices: Sequence[int]) -> Tuple[Tuple[int, ...], int]:
    """Sorted tuple and permutation sign; sign 0 when an index repeats."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return tuple(sorted(idx)), 0
    sign = 1
    # insertion sort, counting swaps
    for a in range(1, len(idx)):
        b = a
        while b > 0 and idx[b - 1] > idx[b]:
            idx[b - 1], idx[b] = idx[b], idx[b - 1]
            sign = -sign
            b -= 1
    return tuple(idx), sign


class AntiSymForm:
    """An antisymmetric ``degree``-linear form on ``R^n`` with exact values."""

    __slots__ = ("n", "degree", "entries")

    def __init__(self, n: int, degree: int, entries: Dict[Tuple[int, ...], object] | None = None):
        if degree < 0 or degree > n:
            raise ValueError(f"degree must satisfy 0 <= degree <= n, got {degree}")
        self.n = n
        self.degree = degree
        clean: Dict[Tuple[int, ...], object] = {}
        if entries:
            for idx, value in entries.items():
                idx = tuple(idx)
                if len(idx) != degree:
                    raise ValueError(f"index tuple {idx} has wrong length for degree {degree}")
                if any(not 1 <= j <= n for j in idx):
                    raise ValueError(f"index tuple {idx} out of range for n={n}")
                sorted_idx, sign = _sort_with_sign(idx)
                if sign == 0:
                    if value:
                        raise ValueError(f"repeated index in {idx} forces value 0")
                    continue
                value = sign * value if sign == -1 else value
                if value:
                    if sorted_idx in clean and clean[sorted_idx] != value:
                        raise ValueError(f"conflicting values for index {sorted_idx}")
                    clean[sorted_idx] = value
        self.entries = clean

    def value(self, indices: Sequence[int]):
        """Value at an arbitrary index tuple (antisymmetric extension)."""
        if len(indices) != self.degree:
            raise ValueError("wrong number of indices")
        sorted_idx, sign = _sort_with_sign(indices)
        if sign == 0:
            return Fraction(0)
        base = self.entries.get(sorted_idx, 0)
        if not base:
            return Fraction(0)
        return sign * base if sign == -1 else base

    def increasing_tuples(self):
        return itertools.combinations(range(1, self.n + 1), self.degree)

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, AntiSymForm):
            return NotImplemented
        return (self.n, self.degree, self.entries) == (other.n, other.degree, other.entries)

    def __repr__(self) -> str:
        return f"AntiSymForm(n={self.n}, degree={self.degree}, nnz={len(self.entries)})"


def form_contract(form: AntiSymForm, vectors: Sequence[Sequence]) -> object:
    """Evaluate the form on ``degree`` many vectors (exact).

    Computed as ``sum_I form(I) * det(vectors restricted to I)``.
    """
    if len(vectors) != form.degree:
        raise ValueError("number of vectors must equal the form degree")
    for u in vectors:
        if len(u) != form.n:
            raise ValueError("vector length must equal n")
    total = Fraction(0)
    k = form.degree
    for idx, coeff in form.entries.items():
        minor = 0
        for perm in itertools.permutations(range(k)):
            sign = _permutation_sign(perm)
            prod = sign
            for row, col in enumerate(perm):
                prod = prod * vectors[row][idx[col] - 1]
                if not prod:
                    break
            minor = minor + prod
        if minor:
            total = total + coeff * minor
    return total


def _permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        node = start
        while not seen[node]:
            seen[node] = True
            node = perm[node]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# ---------------------------------------------------------------------------
# Operator lifts
# ---------------------------------------------------------------------------


def lift_monotone(form: AntiSymForm, flavors: Sequence[str]) -> LinearOp:
    """``sum_{i_1 < ... < i_k} form(I) * gen(f_1, i_1) o ... o gen(f_k, i_k)``."""
    if len(flavors) != form.degree:
        raise ValueError("one flavor per form slot is required")
    op = LinearOp.zero(form.n)
    for idx, coeff in form.entries.items():
        word = generator_word(form.n, list(zip(flavors, idx)))
        op = op + word.scale(coeff)
    return op


def lift_ordered(form: AntiSymForm, flavors: Sequence[str]) -> LinearOp:
    """Sum over all pairwise-distinct ordered tuples with signed coefficients.

    ``sum_{(i_1,...,i_k) distinct} form(i_1,...,i_k) * gen(f_1,i_1) o ...``;
    the antisymmetric extension supplies the permutation signs.
    """
    if len(flavors) != form.degree:
        raise ValueError("one flavor per form slot is required")
    op = LinearOp.zero(form.n)
    for ordered in itertools.permutations(range(1, form.n + 1), form.degree):
        coeff = form.value(ordered)
        if not coeff:
            continue
        word = generator_word(form.n, list(zip(flavors, ordered)))
        op = op + word.scale(coeff)
    return op


def lift_two_chat(form: AntiSymForm) -> LinearOp:
    """Degree-2 lift ``sum_{k<l} T_{kl} chat_k chat_l``."""
    _require_degree(form, 2)
    return lift_monotone(form, ("chat", "chat"))


def lift_three_c(form: AntiSymForm) -> LinearOp:
    """Degree-3 lift ``sum_{i<s<t} T_{ist} c_i c_s c_t``."""
    _require_degree(form, 3)
    return lift_monotone(form, ("c", "c", "c"))


def lift_three_mixed(form: AntiSymForm) -> LinearOp:
    """Degree-3 lift ``sum_{i,s,t distinct} T_{ist} c_i chat_s chat_t``."""
    _require_degree(form, 3)
    return lift_ordered(form, ("c", "chat", "chat"))


def lift_torsion_assembly(form: AntiSymForm) -> LinearOp:
    """The weighted degree-3 lift ``(3/2) lift_three_c - (1/4) lift_three_mixed``."""
    _require_degree(form, 3)
    return lift_three_c(form).scale(Fraction(3, 2)) + lift_three_mixed(form).scale(Fraction(-1, 4))

def lift_four_mixed(form: AntiSymForm) -> LinearOp:
    """Degree-4 lift ``sum_{k<l<a<b} T_{klab} c_k c_l chat_a chat_b``."""
    _require_degree(form, 4)
    return lift_monotone(form, ("c", "c", "chat", "chat"))


def lift_four_chat(form: AntiSymForm) -> LinearOp:
    """Degree-4 lift ``sum_{k<l<a<b} T_{klab} chat_k chat_l chat_a chat_b``."""
    _require_degree(form, 4)
    return lift_monotone(form, ("chat",) * 4)


def _require_degree(form: AntiSymForm, degree: int) -> None:
    if form.degree != degree:
        raise ValueError(f"expected a degree-{degree} form, got degree {form.degree}")


# ---------------------------------------------------------------------------
# Random sampling and JSON I/O
# ---------------------------------------------------------------------------


def random_form(n: int, degree: int, rng) -> AntiSymForm:
    """Random form with entries ``p/q``, ``p`` in ``[-3, 3]``, ``q`` in ``{1, 2}``."""
    entries: Dict[Tuple[int, ...], object] = {}
    for idx in itertools.combinations(range(1, n + 1), degree):
        value = Fraction(rng.randint(-3, 3), rng.choice((1, 2)))
        if value:
            entries[idx] = value
    return AntiSymForm(n, degree, entries)


def random_vector(n: int, rng) -> List[Fraction]:
    """Random vector with the same entry distribution as :func:`random_form`."""
    return [Fraction(rng.randint(-3, 3), rng.choice((1, 2))) for _ in range(n)]


def form_to_json(form: AntiSymForm) -> dict:
    return {
        "n": form.n,
        "degree": form.degree,
        "entries": [
            {"idx": list(idx), "value": str(value)}
            for idx, value in sorted(form.entries.items())
        ],
    }


def form_from_json(data: Union[dict, str, Path]) -> AntiSymForm:
    """Load a form from a dict, a JSON string, or a path to a JSON file.

    Schema: ``{"n": 4, "degree": 3, "entries": [{"idx": [1,2,3], "value": "3/2"}]}``
    with 1-based indices and rational values given as strings or integers.
    """
    data = _load_json(data)
    entries: Dict[Tuple[int, ...], object] = {}
    for item in data.get("entries", []):
        idx = tuple(int(j) for j in item["idx"])
        entries[idx] = Fraction(str(item["value"]))
    return AntiSymForm(int(data["n"]), int(data["degree"]), entries)


def vectors_from_json(data: Union[dict, str, Path]) -> List[List[Fraction]]:
    """Load vectors from ``{"vectors": [["1", "0", "-1/2", "0"], ...]}``."""
    data = _load_json(data)
    return [[Fraction(str(x)) for x in vec] for vec in data["vectors"]]


def _load_json(data: Union[dict, str, Path]) -> dict:
    if isinstance(data, dict):
        return data
    if isinstance(data, Path) or (isinstance(data, str) and "\n" not in data and data.strip().endswith(".json")):
        with open(data, "r", encoding="utf-8") as handle:
            return json.load(handle)
    return json.loads(data)
