"""Independent floating-point oracle for the exact engine.

Everything in this module recomputes values through a second, structurally
different route: dense complex matrices built directly from the bitmask sign
rule (not converted from the exact operators), Gamma-function sphere moments,
Monte-Carlo sphere sampling, and adaptive line quadrature.  Tests compare the
exact engine against these floats at 1e-9 relative (deterministic routes) or
three standard errors (Monte Carlo).
"""

from __future__ import annotations

import itertools
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from .exterior import LinearOp
from .forms import AntiSymForm
from .scalars import sphere_volume_float

MAX_ORACLE_DIMENSION = 10


class DenseOp:
    """Dense complex-matrix image of an exact operator."""

    __slots__ = ("n", "matrix")

    def __init__(self, n: int, matrix: np.ndarray):
        self.n = n
        self.matrix = np.asarray(matrix, dtype=np.complex128)

    @classmethod
    def from_exact(cls, op: LinearOp) -> "DenseOp":
        _check_oracle_n(op.n)
        matrix = np.zeros((op.dim, op.dim), dtype=np.complex128)
        for col, entries in enumerate(op.cols):
            for row, coeff in entries.items():
                matrix[row, col] = complex(coeff)
        return cls(op.n, matrix)


def _check_oracle_n(n: int) -> None:
    if n > MAX_ORACLE_DIMENSION:
        raise ValueError(f"oracle limited to n <= {MAX_ORACLE_DIMENSION}, got {n}")


# ---------------------------------------------------------------------------
# Dense Clifford operators, built independently from the sign rule
# ---------------------------------------------------------------------------

_DENSE_CACHE: Dict[Tuple[str, int, int], np.ndarray] = {}


def dense_generator(flavor: str, n: int, j: int) -> np.ndarray:
    """Dense matrix of the flavor-``c``/``chat`` generator in direction ``j``."""
    _check_oracle_n(n)
    key = (flavor, n, j)
    cached = _DENSE_CACHE.get(key)
    if cached is not None:
        return cached
    if flavor not in ("c", "chat"):
        raise ValueError(f"flavor must be c or chat, got {flavor!r}")
    dim = 1 << n
    bit = 1 << (j - 1)
    matrix = np.zeros((dim, dim), dtype=np.complex128)
    for mask in range(dim):
        sign = -1.0 if bin(mask & (bit - 1)).count("1") % 2 else 1.0
        if mask & bit:
            matrix[mask ^ bit, mask] = -sign if flavor == "c" else sign
        else:
            matrix[mask | bit, mask] = sign
    _DENSE_CACHE[key] = matrix
    return matrix


def dense_clifford(flavor: str, u: Sequence) -> np.ndarray:
    n = len(u)
    _check_oracle_n(n)
    dim = 1 << n
    total = np.zeros((dim, dim), dtype=np.complex128)
    for j, coeff in enumerate(u, start=1):
        c = complex(coeff)
        if c:
            total += c * dense_generator(flavor, n, j)
    return total


def dense_word(n: int, letters: Sequence[Tuple[str, Sequence]]) -> np.ndarray:
    """Product of dense Clifford actions, leftmost letter outermost."""
    _check_oracle_n(n)
    result = np.eye(1 << n, dtype=np.complex128)
    for flavor, u in letters:
        result = result @ dense_clifford(flavor, u)
    return result


def float_trace(word: Sequence[Tuple[str, Sequence]]) -> complex:
    """Dense-matrix trace of a product of Clifford actions."""
    if not word:
        raise ValueError("word must contain at least one letter")
    n = len(word[0][1])
    return complex(np.trace(dense_word(n, word)))


# ---------------------------------------------------------------------------
# Dense lifts of antisymmetric forms
# ---------------------------------------------------------------------------


def _dense_generator_product(n: int, letters: Sequence[Tuple[str, int]]) -> np.ndarray:
    result = np.eye(1 << n, dtype=np.complex128)
    for flavor, j in letters:
        result = result @ dense_generator(flavor, n, j)
    return result


def dense_lift_monotone(form: AntiSymForm, flavors: Sequence[str]) -> np.ndarray:
    _check_oracle_n(form.n)
    dim = 1 << form.n
    total = np.zeros((dim, dim), dtype=np.complex128)
    for idx, coeff in form.entries.items():
        total += complex(coeff) * _dense_generator_product(form.n, list(zip(flavors, idx)))
    return total


def dense_lift_ordered(form: AntiSymForm, flavors: Sequence[str]) -> np.ndarray:
    _check_oracle_n(form.n)
    dim = 1 << form.n
    total = np.zeros((dim, dim), dtype=np.complex128)
    for ordered in itertools.permutations(range(1, form.n + 1), form.degree):
        coeff = form.value(ordered)
        if coeff:
            total += complex(coeff) * _dense_generator_product(form.n, list(zip(flavors, ordered)))
    return total


def dense_lift(kind: str, form: Optional[AntiSymForm], n: int) -> np.ndarray:
    """Float twin of the exact operator lifts, keyed by structural kind."""
    if kind == "identity" or kind is None:
        return np.eye(1 << n, dtype=np.complex128)
    if kind == "normal_c":
        return dense_generator("c", n, n)
    if kind == "two_chat":
        return dense_lift_monotone(form, ("chat", "chat"))
    if kind == "three_c":
        return dense_lift_monotone(form, ("c", "c", "c"))
    if kind == "three_mixed":
        return dense_lift_ordered(form, ("c", "chat", "chat"))
    if kind == "torsion_assembly":
        return 1.5 * dense_lift_monotone(form, ("c", "c", "c")) - 0.25 * dense_lift_ordered(
            form, ("c", "chat", "chat")
        )
    if kind == "four_mixed":
        return dense_lift_monotone(form, ("c", "c", "chat", "chat"))
    if kind == "four_chat":
        return dense_lift_monotone(form, ("chat",) * 4)
    raise ValueError(f"unknown lift kind {kind!r}")


# ---------------------------------------------------------------------------
# Float twins of the trace integrals
# ---------------------------------------------------------------------------


def float_plain_trace(word_matrix: np.ndarray, lift_matrix: np.ndarray) -> complex:
    return complex(np.trace(word_matrix @ lift_matrix))


def float_sandwich_integral(
    word_matrix: np.ndarray, lift_matrix: np.ndarray, placement: str, n: int
) -> complex:
    """Float value of the cosphere-integrated sandwich trace (includes volume)."""
    volume = sphere_volume_float(n - 1)
    total = 0j
    for i in range(1, n + 1):
        ci = dense_generator("c", n, i)
        if placement == "before":
            inner = ci @ lift_matrix @ ci
        elif placement == "after":
            inner = lift_matrix @ ci @ ci
        else:
            raise ValueError(f"unknown placement {placement!r}")
        total += np.trace(word_matrix @ inner)
    return complex(total * volume / n)


def float_density(
    arg_flavors: Sequence[str],
    lift_kind: str,
    prefactor: complex,
    form: AntiSymForm,
    vectors: Sequence[Sequence],
    m: int,
) -> complex:
    """Float twin of the interior density assembly."""
    n = 2 * m
    word = dense_word(n, list(zip(arg_flavors, vectors)))
    lift = dense_lift(lift_kind, form, n)
    volume = sphere_volume_float(n - 1)
    plain = float_plain_trace(word, lift) * volume
    sandwich = float_sandwich_integral(word, lift, "before", n) + float_sandwich_integral(
        word, lift, "after", n
    )
    return prefactor * (plain + m * sandwich)


def moment_float(alpha: Sequence[int], n: int) -> float:
    """Gamma-function closed form of the sphere moment (independent route)."""
    if len(alpha) != n:
        raise ValueError("alpha must have length n")
    if any(a % 2 for a in alpha):
        return 0.0
    total = sum(alpha)
    value = 2.0
    for a in alpha:
        value *= math.gamma((a + 1) / 2.0)
    return value / math.gamma((n + total) / 2.0)


# ---------------------------------------------------------------------------
# Quadrature oracles
# ---------------------------------------------------------------------------


def sphere_quadrature(
    f: Callable[[np.ndarray], np.ndarray],
    n: int,
    samples: int = 100_000,
    seed: int = 0,
) -> Tuple[complex, float]:
    """Monte-Carlo sphere integral ``integral_{S^{n-1}} f dS`` with std error.

    ``f`` must be vectorized: it receives a ``(k, n)`` array of unit vectors
    and returns a length-``k`` array.  Sampling uses the Gaussian
    normalization method with a fixed seed.
    """
    if samples < 10_000:
        raise ValueError("samples must be >= 10^4")
    rng = np.random.default_rng(seed)
    points = rng.standard_normal((samples, n))
    points /= np.linalg.norm(points, axis=1, keepdims=True)
    values = np.asarray(f(points), dtype=np.complex128)
    volume = sphere_volume_float(n - 1)
    mean = complex(values.mean() * volume)
    stderr = float(values.std(ddof=1) / math.sqrt(samples) * volume)
    return mean, stderr


def line_quadrature(f: Callable[[float], complex], cutoff: float = 1.0e6) -> complex:
    """Adaptive quadrature of a decaying function over the real line.

    Integrates ``[-cutoff, cutoff]`` in segments plus the two tails via the
    substitution ``t -> 1/s`` (exact for at-least-quadratic decay); fails if
    the integrand does not decay.
    """
    if abs(f(cutoff)) * cutoff > 1.0e-3 or abs(f(-cutoff)) * cutoff > 1.0e-3:
        raise ValueError("integrand does not decay fast enough for line quadrature")

    def quad_complex(g, a, b):
        re, _ = integrate.quad(lambda t: g(t).real, a, b, epsabs=1e-13, epsrel=1e-12, limit=400)
        im, _ = integrate.quad(lambda t: g(t).imag, a, b, epsabs=1e-13, epsrel=1e-12, limit=400)
        return re + 1j * im

    # Core segment directly; each tail via t -> 1/s, which maps [T, inf) to
    # (0, 1/T] and keeps the transformed integrand bounded for quadratic decay.
    split = 10.0
    total = quad_complex(lambda t: complex(f(t)), -split, split)
    total += quad_complex(lambda s: complex(f(1.0 / s)) / s**2 if s else 0j, 0.0, 1.0 / split)
    total += quad_complex(lambda s: complex(f(-1.0 / s)) / s**2 if s else 0j, 0.0, 1.0 / split)
    return total
