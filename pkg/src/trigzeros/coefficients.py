"""Coefficient laws for the random pairs (x_r, y_r) and seeded RNG streams.

Every shipped law is centered with unit variance, and the two coordinates of a
pair are drawn independently.  Streams are derived from ``(master_seed,
stream_index)`` through :class:`numpy.random.SeedSequence` with the stream
index as spawn key, feeding a Philox counter-based generator.  This mixer is
part of the public contract: changing it changes every stored experiment.
"""
from __future__ import annotations

import math
import zlib
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "CoefficientLaw",
    "SeedSpec",
    "MomentReport",
    "LAWS",
    "get_law",
    "make_rng",
    "derive_seed",
    "sample_pairs",
    "sample_pairs_batch",
    "moment_report",
]

_UINT64 = 2**64
_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class CoefficientLaw:
    """A centered, unit-variance law for each coordinate of a coefficient pair.

    ``moment_order`` is the absolute moment order the package relies on (all
    shipped laws in fact have every moment).  ``regular`` marks laws with a
    smooth positive density ``exp(-psi)``; only the Gaussian qualifies.
    """

    name: str
    moment_order: int = 4
    regular: bool = False

    def draw(self, rng: np.random.Generator, size) -> np.ndarray:
        if self.name == "gaussian":
            return rng.standard_normal(size)
        if self.name == "rademacher":
            return 2.0 * rng.integers(0, 2, size=size).astype(np.float64) - 1.0
        if self.name == "uniform_scaled":
            return rng.uniform(-_SQRT3, _SQRT3, size=size)
        if self.name == "laplace_scaled":
            return rng.laplace(0.0, 1.0 / math.sqrt(2.0), size=size)
        raise InvalidArgumentError(f"unknown coefficient law {self.name!r}")


LAWS: dict[str, CoefficientLaw] = {
    "gaussian": CoefficientLaw("gaussian", regular=True),
    "rademacher": CoefficientLaw("rademacher"),
    "uniform_scaled": CoefficientLaw("uniform_scaled"),
    "laplace_scaled": CoefficientLaw("laplace_scaled"),
}


def get_law(law: CoefficientLaw | str) -> CoefficientLaw:
    if isinstance(law, CoefficientLaw):
        if law.name not in LAWS:
            raise InvalidArgumentError(f"unknown coefficient law {law.name!r}")
        return law
    try:
        return LAWS[law]
    except KeyError:
        raise InvalidArgumentError(
            f"unknown coefficient law {law!r}; expected one of {sorted(LAWS)}"
        ) from None


@dataclass(frozen=True)
class SeedSpec:
    """Identifies one RNG stream; distinct ``stream_index`` give independent streams."""

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        for field in ("master_seed", "stream_index"):
            value = getattr(self, field)
            if not isinstance(value, (int, np.integer)) or not 0 <= value < _UINT64:
                raise InvalidArgumentError(f"{field} must be a 64-bit unsigned integer, got {value!r}")

    def child(self, stream_index: int) -> "SeedSpec":
        return SeedSpec(self.master_seed, stream_index)


def make_rng(seed: SeedSpec) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed.master_seed), spawn_key=(int(seed.stream_index),))
    return np.random.Generator(np.random.Philox(ss))


def _label_key(label) -> int:
    if isinstance(label, str):
        return zlib.crc32(label.encode("utf-8"))
    return int(label)


def derive_seed(master_seed: int, *labels) -> int:
    """Mix ``master_seed`` with integer or string labels into a new 64-bit seed.

    Used to give every (law, m) sample of an experiment its own family of
    streams.  String labels are keyed by their CRC-32, which is stable across
    Python sessions (unlike ``hash``).
    """
    ss = np.random.SeedSequence(int(master_seed), spawn_key=tuple(_label_key(l) for l in labels))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def sample_pairs(law: CoefficientLaw | str, m: int, seed: SeedSpec) -> np.ndarray:
    """Draw ``m`` i.i.d. coefficient pairs; returns an array of shape ``(m, 2)``.

    Column 0 holds the cosine coefficients x_r, column 1 the sine
    coefficients y_r.  The output is a pure function of ``(law, m, seed)``.
    """
    law = get_law(law)
    if int(m) != m or m < 1:
        raise InvalidArgumentError(f"m must be a positive integer, got {m!r}")
    return law.draw(make_rng(seed), (int(m), 2))


def sample_pairs_batch(law: CoefficientLaw | str, m: int, master_seed: int,
                       stream_indices) -> np.ndarray:
    """Stack ``sample_pairs`` over several stream indices, shape ``(n, m, 2)``."""
    law = get_law(law)
    if int(m) != m or m < 1:
        raise InvalidArgumentError(f"m must be a positive integer, got {m!r}")
    idx = list(stream_indices)
    out = np.empty((len(idx), int(m), 2))
    for k, j in enumerate(idx):
        out[k] = law.draw(make_rng(SeedSpec(master_seed, j)), (int(m), 2))
    return out


@dataclass(frozen=True)
class MomentReport:
    mean: float
    variance: float
    abs_moment_3: float
    abs_moment_4: float
    n: int


def moment_report(law: CoefficientLaw | str, n: int, seed: SeedSpec) -> MomentReport:
    """Empirical moments of ``n`` scalar draws from ``law``.

    The variance is the second moment about the known center 0, so that
    atomic laws such as Rademacher report exactly 1.
    """
    law = get_law(law)
    if int(n) != n or n < 100:
        raise InvalidArgumentError(f"n must be an integer >= 100, got {n!r}")
    x = law.draw(make_rng(seed), int(n))
    ax = np.abs(x)
    x2 = x * x
    return MomentReport(
        mean=float(x.mean()),
        variance=float(x2.mean()),
        abs_moment_3=float((x2 * ax).mean()),
        abs_moment_4=float((x2 * x2).mean()),
        n=int(n),
    )
