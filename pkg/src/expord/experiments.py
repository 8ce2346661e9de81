"""Finite experiments, priors, Bayes posteriors and zonotope primitives."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exactnum import ONE, ZERO, DimensionMismatch, RatMatrix, render, vec

DEFAULT_REALIZATION_CAP = 20


class InvalidExperiment(ValueError):
    pass


class NegativeEntry(InvalidExperiment):
    def __init__(self, row: int, col: int):
        super().__init__(f"negative entry at row {row}, column {col}")
        self.row, self.col = row, col


class RowSumNotOne(InvalidExperiment):
    def __init__(self, row: int, actual: Fraction):
        super().__init__(f"row {row} sums to {render(actual)}, not 1")
        self.row, self.actual = row, actual


class InvalidPrior(ValueError):
    pass


class TooManyRealizations(ValueError):
    pass


class DimensionCap(ValueError):
    """Input exceeds the size a brute-force routine is built for."""


@dataclass(frozen=True)
class Experiment:
    """Row-stochastic N×M matrix: row n is the signal distribution in state n."""

    matrix: RatMatrix
    labels: Optional[tuple] = None

    @property
    def n_states(self) -> int:
        return self.matrix.n_rows

    @property
    def n_realizations(self) -> int:
        return self.matrix.n_cols

    def column(self, m: int) -> tuple:
        return self.matrix.col(m)

    def columns(self) -> list:
        return self.matrix.columns()

    def to_json(self) -> dict:
        out = {"states": self.n_states, "realizations": self.n_realizations,
               "rows": self.matrix.to_strings()}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out


def validate_experiment(matrix, labels=None) -> Experiment:
    """Check row stochasticity. Error indices are 1-based."""
    if not isinstance(matrix, RatMatrix):
        matrix = RatMatrix.from_rows(matrix)
    if matrix.n_rows == 0 or matrix.n_cols == 0:
        raise InvalidExperiment("an experiment needs at least one state and one realization")
    for n, row in enumerate(matrix.rows(), start=1):
        for m, x in enumerate(row, start=1):
            if x < 0:
                raise NegativeEntry(n, m)
        s = sum(row, ZERO)
        if s != 1:
            raise RowSumNotOne(n, s)
    if labels is not None:
        labels = tuple(labels)
        if len(labels) != matrix.n_cols:
            raise InvalidExperiment(f"{len(labels)} labels for {matrix.n_cols} realizations")
    return Experiment(matrix, labels)


def experiment(rows, labels=None) -> Experiment:
    return validate_experiment(RatMatrix.from_rows(rows), labels)


def experiment_from_json(d: dict) -> Experiment:
    """Parse the ``{"states", "realizations", "rows", "labels"}`` document."""
    try:
        rows = d["rows"]
    except (KeyError, TypeError):
        raise InvalidExperiment("experiment document needs a 'rows' array") from None
    e = validate_experiment(RatMatrix.from_rows(rows), d.get("labels"))
    for key, actual in (("states", e.n_states), ("realizations", e.n_realizations)):
        if key in d and d[key] != actual:
            raise InvalidExperiment(f"declared {key}={d[key]} but rows give {actual}")
    return e


@dataclass(frozen=True)
class Prior:
    mu: tuple

    def __post_init__(self):
        mu = vec(self.mu)
        object.__setattr__(self, "mu", mu)
        if any(x < 0 for x in mu):
            raise InvalidPrior("prior has a negative entry")
        if sum(mu, ZERO) != 1:
            raise InvalidPrior(f"prior sums to {render(sum(mu, ZERO))}, not 1")

    def __len__(self):
        return len(self.mu)

    def __iter__(self):
        return iter(self.mu)

    def __getitem__(self, i):
        return self.mu[i]

    @property
    def interior(self) -> bool:
        return all(x > 0 for x in self.mu)

    @classmethod
    def uniform(cls, n: int) -> "Prior":
        return cls(tuple(Fraction(1, n) for _ in range(n)))

    def to_json(self) -> dict:
        return {"mu": [render(x) for x in self.mu]}

    @classmethod
    def from_json(cls, d: dict) -> "Prior":
        return cls(vec(d["mu"]))


@dataclass(frozen=True)
class PosteriorDistribution:
    """One atom per realization with positive probability.

    Atoms are kept per realization (``realizations[i]`` is the column index
    of atom ``i``); two realizations with the same posterior are not merged.
    """

    atoms: tuple  # ((posterior, weight), ...)
    realizations: tuple
    dropped_realizations: tuple = field(default=())

    def mean(self) -> tuple:
        n = len(self.atoms[0][0])
        return tuple(sum((w * p[i] for p, w in self.atoms), ZERO) for i in range(n))

    def to_json(self) -> dict:
        return {
            "atoms": [{"realization": m, "posterior": [render(x) for x in p], "weight": render(w)}
                      for m, (p, w) in zip(self.realizations, self.atoms)],
            "dropped_realizations": list(self.dropped_realizations),
            "merged": False,
        }


def _as_prior(mu0) -> Prior:
    return mu0 if isinstance(mu0, Prior) else Prior(tuple(mu0))


def posteriors(e: Experiment, mu0) -> PosteriorDistribution:
    mu0 = _as_prior(mu0)
    if len(mu0) != e.n_states:
        raise DimensionMismatch(f"prior of length {len(mu0)} for {e.n_states} states")
    atoms, kept, dropped = [], [], []
    for m, col in enumerate(e.columns()):
        joint = [p * x for p, x in zip(mu0, col)]
        w = sum(joint, ZERO)
        if w == 0:
            dropped.append(m)
            continue
        atoms.append((tuple(j / w for j in joint), w))
        kept.append(m)
    return PosteriorDistribution(tuple(atoms), tuple(kept), tuple(dropped))


def _matrix(e) -> RatMatrix:
    return e.matrix if isinstance(e, Experiment) else e


def support_function(e, beta: Sequence[Fraction]) -> Fraction:
    """``max_{0 ≤ v ≤ 1} β·E v``, i.e. the sum of the positive parts of ``βᵀE``."""
    A = _matrix(e)
    if len(beta) != A.n_rows:
        raise DimensionMismatch(f"beta of length {len(beta)} for {A.n_rows} states")
    return sum((x for x in A.vecmat(beta) if x > 0), ZERO)


def subset_sums(e, cap: int = DEFAULT_REALIZATION_CAP) -> dict:
    """Map each distinct subset sum of columns to the first bitmask producing it.

    Bit ``m`` of a mask selects column ``m``.
    """
    A = _matrix(e)
    if A.n_cols > cap:
        raise TooManyRealizations(f"{A.n_cols} realizations exceeds the cap of {cap}")
    sums = {tuple(ZERO for _ in range(A.n_rows)): 0}
    for m, col in enumerate(A.columns()):
        bit = 1 << m
        for p, mask in list(sums.items()):
            q = tuple(a + b for a, b in zip(p, col))
            if q not in sums:
                sums[q] = mask | bit
    # order by mask so the enumeration is deterministic and index-friendly
    return dict(sorted(sums.items(), key=lambda kv: kv[1]))


def zonotope_vertices(e, cap: int = DEFAULT_REALIZATION_CAP) -> list:
    """All distinct subset sums ``E v, v ∈ {0,1}^M``; contains every vertex of Zon E."""
    return list(subset_sums(e, cap))


def weighted_experiment(e, mu0) -> RatMatrix:
    """The prior-weighted matrix with entries ``μ0(ωₙ)·Eₙₘ``."""
    A = _matrix(e)
    mu = mu0.mu if isinstance(mu0, Prior) else vec(mu0)
    if len(mu) != A.n_rows:
        raise DimensionMismatch(f"prior of length {len(mu)} for {A.n_rows} states")
    return A.scale_rows(mu)


def uninformative(n_states: int, n_realizations: int = 1) -> Experiment:
    w = Fraction(1, n_realizations)
    return experiment([[w] * n_realizations for _ in range(n_states)])


def split_column(e: Experiment, m: int) -> Experiment:
    """Replace column ``m`` by two half-columns (a Blackwell-equivalent experiment)."""
    cols = e.columns()
    half = tuple(x / 2 for x in cols[m])
    new = cols[:m] + [half, half] + cols[m + 1:]
    return validate_experiment(RatMatrix.from_columns(new, n_rows=e.n_states))


def permute_columns(e: Experiment, order: Sequence[int]) -> Experiment:
    cols = e.columns()
    return validate_experiment(RatMatrix.from_columns([cols[i] for i in order], n_rows=e.n_states))


def expected_payment_weights(e, mu0) -> tuple:
    """``μ0ᵀE``: probability of each realization under ``mu0``."""
    mu = mu0.mu if isinstance(mu0, Prior) else vec(mu0)
    return _matrix(e).vecmat(mu)


def ones(n: int) -> tuple:
    return tuple(ONE for _ in range(n))
