"""K-theory of gauge-invariant ideals through their finite subsystems, and the liftability check."""

from __future__ import annotations

from dataclasses import dataclass, field

from .dynamics import AdmissiblePair, RelativeGBDS, condition_k, enumerate_admissible_pairs, quotient_system
from .extension import Extension, SubsystemResult, TreeElement, build_subsystem, refine, _express
from .ktheory import KTheoryResult, k_groups
from .snf import IntegerMatrix, smith_normal_form
from .boolean import iter_bits


class PreconditionError(RuntimeError):
    """An analysis was requested outside its hypotheses."""


@dataclass
class IdealKReport:
    pair: AdmissiblePair
    subsystem: SubsystemResult
    ideal: KTheoryResult
    quotient: KTheoryResult
    full: KTheoryResult

    @property
    def rank_alternating_sum(self) -> int:
        ranks = [
            self.ideal.k0.free_rank,
            -self.full.k0.free_rank,
            self.quotient.k0.free_rank,
            -self.ideal.k1_free_rank,
            self.full.k1_free_rank,
            -self.quotient.k1_free_rank,
        ]
        return sum(ranks)


def ideal_k_groups(
    sys: RelativeGBDS,
    pair: AdmissiblePair,
    ext: Extension | None = None,
    full: KTheoryResult | None = None,
) -> IdealKReport:
    """K-groups of the ideal of ``pair`` (via its subsystem), of the quotient and of the whole algebra."""
    sub = build_subsystem(sys, pair, ext)
    return IdealKReport(
        pair=pair,
        subsystem=sub,
        ideal=k_groups(sub.system),
        quotient=k_groups(quotient_system(sys, pair)),
        full=full or k_groups(sys),
    )


def six_term_rank_check(sys: RelativeGBDS, pair: AdmissiblePair, report: IdealKReport | None = None) -> bool:
    """Exactness of the cyclic six-term sequence forces the alternating rank sum to vanish."""
    report = report or ideal_k_groups(sys, pair)
    return report.rank_alternating_sum == 0


@dataclass
class PairLiftability:
    pair: AdmissiblePair
    kernel_rank: int
    vanishes: bool
    independent: bool
    residuals: list[list[int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.vanishes and self.independent


@dataclass
class LiftabilityReport:
    condition_k: bool
    pairs: list[PairLiftability]

    @property
    def liftable(self) -> bool:
        return self.condition_k and all(p.passed for p in self.pairs)


def _ambient_check(ext: Extension, sub: SubsystemResult, basis) -> PairLiftability:
    gen = sub.generated
    j_cells = [gen.cells[i] for i in iter_bits(gen.system.j_top)]
    # every tree that appears: the cells themselves and their nonzero shifted images
    terms: list[list[tuple[int, TreeElement]]] = []
    pool: list[TreeElement] = []
    for vec in basis:
        row: list[tuple[int, TreeElement]] = []
        for k, c in zip(vec, j_cells):
            if not k:
                continue
            row.append((k, c))
            for label in ext.delta(c):
                row.append((-k, ext.theta(label, c)))
        terms.append(row)
        pool.extend(t for _, t in row)
    cells: list[TreeElement] = []
    for t in pool:
        cells = refine(ext, cells, t)
    residuals = []
    for row in terms:
        acc = [0] * len(cells)
        for k, t in row:
            mask = _express(ext, cells, t)
            if mask is None:
                raise AssertionError("refinement failed to express one of its own generators")
            for i in iter_bits(mask):
                acc[i] += k
        residuals.append(acc)
    vanishes = all(not any(r) for r in residuals)
    images = []
    for vec in basis:
        acc = [0] * len(cells)
        for k, c in zip(vec, j_cells):
            if k:
                for i in iter_bits(_express(ext, cells, c) or 0):
                    acc[i] += k
        images.append(acc)
    if images and cells:
        rank = smith_normal_form(IntegerMatrix.from_rows(images, len(cells))).rank
    else:
        rank = 0
    return PairLiftability(sub.pair, len(basis), vanishes, rank == len(basis), [r for r in residuals if any(r)])


def liftability_report(sys: RelativeGBDS) -> LiftabilityReport:
    ck = condition_k(sys)
    if not ck.holds:
        atom, word = ck.witness
        raise PreconditionError(f"Condition (K) fails, witness ({atom},{'.'.join(word)})")
    ext = Extension(sys)
    out = []
    for pair in enumerate_admissible_pairs(sys):
        sub = build_subsystem(sys, pair, ext)
        basis = k_groups(sub.system).k1_basis
        out.append(_ambient_check(ext, sub, basis))
    return LiftabilityReport(True, out)
