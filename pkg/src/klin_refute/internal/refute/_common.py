import logging
from fractions import Fraction

from klin_refute.internal.kikuchi import DegreeStats, KikuchiMatrix, NormResult
from klin_refute.internal.models import TrailStage

log = logging.getLogger(__name__)


def clip(raw: float) -> float:
    """Clamp a raw alg-val into ``[0, 1]``."""
    if raw > 1:
        log.warning("alg-val clipped", extra={"raw_alg_val": raw})
    return min(max(raw, 0.0), 1.0)


def kikuchi_stage(
    name: str,
    A: KikuchiMatrix,
    stats: DegreeStats,
    norm: NormResult,
    **extra: float | int | str | None,
) -> TrailStage:
    """Trail entry for one spectral certificate."""
    return TrailStage(
        name=name,
        values={
            "kind": A.kind.value,
            "N": A.size,
            "edges": A.nnz,
            "delta": A.delta,
            "d": stats.d,
            "norm": norm.value,
            "method": norm.method,
            "iterations": norm.iterations,
            "loose": norm.loose,
            **extra,
        },
    )


def fraction_text(f: Fraction) -> str:
    """``p/q`` form used for part weights."""
    return f"{f.numerator}/{f.denominator}"
