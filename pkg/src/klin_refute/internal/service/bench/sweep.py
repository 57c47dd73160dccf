"""Parameter sweeps over seeded random instances."""

import concurrent.futures
import dataclasses
import logging
import time

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.models import Certificate, RunConfig, ValidationError
from klin_refute.internal.refute import refute, suggested_ell

from ..common import CommandOutput, require
from ..generate import generate
from ._csv import SweepRow, format_sweep_csv, to_csv_text

log = logging.getLogger(__name__)

SWEEP_KEYS = ("m", "n", "ell")


@dataclasses.dataclass(frozen=True)
class Sweep:
    """``key`` runs over ``start, start+step, ...`` up to and including ``stop``."""

    key: str
    start: int
    stop: int
    step: int

    @property
    def values(self) -> list[int]:
        """The swept values, ascending."""
        return list(range(self.start, self.stop + 1, self.step))


def parse_sweep(text: str) -> Sweep:
    """Parse ``key=start:stop[:step]``.

    Raises:
        ValidationError: Unknown key, malformed range or empty range.
    """
    key, sep, rng = text.partition("=")
    key = key.strip()
    if not sep or key not in SWEEP_KEYS:
        raise ValidationError(f"--sweep must look like m=5:100:5 with key in {SWEEP_KEYS}")
    parts = rng.split(":")
    if len(parts) not in (2, 3):
        raise ValidationError(f"--sweep range {rng!r} is not start:stop[:step]")
    try:
        start, stop, *rest = (int(p) for p in parts)
    except ValueError as e:
        raise ValidationError(f"--sweep range {rng!r} is not integral") from e
    step = rest[0] if rest else 1
    if step < 1 or start < 1 or stop < start:
        raise ValidationError(f"--sweep range {rng!r} is empty")
    return Sweep(key, start, stop, step)


def first_kikuchi_values(cert: Certificate) -> tuple[float | None, float | None]:
    """``(norm, d)`` of the first trail stage that measured a norm, searching parts too."""
    for stage in cert.trail:
        if "norm" in stage.values:
            norm, d = stage.values.get("norm"), stage.values.get("d")
            return (
                float(norm) if isinstance(norm, (int, float)) else None,
                float(d) if isinstance(d, (int, float)) else None,
            )
    for part in cert.parts:
        found = first_kikuchi_values(part.certificate)
        if found != (None, None):
            return found
    return None, None


def run_point(cfg: RunConfig, sweep: Sweep, value: int, seed: int) -> SweepRow:
    """Generate one instance and refute it."""
    params = {
        "n": cfg.n,
        "m": cfg.m,
        "ell": cfg.ell,
    } | {sweep.key: value}
    spec = GroupSpec.parse(require(cfg.group, "--group"))
    inst = generate(
        spec,
        require(params["n"], "--n"),
        require(cfg.k, "--k"),
        require(params["m"], "--m"),
        seed,
        cfg.generator,
        cfg.width,
    )
    start = time.perf_counter()
    cert = refute(
        inst,
        params["ell"] if params["ell"] is not None else suggested_ell(inst),
        cfg.eps if cfg.eps is not None else 0.5,
        eta=cfg.eta,
        pipeline=cfg.pipeline,
        caps=cfg.caps,
        spectral=cfg.spectral,
        experimental=cfg.group_odd_experimental,
    )
    runtime_ms = (time.perf_counter() - start) * 1000
    norm, d = first_kikuchi_values(cert)
    log.debug(
        "sweep point",
        extra={sweep.key: value, "seed": seed, "alg_val": cert.alg_val, "elapsed_ms": runtime_ms},
    )
    return SweepRow(value, seed, cert.alg_val, norm, d, runtime_ms)


def cmd_bench(cfg: RunConfig) -> CommandOutput:
    """Run the sweep over every (value, seed) pair and return the CSV text."""
    sweep = parse_sweep(require(cfg.sweep, "--sweep"))
    points = [(v, s) for v in sweep.values for s in cfg.seeds]
    with concurrent.futures.ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        rows = list(pool.map(lambda p: run_point(cfg, sweep, *p), points))
    log.info("sweep finished", extra={"key": sweep.key, "points": len(rows)})
    return CommandOutput(to_csv_text(format_sweep_csv(rows, sweep.key, cfg.timings)))
