"""Functions to format sweep rows for CSV export."""

import dataclasses

import pandas as pd

COLUMNS = ["seed", "alg_val", "norm", "d", "runtime_ms"]


@dataclasses.dataclass(frozen=True)
class SweepRow:
    """One refutation run of a sweep."""

    value: int
    seed: int
    alg_val: float
    norm: float | None
    d: float | None
    runtime_ms: float


def format_sweep_csv(rows: list[SweepRow], key: str, timings: bool = True) -> pd.DataFrame:
    """Format the sweep rows into a pandas dataframe ready for CSV export.

    The dataframe ends up with
    - <key>: the swept parameter, e.g. m
    - seed: the instance seed
    - alg_val: the certified bound
    - norm, d: spectral norm and average degree of the first Kikuchi stage, empty if none
    - runtime_ms: wall time of the run, 0 when timings are off

    Rows are sorted by (key, seed) so the output does not depend on completion order.
    """
    df = pd.DataFrame([dataclasses.asdict(r) for r in rows], columns=["value", *COLUMNS])
    df = df.rename(columns={"value": key})
    if not timings:
        df["runtime_ms"] = 0.0
    df = df.sort_values([key, "seed"], kind="stable").reset_index(drop=True)
    return df[[key, *COLUMNS]]


def to_csv_text(df: pd.DataFrame) -> str:
    """Render with fixed float formatting."""
    return df.to_csv(index=False, float_format="%.12g", lineterminator="\n")
