"""Line-oriented text format for instances.

    klin v1
    group: p=3
    n: 16
    k: 3
    0:1 4:2 7:1 = 2

Optional ``seed:`` and ``source:`` header lines record provenance. ``#`` starts a comment.
"""

import pathlib
import re

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.models import InstanceFormatError, KlinError

from .model import Equation, KLinInstance, SparseVec

MAGIC = "klin v1"
_HEADER = re.compile(r"^(group|n|k|seed|source):\s*(.+)$")


def parse(text: str) -> KLinInstance:
    """Parse an instance document; errors carry the 1-based line number."""
    headers: dict[str, str] = {}
    equations: list[Equation] = []
    spec: GroupSpec | None = None
    n = k = 0
    seen_magic = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not seen_magic:
            if line != MAGIC:
                raise InstanceFormatError(lineno, f"expected {MAGIC!r}")
            seen_magic = True
            continue

        header = _HEADER.match(line)
        if header and not equations:
            key, value = header.groups()
            if key in headers:
                raise InstanceFormatError(lineno, f"duplicate header {key!r}")
            headers[key] = value.strip()
            continue

        if spec is None:
            try:
                spec = GroupSpec.parse(headers["group"])
                n, k = int(headers["n"]), int(headers["k"])
            except KeyError as e:
                raise InstanceFormatError(lineno, f"missing header {e.args[0]!r}") from e
            except (ValueError, KlinError) as e:
                raise InstanceFormatError(lineno, str(e)) from e
        equations.append(_parse_equation(line, lineno, spec, n, k))

    if not seen_magic:
        raise InstanceFormatError(1, f"expected {MAGIC!r}")
    if spec is None:
        try:
            spec = GroupSpec.parse(headers["group"])
            n, k = int(headers["n"]), int(headers["k"])
        except (KeyError, ValueError, KlinError) as e:
            raise InstanceFormatError(len(text.splitlines()), f"incomplete header: {e}") from e

    seed = headers.get("seed")
    try:
        return KLinInstance(
            spec,
            n,
            k,
            tuple(equations),
            seed=int(seed) if seed is not None else None,
            source=headers.get("source"),
        )
    except (ValueError, KlinError) as e:
        raise InstanceFormatError(len(text.splitlines()), str(e)) from e


def _parse_equation(line: str, lineno: int, spec: GroupSpec, n: int, k: int) -> Equation:
    lhs_text, sep, rhs_text = line.partition("=")
    if not sep or not rhs_text.strip():
        raise InstanceFormatError(lineno, "expected '<terms> = <rhs>'")
    entries: dict[int, int] = {}
    for term in lhs_text.split():
        idx_text, colon, lit = term.partition(":")
        if not colon:
            raise InstanceFormatError(lineno, f"bad term {term!r}")
        try:
            idx = int(idx_text)
            code = spec.parse_element(lit)
        except (ValueError, KlinError) as e:
            raise InstanceFormatError(lineno, f"bad term {term!r}: {e}") from e
        if not 0 <= idx < n:
            raise InstanceFormatError(lineno, f"index {idx} outside [0, {n})")
        if code == 0:
            raise InstanceFormatError(lineno, f"zero coefficient at index {idx}")
        if idx in entries:
            raise InstanceFormatError(lineno, f"index {idx} repeated")
        entries[idx] = code
    if not entries:
        raise InstanceFormatError(lineno, "equation has no terms")
    if len(entries) > k:
        raise InstanceFormatError(lineno, f"equation has {len(entries)} terms, k={k}")
    try:
        rhs = spec.parse_element(rhs_text)
    except KlinError as e:
        raise InstanceFormatError(lineno, f"bad rhs: {e}") from e
    return Equation(SparseVec.from_mapping(n, entries), rhs)


def serialize(inst: KLinInstance) -> str:
    """Canonical text form; ``parse`` inverts it exactly."""
    spec = inst.spec
    lines = [MAGIC, f"group: {spec.describe()}", f"n: {inst.n}", f"k: {inst.k}"]
    if inst.seed is not None:
        lines.append(f"seed: {inst.seed}")
    if inst.source is not None:
        lines.append(f"source: {inst.source}")
    for eq in inst.equations:
        terms = " ".join(f"{i}:{spec.format_element(c)}" for i, c in eq.lhs.items())
        lines.append(f"{terms} = {spec.format_element(eq.rhs)}")
    return "\n".join(lines) + "\n"


def load(path: str | pathlib.Path) -> KLinInstance:
    """Read and parse an instance file."""
    return parse(pathlib.Path(path).read_text(encoding="utf-8"))


def dump(inst: KLinInstance, path: str | pathlib.Path) -> None:
    """Write an instance file."""
    pathlib.Path(path).write_text(serialize(inst), encoding="utf-8")
