"""Text dumps of pseudo-expectations.

    pe v1
    field: p=3
    n: 8
    d: 6
    status: complete
    - => 0
    0:1 3:2 => 2

Each entry line is a representative vector (``-`` for zero) and the phase exponent of
``ω_p``. An ``error`` status carries a ``conflict:`` header with the vector and both exponents.
Entries are written by weight, then in vector order.
"""

import pathlib
import re

from klin_refute.internal.algebra import GroupSpec
from klin_refute.internal.instance import SparseVec
from klin_refute.internal.models import InstanceFormatError, KlinError

from .pseudo import PEStatus, PseudoExpectation

MAGIC = "pe v1"
_HEADER = re.compile(r"^(field|n|d|status|conflict):\s*(.+)$")


def _format_vector(w: SparseVec, spec: GroupSpec) -> str:
    if not w.wt:
        return "-"
    return " ".join(f"{i}:{spec.format_element(c)}" for i, c in w.items())


def _parse_vector(text: str, lineno: int, spec: GroupSpec, n: int) -> SparseVec:
    text = text.strip()
    if text == "-":
        return SparseVec.zero(n)
    entries: dict[int, int] = {}
    for term in text.split():
        idx_text, colon, lit = term.partition(":")
        if not colon:
            raise InstanceFormatError(lineno, f"bad term {term!r}")
        try:
            idx, code = int(idx_text), spec.parse_element(lit)
        except (ValueError, KlinError) as e:
            raise InstanceFormatError(lineno, f"bad term {term!r}: {e}") from e
        if not 0 <= idx < n or idx in entries or code == 0:
            raise InstanceFormatError(lineno, f"bad term {term!r}")
        entries[idx] = code
    return SparseVec.from_mapping(n, entries)


def dump_pe(pe: PseudoExpectation) -> str:
    """Canonical text form; ``parse_pe`` inverts it up to the derivation log."""
    spec = pe.spec
    lines = [
        MAGIC,
        f"field: {spec.describe()}",
        f"n: {pe.n}",
        f"d: {pe.degree}",
        f"status: {pe.status.value}",
    ]
    if pe.conflict is not None:
        w, old, new = pe.conflict
        lines.append(f"conflict: {_format_vector(w, spec)} => {old} {new}")
    for w in sorted(pe.entries, key=lambda v: (v.wt, v)):
        lines.append(f"{_format_vector(w, spec)} => {pe.entries[w]}")
    return "\n".join(lines) + "\n"


def parse_pe(text: str) -> PseudoExpectation:
    """Parse a dump; errors carry the 1-based line number."""
    headers: dict[str, tuple[int, str]] = {}
    pe: PseudoExpectation | None = None
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
        if header and pe is None:
            key, value = header.groups()
            if key in headers:
                raise InstanceFormatError(lineno, f"duplicate header {key!r}")
            headers[key] = (lineno, value.strip())
            continue
        if pe is None:
            pe = _start(headers, lineno)
        vec_text, sep, exp_text = line.partition("=>")
        if not sep:
            raise InstanceFormatError(lineno, "expected '<vector> => <exponent>'")
        w = _parse_vector(vec_text, lineno, pe.spec, pe.n)
        try:
            e = int(exp_text)
        except ValueError as err:
            raise InstanceFormatError(lineno, f"bad exponent {exp_text.strip()!r}") from err
        if not 0 <= e < pe.spec.exponent:
            raise InstanceFormatError(lineno, f"exponent {e} outside [0, {pe.spec.exponent})")
        if w in pe.entries:
            raise InstanceFormatError(lineno, "repeated vector")
        if w.wt > pe.degree:
            raise InstanceFormatError(lineno, f"vector weight {w.wt} exceeds d={pe.degree}")
        pe.entries[w] = e
    if not seen_magic:
        raise InstanceFormatError(1, f"expected {MAGIC!r}")
    return pe if pe is not None else _start(headers, len(text.splitlines()))


def _start(headers: dict[str, tuple[int, str]], lineno: int) -> PseudoExpectation:
    try:
        spec = GroupSpec.parse(headers["field"][1])
        n, d = int(headers["n"][1]), int(headers["d"][1])
        status = PEStatus(headers["status"][1])
    except KeyError as e:
        raise InstanceFormatError(lineno, f"missing header {e.args[0]!r}") from e
    except (ValueError, KlinError) as e:
        raise InstanceFormatError(lineno, str(e)) from e
    if not spec.is_field:
        raise InstanceFormatError(headers["field"][0], "pseudo-expectations need a field")
    pe = PseudoExpectation(spec, n, d, status=status)
    if "conflict" in headers:
        at, value = headers["conflict"]
        vec_text, sep, rest = value.partition("=>")
        parts = rest.split()
        if not sep or len(parts) != 2:
            raise InstanceFormatError(at, "expected 'conflict: <vector> => <old> <new>'")
        try:
            old, new = int(parts[0]), int(parts[1])
        except ValueError as e:
            raise InstanceFormatError(at, f"bad conflict exponents: {e}") from e
        pe.conflict = (_parse_vector(vec_text, at, spec, n), old, new)
    return pe


def load_pe(path: str | pathlib.Path) -> PseudoExpectation:
    """Read and parse a dump file."""
    return parse_pe(pathlib.Path(path).read_text(encoding="utf-8"))


def save_pe(pe: PseudoExpectation, path: str | pathlib.Path) -> None:
    """Write a dump file."""
    pathlib.Path(path).write_text(dump_pe(pe), encoding="utf-8")
