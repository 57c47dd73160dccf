"""Finite algebraic domains with table-driven arithmetic.

Elements are integer codes in ``[0, order)``. A code is the little-endian mixed-radix number of
the element's coordinates: the polynomial coefficients of an extension-field element, or the
components of a product-group element. Code 0 is always the zero element.
"""

import functools
import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import numpy.typing as npt

from klin_refute.internal.models import DomainMismatchError, ValidationError

log = logging.getLogger(__name__)

MAX_ORDER = 1024
_DIGITS = "0123456789abcdefghijklmnopqrstuv"

IntArray = npt.NDArray[np.int64]


class DomainKind(str, Enum):
    """Defines the supported algebraic domains."""

    prime_field = "prime-field"
    extension_field = "extension-field"
    abelian_product = "abelian-product"


@dataclass(frozen=True)
class Factor:
    """A prime-power cyclic factor ``Z_{prime^exp}`` of one declared component."""

    prime: int
    exp: int
    component: int

    @property
    def modulus(self) -> int:
        """The factor's order."""
        return self.prime**self.exp


def is_prime(p: int) -> bool:
    """Trial-division primality test for small integers."""
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


def prime_power_factors(m: int) -> list[tuple[int, int]]:
    """Returns ``[(prime, exponent), ...]`` for ``m``, ascending by prime."""
    out: list[tuple[int, int]] = []
    q = 2
    while q * q <= m:
        e = 0
        while m % q == 0:
            m //= q
            e += 1
        if e:
            out.append((q, e))
        q += 1
    if m > 1:
        out.append((m, 1))
    return out


def _poly_mod(a: list[int], mod: list[int], p: int) -> list[int]:
    """Remainder of ``a`` by the monic polynomial ``mod`` over F_p, both little-endian."""
    a = [c % p for c in a]
    deg = len(mod) - 1
    for i in range(len(a) - 1, deg - 1, -1):
        c = a[i]
        if c:
            for j in range(deg + 1):
                a[i - deg + j] = (a[i - deg + j] - c * mod[j]) % p
    rem = a[:deg]
    return rem + [0] * (deg - len(rem))


def _poly_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _poly_mod(prod, mod, p)


def is_irreducible(poly: list[int], p: int) -> bool:
    """Check a monic polynomial by trial division against every monic poly of degree <= m/2."""
    m = len(poly) - 1
    for deg in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            divisor = [*low, 1]
            if not any(_poly_mod(list(poly), divisor, p)[:deg]):
                return False
    return True


def lowest_irreducible(p: int, m: int) -> list[int]:
    """The monic irreducible of degree m whose lower coefficients have the smallest code."""
    for code in range(p**m):
        low = [(code // p**j) % p for j in range(m)]
        if low[0] == 0:
            continue
        poly = [*low, 1]
        if is_irreducible(poly, p):
            return poly
    raise ValidationError(f"no irreducible polynomial of degree {m} over F_{p}")


class GroupSpec:
    """An algebraic domain with precomputed add, negate, multiply and phase tables.

    ``phase_table[g]`` is the exponent of ``ω_E^{·}`` with ``E = exponent`` such that the
    character ``χ_α(x)`` equals ``ω_E^{phase_table[α·x]}``. For fields that is the absolute
    trace; for products it is ``Σ_i g_i·E/m_i``.
    """

    def __init__(
        self,
        kind: DomainKind,
        coord_moduli: tuple[int, ...],
        *,
        p: int = 0,
        poly: tuple[int, ...] = (),
    ) -> None:
        """Build tables for the domain.

        Prefer ``parse`` or the ``prime``/``gf``/``product`` helpers.
        """
        self.kind = kind
        self.p = p
        self.poly = poly
        self.coord_moduli = coord_moduli
        self.order = math.prod(coord_moduli)
        if self.order > MAX_ORDER:
            raise ValidationError(f"domain order {self.order} exceeds {MAX_ORDER}")

        strides = np.cumprod((1, *coord_moduli[:-1])).astype(np.int64)
        codes = np.arange(self.order, dtype=np.int64)
        self.coords: IntArray = np.stack(
            [(codes // s) % q for s, q in zip(strides, coord_moduli, strict=True)],
            axis=1,
        )
        self._strides = strides

        add = np.zeros((self.order, self.order), dtype=np.int64)
        for j, q in enumerate(coord_moduli):
            col = self.coords[:, j]
            add += ((col[:, None] + col[None, :]) % q) * strides[j]
        self.add_table: IntArray = add
        self.neg_table: IntArray = (
            ((-self.coords) % np.asarray(coord_moduli)) @ strides
        ).astype(np.int64)

        if kind == DomainKind.abelian_product:
            self.exponent = math.lcm(*coord_moduli)
            mul = np.zeros_like(add)
            for j, q in enumerate(coord_moduli):
                col = self.coords[:, j]
                mul += ((col[:, None] * col[None, :]) % q) * strides[j]
            self.mul_table: IntArray = mul
            weights = np.asarray([self.exponent // q for q in coord_moduli], dtype=np.int64)
            self.phase_table: IntArray = (self.coords @ weights) % self.exponent
            self.inv_table: IntArray | None = None
        elif kind == DomainKind.prime_field:
            self.exponent = p
            self.mul_table = (codes[:, None] * codes[None, :]) % p
            self.phase_table = codes.copy()
            self.inv_table = self._inverse_from_mul()
        else:
            self.exponent = p
            self.mul_table = self._extension_mul_table()
            self.inv_table = self._inverse_from_mul()
            self.phase_table = self._trace_table()

        for arr in (self.add_table, self.neg_table, self.mul_table, self.phase_table):
            arr.setflags(write=False)
        self.nonzero: IntArray = codes[1:]
        self.nonzero.setflags(write=False)

    # --- construction --- #

    @classmethod
    def prime(cls, p: int) -> "GroupSpec":
        """The prime field F_p."""
        if not is_prime(p):
            raise ValidationError(f"{p} is not prime")
        return cls(DomainKind.prime_field, (p,), p=p)

    @classmethod
    def gf(cls, p: int, m: int, poly: list[int] | None = None) -> "GroupSpec":
        """The extension field GF(p^m), defined by a little-endian monic irreducible ``poly``."""
        if m == 1:
            return cls.prime(p)
        if not is_prime(p):
            raise ValidationError(f"{p} is not prime")
        if m < 1 or p**m > MAX_ORDER:
            raise ValidationError(f"GF({p}^{m}) is outside the supported range")
        if poly is None:
            poly = lowest_irreducible(p, m)
        if len(poly) != m + 1 or poly[-1] != 1 or any(not 0 <= c < p for c in poly):
            raise ValidationError(f"poly must be monic of degree {m} with digits below {p}")
        if not is_irreducible(poly, p):
            raise ValidationError(f"poly {poly} is reducible over F_{p}")
        return cls(DomainKind.extension_field, (p,) * m, p=p, poly=tuple(poly))

    @classmethod
    def product(cls, moduli: list[int] | tuple[int, ...]) -> "GroupSpec":
        """The Abelian group ``Z_{m_1} x ... x Z_{m_r}`` in the declared component order."""
        if not moduli or any(q < 2 for q in moduli):
            raise ValidationError(f"component orders must be >= 2, got {list(moduli)}")
        return cls(DomainKind.abelian_product, tuple(moduli))

    @staticmethod
    def parse(text: str) -> "GroupSpec":
        """Parse ``p=<prime>``, ``gf p=<prime> m=<deg> [poly=<digits>]`` or ``zm=<m1>,...``."""
        return _parse_cached(" ".join(text.split()))

    # --- properties --- #

    @property
    def is_field(self) -> bool:
        """True for prime and extension fields."""
        return self.kind != DomainKind.abelian_product

    @property
    def moduli(self) -> tuple[int, ...]:
        """Component orders for products, ``(p,)`` for fields (the phase components)."""
        return self.coord_moduli if not self.is_field else (self.p,)

    @property
    def units(self) -> IntArray:
        """The coefficient range for β: F* for fields, G minus zero for groups."""
        return self.nonzero

    @functools.cached_property
    def factors(self) -> tuple[Factor, ...]:
        """Prime-power cyclic factors of the additive group, by decreasing prime then power."""
        found = [
            Factor(prime=q, exp=e, component=i)
            for i, m in enumerate(self.coord_moduli)
            for q, e in prime_power_factors(m)
        ]
        return tuple(sorted(found, key=lambda f: (-f.prime, -f.exp, f.component)))

    def describe(self) -> str:
        """Canonical spec string."""
        match self.kind:
            case DomainKind.prime_field:
                return f"p={self.p}"
            case DomainKind.extension_field:
                poly = "".join(_DIGITS[c] for c in self.poly)
                return f"gf p={self.p} m={len(self.coord_moduli)} poly={poly}"
            case _:
                return "zm=" + ",".join(str(q) for q in self.coord_moduli)

    def __repr__(self) -> str:
        return f"GroupSpec({self.describe()!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroupSpec) and other.describe() == self.describe()

    def __hash__(self) -> int:
        return hash(self.describe())

    # --- elements --- #

    def encode(self, value: int | tuple[int, ...]) -> int:
        """Code of a canonical element (integer, digit tuple or component tuple)."""
        coords = (value,) if isinstance(value, int) else tuple(value)
        if len(coords) != len(self.coord_moduli) or any(
            not 0 <= c < q for c, q in zip(coords, self.coord_moduli, strict=True)
        ):
            raise ValidationError(f"{value!r} is not an element of {self.describe()}")
        return int(np.dot(coords, self._strides))

    def decode(self, code: int) -> int | tuple[int, ...]:
        """Canonical form of a code."""
        if self.kind == DomainKind.prime_field:
            return int(code)
        return tuple(int(c) for c in self.coords[code])

    def parse_element(self, literal: str) -> int:
        """Parse an element literal as written in instance files."""
        literal = literal.strip()
        try:
            match self.kind:
                case DomainKind.prime_field:
                    return self.encode(int(literal))
                case DomainKind.extension_field:
                    if len(literal) != len(self.coord_moduli):
                        raise ValueError(literal)
                    return self.encode(tuple(_DIGITS.index(ch) for ch in literal.lower()))
                case _:
                    return self.encode(tuple(int(part) for part in literal.split(",")))
        except ValueError as e:
            raise ValidationError(f"bad element literal {literal!r}") from e

    def format_element(self, code: int) -> str:
        """Inverse of ``parse_element``."""
        match self.kind:
            case DomainKind.prime_field:
                return str(int(code))
            case DomainKind.extension_field:
                return "".join(_DIGITS[int(c)] for c in self.coords[code])
            case _:
                return ",".join(str(int(c)) for c in self.coords[code])

    def inverse(self, code: int) -> int:
        """Multiplicative inverse of a nonzero field element."""
        if self.inv_table is None:
            raise DomainMismatchError(f"{self.describe()} is not a field")
        if code == 0:
            raise ValidationError("zero has no inverse")
        return int(self.inv_table[code])

    def dot(self, indices: tuple[int, ...], values: tuple[int, ...], x: IntArray) -> int:
        """The inner product ``Σ values_j · x[indices_j]``."""
        acc = 0
        for i, c in zip(indices, values, strict=True):
            acc = int(self.add_table[acc, self.mul_table[c, x[i]]])
        return acc

    # --- table builders --- #

    def _inverse_from_mul(self) -> IntArray:
        inv = np.full(self.order, -1, dtype=np.int64)
        rows, cols = np.nonzero(self.mul_table == 1)
        inv[rows] = cols
        return inv

    def _extension_mul_table(self) -> IntArray:
        p, q = self.p, self.order
        poly = list(self.poly)
        m = len(poly) - 1

        def to_code(c: list[int]) -> int:
            return int(np.dot(c, self._strides))

        # Find a primitive element and build exp/log tables from it.
        for g in range(2, q):
            gc = [int(c) for c in self.coords[g]]
            exp_t = [1]
            cur = [1] + [0] * (m - 1)
            for _ in range(q - 2):
                cur = _poly_mulmod(cur, gc, poly, p)
                exp_t.append(to_code(cur))
            if len(set(exp_t)) == q - 1:
                break
        else:
            raise ValidationError(f"no primitive element in {self.describe()}")

        exps = np.asarray(exp_t, dtype=np.int64)
        logs = np.zeros(q, dtype=np.int64)
        logs[exps] = np.arange(q - 1)
        mul = exps[(logs[:, None] + logs[None, :]) % (q - 1)]
        mul[0, :] = 0
        mul[:, 0] = 0
        return mul.astype(np.int64)

    def _trace_table(self) -> IntArray:
        m = len(self.coord_moduli)
        codes = np.arange(self.order, dtype=np.int64)
        tr = codes.copy()
        frob = codes.copy()
        for _ in range(m - 1):
            power = np.ones(self.order, dtype=np.int64)
            for _ in range(self.p):
                power = self.mul_table[power, frob]
            frob = power
            tr = self.add_table[tr, frob]
        if np.any(tr >= self.p):
            raise ValidationError(f"trace left the prime subfield in {self.describe()}")
        return tr


@functools.lru_cache(maxsize=64)
def _parse_cached(text: str) -> GroupSpec:
    tokens = text.split(" ")
    fields: dict[str, str] = {}
    head = tokens[0]
    rest = tokens[1:] if head == "gf" else tokens
    for tok in rest:
        key, sep, val = tok.partition("=")
        if not sep or not val:
            raise ValidationError(f"bad domain spec token {tok!r} in {text!r}")
        fields[key] = val
    try:
        match head, sorted(fields):
            case "gf", ["m", "p"] | ["m", "p", "poly"]:
                poly = None
                if "poly" in fields:
                    poly = [_DIGITS.index(ch) for ch in fields["poly"].lower()]
                return GroupSpec.gf(int(fields["p"]), int(fields["m"]), poly)
            case "gf", _:
                raise ValidationError(f"gf needs p= and m= in {text!r}")
            case _, ["p"]:
                return GroupSpec.prime(int(fields["p"]))
            case _, ["zm"]:
                return GroupSpec.product([int(q) for q in fields["zm"].split(",")])
            case _:
                raise ValidationError(f"unknown domain spec {text!r}")
    except ValueError as e:
        raise ValidationError(f"bad domain spec {text!r}") from e
