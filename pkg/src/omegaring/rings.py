"""Coefficient domains: exact arithmetic, norms, divisibility, units and automorphisms.

Three domains are shipped: the integers, the Gaussian integers and the
polynomial rings F_p[x].  Each domain object works on plain immutable Python
payloads (``int``, a ``(re, im)`` pair, a tuple of coefficients mod p) so the
series and matrix code can run tight loops without wrapper overhead.  The
public, domain-tagged value type is :class:`RingElement`.
"""

from __future__ import annotations

import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from itertools import zip_longest
from typing import Any, Callable, Iterable, NamedTuple

from .errors import DivisionByZeroError, DomainMismatchError, NotInvertibleError, ParseError

__all__ = [
    "Automorphism",
    "Domain",
    "DomainDescriptor",
    "GaussianIntegers",
    "IntegerRing",
    "PolynomialsModP",
    "RingElement",
    "ZZ",
    "ZZI",
    "canonical_associate",
    "divides",
    "get_domain",
    "is_prime",
    "norm",
    "ring_add",
    "ring_mul",
    "sigma_power",
]


class DomainDescriptor(NamedTuple):
    name: str
    characteristic: int
    commutative: bool
    norm_is_multiplicative: bool


def is_prime(n: int) -> bool:
    """Trial division; p is expected to be small."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _round_half_even(n: int, d: int) -> int:
    # nearest integer to n/d for d > 0, ties toward the even neighbour
    q, r = divmod(n, d)
    twice = 2 * r
    if twice > d or (twice == d and q % 2 == 1):
        q += 1
    return q


class Automorphism:
    """A norm-preserving ring automorphism sigma of a domain.

    ``apply``, ``apply_inverse`` and ``power`` accept either raw payloads or
    :class:`RingElement` values and return the same kind.  Powers are reduced
    modulo ``order_hint`` when it is known and memoised per (value, exponent).
    """

    _CACHE_LIMIT = 1 << 16

    def __init__(
        self,
        name: str,
        domain: Domain,
        apply: Callable[[Any], Any],
        apply_inverse: Callable[[Any], Any],
        order_hint: int | None = None,
        power: Callable[[Any, int], Any] | None = None,
    ) -> None:
        self.name = name
        self.domain = domain
        self._apply = apply
        self._apply_inverse = apply_inverse
        self.order_hint = order_hint
        self._power = power
        self._cache: dict[tuple[Any, int], Any] = {}

    @property
    def is_identity(self) -> bool:
        return self.order_hint == 1

    def __repr__(self) -> str:
        return f"Automorphism({self.name!r} on {self.domain.name})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.name == other.name and self.domain == other.domain

    def __hash__(self) -> int:
        return hash((self.name, self.domain))

    def _wrap(self, a: Any, fn: Callable[[Any], Any]) -> Any:
        if isinstance(a, RingElement):
            if a.domain != self.domain:
                raise DomainMismatchError()
            return RingElement(self.domain, fn(a.value))
        return fn(a)

    def apply(self, a: Any) -> Any:
        return self._wrap(a, self._apply)

    def apply_inverse(self, a: Any) -> Any:
        return self._wrap(a, self._apply_inverse)

    def power(self, a: Any, i: int) -> Any:
        return self._wrap(a, lambda v: self.power_raw(v, i))

    def power_raw(self, v: Any, i: int) -> Any:
        if self.order_hint is not None:
            i %= self.order_hint
        if i == 0:
            return v
        key = (v, i)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if self._power is not None:
            out = self._power(v, i)
        else:
            step = self._apply if i > 0 else self._apply_inverse
            out = v
            for _ in range(abs(i)):
                out = step(out)
        if len(self._cache) > self._CACHE_LIMIT:
            self._cache.clear()
        self._cache[key] = out
        return out


class Domain(ABC):
    """Abstract coefficient domain.  Subclasses are frozen dataclasses."""

    name: str = "abstract"
    characteristic: int = 0
    commutative: bool = True
    norm_is_multiplicative: bool = True
    default_policy: str = ""
    policies: tuple[str, ...] = ()

    # -- arithmetic on raw payloads ---------------------------------------

    @property
    @abstractmethod
    def zero(self) -> Any: ...

    @property
    @abstractmethod
    def one(self) -> Any: ...

    @abstractmethod
    def add(self, a: Any, b: Any) -> Any: ...

    @abstractmethod
    def neg(self, a: Any) -> Any: ...

    @abstractmethod
    def mul(self, a: Any, b: Any) -> Any: ...

    def sub(self, a: Any, b: Any) -> Any:
        return self.add(a, self.neg(b))

    def dot(self, pairs: Iterable[tuple[Any, Any]]) -> Any:
        """Sum of a*b over ``pairs``; domains override this with a single-pass version."""
        acc = self.zero
        for a, b in pairs:
            acc = self.add(acc, self.mul(a, b))
        return acc

    def is_zero(self, a: Any) -> bool:
        return a == self.zero

    @abstractmethod
    def norm(self, a: Any) -> int: ...

    @abstractmethod
    def exact_quotient(self, b: Any, a: Any) -> Any | None:
        """Return q with a = b*q, or None when b does not divide a."""

    @abstractmethod
    def divmod(self, a: Any, b: Any, policy: str | None = None) -> tuple[Any, Any]:
        """Return (q, r) with a = b*q + r under the named quotient policy."""

    @abstractmethod
    def is_unit(self, a: Any) -> bool: ...

    @abstractmethod
    def unit_inverse(self, a: Any) -> Any: ...

    @abstractmethod
    def canonical_associate(self, a: Any) -> tuple[Any, Any]:
        """Return (unit, canonical) with a = unit*canonical."""

    @abstractmethod
    def parse(self, text: str) -> Any: ...

    @abstractmethod
    def format(self, a: Any) -> str: ...

    @abstractmethod
    def from_int(self, n: int) -> Any: ...

    @abstractmethod
    def automorphism(self, name: str) -> Automorphism: ...

    automorphism_names: tuple[str, ...] = ("id",)

    # -- conveniences -----------------------------------------------------

    @property
    def descriptor(self) -> DomainDescriptor:
        return DomainDescriptor(
            self.name, self.characteristic, self.commutative, self.norm_is_multiplicative
        )

    def check_policy(self, policy: str | None) -> str:
        if policy is None:
            return self.default_policy
        if policy not in self.policies:
            raise ValueError(f"policy {policy!r} not available for {self.name}")
        return policy

    def _identity(self) -> Automorphism:
        return Automorphism("id", self, lambda v: v, lambda v: v, order_hint=1)

    def coerce(self, x: Any) -> Any:
        if isinstance(x, RingElement):
            if x.domain != self:
                raise DomainMismatchError()
            return x.value
        if isinstance(x, bool):
            raise TypeError("booleans are not ring elements")
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot coerce {x!r} into {self.name}")

    def __call__(self, x: Any) -> RingElement:
        return RingElement(self, self.coerce(x))


@dataclass(frozen=True)
class IntegerRing(Domain):
    """The integers with norm |a|."""

    name = "int"
    default_policy = "floor"
    policies = ("floor", "nearest", "perturbed")

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def add(self, a: int, b: int) -> int:
        return a + b

    def sub(self, a: int, b: int) -> int:
        return a - b

    def neg(self, a: int) -> int:
        return -a

    def mul(self, a: int, b: int) -> int:
        return a * b

    def dot(self, pairs):
        return sum(a * b for a, b in pairs)

    def norm(self, a: int) -> int:
        return abs(a)

    def exact_quotient(self, b: int, a: int) -> int | None:
        if b == 0:
            raise DivisionByZeroError()
        q, r = divmod(a, b)
        return q if r == 0 else None

    def divmod(self, a: int, b: int, policy: str | None = None) -> tuple[int, int]:
        policy = self.check_policy(policy)
        if b == 0:
            raise DivisionByZeroError()
        if policy == "nearest":
            q = _round_half_even(a, b) if b > 0 else _round_half_even(-a, -b)
            return q, a - b * q
        # floor: 0 <= r < |b|
        q = a // b if b > 0 else -(a // -b)
        if policy == "perturbed":
            q += 1
        return q, a - b * q

    def is_unit(self, a: int) -> bool:
        return a in (1, -1)

    def unit_inverse(self, a: int) -> int:
        if a not in (1, -1):
            raise NotInvertibleError()
        return a

    def canonical_associate(self, a: int) -> tuple[int, int]:
        return (-1, -a) if a < 0 else (1, a)

    def parse(self, text: str) -> int:
        s = text.strip().replace(" ", "")
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        if not re.fullmatch(r"[+-]?\d+", s):
            raise ParseError(f"not an integer: {text!r}")
        return int(s)

    def format(self, a: int) -> str:
        return str(a)

    def from_int(self, n: int) -> int:
        return n

    def automorphism(self, name: str) -> Automorphism:
        if name != "id":
            raise ValueError(f"unknown automorphism {name!r} for int")
        return self._identity()


_GAUSS_REAL = re.compile(r"[+-]?\d+")
_GAUSS_IMAG = re.compile(r"([+-]?)(\d*)\*?i")
_GAUSS_FULL = re.compile(r"([+-]?\d+)([+-])(\d*)\*?i")


@dataclass(frozen=True)
class GaussianIntegers(Domain):
    """Z[i] with norm re^2 + im^2; payloads are (re, im) pairs."""

    name = "gauss"
    default_policy = "nearest"
    policies = ("nearest",)
    automorphism_names = ("id", "conj")

    @property
    def zero(self) -> tuple[int, int]:
        return (0, 0)

    @property
    def one(self) -> tuple[int, int]:
        return (1, 0)

    def add(self, a, b):
        return (a[0] + b[0], a[1] + b[1])

    def sub(self, a, b):
        return (a[0] - b[0], a[1] - b[1])

    def neg(self, a):
        return (-a[0], -a[1])

    def mul(self, a, b):
        return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])

    def dot(self, pairs):
        re = im = 0
        for (ar, ai), (br, bi) in pairs:
            re += ar * br - ai * bi
            im += ar * bi + ai * br
        return (re, im)

    @staticmethod
    def conjugate(a):
        return (a[0], -a[1])

    def norm(self, a) -> int:
        return a[0] * a[0] + a[1] * a[1]

    def exact_quotient(self, b, a):
        d = self.norm(b)
        if d == 0:
            raise DivisionByZeroError()
        n = self.mul(a, self.conjugate(b))
        if n[0] % d or n[1] % d:
            return None
        return (n[0] // d, n[1] // d)

    def divmod(self, a, b, policy: str | None = None):
        self.check_policy(policy)
        d = self.norm(b)
        if d == 0:
            raise DivisionByZeroError()
        n = self.mul(a, self.conjugate(b))
        q = (_round_half_even(n[0], d), _round_half_even(n[1], d))
        return q, self.sub(a, self.mul(b, q))

    _UNITS = ((1, 0), (0, 1), (-1, 0), (0, -1))

    def is_unit(self, a) -> bool:
        return a in self._UNITS

    def unit_inverse(self, a):
        if a not in self._UNITS:
            raise NotInvertibleError()
        return self.conjugate(a)

    def canonical_associate(self, a):
        if a == (0, 0):
            return (1, 0), (0, 0)
        for u in self._UNITS:
            c = self.mul(a, self.conjugate(u))
            if c[0] > 0 and c[1] >= 0:
                return u, c
        raise AssertionError("unreachable: every nonzero class meets the first quadrant")

    def parse(self, text: str):
        s = text.strip().replace(" ", "")
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        if _GAUSS_REAL.fullmatch(s):
            return (int(s), 0)
        m = _GAUSS_IMAG.fullmatch(s)
        if m:
            mag = int(m.group(2)) if m.group(2) else 1
            return (0, -mag if m.group(1) == "-" else mag)
        m = _GAUSS_FULL.fullmatch(s)
        if m:
            mag = int(m.group(3)) if m.group(3) else 1
            return (int(m.group(1)), -mag if m.group(2) == "-" else mag)
        raise ParseError(f"not a Gaussian integer: {text!r}")

    def format(self, a) -> str:
        re_, im = a
        if im == 0:
            return str(re_)
        mag = "" if abs(im) == 1 else str(abs(im))
        if re_ == 0:
            return ("-" if im < 0 else "") + mag + "i"
        return f"{re_}{'-' if im < 0 else '+'}{mag}i"

    def from_int(self, n: int):
        return (n, 0)

    def automorphism(self, name: str) -> Automorphism:
        if name == "id":
            return self._identity()
        if name == "conj":
            return Automorphism("conj", self, self.conjugate, self.conjugate, order_hint=2)
        raise ValueError(f"unknown automorphism {name!r} for gauss")


_POLY_TERM = re.compile(r"(\d*)\*?(x(?:\^(\d+))?)?")


@dataclass(frozen=True)
class PolynomialsModP(Domain):
    """F_p[x] with norm 2**deg.  Payloads are coefficient tuples, lowest degree first."""

    p: int = 5

    default_policy = "poly-rem"
    policies = ("poly-rem",)
    automorphism_names = ("id", "shift")

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def name(self) -> str:  # type: ignore[override]
        return f"polyfp:{self.p}"

    @property
    def characteristic(self) -> int:  # type: ignore[override]
        return self.p

    @property
    def zero(self) -> tuple[int, ...]:
        return ()

    @property
    def one(self) -> tuple[int, ...]:
        return (1,)

    @staticmethod
    def _trim(c: list[int]) -> tuple[int, ...]:
        while c and c[-1] == 0:
            c.pop()
        return tuple(c)

    def add(self, a, b):
        p = self.p
        return self._trim([(x + y) % p for x, y in zip_longest(a, b, fillvalue=0)])

    def sub(self, a, b):
        p = self.p
        return self._trim([(x - y) % p for x, y in zip_longest(a, b, fillvalue=0)])

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        if not a or not b:
            return ()
        p = self.p
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return self._trim([c % p for c in out])

    def dot(self, pairs):
        out: list[int] = []
        for a, b in pairs:
            if not a or not b:
                continue
            need = len(a) + len(b) - 1
            if len(out) < need:
                out.extend([0] * (need - len(out)))
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
        p = self.p
        return self._trim([c % p for c in out])

    def scale(self, c: int, a):
        p = self.p
        c %= p
        return tuple(x * c % p for x in a) if c else ()

    def norm(self, a) -> int:
        return 0 if not a else 1 << (len(a) - 1)

    def _polydivmod(self, a, b):
        if not b:
            raise DivisionByZeroError()
        p = self.p
        inv = pow(b[-1], -1, p)
        r = list(a)
        db = len(b) - 1
        q = [0] * max(len(a) - db, 0)
        for k in range(len(a) - 1 - db, -1, -1):
            c = r[k + db] * inv % p
            if c:
                q[k] = c
                for j, y in enumerate(b):
                    r[k + j] = (r[k + j] - c * y) % p
        return self._trim(q), self._trim(r[:db] if db else [])

    def exact_quotient(self, b, a):
        q, r = self._polydivmod(a, b)
        return q if not r else None

    def divmod(self, a, b, policy: str | None = None):
        self.check_policy(policy)
        return self._polydivmod(a, b)

    def is_unit(self, a) -> bool:
        return len(a) == 1

    def unit_inverse(self, a):
        if len(a) != 1:
            raise NotInvertibleError()
        return (pow(a[0], -1, self.p),)

    def canonical_associate(self, a):
        if not a:
            return (1,), ()
        lc = a[-1]
        return (lc,), self.scale(pow(lc, -1, self.p), a)

    def shift(self, a, s: int):
        """Substitute x -> x + s."""
        p = self.p
        s %= p
        if s == 0 or len(a) < 2:
            return a
        out: list[int] = []
        for c in reversed(a):
            # out = out*(x + s) + c
            nxt = [0] * (len(out) + 1)
            for i, y in enumerate(out):
                nxt[i + 1] += y
                nxt[i] += s * y
            nxt[0] += c
            out = [v % p for v in nxt]
        return self._trim(out)

    def parse(self, text: str):
        s = text.strip().replace(" ", "")
        while s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        if not s:
            raise ParseError("empty polynomial")
        terms = re.findall(r"[+-]?[^+-]+", s)
        if "".join(terms) != s:
            raise ParseError(f"not a polynomial over F_{self.p}: {text!r}")
        acc: dict[int, int] = {}
        for term in terms:
            sign = -1 if term[0] == "-" else 1
            body = term.lstrip("+-")
            m = _POLY_TERM.fullmatch(body)
            if not m or not body or (not m.group(1) and not m.group(2)):
                raise ParseError(f"bad polynomial term {term!r}")
            coef = int(m.group(1)) if m.group(1) else 1
            deg = 0 if not m.group(2) else (int(m.group(3)) if m.group(3) else 1)
            acc[deg] = acc.get(deg, 0) + sign * coef
        top = max(acc)
        return self._trim([acc.get(k, 0) % self.p for k in range(top + 1)])

    def format(self, a) -> str:
        if not a:
            return "0"
        parts = []
        for k in range(len(a) - 1, -1, -1):
            c = a[k]
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
                continue
            mono = "x" if k == 1 else f"x^{k}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(parts)

    def from_int(self, n: int):
        n %= self.p
        return (n,) if n else ()

    def automorphism(self, name: str) -> Automorphism:
        if name == "id":
            return self._identity()
        if name == "shift":
            return Automorphism(
                "shift",
                self,
                lambda a: self.shift(a, 1),
                lambda a: self.shift(a, -1),
                order_hint=self.p,
                power=self.shift,
            )
        raise ValueError(f"unknown automorphism {name!r} for {self.name}")


ZZ = IntegerRing()
ZZI = GaussianIntegers()


def get_domain(spec: str) -> Domain:
    """Look up a base domain by its spec string: ``int``, ``gauss``, ``polyfp:P``."""
    s = spec.strip()
    if s == "int":
        return ZZ
    if s == "gauss":
        return ZZI
    m = re.fullmatch(r"polyfp[:(](\d+)\)?", s)
    if m:
        p = int(m.group(1))
        if not is_prime(p):
            raise ParseError(f"{p} is not prime")
        return PolynomialsModP(p)
    raise ParseError(f"unknown domain {spec!r}")


@dataclass(frozen=True, slots=True)
class RingElement:
    """An exact element of a registered domain."""

    domain: Domain
    value: Any

    def _other(self, other: Any) -> Any:
        if isinstance(other, RingElement):
            if other.domain != self.domain:
                raise DomainMismatchError()
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.domain.from_int(other)
        return NotImplemented

    def __add__(self, other: Any) -> RingElement:
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return RingElement(self.domain, self.domain.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other: Any) -> RingElement:
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return RingElement(self.domain, self.domain.sub(self.value, o))

    def __rsub__(self, other: Any) -> RingElement:
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return RingElement(self.domain, self.domain.sub(o, self.value))

    def __mul__(self, other: Any) -> RingElement:
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return RingElement(self.domain, self.domain.mul(self.value, o))

    def __rmul__(self, other: Any) -> RingElement:
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return RingElement(self.domain, self.domain.mul(o, self.value))

    def __neg__(self) -> RingElement:
        return RingElement(self.domain, self.domain.neg(self.value))

    def is_zero(self) -> bool:
        return self.domain.is_zero(self.value)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def norm(self) -> int:
        return self.domain.norm(self.value)

    def is_unit(self) -> bool:
        return self.domain.is_unit(self.value)

    def __str__(self) -> str:
        return self.domain.format(self.value)

    def __repr__(self) -> str:
        return f"{self.domain.name}({self.domain.format(self.value)!r})"


def _same(a: RingElement, b: RingElement) -> Domain:
    if a.domain != b.domain:
        raise DomainMismatchError()
    return a.domain


def ring_add(a: RingElement, b: RingElement) -> RingElement:
    d = _same(a, b)
    return RingElement(d, d.add(a.value, b.value))


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    d = _same(a, b)
    return RingElement(d, d.mul(a.value, b.value))


def norm(a: RingElement) -> int:
    return a.domain.norm(a.value)


def divides(b: RingElement, a: RingElement) -> tuple[bool, RingElement | None]:
    """Test b | a.  Returns ``(True, q)`` with a = b*q, or ``(False, None)``."""
    d = _same(a, b)
    if d.is_zero(b.value):
        raise DivisionByZeroError()
    q = d.exact_quotient(b.value, a.value)
    if q is None:
        return False, None
    return True, RingElement(d, q)


def sigma_power(aut: Automorphism, a: RingElement, i: int) -> RingElement:
    return aut.power(a, i)


def canonical_associate(a: RingElement) -> tuple[RingElement, RingElement]:
    d = a.domain
    u, c = d.canonical_associate(a.value)
    return RingElement(d, u), RingElement(d, c)
