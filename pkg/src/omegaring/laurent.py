"""Truncated skew Laurent series R[[x, x^-1; sigma]].

Multiplication obeys x^i * a = sigma^i(a) * x^i.  A nonzero series is stored
as its order h (lowest exponent with a nonzero coefficient) and a window of
coefficients a_h, ..., a_{h+N-1}; everything from x^{h+N} on is unknown.  Two
zero states are kept apart: the exact zero, and O(x^t), a series whose
coefficients are known to vanish below x^t and are unknown above.

Sums keep the smaller absolute precision, products keep the smaller relative
precision, so cancellation of leading terms shortens the window.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Iterable

from .division import DEFAULT_MAX_STAGES, DivisionChain, division_chain
from .errors import (
    ChainBoundError,
    DivisionByZeroError,
    DomainMismatchError,
    NotInvertibleError,
    ParseError,
)
from .rings import Automorphism, Domain, GaussianIntegers, IntegerRing, RingElement

__all__ = [
    "DEFAULT_PRECISION",
    "LiftStep",
    "LiftedChain",
    "SeriesDivision",
    "SkewLaurentRing",
    "SkewLaurentSeries",
    "lift_chain",
    "phi_x",
    "psi",
    "psi_left",
    "series_divide_left",
    "series_divide_right",
    "series_invert_unit",
    "series_mul",
]

DEFAULT_PRECISION = 16


class SkewLaurentRing:
    """Parent object: base domain, automorphism and default window length."""

    def __init__(
        self, domain: Domain, sigma: Automorphism | str = "id", precision: int = DEFAULT_PRECISION
    ) -> None:
        if isinstance(sigma, str):
            sigma = domain.automorphism(sigma)
        if sigma.domain != domain:
            raise DomainMismatchError()
        if precision < 1:
            raise ValueError("precision must be positive")
        self.domain = domain
        self.sigma = sigma
        self.precision = precision
        self._exact_zero = SkewLaurentSeries(self, None, (), None)

    def __repr__(self) -> str:
        return f"SkewLaurentRing({self.domain.name}, {self.sigma.name}, {self.precision})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SkewLaurentRing):
            return NotImplemented
        return self.domain == other.domain and self.sigma == other.sigma

    def __hash__(self) -> int:
        return hash((self.domain, self.sigma))

    @property
    def spec(self) -> str:
        return f"laurent:{self.domain.name}:{self.sigma.name}:{self.precision}"

    # -- construction -------------------------------------------------------

    @property
    def zero(self) -> SkewLaurentSeries:
        return self._exact_zero

    def zero_to(self, top: int) -> SkewLaurentSeries:
        """O(x^top): zero as far as anything is known."""
        return SkewLaurentSeries(self, None, (), top)

    def _make(self, start: int, coeffs: list, top: int) -> SkewLaurentSeries:
        # coeffs[i] sits at exponent start + i; drop what lies at or above top
        d = self.domain
        keep = top - start
        if keep < len(coeffs):
            coeffs = coeffs[: max(keep, 0)]
        i = 0
        n = len(coeffs)
        while i < n and d.is_zero(coeffs[i]):
            i += 1
        if i == n:
            return SkewLaurentSeries(self, None, (), top)
        h = start + i
        window = tuple(coeffs[i:])
        if h + len(window) < top:
            window = window + (d.zero,) * (top - h - len(window))
        return SkewLaurentSeries(self, h, window, top)

    def from_terms(self, terms: dict[int, Any], prec: int | None = None, top: int | None = None):
        """Series from {exponent: raw coefficient}.

        The window has ``prec`` coefficients from the order on, unless an
        absolute bound ``top`` is given.  No nonzero terms and no ``top``
        gives the exact zero.
        """
        d = self.domain
        live = {e: c for e, c in terms.items() if not d.is_zero(c)}
        if not live:
            return self._exact_zero if top is None else self.zero_to(top)
        h = min(live)
        if top is None:
            top = h + (self.precision if prec is None else prec)
        if max(live) >= top:
            raise ValueError("term beyond the precision window")
        return self._make(h, [live.get(e, d.zero) for e in range(h, top)], top)

    def monomial(self, c: Any, k: int, prec: int | None = None) -> SkewLaurentSeries:
        c = self.domain.coerce(c) if not _is_raw(self.domain, c) else c
        return self.from_terms({k: c}, prec)

    def one(self, prec: int | None = None) -> SkewLaurentSeries:
        return self.monomial(self.domain.one, 0, prec)

    def gen(self, prec: int | None = None) -> SkewLaurentSeries:
        return self.monomial(self.domain.one, 1, prec)

    def constant(self, c: Any, prec: int | None = None) -> SkewLaurentSeries:
        return self.monomial(c, 0, prec)

    def coerce(self, x: Any) -> SkewLaurentSeries:
        if isinstance(x, SkewLaurentSeries):
            if x.ring != self:
                raise DomainMismatchError()
            return x
        if isinstance(x, str):
            return self.parse(x)
        return self.constant(x)

    def __call__(self, x: Any) -> SkewLaurentSeries:
        return self.coerce(x)

    # -- arithmetic -------------------------------------------------------

    def _check(self, f: SkewLaurentSeries) -> None:
        if f.ring != self:
            raise DomainMismatchError()

    def add(self, f: SkewLaurentSeries, g: SkewLaurentSeries) -> SkewLaurentSeries:
        return self._combine(f, g, negate=False)

    def neg(self, f: SkewLaurentSeries) -> SkewLaurentSeries:
        if not f.coeffs:
            return f
        d = self.domain
        return SkewLaurentSeries(self, f.h, tuple(d.neg(c) for c in f.coeffs), f.top)

    def sub(self, f: SkewLaurentSeries, g: SkewLaurentSeries) -> SkewLaurentSeries:
        return self._combine(f, g, negate=True)

    def _combine(self, f: SkewLaurentSeries, g: SkewLaurentSeries, negate: bool) -> SkewLaurentSeries:
        self._check(f)
        self._check(g)
        if g.is_exact_zero():
            return f
        if f.is_exact_zero():
            return self.neg(g) if negate else g
        top = min(f.top, g.top)
        lows = [s.h for s in (f, g) if s.coeffs]
        if not lows or min(lows) >= top:
            return self.zero_to(top)
        start = min(lows)
        d = self.domain
        n = top - start
        acc = [d.zero] * n
        if f.coeffs:
            off = f.h - start
            for i, c in enumerate(f.coeffs[: max(n - off, 0)]):
                acc[off + i] = c
        if g.coeffs:
            off = g.h - start
            combine = d.sub if negate else d.add
            for i, c in enumerate(g.coeffs[: max(n - off, 0)]):
                if d.is_zero(c):
                    continue
                e = off + i
                acc[e] = combine(acc[e], c)
        return self._make(start, acc, top)

    def mul(self, f: SkewLaurentSeries, g: SkewLaurentSeries) -> SkewLaurentSeries:
        """Twisted product: c_m = sum_{i+j=m} a_i sigma^i(b_j)."""
        self._check(f)
        self._check(g)
        if f.is_exact_zero() or g.is_exact_zero():
            return self._exact_zero
        if not f.coeffs:
            return self.zero_to(f.top + (g.h if g.coeffs else g.top))
        if not g.coeffs:
            return self.zero_to(f.h + g.top)
        d = self.domain
        is_zero = d.is_zero
        n = min(len(f.coeffs), len(g.coeffs))
        nz_g = [(j, b) for j, b in enumerate(g.coeffs[:n]) if not is_zero(b)]
        twist = None if self.sigma.is_identity else self.sigma.power_raw
        pairs: list[list] = [[] for _ in range(n)]
        fh = f.h
        for i in range(n):
            a = f.coeffs[i]
            if is_zero(a):
                continue
            lim = n - i
            e = fh + i
            for j, b in nz_g:
                if j >= lim:
                    break
                pairs[i + j].append((a, b if twist is None else twist(b, e)))
        dot, dmul, dzero = d.dot, d.mul, d.zero
        acc = [dmul(*ps[0]) if len(ps) == 1 else dot(ps) if ps else dzero for ps in pairs]
        h = fh + g.h
        return self._make(h, acc, h + n)

    # -- text and JSON ----------------------------------------------------

    def _coef_text(self, c: Any) -> str:
        d = self.domain
        s = d.format(c)
        if isinstance(d, IntegerRing):
            return s
        if isinstance(d, GaussianIntegers):
            return f"({s})" if c[0] and c[1] else s
        return s if len(c) <= 1 else f"({s})"

    def format(self, f: SkewLaurentSeries) -> str:
        if f.is_exact_zero():
            return "0"
        parts: list[str] = []
        d = self.domain
        for i, c in enumerate(f.coeffs):
            if d.is_zero(c):
                continue
            e = f.h + i
            coef = self._coef_text(c)
            if e == 0:
                parts.append(coef)
                continue
            mono = "x" if e == 1 else f"x^{e}"
            if coef == "1":
                parts.append(mono)
            elif coef == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{coef}*{mono}")
        parts.append(f"O(x^{f.top})")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    _TERM = re.compile(
        r"(?:(?P<coef>\([^()]*\)|[^*x()]+)\*?)?(?P<x>x(?:\^(?P<exp>[+-]?\d+))?)?"
    )
    _BIG_O = re.compile(r"O\(x(?:\^(?P<exp>[+-]?\d+))?\)")

    @staticmethod
    def _split_terms(s: str) -> list[tuple[int, str]]:
        terms: list[tuple[int, str]] = []
        depth = 0
        sign = 1
        buf = ""
        prev = ""
        for ch in s:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            if depth == 0 and ch in "+-" and prev != "^":
                if buf:
                    terms.append((sign, buf))
                    buf = ""
                    sign = 1
                elif prev in "+-" and prev:
                    raise ParseError(f"dangling sign in {s!r}")
                if ch == "-":
                    sign = -sign
            else:
                buf += ch
            prev = ch
        if depth != 0:
            raise ParseError(f"unbalanced parentheses in {s!r}")
        if not buf:
            raise ParseError(f"empty term in {s!r}")
        terms.append((sign, buf))
        return terms

    def parse(self, text: str, prec: int | None = None) -> SkewLaurentSeries:
        """Parse ``"(1+2i)*x^-2 + 3*x^0 + i*x^5 + O(x^9)"``-style text.

        Without an O-term the window holds ``prec`` (default: the ring's
        precision) coefficients from the order on.  Polynomial coefficients
        containing x must be parenthesised.
        """
        s = text.strip().replace(" ", "")
        if not s:
            raise ParseError("empty series")
        d = self.domain
        terms: dict[int, Any] = {}
        top = None
        for sign, body in self._split_terms(s):
            m = self._BIG_O.fullmatch(body)
            if m:
                if sign != 1 or top is not None:
                    raise ParseError(f"bad O-term in {text!r}")
                top = int(m.group("exp")) if m.group("exp") else 1
                continue
            m = self._TERM.fullmatch(body)
            if not m or not (m.group("coef") or m.group("x")):
                raise ParseError(f"bad series term {body!r}")
            coef = d.parse(m.group("coef")) if m.group("coef") else d.one
            if m.group("x"):
                exp = int(m.group("exp")) if m.group("exp") else 1
            else:
                exp = 0
            if sign < 0:
                coef = d.neg(coef)
            terms[exp] = d.add(terms.get(exp, d.zero), coef)
        try:
            return self.from_terms(terms, prec=prec, top=top)
        except ValueError as exc:
            raise ParseError(str(exc)) from None

    def to_json(self, f: SkewLaurentSeries) -> dict[str, Any]:
        if f.is_exact_zero():
            return {"h": None, "coeffs": [], "prec": None}
        if not f.coeffs:
            return {"h": f.top, "coeffs": [], "prec": 0}
        return {"h": f.h, "coeffs": [self.domain.format(c) for c in f.coeffs], "prec": len(f.coeffs)}

    def from_json(self, data: dict[str, Any]) -> SkewLaurentSeries:
        if data["h"] is None:
            return self._exact_zero
        if not data["coeffs"]:
            return self.zero_to(data["h"])
        coeffs = [self.domain.parse(c) for c in data["coeffs"]]
        if len(coeffs) != data["prec"]:
            raise ParseError("window length does not match prec")
        h = data["h"]
        out = self._make(h, coeffs, h + len(coeffs))
        if out.h != h:
            raise ParseError("leading coefficient must be nonzero")
        return out


def _is_raw(domain: Domain, c: Any) -> bool:
    return not isinstance(c, (RingElement, str)) and not (
        isinstance(c, int) and not isinstance(domain, IntegerRing)
    )


class SkewLaurentSeries:
    """Immutable truncated skew Laurent series; build through a :class:`SkewLaurentRing`."""

    __slots__ = ("ring", "h", "coeffs", "top")

    def __init__(self, ring: SkewLaurentRing, h: int | None, coeffs: tuple, top: int | None) -> None:
        self.ring = ring
        self.h = h
        self.coeffs = coeffs
        self.top = top

    # -- state --------------------------------------------------------------

    @property
    def order(self) -> int | None:
        """Lowest exponent with a nonzero coefficient; None for either zero state."""
        return self.h

    @property
    def prec(self) -> int | None:
        """Relative precision: known coefficients from the order on (None for exact zero)."""
        if self.top is None:
            return None
        return len(self.coeffs)

    def is_exact_zero(self) -> bool:
        return self.top is None

    def is_zero(self) -> bool:
        """Exactly zero or zero to precision."""
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coefficient(self, e: int) -> RingElement:
        d = self.ring.domain
        if self.top is not None and e >= self.top:
            raise IndexError(f"x^{e} lies outside the known window")
        if not self.coeffs or e < self.h:
            return RingElement(d, d.zero)
        return RingElement(d, self.coeffs[e - self.h])

    def truncated(self, n: int) -> SkewLaurentSeries:
        """Keep at most n coefficients from the order on."""
        if not self.coeffs or len(self.coeffs) <= n:
            return self
        return SkewLaurentSeries(self.ring, self.h, self.coeffs[:n], self.h + n)

    def agrees_with(self, other: SkewLaurentSeries) -> bool:
        return (self - other).is_zero()

    # -- operators ----------------------------------------------------------

    def _lift(self, other: Any) -> SkewLaurentSeries:
        if isinstance(other, SkewLaurentSeries):
            return other
        c = self.ring.domain.coerce(other)
        prec = self.ring.precision
        if self.top is not None:
            prec = max(prec, self.top)
        return self.ring.from_terms({0: c}, prec=prec)

    def __add__(self, other: Any) -> SkewLaurentSeries:
        return self.ring.add(self, self._lift(other))

    def __radd__(self, other: Any) -> SkewLaurentSeries:
        return self.ring.add(self._lift(other), self)

    def __sub__(self, other: Any) -> SkewLaurentSeries:
        return self.ring.sub(self, self._lift(other))

    def __rsub__(self, other: Any) -> SkewLaurentSeries:
        return self.ring.sub(self._lift(other), self)

    def __neg__(self) -> SkewLaurentSeries:
        return self.ring.neg(self)

    def __mul__(self, other: Any) -> SkewLaurentSeries:
        return self.ring.mul(self, self._lift(other))

    def __rmul__(self, other: Any) -> SkewLaurentSeries:
        return self.ring.mul(self._lift(other), self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SkewLaurentSeries):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.h == other.h
            and self.top == other.top
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.h, self.top, self.coeffs))

    def __str__(self) -> str:
        return self.ring.format(self)

    def __repr__(self) -> str:
        return f"SkewLaurentSeries({self.ring.format(self)!r})"


# -- leading terms and norms ------------------------------------------------


def psi(f: SkewLaurentSeries) -> RingElement:
    """Lowest nonzero coefficient a_h (zero for a zero series)."""
    d = f.ring.domain
    return RingElement(d, f.coeffs[0] if f.coeffs else d.zero)


def psi_left(f: SkewLaurentSeries) -> RingElement:
    """Leading coefficient with x written on the left: f = x^h * sigma^-h(a_h) + ..."""
    d = f.ring.domain
    if not f.coeffs:
        return RingElement(d, d.zero)
    return RingElement(d, f.ring.sigma.power_raw(f.coeffs[0], -f.h))


def phi_x(f: SkewLaurentSeries) -> int:
    return f.ring.domain.norm(f.coeffs[0]) if f.coeffs else 0


def _lead_raw(f: SkewLaurentSeries, side: str) -> Any:
    c = f.coeffs[0]
    return c if side == "right" else f.ring.sigma.power_raw(c, -f.h)


def series_mul(f: SkewLaurentSeries, g: SkewLaurentSeries) -> SkewLaurentSeries:
    return f.ring.mul(f, g)


# -- division ----------------------------------------------------------------


@dataclass(frozen=True)
class SeriesDivision:
    """Outcome of f = g*u + v (right) or f = u*g + v (left).

    ``exact``: v vanishes on the whole window.  ``certified_nondivisible``:
    the leading coefficient of v is not a multiple of that of g (for left
    division both are read with x on the left, see :func:`psi_left`).
    """

    quotient: SkewLaurentSeries
    remainder: SkewLaurentSeries
    exact: bool
    certified_nondivisible: bool
    side: str = "right"

    def residual(self, f: SkewLaurentSeries, g: SkewLaurentSeries) -> SkewLaurentSeries:
        prod = g * self.quotient if self.side == "right" else self.quotient * g
        return f - prod - self.remainder


def _divide(
    f: SkewLaurentSeries,
    g: SkewLaurentSeries,
    side: str,
    policy: str | None = None,
    first_quotient: Any = None,
    track: bool = False,
) -> tuple[SkewLaurentSeries, SkewLaurentSeries, bool, bool]:
    """Leading-term elimination loop shared by division and chain lifting.

    Round one divides the leading coefficient with remainder (or uses
    ``first_quotient``); later rounds run only while the new leading
    coefficient is an exact multiple of lead(g).  With ``track`` the loop
    continues past round one only if that round cancelled the leading term.
    Returns (u, v, exact, certified_nondivisible).
    """
    ring = g.ring
    if f.ring != ring:
        raise DomainMismatchError()
    if side not in ("right", "left"):
        raise ValueError(f"side must be 'right' or 'left', not {side!r}")
    if g.is_zero():
        raise DivisionByZeroError()
    if f.is_zero():
        return ring.zero, f, True, False
    d = ring.domain
    pw = ring.sigma.power_raw
    is_zero, sub, mul = d.is_zero, d.sub, d.mul
    n = min(len(f.coeffs), len(g.coeffs))
    k = g.h
    gc = g.coeffs[:n]
    lead_g = _lead_raw(g, side)
    # the remainder lives on the fixed window [f.h, f.h + n); buf[i] is at x^(f.h + i)
    base = f.h
    buf = list(f.coeffs[:n])
    terms: dict[int, Any] = {}
    pos = 0
    first = True
    while True:
        l = base + pos
        w = buf[pos] if side == "right" else pw(buf[pos], -l)
        if first:
            if first_quotient is not None:
                q = first_quotient
            else:
                q, _r = d.divmod(w, lead_g, policy)
        else:
            q = d.exact_quotient(lead_g, w)
        m = l - k
        if not is_zero(q):
            if side == "right":
                # g * c x^m with c = sigma^-k(q): the x^(l+i) term is g_i sigma^(k+i)(c)
                c = pw(q, -k)
                for i in range(n - pos):
                    if not is_zero(gc[i]):
                        buf[pos + i] = sub(buf[pos + i], mul(gc[i], pw(c, k + i)))
            else:
                # c x^m * g with c = sigma^l(q): the x^(l+j) term is c sigma^m(g_j)
                c = pw(q, l)
                for j in range(n - pos):
                    if not is_zero(gc[j]):
                        buf[pos + j] = sub(buf[pos + j], mul(c, pw(gc[j], m)))
            terms[m] = d.add(terms.get(m, d.zero), c)
        old = pos
        while pos < n and is_zero(buf[pos]):
            pos += 1
        if pos == n:
            exact, cert = True, False
            break
        cancelled = pos > old
        if not first and not cancelled:  # pragma: no cover - an exact quotient always cancels
            raise AssertionError("elimination failed to shorten the window")
        first = False
        lead_v = buf[pos] if side == "right" else pw(buf[pos], -(base + pos))
        if d.exact_quotient(lead_g, lead_v) is None:
            exact, cert = False, True
            break
        if track and not cancelled:
            exact, cert = False, False
            break
    v = ring._make(base, buf, base + n)
    if terms:
        u = ring.from_terms(terms, top=base - k + n)
    else:
        u = ring.zero
    return u, v, exact, cert


def series_divide_right(
    f: SkewLaurentSeries, g: SkewLaurentSeries, policy: str | None = None
) -> SeriesDivision:
    """f = g*u + v with v = 0 to precision or psi(g) not dividing psi(v)."""
    u, v, exact, cert = _divide(f, g, "right", policy)
    return SeriesDivision(u, v, exact, cert, "right")


def series_divide_left(
    f: SkewLaurentSeries, g: SkewLaurentSeries, policy: str | None = None
) -> SeriesDivision:
    """f = u*g + v, the mirror image of :func:`series_divide_right`."""
    u, v, exact, cert = _divide(f, g, "left", policy)
    return SeriesDivision(u, v, exact, cert, "left")


def series_invert_unit(g: SkewLaurentSeries) -> SkewLaurentSeries:
    """Two-sided inverse of a series whose leading coefficient is a unit."""
    ring = g.ring
    if g.is_zero() or not ring.domain.is_unit(g.coeffs[0]):
        raise NotInvertibleError()
    u, _v, exact, _cert = _divide(ring.one(prec=len(g.coeffs)), g, "right")
    assert exact
    return u


# -- chain lifting ----------------------------------------------------------


@dataclass(frozen=True)
class LiftStep:
    """dividend = divisor*quotient + remainder (right) or quotient*divisor + remainder (left)."""

    dividend: SkewLaurentSeries
    divisor: SkewLaurentSeries
    quotient: SkewLaurentSeries
    remainder: SkewLaurentSeries
    base_quotient: RingElement | None = None
    base_remainder: RingElement | None = None

    def residual(self, side: str = "right") -> SkewLaurentSeries:
        if side == "right":
            prod = self.divisor * self.quotient
        else:
            prod = self.quotient * self.divisor
        return self.dividend - prod - self.remainder

    def window_top(self) -> int:
        """Absolute precision up to which the step must reconstruct."""
        a, b = self.dividend, self.divisor
        if not a.coeffs:
            return a.top
        return a.h + min(len(a.coeffs), len(b.coeffs))


@dataclass(frozen=True)
class LiftedChain:
    """A k-stage division chain in the series ring.

    Step 1 is f = g*u_1 + v_1, step 2 is g = v_1*u_2 + v_2, and step i
    divides v_{i-2} by v_{i-1}.  ``base_chain`` is the chain in the base
    domain whose quotients drove the corrections, when one was needed.
    """

    f: SkewLaurentSeries
    g: SkewLaurentSeries
    steps: tuple[LiftStep, ...]
    side: str = "right"
    base_chain: DivisionChain | None = None

    @property
    def stages(self) -> int:
        return len(self.steps)

    @property
    def final(self) -> SkewLaurentSeries:
        return self.steps[-1].remainder

    @property
    def final_base_remainder(self) -> RingElement | None:
        return self.steps[-1].base_remainder

    def accepted(self) -> bool:
        v = self.final
        return v.is_zero() or phi_x(v) < phi_x(self.g)

    def verify(self) -> list[str]:
        """Return a list of problems; empty when every step reconstructs and the chain is accepted."""
        problems = []
        for i, step in enumerate(self.steps, 1):
            res = step.residual(self.side)
            if not res.is_zero():
                problems.append(f"step {i}: residual nonzero")
            elif res.top is not None and res.top < step.window_top():
                problems.append(f"step {i}: reconstructs only below x^{res.top}")
        chain = [self.f, self.g] + [s.remainder for s in self.steps]
        for i, step in enumerate(self.steps):
            if step.dividend != chain[i] or step.divisor != chain[i + 1]:
                problems.append(f"step {i + 1}: operands out of sequence")
        if not self.accepted():
            problems.append("final remainder not accepted")
        return problems


def lift_chain(
    f: SkewLaurentSeries,
    g: SkewLaurentSeries,
    policy: str | None = None,
    max_stages: int = DEFAULT_MAX_STAGES,
    side: str = "right",
) -> LiftedChain:
    """Division chain in the series ring ending with phi_x(v_k) < phi_x(g) or v_k = 0.

    The first stage is the leading-term division of f by g.  If its
    remainder is still too large, a base chain on the leading coefficients
    is built and each base step becomes one series step whose correction
    c*x^e solves sigma^(order of divisor)(c) = q.  When a step cancels its
    leading term outright, elimination continues on the next coefficient;
    once the series remainders stop mirroring the base chain, further stages
    use fresh divisions with the domain's default policy.
    """
    if g.is_zero():
        raise DivisionByZeroError()
    ring = g.ring
    d = ring.domain
    bound = phi_x(g)

    def accept(v: SkewLaurentSeries) -> bool:
        return v.is_zero() or phi_x(v) < bound

    u, v, _exact, _cert = _divide(f, g, side, policy)
    steps = [LiftStep(f, g, u, v)]
    if accept(v):
        return LiftedChain(f, g, tuple(steps), side)

    base = division_chain(
        RingElement(d, _lead_raw(v, side)),
        RingElement(d, _lead_raw(g, side)),
        policy,
        max_stages,
        stop="accept",
    )
    bq, br = base.steps[0].quotient, base.steps[0].remainder
    u1, v1, _, _ = _divide(v, g, side, first_quotient=bq.value, track=True)
    steps[0] = LiftStep(f, g, u + u1, v1, bq, br)
    tracking = not v1.is_zero() and _lead_raw(v1, side) == br.value
    prev, cur = g, v1
    idx = 1
    while not accept(cur):
        if len(steps) >= max_stages:
            raise ChainBoundError()
        if tracking and idx < base.stages:
            bq, br = base.steps[idx].quotient, base.steps[idx].remainder
            q = bq.value
        else:
            bq = br = None
            q = None
            tracking = False
        ui, vi, _, _ = _divide(prev, cur, side, first_quotient=q, track=True)
        steps.append(LiftStep(prev, cur, ui, vi, bq, br))
        if tracking:
            tracking = not vi.is_zero() and _lead_raw(vi, side) == br.value
        prev, cur = cur, vi
        idx += 1
    return LiftedChain(f, g, tuple(steps), side, base)
