"""Elementary reduction of matrices to diag(e_1, ..., e_r, 0, ..., 0) with a replayable certificate.

Scalars are either elements of a base domain or skew Laurent series.  Row
operations multiply on the left and column operations on the right; with
noncommuting scalars the side of every coefficient matters:

* row ``add-multiple`` (i, j, c):     row_i <- row_i + c * row_j
* column ``add-multiple`` (i, j, c):  col_i <- col_i + col_j * c

Pivots are chosen by least norm (ties in row-major order).  Clearing the
pivot column uses left division chains, clearing the pivot row uses right
division chains; a chain of k stages becomes k add-multiple operations
alternating between the two lines involved.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any

from .division import DEFAULT_MAX_STAGES, division_chain
from .errors import AlgebraError, NotInvertibleError, ParseError, PrecisionError
from .laurent import (
    SkewLaurentRing,
    SkewLaurentSeries,
    _lead_raw,
    lift_chain,
    series_divide_left,
    series_divide_right,
    series_invert_unit,
)
from .rings import Domain, RingElement
from .ringspec import parse_ring_spec, ring_spec

__all__ = [
    "ElementaryOp",
    "MIN_PRECISION",
    "MatrixOverRing",
    "ReductionCertificate",
    "Verification",
    "apply_elementary",
    "elementary_matrix",
    "parse_matrix",
    "reduce_matrix",
    "scalars_for",
    "verify_certificate",
]

MIN_PRECISION = 4

KINDS = ("swap", "scale-by-unit", "add-multiple")
SIDES = ("row", "column")


# -- scalar adapters -----------------------------------------------------------


class BaseScalars:
    """Matrix scalars drawn from a commutative base domain."""

    commutative = True

    def __init__(self, domain: Domain) -> None:
        self.ring = domain
        self.zero = RingElement(domain, domain.zero)
        self.one = RingElement(domain, domain.one)

    def coerce(self, x: Any) -> RingElement:
        return self.ring(x)

    def is_zero(self, a: RingElement) -> bool:
        return a.is_zero()

    def is_one(self, a: RingElement) -> bool:
        return a == self.one

    def norm(self, a: RingElement) -> int:
        return a.norm()

    def is_unit(self, a: RingElement) -> bool:
        return a.is_unit()

    def unit_inverse(self, a: RingElement) -> RingElement:
        return RingElement(self.ring, self.ring.unit_inverse(a.value))

    def chain(self, a, b, side: str, max_stages: int) -> list[tuple[Any, Any]]:
        ch = division_chain(a, b, max_stages=max_stages, stop="accept")
        return [(s.quotient, s.remainder) for s in ch.steps]

    def divides(self, p, a, side: str) -> bool:
        return self.ring.exact_quotient(p.value, a.value) is not None

    def normalize(self, a):
        """(left, right) units making left*a*right canonical; None means no scaling."""
        u, _ = self.ring.canonical_associate(a.value)
        if u == self.ring.one:
            return None, None
        return RingElement(self.ring, self.ring.unit_inverse(u)), None

    def is_canonical(self, a) -> bool:
        return self.ring.canonical_associate(a.value)[0] == self.ring.one

    def agree(self, a, b) -> bool:
        return a == b

    def precision(self, a) -> int | None:
        return None

    def format(self, a) -> str:
        return str(a)

    def parse(self, text: str) -> RingElement:
        return self.ring(text)


class SeriesScalars:
    """Matrix scalars drawn from a skew Laurent series ring."""

    commutative = False

    def __init__(self, ring: SkewLaurentRing) -> None:
        self.ring = ring
        self.zero = ring.zero
        self.one = ring.one()

    def coerce(self, x: Any) -> SkewLaurentSeries:
        return self.ring.coerce(x)

    def is_zero(self, a: SkewLaurentSeries) -> bool:
        return a.is_zero()

    def is_one(self, a: SkewLaurentSeries) -> bool:
        return (a - self.one).is_zero() and not a.is_zero()

    def norm(self, a: SkewLaurentSeries) -> int:
        return self.ring.domain.norm(a.coeffs[0]) if a.coeffs else 0

    def is_unit(self, a: SkewLaurentSeries) -> bool:
        return bool(a.coeffs) and self.ring.domain.is_unit(a.coeffs[0])

    def unit_inverse(self, a: SkewLaurentSeries) -> SkewLaurentSeries:
        return series_invert_unit(a)

    def chain(self, a, b, side: str, max_stages: int) -> list[tuple[Any, Any]]:
        ch = lift_chain(a, b, max_stages=max_stages, side=side)
        return [(s.quotient, s.remainder) for s in ch.steps]

    def divides(self, p, a, side: str) -> bool:
        div = series_divide_right(a, p) if side == "right" else series_divide_left(a, p)
        return div.exact

    def lead_divides(self, p, a, side: str) -> bool:
        d = self.ring.domain
        return d.exact_quotient(_lead_raw(p, side), _lead_raw(a, side)) is not None

    def normalize(self, a):
        ring, d = self.ring, self.ring.domain
        u, _ = d.canonical_associate(a.coeffs[0])
        left = None if u == d.one else ring.constant(RingElement(d, d.unit_inverse(u)))
        right = None if a.h == 0 else ring.monomial(d.one, -a.h)
        return left, right

    def is_canonical(self, a) -> bool:
        d = self.ring.domain
        return a.h == 0 and d.canonical_associate(a.coeffs[0])[0] == d.one

    def agree(self, a, b) -> bool:
        return (a - b).is_zero()

    def precision(self, a) -> int | None:
        return a.prec

    def format(self, a) -> str:
        return str(a)

    def parse(self, text: str) -> SkewLaurentSeries:
        return self.ring.parse(text)


def scalars_for(ring: Domain | SkewLaurentRing) -> BaseScalars | SeriesScalars:
    if isinstance(ring, SkewLaurentRing):
        return SeriesScalars(ring)
    return BaseScalars(ring)


# -- matrices and operations ---------------------------------------------------


@dataclass(frozen=True)
class MatrixOverRing:
    ring: Domain | SkewLaurentRing
    entries: tuple[tuple[Any, ...], ...]

    def __post_init__(self) -> None:
        if not self.entries or not self.entries[0]:
            raise ValueError("matrix must be nonempty")
        width = len(self.entries[0])
        if any(len(r) != width for r in self.entries):
            raise ValueError("matrix must be rectangular")

    @classmethod
    def from_rows(cls, ring, rows) -> MatrixOverRing:
        s = scalars_for(ring)
        return cls(ring, tuple(tuple(s.coerce(x) for x in r) for r in rows))

    @classmethod
    def identity(cls, ring, n: int) -> MatrixOverRing:
        s = scalars_for(ring)
        return cls(ring, tuple(tuple(s.one if i == j else s.zero for j in range(n)) for i in range(n)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def scalars(self):
        return scalars_for(self.ring)

    def __getitem__(self, ij: tuple[int, int]) -> Any:
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: MatrixOverRing) -> MatrixOverRing:
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        s = self.scalars
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = s.zero
                for k in range(self.cols):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if s.is_zero(a) and _is_exact_zero(a) or s.is_zero(b) and _is_exact_zero(b):
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return MatrixOverRing(self.ring, tuple(out))

    def to_json(self) -> dict[str, Any]:
        s = self.scalars
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[s.format(x) for x in r] for r in self.entries],
        }

    @classmethod
    def from_json(cls, ring, data: dict[str, Any]) -> MatrixOverRing:
        s = scalars_for(ring)
        entries = tuple(tuple(s.parse(x) for x in r) for r in data["entries"])
        m = cls(ring, entries)
        if m.rows != data.get("rows", m.rows) or m.cols != data.get("cols", m.cols):
            raise ParseError("rows/cols do not match entries")
        return m


def parse_matrix(ring, text: str) -> MatrixOverRing:
    """Matrix from JSON ``{"rows", "cols", "entries"}``, a JSON list of rows, or CSV of element text."""
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty matrix input")
    if stripped[0] in "{[":
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad matrix JSON: {exc.msg}") from None
        if isinstance(data, list):
            data = {"entries": data}
        if not isinstance(data, dict) or "entries" not in data:
            raise ParseError("matrix JSON needs an 'entries' list")
        rows = data["entries"]
    else:
        rows = [r for r in csv.reader(io.StringIO(stripped), skipinitialspace=True) if r]
        data = {}
    if not rows or not all(isinstance(r, list) and r for r in rows):
        raise ParseError("matrix must be a nonempty list of rows")
    if any(len(r) != len(rows[0]) for r in rows):
        raise ParseError("matrix rows differ in length")
    return MatrixOverRing.from_json(ring, {**data, "entries": [[str(x).strip() for x in r] for r in rows]})


def _is_exact_zero(a: Any) -> bool:
    return not isinstance(a, SkewLaurentSeries) or a.is_exact_zero()


@dataclass(frozen=True)
class ElementaryOp:
    kind: str
    side: str
    i: int
    j: int
    coeff: Any = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.side not in SIDES:
            raise ValueError(f"unknown side {self.side!r}")
        if self.kind == "add-multiple" and self.i == self.j:
            raise ValueError("add-multiple needs two distinct lines")

    def to_json(self, scalars) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "side": self.side,
            "i": self.i,
            "j": self.j,
            "coeff": None if self.coeff is None else scalars.format(self.coeff),
        }

    @classmethod
    def from_json(cls, scalars, data: dict[str, Any]) -> ElementaryOp:
        coeff = None if data["coeff"] is None else scalars.parse(data["coeff"])
        return cls(data["kind"], data["side"], data["i"], data["j"], coeff)


def _check_op(op: ElementaryOp, rows: int, cols: int, scalars) -> None:
    size = rows if op.side == "row" else cols
    if not (0 <= op.i < size and 0 <= op.j < size):
        raise IndexError(f"index out of range for {op.side} operation")
    if op.kind == "scale-by-unit" and not scalars.is_unit(op.coeff):
        raise NotInvertibleError("scale coefficient is not a unit")


def _apply_inplace(M: list[list[Any]], op: ElementaryOp) -> None:
    i, j, c = op.i, op.j, op.coeff
    if op.side == "row":
        if op.kind == "swap":
            M[i], M[j] = M[j], M[i]
        elif op.kind == "scale-by-unit":
            M[i] = [c * a for a in M[i]]
        else:
            M[i] = [a + c * b for a, b in zip(M[i], M[j])]
    else:
        for row in M:
            if op.kind == "swap":
                row[i], row[j] = row[j], row[i]
            elif op.kind == "scale-by-unit":
                row[i] = row[i] * c
            else:
                row[i] = row[i] + row[j] * c


def apply_elementary(M: MatrixOverRing, op: ElementaryOp) -> MatrixOverRing:
    _check_op(op, M.rows, M.cols, M.scalars)
    work = [list(r) for r in M.entries]
    _apply_inplace(work, op)
    return MatrixOverRing(M.ring, tuple(tuple(r) for r in work))


def elementary_matrix(ring, n: int, op: ElementaryOp) -> MatrixOverRing:
    """The n x n matrix E with E*M (row op) or M*E (column op) performing ``op``."""
    s = scalars_for(ring)
    E = [[s.one if a == b else s.zero for b in range(n)] for a in range(n)]
    i, j = op.i, op.j
    if op.kind == "swap":
        E[i][i] = E[j][j] = s.zero
        E[i][j] = E[j][i] = s.one
    elif op.kind == "scale-by-unit":
        E[i][i] = op.coeff
    elif op.side == "row":
        E[i][j] = op.coeff
    else:
        E[j][i] = op.coeff
    return MatrixOverRing(ring, tuple(tuple(r) for r in E))


# -- certificates ----------------------------------------------------------------


@dataclass(frozen=True)
class ReductionCertificate:
    """P_k ... P_1 * A * Q_1 ... Q_s = D; ops are listed in the order they were applied.

    ``schedule`` interleaves the two lists ("L" for the next row op, "R" for
    the next column op).  Row and column operations commute, so it does not
    change the product, but replaying truncated series in the order of the
    reduction keeps the windows the reduction saw.
    """

    input: MatrixOverRing
    left_ops: tuple[ElementaryOp, ...]
    right_ops: tuple[ElementaryOp, ...]
    diagonal: MatrixOverRing
    precision: int | None = None
    schedule: str | None = None

    def steps(self) -> list[ElementaryOp]:
        """All ops in replay order."""
        sched = self.schedule
        if sched is None:
            sched = "L" * len(self.left_ops) + "R" * len(self.right_ops)
        left, right = iter(self.left_ops), iter(self.right_ops)
        return [next(left) if c == "L" else next(right) for c in sched]

    @property
    def ring(self):
        return self.input.ring

    def diagonal_entries(self) -> list[Any]:
        D = self.diagonal
        return [D[t, t] for t in range(min(D.rows, D.cols))]

    def to_json(self) -> dict[str, Any]:
        s = self.input.scalars
        return {
            "ring": ring_spec(self.ring),
            "rows": self.input.rows,
            "cols": self.input.cols,
            "input": self.input.to_json()["entries"],
            "left_ops": [op.to_json(s) for op in self.left_ops],
            "right_ops": [op.to_json(s) for op in self.right_ops],
            "diagonal": [s.format(x) for x in self.diagonal_entries()],
            "D": self.diagonal.to_json()["entries"],
            "precision": self.precision,
            "schedule": self.schedule,
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> ReductionCertificate:
        ring = parse_ring_spec(data["ring"])
        s = scalars_for(ring)
        A = MatrixOverRing.from_json(ring, {"entries": data["input"]})
        D = MatrixOverRing.from_json(ring, {"entries": data["D"]})
        return cls(
            A,
            tuple(ElementaryOp.from_json(s, o) for o in data["left_ops"]),
            tuple(ElementaryOp.from_json(s, o) for o in data["right_ops"]),
            D,
            data["precision"],
            data.get("schedule"),
        )


@dataclass(frozen=True)
class Verification:
    ok: bool
    message: str
    checks: tuple[str, ...] = field(default_factory=tuple)

    def __bool__(self) -> bool:
        return self.ok


def _replay(cert: ReductionCertificate) -> MatrixOverRing:
    A = cert.input
    R = A
    for op in cert.steps():
        if op.side == "row":
            R = elementary_matrix(A.ring, A.rows, op) @ R
        else:
            R = R @ elementary_matrix(A.ring, A.cols, op)
    return R


def _replay_window(R: MatrixOverRing, D: MatrixOverRing) -> int | float:
    """Relative window on which replayed nonzero diagonal entries match D."""
    best: int | float = float("inf")
    for t in range(min(D.rows, D.cols)):
        e = D[t, t]
        if e.is_zero():
            continue
        best = min(best, len(e.coeffs))
        diff = R[t, t] - e
        if diff.top is not None:
            best = min(best, diff.top - e.h)
    return best


def verify_certificate(cert: ReductionCertificate) -> Verification:
    """Independently check a certificate; the first failing check is reported.

    Structure of D is checked before the replay, which multiplies explicit
    elementary matrices onto the input one at a time.
    """
    A, D = cert.input, cert.diagonal
    s = A.scalars
    done: list[str] = []

    def fail(msg: str) -> Verification:
        return Verification(False, msg, tuple(done))

    if (D.rows, D.cols) != (A.rows, A.cols) or D.ring != A.ring:
        return fail("shape mismatch")
    done.append("shape")
    try:
        for op in cert.left_ops:
            if op.side != "row":
                raise ValueError
            _check_op(op, A.rows, A.cols, s)
        for op in cert.right_ops:
            if op.side != "column":
                raise ValueError
            _check_op(op, A.rows, A.cols, s)
        sched = cert.schedule
        if sched is not None and (
            set(sched) - {"L", "R"}
            or sched.count("L") != len(cert.left_ops)
            or sched.count("R") != len(cert.right_ops)
        ):
            raise ValueError
    except (ValueError, IndexError, AlgebraError):
        return fail("invalid operation")
    done.append("operations")
    for i in range(D.rows):
        for j in range(D.cols):
            if i != j and not s.is_zero(D[i, j]):
                return fail("not diagonal")
    done.append("diagonal")
    diag = cert.diagonal_entries()
    seen_zero = False
    for e in diag:
        if s.is_zero(e):
            seen_zero = True
        elif seen_zero:
            return fail("zero entries not trailing")
    done.append("trailing zeros")
    live = [e for e in diag if not s.is_zero(e)]
    if not all(s.is_canonical(e) for e in live):
        return fail("diagonal entry not canonical")
    done.append("canonical form")
    for a, b in zip(live, live[1:]):
        if not (s.divides(a, b, "right") and s.divides(a, b, "left")):
            return fail("divisibility chain violated")
    done.append("divisibility chain")
    if not s.commutative:
        if cert.precision is None or cert.precision < MIN_PRECISION:
            return fail("precision below minimum")
        if any(s.precision(e) < cert.precision for e in live):
            return fail("diagonal entry below recorded precision")

    R = _replay(cert)
    for i in range(A.rows):
        for j in range(A.cols):
            if not s.agree(R[i, j], D[i, j]):
                return fail("replay mismatch")
    if not s.commutative and _replay_window(R, D) < cert.precision:
        return fail("replay below recorded precision")
    done.append("replay")
    return Verification(True, "ok", tuple(done))


# -- reduction -------------------------------------------------------------------


def _lower(a: SkewLaurentSeries, b: SkewLaurentSeries) -> bool:
    """True when adding a to b cannot touch b's leading term."""
    return a.is_zero() or a.h > b.h


class _Reducer:
    def __init__(
        self, A: MatrixOverRing, max_stages: int, first_pivot: tuple[int, int] | None = None
    ) -> None:
        self.first_pivot = first_pivot
        self.A = A
        self.s = A.scalars
        self.M = [list(r) for r in A.entries]
        self.m, self.n = A.rows, A.cols
        self.left: list[ElementaryOp] = []
        self.right: list[ElementaryOp] = []
        self.schedule: list[str] = []
        self.max_stages = max_stages
        self.budget = 2000 * (self.m + self.n)

    def partial(self) -> ReductionCertificate:
        D = MatrixOverRing(self.A.ring, tuple(tuple(r) for r in self.M))
        return ReductionCertificate(
            self.A, tuple(self.left), tuple(self.right), D, None, "".join(self.schedule)
        )

    def tick(self) -> None:
        self.budget -= 1
        if self.budget < 0:
            raise AlgebraError("reduction did not settle within its iteration budget")

    def row(self, kind: str, i: int, j: int, c: Any = None) -> None:
        op = ElementaryOp(kind, "row", i, j, c)
        _apply_inplace(self.M, op)
        self.left.append(op)
        self.schedule.append("L")

    def col(self, kind: str, i: int, j: int, c: Any = None) -> None:
        op = ElementaryOp(kind, "column", i, j, c)
        _apply_inplace(self.M, op)
        self.right.append(op)
        self.schedule.append("R")

    def pivot_position(self, t: int) -> tuple[int, int] | None:
        if t == 0 and self.first_pivot is not None:
            forced, self.first_pivot = self.first_pivot, None
            return forced
        best = None
        for i, j in ((i, j) for i in range(t, self.m) for j in range(t, self.n)):
            a = self.M[i][j]
            if self.s.is_zero(a):
                continue
            nv = self.s.norm(a)
            if best is None or nv < best[0]:
                best = (nv, i, j)
        return None if best is None else best[1:]

    def check_precision(self, a: Any) -> None:
        p = self.s.precision(a)
        if p is not None and p < MIN_PRECISION:
            raise PrecisionError("series precision exhausted before certification", self.partial())

    def clear_column(self, t: int, shallow: bool = False) -> bool:
        """Zero column t below the pivot; True when the pivot or a remainder changed.

        With ``shallow`` only entries whose leading coefficient the pivot's
        does not divide are touched.
        """
        s, M = self.s, self.M
        for i in range(t + 1, self.m):
            if s.is_zero(M[i][t]):
                continue
            if shallow and s.lead_divides(M[t][t], M[i][t], "left"):
                continue
            steps = s.chain(M[i][t], M[t][t], "left", self.max_stages)
            for k, (q, _r) in enumerate(steps):
                if k % 2 == 0:
                    self.row("add-multiple", i, t, -q)
                else:
                    self.row("add-multiple", t, i, -q)
            if len(steps) > 1 or not s.is_zero(M[i][t]):
                return True
        return False

    def clear_row(self, t: int, shallow: bool = False) -> bool:
        s, M = self.s, self.M
        for j in range(t + 1, self.n):
            if s.is_zero(M[t][j]):
                continue
            if shallow and s.lead_divides(M[t][t], M[t][j], "right"):
                continue
            steps = s.chain(M[t][j], M[t][t], "right", self.max_stages)
            for k, (q, _r) in enumerate(steps):
                if k % 2 == 0:
                    self.col("add-multiple", j, t, -q)
                else:
                    self.col("add-multiple", t, j, -q)
            if len(steps) > 1 or not s.is_zero(M[t][j]):
                return True
        return False

    def fix_divisibility(self, t: int) -> bool:
        """Pull an entry the pivot fails to divide into the pivot row or column."""
        s, M = self.s, self.M
        p = M[t][t]
        for i in range(t + 1, self.m):
            for j in range(t + 1, self.n):
                a = M[i][j]
                if s.is_zero(a):
                    continue
                if not s.divides(p, a, "right"):
                    self.row("add-multiple", t, i, s.one)
                    return True
                if not s.commutative and not s.divides(p, a, "left"):
                    self.col("add-multiple", t, j, s.one)
                    return True
        return False

    def lower_pivot(self, t: int) -> bool:
        """Series only: shrink the pivot through leading coefficients it does not divide.

        Clearing an entry whose leading coefficient the pivot divides cancels
        term after term and can leave a remainder known to very few
        coefficients.  Working first with entries whose leads are not
        multiples keeps each step to a single cancellation-free stage.
        """
        if self.clear_column(t, shallow=True) or self.clear_row(t, shallow=True):
            return True
        s, M = self.s, self.M
        p = M[t][t]
        for i in range(t + 1, self.m):
            for j in range(t + 1, self.n):
                a = M[i][j]
                if s.is_zero(a):
                    continue
                # the added line must leave the pivot's leading term alone
                # and put a's leading term into the pivot row or column
                if not s.lead_divides(p, a, "right") and _lower(M[i][t], p) and _lower(M[t][j], a):
                    self.row("add-multiple", t, i, s.one)
                    return True
                if not s.lead_divides(p, a, "left") and _lower(M[t][j], p) and _lower(M[i][t], a):
                    self.col("add-multiple", t, j, s.one)
                    return True
        return False

    def settle(self, t: int) -> bool:
        """Put a pivot at (t, t) dividing everything below and right of it; False if the block is zero."""
        s, M = self.s, self.M
        while True:
            self.tick()
            pos = self.pivot_position(t)
            if pos is None:
                return False
            i0, j0 = pos
            if i0 != t:
                self.row("swap", t, i0)
            if j0 != t:
                self.col("swap", t, j0)
            self.check_precision(M[t][t])
            if s.is_unit(M[t][t]) and not s.is_one(M[t][t]):
                self.row("scale-by-unit", t, t, s.unit_inverse(M[t][t]))
            if not s.commutative and self.lower_pivot(t):
                continue
            if self.clear_column(t) or self.clear_row(t):
                continue
            if any(not s.is_zero(M[i][t]) for i in range(t + 1, self.m)):
                continue
            if self.fix_divisibility(t):
                continue
            return True

    def canonicalize(self, t: int) -> None:
        left, right = self.s.normalize(self.M[t][t])
        if left is not None:
            self.row("scale-by-unit", t, t, left)
        if right is not None:
            self.col("scale-by-unit", t, t, right)

    def chain_violation(self, r: int) -> int | None:
        s, M = self.s, self.M
        for t in range(r - 1):
            a, b = M[t][t], M[t + 1][t + 1]
            if s.is_zero(b):
                continue
            if not s.divides(a, b, "right"):
                self.row("add-multiple", t, t + 1, s.one)
                return t
            if not s.divides(a, b, "left"):
                self.col("add-multiple", t, t + 1, s.one)
                return t
        return None

    def run(self) -> ReductionCertificate:
        start = 0
        while True:
            r = start
            for t in range(start, min(self.m, self.n)):
                if not self.settle(t):
                    break
                self.canonicalize(t)
                r = t + 1
            bad = self.chain_violation(r)
            if bad is None:
                break
            self.tick()
            start = bad
        D = MatrixOverRing(self.A.ring, tuple(tuple(row) for row in self.M))
        cert = ReductionCertificate(
            self.A, tuple(self.left), tuple(self.right), D, None, "".join(self.schedule)
        )
        if self.s.commutative:
            return cert
        # the certified window is what an independent replay reproduces
        window = _replay_window(_replay(cert), D)
        precision = self.A.ring.precision if window == float("inf") else int(window)
        cert = ReductionCertificate(self.A, cert.left_ops, cert.right_ops, D, precision, cert.schedule)
        if precision < MIN_PRECISION:
            raise PrecisionError("series precision exhausted before certification", cert)
        return cert


def reduce_matrix(A: MatrixOverRing, max_stages: int = DEFAULT_MAX_STAGES) -> ReductionCertificate:
    """Reduce A to canonical diagonal form by elementary operations.

    Over series scalars a long cancellation can leave an entry known to only
    a few coefficients.  When that exhausts the precision, the reduction is
    restarted from each other nonzero entry as first pivot (least norm
    first) and the first certifiable result is returned.
    """
    try:
        return _Reducer(A, max_stages).run()
    except PrecisionError as first:
        if A.scalars.commutative:
            raise
        s = A.scalars
        cells = [(i, j) for i in range(A.rows) for j in range(A.cols) if not s.is_zero(A[i, j])]
        cells.sort(key=lambda ij: s.norm(A[ij]))
        for cell in cells[1:]:
            try:
                return _Reducer(A, max_stages, first_pivot=cell).run()
            except PrecisionError:
                pass
        raise first from None
