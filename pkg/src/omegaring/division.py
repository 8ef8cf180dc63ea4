"""Euclidean division, k-stage division chains, gcds and ideal generators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable

from .errors import ChainBoundError, DivisionByZeroError, DomainMismatchError, GcdUndefinedError
from .rings import Domain, RingElement

__all__ = [
    "ChainStep",
    "DivisionChain",
    "chain_from_json",
    "division_chain",
    "euclid_div",
    "gcd_via_chain",
    "ideal_generator",
]

DEFAULT_MAX_STAGES = 64

# "perturbed" overshoots the quotient on the first stage only; later stages
# fall back to this policy so the chain can recover.
_RECOVERY_POLICY = {"perturbed": "floor"}


@dataclass(frozen=True)
class ChainStep:
    quotient: RingElement
    remainder: RingElement


@dataclass(frozen=True)
class DivisionChain:
    """The equalities a = b q1 + r1, b = r1 q2 + r2, ..., r_{k-2} = r_{k-1} q_k + r_k."""

    a: RingElement
    b: RingElement
    steps: tuple[ChainStep, ...]
    policy: str = ""

    @property
    def domain(self) -> Domain:
        return self.b.domain

    @property
    def stages(self) -> int:
        return len(self.steps)

    @property
    def final_remainder(self) -> RingElement:
        return self.steps[-1].remainder

    def remainders(self) -> list[RingElement]:
        """r_{-1} = a, r_0 = b, r_1, ..., r_k."""
        return [self.a, self.b] + [s.remainder for s in self.steps]

    def accepted(self) -> bool:
        return self.final_remainder.norm() < self.b.norm()

    def reconstructs(self) -> bool:
        """Replay every equality of the chain exactly."""
        rs = self.remainders()
        for i, step in enumerate(self.steps):
            if rs[i] != rs[i + 1] * step.quotient + step.remainder:
                return False
        return True

    def last_nonzero_remainder(self) -> RingElement:
        rs = self.remainders()
        for r in reversed(rs[1:]):
            if not r.is_zero():
                return r
        raise GcdUndefinedError()

    def to_json(self) -> dict[str, Any]:
        return {
            "a": str(self.a),
            "b": str(self.b),
            "steps": [{"q": str(s.quotient), "r": str(s.remainder)} for s in self.steps],
        }


def chain_from_json(domain: Domain, data: dict[str, Any]) -> DivisionChain:
    steps = tuple(ChainStep(domain(s["q"]), domain(s["r"])) for s in data["steps"])
    return DivisionChain(domain(data["a"]), domain(data["b"]), steps)


def euclid_div(
    a: RingElement, b: RingElement, policy: str | None = None
) -> tuple[RingElement, RingElement]:
    """One division step a = b*q + r."""
    if a.domain != b.domain:
        raise DomainMismatchError()
    d = a.domain
    if b.is_zero():
        raise DivisionByZeroError()
    q, r = d.divmod(a.value, b.value, policy)
    return RingElement(d, q), RingElement(d, r)


def division_chain(
    a: RingElement,
    b: RingElement,
    policy: str | None = None,
    max_stages: int = DEFAULT_MAX_STAGES,
    stop: str = "zero",
) -> DivisionChain:
    """Build a right k-stage division chain for (a, b).

    ``stop="zero"`` runs until a remainder vanishes (the gcd chain);
    ``stop="accept"`` ends at the first stage whose remainder has norm
    below norm(b).  Either way the returned chain is accepted, otherwise
    :class:`ChainBoundError` is raised.
    """
    if a.domain != b.domain:
        raise DomainMismatchError()
    if b.is_zero():
        raise DivisionByZeroError()
    if stop not in ("zero", "accept"):
        raise ValueError(f"unknown stop mode {stop!r}")
    domain = b.domain
    policy = domain.check_policy(policy)
    later = _RECOVERY_POLICY.get(policy, policy)
    bound = b.norm()
    steps: list[ChainStep] = []
    prev, cur = a, b
    for stage in range(max_stages):
        q, r = euclid_div(prev, cur, policy if stage == 0 else later)
        steps.append(ChainStep(q, r))
        if r.is_zero():
            break
        if stop == "accept" and r.norm() < bound:
            break
        prev, cur = cur, r
    chain = DivisionChain(a, b, tuple(steps), policy)
    if not chain.accepted():
        raise ChainBoundError()
    return chain


def gcd_via_chain(a: RingElement, b: RingElement) -> tuple[RingElement, DivisionChain]:
    """gcd as the canonical associate of the last nonzero remainder of a full chain.

    When b = 0 the roles are swapped so the chain divides by a.
    """
    if a.domain != b.domain:
        raise DomainMismatchError()
    if a.is_zero() and b.is_zero():
        raise GcdUndefinedError()
    chain = division_chain(b, a) if b.is_zero() else division_chain(a, b)
    d = chain.last_nonzero_remainder()
    _, canon = d.domain.canonical_associate(d.value)
    return RingElement(d.domain, canon), chain


def ideal_generator(elements: Iterable[RingElement]) -> RingElement:
    """Canonical generator of the right ideal spanned by ``elements``.

    Start from an element of least norm and replace it whenever a division
    chain against another member produces a nonzero ideal element of smaller
    norm; at the fixed point the candidate divides every input.
    """
    elements = list(elements)
    if not elements:
        raise ValueError("ideal_generator needs at least one element")
    domain = elements[0].domain
    if any(e.domain != domain for e in elements):
        raise DomainMismatchError()
    nonzero = [e for e in elements if not e.is_zero()]
    if not nonzero:
        return RingElement(domain, domain.zero)
    best = min(nonzero, key=lambda e: e.norm())
    changed = True
    while changed:
        changed = False
        for e in nonzero:
            chain = division_chain(e, best)
            d = chain.last_nonzero_remainder()
            if d.norm() < best.norm():
                best = d
                changed = True
                break
    _, canon = domain.canonical_associate(best.value)
    return RingElement(domain, canon)
