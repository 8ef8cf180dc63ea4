"""Ring spec strings: ``int``, ``gauss``, ``polyfp:P`` and ``laurent:<base>:<sigma>:<prec>``."""

from __future__ import annotations

from .errors import ParseError
from .laurent import SkewLaurentRing
from .rings import Domain, get_domain


def parse_ring_spec(text: str, prec: int | None = None) -> Domain | SkewLaurentRing:
    """Build a domain or series ring; ``prec`` overrides a laurent precision."""
    s = text.strip()
    if not s.startswith("laurent:"):
        if prec is not None:
            raise ParseError("--prec only applies to laurent rings")
        return get_domain(s)
    parts = s.split(":")[1:]
    if len(parts) < 3:
        raise ParseError(f"expected laurent:<base>:<sigma>:<prec>, got {text!r}")
    *base_parts, sigma, prec_text = parts
    domain = get_domain(":".join(base_parts))
    if sigma not in domain.automorphism_names:
        raise ParseError(f"automorphism {sigma!r} is not registered for {domain.name}")
    try:
        precision = int(prec_text)
    except ValueError:
        raise ParseError(f"bad precision {prec_text!r}") from None
    if prec is not None:
        precision = prec
    if precision < 2:
        raise ParseError("precision must be at least 2")
    return SkewLaurentRing(domain, sigma, precision)


def ring_spec(ring: Domain | SkewLaurentRing) -> str:
    if isinstance(ring, SkewLaurentRing):
        return ring.spec
    return ring.name
