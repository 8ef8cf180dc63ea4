import random
import sys
from pathlib import Path

from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from omegaring import ZZ, ZZI, SkewLaurentRing, get_domain  # noqa: E402

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

F5 = get_domain("polyfp:5")

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


# -- random payloads --------------------------------------------------------------


def rand_int(rng: random.Random, bound: int = 10**9, nonzero: bool = False) -> int:
    while True:
        a = rng.randint(-bound, bound)
        if a or not nonzero:
            return a


def rand_gauss(rng: random.Random, bound: int = 10**4, nonzero: bool = False) -> tuple[int, int]:
    while True:
        a = (rng.randint(-bound, bound), rng.randint(-bound, bound))
        if a != (0, 0) or not nonzero:
            return a


def rand_poly(rng: random.Random, deg: int = 12, p: int = 5, nonzero: bool = False) -> tuple[int, ...]:
    while True:
        n = rng.randint(0, deg + 1)
        c = [rng.randrange(p) for _ in range(n)]
        while c and c[-1] == 0:
            c.pop()
        if c or not nonzero:
            return tuple(c)


def raw_sampler(domain, small: bool = False):
    """A function rng -> nonzero raw payload for ``domain``."""
    if domain == ZZ:
        return lambda rng: rand_int(rng, 50 if small else 10**9, nonzero=True)
    if domain == ZZI:
        return lambda rng: rand_gauss(rng, 5 if small else 10**4, nonzero=True)
    return lambda rng: rand_poly(rng, 3 if small else 12, domain.p, nonzero=True)


def rand_series(rng: random.Random, R: SkewLaurentRing, density: float = 0.6, span: int = 3):
    """A nonzero series with order in [-span, span] and a full window."""
    sample = raw_sampler(R.domain, small=True)
    h = rng.randint(-span, span)
    terms = {h: sample(rng)}
    for e in range(h + 1, h + R.precision):
        if rng.random() < density:
            terms[e] = sample(rng)
    return R.from_terms(terms)
