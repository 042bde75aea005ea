"""Laplace noise, the sparse vector technique and a privacy-budget ledger."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np


class NonPositiveScale(ValueError):
    pass


class InvalidParameter(ValueError):
    pass


class AbortExceeded(RuntimeError):
    """An SVT exhausted its budget of Above answers; the output is frozen."""


_TINY = np.nextafter(0.0, 1.0)


def laplace_from_uniform(u, scale):
    """Inverse-CDF transform of uniforms in [0, 1) to Laplace(0, scale)."""
    u = np.maximum(u, _TINY)
    return np.where(u < 0.5, scale * np.log(2.0 * u),
                    -scale * np.log(2.0 * (1.0 - u)))


def seed_sequence(seed) -> np.random.SeedSequence:
    """Accept an int, None or an already spawned SeedSequence."""
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _lap1(u: float, scale: float) -> float:
    if u < 0.5:
        return scale * math.log(2.0 * max(u, _TINY))
    return -scale * math.log(2.0 * (1.0 - u))


class LaplaceSampler:
    """Draws Laplace variates from a seeded generator, one uniform per variate.

    With ``test_mode`` every draw returns exactly 0 while still consuming its
    uniform, so randomness consumption is the same with and without noise.
    """

    def __init__(self, rng=None, test_mode: bool = False):
        self.rng = make_rng(rng)
        self.test_mode = test_mode
        self.draws = 0

    def _uniform(self) -> float:
        return self.rng.random()

    def sample(self, scale: float) -> float:
        if not scale > 0:
            raise NonPositiveScale(f"Laplace scale must be positive, got {scale}")
        u = self._uniform()
        self.draws += 1
        if self.test_mode:
            return 0.0
        return _lap1(u, scale)

    def sample_many(self, scale: float, size: int) -> np.ndarray:
        if not scale > 0:
            raise NonPositiveScale(f"Laplace scale must be positive, got {scale}")
        u = np.array([self._uniform() for _ in range(size)])
        self.draws += size
        if self.test_mode:
            return np.zeros(size)
        return laplace_from_uniform(u, scale)


class UniformTape:
    """A fixed sequence of uniforms with a cursor; cloning copies the cursor.

    Exposes ``random()`` like a generator so it can stand in for one when two
    coupled runs must see identical randomness.
    """

    def __init__(self, uniforms, pos: int = 0):
        self.tape = uniforms if isinstance(uniforms, list) else [float(x) for x in uniforms]
        self.pos = pos

    def random(self) -> float:
        if self.pos >= len(self.tape):
            raise IndexError("uniform tape exhausted")
        u = self.tape[self.pos]
        self.pos += 1
        return u

    def clone(self) -> "UniformTape":
        return UniformTape(self.tape, self.pos)


class TapeSampler(LaplaceSampler):
    """Laplace sampler reading a UniformTape; cheap to clone for coupled replays."""

    def __init__(self, uniforms, test_mode: bool = False, pos: int = 0):
        self.rng = uniforms if isinstance(uniforms, UniformTape) else UniformTape(uniforms, pos)
        self.test_mode = test_mode
        self.draws = 0

    def clone(self) -> "TapeSampler":
        c = TapeSampler(self.rng.clone(), self.test_mode)
        c.draws = self.draws
        return c


class Answer(enum.Enum):
    ABOVE = "above"
    BELOW = "below"
    ABORT = "abort"


class SvtInstance:
    """Sparse vector technique answering up to c + 1 Above queries.

    The budget is split evenly between the threshold noise, drawn once at
    construction with scale delta / (eps / 2), and the per-query noise with
    scale 2 c delta / (eps / 2). A query arriving after more than c Above
    answers returns Abort and draws nothing.
    """

    def __init__(self, eps: float, delta: float, c: float, sampler: LaplaceSampler,
                 name: str = "svt"):
        if not eps > 0:
            raise InvalidParameter(f"eps must be positive, got {eps}")
        if not delta > 0:
            raise InvalidParameter(f"sensitivity must be positive, got {delta}")
        if not c >= 1:
            raise InvalidParameter(f"Above budget must be at least 1, got {c}")
        self.eps = eps
        self.delta = delta
        self.c = c
        self.name = name
        self.sampler = sampler
        self.eps1 = self.eps2 = eps / 2
        self.query_scale = 2 * c * delta / self.eps2
        self.rho = sampler.sample(delta / self.eps1)
        self.count = 0
        self.queries = 0

    @property
    def exhausted(self) -> bool:
        return self.count > self.c

    def process(self, query: float, threshold: float) -> Answer:
        self.queries += 1
        if self.count > self.c:
            return Answer.ABORT
        nu = self.sampler.sample(self.query_scale)
        if query + nu >= threshold + self.rho:
            self.count += 1
            return Answer.ABOVE
        return Answer.BELOW

    def clone(self, sampler=None) -> "SvtInstance":
        s = object.__new__(SvtInstance)
        s.__dict__.update(self.__dict__)
        s.sampler = sampler if sampler is not None else self.sampler.clone()
        return s


def svt_reference(queries, thresholds, c: float) -> list[Answer]:
    """Noise-free comparator for SvtInstance in test mode."""
    out, count = [], 0
    for q, th in zip(queries, thresholds):
        if count > c:
            out.append(Answer.ABORT)
        elif q >= th:
            count += 1
            out.append(Answer.ABOVE)
        else:
            out.append(Answer.BELOW)
    return out


@dataclass
class PrivacyLedger:
    """Records (mechanism, epsilon) charges under basic composition."""

    entries: list[tuple[str, float]] = field(default_factory=list)

    def charge(self, mechanism: str, epsilon: float) -> None:
        if not epsilon >= 0 or math.isnan(epsilon):
            raise InvalidParameter(f"bad epsilon {epsilon} for {mechanism}")
        self.entries.append((mechanism, float(epsilon)))

    @property
    def total(self) -> float:
        return math.fsum(e for _, e in self.entries)

    def to_json(self) -> str:
        return json.dumps([{"mechanism": m, "epsilon": e} for m, e in self.entries])

    @staticmethod
    def from_json(text: str) -> "PrivacyLedger":
        return PrivacyLedger([(d["mechanism"], float(d["epsilon"]))
                              for d in json.loads(text)])
