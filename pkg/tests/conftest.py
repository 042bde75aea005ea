import itertools
import random

import pytest
from hypothesis import settings

from dpgs.stream import EdgeUpdate, UpdateStream

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def random_graph(n, p, rng):
    return [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]


def as_stream(n, edges):
    return UpdateStream(n, [EdgeUpdate.insert(u, v) for u, v in edges])


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE: list[str] = []


def record_acceptance(cid, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {cid}: {'PASS' if ok else 'FAIL'} | {detail}"
    ACCEPTANCE.append(line)
    print(line, flush=True)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
