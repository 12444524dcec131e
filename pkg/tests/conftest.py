from __future__ import annotations

import mpmath as mp
import pytest

from weylzeta.pipeline import run, run_T
from weylzeta.xinum import EvalConfig, Evaluator


@pytest.fixture(scope="session", autouse=True)
def _ambient_precision():
    """Reference values computed inside the tests need more ambient digits
    than mpmath's default 15 (the evaluator manages its own contexts)."""
    old = mp.mp.dps
    mp.mp.dps = 45
    yield
    mp.mp.dps = old


@pytest.fixture(scope="session")
def ev() -> Evaluator:
    return Evaluator(EvalConfig(precision=30))


class PipelineCache:
    """Memoized pipeline runs shared across test modules (they are the
    expensive part of the suite)."""

    def __init__(self, evaluator: Evaluator):
        self.ev = evaluator
        self._runs: dict = {}
        self._truns: dict = {}

    def run(self, group: str, parabolic: str, compare: bool = True):
        key = (group, parabolic, compare)
        if key not in self._runs:
            self._runs[key] = run(group, parabolic, self.ev, compare=compare)
        return self._runs[key]

    def run_T(self, group: str, parabolic: str, t_mode: str):
        key = (group, parabolic, t_mode)
        if key not in self._truns:
            self._truns[key] = run_T(group, parabolic, t_mode, self.ev)
        return self._truns[key]


@pytest.fixture(scope="session")
def pipe(ev) -> PipelineCache:
    return PipelineCache(ev)


GOLDEN_PAIRS = [
    ("SL2", "B"),
    ("SL3", "P21"),
    ("SL4", "P31"),
    ("SL4", "P22"),
    ("SL5", "P41"),
    ("SL5", "P32"),
    ("Sp4", "Pe1-e2"),
    ("Sp4", "P2e2"),
    ("G2", "Plong"),
    ("G2", "Pshort"),
]

MIRROR_PAIRS = [
    ("SL3", "P21", "P12"),
    ("SL4", "P31", "P13"),
    ("SL5", "P41", "P14"),
    ("SL5", "P32", "P23"),
]
