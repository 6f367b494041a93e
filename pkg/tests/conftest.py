import numpy as np
import pytest

from signaling_games.core import GameParams, GaussianPrior, Hard, Soft


def random_game(rng: np.random.Generator, mode: str, identical: bool = False) -> GameParams:
    """Draw a game with moderate, well-conditioned parameters."""
    prior_e = GaussianPrior(rng.uniform(-2, 2), rng.uniform(0.2, 4.0))
    prior_d = prior_e if identical else GaussianPrior(rng.uniform(-2, 2), rng.uniform(0.2, 4.0))
    nv = rng.uniform(0.05, 2.0)
    constraint = Soft(rng.uniform(0.05, 3.0)) if mode == "soft" else Hard(rng.uniform(0.1, 5.0))
    return GameParams(prior_e, prior_d, nv, constraint)


def game(mu_e=0.0, var_e=1.0, mu_d=0.0, var_d=1.0, nv=1.0, lam=None, p_bar=None) -> GameParams:
    constraint = Soft(lam) if lam is not None else Hard(p_bar)
    return GameParams(GaussianPrior(mu_e, var_e), GaussianPrior(mu_d, var_d), nv, constraint)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


# --- acceptance reporting --------------------------------------------------

_ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE[name] = ("PASS" if report.outcome == "passed" else "FAIL", report.head_line or name)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        verdict, _ = _ACCEPTANCE[name]
        number = name.split("_")[2]
        label = " ".join(name.split("_")[3:])
        terminalreporter.write_line(f"criterion {int(number):2d}  {verdict}  {label}")
