import os

import pytest
from hypothesis import HealthCheck, settings

from hampath import botmarch
from hampath.graph import validate_path

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")

# every solve in the session passes through this tally; see pytest_sessionfinish
FIREWALL = {"runs": 0, "returned_paths": 0, "bad_returns": [], "extraction_invalid": 0}


@pytest.fixture(scope="session", autouse=True)
def _firewall():
    real = botmarch._solve

    def checked(state, **budget):
        res = real(state, **budget)
        inst = state.inst
        FIREWALL["runs"] += 1
        if res.outcome is botmarch.Outcome.EXTRACTION_INVALID:
            FIREWALL["extraction_invalid"] += 1
        if res.path is not None:
            FIREWALL["returned_paths"] += 1
            if not validate_path(inst.graph, inst.s, inst.e, res.path):
                FIREWALL["bad_returns"].append((inst, res.path))
        return res

    botmarch._solve = checked
    yield FIREWALL
    botmarch._solve = real


def pytest_sessionfinish(session, exitstatus):
    if FIREWALL["runs"]:
        print(
            f"\nsoundness firewall: {FIREWALL['runs']} solver runs, {FIREWALL['returned_paths']} paths returned, "
            f"{len(FIREWALL['bad_returns'])} invalid, {FIREWALL['extraction_invalid']} EXTRACTION_INVALID findings"
        )
    if FIREWALL["bad_returns"]:
        session.exitstatus = 1


def fixture_text(name):
    with open(os.path.join(FIXTURES, name)) as fh:
        return fh.read()
