import math
import os
import pathlib

import pytest

import saferoute

DATA = pathlib.Path(os.environ.get("SAFEROUTE_DATA_DIR", pathlib.Path(__file__).resolve().parents[2] / "data"))
CASE = DATA / "case_study"


def test_queueing_example():
    q = saferoute.QueueModel(60.0, 200.0)
    assert saferoute.max_flow(q) == pytest.approx(3000.0)
    assert saferoute.speed_from_density(q, 100.0) == pytest.approx(30.0)
    congested, free = saferoute.speeds_from_flow(q, 1500.0)
    assert congested == pytest.approx(30 - 15 * math.sqrt(2))
    assert free == pytest.approx(30 + 15 * math.sqrt(2))


def test_case_study_solver_matches_oracle():
    inst = saferoute.load_case_study(str(CASE))
    assert inst.customer_count == 3
    best = saferoute.oracle(inst, 8.0, "distance")
    assert best["enumerated"] == 24
    got = saferoute.solve(inst, 8.0, "distance", 7)
    assert got["feasible"]
    assert got["objective"] == pytest.approx(best["objective"], abs=1e-9)
    again = saferoute.evaluate(inst, got["routes"], 8.0, "distance")
    assert again["objective"] == pytest.approx(got["objective"])


def test_errors_are_typed():
    inst = saferoute.generate_instance(9, seed=3)
    with pytest.raises(saferoute.OracleRefusal):
        saferoute.oracle(inst, 0.0, "crash")
    with pytest.raises(saferoute.SpecError):
        saferoute.solve(inst, 0.0, "fastest")
