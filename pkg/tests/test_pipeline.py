import json
from importlib import resources

import jsonschema
import pytest

from ulrichcert import pipeline
from ulrichcert.pipeline import (PipelineConfig, StageFailure, StageRecord, certify,
                                 random_curve_bidegree)
from ulrichcert.presentation import Ideal
from ulrichcert.resolve import degree_genus, minimal_generators


def schema():
    return json.loads(resources.files("ulrichcert").joinpath("report.schema.json").read_text())


def test_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig(prime=1000)
    with pytest.raises(ValueError):
        PipelineConfig(max_attempts=0)


def test_stage_record_check():
    rec = StageRecord("demo")
    assert rec.check("a", [1, 2], (1, 2))
    assert rec.passed
    assert not rec.check("b", 3, 4, "b = 3")
    assert rec.status == "fail"
    assert rec.checks[0]["anchor"] == "a: [1, 2]"
    assert rec.checks[1] == {"name": "b", "expected": 3, "got": 4, "pass": False,
                             "anchor": "b = 3"}


def test_first_stage_is_deterministic():
    cfg = PipelineConfig(seed=5)
    I = random_curve_bidegree(cfg)
    J = random_curve_bidegree(cfg)
    assert I.gens == J.gens
    other = random_curve_bidegree(PipelineConfig(seed=6))
    assert other.gens != I.gens


def test_failing_stage_stops_the_run(monkeypatch):
    def broken(I, rec=None):
        rec.check("plane model degree d", 10, 9)
        return None

    monkeypatch.setattr(pipeline, "plane_model", broken)
    out = pipeline.construct(PipelineConfig(seed=0, run_hilbert_series_check=False))
    rep = out.report.to_json()
    assert rep["verdict"] == "fail"
    assert list(rep["stages"]) == ["random_curve", "plane_model"]
    assert rep["stages"]["plane_model"]["status"] == "fail"
    assert rep["stages"]["plane_model"]["notes"] == ["plane_model failed: plane model degree d"]
    jsonschema.validate(rep, schema())


def test_exhausted_retries_fail_the_stage():
    rec = StageRecord("demo")

    def body(rng):
        raise pipeline._Retry("always degenerate")

    with pytest.raises(StageFailure):
        pipeline._run_with_retries(rec, PipelineConfig(max_attempts=2), body)
    assert rec.status == "fail" and rec.attempts == 2 and len(rec.notes) == 2


def test_reference_report(reference_run):
    rep = reference_run.report
    data = json.loads(rep.dumps())
    jsonschema.validate(data, schema())
    assert data["verdict"] == "pass"
    assert list(data["stages"]) == [
        "random_curve", "hilbert_series", "plane_model", "nodal_model",
        "canonical_embedding", "pencil_choice", "acm_curve", "quadric_pencil",
        "normal_sheaf", "ulrich"]
    for stage in data["stages"].values():
        assert stage["checks"]
        assert all(c["pass"] and c["anchor"] for c in stage["checks"])
    assert rep.get("plane_model", "plane model degree d")["got"] == 10
    assert rep.get("normal_sheaf", "(h0, h1)(N_D/P5)")["got"] == [68, 0]
    assert rep.get("ulrich", "h0(E) = deg(X) * rank(E)")["got"] == 12


def test_curve_in_cox_ring(reference_run):
    I = reference_run.ideals["I_Dprime"]
    S = I.ring
    for d, dim in [((3, 4), 10), ((4, 3), 3), ((3, 3), 0), ((2, 2), 0)]:
        assert S.monomial_count(d) - I.hilbert_function(d) == dim


def test_nodal_model_generators(reference_run):
    I = reference_run.ideals["I_Delta"]
    gens = minimal_generators(I.gens)
    assert sorted(d for _, d in gens) == [(6,)] * 4
    assert degree_genus(I)[:2] == (1, 24)


def test_canonical_curve(reference_run):
    I_D = reference_run.ideals["I_D"]
    I_X = reference_run.ideals["I_X"]
    gens = minimal_generators(I_D.gens)
    assert sorted(d for _, d in gens) == [(2,)] * 2 + [(3,)] * 10
    assert degree_genus(I_D) == (2, 15, 12)
    assert all(I_D.contains(q) for q in I_X.gens)
    assert [q.degree() for q in I_X.gens] == [2, 2]
    assert degree_genus(I_X)[:2] == (4, 4)


def test_certify_reproduces_construct_records(reference_run):
    I_D = reference_run.ideals["I_D"]
    I_X = reference_run.ideals["I_X"]
    rep = certify(Ideal(list(I_D.gens), I_D.ring), Ideal(list(I_X.gens), I_X.ring),
                  PipelineConfig(seed=1))
    assert rep.verdict == "pass"
    ours = rep.to_json()["stages"]
    ref = reference_run.report.to_json()["stages"]
    assert list(ours) == pipeline.CERTIFY_STAGES
    for name in pipeline.CERTIFY_STAGES:
        assert ours[name] == ref[name]
