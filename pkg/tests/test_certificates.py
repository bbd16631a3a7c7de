import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from certicone.bounds import ConicProblem
from certicone.certificates import (DUAL, PRIMAL, check_dual_infeasible, check_primal_infeasible,
                                    recheck, refusal_reason)
from certicone.cones import BlockVector, ConeSpec
from certicone.formats import parse_certificate, write_certificate
from certicone.probgen import gen_dual_infeasible, gen_optimal, gen_primal_infeasible
from certicone.sdpmat import SymMatrix
from oracles import F, cone_member_exact, matvec_exact, weights_exact

SPECS = st.sampled_from(["lin 5", "soc 3 5", "sdp 2", "sdp 3 | soc 4 | lin 2", "sdp 2 2"])


def test_primal_examples():
    p = ConicProblem(ConeSpec(lin_dim=1), np.ones((1, 1)), np.array([-1.0]), np.zeros(1))
    cert = check_primal_infeasible(p, [1.0])
    assert cert is not None and cert.kind == PRIMAL and cert.checks["b_dot_y_upper"] == -1.0
    assert check_primal_infeasible(p, [-1.0]) is None
    assert "not proven negative" in refusal_reason(p, PRIMAL, [-1.0])
    r = ConicProblem(ConeSpec(lin_dim=1), -np.ones((1, 1)), np.array([-1.0]), np.zeros(1))
    assert "dual cone" in refusal_reason(r, PRIMAL, [1.0])
    I2 = SymMatrix.identity(2).data
    q = ConicProblem(ConeSpec((2,)), I2.reshape(1, -1), np.array([-1.0]), np.zeros(3))
    assert check_primal_infeasible(q, [1.0]) is not None


def test_dual_examples():
    p = ConicProblem(ConeSpec(lin_dim=1), np.zeros((1, 1)), np.zeros(1), np.array([-1.0]))
    cert = check_dual_infeasible(p, np.array([1.0]))
    assert cert is not None and cert.kind == DUAL
    assert cert.witness.lo[0] >= 0 and cert.checks["c_dot_x_upper"] < 0
    q = ConicProblem(ConeSpec(lin_dim=1), np.zeros((1, 1)), np.zeros(1), np.array([1.0]))
    assert check_dual_infeasible(q, np.array([1.0])) is None
    assert "not negative" in refusal_reason(q, DUAL, np.array([1.0]))


def test_refusal_on_bad_input():
    p = ConicProblem(ConeSpec(lin_dim=1), np.ones((1, 1)), np.array([-1.0]), np.zeros(1))
    assert check_primal_infeasible(p, [np.nan]) is None
    assert check_primal_infeasible(p, [1.0, 2.0]) is None
    assert refusal_reason(p, PRIMAL, [1.0]) is None


@settings(max_examples=30, deadline=None)
@given(SPECS, st.integers(0, 10 ** 6))
def test_generated_primal_infeasible_certified(spec_text, seed):
    inst = gen_primal_infeasible(ConeSpec.parse(spec_text), seed)
    cert = check_primal_infeasible(inst.problem, inst.witness)
    assert cert is not None
    assert recheck(inst.problem, cert)


@settings(max_examples=30, deadline=None)
@given(SPECS, st.integers(0, 10 ** 6))
def test_generated_dual_infeasible_certified(spec_text, seed):
    inst = gen_dual_infeasible(ConeSpec.parse(spec_text), seed)
    p = inst.problem
    cert = check_dual_infeasible(p, BlockVector(p.spec, inst.witness))
    assert cert is not None
    assert recheck(p, cert)
    # the generator's exact ray is a genuine recession direction
    x = inst.witness
    wx = [w * F(v) for w, v in zip(weights_exact(p.spec), x)]
    assert all(v == 0 for v in matvec_exact(p.A.lo, wx))
    assert cone_member_exact(p.spec, x)


@settings(max_examples=40, deadline=None)
@given(SPECS, st.integers(0, 10 ** 6), st.sampled_from([1e-6, 1.0, 1e6]))
def test_no_false_accusations(spec_text, seed, scale):
    inst = gen_optimal(ConeSpec.parse(spec_text), seed)
    p = inst.problem
    rng = np.random.default_rng(seed)
    for y in (inst.y_star, rng.standard_normal(p.m) * scale, -inst.y_star):
        assert check_primal_infeasible(p, y) is None
    for x in (inst.x_star.data, rng.standard_normal(p.spec.dim) * scale, -inst.x_star.data):
        assert check_dual_infeasible(p, x) is None


@settings(max_examples=20, deadline=None)
@given(SPECS, st.integers(0, 10 ** 6))
def test_serialized_certificate_reverifies_bitwise(spec_text, seed):
    for gen, check in ((gen_primal_infeasible, check_primal_infeasible),
                       (gen_dual_infeasible, check_dual_infeasible)):
        inst = gen(ConeSpec.parse(spec_text), seed)
        cert = check(inst.problem, inst.witness)
        back = parse_certificate(write_certificate(cert))
        assert back.kind == cert.kind
        assert back.witness.identical(cert.witness)
        assert np.array_equal(back.approx, cert.approx)
        assert recheck(inst.problem, back)


def test_tampered_certificate_rejected():
    inst = gen_primal_infeasible(ConeSpec.parse("lin 4"), 3)
    cert = check_primal_infeasible(inst.problem, inst.witness)
    text = write_certificate(cert)
    back = parse_certificate(text)
    back.approx = -back.approx
    assert not recheck(inst.problem, back)
