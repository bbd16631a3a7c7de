"""Proving infeasibility from an approximate ray.

A solver that gives up usually hands back a ray.  Here we check such rays
rigorously, and watch a feasible problem refuse every fake one.
"""

import numpy as np

from certicone.certificates import check_dual_infeasible, check_primal_infeasible
from certicone.cones import ConeSpec
from certicone.probgen import gen_dual_infeasible, gen_optimal, gen_primal_infeasible

spec = ConeSpec.parse("sdp 3 | soc 3 | lin 4")

inst = gen_primal_infeasible(spec, seed=2)
cert = check_primal_infeasible(inst.problem, inst.witness)
print("primal infeasible:", cert.checks)

inst = gen_dual_infeasible(spec, seed=2)
# a solver's ray is never exact; the check encloses a true one nearby
blurred = inst.witness + 1e-10 * np.random.default_rng(0).standard_normal(spec.dim)
cert = check_dual_infeasible(inst.problem, blurred)
print("dual infeasible:", cert.checks if cert else "refused")

feasible = gen_optimal(spec, seed=2).problem
rng = np.random.default_rng(1)
claims = sum(check_primal_infeasible(feasible, rng.standard_normal(feasible.m)) is not None
             for _ in range(200))
print("fake rays accepted on a feasible problem:", claims)
