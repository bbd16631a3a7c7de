"""Rigorous bounds for a small linear program.

We build an instance whose optimum is known exactly, blur its optimal
solutions the way an iterative solver would, and turn the blurred points
into a guaranteed lower and upper bound.
"""

from certicone.bounds import lower_bound, upper_bound
from certicone.cones import ConeSpec
from certicone.equicut import accuracy_mu
from certicone.probgen import gen_optimal, perturb

inst = gen_optimal(ConeSpec.parse("lin 8"), seed=3)
p = inst.problem
print(f"{p.m} constraints, {p.spec.dim} variables, exact optimum {inst.f_star}")

for eps in (0.0, 1e-9, 1e-6):
    y = perturb(inst.y_star, eps, seed=1)
    x = perturb(inst.x_star, eps, seed=2)
    # caps on optimal solutions: ten times the true magnitudes
    lo = lower_bound(p, y, inst.xbar(10.0))
    up = upper_bound(p, x, inst.ybar(10.0))
    print(f"eps={eps:g}: {lo.value!r} <= f* <= {up.value!r}   mu={accuracy_mu(up.value, lo.value):.1e}")

# garbage in, still a valid (if useless) bound out
import numpy as np

noise = np.random.default_rng(0).standard_normal(p.m) * 100
print("noise lower bound:", lower_bound(p, noise, inst.xbar(10.0)).value)
print("without caps:     ", lower_bound(p, noise).value)
