"""Bounds for a mixed semidefinite / second-order / linear program.

For semidefinite blocks the lower bound asks how negative the dual slack
matrix can be; the answer comes from a verified eigenvalue enclosure.
"""

from certicone.bounds import lower_bound, upper_bound
from certicone.cones import ConeSpec
from certicone.linalg import eig_enclose
from certicone.probgen import gen_optimal, perturb

spec = ConeSpec.parse("sdp 5 3 | soc 4 | lin 3")
inst = gen_optimal(spec, seed=11)
p = inst.problem
print("cone:", spec, " m =", p.m, " exact optimum:", inst.f_star)

y = perturb(inst.y_star, 1e-9, seed=5)
slack = p.dual_slack(y)
enc = eig_enclose(slack.sdp(0))
print("eigenvalue enclosures of the first dual slack block:")
for lo, hi in zip(enc.intervals.lo, enc.intervals.hi):
    print(f"  [{lo: .3e}, {hi: .3e}]")
print("possibly negative:", enc.l, " lower bound of the negative part:", enc.d_neg)

lo = lower_bound(p, y, inst.xbar(10.0))
up = upper_bound(p, perturb(inst.x_star, 1e-9, seed=6), inst.ybar(10.0))
print("lower:", lo.value, " upper:", up.value)
print("diagnostics:", {k: lo.diagnostics[k] for k in ("sdp_l", "sdp_d_neg")})
