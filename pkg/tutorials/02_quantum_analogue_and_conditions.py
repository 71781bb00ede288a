"""
Quantum analogue and when it reduces to Bell's form
===================================================

For two identical subsystems measured with similar devices the separable
bound takes the shape

    |E(a,b1) - E(a,b2)| <= C^2 - <l1 l2>_sigma(b1, b2)

where sigma is an auxiliary state computed from a separable representation.
If sigma's correlation equals plus or minus the state's own, the inequality
becomes Bell's inequality in perfect-correlation or anti-correlation form.
"""

import numpy as np

import bellkit as bk
from bellkit import qlinalg
from bellkit.states import pure_state

rho = bk.rho_zero()
rep = bk.rho_zero_representation(symmetrized=True)
a, b, c = (bk.spin_observable(t, n) for t, n in ((0.0, "a"), (np.pi / 6, "b"), (np.pi / 3, "c")))

# %% The analogue on rho0
r = bk.quantum_bell_analogue(rep, a, b, c)
print(f"analogue: lhs={r.lhs:.6f} rhs={r.rhs:.6f} violated={r.violated}")
for note in r.notes:
    print("  note:", note)

# %% Which sign?
# For rho0 sigma's correlation is minus the state's, so the anti-correlation
# form 1 + E(b,c) holds, which here is 1.25.
v = bk.condition_vbi(rep, b, c, rho)
print(f"vbi: {v.sign.value} (sigma {v.sigma_value:+.4f}, state {v.state_value:+.4f})")
print("sor:", bk.condition_sor(rep, b).value)
print("restriction at b:", bk.bell_restriction(rho, b).value)

# %% A special-form state
# If every term has identical factors, sigma coincides with the state and the
# ordinary perfect-correlation form holds.
up, down = pure_state(qlinalg.UP), pure_state(qlinalg.DOWN)
same = bk.representation([(0.5, up, up), (0.5, down, down)])
print("special form:", bk.is_special_form(same))
print("vbi:", bk.condition_vbi(same, b, c, bk.assemble(same)).sign.value)
r2 = bk.quantum_bell_analogue(same, a, b, c)
print(f"analogue: lhs={r2.lhs:.6f} rhs={r2.rhs:.6f}")
