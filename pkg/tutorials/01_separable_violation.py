"""
A separable state that breaks Bell's inequality
===============================================

Bell's perfect-correlation inequality

    |E(a,b) - E(a,c)| <= 1 - E(b,c)

holds for every classical model with +/-1 outcomes. This walkthrough builds
the two-qubit separable state

    rho0 = (|ud><ud| + |du><du|) / 2

measures spin components at three angles, and shows that the inequality
fails there, while CHSH does not.
"""

import numpy as np

import bellkit as bk

# %% The state
# ``rho_zero`` returns a validated density operator with factor dims (2, 2).
rho = bk.rho_zero()
print("rho0 diagonal:", np.real(np.diag(rho.matrix)))
print("swap symmetric:", bk.is_swap_symmetric(rho))

# %% Spin measurements
# The spin observable at angle t has first moment J(t) = [[cos 2t, sin 2t], [sin 2t, -cos 2t]].
a, b, c = (bk.spin_observable(t, name) for t, name in ((0.0, "a"), (np.pi / 6, "b"), (np.pi / 3, "c")))
print("W_b =\n", np.round(bk.effect_operator(b).real, 6))

# %% Correlations
# For rho0 they equal -cos 2ta * cos 2tb.
e_ab, e_ac, e_bc = (bk.correlation(rho, x, y) for x, y in ((a, b), (a, c), (b, c)))
for rec in (e_ab, e_ac, e_bc):
    print(f"E{rec.setting_pair} = {rec.value:+.6f}")

# %% Bell's inequality
r = bk.bell_original(e_ab, e_ac, e_bc)
print(f"Bell: lhs={r.lhs:.6f} rhs={r.rhs:.6f} violated={r.violated}")

# %% CHSH on the same state
d = bk.spin_observable(np.pi / 2, "d")
chsh = bk.chsh_report(*(bk.correlation(rho, x, y) for x, y in ((a, b), (c, b), (c, d), (a, d))))
print(f"CHSH: lhs={chsh.lhs:.6f} rhs={chsh.rhs:.6f} violated={chsh.violated}")

# %% A bound that does hold
# The separable-state bound replaces E(b,c) by Bob's two settings measured
# jointly on an auxiliary two-copy state built from a representation of rho0.
rep = bk.rho_zero_representation(symmetrized=True)
s = bk.separable_bound(rep, a, b, c)
print(f"separable bound: lhs={s.lhs:.6f} rhs={s.rhs:.6f} violated={s.violated}")
