"""
Sweeping settings and checking soundness
========================================

Grid sweeps scan every tuple of spin angles k*pi/n. The randomized soundness
sweep draws separable states, POVMs and coefficients and confirms that no
separable-state bound is ever exceeded.
"""

import bellkit as bk
from bellkit.sweep import SweepConfig, SweepTarget, run_sweep

rho = bk.rho_zero()

# %% Largest Bell violation on a 24-point grid
res = run_sweep(SweepConfig(SweepTarget.BELL_ORIGINAL, rho, resolution=24, retain=3))
print(f"Bell: best angles {tuple(round(t, 4) for t in res.best_settings)}, margin {-res.min_slack:.4f}")
for row in res.rows:
    print("  ", tuple(round(t, 4) for t in row.settings), f"lhs={row.lhs:.4f} rhs={row.rhs:.4f}")

# %% CHSH never exceeds 2 on rho0
res = run_sweep(SweepConfig(SweepTarget.CHSH, rho, resolution=16))
print(f"CHSH: max {res.best_report.lhs:.6f} over {res.evaluations} tuples")

# %% Quantum analogue is never violated
res = run_sweep(SweepConfig(SweepTarget.QUANTUM_ANALOGUE, bk.rho_zero_representation(True), resolution=16))
print(f"analogue: min slack {res.min_slack:.6f}")

# %% Randomized soundness
res = run_sweep(SweepConfig(SweepTarget.SOUNDNESS, seed=1, sample_count=100))
print(f"soundness: {res.evaluations} reports, min slack {res.min_slack:.4e} ({res.best_report.name})")

# %% Classical models
m = bk.random_model(7, 5, {"A": 1.0, "B": 1.0, "D": 1.0})
r = bk.classical_bell_report(m, "A", "B", "D")
print(f"classical Bell on a random 5-point model: lhs={r.lhs:.4f} rhs={r.rhs:.4f}")
