"""Where the equilibrium structure changes, and how grid search confirms it.

The two thresholds split [0, pi/2] into a classical region (mutual
defection), an intermediate region with two unfair equilibria, and a fully
quantum region where the dilemma is gone.
"""

import math

from qdilemma import (
    DEFAULT_GRID,
    DEFECT,
    QUANTUM,
    PayoffTable,
    best_response,
    find_nash_grid,
    thresholds,
)

th = thresholds()
print(f"gamma_th1 = {th.gamma_th1:.6f}  (arcsin sqrt(1/5))")
print(f"gamma_th2 = {th.gamma_th2:.6f}  (arcsin sqrt(2/5))\n")

print("Best replies flip as the entanglement crosses the thresholds:")
for gamma in (0.2, 0.55, 1.0):
    vs_d, pay_d = best_response(gamma, DEFECT, DEFAULT_GRID)
    vs_q, pay_q = best_response(gamma, QUANTUM, DEFAULT_GRID)
    print(f"  gamma={gamma:.2f}: best vs defect = (theta={vs_d.theta:.3f}, phi={vs_d.phi:.3f}) "
          f"pays {pay_d:.3f}; best vs quantum pays {pay_q:.3f}")
print()

print("Exhaustive 61x31 grid search per regime:")
for gamma in (0.0, (th.gamma_th1 + th.gamma_th2) / 2, math.pi / 2):
    rep = find_nash_grid(gamma)
    print(f"  gamma={gamma:.3f} [{rep.regime}]")
    for sa, sb, pa, pb in rep.equilibria:
        print(f"    (theta={sa.theta:.3f}, phi={sa.phi:.3f}) x "
              f"(theta={sb.theta:.3f}, phi={sb.phi:.3f}) -> ({pa:.3f}, {pb:.3f})")
print()

print("The thresholds move with the payoff table (checked against grid scans):")
for table in (PayoffTable(), PayoffTable(3, 0, 6, 1), PayoffTable(3, 1, 5, 2)):
    t = thresholds(table)
    print(f"  table {table.as_tuple()}: th1={t.gamma_th1:.4f}, th2={t.gamma_th2:.4f}")
