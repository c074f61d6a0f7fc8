"""Payoff surfaces over the one-parameter strategy slice, at three regimes.

Each player's move is folded onto t in [-1, 1]: t=0 cooperates, t=1
defects, t=-1 is the quantum move.  The script prints coarse ASCII
heatmaps and writes plot-ready CSVs.
"""

import math
import os

from qdilemma import landscape, thresholds
from qdilemma.cli import main as cli

OUT_DIR = "demo_output"
os.makedirs(OUT_DIR, exist_ok=True)

th = thresholds()
presets = {
    "fig2 (classical-like)": th.gamma_th1 / 2,
    "fig3 (intermediate)": (th.gamma_th1 + th.gamma_th2) / 2,
    "fig4 (fully quantum)": (th.gamma_th2 + math.pi / 2) / 2,
}

GLYPHS = " .:-=+*#%@"

for name, gamma in presets.items():
    ts, payoff = landscape(gamma, 21)
    print(f"=== {name}: gamma = {gamma:.4f} ===")
    print("Alice's payoff, t_a down (top=-1), t_b across (left=-1):")
    lo, hi = payoff.min(), payoff.max()
    for row in payoff:
        cells = "".join(GLYPHS[int((v - lo) / (hi - lo + 1e-12) * (len(GLYPHS) - 1))] for v in row)
        print("   " + cells)
    print(f"   range [{lo:.2f}, {hi:.2f}]; corners: "
          f"QQ={payoff[0, 0]:.2f}, QD={payoff[0, -1]:.2f}, "
          f"DQ={payoff[-1, 0]:.2f}, DD={payoff[-1, -1]:.2f}\n")

print("Writing full-resolution CSVs (any plotting tool can render them):")
for preset in ("fig2", "fig3", "fig4"):
    cli(["landscape", "--preset", preset, "--steps", "81",
         "--out", os.path.join(OUT_DIR, f"landscape_{preset}.csv")])
