"""Play single rounds of the entanglement-tunable Prisoner's Dilemma.

Walks the classic story: with no entanglement the game is the familiar
dilemma, with maximal entanglement the quantum move dissolves it.
"""

import math

from qdilemma import COOPERATE, DEFECT, QUANTUM, play

NAMES = {COOPERATE: "cooperate", DEFECT: "defect", QUANTUM: "quantum"}


def show(gamma, sa, sb):
    o = play(gamma, sa, sb)
    probs = ", ".join(f"P_{lab}={p:.3f}" for lab, p in zip(("CC", "CD", "DC", "DD"), o.probabilities))
    print(f"  {NAMES[sa]:>9} vs {NAMES[sb]:<9} -> payoffs ({o.payoff_a:.3f}, {o.payoff_b:.3f})   [{probs}]")


print("=== gamma = 0: the classical game ===")
for sa in (COOPERATE, DEFECT):
    for sb in (COOPERATE, DEFECT):
        show(0.0, sa, sb)
print("Defection dominates, mutual defection pays (1, 1): the dilemma.\n")

print("=== gamma = pi/2: maximal entanglement ===")
show(math.pi / 2, DEFECT, DEFECT)
show(math.pi / 2, QUANTUM, DEFECT)
show(math.pi / 2, DEFECT, QUANTUM)
show(math.pi / 2, QUANTUM, QUANTUM)
print("Mutual quantum play pays (3, 3) and no unilateral deviation beats it.\n")

print("=== in between: the quantum move against a defector ===")
for gamma in (0.2, 0.5, 0.8, 1.1, math.pi / 2):
    o = play(gamma, QUANTUM, DEFECT)
    print(f"  gamma={gamma:.2f}: quantum player earns {o.payoff_a:.3f} "
          f"(= 5 sin^2 gamma = {5 * math.sin(gamma) ** 2:.3f})")
