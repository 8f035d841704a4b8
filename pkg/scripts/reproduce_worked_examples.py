#!/usr/bin/env python3
"""Walk through the two worked coordination-game audits end to end.

Builds the 2x3 coordination game, shows the deviation-surplus tables for
the two instructive kernels, audits three observed profiles for
correlated-play compatibility and for Nash equilibrium, and re-verifies
every certificate with the independent checkers. Everything is exact.
"""

from fractions import Fraction as F

from eqaudit import correlated, nash
from eqaudit.correlated import ActionwiseScheme, Compatible
from eqaudit.games import DeviationKernel, Game, MarginalProfile, surplus_table
from eqaudit.verify import verify_actionwise, verify_profilewise, verify_witness

PAY = ("9", "0", "0", "0", "1", "0")
GAME = Game(("P1", "P2"), (("T", "B"), ("L", "M", "R")), (PAY, PAY))

HALFHALF = DeviationKernel(
    (
        ((F(1), F(0)), (F(0), F(1))),
        ((F(1), F(0), F(0)), (F(0), F(1), F(0)), (F(1, 2), F(1, 2), F(0))),
    )
)
SWAP = DeviationKernel(
    (
        ((F(1), F(0)), (F(0), F(1))),
        ((F(1), F(0), F(0)), (F(1), F(0), F(0)), (F(0), F(0), F(1))),
    )
)

PROFILES = {
    "pure (T,L)": MarginalProfile(((F(1), F(0)), (F(1), F(0), F(0)))),
    "skewed (1/2,1/2)x(1/4,3/4,0)": MarginalProfile(
        ((F(1, 2), F(1, 2)), (F(1, 4), F(3, 4), F(0)))
    ),
    "mixed equilibrium (1/10,9/10)x(1/10,9/10,0)": MarginalProfile(
        ((F(1, 10), F(9, 10)), (F(1, 10), F(9, 10), F(0)))
    ),
}


def show_table(title, kernel):
    table = surplus_table(GAME, kernel)
    print(f"\n{title}")
    labels = GAME.actions[1]
    print("      " + "".join(f"{l:>8}" for l in labels))
    for r, row_label in enumerate(GAME.actions[0]):
        cells = [str(table[GAME.flat_index((r, c))]) for c in range(len(labels))]
        print(f"  {row_label}  " + "".join(f"{v:>8}" for v in cells))


def main():
    print("Coordination game payoffs (both players):", PAY)
    show_table("Surplus, dominated column sent to an even mix:", HALFHALF)
    show_table("Surplus, middle column sent to the first:", SWAP)

    print("\nExplicit schemes:")
    rebate_half = ActionwiseScheme(((F(0), F(0)), (F(0), F(0), F(1, 2))), HALFHALF)
    p = PROFILES["skewed (1/2,1/2)x(1/4,3/4,0)"]
    fee9 = ActionwiseScheme(((F(0), F(-10)), (F(0), F(9), F(0))), SWAP)
    print("  fee 9 on M, rebate 10 on B vs skewed profile:",
          verify_actionwise(GAME, p, fee9), "expected income")
    third = MarginalProfile(((F(1, 2), F(1, 2)), (F(1, 3), F(1, 3), F(1, 3))))
    print("  fee 1/2 on R vs uniform column profile:",
          verify_actionwise(GAME, third, rebate_half), "expected income")

    for name, profile in PROFILES.items():
        print(f"\nAuditing {name}")
        verdict = correlated.test_ce_compatibility(GAME, profile)
        if isinstance(verdict, Compatible):
            ok = verify_witness(GAME, profile, verdict.witness)
            print(f"  correlated play: compatible (witness verified: {ok})")
            print(f"    witness: {[str(v) for v in verdict.witness.probs]}")
        else:
            income = verify_actionwise(GAME, profile, verdict.scheme)
            print(f"  correlated play: exploitable, income {income}")
            print(f"    fees: {[[str(v) for v in row] for row in verdict.scheme.fees]}")
        nash_verdict = nash.test_nash_exploitability(GAME, profile)
        if isinstance(nash_verdict, nash.IsNash):
            print("  Nash: equilibrium")
        else:
            income = verify_profilewise(GAME, profile, nash_verdict.scheme)
            print(f"  Nash: exploitable, income {income}")


if __name__ == "__main__":
    main()
