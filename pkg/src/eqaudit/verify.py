"""Self-contained checks for every certificate the analyzers emit.

Each verifier re-derives its verdict from plain rational arithmetic over
the game data; none of them calls the feasibility solver, so a solver bug
cannot vouch for its own output. Scheme verifiers return the exact
expected fee income rather than a boolean: callers decide what sign they
require, since zero-income schemes are legal objects. An infeasible
scheme raises `SchemeViolation` carrying the first violating profile in
row-major order.
"""

from __future__ import annotations

from fractions import Fraction

from .correlated import is_correlated_equilibrium
from .games import (
    Game,
    JointDistribution,
    MarginalProfile,
    product_distribution,
    surplus,
)

_ZERO = Fraction(0)


class SchemeViolation(Exception):
    """A transfer scheme's pointwise inequality fails at some profile."""

    def __init__(self, profile, labels, shortfall):
        self.profile = tuple(profile)
        self.labels = tuple(labels)
        self.shortfall = shortfall
        super().__init__(
            f"scheme infeasible at profile {'/'.join(self.labels)}: "
            f"fees exceed deviation surplus by {shortfall}"
        )


def verify_witness(game: Game, p: MarginalProfile, q: JointDistribution) -> bool:
    """True iff `q` has exactly the marginals `p` and satisfies every
    incentive inequality."""
    if q.shape != game.shape or p.shape != game.shape:
        raise ValueError("shapes do not match game")
    for i in range(game.num_players):
        if q.marginal(i) != p.probs[i]:
            return False
    return is_correlated_equilibrium(game, q)


def verify_actionwise(game: Game, p: MarginalProfile, scheme) -> Fraction:
    """Check an action-wise scheme pointwise and return its expected
    fee income under `p`."""
    if scheme.kernel.shape != game.shape or p.shape != game.shape:
        raise ValueError("scheme shape does not match game")
    fees = scheme.fees
    for profile in game.profiles():
        fee_total = sum(
            (fees[i][a] for i, a in enumerate(profile)), _ZERO
        )
        slack = surplus(game, scheme.kernel, profile) - fee_total
        if slack < 0:
            raise SchemeViolation(profile, game.profile_labels(profile), -slack)
    return sum(
        (
            prob * fee
            for row, fee_row in zip(p.probs, fees)
            for prob, fee in zip(row, fee_row)
        ),
        _ZERO,
    )


def verify_profilewise(game: Game, p: MarginalProfile, scheme) -> Fraction:
    """Check a profile-wise scheme pointwise and return its expected fee
    income under the product distribution of `p`."""
    if scheme.kernel.shape != game.shape or p.shape != game.shape:
        raise ValueError("scheme shape does not match game")
    if len(scheme.fee) != game.num_profiles:
        raise ValueError("fee table length does not match game")
    for flat, profile in enumerate(game.profiles()):
        slack = surplus(game, scheme.kernel, profile) - scheme.fee[flat]
        if slack < 0:
            raise SchemeViolation(profile, game.profile_labels(profile), -slack)
    q = product_distribution(p)
    return sum((qa * fa for qa, fa in zip(q.probs, scheme.fee)), _ZERO)
