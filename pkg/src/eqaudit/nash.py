"""Nash equilibrium test and profile-wise exploitation certificates.

Whether a marginal profile is a Nash equilibrium is directly checkable:
every action a player uses must be a best response to the independent
mixture of the others. For profiles that fail, this module also produces
a certificate in the same currency as the correlated test: a deviation
kernel plus an aggregate fee per action profile, feasible at every
profile and with strictly positive expected income under the product
distribution. The certificate comes from the Farkas dual of the incentive
system with the joint distribution pinned to the product of `p`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import lp
from .correlated import deviation_pairs, incentive_coefficients
from .games import (
    DeviationKernel,
    Game,
    MarginalProfile,
    as_fraction,
    product_distribution,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class ProfilewiseScheme:
    """An aggregate fee per full action profile plus a deviation kernel.

    Feasible when the fee at each profile is at most the aggregate
    deviation surplus there.
    """

    fee: tuple[Fraction, ...]
    kernel: DeviationKernel

    def __post_init__(self):
        object.__setattr__(self, "fee", tuple(as_fraction(v) for v in self.fee))


@dataclass(frozen=True)
class IsNash:
    pass


@dataclass(frozen=True)
class Exploitable:
    scheme: ProfilewiseScheme
    expected_profit: Fraction


NashVerdict = IsNash | Exploitable


def expected_payoff(game: Game, p: MarginalProfile, i: int, action: int) -> Fraction:
    """Player `i`'s expected payoff for playing `action` against the
    independent mixture of everyone else."""
    total = _ZERO
    for flat, profile in enumerate(game.profiles()):
        if profile[i] != action:
            continue
        weight = _ONE
        for j, aj in enumerate(profile):
            if j != i:
                weight *= p.probs[j][aj]
                if not weight:
                    break
        if weight:
            total += weight * game.payoffs[i][flat]
    return total


def is_nash(game: Game, p: MarginalProfile) -> bool:
    """True iff every supported action is a best response.

    Only actions with positive probability impose an inequality; actions
    off the support still count as deviation targets.
    """
    if p.shape != game.shape:
        raise ValueError("marginal profile shape does not match game")
    for i, k in enumerate(game.shape):
        values = [expected_payoff(game, p, i, a) for a in range(k)]
        best = max(values)
        for a in range(k):
            if p.probs[i][a] > 0 and values[a] < best:
                return False
    return True


def build_nash_system(game: Game, p: MarginalProfile) -> lp.LinearSystem:
    """Incentive system with the joint distribution pinned, entry by
    entry, to the product of `p`. Feasible exactly when `p` is Nash."""
    q = product_distribution(p)
    rows: list[lp.Row] = []
    for i, ai, aj in deviation_pairs(game):
        rows.append(lp.ge(incentive_coefficients(game, i, ai, aj), 0))
    for flat in range(game.num_profiles):
        indicator = [_ZERO] * game.num_profiles
        indicator[flat] = _ONE
        rows.append(lp.eq(indicator, q.probs[flat]))
    return lp.LinearSystem(game.num_profiles, tuple(rows), (True,) * game.num_profiles)


def test_nash_exploitability(game: Game, p: MarginalProfile) -> NashVerdict:
    """IsNash, or a verified profile-wise scheme with positive income.

    The direct best-response check runs first; the pinned feasibility
    system is only solved to extract a certificate, and the two routes
    must agree.
    """
    if is_nash(game, p):
        return IsNash()
    outcome = lp.solve_feasibility(build_nash_system(game, p))
    if not isinstance(outcome, lp.Infeasible):
        raise RuntimeError(
            "best-response check and pinned feasibility system disagree"
        )
    multipliers = outcome.multipliers
    shape = game.shape
    off_diag = [[[_ZERO] * k for _ in range(k)] for k in shape]
    index = 0
    for i, ai, aj in deviation_pairs(game):
        off_diag[i][ai][aj] = multipliers[index]
        index += 1
    raw_fee = list(multipliers[index:])

    max_row_sum = max(
        (sum(row) for player_rows in off_diag for row in player_rows),
        default=_ZERO,
    )
    scale = _ONE if max_row_sum <= 1 else _ONE / max_row_sum

    kernel_rows = []
    for i, k in enumerate(shape):
        player_rows = []
        for ai in range(k):
            row = [scale * v for v in off_diag[i][ai]]
            row[ai] = _ONE - sum(row)
            player_rows.append(tuple(row))
        kernel_rows.append(tuple(player_rows))
    fee = tuple(scale * v for v in raw_fee)
    scheme = ProfilewiseScheme(fee, DeviationKernel(tuple(kernel_rows)))

    q = product_distribution(p)
    profit = sum((qa * fa for qa, fa in zip(q.probs, fee)), _ZERO)
    return Exploitable(scheme, profit)
