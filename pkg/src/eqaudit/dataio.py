"""File formats for games, profiles, verdicts, certificates and play logs.

Everything structured is JSON with canonical serialization (sorted keys,
two-space indent, trailing newline), so identical values always produce
identical bytes. Rationals travel as strings like "7/4" or "9"; decimal
literals in input are converted exactly (0.1 becomes 1/10, never a binary
float). Payoff tensors, joint distributions and fee tables are flat lists
in row-major profile order: players in declaration order, actions in
declaration order, last player's action fastest.

Play logs are CSV with one column per player (header row holds player
ids). Columns may have different lengths; the histories are per player
and never aligned across players.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction

from .correlated import ActionwiseScheme, Compatible, Exploitable
from .games import DeviationKernel, Game, JointDistribution, MarginalProfile
from . import nash


class DataFormatError(ValueError):
    """Malformed input document."""


def parse_rational(value) -> Fraction:
    """Exact rational from an int, decimal string, or 'n/d' string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DataFormatError(f"not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DataFormatError(f"malformed rational {value!r}: {exc}") from None
    raise DataFormatError(f"cannot read a rational from {value!r}")


def rational_str(value: Fraction) -> str:
    return str(Fraction(value))


def _loads(text: str) -> dict:
    try:
        doc = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise DataFormatError("top-level JSON value must be an object")
    return doc


def canonical_json(doc) -> str:
    """Byte-stable serialization: sorted keys, two-space indent."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


_dumps = canonical_json


def _require(doc: dict, key: str):
    if key not in doc:
        raise DataFormatError(f"missing field {key!r}")
    return doc[key]


def parse_game(text: str) -> Game:
    """Read a game document: players, per-player action lists, and one
    row-major payoff list per player."""
    doc = _loads(text)
    players = _require(doc, "players")
    if not isinstance(players, list) or not all(isinstance(p, str) for p in players):
        raise DataFormatError("'players' must be a list of strings")
    actions_doc = _require(doc, "actions")
    payoffs_doc = _require(doc, "payoffs")
    actions = []
    payoffs = []
    for player in players:
        if player not in actions_doc:
            raise DataFormatError(f"no action list for player {player!r}")
        if player not in payoffs_doc:
            raise DataFormatError(f"no payoff list for player {player!r}")
        labels = actions_doc[player]
        if not isinstance(labels, list) or not all(isinstance(a, str) for a in labels):
            raise DataFormatError(f"actions for {player!r} must be a list of strings")
        actions.append(tuple(labels))
        payoffs.append(tuple(parse_rational(v) for v in payoffs_doc[player]))
    for key in actions_doc:
        if key not in players:
            raise DataFormatError(f"actions listed for unknown player {key!r}")
    try:
        return Game(tuple(players), tuple(actions), tuple(payoffs))
    except ValueError as exc:
        raise DataFormatError(str(exc)) from None


def emit_game(game: Game) -> str:
    return _dumps(
        {
            "players": list(game.players),
            "actions": {p: list(a) for p, a in zip(game.players, game.actions)},
            "payoffs": {
                p: [rational_str(v) for v in row]
                for p, row in zip(game.players, game.payoffs)
            },
        }
    )


def parse_marginals(text: str, game: Game) -> MarginalProfile:
    """Read one distribution per player, keyed by player id, values in
    action declaration order."""
    doc = _loads(text)
    rows = []
    for i, player in enumerate(game.players):
        if player not in doc:
            raise DataFormatError(f"no marginal distribution for player {player!r}")
        values = doc[player]
        if not isinstance(values, list) or len(values) != len(game.actions[i]):
            raise DataFormatError(
                f"marginals for {player!r} must list {len(game.actions[i])} values"
            )
        rows.append(tuple(parse_rational(v) for v in values))
    try:
        return MarginalProfile(tuple(rows))
    except ValueError as exc:
        raise DataFormatError(str(exc)) from None


def emit_marginals(game: Game, p: MarginalProfile) -> str:
    return _dumps(
        {
            player: [rational_str(v) for v in row]
            for player, row in zip(game.players, p.probs)
        }
    )


def _parse_kernel_doc(doc, game: Game) -> DeviationKernel:
    rows = []
    for i, player in enumerate(game.players):
        if player not in doc:
            raise DataFormatError(f"no kernel rows for player {player!r}")
        k = len(game.actions[i])
        player_rows = doc[player]
        if not isinstance(player_rows, list) or len(player_rows) != k:
            raise DataFormatError(f"kernel for {player!r} must list {k} rows")
        rows.append(
            tuple(tuple(parse_rational(v) for v in row) for row in player_rows)
        )
    try:
        return DeviationKernel(tuple(rows))
    except ValueError as exc:
        raise DataFormatError(str(exc)) from None


def parse_kernel(text: str, game: Game) -> DeviationKernel:
    """Read a deviation kernel: per player, one row per source action."""
    return _parse_kernel_doc(_loads(text), game)


def _kernel_doc(game: Game, kernel: DeviationKernel) -> dict:
    return {
        player: [[rational_str(v) for v in row] for row in player_rows]
        for player, player_rows in zip(game.players, kernel.rows)
    }


def emit_kernel(game: Game, kernel: DeviationKernel) -> str:
    return _dumps(_kernel_doc(game, kernel))


def _scheme_doc(game: Game, scheme) -> dict:
    if isinstance(scheme, ActionwiseScheme):
        return {
            "type": "actionwise",
            "fees": {
                player: [rational_str(v) for v in row]
                for player, row in zip(game.players, scheme.fees)
            },
            "kernel": _kernel_doc(game, scheme.kernel),
        }
    if isinstance(scheme, nash.ProfilewiseScheme):
        return {
            "type": "profilewise",
            "fee": [rational_str(v) for v in scheme.fee],
            "kernel": _kernel_doc(game, scheme.kernel),
        }
    raise TypeError(f"not a transfer scheme: {scheme!r}")


def emit_scheme(game: Game, scheme) -> str:
    return _dumps(_scheme_doc(game, scheme))


def _parse_scheme_doc(doc: dict, game: Game):
    kind = _require(doc, "type")
    kernel = _parse_kernel_doc(_require(doc, "kernel"), game)
    if kind == "actionwise":
        fees_doc = _require(doc, "fees")
        fees = []
        for i, player in enumerate(game.players):
            if player not in fees_doc:
                raise DataFormatError(f"no fees for player {player!r}")
            row = fees_doc[player]
            if not isinstance(row, list) or len(row) != len(game.actions[i]):
                raise DataFormatError(
                    f"fees for {player!r} must list {len(game.actions[i])} values"
                )
            fees.append(tuple(parse_rational(v) for v in row))
        return ActionwiseScheme(tuple(fees), kernel)
    if kind == "profilewise":
        fee = _require(doc, "fee")
        if not isinstance(fee, list) or len(fee) != game.num_profiles:
            raise DataFormatError(
                f"'fee' must list {game.num_profiles} values in row-major order"
            )
        return nash.ProfilewiseScheme(tuple(parse_rational(v) for v in fee), kernel)
    raise DataFormatError(f"unknown scheme type {kind!r}")


def parse_scheme(text: str, game: Game):
    """Read a transfer scheme; returns an ActionwiseScheme or a
    ProfilewiseScheme depending on the document's 'type'."""
    return _parse_scheme_doc(_loads(text), game)


def _joint_values(game: Game, values) -> JointDistribution:
    if not isinstance(values, list) or len(values) != game.num_profiles:
        raise DataFormatError(
            f"witness must list {game.num_profiles} values in row-major order"
        )
    try:
        return JointDistribution(game.shape, tuple(parse_rational(v) for v in values))
    except ValueError as exc:
        raise DataFormatError(str(exc)) from None


def emit_verdict(game: Game, verdict) -> str:
    """Serialize any analyzer verdict."""
    if isinstance(verdict, Compatible):
        doc = {
            "verdict": "compatible",
            "witness": [rational_str(v) for v in verdict.witness.probs],
        }
    elif isinstance(verdict, Exploitable):
        doc = {
            "verdict": "exploitable",
            "expected_profit": rational_str(verdict.expected_profit),
            "scheme": _scheme_doc(game, verdict.scheme),
        }
    elif isinstance(verdict, nash.IsNash):
        doc = {"verdict": "nash"}
    elif isinstance(verdict, nash.Exploitable):
        doc = {
            "verdict": "exploitable",
            "expected_profit": rational_str(verdict.expected_profit),
            "scheme": _scheme_doc(game, verdict.scheme),
        }
    else:
        raise TypeError(f"not a verdict: {verdict!r}")
    return _dumps(doc)


def parse_verdict(text: str, game: Game):
    """Inverse of emit_verdict."""
    doc = _loads(text)
    kind = _require(doc, "verdict")
    if kind == "compatible":
        return Compatible(_joint_values(game, _require(doc, "witness")))
    if kind == "nash":
        return nash.IsNash()
    if kind == "exploitable":
        scheme = _parse_scheme_doc(_require(doc, "scheme"), game)
        profit = parse_rational(_require(doc, "expected_profit"))
        if isinstance(scheme, ActionwiseScheme):
            return Exploitable(scheme, profit)
        return nash.Exploitable(scheme, profit)
    raise DataFormatError(f"unknown verdict {kind!r}")


def parse_certificate(text: str, game: Game):
    """Read any checkable object: a scheme document, a witness document
    ({"witness": [...]}) or a whole verdict document. Returns
    ("witness", JointDistribution), ("actionwise", scheme) or
    ("profilewise", scheme)."""
    doc = _loads(text)
    if "verdict" in doc:
        verdict = parse_verdict(text, game)
        if isinstance(verdict, Compatible):
            return "witness", verdict.witness
        if isinstance(verdict, (Exploitable, nash.Exploitable)):
            scheme = verdict.scheme
            kind = "actionwise" if isinstance(scheme, ActionwiseScheme) else "profilewise"
            return kind, scheme
        raise DataFormatError("verdict document carries nothing checkable")
    if "witness" in doc:
        return "witness", _joint_values(game, doc["witness"])
    if "type" in doc:
        scheme = _parse_scheme_doc(doc, game)
        kind = "actionwise" if isinstance(scheme, ActionwiseScheme) else "profilewise"
        return kind, scheme
    raise DataFormatError("certificate document has no recognizable payload")


def emit_surplus(game: Game, values) -> str:
    """Table of per-profile deviation surpluses, row-major."""
    values = tuple(values)
    if len(values) != game.num_profiles:
        raise ValueError("surplus table length does not match game")
    return _dumps(
        {
            "players": list(game.players),
            "profiles": [list(game.profile_labels(a)) for a in game.profiles()],
            "surplus": [rational_str(v) for v in values],
        }
    )


@dataclass(frozen=True)
class PlayLog:
    """Independently observed per-player action histories."""

    players: tuple[str, ...]
    sequences: tuple[tuple[str, ...], ...]

    def sequence_for(self, player: str) -> tuple[str, ...]:
        try:
            return self.sequences[self.players.index(player)]
        except ValueError:
            raise KeyError(f"no history for player {player!r}") from None


def parse_play_log(text: str) -> PlayLog:
    """Read a CSV play log: header row of player ids, one column per
    player, empty cells ignored (histories may differ in length)."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataFormatError("play log is empty") from None
    header = [h.strip() for h in header]
    if any(not h for h in header):
        raise DataFormatError("play log header has an empty player id")
    if len(set(header)) != len(header):
        raise DataFormatError("play log header repeats a player id")
    columns: list[list[str]] = [[] for _ in header]
    for row in reader:
        for j, cell in enumerate(row[: len(header)]):
            cell = cell.strip()
            if cell:
                columns[j].append(cell)
    return PlayLog(tuple(header), tuple(tuple(c) for c in columns))


def empirical_marginals(game: Game, log: PlayLog) -> MarginalProfile:
    """Exact per-player action frequencies from a play log."""
    rows = []
    for i, player in enumerate(game.players):
        try:
            history = log.sequence_for(player)
        except KeyError as exc:
            raise DataFormatError(str(exc)) from None
        if not history:
            raise DataFormatError(f"empty history for player {player!r}")
        counts = [0] * len(game.actions[i])
        for label in history:
            try:
                counts[game.action_index(i, label)] += 1
            except ValueError as exc:
                raise DataFormatError(str(exc)) from None
        rows.append(tuple(Fraction(c, len(history)) for c in counts))
    return MarginalProfile(tuple(rows))
