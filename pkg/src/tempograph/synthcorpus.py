"""Seeded synthetic sports league with known entailment structure.

Teams meet on a round-robin schedule. Each match is covered by a few articles;
every article yields one outcome relation and one play relation sharing the
same argument order (winner first for win predicates, loser first for lose
predicates, home team first for ties). Articles appear a few days after the
match and each relation carries the true match day as a time expression with
some probability.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field
from datetime import date
from pathlib import Path
from typing import Optional

from .evalkit import CLASSES, EntailmentPair, ParaphraseClusters, generate_pairs
from .relmodel import (Corpus, EntityPairId, PredicateId, RelationInstance, TempographError,
                       TimeInterval, day_index, iso_date)

# Cluster sizes follow the published dataset: 26 win, 8 lose, 3 tie, 5 play.
DEFAULT_LEXICON = {
    "win": ["beat", "defeat", "crush", "outscore", "top", "knock.off", "outplay", "edge", "thrash",
            "overcome", "rout", "hammer", "trounce", "outlast", "down", "eliminate", "dispatch", "upset",
            "sink", "stun", "blank", "shut.out", "rally.past", "cruise.past", "hold.off", "dominate"],
    "lose": ["lose.to", "fall.to", "lose.against", "be.beat.by", "succumb.to", "go.down.to",
             "be.defeat.by", "bow.to"],
    "tie": ["tie.with", "draw.with", "draw.against"],
    "play": ["play", "face", "vs", "go.against", "meet"],
}

TEAM_NAMES = [
    "Arsenal", "Man_United", "Chelsea", "Liverpool", "Everton", "Leeds", "Fulham", "Burnley",
    "Wolves", "Brighton", "Villa", "Spurs", "Newcastle", "Southampton", "West_Ham", "Watford",
]


class ConfigError(TempographError):
    pass


@dataclass
class LeagueConfig:
    num_teams: int = 8
    num_matchdays: int = 14
    matchday_spacing: int = 7
    articles_per_match: int = 3
    report_lag_max: int = 2
    timex_probability: float = 0.19
    predicate_lexicon: dict[str, list[str]] = field(default_factory=lambda: {k: list(v) for k, v in DEFAULT_LEXICON.items()})
    # home win, home loss, tie
    outcome_probabilities: tuple[float, float, float] = (0.4, 0.35, 0.25)
    rng_seed: int = 0
    start_date: str = "2019-01-05"
    type_pair: tuple[str, str] = ("organization", "organization")
    # optional fixed home-perspective outcomes ("win"/"lose"/"tie"), one per match in schedule order
    outcome_schedule: Optional[list[str]] = None

    def validate(self) -> None:
        if self.num_teams < 2:
            raise ConfigError("num_teams must be at least 2")
        if self.num_matchdays < 1:
            raise ConfigError("num_matchdays must be at least 1")
        if self.matchday_spacing < 1:
            raise ConfigError("matchday_spacing must be at least 1")
        if self.articles_per_match < 1:
            raise ConfigError("articles_per_match must be at least 1")
        if self.report_lag_max < 0:
            raise ConfigError("report_lag_max must be non-negative")
        if not 0 <= self.timex_probability <= 1:
            raise ConfigError("timex_probability must lie in [0, 1]")
        probs = self.outcome_probabilities
        if len(probs) != 3 or any(p < 0 for p in probs) or abs(sum(probs) - 1) > 1e-9:
            raise ConfigError("outcome_probabilities must be three non-negative numbers summing to 1")
        for cls in CLASSES:
            if not self.predicate_lexicon.get(cls):
                raise ConfigError(f"predicate_lexicon needs a non-empty {cls!r} list")
        if self.outcome_schedule is not None and any(o not in ("win", "lose", "tie") for o in self.outcome_schedule):
            raise ConfigError("outcome_schedule entries must be win, lose or tie")
        try:
            date.fromisoformat(self.start_date)
        except ValueError as exc:
            raise ConfigError(f"bad start_date: {exc}") from None
        # fails loudly on duplicate predicates across classes
        try:
            ParaphraseClusters.from_lexicon(self.predicate_lexicon)
        except TempographError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_dict(cls, d: dict) -> "LeagueConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config field(s): {', '.join(sorted(unknown))}")
        d = dict(d)
        for key in ("outcome_probabilities", "type_pair"):
            if key in d:
                d[key] = tuple(d[key])
        return cls(**d)

    @classmethod
    def load(cls, path) -> "LeagueConfig":
        try:
            return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Match:
    home: str
    away: str
    day: int
    outcome: str  # from the home team's side: win / lose / tie

    @property
    def winner(self) -> Optional[str]:
        return {"win": self.home, "lose": self.away}.get(self.outcome)

    @property
    def loser(self) -> Optional[str]:
        return {"win": self.away, "lose": self.home}.get(self.outcome)


@dataclass
class GroundTruth:
    matches: list[Match]
    pairs: list[EntailmentPair]

    def to_dict(self) -> dict:
        return {
            "matches": [{"home": m.home, "away": m.away, "date": iso_date(m.day), "outcome": m.outcome}
                        for m in self.matches],
            "pairs": [{"premise": p.premise, "hypothesis": p.hypothesis, "entails": p.entails,
                       "category": p.category.value} for p in self.pairs],
        }


def team_names(n: int) -> list[str]:
    if n <= len(TEAM_NAMES):
        return TEAM_NAMES[:n]
    return TEAM_NAMES + [f"Team_{k:03d}" for k in range(len(TEAM_NAMES), n)]


def round_robin(teams: list[str], num_rounds: int) -> list[list[tuple[str, str]]]:
    """Circle-method rounds, cycled; home and away swap on every other cycle."""
    ts = list(teams)
    if len(ts) % 2:
        ts.append(None)
    n = len(ts)
    base = []
    rot = ts[1:]
    for _ in range(n - 1):
        line = [ts[0]] + rot
        base.append([(line[i], line[n - 1 - i]) for i in range(n // 2)])
        rot = rot[-1:] + rot[:-1]
    rounds = []
    for r in range(num_rounds):
        games = base[r % (n - 1)]
        if (r // (n - 1)) % 2:
            games = [(b, a) for a, b in games]
        rounds.append([(a, b) for a, b in games if a is not None and b is not None])
    return rounds


def generate(cfg: LeagueConfig) -> tuple[Corpus, GroundTruth]:
    cfg.validate()
    rng = random.Random(cfg.rng_seed)
    lex = {k: list(v) for k, v in cfg.predicate_lexicon.items()}
    tp = tuple(cfg.type_pair)
    start = day_index(cfg.start_date)
    fixed = list(cfg.outcome_schedule) if cfg.outcome_schedule is not None else None

    matches = []
    for r, games in enumerate(round_robin(team_names(cfg.num_teams), cfg.num_matchdays)):
        day = start + r * cfg.matchday_spacing
        for home, away in games:
            if fixed is not None:
                if len(matches) >= len(fixed):
                    raise ConfigError("outcome_schedule is shorter than the schedule")
                outcome = fixed[len(matches)]
            else:
                outcome = rng.choices(("win", "lose", "tie"), weights=cfg.outcome_probabilities)[0]
            matches.append(Match(home, away, day, outcome))

    def relation(cls, arg1, arg2, m: Match, doc_date, doc_id):
        timexes = (TimeInterval.day(m.day),) if rng.random() < cfg.timex_probability else ()
        return RelationInstance(PredicateId(rng.choice(lex[cls]), tp), EntityPairId(arg1, arg2),
                                timexes, doc_date, doc_id)

    instances = []
    for k, m in enumerate(matches):
        for a in range(cfg.articles_per_match):
            doc_date = m.day + rng.randint(0, cfg.report_lag_max)
            doc_id = f"m{k:05d}-a{a}"
            if m.outcome == "tie":
                cls, order = "tie", (m.home, m.away)
            elif rng.random() < 0.5:
                cls, order = "win", (m.winner, m.loser)
            else:
                cls, order = "lose", (m.loser, m.winner)
            instances.append(relation(cls, *order, m, doc_date, doc_id))
            instances.append(relation("play", *order, m, doc_date, doc_id))

    pairs = generate_pairs(ParaphraseClusters.from_lexicon(lex))
    return Corpus(instances), GroundTruth(matches, pairs)


def min_meeting_gap(matches: list[Match]) -> Optional[int]:
    """Smallest number of days between two meetings of the same two teams."""
    seen: dict[frozenset, list[int]] = {}
    for m in matches:
        seen.setdefault(frozenset((m.home, m.away)), []).append(m.day)
    gaps = [b - a for days in seen.values() for a, b in zip(sorted(days), sorted(days)[1:])]
    return min(gaps) if gaps else None
