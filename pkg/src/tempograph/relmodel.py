"""Relation corpus: typed predicates, entity pairs, time intervals and ingestion.

Corpus files are JSON Lines, one relation record per line::

    {"pred": "beat", "type1": "organization", "type2": "organization",
     "arg1": "Arsenal", "arg2": "Man_United",
     "timexes": [{"start": "2018-03-10", "end": "2018-03-10"}],
     "doc_date": "2018-03-11", "doc_id": "a17"}

Dates are converted to integer day indices (days since 1970-01-01) at parse time.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional

log = logging.getLogger(__name__)

EPOCH = date(1970, 1, 1).toordinal()


class TempographError(Exception):
    """Base class for data errors raised by this package."""


class CorpusFormatError(TempographError):
    pass


def day_index(iso: str) -> int:
    return date.fromisoformat(iso).toordinal() - EPOCH


def iso_date(day: int) -> str:
    return date.fromordinal(day + EPOCH).isoformat()


@dataclass(frozen=True, order=True)
class PredicateId:
    name: str
    type_pair: tuple[str, str]

    def __post_init__(self):
        if not self.name:
            raise ValueError("predicate name must be non-empty")
        if len(self.type_pair) != 2 or not all(self.type_pair):
            raise ValueError(f"bad type pair for {self.name!r}: {self.type_pair!r}")

    @property
    def type_label(self) -> str:
        return "#".join(self.type_pair)

    def __str__(self):
        return f"{self.name}[{self.type_label}]"


@dataclass(frozen=True, order=True)
class EntityPairId:
    arg1: str
    arg2: str

    def __str__(self):
        return f"{self.arg1}|{self.arg2}"


@dataclass(frozen=True, order=True)
class TimeInterval:
    """Closed interval of day indices; a one-day event has ``start == end``."""

    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"interval start {self.start} > end {self.end}")

    @classmethod
    def day(cls, d: int) -> "TimeInterval":
        return cls(d, d)


@dataclass(frozen=True)
class RelationInstance:
    predicate: PredicateId
    entity_pair: EntityPairId
    timex_intervals: tuple[TimeInterval, ...] = ()
    doc_date: Optional[int] = None
    doc_id: str = ""

    def to_record(self) -> dict:
        return {
            "pred": self.predicate.name,
            "type1": self.predicate.type_pair[0],
            "type2": self.predicate.type_pair[1],
            "arg1": self.entity_pair.arg1,
            "arg2": self.entity_pair.arg2,
            "timexes": [{"start": iso_date(iv.start), "end": iso_date(iv.end)}
                        for iv in self.timex_intervals],
            "doc_date": None if self.doc_date is None else iso_date(self.doc_date),
            "doc_id": self.doc_id,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "RelationInstance":
        if not isinstance(rec, dict):
            raise ValueError("record is not an object")
        missing = [k for k in ("pred", "type1", "type2", "arg1", "arg2") if k not in rec]
        if missing:
            raise ValueError(f"missing field(s): {', '.join(missing)}")
        timexes = rec.get("timexes") or []
        intervals = tuple(TimeInterval(day_index(t["start"]), day_index(t["end"])) for t in timexes)
        doc_date = rec.get("doc_date")
        return cls(
            predicate=PredicateId(str(rec["pred"]), (str(rec["type1"]), str(rec["type2"]))),
            entity_pair=EntityPairId(str(rec["arg1"]), str(rec["arg2"])),
            timex_intervals=intervals,
            doc_date=None if doc_date is None else day_index(doc_date),
            doc_id=str(rec.get("doc_id", "")),
        )


@dataclass
class Corpus:
    """Relation instances plus a predicate -> entity pair -> instance-position index.

    Treat as immutable once built.
    """

    instances: list[RelationInstance]
    index: dict[PredicateId, dict[EntityPairId, list[int]]] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.index and self.instances:
            self.index = _build_index(self.instances)

    def __len__(self):
        return len(self.instances)

    @property
    def predicates(self) -> list[PredicateId]:
        return sorted(self.index)

    @property
    def type_pairs(self) -> list[tuple[str, str]]:
        return sorted({p.type_pair for p in self.index})

    def count(self, p: PredicateId, ep: Optional[EntityPairId] = None) -> int:
        row = self.index.get(p, {})
        if ep is not None:
            return len(row.get(ep, ()))
        return sum(len(v) for v in row.values())

    def by_entity_pair(self) -> dict[EntityPairId, dict[PredicateId, list[RelationInstance]]]:
        """Entity-pair-major view: ep -> predicate -> instances, in input order."""
        out: dict[EntityPairId, dict[PredicateId, list[RelationInstance]]] = {}
        for p, row in self.index.items():
            for ep, positions in row.items():
                out.setdefault(ep, {})[p] = [self.instances[i] for i in positions]
        return out

    def restrict(self, keep: Callable[[RelationInstance], bool]) -> "Corpus":
        return Corpus([inst for inst in self.instances if keep(inst)])


def _build_index(instances: Iterable[RelationInstance]):
    index: dict[PredicateId, dict[EntityPairId, list[int]]] = {}
    for i, inst in enumerate(instances):
        index.setdefault(inst.predicate, {}).setdefault(inst.entity_pair, []).append(i)
    return index


def parse_type_filter(spec: Optional[str]) -> Optional[Callable[[tuple[str, str]], bool]]:
    """``"organization#organization"`` -> predicate on type pairs; ``None`` accepts all."""
    if spec is None:
        return None
    parts = spec.split("#")
    if len(parts) != 2 or not all(parts):
        raise ValueError(f"type filter must look like type1#type2, got {spec!r}")
    wanted = (parts[0], parts[1])
    return lambda tp: tp == wanted


def iter_records(lines: Iterable[str]) -> Iterator[tuple[int, str]]:
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def parse_corpus(lines: Iterable[str], type_filter=None, strict: bool = False,
                 source: str = "<corpus>") -> Corpus:
    if isinstance(type_filter, str):
        type_filter = parse_type_filter(type_filter)
    instances = []
    warnings = []
    for lineno, line in iter_records(lines):
        try:
            inst = RelationInstance.from_record(json.loads(line))
        except (ValueError, KeyError, TypeError) as exc:
            msg = f"{source}:{lineno}: malformed record: {exc}"
            if strict:
                raise CorpusFormatError(msg) from exc
            log.warning(msg)
            warnings.append(msg)
            continue
        if type_filter is None or type_filter(inst.predicate.type_pair):
            instances.append(inst)
    return Corpus(instances, warnings=warnings)


def load_corpus(path, type_filter=None, strict: bool = False) -> Corpus:
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as fh:
            return parse_corpus(fh, type_filter, strict, source=str(path))
    except OSError as exc:
        raise TempographError(f"cannot read corpus {path}: {exc}") from exc


def write_corpus(instances: Iterable[RelationInstance], path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for inst in instances:
            fh.write(json.dumps(inst.to_record(), sort_keys=True) + "\n")


@dataclass(frozen=True)
class CorpusStats:
    num_instances: int
    num_predicates: int
    num_entity_pairs: int
    num_timed: int
    timex_coverage: float

    def as_dict(self) -> dict:
        return {
            "instances": self.num_instances,
            "predicates": self.num_predicates,
            "entity_pairs": self.num_entity_pairs,
            "timed_instances": self.num_timed,
            "timex_coverage": self.timex_coverage,
        }


def corpus_stats(c: Corpus) -> CorpusStats:
    eps = Counter()
    for row in c.index.values():
        eps.update(row.keys())
    timed = sum(1 for inst in c.instances if inst.timex_intervals)
    n = len(c.instances)
    return CorpusStats(n, len(c.index), len(eps), timed, timed / n if n else 0.0)
