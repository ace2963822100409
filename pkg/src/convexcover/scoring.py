"""Quadratic contest scoring and leaderboard aggregation."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .model import InvalidSolution, ParseError, parse_instance, parse_solution
from .parallel import pmap
from .verify import verify_solution

log = logging.getLogger(__name__)


class InconsistentBest(ValueError):
    pass


class MissingInstance(LookupError):
    pass


def score_instance(best: int, team: int | None) -> Fraction:
    """``best**2 / team**2``; a missing or invalid submission scores 0."""
    if best < 1:
        raise ValueError("best piece count must be at least 1")
    if team is None:
        return Fraction(0)
    if team < best:
        raise InconsistentBest(f"team count {team} beats the best count {best}")
    return Fraction(best * best, team * team)


def rational_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass
class TeamScores:
    name: str
    counts: dict[str, int] = field(default_factory=dict)
    scores: dict[str, Fraction] = field(default_factory=dict)

    @property
    def total(self) -> Fraction:
        return sum(self.scores.values(), Fraction(0))


@dataclass
class ScoreTable:
    instances: list[str]
    best: dict[str, int]
    teams: list[TeamScores]

    def to_json(self) -> dict:
        return {
            "teams": [
                {
                    "name": t.name,
                    "total": rational_str(t.total),
                    "per_instance": {i: rational_str(t.scores[i]) for i in self.instances},
                }
                for t in self.teams
            ],
            "best": {i: self.best[i] for i in self.instances if i in self.best},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False) + "\n"

    def format_table(self) -> str:
        rows = [("team", "total", "~total")]
        for t in self.teams:
            rows.append((t.name, rational_str(t.total), f"{float(t.total):.3f}"))
        widths = [max(len(r[k]) for r in rows) for k in range(3)]
        return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows) + "\n"


def score_counts(counts: dict[str, dict[str, int | None]], instances: list[str]) -> ScoreTable:
    """Leaderboard from ``team -> instance -> piece count`` (``None`` or
    absent for no valid solution)."""
    best: dict[str, int] = {}
    for per in counts.values():
        for inst, k in per.items():
            if k is not None and (inst not in best or k < best[inst]):
                best[inst] = k
    teams = []
    for name in sorted(counts):
        t = TeamScores(name)
        for inst in instances:
            k = counts[name].get(inst)
            if k is not None:
                t.counts[inst] = k
            t.scores[inst] = score_instance(best[inst], k) if inst in best else Fraction(0)
        teams.append(t)
    teams.sort(key=lambda t: (-t.total, t.name))
    return ScoreTable(sorted(instances), best, teams)


def load_instances(instance_dir: str | Path) -> dict:
    out = {}
    for path in sorted(Path(instance_dir).glob("*.json")):
        inst = parse_instance(path.read_bytes())
        out[inst.name] = inst
    return out


def _check(job):
    inst, path = job
    try:
        sol = parse_solution(Path(path).read_bytes())
    except (ParseError, InvalidSolution) as exc:
        return path, None, f"unreadable: {exc}"
    report = verify_solution(inst, sol)
    if not report.valid:
        return path, None, report.summary()
    return path, sol.k, None


def build_leaderboard(instance_dir: str | Path, solutions_root: str | Path,
                      workers: int | None = None) -> ScoreTable:
    """Score every team directory under ``solutions_root``. Solutions that
    fail verification count as absent."""
    instances = load_instances(instance_dir)
    jobs = []
    owners = []
    for team_dir in sorted(p for p in Path(solutions_root).iterdir() if p.is_dir()):
        for path in sorted(team_dir.glob("*.json")):
            try:
                name = parse_solution(path.read_bytes()).instance_name
            except (ParseError, InvalidSolution) as exc:
                log.warning("%s: skipped, %s", path, exc)
                continue
            if name not in instances:
                raise MissingInstance(f"{path} refers to unknown instance {name!r}")
            jobs.append((instances[name], str(path)))
            owners.append((team_dir.name, name))
    counts: dict[str, dict[str, int | None]] = {
        p.name: {} for p in Path(solutions_root).iterdir() if p.is_dir()
    }
    for (team, name), (path, k, err) in zip(owners, pmap(_check, jobs, workers)):
        if err is not None:
            log.warning("%s: invalid solution counts as missing (%s)", path, err)
            continue
        prev = counts[team].get(name)
        if prev is None or k < prev:
            counts[team][name] = k
    return score_counts(counts, list(instances))
