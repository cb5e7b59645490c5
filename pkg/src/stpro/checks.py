"""Identity checking with deterministic sampling, witnesses and replay.

Every verifier in the package is a list of :class:`Identity` objects.  An
identity enumerates its cases exhaustively when that is cheap and samples
them otherwise.  Sample ``i`` of identity ``name`` under seed ``s`` is
always drawn from the same generator, so a failure can be replayed from
(seed, name, index) alone.
"""

from __future__ import annotations

import itertools
import zlib
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
_RANK = {PASS: 0, INCONCLUSIVE: 1, FAIL: 2}


def worst(statuses) -> str:
    out = PASS
    for s in statuses:
        if _RANK[s] > _RANK[out]:
            out = s
    return out


def encode(x):
    """Best-effort JSON-friendly rendering of a case argument."""
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (list, tuple)):
        return [encode(y) for y in x]
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    if hasattr(x, "encode_witness"):
        return x.encode_witness()
    return repr(x)


def identity_rng(seed: int, check: str, name: str, index: int | None = None):
    salt = zlib.crc32(f"{check}/{name}".encode())
    words = [seed & 0xFFFFFFFF, salt] + ([] if index is None else [index])
    return np.random.default_rng(words)


@dataclass
class Identity:
    """A named predicate over cases.

    ``predicate(*case)`` returns True when the identity holds; it may also
    return a (bool, detail) pair.  ``exhaustive`` yields every case;
    ``sampler(rng)`` draws one.
    """

    name: str
    predicate: Callable
    exhaustive: Callable[[], Iterable] | None = None
    sampler: Callable | None = None
    fixed: Callable[[], Iterable] | None = None  # cases run before sampling
    stream: str | None = None  # identities sharing a stream see the same samples

    @property
    def mode(self):
        if self.exhaustive is not None:
            return "exhaustive"
        return "fixed+sampled" if self.fixed is not None else "sampled"

    def rng(self, check, seed, index):
        return identity_rng(seed, check, self.stream or self.name, index)

    def cases(self, check: str, seed: int, budget: int, cache=None):
        if self.exhaustive is not None:
            for i, case in enumerate(self.exhaustive()):
                yield i, case, "exhaustive"
            return
        i = 0
        if self.fixed is not None:
            if cache is not None:
                k = ("fixed", id(self.fixed))
                if k not in cache:
                    cache[k] = list(self.fixed())
                fixed = cache[k]
            else:
                fixed = self.fixed()
            for case in fixed:
                yield i, case, "fixed"
                i += 1
        for j in range(budget):
            if cache is not None and self.stream is not None:
                k = (self.stream, j)
                if k not in cache:
                    cache[k] = self.sampler(self.rng(check, seed, j))
                yield i + j, cache[k], "sampled"
            else:
                yield i + j, self.sampler(self.rng(check, seed, j)), "sampled"

    def case_at(self, check: str, seed: int, index: int):
        if self.exhaustive is not None:
            return next(itertools.islice(self.exhaustive(), index, None))
        if self.fixed is not None:
            fixed = list(self.fixed())
            if index < len(fixed):
                return fixed[index]
            index -= len(fixed)
        return self.sampler(self.rng(check, seed, index))

    def evaluate(self, case):
        out = self.predicate(*case)
        if isinstance(out, tuple):
            return bool(out[0]), out[1]
        return bool(out), None


@dataclass
class IdentityResult:
    check: str
    name: str
    status: str
    cases: int
    mode: str
    witness: dict | None = None

    def as_dict(self):
        d = {"check": self.check, "identity": self.name, "status": self.status, "cases": self.cases, "mode": self.mode}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class CheckReport:
    name: str
    params: dict = field(default_factory=dict)
    results: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def status(self):
        return worst(r.status for r in self.results) if self.results else PASS

    @property
    def ok(self):
        return self.status == PASS

    def failures(self):
        return [r for r in self.results if r.status == FAIL]

    def result(self, name):
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def extend(self, other: "CheckReport", prefix: str = ""):
        for r in other.results:
            self.results.append(IdentityResult(self.name, prefix + r.name, r.status, r.cases, r.mode, r.witness))
        self.notes.update({prefix + k: v for k, v in other.notes.items()})

    def rename(self, name):
        self.name = name
        for r in self.results:
            r.check = name
        return self

    def add(self, name, ok, cases=1, mode="exact", witness=None, status=None):
        if status is None:
            status = PASS if ok else FAIL
        self.results.append(IdentityResult(self.name, name, status, cases, mode, witness))

    def summary(self):
        lines = [f"[{self.status.upper()}] {self.name}"]
        for r in self.results:
            w = ""
            if r.witness is not None:
                w = f"  witness={r.witness}"
            lines.append(f"    {r.status:<12} {r.name} ({r.cases} {r.mode}){w}")
        return "\n".join(lines)


_CAPTURE = []  # stack of lists collecting (check, seed, identities) instead of running them


class capture_identities:
    """Collect the identity lists a verifier would run, without evaluating them."""

    def __enter__(self):
        self.found = []
        _CAPTURE.append(self.found)
        return self.found

    def __exit__(self, *exc):
        _CAPTURE.pop()
        return False


def run_identities(check: str, identities, seed: int = 0, budget: int = 1000, params=None, stop_at_first=True) -> CheckReport:
    report = CheckReport(check, dict(params or {}))
    if _CAPTURE:
        _CAPTURE[-1].append((check, seed, list(identities)))
        return report
    cache = {}
    for ident in identities:
        n = 0
        witness = None
        for i, case, _kind in ident.cases(check, seed, budget, cache):
            n += 1
            ok, detail = ident.evaluate(case)
            if not ok:
                witness = {"check": check, "identity": ident.name, "index": i, "mode": _kind, "seed": seed,
                           "case": encode(case)}
                if detail is not None:
                    witness["detail"] = encode(detail)
                if stop_at_first:
                    break
        report.results.append(IdentityResult(check, ident.name, FAIL if witness else PASS, n, ident.mode, witness))
    return report


def replay(check: str, identities, name: str, seed: int, index: int):
    """Re-evaluate a single case; returns (holds, case)."""
    for ident in identities:
        if ident.name == name:
            case = ident.case_at(check, seed, index)
            ok, _ = ident.evaluate(case)
            return ok, case
    raise KeyError(f"no identity named {name!r} in check {check!r}")
