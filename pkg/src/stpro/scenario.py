"""Scenario files: which checks to run, with which parameters, and the reports.

A scenario is an INI file.  ``[scenario]`` holds ``seed`` and ``name``;
every other section is one entry whose ``check`` key names the verifier.
Reports come in two forms: line-delimited JSON (one record per identity,
sorted keys, no timings, so identical runs are byte-identical) and text.
"""

from __future__ import annotations

import configparser
import json
import os

from . import modmat
from . import presentation as pres
from .algebra import AlgebraError, MatrixAlgebra, check_crossed_module, homotope, ideal
from .checks import FAIL, INCONCLUSIVE, PASS, CheckReport, capture_identities, encode, replay, worst
from .coeffring import BaseRing, RingError
from .oddform import OddFormError, build_split_oddform, check_oddform_axioms
from .rootsys import RootSystemError, parse_root, root_system
from .steinberg import (LinearRealization, UnitaryRealization, check_chevalley_extraction,
                        check_crossed_square, check_gauss_decomposition, check_gluing_relations,
                        check_product_injectivity, check_relative_presentation, check_steinberg_relations,
                        check_weak_action_identities, generator_type_elements, linear_block)
from .tower import (HypothesisFailure, LinearParam, UnitaryParam, check_colocalization_bullets, check_cosheaf,
                    check_transitions, colocalization)

SEED_ENV = "STPRO_SEED"


class ConfigError(ValueError):
    pass


def default_seed():
    return int(os.environ.get(SEED_ENV, "0"))


# -- parameter parsing ---------------------------------------------------------

class Params:
    """Typed access to one entry's keys; errors name the entry and key."""

    def __init__(self, where, values):
        self.where = where
        self.values = dict(values)

    def _raw(self, key, default):
        if key not in self.values:
            if default is _REQUIRED:
                raise ConfigError(f"[{self.where}] missing key {key!r}")
            return default
        return self.values[key]

    def str(self, key, default=None):
        v = self._raw(key, default)
        return v if v is None else str(v).strip()

    def int(self, key, default=None):
        v = self._raw(key, default)
        try:
            return v if v is None else int(v)
        except ValueError:
            raise ConfigError(f"[{self.where}] {key} = {v!r} is not an integer") from None

    def ints(self, key, default=None):
        v = self._raw(key, default)
        if v is None or isinstance(v, (list, tuple)):
            return v
        try:
            return [int(x) for x in str(v).replace(",", " ").split()]
        except ValueError:
            raise ConfigError(f"[{self.where}] {key} = {v!r} is not a list of integers") from None

    def ring(self, key="base"):
        tag = self.str(key, _REQUIRED)
        try:
            return BaseRing.parse(tag)
        except RingError:
            raise ConfigError(f"[{self.where}] unknown ring tag {tag!r}") from None

    def algebra(self, key="algebra"):
        tag = self.str(key, _REQUIRED)
        try:
            return MatrixAlgebra.parse(tag)
        except RingError:
            raise ConfigError(f"[{self.where}] unknown ring tag {tag.split(':')[1]!r}") from None
        except AlgebraError as exc:
            raise ConfigError(f"[{self.where}] {exc}") from None

    def phi(self, key="phi"):
        tag = self.str(key, _REQUIRED)
        try:
            return root_system(tag)
        except RootSystemError as exc:
            raise ConfigError(f"[{self.where}] {exc}") from None


_REQUIRED = object()


def realization(p: Params):
    """Linear (phi = A_l, algebra) or unitary (phi = BC_l, base, middle)."""
    rs = p.phi()
    if rs.type_tag == "A":
        return LinearRealization(p.algebra(), rs)
    if rs.type_tag == "BC":
        O, F = build_split_oddform(p.ring(), rs.rank, p.int("middle", 1))
        return UnitaryRealization(O, F)
    raise ConfigError(f"[{p.where}] no realization for {rs.tag}")


# -- entry runners -------------------------------------------------------------

def _roots(p, seed):
    rs = p.phi()
    l = rs.rank
    expected = {"A": l * (l + 1), "B": 2 * l * l, "C": 2 * l * l, "BC": 2 * l * l + 2 * l, "D": 2 * l * (l - 1),
                "G2": 12, "F4": 48, "E6": 72, "E7": 126, "E8": 240}[rs.type_tag]
    rep = CheckReport(f"roots[{rs.tag}]", {"phi": rs.tag})
    rep.add(f"|Phi| = {len(rs)} matches the type formula {expected}", len(rs) == expected)
    rep.add("Phi = -Phi", all(tuple(-x for x in r) in rs for r in rs), len(rs))
    rep.notes.update({"roots": len(rs), "ultrashort": sum(rs.is_ultrashort(r) for r in rs)})
    return [rep]


def _oddform(p, seed):
    try:
        O, F = build_split_oddform(p.ring(), p.int("rank", 3), p.int("middle", 1),
                                   p.str("involution", "antidiagonal"), p.str("parameter", "maximal"))
    except OddFormError as exc:
        raise ConfigError(f"[{p.where}] {exc}") from None
    return [check_oddform_axioms(O, F, seed, p.int("budget", 1000))]


def _steinberg(p, seed):
    real = realization(p)
    return [check_steinberg_relations(real, seed, p.int("budget", 1000)),
            check_product_injectivity(real, seed=seed, samples=p.int("samples", 10_000))]


def _chevalley(p, seed):
    return [check_chevalley_extraction(realization(p), seed, p.int("budget", 1000))]


def _crossed_module(p, seed):
    A = p.algebra()
    labels = p.ints("labels", None) or list(range(A.N))
    depth = p.int("depth", 4)
    out = []
    for s in labels:
        rep = check_crossed_module(homotope(A, s), seed, p.int("budget", 2000))
        rep.rename(f"crossed-module[{A.tag}^({s})]")
        out.append(rep)
    for s in labels:
        out.append(check_transitions(colocalization(A, s, depth), depth, seed, p.int("budget", 200)))
    return out


def _relative(p, seed):
    return [check_relative_presentation(ideal(p.algebra(), p.int("ideal", 2)), seed, p.int("budget", 1000))]


def _crossed_square(p, seed):
    return [check_crossed_square(ideal(p.algebra(), p.int("ideal", 2)), seed, p.int("budget", 1000))]


def _cover(p, depth=4):
    return p.ring(), p.int("s", 1), p.ints("ks", [3, 4]), p.int("depth", depth)


def _cosheaf(p, seed):
    K, s, ks, depth = _cover(p)
    rs = p.phi()
    budget = p.int("budget", 500)
    out = []
    if rs.type_tag == "A":
        A = MatrixAlgebra.full(K, rs.rank + 1)
        for r in rs:
            rep = check_cosheaf(LinearParam(A, linear_block(r)), K, s, ks, depth, seed, budget)
            rep.rename(f"cosheaf[{rs.format_root(r)}]")
            out.append(rep)
    elif rs.type_tag == "BC":
        O, _ = build_split_oddform(K, rs.rank, p.int("middle", 1))
        for j in range(1, rs.rank + 1):
            rep = check_cosheaf(UnitaryParam(O, j), K, s, ks, depth, seed, budget)
            rep.rename(f"cosheaf[e{j}]")
            out.append(rep)
    else:
        raise ConfigError(f"[{p.where}] cosheaf check needs A_l or BC_l")
    return out


def _gluing(p, seed):
    K, s, ks, depth = _cover(p)
    A = MatrixAlgebra.full(K, p.int("n", 4))
    return [check_gluing_relations(A, K, s, ks, depth, seed, p.int("budget", 500))]


def _weak_action(p, seed):
    K, s, ks, depth = _cover(p, 3)
    A = MatrixAlgebra.full(K, p.int("n", 4))
    out = []
    for name, g in generator_type_elements(A).items():
        rep = check_weak_action_identities(A, K, s, ks, g, depth, seed, p.int("budget", 300))
        rep.rename(f"weak-action[{name}]")
        out.append(rep)
    return out


def _gauss(p, seed):
    return [check_gauss_decomposition(p.algebra(), seed, p.int("samples", 1000))]


def _colocalization(p, seed):
    A = p.algebra()
    return [check_colocalization_bullets(A, p.int("k", 2), p.int("n", 2), tuple(p.ints("ks", [2, 3])),
                                         p.int("depth", 3), seed, p.int("budget", 200))]


def _enumerate(p, seed):
    real = realization(p)
    limit = p.int("limit", 1_000_000)
    P = pres.steinberg_presentation(real)
    rep = CheckReport(f"enumerate[{real.tag}]", {"limit": limit})
    try:
        T = pres.todd_coxeter(P, limit=limit)
    except pres.Overflow as exc:
        rep.add("coset enumeration", False, status=INCONCLUSIVE, witness={"overflow": str(exc)})
        rep.notes.update(P.stats())
        return [rep]
    expected = _expected_image_order(real)
    cert = pres.certify_steinberg(P, real, T, expected)
    cert.notes.update(P.stats())
    cert.notes["K2_order"] = cert.notes["kernel_order"]
    out = [cert]
    alpha = p.str("eliminate", None)
    if alpha:
        try:
            root = parse_root(alpha, real.rs.dim, real.rs)
        except RootSystemError as exc:
            raise ConfigError(f"[{p.where}] {exc}") from None
        erep, _ = pres.check_root_elimination(P, root, real, limit)
        out.append(erep)
    return out


def _expected_image_order(real):
    """|SL_n(F_p)| = |GL_n(F_p)| / (p - 1) when the carrier is M_n(F_p), else None.

    Over a field the elementary matrices generate SL_n, which is the image of St.
    """
    N = real.N
    if isinstance(real, LinearRealization) and len(modmat._factor(N)) == 1 and modmat._factor(N)[0][1] == 1:
        return modmat.gl_order(real.n, N) // (N - 1)
    return None


RUNNERS = {
    "roots": _roots,
    "oddform": _oddform,
    "steinberg": _steinberg,
    "chevalley": _chevalley,
    "crossed-module": _crossed_module,
    "relative": _relative,
    "crossed-square": _crossed_square,
    "cosheaf": _cosheaf,
    "gluing": _gluing,
    "weak-action": _weak_action,
    "gauss": _gauss,
    "colocalization": _colocalization,
    "enumerate": _enumerate,
}


# -- scenarios -----------------------------------------------------------------

PAPER_SUITE = """
[scenario]
name = paper-suite
seed = 0

[steinberg A3 z2]
check = steinberg
phi = A3
algebra = m4:z2

[steinberg A3 z4]
check = steinberg
phi = A3
algebra = m4:z4

[steinberg BC3 z2]
check = steinberg
phi = BC3
base = z2
middle = 1

[chevalley A3 z4]
check = chevalley
phi = A3
algebra = m4:z4

[chevalley BC3 z2]
check = chevalley
phi = BC3
base = z2
middle = 1

[oddform z4 m0]
check = oddform
base = z4
rank = 3
middle = 0
budget = 10000

[oddform z4 m1]
check = oddform
base = z4
rank = 3
middle = 1
budget = 10000

[homotopes z12]
check = crossed-module
algebra = m1:z12
depth = 4

[cosheaf A3]
check = cosheaf
phi = A3
base = z12
s = 1
ks = 3 4
depth = 4

[cosheaf BC3]
check = cosheaf
phi = BC3
base = z12
middle = 1
s = 1
ks = 3 4
depth = 4

[gluing]
check = gluing
base = z12
s = 1
ks = 3 4
depth = 4

[crossed square]
check = crossed-square
algebra = m4:z4
ideal = 2
budget = 10000

[gauss]
check = gauss
algebra = m4:z8
samples = 1000

[weak action]
check = weak-action
base = z12
s = 1
ks = 3 4
depth = 3

[enumerate A3 f2]
check = enumerate
phi = A3
algebra = m4:f2
eliminate = e1-e2
"""


def load(text, source="<scenario>"):
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text, source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    meta = dict(cp["scenario"]) if cp.has_section("scenario") else {}
    entries = []
    for name in cp.sections():
        if name == "scenario":
            continue
        values = dict(cp[name])
        kind = values.pop("check", None)
        if kind not in RUNNERS:
            raise ConfigError(f"[{name}] unknown check {kind!r}")
        entries.append((name, kind, values))
    return meta, entries


def load_file(path):
    if path == "paper-suite":
        return load(PAPER_SUITE, "paper-suite")
    with open(path) as f:
        return load(f.read(), path)


def run_entry(name, kind, values, seed):
    p = Params(name, values)
    try:
        return RUNNERS[kind](p, seed)
    except HypothesisFailure as exc:
        rep = CheckReport(f"{kind}[{name}]")
        rep.add("hypotheses", False, status=INCONCLUSIVE, witness={"reason": str(exc)})
        return [rep]


def run(meta, entries, seed=None, on_entry=None):
    """Run every entry; returns a list of (name, kind, values, reports)."""
    if seed is None:
        seed = int(meta.get("seed", default_seed()))
    out = []
    for name, kind, values in entries:
        reports = run_entry(name, kind, values, seed)
        out.append((name, kind, values, reports))
        if on_entry:
            on_entry(name, reports)
    return seed, out


def records(seed, results):
    """Line-delimited machine report: one record per identity, then one per entry."""
    lines = []
    for name, kind, values, reports in results:
        for rep in reports:
            for r in rep.results:
                d = r.as_dict()
                d.update({"entry": name, "kind": kind, "seed": seed})
                if r.status != PASS:
                    d["params"] = values  # enough to replay this record on its own
                lines.append(d)
        lines.append({"entry": name, "kind": kind, "seed": seed, "params": values,
                      "status": worst(rep.status for rep in reports) if reports else PASS,
                      "notes": {rep.name: encode(rep.notes) for rep in reports if rep.notes}})
    status = worst(rec["status"] for rec in lines) if lines else PASS
    lines.append({"summary": True, "seed": seed, "entries": len(results), "status": status})
    return [json.dumps(encode(d), sort_keys=True) for d in lines]


def text_report(seed, results):
    out = []
    for name, kind, _values, reports in results:
        out.append(f"== {name} ({kind}) ==")
        out.extend(rep.summary() for rep in reports)
        for rep in reports:
            if rep.notes:
                out.append(f"    notes[{rep.name}]: {json.dumps(encode(rep.notes), sort_keys=True)}")
    statuses = [rep.status for *_x, reps in results for rep in reps]
    out.append(f"overall: {worst(statuses) if statuses else PASS} (seed {seed})")
    return "\n".join(out)


EXIT = {PASS: 0, INCONCLUSIVE: 2, FAIL: 1}


def replay_record(record, scenario_entries=None):
    """Re-evaluate the single failing case named by a machine-report record.

    Returns (holds, detail).  Identities run through the shared checker are
    replayed exactly; other results are re-derived by re-running the entry.
    """
    if "identity" not in record:
        raise ConfigError("record is an entry summary, not an identity result")
    kind = record["kind"]
    values = record.get("params")
    if values is None and scenario_entries is not None:
        values = next(v for n, k, v in scenario_entries if n == record["entry"])
    if values is None:
        raise ConfigError("record carries no parameters; pass the scenario file")
    w = record.get("witness") or {}
    seed = record["seed"]
    if "index" in w:
        with capture_identities() as found:
            run_entry(record["entry"], kind, values, seed)
        for check, s, ids in found:
            if check == w["check"] and s == w["seed"] and any(i.name == w["identity"] for i in ids):
                ok, case = replay(check, ids, w["identity"], s, w["index"])
                return ok, {"check": check, "identity": w["identity"], "index": w["index"], "case": encode(case)}
    for rep in run_entry(record["entry"], kind, values, seed):
        for r in rep.results:
            if r.name == record["identity"] and r.check == record["check"]:
                return r.status == PASS, r.as_dict()
    raise ConfigError(f"identity {record['identity']!r} not found on replay")


def entry_records(path):
    """Records of a machine report (JSONL) file."""
    with open(path) as f:
        return [json.loads(line) for line in f if line.strip()]
