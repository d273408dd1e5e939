"""Run configurations: parse, resolve, serialize, execute, explain.

A config is a YAML mapping::

    seed: 7
    horizon: 10000
    tolerance: 1/1000000000
    spaces: {L: 2}
    operators:
      I: id(2)
      A: {value: "[[1,2],[0,1]]", domain: L, codomain: L}
    indexsets: {bad: squares}
    sequences:
      R: piecewise(bad, scaled(n, I), scaled(1/n, I))
    queries:
      - {id: q1, kind: soc, args: {sequence: R, target: 'zero(2,2)'}}
    output: report.json

Exact rationals are written ``p/q``.  Quote expressions containing commas
inside flow mappings (``{...}``), where YAML would otherwise split them.
Names are resolved in file order, so a sequence may use operators, sets and
earlier sequences.
"""

from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import yaml

from . import __version__
from .convergence import (
    check_doc,
    check_dopc,
    check_o_convergence,
    check_soc,
    check_socp,
    check_stat_order_bounded,
    construct_witness,
    PreconditionError,
    decompose_stat_bounded,
    recheck,
)
from .convergence.theorems import THEOREMS, verify_theorem
from .lattice import DimensionError, LatticeVector, finite, frac_str
from .operators import Operator
from .syntax import Env, ParseError, ResolutionError, parse_index_set, parse_operator, parse_scalar, parse_sequence
from .verdict import DEFAULT_HORIZON, DEFAULT_TOLERANCE, CheckConfig, Status, Verdict, jsonify

KINDS = ("o", "doc", "dopc", "soc", "socp", "statbound", "decompose", "witness", "theorem")
_CHECKERS = {
    "o": check_o_convergence,
    "doc": check_doc,
    "dopc": check_dopc,
    "soc": check_soc,
    "socp": check_socp,
}
_ARGS = {
    "o": ({"sequence", "target"}, set()),
    "doc": ({"sequence", "target"}, {"test_vectors"}),
    "dopc": ({"sequence", "target"}, {"test_vectors"}),
    "soc": ({"sequence", "target"}, set()),
    "socp": ({"sequence", "target"}, {"test_vectors"}),
    "statbound": ({"sequence"}, set()),
    "decompose": ({"sequence"}, set()),
    "witness": ({"sequence", "target"}, {"mode"}),
    "theorem": ({"theorem"}, {"trials"}),
}
_TOP = {"seed", "horizon", "tolerance", "spaces", "operators", "indexsets", "sequences", "queries", "output"}


class ConfigError(ValueError):
    """Structurally invalid configuration (exit code 2)."""


@dataclass
class Query:
    id: str
    kind: str
    args: dict[str, Any]
    cfg: dict[str, Any] = field(default_factory=dict)
    resolved: dict[str, Any] = field(default_factory=dict, compare=False)


@dataclass
class RunConfig:
    seed: int = 0
    horizon: int = DEFAULT_HORIZON
    tolerance: Fraction = DEFAULT_TOLERANCE
    spaces: dict[str, int] = field(default_factory=dict)
    operators: dict[str, Any] = field(default_factory=dict)
    indexsets: dict[str, str] = field(default_factory=dict)
    sequences: dict[str, str] = field(default_factory=dict)
    queries: list[Query] = field(default_factory=list)
    output: str | None = None
    env: Env = field(default_factory=Env, compare=False, repr=False)

    def check_config(self, **over) -> CheckConfig:
        return CheckConfig(
            horizon=over.get("horizon", self.horizon),
            tolerance=over.get("tolerance", self.tolerance),
            seed=over.get("seed", self.seed),
        )


# parsing -------------------------------------------------------------------


def _mapping(x, what) -> dict:
    if x is None:
        return {}
    if not isinstance(x, dict):
        raise ConfigError(f"{what} must be a mapping")
    return x


def _int(x, what) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ConfigError(f"{what} must be an integer, got {x!r}")
    return x


def _text(x, what) -> str:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        x = str(x)
    if not isinstance(x, str):
        raise ConfigError(f"{what} must be a string, got {x!r}")
    return x


def _resolve_operator(name, spec, cfg: RunConfig) -> Operator:
    if isinstance(spec, dict):
        extra = set(spec) - {"value", "domain", "codomain"}
        if extra or "value" not in spec:
            raise ConfigError(f"operator {name}: expected keys value, domain, codomain")
        op = parse_operator(_text(spec["value"], f"operator {name}"), cfg.env)
        for key, dim in (("domain", op.domain.dim), ("codomain", op.codomain.dim)):
            if key in spec:
                sp = spec[key]
                if sp not in cfg.spaces:
                    raise ResolutionError(f"operator {name}: unknown space {sp!r}")
                if cfg.spaces[sp] != dim:
                    raise DimensionError(
                        f"operator {name}: {key} has dimension {dim}, space {sp} has {cfg.spaces[sp]}"
                    )
        return op
    return parse_operator(_text(spec, f"operator {name}"), cfg.env)


def _test_vectors(raw, name) -> tuple[LatticeVector, ...]:
    if not isinstance(raw, list) or not raw:
        raise ConfigError(f"query {name}: test_vectors must be a nonempty list of vectors")
    out = []
    for v in raw:
        if not isinstance(v, list) or not v:
            raise ConfigError(f"query {name}: each test vector is a list of rationals")
        coords = [parse_scalar(_text(x, "test vector entry")) for x in v]
        out.append(LatticeVector(finite(len(coords)), coords))
    return tuple(out)


def _resolve_query(q: Query, cfg: RunConfig):
    a, r = q.args, q.resolved
    if "sequence" in a:
        r["sequence"] = parse_sequence(_text(a["sequence"], f"query {q.id}: sequence"), cfg.env)
    if "target" in a:
        r["target"] = parse_operator(_text(a["target"], f"query {q.id}: target"), cfg.env)
        if r["target"].shape != r["sequence"].shape:
            raise DimensionError(
                f"query {q.id}: target shape {r['target'].shape} differs from sequence shape {r['sequence'].shape}"
            )
    if "test_vectors" in a:
        vs = _test_vectors(a["test_vectors"], q.id)
        k = r["sequence"].shape[1]
        if any(v.space.dim != k for v in vs):
            raise DimensionError(f"query {q.id}: test vectors must have dimension {k}")
        r["test_vectors"] = vs
    if q.kind == "witness":
        mode = a.get("mode", "soc")
        if mode not in ("soc", "doc"):
            raise ConfigError(f"query {q.id}: mode must be soc or doc")
        r["mode"] = mode
    if q.kind == "theorem":
        th = _text(a["theorem"], f"query {q.id}: theorem")
        if th not in THEOREMS:
            raise ResolutionError(f"query {q.id}: unknown theorem {th!r}")
        r["theorem"] = th
        r["trials"] = _int(a.get("trials", 200), f"query {q.id}: trials")
        if r["trials"] < 1:
            raise ConfigError(f"query {q.id}: trials must be >= 1")


def _cfg_overrides(raw, name) -> dict:
    raw = _mapping(raw, f"query {name}: cfg")
    extra = set(raw) - {"horizon", "tolerance", "seed"}
    if extra:
        raise ConfigError(f"query {name}: unknown cfg keys {sorted(extra)}")
    out = {}
    if "horizon" in raw:
        out["horizon"] = _int(raw["horizon"], "horizon")
    if "seed" in raw:
        out["seed"] = _int(raw["seed"], "seed")
    if "tolerance" in raw:
        out["tolerance"] = parse_scalar(_text(raw["tolerance"], "tolerance"))
    return out


def from_dict(data: dict) -> RunConfig:
    """Build and resolve a config from its mapping form."""
    if not isinstance(data, dict):
        raise ConfigError("a config must be a mapping")
    extra = set(data) - _TOP
    if extra:
        raise ConfigError(f"unknown top-level keys {sorted(extra)}")
    cfg = RunConfig(
        seed=_int(data.get("seed", 0), "seed"),
        horizon=_int(data.get("horizon", DEFAULT_HORIZON), "horizon"),
        tolerance=parse_scalar(_text(data.get("tolerance", frac_str(DEFAULT_TOLERANCE)), "tolerance")),
        output=data.get("output"),
    )
    if cfg.horizon < 10:
        raise ConfigError("horizon must be at least 10")
    if cfg.tolerance <= 0:
        raise ConfigError("tolerance must be positive")
    for name, dim in _mapping(data.get("spaces"), "spaces").items():
        cfg.spaces[str(name)] = _int(dim, f"space {name}")
        if dim < 1:
            raise ConfigError(f"space {name} must have positive dimension")
    for name, spec in _mapping(data.get("operators"), "operators").items():
        cfg.operators[str(name)] = spec
        cfg.env.operators[str(name)] = _resolve_operator(name, spec, cfg)
    for name, text in _mapping(data.get("indexsets"), "indexsets").items():
        cfg.indexsets[str(name)] = _text(text, f"index set {name}")
        cfg.env.sets[str(name)] = parse_index_set(cfg.indexsets[str(name)], cfg.env)
    for name, text in _mapping(data.get("sequences"), "sequences").items():
        cfg.sequences[str(name)] = _text(text, f"sequence {name}")
        cfg.env.sequences[str(name)] = parse_sequence(cfg.sequences[str(name)], cfg.env)
    queries = data.get("queries")
    if not isinstance(queries, list) or not queries:
        raise ConfigError("queries must be a nonempty list")
    seen = set()
    for i, raw in enumerate(queries):
        raw = _mapping(raw, f"query #{i + 1}")
        qid = str(raw.get("id", f"q{i + 1}"))
        if qid in seen:
            raise ConfigError(f"duplicate query id {qid!r}")
        seen.add(qid)
        kind = raw.get("kind")
        if kind not in KINDS:
            raise ConfigError(f"query {qid}: kind must be one of {', '.join(KINDS)}")
        args = _mapping(raw.get("args"), f"query {qid}: args")
        need, opt = _ARGS[kind]
        if need - set(args) or set(args) - need - opt:
            raise ConfigError(f"query {qid}: {kind} takes {sorted(need)} and optionally {sorted(opt)}")
        extra = set(raw) - {"id", "kind", "args", "cfg"}
        if extra:
            raise ConfigError(f"query {qid}: unknown keys {sorted(extra)}")
        q = Query(qid, kind, dict(args), _cfg_overrides(raw.get("cfg"), qid))
        _resolve_query(q, cfg)
        cfg.queries.append(q)
    return cfg


def loads(text: str) -> RunConfig:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ParseError(f"invalid YAML{where}: {getattr(exc, 'problem', exc)}") from exc
    return from_dict(data)


def load(path: str) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def to_dict(cfg: RunConfig) -> dict:
    out: dict[str, Any] = {"seed": cfg.seed, "horizon": cfg.horizon, "tolerance": frac_str(cfg.tolerance)}
    for key in ("spaces", "operators", "indexsets", "sequences"):
        if getattr(cfg, key):
            out[key] = dict(getattr(cfg, key))
    out["queries"] = []
    for q in cfg.queries:
        item: dict[str, Any] = {"id": q.id, "kind": q.kind, "args": dict(q.args)}
        if q.cfg:
            item["cfg"] = {k: frac_str(v) if isinstance(v, Fraction) else v for k, v in q.cfg.items()}
        out["queries"].append(item)
    if cfg.output:
        out["output"] = cfg.output
    return out


def dumps(cfg: RunConfig) -> str:
    return yaml.safe_dump(to_dict(cfg), sort_keys=False)


# execution -----------------------------------------------------------------


def _verdict_entry(v: Verdict) -> dict:
    out = {"verdict": v.to_json()}
    if v.status is not Status.UNDETERMINED:
        r = recheck(v)
        out["recheck"] = {"ok": r.ok, "reason": r.reason}
    return out


def run_query(q: Query, cfg: RunConfig, **over) -> dict:
    cc = cfg.check_config(**{**q.cfg, **over})
    if "test_vectors" in q.resolved:
        cc = CheckConfig(cc.horizon, cc.tolerance, q.resolved["test_vectors"], cc.seed)
    r = q.resolved
    if q.kind in _CHECKERS:
        return _verdict_entry(_CHECKERS[q.kind](r["sequence"], r["target"], cc))
    if q.kind == "statbound":
        return _verdict_entry(check_stat_order_bounded(r["sequence"], cc))
    try:
        return _construct(q, r, cc)
    except PreconditionError as exc:
        # the hypothesis failed to be proven: report its verdict instead
        out = _verdict_entry(exc.verdict)
        out["precondition"] = str(exc)
        return out


def _construct(q: Query, r: dict, cc: CheckConfig) -> dict:
    if q.kind == "decompose":
        d = decompose_stat_bounded(r["sequence"], cc)
        out = _verdict_entry(d.verdict)
        out["decomposition"] = {
            "T_seq": str(d.T_seq),
            "U_seq": str(d.U_seq),
            "bound": jsonify(d.bound),
            "J": str(d.J),
            "support": str(d.support),
            "checked_upto": d.checked_upto,
        }
        return out
    if q.kind == "witness":
        w = construct_witness(r["sequence"], r["target"], r["mode"], cc)
        out = _verdict_entry(w.verdict)
        out["witness"] = {
            "mode": w.mode,
            "sequence": str(w.sequence),
            "agreement": str(w.agreement),
            "tail_dominator": None if w.tail_dominator is None else str(w.tail_dominator),
            "checked_upto": w.checked_upto,
        }
        return out
    if q.kind == "theorem":
        rep = verify_theorem(r["theorem"], r["trials"], CheckConfig(horizon=100, seed=cc.seed))
        return {"theorem": rep.to_json()}
    raise ConfigError(f"unknown query kind {q.kind!r}")


def run(cfg: RunConfig, **over) -> dict:
    """Execute the queries in order and assemble the report.

    ``over`` holds command-line overrides (horizon, tolerance, seed) that take
    precedence over both the config defaults and per-query settings.
    """
    over = {k: v for k, v in over.items() if v is not None}
    seed = over.get("seed", cfg.seed)
    report: dict[str, Any] = {
        "tool": "latticestat",
        "version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "seed": seed,
        "config": to_dict(cfg),
        "overrides": {k: frac_str(v) if isinstance(v, Fraction) else v for k, v in sorted(over.items())},
        "queries": [],
    }
    for q in cfg.queries:
        entry = {"id": q.id, "kind": q.kind, "args": dict(q.args)}
        entry.update(run_query(q, cfg, **over))
        report["queries"].append(entry)
    return report


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def summary(report: dict) -> str:
    lines = []
    for q in report["queries"]:
        if "theorem" in q:
            t = q["theorem"]
            lines.append(
                f"{q['id']} [theorem {t['theorem']}]: {t['passed']} passed, {t['failed']} failed, "
                f"{t['vacuous']} vacuous of {t['trials']}"
            )
            continue
        v = q["verdict"]
        cert = v["certificate"]["variant"] if v["certificate"] else "no certificate"
        lines.append(f"{q['id']} [{q['kind']}]: {v['status']} ({cert})")
    return "\n".join(lines)


# explanation ---------------------------------------------------------------

_SCALED_ID = re.compile(r"^scaled\((.*), id\(\d+\)\)$")


def _op_text(x) -> str:
    if isinstance(x, list):
        return "[" + "; ".join(" ".join(a.removesuffix("/1") for a in r) for r in x) + "]"
    return str(x)


def _dominator_text(s: str) -> str:
    m = _SCALED_ID.match(s)
    if m:
        return f"({m.group(1)})·I, written {s}"
    return s


def _explain_certificate(v: dict) -> list[str]:
    c = v["certificate"]
    if c is None:
        return [f"Undetermined: {v['narrative']}",
                f"Nothing is claimed about the infinite tail (horizon {v['horizon']}, tolerance {v['tolerance']})."]
    kind = c["variant"]
    target = _op_text(v["subject"]["target"])
    if kind == "DominatedOnDensityOne":
        if c["J"] == "naturals":
            head = "This is classical order convergence: the domination holds at every index."
        else:
            head = (f"The witness set is J = {c['J']}, which has natural density exactly 1; "
                    "indices outside J are ignored.")
        return [
            head,
            f"Dominator: {_dominator_text(c['dominator'])}. It is positive and decreases to zero.",
            f"For every j in J, |R_j - {target}| <= dominator(j) entrywise.",
            "A decreasing-to-zero dominator on a density-one set is exactly the statistical order "
            "convergence construction; with J = all indices it is order convergence.",
        ]
    if kind == "DecreasingWitness":
        return [
            f"Along J = {c['J']} (density exactly 1) the sequence is decreasing in the operator order.",
            f"Its infimum along J is {_op_text(c['infimum'])}, the claimed limit.",
        ]
    if kind == "UnboundedAlong":
        return [
            f"Along J = {c['J']} entry {tuple(c['entry'])} equals {c['growth']}, which is unbounded.",
            "No dominator can control an unbounded entry, so the convergence fails"
            + (" on an infinite set of indices." if v["notion"] == "o" else " on a set of positive density."),
        ]
    if kind == "DistinctLimitAlong":
        return [
            f"Along J = {c['J']} the sequence converges to {_op_text(c['limit'])}, not to {target}.",
            "A limit along a set that cannot be discarded must equal the claimed limit.",
        ]
    if kind == "MassLowerBound":
        D, lb = c["truncation"], c["lower_bound"]
        return [
            f"At truncation D = {D}: suppose some operator W dominates the coordinate functionals "
            "on a density-one set M.",
            f"Then W dominates e_j for every j in M with j <= {D}, so its total mass is at least "
            f"|M ∩ [1..{D}]|, which is >= ceil(D/2) = {lb}. Here M = {c['M']} gives {c['count']}.",
            "The bound grows without limit in D, so the series of the dominator's coordinates diverges "
            "and no such dominator exists: the sequence does not converge statistically in order.",
        ]
    if kind == "OrderBoundOnDensityOne":
        return [
            f"On J = {c['J']} (density exactly 1) every term satisfies |R_j| <= {_op_text(c['bound'])}.",
        ]
    if kind == "PointwiseFamily":
        lines = [f"Checked at {len(c['vectors'])} sampled positive vectors; the positive cone is sampled, not exhausted."]
        for u, sub in zip(c["vectors"], c["verdicts"]):
            lines.append(f"  u = {u}: {sub['status']}")
            lines.extend("    " + s for s in _explain_certificate(sub))
        return lines
    if kind == "ExceptionalSetDensity":
        return [f"The exceptional set {c['exceptional']} has density {c['density']}."]
    if kind == "AgreementWitness":
        return [f"The sequence agrees with {c['T_seq']} on {c['agreement']}, a density-one set."]
    return [f"Certificate {kind}: {json.dumps(c)}"]


def explain(report: dict, query_id: str) -> str:
    match = [q for q in report.get("queries", []) if q.get("id") == query_id]
    if not match:
        known = ", ".join(q.get("id", "?") for q in report.get("queries", []))
        raise KeyError(f"unknown query id {query_id!r}; known: {known}")
    q = match[0]
    if "theorem" in q:
        t = q["theorem"]
        lines = [f"Theorem {t['theorem']}: {t['statement']}.",
                 f"{t['passed']} of {t['trials']} trials passed, {t['failed']} failed, {t['vacuous']} vacuous; "
                 f"{t['certificates_checked']} certificates were re-verified."]
        if t["counterexample"]:
            lines.append(f"First counterexample: {json.dumps(t['counterexample'])}")
        return "\n".join(lines)
    v = q["verdict"]
    lines = [f"Query {q['id']} ({q['kind']}): {v['status']}.",
             f"Sequence: {v['subject']['sequence']}"]
    if v["subject"]["target"] is not None:
        lines.append(f"Target: {_op_text(v['subject']['target'])}")
    lines.extend(_explain_certificate(v))
    if "recheck" in q:
        r = q["recheck"]
        lines.append("Independent re-check: " + ("accepted." if r["ok"] else f"REJECTED ({r['reason']})."))
    if "precondition" in q:
        lines.append(f"Construction skipped: {q['precondition']}")
    for key in ("decomposition", "witness"):
        if key in q:
            lines.append(f"{key.capitalize()}: " + ", ".join(f"{k} = {val}" for k, val in q[key].items()))
    return "\n".join(lines)
