"""Command line: run one experiment, run the bundled corpus, or explain a report."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

from .curves.cover import Cover, CoverError, Place, place_from_label
from .exactalg import poly as P
from .exactalg.fields import DEFAULT_BOUND

STATEMENTS = (
    "theta",
    "picard",
    "brumer-stark",
    "coates-sinnott",
    "nakajima",
    "deuring-shafarevich",
    "fitting-finite",
    "torsion-descent",
)

COVER_KEYS = ("q", "kind", "m", "f", "layers", "constant", "constant_level")
KNOBS = ("ell", "n", "k", "level", "B", "seed", "budget_places")


class ConfigError(ValueError):
    def __init__(self, fld, msg):
        super().__init__(f"{fld}: {msg}")
        self.field = fld


@dataclass
class ExperimentConfig:
    cover: dict
    statement: str
    S: list = field(default_factory=list)
    Sigma: list = field(default_factory=list)
    T: list = field(default_factory=list)
    ell: int | None = None
    n: int | None = None
    k: int | None = None
    level: int | None = None
    B: int | None = None
    seed: int = 0
    budget_places: int | None = None
    name: str | None = None

    def build_cover(self) -> Cover:
        return Cover.from_record(self.cover)

    def places(self, key):
        return [place_from_label(x) for x in getattr(self, key)]

    def to_dict(self):
        out = dict(self.cover)
        out["statement"] = self.statement
        for key in ("S", "Sigma", "T"):
            out[key] = getattr(self, key)
        for key in KNOBS:
            v = getattr(self, key)
            if v is not None:
                out[key] = v
        if self.name:
            out["name"] = self.name
        return out


def _check_place(fld, x, q):
    if x == "inf":
        return
    if not isinstance(x, list) or len(x) < 2 or not all(isinstance(a, int) and 0 <= a < q for a in x):
        raise ConfigError(fld, f"{x!r} is not 'inf' or a coefficient list over F_{q}")
    if x[-1] != 1:
        raise ConfigError(fld, f"{x!r} is not monic")


def parse_config(doc: dict) -> ExperimentConfig:
    """Validate a flat config document; errors name the offending field."""
    if not isinstance(doc, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    known = set(COVER_KEYS) | set(KNOBS) | {"statement", "S", "Sigma", "T", "name"}
    for key in doc:
        if key not in known:
            raise ConfigError(key, "unknown field")
    if "q" not in doc or not isinstance(doc["q"], int):
        raise ConfigError("q", "missing or not an integer")
    st = doc.get("statement")
    if st not in STATEMENTS:
        raise ConfigError("statement", f"must be one of {', '.join(STATEMENTS)}")
    q = doc["q"]
    for key in ("S", "Sigma", "T"):
        vals = doc.get(key, [])
        if not isinstance(vals, list):
            raise ConfigError(key, "must be a list of places")
        for i, x in enumerate(vals):
            _check_place(f"{key}[{i}]", x, q)
    for key in KNOBS:
        if key in doc and doc[key] is not None and not isinstance(doc[key], int):
            raise ConfigError(key, "must be an integer")
    cover = {k: doc[k] for k in COVER_KEYS if k in doc}
    try:
        Cover.from_record(cover)
    except (CoverError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError("cover", str(exc)) from None
    cfg = ExperimentConfig(
        cover=cover,
        statement=st,
        S=doc.get("S", []),
        Sigma=doc.get("Sigma", []),
        T=doc.get("T", []),
        name=doc.get("name"),
        **{k: doc[k] for k in KNOBS if k in doc and doc[k] is not None},
    )
    keyed = [(k, set(map(_key, getattr(cfg, k)))) for k in ("S", "Sigma", "T")]
    for i in range(3):
        for j in range(i + 1, 3):
            if keyed[i][1] & keyed[j][1]:
                raise ConfigError(keyed[j][0], f"overlaps {keyed[i][0]}")
    return cfg


def _key(x):
    return json.dumps(x)


def _require(cfg, *names):
    for nm in names:
        if getattr(cfg, nm) is None:
            raise ConfigError(nm, f"required by {cfg.statement}")


# ------------------------------------------------------------ statements


def _places_up_to(c: Cover, B, bound):
    """Base places of degree <= B with their splitting data, for the Euler factor listing."""
    rows = []
    top = 0
    for d in range(1, B + 1):
        if c.q ** d > bound:
            break
        top = d
        places = [Place(tuple(g)) for g in P.irreducibles_of_degree(c.Fq, d)]
        if d == 1:
            places.append(Place(None))
        for v in sorted(places, key=lambda v: v.sort_key()):
            sp = c.splitting(v)
            rows.append({"place": v.label(), "degree": d, "e": sp.e, "frobenius": list(sp.frobenius) if sp.e == 1 else None})
    return rows, top


def _theta_report(cfg, c, bound):
    from .grpring.group import GroupRingElement
    from .lfun import theta
    from .lfun.verify import VerificationReport

    S, Sig = cfg.places("S"), cfg.places("Sigma")
    r = theta(c, S, Sig, B=cfg.B, check_truncation=True, bound=bound)
    places, top = _places_up_to(c, r.B, min(bound, 10 ** 4))
    checks = {
        "integral": True,
        "theta_at_zero_is_one": r.coeffs[0] == GroupRingElement.scalar(c.G, 1),
        "degree_equals_bound": r.degree == r.D_bound,
        "vanishing_above_bound": all(not any(row) for row in r.series[r.D_bound + 1 :]),
    }
    caveats = []
    if r.D_bound != r.D:
        caveats.append(f"wild ramification: degree bound {r.D_bound} exceeds the tame value {r.D}")
    return VerificationReport(
        "theta",
        {},
        checks,
        {
            "theta": [a.to_dict() for a in r.coeffs],
            "value_at_1": r.value(1).to_dict(),
            "D": r.D,
            "D_bound": r.D_bound,
            "degree": r.degree,
            "B": r.B,
            "euler_factors": places,
            "euler_factors_listed_to_degree": top,
        },
        {"B": r.B, "enumeration_bound": bound},
        caveats,
    )


def _picard_report(cfg, c, budget):
    from .curves import Curve
    from .lfun.verify import VerificationReport
    from .picard import class_group
    from .curves.zeta import zeta_data

    X = Curve(c)
    R = class_group(X, sigma=X.places_above_set(cfg.places("Sigma")), budget=budget)
    zd = zeta_data(c)
    checks = {"class_number_matches_zeta": R.class_number == zd.class_number()}
    return VerificationReport("picard", {}, checks, R.to_dict(), {"max_order": budget.max_order, "seed": budget.seed})


def _descent_report(cfg, c, budget):
    from .lfun.verify import VerificationReport
    from .picard import verify_torsion_descent

    _require(cfg, "n")
    d = verify_torsion_descent(c, cfg.places("S"), cfg.places("T"), cfg.n, cfg.level or 1, budget=budget)
    checks = {k: getattr(d, k) for k in ("injective", "image_is_fixed", "frobenius_equivariant")}
    checks["orders_agree"] = d.order_fixed == d.order_base
    return VerificationReport("torsion descent", {}, checks, d.to_dict(), {"level": d.level}, [d.caveat] if d.caveat else [])


def run(cfg: ExperimentConfig) -> dict:
    """The report for one experiment as a plain dict."""
    from .cartier import verify_deuring_shafarevich, verify_nakajima
    from .lfun import verify_brumer_stark, verify_coates_sinnott_genus0, verify_fitting_identity_finite_level
    from .picard.classgroup import Budget

    c = cfg.build_cover()
    bound = cfg.budget_places or DEFAULT_BOUND
    budget = Budget(seed=cfg.seed)
    st = cfg.statement
    S, Sig = cfg.places("S"), cfg.places("Sigma")
    if st == "theta":
        rep = _theta_report(cfg, c, bound)
    elif st == "picard":
        rep = _picard_report(cfg, c, budget)
    elif st == "brumer-stark":
        rep = verify_brumer_stark(c, S, Sig, budget=budget)
    elif st == "coates-sinnott":
        _require(cfg, "n", "ell", "k")
        rep = verify_coates_sinnott_genus0(c, S, Sig, cfg.n, cfg.ell, cfg.k)
    elif st == "nakajima":
        rep = verify_nakajima(c, S)
    elif st == "deuring-shafarevich":
        rep = verify_deuring_shafarevich(c)
    elif st == "fitting-finite":
        _require(cfg, "ell", "k")
        rep = verify_fitting_identity_finite_level(c, S, Sig, cfg.ell, cfg.k, N=cfg.level)
    else:
        rep = _descent_report(cfg, c, budget)
    out = rep.to_dict()
    out["statement"] = st
    out["config"] = cfg.to_dict()
    out["cover"] = c.to_record()
    out["S"] = cfg.S
    out["Sigma"] = cfg.Sigma
    out["seed"] = cfg.seed
    return json.loads(dumps(out))


def dumps(report) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(report, sort_keys=True, indent=1, default=_default) + "\n"


def _default(x):
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    if hasattr(x, "to_dict"):
        return x.to_dict()
    if hasattr(x, "label"):
        return x.label()
    if hasattr(x, "item"):
        return x.item()
    return str(x)


def report_hash(report) -> str:
    return hashlib.sha256(dumps(report).encode()).hexdigest()


# ------------------------------------------------------------ corpus


def load_corpus(path=None):
    if path:
        with open(path) as fh:
            return json.load(fh)
    return json.loads(resources.files("ffstark").joinpath("data/corpus.json").read_text())


def _run_entry(entry):
    try:
        rep = run(parse_config(entry["config"]))
    except (CoverError, ConfigError) as exc:
        return entry["name"], None, str(exc)
    return entry["name"], rep, None


def run_corpus(entries, only=None, jobs=1):
    """Rows (name, status, hash) ordered by entry name."""
    entries = sorted((e for e in entries if not only or e["name"] in only or e["name"].split("/")[0] in only), key=lambda e: e["name"])
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_run_entry, entries))
    else:
        results = [_run_entry(e) for e in entries]
    rows = []
    for e, (name, rep, err) in zip(entries, results):
        if rep is None:
            rows.append({"name": name, "status": "error", "detail": err, "hash": None})
            continue
        h = report_hash(rep)
        exp = e.get("hash")
        if not rep["ok"]:
            status = "fail"
        elif exp and exp != h:
            status = "diverged"
        else:
            status = "pass"
        rows.append({"name": name, "status": status, "hash": h, "expected": exp, "failed_checks": sorted(k for k, v in rep["checks"].items() if not v)})
    return rows


# ------------------------------------------------------------ explain


def _fmt_elt(d):
    terms = []
    for g, a in sorted(d.get("coeffs", {}).items()):
        if not g or not any(int(x) for x in g.split(",")):
            terms.append(a)
        else:
            terms.append(f"{a}*[{g}]")
    return " + ".join(terms) or "0"


def explain(report: dict) -> str:
    lines = [f"statement: {report.get('statement')}"]
    cov = report.get("cover")
    if cov:
        lines.append(f"cover: {json.dumps(cov, sort_keys=True)}")
    for key in ("S", "Sigma"):
        if key in report:
            lines.append(f"{key}: {json.dumps(report[key])}")
    for k, v in sorted(report.get("checks", {}).items()):
        lines.append(f"  [{'ok' if v else 'FAIL'}] {k}")
    cert = report.get("certificate", {})
    if "euler_factors" in cert:
        lines.append(f"Euler factors, places of degree <= {cert['euler_factors_listed_to_degree']}:")
        for row in cert["euler_factors"]:
            fr = "ramified" if row["frobenius"] is None else f"sigma = {tuple(row['frobenius'])}"
            lines.append(f"  {json.dumps(row['place'])} (degree {row['degree']}): {fr}")
    if "theta" in cert:
        lines.append("Theta coefficients:")
        for i, a in enumerate(cert["theta"]):
            lines.append(f"  u^{i}: {_fmt_elt(a)}")
    for key in ("fitting_basis", "minors", "presentation"):
        if key in cert:
            lines.append(f"{key.replace('_', ' ')}:")
            for row in cert[key]:
                lines.append(f"  {json.dumps(row)}")
    if "hnf_coefficients" in cert:
        lines.append(f"membership combination coefficients: {json.dumps(cert['hnf_coefficients'])}")
    rest = sorted(k for k in cert if k not in ("euler_factors", "euler_factors_listed_to_degree", "theta", "fitting_basis", "minors", "presentation", "hnf_coefficients"))
    for k in rest:
        lines.append(f"{k}: {json.dumps(cert[k], sort_keys=True)}")
    for cv in report.get("caveats", []):
        lines.append(f"caveat: {cv}")
    lines.append(f"result: {'ok' if report.get('ok') else 'FAIL'}")
    return "\n".join(lines)


# ------------------------------------------------------------ entry point


def _apply_overrides(doc, args):
    doc = dict(doc)
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.budget_places is not None:
        doc["budget_places"] = args.budget_places
    if args.level is not None:
        doc["level"] = args.level
    return doc


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="ffstark", description=__doc__)
    sub = ap.add_subparsers(dest="verb", required=True)
    for verb in ("run", "corpus", "explain"):
        sp = sub.add_parser(verb)
        sp.add_argument("--config", metavar="PATH")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--budget-places", type=int)
        sp.add_argument("--level", type=int)
        sp.add_argument("--json", metavar="PATH")
        if verb == "corpus":
            sp.add_argument("--only", nargs="*")
            sp.add_argument("--jobs", type=int, default=1)
        if verb == "explain":
            sp.add_argument("report", nargs="?")
    args = ap.parse_args(argv)

    if args.verb == "run":
        if not args.config:
            ap.error("run needs --config")
        try:
            with open(args.config) as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            print(f"config error: line {exc.lineno}: {exc.msg}", file=sys.stderr)
            return 2
        try:
            rep = run(parse_config(_apply_overrides(doc, args)))
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
        text = dumps(rep)
        if args.json:
            with open(args.json, "w") as fh:
                fh.write(text)
        print(explain(rep))
        return 0 if rep["ok"] else 1

    if args.verb == "corpus":
        entries = load_corpus(args.config)
        if args.seed is not None or args.budget_places is not None or args.level is not None:
            entries = [dict(e, config=_apply_overrides(e["config"], args)) for e in entries]
        rows = run_corpus(entries, only=args.only, jobs=args.jobs)
        w = max((len(r["name"]) for r in rows), default=4)
        for r in rows:
            extra = f"  {','.join(r['failed_checks'])}" if r.get("failed_checks") else ""
            if r["status"] == "error":
                extra = f"  {r['detail']}"
            print(f"{r['name']:<{w}}  {r['status']:<8}  {(r['hash'] or '')[:16]}{extra}")
        if args.json:
            with open(args.json, "w") as fh:
                fh.write(dumps(rows))
        return 0 if all(r["status"] == "pass" for r in rows) else 1

    path = args.report or args.json
    if not path:
        ap.error("explain needs a report path")
    with open(path) as fh:
        print(explain(json.load(fh)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
