"""Regenerate src/ffstark/data/corpus.json with fresh expected hashes.

Run only after a deliberate change to report contents; the corpus run flags
any divergence from the stored hashes.
"""

import json
import pathlib

from ffstark.cli import dumps, parse_config, report_hash, run
from ffstark.curves import Cover

COVERS = {
    "trivial-f5": dict(q=5, kind="trivial", S=["inf", [0, 1]], Sigma=[[4, 1]]),
    "trivial-f2": dict(q=2, kind="trivial", S=["inf", [0, 1]], Sigma=[[1, 1]]),
    "c2-f5": dict(q=5, kind="kummer", m=2, f=[0, 1], S=[[0, 1], "inf"], Sigma=[[4, 1]]),
    "c2-elliptic-f5": dict(q=5, kind="kummer", m=2, f=[0, 4, 0, 1], S=[[0, 1], [1, 1], [4, 1], "inf"], Sigma=[[2, 1]]),
    "c3-f7": dict(q=7, kind="kummer", m=3, f=[0, 1, 1], S=[[0, 1], [1, 1], "inf"], Sigma=[[6, 1]]),
    "c4-f5": dict(q=5, kind="kummer", m=4, f=[0, 1], S=[[0, 1], "inf"], Sigma=[[4, 1]]),
    "c2xc2-f5": dict(q=5, kind="kummer", layers=[{"m": 2, "f": [0, 1]}, {"m": 2, "f": [4, 1]}], S=[[0, 1], [4, 1], "inf"], Sigma=[[3, 1]]),
    "as-f2-t": dict(q=2, kind="artin-schreier", f={"num": [0, 1], "den": [1]}, S=["inf"], Sigma=[[0, 1]]),
    "as-f3-t": dict(q=3, kind="artin-schreier", f={"num": [0, 1], "den": [1]}, S=["inf"], Sigma=[[0, 1]]),
    "as-f3-t2": dict(q=3, kind="artin-schreier", f={"num": [0, 0, 1], "den": [1]}, S=["inf"], Sigma=[[0, 1]]),
    "as-f3-t4t": dict(q=3, kind="artin-schreier", f={"num": [0, 1, 0, 0, 1], "den": [1]}, S=["inf"], Sigma=[[0, 1]]),
    "as-f2-t3": dict(q=2, kind="artin-schreier", f={"num": [0, 0, 0, 1], "den": [1]}, S=["inf"], Sigma=[[0, 1]]),
    "as-f2-twopole": dict(q=2, kind="artin-schreier", f={"num": [1, 0, 1], "den": [0, 1]}, S=["inf", [0, 1]], Sigma=[[1, 1]]),
    "constant2-f5": dict(q=5, kind="trivial", constant=2, S=["inf"], Sigma=[[0, 1]]),
    "c2-constant2-f5": dict(q=5, kind="kummer", m=2, f=[0, 1], constant=2, S=[[0, 1], "inf"], Sigma=[[4, 1]]),
}


def statements(base):
    rec = {k: v for k, v in base.items() if k not in ("S", "Sigma")}
    c = Cover.from_record(rec)
    g = c.genus()
    p = c.p
    out = {"theta": {}}
    if g <= 2:
        out["picard"] = {}
        out["brumer-stark"] = {}
    if g == 0:
        ell = 3 if p != 3 else 5
        out["coates-sinnott"] = dict(n=2, ell=ell, k=4)
        if c.n == 1:
            out["fitting-finite"] = dict(ell=ell, k=3)
    if c.is_as:
        S = list(base["S"])
        extra = [0, 1] if [0, 1] not in S else [1, 1]
        out["nakajima"] = dict(S=S + [extra], Sigma=[])
        out["deuring-shafarevich"] = dict(Sigma=[])
    if c.n == 1 and g <= 2:
        n = p if c.is_as else 2
        out["torsion-descent"] = dict(n=n, level=1, T=base["Sigma"], Sigma=[])
    return out


def main():
    entries = []
    for name, base in sorted(COVERS.items()):
        for st, over in statements(base).items():
            doc = dict(base, statement=st, name=f"{name}/{st}")
            doc.update(over)
            cfg = parse_config(doc)
            rep = run(cfg)
            status = "ok" if rep["ok"] else "FAIL"
            print(f"{name}/{st}: {status}")
            entries.append({"name": f"{name}/{st}", "config": doc, "hash": report_hash(rep)})
    path = pathlib.Path(__file__).resolve().parent.parent / "src" / "ffstark" / "data" / "corpus.json"
    path.write_text(dumps(entries))


if __name__ == "__main__":
    main()
