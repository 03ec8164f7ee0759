"""CSV and JSON emitters for tables, constants and exceptional-zero results.

Floats are written with repr (17 significant digits at most, round-trip
exact).  Every document carries a run manifest; apart from its timestamp and
duration, output is a pure function of the inputs.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .classical import GammaBoundTable, RegionConstants
from .exceptional import ExceptionalResult, SearchResult


@dataclass
class RunManifest:
    subcommand: str
    config: dict
    inputs: dict = field(default_factory=dict)
    version: str = __version__
    started: float = field(default_factory=time.time)
    duration: float = 0.0

    def add_input(self, path) -> None:
        data = Path(path).read_bytes()
        self.inputs[str(path)] = hashlib.sha256(data).hexdigest()

    def finish(self) -> "RunManifest":
        self.duration = time.time() - self.started
        return self

    def as_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "config": self.config,
            "version": self.version,
            "inputs": self.inputs,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(self.started)),
            "duration_s": round(self.duration, 3),
        }


def _csv(header, rows, manifest: RunManifest | None) -> str:
    buf = io.StringIO()
    if manifest is not None:
        buf.write("# manifest: " + json.dumps(manifest.as_dict(), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def _json(obj: dict, manifest: RunManifest | None) -> str:
    if manifest is not None:
        obj = {"manifest": manifest.as_dict(), **obj}
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def table_dict(t: GammaBoundTable) -> dict:
    return {
        "epsilon": t.epsilon,
        "alpha_eps": t.alpha_eps,
        "d_eps0": t.d_eps0,
        "rows": [
            {"k": r.k, "Sigma_raw": r.Sigma_raw, "B_eps": r.B_eps, "S1": r.S1, "S2": r.S2,
             "S": r.S, "method": r.method}
            for r in t.rows
        ],
        "audits": [{"name": a.name, "passed": a.passed, "detail": a.detail} for a in t.audits],
    }


def table_csv(t: GammaBoundTable, manifest=None) -> str:
    rows = [
        (r.k, r.Sigma_raw, r.B_eps, r.S1, r.S2, r.S, f"{r.S1:.10f}", f"{r.S2:.10f}", f"{r.S:.10f}")
        for r in t.rows
    ]
    head = ["k", "Sigma_raw", "B_eps", "S1", "S2", "S", "S1_10dp", "S2_10dp", "S_10dp"]
    text = _csv(head, rows, manifest)
    return text + f"# alpha_eps={t.alpha_eps!r} d_eps0={t.d_eps0!r}\n"


def constants_dict(c: RegionConstants, admissible=None) -> dict:
    out = {
        "epsilon": c.epsilon,
        "c": [c.c1, c.c2, c.c3, c.c4],
        "M": c.M,
        "M_closed_form": c.M_closed,
        "r_star": c.r_star,
        "C": list(c.C),
        "C_published": list(c.published),
    }
    if admissible is not None:
        out["admissibility"] = admissible
    return out


def constants_csv(c: RegionConstants, manifest=None) -> str:
    rows = [(f"C{i + 1}", ci, Ci, Cp) for i, (ci, Ci, Cp) in enumerate(zip(
        (c.c1, c.c2, c.c3, c.c4), c.C, c.published))]
    rows.append(("M", c.M, c.M, c.M))
    return _csv(["name", "c", "C_raw", "C_rounded_up"], rows, manifest)


def exceptional_dict(res: ExceptionalResult) -> dict:
    return res.as_dict()


def cells_csv(search: SearchResult, manifest=None) -> str:
    rows = [(c.d1, c.d2, c.invA, c.invB, c.invC, c.R, c.feasible, c.note) for c in search.cells]
    return _csv(["d1", "d2", "invA", "invB", "invC", "R", "feasible", "note"], rows, manifest)


def strip_manifest(text: str) -> str:
    """Drop manifest lines/keys, for comparing outputs across runs."""
    if text.lstrip().startswith("{"):
        obj = json.loads(text)
        obj.pop("manifest", None)
        return json.dumps(obj, indent=2)
    return "".join(line for line in text.splitlines(True) if not line.startswith("# manifest:"))
