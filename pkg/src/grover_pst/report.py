"""Analysis reports and classification tables, as plain dicts and text."""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources

from .errors import CapacityError
from .exact_spectra import discriminant_spectrum, is_periodic, period, spectrum_report, u_spectrum
from .graph_core import Graph, complete, cycle, hamming, johnson
from .pst_engine import (
    DEFAULT_TAU_MAX,
    Classification,
    analyze_pst,
    classify_hamming,
    classify_johnson,
)
from .sim_oracle import FIDELITY_THRESHOLD, oracle_horizon, verify_certificates
from .walk_operators import build_walk

ANALYSIS_SCHEMA_ID = "grover-pst/analysis-report/v1"
CLASSIFICATION_SCHEMA_ID = "grover-pst/classification-table/v1"


def load_schema(name: str) -> dict:
    """Bundled JSON schema: ``analysis_report`` or ``classification_table``."""
    text = resources.files("grover_pst").joinpath("schemas", f"{name}.v1.json").read_text()
    return json.loads(text)


def graph_name(g: Graph) -> str | None:
    if g.family is None:
        return None
    name, params = g.family
    return f"{name}:{','.join(map(str, params))}" if params else name


def graph_summary(g: Graph, arcs: int) -> dict:
    return {
        "name": graph_name(g),
        "n": g.vertex_count,
        "edges": g.edge_count,
        "arcs": arcs,
        "regular": g.is_regular,
        "valency": g.valency,
        "components": len(g.components),
        "bipartite": g.is_bipartite,
    }


def analysis_report(
    g: Graph,
    tau_max: int = DEFAULT_TAU_MAX,
    threshold: float = FIDELITY_THRESHOLD,
    timing: bool = False,
) -> dict:
    """Run build -> walk -> spectrum -> periodicity -> PST -> oracle on ``g``."""
    clock = {}
    t0 = time.perf_counter()
    w = build_walk(g)
    clock["walk"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    ds = discriminant_spectrum(w)
    us = u_spectrum(w, ds)
    verdict = is_periodic(ds)
    clock["spectrum"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    pst = analyze_pst(g, tau_max, w)
    clock["pst"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    oracle = verify_certificates(
        list(pst.certificates), w, oracle_horizon(pst.period, tau_max), threshold=threshold
    )
    clock["oracle"] = time.perf_counter() - t0
    out = {
        "schema": ANALYSIS_SCHEMA_ID,
        "graph": graph_summary(g, w.arc_count),
        "spectrum": spectrum_report(ds, us),
        "periodicity": {
            "periodic": verdict.periodic,
            "exact": verdict.exact,
            "witness": None if verdict.witness is None else str(verdict.witness),
            "reason": verdict.reason,
            "period": period(us),
        },
        "pst": {
            "found": pst.pst,
            "route": pst.route,
            "reason": pst.reason,
            "conclusive": pst.conclusive,
            "certificates": [c.to_dict() for c in pst.certificates],
        },
        "oracle": oracle.to_dict(),
    }
    if timing:
        out["timing"] = {k: round(v, 6) for k, v in clock.items()}
    return out


def format_analysis(rep: dict) -> str:
    g = rep["graph"]
    lines = [
        f"graph      {g['name'] or '(edge list)'}  n={g['n']} edges={g['edges']} arcs={g['arcs']}"
        + (f" {g['valency']}-regular" if g["regular"] else " irregular"),
        "spectrum of P:",
    ]
    for e in rep["spectrum"]["eigenvalues"]:
        exact = e["exact"] if e["exact"] is not None else "?"
        lines.append(f"  {exact:>16}  {e['float']: .12f}  x{e['multiplicity']}")
    per = rep["periodicity"]
    state = "periodic" if per["periodic"] else "not periodic"
    if not per["exact"]:
        state += " (inexact)"
    lines.append(f"periodicity {state}; period {per['period'] if per['period'] else 'none'}")
    if per["witness"]:
        lines.append(f"  witness {per['witness']}")
    pst = rep["pst"]
    lines.append(f"PST        {'yes' if pst['found'] else 'no'}  [{pst['route']}] {pst['reason']}")
    for c in pst["certificates"]:
        lines.append(f"  {c['u']} -> {c['v']} at tau={c['tau']}  residual {c['residual']:.1e}")
    o = rep["oracle"]
    lines.append(
        f"oracle     {'agrees' if o['agrees'] else 'DISAGREES'} (horizon {o['horizon']}, "
        f"{sum(c['pass'] for c in o['certificates'])}/{len(o['certificates'])} certificates confirmed, "
        f"{len(o['unexpected'])} uncertified transfers)"
    )
    if "timing" in rep:
        lines.append("timing     " + " ".join(f"{k}={v:.3f}s" for k, v in rep["timing"].items()))
    return "\n".join(lines)


# --- classification tables ----------------------------------------------


@dataclass
class ClassificationRow:
    family: str
    params: dict
    label: str
    closed_form: Classification
    constructible: bool | None = None  # None when not checked
    engine_pst: bool | None = None
    engine_tau: int | None = None
    oracle_confirmed: bool | None = None

    def to_dict(self) -> dict:
        return {
            "params": self.params,
            "label": self.label,
            "pst": self.closed_form.pst,
            "tau": self.closed_form.tau,
            "reason": self.closed_form.reason,
            "constructible": self.constructible,
            "engine_pst": self.engine_pst,
            "engine_tau": self.engine_tau,
            "oracle_confirmed": self.oracle_confirmed,
        }


def _cycle_rule(n: int) -> Classification:
    if n % 2 == 0:
        return Classification(True, n // 2, "antipodal transfer at n/2")
    return Classification(False, None, "odd cycles are not antipodal")


def _complete_rule(n: int) -> Classification:
    if n == 2:
        return Classification(True, 1, "K2 swaps its endpoints")
    return Classification(False, None, "antipodal fibres of K_n have size n, not 2")


def _check_row(row: ClassificationRow, build, tau_max: int, threshold: float) -> ClassificationRow:
    try:
        g = build()
        w = build_walk(g)
    except CapacityError:
        row.constructible = False
        return row
    row.constructible = True
    verdict = analyze_pst(g, tau_max, w)
    taus = {c.tau for c in verdict.certificates}
    row.engine_pst = verdict.pst
    row.engine_tau = min(taus) if taus else None
    rep = verify_certificates(
        list(verdict.certificates), w, oracle_horizon(verdict.period, tau_max), threshold=threshold
    )
    row.oracle_confirmed = (
        rep.agrees and verdict.pst == row.closed_form.pst and row.engine_tau == row.closed_form.tau
    )
    return row


def _rows(family: str, ranges: dict):
    if family == "hamming":
        for d in ranges["d"]:
            for q in ranges["q"]:
                for i in range(1, d + 1):
                    yield (
                        ClassificationRow(family, {"d": d, "q": q, "i": i}, f"H({d},{q},{i})", classify_hamming(d, q, i)),
                        lambda d=d, q=q, i=i: hamming(d, q, i),
                    )
    elif family == "johnson":
        for n in range(2, ranges["n_max"] + 1):
            for k in range(1, n // 2 + 1):
                for i in range(k):
                    yield (
                        ClassificationRow(family, {"n": n, "k": k, "i": i}, f"J({n},{k},{i})", classify_johnson(n, k, i)),
                        lambda n=n, k=k, i=i: johnson(n, k, i),
                    )
    elif family == "cycle":
        for n in ranges["n"]:
            yield ClassificationRow(family, {"n": n}, f"C{n}", _cycle_rule(n)), lambda n=n: cycle(n)
    elif family == "complete":
        for n in ranges["n"]:
            yield ClassificationRow(family, {"n": n}, f"K{n}", _complete_rule(n)), lambda n=n: complete(n)
    else:
        raise ValueError(f"unknown classification family {family!r}")


def classification_table(
    family: str,
    ranges: dict,
    tau_max: int = DEFAULT_TAU_MAX,
    threshold: float = FIDELITY_THRESHOLD,
    threads: int = 1,
    check: bool = True,
) -> dict:
    """Closed-form verdict per parameter tuple, cross-checked when constructible.

    Rows are checked in a thread pool of ``threads`` workers; output order is
    the parameter order regardless.
    """
    rows = list(_rows(family, ranges))
    check_one = lambda rb: _check_row(rb[0], rb[1], tau_max, threshold)  # noqa: E731
    if check and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            done = list(pool.map(check_one, rows))
    elif check:
        done = [check_one(rb) for rb in rows]
    else:
        done = [r for r, _ in rows]
    return {
        "schema": CLASSIFICATION_SCHEMA_ID,
        "family": family,
        "rows": [r.to_dict() for r in done],
    }


def _flag(x) -> str:
    return "-" if x is None else ("yes" if x else "no")


def format_table(table: dict) -> str:
    lines = [f"{'graph':<12} {'PST':<4} {'tau':>4}  {'built':<5} {'engine':<6} {'oracle':<6} reason"]
    for r in table["rows"]:
        lines.append(
            f"{r['label']:<12} {_flag(r['pst']):<4} {r['tau'] if r['tau'] else '-':>4}  "
            f"{_flag(r['constructible']):<5} {_flag(r['engine_pst']):<6} {_flag(r['oracle_confirmed']):<6} {r['reason']}"
        )
    return "\n".join(lines)
