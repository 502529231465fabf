"""Command-line driver and JSON experiment runner.

Every subcommand is a handler taking a parameter dict and returning a
JSON-ready dict. ``run_experiment`` merges a spec with the handler's
defaults, rejects unknown keys, and wraps the result as
``{"command", "inputs", "result"}`` plus an optional timestamp. Output is
serialised with sorted keys, so equal inputs give byte-identical documents.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction

import numpy as np

from biaslab import bias, bounds, cache, compression, containers, labelling, rings
from biaslab.bias import BiasSet, SimpleGraph
from biaslab.cycles import canonical_cycle, catalog_for, cycle_count_by_length, edge_index
from biaslab.overlap import build_overlap, compute_sn_and_bounds, theta_triples

GLOBAL_DEFAULTS = {"seed": 0, "cap": None, "cache_dir": None, "use_cache": True, "threads": 1}


# --- parameter helpers -----------------------------------------------------------


def _need_n(p: dict, low: int = 3) -> int:
    n = p.get("n")
    if n is None:
        raise ValueError("parameter 'n' is required")
    if not isinstance(n, int) or n < low:
        raise ValueError(f"'n' must be an integer >= {low}, got {n!r}")
    return n


def _omega(p: dict, n: int):
    return cache.load_or_build(n, p.get("cache_dir"), use_cache=p.get("use_cache", True))


def _bias_from(p: dict, catalog, key: str = "bias") -> BiasSet | None:
    """Ids (ints) or vertex sequences (lists) of cycles."""
    raw = p.get(key)
    if raw is None:
        return None
    if isinstance(raw, str):
        raw = _cycle_list(raw)
    ids = []
    for item in raw:
        if isinstance(item, int):
            ids.append(item)
        else:
            ids.append(catalog.id_of(canonical_cycle(item, catalog.n)))
    return BiasSet.from_ids(catalog, ids)


def _graph_from(p: dict, n: int) -> SimpleGraph:
    raw = p.get("edges")
    if raw is None:
        return SimpleGraph.complete(n)
    if isinstance(raw, str):
        raw = _edge_list(raw)
    mask = 0
    for u, v in raw:
        mask |= 1 << edge_index(int(u), int(v), n)
    return SimpleGraph(n, mask)


def _group_from(moduli) -> labelling.AbelianGroup:
    if isinstance(moduli, str):
        moduli = _int_list(moduli)
    return labelling.AbelianGroup(tuple(int(q) for q in moduli))


def _cap(p: dict, default: int) -> int:
    return default if p.get("cap") is None else int(p["cap"])


def _ratio(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


# --- handlers ------------------------------------------------------------------


def cmd_cycles(p: dict) -> dict:
    n = _need_n(p, 1)
    cat = catalog_for(n)
    rows = []
    for k in range(3, n + 1):
        got = len(cat.ids_of_length(k))
        rows.append({"k": k, "count": got, "expected": cycle_count_by_length(n, k)})
    out = {"n": n, "total": len(cat), "by_length": rows, "all_match": all(r["count"] == r["expected"] for r in rows)}
    if p["list"]:
        out["cycles"] = [list(c.vertices) for c in cat]
    return out


def cmd_omega(p: dict) -> dict:
    n = _need_n(p)
    omega = _omega(p, n)
    degs = omega.degrees()
    stats = compute_sn_and_bounds(n, omega)
    return {
        "n": n,
        "vertex_count": omega.vertex_count,
        "edge_count": omega.edge_count,
        "theta_triples": sum(1 for _ in theta_triples(omega)),
        "min_degree": int(degs.min()) if len(degs) else 0,
        "max_degree": int(degs.max()) if len(degs) else 0,
        "sn": stats.to_json(),
    }


def cmd_validate(p: dict) -> dict:
    n = _need_n(p)
    cat = catalog_for(n)
    B = _bias_from(p, cat)
    if B is None:
        raise ValueError("parameter 'bias' is required")
    omega = _omega(p, n)
    G = _graph_from(p, n)
    return {
        "bias": B.to_json(),
        "biased_clique": bias.is_biased_clique(B, omega),
        "biased_graph": bias.is_biased_graph(G, B),
        "scarce": bias.is_scarce(B, omega),
        "spanned_edges": bias.spanned_edges(B, omega),
        "graph_edges": G.edge_count,
    }


def cmd_count(p: dict) -> dict:
    n = _need_n(p)
    what = p["what"]
    if what == "cliques":
        return {"n": n, "what": what, "count": bias.count_biased_cliques(n, max_n=p["max_n"] or 5)}
    if what == "graphs":
        return {"n": n, "what": what, "count": bias.count_biased_graphs(n, max_n=p["max_n"] or 4)}
    if what == "scarce":
        if n > (p["max_n"] or 5):
            raise ValueError(f"scarce counting is capped at n={p['max_n'] or 5}")
        omega = _omega(p, n)
        cat = omega.catalog
        cliques = scarce = 0
        for mk in bias.iter_biased_cliques(omega):
            cliques += 1
            scarce += bias.is_scarce(BiasSet(cat, mk), omega)
        return {"n": n, "what": what, "cliques": cliques, "count": scarce}
    raise ValueError(f"unknown count target {what!r}")


def cmd_mis(p: dict) -> dict:
    n = _need_n(p)
    omega = _omega(p, n)
    res = bias.max_stable_set(omega, mode=p["mode"], cap=_cap(p, bias.DEFAULT_OPTIMA_CAP))
    hams = set(omega.catalog.ids_of_length(n))
    out = {
        "n": n,
        "size": res.size,
        "witness": res.witness,
        "witness_is_hamilton_set": set(res.witness) == hams,
        "half_factorial": len(hams),
        "unique": res.unique,
        "complete": res.complete,
    }
    if res.optima is not None:
        out["optima_count"] = len(res.optima)
        if p["list_optima"]:
            out["optima"] = res.optima
    return out


def cmd_containers(p: dict) -> dict:
    n = _need_n(p)
    omega = _omega(p, n)
    params = containers.container_params(n, a=p["a"], s=p["s"], alpha=p["alpha"])
    B = _bias_from(p, omega.catalog)
    if B is not None:
        if not bias.is_scarce(B, omega):
            raise ValueError("container input must be a scarce set")
        trace = containers.run_containers(B, omega, params, keep_states=p["full"])
        return {
            "params": params.to_json(),
            "trace": trace.to_json(full=p["full"]),
            "checks": containers.check_container(B, omega, params),
        }
    rng = bias.make_rng(p["seed"])
    tallies: dict[str, int] = {}
    sizes = []
    for _ in range(p["samples"]):
        S = bias.random_scarce_set(omega, rng)
        for key, ok in containers.check_container(S, omega, params).items():
            tallies[key] = tallies.get(key, 0) + int(ok)
        fp, ct = containers.fingerprint_container(S, omega, params)
        sizes.append((fp.bit_count(), ct.bit_count()))
    return {
        "params": params.to_json(),
        "samples": p["samples"],
        "passed": tallies,
        "all_passed": all(v == p["samples"] for v in tallies.values()),
        "max_fingerprint_size": max((s for s, _ in sizes), default=0),
        "max_container_size": max((c for _, c in sizes), default=0),
    }


def _random_clique(n: int, p: dict) -> BiasSet:
    """Balanced set of a random abelian labelling of K_n."""
    G = SimpleGraph.complete(n)
    L = labelling.random_labelling(G, _group_from(p["moduli"]), bias.make_rng(p["seed"]))
    return labelling.balanced_set(G, L)


def cmd_compress(p: dict) -> dict:
    n = _need_n(p)
    omega = _omega(p, n)
    scheme = compression.build_scheme(omega.catalog, omega)
    B = _bias_from(p, omega.catalog)
    if B is None:
        B = _random_clique(n, p)
    Bp = compression.compress(B, scheme)
    X = BiasSet(B.catalog, B.members & scheme.short_mask)
    back = compression.reconstruct(Bp, X, scheme)
    return {
        "scheme": scheme.summary(),
        "input": B.to_json(),
        "compressed": Bp.to_json(),
        "short_part": X.ids(),
        "round_trip": back is not None and back == B,
    }


def cmd_reconstruct(p: dict) -> dict:
    n = _need_n(p)
    omega = _omega(p, n)
    cat = omega.catalog
    scheme = compression.build_scheme(cat, omega)
    Bp = _bias_from(p, cat, "compressed") or BiasSet(cat, 0)
    X = _bias_from(p, cat, "short") or BiasSet(cat, 0)
    B = compression.reconstruct(Bp, X, scheme)
    return {"scheme": scheme.summary(), "found": B is not None, "bias": None if B is None else B.to_json()}


def cmd_label(p: dict) -> dict:
    n = _need_n(p)
    G = _graph_from(p, n)
    cat = catalog_for(n)
    cap = _cap(p, labelling.DEFAULT_CYCLE_CAP)
    B = _bias_from(p, cat)
    out: dict = {"n": n, "graph_edges": G.edge_count}
    if B is None:
        group = _group_from(p["moduli"])
        L = labelling.random_labelling(G, group, bias.make_rng(p["seed"]), spread=p["spread"])
        B = labelling.balanced_set(G, L, cap)
        out["labelling"] = L.to_json()
        out["theta_property"] = bias.is_biased_graph(G, B)
    out["bias"] = B.to_json()
    dec = labelling.abelian_labellable(G, B, cap)
    out["decision"] = dec.to_json(cat)
    if p["brute_force_q"]:
        q = int(p["brute_force_q"])
        out["brute_force"] = {
            "group": f"Z_{q}",
            "labellable": labelling.brute_force_labellable(G, B, labelling.cyclic_group(q)),
        }
    return out


def cmd_patterns(p: dict) -> dict:
    q = int(p["q"])
    cap = _cap(p, labelling.DEFAULT_WITNESS_CAP)
    if p["system"] == "single":
        poly = labelling.Polynomial.from_dict({(0,): 1})
        system = labelling.ZeroPatternSystem([poly], 1)
        report = labelling.zero_patterns(system, q, cap)
        return {"system": "single", "report": report.to_json()}
    if p["system"] != "graph":
        raise ValueError(f"unknown system {p['system']!r}")
    n = _need_n(p)
    G = _graph_from(p, n)
    system, ids = labelling.graph_system(G)
    report = labelling.zero_patterns(system, q, cap)
    return {"system": "graph", "n": n, "cycle_ids": ids, "report": report.to_json()}


def cmd_rings(p: dict) -> dict:
    n = _need_n(p, 6)
    cat = catalog_for(n)
    found = rings.enumerate_diamond_rings(n, cat)
    four = all(rings.ring_hamiltons(R, cat) == R.hamiltons for R in found) if p["verify"] else None
    signed = all(rings.ring_dependency(R, cat) is not None for R in found) if p["verify"] else None
    out = {
        "n": n,
        "count": len(found),
        "expected": rings.expected_ring_count(n),
        "four_hamiltons_each": four,
        "signed_dependency_each": signed,
        "dependent_pairs": rings.dependent_pairs(found),
    }
    trials = p["labellings"]
    if trials:
        G = SimpleGraph.complete(n)
        group = _group_from(p["moduli"])
        clean = 0
        for t in range(trials):
            L = labelling.random_labelling(G, group, rings.trial_rng(p["seed"], t))
            clean += rings.labelled_ring_check(L, found)
        out["labellings"] = {"trials": trials, "moduli": list(group.moduli), "no_bad_ring": clean}
    if p["list"]:
        out["rings"] = [R.to_json() for R in found]
    return out


def cmd_mc(p: dict) -> dict:
    n = _need_n(p, 6)
    rep = rings.monte_carlo(n, p["trials"], p["seed"], p=p["p"], threads=p["threads"])
    out = rep.to_json(include_values=p["values"])
    z = rep.z_score
    out["within_5_stderr"] = None if z is None else abs(z) <= 5
    return out


def cmd_bounds(p: dict) -> dict:
    lo = p["n"] if p["n"] is not None else p["n_min"]
    hi = p["n"] if p["n"] is not None else p["n_max"]
    if lo is None or hi is None:
        raise ValueError("give 'n' or both 'n_min' and 'n_max'")
    reports = [bounds.bounds_report(k).to_json() for k in range(lo, hi + 1)]
    all_ok = all(v is not False for r in reports for v in r["checks"].values())
    out = {"reports": reports, "all_checks_hold": all_ok, "abelian_crossover": bounds.abelian_crossover()}
    return out


def cmd_cache(p: dict) -> dict:
    n = _need_n(p)
    path = cache.cache_path(n, p.get("cache_dir"))
    action = p["action"]
    if action == "build":
        cache.cache_save(build_overlap(catalog_for(n)), path)
    elif action != "verify":
        raise ValueError(f"unknown cache action {action!r}")
    omega = cache.cache_load(path)
    return {
        "n": n,
        "path": str(path),
        "bytes": path.stat().st_size,
        "vertex_count": omega.vertex_count,
        "edge_count": omega.edge_count,
        "valid": True,
    }


COMMANDS: dict[str, tuple] = {
    "cycles": (cmd_cycles, {"n": None, "list": False}),
    "omega": (cmd_omega, {"n": None}),
    "validate": (cmd_validate, {"n": None, "bias": None, "edges": None}),
    "count": (cmd_count, {"n": None, "what": "cliques", "max_n": None}),
    "mis": (cmd_mis, {"n": None, "mode": "all_optima", "list_optima": False}),
    "containers": (
        cmd_containers,
        {"n": None, "a": None, "s": None, "alpha": None, "bias": None, "samples": 10, "full": False},
    ),
    "compress": (cmd_compress, {"n": None, "bias": None, "moduli": [2]}),
    "reconstruct": (cmd_reconstruct, {"n": None, "compressed": None, "short": None}),
    "label": (
        cmd_label,
        {"n": None, "edges": None, "bias": None, "moduli": [6], "spread": 3, "brute_force_q": None},
    ),
    "patterns": (cmd_patterns, {"n": None, "q": 3, "system": "graph", "edges": None}),
    "rings": (cmd_rings, {"n": None, "verify": True, "labellings": 0, "moduli": [6], "list": False}),
    "mc": (cmd_mc, {"n": None, "trials": 200, "p": 0.5, "values": False}),
    "bounds": (cmd_bounds, {"n": None, "n_min": None, "n_max": None}),
    "cache": (cmd_cache, {"n": None, "action": "verify"}),
}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return _ratio(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def run_experiment(spec: dict, timestamp: bool = False) -> dict:
    """Run one experiment described by ``{"cmd": name, **parameters}``."""
    spec = dict(spec)
    name = spec.pop("cmd", None) or spec.pop("command", None)
    if name not in COMMANDS:
        raise ValueError(f"unknown command {name!r}; expected one of {sorted(COMMANDS)}")
    handler, defaults = COMMANDS[name]
    allowed = {**GLOBAL_DEFAULTS, **defaults}
    unknown = sorted(set(spec) - set(allowed))
    if unknown:
        raise ValueError(f"unknown parameters for {name}: {unknown}")
    params = {**allowed, **spec}
    result = handler(params)
    echoed = {k: v for k, v in params.items() if k in defaults or spec.get(k) is not None}
    doc = {"command": name, "inputs": _jsonable(echoed), "result": _jsonable(result)}
    if timestamp:
        doc["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# --- argument parsing ------------------------------------------------------------


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _cycle_list(text: str) -> list:
    """``0,5,7`` (ids) or ``1-2-3,1-2-4`` (vertex sequences)."""
    out: list = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok:
            out.append([int(v) for v in tok.split("-")] if "-" in tok else int(tok))
    return out


def _edge_list(text: str) -> list[list[int]]:
    out = []
    for tok in text.split(","):
        u, v = tok.strip().split("-")
        out.append([int(u), int(v)])
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="biaslab", description="Biased graphs on K_n: exact computations.")
    ap.add_argument("--n", type=int, help="number of vertices")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--cap", type=int, help="size cap for enumerations")
    ap.add_argument("--json", metavar="PATH", help="write the JSON document here instead of stdout")
    ap.add_argument("--cache-dir", help="overlap-graph cache directory (overrides $BIASLAB_CACHE_DIR)")
    ap.add_argument("--no-cache", action="store_true", help="build overlap graphs in memory only")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")
    sub = ap.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("cycles", help="enumerate cycles of K_n")
    s.add_argument("--list", action="store_true")
    sub.add_parser("omega", help="overlap graph statistics")
    s = sub.add_parser("validate", help="check a bias set")
    s.add_argument("--bias", type=_cycle_list, required=True)
    s.add_argument("--edges", type=_edge_list)
    s = sub.add_parser("count", help="exact counts at small n")
    s.add_argument("--what", choices=["cliques", "graphs", "scarce"], default="cliques")
    s.add_argument("--max-n", type=int)
    s = sub.add_parser("mis", help="maximum stable set of the overlap graph")
    s.add_argument("--mode", choices=["one_witness", "all_optima"], default="all_optima")
    s.add_argument("--list-optima", action="store_true")
    s = sub.add_parser("containers", help="run the container algorithm")
    s.add_argument("--a", type=Fraction)
    s.add_argument("--s", type=Fraction)
    s.add_argument("--alpha", type=Fraction)
    s.add_argument("--bias", type=_cycle_list)
    s.add_argument("--samples", type=int, default=10)
    s.add_argument("--full", action="store_true")
    s = sub.add_parser("compress", help="compress a biased clique")
    s.add_argument("--bias", type=_cycle_list)
    s.add_argument("--moduli", type=_int_list, default=[2])
    s = sub.add_parser("reconstruct", help="invert compression")
    s.add_argument("--compressed", type=_cycle_list)
    s.add_argument("--short", type=_cycle_list)
    s = sub.add_parser("label", help="abelian labellability")
    s.add_argument("--edges", type=_edge_list)
    s.add_argument("--bias", type=_cycle_list)
    s.add_argument("--moduli", type=_int_list, default=[6])
    s.add_argument("--spread", type=int, default=3)
    s.add_argument("--brute-force-q", type=int)
    s = sub.add_parser("patterns", help="zero patterns over F_q")
    s.add_argument("--q", type=int, default=3)
    s.add_argument("--system", choices=["graph", "single"], default="graph")
    s.add_argument("--edges", type=_edge_list)
    s = sub.add_parser("rings", help="diamond rings")
    s.add_argument("--no-verify", dest="verify", action="store_false")
    s.add_argument("--labellings", type=int, default=0)
    s.add_argument("--moduli", type=_int_list, default=[6])
    s.add_argument("--list", action="store_true")
    s = sub.add_parser("mc", help="bad-ring Monte Carlo")
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--p", type=float, default=0.5)
    s.add_argument("--values", action="store_true")
    s = sub.add_parser("bounds", help="bounds report")
    s.add_argument("--n-min", type=int)
    s.add_argument("--n-max", type=int)
    s = sub.add_parser("cache", help="build or verify the overlap-graph cache")
    s.add_argument("--action", choices=["build", "verify"], default="verify")
    s = sub.add_parser("run", help="run an experiment spec from a JSON file")
    s.add_argument("spec", help="path to a JSON object with a 'cmd' key")
    return ap


_NOT_PARAMS = {"json", "no_timestamp", "no_cache", "spec"}


def _spec_from_args(args: argparse.Namespace) -> dict:
    if args.cmd == "run":
        with open(args.spec) as f:
            spec = json.load(f)
        if not isinstance(spec, dict):
            raise ValueError("experiment spec must be a JSON object")
        # command-line globals fill in what the file leaves out
        for key in GLOBAL_DEFAULTS:
            val = getattr(args, key, None)
            if key not in spec and val is not None and val != GLOBAL_DEFAULTS[key]:
                spec[key] = val
        if args.no_cache:
            spec.setdefault("use_cache", False)
        return spec
    _, defaults = COMMANDS[args.cmd]
    spec: dict = {"cmd": args.cmd}
    for key, val in vars(args).items():
        if key in _NOT_PARAMS or key == "cmd":
            continue
        if key in defaults or key in GLOBAL_DEFAULTS:
            if isinstance(val, Fraction):
                val = val.numerator if val.denominator == 1 else str(val)
            spec[key] = val
    spec["use_cache"] = not args.no_cache
    return spec


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        doc = run_experiment(_spec_from_args(args), timestamp=not args.no_timestamp)
    except (ValueError, OSError) as exc:
        print(f"biaslab: error: {exc}", file=sys.stderr)
        return 2
    text = dumps(doc)
    if args.json:
        with open(args.json, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
