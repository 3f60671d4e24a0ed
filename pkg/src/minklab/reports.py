"""Report builders shared by the HTTP service and the CLI.

Each builder takes raw input text (or a builtin name), runs the relevant
module operations, and returns a JSON-serializable run report:

    command, input_digest, seeds, tolerances,
    results (each block carries a method tag), verdicts, passed.

Precondition and parse failures raise InputError subclasses; callers map
those to HTTP 422 or exit code 2.  Reports are byte-stable for identical
inputs and seeds.
"""

from __future__ import annotations

import hashlib
import json
import math
from fractions import Fraction
from typing import Optional, Sequence

from . import graphs, homology, lattice, multilinear, registry, symplectic
from .errors import InputError, NoPairingError

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT_ERROR = 2


def _digest(*parts: str) -> str:
    h = hashlib.sha256()
    for part in parts:
        h.update(part.encode("utf-8"))
        h.update(b"\x00")
    return h.hexdigest()


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (frozenset, set)):
        return sorted(value)
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    if isinstance(value, list):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


def _report(command, digest, results, verdicts, seeds=None, tolerances=None) -> dict:
    return {
        "command": command,
        "input_digest": digest,
        "seeds": _jsonable(seeds or {}),
        "tolerances": _jsonable(tolerances or {}),
        "results": _jsonable(results),
        "verdicts": dict(verdicts),
        "passed": all(verdicts.values()),
    }


# -- det2 -------------------------------------------------------------------


def det2_report(
    tensor_text: Optional[str] = None,
    builtin: Optional[str] = None,
    invariant_text: Optional[str] = None,
) -> dict:
    if builtin is not None:
        tensor = registry.get_tensor(builtin)
        source = f"builtin:{builtin}"
    elif tensor_text is not None:
        tensor = multilinear.Gf2Tensor.from_text(tensor_text)
        source = tensor_text
    else:
        raise InputError("need a tensor file or a builtin name")
    bit = multilinear.det2_dispatch(tensor)
    results = {
        "format": {"order": tensor.order, "dim": tensor.dim},
        "det2": {
            "value": bit,
            "method": "exact",
            "formula": multilinear.dispatch_format_name(tensor),
        },
    }
    verdicts = {"det2_nonzero": bit == 1}
    if invariant_text is not None:
        inv = multilinear.invariant_from_text(invariant_text)
        value = multilinear.eval_balanced(inv, tensor)
        witness = multilinear.witness_term(inv, tensor)
        results["balanced_invariant"] = {
            "value": value,
            "method": "exact",
            "q": inv.q,
            "m": inv.m,
            "witness_term": None if witness is None else [list(t) for t in witness],
        }
        verdicts["invariant_nonzero"] = value == 1
        source = source + "\n--invariant--\n" + invariant_text
    return _report("det2", _digest(source), results, verdicts)


# -- cup-form ---------------------------------------------------------------


def cup_form_report(
    complex_text: Optional[str] = None, builtin: Optional[str] = None
) -> dict:
    if builtin is not None:
        complex_ = registry.get_complex(builtin)
        source = f"builtin:{builtin}"
    elif complex_text is not None:
        complex_ = homology.SimplicialComplex.from_text(complex_text)
        source = complex_text
    else:
        raise InputError("need a complex file or a builtin name")
    form = homology.fundamental_form(complex_)
    bit = multilinear.det2_dispatch(form.tensor)
    alternating = (
        multilinear.is_alternating_bilinear(form.tensor)
        if form.tensor.order == 2
        else None
    )
    results = {
        "complex": {
            "vertices": complex_.vertex_count,
            "dimension": complex_.dimension,
            "top_simplices": len(complex_.faces[complex_.dimension]),
        },
        "betti1_mod2": {"value": form.tensor.dim, "method": "exact"},
        "cup_form": {
            "order": form.tensor.order,
            "dim": form.tensor.dim,
            "entries": "".join(map(str, form.tensor.entries)),
            "alternating": alternating,
            "method": "exact",
        },
        "hypothesis": {"value": bit, "method": "exact"},
    }
    return _report(
        "cup-form", _digest(source), results, {"hypothesis_nonzero": bit == 1}
    )


# -- graph-basis --------------------------------------------------------------


def graph_basis_report(graph_text: str, oracle: bool = False) -> dict:
    graph = graphs.MetricGraph.from_text(graph_text)
    cert = graphs.greedy_homology_basis(graph)
    b = graphs.betti1(graph)
    results = {
        "graph": {
            "vertices": graph.vertex_count,
            "edges": len(graph.edges),
            "betti1": b,
            "total_length": graphs.total_length(graph),
        },
        "greedy_certificate": {
            "cycles": [sorted(c) for c in cert.cycles],
            "lengths": list(cert.lengths),
            "product": cert.product,
            "bound": cert.bound,
            "independence_rank": cert.independence_rank,
            "method": "exact",
        },
    }
    verdicts = {
        "independence_rank_full": cert.independence_rank == b,
        "product_within_bound": cert.bound_holds,
    }
    if b >= 2:
        systole_cycle, systole = graphs.shortest_cycle(graph)
        bst = graphs.bst_bound(graph)
        results["systole"] = {
            "value": systole,
            "cycle": sorted(systole_cycle),
            "bst_bound": bst,
            "method": "exact",
        }
        verdicts["systole_within_bst_bound"] = systole <= bst
    if oracle:
        oracle_cert = graphs.min_cycle_basis(graph)
        greedy_sorted = sorted(cert.lengths)
        oracle_sorted = sorted(oracle_cert.lengths)
        dominated = all(o <= g for o, g in zip(oracle_sorted, greedy_sorted))
        results["oracle_certificate"] = {
            "cycles": [sorted(c) for c in oracle_cert.cycles],
            "lengths": list(oracle_cert.lengths),
            "product": oracle_cert.product,
            "independence_rank": oracle_cert.independence_rank,
            "method": "enumerated",
        }
        verdicts["oracle_dominates"] = dominated
        verdicts["oracle_product_minimal"] = oracle_cert.product <= cert.product * (
            1 + 1e-12
        )
    return _report("graph-basis", _digest(graph_text), results, verdicts)


# -- minima --------------------------------------------------------------------


def _load_body(body_json: Optional[str], builtin: Optional[str]):
    if builtin is not None:
        return registry.get_body(builtin), f"builtin:{builtin}"
    if body_json is None:
        raise InputError("need a body file or a builtin name")
    try:
        spec = json.loads(body_json)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad body JSON: {exc}") from exc
    return lattice.body_from_spec(spec), body_json


def minima_report(
    body_json: Optional[str] = None,
    builtin: Optional[str] = None,
    seed: Optional[int] = None,
    samples: int = lattice.DEFAULT_MC_SAMPLES,
    tolerance: Optional[float] = None,
) -> dict:
    body, source = _load_body(body_json, builtin)
    res = lattice.successive_minima(body, samples=samples, seed=seed)
    ratio_tol = tolerance if tolerance is not None else res.ratio_tolerance
    eq_mink = lattice.verify_eq_mink(body, result=res)
    primitive = all(math.gcd(*(abs(c) for c in v)) == 1 for v in res.vectors)
    results = {
        "body": lattice.body_to_spec(body),
        "minima": {
            "values": list(res.minima),
            "vectors": [list(v) for v in res.vectors],
            "exact_norms_squared": None
            if res.exact_norms_squared is None
            else [str(q) for q in res.exact_norms_squared],
            "method": "enumerated",
            "arithmetic": "binary64"
            if res.exact_norms_squared is None
            else "exact_rational",
        },
        "volume": {
            "value": res.volume.value,
            "method": res.volume.method,
            "standard_error": res.volume.standard_error,
            "samples": res.volume.samples,
        },
        "minkowski_ratio": {"value": res.minkowski_ratio, "method": res.volume.method},
        "torus_length_product": {
            "lhs": eq_mink.lhs,
            "rhs": eq_mink.rhs,
            "method": res.volume.method,
        },
    }
    verdicts = {
        "minkowski_second": res.minkowski_ratio <= 1.0 + ratio_tol,
        "torus_inequality": eq_mink.passed,
        "minima_vectors_primitive": primitive,
    }
    seeds = {} if res.volume.seed is None else {"volume": res.volume.seed}
    tolerances = {"minkowski_ratio": ratio_tol, "torus_inequality": eq_mink.tolerance}
    return _report(
        "minima", _digest(source), results, verdicts, seeds=seeds, tolerances=tolerances
    )


# -- pairing --------------------------------------------------------------------


def pairing_report(
    form_text: Optional[str] = None, builtin: Optional[str] = None
) -> dict:
    if builtin is not None:
        form = registry.get_form(builtin)
        source = f"builtin:{builtin}"
    elif form_text is not None:
        form = symplectic.form_from_text(form_text)
        source = form_text
    else:
        raise InputError("need a form file or a builtin name")
    nondegenerate = symplectic.is_nondegenerate(form)
    results = {
        "form": {"dim": form.dim, "field": form.field},
        "nondegenerate": {"value": nondegenerate, "method": "exact"},
    }
    try:
        pairing = symplectic.gutt_pairing(form)
    except NoPairingError:
        results["pairing"] = None
        verdicts = {
            "pairing_found": False,
            "degeneracy_certified": not nondegenerate,
        }
        return _report("pairing", _digest(source), results, verdicts)
    sound = symplectic.verify_pairing(form, pairing)
    results["pairing"] = {
        "sigma": list(pairing.sigma),
        "pair_values": [_jsonable(v) for v in pairing.pair_values],
        "method": "exact",
    }
    if form.dim <= 10:
        results["matching_count"] = {
            "value": symplectic.matching_count(form),
            "method": "enumerated",
        }
    verdicts = {"pairing_found": True, "pairing_sound": sound}
    return _report("pairing", _digest(source), results, verdicts)


# -- count ----------------------------------------------------------------------


def count_report(
    body_json: Optional[str] = None,
    builtin: Optional[str] = None,
    t: float = 1.0,
) -> dict:
    body, source = _load_body(body_json, builtin)
    count = lattice.count_geodesics(body, t)
    n = body.dim
    results = {
        "body": lattice.body_to_spec(body),
        "count": {"value": count, "t": t, "method": "enumerated"},
        "normalized": {"value": count / t**n, "method": "enumerated"},
    }
    if not isinstance(body, lattice.SlabPolytope):
        vol = lattice.volume(body)
        results["ball_measure"] = {"value": vol.value, "method": vol.method}
    return _report(
        "count", _digest(source, repr(t)), results, {"within_budget": True}
    )


# -- verify-stab ------------------------------------------------------------------


def verify_stab_report(
    body_json: Optional[str] = None,
    builtin: Optional[str] = None,
    vectors: Optional[Sequence[Sequence[int]]] = None,
) -> dict:
    body, source = _load_body(body_json, builtin)
    eq = lattice.verify_eq_stab(body)
    if vectors is None:
        vectors = lattice.successive_minima(body).vectors
        vector_source = "successive_minima"
    else:
        vector_source = "user"
    prop = lattice.prop_stab_check(body, vectors)
    results = {
        "body": lattice.body_to_spec(body),
        "asymptotic_identity": {
            "cover_growth": eq.lhs,
            "ball_measure_times_volume": eq.rhs,
            "expected": eq.details["expected"],
            "method": "exact",
        },
        "length_product_bound": {
            "lhs": prop.lhs,
            "rhs": prop.rhs,
            "vectors": [list(v) for v in vectors],
            "vector_source": vector_source,
            "method": "exact",
        },
    }
    verdicts = {"asymptotic_identity": eq.passed, "length_product_bound": prop.passed}
    tolerances = {"asymptotic_identity": eq.tolerance}
    return _report(
        "verify-stab", _digest(source), results, verdicts, tolerances=tolerances
    )


def builtins_report() -> dict:
    return _report("builtins", _digest(""), registry.all_builtins(), {})
