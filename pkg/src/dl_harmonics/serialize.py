"""JSON forms used by the command-line tools.

Every exact number travels as a ``"NUM/DEN"`` string; floats appear only in
Monte-Carlo estimates, labelled as such.
"""

from __future__ import annotations

from dataclasses import asdict
from fractions import Fraction

from .dl_graph import DLParams, vertex_to_json_pair
from .dirichlet import HittingTable
from .kernels import HarmonicFunction, KernelSpec, combine
from .tree import end_from_json, end_to_json, vertex_to_json
from .walks import EstimateResult

__all__ = [
    "frac_str",
    "parse_frac",
    "harmonic_from_json",
    "harmonic_to_json",
    "table_to_json",
    "estimate_to_json",
]


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    return Fraction(str(s).strip())


def harmonic_to_json(h: HarmonicFunction) -> dict:
    if not h.terms:
        raise ValueError("cannot serialise a bare constant without parameters")
    params = h.terms[0][1].params
    return {
        "q": params.q,
        "r": params.r,
        "alpha": frac_str(h.alpha),
        "constant": frac_str(h.constant),
        "terms": [
            {"coeff": frac_str(c), "side": s.side, "end": end_to_json(s.end)}
            for c, s in h.terms
        ],
    }


def harmonic_from_json(obj: dict) -> tuple[HarmonicFunction, DLParams]:
    params = DLParams(int(obj["q"]), int(obj["r"]))
    alpha = parse_frac(obj["alpha"])
    terms = []
    for t in obj.get("terms", []):
        spec = KernelSpec(int(t["side"]), end_from_json(t["end"]), alpha, params)
        terms.append((parse_frac(t["coeff"]), spec))
    constant = parse_frac(obj.get("constant", "0/1"))
    if not terms:
        # A constant alone: represent with no terms but remember the graph.
        return HarmonicFunction((), constant, False), params
    return combine(terms, constant), params


def table_to_json(table: HittingTable) -> dict:
    chain = table.chain
    if chain.kind == "dl":
        enc = vertex_to_json_pair
    else:
        enc = vertex_to_json
    return {
        "kind": chain.kind,
        "n": chain.n,
        "q": chain.params.q,
        "r": chain.params.r,
        "alpha": frac_str(chain.alpha),
        "vertices": [enc(v) for v in chain.vertices],
        "boundary": [enc(v) for v in chain.boundary],
        "F": [[frac_str(x) for x in row] for row in table.rows],
    }


def estimate_to_json(res: EstimateResult) -> dict:
    out = asdict(res)
    out["point_estimate_is_float_estimate"] = True
    return out
