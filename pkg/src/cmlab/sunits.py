"""S-unit tests for singular moduli and their differences."""

from __future__ import annotations

import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import polys
from .classpoly import hilbert_class_poly
from .errors import BoundExceeded, CMLabError, EqualDiscriminants
from .modfunc import ModularRelation, builtin_relation, singular_moduli_polys
from .polys import Poly
from .quadforms import Discriminant, as_discriminant, discriminants

MAX_SEARCH_BOUND = 10**6


@dataclass(frozen=True)
class FactorizationOutcome:
    factored: Dict[int, int]
    cofactor: int

    def value(self) -> int:
        out = self.cofactor
        for p, e in self.factored.items():
            out *= p**e
        return out

    def to_json(self) -> dict:
        return {"factored": {str(p): e for p, e in sorted(self.factored.items())}, "cofactor": str(self.cofactor)}


def factor_over(n: int, S: Iterable[int]) -> FactorizationOutcome:
    """Strip every prime of S from n; whatever remains is the cofactor."""
    if n == 0:
        raise ValueError("cannot factor zero over a prime set")
    out: Dict[int, int] = {}
    for p in sorted(set(S)):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out[p] = e
    return FactorizationOutcome(out, n)


def is_s_unit(P: Sequence[int], S: Iterable[int]) -> bool:
    P = polys.trim(P)
    if not P:
        raise ValueError("zero polynomial")
    if P[0] == 0:
        return False
    S = tuple(S)
    return abs(factor_over(P[-1], S).cofactor) == 1 and abs(factor_over(P[0], S).cofactor) == 1


def difference_minpolys(P: Sequence[int], Q: Sequence[int]) -> List[Poly]:
    """Irreducible factors of Res_Y(Q(Y), P(T + Y)); roots are alpha - beta."""
    P, Q = polys.trim(P), polys.trim(Q)
    if not P or not Q:
        raise ValueError("zero polynomial")
    return polys.distinct_factors(polys.composed_difference(P, Q))


def norm_of_difference_cm(D, D0) -> int:
    """Res(H_D, H_D0) = prod (j - j0) over all pairs of conjugates."""
    D, D0 = as_discriminant(D), as_discriminant(D0)
    if D == D0:
        raise EqualDiscriminants("norm of a difference of conjugates is not handled")
    return polys.resultant_flint(hilbert_class_poly(D).as_list(), hilbert_class_poly(D0).as_list())


@dataclass(frozen=True)
class Base:
    """Base value for a search: 0, the singular moduli (rel0, D0), or roots of P0."""

    kind: str  # "zero" | "singular" | "algebraic"
    relation: Optional[str] = None
    D0: Optional[int] = None
    poly: Optional[Tuple[int, ...]] = None

    @classmethod
    def zero(cls) -> "Base":
        return cls("zero")

    @classmethod
    def singular(cls, relation: str, D0: int) -> "Base":
        return cls("singular", relation=relation, D0=int(D0))

    @classmethod
    def algebraic(cls, P0: Sequence[int]) -> "Base":
        return cls("algebraic", poly=tuple(polys.primitive(P0)))

    def factors(self, rel_lookup=builtin_relation) -> List[Poly]:
        if self.kind == "zero":
            return [[0, 1]]
        if self.kind == "singular":
            return singular_moduli_polys(rel_lookup(self.relation), self.D0)
        if self.kind == "algebraic":
            return polys.distinct_factors(list(self.poly))
        raise ValueError(f"unknown base kind {self.kind!r}")

    def describe(self) -> str:
        if self.kind == "zero":
            return "0"
        if self.kind == "singular":
            return f"singular({self.relation},{self.D0})"
        return "algebraic(" + ",".join(str(c) for c in self.poly) + ")"


@dataclass(frozen=True)
class SUnitReport:
    relation: str
    D: int
    factor_index: int
    singular_factor: Tuple[int, ...]
    base: str
    base_factor: Tuple[int, ...]
    polynomial: Tuple[int, ...]  # minimal polynomial of the difference
    S: Tuple[int, ...]
    is_s_unit: bool
    leading: FactorizationOutcome
    constant: FactorizationOutcome

    def to_dict(self) -> dict:
        return {
            "relation": self.relation,
            "D": self.D,
            "factor_index": self.factor_index,
            "singular_factor": [str(c) for c in self.singular_factor],
            "base": self.base,
            "base_factor": [str(c) for c in self.base_factor],
            "polynomial": [str(c) for c in self.polynomial],
            "S": list(self.S),
            "is_s_unit": self.is_s_unit,
            "leading": {**self.leading.to_json(), "sign": 1 if self.polynomial[-1] > 0 else -1},
            "constant": {**self.constant.to_json(), "sign": (self.polynomial[0] > 0) - (self.polynomial[0] < 0)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def _report(rel_name, D, idx, F, base, B, G, S) -> SUnitReport:
    lead_f = factor_over(abs(G[-1]), S)
    const_f = factor_over(abs(G[0]), S) if G[0] else FactorizationOutcome({}, 0)
    return SUnitReport(
        rel_name, D, idx, tuple(F), base.describe(), tuple(B), tuple(G), tuple(sorted(S)),
        is_s_unit(G, S), lead_f, const_f,
    )


def reports_for_discriminant(
    rel: ModularRelation, D: Discriminant, base: Base, base_factors: List[Poly], S: Tuple[int, ...],
    hits_only: bool = True,
) -> List[SUnitReport]:
    out = []
    for idx, F in enumerate(singular_moduli_polys(rel, D)):
        for B in base_factors:
            if base.kind == "zero":
                diffs = [F]
            else:
                diffs = difference_minpolys(F, B)
            for G in diffs:
                if G == [0, 1]:
                    # F and B share the root: zero is never an S-unit
                    if not hits_only:
                        out.append(_report(rel.name, D.value, idx, F, base, B, G, S))
                    continue
                rep = _report(rel.name, D.value, idx, F, base, B, G, S)
                if rep.is_s_unit or not hits_only:
                    out.append(rep)
    return out


def _task(args):
    rel, D, base, base_factors, S, hits_only = args
    try:
        return D.value, reports_for_discriminant(rel, D, base, base_factors, S, hits_only), None
    except CMLabError as exc:
        return D.value, None, f"{type(exc).__name__}: {exc}"


def sunit_search(
    rel: ModularRelation,
    base: Base,
    S: Iterable[int],
    Dmax: int,
    *,
    Dmin: int = 3,
    workers: int = 1,
    hits_only: bool = True,
    progress=None,
) -> List[SUnitReport]:
    """Every S-unit difference f - f0 with f over |D| <= Dmax, ordered by (|D|, factor index).

    ``progress`` is a text stream (or True for stderr) that receives a line every 100 discriminants.
    """
    stream_out = (sys.stderr if progress is True else progress) or None
    if Dmax > MAX_SEARCH_BOUND:
        raise BoundExceeded(f"Dmax = {Dmax} exceeds {MAX_SEARCH_BOUND}")
    S = tuple(sorted(set(S)))
    base_factors = base.factors()
    skip = base.D0 if base.kind == "singular" else None
    tasks = [
        (rel, D, base, base_factors, S, hits_only)
        for D in discriminants(Dmax, Dmin)
        if D.value != skip
    ]
    results: Dict[int, List[SUnitReport]] = {}
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            stream = pool.map(_task, tasks, chunksize=8)
            for n, (dval, reps, err) in enumerate(stream):
                if err is not None:
                    raise CMLabError(f"search aborted at D = {dval}: {err}")
                results[dval] = reps
                if stream_out and n % 100 == 0:
                    print(f"[sunit-search] D = {dval}", file=stream_out)
    else:
        for n, t in enumerate(tasks):
            dval, reps, err = _task(t)
            if err is not None:
                raise CMLabError(f"search aborted at D = {dval}: {err}")
            results[dval] = reps
            if stream_out and n % 100 == 0:
                print(f"[sunit-search] D = {dval}", file=stream_out)
    out: List[SUnitReport] = []
    for dval in sorted(results, key=lambda v: -v):
        out.extend(sorted(results[dval], key=lambda r: r.factor_index))
    return out
