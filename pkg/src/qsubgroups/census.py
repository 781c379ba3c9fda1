"""Enumeration of subgroup data within bounds, with order-preserving parallel sweeps."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .cartan import all_parabolics, build_root_system
from .cyclo import CycNum, Sl2Elt
from .datum import SubgroupDatum, classify, consistency_dim, l0_descriptor, gamma_tilde
from .equiv import EQUIVALENT, NOT_APPLICABLE, decide_datum_equivalence, torus_slice
from .finab import FinAbGroup, all_subgroups


def abelian_groups(max_order, max_rank):
    """Invariant-factor tuples ``d1 | d2 | ...`` with product <= max_order (trivial group first)."""
    out = [()]

    def rec(prefix, prod):
        last = prefix[-1] if prefix else 1
        if len(prefix) >= max_rank:
            return
        for d in range(2, max_order // prod + 1):
            if prefix and d % last:
                continue
            t = prefix + (d,)
            out.append(t)
            rec(t, prod * d)
    rec((), 1)
    return sorted(out, key=lambda t: (_prod(t), len(t), t))


def _prod(t):
    p = 1
    for x in t:
        p *= x
    return p


def canonical_sigma(rank, factors):
    """Generator k -> (1/d_k) e_{n-r+k}; the last coordinates carry the largest factors."""
    n, r = rank, len(factors)
    pts = []
    for k, d in enumerate(factors):
        p = [Fraction(0)] * n
        p[n - r + k] = Fraction(1, d)
        pts.append(tuple(p))
    return pts


@dataclass(frozen=True)
class CensusEntry:
    """Picklable description of one census row."""

    lie_type: str
    ell: int
    iplus: tuple
    iminus: tuple
    N_generators: tuple
    gamma_kind: str
    gamma_factors: tuple
    sigma_torus: tuple
    sigma_matrices: tuple
    variant: str

    def datum(self) -> SubgroupDatum:
        return SubgroupDatum(build_root_system(self.lie_type), self.ell, set(self.iplus), set(self.iminus),
                             self.N_generators, self.gamma_kind, self.gamma_factors, self.sigma_torus,
                             self.sigma_matrices, name=self.variant)


def _sigma_variants(rs, factors, full):
    base = canonical_sigma(rs.rank, factors)
    out = [("canonical", base)]
    if not factors:
        return out
    if rs.rank == 1:
        d = factors[0]
        for u in range(2, d):
            if _gcd(u, d) == 1:
                out.append((f"unit {u}", [(Fraction(u, d),)]))
        return out
    if full:
        # a couple of Weyl/diagram images of the canonical embedding
        seen = {tuple(base)}
        for f in torus_slice(rs)[1:]:
            img = [f.apply(p) for p in base]
            if tuple(img) not in seen:
                seen.add(tuple(img))
                out.append((f"slice {len(out)}", img))
            if len(out) >= 3:
                break
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


_CONJUGATORS = {
    "full": [Sl2Elt(1, 1, 1, 2), Sl2Elt(1, Fraction(1, 2), 2, 2)],
    "upper": [Sl2Elt(1, 1, 0, 1)],
    "lower": [Sl2Elt(1, 0, 1, 1)],
}


def enumerate_specs(lie_type, ell, gamma_max, max_rank=None):
    rs = build_root_system(lie_type)
    max_rank = rs.rank if max_rank is None else max_rank
    groups = abelian_groups(gamma_max, max_rank)
    specs = []
    for sel in all_parabolics(rs):
        ip, im = tuple(sorted(sel.iplus)), tuple(sorted(sel.iminus))
        Ic = sorted(sel.I_c)
        T = FinAbGroup((ell,) * len(Ic))
        for N in all_subgroups(T):
            Ngens = tuple(tuple(g) for g in N.generators)
            for factors in groups:
                for name, pts in _sigma_variants(rs, factors, sel.is_full and N.order == 1):
                    specs.append(CensusEntry(rs.code, ell, ip, im, Ngens, "abelian", factors,
                                            tuple(pts), (), name))
                if rs.code == "A1" and len(factors) == 1 and factors[0] > 2:
                    # images off the torus, inside L
                    key = "full" if ip and im else "upper" if ip else "lower" if im else None
                    if key is None:
                        continue
                    d = factors[0]
                    x = Sl2Elt.diag(CycNum.zeta(d))
                    for j, g in enumerate(_CONJUGATORS[key]):
                        specs.append(CensusEntry(rs.code, ell, ip, im, Ngens, "matrix", (), (),
                                                (x.conjugate_by(g),), f"conjugate {j + 1}"))
    return specs


@dataclass
class CensusRow:
    index: int
    entry: CensusEntry
    report: dict
    consistent: bool
    gamma_tilde_key: tuple
    l0_key: tuple


def evaluate_spec(args):
    index, entry = args
    d = entry.datum()
    d.validate()
    rep = classify(d)
    ok = consistency_dim(d) == rep.dim_A
    return CensusRow(index, entry, rep.as_dict(), ok, gamma_tilde(d).key(), l0_descriptor(d).key())


def _pmap(fn, items, workers):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * workers) or 1)))
    return [fn(x) for x in items]


def run_census(lie_type, ell, gamma_max, workers=1, max_rank=None):
    specs = enumerate_specs(lie_type, ell, gamma_max, max_rank)
    return _pmap(evaluate_spec, list(enumerate(specs)), workers)


def _pair_verdict(args):
    i, j, s1, s2 = args
    res = decide_datum_equivalence(s1.datum(), s2.datum())
    return i, j, res.verdict


@dataclass
class InvariantCheck:
    pairs_checked: int
    equivalent_pairs: int
    violations: list

    @property
    def ok(self):
        return not self.violations


def invariant_consistency(rows, workers=1):
    """Every EQUIVALENT pair of census data must share Gamma-tilde and l0."""
    full = [r for r in rows if _applicable(r.entry)]
    jobs = [(a.index, b.index, a.entry, b.entry) for a, b in itertools.combinations(full, 2)
            if a.entry.lie_type == b.entry.lie_type and a.entry.ell == b.entry.ell]
    verdicts = _pmap(_pair_verdict, jobs, workers)
    by_index = {r.index: r for r in rows}
    eq, bad = 0, []
    for i, j, v in verdicts:
        if v == EQUIVALENT:
            eq += 1
            a, b = by_index[i], by_index[j]
            if a.gamma_tilde_key != b.gamma_tilde_key or a.l0_key != b.l0_key:
                bad.append((i, j))
        assert v != NOT_APPLICABLE
    return InvariantCheck(len(jobs), eq, bad)


def _applicable(entry):
    rs = build_root_system(entry.lie_type)
    full = set(entry.iplus) == set(range(1, rs.rank + 1)) == set(entry.iminus)
    trivial_N = all(not any(g) for g in entry.N_generators)
    return full and trivial_N and _gcd(entry.ell, rs.det_dc) == 1
