"""Oracle-equivalence suites run by ``fgc selftest``."""

from __future__ import annotations

import time
import warnings

from .errors import FGCError


def _torsion_suite(full: bool) -> dict:
    from math import gcd

    from .torsion import brute_force_torsion, count_torsion, gl_order

    cap = 10**6 if full else 10**5
    checked = mismatches = 0
    for a in (2, 3, 4, 6):
        for q in (3, 4, 5, 7, 9):
            if gcd(a, q) != 1:
                continue
            for n in (1, 2, 3):
                if gl_order(n, q) > cap or q ** (n * n) > 4 * cap:
                    continue
                for k in range(a):
                    checked += 1
                    if count_torsion(a, q, n, k) != brute_force_torsion(a, q, n, k, cap=cap):
                        mismatches += 1
    return {"checked": checked, "mismatches": mismatches}


def _hurwitz_suite(full: bool) -> dict:
    from .characters import compute_character_table
    from .groups import general_linear_group, symmetric_group
    from .hurwitz import brute_force_hom_count, total_hom_count
    from .signature import parse_signature

    cases = [(symmetric_group(3), ["0;2,2,2", "0;2,3,3", "1;2", "1;3"])]
    if full:
        cases.append((general_linear_group(2, 3), ["0;2,2,2", "0;2,4,4", "1;2"]))
    checked = mismatches = 0
    for G, sigs in cases:
        table = compute_character_table(G)
        for s in sigs:
            sig = parse_signature(s)
            checked += 1
            if total_hom_count(table, sig) != brute_force_hom_count(G, sig):
                mismatches += 1
    return {"checked": checked, "mismatches": mismatches}


def _dimension_suite(full: bool) -> dict:
    from itertools import combinations_with_replacement

    from .dimension import hom_variety_dim, hom_variety_dim_oracle
    from .signature import FuchsianSignature

    n_max = 24 if full else 12
    checked = mismatches = 0
    for r in range(1, 4):
        for periods in combinations_with_replacement(range(2, 7), r):
            for g in range(2):
                sig = FuchsianSignature(g, periods)
                for n in range(1, n_max + 1):
                    checked += 1
                    with warnings.catch_warnings():
                        warnings.simplefilter("ignore")
                        dim = hom_variety_dim(sig, n).dimension
                    if dim != hom_variety_dim_oracle(sig, n):
                        mismatches += 1
    return {"checked": checked, "mismatches": mismatches}


def _verifier_suite(full: bool, cfg) -> dict:
    from .verifier import CertificateStore, soundness_check

    store = CertificateStore(cfg.cache_dir if cfg is not None else None)
    checked = mismatches = 0
    for a in ((2, 3, 5, 10, 50) if full else (2, 3)):
        rep = soundness_check(store.get(a), 1000 if full else 200)
        checked += 1
        mismatches += bool(rep["violations"])
    return {"checked": checked, "mismatches": mismatches}


def _cache_suite() -> dict:
    """A corrupt certificate file must be ignored and replaced by a recomputed one."""
    import tempfile
    from pathlib import Path

    from .verifier import CertificateStore

    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "cert_a2.json"
        path.write_text("{not json")
        recomputed = CertificateStore(tmp).get(2)
        reloaded = CertificateStore(tmp).get(2)
        same = (recomputed.breakpoints == reloaded.breakpoints and recomputed.bounds == reloaded.bounds)
    return {"checked": 1, "mismatches": 0 if same else 1}


def run_selftest(level: str = "quick", cfg=None) -> dict:
    full = level == "full"
    suites = {}
    for name, fn in (("torsion", lambda: _torsion_suite(full)), ("hurwitz", lambda: _hurwitz_suite(full)),
                     ("dimension", lambda: _dimension_suite(full)), ("verifier", lambda: _verifier_suite(full, cfg)), ("cache", _cache_suite)):
        t = time.perf_counter()
        try:
            res = fn()
        except FGCError as exc:
            res = {"checked": 0, "mismatches": 1, "error": f"{type(exc).__name__}: {exc}"}
        res["seconds"] = round(time.perf_counter() - t, 2)
        suites[name] = res
    return {"level": level, "suites": suites, "pass": all(s["mismatches"] == 0 for s in suites.values())}
