"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` (or via
scripts/run_acceptance.py, which drives the same builtin suites through the
CLI)."""

import random
import time

import numpy as np
import pytest

from galdesk import cli
from galdesk import ffield as ff
from galdesk import local_tame as lt
from galdesk import numerology as num
from galdesk import padic_weights as pw
from galdesk import padics as pa
from galdesk import root_datum as rdm
from galdesk import scenarios as sc
from galdesk import selmer as sl

from test_local_tame import oracle_dims, random_tame_module
from test_padic import hensel_root_count


def announce(number, label, passed, elapsed=None):
    status = "PASS" if passed else "FAIL"
    timing = f" [{elapsed:.2f}s]" if elapsed is not None else ""
    print(f"\nACCEPTANCE {number} ({label}): {status}{timing}")
    assert passed


def test_criterion_1_root_datum_tables():
    t0 = time.monotonic()
    rep = sc.run_builtin("rootdatum-profiles", 0, None)
    elapsed = time.monotonic() - t0
    announce(1, "dimension profiles", rep["status"] == "pass" and elapsed < 1.0, elapsed)


def test_criterion_2_uniqueness_certificate():
    t0 = time.monotonic()
    rep = sc.run_builtin("unique-root-certificates", 0, None)
    elapsed = time.monotonic() - t0
    announce(2, "uniqueness certificate", rep["status"] == "pass" and elapsed < 1.0, elapsed)


def test_criterion_3_tame_cohomology_oracle():
    t0 = time.monotonic()
    rng = random.Random(20260810)
    ok = True
    for _ in range(500):
        m = random_tame_module(rng)
        h0, h1, h2 = lt.cohomology_dims(m)
        o0, o1, o2 = oracle_dims(m)
        ok &= h1 == h0 + h2
        ok &= (h0, h1, h2) == (o0, o1, o2)
    elapsed = time.monotonic() - t0
    announce(3, "tame cohomology, 500 modules vs oracle", ok and elapsed < 30.0, elapsed)


def test_criterion_4_ramakrishna_package():
    rep = sc.run_builtin("gl2-f5-ramakrishna", 0, None)
    announce(4, "GL2/F5 Ramakrishna package", rep["status"] == "pass")


def test_criterion_5_duality():
    rep = sc.run_builtin("tate-duality-suite", 0, None)
    announce(5, "local duality", rep["status"] == "pass")


def test_criterion_6_selmer_procedures():
    t0 = time.monotonic()
    ok = True
    for name in ("selmer-annihilation-suite", "selmer-inflation-checks",
                 "selmer-avoidance-suite"):
        ok &= sc.run_builtin(name, 0, None)["status"] == "pass"
    elapsed = time.monotonic() - t0
    announce(6, "Selmer procedures", ok and elapsed < 60.0, elapsed)


def test_criterion_7_numerology():
    ok = sc.run_builtin("numerology-wiles-table", 0, None)["status"] == "pass"
    ok &= sc.run_builtin("numerology-large-image", 0, None)["status"] == "pass"
    announce(7, "numerology", ok)


def test_criterion_8_padic_engine():
    t0 = time.monotonic()
    ok = sc.run_builtin("padic-log-suite", 0, None)["status"] == "pass"
    ok &= sc.run_builtin("weierstrass-suite", 0, None)["status"] == "pass"
    # Degree vs exhaustive root search on split separable test polynomials.
    rng = random.Random(17)
    for _ in range(15):
        p = rng.choice([5, 7])
        roots = rng.sample(range(1, p), k=rng.randrange(1, min(6, p)))
        coeffs = [1]
        for r in roots:
            nxt = [0] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i + 1] += c
                nxt[i] -= p * r * c
            coeffs = nxt
        g = pw.TruncatedSeries(p, 1, 16, 8,
                               {(i,): pa.PadicInt(p, c, 16) for i, c in enumerate(coeffs)})
        ok &= pw.weierstrass_data(g).degree == len(roots) == hensel_root_count(coeffs, p)
    ok &= sc.run_builtin("weights-parallel-functional-suite", 0, None)["status"] == "pass"
    ok &= sc.run_builtin("weights-dichotomy-corpus", 0, None)["status"] == "pass"
    elapsed = time.monotonic() - t0
    announce(8, "p-adic engine", ok and elapsed < 60.0, elapsed)


def test_criterion_9_end_to_end():
    t0 = time.monotonic()
    ok = True
    for entry in sc.list_builtins():
        code = cli.main(["run", entry["id"], "--seed", "0", "--out", "/dev/null"])
        ok &= code == 0
    elapsed = time.monotonic() - t0
    announce(9, "end-to-end builtins", ok and elapsed < 300.0, elapsed)
