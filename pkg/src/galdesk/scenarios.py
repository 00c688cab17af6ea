"""Scenario payloads and the builtin catalog.

A scenario is a JSON document {"version": 1, "kind": ..., "seed": ...,
"payload": {...}}; a builtin is a named, seeded check suite.  Reports are
deterministic functions of (scenario, seed): plain dicts of ints, strings,
and decimal-string p-adic values, ready for stable serialization.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

import numpy as np

from . import ffield as ff
from . import local_tame as lt
from . import numerology as num
from . import padic_weights as pw
from . import padics as pa
from . import root_datum as rdm
from . import selmer as sl

SCHEMA_VERSION = 1
KINDS = ("rootdatum", "local", "numerology", "selmer", "weights", "example")


class ScenarioError(ValueError):
    pass


def check(name: str, ok: bool, **details):
    entry = {"name": name, "pass": bool(ok)}
    entry.update(details)
    return entry


def _report(checks: list, **extra):
    out = {"checks": checks, "status": "pass" if all(c["pass"] for c in checks) else "fail"}
    out.update(extra)
    return out


def parse_root_datum(payload) -> rdm.RootDatum:
    if payload == "GL2" or payload == {"gl": 2}:
        return rdm.gl_datum(2)
    if isinstance(payload, dict) and "gl" in payload:
        return rdm.gl_datum(int(payload["gl"]))
    try:
        spec = [(str(f), int(r)) for f, r in payload["type"]]
        central = int(payload.get("central_rank", 0))
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"bad root datum payload: {exc}") from exc
    try:
        return rdm.build_root_datum(spec, central)
    except rdm.RootDatumError as exc:
        raise ScenarioError(str(exc)) from exc


# ---------------------------------------------------------------------------
# Builtin suites
# ---------------------------------------------------------------------------

PROFILE_TABLE = {
    "A1": (3, 1, 2, 1, 2, 2),
    "A2": (8, 3, 5, 2, 3, 3),
    "A3": (15, 6, 9, 3, 4, 4),
    "B2": (10, 4, 6, 2, 4, 2),
    "C3": (21, 9, 12, 3, 6, 2),
    "G2": (14, 6, 8, 2, 6, 1),
}

CERT_TYPES = [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3),
              ("B", 4), ("C", 3), ("C", 4), ("D", 4), ("F", 4), ("G", 2)]


def builtin_rootdatum_profiles(seed, precision):
    checks = []
    t0 = time.monotonic()
    for name, expected in PROFILE_TABLE.items():
        rd = rdm.build_root_datum([(name[0], int(name[1:]))])
        got = rdm.dimension_profile(rd)
        checks.append(check(f"profile {name}", got == expected,
                            expected=list(expected), got=list(got)))
    checks.append(check("runtime under 1s", time.monotonic() - t0 < 1.0))
    return _report(checks)


def builtin_unique_root_certificates(seed, precision):
    checks = []
    t0 = time.monotonic()
    for fam, rk in CERT_TYPES:
        rd = rdm.build_root_datum([(fam, rk)])
        ok = all(rdm.unique_root_certificate(rd, i) for i in range(rd.rank_ss))
        checks.append(check(f"certificate {fam}{rk}", ok))
        if rk >= 2:
            control = all(not rdm.unique_root_certificate(rd, i, use_control=True)
                          for i in range(rd.rank_ss))
            checks.append(check(f"control fails {fam}{rk}", control))
    checks.append(check("runtime under 1s", time.monotonic() - t0 < 1.0))
    return _report(checks)


def builtin_tame_cohomology_random(seed, precision, count=500):
    rng = random.Random(seed)
    euler_ok = duality_ok = 0
    for _ in range(count):
        m = _random_module(rng)
        h0, h1, h2 = lt.cohomology_dims(m)
        if h1 == h0 + h2:
            euler_ok += 1
        if h2 == lt.cohomology_dims(m.dual_twist())[0]:
            duality_ok += 1
    return _report([
        check("euler h1 = h0 + h2", euler_ok == count, count=count, passed=euler_ok),
        check("duality h2(M) = h0(dual twist)", duality_ok == count,
              count=count, passed=duality_ok),
    ])


def _random_module(rng) -> lt.TameGaloisModule:
    p = rng.choice([5, 7, 11, 13])
    n = rng.randrange(1, 9)
    q = rng.randrange(2, 80)
    while q % p == 0:
        q = rng.randrange(2, 80)
    phi = ff.random_invertible(rng, n, p)
    return lt.TameGaloisModule(p, phi, q, twist=rng.randrange(-2, 3))


def builtin_gl2_f5_ramakrishna(seed, precision):
    rd = rdm.gl_datum(2)
    t = rdm.TorusElement(rd, 5, (2,))
    a = lt.AdjointModule(rd, t, 3)
    m = a.module
    checks = []
    dims = lt.cohomology_dims(m)
    checks.append(check("cohomology dims (1,2,1)", dims == (1, 2, 1), got=list(dims)))
    unr = lt.unramified_subspace(m)
    checks.append(check("unramified dim 1", unr.dim == 1, got=unr.dim))
    ok, alpha = lt.is_ramakrishna_type(a)
    checks.append(check("ramakrishna type with unique root", ok and alpha == (1,)))
    h0_twist = lt.cohomology_dims(m.twisted(1))[0]
    checks.append(check("h0 of the (1)-twist is 1", h0_twist == 1, got=h0_twist))
    ram = lt.ramakrishna_subspace(a, alpha)
    checks.append(check("ramified subspace dim equals h0", ram.dim == 1 == dims[0],
                        got=ram.dim))
    # Component vanishing: ramified representatives carry no l_alpha part;
    # annihilator representatives carry no g_{-alpha} part.
    item_ok = True
    n = m.dim
    for j in range(ram.dim):
        rep = ram.space.cocycle_from_coords(ram.basis[:, j])
        item_ok &= lt.l_alpha_component(a, rep[:n], alpha) == 0
        item_ok &= lt.l_alpha_component(a, rep[n:], alpha) == 0
    checks.append(check("ramified representatives: zero l_alpha components", item_ok))
    ann = lt.annihilator_subspace(m, ram)
    dual_ok = True
    for j in range(ann.dim):
        rep = ann.space.cocycle_from_coords(ann.basis[:, j])
        neg = tuple(-c for c in alpha)
        dual_ok &= lt.dual_root_component(a, rep[:n], neg) == 0
        dual_ok &= lt.dual_root_component(a, rep[n:], neg) == 0
    checks.append(check("annihilator representatives: zero g_{-alpha} components", dual_ok))
    g, h1, h1d = lt.pairing_gram(m)
    checks.append(check("pairing perfect", ff.rank(g, 5) == h1.dim))
    ann_unr = lt.annihilator_subspace(m, unr)
    dual_unr = lt.unramified_subspace(m.dual_twist())
    checks.append(check(
        "annihilator of unramified = dual unramified",
        ann_unr.dim == dual_unr.dim and ff.span_contains(ann_unr.basis, dual_unr.basis, 5),
    ))
    return _report(checks)


def builtin_tate_duality_suite(seed, precision, count=60):
    rng = random.Random(seed)
    checks = []
    gram_ok = split_ok = unr_ok = tested = 0
    for i in range(count):
        m = _rich_module(rng) if i % 2 else _random_module(rng)
        g, h1, h1d = lt.pairing_gram(m)
        if h1.dim == h1d.dim and (h1.dim == 0 or ff.rank(g, m.p) == h1.dim):
            gram_ok += 1
        k = rng.randrange(0, h1.dim + 1)
        sub = lt.LocalConditionSubspace(h1, ff.random_subspace(rng, h1.dim, k, m.p), "c")
        if sub.dim + lt.annihilator_subspace(m, sub).dim == h1d.dim:
            split_ok += 1
        if np.array_equal(m.tau, ff.eye(m.dim)):
            tested += 1
            unr = lt.unramified_subspace(m)
            ann = lt.annihilator_subspace(m, unr)
            dual_unr = lt.unramified_subspace(m.dual_twist())
            if ann.dim == dual_unr.dim and ff.span_contains(ann.basis, dual_unr.basis, m.p):
                unr_ok += 1
    checks.append(check("gram matrices invertible", gram_ok == count, passed=gram_ok))
    checks.append(check("dim L + dim ann = h1(twist)", split_ok == count, passed=split_ok))
    checks.append(check("ann(unramified) = dual unramified", unr_ok == tested,
                        tested=tested, passed=unr_ok))
    return _report(checks)


def _rich_module(rng) -> lt.TameGaloisModule:
    p = rng.choice([5, 7, 11, 13])
    n = rng.randrange(2, 9)
    q = rng.randrange(2, 60)
    while q % p in (0, 1):
        q = rng.randrange(2, 60)
    eigs = [1, q % p] + [rng.randrange(1, p) for _ in range(n - 2)]
    g = ff.random_invertible(rng, n, p)
    phi = ff.mat_mul(ff.mat_mul(g, np.diag(eigs), p), ff.inv(g, p), p)
    return lt.TameGaloisModule(p, phi, q)


def builtin_selmer_annihilation(seed, precision, count=100):
    ok = 0
    for i in range(count):
        rng = random.Random(seed * 100003 + i)
        sc = sl.build_annihilation_scenario(
            seed=seed * 7 + i, p=rng.choice([5, 7, 11, 13]),
            extra_selmer=rng.randrange(0, 3), num_special=rng.randrange(1, 4)
        )
        w = sc.special[0]
        _, report = sl.annihilation_step(sc.system, sc.conditions, w, sc.ram[w],
                                         sc.phi, sc.psi)
        if report.dual_after < report.dual_before and \
                report.selmer_after == report.selmer_before:
            ok += 1
    return _report([check("strict dual drop with Selmer preserved", ok == count,
                          count=count, passed=ok)])


def builtin_selmer_inflation(seed, precision):
    rng = random.Random(seed)
    checks = []
    fam = sl.build_inflation_family(rng, 5, base_dim=2, added=[1])
    checks.append(check("k = 1 decomposes", sl.inflation_decomposition_check(fam)))
    fam = sl.build_inflation_family(rng, 5, base_dim=3, added=[1, 1])
    checks.append(check("two indices add", sl.inflation_decomposition_check(fam)))
    fam = sl.build_inflation_family(rng, 7, base_dim=2, added=[2, 1, 1])
    checks.append(check("mixed sizes add", sl.inflation_decomposition_check(fam)))
    bad = sl.build_inflation_family(rng, 5, base_dim=2, added=[1, 1], overlapping=True)
    checks.append(check("overlapping control fails", not sl.inflation_decomposition_check(bad)))
    return _report(checks)


def builtin_selmer_avoidance(seed, precision, count=100):
    ok = 0
    for i in range(count):
        rng = random.Random(seed * 99991 + i)
        d = rng.choice([2, 3, 4, 5, 6])
        sc = sl.build_avoidance_scenario(
            seed=seed * 13 + i, p=rng.choice([5, 7, 11, 13]), d_weights=d,
            selmer_dim=rng.randrange(max(2, d - 1), max(2, d - 1) + 3)
        )
        _, rep = sl.avoidance_step(sc.system, sc.conditions, sc.beta,
                                   sc.u_subspace, sc.y, sc.ram)
        if rep.selmer_after == rep.selmer_before and \
                not ff.in_span(sc.u_subspace, rep.beta_psi_tilde, sc.system.p):
            ok += 1
    return _report([check("escape witness outside U with Selmer preserved",
                          ok == count, count=count, passed=ok)])


def builtin_finite_cohomology(seed, precision):
    checks = []
    trivial = sl.FiniteGroupAction(5, [ff.eye(3)])
    checks.append(check("trivial group: H0 = M, H1 = 0",
                        sl.finite_cohomology(trivial, 0)[0] == 3
                        and sl.finite_cohomology(trivial, 1)[0] == 0))
    minus = sl.FiniteGroupAction(5, [(-1) * ff.eye(1) % 5])
    checks.append(check("order-2 action: H1 = 0", sl.finite_cohomology(minus, 1)[0] == 0))
    g7 = _sl2_adjoint(7)
    checks.append(check("adjoint image of SL2(F7): H1 = 0",
                        sl.finite_cohomology(g7, 1)[0] == 0, order=g7.order))
    g5 = _sl2_adjoint(5)
    checks.append(check("adjoint image of SL2(F5): the exceptional H1 is 1-dim",
                        sl.finite_cohomology(g5, 1)[0] == 1, order=g5.order))
    return _report(checks)


def _sl2_adjoint(p):
    e = np.array([[1, 1], [0, 1]], dtype=np.int64)
    f = np.array([[1, 0], [1, 1]], dtype=np.int64)
    basis = [np.array([[1, 0], [0, -1]]), np.array([[0, 1], [0, 0]]),
             np.array([[0, 0], [1, 0]])]

    def adjoint(m):
        minv = ff.inv(m, p)
        cols = []
        for b in basis:
            conj = ff.mat_mul(ff.mat_mul(m, b % p, p), minv, p)
            cols.append(np.array([conj[0, 0], conj[0, 1], conj[1, 0]], dtype=np.int64) % p)
        return np.column_stack(cols)

    return sl.FiniteGroupAction(p, [adjoint(e), adjoint(f)])


def builtin_numerology_wiles(seed, precision):
    checks = []
    for name in ("A1", "A2", "B2"):
        rd = rdm.build_root_datum([(name[0], int(name[1:]))])
        t0 = rdm.dimension_profile(rd)[3]
        for degree in (2, 4):
            tr = num.wiles_difference(num.ordinary_scenario(rd, num.totally_real_signature(degree)))
            cm_ord = num.wiles_difference(num.ordinary_scenario(rd, num.cm_signature(degree)))
            cm_no = num.wiles_difference(
                num.ordinary_scenario(rd, num.cm_signature(degree), mode=num.NEARLY_ORDINARY))
            checks.append(check(f"{name} deg {degree}: totally real ordinary = 0", tr == 0, got=tr))
            checks.append(check(f"{name} deg {degree}: CM ordinary = -deg/2*t0",
                                cm_ord == -(degree // 2) * t0, got=cm_ord))
            checks.append(check(f"{name} deg {degree}: CM nearly ordinary = +deg/2*t0",
                                cm_no == (degree // 2) * t0, got=cm_no))
    gl2 = rdm.gl_datum(2)
    r = num.cm_parameter(num.imaginary_quadratic_signature(), gl2)
    checks.append(check("imaginary quadratic GL2: one-variable ring", r == 1, got=r))
    return _report(checks)


def builtin_numerology_large_image(seed, precision):
    a2 = rdm.build_root_datum([("A", 2)])
    b2 = rdm.build_root_datum([("B", 2)])
    a1 = rdm.build_root_datum([("A", 1)])
    vals = {name: num.large_image_prime_bound(rd)
            for name, rd in (("A2", a2), ("B2", b2), ("A1", a1))}
    checks = [
        check("A2 bound 29", vals["A2"] == 29, got=vals["A2"]),
        check("B2 bound 19", vals["B2"] == 19, got=vals["B2"]),
        check("A1 bound 19", vals["A1"] == 19, got=vals["A1"]),
    ]
    dims_ok = all(num.example_local_dims(r, p) == (0, 1, 0)
                  for p in (5, 7, 11) for r in range(2, p - 1))
    checks.append(check("local dims (0,1,0) for r != 0,1", dims_ok))
    return _report(checks)


def _sec9_report(rd_name, rd, r, p):
    rep = num.example_conditions_check(rd, r, p)
    dims = num.example_local_dims(r, p)
    checks = [
        check(f"{rd_name}: pairing identity <alpha, 2 rho_vee> = 2", rep.pairing_identity),
        check(f"{rd_name}: very good prime", rep.very_good),
        check(f"{rd_name}: extension space 1-dimensional", rep.extension_space_dim == 1),
        check(f"{rd_name}: multiplicative verification", rep.multiplicative_check,
              sqrt_in_base_field=rep.sqrt_in_base_field),
        check(f"{rd_name}: local dims", dims == (0, 1, 0), got=list(dims)),
    ]
    return _report(checks, notes=list(rep.notes))


def builtin_sec9_a2(seed, precision):
    return _sec9_report("A2", rdm.build_root_datum([("A", 2)]), r=2, p=29)


def builtin_sec9_a1(seed, precision):
    return _sec9_report("A1", rdm.build_root_datum([("A", 1)]), r=3, p=19)


def builtin_padic_log(seed, precision):
    p = 5
    n = max(precision or 8, 8)
    rng = random.Random(seed)
    checks = []
    torsion_ok = all(pa.log_unit(pa.teichmuller(a, p, n)).is_zero_at_prec()
                     for a in range(1, p))
    checks.append(check("log of torsion = 0", torsion_ok))
    additive = 0
    for _ in range(200):
        u = pa.PadicInt(p, 1 + p * rng.randrange(1, p ** (n - 1)), n)
        v = pa.PadicInt(p, 1 + p * rng.randrange(1, p ** (n - 1)), n)
        if pa.log_one_unit(u * v).eq_at_shared_precision(
                pa.log_one_unit(u) + pa.log_one_unit(v)):
            additive += 1
    checks.append(check("log additivity on 200 pairs", additive == 200, passed=additive))
    val = pa.log_one_unit(pa.PadicInt(p, 1 + p, n))
    checks.append(check("log(1+p) has valuation 1", val.valuation() == 1,
                        value=val.serialize()))
    return _report(checks)


def builtin_weierstrass(seed, precision):
    checks = []
    g = pw.TruncatedSeries(5, 1, 8, 6, {(1,): 5, (2,): 10, (3,): 10, (4,): 5, (5,): 1})
    wd = pw.weierstrass_data(g)
    checks.append(check("(1+X)^5 - 1 over Z_5 has degree 5", wd.degree == 5,
                        vertices=[[int(x), str(y)] for x, y in wd.vertices]))
    g2 = pw.TruncatedSeries(5, 1, 8, 6, {(0,): -5, (2,): 1})
    wd2 = pw.weierstrass_data(g2)
    checks.append(check("X^2 - 5: degree 2 with slope 1/2 twice",
                        wd2.degree == 2 and wd2.slopes == ((Fraction(1, 2), 2),)))
    g3 = pw.TruncatedSeries(5, 1, 8, 6, {(0,): 3})
    checks.append(check("unit constant: degree 0", pw.weierstrass_data(g3).degree == 0))
    return _report(checks)


def builtin_weights_parallel_functional(seed, precision):
    rng = random.Random(seed)
    model = pw.UnitsModel(5, (("w0", "wbar0", 1), ("w1", "wbar1", 1)))
    elements = [pw.NormOneElement(model, (("w0", 0, 1), ("wbar0", 0, -1))),
                pw.NormOneElement(model, (("w1", 0, 1), ("wbar1", 0, -1)))]
    vanish = nonzero = 0
    for _ in range(50):
        exps = {}
        torsion = {}
        for w, wbar, f in model.pairs:
            n = rng.randrange(-6, 7)
            exps[(w, 0)] = n
            exps[(wbar, 0)] = n
            torsion[(w, 0)] = rng.randrange(1, 5)
            torsion[(wbar, 0)] = rng.randrange(1, 5)
        chi = pw.algebraic_weight(model, exps, prec=8, torsion=torsion)
        if all(pw.parallel_functional(chi, u).is_zero_at_prec() for u in elements):
            vanish += 1
    for _ in range(50):
        exps = {}
        for w, wbar, f in model.pairs:
            exps[(w, 0)] = rng.randrange(-6, 7)
            exps[(wbar, 0)] = exps[(w, 0)]
        w, wbar, _ = model.pairs[rng.randrange(2)]
        exps[(w, 0)] = exps[(wbar, 0)] + rng.randrange(1, 5)
        chi = pw.algebraic_weight(model, exps, prec=8)
        u = pw.NormOneElement(model, ((w, 0, 1), (wbar, 0, -1)))
        if not pw.parallel_functional(chi, u).is_zero_at_prec():
            nonzero += 1
    ranks_ok = (pw.closure_rank(model, "full") == 4
                and pw.closure_rank(model, "norm-image") == 2)
    return _report([
        check("functional vanishes on 50 parallel weights", vanish == 50, passed=vanish),
        check("functional nonzero on 50 non-parallel weights", nonzero == 50, passed=nonzero),
        check("closure ranks (full 4, norm-image 2)", ranks_ok),
    ])


def builtin_weights_dichotomy(seed, precision, count=100):
    rng = random.Random(seed)
    parallel_ok = certificate_ok = 0
    for trial in range(count):
        d = rng.choice([1, 2])
        nvars = rng.randrange(1, 5)
        cap = rng.randrange(2, 7)
        mw0 = rdm.longest_element(rdm.build_root_datum([("A", d)]))[1] if d > 1 else [0]
        entries = []
        for i in range(d):
            base = _unit_series(rng, 5, nvars, 8, cap)
            zeta = pa.teichmuller(rng.randrange(1, 5), 5, 8)
            entries.append(pw.DichotomyEntry("w0", i, 0, base.scale(zeta), base))
        fam = pw.DichotomyFamily(5, d, 1, tuple(mw0), entries)
        if trial % 2 == 0:
            verdict = pw.passage_dichotomy(fam)
            if isinstance(verdict, pw.ParallelWeights) and all(
                    pw.is_parallel_pair(xw, xwbar, fam.minus_w0, 5)
                    for _, _, xw, xwbar in verdict.pairs):
                parallel_ok += 1
        else:
            e = fam.entries[rng.randrange(len(fam.entries))]
            var = rng.randrange(nvars)
            bump = tuple(int(k == var) for k in range(nvars))
            perturb = pw.TruncatedSeries(5, nvars, 8, cap, {
                tuple(0 for _ in range(nvars)): pa.PadicInt.one(5, 8),
                bump: pa.PadicInt(5, rng.randrange(1, 5), 8),
            })
            e.f_w = e.f_w * perturb
            verdict = pw.passage_dichotomy(fam)
            if isinstance(verdict, pw.SparsityCertificate):
                certificate_ok += 1
    half = count // 2
    return _report([
        check("constant-ratio families give parallel weights",
              parallel_ok == count - half, passed=parallel_ok),
        check("perturbed families give certificates",
              certificate_ok == half, passed=certificate_ok),
    ])


def _unit_series(rng, p, nvars, prec, cap):
    terms = {tuple(0 for _ in range(nvars)): pa.PadicInt(p, rng.randrange(1, p), prec)}
    for i in range(nvars):
        idx = tuple(int(k == i) for k in range(nvars))
        terms[idx] = pa.PadicInt(p, rng.randrange(0, p * p), prec)
    return pw.TruncatedSeries(p, nvars, prec, cap, terms)


BUILTINS = {
    "rootdatum-profiles": ("dimension profiles for A1..G2 against hand tables",
                           builtin_rootdatum_profiles),
    "unique-root-certificates": ("uniqueness certificate, rank <= 4 and G2, with control",
                                 builtin_unique_root_certificates),
    "tame-cohomology-random": ("500 seeded tame modules: Euler and duality identities",
                               builtin_tame_cohomology_random),
    "gl2-f5-ramakrishna": ("the GL2/F5, q = 3 local package with component checks",
                           builtin_gl2_f5_ramakrishna),
    "tate-duality-suite": ("pairing perfectness and annihilator dimensions",
                           builtin_tate_duality_suite),
    "selmer-annihilation-suite": ("100 seeded dual-annihilation steps",
                                  builtin_selmer_annihilation),
    "selmer-inflation-checks": ("inflation decomposition, positive and negative",
                                builtin_selmer_inflation),
    "selmer-avoidance-suite": ("100 seeded avoidance steps", builtin_selmer_avoidance),
    "finite-cohomology-small": ("bar-resolution cohomology spot checks",
                                builtin_finite_cohomology),
    "numerology-wiles-table": ("difference formula menus over A1, A2, B2",
                               builtin_numerology_wiles),
    "numerology-large-image": ("prime bounds and the F_p(r) local dims",
                               builtin_numerology_large_image),
    "sec9-example-a2": ("principal-homomorphism conditions for A2, r = 2, p = 29",
                        builtin_sec9_a2),
    "sec9-example-a1": ("principal-homomorphism conditions for A1, r = 3, p = 19",
                        builtin_sec9_a1),
    "padic-log-suite": ("torsion, additivity, valuation of log", builtin_padic_log),
    "weierstrass-suite": ("Newton polygons and Weierstrass degrees", builtin_weierstrass),
    "weights-parallel-functional-suite": ("vanishing/nonvanishing of the weight functional",
                                          builtin_weights_parallel_functional),
    "weights-dichotomy-corpus": ("100 seeded dichotomy families", builtin_weights_dichotomy),
}


def list_builtins():
    return [{"id": k, "description": v[0]} for k, v in sorted(BUILTINS.items())]


def run_builtin(name: str, seed: int, precision: int | None):
    if name not in BUILTINS:
        raise ScenarioError(f"unknown builtin {name!r}")
    report = BUILTINS[name][1](seed, precision)
    report["scenario"] = name
    report["seed"] = seed
    return report


# ---------------------------------------------------------------------------
# File scenarios
# ---------------------------------------------------------------------------


def run_scenario_payload(kind: str, payload: dict, seed: int, precision: int | None):
    if kind == "rootdatum":
        return _run_rootdatum(payload)
    if kind == "local":
        return _run_local(payload)
    if kind == "numerology":
        return _run_numerology(payload)
    if kind == "selmer":
        return _run_selmer(payload, seed)
    if kind == "weights":
        return _run_weights(payload)
    if kind == "example":
        return _run_example(payload)
    raise ScenarioError(f"unknown scenario kind {kind!r}")


def _run_rootdatum(payload):
    rd = parse_root_datum(payload)
    profile = rdm.dimension_profile(rd)
    word, mw0 = rdm.longest_element(rd)
    checks = [
        check("dimension identities",
              profile[0] == 2 * profile[1] + profile[3] and profile[2] == profile[1] + profile[3],
              profile=list(profile)),
        check("w0 word has length #positive roots", len(word) == rd.num_positive),
        check("certificates for all simple roots",
              all(rdm.unique_root_certificate(rd, i) for i in range(rd.rank_ss))),
    ]
    return _report(checks, minus_w0=list(map(int, mw0)),
                   heights=sorted(rd.height(r) for r in rd.positive_roots))


def _run_local(payload):
    rd = parse_root_datum(payload["root_datum"])
    try:
        t = rdm.TorusElement(rd, int(payload["p"]), tuple(int(x) for x in payload["torus_values"]))
        twist = int(payload.get("twist", 0))
        base = lt.AdjointModule(rd, t, int(payload["q"]), 0)
    except (KeyError, rdm.RootDatumError, lt.TameModuleError) as exc:
        raise ScenarioError(str(exc)) from exc
    m = base.module.twisted(twist)
    dims = lt.cohomology_dims(m)
    checks = [check("euler identity", dims[1] == dims[0] + dims[2], dims=list(dims))]
    details = {"cohomology": list(dims), "twist": twist}
    base_dims = lt.cohomology_dims(base.module) if twist else dims
    try:
        ok, alpha = lt.is_ramakrishna_type(base)
    except lt.TameModuleError as exc:
        ok, alpha = False, None
        details["ramakrishna_note"] = str(exc)
    details["ramakrishna"] = ok
    if ok:
        # The condition subspaces live on the untwisted adjoint module.
        sub = lt.ramakrishna_subspace(base, alpha)
        checks.append(check("ramified subspace dim = h0", sub.dim == base_dims[0],
                            got=sub.dim))
        details["certified_root"] = list(map(int, alpha))
    g, h1, h1d = lt.pairing_gram(m)
    checks.append(check("duality pairing perfect",
                        h1.dim == h1d.dim and (h1.dim == 0 or ff.rank(g, m.p) == h1.dim)))
    return _report(checks, **details)


def _signature_from_payload(payload):
    kind = payload.get("kind", "totally_real")
    if kind == "rational":
        return num.rational_signature()
    if kind == "totally_real":
        return num.totally_real_signature(int(payload["degree"]),
                                          payload.get("local_degrees"))
    if kind == "cm":
        return num.cm_signature(int(payload["degree"]), payload.get("pair_degrees"))
    raise ScenarioError(f"unknown signature kind {kind!r}")


def _run_numerology(payload):
    rd = parse_root_datum(payload["root_datum"])
    try:
        sig = _signature_from_payload(payload["signature"])
        mode = payload.get("mode", num.ORDINARY)
        finite = tuple(num.FinitePlace(int(a), int(b))
                       for a, b in payload.get("finite_places", []))
        scen = num.ordinary_scenario(rd, sig, mode=mode, finite_places=finite,
                                     h0_at_p=int(payload.get("h0_at_p", 0)))
    except (KeyError, num.NumerologyError) as exc:
        raise ScenarioError(str(exc)) from exc
    rep = num.wiles_difference(scen, report=True)
    checks = [check("terms sum to the difference",
                    sum(v for _, v in rep.terms) == rep.difference)]
    out = {"difference": rep.difference,
           "terms": [[name, int(v)] for name, v in rep.terms]}
    if sig.cm:
        out["cm_parameter"] = num.cm_parameter(sig, rd)
        if mode == num.NEARLY_ORDINARY and not finite:
            checks.append(check("difference equals the CM parameter",
                                rep.difference == out["cm_parameter"]))
    arch = num.archimedean_bound(scen)
    out["archimedean"] = {"lhs": arch.lhs, "rhs": arch.rhs, "odd_equality": arch.odd_equality}
    checks.append(check("archimedean bound holds", arch.holds))
    return _report(checks, **out)


def _run_selmer(payload, seed):
    p = int(payload["p"])
    if "res" in payload:
        places = tuple(sorted(payload["local_dims"]))
        local_dims = {v: int(payload["local_dims"][v]) for v in places}
        def mat(rows):
            arr = np.array(rows, dtype=np.int64) % p
            return arr
        try:
            system = sl.SelmerSystem(
                p, places, local_dims,
                {v: mat(payload["res"][v]) for v in places},
                {v: mat(payload["res_dual"][v]) for v in places},
                {v: mat(payload["pairing"][v]) for v in places},
            )
        except (KeyError, sl.SelmerError) as exc:
            raise ScenarioError(str(exc)) from exc
    else:
        rng = random.Random(seed)
        try:
            system = sl.build_exact_system(
                rng, p, {k: int(v) for k, v in payload["local_dims"].items()},
                int(payload["global_dim"]))
        except (KeyError, sl.SelmerError) as exc:
            raise ScenarioError(str(exc)) from exc
    try:
        given = payload.get("conditions", {})
        l_spaces = {}
        for v in system.places:
            if v in given:
                l_spaces[v] = ff.normalize(np.array(given[v], dtype=np.int64), p)
            else:
                l_spaces[v] = ff.eye(system.local_dims[v])
        conds = sl.ConditionAssignment(system, l_spaces)
    except (ValueError, sl.SelmerError) as exc:
        raise ScenarioError(f"bad condition table: {exc}") from exc
    s = sl.selmer(system, conds)
    d = sl.dual_selmer(system, conds)
    checks = [check("reciprocity", system.reciprocity_holds()),
              check("exactness", system.exactness_holds())]
    return _report(checks, selmer_dim=int(s.shape[1]), dual_selmer_dim=int(d.shape[1]),
                   condition_dims=conds.dims())


def _run_weights(payload):
    try:
        p = int(payload["p"])
        if not lt._is_odd_prime(p):
            raise ScenarioError("p must be an odd prime")
        entries = [
            pw.DichotomyEntry(
                e["place"], int(e["root_index"]), int(e["gen_index"]),
                pw.series_from_payload(e["f_w"]), pw.series_from_payload(e["f_wbar"]))
            for e in payload["entries"]
        ]
        fam = pw.DichotomyFamily(p, int(payload["d"]), int(payload["f"]),
                                 tuple(int(i) for i in payload["minus_w0"]), entries)
    except (KeyError, pw.SeriesError, pw.WeightsError) as exc:
        raise ScenarioError(str(exc)) from exc
    verdict = pw.passage_dichotomy(fam)
    if isinstance(verdict, pw.ParallelWeights):
        pairs = [{"place": pl, "var": int(var),
                  "x_w": [int(x) for x in xw], "x_wbar": [int(x) for x in xwbar]}
                 for pl, var, xw, xwbar in verdict.pairs]
        ok = all(pw.is_parallel_pair(pr["x_w"], pr["x_wbar"], fam.minus_w0, p)
                 for pr in pairs)
        return _report([check("all pairs parallel", ok)],
                       verdict="parallel-weights", pairs=pairs)
    cert = {"place": verdict.place, "root_index": verdict.root_index,
            "gen_index": verdict.gen_index,
            "per_zeta": {str(z): [kind, -1 if var is None else int(var), int(deg)]
                         for z, (kind, var, deg) in sorted(verdict.per_zeta.items())}}
    return _report([check("certificate covers the root-of-unity budget",
                          len(verdict.per_zeta) == p - 1)],
                   verdict="sparsity-certificate", certificate=cert)


def _run_example(payload):
    rd = parse_root_datum(payload["root_datum"])
    try:
        rep = num.example_conditions_check(rd, int(payload["r"]), int(payload["p"]))
    except (KeyError, num.NumerologyError) as exc:
        raise ScenarioError(str(exc)) from exc
    dims = num.example_local_dims(int(payload["r"]), int(payload["p"]))
    checks = [
        check("pairing identity", rep.pairing_identity),
        check("very good prime", rep.very_good),
        check("one-dimensional extension space", rep.extension_space_dim == 1),
        check("multiplicative verification", rep.multiplicative_check),
    ]
    return _report(checks, local_dims=list(dims),
                   sqrt_in_base_field=rep.sqrt_in_base_field, notes=list(rep.notes))
