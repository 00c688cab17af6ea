"""Dimension-count evaluator: archimedean bounds, oddness, the Selmer/dual-Selmer
difference formula under the standard local-condition menus, CM parameter,
large-image prime thresholds, and the principal-homomorphism example checks.

Global invariant dimensions are user inputs (default 0); nothing here
pretends to compute cohomology of infinite groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import ffield as ff
from .root_datum import RootDatum, dimension_profile, very_good_prime, _is_prime


class NumerologyError(ValueError):
    pass


@dataclass(frozen=True)
class FieldSignature:
    """Archimedean and p-adic shape of the base number field."""

    degree: int
    real_places: int
    complex_places: int
    cm: bool
    totally_real: bool
    local_degrees_above_p: tuple[int, ...]
    cm_pairs: tuple[tuple[str, str, int], ...] = ()

    def __post_init__(self):
        if self.real_places + 2 * self.complex_places != self.degree:
            raise NumerologyError("r1 + 2 r2 must equal the degree")
        if self.cm and (self.real_places != 0 or self.degree % 2 != 0):
            raise NumerologyError("CM fields are totally imaginary of even degree")
        if self.cm and self.totally_real:
            raise NumerologyError("a field cannot be CM and totally real")
        if sum(self.local_degrees_above_p) != self.degree:
            raise NumerologyError("local degrees above p must sum to the degree")
        for w, wbar, f in self.cm_pairs:
            if w == wbar:
                raise NumerologyError("a place cannot be paired with itself")
            if f <= 0:
                raise NumerologyError("paired local degrees must be positive")
        if self.cm and self.cm_pairs:
            if sum(2 * f for _, _, f in self.cm_pairs) != self.degree:
                raise NumerologyError("split pairs must cover the degree")


def rational_signature() -> FieldSignature:
    return FieldSignature(1, 1, 0, cm=False, totally_real=True, local_degrees_above_p=(1,))


def totally_real_signature(degree: int, local_degrees=None) -> FieldSignature:
    local = tuple(local_degrees) if local_degrees else tuple(1 for _ in range(degree))
    return FieldSignature(degree, degree, 0, cm=False, totally_real=True,
                          local_degrees_above_p=local)


def cm_signature(degree: int, pair_degrees=None) -> FieldSignature:
    """CM field, split above p: one (w, wbar) pair per degree-f slot."""
    if degree % 2:
        raise NumerologyError("CM degree must be even")
    fs = tuple(pair_degrees) if pair_degrees else tuple(1 for _ in range(degree // 2))
    if sum(fs) != degree // 2:
        raise NumerologyError("pair degrees must sum to half the degree")
    pairs = tuple((f"w{i}", f"wbar{i}", f) for i, f in enumerate(fs))
    local = tuple(f for f in fs for _ in range(2))
    return FieldSignature(degree, 0, degree // 2, cm=True, totally_real=False,
                          local_degrees_above_p=local, cm_pairs=pairs)


def imaginary_quadratic_signature() -> FieldSignature:
    return cm_signature(2)


# -- places and scenarios -----------------------------------------------------

ORDINARY = "ordinary"
NEARLY_ORDINARY = "nearly-ordinary"


@dataclass(frozen=True)
class PlaceAboveP:
    mode: str  # ORDINARY or NEARLY_ORDINARY
    local_degree: int
    h0: int = 0


@dataclass(frozen=True)
class FinitePlace:
    dim_l: int
    h0: int

    @classmethod
    def balanced(cls, h0: int) -> "FinitePlace":
        return cls(h0, h0)


@dataclass(frozen=True)
class RealPlace:
    h0: int  # fixed-space dimension of the involution on g0


@dataclass(eq=False)
class Scenario:
    """Everything the difference formula needs, place by place."""

    rd: RootDatum
    signature: FieldSignature
    places_above_p: tuple[PlaceAboveP, ...]
    finite_places: tuple[FinitePlace, ...] = ()
    real_h0: tuple[int, ...] = ()
    h0_global: int = 0
    h0_global_twist: int = 0
    fixed_multiplier: bool = True

    def __post_init__(self):
        if len(self.real_h0) != self.signature.real_places:
            raise NumerologyError("need one involution h0 per real place")
        degs = tuple(pl.local_degree for pl in self.places_above_p)
        if tuple(sorted(degs)) != tuple(sorted(self.signature.local_degrees_above_p)):
            raise NumerologyError("places above p disagree with the signature")
        g0, n, _, _, _, _ = dimension_profile(self.rd)
        for h in self.real_h0:
            if not (n <= h <= g0):
                raise NumerologyError("real-place h0 out of the [dim n, dim g0] range")


def ordinary_scenario(rd, signature, mode=ORDINARY, finite_places=(), h0_at_p=0,
                      odd_real=True) -> Scenario:
    """Scenario with the same mode at every place above p; real places all odd
    (fixed space of dimension dim n) unless odd_real is False."""
    _, n, _, _, _, _ = dimension_profile(rd)
    places = tuple(PlaceAboveP(mode, f, h0_at_p) for f in signature.local_degrees_above_p)
    real = tuple(n for _ in range(signature.real_places)) if odd_real else ()
    if not odd_real and signature.real_places:
        raise NumerologyError("non-odd real places need explicit h0 values")
    return Scenario(rd, signature, places, tuple(finite_places), real)


# -- operations ---------------------------------------------------------------


@dataclass(frozen=True)
class ArchimedeanReport:
    lhs: int
    rhs: int
    holds: bool
    odd_equality: bool


def archimedean_bound(scenario: Scenario) -> ArchimedeanReport:
    """Sum of archimedean fixed spaces against [F:Q] dim n + C dim t0.

    odd_equality records whether the sum meets the bare Taylor-Wiles target
    [F:Q] dim n, which needs a totally real field with every place odd.
    """
    sig = scenario.signature
    g0, n, _, t0, _, _ = dimension_profile(scenario.rd)
    lhs = sum(scenario.real_h0) + sig.complex_places * g0
    rhs = sig.degree * n + sig.complex_places * t0
    odd = sig.totally_real and all(h == n for h in scenario.real_h0) and sig.complex_places == 0
    return ArchimedeanReport(lhs, rhs, lhs >= rhs, odd and lhs == sig.degree * n)


def oddness_audit(rd: RootDatum, involutions, p: int):
    """(h0, is_odd) per involution matrix acting on g0."""
    _, n, _, _, _, _ = dimension_profile(rd)
    out = []
    for mat in involutions:
        mat = ff.normalize(mat, p)
        if not np.array_equal(ff.mat_mul(mat, mat, p), ff.eye(len(mat))):
            raise NumerologyError("input does not square to the identity")
        h0 = ff.nullspace((mat - ff.eye(len(mat))) % p, p).shape[1]
        out.append((h0, h0 == n))
    return out


def tangent_dim_at_p(mode: str, local_degree: int, rd: RootDatum, h0: int) -> int:
    if h0 < 0:
        raise NumerologyError("h0 must be >= 0")
    _, n, b0, _, _, _ = dimension_profile(rd)
    if mode == ORDINARY:
        return h0 + local_degree * n
    if mode == NEARLY_ORDINARY:
        return h0 + local_degree * b0
    raise NumerologyError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class WilesReport:
    difference: int
    terms: tuple[tuple[str, int], ...]


def wiles_difference(scenario: Scenario, report: bool = False):
    """Selmer minus dual-Selmer dimension from the per-place local terms."""
    g0, n, b0, t0, _, _ = dimension_profile(scenario.rd)
    terms: list[tuple[str, int]] = [
        ("h0_global", scenario.h0_global),
        ("h0_global_twist", -scenario.h0_global_twist),
    ]
    for pl in scenario.places_above_p:
        dl = tangent_dim_at_p(pl.mode, pl.local_degree, scenario.rd, pl.h0)
        terms.append((f"v|p[{pl.mode},f={pl.local_degree}]", dl - pl.h0))
    for pl in scenario.finite_places:
        terms.append(("v finite", pl.dim_l - pl.h0))
    for h in scenario.real_h0:
        terms.append(("v real", -h))  # L_v = 0 at archimedean places, p odd
    for _ in range(scenario.signature.complex_places):
        terms.append(("v complex", -g0))
    total = sum(v for _, v in terms)
    if report:
        return WilesReport(total, tuple(terms))
    return total


def cm_parameter(scenario_or_signature, rd: RootDatum | None = None) -> int:
    """r = ([F:Q]/2) dim t0 for a CM signature."""
    if isinstance(scenario_or_signature, Scenario):
        sig, rd = scenario_or_signature.signature, scenario_or_signature.rd
    else:
        sig = scenario_or_signature
        if rd is None:
            raise NumerologyError("root datum required")
    if not sig.cm:
        raise NumerologyError("CM parameter needs a CM signature")
    t0 = dimension_profile(rd)[3]
    return (sig.degree // 2) * t0


def large_image_prime_bound(rd: RootDatum) -> int:
    """Smallest very good prime p with p - 1 above the image thresholds."""
    if rd.rank_ss == 0:
        raise NumerologyError("semisimple part is empty")
    z = rd.center_order
    h = rd.coxeter_number
    parity_bound = (h - 1) * z if z % 2 == 0 else (2 * h - 2) * z
    threshold = max(8 * z, parity_bound)
    p = 3
    while True:
        if _is_prime(p) and p - 1 > threshold and very_good_prime(rd, p):
            return p
        p += 2


def example_local_dims(r: int, p: int) -> tuple[int, int, int]:
    """(h0, h1, h2) of F_p(r) over the local group at p itself.

    h0 = 1 iff r = 0 mod p-1, h2 = 1 iff r = 1 mod p-1, and the local
    Euler characteristic in degree one over Q_p adds 1 to h0 + h2.
    """
    if not _is_prime(p) or p == 2:
        raise NumerologyError("p must be an odd prime")
    h0 = 1 if r % (p - 1) == 0 else 0
    h2 = 1 if r % (p - 1) == 1 else 0
    return h0, h0 + h2 + 1, h2


@dataclass(frozen=True)
class ExampleReport:
    pairing_identity: bool  # <alpha, 2 rho^vee> = 2 for every simple root
    r_admissible: bool
    very_good: bool
    extension_space_dim: int
    multiplicative_check: bool
    sqrt_in_base_field: bool
    notes: tuple[str, ...]

    @property
    def all_pass(self) -> bool:
        return (self.pairing_identity and self.r_admissible and self.very_good
                and self.extension_space_dim == 1 and self.multiplicative_check)


def example_conditions_check(rd: RootDatum, r: int, p: int) -> ExampleReport:
    """Checks for the principal-homomorphism local construction.

    Every simple root must pull back to the r-th cyclotomic power: the
    pairing <alpha, 2 rho^vee> = 2 does the bookkeeping, with a square root
    of the cyclotomic value on the diagonal.  When that square root lives
    only in the quadratic extension the verification runs on exponents mod
    p^2 - 1; the report records which happened.
    """
    if r % (p - 1) in (0, 1):
        raise NumerologyError("r = 0, 1 mod p-1 invalidates the construction")
    vg = very_good_prime(rd, p)
    pairing_ok = _principal_pairing_identity(rd)

    # Multiplicative verification.  c generates F_p^x; the torus element has
    # beta(T) = a^{<beta, 2 rho^vee>} with a^2 = c^r.
    c = _primitive_root(p)
    target = pow(c, r, p)
    legendre = pow(target, (p - 1) // 2, p)
    sqrt_in_base = legendre == 1
    notes = []
    if sqrt_in_base:
        a = _sqrt_mod_p(target, p)
        ok = all(pow(a, _pair_with_2rho(rd, i), p) == target for i in range(rd.rank_ss))
    else:
        # Exponent arithmetic in F_{p^2}: write c = G^(p+1) for a generator G,
        # a = G^((p+1)/2 * r); check exponents mod p^2 - 1.
        modulus = p * p - 1
        exp_a = (p + 1) // 2 * r % modulus
        ok = all(exp_a * _pair_with_2rho(rd, i) % modulus == (p + 1) * r % modulus
                 for i in range(rd.rank_ss))
        notes.append("square root of the cyclotomic power taken in the quadratic extension")
    dims = example_local_dims(r, p)
    if dims[1] != 1:
        notes.append("extension space is not one-dimensional; no canonical non-split class")
    return ExampleReport(
        pairing_identity=pairing_ok,
        r_admissible=True,
        very_good=vg,
        extension_space_dim=dims[1],
        multiplicative_check=ok,
        sqrt_in_base_field=sqrt_in_base,
        notes=tuple(notes),
    )


def _pair_with_2rho(rd: RootDatum, simple_index: int) -> int:
    """<alpha_i, 2 rho^vee> = 2 height(alpha_i) = 2."""
    alpha = tuple(int(k == simple_index) for k in range(rd.rank_ss))
    return 2 * rd.height(alpha)


def _principal_pairing_identity(rd: RootDatum) -> bool:
    return all(_pair_with_2rho(rd, i) == 2 for i in range(rd.rank_ss))


def _primitive_root(p: int) -> int:
    factors = _prime_factors(p - 1)
    for c in range(2, p):
        if all(pow(c, (p - 1) // f, p) != 1 for f in factors):
            return c
    raise NumerologyError("no primitive root found")


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _sqrt_mod_p(a: int, p: int) -> int:
    for x in range(p):
        if x * x % p == a % p:
            return x
    raise NumerologyError("not a quadratic residue")
