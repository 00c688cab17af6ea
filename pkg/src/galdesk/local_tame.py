"""Cohomology of the tame local quotient <sigma, tau | sigma tau sigma^-1 = tau^q>
acting on finite-field modules of exponent p.

A 1-cocycle is recorded by its values (a, b) on (sigma, tau).  Writing Phi
and T for the two actions, the relator forces

    (1 - T^q) a + (Phi - S_q) b = 0,      S_q = 1 + T + ... + T^{q-1},

coboundaries are ((Phi-1)m, (T-1)m), and H^2 is the cokernel of that same
relator map.  The local duality pairing is evaluated by pushing the cup
product through the relator chain:

    V(x, y) = <a, Phi' b'> - <S_q b, T'^q a'> - sum_{i=1}^{q-1} <N_i b, T'^i b'>

with primes denoting the dual-twist actions and N_i = 1 + ... + T^{i-1}.
The overall scalar is pinned down by the checks the duality operations must
satisfy (perfect Gram matrices, annihilator of the unramified subspace).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import ffield as ff
from .root_datum import (
    RootDatum,
    TorusElement,
    inv_scalar_int,
    is_regular_semisimple,
    ramakrishna_root_set,
)


class TameModuleError(ValueError):
    pass


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True, eq=False)
class TameGaloisModule:
    """Module over the tame quotient: arithmetic Frobenius Phi, inertia Tau."""

    p: int
    phi: np.ndarray
    q: int
    tau: np.ndarray | None = None
    twist: int = 0

    def __post_init__(self):
        p = self.p
        if not _is_odd_prime(p):
            raise TameModuleError("base field characteristic must be an odd prime")
        phi = ff.normalize(self.phi, p)
        object.__setattr__(self, "phi", phi)
        n = phi.shape[0]
        if phi.shape != (n, n):
            raise TameModuleError("Phi must be square")
        tau = self.tau if self.tau is not None else ff.eye(n)
        tau = ff.normalize(tau, p)
        object.__setattr__(self, "tau", tau)
        if self.q % p == 0:
            raise TameModuleError("q must be prime to p")
        if ff.rank(phi, p) < n:
            raise TameModuleError("Phi must be invertible")
        if not np.array_equal(ff.mat_pow(tau, p, p), ff.eye(n)):
            raise TameModuleError("Tau must have order dividing p")
        lhs = ff.mat_mul(ff.mat_mul(phi, tau, p), ff.inv(phi, p), p)
        rhs = ff.mat_pow(tau, self.q % p, p)
        if not np.array_equal(lhs, rhs):
            raise TameModuleError("Phi Tau Phi^-1 != Tau^q")

    @property
    def dim(self) -> int:
        return self.phi.shape[0]

    @property
    def qbar(self) -> int:
        return self.q % self.p

    @cached_property
    def phi_eff(self) -> np.ndarray:
        """Arithmetic Frobenius including the Tate twist: qbar^e * Phi."""
        return (pow(self.qbar, self.twist % (self.p - 1), self.p) * self.phi) % self.p

    def twisted(self, e: int) -> "TameGaloisModule":
        return TameGaloisModule(self.p, self.phi, self.q, self.tau, self.twist + e)

    def dual_twist(self) -> "TameGaloisModule":
        """M^vee(1): arithmetic action qbar * (Phi_eff^T)^-1, inertia (Tau^T)^-1."""
        p = self.p
        phi_d = (self.qbar * ff.inv(self.phi_eff.T, p)) % p
        tau_d = ff.inv(self.tau.T, p)
        return TameGaloisModule(p, phi_d, self.q, tau_d, 0)

    # -- relator operators -------------------------------------------------

    def _tau_power_sum(self, k: int) -> np.ndarray:
        """N_k = 1 + T + ... + T^{k-1}, using T^p = 1 to fold large k."""
        p = self.p
        whole, rem = divmod(k, p)
        n_p = ff.zeros((self.dim, self.dim))
        t_i = ff.eye(self.dim)
        acc = ff.zeros((self.dim, self.dim))
        for i in range(p):
            if i < rem:
                acc = (acc + t_i) % p
            n_p = (n_p + t_i) % p
            t_i = ff.mat_mul(t_i, self.tau, p)
        return (whole % p * n_p + acc) % p

    @cached_property
    def relator_matrix(self) -> np.ndarray:
        """d1 as an (n x 2n) block matrix [1 - T^q | Phi - S_q] acting on (a; b)."""
        p = self.p
        tq = ff.mat_pow(self.tau, self.q % p, p)
        sq = self._tau_power_sum(self.q)
        return np.hstack([(ff.eye(self.dim) - tq) % p, (self.phi_eff - sq) % p])

    @cached_property
    def coboundary_matrix(self) -> np.ndarray:
        """d0 as a (2n x n) block matrix [Phi - 1; T - 1]."""
        p = self.p
        return np.vstack([(self.phi_eff - ff.eye(self.dim)) % p,
                          (self.tau - ff.eye(self.dim)) % p])


@dataclass(eq=False)
class H1Space:
    """H^1 of a tame module with a canonical representative basis."""

    module: TameGaloisModule
    quotient: ff.QuotientSpace

    @property
    def dim(self) -> int:
        return self.quotient.dim

    @property
    def basis_cocycles(self) -> np.ndarray:
        """Columns are (a; b) stacked representatives."""
        return self.quotient.reps

    def class_coords(self, cocycle) -> np.ndarray:
        return self.quotient.coords(cocycle)

    def cocycle_from_coords(self, coords) -> np.ndarray:
        return (self.basis_cocycles @ ff.normalize(coords, self.module.p)) % self.module.p


def h1_space(m: TameGaloisModule) -> H1Space:
    z1 = ff.nullspace(m.relator_matrix, m.p)
    b1 = ff.column_space(m.coboundary_matrix, m.p)
    return H1Space(m, ff.QuotientSpace(z1, b1, m.p))


def cohomology_dims(m: TameGaloisModule) -> tuple[int, int, int]:
    """(h0, h1, h2): fixed space, relator-kernel classes, relator cokernel."""
    p = m.p
    stacked = np.vstack([(m.phi_eff - ff.eye(m.dim)) % p, (m.tau - ff.eye(m.dim)) % p])
    h0 = ff.nullspace(stacked, p).shape[1]
    h1 = h1_space(m).dim
    h2 = m.dim - ff.rank(m.relator_matrix, p)
    return h0, h1, h2


# -- local condition subspaces ----------------------------------------------


@dataclass(eq=False)
class LocalConditionSubspace:
    """Subspace of H^1(M) in class coordinates, with a provenance label."""

    space: H1Space
    basis: np.ndarray  # (h1 x k) columns, class coordinates
    label: str

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def unramified_subspace(m: TameGaloisModule) -> LocalConditionSubspace:
    """Classes represented with b = 0; only defined for trivial inertia."""
    if not np.array_equal(m.tau, ff.eye(m.dim)):
        raise TameModuleError("unramified subspace requires Tau = identity")
    space = h1_space(m)
    n = m.dim
    cocycles = np.vstack([ff.eye(n), ff.zeros((n, n))])
    coords = space.quotient.coords_matrix(cocycles)
    return LocalConditionSubspace(space, ff.column_space(coords, m.p), "unramified")


def submodule_restriction(m: TameGaloisModule, basis) -> TameGaloisModule:
    """Module structure induced on an invariant subspace (column basis)."""
    p = m.p
    basis = ff.normalize(basis, p)
    phi_r = ff.solve(basis, (m.phi_eff @ basis) % p, p)
    tau_r = ff.solve(basis, (m.tau @ basis) % p, p)
    if phi_r is None or tau_r is None:
        raise TameModuleError("subspace is not invariant")
    return TameGaloisModule(p, phi_r, m.q, tau_r, 0)


def image_subspace(m: TameGaloisModule, sub_basis, label: str) -> LocalConditionSubspace:
    """Image of H^1(W) -> H^1(M) for an invariant subspace W."""
    p = m.p
    sub = submodule_restriction(m, sub_basis)
    w_h1 = h1_space(sub)
    k = sub.dim
    incl = ff.normalize(sub_basis, p)
    big = np.vstack([
        np.hstack([incl, ff.zeros((m.dim, k))]),
        np.hstack([ff.zeros((m.dim, k)), incl]),
    ])
    pushed = (big @ w_h1.basis_cocycles) % p
    space = h1_space(m)
    coords = space.quotient.coords_matrix(pushed)
    return LocalConditionSubspace(space, ff.column_space(coords, p), label)


# -- duality pairing ---------------------------------------------------------


def tate_pairing(m: TameGaloisModule, declared_dual: TameGaloisModule | None = None):
    """Local duality pairing H^1(M) x H^1(M^vee(1)) -> F_p as a callable.

    Arguments to the returned function are stacked cocycles (a; b) on M and
    (a'; b') on M.dual_twist().  A caller-declared dual, when given, must
    match the canonical one.
    """
    p = m.p
    md = m.dual_twist()
    if declared_dual is not None:
        if declared_dual.dim != m.dim:
            raise TameModuleError("dimension mismatch with the declared dual")
        if not (np.array_equal(declared_dual.phi_eff, md.phi_eff)
                and np.array_equal(declared_dual.tau, md.tau)):
            raise TameModuleError("declared dual disagrees with M^vee(1)")
    n = m.dim
    q = m.q
    phi_d = md.phi_eff
    tau_d = md.tau

    if q > 10**5:
        raise TameModuleError("q too large for direct cup-product evaluation")

    def pair(x, y) -> int:
        x = ff.normalize(x, p)
        y = ff.normalize(y, p)
        a, b = x[:n], x[n:]
        ap, bp = y[:n], y[n:]
        total = int(np.dot(a, (phi_d @ bp) % p)) % p
        sq_b = (m._tau_power_sum(q) @ b) % p
        tq_ap = (ff.mat_pow(tau_d, q % p, p) @ ap) % p
        total = (total - int(np.dot(sq_b, tq_ap))) % p
        # sum_{i=1}^{q-1} <N_i b, T'^i b'>, accumulated incrementally.
        ni_b = ff.zeros(n)  # N_0 b = 0
        ti_b = b.copy()  # T^{i-1} b at the top of iteration i
        tdi_bp = (tau_d @ bp) % p  # T'^i b' at the top of iteration i
        for _ in range(1, q):
            ni_b = (ni_b + ti_b) % p  # now N_i b
            total = (total - int(np.dot(ni_b, tdi_bp))) % p
            ti_b = (m.tau @ ti_b) % p
            tdi_bp = (tau_d @ tdi_bp) % p
        return total % p

    return pair


def pairing_gram(m: TameGaloisModule):
    """Gram matrix of the duality pairing on canonical H^1 bases."""
    p = m.p
    md = m.dual_twist()
    h1 = h1_space(m)
    h1d = h1_space(md)
    pair = tate_pairing(m)
    g = ff.zeros((h1.dim, h1d.dim))
    for i in range(h1.dim):
        for j in range(h1d.dim):
            g[i, j] = pair(h1.basis_cocycles[:, i], h1d.basis_cocycles[:, j])
    return g, h1, h1d


def annihilator_subspace(m: TameGaloisModule, sub: LocalConditionSubspace) -> LocalConditionSubspace:
    """Annihilator of a subspace of H^1(M) inside H^1(M^vee(1))."""
    g, h1, h1d = pairing_gram(m)
    basis = ff.annihilator(sub.basis, g, m.p)
    return LocalConditionSubspace(h1d, basis, f"ann({sub.label})")


# -- adjoint modules ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AdjointModule:
    """g0 with arithmetic Frobenius acting through a torus element.

    Basis order: the simple coroots spanning t0, then the roots in datum
    order.  The stored torus element is the image of geometric Frobenius,
    so the arithmetic action on g_beta is beta(t)^{-1} (times the twist).
    """

    rd: RootDatum
    t: TorusElement
    q: int
    twist: int = 0

    def __post_init__(self):
        if self.t.rd is not self.rd:
            raise TameModuleError("torus element belongs to a different datum")

    @property
    def p(self) -> int:
        return self.t.p

    @property
    def dim(self) -> int:
        return self.rd.rank_ss + len(self.rd.all_roots())

    def root_index(self, root) -> int:
        return self.rd.rank_ss + self.rd.all_roots().index(tuple(root))

    @cached_property
    def module(self) -> TameGaloisModule:
        p = self.p
        d = self.rd.rank_ss
        scale = pow(self.q % p, self.twist % (p - 1), p)
        m = ff.zeros((self.dim, self.dim))
        for i in range(d):
            m[i, i] = scale
        for k, root in enumerate(self.rd.all_roots()):
            m[d + k, d + k] = inv_scalar_int(self.t.root_value(root), p) * scale % p
        return TameGaloisModule(p, m, self.q)


def is_ramakrishna_type(a: AdjointModule):
    """(flag, root): exactly one root whose value at geometric Frobenius is qbar^{-1}."""
    if a.q % a.p in (0, 1):
        raise TameModuleError("q must not be 0 or 1 mod p")
    if not is_regular_semisimple(a.t):
        raise TameModuleError("Frobenius image must be regular semisimple")
    _, unique, alpha = ramakrishna_root_set(a.t, a.q)
    return unique, alpha


def ramakrishna_subspace(a: AdjointModule, alpha) -> LocalConditionSubspace:
    """Image of H^1(W) in H^1(g0) for W = t_alpha + g_alpha.

    Defined on the untwisted adjoint module: the corresponding deformation
    condition lives on H^1 of g0 itself.
    """
    if a.twist != 0:
        raise TameModuleError("Ramakrishna subspace is defined on the untwisted module")
    ok, cert = is_ramakrishna_type(a)
    if not ok or tuple(cert) != tuple(alpha):
        raise TameModuleError("alpha is not the certified Ramakrishna root")
    p = a.p
    basis = np.hstack([t_alpha_basis(a.rd, alpha, p, a.dim),
                       _root_line(a, alpha)])
    return image_subspace(a.module, basis, "ramakrishna")


def t_alpha_basis(rd: RootDatum, alpha, p: int, ambient_dim: int) -> np.ndarray:
    """ker(alpha) inside t0, embedded in the adjoint coordinates."""
    d = rd.rank_ss
    row = np.array([[rd.pair_root_coroot(alpha, j) for j in range(d)]], dtype=np.int64)
    small = ff.nullspace(row, p)
    out = ff.zeros((ambient_dim, small.shape[1]))
    out[:d] = small
    return out


def _root_line(a: AdjointModule, root) -> np.ndarray:
    v = ff.zeros((a.dim, 1))
    v[a.root_index(root), 0] = 1
    return v


def l_alpha_component(a: AdjointModule, vector, alpha) -> int:
    """Coefficient along alpha^vee in the t_alpha + l_alpha splitting of t0."""
    d = a.rd.rank_ss
    t_part = ff.normalize(vector[:d], a.p)
    pairing = sum(int(a.rd.pair_root_coroot(alpha, j)) * int(t_part[j]) for j in range(d))
    return pairing * inv_scalar_int(2, a.p) % a.p


def dual_root_component(a: AdjointModule, dual_vector, root) -> int:
    """g_{-root}-component of a dual vector under the invariant-form identification.

    The invariant form pairs g_gamma with g_{-gamma}, so the g_{-root}
    component of an element of the dual module is its coefficient on the
    dual-basis vector indexed by g_root.
    """
    neg = tuple(-c for c in root)
    return int(ff.normalize(dual_vector, a.p)[a.root_index(neg)])


# -- local predicates ---------------------------------------------------------


def reg_checks(rd: RootDatum, p: int, generators, kappa_values) -> tuple[bool, bool]:
    """(REG, REG*) for Borel-valued generator matrices acting on g0.

    Matrices use the adjoint basis (t0, then roots).  REG asks that the
    induced action on g/b has no common fixed vector; REG* twists each
    generator by its mod-p cyclotomic value first.
    """
    if len(generators) != len(kappa_values):
        raise TameModuleError("need one cyclotomic value per generator")
    d = rd.rank_ss
    roots = rd.all_roots()
    n = d + len(roots)
    borel = [i for i in range(d)] + [d + k for k, r in enumerate(roots) if sum(r) > 0]
    neg = [d + k for k, r in enumerate(roots) if sum(r) < 0]
    quotient_actions = []
    for g in generators:
        g = ff.normalize(g, p)
        if g.shape != (n, n):
            raise TameModuleError("generator has the wrong shape")
        if g[np.ix_(neg, borel)].any():
            raise TameModuleError("generator does not preserve the Borel subalgebra")
        quotient_actions.append(g[np.ix_(neg, neg)])
    def common_fixed_trivial(mats):
        rows = np.vstack([(mm - ff.eye(len(neg))) % p for mm in mats])
        return ff.nullspace(rows, p).shape[1] == 0
    reg = common_fixed_trivial(quotient_actions)
    twisted = [(kappa_values[i] % p) * quotient_actions[i] % p
               for i in range(len(generators))]
    reg_star = common_fixed_trivial(twisted)
    return reg, reg_star


def nonsplit_check(rd: RootDatum, p: int, q: int, sigma_scalars, tau_scalars,
                   phi_sigma, phi_tau) -> bool:
    """Non-splitness of the F^1b/F^2b cocycle: every simple-root class is nonzero.

    The cocycle is given by its values on the two tame generators; each
    simple-root line is a one-dimensional tame module with the supplied
    scalar actions.
    """
    d = rd.rank_ss
    arrays = [ff.normalize(x, p) for x in (sigma_scalars, tau_scalars, phi_sigma, phi_tau)]
    if any(a.shape != (d,) for a in arrays):
        raise TameModuleError("need one entry per simple root")
    sig, tau, vs, vt = arrays
    for i in range(d):
        line = TameGaloisModule(p, np.array([[sig[i]]]), q, np.array([[tau[i]]]))
        cocycle = np.array([vs[i], vt[i]], dtype=np.int64)
        if (line.relator_matrix @ cocycle % p).any():
            raise TameModuleError(f"cocycle relation violated on the line of root {i}")
        b1 = line.coboundary_matrix  # (2 x 1)
        if ff.in_span(b1, cocycle, p):
            return False
    return True
