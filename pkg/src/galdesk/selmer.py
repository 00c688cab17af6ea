"""Finite-group cohomology via the bar resolution, and synthetic Selmer-system
linear algebra: Selmer/dual-Selmer computation, the dual-annihilation step,
the inflation decomposition check, and the avoidance step.

Synthetic systems make global duality true by construction: the global space
H maps isomorphically onto a chosen subspace I of the direct sum of local
spaces, and the dual global space H' onto the annihilator of I under the
local pairings.  "New primes" are explicit indices carried by the system;
nothing is ever searched for.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from . import ffield as ff


class SelmerError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Finite group actions and bar-resolution cohomology
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class FiniteGroupAction:
    """Group generated by matrices over F_p, enumerated with a Cayley table."""

    p: int
    generators: list[np.ndarray]
    order_bound: int = 100_000
    elements: list = field(init=False)
    index: dict = field(init=False)
    mult: np.ndarray = field(init=False)
    inverse: np.ndarray = field(init=False)

    def __post_init__(self):
        p = self.p
        gens = [ff.normalize(g, p) for g in self.generators]
        n = gens[0].shape[0] if gens else 0
        for g in gens:
            if g.shape != (n, n) or ff.rank(g, p) < n:
                raise SelmerError("generators must be invertible and same-sized")
        self.generators = gens
        ident = ff.eye(n)
        elements = [ident]
        index = {ident.tobytes(): 0}
        frontier = [ident]
        while frontier:
            nxt = []
            for m in frontier:
                for g in gens:
                    prod = ff.mat_mul(m, g, p)
                    key = prod.tobytes()
                    if key not in index:
                        index[key] = len(elements)
                        elements.append(prod)
                        nxt.append(prod)
                        if len(elements) > self.order_bound:
                            raise SelmerError("enumeration overflow beyond the order bound")
            frontier = nxt
        self.elements = elements
        self.index = index
        k = len(elements)
        self.mult = np.zeros((k, k), dtype=np.int64)
        for i, a in enumerate(elements):
            for j, b in enumerate(elements):
                self.mult[i, j] = index[ff.mat_mul(a, b, p).tobytes()]
        self.inverse = np.zeros(k, dtype=np.int64)
        for i in range(k):
            row = np.nonzero(self.mult[i] == 0)[0]
            self.inverse[i] = row[0]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]


def finite_cohomology(g: FiniteGroupAction, degree: int):
    """(dimension, basis) of H^degree(G, M) for degree in {0, 1, 2}.

    Degree 0 and 1 come from fixed vectors and the generator-constrained
    cocycle system; degree 2 materializes 2-cochains as arrays indexed by
    group pairs, guarded at order^2 entries.
    """
    p, n, k = g.p, g.dim, g.order
    if degree == 0:
        rows = np.vstack([(mat - ff.eye(n)) % p for mat in g.generators]) if g.generators \
            else ff.zeros((0, n))
        basis = ff.nullspace(rows, p) if rows.size else ff.eye(n)
        return basis.shape[1], basis

    if degree == 1:
        # Unknowns f(x) for all x; constraints f(1) = 0 and the generator
        # closure f(x s) = f(x) + x.f(s).
        rows = []
        ident_row = ff.zeros((n, k * n))
        ident_row[:, 0:n] = ff.eye(n)
        rows.append(ident_row)
        for mat in g.generators:
            s = g.index[mat.tobytes()]
            for x in range(k):
                xs = g.mult[x, s]
                block = ff.zeros((n, k * n))
                block[:, xs * n : (xs + 1) * n] += ff.eye(n)
                block[:, x * n : (x + 1) * n] -= ff.eye(n)
                block[:, s * n : (s + 1) * n] -= g.elements[x]
                rows.append(block % p)
        z1 = ff.nullspace(np.vstack(rows) % p, p)
        # Coboundaries f(x) = (x - 1) v.
        cob = np.vstack([(g.elements[x] - ff.eye(n)) % p for x in range(k)])
        b1_rank = ff.rank(cob, p)
        dim = z1.shape[1] - b1_rank
        quotient = ff.QuotientSpace(z1, _column_space_of(cob, p), p)
        return dim, quotient.reps

    if degree == 2:
        if k * k > 100_000:
            raise SelmerError("order^2 exceeds the 2-cochain memory guard")
        return _h2_bar(g)

    raise SelmerError("degree must be 0, 1, or 2")


def _column_space_of(stacked_rows, p):
    return ff.column_space(stacked_rows, p)


def _h2_bar(g: FiniteGroupAction):
    """H^2 from the full bar differentials d1: C^1 -> C^2 and d2: C^2 -> C^3."""
    p, n, k = g.p, g.dim, g.order
    # d2 f (x, y, z) = x.f(y,z) - f(xy,z) + f(x,yz) - f(x,y); unknowns f(x,y).
    unknowns = k * k * n

    def slot(x, y):
        return (x * k + y) * n

    # Batched row elimination: echelon basis accumulated over constraint chunks.
    echelon: list[np.ndarray] = []
    pivots: dict[int, int] = {}

    def reduce_row(row):
        row = row % p
        while True:
            nz = np.nonzero(row)[0]
            if nz.size == 0:
                return None
            lead = nz[0]
            if lead in pivots:
                row = (row - row[lead] * echelon[pivots[lead]]) % p
            else:
                row = row * pow(int(row[lead]), p - 2, p) % p
                pivots[lead] = len(echelon)
                echelon.append(row)
                return lead

    for x in range(k):
        for y in range(k):
            xy = g.mult[x, y]
            for z in range(k):
                yz = g.mult[y, z]
                xyz = g.mult[xy, z]
                for c in range(n):
                    row = np.zeros(unknowns, dtype=np.int64)
                    row[slot(y, z) : slot(y, z) + n] += g.elements[x][c]
                    row[slot(xy, z) + c] -= 1
                    row[slot(x, yz) + c] += 1
                    row[slot(x, y) + c] -= 1
                    reduce_row(row)
    rank_d2 = len(echelon)
    z2 = unknowns - rank_d2
    # b2 = rank of d1: C^1 -> C^2, f |-> x.f(y) - f(xy) + f(x).
    rows = []
    for x in range(k):
        for y in range(k):
            xy = g.mult[x, y]
            block = ff.zeros((n, k * n))
            block[:, y * n : (y + 1) * n] += g.elements[x]
            block[:, xy * n : (xy + 1) * n] -= ff.eye(n)
            block[:, x * n : (x + 1) * n] += ff.eye(n)
            rows.append(block % p)
    b2 = ff.rank(np.vstack(rows) % p, p)
    return z2 - b2, None


# ---------------------------------------------------------------------------
# Selmer systems
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class SelmerSystem:
    """Global spaces with local restriction maps and perfect local pairings.

    res[v] is (dim V_v x dim H), res_dual[v] is (dim V'_v x dim H'), and
    pairing[v] is the matrix of the perfect pairing V_v x V'_v -> k.
    """

    p: int
    places: tuple[str, ...]
    local_dims: dict
    res: dict
    res_dual: dict
    pairing: dict
    exact: bool = True

    def __post_init__(self):
        for v in self.places:
            nv = self.local_dims[v]
            if self.pairing[v].shape != (nv, nv):
                raise SelmerError(f"pairing at {v} has the wrong shape")
            if ff.rank(self.pairing[v], self.p) < nv:
                raise SelmerError(f"pairing at {v} is degenerate")
        if not self.reciprocity_holds():
            raise SelmerError("reciprocity fails: sum of local pairings is nonzero")
        if self.exact and not self.exactness_holds():
            raise SelmerError("system flagged exact but images are not annihilators")

    @property
    def dim_h(self) -> int:
        return next(iter(self.res.values())).shape[1]

    @property
    def dim_h_dual(self) -> int:
        return next(iter(self.res_dual.values())).shape[1]

    def stacked_res(self, places=None):
        places = places if places is not None else self.places
        return np.vstack([self.res[v] for v in places]) % self.p

    def stacked_res_dual(self, places=None):
        places = places if places is not None else self.places
        return np.vstack([self.res_dual[v] for v in places]) % self.p

    def block_pairing(self):
        sizes = [self.local_dims[v] for v in self.places]
        total = sum(sizes)
        big = ff.zeros((total, total))
        pos = 0
        for v, s in zip(self.places, sizes):
            big[pos : pos + s, pos : pos + s] = self.pairing[v]
            pos += s
        return big

    def reciprocity_holds(self) -> bool:
        total = ff.zeros((self.dim_h, self.dim_h_dual))
        for v in self.places:
            total = (total + self.res[v].T @ self.pairing[v] @ self.res_dual[v]) % self.p
        return not total.any()

    def exactness_holds(self) -> bool:
        image = ff.column_space(self.stacked_res(), self.p)
        image_dual = ff.column_space(self.stacked_res_dual(), self.p)
        ann = ff.annihilator(image_dual, self.block_pairing().T, self.p)
        # ann lives on the V-side: {x : <x, y> = 0 for all y in image_dual}.
        return image.shape[1] == ann.shape[1] and ff.span_contains(ann, image, self.p)


@dataclass(eq=False)
class ConditionAssignment:
    """Per-place subspaces L_v with their duality annihilators."""

    system: SelmerSystem
    l_spaces: dict

    def __post_init__(self):
        for v in self.system.places:
            if v not in self.l_spaces:
                raise SelmerError(f"assignment misses place {v}")

    def l_perp(self, v) -> np.ndarray:
        return ff.annihilator(self.l_spaces[v], self.system.pairing[v], self.system.p)

    def replaced(self, v, new_l) -> "ConditionAssignment":
        new = dict(self.l_spaces)
        new[v] = ff.column_space(new_l, self.system.p)
        return ConditionAssignment(self.system, new)

    def dims(self) -> dict:
        return {v: int(self.l_spaces[v].shape[1]) for v in self.system.places}


def selmer(system: SelmerSystem, conditions: ConditionAssignment) -> np.ndarray:
    """Kernel of H -> sum of V_v / L_v, as a column basis in H-coordinates."""
    p = system.p
    rows = []
    for v in system.places:
        q = ff.QuotientSpace(ff.eye(system.local_dims[v]), conditions.l_spaces[v], p)
        if q.dim:
            rows.append(q.coords_matrix(system.res[v]) % p)
    if not rows:
        return ff.eye(system.dim_h)
    return ff.nullspace(np.vstack(rows) % p, p)


def dual_selmer(system: SelmerSystem, conditions: ConditionAssignment) -> np.ndarray:
    p = system.p
    rows = []
    for v in system.places:
        lperp = conditions.l_perp(v)
        q = ff.QuotientSpace(ff.eye(system.local_dims[v]), lperp, p)
        if q.dim:
            rows.append(q.coords_matrix(system.res_dual[v]) % p)
    if not rows:
        return ff.eye(system.dim_h_dual)
    return ff.nullspace(np.vstack(rows) % p, p)


def surjectivity_check(system: SelmerSystem, target_places) -> bool:
    mat = system.stacked_res(tuple(target_places))
    return ff.rank(mat, system.p) == sum(system.local_dims[v] for v in target_places)


# ---------------------------------------------------------------------------
# The annihilation step
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class RamakrishnaData:
    """Unramified and ramified tangent lines at a fresh index."""

    unr: np.ndarray
    ram: np.ndarray


@dataclass(eq=False)
class StepReport:
    selmer_before: int
    selmer_after: int
    dual_before: int
    dual_after: int


def annihilation_step(system: SelmerSystem, conditions: ConditionAssignment,
                      w: str, ram: RamakrishnaData, phi, psi):
    """Enlarge the condition at w from unramified to unramified + ramified.

    Hypotheses (errors, no mutation, when violated): phi is a dual-Selmer
    class whose restriction at w avoids the ramified annihilator, and psi a
    Selmer class whose restriction at w avoids the unramified/ramified
    intersection.  The dual condition at w shrinks to the intersection of the
    two annihilators, which is exactly what cuts the new dual Selmer group
    out of the old one: its dimension drops by one while the Selmer dimension
    is unchanged.
    """
    p = system.p
    if w not in system.places:
        raise SelmerError(f"unknown index {w}")
    if not ff.span_contains(conditions.l_spaces[w], ram.unr, p) or \
            not ff.span_contains(ram.unr, conditions.l_spaces[w], p):
        raise SelmerError("step requires the fresh unramified condition at w")
    phi = ff.normalize(phi, p)
    psi = ff.normalize(psi, p)
    sel_before = selmer(system, conditions)
    dual_before = dual_selmer(system, conditions)
    if not ff.in_span(sel_before, psi, p):
        raise SelmerError("psi is not a Selmer class")
    if not ff.in_span(dual_before, phi, p):
        raise SelmerError("phi is not a dual-Selmer class")
    ram_perp = ff.annihilator(ram.ram, system.pairing[w], p)
    phi_at_w = (system.res_dual[w] @ phi) % p
    if ff.in_span(ram_perp, phi_at_w, p):
        raise SelmerError("phi restricts into the ramified annihilator at w")
    psi_at_w = (system.res[w] @ psi) % p
    meet = ff.intersect_spans(ram.unr, ram.ram, p)
    if ff.in_span(meet, psi_at_w, p):
        raise SelmerError("psi restricts into the unramified/ramified intersection at w")
    new_conditions = conditions.replaced(w, ff.sum_spans(ram.unr, ram.ram, p))
    sel_after = selmer(system, new_conditions)
    dual_after = dual_selmer(system, new_conditions)
    report = StepReport(sel_before.shape[1], sel_after.shape[1],
                        dual_before.shape[1], dual_after.shape[1])
    if report.dual_after >= report.dual_before:
        raise SelmerError("dual Selmer did not drop; system is not exact enough")
    if report.selmer_after != report.selmer_before:
        raise SelmerError("Selmer dimension moved; system is not exact enough")
    return new_conditions, report


# ---------------------------------------------------------------------------
# Inflation decomposition
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class InflationFamily:
    """Nested global spaces inside a common ambient: base <= each enlargement <= full."""

    p: int
    ambient_dim: int
    base: np.ndarray
    enlargements: list[np.ndarray]
    full: np.ndarray

    def __post_init__(self):
        for h in [*self.enlargements, self.full]:
            if not ff.span_contains(h, self.base, self.p):
                raise SelmerError("family is not nested over the base")
        for h in self.enlargements:
            if not ff.span_contains(self.full, h, self.p):
                raise SelmerError("enlargement exceeds the joint space")


def inflation_decomposition_check(family: InflationFamily) -> bool:
    """Do the one-index quotients decompose the joint quotient?

    True iff the inflations induce an isomorphism from the direct sum of
    H_i/H_base onto H_full/H_base; in particular the quotient dimensions add.
    """
    p = family.p
    q_full = ff.QuotientSpace(family.full, family.base, p)
    pieces = []
    for h in family.enlargements:
        qi = ff.QuotientSpace(h, family.base, p)
        if qi.dim:
            pieces.append(q_full.coords_matrix(qi.reps))
    total = sum(ff.QuotientSpace(h, family.base, p).dim for h in family.enlargements)
    if total != q_full.dim:
        return False
    if not pieces:
        return q_full.dim == 0
    joint = np.hstack(pieces)
    return ff.rank(joint, p) == total


# ---------------------------------------------------------------------------
# The avoidance step
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class AvoidanceReport:
    selmer_before: int
    selmer_after: int
    psi_prime: np.ndarray
    psi_tilde: np.ndarray
    beta_psi_tilde: np.ndarray


def avoidance_step(system: SelmerSystem, conditions: ConditionAssignment,
                   beta, u_subspace, y: str, ram: RamakrishnaData):
    """Escape a proper weight subspace U by allowing ramification at y.

    Preconditions: the assignment at y is the fresh unramified one, beta is
    surjective onto the weight space and sees only classes unramified-or-
    conditioned away from y, the old Selmer image under beta lies in U, the
    old dual Selmer vanishes, and the enlargement contributes exactly one
    dimension.  Returns new conditions (the ramified line at y) and a Selmer
    class psi_tilde with beta(psi_tilde) outside U.
    """
    p = system.p
    beta = ff.normalize(beta, p)
    u_basis = ff.column_space(ff.normalize(u_subspace, p), p)
    d_weights = beta.shape[0]
    if u_basis.shape[0] != d_weights or u_basis.shape[1] >= d_weights:
        raise SelmerError("U must be a proper subspace of the weight space")
    if not ff.span_contains(conditions.l_spaces[y], ram.unr, p) or \
            not ff.span_contains(ram.unr, conditions.l_spaces[y], p):
        raise SelmerError("step requires the fresh unramified condition at y")
    if ff.rank(beta, p) < d_weights:
        raise SelmerError("beta is not surjective onto the weight space")
    sel_old = selmer(system, conditions)
    if dual_selmer(system, conditions).shape[1] != 0:
        raise SelmerError("old dual Selmer must vanish before avoidance")
    beta_sel = (beta @ sel_old) % p
    if not ff.span_contains(u_basis, beta_sel, p):
        raise SelmerError("beta(old Selmer) is not inside U: nothing to avoid")
    # ker Phi: conditions away from y, no condition at y.
    relaxed = conditions.replaced(y, ff.eye(system.local_dims[y]))
    ker_phi = selmer(system, relaxed)
    if ker_phi.shape[1] != sel_old.shape[1] + 1:
        raise SelmerError("enlargement dimension count is not one")
    if ff.rank((beta @ ker_phi) % p, p) != ff.rank(beta, p):
        raise SelmerError("beta does not factor through the conditioned classes")
    # Deterministic psi': first kernel basis vector extending the old Selmer.
    ext = ff.extend_basis(sel_old, ker_phi, p)
    psi_prime = ext[:, 0]
    if ff.in_span(u_basis, (beta @ psi_prime) % p, p):
        raise SelmerError("enlargement does not escape U")
    new_conditions = conditions.replaced(y, ram.ram)
    sel_new = selmer(system, new_conditions)
    if sel_new.shape[1] != sel_old.shape[1]:
        raise SelmerError("new Selmer dimension moved; enlargement is inconsistent")
    # psi_tilde: a new-Selmer vector with nonzero psi'-coordinate.
    basis = np.hstack([sel_old, psi_prime.reshape(-1, 1)])
    psi_tilde = None
    for j in range(sel_new.shape[1]):
        coords = ff.solve(basis, sel_new[:, j], p)
        if coords is None:
            raise SelmerError("new Selmer leaves the span of the old Selmer and psi'")
        if coords[-1] % p:
            psi_tilde = sel_new[:, j]
            break
    if psi_tilde is None:
        raise SelmerError("no new Selmer class has a psi'-component")
    beta_val = (beta @ psi_tilde) % p
    if ff.in_span(u_basis, beta_val, p):
        raise SelmerError("avoidance failed: beta(psi_tilde) landed in U")
    return new_conditions, AvoidanceReport(
        sel_old.shape[1], sel_new.shape[1], psi_prime, psi_tilde, beta_val
    )


# ---------------------------------------------------------------------------
# Builders: canonical scenarios dressed by seeded changes of basis
# ---------------------------------------------------------------------------


def build_exact_system(rng: random.Random, p: int, local_dims: dict,
                       global_dim: int) -> SelmerSystem:
    """Random exact system: H maps onto a random subspace I of the local sum,
    H' onto the annihilator of I; identity pairings."""
    places = tuple(sorted(local_dims))
    total = sum(local_dims.values())
    if not 0 <= global_dim <= total:
        raise SelmerError("global dimension out of range")
    image = ff.random_subspace(rng, total, global_dim, p)
    pairings = {v: ff.eye(local_dims[v]) for v in places}
    image_dual = ff.annihilator(image, ff.eye(total), p)
    res, res_dual = {}, {}
    pos = 0
    for v in places:
        s = local_dims[v]
        res[v] = image[pos : pos + s, :]
        res_dual[v] = image_dual[pos : pos + s, :]
        pos += s
    return SelmerSystem(p, places, dict(local_dims), res, res_dual, pairings)


def random_conditions(rng: random.Random, system: SelmerSystem) -> ConditionAssignment:
    l = {v: ff.random_subspace(rng, system.local_dims[v],
                               rng.randrange(0, system.local_dims[v] + 1), system.p)
         for v in system.places}
    return ConditionAssignment(system, l)


def _dress(rng: random.Random, system: SelmerSystem, marked: dict):
    """Seeded change of basis on local blocks and global spaces.

    `marked` maps a place to a dict of named column matrices living in that
    local space; they are transported along.  Returns the dressed system, the
    transported marks, and the global change g_h (new coordinates x relate to
    canonical ones by x_old = g_h x_new).
    """
    p = system.p
    res, res_dual, pairings = {}, {}, {}
    new_marked = {v: {} for v in marked}
    for v in system.places:
        s = system.local_dims[v]
        g = ff.random_invertible(rng, s, p)
        g_dual = ff.inv(g.T, p)
        res[v] = (g @ system.res[v]) % p
        res_dual[v] = (g_dual @ system.res_dual[v]) % p
        pairings[v] = system.pairing[v]  # identity pairing survives (g, g^-T)
        for name, mat in marked.get(v, {}).items():
            new_marked[v][name] = (g @ mat) % p
    gh = ff.random_invertible(rng, system.dim_h, p)
    gh_dual = ff.random_invertible(rng, system.dim_h_dual, p)
    res = {v: (m @ gh) % p for v, m in res.items()}
    res_dual = {v: (m @ gh_dual) % p for v, m in res_dual.items()}
    dressed = SelmerSystem(p, system.places, dict(system.local_dims),
                           res, res_dual, pairings)
    return dressed, new_marked, gh


@dataclass(eq=False)
class AnnihilationScenario:
    system: SelmerSystem
    conditions: ConditionAssignment
    special: tuple[str, ...]
    ram: dict
    phi: np.ndarray
    psi: np.ndarray


def build_annihilation_scenario(seed: int, p: int = 5, extra_selmer: int = 1,
                                num_special: int = 1) -> AnnihilationScenario:
    """Exact system with fresh indices w1..wk, dual classes obstructed one per
    index, and a Selmer class meeting every unramified line.

    Canonical shape before dressing: the v0 block carries s0 conditioned
    coordinates plus one ghost coordinate per special index; the image of H
    is spanned by plain Selmer vectors, one Selmer vector threading the
    unramified lines, and one ghost per index threading the ramified line.
    """
    rng = random.Random(seed)
    k = num_special
    s0 = 2 + extra_selmer
    n0 = s0 + k
    specials = tuple(f"w{i}" for i in range(k))
    places = ("v0", *specials)
    local_dims = {"v0": n0, **{w: 2 for w in specials}}
    total = n0 + 2 * k

    def unit(i):
        e = ff.zeros(total)
        e[i] = 1
        return e

    cols = [unit(i) for i in range(s0 - 1)]
    psi_vec = unit(s0 - 1)
    for i in range(k):
        psi_vec = psi_vec + unit(n0 + 2 * i)  # unramified coordinate of w_i
    cols.append(psi_vec % p)
    for i in range(k):
        ghost = (unit(s0 + i) + unit(n0 + 2 * i + 1)) % p  # ramified coordinate
        cols.append(ghost)
    image = np.column_stack(cols)
    image_dual = ff.annihilator(image, ff.eye(total), p)
    res, res_dual = {}, {}
    pos = 0
    for v in places:
        s = local_dims[v]
        res[v] = image[pos : pos + s, :]
        res_dual[v] = image_dual[pos : pos + s, :]
        pos += s
    system = SelmerSystem(p, places, local_dims, res, res_dual,
                          {v: ff.eye(local_dims[v]) for v in places})
    l0 = ff.zeros((n0, s0))
    l0[:s0, :] = ff.eye(s0)
    unr = ff.zeros((2, 1)); unr[0, 0] = 1
    ram = ff.zeros((2, 1)); ram[1, 0] = 1
    marked = {"v0": {"L": l0}, **{w: {"unr": unr, "ram": ram} for w in specials}}
    system, marked, _ = _dress(rng, system, marked)
    conditions = ConditionAssignment(system, {
        "v0": ff.column_space(marked["v0"]["L"], p),
        **{w: marked[w]["unr"] for w in specials},
    })
    ram_data = {w: RamakrishnaData(marked[w]["unr"], marked[w]["ram"]) for w in specials}
    sel = selmer(system, conditions)
    dual = dual_selmer(system, conditions)
    phi = _class_avoiding(system, dual, specials[0], ram_data[specials[0]], p, dual_side=True)
    psi = _class_avoiding(system, sel, specials[0], ram_data[specials[0]], p, dual_side=False)
    if phi is None or psi is None:
        raise SelmerError("scenario construction failed to expose phi or psi")
    return AnnihilationScenario(system, conditions, specials, ram_data, phi, psi)


def _class_avoiding(system, basis, w, ram: RamakrishnaData, p, dual_side: bool):
    """First basis class whose restriction at w avoids the step's forbidden
    subspace: the ramified annihilator (dual side) or unr meet ram (Selmer side)."""
    if dual_side:
        forbidden = ff.annihilator(ram.ram, system.pairing[w], p)
        restrict = system.res_dual[w]
    else:
        forbidden = ff.intersect_spans(ram.unr, ram.ram, p)
        restrict = system.res[w]
    for j in range(basis.shape[1]):
        loc = (restrict @ basis[:, j]) % p
        if not ff.in_span(forbidden, loc, p):
            return basis[:, j]
    return None


@dataclass(eq=False)
class AvoidanceScenario:
    system: SelmerSystem
    conditions: ConditionAssignment
    y: str
    ram: RamakrishnaData
    beta: np.ndarray
    u_subspace: np.ndarray


def build_avoidance_scenario(seed: int, p: int = 5, d_weights: int = 2,
                             selmer_dim: int = 2,
                             break_dimension_count: bool = False) -> AvoidanceScenario:
    """Vanishing dual Selmer, beta(Selmer) inside a proper subspace U, and a
    ramified escape direction at the fresh index y.

    The canonical image of H is spanned by Selmer vectors unramified at y,
    one Selmer vector through the unramified line, and one carrier through
    the ramified line (two carriers under the negative control, which breaks
    the one-dimensional enlargement count).
    """
    if selmer_dim < max(2, d_weights - 1):
        raise SelmerError("selmer_dim too small to span U while staying inside it")
    rng = random.Random(seed)
    # The negative control threads carriers through extra ramified-side
    # directions at y, so the enlargement contributes three dimensions.
    carriers = 3 if break_dimension_count else 1
    ny = 2 + (2 if break_dimension_count else 0)
    n0 = selmer_dim + carriers
    places = ("v0", "y")
    local_dims = {"v0": n0, "y": ny}
    total = n0 + ny

    def unit(i):
        e = ff.zeros(total)
        e[i] = 1
        return e

    cols = [unit(i) for i in range(selmer_dim - 1)]
    cols.append((unit(selmer_dim - 1) + unit(n0)) % p)  # through the unramified line
    for j in range(carriers):
        cols.append((unit(selmer_dim + j) + unit(n0 + 1 + j)) % p)  # ramified side
    image = np.column_stack(cols)
    image_dual = ff.annihilator(image, ff.eye(total), p)
    res = {"v0": image[:n0, :], "y": image[n0:, :]}
    res_dual = {"v0": image_dual[:n0, :], "y": image_dual[n0:, :]}
    system = SelmerSystem(p, places, local_dims, res, res_dual,
                          {v: ff.eye(local_dims[v]) for v in places})
    unr = ff.zeros((ny, 1)); unr[0, 0] = 1
    ram = ff.zeros((ny, 1)); ram[1, 0] = 1
    marked = {"y": {"unr": unr, "ram": ram}}
    # Weight map in canonical H-coordinates: Selmer columns land in U (spanned
    # by the all-ones vector and d-2 unit vectors), carriers land outside.
    dim_h = image.shape[1]
    beta = ff.zeros((d_weights, dim_h))
    u_cols = [np.ones(d_weights, dtype=np.int64)]
    for r in range(d_weights - 2):
        e = ff.zeros(d_weights)
        e[r + 1] = 1
        u_cols.append(e)
    u_basis = np.column_stack(u_cols)
    for i in range(selmer_dim):
        beta[:, i] = u_cols[i % len(u_cols)]
    outside = ff.zeros(d_weights)
    outside[d_weights - 1] = 1
    for j in range(carriers):
        beta[:, selmer_dim + j] = outside
    system, marked, gh = _dress(rng, system, marked)
    beta = (beta @ gh) % p
    conditions = ConditionAssignment(system, {
        "v0": ff.eye(n0),  # the v0 bundle carries no constraint
        "y": marked["y"]["unr"],
    })
    ram_data = RamakrishnaData(marked["y"]["unr"], marked["y"]["ram"])
    return AvoidanceScenario(system, conditions, "y", ram_data, beta, u_basis)


def build_inflation_family(rng: random.Random, p: int, base_dim: int,
                           added: list[int], overlapping: bool = False) -> InflationFamily:
    """Nested enlargements adding the given number of fresh dimensions each;
    the overlapping control makes two enlargements share a new vector."""
    k = len(added)
    ambient = base_dim + sum(added) + 2
    g = ff.random_invertible(rng, ambient, p)
    base = g[:, :base_dim]
    enlargements = []
    pos = base_dim
    for i, extra in enumerate(added):
        fresh = g[:, pos : pos + extra]
        if overlapping and i == 1 and k >= 2:
            shared = g[:, base_dim : base_dim + 1]  # first enlargement's vector
            fresh = np.hstack([shared, fresh[:, 1:]]) if extra > 1 else shared
        enlargements.append(ff.column_space(np.hstack([base, fresh]), p))
        pos += extra
    full_cols = [base] + [h for h in enlargements]
    full = ff.column_space(np.hstack(full_cols), p)
    return InflationFamily(p, ambient, ff.column_space(base, p), enlargements, full)
