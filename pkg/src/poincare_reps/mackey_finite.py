"""Induced representations of finite semidirect products A x| H with A abelian.

Every group is a multiplication table.  Characters of A are stored as integer
exponent vectors: chi(a) = exp(2 pi i e[a] / N) with N the exponent of A.
A :class:`SemidirectProduct` encodes (a, h) as the index h * |A| + a, and
multiplies by (a1, h1)(a2, h2) = (a1 + h1.a2, h1 h2).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .cyclotomic import Cyclotomic, lcm

FLOAT_TOL = 1e-12
EXACT_MAX_ORDER = 24
ASSOC_EXHAUSTIVE_MAX = 64


class GroupError(ValueError):
    pass


@dataclass
class FiniteGroup:
    table: np.ndarray
    name: str = ""

    def __post_init__(self):
        t = np.asarray(self.table)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise GroupError("multiplication table must be a non-empty square array")
        if not np.issubdtype(t.dtype, np.integer):
            if not np.all(np.mod(t, 1) == 0):
                raise GroupError("multiplication table entries must be integers")
            t = t.astype(int)
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            raise GroupError(f"table entries must lie in 0..{n - 1}")
        self.table = t
        rows = [e for e in range(n) if np.array_equal(t[e], np.arange(n)) and np.array_equal(t[:, e], np.arange(n))]
        if not rows:
            raise GroupError("no identity element")
        self.identity = rows[0]
        for r in range(n):
            if len(set(t[r])) != n or len(set(t[:, r])) != n:
                raise GroupError("table is not a Latin square")
        self.inverse = np.array([int(np.nonzero(t[g] == self.identity)[0][0]) for g in range(n)])
        self._check_associative()

    def _check_associative(self, rng_seed: int = 0, samples: int = 20000):
        t, n = self.table, self.order
        if n <= ASSOC_EXHAUSTIVE_MAX:
            left = t[t, :]  # left[a, b, c] = (ab)c
            right = t[:, t]  # right[a, b, c] = a(bc)
            ok = np.array_equal(left, right)
        else:
            rng = np.random.default_rng(rng_seed)
            a, b, c = rng.integers(n, size=(3, samples))
            ok = np.array_equal(t[t[a, b], c], t[a, t[b, c]])
        if not ok:
            raise GroupError("multiplication is not associative")

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, a, b):
        return self.table[a, b]

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.table[x, g]
            k += 1
        return k

    def exponent(self) -> int:
        return lcm(*(self.element_order(g) for g in range(self.order)))

    def subgroup(self, elements) -> tuple["FiniteGroup", list]:
        """The subgroup on ``elements`` reindexed 0..k-1, and the embedding list."""
        elements = list(elements)
        pos = {g: i for i, g in enumerate(elements)}
        try:
            t = [[pos[int(self.table[a, b])] for b in elements] for a in elements]
        except KeyError:
            raise GroupError("elements are not closed under multiplication") from None
        return FiniteGroup(np.array(t), name=f"sub({self.name})"), elements


def cyclic(n: int) -> FiniteGroup:
    i = np.arange(n)
    return FiniteGroup((i[:, None] + i[None, :]) % n, name=f"Z{n}")


def direct_product(G: FiniteGroup, K: FiniteGroup) -> FiniteGroup:
    """Element (g, k) encoded as g * |K| + k."""
    n, m = G.order, K.order
    g, k = np.divmod(np.arange(n * m), m)
    t = G.table[g[:, None], g[None, :]] * m + K.table[k[:, None], k[None, :]]
    return FiniteGroup(t, name=f"{G.name}x{K.name}")


@dataclass
class SemidirectProduct:
    A: FiniteGroup
    H: FiniteGroup
    action: np.ndarray  # action[h, a] = h . a
    name: str = ""
    group: FiniteGroup = field(init=False, repr=False)

    def __post_init__(self):
        if not self.A.is_abelian():
            raise GroupError("normal factor A must be abelian")
        act = np.asarray(self.action)
        nA, nH = self.A.order, self.H.order
        if act.shape != (nH, nA):
            raise GroupError(f"action table must have shape ({nH}, {nA}), got {act.shape}")
        if act.min() < 0 or act.max() >= nA:
            raise GroupError("action table entries out of range")
        self.action = act.astype(int)
        for h in range(nH):
            if len(set(self.action[h])) != nA:
                raise GroupError(f"action of h={h} is not a bijection")
            ta = self.A.table
            if not np.array_equal(self.action[h][ta], ta[self.action[h][:, None], self.action[h][None, :]]):
                raise GroupError(f"action of h={h} is not an automorphism")
        if not np.array_equal(self.action[self.H.identity], np.arange(nA)):
            raise GroupError("identity of H must act trivially")
        th = self.H.table
        for h1, h2 in itertools.product(range(nH), repeat=2):
            if not np.array_equal(self.action[th[h1, h2]], self.action[h1][self.action[h2]]):
                raise GroupError("action is not a homomorphism H -> Aut(A)")
        a, h = self.split(np.arange(nA * nH))
        a1, a2 = a[:, None], a[None, :]
        h1, h2 = h[:, None], h[None, :]
        prod_a = self.A.table[a1, self.action[h1, a2]]
        prod_h = self.H.table[h1, h2]
        self.group = FiniteGroup(self.encode(prod_a, prod_h), name=self.name)

    def encode(self, a, h):
        return np.asarray(h) * self.A.order + np.asarray(a)

    def split(self, g):
        h, a = np.divmod(np.asarray(g), self.A.order)
        return a, h

    @property
    def order(self) -> int:
        return self.group.order

    @classmethod
    def from_tables(cls, A_table, H_table, action, name: str = "custom") -> "SemidirectProduct":
        return cls(FiniteGroup(np.asarray(A_table)), FiniteGroup(np.asarray(H_table)), np.asarray(action), name)


def automorphism_power_action(A: FiniteGroup, H: FiniteGroup, generator_image) -> np.ndarray:
    """Action of a cyclic H = <h1> (h1 = element 1 of Z_n tables) by powers of one automorphism."""
    img = np.asarray(generator_image)
    out = np.zeros((H.order, A.order), dtype=int)
    cur = np.arange(A.order)
    k = H.identity
    gen = 1
    for _ in range(H.order):
        out[k] = cur
        cur = img[cur]
        k = H.table[k, gen]
    return out


def _builtin(name: str) -> SemidirectProduct:
    if name == "S3":
        A, H = cyclic(3), cyclic(2)
        return SemidirectProduct(A, H, automorphism_power_action(A, H, (-np.arange(3)) % 3), "S3")
    if name == "D4":
        A, H = cyclic(4), cyclic(2)
        return SemidirectProduct(A, H, automorphism_power_action(A, H, (-np.arange(4)) % 4), "D4")
    if name == "A4":
        A, H = direct_product(cyclic(2), cyclic(2)), cyclic(3)
        return SemidirectProduct(A, H, automorphism_power_action(A, H, [0, 2, 3, 1]), "A4")
    if name == "Z5:Z4":
        A, H = cyclic(5), cyclic(4)
        return SemidirectProduct(A, H, automorphism_power_action(A, H, (2 * np.arange(5)) % 5), "Z5:Z4")
    if name == "Heis3":
        A, H = direct_product(cyclic(3), cyclic(3)), cyclic(3)
        x, y = np.divmod(np.arange(9), 3)
        return SemidirectProduct(A, H, automorphism_power_action(A, H, ((x + y) % 3) * 3 + y), "Heis3")
    if name == "Z2xZ2":
        A, H = direct_product(cyclic(2), cyclic(2)), cyclic(1)
        return SemidirectProduct(A, H, np.arange(4)[None, :], "Z2xZ2")
    raise KeyError(name)


BUILTIN_GROUPS = ("S3", "D4", "A4", "Z5:Z4", "Heis3", "Z2xZ2")


def builtin_group(name: str) -> SemidirectProduct:
    if name not in BUILTIN_GROUPS:
        raise GroupError(f"unknown builtin group {name!r}; choose from {', '.join(BUILTIN_GROUPS)}")
    return _builtin(name)


def group_from_json(text: str) -> SemidirectProduct:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GroupError(f"group spec is not valid JSON: {exc}") from None
    if not isinstance(obj, dict) or not {"A", "H", "action"} <= set(obj):
        raise GroupError('group spec must be an object with keys "A", "H", "action"')
    try:
        tables = [np.array(obj[k]) for k in ("A", "H", "action")]
    except (TypeError, ValueError) as exc:
        raise GroupError(f"malformed table: {exc}") from None
    for k, t in zip(("A", "H", "action"), tables):
        if t.dtype == object or t.ndim != 2 or t.size == 0:
            raise GroupError(f"table {k!r} must be a non-empty rectangular array of integers")
    return SemidirectProduct.from_tables(*tables, name=obj.get("name", "custom"))


# ---- characters --------------------------------------------------------------


@dataclass(frozen=True)
class Character:
    """chi(a) = exp(2 pi i exps[a] / N)."""

    N: int
    exps: tuple

    def values(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.array(self.exps) / self.N)

    def exact(self, a: int, order: int) -> Cyclotomic:
        return Cyclotomic.root(order, self.exps[a] * (order // self.N))


def _generators(A: FiniteGroup):
    gens, span = [], {A.identity}
    for g in range(A.order):
        if g in span:
            continue
        gens.append(g)
        frontier = list(span)
        span = set(span)
        while frontier:
            new = []
            for x in frontier:
                for y in gens:
                    z = int(A.table[x, y])
                    if z not in span:
                        span.add(z)
                        new.append(z)
            frontier = new
    return gens


def character_group(A: FiniteGroup) -> list[Character]:
    """All characters of an abelian group, found by assigning generator images."""
    if not A.is_abelian():
        raise GroupError("character_group needs an abelian group")
    N = A.exponent()
    gens = _generators(A)
    # express every element as a word in the generators
    word = {A.identity: (0,) * len(gens)}
    frontier = [A.identity]
    while frontier:
        new = []
        for x in frontier:
            for j, g in enumerate(gens):
                z = int(A.table[x, g])
                if z not in word:
                    w = list(word[x])
                    w[j] += 1
                    word[z] = tuple(w)
                    new.append(z)
        frontier = new
    words = np.array([word[a] for a in range(A.order)])
    chars = []
    for ks in itertools.product(range(N), repeat=len(gens)):
        e = (words @ np.array(ks, dtype=int)) % N if gens else np.zeros(A.order, dtype=int)
        if np.array_equal((e[:, None] + e[None, :]) % N, e[A.table]):
            chars.append(Character(N, tuple(int(v) for v in e)))
    if len(chars) != A.order:
        raise RuntimeError(f"found {len(chars)} characters for a group of order {A.order}")
    return chars


def dual_action(G: SemidirectProduct, h: int, chi: Character) -> Character:
    """(h.chi)(a) = chi(h^{-1}.a)."""
    hinv = G.H.inverse[h]
    return Character(chi.N, tuple(chi.exps[int(G.action[hinv, a])] for a in range(G.A.order)))


@dataclass
class OrbitData:
    points: list  # characters, base point first
    stabilizer: list  # indices into H
    section: list  # section[i] = first h in table order with h.x0 = points[i]

    @property
    def base(self) -> Character:
        return self.points[0]


def orbits_and_stabilizers(G: SemidirectProduct) -> list[OrbitData]:
    chars = character_group(G.A)
    seen = set()
    out = []
    for x0 in chars:
        if x0 in seen:
            continue
        points, section = [], []
        for h in range(G.H.order):
            y = dual_action(G, h, x0)
            if y not in points:
                points.append(y)
                section.append(h)
        stab = [h for h in range(G.H.order) if dual_action(G, h, x0) == x0]
        seen.update(points)
        out.append(OrbitData(points, stab, section))
    return out


# ---- representations ---------------------------------------------------------


@dataclass
class UnitaryRep:
    matrices: np.ndarray  # (|G|, d, d)

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def character(self) -> np.ndarray:
        return np.trace(self.matrices, axis1=1, axis2=2)

    def multiplicativity_residual(self, group: FiniteGroup) -> float:
        M = self.matrices
        lhs = np.einsum("aij,bjk->abik", M, M)
        return float(np.max(np.abs(lhs - M[group.table])))

    def unitarity_residual(self) -> float:
        M = self.matrices
        I = np.eye(self.dim)
        return float(np.max(np.abs(np.conj(np.swapaxes(M, 1, 2)) @ M - I)))


def regular_rep(G: FiniteGroup) -> UnitaryRep:
    n = G.order
    M = np.zeros((n, n, n))
    for g in range(n):
        M[g, G.table[g], np.arange(n)] = 1.0
    return UnitaryRep(M)


def irreps_brute_force(G: FiniteGroup, seed: int = 0, tol: float = 1e-8) -> list[UnitaryRep]:
    """One representative per irrep class, cut out of the regular representation.

    A random hermitian matrix averaged over the group commutes with the regular
    representation; its eigenspaces are irreducible subrepresentations.
    """
    reg = regular_rep(G).matrices
    n = G.order
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    X = X + X.conj().T
    T = np.einsum("gij,jk,glk->il", reg, X, reg) / n
    w, V = np.linalg.eigh(T)
    groups, start = [], 0
    for i in range(1, n + 1):
        if i == n or w[i] - w[i - 1] > tol * max(1.0, abs(w[i])):
            groups.append(V[:, start:i])
            start = i
    found, chars = [], []
    for B in groups:
        rep = UnitaryRep(np.einsum("ia,gij,jb->gab", B.conj(), reg, B))
        chi = rep.character()
        if abs(np.vdot(chi, chi).real / n - 1) > 1e-8:
            raise RuntimeError("eigenspace is reducible; eigenvalues collided")
        if any(abs(np.vdot(c, chi)) / n > 0.5 for c in chars):
            continue
        found.append(rep)
        chars.append(chi)
    if sum(r.dim**2 for r in found) != n:
        raise RuntimeError("brute-force irreps are incomplete")
    return found


def induce(G: SemidirectProduct, orbit: OrbitData, D: UnitaryRep) -> UnitaryRep:
    """(V_{ah} psi)(x) = <x, a> D(c(x)^{-1} h c(h^{-1}.x)) psi(h^{-1}.x)."""
    stab = {h: i for i, h in enumerate(orbit.stabilizer)}
    if D.matrices.shape[0] != len(stab):
        raise GroupError("D must be indexed by the stabilizer elements")
    sub, _ = G.H.subgroup(orbit.stabilizer)
    if D.multiplicativity_residual(sub) > 1e-10:
        raise GroupError("D is not a representation of the stabilizer")
    k, d = len(orbit.points), D.dim
    index = {x: i for i, x in enumerate(orbit.points)}
    vals = np.array([x.values() for x in orbit.points])  # (k, |A|)
    Hinv, Ht = G.H.inverse, G.H.table
    out = np.zeros((G.order, k * d, k * d), dtype=complex)
    for h in range(G.H.order):
        hinv = Hinv[h]
        blocks = []
        for i, x in enumerate(orbit.points):
            j = index[dual_action(G, hinv, x)]
            elem = Ht[Ht[Hinv[orbit.section[i]], h], orbit.section[j]]
            blocks.append((i, j, D.matrices[stab[int(elem)]]))
        for a in range(G.A.order):
            g = int(G.encode(a, h))
            for i, j, B in blocks:
                out[g, i * d : (i + 1) * d, j * d : (j + 1) * d] = vals[i, a] * B
    return UnitaryRep(out)


def _is_root(z, order):
    k = int(np.round(np.angle(z) * order / (2 * np.pi))) % order
    return k, abs(z - np.exp(2j * np.pi * k / order))


def exact_induced_character(G: SemidirectProduct, orbit: OrbitData, D: UnitaryRep, field_order: int) -> list:
    """Character of the induced rep in Q(zeta_M), one value per element of G.

    chi(a h) = sum over x fixed by h of <x, a> chi_D(c(x)^{-1} h c(x)); chi_D values
    are sums of eigenvalues, each identified exactly as a root of unity.
    """
    sub, _ = G.H.subgroup(orbit.stabilizer)
    stab = {h: i for i, h in enumerate(orbit.stabilizer)}
    chiD = []
    for i in range(sub.order):
        o = sub.element_order(i)
        if field_order % o:
            raise ValueError("field order does not contain the stabilizer element orders")
        total = Cyclotomic.rational(field_order, 0)
        for z in np.linalg.eigvals(D.matrices[i]):
            k, err = _is_root(z, o)
            if err > 1e-8:
                raise RuntimeError("representation eigenvalue is not a root of unity")
            total = total + Cyclotomic.root(field_order, k * (field_order // o))
        chiD.append(total)
    Ht, Hinv = G.H.table, G.H.inverse
    out = [None] * G.order
    for h in range(G.H.order):
        fixed = [i for i, x in enumerate(orbit.points) if dual_action(G, h, x) == x]
        for a in range(G.A.order):
            total = Cyclotomic.rational(field_order, 0)
            for i in fixed:
                c = orbit.section[i]
                elem = int(Ht[Ht[Hinv[c], h], c])
                total = total + orbit.points[i].exact(a, field_order) * chiD[stab[elem]]
            out[int(G.encode(a, h))] = total
    return out


def exact_inner(chi1, chi2, order: int):
    total = Cyclotomic.rational(chi1[0].order, 0)
    for u, v in zip(chi1, chi2):
        total = total + u.conjugate() * v
    return total / order


# ---- systems of imprimitivity -----------------------------------------------


def spectral_projections(G: SemidirectProduct, W: UnitaryRep) -> dict:
    """P({x}) = (1/|A|) sum_a conj(<x, a>) W(a, e) for every character x."""
    U = W.matrices[G.encode(np.arange(G.A.order), G.H.identity)]
    return {x: np.einsum("a,aij->ij", np.conj(x.values()), U) / G.A.order for x in character_group(G.A)}


def imprimitivity_check(G: SemidirectProduct, W: UnitaryRep, tol: float = FLOAT_TOL) -> dict:
    P = spectral_projections(G, W)
    chars = list(P)
    I = np.eye(W.dim)
    completeness = float(np.max(np.abs(sum(P.values()) - I)))
    ortho = 0.0
    for x, y in itertools.product(chars, repeat=2):
        target = P[x] if x == y else 0.0
        ortho = max(ortho, float(np.max(np.abs(P[x] @ P[y] - target))))
    failures, cov = [], 0.0
    for h in range(G.H.order):
        V = W.matrices[G.encode(G.A.identity, h)]
        Vinv = np.conj(V.T)
        for i, x in enumerate(chars):
            r = float(np.max(np.abs(V @ P[x] @ Vinv - P[dual_action(G, h, x)])))
            cov = max(cov, r)
            if r > tol:
                failures.append({"h": h, "character": i, "residual": r})
    ranks = [int(round(np.trace(P[x]).real)) for x in chars]
    return {
        "completeness": completeness,
        "orthogonality": ortho,
        "covariance": cov,
        "covariance_failures": failures,
        "ranks": ranks,
        "rank_sum": sum(ranks),
        "passed": completeness <= tol and ortho <= tol and cov <= tol and sum(ranks) == W.dim,
    }


# ---- the full check ----------------------------------------------------------


def verify_mackey(G: SemidirectProduct, exact: bool = True, tol: float = FLOAT_TOL, seed: int = 0) -> dict:
    """Induce from every (orbit, stabilizer irrep) pair and test the Mackey classification."""
    orbits = orbits_and_stabilizers(G)
    field_order = lcm(G.A.exponent(), G.H.exponent())
    if exact and field_order > EXACT_MAX_ORDER:
        raise ValueError(f"exact mode supports roots of unity of order <= {EXACT_MAX_ORDER}, need {field_order}")
    n = G.order
    classes, chars, exact_chars = [], [], []
    orbit_report = []
    worst_mult = worst_unit = worst_imp = 0.0
    restriction_ok = True
    imp_ok = True
    for oi, orb in enumerate(orbits):
        sub, _ = G.H.subgroup(orb.stabilizer)
        irreps = irreps_brute_force(sub, seed=seed)
        orbit_report.append(
            {
                "size": len(orb.points),
                "base_point": list(orb.base.exps),
                "stabilizer": [int(h) for h in orb.stabilizer],
                "stabilizer_irrep_dims": [r.dim for r in irreps],
                "orbit_stabilizer": len(orb.points) * len(orb.stabilizer) == G.H.order,
            }
        )
        for di, D in enumerate(irreps):
            V = induce(G, orb, D)
            worst_mult = max(worst_mult, V.multiplicativity_residual(G.group))
            worst_unit = max(worst_unit, V.unitarity_residual())
            imp = imprimitivity_check(G, V, tol)
            worst_imp = max(worst_imp, imp["covariance"], imp["completeness"], imp["orthogonality"])
            imp_ok &= imp["passed"]
            P = spectral_projections(G, V)
            for x, proj in P.items():
                expect = D.dim if x in orb.points else 0
                restriction_ok &= abs(np.trace(proj).real - expect) < 1e-9
            chi = V.character()
            entry = {"orbit": oi, "stabilizer_irrep": di, "dim": V.dim}
            if exact:
                ex = exact_induced_character(G, orb, D, field_order)
                if max(abs(complex(u) - v) for u, v in zip(ex, chi)) > 1e-9:
                    raise RuntimeError("exact and floating characters disagree")
                norm = exact_inner(ex, ex, n)
                entry["character_norm"] = str(norm)
                entry["irreducible"] = norm == 1
                exact_chars.append(ex)
            else:
                norm = np.vdot(chi, chi).real / n
                entry["character_norm"] = float(norm)
                entry["irreducible"] = abs(norm - 1) < tol
            chars.append(chi)
            classes.append(entry)
    inequivalent = True
    for i, j in itertools.combinations(range(len(classes)), 2):
        if exact:
            ok = exact_inner(exact_chars[i], exact_chars[j], n) == 0
        else:
            ok = abs(np.vdot(chars[i], chars[j])) / n < tol
        inequivalent &= bool(ok)
    dim_sq = sum(c["dim"] ** 2 for c in classes)
    # brute-force character table of G itself as the oracle
    oracle = irreps_brute_force(G.group, seed=seed)
    oracle_dims = sorted(r.dim for r in oracle)
    matched = all(any(abs(np.vdot(r.character(), chi)) / n > 0.5 for chi in chars) for r in oracle)
    report = {
        "schema": 1,
        "group": G.name,
        "order": n,
        "mode": "exact" if exact else "float",
        "orbits": orbit_report,
        "classes": classes,
        "all_irreducible": all(c["irreducible"] for c in classes),
        "pairwise_inequivalent": inequivalent,
        "sum_dim_squared": dim_sq,
        "complete": dim_sq == n,
        "multiplicativity_residual": worst_mult,
        "unitarity_residual": worst_unit,
        "imprimitivity_residual": worst_imp,
        "imprimitivity_passed": bool(imp_ok),
        "restriction_to_A_matches_orbit": bool(restriction_ok),
        "oracle_irrep_dims": oracle_dims,
        "matches_character_table_oracle": bool(matched) and oracle_dims == sorted(c["dim"] for c in classes),
    }
    report["passed"] = bool(
        report["all_irreducible"]
        and inequivalent
        and report["complete"]
        and worst_mult < tol
        and worst_unit < tol
        and imp_ok
        and restriction_ok
        and report["matches_character_table_oracle"]
        and all(o["orbit_stabilizer"] for o in orbit_report)
    )
    return report
