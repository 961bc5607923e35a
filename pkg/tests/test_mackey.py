import json

import numpy as np
import pytest

from poincare_reps import mackey_finite as mf

# irreducible dimensions from the standard character tables
CHARACTER_TABLE_DIMS = {
    "S3": [1, 1, 2],
    "D4": [1, 1, 1, 1, 2],
    "A4": [1, 1, 1, 3],
    "Z5:Z4": [1, 1, 1, 1, 4],
    "Heis3": [1] * 9 + [3, 3],
    "Z2xZ2": [1, 1, 1, 1],
}
ORDERS = {"S3": 6, "D4": 8, "A4": 12, "Z5:Z4": 20, "Heis3": 27, "Z2xZ2": 4}


def test_cyclic_and_products():
    Z4 = mf.cyclic(4)
    assert Z4.order == 4 and Z4.is_abelian() and Z4.exponent() == 4
    V = mf.direct_product(mf.cyclic(2), mf.cyclic(2))
    assert V.order == 4 and V.exponent() == 2


@pytest.mark.parametrize("name", mf.BUILTIN_GROUPS)
def test_builtin_orders(name):
    G = mf.builtin_group(name)
    assert G.order == ORDERS[name]
    assert G.group.is_abelian() == (name == "Z2xZ2")


def test_non_latin_square_rejected():
    with pytest.raises(mf.GroupError):
        mf.FiniteGroup(np.array([[0, 1], [1, 1]]))


def test_non_associative_rejected():
    # a Latin square with identity 0 that is not associative (order 5 loop)
    T = np.array(
        [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    )
    with pytest.raises(mf.GroupError):
        mf.FiniteGroup(T)


def test_action_must_be_automorphisms():
    A, H = mf.cyclic(3), mf.cyclic(2)
    bad = np.array([[0, 1, 2], [1, 0, 2]])
    with pytest.raises(mf.GroupError):
        mf.SemidirectProduct(A, H, bad)


def test_group_from_json_errors():
    for text in ("not json", "[1, 2]", '{"A": [[0]], "H": [[0]]}', '{"A": [[0, 1]], "H": [[0]], "action": [[0]]}'):
        with pytest.raises(mf.GroupError):
            mf.group_from_json(text)


def test_group_from_json_s3():
    spec = {"A": mf.cyclic(3).table.tolist(), "H": mf.cyclic(2).table.tolist(), "action": [[0, 1, 2], [0, 2, 1]]}
    G = mf.group_from_json(json.dumps(spec))
    assert G.order == 6 and not G.group.is_abelian()


def test_character_group_is_dual():
    A = mf.direct_product(mf.cyclic(2), mf.cyclic(4))
    chars = mf.character_group(A)
    assert len(chars) == 8
    M = np.array([c.values() for c in chars])
    assert np.allclose(M @ M.conj().T, 8 * np.eye(8))
    for x in chars:
        v = x.values()
        for a in range(8):
            for b in range(8):
                assert np.isclose(v[A.table[a, b]], v[a] * v[b])


def test_d4_orbits():
    orbs = mf.orbits_and_stabilizers(mf.builtin_group("D4"))
    summary = sorted((len(o.points), len(o.stabilizer)) for o in orbs)
    assert summary == [(1, 2), (1, 2), (2, 1)]


def test_regular_rep_is_unitary_and_multiplicative():
    G = mf.builtin_group("A4").group
    R = mf.regular_rep(G)
    assert R.unitarity_residual() == 0 and R.multiplicativity_residual(G) == 0


@pytest.mark.parametrize("name", ["S3", "D4", "A4"])
def test_brute_force_irreps_match_character_table(name):
    reps = mf.irreps_brute_force(mf.builtin_group(name).group)
    assert sorted(r.dim for r in reps) == CHARACTER_TABLE_DIMS[name]


@pytest.mark.parametrize("name", mf.BUILTIN_GROUPS)
def test_verify_mackey_exact(name):
    rep = mf.verify_mackey(mf.builtin_group(name), exact=True)
    assert rep["schema"] == 1
    assert rep["passed"] and rep["all_irreducible"] and rep["pairwise_inequivalent"]
    assert rep["sum_dim_squared"] == ORDERS[name]
    assert sorted(c["dim"] for c in rep["classes"]) == CHARACTER_TABLE_DIMS[name]
    assert all(c["character_norm"] == "1" for c in rep["classes"])
    assert rep["imprimitivity_residual"] < 1e-12


def test_verify_mackey_float_mode():
    rep = mf.verify_mackey(mf.builtin_group("Z5:Z4"), exact=False)
    assert rep["passed"] and rep["mode"] == "float"


def test_exact_mode_order_limit():
    A, H = mf.cyclic(7), mf.cyclic(6)
    G = mf.SemidirectProduct(A, H, mf.automorphism_power_action(A, H, (3 * np.arange(7)) % 7))
    with pytest.raises(ValueError):
        mf.verify_mackey(G, exact=True)
    assert mf.verify_mackey(G, exact=False)["passed"]


def test_imprimitivity_detects_non_induced_projection():
    G = mf.builtin_group("S3")
    orb = [o for o in mf.orbits_and_stabilizers(G) if len(o.points) == 2][0]
    sub, _ = G.H.subgroup(orb.stabilizer)
    V = mf.induce(G, orb, mf.irreps_brute_force(sub)[0])
    assert mf.imprimitivity_check(G, V)["passed"]
    # conjugating only the H-part by a non-commuting unitary breaks covariance
    W = mf.UnitaryRep(V.matrices.copy())
    for h in range(G.H.order):
        g = G.encode(G.A.identity, h)
        if h != G.H.identity:
            W.matrices[g] = W.matrices[g] @ np.array([[0, 1], [1, 0]])
    assert not mf.imprimitivity_check(G, W)["passed"]
