import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from msg_lab.constructions import (approx_centralize, build_niceblock,
                                   check_split_condition, commutator_witness,
                                   commutator_witness_table, length_pr,
                                   prepare_near_root, project_to_sl)
from msg_lab.gf import GF
from msg_lab.groups import (SL, SP, Permutation, enumerate_gl2,
                            enumerate_sl2, random_invertible)
from msg_lab.linalg import Matrix, commutant_basis

from conftest import FIELDS


def _span_columns(basis_vectors):
    if not basis_vectors:
        return None
    return Matrix.hstack(list(basis_vectors))


def _in_column_span(span, v):
    if span is None:
        return v.rank() == 0
    joined = Matrix.hstack([span, v])
    return joined.rank() == span.rank()


def test_prepare_postconditions_random(rng):
    """x invertible, preserves L and S, (x|_L)^k = alpha, x|_S = id, and
    both rank bounds, on random instances."""
    for field in FIELDS:
        for _ in range(25):
            n = rng.randint(1, 8)
            while True:
                k = rng.randint(1, 6)
                if k % field.p != 0:
                    break
            alpha = rng.randrange(1, field.q)
            y = random_invertible(n, field.spec, rng)
            x, dec = prepare_near_root(y, k, alpha)
            assert x.is_invertible()
            check_split_condition(x, dec)
            L = _span_columns(dec.L_basis)
            S = _span_columns(dec.S_basis)
            for v in dec.L_basis:
                assert _in_column_span(L, x @ v)
            for v in dec.S_basis:
                assert x @ v == v
            if L is not None:
                xk = x.matpow(k)
                assert xk @ L == L.scale(alpha)
            r = (y.matpow(k) - Matrix.scalar(field, n, alpha)).rank()
            assert dec.dim_S <= r
            assert (x - y).rank() <= r
            assert len(dec.L_basis) + dec.dim_S == n


def test_prepare_worked_examples():
    field = GF(5)
    # y^k = alpha I already: x = y, S empty
    y = Matrix.diagonal(field, [2, 3])  # y^2 = diag(4,4) = 4I
    x, dec = prepare_near_root(y, 2, 4)
    assert x == y and dec.dim_S == 0
    # y = diag(2,1), k=2, alpha=1: L = span{e2}, x = identity
    y = Matrix.diagonal(field, [2, 1])
    x, dec = prepare_near_root(y, 2, 1)
    assert x == Matrix.identity(field, 2)
    assert dec.dim_S == 1 and len(dec.L_basis) == 1
    assert (x - y).rank() == 1
    # y^k - alpha I invertible: L = 0, x = identity
    y = Matrix.diagonal(field, [2, 3])
    x, dec = prepare_near_root(y, 2, 1)  # y^2 - I = 3I invertible
    assert x == Matrix.identity(field, 2)
    assert dec.dim_S == 2 and len(dec.L_basis) == 0


def test_prepare_rejects_bad_inputs():
    field = GF(5)
    y = Matrix.diagonal(field, [2, 1])
    with pytest.raises(ValueError):
        prepare_near_root(y, 5, 1)  # gcd(k, char) != 1
    with pytest.raises(ValueError):
        prepare_near_root(y, 2, 0)  # alpha = 0
    with pytest.raises(ValueError):
        prepare_near_root(Matrix.diagonal(field, [1, 0]), 2, 1)  # singular


def test_check_split_condition_rejects_tampering():
    field = GF(5)
    y = Matrix.diagonal(field, [2, 1])
    x, dec = prepare_near_root(y, 2, 1)
    bad = x + Matrix.from_packed(field, [[0, 1], [0, 0]])
    with pytest.raises(ValueError):
        check_split_condition(bad, dec)


def test_approx_centralize_trivial_cases(rng):
    field = GF(7)
    y = Matrix.diagonal(field, [1, 1, 6])
    x, dec = prepare_near_root(y, 2, 1)
    # phi already commuting: psi = phi
    phi = Matrix.diagonal(field, [2, 3, 5])
    assert approx_centralize(x, dec, phi) == phi
    # scalar x: everything commutes
    y = Matrix.scalar(field, 3, 2)
    x, dec = prepare_near_root(y, 3, 1)  # y^3 = 8 I = I
    assert x == y
    phi = random_invertible(3, field.spec, rng)
    assert approx_centralize(x, dec, phi) == phi


def test_approx_centralize_exhaustive_oracle_gf5():
    """2x2 over GF(5), x = diag(1,4): the 16 invertible commuting
    matrices are the diagonal ones; the best approximation of
    [[1,1],[0,1]] among them sits at rank distance exactly 1."""
    field = GF(5)
    x, dec = prepare_near_root(Matrix.diagonal(field, [1, 4]), 2, 1)
    assert x == Matrix.diagonal(field, [1, 4]) and dec.dim_S == 0
    phi = Matrix.from_packed(field, [[1, 1], [0, 1]])
    commutator_rank = (x @ phi - phi @ x).rank()
    assert commutator_rank == 1
    commuting = []
    for a in range(1, 5):
        for d in range(1, 5):
            commuting.append(Matrix.diagonal(field, [a, d]))
    assert len(commuting) == 16
    oracle = min((phi - psi).rank() for psi in commuting)
    assert oracle == 1
    psi = approx_centralize(x, dec, phi)
    assert x @ psi == psi @ x and psi.is_invertible()
    achieved = (phi - psi).rank()
    k = dec.k
    assert oracle <= achieved <= 2 * k * k * commutator_rank + 3 * dec.dim_S


def _closure(generators, cap=10**5):
    ident = Matrix.identity(generators[0].field, generators[0].nrows)
    seen = {ident.key(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for g in generators:
                prod = m @ g
                key = prod.key()
                if key not in seen:
                    if len(seen) >= cap:
                        raise AssertionError("closure exceeded cap")
                    seen[key] = prod
                    nxt.append(prod)
        frontier = nxt
    return seen


def _is_upper_unipotent_block(m, n, symmetric):
    field = m.field
    if m.block(0, n, 0, n) != Matrix.identity(field, n):
        return False
    if m.block(n, 2 * n, n, 2 * n) != Matrix.identity(field, n):
        return False
    if m.block(n, 2 * n, 0, n) != Matrix.zeros(field, n, n):
        return False
    b = m.block(0, n, n, 2 * n)
    return (not symmetric) or b == b.transpose()


def test_niceblock_invariants():
    for p in (2, 3, 5):
        spec = GF(p).spec
        field = GF(p)
        for n in (2, 3):
            for group in (SL, SP):
                cert = build_niceblock(n, spec, group, seed=5)
                x = cert.x.matrix
                ident = Matrix.identity(field, 2 * n)
                assert x.matpow(p) == ident and x != ident
                assert length_pr(x) == Fraction(1, 2)
                a_mats = [g.matrix for g in cert.A_generators]
                for gm in a_mats:
                    assert gm.matpow(p) == ident
                    assert x @ gm == gm @ x
                    assert _is_upper_unipotent_block(gm, n, group == SP)
                for a, b in itertools.combinations(a_mats, 2):
                    assert a @ b == b @ a
                for h in cert.H_generators:
                    hm = h.matrix
                    assert x @ hm == hm @ x
                # closure of A under H-conjugation, by block shape
                for u in cert.A_generators:
                    for h in cert.H_generators:
                        c = (h.inverse() * u * h).matrix
                        assert _is_upper_unipotent_block(c, n, group == SP)
                assert length_pr(cert.witness_u.matrix) >= Fraction(1, 2)
                assert length_pr(cert.witness_h.matrix) >= Fraction(1, 2)
                u, h = cert.commutator_u, cert.commutator_h
                comm = (u.inverse() * h.inverse() * u * h).matrix
                assert length_pr(comm) == cert.commutator_length
                assert cert.commutator_length >= \
                    Fraction(1, 3) * (1 - Fraction(2, n))


def test_niceblock_a_group_orders():
    """Enumerated A-group orders at half size 2: q^4 for SL, q^3 for Sp."""
    spec = GF(3).spec
    cert = build_niceblock(2, spec, SL, seed=1)
    assert len(_closure([g.matrix for g in cert.A_generators])) == 81
    cert = build_niceblock(2, spec, SP, seed=1)
    assert len(_closure([g.matrix for g in cert.A_generators])) == 27


def test_niceblock_centralizer_complete_small():
    """For n = 2, q in {2, 3}: the group generated by A, H and the SL
    scalars is exactly the full centralizer of x in SL_4(q), obtained
    independently by filtering the commutant span."""
    expected = {2: 96, 3: 3888}
    for q in (2, 3):
        field = GF(q)
        cert = build_niceblock(2, field.spec, SL, seed=3)
        x = cert.x.matrix
        basis = commutant_basis(x)
        flats = np.stack([b.packed().reshape(-1) for b in basis])
        centralizer_keys = set()
        for combo in itertools.product(range(q), repeat=len(basis)):
            vals = (np.array(combo) @ flats) % q
            m = Matrix.from_packed(field, vals.reshape(4, 4))
            if m.is_invertible() and m.det() == field.one:
                centralizer_keys.add(m.key())
        assert len(centralizer_keys) == expected[q]
        gens = [g.matrix for g in cert.A_generators]
        gens += [g.matrix for g in cert.H_generators]
        for lam in field.enumerate_nonzero():
            if field.pow(lam, 4) == field.one:
                gens.append(Matrix.scalar(field, 4, lam))
        generated = _closure(gens)
        assert set(generated) == centralizer_keys


def test_niceblock_rejects_small_n():
    with pytest.raises(Exception):
        build_niceblock(1, GF(3).spec, SL)


def test_project_to_sl_examples(rng):
    field = GF(5)
    g = Matrix.diagonal(field, [2, 1, 1])
    h = project_to_sl(g)
    assert h.group_tag == SL
    assert h.matrix.det() == field.one
    assert (g - h.matrix).rank() == 1
    # already determinant one: unchanged
    s = Matrix.diagonal(field, [2, 3, 1])
    assert project_to_sl(s).matrix == s
    for _ in range(200):
        f = FIELDS[rng.randrange(len(FIELDS))]
        n = rng.randint(1, 5)
        g = random_invertible(n, f.spec, rng)
        h = project_to_sl(g)
        assert h.matrix.det() == f.one
        assert (g - h.matrix).rank() <= 1


def test_commutator_witness_identity():
    spec = GF(3).spec
    elements = enumerate_sl2(spec)
    ident = Matrix.identity(GF(3), 2)
    witness = commutator_witness(ident, elements)
    assert witness is not None
    a, b = witness
    assert a.inverse() @ b.inverse() @ a @ b == ident


def test_sl2_3_witnesses_from_ambient_gl():
    """Frozen counts: within SL_2(3) only 8 of 24 elements are
    commutators of SL pairs, but all 24 are commutators of GL_2(3)
    pairs."""
    spec = GF(3).spec
    sl = enumerate_sl2(spec)
    sl_table = commutator_witness_table(sl)
    self_witnessed = [m for m in sl if sl_table.get(m.key()) is not None]
    assert len(self_witnessed) == 8
    gl_table = commutator_witness_table(enumerate_gl2(spec))
    for m in sl:
        witness = gl_table.get(m.key())
        assert witness is not None
        a, b = witness
        assert a.inverse() @ b.inverse() @ a @ b == m


def test_commutator_witness_permutations():
    """Witness search works on permutation groups too."""
    from msg_lab.groups import enumerate_alternating
    elements = enumerate_alternating(5)
    g = Permutation.from_cycles(5, [(0, 1, 2)])
    witness = commutator_witness(g, elements)
    assert witness is not None
    a, b = witness
    assert a.inverse() * b.inverse() * a * b == g
