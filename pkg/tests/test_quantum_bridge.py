import math
from fractions import Fraction

import numpy as np
import pytest

from discretum import (
    CONSTANTS,
    DiscretumError,
    NcExpression,
    OperatorMatrix,
    RelationInputs,
    action_quantum_from_frequency,
    build_qp_matrices,
    commutator_defect,
    ground_energy,
    lattice_spacing_from_cutoff,
    medium_atom_mass,
    mode_hamiltonian,
    oscillator_hamiltonian,
    oscillator_spectrum,
    planck_from_lattice,
    real_form_defect,
    reduce_mode_hamiltonian,
)

P = NcExpression.symbol("p")
Q = NcExpression.symbol("q")


def test_expression_basics():
    assert NcExpression.zero().is_zero
    assert (P - P).is_zero
    assert not (P + Q).is_zero
    assert P + Q == Q + P
    assert P - Q != Q - P
    # scaling keeps exact rationals
    e = P.scaled(Fraction(1, 3)) + P.scaled(Fraction(2, 3))
    assert e == P
    assert P.scaled(0).is_zero


def test_expression_multiplication_is_ordered():
    pq = P * Q
    qp = Q * P
    assert pq != qp
    assert not (pq - qp).is_zero
    assert (pq - qp).commutative_image().is_zero
    # word concatenation
    assert (P * Q) * P == P * (Q * P)
    assert pq.terms == {("p", "q"): {0: Fraction(1)}}


def test_expression_omega_powers():
    e = P.scaled(1, 2).scaled(1, -2)
    assert e == P
    f = Q.scaled(Fraction(3, 2), 1)
    assert f.terms == {("q",): {1: Fraction(3, 2)}}
    # different powers do not collapse
    assert Q.scaled(1, 1) != Q.scaled(1, 2)


def test_expression_hash_and_set_membership():
    s = {P + Q, Q + P, P * Q}
    assert len(s) == 2


def test_mode_hamiltonian_structure():
    h = mode_hamiltonian()
    assert h.terms == {
        ("p", "p*"): {0: Fraction(1, 2)},
        ("q", "q*"): {2: Fraction(1, 2)},
    }
    assert not h.commutative_image().is_zero


def test_substitute_identity_and_plain_square():
    h = mode_hamiltonian()
    assert h.substitute({}) == h
    plain = h.substitute({"p*": P, "q*": Q})
    assert plain.terms == {
        ("p", "p"): {0: Fraction(1, 2)},
        ("q", "q"): {2: Fraction(1, 2)},
    }


def test_reduction_collapses_to_commutator_form():
    got = reduce_mode_hamiltonian()
    expected = (P * Q).scaled(Fraction(1, 2), 1) + (Q * P).scaled(Fraction(-1, 2), 1)
    assert got == expected
    # sign matters: the reversed form is different
    assert got != (Q * P).scaled(Fraction(1, 2), 1) + (P * Q).scaled(Fraction(-1, 2), 1)
    # and the ordered difference vanishes only commutatively
    assert not got.is_zero
    assert got.commutative_image().is_zero


def test_reduction_repr_is_stable():
    assert repr(reduce_mode_hamiltonian()) == "(1/2)*w*pq + (-1/2)*w*qp"
    assert repr(NcExpression.zero()) == "0"


def test_operator_matrix_validation():
    with pytest.raises(DiscretumError):
        OperatorMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]), "position")
    with pytest.raises(DiscretumError):
        OperatorMatrix(np.eye(2), "banana")
    with pytest.raises(DiscretumError):
        OperatorMatrix(np.ones((2, 3)), "position")
    # the hamiltonian role carries no Hermiticity gate
    OperatorMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]), "hamiltonian")


def test_build_qp_smallest_truncation():
    q, p = build_qp_matrices(2, 1.0, 1.0)
    r = 1.0 / math.sqrt(2.0)
    np.testing.assert_allclose(q.matrix, [[0, r], [r, 0]], rtol=0, atol=1e-15)
    np.testing.assert_allclose(p.matrix, [[0, -1j * r], [1j * r, 0]], rtol=0, atol=1e-15)


@pytest.mark.parametrize("n", [2, 4, 16, 64, 256])
def test_build_qp_structure(n):
    q, p = build_qp_matrices(n, 1.3, 0.7)
    assert q.hermiticity_defect() == 0.0
    assert p.hermiticity_defect() == 0.0
    for mat in (q.matrix, p.matrix):
        assert np.all(np.diag(mat) == 0)
        off = np.triu(mat, 2)
        assert np.max(np.abs(off)) == 0.0


def test_build_qp_validation():
    with pytest.raises(DiscretumError):
        build_qp_matrices(1, 1.0, 1.0)
    with pytest.raises(DiscretumError):
        build_qp_matrices(4, -1.0, 1.0)
    with pytest.raises(DiscretumError):
        build_qp_matrices(4, 1.0, 1.0, hbar=0.0)


@pytest.mark.parametrize("n", [2, 4, 16, 64, 256])
def test_commutator_canonical_up_to_corner(n):
    q, p = build_qp_matrices(n, 2.0, 0.5)
    defect, corner = commutator_defect(q, p)
    assert defect < 1e-12
    np.testing.assert_allclose(corner, -1j * (n - 1), rtol=1e-10)


def test_commutator_scales_with_hbar():
    n = 8
    q, p = build_qp_matrices(n, 1.0, 1.0, hbar=2.0)
    defect, corner = commutator_defect(q, p, hbar=2.0)
    assert defect < 1e-12
    np.testing.assert_allclose(corner, -2j * (n - 1), rtol=1e-10)
    # measured against the wrong hbar the defect is exactly the difference
    wrong_defect, _ = commutator_defect(q, p, hbar=1.0)
    np.testing.assert_allclose(wrong_defect, 1.0, rtol=1e-10)


def test_commutator_dimension_mismatch():
    q, _ = build_qp_matrices(4, 1.0, 1.0)
    _, p = build_qp_matrices(6, 1.0, 1.0)
    with pytest.raises(DiscretumError):
        commutator_defect(q, p)


def test_real_form_defect_documents_failure():
    q, p = build_qp_matrices(4, 1.0, 1.0)
    np.testing.assert_allclose(real_form_defect(q, p, h=1.0), math.sqrt(2.0), rtol=1e-12)
    # scaling h moves the target, not the matrices
    np.testing.assert_allclose(real_form_defect(q, p, h=3.0), math.sqrt(10.0), rtol=1e-12)


def test_hamiltonian_is_diagonal_with_corner_anomaly():
    q, p = build_qp_matrices(6, 1.0, 1.0)
    h = oscillator_hamiltonian(q, p, 1.0, 1.0)
    assert h.role == "hamiltonian"
    off = h.matrix - np.diag(np.diag(h.matrix))
    assert np.max(np.abs(off)) < 1e-13
    np.testing.assert_allclose(np.diag(h.matrix).real,
                               [0.5, 1.5, 2.5, 3.5, 4.5, 2.5], rtol=1e-12)


@pytest.mark.parametrize("n", [2, 4, 16, 64])
@pytest.mark.parametrize("m,omega,hbar", [(1.0, 1.0, 1.0), (3.0, 0.5, 1.0), (1.0, 2.0, 2.0)])
def test_ground_energy_half_quantum(n, m, omega, hbar):
    q, p = build_qp_matrices(n, m, omega, hbar)
    np.testing.assert_allclose(ground_energy(q, p, m, omega),
                               0.5 * hbar * omega, rtol=1e-12)


@pytest.mark.parametrize("n_levels", [1, 4, 16, 256])
def test_spectrum_exact_ladder(n_levels):
    got = oscillator_spectrum(n_levels, 1.0, 1.0)
    np.testing.assert_allclose(got, np.arange(n_levels) + 0.5, rtol=1e-10)


def test_spectrum_physical_scales():
    hbar = CONSTANTS.hbar
    omega = 1e10
    got = oscillator_spectrum(6, 1e-27, omega, hbar=hbar)
    np.testing.assert_allclose(got, hbar * omega * (np.arange(6) + 0.5), rtol=1e-8)


def test_relation_inputs_validation():
    with pytest.raises(DiscretumError):
        RelationInputs(m=0.0, a=1.0, omega=1.0)
    with pytest.raises(DiscretumError):
        RelationInputs(m=1.0, a=-1.0, omega=1.0)
    r = RelationInputs(m=1.0, a=1.0, omega=1.0)
    assert r.c == CONSTANTS.c


def test_action_quantum_values():
    toy = RelationInputs(m=2.0, a=3.0, omega=1.0, c=5.0)
    assert planck_from_lattice(toy) == 30.0
    assert action_quantum_from_frequency(toy) == 18.0


def test_frequency_form_equals_momentum_form_on_sound_cone():
    rng = np.random.default_rng(23)
    for _ in range(200):
        m, a, c = rng.uniform(0.1, 10.0, size=3)
        inp = RelationInputs(m=m, a=a, omega=c / a, c=c)
        np.testing.assert_allclose(action_quantum_from_frequency(inp),
                                   planck_from_lattice(inp), rtol=1e-14)


def test_medium_atom_mass_frozen_value():
    got = medium_atom_mass(CONSTANTS, 1e-25)
    np.testing.assert_allclose(got, 2.2102190943e-17, rtol=1e-9)
    with pytest.raises(DiscretumError):
        medium_atom_mass(CONSTANTS, 0.0)


def test_planck_roundtrip_identity():
    for a in (1e-25, 1e-10, 1.0, 17.3):
        m = medium_atom_mass(CONSTANTS, a)
        inp = RelationInputs(m=m, a=a, omega=CONSTANTS.c / a)
        np.testing.assert_allclose(planck_from_lattice(inp), CONSTANTS.h, rtol=1e-12)
        np.testing.assert_allclose(action_quantum_from_frequency(inp),
                                   CONSTANTS.h, rtol=1e-12)


def test_mass_for_momentum_cutoff_spacing():
    """Cross-module chain: spacing from a momentum cutoff, then the atom mass
    that makes the medium's action quantum equal h."""
    a_s = lattice_spacing_from_cutoff(CONSTANTS, 1e-9)
    m = medium_atom_mass(CONSTANTS, a_s)
    np.testing.assert_allclose(m, 1e-9 / CONSTANTS.c, rtol=1e-12)
    inp = RelationInputs(m=m, a=a_s, omega=CONSTANTS.c / a_s)
    np.testing.assert_allclose(planck_from_lattice(inp), CONSTANTS.h, rtol=1e-12)
