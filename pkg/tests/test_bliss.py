import itertools
import math

import numpy as np
import pytest
from scipy.optimize import linprog

from lcusim.bliss import (
    BlissParams,
    FermionicOperator,
    apply_bliss,
    build_hubbard_chain,
    fermionic_to_pauli_dict,
    fock_matrix,
    jordan_wigner,
    load_fermionic,
    optimize_bliss,
    save_fermionic,
    sector_spectrum,
    shift_operator,
)
from lcusim.errors import InvalidModelError, ResourceLimitError
from lcusim.hamiltonian import l1_norm, pauli_string_matrix, to_matrix


def _jw_matrix(F):
    return to_matrix(jordan_wigner(F))


def _random_hermitian_operator(n, rng, two_body=False):
    h = rng.normal(size=(n, n))
    h = (h + h.T) / 2
    g = None
    if two_body:
        g = np.zeros((n, n, n, n))
        for i in range(n):
            for j in range(n):
                g[i, i, j, j] = rng.normal()
        g = (g + g.transpose(3, 2, 1, 0)) / 2
    return FermionicOperator(n, constant=float(rng.normal()), one_body=h, two_body=g)


class TestJordanWigner:
    def test_single_number_operator(self):
        # a_0^dag a_0 = (I - Z_0) / 2
        F = FermionicOperator(2, one_body=np.diag([1.0, 0.0]))
        d = fermionic_to_pauli_dict(F)
        assert d["II"] == pytest.approx(0.5)
        assert d["ZI"] == pytest.approx(-0.5)

    def test_hopping_term(self):
        # a_0^dag a_1 + h.c. = (X X + Y Y) / 2 (letters: qubit0 first)
        h = np.array([[0.0, 1.0], [1.0, 0.0]])
        d = fermionic_to_pauli_dict(FermionicOperator(2, one_body=h))
        assert d["XX"] == pytest.approx(0.5)
        assert d["YY"] == pytest.approx(0.5)

    def test_anticommutators(self):
        # {a_i, a_j^dag} = delta_ij, {a_i, a_j} = 0, via the Pauli encoding
        n = 3
        mats = []
        for j in range(n):
            d = {}
            from lcusim.bliss import _ladder_strings

            mat = np.zeros((1 << n, 1 << n), dtype=complex)
            for coeff, letters in _ladder_strings(j, n, dagger=False):
                mat += coeff * pauli_string_matrix(letters)
            mats.append(mat)
        for i in range(n):
            for j in range(n):
                anti = mats[i] @ mats[j].conj().T + mats[j].conj().T @ mats[i]
                expected = np.eye(1 << n) * (1.0 if i == j else 0.0)
                assert np.abs(anti - expected).max() < 1e-12
                anti2 = mats[i] @ mats[j] + mats[j] @ mats[i]
                assert np.abs(anti2).max() < 1e-12

    def test_matches_fock_matrix(self):
        rng = np.random.default_rng(31)
        F = _random_hermitian_operator(3, rng, two_body=True)
        assert np.abs(_jw_matrix(F) - fock_matrix(F)).max() < 1e-12

    def test_orbital_cap(self):
        with pytest.raises(ResourceLimitError):
            jordan_wigner(FermionicOperator(13), cap=12)

    def test_hubbard_reference_values(self):
        H = jordan_wigner(build_hubbard_chain(4, 1.0, 4.0))
        assert H.num_terms == 25
        assert l1_norm(H) == pytest.approx(22.0)


class TestShift:
    def test_shift_operator_identity(self):
        # the shift equals (xi0 + sum xi a^dag a)(N_hat - ne) as a matrix
        rng = np.random.default_rng(7)
        n, ne = 3, 2
        xi = rng.normal(size=(n, n))
        xi = (xi + xi.T) / 2
        params = BlissParams(0.7, xi, ne)
        S = fock_matrix(shift_operator(params, n))
        num = fock_matrix(FermionicOperator(n, one_body=np.eye(n)))
        xi_op = fock_matrix(FermionicOperator(n, one_body=xi))
        expected = (0.7 * np.eye(1 << n) + xi_op) @ (num - ne * np.eye(1 << n))
        assert np.abs(S - expected).max() < 1e-12

    def test_apply_bliss_subtracts(self):
        rng = np.random.default_rng(12)
        F = _random_hermitian_operator(3, rng, two_body=True)
        params = BlissParams(0.3, np.diag([0.1, -0.2, 0.4]), 2)
        shifted = apply_bliss(F, params)
        expected = fock_matrix(F) - fock_matrix(shift_operator(params, 3))
        assert np.abs(fock_matrix(shifted) - expected).max() < 1e-12

    def test_sector_spectrum_invariant(self):
        rng = np.random.default_rng(3)
        F = _random_hermitian_operator(4, rng, two_body=True)
        params = BlissParams(1.1, np.diag(rng.normal(size=4)), 2)
        before = sector_spectrum(F, 2)
        after = sector_spectrum(apply_bliss(F, params), 2)
        assert np.abs(before - after).max() < 1e-10

    def test_other_sectors_change(self):
        F = build_hubbard_chain(2, 1.0, 4.0)
        params = BlissParams(2.0, np.zeros((4, 4)), 2)
        shifted = apply_bliss(F, params)
        assert np.abs(sector_spectrum(F, 2) - sector_spectrum(shifted, 2)).max() < 1e-10
        assert np.abs(sector_spectrum(F, 3) - sector_spectrum(shifted, 3)).max() > 1e-6

    def test_non_hermitian_xi_rejected(self):
        with pytest.raises(InvalidModelError):
            BlissParams(0.0, np.array([[0.0, 1.0], [0.0, 0.0]]), 1)


class TestOptimizer:
    def test_hubbard4_reference(self):
        F = build_hubbard_chain(4, 1.0, 4.0)
        result = optimize_bliss(F, 4)
        assert result.converged
        assert l1_norm(result.hamiltonian) == pytest.approx(14.0, abs=1e-6)
        assert result.hamiltonian.num_terms == 17

    def test_matches_linear_program(self):
        # independent oracle: minimize ||a - B x||_1 as an LP
        from lcusim.bliss import _param_basis

        F = build_hubbard_chain(4, 1.0, 4.0)
        ne = 4
        basis = _param_basis(8, True)
        base = fermionic_to_pauli_dict(F)
        cols = [
            fermionic_to_pauli_dict(shift_operator(BlissParams(u.xi0, u.xi, ne), 8))
            for u in basis
        ]
        strings = sorted(set(base) | set().union(*[set(c) for c in cols]))
        a = np.array([base.get(s, 0j) for s in strings]).real
        B = np.array([[c.get(s, 0j) for c in cols] for s in strings]).real
        m, k = B.shape
        # variables: x (free), t >= |a - Bx| elementwise
        c = np.concatenate([np.zeros(k), np.ones(m)])
        A_ub = np.block([[B, -np.eye(m)], [-B, -np.eye(m)]])
        b_ub = np.concatenate([a, -a])
        lp = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * (k + m))
        assert lp.status == 0
        result = optimize_bliss(F, ne)
        assert l1_norm(result.hamiltonian) == pytest.approx(lp.fun, abs=1e-6)

    def test_monotone_history(self):
        F = build_hubbard_chain(3, 1.0, 2.0)
        result = optimize_bliss(F, 3)
        hist = result.objective_history
        assert all(b <= a + 1e-12 for a, b in zip(hist, hist[1:]))
        assert hist[-1] <= l1_norm(jordan_wigner(F)) + 1e-12

    def test_diagonal_only_grid_search(self):
        # brute-force oracle over (xi0, uniform diagonal xi) for the small chain
        F = build_hubbard_chain(2, 1.0, 4.0)
        ne = 2
        best = math.inf
        for xi0 in np.linspace(-3, 3, 61):
            for d in np.linspace(-2, 2, 41):
                params = BlissParams(float(xi0), np.eye(4) * d, ne)
                best = min(best, l1_norm(jordan_wigner(apply_bliss(F, params))))
        result = optimize_bliss(F, ne)
        assert l1_norm(result.hamiltonian) <= best + 1e-9

    def test_sector_preserved_after_optimization(self):
        F = build_hubbard_chain(3, 1.0, 2.0)
        result = optimize_bliss(F, 3)
        shifted = apply_bliss(F, result.params)
        assert np.abs(sector_spectrum(F, 3) - sector_spectrum(shifted, 3)).max() < 1e-8


class TestHubbardModel:
    def test_half_filled_ground_state_symmetric(self):
        # particle-hole symmetric point sanity: spectrum is real and bounded
        F = build_hubbard_chain(2, 1.0, 4.0)
        spec = sector_spectrum(F, 2)
        assert spec.shape == (6,)
        assert spec[0] < 0 < spec[-1]

    def test_orbital_interleaving(self):
        F = build_hubbard_chain(2, 1.0, 0.0)
        # hopping connects same-spin orbitals of adjacent sites only
        h = F.one_body
        assert h[0, 2] == -1.0 and h[1, 3] == -1.0
        assert h[0, 1] == 0.0 and h[0, 3] == 0.0


class TestFileFormat:
    def test_roundtrip(self, tmp_path):
        F = build_hubbard_chain(3, 1.0, 2.0)
        path = tmp_path / "hubbard.txt"
        save_fermionic(F, 3, path)
        F2, ne = load_fermionic(path)
        assert ne == 3
        assert np.abs(fock_matrix(F2) - fock_matrix(F)).max() < 1e-12

    def test_bundled_data_file(self):
        import importlib.resources as res

        with res.as_file(res.files("lcusim.data") / "hubbard_4site.txt") as path:
            F, ne = load_fermionic(path)
        assert ne == 4
        assert l1_norm(jordan_wigner(F)) == pytest.approx(22.0)

    def test_constant_line(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("NORB=2 NELEC=1\n1.0 1 1 0 0\n0.25 0 0 0 0\n")
        F, ne = load_fermionic(path)
        assert F.constant == 0.25
        assert F.one_body[0, 0] == 1.0
