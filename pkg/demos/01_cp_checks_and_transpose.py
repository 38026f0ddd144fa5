#!/usr/bin/env python3
"""Complete positivity is a spectral question about the Choi matrix.

A map on density matrices can preserve positivity and still fail to be a
physical operation: attach an untouched ancilla and positivity can break.
The clean test is exact: a map is completely positive (CP) if and only if
its Choi matrix is positive semidefinite.

This script walks the canonical example, transposition. It never produces
a negative output on a positive input, yet one negative Choi eigenvalue
betrays it: acting on half of an entangled state pushes eigenvalues below
zero.
"""
import numpy as np

from gksl_kit import (
    is_cp,
    monotone_falsifier,
    quadratic_form,
    rank_n_positive_falsifier,
    tensor_with_identity,
    transpose_map,
)

t_map = transpose_map(2)

print("Choi matrix of the transpose map (the SWAP permutation):")
print(np.round(t_map.choi.matrix.real, 3))
ok, lam_min = is_cp(t_map)
print(f"\nCP?  {ok}   (smallest Choi eigenvalue = {lam_min:+.3f})")

# Positivity on ordinary states holds, and a falsifier that hammers the map
# with rank-one states accordingly comes back empty-handed.
witness = monotone_falsifier(t_map, budget=5000, seed=0)
print(f"positivity witness on plain states: {witness}")

# The failure needs rank-2 inputs. The quadratic form of the Choi matrix
# evaluated at T = [[0,1],[-1,0]] is -2, so the map is not 2-monotone.
t_wit = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)
print(f"\n<T, (transpose) T> at the canonical rank-2 witness: "
      f"{quadratic_form(t_map, t_wit).real:+.1f}")
found = rank_n_positive_falsifier(t_map, 2, seed=0)
print(f"rank-2 falsifier value: {found.value.real:+.4f}")
print(f"rank-1 falsifier finds nothing: "
      f"{rank_n_positive_falsifier(t_map, 1, budget=50, seed=0) is None}")

# Equivalent picture: tensor with an ancilla and feed in an entangled state.
omega = np.zeros(4, dtype=complex)
omega[0] = omega[3] = 1 / np.sqrt(2)
entangled = np.outer(omega, omega.conj())
partial = tensor_with_identity(t_map, 2).apply(entangled)
print("\neigenvalues of (transpose x id) applied to an entangled projector:")
print(np.round(np.linalg.eigvalsh(partial), 3))
print("\nThe -1/2 eigenvalue is the ancilla-side shadow of the Choi spectrum.")
