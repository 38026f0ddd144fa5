"""Acceptance suite: one test per criterion, printing one PASS line each.

Run with ``pytest tests/test_acceptance.py -v -s``. Small dims throughout;
the whole module is meant to finish in well under a minute.
"""
import json

import numpy as np
import pytest

from gksl_kit.errors import NormBoundViolatedError
from gksl_kit.operators import Tolerance, random_density_matrix, random_ginibre
from gksl_kit.superops import (
    SuperOperator,
    hs_inner_superop,
    is_cp,
    jamiolkowski_inv,
    jamiolkowski_superop,
    monotone_falsifier,
    quadratic_form,
    transpose_map,
)
from gksl_kit.cp_maps import kraus_assemble, kraus_extract, random_cp_map
from gksl_kit.generators import (
    GkslPresentation,
    assemble_generator,
    lindblad_trick_average,
    minimal_presentation,
    monte_carlo_generator_average,
    random_minimal_presentation,
    trace_condition,
)
from gksl_kit.evolution import (
    constant_schedule,
    cocycle_check,
    euler_factor,
    euler_limit_exp,
    exp_generator,
    propagate,
)
from gksl_kit.filtration import Filtration, diverging_diagonal_sequence, \
    projective_reconstruction, truncation_study
from gksl_kit.builtin_maps import amplitude_damping_generator, driven_qubit_schedule
from gksl_kit.cli import main as cli_main
from gksl_kit.superops import dyad_vec


def report(k: int, name: str) -> None:
    print(f"ACCEPTANCE {k:02d} [{name}]: PASS")


def test_criterion_01_transpose_counterexample():
    t_map = transpose_map(2)
    witness = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)
    value = quadratic_form(t_map, witness)
    assert value == pytest.approx(-2.0, abs=1e-12)
    ok, lam_min = is_cp(t_map)
    assert not ok
    assert lam_min == pytest.approx(-1.0, abs=1e-12)
    assert monotone_falsifier(t_map, budget=10_000, seed=1) is None
    report(1, "transpose counterexample")


def test_criterion_02_involution_and_unitarity():
    rng = np.random.default_rng(2)
    count = 0
    while count < 100:
        for d in (2, 3, 4):
            lam = SuperOperator(random_ginibre(d * d, d * d, rng))
            gam = SuperOperator(random_ginibre(d * d, d * d, rng))
            back = jamiolkowski_superop(jamiolkowski_superop(lam))
            assert np.linalg.norm(back.matrix - lam.matrix) <= \
                1e-12 * np.linalg.norm(lam.matrix)
            back2 = jamiolkowski_inv(lam.choi)
            assert np.linalg.norm(back2.matrix - lam.matrix) <= \
                1e-12 * np.linalg.norm(lam.matrix)
            ip_plain = hs_inner_superop(lam, gam)
            ip_transformed = complex(np.sum(np.conj(lam.choi.matrix) * gam.choi.matrix))
            assert abs(ip_transformed - ip_plain) <= 1e-12 * max(1.0, abs(ip_plain))
            count += 1
    report(2, "transform involution + unitarity")


def test_criterion_03_choi_kraus_round_trip():
    rng = np.random.default_rng(3)
    count = 0
    while count < 100:
        for d in (2, 3):
            lam = random_cp_map(d, kraus_count=int(rng.integers(1, d * d + 1)), seed=rng)
            family = kraus_extract(lam)
            assert len(family) <= d * d
            back = kraus_assemble(family)
            rel = np.linalg.norm(back.matrix - lam.matrix) / np.linalg.norm(lam.matrix)
            assert rel <= 1e-10
            count += 1
    report(3, "Choi-Kraus round trip")


def test_criterion_04_generation_forward():
    rng = np.random.default_rng(4)
    count = 0
    while count < 100:
        for d in (2, 3):
            p = random_minimal_presentation(d, seed=rng, trace="preserving")
            lam = assemble_generator(p)
            for t in (0.01, 0.1, 1.0, 10.0):
                _, lam_min = is_cp(exp_generator(lam, t))
                assert lam_min >= -1e-9
            count += 1
    report(4, "generation theorem, forward")


def test_criterion_05_generation_reverse():
    rng = np.random.default_rng(5)
    count = 0
    while count < 100:
        for d in (2, 3):
            p = random_minimal_presentation(d, seed=rng, trace=None)
            lam = assemble_generator(p)
            p2 = minimal_presentation(lam)
            back = assemble_generator(p2)
            rel = np.linalg.norm(back.matrix - lam.matrix) / np.linalg.norm(lam.matrix)
            assert rel <= 1e-10
            assert abs(np.trace(p2.h)) <= 1e-12
            leak = np.linalg.norm(p2.psi.choi.matrix @ dyad_vec(np.eye(d)))
            assert leak <= 1e-10
            count += 1
    report(5, "generation theorem, reverse")


def test_criterion_06_trace_conditions():
    rng = np.random.default_rng(6)
    fixtures = [amplitude_damping_generator(0.3)]
    presentations = [random_minimal_presentation(2, seed=rng, trace="preserving")
                     for _ in range(5)]
    fixtures += [assemble_generator(p) for p in presentations]
    for lam in fixtures:
        rho = random_density_matrix(lam.dim_in, rng)
        for t in (0.1, 1.0, 5.0, 10.0):
            out = exp_generator(lam, t).apply(rho)
            assert abs(np.trace(out).real - 1.0) <= 1e-9
    # deliberately shifted: G -> G + c Id makes the semigroup strictly lossy
    for p in presentations[:3]:
        shifted = GkslPresentation(psi=p.psi, g=p.g + 0.5 * np.eye(2), h=p.h,
                                   minimal=True)
        assert trace_condition(shifted).classification == "nonincreasing"
        lam = assemble_generator(shifted)
        rho = random_density_matrix(2, rng)
        traces = [np.trace(exp_generator(lam, t).apply(rho)).real
                  for t in (0.0, 0.5, 1.0, 2.0)]
        assert all(b < a for a, b in zip(traces, traces[1:]))
    report(6, "trace conditions")


def test_criterion_07_unitary_average_identity():
    rng = np.random.default_rng(7)
    for _ in range(50):
        d = int(rng.integers(2, 4))
        p = random_minimal_presentation(d, seed=rng, trace="nonincreasing")
        avg = lindblad_trick_average(p)
        expected = -p.g - (np.trace(p.g).real / d) * np.eye(d) - 1j * p.h
        assert np.linalg.norm(avg - expected) <= 1e-10
    p = random_minimal_presentation(2, seed=77, trace="nonincreasing")
    lam = assemble_generator(p)
    mean, stderr = monte_carlo_generator_average(lam, 10_000, seed=78)
    z = np.abs(mean - lindblad_trick_average(p)) / np.maximum(stderr, 1e-15)
    assert z.max() < 3.0
    report(7, "unitary-average identity")


def test_criterion_08_euler_limit():
    lam = amplitude_damping_generator(0.6)
    ref = exp_generator(lam, 1.0)
    ns = [2 ** k for k in range(4, 11)]          # 16 ... 1024
    errs = [np.linalg.norm(euler_limit_exp(lam, n).matrix - ref.matrix) for n in ns]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    slope = np.polyfit(np.log(ns), np.log(errs), 1)[0]
    assert abs(slope + 1.0) <= 0.3
    assert is_cp(euler_factor(lam, 1.0 / 16)).ok
    report(8, "Euler-limit construction")


def test_criterion_09_semigroupoid_splicing():
    sched = driven_qubit_schedule(omega=1.3, amp=1.0, gamma=0.2)
    eps = 0.1
    prev = propagate(sched, 0.0, 1.0, eps).map.matrix
    diffs = []
    for _ in range(5):
        eps /= 2
        cur = propagate(sched, 0.0, 1.0, eps).map.matrix
        diffs.append(np.linalg.norm(cur - prev))
        prev = cur
    ratios = [diffs[i] / diffs[i + 1] for i in range(4)]
    assert all(1.6 <= r <= 2.4 for r in ratios)

    p1 = propagate(sched, 0.5, 1.0, 0.125)
    p2 = propagate(sched, 0.0, 0.5, 0.125)
    p3 = propagate(sched, 0.0, 1.0, 0.125)
    assert cocycle_check(p1, p2, p3, Tolerance(rtol=1e-10))

    lam = amplitude_damping_generator(0.4)
    const = propagate(constant_schedule(lam), 0.0, 1.0, 0.125).map
    semigroup = exp_generator(lam, 1.0)
    assert np.linalg.norm(const.matrix - semigroup.matrix) <= \
        1e-12 * max(1.0, np.linalg.norm(semigroup.matrix))
    report(9, "semigroupoid splicing")


def test_criterion_10_filtration_convergence():
    d = 16
    from gksl_kit.generators import random_dcp_generator
    lam = random_dcp_generator(d, seed=10)
    f = Filtration(ambient_dim=d, dims=tuple(range(2, d + 1, 2)))
    rho = random_density_matrix(d, seed=11)
    rows = truncation_study(lam, f, 0.5, rho)
    errors = {r.n: r.error for r in rows}
    assert errors[d] <= 1e-10
    for n in f.dims:
        if n >= 8:
            assert errors[n] <= errors[4]
    assert all(r.propagator_cp for r in rows)

    bad = diverging_diagonal_sequence(f)
    with pytest.raises(NormBoundViolatedError):
        projective_reconstruction(bad, norm_bound=10.0)
    report(10, "filtration convergence")


def test_criterion_11_cli_replay_and_exit_codes(tmp_path, capsys):
    matrix = [
        (("check-cp", "builtin:transpose"), 1),
        (("check-cp", "builtin:identity"), 0),
        (("check-cp", "builtin:depolarizing?p=1.0"), 0),
        (("check-cp", "builtin:dephasing"), 0),
        (("kraus", "builtin:dephasing"), 0),
        (("kraus", "builtin:transpose"), 1),
        (("check-generator", "builtin:amplitude-damping?gamma=0.3"), 0),
        (("check-generator", "builtin:commutator"), 0),
        (("check-generator", "builtin:transpose-minus-identity"), 1),
        (("evolve", "builtin:driven-qubit", "--t1", "0.5", "--eps", "0.125"), 0),
        (("truncate-study", "builtin:random-dcp?d=8&seed=3", "--dims", "2,4,8",
          "--t", "0.5"), 0),
    ]
    for idx, (argv, expected_code) in enumerate(matrix):
        outputs = []
        for attempt in range(2):
            target = tmp_path / f"report_{idx}_{attempt}.json"
            code = cli_main([*argv, "--seed", "42", "--json-out", str(target)])
            capsys.readouterr()
            assert code == expected_code, argv
            outputs.append(target.read_bytes())
        assert outputs[0] == outputs[1], argv
    code = cli_main(["check-cp", str(tmp_path / "missing.json")])
    capsys.readouterr()
    assert code == 2
    report(11, "CLI replay + exit codes")
