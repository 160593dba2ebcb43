import cmath
import math
import random

import numpy as np
import pytest

from measure_lab.automaton import parse_automaton, transition_matrices
from measure_lab.errors import EmptyInitialSet
from measure_lab.fourier import (
    build_weight_cache,
    nu_hat,
    nu_hat_initial,
    psi_hat,
    rajchman_scan,
)
from measure_lab.distribution import depth_cloud
from measure_lab.parry import perron


# ---------------------------------------------------------------- oracles

def fullshift4_closed_form(t):
    """Transform of the hat-density measure: product of two box transforms."""
    if t == 0:
        return 1.0 + 0j
    f1 = (1 - cmath.exp(-2j * cmath.pi * t)) / (2j * cmath.pi * t)
    f2 = (1 - cmath.exp(-4j * cmath.pi * t)) / (4j * cmath.pi * t)
    return f1 * f2


def initial_cloud_quadrature(a, p, pd, t, depth):
    """Transform of the initial-state measure from a depth-n refinement."""
    idx = a.state_index()
    v_i = np.zeros(pd.n_states)
    for s in a.initial:
        v_i[idx[s]] = 1.0
    v_i = v_i / (v_i @ pd.v_R)
    tm = transition_matrices(a)
    beta = p.beta_float
    total = 0j

    def walk(row, k, value):
        nonlocal total
        if k == depth:
            total += (row @ pd.v_R) * pd.lam**-depth * cmath.exp(-2j * cmath.pi * t * value)
            return
        for label in a.alphabet:
            nxt = row @ tm.per_label[label]
            if nxt.max() > 0:
                walk(nxt, k + 1, value + label * beta ** -(k + 1))

    walk(v_i, 0, 0.0)
    return total


# ---------------------------------------------------------------- nu_hat

def test_transform_at_zero_is_one(automata, pisots, perron_data):
    for name in automata:
        value, bound = nu_hat(automata[name], pisots[name], perron_data[name], 0.0)
        assert value == 1.0 + 0j
        assert bound < 1e-12


def test_fullshift4_matches_closed_form(automata, pisots, perron_data):
    a, p, pd = automata["fullshift4"], pisots["fullshift4"], perron_data["fullshift4"]
    cache = build_weight_cache(a, pd)
    rng = random.Random(1)
    for _ in range(12):
        t = rng.uniform(-8, 8)
        value, bound = nu_hat(a, p, pd, t, 1e-9, cache)
        assert abs(value - fullshift4_closed_form(t)) <= bound + 1e-9


def test_fullshift4_quarter_and_integer(automata, pisots, perron_data):
    a, p, pd = automata["fullshift4"], pisots["fullshift4"], perron_data["fullshift4"]
    value, _ = nu_hat(a, p, pd, 0.25, 1e-8)
    assert abs(abs(value) - 4 * math.sqrt(2) / math.pi**2) < 1e-7
    assert abs(abs(value) - 0.57312) < 1e-4
    value, bound = nu_hat(a, p, pd, 1.0, 1e-8)
    assert abs(value) <= bound


def test_conjugate_symmetry_and_size(automata, pisots, perron_data):
    for name in ("fibonacci", "fig3", "example1-7edge"):
        a, p, pd = automata[name], pisots[name], perron_data[name]
        cache = build_weight_cache(a, pd)
        for t in (0.3, 1.7, 5.2):
            v_pos, b = nu_hat(a, p, pd, t, 1e-9, cache)
            v_neg, _ = nu_hat(a, p, pd, -t, 1e-9, cache)
            assert abs(v_neg - v_pos.conjugate()) < 2e-9
            assert abs(v_pos) <= 1 + b + 1e-12


def test_truncation_stability(automata, pisots, perron_data):
    for name in ("fibonacci", "fullshift4", "fig3"):
        a, p, pd = automata[name], pisots[name], perron_data[name]
        for t in (0.5, 3.3):
            v6, b6 = nu_hat(a, p, pd, t, 1e-6)
            v10, b10 = nu_hat(a, p, pd, t, 1e-10)
            assert abs(v6 - v10) <= b6 + b10


def test_quadrature_cross_check(automata, pisots, perron_data):
    for name in ("fibonacci", "example1-7edge"):
        a, p, pd = automata[name], pisots[name], perron_data[name]
        cloud = depth_cloud(a, p, pd, 10)
        for t in (0.4, 1.3):
            value, bound = nu_hat(a, p, pd, t, 1e-9)
            quad = sum(e.mass * cmath.exp(-2j * cmath.pi * t * e.value) for e in cloud.entries)
            tolerance = cloud.max_deviation * 2 * math.pi * abs(t) + bound + 1e-9
            assert abs(value - quad) <= tolerance


def test_atomic_transform_is_almost_periodic_sum(automata, pisots, perron_data):
    # for the atomic fixture, the transform equals the finite atom sum
    from measure_lab.classify import atoms

    a, p, pd = automata["example1-7edge"], pisots["example1-7edge"], perron_data["example1-7edge"]
    atom_list = atoms(a, p, pd)
    rng = random.Random(4)
    for _ in range(20):
        t = rng.uniform(-20, 20)
        value, bound = nu_hat(a, p, pd, t, 1e-9)
        direct = sum(at.mass * cmath.exp(-2j * cmath.pi * t * at.value_decimal)
                     for at in atom_list)
        assert abs(value - direct) <= bound + 1e-8


# ---------------------------------------------------------------- nu_hat_initial

def test_initial_transform_at_zero(automata, pisots, perron_data):
    v, _ = nu_hat_initial(
        automata["fibonacci"], pisots["fibonacci"], perron_data["fibonacci"], 0.0
    )
    assert v == 1.0 + 0j


def test_initial_transform_requires_initial():
    a = parse_automaton(
        {"alphabet": [0], "states": ["s"],
         "edges": [{"from": "s", "to": "s", "label": 0}]}
    )
    pd = perron(a)
    from measure_lab.algebraic import make_pisot

    with pytest.raises(EmptyInitialSet):
        nu_hat_initial(a, make_pisot([-2, 1]), pd, 0.5)


def test_initial_transform_vs_cloud_quadrature(automata, pisots, perron_data):
    a, p, pd = automata["fibonacci"], pisots["fibonacci"], perron_data["fibonacci"]
    value, bound = nu_hat_initial(a, p, pd, 0.5, 1e-8)
    quad = initial_cloud_quadrature(a, p, pd, 0.5, depth=22)
    assert abs(value - quad) < 1e-4


def test_initial_transform_point_mass(automata, pisots, perron_data):
    # all infinite paths from the zero state have value 0, so the
    # initial-state measure is a unit point mass and its transform is 1
    a, p, pd = automata["example1-7edge"], pisots["example1-7edge"], perron_data["example1-7edge"]
    for t in (0.37, 2.0, 11.25):
        value, bound = nu_hat_initial(a, p, pd, t, 1e-8)
        assert abs(value - 1) <= bound + 1e-6


# ---------------------------------------------------------------- psi_hat

def test_limit_at_zero(automata, pisots, perron_data):
    res = psi_hat(automata["fibonacci"], pisots["fibonacci"], perron_data["fibonacci"], (0, 0))
    assert res.value == 1.0 + 0j


def test_integer_base_limit_equals_transform(automata, pisots, perron_data):
    a, p, pd = automata["fullshift4"], pisots["fullshift4"], perron_data["fullshift4"]
    for m in (1, 2, 5):
        v_direct, _ = nu_hat(a, p, pd, float(m), 1e-8)
        res = psi_hat(a, p, pd, (m,), 1e-8)
        assert res.value == v_direct


def test_fibonacci_limits_vanish(automata, pisots, perron_data):
    a, p, pd = automata["fibonacci"], pisots["fibonacci"], perron_data["fibonacci"]
    scan = rajchman_scan(a, p, pd, height=2, tol=1e-8)
    assert scan.max_abs < 1e-6


def test_fig3_limit_nonzero_and_stable(automata, pisots, perron_data):
    a, p, pd = automata["fig3"], pisots["fig3"], perron_data["fig3"]
    res = psi_hat(a, p, pd, (1, 0), 1e-8)
    res2 = psi_hat(a, p, pd, (1, 0), 1e-8,
                   head_terms=2 * res.head_terms, tail_terms=2 * res.tail_terms)
    assert abs(res.value - res2.value) < 1e-6
    assert abs(res.value) > 1e-3  # nonvanishing limit: singularity evidence
    # frozen from the oracle run (direct high-precision transform along
    # golden powers converges to the same value from both parities)
    assert abs(res.value - (0.0025185487 - 0.0007575007j)) < 1e-8


def test_erdos_full_shift_nonvanishing(golden):
    a = parse_automaton(
        {"alphabet": [0, 1], "states": ["s"],
         "edges": [{"from": "s", "to": "s", "label": 0},
                   {"from": "s", "to": "s", "label": 1}]}
    )
    pd = perron(a)
    scan = rajchman_scan(a, golden, pd, height=1, tol=1e-9)
    assert scan.max_abs > 5e-3  # far above the singularity threshold 1e-4
    # frozen from the oracle run; the infinite cosine-product value
    assert abs(scan.max_abs - 0.0066134930) < 1e-8


def test_scan_symmetry_canonical_half(automata, pisots, perron_data):
    a, p, pd = automata["fibonacci"], pisots["fibonacci"], perron_data["fibonacci"]
    scan = rajchman_scan(a, p, pd, height=1)
    coords = [e.z_coords for e in scan.entries]
    assert all(next(c for c in z if c) > 0 for z in coords)
    assert coords == sorted(coords)


def test_scan_jobs_deterministic(automata, pisots, perron_data):
    a, p, pd = automata["fig3"], pisots["fig3"], perron_data["fig3"]
    serial = rajchman_scan(a, p, pd, height=1, tol=1e-8, jobs=1)
    threaded = rajchman_scan(a, p, pd, height=1, tol=1e-8, jobs=4)
    assert serial == threaded


def test_consistency_limit_vs_large_argument(automata, pisots, perron_data):
    # psi_hat(z) agrees with the transform evaluated directly at z*beta^25,
    # all factor arguments reduced through exact fractional parts
    from measure_lab.algebraic import BetaInt, bint_embed, frac_beta_power

    k = 25
    for name in ("fibonacci", "fig3", "example1-7edge"):
        a, p, pd = automata[name], pisots[name], perron_data[name]
        cache = build_weight_cache(a, pd)
        z = BetaInt((1, 0))
        row = cache.v_l.copy()
        for j in range(k - 1, -1, -1):
            row = cache.apply(row, frac_beta_power(z, j, p).value)
        z_val = float(bint_embed(z, 1, p).mid)
        for n in range(1, 60):
            row = cache.apply(row, z_val * p.beta_float**-n)
        direct = complex(row @ cache.v_r)
        res = psi_hat(a, p, pd, (1, 0), 1e-8)
        assert abs(res.value - direct) <= res.bound + 1e-6, name
