"""Shared random generators and property suites.

Each run_*_suite function executes the requested number of randomized
cases under a fixed seed and raises AssertionError on the first violation.
The suites are imported individually by test_properties and together by
the timed budget test, so they must stay cheap enough to run twice.
"""

from __future__ import annotations

import numpy as np

from mnov import (
    MorseModel,
    Poly2,
    RationalMap,
    SolverConfig,
    cut,
    mn_upper,
    msum,
    page_chis,
    parse_rational,
    primitive,
    self_index,
    splice,
    twist0,
    twist_arbitrary,
)
from mnov.errors import PoleError
from mnov.milnor.ops import (
    _critical_points_core,
    critical_radii_ex,
    divisor_min_norm_ex,
)
from mnov.render import render_json


def random_poly(rng, max_terms=4, max_exp=3, nonzero=True):
    """Random sparse polynomial with coefficients in the unit box times 2."""
    terms = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        key = (int(rng.integers(0, max_exp + 1)), int(rng.integers(0, max_exp + 1)))
        coeff = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        terms[key] = terms.get(key, 0.0) + coeff
    poly = Poly2(terms)
    if nonzero and poly.is_zero():
        return Poly2({(1, 0): 1.0})
    return poly


def random_rational(rng):
    """Random rational map; half the draws have a non-constant denominator."""
    num = random_poly(rng)
    if num.is_constant():
        num = num + Poly2.variable("z")
    if rng.random() < 0.5:
        return RationalMap(num)
    den = random_poly(rng, max_terms=3, max_exp=2)
    if den.is_zero():
        den = Poly2.constant(1.0)
    return RationalMap(num, den)


def random_model(rng, max_ops=5):
    """Random Morse-map model built from a primitive and a short op chain."""
    roll = rng.integers(0, 5)
    if roll == 0:
        model = primitive("o")
    elif roll == 1:
        model = primitive("u")
    elif roll == 2:
        model = primitive("hopf", 1 if rng.random() < 0.5 else -1)
    elif roll == 3:
        model = primitive("torus", int(rng.integers(1, 4)), int(rng.integers(1, 4)))
    else:
        model = primitive("annulus", int(rng.integers(2, 5)))
    for _ in range(int(rng.integers(0, max_ops + 1))):
        op = rng.integers(0, 6)
        if op == 0:
            other = primitive("hopf", 1 if rng.random() < 0.5 else -1)
            model = msum(model, other, int(rng.integers(1, 4)))
        elif op == 1:
            model = cut(model)
        elif op == 2:
            model = twist0(model, int(rng.integers(1, 4)))
        elif op == 3:
            model = twist_arbitrary(model, int(rng.integers(1, 4)))
        elif op == 4:
            model = splice(model, int(rng.integers(1, 3)), int(rng.integers(-2, 3)))
        else:
            model = self_index(model)
    return model


def _fd_grad(F, z, w, h=1e-6):
    """Central finite-difference holomorphic gradient of F at (z, w)."""
    dz = (F.eval(z + h, w) - F.eval(z - h, w)) / (2 * h)
    dw = (F.eval(z, w + h) - F.eval(z, w - h)) / (2 * h)
    return dz, dw


def run_wirtinger_fd_suite(cases=220, seed=101):
    """Analytic gradients match central finite differences pointwise."""
    rng = np.random.default_rng(seed)
    done = 0
    while done < cases:
        F = random_rational(rng)
        z = complex(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2))
        w = complex(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2))
        den_scale = max(1.0, F.den.max_coeff_magnitude())
        if abs(F.den.eval(z, w)) < 0.2 * den_scale:
            continue
        gz, gw = F.wirtinger_grad(z, w)
        fz, fw = _fd_grad(F, z, w)
        iz = (F.eval(z + 1e-6j, w) - F.eval(z - 1e-6j, w)) / 2e-6j
        assert abs(gz - fz) <= 1e-6 * max(1.0, abs(gz))
        assert abs(gw - fw) <= 1e-6 * max(1.0, abs(gw))
        assert abs(gz - iz) <= 1e-6 * max(1.0, abs(gz))
        done += 1
    return done


def run_critical_point_invariant_suite(cases=200, seed=202):
    """Every emitted critical point is on-sphere, converged, and classified."""
    rng = np.random.default_rng(seed)
    done = 0
    attempt = 0
    while done < cases:
        attempt += 1
        F = random_rational(rng)
        g1 = F.num.dz() * F.den - F.num * F.den.dz()
        g2 = F.num.dw() * F.den - F.num * F.den.dw()
        if g1.is_zero() and g2.is_zero():
            continue
        r = float(rng.uniform(0.6, 1.6))
        cfg = SolverConfig(seed_count=24, max_newton_iters=50, rng_seed=attempt)
        try:
            points, _ = _critical_points_core(F, r, cfg)
        except PoleError:
            continue
        done += 1
        for p in points:
            norm = (abs(p.z) ** 2 + abs(p.w) ** 2) ** 0.5
            assert abs(norm - r) < 1e-8 * max(1.0, r)
            assert p.residual < 1e-8
            assert abs(complex(F.num.eval(p.z, p.w))) > 1e-10
            assert abs(complex(F.den.eval(p.z, p.w))) > 1e-10
            assert 0.0 <= p.theta < 2 * np.pi
            assert np.isfinite(p.multiplier_t)
            assert len(p.hessian_eigenvalues) == 3
            assert p.degenerate == (p.index is None)
            if not p.degenerate:
                assert p.index in (0, 1, 2, 3)
    return done


def run_word_balance_suite(cases=220, seed=303):
    """Random op chains keep words balanced and close the chi walk."""
    rng = np.random.default_rng(seed)
    for _ in range(cases):
        model = random_model(rng)
        word = model.word
        assert sum(word) == 0
        assert word.count(1) == word.count(-1) == len(word) // 2
        chi = model.chi_ref
        seen = []
        for letter in word:
            chi += 2 * letter
            seen.append(chi)
        assert chi == model.chi_ref
        if word:
            assert tuple(sorted(seen)) == tuple(sorted(page_chis(model)))
        assert mn_upper(model) == len(word)
    return cases


def run_msum_additivity_suite(cases=220, seed=404):
    """Gluing two models adds their critical-point counts exactly."""
    rng = np.random.default_rng(seed)
    for _ in range(cases):
        a = random_model(rng, max_ops=3)
        b = random_model(rng, max_ops=3)
        n = int(rng.integers(1, 5))
        glued = msum(a, b, n)
        assert mn_upper(glued) == mn_upper(a) + mn_upper(b)
        assert glued.chi_ref == a.chi_ref + b.chi_ref - 1
    return cases


def run_twist_splice_invariance_suite(cases=220, seed=505):
    """Twisting along a framing-0 circle and splicing keep the word fixed."""
    rng = np.random.default_rng(seed)
    for _ in range(cases):
        model = random_model(rng, max_ops=3)
        n = int(rng.integers(1, 5))
        twisted = twist0(model, n)
        assert twisted.word == model.word
        assert twisted.chi_ref == model.chi_ref
        strings = int(rng.integers(1, 4))
        spliced = splice(model, strings, int(rng.integers(-3, 4)))
        assert spliced.word == model.word
        assert spliced.chi_ref == model.chi_ref - strings
        if model.boundary_components is None:
            assert spliced.boundary_components is None
        else:
            assert spliced.boundary_components == model.boundary_components + 2
    return cases


def run_cut_letter_suite(cases=220, seed=606):
    """Cutting adds exactly one index-1 and one index-2 letter."""
    rng = np.random.default_rng(seed)
    for _ in range(cases):
        model = random_model(rng, max_ops=3)
        after = cut(model)
        assert len(after.word) == len(model.word) + 2
        assert after.word.count(-1) == model.word.count(-1) + 1
        assert after.word.count(1) == model.word.count(1) + 1
        arb = twist_arbitrary(model, int(rng.integers(1, 4)))
        assert arb.word.count(-1) == model.word.count(-1) + 1
        assert arb.word.count(1) == model.word.count(1) + 1
    return cases


_DETERMINISM_POOL = (
    "z*w/(4*z-1)",
    "4*w+3*(w^2+z^2)",
    "2*z^2-z",
    "(2*z-1)/z",
    "z^2+w^3",
    "z^2-w^2+0.5",
    "(z^2+w^2)/(z^2-w^2)",
    "z+2*w",
)


def run_determinism_suite(cases=200, seed=707):
    """Re-running a search with the same rng seed reproduces it byte for byte."""
    rng = np.random.default_rng(seed)
    for k in range(cases):
        text = _DETERMINISM_POOL[k % len(_DETERMINISM_POOL)]
        cfg = SolverConfig(
            seed_count=16,
            max_newton_iters=40,
            rng_seed=int(rng.integers(0, 1000)),
        )
        op = k % 3
        if op == 0:
            first = divisor_min_norm_ex(parse_rational(text), cfg, True)
            second = divisor_min_norm_ex(parse_rational(text), cfg, True)
        elif op == 1:
            first = critical_radii_ex(parse_rational(text), cfg, True)
            second = critical_radii_ex(parse_rational(text), cfg, True)
        else:
            r = 0.9 + 0.1 * (k % 2)
            first = [
                p.to_dict()
                for p in _critical_points_core(parse_rational(text), r, cfg)[0]
            ]
            second = [
                p.to_dict()
                for p in _critical_points_core(parse_rational(text), r, cfg)[0]
            ]
        assert render_json(first) == render_json(second)
    return cases


ALL_SUITES = (
    run_wirtinger_fd_suite,
    run_critical_point_invariant_suite,
    run_word_balance_suite,
    run_msum_additivity_suite,
    run_twist_splice_invariance_suite,
    run_cut_letter_suite,
    run_determinism_suite,
)
