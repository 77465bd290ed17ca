"""Parity between the compiled kernel backend and the numpy fallback.

Converged endpoints are compared as root sets after the divisor guard,
because seeds landing on a positive-dimensional solution set may stop at
different nearby points under the two linear solvers.
"""

import numpy as np
import pytest

from mnov import SolverConfig, parse_rational
from mnov._kernels import fallback
from mnov.milnor import systems
from mnov.milnor.ops import _dedup_solutions

try:
    from mnov._kernels import native
except ImportError:
    native = None

needs_native = pytest.mark.skipif(
    native is None, reason="compiled backend not built"
)

GUARD = 1e-10


def dedup4(x, res, conv, dist=1e-6):
    """Dedup 4-column solutions by padding the multiplier column."""
    sols = np.column_stack([x[conv], np.zeros(int(conv.sum()))])
    return [row[:4] for row, _ in _dedup_solutions(sols, res[conv], dist)]


def guarded_roots(pack, x, res, conv, dist=1e-6):
    """Deduplicated converged endpoints away from the divisor."""
    sols = x[conv]
    sols_res = res[conv]
    if len(sols):
        z = sols[:, 0] + 1j * sols[:, 1]
        w = sols[:, 2] + 1j * sols[:, 3]
        num, den = systems.eval_pair(pack, z, w)
        keep = (np.abs(num) > GUARD) & (np.abs(den) > GUARD)
        sols, sols_res = sols[keep], sols_res[keep]
    return [row for row, _ in _dedup_solutions(sols, sols_res, dist)]


def match_sets(a, b, tol):
    assert len(a) == len(b)
    used = set()
    for row in a:
        best, best_d = None, np.inf
        for k, other in enumerate(b):
            if k in used:
                continue
            d = np.linalg.norm(np.asarray(row)[:4] - np.asarray(other)[:4])
            if d < best_d:
                best, best_d = k, d
        assert best_d < tol
        used.add(best)


@needs_native
def test_backend_is_native():
    from mnov import _kernels

    assert _kernels.BACKEND == "native"


@needs_native
@pytest.mark.parametrize("text,r", [
    ("4*w+3*(w^2+z^2)", 1.0),
    ("(2*z-1)/z", 1.0),
])
def test_dependence_root_sets_agree(text, r):
    pack = systems.build_pack(parse_rational(text))
    rng = np.random.default_rng(0)
    seeds = systems.dependence_seeds(rng, 64, r)
    roots_n = guarded_roots(
        pack, *native.newton_dependence(pack, r, seeds.copy(), 1e-12, 80)
    )
    roots_f = guarded_roots(
        pack, *fallback.newton_dependence(pack, r, seeds.copy(), 1e-12, 80)
    )
    assert len(roots_n) == 2
    match_sets(roots_n, roots_f, 1e-8)


@needs_native
def test_common_zero_roots_agree():
    pack = systems.build_pack(parse_rational("z*w/(4*z-1)"))
    rng = np.random.default_rng(1)
    seeds = systems.ball_seeds(rng, 48)
    xn, rn, cn = native.newton_common_zero(pack, seeds.copy(), 1e-12, 80)
    xf, rf, cf = fallback.newton_common_zero(pack, seeds.copy(), 1e-12, 80)
    roots_n = dedup4(xn, rn, cn)
    roots_f = dedup4(xf, rf, cf)
    assert len(roots_n) == 1
    assert np.allclose(roots_n[0], [0.25, 0.0, 0.0, 0.0], atol=1e-9)
    match_sets(roots_n, roots_f, 1e-8)


@needs_native
def test_tangency_roots_agree():
    pack = systems.build_pack(parse_rational("4*w+3*(w^2+z^2)"))
    rng = np.random.default_rng(2)
    seeds = systems.ball_seeds(rng, 48)
    xn, rn, cn = native.newton_tangency(pack, 0, seeds.copy(), 1e-12, 80)
    xf, rf, cf = fallback.newton_tangency(pack, 0, seeds.copy(), 1e-12, 80)
    roots_n = dedup4(xn, rn, cn)
    roots_f = dedup4(xf, rf, cf)
    match_sets(roots_n, roots_f, 1e-7)
    norms = sorted(float(np.linalg.norm(r)) for r in roots_n)
    assert any(abs(n - 4.0 / 3.0) < 1e-9 for n in norms)


@needs_native
def test_oracle_residual_agrees():
    for text in ("z*w/(4*z-1)", "(z^2+w^2)/(z^2-w^2)"):
        pack = systems.build_pack(parse_rational(text))
        rng = np.random.default_rng(3)
        pts = systems.sphere_seeds(rng, 512, 1.0)
        z = pts[:, 0] + 1j * pts[:, 1]
        w = pts[:, 2] + 1j * pts[:, 3]
        rho_n = native.oracle_residual(pack, z, w, GUARD)
        rho_f = fallback.oracle_residual(pack, z, w, GUARD)
        assert np.abs(rho_n - rho_f).max() < 1e-12


@needs_native
def test_eval_slot_agrees():
    F = parse_rational("(1+2*i)*z^3*w/(z-w+0.5)")
    pack = systems.build_pack(F)
    rng = np.random.default_rng(4)
    z = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    w = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    for slot in range(12):
        vn = native.eval_slot(*pack, slot, z, w)
        vf = fallback.eval_slot(*pack, slot, z, w)
        assert np.allclose(vn, vf, atol=1e-12, rtol=1e-12)


def test_fallback_empty_batch():
    pack = systems.build_pack(parse_rational("z*w/(4*z-1)"))
    x0 = np.zeros((0, 5))
    x, res, conv = fallback.newton_dependence(pack, 1.0, x0, 1e-12, 10)
    assert x.shape == (0, 5) and res.shape == (0,) and conv.shape == (0,)


def test_fallback_exact_root_freezes():
    pack = systems.build_pack(parse_rational("z*w/(4*z-1)"))
    root = np.array([[0.25, 0.0, 0.0, 0.0]])
    x, res, conv = fallback.newton_common_zero(pack, root, 1e-12, 20)
    assert conv[0]
    assert np.array_equal(x[0], root[0])
    assert res[0] < 1e-12
