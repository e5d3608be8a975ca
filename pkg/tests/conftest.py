import numpy as np
import pytest

from gangle import OptimizerConfig, SpaceConfig

P_VALUES = (1.0, 1.5, 2.0, 3.0)

# criterion id -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE = {}


def rand_vec(rng, dim, nonzero=False):
    """Gaussian vector; with ``nonzero`` every coordinate has |x_k| in [0.1, 2]."""
    if nonzero:
        return rng.choice((-1.0, 1.0), size=dim) * rng.uniform(0.1, 2.0, size=dim)
    return rng.standard_normal(dim)


def rand_basis(rng, count, dim, cfg, nonzero=False):
    """Random vectors whose every leading Gram determinant is well away from 0.

    Independence does not imply a nonzero Gram determinant under g (at p = 1
    two vectors with the same sign pattern already give Gamma = 0), so draws
    are repeated until every prefix is comfortably nonsingular.
    """
    from gangle import gram_context, lp_norm

    while True:
        vs = [rand_vec(rng, dim, nonzero) for _ in range(count)]
        ok = True
        for k in range(1, count + 1):
            ctx = gram_context(vs[:k], cfg)
            scale = np.prod([lp_norm(v, cfg) ** 2 for v in vs[:k]])
            if abs(ctx.gamma) <= 1e-4 * scale:
                ok = False
                break
        if ok:
            return vs


@pytest.fixture(params=P_VALUES, ids=lambda p: f"p={p:g}")
def cfg(request):
    return SpaceConfig(p=request.param)


@pytest.fixture
def opt():
    return OptimizerConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20181115)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in ACCEPTANCE:
        passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {key}: {detail}")
