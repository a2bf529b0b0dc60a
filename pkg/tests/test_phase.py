import numpy as np
import pytest

from dmpkit import PhaseConfig, ValidationError, final_phase, phase_at


def test_starts_at_one():
    assert phase_at(0.0, PhaseConfig(alpha=3.7)) == 1.0


def test_printed_constants():
    # exp(-2 pi) and exp(-4 pi), quoted to two significant figures.
    assert phase_at(np.pi, PhaseConfig(alpha=2.0)) == pytest.approx(1.9e-3, rel=0.02)
    assert phase_at(np.pi, PhaseConfig(alpha=4.0)) == pytest.approx(3.5e-6, rel=0.02)


def test_monotone_decreasing():
    cfg = PhaseConfig(alpha=4.0)
    t = np.linspace(0.0, 5.0, 200)
    s = phase_at(t, cfg)
    assert np.all(np.diff(s) < 0.0)
    assert np.all((s > 0.0) & (s <= 1.0))


def test_semigroup_property():
    cfg = PhaseConfig(alpha=2.5, tau=1.0)
    rng = np.random.default_rng(7)
    for _ in range(50):
        t1, t2 = rng.uniform(0.0, 4.0, 2)
        lhs = phase_at(t1 + t2, cfg)
        rhs = phase_at(t1, cfg) * phase_at(t2, cfg)
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_tau_stretches_time():
    slow = PhaseConfig(alpha=4.0, tau=2.0)
    unit = PhaseConfig(alpha=4.0, tau=1.0)
    assert phase_at(3.0, slow) == pytest.approx(phase_at(1.5, unit), rel=1e-15)


def test_final_phase_matches():
    cfg = PhaseConfig(alpha=4.0, tau=1.0, horizon=2.0)
    assert final_phase(cfg) == pytest.approx(phase_at(2.0, cfg), rel=1e-15)


def test_rejects_bad_config():
    with pytest.raises(ValidationError):
        PhaseConfig(alpha=0.0)
    with pytest.raises(ValidationError):
        PhaseConfig(alpha=1.0, tau=-1.0)
    with pytest.raises(ValidationError):
        PhaseConfig(alpha=1.0, horizon=0.0)
    with pytest.raises(ValidationError):
        phase_at(-0.1, PhaseConfig(alpha=1.0))
