"""Top-level behavioral guarantees, one test per guarantee.

Each test prints a single PASS line (visible under `pytest -s`); under
plain `pytest -v` the per-test PASSED/FAILED lines serve the same purpose.
Statistical claims use fixed seeds and two-standard-error margins, so every
verdict here is reproducible bit-for-bit.

The battery is sized for a desk machine: the heaviest test (noiseless
completeness at eleven players) runs in a few minutes on one core.
"""
import json
import math
import time

import numpy as np
import pytest

from qdba.des import RngStream
from qdba.experiments import run_ensemble
from qdba.experiments.cli import main
from qdba.experiments.config import SweepConfig, ternary_grid
from qdba.profiles import LogicalProfile, build_network
from qdba.protocol import Decision, ShotSpec, run_shot
from qdba.quantum import (
    PSI_PLUS,
    PauliParams,
    amplitude_damping,
    apply_channel,
    dephasing,
    pauli_channel,
    sample_index,
    z_probabilities,
)

SEED = 20240811


def rate_se(rate: float, samples: int) -> float:
    return math.sqrt(max(rate * (1.0 - rate), 0.0) / samples)


def loyal_samples(row) -> int:
    return row.shots * (row.n - 1 - row.t)


def logical_config(pauli, **kw) -> SweepConfig:
    base = dict(
        profile_kind="logical",
        n=(3,),
        t=(1,),
        m=(112,),
        runs=10,
        shots=30,
        seed=SEED,
        pauli=tuple(pauli),
    )
    base.update(kw)
    return SweepConfig(**base)


NOISELESS = (PauliParams(1.0, 0.0, 0.0, 0.0),)


@pytest.fixture(scope="session")
def ternary_rows():
    """The 105-point Pauli simplex sweep at p0=0.975, N=3, T=1, M=112,
    300 shots per point; shared by the validity and landscape tests."""
    config = logical_config(ternary_grid(0.025, 13))
    rows, _ = run_ensemble(config)
    assert len(rows) == 105
    return rows


def test_noiseless_completeness_eleven_players():
    started = time.monotonic()
    config = logical_config(NOISELESS, n=(11,), t=tuple(range(11)))
    rows, _ = run_ensemble(config)
    assert len(rows) == 11
    for row in rows:
        assert row.lieutenant_error_rate == 0.0, f"errors at t={row.t}"
        assert row.shots == 300
    elapsed = time.monotonic() - started
    assert elapsed < 600.0
    print(
        f"\nACCEPTANCE noiseless-completeness: PASS "
        f"(11 traitor counts x 300 shots, zero errors, {elapsed:.0f}s)"
    )


def test_z_noise_has_no_effect():
    z_only = (PauliParams(0.975, 0.0, 0.0, 0.025),)
    for n, t in ((3, 1), (6, 2), (11, 4)):
        config = logical_config(z_only, n=(n,), t=(t,))
        [row] = run_ensemble(config)[0]
        assert row.lieutenant_error_rate == 0.0, f"errors at n={n}"
        assert row.abort_rate == 0.0 and row.wrong_value_rate == 0.0
    print("\nACCEPTANCE z-noise-invariance: PASS (N in {3,6,11}, zero errors)")


def test_noise_never_flips_a_value(ternary_rows):
    worst = max(row.wrong_value_rate for row in ternary_rows)
    assert worst == 0.0
    print(
        "\nACCEPTANCE noise-never-flips-values: PASS "
        "(105 mixtures x 300 shots, zero wrong-value decisions)"
    )


def test_error_landscape_shape(ternary_rows):
    by_mix = {
        (round(r.px, 9), round(r.py, 9), round(r.pz, 9)): r for r in ternary_rows
    }
    z_vertex = by_mix[(0.0, 0.0, 0.025)]
    z_rate = z_vertex.lieutenant_error_rate
    assert all(z_rate <= r.lieutenant_error_rate for r in ternary_rows)
    xy_edge = [r for r in ternary_rows if round(r.pz, 9) == 0.0]
    assert len(xy_edge) == 14
    xy_mean = sum(r.lieutenant_error_rate for r in xy_edge) / len(xy_edge)
    se_sq = sum(
        rate_se(r.lieutenant_error_rate, loyal_samples(r)) ** 2 for r in xy_edge
    ) / len(xy_edge) ** 2
    combined = math.sqrt(se_sq + rate_se(z_rate, loyal_samples(z_vertex)) ** 2)
    assert xy_mean - z_rate >= 5.0 * combined
    print(
        f"\nACCEPTANCE error-landscape-shape: PASS "
        f"(Z vertex {z_rate:.3f} is the minimum; XY edge mean {xy_mean:.3f}, "
        f"separation {(xy_mean - z_rate) / combined:.0f} standard errors)"
    )


def test_more_pairs_mean_fewer_aborts():
    config = logical_config(NOISELESS, n=(11,), t=(5,), m=(16, 48, 112, 160))
    rows, _ = run_ensemble(config)
    assert [r.m for r in rows] == [16, 48, 112, 160]
    for lo, hi in zip(rows, rows[1:]):
        margin = 2.0 * math.sqrt(
            rate_se(lo.abort_rate, loyal_samples(lo)) ** 2
            + rate_se(hi.abort_rate, loyal_samples(hi)) ** 2
        )
        assert hi.abort_rate <= lo.abort_rate + margin
    print(
        "\nACCEPTANCE more-pairs-fewer-aborts: PASS (abort rates "
        + " -> ".join(f"{r.abort_rate:.3f}" for r in rows)
        + ")"
    )


def test_pure_dephasing_rate_invariance():
    # identical half-life, transit sweep over six decades; the only difference
    # between the arms is the pure-dephasing weight forced to 1 versus 0
    common = dict(
        profile_kind="superconducting",
        n=(3,),
        t=(1,),
        m=(112,),
        runs=10,
        shots=30,
        seed=SEED,
        t1_s=(5e-5,),
        transit_s=(5e-11, 5e-9, 5e-7, 5e-5),
    )
    full, _ = run_ensemble(SweepConfig(gamma2=(1.0,), **common))
    none, _ = run_ensemble(SweepConfig(gamma2=(0.0,), **common))
    assert len(full) == len(none) == 4
    for a, b in zip(full, none):
        margin = 2.0 * math.sqrt(
            rate_se(a.lieutenant_error_rate, loyal_samples(a)) ** 2
            + rate_se(b.lieutenant_error_rate, loyal_samples(b)) ** 2
        )
        assert abs(a.lieutenant_error_rate - b.lieutenant_error_rate) <= margin
        # structurally the arms share every measured bit, so the estimates
        # are not merely close but equal
        assert a.lieutenant_error_rate == b.lieutenant_error_rate
    # exact population preservation by the pure-dephasing channel
    state = apply_channel(PSI_PLUS, amplitude_damping(0.3), 1)
    for gamma in (0.0, 0.37, 1.0):
        dephased = apply_channel(state, dephasing(gamma), 1)
        assert np.array_equal(dephased.matrix.diagonal(), state.matrix.diagonal())
    print(
        "\nACCEPTANCE dephasing-invariance: PASS (4 transits, both arms equal; "
        "populations preserved exactly)"
    )


def test_photonic_loss_degrades_monotonically():
    config = SweepConfig(
        profile_kind="photonic",
        n=(5,),
        t=(0,),
        m=(112,),
        runs=10,
        shots=30,
        seed=SEED,
        alpha_db_per_km=(0.02,),
        length_km=(0.0001, 1.0, 10.0, 100.0),
    )
    rows, _ = run_ensemble(config)
    assert [r.length_km for r in rows] == [0.0001, 1.0, 10.0, 100.0]
    assert rows[0].lieutenant_error_rate < 0.02
    for lo, hi in zip(rows, rows[1:]):
        margin = 2.0 * math.sqrt(
            rate_se(lo.lieutenant_error_rate, loyal_samples(lo)) ** 2
            + rate_se(hi.lieutenant_error_rate, loyal_samples(hi)) ** 2
        )
        assert hi.lieutenant_error_rate >= lo.lieutenant_error_rate - margin
    print(
        "\nACCEPTANCE loss-degradation: PASS (error rates "
        + " -> ".join(f"{r.lieutenant_error_rate:.3f}" for r in rows)
        + " over 0.0001..100 km)"
    )


def test_sampling_matches_exact_distributions():
    """Sampled joint measurement frequencies against an independently
    computed Kraus-sum diagonal, four standard deviations per outcome."""
    eye = np.eye(2)
    channels = [pauli_channel(p) for p in ternary_grid(0.025, 13)]
    channels += [amplitude_damping(g) for g in (0.0, 0.25, 0.5, 1.0)]
    channels += [dephasing(g) for g in (0.0, 0.5, 1.0)]
    draws = 10_000
    for index, channel in enumerate(channels):
        expected = np.zeros((4, 4), dtype=complex)
        for k in channel.operators:
            lifted = np.kron(eye, k)
            expected += lifted @ PSI_PLUS.matrix @ lifted.conj().T
        probs_oracle = expected.diagonal().real

        state = apply_channel(PSI_PLUS, channel, 1)
        probs = z_probabilities(state)
        gen = RngStream(SEED, (90, index)).generator
        uniforms = gen.random(draws)
        counts = np.bincount(
            [sample_index(probs, u) for u in uniforms], minlength=4
        )
        for outcome in range(4):
            p = probs_oracle[outcome]
            sigma = math.sqrt(draws * p * (1.0 - p))
            if sigma == 0.0:
                assert counts[outcome] == round(draws * p)
            else:
                assert abs(counts[outcome] - draws * p) <= 4.0 * sigma
    print(
        f"\nACCEPTANCE sampling-oracle-equivalence: PASS "
        f"({len(channels)} channels x {draws} draws within 4 sigma)"
    )


def test_worker_count_determinism(tmp_path):
    config = tmp_path / "exp.cfg"
    config.write_text(
        "profile = logical\nn = 3,4\nt = 0,1\nm = 16\n"
        "p0 = 0.9\npx = 0.05\npz = 0.05\n"
        "runs = 3\nshots = 10\nseed = 77\n"
    )
    outs = []
    for workers in (1, 4):
        out = tmp_path / f"w{workers}"
        code = main(
            ["run", "--config", str(config), "--out", str(out), "--workers", str(workers)]
        )
        assert code == 0
        outs.append(out)
    a, b = outs
    assert (a / "metrics.csv").read_bytes() == (b / "metrics.csv").read_bytes()
    manifest = json.loads((a / "manifest.json").read_text())
    assert manifest["seed"] == 77
    print("\nACCEPTANCE worker-determinism: PASS (1 vs 4 workers byte-identical)")


def test_split_orders_always_detected():
    spec = ShotSpec(n=3, m=112, t=0, commander_loyal=False)
    network = build_network(LogicalProfile(pauli=PauliParams(1.0, 0.0, 0.0, 0.0)), 2)
    differing = exceptions = 0
    for shot in range(300):
        out = run_shot(spec, network, RngStream(SEED, (0, shot)))
        if out.orders_sent[0] != out.orders_sent[1]:
            differing += 1
            if any(rec.decision != Decision.ABORT for rec in out.records):
                exceptions += 1
    assert differing > 100
    assert exceptions == 0
    print(
        f"\nACCEPTANCE split-orders-detected: PASS "
        f"({differing} differing-order shots of 300, all aborted)"
    )
