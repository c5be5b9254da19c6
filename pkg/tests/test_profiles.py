"""Hardware profile construction: hooks, delays, loss modes, star networks."""
import pytest

from qdba.des import LossRule
from qdba.profiles import (
    FIBER_SPEED_KM_S,
    LOST_BIT,
    LogicalProfile,
    PhotonicProfile,
    SuperconductingProfile,
    build_network,
    link_delay,
    noise_hooks_for,
)
from qdba.quantum import ParameterError, PauliParams


def test_lost_bit_is_zero():
    # a dark detector records 0; flipping this constant flips which order
    # tolerates loss, so it is pinned here
    assert LOST_BIT == 0


def test_logical_hooks_commander_side_clean():
    prof = LogicalProfile(pauli=PauliParams(0.9, 0.05, 0.03, 0.02))
    assert noise_hooks_for(prof, "commander") == ()
    hooks = noise_hooks_for(prof, "lieutenant")
    assert len(hooks) == 1 and hooks[0].kind == "pauli"
    with pytest.raises(ParameterError):
        noise_hooks_for(prof, "observer")
    assert link_delay(prof) == 0.0


def test_superconducting_defaults_and_validation():
    prof = SuperconductingProfile(t1_s=5e-5, transit_s=5e-7)
    assert prof.effective_t2_s == 5e-5  # T2 defaults to T1
    g1, g2 = prof.gammas()
    assert g1 == pytest.approx(0.009950166250831893, abs=0.0)
    assert g2 == pytest.approx(0.00498752080731768, abs=0.0)
    with pytest.raises(ParameterError):
        SuperconductingProfile(t1_s=0.0, transit_s=1e-9)
    with pytest.raises(ParameterError):
        SuperconductingProfile(t1_s=1.0, transit_s=-1e-9)
    with pytest.raises(ParameterError):
        SuperconductingProfile(t1_s=1.0, transit_s=0.0, t2_s=2.1)  # T1 >= T2/2
    with pytest.raises(ParameterError):
        SuperconductingProfile(t1_s=1.0, transit_s=0.0, gamma2_override=1.5)


def test_superconducting_hooks_on_both_sides():
    prof = SuperconductingProfile(t1_s=5e-5, transit_s=5e-7)
    for side in ("commander", "lieutenant"):
        kinds = [h.kind for h in noise_hooks_for(prof, side)]
        assert kinds == ["amplitude_damping", "dephasing"]
    assert link_delay(prof) == 5e-7


def test_gamma2_override_replaces_dephasing_weight():
    base = SuperconductingProfile(t1_s=5e-5, transit_s=5e-7)
    forced = SuperconductingProfile(t1_s=5e-5, transit_s=5e-7, gamma2_override=1.0)
    assert forced.gammas()[0] == base.gammas()[0]
    assert forced.gammas()[1] == 1.0
    off = SuperconductingProfile(t1_s=5e-5, transit_s=5e-7, gamma2_override=0.0)
    assert off.gammas()[1] == 0.0


def test_photonic_survival_and_delay():
    prof = PhotonicProfile(length_km=100.0)
    assert prof.alpha_db_per_km == 0.02
    assert prof.survival == pytest.approx(0.6309573444801932, abs=0.0)
    assert link_delay(prof) == 100.0 / FIBER_SPEED_KM_S
    with pytest.raises(ParameterError):
        PhotonicProfile(length_km=-1.0)
    with pytest.raises(ParameterError):
        PhotonicProfile(length_km=1.0, alpha_db_per_km=-0.1)


def test_build_network_star_shape():
    prof = LogicalProfile(pauli=PauliParams(1.0, 0.0, 0.0, 0.0))
    net = build_network(prof, 4)
    assert len(net.lieutenant_links) == 4
    assert net.commander_link.endpoints == ("distributor", "commander")
    assert net.lieutenant_links[2].endpoints == ("distributor", "lieutenant2")
    assert not net.heralded
    assert all(link.loss_mode == "none" for link in net.lieutenant_links)
    with pytest.raises(ParameterError):
        build_network(prof, 1)


def test_build_network_photonic_loss_modes():
    unheralded = build_network(PhotonicProfile(length_km=10.0), 2)
    assert unheralded.commander_link.loss_mode == "unheralded"
    assert not unheralded.heralded
    assert isinstance(unheralded.commander_link.hooks[0], LossRule)
    heralded = build_network(PhotonicProfile(length_km=10.0, heralded=True), 2)
    assert heralded.heralded
    assert heralded.lieutenant_links[0].loss_mode == "heralded"


def test_build_network_rejects_unfinishable_heralded_loss():
    # survival underflows to exactly 0 at absurd lengths; retrying forever
    # is the only behavior that config could produce, so it is refused
    doomed = PhotonicProfile(length_km=1e9, heralded=True)
    assert doomed.survival == 0.0
    with pytest.raises(ParameterError):
        build_network(doomed, 2)
