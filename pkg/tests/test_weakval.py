"""Weak values, reports, and the Gaussian pointer readout."""

import json
import math

import numpy as np
import pytest

import cheshire as ch
from cheshire.errors import AnomalousSelectionError, InputError
from conftest import dense_observable, dense_weak_value, random_ket

C1 = ch.BasisConvention(1)
C2 = ch.BasisConvention(2)

SQ2 = math.sqrt(2)
SQ3 = math.sqrt(3)


def single_pair():
    pre = ch.make_ket(C1, {0: 1j / SQ2, 2: 1 / SQ2})
    post = ch.make_ket(C1, {0: 1 / SQ2, 3: 1 / SQ2})
    return ch.pair_from_states(pre, post)


def two_cat_pair():
    pre = ch.make_ket(C2, {4: 1 / SQ2, 8: 1 / SQ2})
    post = ch.make_ket(C2, {4: -1j / SQ3, 9: 1 / SQ3, 10: 1 / SQ3})
    return ch.pair_from_states(pre, post)


# ---------------------------------------------------------------------------
# weak values against raw-built states


def test_single_cat_deltas():
    """Path localizes in L while the polarization property localizes in R."""
    pair = single_pair()
    values = {
        (kind, arm): ch.weak_value(ch.observable_for(C1, kind, 1, arm), pair)
        for kind in ("path", "grin")
        for arm in ("L", "R")
    }
    assert values[("path", "L")] == pytest.approx(1.0, abs=1e-12)
    assert values[("path", "R")] == pytest.approx(0.0, abs=1e-12)
    assert values[("grin", "L")] == pytest.approx(0.0, abs=1e-12)
    assert values[("grin", "R")] == pytest.approx(1.0, abs=1e-12)


def test_two_cat_deltas():
    pair = two_cat_pair()
    report = ch.weak_value_report(pair)
    expected = {
        ("path", 1, "L"): 1, ("path", 1, "R"): 0,
        ("grin", 1, "L"): 0, ("grin", 1, "R"): 1,
        ("path", 2, "L"): 0, ("path", 2, "R"): 1,
        ("grin", 2, "L"): 1, ("grin", 2, "R"): 0,
    }
    for key, want in expected.items():
        assert report.entries[key] == pytest.approx(want, abs=1e-12), key
    assert report.overlap == pytest.approx(1j / math.sqrt(6))


def test_weak_value_matches_dense_oracle():
    rng = np.random.default_rng(21)
    for _ in range(100):
        pre = random_ket(rng, 2)
        post = random_ket(rng, 2)
        pair = ch.pair_from_states(pre, post)
        kind = ("path", "grin")[int(rng.integers(2))]
        photon = int(rng.integers(1, 3))
        arm = "LR"[int(rng.integers(2))]
        got = ch.weak_value(ch.observable_for(C2, kind, photon, arm), pair)
        want = dense_weak_value(dense_observable(2, kind, photon, arm), pre, post)
        assert got == pytest.approx(want, abs=1e-10)


def test_scale_invariance():
    """Rescaling either state by any nonzero complex factor leaves weak values fixed."""
    rng = np.random.default_rng(22)
    obs = ch.grin_observable(C2, 2, "L")
    for _ in range(100):
        pre = random_ket(rng, 2)
        post = random_ket(rng, 2)
        base = ch.weak_value(obs, ch.pair_from_states(pre, post))
        a = complex(rng.standard_normal() + 1j * rng.standard_normal()) or 1.0
        b = complex(rng.standard_normal() + 1j * rng.standard_normal()) or 1.0
        scaled = ch.weak_value(
            obs,
            ch.pair_from_states(
                ch.superpose([(a, pre)]), ch.superpose([(b, post)])
            ),
        )
        assert scaled == pytest.approx(base, abs=1e-9)


def test_linearity_in_observable():
    rng = np.random.default_rng(23)
    o1 = ch.path_projector(C2, 1, "L")
    o2 = ch.grin_observable(C2, 2, "R")
    for _ in range(100):
        pair = ch.pair_from_states(random_ket(rng, 2), random_ket(rng, 2))
        a = complex(rng.standard_normal() + 1j * rng.standard_normal())
        b = complex(rng.standard_normal() + 1j * rng.standard_normal())
        combo = ch.op_add(ch.op_scale(a, o1), ch.op_scale(b, o2))
        left = ch.weak_value(combo, pair)
        right = a * ch.weak_value(o1, pair) + b * ch.weak_value(o2, pair)
        assert left == pytest.approx(right, abs=1e-9)


def test_arm_sum_rule():
    """Pi_L + Pi_R = identity forces the arm weak values to sum to 1."""
    rng = np.random.default_rng(24)
    for _ in range(100):
        pair = ch.pair_from_states(random_ket(rng, 2), random_ket(rng, 2))
        photon = int(rng.integers(1, 3))
        total = ch.weak_value(ch.path_projector(C2, photon, "L"), pair) + ch.weak_value(
            ch.path_projector(C2, photon, "R"), pair
        )
        assert total == pytest.approx(1.0, abs=1e-9)


def test_grin_arms_sum_to_full_sigma():
    rng = np.random.default_rng(25)
    for _ in range(50):
        pair = ch.pair_from_states(random_ket(rng, 2), random_ket(rng, 2))
        photon = int(rng.integers(1, 3))
        total = ch.weak_value(ch.grin_observable(C2, photon, "L"), pair) + ch.weak_value(
            ch.grin_observable(C2, photon, "R"), pair
        )
        full = ch.weak_value(ch.circular_sigma_z(C2, photon), pair)
        assert total == pytest.approx(full, abs=1e-9)


def test_orthogonal_selection_rejected():
    """Weak values are undefined at orthogonality; the raw overlap is reported."""
    pair = ch.pair_from_states(ch.basis_ket(C1, "00"), ch.basis_ket(C1, "10"))
    with pytest.raises(AnomalousSelectionError) as err:
        ch.weak_value(ch.path_projector(C1, 1, "L"), pair)
    assert abs(err.value.overlap) < 1e-10
    with pytest.raises(AnomalousSelectionError):
        ch.weak_value_report(pair)


def test_eigenstate_weak_value_is_eigenvalue():
    pre = ch.basis_ket(C1, "00")  # in arm L
    post = ch.make_ket(C1, {0: 1 / SQ2, 2: 1 / SQ2})
    pair = ch.pair_from_states(pre, post)
    assert ch.weak_value(ch.path_projector(C1, 1, "L"), pair) == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# report rendering


def test_report_row_order():
    report = ch.weak_value_report(two_cat_pair())
    keys = list(report.entries)
    assert keys[:4] == [
        ("path", 1, "L"), ("path", 1, "R"), ("grin", 1, "L"), ("grin", 1, "R"),
    ]
    assert keys[4:] == [
        ("path", 2, "L"), ("path", 2, "R"), ("grin", 2, "L"), ("grin", 2, "R"),
    ]


def test_report_table_flags():
    table = ch.weak_value_report(two_cat_pair()).to_table()
    lines = table.splitlines()
    assert lines[0].split() == ["photon", "kind", "arm", "Re", "Im", "flag"]
    assert lines[1].endswith("=1")
    assert lines[2].endswith("=0")
    assert "overlap" in lines[-1]


def test_report_csv_shape():
    csv_text = ch.weak_value_report(two_cat_pair()).to_csv()
    lines = csv_text.strip().splitlines()
    assert lines[0] == "photon,kind,arm,re,im"
    assert len(lines) == 1 + 8 + 1  # header, entries, overlap


def test_report_json_parses():
    payload = json.loads(ch.weak_value_report(two_cat_pair()).to_json_text())
    assert payload["n_photons"] == 2
    assert len(payload["entries"]) == 8
    assert payload["overlap"]["im"] == pytest.approx(1 / math.sqrt(6))


def test_observable_descriptor_forms():
    assert ch.observable_from_descriptor(C2, "path:1:L").column(4) == {4: 1.0}
    assert ch.observable_from_descriptor(C1, "id").column(2) == {2: 1.0}
    sigma = ch.observable_from_descriptor(C1, "sigma:1")
    assert sigma.column(0) == {1: 1j}
    with pytest.raises(InputError):
        ch.observable_from_descriptor(C1, "path:1")
    with pytest.raises(InputError):
        ch.observable_from_descriptor(C1, "path:x:L")
    with pytest.raises(InputError):
        ch.observable_from_descriptor(C1, "spin:1:L")


# ---------------------------------------------------------------------------
# pointer readout


def test_pointer_config_validation():
    with pytest.raises(InputError):
        ch.PointerConfig(g=0.0)
    with pytest.raises(InputError):
        ch.PointerConfig(g=1e-2, sigma_p=-1.0)
    cfg = ch.PointerConfig(g=1e-2)
    assert cfg.sigma_x == pytest.approx(1.0)


def test_pointer_real_part_contract():
    """shift/g converges to Re<O>_w quadratically in g."""
    pair = two_cat_pair()
    obs = ch.grin_observable(C2, 1, "R")
    devs = []
    for g in (1e-2, 5e-3, 2.5e-3):
        mean_x, _ = ch.pointer_shift(obs, pair, ch.PointerConfig(g=g))
        devs.append(abs(mean_x / g - 1.0))
    assert devs[0] / devs[1] == pytest.approx(4.0, rel=5e-3)
    assert devs[1] / devs[2] == pytest.approx(4.0, rel=5e-3)


def test_pointer_imaginary_part_contract():
    """Momentum shift reads the imaginary part: pair engineered for w = (1+i)/2."""
    pre = ch.make_ket(C1, {0: 1 / SQ2, 2: 1 / SQ2})
    post = ch.make_ket(C1, {0: 1 / SQ2, 2: 1j / SQ2})
    pair = ch.pair_from_states(pre, post)
    obs = ch.path_projector(C1, 1, "L")
    w = ch.weak_value(obs, pair)
    assert w == pytest.approx((1 + 1j) / 2)
    cfg = ch.PointerConfig(g=1e-3)
    mean_x, mean_p = ch.pointer_shift(obs, pair, cfg)
    assert mean_x / cfg.g == pytest.approx(w.real, abs=1e-6)
    assert mean_p / (2 * cfg.g * cfg.sigma_p**2) == pytest.approx(w.imag, abs=1e-6)


def test_pointer_eigenstate_exact_shift():
    """Eigenvalue-1 input: the pointer translates by exactly g at any coupling."""
    pre = ch.basis_ket(C1, "00")
    post = ch.make_ket(C1, {0: 1 / SQ2, 2: 1 / SQ2})
    pair = ch.pair_from_states(pre, post)
    obs = ch.path_projector(C1, 1, "L")
    for g in (0.3, 1e-2):
        mean_x, mean_p = ch.pointer_shift(obs, pair, ch.PointerConfig(g=g))
        assert mean_x / g == pytest.approx(1.0, abs=1e-9)
        assert mean_p == pytest.approx(0.0, abs=1e-9)


def test_pointer_identity_observable():
    pair = two_cat_pair()
    obs = ch.identity_op(C2)
    mean_x, _ = ch.pointer_shift(obs, pair, ch.PointerConfig(g=1e-2))
    assert mean_x / 1e-2 == pytest.approx(1.0, abs=1e-10)


def test_pointer_rejects_vanishing_postselection():
    pre = ch.basis_ket(C1, "00")
    post = ch.basis_ket(C1, "01")  # orthogonal, and the coupling keeps it so
    pair = ch.pair_from_states(pre, post)
    obs = ch.path_projector(C1, 1, "R")  # annihilates the pre state
    with pytest.raises(AnomalousSelectionError):
        ch.pointer_shift(obs, pair, ch.PointerConfig(g=1e-3))
