import numpy as np
import pytest
import torch

import uidiff.ui_diffusion as ud
from uidiff.nnutil import count_changed_parameters, snapshot_parameters
from uidiff.rico import IngestConfig, build_training_set, generate_synthetic_dataset, read_manifest, scan_rico_root


@pytest.fixture(scope="module")
def small_manifest(tmp_path_factory):
    root = tmp_path_factory.mktemp("rico")
    generate_synthetic_dataset(root, n_portrait=8, seed=10)
    out = tmp_path_factory.mktemp("dataset")
    manifest_path, _ = build_training_set(scan_rico_root(root), IngestConfig(out_dir=out))
    return read_manifest(manifest_path)


def fresh_bundle(seed=0):
    return ud.fresh_toy_components(ud.UNetConfig(base=8), seed=seed)


def test_frozen_weights_conserved_and_control_changes(small_manifest):
    bundle = fresh_bundle()
    before_frozen = bundle.frozen_hashes()
    control_before = snapshot_parameters(bundle.control)
    losses = ud.finetune_control(
        small_manifest,
        bundle,
        ud.FinetuneConfig(epochs=5, batch_size=4, learning_rate=1e-4, seed=0, max_steps=10),
    )
    assert len(losses) == 10
    assert bundle.frozen_hashes() == before_frozen
    assert count_changed_parameters(control_before, bundle.control) >= 1


def test_zero_learning_rate_changes_nothing(small_manifest):
    bundle = fresh_bundle()
    frozen_before = bundle.frozen_hashes()
    control_before = snapshot_parameters(bundle.control)
    losses = ud.finetune_control(
        small_manifest,
        bundle,
        ud.FinetuneConfig(epochs=1, batch_size=4, learning_rate=0.0, seed=0, max_steps=4),
    )
    assert all(np.isfinite(losses))
    assert bundle.frozen_hashes() == frozen_before
    assert count_changed_parameters(control_before, bundle.control) == 0


def test_finetune_loss_log_deterministic(small_manifest):
    a = fresh_bundle()
    b = fresh_bundle()
    cfg = ud.FinetuneConfig(epochs=2, batch_size=4, learning_rate=1e-4, seed=3, max_steps=6)
    la = ud.finetune_control(small_manifest, a, cfg)
    lb = ud.finetune_control(small_manifest, b, cfg)
    assert la == lb


def test_empty_manifest_rejected():
    with pytest.raises(ValueError):
        ud.finetune_control([], fresh_bundle(), ud.FinetuneConfig())


def test_frozen_drift_detected(small_manifest, monkeypatch):
    bundle = fresh_bundle()

    original = ud.finetune.hash_parameters
    calls = {"n": 0}

    def tampering_hash(module):
        # Corrupt a frozen weight after the "before" hashes are taken.
        calls["n"] += 1
        if calls["n"] == 4:  # after 3 "before" hashes, first batch begins
            with torch.no_grad():
                bundle.denoiser.conv_out.weight[0, 0, 0, 0] += 1.0
        return original(module)

    monkeypatch.setattr(ud.finetune, "hash_parameters", tampering_hash)
    with pytest.raises(ud.FrozenDrift):
        ud.finetune_control(
            small_manifest,
            bundle,
            ud.FinetuneConfig(epochs=1, batch_size=4, learning_rate=1e-4, seed=0, max_steps=2),
        )
