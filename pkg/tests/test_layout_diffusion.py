import math

import numpy as np
import pytest
import torch

from uidiff.core import (
    BBox,
    CATEGORIES,
    Layout,
    LayoutElement,
    TOKENS_PER_SLOT,
    TokenizerConfig,
    tokenize_layout,
)
from uidiff.layout_diffusion import (
    ComponentCondition,
    ConditionTooLarge,
    DenoiserConfig,
    DiscreteSchedule,
    LayoutDenoiser,
    LayoutDiffusionTrainer,
    LayoutTrainConfig,
    UntrainedDenoiser,
    corrupt,
    load_layout_checkpoint,
    masked_cross_entropy,
    sample,
    save_layout_checkpoint,
)
from uidiff.rico import sample_synthetic_layout

CFG = TokenizerConfig()
SCHEDULE = DiscreteSchedule(timesteps=100)


def layout_with(n):
    elements = tuple(
        LayoutElement(CATEGORIES[i % 25], BBox(0.02, 0.02 + i * 0.045, 0.9, 0.04), i)
        for i in range(n)
    )
    return Layout(288, 512, elements)


def test_schedule_endpoints_and_monotonicity():
    assert SCHEDULE.mask_prob(0) == 0.0
    assert SCHEDULE.mask_prob(100) == 1.0
    probs = [SCHEDULE.mask_prob(t) for t in range(101)]
    assert all(b >= a for a, b in zip(probs, probs[1:]))


def test_corrupt_t0_is_identity():
    seq = tokenize_layout(layout_with(5), CFG)
    out = corrupt(seq, 0, SCHEDULE, np.random.default_rng(0))
    assert np.array_equal(out.tokens, seq.tokens)


def test_corrupt_tT_masks_all_non_pad():
    seq = tokenize_layout(layout_with(5), CFG)
    out = corrupt(seq, 100, SCHEDULE, np.random.default_rng(0))
    assert out.is_mask().sum() == 25  # 5 elements * 5 tokens
    assert (out.is_pad() == seq.is_pad()).all()


def test_corrupt_never_touches_pad():
    seq = tokenize_layout(layout_with(3), CFG)
    rng = np.random.default_rng(1)
    for t in (10, 50, 90):
        out = corrupt(seq, t, SCHEDULE, rng)
        assert (out.tokens[seq.is_pad()] == seq.tokens[seq.is_pad()]).all()


def test_corrupt_rejects_masked_input():
    seq = tokenize_layout(layout_with(2), CFG)
    once = corrupt(seq, 100, SCHEDULE, np.random.default_rng(0))
    with pytest.raises(ValueError):
        corrupt(once, 10, SCHEDULE, np.random.default_rng(0))


def test_corruption_marginals_match_schedule():
    # Monte Carlo against mask_prob(t) at t = T/2: 10,000 corruptions of a
    # 100-token (20 element) sequence, tolerance +/-0.02.
    seq = tokenize_layout(layout_with(20), CFG)
    rng = np.random.default_rng(42)
    t = 50
    masked = sum(corrupt(seq, t, SCHEDULE, rng).is_mask().sum() for _ in range(10_000))
    fraction = masked / (10_000 * 100)
    assert abs(fraction - SCHEDULE.mask_prob(t)) < 0.02


def mini_model(**kwargs):
    defaults = dict(
        tokenizer=CFG,
        config=DenoiserConfig(layers=2, width=32, heads=2, ffn_mult=2),
        seed=0,
    )
    defaults.update(kwargs)
    return LayoutDenoiser(**defaults)


def test_untrained_uniform_loss_near_log_vocab():
    # A head emitting all-zero logits gives exactly ln(C) per position.
    model = mini_model()
    for kind in range(TOKENS_PER_SLOT):
        torch.nn.init.zeros_(model.heads[kind].weight)
        torch.nn.init.zeros_(model.heads[kind].bias)
    seqs = [tokenize_layout(layout_with(20), CFG)]
    tokens = np.stack([s.tokens for s in seqs])
    t = np.array([100])
    from uidiff.layout_diffusion.diffusion import _corrupt_batch

    corrupted, masked = _corrupt_batch(tokens, t, CFG, SCHEDULE, np.random.default_rng(0))
    logits = model(torch.from_numpy(corrupted), torch.from_numpy(t))
    clean = torch.from_numpy(tokens).view(1, 20, 5)
    masked_t = torch.from_numpy(masked).view(1, 20, 5)
    loss = masked_cross_entropy(logits, clean, masked_t)
    # 20 category positions at ln(26), 80 geometry at ln(33).
    expected = (20 * math.log(26) + 80 * math.log(33)) / 100
    assert float(loss.detach()) == pytest.approx(expected, rel=1e-6)


def test_training_step_zero_masked_gives_zero_loss():
    model = mini_model()
    trainer = LayoutDiffusionTrainer(model, DiscreteSchedule(1), LayoutTrainConfig(seed=0))
    # With T=1, force t=0 draws by monkeypatching rng to always return 0.
    tokens = np.stack([tokenize_layout(layout_with(4), CFG).tokens])

    class ZeroRng:
        def integers(self, low, high, size=None):
            return np.zeros(size, dtype=np.int64)

        def random(self, shape):
            return np.ones(shape)

    trainer.rng = ZeroRng()
    assert trainer.training_step(tokens) == 0.0


def test_smoothed_loss_decreases_on_synthetic_set():
    rng = np.random.default_rng(7)
    layouts = [sample_synthetic_layout(rng) for _ in range(50)]
    seqs = [tokenize_layout(l, CFG) for l in layouts]
    model = mini_model()
    trainer = LayoutDiffusionTrainer(
        model, SCHEDULE, LayoutTrainConfig(batch_size=8, learning_rate=1e-3, seed=0)
    )
    losses = trainer.train(seqs, steps=500)
    early = np.mean(losses[25:75])
    late = np.mean(losses[-50:])
    assert late < early


def test_condition_parsing_and_expansion():
    cond = ComponentCondition.from_string("text button:2, toolbar:1")
    assert cond.total == 3
    names = [CATEGORIES[i].name for i in cond.expanded_ids()]
    assert names == ["text button", "text button", "toolbar"]
    assert cond.to_dict() == {"text button": 2, "toolbar": 1}


def test_condition_too_large_rejected():
    cond = ComponentCondition.of({"icon": 21})
    with pytest.raises(ConditionTooLarge):
        sample(mini_model(), SCHEDULE, cond, np.random.default_rng(0), allow_untrained=True)


def test_untrained_denoiser_requires_flag():
    with pytest.raises(UntrainedDenoiser):
        sample(mini_model(), SCHEDULE, None, np.random.default_rng(0))


def test_unconditional_sample_is_valid_layout():
    from uidiff.core import validate_layout

    layout = sample(
        mini_model(), SCHEDULE, None, np.random.default_rng(3), allow_untrained=True
    )
    assert validate_layout(layout) == []


def test_clamped_condition_always_present():
    model = mini_model()
    cond = ComponentCondition.of({"toolbar": 1})
    for seed in range(20):
        layout = sample(
            model, SCHEDULE, cond, np.random.default_rng(seed), allow_untrained=True
        )
        names = [el.category.name for el in layout.elements]
        assert "toolbar" in names


def test_sampling_deterministic_given_seed():
    model = mini_model()
    cond = ComponentCondition.of({"text button": 2, "input": 2})
    a = sample(model, SCHEDULE, cond, np.random.default_rng(11), allow_untrained=True)
    b = sample(model, SCHEDULE, cond, np.random.default_rng(11), allow_untrained=True)
    assert a == b


def test_checkpoint_round_trip(tmp_path):
    model = mini_model()
    model.mark_trained()
    save_layout_checkpoint(model, SCHEDULE, tmp_path / "layout.ckpt")
    loaded, schedule = load_layout_checkpoint(tmp_path / "layout.ckpt")
    assert schedule == SCHEDULE
    assert loaded.trained
    cond = ComponentCondition.of({"icon": 1})
    a = sample(model, SCHEDULE, cond, np.random.default_rng(5), allow_untrained=True)
    b = sample(loaded, schedule, cond, np.random.default_rng(5))
    assert a == b


def test_gradients_match_finite_differences():
    # Analytic (autograd) gradients of the masked CE loss vs central finite
    # differences on a 2-layer miniature model, in float64.
    torch.manual_seed(0)
    model = mini_model(config=DenoiserConfig(layers=2, width=16, heads=2, ffn_mult=2))
    model.double()
    tokens = np.stack(
        [tokenize_layout(layout_with(6), CFG).tokens, tokenize_layout(layout_with(3), CFG).tokens]
    )
    t = np.array([60, 40])
    from uidiff.layout_diffusion.diffusion import _corrupt_batch

    corrupted, masked = _corrupt_batch(tokens, t, CFG, SCHEDULE, np.random.default_rng(9))
    corrupted_t = torch.from_numpy(corrupted)
    t_t = torch.from_numpy(t)
    clean = torch.from_numpy(tokens).view(2, 20, 5)
    masked_t = torch.from_numpy(masked).view(2, 20, 5)

    def loss_fn():
        logits = model(corrupted_t, t_t)
        return masked_cross_entropy(logits, clean, masked_t)

    loss = loss_fn()
    loss.backward()

    rng = np.random.default_rng(1)
    params = [p for p in model.parameters() if p.requires_grad and p.grad is not None]
    checked = 0
    h = 1e-5
    while checked < 25:
        p = params[int(rng.integers(len(params)))]
        flat = p.data.view(-1)
        idx = int(rng.integers(flat.numel()))
        grad = p.grad.view(-1)[idx].item()
        if abs(grad) < 1e-8:
            continue
        orig = flat[idx].item()
        flat[idx] = orig + h
        with torch.no_grad():
            up = float(loss_fn())
        flat[idx] = orig - h
        with torch.no_grad():
            down = float(loss_fn())
        flat[idx] = orig
        fd = (up - down) / (2 * h)
        assert abs(fd - grad) / max(abs(fd), abs(grad)) <= 1e-3
        checked += 1
