"""Token-level augmentation: shuffling, Beta-weighted mixing, batch policy.

For each selected sample the pipeline extracts its edge tokens, pairs it
with a token-shuffled (optionally re-styled) partner from the same batch
and blends the two, either by convex Mixup interpolation or by CutMix
token replacement. The augmented sample always keeps the label of the
edge-token provider. At inference the whole mechanism is off.

Randomness is consumed in a documented order so runs are reproducible:
first the applied-set selection, then per selected sample (in increasing
batch index): partner, mode, lambda, style noise, permutation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import fourier
from .edge import ets_selection, low_freq_mask, square_block_size, top_k_mask
from .styles import StyleConfig, StyleStats, style_stats

MODES = ("none", "mixup", "cutmix")


@dataclass(frozen=True)
class SetaConfig:
    """All augmentation knobs.

    p_mode is the probability of choosing the Mixup blend over CutMix;
    apply_fraction generalizes the half-batch policy (default 0.5);
    w weighs non-edge tokens (0 masks them out, the default).
    """

    r: float = 0.6
    p: float = 0.75
    p_mode: float = 0.5
    alpha: float = 4.0
    beta: float = 1.0
    apply_fraction: float = 0.5
    w: float = 0.0
    variant: str = "plain"
    layer_ids: tuple[int, ...] = ()   # empty = all layers of the host model
    activation: str = "signed"
    style_strength: float = 0.5
    style_eps_clip: Optional[float] = None

    def __post_init__(self):
        for name in ("r", "p", "p_mode", "apply_fraction", "w"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.p == 0.0:
            raise ValueError("p must be in (0, 1]")
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be > 0")
        if self.variant not in ("plain", "stylized-statistical", "stylized-frequency"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.activation not in ("signed", "abs"):
            raise ValueError(f"unknown activation {self.activation!r}")

    def style_config(self) -> StyleConfig:
        return StyleConfig(
            variant=self.variant,
            strength=self.style_strength,
            eps_clip=self.style_eps_clip,
            r=self.r,
        )


def shuffle_tokens(z: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Uniformly permute token rows (Fisher-Yates, one draw per swap)."""
    z = np.asarray(z)
    return z[fisher_yates_permutation(z.shape[0], rng)]


def fisher_yates_permutation(n: int, rng: np.random.Generator) -> np.ndarray:
    perm = np.arange(n)
    for i in range(n - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        perm[i], perm[j] = perm[j], perm[i]
    return perm


def sample_lambda(alpha: float, beta: float, rng: np.random.Generator) -> float:
    """Beta(alpha, beta) draw via two Gamma draws g_a / (g_a + g_b)."""
    if alpha <= 0 or beta <= 0:
        raise ValueError(f"Beta shapes must be > 0, got ({alpha}, {beta})")
    ga = rng.gamma(alpha, 1.0)
    gb = rng.gamma(beta, 1.0)
    return float(ga / (ga + gb))


def mix_mixup(z_e: np.ndarray, z_s: np.ndarray, lam: float) -> np.ndarray:
    """Elementwise convex combination lam*z_e + (1-lam)*z_s."""
    z_e = np.asarray(z_e)
    z_s = np.asarray(z_s)
    if z_e.shape != z_s.shape:
        raise ValueError(f"shape mismatch {z_e.shape} vs {z_s.shape}")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0, 1], got {lam}")
    # endpoints return the operand bit-exactly (float arithmetic would
    # normalize -0.0 entries)
    if lam == 1.0:
        return z_e.copy()
    if lam == 0.0:
        return z_s.copy()
    out = lam * z_e.astype(np.float64) + (1.0 - lam) * z_s.astype(np.float64)
    return out.astype(z_e.dtype, copy=False)


def cutmix_mask(activations: np.ndarray, lam: float) -> np.ndarray:
    """Token mask keeping the ceil(lam*N) highest activations."""
    activations = np.asarray(activations)
    n = activations.shape[0]
    k = int(np.ceil(lam * n))
    return top_k_mask(activations, k)


def mix_cutmix(
    z: np.ndarray, z_s: np.ndarray, activations: np.ndarray, lam: float
) -> np.ndarray:
    """Replace all but the top-ceil(lam*N) activation tokens by z_s rows."""
    z = np.asarray(z)
    z_s = np.asarray(z_s)
    if z.shape != z_s.shape:
        raise ValueError(f"shape mismatch {z.shape} vs {z_s.shape}")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0, 1], got {lam}")
    mask = cutmix_mask(activations, lam)
    return np.where(mask[:, None], z, z_s)


def layer_gate(
    layer_ids, rng: np.random.Generator, training: bool = True
) -> Optional[int]:
    """Pick the single layer that hosts the augmentation this step.

    Returns None outside training (augmentation closed at inference).
    """
    ids = sorted(layer_ids)
    if not ids:
        raise ValueError("layer_gate needs a non-empty layer set")
    if not training:
        return None
    return int(ids[int(rng.integers(0, len(ids)))])


@dataclass
class SampleMix:
    """Frozen per-sample mixing constants for one training step."""

    index: int
    partner: int
    mode: str                       # "mixup" | "cutmix"
    lam: float
    edge_mask: np.ndarray           # (N,) bool, top-p tokens of sample `index`
    activations: np.ndarray         # (N,) float64 ETS activations
    cut_mask: Optional[np.ndarray]  # (N,) bool for cutmix, else None
    permutation: np.ndarray         # (N,) token permutation for the partner
    style_kind: str                 # "plain" | "affine" | "spectral"
    style_scale: Optional[np.ndarray] = None  # (C,) affine scale
    style_shift: Optional[np.ndarray] = None  # (C,) affine shift
    style_gain: Optional[np.ndarray] = None   # (H, W, C) shifted-spectrum gain


@dataclass
class SetaPlan:
    """Everything seta_batch decided for one batch, mixing aside.

    The plan is the unit the training step treats as constant: replaying
    it on the same (or a perturbed) batch applies identical masks,
    partners, lambdas and style noise.
    """

    batch_size: int
    applied: np.ndarray             # (B,) bool
    mixes: list[SampleMix] = field(default_factory=list)


@dataclass
class AugmentedBatch:
    features: np.ndarray            # (B, N, C)
    labels: np.ndarray              # (B,) — always the edge-provider's label
    applied: np.ndarray             # (B,) bool
    lambdas: np.ndarray             # (B,) float, 1.0 where not applied
    modes: list[str]                # (B,) of MODES
    partner: np.ndarray             # (B,) int, -1 where not applied


def plan_seta(
    features: np.ndarray,
    cfg: SetaConfig,
    rng: np.random.Generator,
) -> SetaPlan:
    """Draw every random choice for one batch and freeze it into a plan."""
    features = np.asarray(features)
    if features.ndim != 3:
        raise ValueError(f"expected (B, N, C) batch, got {features.shape}")
    b, n, _ = features.shape
    n_apply = int(np.floor(cfg.apply_fraction * b))
    if cfg.apply_fraction > 0 and b < 2:
        raise ValueError("augmentation needs a batch of at least 2 samples")
    plan = SetaPlan(batch_size=b, applied=np.zeros(b, dtype=bool))
    if n_apply == 0:
        return plan
    chosen = np.sort(rng.choice(b, size=n_apply, replace=False))
    plan.applied[chosen] = True
    style_cfg = cfg.style_config()
    stats: list[StyleStats] | None = None
    if style_cfg.variant == "stylized-statistical":
        stats = style_stats(features)
    side = int(np.sqrt(square_block_size(n)))
    for i in chosen:
        j = int(rng.integers(0, b - 1))
        if j >= i:
            j += 1
        mode = "mixup" if rng.random() < cfg.p_mode else "cutmix"
        lam = sample_lambda(cfg.alpha, cfg.beta, rng)
        sel = ets_selection(features[i], cfg.r, cfg.p, activation=cfg.activation)
        mix = SampleMix(
            index=int(i),
            partner=j,
            mode=mode,
            lam=lam,
            edge_mask=sel.edge_mask,
            activations=sel.activations,
            cut_mask=cutmix_mask(sel.activations, lam) if mode == "cutmix" else None,
            permutation=np.empty(0, dtype=int),
            style_kind="plain",
        )
        if style_cfg.variant == "stylized-statistical":
            st = stats[j]
            c = features.shape[2]
            eps_mu = rng.standard_normal(c)
            eps_sigma = rng.standard_normal(c)
            if style_cfg.eps_clip is not None:
                eps_mu = np.clip(eps_mu, -style_cfg.eps_clip, style_cfg.eps_clip)
                eps_sigma = np.clip(eps_sigma, -style_cfg.eps_clip, style_cfg.eps_clip)
            mu_p = st.mu + eps_mu * st.batch_std_mu
            sigma_p = st.sigma + eps_sigma * st.batch_std_sigma
            ok = st.sigma > 0
            mix.style_kind = "affine"
            mix.style_scale = np.where(ok, sigma_p / np.where(ok, st.sigma, 1.0), 1.0)
            mix.style_shift = np.where(ok, mu_p - st.mu * mix.style_scale, 0.0)
        elif style_cfg.variant == "stylized-frequency":
            c = features.shape[2]
            eps = rng.standard_normal((side, side, c))
            if style_cfg.strength == 0.0:
                gain = np.ones((side, side, c))
            else:
                low = ~low_freq_mask(side, side, style_cfg.r)
                gain = np.where(
                    low[:, :, None],
                    np.maximum(0.0, 1.0 + style_cfg.strength * eps),
                    1.0,
                )
            mix.style_kind = "spectral"
            mix.style_gain = gain
        mix.permutation = fisher_yates_permutation(n, rng)
        plan.mixes.append(mix)
    return plan


def spectral_filter(z: np.ndarray, gain: np.ndarray) -> np.ndarray:
    """Apply a non-negative shifted-spectrum gain to a square token block.

    Equivalent to multiplying the amplitude spectrum by `gain` while
    keeping the phase, but expressed as one linear filter on the complex
    spectrum. Leftover (non-square) tokens pass through untouched.
    """
    z = np.asarray(z)
    m = gain.shape[0] * gain.shape[1]
    grid = fourier.tokens_to_grid(z[:m])
    spec = fourier.fftshift2(fourier.fft2(grid)) * gain
    block = fourier.grid_to_tokens(fourier.ifft2(fourier.ifftshift2(spec)))
    if m == z.shape[0]:
        return block.astype(z.dtype, copy=False)
    out = z.copy()
    out[:m] = block
    return out


def _styled_partner(z: np.ndarray, mix: SampleMix) -> np.ndarray:
    if mix.style_kind == "plain":
        return z
    if mix.style_kind == "affine":
        out = z * mix.style_scale[None, :] + mix.style_shift[None, :]
        return out.astype(z.dtype, copy=False)
    if mix.style_kind == "spectral":
        return spectral_filter(z, mix.style_gain)
    raise ValueError(f"unknown style kind {mix.style_kind!r}")


def apply_seta_plan(
    features: np.ndarray,
    labels: np.ndarray,
    plan: SetaPlan,
    cfg: SetaConfig,
) -> AugmentedBatch:
    """Replay a frozen plan on a feature batch (pure numpy path)."""
    features = np.asarray(features)
    labels = np.asarray(labels)
    b, n, _ = features.shape
    if b != plan.batch_size:
        raise ValueError(f"plan is for batch {plan.batch_size}, got {b}")
    out = features.copy()
    lambdas = np.ones(b, dtype=np.float64)
    modes = ["none"] * b
    partner = np.full(b, -1, dtype=int)
    for mix in plan.mixes:
        i = mix.index
        z_i = features[i]
        z_s = _styled_partner(features[mix.partner], mix)[mix.permutation]
        if mix.mode == "mixup":
            keep = np.where(mix.edge_mask, 1.0, cfg.w)[:, None]
            z_e = (z_i * keep).astype(z_i.dtype, copy=False)
            z_e[mix.edge_mask] = z_i[mix.edge_mask]
            out[i] = mix_mixup(z_e, z_s, mix.lam)
        else:
            out[i] = np.where(mix.cut_mask[:, None], z_i, z_s)
        lambdas[i] = mix.lam
        modes[i] = mix.mode
        partner[i] = mix.partner
    return AugmentedBatch(
        features=out,
        labels=labels.copy(),
        applied=plan.applied.copy(),
        lambdas=lambdas,
        modes=modes,
        partner=partner,
    )


def seta_batch(
    features: np.ndarray,
    labels: np.ndarray,
    cfg: SetaConfig,
    rng: np.random.Generator,
) -> AugmentedBatch:
    """Augment a (B, N, C) batch under the configured policy.

    floor(apply_fraction*B) samples are chosen; each is mixed with a
    token-shuffled partner (never itself) and keeps its own label.
    Unselected rows come through bit-identical.
    """
    plan = plan_seta(features, cfg, rng)
    return apply_seta_plan(features, labels, plan, cfg)
