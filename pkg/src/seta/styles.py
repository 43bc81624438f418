"""Channel-level style perturbations for the shuffled partner sample.

Two external augmentations are wrapped here, implemented from their
published forms:

* DSU-style statistical perturbation: per-channel feature statistics are
  re-sampled within their batch-level uncertainty, i.e. the features are
  normalized by (mu, sigma) and re-scaled with mu' = mu + eps*std_b(mu),
  sigma' = sigma + eps*std_b(sigma).
* ALOFT-style frequency perturbation: the amplitude spectrum inside the
  low-frequency block is multiplied element-wise by noise centered at 1;
  the phase spectrum is never touched.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import fourier
from .edge import low_freq_mask

VARIANTS = ("plain", "stylized-statistical", "stylized-frequency")


@dataclass(frozen=True)
class StyleConfig:
    variant: str = "plain"
    strength: float = 0.5
    eps_clip: Optional[float] = None
    r: float = 0.6

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown style variant {self.variant!r}")
        if not 0.0 <= self.strength:
            raise ValueError(f"strength must be >= 0, got {self.strength}")


@dataclass(frozen=True)
class StyleStats:
    """Per-sample channel statistics plus their batch-level spread."""

    mu: np.ndarray          # (C,) per-channel token mean of this sample
    sigma: np.ndarray       # (C,) per-channel token std (ddof=0)
    batch_std_mu: np.ndarray     # (C,) std of mu across the batch
    batch_std_sigma: np.ndarray  # (C,) std of sigma across the batch


def style_stats(batch: np.ndarray) -> list[StyleStats]:
    """Compute per-sample StyleStats for a (B, N, C) feature batch."""
    batch = np.asarray(batch, dtype=np.float64)
    if batch.ndim != 3:
        raise ValueError(f"expected (B, N, C) batch, got shape {batch.shape}")
    mu = batch.mean(axis=1)              # (B, C)
    sigma = batch.std(axis=1)            # (B, C)
    std_mu = mu.std(axis=0)              # (C,)
    std_sigma = sigma.std(axis=0)        # (C,)
    return [
        StyleStats(mu=mu[b], sigma=sigma[b], batch_std_mu=std_mu,
                   batch_std_sigma=std_sigma)
        for b in range(batch.shape[0])
    ]


def _draw_eps(rng: np.random.Generator, c: int, clip: Optional[float]) -> np.ndarray:
    eps = rng.standard_normal(c)
    if clip is not None:
        eps = np.clip(eps, -clip, clip)
    return eps


def statistical_perturb(
    z: np.ndarray,
    stats: StyleStats,
    rng: np.random.Generator,
    eps_clip: Optional[float] = None,
) -> np.ndarray:
    """Re-style a (N, C) map by resampling its channel statistics.

    Channels with sigma == 0 pass through unperturbed (nothing to
    normalize). Both eps draws always happen so the RNG stream advances
    identically regardless of degenerate channels.
    """
    z = np.asarray(z)
    c = z.shape[1]
    if stats.mu.shape[0] != c:
        raise ValueError(f"stats carry {stats.mu.shape[0]} channels, map has {c}")
    eps_mu = _draw_eps(rng, c, eps_clip)
    eps_sigma = _draw_eps(rng, c, eps_clip)
    mu_p = stats.mu + eps_mu * stats.batch_std_mu
    sigma_p = stats.sigma + eps_sigma * stats.batch_std_sigma
    ok = stats.sigma > 0
    scale = np.where(ok, sigma_p / np.where(ok, stats.sigma, 1.0), 1.0)
    shift = np.where(ok, mu_p - stats.mu * scale, 0.0)
    out = z * scale[None, :] + shift[None, :]
    return out.astype(z.dtype, copy=False)


def frequency_perturb(
    z: np.ndarray,
    rng: np.random.Generator,
    strength: float = 0.5,
    r: float = 0.6,
) -> np.ndarray:
    """Multiply low-frequency amplitudes of a (N, C) map by random gains.

    Gains are 1 + strength*eps with eps ~ N(0, 1), clamped at 0 so
    amplitudes stay non-negative and the phase spectrum is preserved.
    Bins outside the centered low-frequency block keep gain 1.
    """
    z = np.asarray(z)
    grid = fourier.tokens_to_grid(z)
    h, w, c = grid.shape
    eps = rng.standard_normal((h, w, c))
    if strength == 0.0:
        return z.copy()
    low = ~low_freq_mask(h, w, r)        # True inside the low-frequency block
    gain = np.where(low[:, :, None], np.maximum(0.0, 1.0 + strength * eps), 1.0)
    spec = fourier.fftshift2(fourier.fft2(grid))
    amp = fourier.amplitude(spec) * gain
    out = fourier.ifft2(fourier.ifftshift2(fourier.recompose(amp, fourier.phase(spec))))
    return fourier.grid_to_tokens(out)


def frequency_gain(
    shape: tuple[int, int, int],
    rng: np.random.Generator,
    strength: float,
    r: float,
) -> np.ndarray:
    """The (H, W, C) shifted-spectrum gain field frequency_perturb applies.

    Exposed so the training path can freeze the draw as a step constant
    and apply it as a linear spectral filter.
    """
    h, w, c = shape
    eps = rng.standard_normal((h, w, c))
    if strength == 0.0:
        return np.ones((h, w, c))
    low = ~low_freq_mask(h, w, r)
    return np.where(low[:, :, None], np.maximum(0.0, 1.0 + strength * eps), 1.0)


def style_variant(
    z: np.ndarray,
    cfg: StyleConfig,
    rng: np.random.Generator,
    stats: Optional[StyleStats] = None,
) -> np.ndarray:
    """Dispatch the configured perturbation; "plain" is the identity."""
    if cfg.variant == "plain":
        return np.asarray(z).copy()
    if cfg.variant == "stylized-statistical":
        if stats is None:
            raise ValueError("stylized-statistical needs precomputed StyleStats")
        return statistical_perturb(z, stats, rng, eps_clip=cfg.eps_clip)
    if cfg.variant == "stylized-frequency":
        return frequency_perturb(z, rng, strength=cfg.strength, r=cfg.r)
    raise ValueError(f"unknown style variant {cfg.variant!r}")
