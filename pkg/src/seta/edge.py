"""Edge token selection (ETS).

Pipeline: suppress the low-frequency amplitude of a token map to get an
edge-pass representation, rank tokens by their channel-mean activation
in it, and keep the top-p fraction. The boolean mask is computed from
the filtered map but applied to the *original* tokens, so selected rows
keep their full content.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fourier


def low_freq_mask(h: int, w: int, r: float) -> np.ndarray:
    """Boolean (H, W) mask, False on the centered low-frequency block.

    The block has side (floor(r*H), floor(r*W)) and is centered on the
    shifted-spectrum DC bin at (floor(H/2), floor(W/2)). r=0 keeps
    everything, r=1 discards everything.
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"r must be in [0, 1], got {r}")
    if h < 1 or w < 1:
        raise ValueError(f"mask needs H, W >= 1, got ({h}, {w})")
    mask = np.ones((h, w), dtype=bool)
    bh = int(np.floor(r * h))
    bw = int(np.floor(r * w))
    if bh > 0 and bw > 0:
        top = h // 2 - bh // 2
        left = w // 2 - bw // 2
        mask[top : top + bh, left : left + bw] = False
    return mask


def edge_pass(z: np.ndarray, r: float) -> np.ndarray:
    """High-pass filter a (N, C) token map through its amplitude spectrum.

    The shifted amplitude is zeroed on the centered block of scale r, the
    phase is kept untouched, and the result is transformed back. Requires
    N to be a perfect square.
    """
    z = np.asarray(z)
    grid = fourier.tokens_to_grid(z)
    spec = fourier.fft2(grid)
    shifted = fourier.fftshift2(spec)
    amp = fourier.amplitude(shifted)
    phs = fourier.phase(shifted)
    mask = low_freq_mask(grid.shape[0], grid.shape[1], r)
    amp = amp * mask[:, :, None]
    filtered = fourier.recompose(amp, phs)
    out = fourier.ifft2(fourier.ifftshift2(filtered))
    return fourier.grid_to_tokens(out)


def token_activation(zhat: np.ndarray, kind: str = "signed") -> np.ndarray:
    """Per-token activation: the plain channel mean of the filtered map.

    kind="abs" averages magnitudes instead (experimental switch; the
    signed mean is the default).
    """
    zhat = np.asarray(zhat)
    if zhat.ndim != 2:
        raise ValueError(f"expected token layout (N, C), got shape {zhat.shape}")
    if kind == "signed":
        return zhat.mean(axis=1)
    if kind == "abs":
        return np.abs(zhat).mean(axis=1)
    raise ValueError(f"unknown activation kind {kind!r}")


def top_k_mask(activations: np.ndarray, k: int) -> np.ndarray:
    """Boolean mask of the k largest activations, ties to lower index."""
    activations = np.asarray(activations)
    n = activations.shape[0]
    if not 0 <= k <= n:
        raise ValueError(f"k={k} out of range for {n} activations")
    mask = np.zeros(n, dtype=bool)
    if k > 0:
        # stable argsort of the negated values keeps original order among ties
        order = np.argsort(-activations, kind="stable")
        mask[order[:k]] = True
    return mask


@dataclass(frozen=True)
class EdgeSelection:
    """Activation vector plus the derived top-p token mask."""

    activations: np.ndarray
    edge_mask: np.ndarray
    p: float
    q_p: float

    @property
    def count(self) -> int:
        return int(self.edge_mask.sum())


def edge_mask(activations: np.ndarray, p: float) -> EdgeSelection:
    """Select exactly ceil(p*N) tokens with the largest activations.

    Ties break toward the lower token index; q_p records the k-th largest
    activation (the selection threshold).
    """
    activations = np.asarray(activations, dtype=np.float64)
    if activations.ndim != 1 or activations.size == 0:
        raise ValueError("activations must be a non-empty 1D vector")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must be in (0, 1], got {p}")
    n = activations.size
    k = int(np.ceil(p * n))
    mask = top_k_mask(activations, k)
    q_p = float(np.sort(activations)[::-1][k - 1])
    return EdgeSelection(activations=activations, edge_mask=mask, p=p, q_p=q_p)


def select_edge_tokens(z: np.ndarray, sel: EdgeSelection, w: float = 0.0) -> np.ndarray:
    """Keep selected rows of z verbatim, scale the rest by w.

    w=0 masks non-edge tokens out entirely (the default); w=1 is the
    identity.
    """
    z = np.asarray(z)
    if not 0.0 <= w <= 1.0:
        raise ValueError(f"w must be in [0, 1], got {w}")
    mask = sel.edge_mask
    if mask.shape[0] != z.shape[0]:
        raise ValueError(
            f"mask length {mask.shape[0]} != token count {z.shape[0]}"
        )
    out = z * np.where(mask, 1.0, w)[:, None]
    out = out.astype(z.dtype, copy=False)
    # selected rows must be bit-identical to the input, not multiplied
    out[mask] = z[mask]
    return out


def square_block_size(n: int) -> int:
    """Largest leading H*W block with H = W = floor(sqrt(N))."""
    side = int(np.floor(np.sqrt(n)))
    return side * side


def ets_selection(
    z: np.ndarray, r: float, p: float, activation: str = "signed"
) -> EdgeSelection:
    """Full ETS ranking for a (N, C) token map.

    Non-square N: the filter and ranking run on the leading square block;
    leftover tokens get -inf activation and are never selected, and the
    selection count is ceil(p * block) rather than ceil(p * N).
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must be in (0, 1], got {p}")
    z = np.asarray(z)
    n = z.shape[0]
    m = square_block_size(n)
    zhat = edge_pass(z[:m], r)
    act_block = token_activation(zhat, kind=activation)
    k = int(np.ceil(p * m))
    mask = np.zeros(n, dtype=bool)
    mask[:m] = top_k_mask(act_block, k)
    activations = np.full(n, -np.inf, dtype=np.float64)
    activations[:m] = act_block
    q_p = float(np.sort(act_block)[::-1][k - 1])
    return EdgeSelection(activations=activations, edge_mask=mask, p=p, q_p=q_p)
