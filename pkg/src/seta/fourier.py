"""2D Fourier primitives for token feature maps.

Feature maps live in one of two layouts:

* token layout  -- real array of shape (N, C), one row per token
* grid layout   -- real array of shape (H, W, C), row-major tokens

Spectra are complex arrays of shape (H, W, C), one independent 2D
transform per channel. Conventions, fixed repo-wide:

* forward transform is un-normalized:
      F(x)[u, v] = sum_{h, w} x[h, w] * exp(-2j*pi*(h*u/H + w*v/W))
* inverse transform carries the 1/(H*W) factor and returns the real part
* grid <-> token reshape uses H = W = floor(sqrt(N)) and is the identity
  when composed with its inverse

Internally numpy computes in double precision; results are stored as
float32 / complex64.
"""

from __future__ import annotations

import numpy as np

REAL_DTYPE = np.float32
COMPLEX_DTYPE = np.complex64


def _require_grid(x: np.ndarray, name: str = "input") -> np.ndarray:
    x = np.asarray(x)
    if x.ndim != 3:
        raise ValueError(
            f"{name} must be in grid layout (H, W, C), got shape {x.shape}"
        )
    if x.shape[0] < 1 or x.shape[1] < 1:
        raise ValueError(f"{name} needs H, W >= 1, got shape {x.shape}")
    return x


def tokens_to_grid(z: np.ndarray) -> np.ndarray:
    """Reshape (N, C) tokens to the (H, W, C) grid with H = W = floor(sqrt(N)).

    Requires N to be a perfect square; callers with leftover tokens must
    split them off first.
    """
    z = np.asarray(z)
    if z.ndim != 2:
        raise ValueError(f"expected token layout (N, C), got shape {z.shape}")
    n = z.shape[0]
    side = int(np.floor(np.sqrt(n)))
    if side * side != n:
        raise ValueError(f"token count {n} is not a perfect square")
    return z.reshape(side, side, z.shape[1])


def grid_to_tokens(x: np.ndarray) -> np.ndarray:
    x = _require_grid(x)
    h, w, c = x.shape
    return x.reshape(h * w, c)


def fft2(x: np.ndarray) -> np.ndarray:
    """Un-normalized forward 2D DFT over the (H, W) axes, per channel."""
    x = _require_grid(x)
    return np.fft.fft2(x, axes=(0, 1)).astype(COMPLEX_DTYPE)


def ifft2(s: np.ndarray) -> np.ndarray:
    """1/(H*W)-normalized inverse 2D DFT; returns the real part as float32."""
    s = _require_grid(s, "spectrum")
    return np.fft.ifft2(s, axes=(0, 1)).real.astype(REAL_DTYPE)


def fftshift2(s: np.ndarray) -> np.ndarray:
    """Circular shift moving the DC bin to (floor(H/2), floor(W/2))."""
    s = _require_grid(s, "spectrum")
    return np.fft.fftshift(s, axes=(0, 1))


def ifftshift2(s: np.ndarray) -> np.ndarray:
    """Exact inverse of :func:`fftshift2` for all size parities."""
    s = _require_grid(s, "spectrum")
    return np.fft.ifftshift(s, axes=(0, 1))


def amplitude(s: np.ndarray) -> np.ndarray:
    s = _require_grid(s, "spectrum")
    return np.abs(s).astype(REAL_DTYPE)


def phase(s: np.ndarray) -> np.ndarray:
    s = _require_grid(s, "spectrum")
    return np.angle(s).astype(REAL_DTYPE)


def recompose(amp: np.ndarray, phs: np.ndarray) -> np.ndarray:
    """Rebuild a complex spectrum as amp * exp(j * phase)."""
    amp = _require_grid(amp, "amplitude")
    phs = _require_grid(phs, "phase")
    if amp.shape != phs.shape:
        raise ValueError(
            f"amplitude shape {amp.shape} != phase shape {phs.shape}"
        )
    if np.any(amp < 0):
        raise ValueError("amplitude must be non-negative")
    return (amp.astype(np.float64) * np.exp(1j * phs.astype(np.float64))).astype(
        COMPLEX_DTYPE
    )
