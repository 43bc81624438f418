"""Shape-enhancing token augmentation with a desk-scale training harness.

Subpackages:

* fourier / tensorio -- dense tensor substrate: 2D DFTs, shifts,
  amplitude/phase algebra, the repo binary tensor format
* edge -- edge-token selection (high-pass activation ranking)
* augment -- token shuffling, Mixup/CutMix mixing, the batch policy
* styles -- statistical / frequency style perturbations for partners
* autodiff / model / optim / train -- numpy reverse-mode engine, the
  token-mixer classifier, AdamW, the leave-one-domain-out harness
* data -- procedural multi-domain shape/texture dataset
* analysis -- shape/texture factors, domain gap, robustness probes
* cli -- the `seta` command line entry point
"""

from .augment import (
    AugmentedBatch,
    SetaConfig,
    SetaPlan,
    layer_gate,
    mix_cutmix,
    mix_mixup,
    sample_lambda,
    seta_batch,
    shuffle_tokens,
)
from .edge import EdgeSelection, edge_mask, edge_pass, low_freq_mask, select_edge_tokens, token_activation
from .styles import StyleConfig, StyleStats, frequency_perturb, statistical_perturb, style_variant

__all__ = [
    "AugmentedBatch",
    "SetaConfig",
    "SetaPlan",
    "EdgeSelection",
    "StyleConfig",
    "StyleStats",
    "layer_gate",
    "mix_cutmix",
    "mix_mixup",
    "sample_lambda",
    "seta_batch",
    "shuffle_tokens",
    "edge_mask",
    "edge_pass",
    "low_freq_mask",
    "select_edge_tokens",
    "token_activation",
    "frequency_perturb",
    "statistical_perturb",
    "style_variant",
]

__version__ = "0.1.0"
