"""Edge-token selection against brute-force oracles."""

import numpy as np
import pytest

from seta import edge, fourier


def brute_force_top_p(activations, p):
    """Sort-everything oracle: top ceil(p*N), ties to lower index."""
    n = len(activations)
    k = int(np.ceil(p * n))
    order = sorted(range(n), key=lambda i: (-activations[i], i))
    mask = np.zeros(n, dtype=bool)
    mask[order[:k]] = True
    return mask


class TestLowFreqMask:
    def test_r_zero_all_ones(self):
        assert edge.low_freq_mask(4, 4, 0.0).all()

    def test_r_one_all_zeros(self):
        assert not edge.low_freq_mask(5, 7, 1.0).any()

    def test_centered_block_4x4_half(self):
        m = edge.low_freq_mask(4, 4, 0.5)
        expect = np.ones((4, 4), dtype=bool)
        expect[1:3, 1:3] = False
        assert np.array_equal(m, expect)

    def test_block_enumeration_oracle(self):
        for h, w, r in [(6, 6, 0.6), (5, 5, 0.4), (8, 4, 0.75), (3, 3, 1.0)]:
            m = edge.low_freq_mask(h, w, r)
            bh, bw = int(np.floor(r * h)), int(np.floor(r * w))
            expect = np.ones((h, w), dtype=bool)
            for u in range(h):
                for v in range(w):
                    if (
                        bh > 0
                        and bw > 0
                        and h // 2 - bh // 2 <= u < h // 2 - bh // 2 + bh
                        and w // 2 - bw // 2 <= v < w // 2 - bw // 2 + bw
                    ):
                        expect[u, v] = False
            assert np.array_equal(m, expect), (h, w, r)

    def test_r_out_of_range(self):
        with pytest.raises(ValueError):
            edge.low_freq_mask(4, 4, 1.5)


class TestEdgePass:
    def test_r_zero_identity(self):
        rng = np.random.default_rng(0)
        z = rng.standard_normal((64, 8)).astype(np.float32)
        out = edge.edge_pass(z, 0.0)
        assert np.max(np.abs(out - z)) < 1e-4

    def test_r_one_removes_everything(self):
        rng = np.random.default_rng(1)
        z = rng.standard_normal((36, 4)).astype(np.float32)
        out = edge.edge_pass(z, 1.0)
        assert np.max(np.abs(out)) < 1e-4

    def test_constant_is_pure_dc(self):
        z = np.full((49, 3), 0.8, dtype=np.float32)
        out = edge.edge_pass(z, 0.3)
        assert np.max(np.abs(out)) < 1e-4

    def test_phase_untouched(self):
        rng = np.random.default_rng(2)
        z = rng.standard_normal((64, 2)).astype(np.float32)
        spec = fourier.fftshift2(fourier.fft2(fourier.tokens_to_grid(z)))
        filtered = fourier.fftshift2(
            fourier.fft2(fourier.tokens_to_grid(edge.edge_pass(z, 0.5)))
        )
        keep = edge.low_freq_mask(8, 8, 0.5)[:, :, None] & (
            np.abs(filtered) > 1e-3
        )
        dphi = np.angle(filtered) - np.angle(spec)
        dphi = np.angle(np.exp(1j * dphi))
        assert np.max(np.abs(dphi[keep])) < 1e-3


class TestActivation:
    def test_all_ones(self):
        z = np.ones((9, 5), dtype=np.float32)
        assert np.allclose(edge.token_activation(z), 1.0)

    def test_single_channel_verbatim(self):
        rng = np.random.default_rng(3)
        z = rng.standard_normal((7, 1)).astype(np.float32)
        assert np.allclose(edge.token_activation(z), z[:, 0])

    def test_matches_row_mean_oracle(self):
        rng = np.random.default_rng(4)
        z = rng.standard_normal((9, 4))
        expect = np.array([sum(row) / len(row) for row in z])
        assert np.allclose(edge.token_activation(z), expect, atol=1e-12)

    def test_abs_kind(self):
        z = np.array([[-1.0, 1.0], [2.0, -2.0]])
        assert np.allclose(edge.token_activation(z, kind="abs"), [1.0, 2.0])
        assert np.allclose(edge.token_activation(z, kind="signed"), [0.0, 0.0])


class TestEdgeMask:
    def test_p_one_selects_all(self):
        sel = edge.edge_mask(np.array([0.3, -2.0, 5.0]), 1.0)
        assert sel.edge_mask.all()
        assert sel.count == 3

    def test_worked_example(self):
        sel = edge.edge_mask(np.array([5.0, 1.0, 3.0, 2.0]), 0.5)
        assert np.array_equal(sel.edge_mask, [True, False, True, False])
        assert sel.q_p == 3.0

    def test_brute_force_oracle_1000_vectors(self):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            n = int(rng.integers(1, 257))
            acts = rng.standard_normal(n)
            if n > 2 and rng.random() < 0.5:
                # inject duplicates to exercise the tie-break
                acts[rng.integers(0, n)] = acts[rng.integers(0, n)]
            p = float(rng.uniform(0.01, 1.0))
            sel = edge.edge_mask(acts, p)
            assert np.array_equal(sel.edge_mask, brute_force_top_p(acts, p))

    def test_monotone_in_p(self):
        rng = np.random.default_rng(6)
        acts = rng.standard_normal(40)
        prev = np.zeros(40, dtype=bool)
        for p in np.linspace(0.05, 1.0, 20):
            cur = edge.edge_mask(acts, float(p)).edge_mask
            assert np.all(prev <= cur)
            prev = cur

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            edge.edge_mask(np.array([]), 0.5)


class TestSelectEdgeTokens:
    def test_w0_all_selected_identity(self):
        rng = np.random.default_rng(7)
        z = rng.standard_normal((6, 3)).astype(np.float32)
        sel = edge.edge_mask(np.arange(6.0), 1.0)
        assert np.array_equal(edge.select_edge_tokens(z, sel, 0.0), z)

    def test_w1_identity_any_mask(self):
        rng = np.random.default_rng(8)
        z = rng.standard_normal((6, 3)).astype(np.float32)
        sel = edge.edge_mask(np.arange(6.0), 0.5)
        out = edge.select_edge_tokens(z, sel, 1.0)
        assert np.allclose(out, z)

    def test_w0_none_selected_is_zero(self):
        z = np.ones((4, 2), dtype=np.float32)
        sel = edge.EdgeSelection(
            activations=np.zeros(4), edge_mask=np.zeros(4, dtype=bool), p=0.5, q_p=0.0
        )
        assert np.all(edge.select_edge_tokens(z, sel, 0.0) == 0)

    def test_selected_rows_bit_identical(self):
        rng = np.random.default_rng(9)
        z = rng.standard_normal((16, 4)).astype(np.float32)
        z[3] = -0.0  # sign bit must survive
        sel = edge.edge_mask(edge.token_activation(edge.edge_pass(z, 0.6)), 0.75)
        out = edge.select_edge_tokens(z, sel, 0.0)
        assert np.array_equal(
            out[sel.edge_mask].view(np.int32), z[sel.edge_mask].view(np.int32)
        )

    def test_mask_length_mismatch(self):
        z = np.ones((4, 2), dtype=np.float32)
        sel = edge.edge_mask(np.arange(3.0), 0.5)
        with pytest.raises(ValueError):
            edge.select_edge_tokens(z, sel, 0.0)


class TestEtsComposition:
    def test_mask_from_filtered_applied_to_original(self):
        rng = np.random.default_rng(10)
        z = rng.standard_normal((64, 8)).astype(np.float32)
        sel = edge.ets_selection(z, 0.6, 0.75)
        out = edge.select_edge_tokens(z, sel, 0.0)
        assert np.array_equal(out[sel.edge_mask], z[sel.edge_mask])
        zhat = edge.edge_pass(z, 0.6)
        assert np.allclose(
            sel.activations, edge.token_activation(zhat), atol=1e-6
        )

    def test_non_square_tail_never_selected(self):
        rng = np.random.default_rng(11)
        z = rng.standard_normal((66, 4)).astype(np.float32)  # 64 + 2 leftover
        z[64:] = 100.0  # huge values must still not be selected
        sel = edge.ets_selection(z, 0.6, 0.9)
        assert not sel.edge_mask[64:].any()
        assert sel.count == int(np.ceil(0.9 * 64))
