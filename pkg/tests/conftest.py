"""Shared test helpers: independent oracles and surface builders."""

import numpy as np
import pytest

import mfscale as mf


def plain_dfa(values, s, order):
    """Independently coded plain DFA fluctuation at window size s.

    Deliberately uses np.polyfit box by box (a different code path from
    the library's orthonormal-basis kernel) so it can serve as an oracle
    for F(s, 2).
    """
    values = np.asarray(values, dtype=float)
    n = values.size
    n_boxes = n // s
    t = np.arange(s, dtype=float)
    f2 = []
    segments = [values[i * s : (i + 1) * s] for i in range(n_boxes)]
    offset = n - n_boxes * s
    segments += [values[offset + i * s : offset + (i + 1) * s] for i in range(n_boxes)]
    for seg in segments:
        coeffs = np.polyfit(t, seg, order)
        residuals = seg - np.polyval(coeffs, t)
        f2.append(np.mean(residuals**2))
    return float(np.sqrt(np.mean(f2)))


def make_surface(s_values, q_values, columns, length=65536):
    """Synthetic FluctuationSurface from explicit F columns.

    ``columns`` maps each q to an array of F(s, q) over s_values.
    """
    s_values = np.asarray(s_values, dtype=int)
    q_values = np.asarray(q_values, dtype=float)
    values = np.column_stack([np.asarray(columns[float(q)], dtype=float) for q in q_values])
    cfg = mf.MfdfaConfig(
        q_grid=tuple(float(q) for q in q_values),
        window_sizes=tuple(int(s) for s in s_values),
    )
    return mf.FluctuationSurface(
        s_values=s_values,
        q_values=q_values,
        values=values,
        degenerate_counts=np.zeros(s_values.size, dtype=int),
        config=cfg,
        series_length=length,
        input_fingerprint="synthetic",
    )


def power_law_surface(s_values, q_values, exponent=0.7, amplitude=1.0):
    s_values = np.asarray(s_values, dtype=int)
    col = amplitude * s_values.astype(float) ** exponent
    return make_surface(s_values, q_values, {float(q): col for q in q_values})


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)


FAST_Q = (0.0, 2.0)


def quick_h2(profile, window_sizes=None):
    """h(2) via the standard pipeline with a two-point q grid."""
    cfg = mf.MfdfaConfig(q_grid=FAST_Q, window_sizes=window_sizes)
    surface = mf.fluctuation_surface(profile, cfg)
    h = mf.hurst_function(surface, mf.auto_ranges(surface))
    return h.hurst
