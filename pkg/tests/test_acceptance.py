"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v`` (add ``-s`` to see the
per-criterion detail lines live).
"""

import json
import time

import numpy as np

import mfscale as mf
from mfscale.cli import main

from conftest import plain_dfa


def report(criterion, ok, detail):
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"{criterion}: {detail}"


def rmd_profile(hurst, levels, seed, trim=False):
    return mf.generate_rmd(mf.RmdParams(hurst=hurst, levels=levels, seed=seed), trim=trim)


def standard_pipeline(profile, config=None):
    surface = mf.fluctuation_surface(profile, config)
    h = mf.hurst_function(surface, mf.auto_ranges(surface))
    return surface, h, mf.legendre_spectrum(h)


def test_criterion_1_monofractal_recovery():
    """Mean h(2) within 0.05 of the input H and spectrum peak within 0.07
    for 20-seed ensembles at L = 2^14, under two minutes per ensemble."""
    details = []
    ok = True
    for hurst in (0.3, 0.5, 0.7):
        started = time.perf_counter()
        h2s, peaks = [], []
        for seed in range(20):
            _, h, spec = standard_pipeline(rmd_profile(hurst, 14, seed))
            h2s.append(h.hurst)
            peaks.append(spec.peak_alpha)
        elapsed = time.perf_counter() - started
        mean_h2, mean_peak = float(np.mean(h2s)), float(np.mean(peaks))
        ok &= abs(mean_h2 - hurst) <= 0.05
        ok &= abs(mean_peak - hurst) <= 0.07
        ok &= elapsed < 120.0
        details.append(
            f"H={hurst}: h2={mean_h2:.3f} peak={mean_peak:.3f} ({elapsed:.0f}s)"
        )
    report("criterion 1 (monofractal recovery)", ok, "; ".join(details))


TABLE_WIDTHS = {2**8: 0.73, 2**10: 0.28, 2**12: 0.21, 2**14: 0.22}
TABLE_PEAKS = {2**8: 0.56, 2**10: 0.50, 2**12: 0.50, 2**14: 0.51}


def test_criterion_2_finite_length_band():
    """Calibration at H=0.5 reproduces the finite-length width/peak bands
    and the monotone narrowing through L = 2^12."""
    lengths = [2**8, 2**10, 2**12, 2**14]
    cal = mf.run_calibration(lengths, [0.5], ensemble=20, base_seed=0)
    by_len = {e.length: e for e in cal.entries}
    ok = True
    details = []
    for length in lengths:
        entry = by_len[length]
        ok &= abs(entry.mean_width - TABLE_WIDTHS[length]) <= 0.10
        ok &= abs(entry.mean_peak - TABLE_PEAKS[length]) <= 0.07
        details.append(
            f"L=2^{length.bit_length() - 1}: width {entry.mean_width:.3f} "
            f"(ref {TABLE_WIDTHS[length]}) peak {entry.mean_peak:.3f} "
            f"(ref {TABLE_PEAKS[length]})"
        )
    narrowing = (
        by_len[2**8].mean_width > by_len[2**10].mean_width > by_len[2**12].mean_width
    )
    ok &= narrowing
    details.append(f"narrowing 2^8>2^10>2^12: {narrowing}")
    report("criterion 2 (finite-length band)", ok, "; ".join(details))


def test_criterion_3_oracle_equivalence():
    """F(s,2) matches an independently coded plain DFA to 1e-12 on 50
    random inputs; the q=0 formula matches the q -> +/-0.01 limit to 1e-3."""
    gen = np.random.default_rng(99)
    worst_dfa = 0.0
    cfg = mf.MfdfaConfig(q_grid=(0.0, 2.0), window_sizes=(10, 25, 50, 100, 250))
    for _ in range(50):
        profile = mf.Series(np.cumsum(gen.normal(0, 1, 1100)), "profile")
        surface = mf.fluctuation_surface(profile, cfg)
        for i, s in enumerate(surface.s_values):
            oracle = plain_dfa(profile.values, int(s), 2)
            rel = abs(surface.values[i, surface.q_index(2.0)] - oracle) / oracle
            worst_dfa = max(worst_dfa, rel)

    worst_limit = 0.0
    limit_cfg = mf.MfdfaConfig(q_grid=(-0.01, 0.0, 0.01, 2.0))
    for seed in range(10):
        g2 = np.random.default_rng(seed)
        profile = mf.Series(np.cumsum(g2.normal(0, 1, 4096)), "profile")
        surface = mf.fluctuation_surface(profile, limit_cfg)
        f0 = surface.values[:, surface.q_index(0.0)]
        for q in (-0.01, 0.01):
            fq = surface.values[:, surface.q_index(q)]
            worst_limit = max(worst_limit, float(np.max(np.abs(fq - f0) / f0)))

    ok = worst_dfa <= 1e-12 and worst_limit <= 1e-3
    report(
        "criterion 3 (oracle equivalence)",
        ok,
        f"worst DFA rel diff {worst_dfa:.2e} (<=1e-12); "
        f"worst q->0 rel diff {worst_limit:.2e} (<=1e-3)",
    )


def test_criterion_4_legendre_identities():
    """f(alpha(0)) = 1 to 1e-12 on every run; monofractal collapse to
    (H, 1) to 1e-10; the linear-h closed form matches to 1e-8."""
    worst_anchor = 0.0
    for seed in range(5):
        _, _, spec = standard_pipeline(rmd_profile(0.5, 12, seed))
        f0 = spec.f_values[spec.q_values == 0.0][0]
        worst_anchor = max(worst_anchor, abs(f0 - 1.0))

    qs = np.array(mf.default_q_grid())
    s_grid = tuple(int(s) for s in np.unique(np.round(np.geomspace(10, 2048, 40))))
    hurst_const = 0.62
    fits = tuple(
        mf.QFit(float(q), hurst_const, 0.0, 1.0,
                mf.ScalingRange(float(q), s_grid[0], s_grid[-1], "manual", 1.0, len(s_grid)))
        for q in qs
    )
    h_const = mf.HurstFunction(fits, True, False, series_length=65536)
    spec_const = mf.legendre_spectrum(h_const)
    collapse = max(
        float(np.max(np.abs(spec_const.alphas - hurst_const))),
        float(np.max(np.abs(spec_const.f_values - 1.0))),
    )

    a, c = 0.6, 0.01
    fits_lin = tuple(
        mf.QFit(float(q), a - c * float(q), 0.0, 1.0,
                mf.ScalingRange(float(q), s_grid[0], s_grid[-1], "manual", 1.0, len(s_grid)))
        for q in qs
    )
    h_lin = mf.HurstFunction(fits_lin, True, False, series_length=65536)
    spec_lin = mf.legendre_spectrum(h_lin)
    closed_form = max(
        float(np.max(np.abs(spec_lin.alphas - (a - 2 * c * qs)))),
        float(np.max(np.abs(spec_lin.f_values - (1.0 - (spec_lin.alphas - a) ** 2 / (4 * c))))),
    )

    ok = worst_anchor <= 1e-12 and collapse <= 1e-10 and closed_form <= 1e-8
    report(
        "criterion 4 (Legendre identities)",
        ok,
        f"q=0 anchor err {worst_anchor:.2e} (<=1e-12); collapse err {collapse:.2e} "
        f"(<=1e-10); closed-form err {closed_form:.2e} (<=1e-8)",
    )


def test_criterion_5_power_mean_monotonicity():
    """F(s, .) non-decreasing in q on 100 random inputs, full default
    grid, zero violations."""
    gen = np.random.default_rng(7)
    violations = 0
    for trial in range(100):
        n = int(gen.integers(600, 3000))
        scale = float(np.exp(gen.normal(0, 2)))
        profile = mf.Series(scale * np.cumsum(gen.normal(0, 1, n)), "profile")
        surface = mf.fluctuation_surface(profile)
        diffs = np.diff(surface.values, axis=1)
        floor = -1e-12 * surface.values[:, :-1]
        violations += int(np.any(diffs < floor))
    report(
        "criterion 5 (power-mean monotonicity)",
        violations == 0,
        f"{violations} violations in 100 random surfaces",
    )


def test_criterion_6_twist_injection_and_excision():
    """A 10-sigma level step (sigma = the generator scale) flips
    twist_detected on in >= 80% of seeds; excising the step return flips
    it back off in >= 80% of those."""
    step = 10.0  # 10 x initial_sigma of the generated trace
    injected_flips = 0
    restored = 0
    eligible = 0
    for seed in range(20):
        trace = rmd_profile(0.5, 13, seed, trim=True)
        returns = np.diff(trace.values)
        mid = returns.size // 2
        stepped_returns = returns.copy()
        stepped_returns[mid] += step
        stepped = np.concatenate(
            [[trace.values[0]], trace.values[0] + np.cumsum(stepped_returns)]
        )
        _, h_base, _ = standard_pipeline(trace)
        if h_base.twist_detected:
            continue  # only count genuine flips
        eligible += 1
        stepped_series = mf.Series(stepped, "profile")
        _, h_stepped, _ = standard_pipeline(stepped_series)
        if not h_stepped.twist_detected:
            continue
        injected_flips += 1
        repaired = mf.excise(stepped_series, mf.ExcisionSpec(((mid, mid + 1),)))
        _, h_repaired, _ = standard_pipeline(repaired)
        if not h_repaired.twist_detected:
            restored += 1
    flip_rate = injected_flips / eligible if eligible else 0.0
    restore_rate = restored / injected_flips if injected_flips else 0.0
    ok = eligible >= 16 and flip_rate >= 0.8 and restore_rate >= 0.8
    report(
        "criterion 6 (twist injection/excision)",
        ok,
        f"{eligible} twist-free baselines; injection flip rate "
        f"{injected_flips}/{eligible}; excision restore rate {restored}/{injected_flips}",
    )


def test_criterion_7_surgery_bookkeeping():
    """Empty-spec identity to 1e-10, exact length accounting, and
    bit-identical retained returns in order."""
    gen = np.random.default_rng(21)
    ok = True
    for trial in range(20):
        n = int(gen.integers(50, 400))
        series = mf.Series(np.cumsum(gen.normal(0, 1, n)), "profile")
        identity = mf.excise(series, mf.ExcisionSpec(()))
        ok &= np.allclose(identity.values, series.values, rtol=1e-10, atol=1e-12)

        n_ret = n - 1
        a = int(gen.integers(0, n_ret - 2))
        b = int(gen.integers(a + 1, n_ret))
        spec = mf.ExcisionSpec(((a, b),))
        out = mf.excise(series, spec)
        ok &= len(out) == n - (b - a)

        returns = np.diff(series.values)
        mask = np.ones(n_ret, dtype=bool)
        mask[a:b] = False
        ok &= np.array_equal(mf.retained_returns(series, spec), returns[mask])
    report("criterion 7 (surgery bookkeeping)", ok, "20 random excisions checked")


def test_criterion_8_determinism(tmp_path, monkeypatch):
    """Seeded commands give byte-identical data outputs across repeat
    runs and across parallelism caps."""
    def run_all(subdir, threads):
        monkeypatch.setenv("MFSCALE_THREADS", threads)
        d = tmp_path / subdir
        d.mkdir()
        gen_csv = d / "gen.csv"
        assert main(["generate", "--H", "0.6", "--levels", "11", "--seed", "5",
                     "--out", str(gen_csv)]) == 0
        shuf_csv = d / "shuf.csv"
        assert main(["shuffle", str(gen_csv), "--seed", "9", "--out", str(shuf_csv),
                     "--pipeline", "as-profile"]) == 0
        analysis = d / "analysis"
        assert main(["analyze", str(gen_csv), "--outdir", str(analysis),
                     "--pipeline", "as-profile"]) == 0
        cal = d / "report.json"
        assert main(["calibrate", "--lengths", "256", "--hursts", "0.5",
                     "--ensemble", "2", "--base-seed", "3", "--out", str(cal)]) == 0
        data_files = [
            gen_csv, gen_csv.with_suffix(".meta.json"), shuf_csv, cal,
            analysis / "surface.csv", analysis / "hurst.json",
            analysis / "spectrum.csv", analysis / "metrics.json",
        ]
        return {p.name: p.read_bytes() for p in data_files}, d

    first, d1 = run_all("run1", "1")
    second, d2 = run_all("run2", "4")
    mismatched = [name for name in first if first[name] != second[name]]

    # manifests match too, apart from their wall-clock fields
    def manifest_core(path):
        payload = json.loads(path.read_text())
        payload.pop("wall_clock_s")
        payload.pop("created")
        payload.pop("threads_cap")
        for section in payload.get("inputs", {}).values():
            section.pop("path", None)
        for section in payload.get("outputs", {}).values():
            section.pop("path", None)
        payload.pop("settings", None)
        return payload

    manifest_ok = manifest_core(d1 / "analysis" / "manifest.json") == manifest_core(
        d2 / "analysis" / "manifest.json"
    )
    ok = not mismatched and manifest_ok
    report(
        "criterion 8 (determinism)",
        ok,
        f"byte-identical outputs across runs and thread caps"
        + (f"; mismatches: {mismatched}" if mismatched else ""),
    )


def test_bundled_sample_width_in_calibration_band(tmp_path):
    """End-to-end CLI check: a fixed-seed generated trace analyzed with
    the calibration window grid lands inside the finite-length width
    band for L = 2^14."""
    csv = tmp_path / "sample.csv"
    assert main(["generate", "--H", "0.5", "--levels", "14", "--seed", "1",
                 "--trim", "--out", str(csv)]) == 0
    sizes = mf.calibrate.calibration_window_sizes(2**14)
    outdir = tmp_path / "analysis"
    assert main([
        "analyze", str(csv), "--outdir", str(outdir), "--pipeline", "as-profile",
        "--s-min", str(sizes[0]), "--s-max", str(sizes[-1]),
        "--s-count", str(len(sizes)), "--full-range",
    ]) == 0
    metrics = json.loads((outdir / "metrics.json").read_text())
    ok = 0.12 <= metrics["width"] <= 0.32
    report(
        "fixture sample width",
        ok,
        f"width {metrics['width']:.3f} in [0.12, 0.32]",
    )
