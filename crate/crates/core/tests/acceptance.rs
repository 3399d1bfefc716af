//! Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xychain::analytic::{
    asymptotic_large_field, c1max_n2, c2max_n3, isotropic_c2_peak, isotropic_c2_peak_time, isotropic_zero_field,
    resonance_limit_c1, resonance_limit_c2_type_i, resonance_limit_c2_type_ii, s_critical,
};
use xychain::chain::{peak_width_estimate, primed_labels, resonance_fields, ChainParams, HalfInteger};
use xychain::dynamics::{FreeFermionEvolution, TimeGrid};
use xychain::measures::{c2_x_state, EntanglementPoint, PairDensityX};
use xychain::oracle::{build_hamiltonian, compare_with_fast_path, spectrum_crosscheck, Deviations};
use xychain::scanner::{saturation_threshold, scan_field, scan_point, ScanConfig};

type Check = Result<(bool, String), Box<dyn std::error::Error>>;
type Criterion = (&'static str, fn() -> Check);

fn k(twice: i32) -> HalfInteger {
    HalfInteger::from_twice(twice).unwrap()
}

fn random_instance(rng: &mut ChaCha8Rng, n: usize) -> ChainParams {
    let v = 1.0;
    ChainParams::with_anisotropy(n, rng.gen_range(-2.0 * v..2.0 * v), v, rng.gen_range(0.05..1.5)).unwrap()
}

fn oracle_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = Deviations::default();
    for n in 2..=10 {
        for _ in 0..50 {
            let params = random_instance(&mut rng, n);
            let h = build_hamiltonian(&params)?;
            let times: Vec<f64> = (0..64).map(|_| rng.gen_range(0.0..20.0 / params.v())).collect();
            worst.merge(&compare_with_fast_path(&h, &times)?);
        }
    }
    let detail = Deviations::NAMES
        .iter()
        .zip(worst.values())
        .map(|(name, d)| format!("{name} {d:.1e}"))
        .collect::<Vec<_>>()
        .join(", ");
    Ok((worst.max() < 1e-9, format!("max |Δ| over n = 2..10: {detail}")))
}

fn spectrum() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut all = true;
    for n in 2..=10 {
        for _ in 0..20 {
            let r = spectrum_crosscheck(&random_instance(&mut rng, n), 1e-9)?;
            worst = worst.max(r.max_deviation);
            all &= r.passed;
        }
    }
    Ok((all && worst < 1e-9, format!("max level deviation {worst:.1e}")))
}

fn two_site_curve() -> Check {
    let mut worst = 0.0f64;
    for gamma in [0.25, 1.0] {
        let template = ChainParams::with_anisotropy(2, 0.0, 1.0, gamma)?;
        let mut cfg = ScanConfig::new(template, -3.0, 3.0, 301, 200.0)?;
        cfg.dt = Some(0.01);
        for r in scan_field(&cfg)?.records {
            worst = worst.max((r.c1m_sampled - c1max_n2(r.b / template.g())).abs());
        }
    }
    Ok((worst < 1e-3, format!("max |C1m - closed form| = {worst:.1e}")))
}

fn three_site_curve() -> Check {
    let (v, g) = (1.0, 0.25);
    let step = 0.01;
    let template = ChainParams::new(3, 0.0, v, g)?;
    let s_of = |b: f64| (b - v / 2.0) / g;
    let mut cfg = ScanConfig::new(template, v / 2.0 - 3.0 * g, v / 2.0 + 3.0 * g, 601, 100.0)?;
    cfg.dt = Some(0.001);
    let records = scan_field(&cfg)?.records;
    let c2m = |r: &xychain::scanner::ScanRecord| r.c2m_i.max(r.c2m_ii);

    let curve = records.iter().map(|r| (c2m(r) - c2max_n3(s_of(r.b))).abs()).fold(0.0, f64::max);
    let plateau = records
        .iter()
        .filter(|r| (s_critical() + step..=1.5).contains(&s_of(r.b).abs()))
        .map(|r| (c2m(r) - 1.0 / 3.0).abs())
        .fold(0.0, f64::max);
    let center = &records[300];
    let peak = c2m(center);
    // crossover: outermost |s| on each side where the type II maximum still dominates
    let mut crossings = Vec::new();
    for side in [1.0, -1.0] {
        let last = records
            .iter()
            .map(|r| s_of(r.b) * side)
            .zip(&records)
            .filter(|(s, r)| *s >= 0.0 && r.c2m_ii > r.c2m_i)
            .map(|(s, _)| s)
            .fold(f64::NAN, f64::max);
        crossings.push((last - s_critical()).abs());
    }
    let crossing = crossings.iter().copied().fold(0.0, |a: f64, b| if b.is_nan() { f64::INFINITY } else { a.max(b) });
    let pass = curve < 1e-3 && plateau < 1e-3 && (peak - 2.0 / 3.0).abs() < 1e-3 && crossing <= step;
    Ok((
        pass,
        format!(
            "peak {peak:.5} at s = {:.3}, plateau dev {plateau:.1e}, curve dev {curve:.1e}, crossover offset {crossing:.4} (step {step})",
            s_of(center.b)
        ),
    ))
}

/// Single-field maxima over `[0, t_max]`.
fn maxima_at(params: ChainParams, t_max: f64) -> Result<xychain::scanner::ScanRecord, Box<dyn std::error::Error>> {
    let cfg = ScanConfig::new(params, params.b() - 1.0, params.b() + 1.0, 2, t_max)?;
    Ok(scan_point(&cfg, params.b())?)
}

fn first_max_time(params: &ChainParams, k: HalfInteger) -> f64 {
    PI / (2.0 * peak_width_estimate(params, k).unwrap())
}

fn resonance_c1() -> Check {
    let mut worst = 0.0f64;
    let mut lines = Vec::new();
    for n in [5, 14, 15] {
        let template = ChainParams::with_anisotropy(n, 0.0, 1.0, 0.01)?;
        let limit = resonance_limit_c1(n);
        let mut n_worst = 0.0f64;
        for r in resonance_fields(&template) {
            let rec = maxima_at(template.with_field(r.field)?, first_max_time(&template, r.k))?;
            n_worst = n_worst.max((rec.c1m_sampled / limit - 1.0).abs());
        }
        worst = worst.max(n_worst);
        lines.push(format!("n={n}: limit {limit:.4}, max rel dev {:.2}%", 100.0 * n_worst));
    }
    Ok((worst < 0.02, lines.join("; ")))
}

fn c2_peaks(cases: &[(usize, i32, f64, f64)], type_ii: bool) -> Check {
    let mut pass = true;
    let mut lines = Vec::new();
    for &(n, twice, expected, tol) in cases {
        let template = ChainParams::with_anisotropy(n, 0.0, 1.0, 0.01)?;
        let label = k(twice);
        let b = label.angle(n).cos();
        let t_k = first_max_time(&template, label);
        // the type I maximum lies within one period of sin² λt, 2 t_k
        let rec = maxima_at(template.with_field(b)?, if type_ii { 1.1 * t_k } else { 2.0 * t_k })?;
        let got = if type_ii { rec.c2m_ii } else { rec.c2m_i };
        let limit = if type_ii {
            resonance_limit_c2_type_ii(n, label)?.value
        } else {
            resonance_limit_c2_type_i(n, label)?.value
        };
        let ok = (got - expected).abs() <= tol;
        pass &= ok;
        lines.push(format!("n={n} b={b:.3}: {got:.4} (target {expected} ± {tol}, limit {limit:.4})"));
    }
    Ok((pass, lines.join("; ")))
}

fn type_ii_peaks() -> Check {
    c2_peaks(
        &[
            (4, 1, 0.46, 0.02),
            (5, 1, 0.41, 0.02),
            (14, 1, 0.22, 0.02),
            (15, 1, 0.21, 0.02),
            (15, 3, 0.08, 0.02),
            (15, 13, 0.15, 0.02),
        ],
        true,
    )
}

fn type_i_peaks() -> Check {
    c2_peaks(
        &[(4, 1, 0.14, 0.01), (5, 1, 0.07, 0.01), (5, 3, 0.20, 0.01), (14, 7, 0.07, 0.01), (15, 7, 0.06, 0.01)],
        false,
    )
}

fn isotropic_case() -> Check {
    let v = 1.0;
    let mut worst = 0.0f64;
    let mut peak_dev = 0.0f64;
    for n in 4..=12 {
        let params = ChainParams::new(n, 0.0, v, v)?;
        let evolution = FreeFermionEvolution::from_params(&params);
        let grid = TimeGrid::new(20.0, 0.005)?;
        for t in grid.times() {
            let c = evolution.pair_contractions(t)?;
            let point = EntanglementPoint::from_contractions(&c)?;
            let exact = isotropic_zero_field(v, t)?;
            let alpha = (c.alpha - num_complex::Complex64::new(0.0, -0.25 * (2.0 * v * t).sin())).norm();
            for d in [c.p - exact.p, point.c1 - exact.c1, point.c2 - exact.c2, c.beta, alpha] {
                worst = worst.max(d.abs());
            }
        }
        let at_peak = EntanglementPoint::from_contractions(&evolution.pair_contractions(isotropic_c2_peak_time(v))?)?;
        peak_dev = peak_dev.max((at_peak.c2 - isotropic_c2_peak()).abs());
    }
    Ok((
        worst < 1e-10 && peak_dev < 1e-10,
        format!("pointwise max dev {worst:.1e}; C2 maximum dev {peak_dev:.1e} (target {:.6})", isotropic_c2_peak()),
    ))
}

fn dips() -> Check {
    let template = ChainParams::with_anisotropy(4, 0.0, 1.0, 1.0)?;
    let b = 1.802;
    let rec = maxima_at(template.with_field(b)?, 200.0)?;
    let ratio = rec.p_max_sampled / rec.p_m;
    let gap = rec.c1m_envelope - rec.c1m_sampled;
    // the gap between sampled and envelope maxima must be locally largest at the dip
    let mut cfg = ScanConfig::new(template, b - 0.1, b + 0.1, 41, 200.0)?;
    cfg.dt = Some(0.01);
    let scan = scan_field(&cfg)?;
    let gaps: Vec<f64> = scan.records.iter().map(|r| r.c1m_envelope - r.c1m_sampled).collect();
    let edge_gap = gaps[0].max(gaps[gaps.len() - 1]);
    let pass = (ratio / 0.8 - 1.0).abs() < 0.01 && gap > 2.0 * edge_gap;
    Ok((
        pass,
        format!(
            "max p / p_m = {ratio:.4} (target 0.8), C1m sampled {:.4} vs envelope {:.4}, gap at b ± 0.1 ≤ {edge_gap:.4}",
            rec.c1m_sampled, rec.c1m_envelope
        ),
    ))
}

fn asymptotics() -> Check {
    let (n, v, gamma, b) = (6, 1.0, 0.5, 50.0);
    let params = ChainParams::with_anisotropy(n, b, v, gamma)?;
    let rec = maxima_at(params, 40.0 / v)?;
    let expected = asymptotic_large_field(n, b, v, params.g())?;
    let c2m = rec.c2m_i.max(rec.c2m_ii);
    let d1 = rec.c1m_sampled / expected.c1_max - 1.0;
    let d2 = c2m / expected.c2_max - 1.0;
    let dr = c2m / rec.c1m_sampled / FRAC_1_SQRT_2 - 1.0;
    let pass = d1.abs() < 0.02 && d2.abs() < 0.02 && dr.abs() < 0.02;
    Ok((
        pass,
        format!(
            "C1m {:.5} ({:+.2}%), C2m {c2m:.5} ({:+.2}%), ratio {:.4} ({:+.2}%)",
            rec.c1m_sampled,
            100.0 * d1,
            100.0 * d2,
            c2m / rec.c1m_sampled,
            100.0 * dr
        ),
    ))
}

fn first_local_max(values: &[(f64, f64)]) -> Option<(f64, f64)> {
    values.windows(3).find(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1).map(|w| w[1])
}

fn anisotropy_burst() -> Check {
    let (n, v, g) = (10, 1.0, 10.0);
    let params = ChainParams::new(n, 0.0, v, g)?;
    let evolution = FreeFermionEvolution::from_params(&params);
    let grid = TimeGrid::new(0.5, 1e-5)?;
    let mut p = Vec::with_capacity(grid.samples);
    let mut c2 = Vec::with_capacity(grid.samples);
    for t in grid.times() {
        let c = evolution.pair_contractions(t)?;
        p.push((t, c.p));
        c2.push((t, c2_x_state(&PairDensityX::from(&c))?.0));
    }
    let (tp, pmax) = first_local_max(&p).ok_or("no p maximum")?;
    let (tc, cmax) = first_local_max(&c2).ok_or("no C2 maximum")?;
    let pass = (g * tp / 1.92 - 1.0).abs() <= 0.05
        && (pmax - 0.70).abs() <= 0.02
        && (g * tc / 0.66 - 1.0).abs() <= 0.05
        && (cmax - 0.35).abs() <= 0.02;
    Ok((pass, format!("p: first max {pmax:.4} at gt = {:.4}; C2: first max {cmax:.4} at gt = {:.4}", g * tp, g * tc)))
}

fn saturation() -> Check {
    let mut pass = true;
    let mut lines = Vec::new();
    for (n, expected) in [(5, 0.67), (14, 0.92)] {
        let gc = saturation_threshold(n, 1.0, (-2.0, 2.0), 1e-4)?;
        pass &= (gc - expected).abs() <= 0.02;
        lines.push(format!("n={n}: γ_c = {gc:.4} (target {expected} ± 0.02)"));
    }
    Ok((pass, lines.join("; ")))
}

fn properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut violations = Vec::new();
    let mut margin_min = f64::INFINITY;
    let mut order_min = f64::INFINITY;
    for n in 2..=15 {
        for _ in 0..10 {
            let params = random_instance(&mut rng, n);
            let evolution = FreeFermionEvolution::from_params(&params);
            for t in TimeGrid::new(40.0, 0.01)?.times() {
                let c = evolution.pair_contractions(t)?;
                let point = EntanglementPoint::from_contractions(&c)?;
                let pd = PairDensityX::from(&c);
                let (m1, m2) = pd.type_margins();
                margin_min = margin_min.min(pd.p2 - c.beta.abs()).min(pd.p1 * pd.p3 - c.alpha.norm_sqr());
                order_min = order_min.min(point.c1 - point.c2).min(point.e1 - point.e2);
                if m1 > 1e-10 && m2 > 1e-10 {
                    violations.push(format!("both types at {params} t = {t}"));
                }
            }
        }
    }
    if margin_min < -1e-10 {
        violations.push(format!("positivity margin {margin_min:e}"));
    }
    // roundoff allowance only; both sides are O(1) quantities
    if order_min < -1e-12 {
        violations.push(format!("C1 - C2 or E1 - E2 = {order_min:e}"));
    }

    // b → -b symmetry of even-chain scans
    let mut sym = 0.0f64;
    for n in [4, 6, 8] {
        let template = ChainParams::with_anisotropy(n, 0.0, 1.0, 0.3)?;
        let records = scan_field(&ScanConfig::new(template, -1.5, 1.5, 61, 40.0)?)?.records;
        for (a, b) in records.iter().zip(records.iter().rev()) {
            for (x, y) in [(a.c1m_sampled, b.c1m_sampled), (a.c2m_i, b.c2m_i), (a.c2m_ii, b.c2m_ii), (a.p_m, b.p_m)] {
                sym = sym.max((x - y).abs());
            }
        }
    }
    if sym > 1e-9 {
        violations.push(format!("even-n field symmetry {sym:e}"));
    }

    // peak count [n/2] at γ = 0.02
    let mut counts = Vec::new();
    for n in 2..=15 {
        let template = ChainParams::with_anisotropy(n, 0.0, 1.0, 0.02)?;
        let labels = primed_labels(n);
        let min_width =
            labels.iter().map(|&l| peak_width_estimate(&template, l).unwrap()).fold(f64::INFINITY, f64::min);
        let t_max = 1.1 * labels.iter().map(|&l| first_max_time(&template, l)).fold(0.0, f64::max);
        let steps = (2.2 / (min_width / 5.0)).ceil() as usize + 1;
        let result = scan_field(&ScanConfig::new(template, -1.1, 1.1, steps, t_max)?)?;
        let matched = result.peaks.iter().filter(|p| p.matched_k.is_some()).count();
        let distinct = {
            let mut ks: Vec<_> = result.peaks.iter().filter_map(|p| p.matched_k).collect();
            ks.dedup();
            ks.len()
        };
        if result.peaks.len() != n / 2 || matched != n / 2 || distinct != n / 2 {
            violations.push(format!("n={n}: {} peaks ({matched} matched), expected {}", result.peaks.len(), n / 2));
        }
        counts.push(result.peaks.len().to_string());
    }
    let detail = format!(
        "min positivity margin {margin_min:.1e}, min C1-C2/E1-E2 {order_min:.1e}, even-n asymmetry {sym:.1e}, peak counts n=2..15: [{}]",
        counts.join(",")
    );
    let pass = violations.is_empty();
    Ok((pass, if pass { detail } else { format!("{detail}; {}", violations.join("; ")) }))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("oracle equivalence", oracle_equivalence),
        ("spectrum cross-check", spectrum),
        ("n=2 maximum curve", two_site_curve),
        ("n=3 pair concurrence curve", three_site_curve),
        ("resonance limits of C1", resonance_c1),
        ("type II peak heights", type_ii_peaks),
        ("type I limits", type_i_peaks),
        ("isotropic periodic case", isotropic_case),
        ("rational-ratio dip", dips),
        ("large-field asymptotics", asymptotics),
        ("large-anisotropy burst", anisotropy_burst),
        ("saturation thresholds", saturation),
        ("property suite", properties),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("[{tag}] AC-{} {name}: {detail} ({:.1}s)", i + 1, start.elapsed().as_secs_f64());
        failed += usize::from(!pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
