//! One function per subcommand. Each returns a report and, separately, the
//! exit status it implies.

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use xychain::analytic::{self, AnalyticError};
use xychain::chain::{mode_spectrum, symmetry_partner, ChainError, ChainParams, HalfInteger};
use xychain::dynamics::{DynamicsError, FreeFermionEvolution, TimeGrid};
use xychain::measures::{EntanglementPoint, MeasureError, PairDensityX, PairType};
use xychain::oracle::{
    build_hamiltonian, compare_with_fast_path, evolve_dense, monogamy_check, oracle_sample, spectrum_crosscheck,
    Deviations, OracleError,
};
use xychain::scanner::{scan_field, ScanConfig, ScanError, ORDER_TOL};

use crate::args::{
    AnalyticCommand, ChainArgs, Command, EvolveArgs, Grid, ModesArgs, ScanArgs, TemplateArgs, ValidateArgs,
};
use crate::output::{Report, RunManifest, Table, Value};
use crate::svg::{self, Series, Stroke};
use crate::CliError;

/// Largest fast-path vs oracle deviation accepted by `validate` and `evolve --oracle`.
pub const ORACLE_TOL: f64 = 1e-9;

#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub svg: Option<(PathBuf, String)>,
    pub warnings: Vec<String>,
    /// Failure found after the report was complete; the report is still written.
    pub status: Option<CliError>,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Self { report, svg: None, warnings: Vec::new(), status: None }
    }
}

impl From<ChainError> for CliError {
    fn from(e: ChainError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::ConstraintViolation { .. } => CliError::Invariant(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<MeasureError> for CliError {
    fn from(e: MeasureError) -> Self {
        CliError::Invariant(e.to_string())
    }
}

impl From<ScanError> for CliError {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::Config(_) | ScanError::Chain(_) => CliError::Usage(e.to_string()),
            ScanError::Dynamics(d) => d.into(),
            ScanError::Invariant { .. } | ScanError::Measure(_) => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::CapExceeded { .. } | OracleError::BadSite(_) => CliError::Usage(e.to_string()),
            OracleError::Dynamics(d) => d.into(),
            OracleError::SymmetryViolation(_) | OracleError::Measure(_) => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<AnalyticError> for CliError {
    fn from(e: AnalyticError) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Modes(a) => modes(a),
        Command::Evolve(a) => evolve(a),
        Command::Scan(a) => scan(a),
        Command::Validate(a) => validate(a),
        Command::Analytic(a) => analytic_table(a).map(Outcome::ok),
    }
}

fn pairing(n: usize, b: f64, v: f64, g: Option<f64>, gamma: Option<f64>) -> Result<ChainParams, CliError> {
    match (g, gamma) {
        (Some(g), None) => Ok(ChainParams::new(n, b, v, g)?),
        (None, Some(gamma)) => Ok(ChainParams::with_anisotropy(n, b, v, gamma)?),
        _ => Err(CliError::Usage("give exactly one of --g and --gamma".into())),
    }
}

fn chain_params(a: &ChainArgs) -> Result<ChainParams, CliError> {
    pairing(a.n, a.b, a.v, a.g, a.gamma)
}

fn template_params(a: &TemplateArgs) -> Result<ChainParams, CliError> {
    pairing(a.n, 0.0, a.v, a.g, a.gamma)
}

/// Times are read and written as `vt` when `v > 0`.
fn time_unit(params: &ChainParams) -> (f64, &'static str) {
    if params.v() > 0.0 {
        (params.v(), "vt")
    } else {
        (1.0, "t")
    }
}

fn chain_manifest(command: &str, p: &ChainParams, with_field: bool) -> RunManifest {
    let mut m = RunManifest::new(command).with("n", p.n());
    if with_field {
        m.push("b", p.b());
    }
    m.push("v", p.v());
    m.push("g", p.g());
    m.push("gamma", p.gamma());
    m
}

fn modes(a: &ModesArgs) -> Result<Outcome, CliError> {
    let params = chain_params(&a.chain)?;
    let spectrum = mode_spectrum(&params);
    let list = if a.all { &spectrum.full } else { &spectrum.positive };
    let mut table = Table::new(&["k", "omega", "lambda", "u2", "v2", "b_k", "at_resonance"]);
    for m in list {
        let b_k = params.v() * m.omega.cos();
        let half_width = params.g() * m.omega.sin().abs();
        table.push(vec![
            m.k.value().into(),
            m.omega.into(),
            m.lambda.into(),
            m.bcs.map(|c| c.u2).into(),
            m.bcs.map(|c| c.v2).into(),
            b_k.into(),
            ((params.b() - b_k).abs() <= half_width).into(),
        ]);
    }
    let manifest = chain_manifest("modes", &params, true).with("modes", if a.all { "all" } else { "primed" });
    Ok(Outcome::ok(Report::new(manifest, table)))
}

const EVOLVE_COLUMNS: [&str; 11] = ["t", "p", "C1", "E1", "C2", "c2_type", "E2", "alpha_re", "alpha_im", "beta", "p1"];
const ORACLE_COLUMNS: [&str; 7] =
    ["oracle_p", "oracle_C1", "oracle_C2", "oracle_alpha_re", "oracle_alpha_im", "oracle_beta", "oracle_p1"];

fn check_point(e: &EntanglementPoint, pd: &PairDensityX) -> Result<(), CliError> {
    if e.c2 > e.c1 + ORDER_TOL || e.e2 > e.e1 + ORDER_TOL {
        return Err(CliError::Invariant(format!("pair entanglement exceeds one-site entanglement at t = {}", e.t)));
    }
    let (m1, m2) = pd.type_margins();
    if m1 > ORDER_TOL && m2 > ORDER_TOL {
        return Err(CliError::Invariant(format!("both concurrence types positive at t = {}", e.t)));
    }
    Ok(())
}

fn evolve(a: &EvolveArgs) -> Result<Outcome, CliError> {
    let params = chain_params(&a.chain)?;
    let (unit, time_name) = time_unit(&params);
    let t_max = a.t_max / unit;
    let grid = match a.dt {
        Some(dt) => TimeGrid::new(t_max, dt / unit)?,
        None => TimeGrid::default_for(&params, t_max)?,
    };
    let hamiltonian = if a.oracle { Some(build_hamiltonian(&params)?) } else { None };
    let series = FreeFermionEvolution::from_params(&params).evolve(&grid)?;

    let rows = series
        .par_iter()
        .map(|c| {
            let e = EntanglementPoint::from_contractions(c)?;
            let pd = PairDensityX::from(c);
            check_point(&e, &pd)?;
            let mut row: Vec<Value> = vec![
                (c.t * unit).into(),
                c.p.into(),
                e.c1.into(),
                e.e1.into(),
                e.c2.into(),
                e.c2_type.label().into(),
                e.e2.into(),
                c.alpha.re.into(),
                c.alpha.im.into(),
                c.beta.into(),
                c.p1.into(),
            ];
            let mut dev = Deviations::default();
            if let Some(h) = &hamiltonian {
                let o = oracle_sample(h, c.t)?;
                dev = Deviations {
                    p: (o.p - c.p).abs(),
                    beta: (o.pair.beta - c.beta).abs(),
                    alpha_re: (o.pair.alpha.re - c.alpha.re).abs(),
                    alpha_im: (o.pair.alpha.im - c.alpha.im).abs(),
                    p1: (o.pair.p1 - c.p1).abs(),
                    c1: (o.c1 - e.c1).abs(),
                    c2: (o.c2 - e.c2).abs(),
                };
                row.extend(
                    [o.p, o.c1, o.c2, o.pair.alpha.re, o.pair.alpha.im, o.pair.beta, o.pair.p1].map(Value::from),
                );
            }
            Ok((row, (c.t * unit, e.c1, e.c2, e.c2_type), dev))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut columns: Vec<&str> = EVOLVE_COLUMNS.to_vec();
    if a.oracle {
        columns.extend(ORACLE_COLUMNS);
    }
    let mut table = Table::new(&columns);
    let mut worst = Deviations::default();
    for (row, _, dev) in &rows {
        table.push(row.clone());
        worst.merge(dev);
    }

    let manifest = chain_manifest("evolve", &params, true)
        .with("time", time_name)
        .with("t_max", a.t_max)
        .with("dt", grid.dt * unit)
        .with("samples", grid.samples)
        .with("oracle", a.oracle);
    let mut report = Report::new(manifest, table);
    let mut status = None;
    if a.oracle {
        for (name, value) in Deviations::NAMES.iter().zip(worst.values()) {
            report.summary.push((format!("max_deviation_{name}"), value.into()));
        }
        if worst.max() > ORACLE_TOL {
            status = Some(CliError::OracleMismatch(format!("max deviation {:e} exceeds {ORACLE_TOL:e}", worst.max())));
        }
    }

    let svg = a.svg.clone().map(|path| {
        let c1: Vec<(f64, f64)> = rows.iter().map(|r| (r.1 .0, r.1 .1)).collect();
        let c2: Vec<(f64, f64, PairType)> = rows.iter().map(|r| (r.1 .0, r.1 .2, r.1 .3)).collect();
        let mut series = vec![Series::line("C1", "black", Stroke::Solid, c1)];
        let (mut type_i, mut type_ii) = (Vec::new(), Vec::new());
        for (kind, run) in svg::split_runs(&c2) {
            match kind {
                PairType::I => type_i.push(run),
                PairType::II => type_ii.push(run),
                PairType::None => {}
            }
        }
        series.push(Series { label: "C2 type I".into(), color: "red", stroke: Stroke::Solid, segments: type_i });
        series.push(Series { label: "C2 type II".into(), color: "hotpink", stroke: Stroke::Dashed, segments: type_ii });
        (path, svg::render(&format!("evolve {params}"), time_name, "concurrence", &series))
    });
    Ok(Outcome { report, svg, warnings: Vec::new(), status })
}

fn scan(a: &ScanArgs) -> Result<Outcome, CliError> {
    let template = template_params(&a.chain)?;
    let (unit, time_name) = time_unit(&template);
    let mut cfg = ScanConfig::with_defaults(template)?;
    cfg.b_min = a.b_min.unwrap_or(cfg.b_min);
    cfg.b_max = a.b_max.unwrap_or(cfg.b_max);
    cfg.b_steps = a.b_steps.unwrap_or(cfg.b_steps);
    cfg.t_max = a.t_max.map_or(cfg.t_max, |t| t / unit);
    cfg.dt = a.dt.map(|dt| dt / unit);
    cfg.prominence = a.prominence.unwrap_or(cfg.prominence);
    cfg.validate()?;
    let result = scan_field(&cfg)?;

    let mut table = Table::new(&["b", "C1m_sampled", "C1m_envelope", "C2m_I", "C2m_II", "p_m", "p_max_sampled"]);
    for r in &result.records {
        table.push(
            [r.b, r.c1m_sampled, r.c1m_envelope, r.c2m_i, r.c2m_ii, r.p_m, r.p_max_sampled].map(Value::from).to_vec(),
        );
    }
    let mut peaks = Table::new(&["b_peak", "height", "prominence", "width_estimate", "matched_k", "matched_field"]);
    for p in &result.peaks {
        peaks.push(vec![
            p.b_peak.into(),
            p.height.into(),
            p.prominence.into(),
            p.width_estimate.into(),
            p.matched_k.map(HalfInteger::value).into(),
            p.matched_field.into(),
        ]);
    }
    let manifest = chain_manifest("scan", &template, false)
        .with("b_min", cfg.b_min)
        .with("b_max", cfg.b_max)
        .with("b_steps", cfg.b_steps)
        .with("time", time_name)
        .with("t_max", cfg.t_max * unit)
        .with("dt_cap", cfg.dt.map(|dt| dt * unit))
        .with("prominence", cfg.prominence);
    let mut report = Report::new(manifest, table);
    report.peaks = Some(peaks);

    let svg = a.svg.clone().map(|path| {
        let column = |f: fn(&xychain::scanner::ScanRecord) -> f64| result.records.iter().map(|r| (r.b, f(r))).collect();
        let series = [
            Series::line("C1m sampled", "black", Stroke::Solid, column(|r| r.c1m_sampled)),
            Series::line("C1m envelope", "black", Stroke::Dotted, column(|r| r.c1m_envelope)),
            Series::line("C2m type I", "red", Stroke::Solid, column(|r| r.c2m_i)),
            Series::line("C2m type II", "hotpink", Stroke::Dashed, column(|r| r.c2m_ii)),
        ];
        (
            path,
            svg::render(
                &format!("scan n={} v={} g={}", template.n(), template.v(), template.g()),
                "b",
                "maximum",
                &series,
            ),
        )
    });
    Ok(Outcome { report, svg, warnings: result.warnings, status: None })
}

#[derive(Debug, Default)]
struct SizeReport {
    deviations: Deviations,
    spectrum: f64,
    monogamy_checks: usize,
    monogamy_violations: usize,
    symmetry: f64,
    symmetry_errors: Vec<String>,
    /// Largest `C2/C1`; tracked for three sites only.
    ratio: Option<f64>,
}

/// Times per instance at which the monogamy check is run.
const MONOGAMY_SAMPLES: usize = 4;

fn validate_size(n: usize, a: &ValidateArgs) -> Result<SizeReport, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    rng.set_stream(n as u64);
    let v = a.v;
    let mut out = SizeReport { ratio: (n == 3).then_some(0.0), ..Default::default() };
    for _ in 0..a.draws {
        let b = rng.gen_range(-2.0 * v..=2.0 * v);
        let gamma = rng.gen_range(0.05..=1.5);
        let times: Vec<f64> = (0..a.times).map(|_| rng.gen_range(0.0..=20.0 / v)).collect();
        let params = ChainParams::with_anisotropy(n, b, v, gamma)?;
        let h = build_hamiltonian(&params)?;
        match compare_with_fast_path(&h, &times) {
            Ok(d) => out.deviations.merge(&d),
            Err(OracleError::SymmetryViolation(msg)) => out.symmetry_errors.push(format!("{params}: {msg}")),
            Err(e) => return Err(e.into()),
        }
        out.spectrum = out.spectrum.max(spectrum_crosscheck(&params, ORACLE_TOL)?.max_deviation);
        for &t in times.iter().take(MONOGAMY_SAMPLES) {
            out.monogamy_checks += 1;
            if !monogamy_check(&evolve_dense(&h, t))?.holds {
                out.monogamy_violations += 1;
            }
        }
        let fast = FreeFermionEvolution::from_params(&params);
        let partner = FreeFermionEvolution::from_params(&symmetry_partner(&params));
        for &t in &times {
            let e = EntanglementPoint::from_contractions(&fast.pair_contractions(t)?)?;
            let f = EntanglementPoint::from_contractions(&partner.pair_contractions(t)?)?;
            out.symmetry = out.symmetry.max((e.c1 - f.c1).abs()).max((e.c2 - f.c2).abs());
            if let Some(r) = out.ratio.as_mut() {
                if e.c1 > 1e-12 {
                    *r = r.max(e.c2 / e.c1);
                }
            }
        }
    }
    Ok(out)
}

fn validate(a: &ValidateArgs) -> Result<Outcome, CliError> {
    if a.n.0.is_empty() || a.draws == 0 || a.times == 0 {
        return Err(CliError::Usage("validate needs at least one size, draw and time".into()));
    }
    if !(a.v > 0.0 && a.v.is_finite()) {
        return Err(CliError::Usage(format!("v must be positive, got {}", a.v)));
    }
    let reports = a.n.0.par_iter().map(|&n| validate_size(n, a)).collect::<Result<Vec<_>, _>>()?;

    let mut columns = vec!["n", "draws"];
    columns.extend(Deviations::NAMES);
    columns.extend(["spectrum", "monogamy_checks", "monogamy_violations", "symmetry", "C2_over_C1_max", "status"]);
    let mut table = Table::new(&columns);
    let (mut mismatch, mut invariant) = (Vec::new(), Vec::new());
    for (&n, r) in a.n.0.iter().zip(&reports) {
        let oracle_ok = r.deviations.max() <= ORACLE_TOL && r.spectrum <= ORACLE_TOL;
        let ratio_ok = r.ratio.is_none_or(|x| x <= FRAC_1_SQRT_2 + ORACLE_TOL);
        let invariants_ok =
            r.monogamy_violations == 0 && r.symmetry <= ORACLE_TOL && r.symmetry_errors.is_empty() && ratio_ok;
        if !oracle_ok {
            mismatch.push(n);
        }
        if !invariants_ok {
            invariant.push(n);
        }
        let mut row: Vec<Value> = vec![n.into(), a.draws.into()];
        row.extend(r.deviations.values().map(Value::from));
        row.extend([
            r.spectrum.into(),
            r.monogamy_checks.into(),
            r.monogamy_violations.into(),
            r.symmetry.into(),
            r.ratio.into(),
            (if oracle_ok && invariants_ok { "ok" } else { "FAIL" }).into(),
        ]);
        table.push(row);
    }
    let sizes = a.n.0.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    let manifest = RunManifest::new("validate")
        .with("n", sizes)
        .with("draws", a.draws)
        .with("times", a.times)
        .with("seed", a.seed)
        .with("v", a.v)
        .with("tolerance", ORACLE_TOL);
    let status = if !mismatch.is_empty() {
        Some(CliError::OracleMismatch(format!("fast path and oracle disagree for n = {mismatch:?}")))
    } else if !invariant.is_empty() {
        let details: Vec<&String> = reports.iter().flat_map(|r| &r.symmetry_errors).collect();
        Some(CliError::Invariant(format!("invariant checks failed for n = {invariant:?} {details:?}")))
    } else {
        None
    };
    Ok(Outcome { report: Report::new(manifest, table), svg: None, warnings: Vec::new(), status })
}

fn parse_mode(s: &str) -> Result<HalfInteger, CliError> {
    let bad = || CliError::Usage(format!("k must be a positive half-integer such as 1/2 or 1.5, got {s:?}"));
    let twice = match s.split_once('/') {
        Some((num, "2")) => num.trim().parse::<i32>().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
        None => {
            let x: f64 = s.trim().parse().map_err(|_| bad())?;
            let twice = (2.0 * x).round();
            if (2.0 * x - twice).abs() > 1e-12 {
                return Err(bad());
            }
            twice as i32
        }
    };
    HalfInteger::from_twice(twice).ok_or_else(bad)
}

fn grid_points(grid: &Grid, steps: usize) -> Result<Vec<f64>, CliError> {
    grid.points(steps).map_err(CliError::Usage)
}

fn analytic_table(cmd: &AnalyticCommand) -> Result<Report, CliError> {
    use AnalyticCommand as A;
    let report = match cmd {
        A::C1maxN2 { s, steps } | A::C1maxN3 { s, steps } => {
            let (name, f): (_, fn(f64) -> f64) = if matches!(cmd, A::C1maxN2 { .. }) {
                ("c1max-n2", analytic::c1max_n2)
            } else {
                ("c1max-n3", analytic::c1max_n3)
            };
            let mut t = Table::new(&["s", "C1max"]);
            for x in grid_points(s, *steps)? {
                t.push(vec![x.into(), f(x).into()]);
            }
            Report::new(RunManifest::new(format!("analytic {name}")).with("s", s.describe()).with("steps", *steps), t)
        }
        A::C2maxN3 { s, steps } => {
            let mut t = Table::new(&["s", "C2max", "type"]);
            for x in grid_points(s, *steps)? {
                t.push(vec![x.into(), analytic::c2max_n3(x).into(), analytic::c2max_n3_type(x).label().into()]);
            }
            Report::new(RunManifest::new("analytic c2max-n3").with("s", s.describe()).with("steps", *steps), t)
        }
        A::C2OfPN3 { p, steps } => {
            let mut t = Table::new(&["p", "C2", "type"]);
            for x in grid_points(p, *steps)? {
                let (c, kind) = analytic::c2_of_p_n3(x)?;
                t.push(vec![x.into(), c.into(), kind.label().into()]);
            }
            Report::new(RunManifest::new("analytic c2-of-p-n3").with("p", p.describe()).with("steps", *steps), t)
        }
        A::ResonanceC1 { n } => {
            let mut t = Table::new(&["n", "C1"]);
            for &size in &n.0 {
                if size < 2 {
                    return Err(CliError::Usage(format!("chain needs at least two sites, got n = {size}")));
                }
                t.push(vec![size.into(), analytic::resonance_limit_c1(size).into()]);
            }
            let sizes = n.0.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            Report::new(RunManifest::new("analytic resonance-c1").with("n", sizes), t)
        }
        A::ResonanceC2 { n } => {
            let mut t = Table::new(&["k", "omega", "b_k_over_v", "C2_II", "sin2_bound", "positive", "C2_I", "cos_2lt"]);
            for k in xychain::chain::primed_labels(*n) {
                let omega = k.angle(*n);
                let ii = analytic::resonance_limit_c2_type_ii(*n, k)?;
                let i = analytic::resonance_limit_c2_type_i(*n, k)?;
                t.push(vec![
                    k.value().into(),
                    omega.into(),
                    omega.cos().into(),
                    ii.value.into(),
                    ii.sin2_bound.into(),
                    ii.positive.into(),
                    i.value.into(),
                    i.cos_2lt.into(),
                ]);
            }
            Report::new(RunManifest::new("analytic resonance-c2").with("n", *n), t)
        }
        A::Harmonic { n, k, g, t: times, steps } => {
            let mode = parse_mode(k)?;
            let mut t = Table::new(&["t", "p", "beta", "alpha_abs"]);
            let mut first_max = None;
            for x in grid_points(times, *steps)? {
                let h = analytic::harmonic_limit_series(*n, mode, *g, x)?;
                first_max = Some(h.t_first_max);
                t.push(vec![x.into(), h.p.into(), h.beta.into(), h.alpha_abs.into()]);
            }
            let manifest = RunManifest::new("analytic harmonic")
                .with("n", *n)
                .with("k", mode.value())
                .with("g", *g)
                .with("t", times.describe())
                .with("steps", *steps);
            let mut r = Report::new(manifest, t);
            r.summary.push(("t_first_max".into(), first_max.into()));
            r
        }
        A::Isotropic { v, t: times, steps } => {
            let mut t = Table::new(&["t", "p", "C1", "C2"]);
            for x in grid_points(times, *steps)? {
                let i = analytic::isotropic_zero_field(*v, x)?;
                t.push(vec![x.into(), i.p.into(), i.c1.into(), i.c2.into()]);
            }
            let manifest =
                RunManifest::new("analytic isotropic").with("v", *v).with("t", times.describe()).with("steps", *steps);
            let mut r = Report::new(manifest, t);
            r.summary.push(("c2_peak_time".into(), analytic::isotropic_c2_peak_time(*v).into()));
            r.summary.push(("c2_peak".into(), analytic::isotropic_c2_peak().into()));
            r
        }
        A::ShortTime { n, b, v, g, t: times, steps } => {
            let mut t = Table::new(&["t", "p", "C1", "C2", "validity"]);
            for x in grid_points(times, *steps)? {
                let s = analytic::short_time_series(*n, *b, *v, *g, x)?;
                t.push(vec![x.into(), s.p.into(), s.c1.into(), s.c2.into(), s.validity.into()]);
            }
            let manifest = RunManifest::new("analytic short-time")
                .with("n", *n)
                .with("b", *b)
                .with("v", *v)
                .with("g", *g)
                .with("t", times.describe())
                .with("steps", *steps);
            Report::new(manifest, t)
        }
        A::DipN4 { gamma, steps } => {
            let mut t = Table::new(&["gamma", "b_low_over_v", "b_high_over_v"]);
            for x in grid_points(gamma, *steps)? {
                let (lo, hi) = analytic::dip_fields_n4(x)?;
                t.push(vec![x.into(), lo.into(), hi.into()]);
            }
            Report::new(RunManifest::new("analytic dip-n4").with("gamma", gamma.describe()).with("steps", *steps), t)
        }
        A::LargeField { n, b, v, g, steps } => {
            let mut t = Table::new(&["b", "C1max", "C2max", "validity"]);
            for x in grid_points(b, *steps)? {
                let l = analytic::asymptotic_large_field(*n, x, *v, *g)?;
                t.push(vec![x.into(), l.c1_max.into(), l.c2_max.into(), l.validity.into()]);
            }
            let manifest = RunManifest::new("analytic large-field")
                .with("n", *n)
                .with("b", b.describe())
                .with("v", *v)
                .with("g", *g)
                .with("steps", *steps);
            Report::new(manifest, t)
        }
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_labels_parse() {
        assert_eq!(parse_mode("1/2").unwrap().twice(), 1);
        assert_eq!(parse_mode("1.5").unwrap().twice(), 3);
        assert!(parse_mode("1").is_err());
        assert!(parse_mode("3/4").is_err());
        assert!(parse_mode("x").is_err());
    }
}
