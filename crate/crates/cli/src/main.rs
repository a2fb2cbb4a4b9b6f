//! Data tables for the decay-rate correction, Mie amplitudes, the `E_n`
//! asymptotics, and the Monte Carlo validation report.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use granular_decay::decay::{decay_correction_f, gamma_from_f, U_OFFSET};
use granular_decay::mcvalidate::{
    analytic_first_order, born_first_order_study, estimate_filling, estimate_pair_overlap,
    estimate_surface_moment_i2, BallRule, Ensemble, EstimateWithError, Sampling, SlabGeometry,
};
use granular_decay::medium::{mean_filling_profile, overlap_c, overlap_i2};
use granular_decay::mie::{
    effective_kernel_tensor, mie_amplitudes, mie_amplitudes_small_q, mie_kernel_tensor, SmallQForm, LMAX_DEFAULT,
};
use granular_decay::specfun::{exp_integral_en, exp_integral_en_asymptotic};
use granular_decay::{Position, Vec3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "granular-decay", version, about = "Decay of an atom near a granular half-space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Correction function f(ζ) for the scattering and absorbing sphere media.
    Figure1(Figure1Args),
    /// Mie amplitudes against their small-sphere expansions.
    MieTable(MieArgs),
    /// Largest difference between the medium kernel and χ times the single-sphere kernel.
    Consistency(ConsistencyArgs),
    /// Monte Carlo estimates against the analytic filling statistics and Born term.
    McValidate(McArgs),
    /// E_n(−2iζ): quadrature against the asymptotic series.
    EnTable(EnArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Output {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct Grid {
    #[arg(long, default_value_t = 5.0)]
    zeta_min: f64,
    #[arg(long, default_value_t = 25.0)]
    zeta_max: f64,
    #[arg(long, default_value_t = 400)]
    points: usize,
}

impl Grid {
    fn values(&self) -> Result<Vec<f64>> {
        if !(self.zeta_min > 0.0 && self.zeta_min < self.zeta_max && self.zeta_max.is_finite()) {
            bail!("need 0 < --zeta-min < --zeta-max, got {} and {}", self.zeta_min, self.zeta_max);
        }
        if self.points < 2 {
            bail!("--points must be at least 2, got {}", self.points);
        }
        let step = (self.zeta_max - self.zeta_min) / (self.points - 1) as f64;
        Ok((0..self.points).map(|i| self.zeta_min + step * i as f64).collect())
    }
}

#[derive(Args)]
struct Figure1Args {
    #[command(flatten)]
    grid: Grid,
    /// Sphere size q for both curves (defaults: 0.5 scattering, 0 absorbing).
    #[arg(long)]
    q: Option<f64>,
    /// Re χ for both curves; giving either part replaces both defaults, the other part being 0.
    #[arg(long)]
    chi_re: Option<f64>,
    /// Im χ for both curves.
    #[arg(long)]
    chi_im: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    nv0: f64,
    /// |μ_∥|²/|μ|².
    #[arg(long, default_value_t = 1.0)]
    dipole_fraction: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct MieArgs {
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    #[arg(long, default_value_t = 0.5)]
    chi_re: f64,
    #[arg(long, default_value_t = 0.0)]
    chi_im: f64,
    #[arg(long, default_value_t = LMAX_DEFAULT)]
    lmax: usize,
    /// Compare against the expansion additionally linearized in χ.
    #[arg(long)]
    linearized: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ConsistencyArgs {
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest q and |χ| drawn.
    #[arg(long, default_value_t = 0.3)]
    q: f64,
    #[arg(long, default_value_t = 0.3)]
    chi_max: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct McArgs {
    #[arg(long, default_value_t = 12345)]
    seed: u64,
    /// Configurations for the filling statistics.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Sphere radius a (= q for k = 1).
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    #[arg(long, default_value_t = 0.05)]
    nv0: f64,
    /// Slab depth and width for the filling statistics.
    #[arg(long, default_value_t = 10.0)]
    box_size: f64,
    /// Configurations for the Born term; 0 skips it.
    #[arg(long, default_value_t = 200)]
    born_samples: usize,
    /// Slab depth and width for the Born term.
    #[arg(long, default_value_t = 30.0)]
    born_box: f64,
    /// Height of the observation point above the surface.
    #[arg(long, default_value_t = 15.0)]
    zeta: f64,
    #[arg(long, default_value_t = 0.5)]
    chi_re: f64,
    #[arg(long, default_value_t = 0.0)]
    chi_im: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct EnArgs {
    #[command(flatten)]
    grid: Grid,
    /// Largest order n tabulated.
    #[arg(long, default_value_t = 3)]
    nmax: u32,
    /// Terms of the asymptotic series.
    #[arg(long, default_value_t = 3)]
    terms: usize,
    #[command(flatten)]
    output: Output,
}

fn write_records<T: Serialize>(records: &[T], output: &Output) -> Result<()> {
    let sink: Box<dyn Write> = match &output.out {
        Some(path) => Box::new(File::create(path).with_context(|| format!("creating {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match output.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut sink);
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, records)?;
            writeln!(sink)?;
        }
    }
    sink.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Figure1Row {
    zeta: f64,
    f_scattering: f64,
    f_absorbing: f64,
    gamma_scattering: f64,
    gamma_absorbing: f64,
}

fn figure1(args: &Figure1Args) -> Result<bool> {
    let zetas = args.grid.values()?;
    let mut scattering = (0.5, Complex64::new(0.5, 0.0));
    let mut absorbing = (0.0, Complex64::new(0.5, 0.5));
    if let Some(q) = args.q {
        if !(q >= 0.0 && q.is_finite()) {
            bail!("--q must be finite and >= 0, got {q}");
        }
        scattering.0 = q;
        absorbing.0 = q;
    }
    if args.chi_re.is_some() || args.chi_im.is_some() {
        let chi = Complex64::new(args.chi_re.unwrap_or(0.0), args.chi_im.unwrap_or(0.0));
        if chi.im < 0.0 {
            bail!("Im χ must be >= 0 for a passive medium, got {}", chi.im);
        }
        scattering.1 = chi;
        absorbing.1 = chi;
    }
    if !(0.0..1.0).contains(&args.nv0) {
        bail!("--nv0 must lie in [0, 1), got {}", args.nv0);
    }
    if !(0.0..=1.0).contains(&args.dipole_fraction) {
        bail!("--dipole-fraction must lie in [0, 1], got {}", args.dipole_fraction);
    }
    let rows: Vec<Figure1Row> = zetas
        .iter()
        .map(|&z| {
            let fs = decay_correction_f(z, scattering.0, scattering.1);
            let fa = decay_correction_f(z, absorbing.0, absorbing.1);
            Figure1Row {
                zeta: z,
                f_scattering: fs,
                f_absorbing: fa,
                gamma_scattering: gamma_from_f(fs, args.nv0, args.dipole_fraction),
                gamma_absorbing: gamma_from_f(fa, args.nv0, args.dipole_fraction),
            }
        })
        .collect();
    write_records(&rows, &args.output)?;
    Ok(true)
}

#[derive(Serialize)]
struct MieRow {
    l: usize,
    electric_re: f64,
    electric_im: f64,
    magnetic_re: f64,
    magnetic_im: f64,
    series_electric_re: Option<f64>,
    series_electric_im: Option<f64>,
    series_magnetic_re: Option<f64>,
    series_magnetic_im: Option<f64>,
    /// `|full/series − 1|`.
    electric_rel_dev: Option<f64>,
    magnetic_rel_dev: Option<f64>,
}

fn rel_dev(full: Complex64, series: Complex64) -> Option<f64> {
    (series.norm() > 0.0).then(|| (full / series - 1.0).norm())
}

fn mie_table(args: &MieArgs) -> Result<bool> {
    let chi = Complex64::new(args.chi_re, args.chi_im);
    let amps = mie_amplitudes(args.q, chi, args.lmax)?;
    let form = if args.linearized {
        SmallQForm::LinearizedInChi
    } else {
        SmallQForm::ClosedInChi
    };
    let s = mie_amplitudes_small_q(args.q, chi, form);
    let rows: Vec<MieRow> = (1..=args.lmax)
        .map(|l| {
            let (be, bm) = (amps.electric(l), amps.magnetic(l));
            let se = match l {
                1 => Some(s.be1),
                2 => Some(s.be2),
                _ => None,
            };
            let sm = (l == 1).then_some(s.bm1);
            MieRow {
                l,
                electric_re: be.re,
                electric_im: be.im,
                magnetic_re: bm.re,
                magnetic_im: bm.im,
                series_electric_re: se.map(|v| v.re),
                series_electric_im: se.map(|v| v.im),
                series_magnetic_re: sm.map(|v| v.re),
                series_magnetic_im: sm.map(|v| v.im),
                electric_rel_dev: se.and_then(|v| rel_dev(be, v)),
                magnetic_rel_dev: sm.and_then(|v| rel_dev(bm, v)),
            }
        })
        .collect();
    write_records(&rows, &args.output)?;
    Ok(true)
}

const CONSISTENCY_TOL: f64 = 1e-12;

#[derive(Serialize)]
struct ConsistencyRow {
    samples: usize,
    seed: u64,
    max_abs_diff: f64,
    tolerance: f64,
    pass: bool,
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    let u: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    let s = (1.0 - u * u).sqrt();
    Vec3::new(s * phi.cos(), s * phi.sin(), u)
}

fn consistency(args: &ConsistencyArgs) -> Result<bool> {
    if args.samples == 0 {
        bail!("--samples must be positive");
    }
    if !(args.q >= 0.0 && args.chi_max >= 0.0) {
        bail!("--q and --chi-max must be >= 0");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..args.samples {
        let e = random_unit(&mut rng);
        let k = random_unit(&mut rng);
        let q = args.q * rng.random::<f64>();
        let chi = Complex64::from_polar(args.chi_max * rng.random::<f64>(), PI * rng.random::<f64>());
        let lhs = effective_kernel_tensor(e, k, q, chi)?;
        let rhs = mie_kernel_tensor(e, k, q, chi)? * chi;
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    let pass = worst <= CONSISTENCY_TOL;
    write_records(
        &[ConsistencyRow {
            samples: args.samples,
            seed: args.seed,
            max_abs_diff: worst,
            tolerance: CONSISTENCY_TOL,
            pass,
        }],
        &args.output,
    )?;
    Ok(pass)
}

#[derive(Serialize)]
struct McRow {
    test: &'static str,
    parameter: String,
    analytic: f64,
    mc_mean: f64,
    std_error: f64,
    z: f64,
    pass: bool,
}

const GATE: f64 = 3.0;

fn mc_row(test: &'static str, parameter: String, analytic: f64, est: &EstimateWithError<f64>) -> McRow {
    McRow {
        test,
        parameter,
        analytic,
        mc_mean: est.mean,
        std_error: est.std_error,
        z: est.z_score(analytic),
        pass: est.within(analytic, GATE),
    }
}

fn mc_validate(args: &McArgs) -> Result<bool> {
    let a = args.q;
    let nv0 = args.nv0;
    if !(nv0 > 0.0) {
        bail!("--nv0 must be > 0, got {nv0}");
    }
    let buffer = Sampling::BulkCut { buffer: 2.0 * a };
    let geometry = SlabGeometry::new(args.box_size, args.box_size, a, true)?.with_sampling(buffer)?;
    let ensemble = Ensemble::new(geometry, nv0, args.seed, args.samples)?;
    let mut rows = Vec::new();

    let heights: Vec<f64> = (-4..=4).map(|k| 0.5 * a * k as f64).collect();
    for (h, est) in heights.iter().zip(estimate_filling(&ensemble, &heights)?) {
        rows.push(mc_row("filling", format!("h={h}"), mean_filling_profile(*h, a, nv0), &est));
    }

    let mid = Position::new(0.0, 0.0, -0.5 * args.box_size);
    for sep in [0.0, 0.5 * a, a, 1.5 * a, 3.0 * a] {
        let est = estimate_pair_overlap(&ensemble, mid, mid + Vec3::new(sep, 0.0, 0.0))?;
        let analytic = nv0 * overlap_c(sep, a) + nv0 * nv0;
        rows.push(mc_row("pair_overlap", format!("r={sep}"), analytic, &est));
    }

    for (sep, cos) in [(0.0, 1.0f64), (a, 0.0), (a, 1.0)] {
        let other = mid + Vec3::new(sep * (1.0 - cos * cos).sqrt(), 0.0, sep * cos);
        let est = estimate_surface_moment_i2(&ensemble, (mid, other), nv0)?;
        rows.push(mc_row("i2", format!("r={sep};cos={cos}"), overlap_i2(sep, cos, a), &est));
    }

    if args.born_samples > 0 {
        let chi = Complex64::new(args.chi_re, args.chi_im);
        let g = SlabGeometry::new(args.born_box, args.born_box, a, true)?.with_sampling(buffer)?;
        let born_ensemble = Ensemble::new(g, nv0, args.seed, args.born_samples)?;
        let r = Position::new(0.0, 0.0, args.zeta);
        let est = born_first_order_study(&born_ensemble, r, r, chi, &BallRule::default())?;
        let analytic = analytic_first_order(r, r, chi, &g, nv0, a)?;
        let total = analytic.total();
        for (i, axis) in ["xx", "yy", "zz"].iter().enumerate() {
            rows.extend(born_rows("born_full", axis, total.get(i, i), &est.full, i));
        }
        rows.extend(born_rows("born_finite_size", "xx", analytic.surface.get(0, 0), &est.finite_size, 0));
    }

    write_records(&rows, &args.output)?;
    Ok(rows.iter().all(|r| r.pass))
}

fn born_rows(
    test: &'static str,
    axis: &str,
    analytic: Complex64,
    est: &granular_decay::mcvalidate::DyadicEstimate,
    i: usize,
) -> [McRow; 2] {
    let part = |name: &str, analytic: f64, mean: f64, se: f64| {
        let e = EstimateWithError {
            mean,
            std_error: se,
            n_samples: est.n_samples,
        };
        mc_row(test, format!("{axis}.{name}"), analytic, &e)
    };
    let mean = est.mean.get(i, i);
    [
        part("re", analytic.re, mean.re, est.std_error_re[i][i]),
        part("im", analytic.im, mean.im, est.std_error_im[i][i]),
    ]
}

#[derive(Serialize)]
struct EnRow {
    zeta: f64,
    n: u32,
    exact_re: f64,
    exact_im: f64,
    asymptotic_re: f64,
    asymptotic_im: f64,
    rel_error: f64,
}

fn en_table(args: &EnArgs) -> Result<bool> {
    let zetas = args.grid.values()?;
    let mut rows = Vec::new();
    for &z in &zetas {
        let u = Complex64::new(U_OFFSET, -2.0 * z);
        for n in 0..=args.nmax {
            let exact = exp_integral_en(n, u)?;
            let asym = exp_integral_en_asymptotic(n, u, args.terms)?;
            rows.push(EnRow {
                zeta: z,
                n,
                exact_re: exact.re,
                exact_im: exact.im,
                asymptotic_re: asym.re,
                asymptotic_im: asym.im,
                rel_error: (asym - exact).norm() / exact.norm(),
            });
        }
    }
    write_records(&rows, &args.output)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Figure1(a) => figure1(a),
        Command::MieTable(a) => mie_table(a),
        Command::Consistency(a) => consistency(a),
        Command::McValidate(a) => mc_validate(a),
        Command::EnTable(a) => en_table(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: one or more checks failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
