use anyhow::{bail, Result};
use clap::{Args, Subcommand, ValueEnum};

use deltamass_core::classical_dynamics::{
    classify_lambda, exact_solution, exact_state, integrate_eom_from, phase_curve, ClassicalState, EomOptions,
    InitialCondition, ModelParams,
};
use deltamass_core::quantum_spectral::{
    box_spectrum, box_wavefunction, eigenfunction, hermitian_wavefunction, lambda_quantized, nu_from_params,
    BoxState, ContinuumState, SingleTermOrdering,
};
use deltamass_core::report::Status;
use deltamass_core::semiclassical::wkb_row;
use deltamass_core::verification::{check_ids, overall_pass, run_suite, summary_table, SuiteConfig, DEFAULT_SEED};
use deltamass_core::Error;

use crate::config::{ConfigFile, List, Range};
use crate::output::{Cell, PlotSpec, Table};

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form or integrated trajectory x(t), p(t), E(t).
    Trajectory(TrajectoryArgs),
    /// x(t) over a grid of couplings, with the regime of each.
    LambdaMap(LambdaMapArgs),
    /// Phase-space curves p(x) for several energies.
    PhasePortrait(PhasePortraitArgs),
    /// Semiclassical quantization table.
    Wkb(WkbArgs),
    /// Quantized couplings for a single-term ordering.
    Spectrum(SpectrumArgs),
    /// Samples of the continuum eigenfunction.
    Eigenfunction(EigenfunctionArgs),
    /// Regularized box spectrum, or samples of one box state.
    BoxSpectrum(BoxSpectrumArgs),
    /// Runs the verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub hbar: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c2: Option<f64>,
}

impl ModelArgs {
    fn resolve(&self, cfg: &ConfigFile) -> Result<ModelParams> {
        let d = ModelParams::default();
        Ok(ModelParams::new(
            cfg.resolve(self.lambda, "lambda", d.lambda)?,
            cfg.resolve(self.hbar, "hbar", d.hbar)?,
            cfg.resolve(self.c1, "c1", d.c1)?,
            cfg.resolve(self.c2, "c2", d.c2)?,
        )?)
    }
}

#[derive(Debug, Args)]
pub struct OrderingArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha1: Option<f64>,
    /// Defaults to −1 − α₁ − γ₁; an explicit value must satisfy the constraint.
    #[arg(long, allow_negative_numbers = true)]
    pub beta1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma1: Option<f64>,
}

impl OrderingArgs {
    fn resolve(&self, cfg: &ConfigFile) -> Result<SingleTermOrdering> {
        let alpha = cfg.resolve(self.alpha1, "alpha1", 0.0)?;
        let gamma = cfg.resolve(self.gamma1, "gamma1", 0.75)?;
        let beta = cfg.resolve(self.beta1, "beta1", -1.0 - alpha - gamma)?;
        Ok(SingleTermOrdering::from_triple(alpha, beta, gamma)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Numeric,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Args)]
pub struct TrajectoryArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Time grid start:stop:step.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<Range>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Integrator tolerance for the numeric method.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct LambdaMapArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub c1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambdas: Option<Range>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<Range>,
}

#[derive(Debug, Args)]
pub struct PhasePortraitArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub energies: Option<List>,
    /// Samples per energy across [−A, A].
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct WkbArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Turning point used for the action integral.
    #[arg(long, allow_negative_numbers = true)]
    pub turning_point: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub n_max: Option<u32>,
    #[command(flatten)]
    pub ordering: OrderingArgs,
}

#[derive(Debug, Args)]
pub struct EigenfunctionArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long = "E", alias = "energy", allow_negative_numbers = true)]
    pub energy: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub hbar: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub amplitude: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<Range>,
    /// Sample the Hermitian-ordering state C·x^{−3/2}·J_n instead (x > 0 only).
    #[arg(long)]
    pub hermitian: bool,
}

#[derive(Debug, Args)]
pub struct BoxSpectrumArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub n_max: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub hbar: Option<f64>,
    /// Emit (x, ψ) samples of box state N instead of the spectrum.
    #[arg(long)]
    pub state: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<Range>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated check ids; all checks when omitted.
    #[arg(long)]
    pub checks: Option<String>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub ordering: OrderingArgs,
}

/// A finished table plus an error raised after part of it was produced.
pub struct Run {
    pub table: Table,
    pub plot: PlotSpec,
    pub failure: Option<anyhow::Error>,
    /// Printed to stderr after the table.
    pub summary: Option<String>,
}

impl Run {
    fn complete(table: Table, plot: PlotSpec) -> Self {
        Self { table, plot, failure: None, summary: None }
    }
}

/// Verification ran but at least one check failed.
#[derive(Debug)]
pub struct VerifyFailed(pub usize);

impl std::fmt::Display for VerifyFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} verification check(s) failed", self.0)
    }
}

impl std::error::Error for VerifyFailed {}

pub fn dispatch(command: &Command, cfg: &ConfigFile, seed: Option<u64>) -> Result<Run> {
    match command {
        Command::Trajectory(a) => trajectory(a, cfg),
        Command::LambdaMap(a) => lambda_map(a, cfg),
        Command::PhasePortrait(a) => phase_portrait(a, cfg),
        Command::Wkb(a) => wkb(a, cfg),
        Command::Spectrum(a) => spectrum(a, cfg),
        Command::Eigenfunction(a) => eigen(a, cfg),
        Command::BoxSpectrum(a) => box_spec(a, cfg),
        Command::Verify(a) => verify(a, cfg, seed),
    }
}

fn state_row(s: &ClassicalState, lambda: f64) -> Vec<Cell> {
    vec![s.t.into(), s.x.into(), s.p.into(), s.energy(lambda).into()]
}

fn trajectory(a: &TrajectoryArgs, cfg: &ConfigFile) -> Result<Run> {
    let p = a.model.resolve(cfg)?;
    let grid = cfg.resolve(a.t, "t", "0:10:0.01".parse().expect("valid range"))?.points();
    let method = cfg.resolve(a.method, "method", Method::Exact)?;
    let tol = cfg.resolve(a.tol, "tol", 1e-12)?;
    if !(tol > 0.0) {
        bail!("tolerance must be positive, got {tol}");
    }
    let plot = PlotSpec { x: "t", y: &["x"], group: None, title: "x(t)" };
    let mut table = Table::new(&["t", "x", "p", "E"]);
    match method {
        Method::Exact => {
            for &t in &grid {
                table.push(state_row(&exact_state(t, &p)?, p.lambda));
            }
            Ok(Run::complete(table, plot))
        }
        Method::Numeric => {
            let start = exact_state(grid[0], &p)?;
            table.push(state_row(&start, p.lambda));
            let mut ic = InitialCondition { t0: start.t, x0: start.x, xdot0: start.velocity() };
            let opts = EomOptions::with_tol(tol);
            for &t in &grid[1..] {
                let traj = integrate_eom_from(ic, p.lambda, t, &opts)?;
                if let Some(b) = traj.blow_up {
                    let err = Error::BlowUp { reached: b.reached, estimated: b.estimated };
                    return Ok(Run { table, plot, failure: Some(err.into()), summary: None });
                }
                let s = *traj.states.last().expect("integration yields states");
                table.push(state_row(&s, p.lambda));
                ic = InitialCondition { t0: s.t, x0: s.x, xdot0: s.velocity() };
            }
            Ok(Run::complete(table, plot))
        }
    }
}

fn lambda_map(a: &LambdaMapArgs, cfg: &ConfigFile) -> Result<Run> {
    let d = ModelParams::default();
    let c1 = cfg.resolve(a.c1, "c1", d.c1)?;
    let c2 = cfg.resolve(a.c2, "c2", d.c2)?;
    let hbar = cfg.resolve(None, "hbar", d.hbar)?;
    let lambdas = cfg.resolve(a.lambdas, "lambdas", "-2:2:0.25".parse().expect("valid range"))?;
    let times = cfg.resolve(a.t, "t", "0:10:0.05".parse().expect("valid range"))?;
    let mut table = Table::new(&["lambda", "t", "x", "regime"]);
    for lambda in lambdas.points() {
        let p = ModelParams::new(lambda, hbar, c1, c2)?;
        let regime = classify_lambda(&p, (times.start, times.stop))?.regime.to_string();
        for t in times.points() {
            let x = match exact_solution(t, &p) {
                Ok(x) => x,
                Err(Error::Singular { .. }) => f64::NAN,
                Err(e) => return Err(e.into()),
            };
            table.push(vec![lambda.into(), t.into(), x.into(), regime.as_str().into()]);
        }
    }
    Ok(Run::complete(
        table,
        PlotSpec { x: "t", y: &["x"], group: Some("lambda"), title: "x(t) across lambda" },
    ))
}

fn phase_portrait(a: &PhasePortraitArgs, cfg: &ConfigFile) -> Result<Run> {
    let lambda = cfg.resolve(a.lambda, "lambda", 0.5)?;
    let energies = cfg.resolve(a.energies.clone(), "energies", List(vec![0.5, 0.7, 0.8, 1.0]))?;
    let points = cfg.resolve(a.points, "points", 400)?;
    if points < 2 {
        bail!("points must be at least 2");
    }
    let mut table = Table::new(&["E", "x", "p_plus", "p_minus"]);
    for &e in &energies.0 {
        if !(e > 0.0 && lambda > 0.0) {
            bail!("phase portrait needs E > 0 and lambda > 0 (E = {e}, lambda = {lambda})");
        }
        let amp = (e / lambda).sqrt();
        let grid: Vec<f64> = (0..points)
            .map(|i| -amp + 2.0 * amp * i as f64 / (points - 1) as f64)
            .filter(|x| x.abs() > 1e-12 * amp)
            .collect();
        for pt in phase_curve(e, lambda, &grid)? {
            table.push(vec![e.into(), pt.x.into(), pt.p_plus.into(), pt.p_minus.into()]);
        }
    }
    Ok(Run::complete(
        table,
        PlotSpec { x: "x", y: &["p_plus", "p_minus"], group: Some("E"), title: "phase portrait" },
    ))
}

fn wkb(a: &WkbArgs, cfg: &ConfigFile) -> Result<Run> {
    let hbar = cfg.resolve(a.hbar, "hbar", 1.0)?;
    let n_max = cfg.resolve(a.n_max, "n_max", 10)?;
    let turning = cfg.resolve(a.turning_point, "turning_point", 1.0)?;
    let mut table = Table::new(&["n", "lambda", "lhs", "rhs", "residual"]);
    for n in 0..=n_max {
        let r = wkb_row(n, hbar, turning)?;
        table.push(vec![r.n.into(), r.lambda.into(), r.lhs.into(), r.rhs.into(), r.residual.into()]);
    }
    Ok(Run::complete(
        table,
        PlotSpec { x: "n", y: &["lambda"], group: None, title: "WKB couplings" },
    ))
}

fn spectrum(a: &SpectrumArgs, cfg: &ConfigFile) -> Result<Run> {
    let hbar = cfg.resolve(a.hbar, "hbar", 1.0)?;
    if !(hbar > 0.0 && hbar.is_finite()) {
        bail!("hbar must be positive, got {hbar}");
    }
    let n_max = cfg.resolve(a.n_max, "n_max", 10)?;
    let ord = a.ordering.resolve(cfg)?;
    let mut table = Table::new(&["n", "s", "lambda", "nu"]);
    for n in 1..=n_max {
        let lambda = lambda_quantized(n, &ord, hbar);
        table.push(vec![n.into(), ord.s().into(), lambda.into(), nu_from_params(&ord, lambda, hbar)?.into()]);
    }
    Ok(Run::complete(
        table,
        PlotSpec { x: "n", y: &["lambda"], group: None, title: "quantized couplings" },
    ))
}

fn eigen(a: &EigenfunctionArgs, cfg: &ConfigFile) -> Result<Run> {
    let n = cfg.resolve(a.n, "n", 1)?;
    let energy = cfg.resolve(a.energy, "E", 1.0)?;
    let hbar = cfg.resolve(a.hbar, "hbar", 1.0)?;
    let amplitude = cfg.resolve(a.amplitude, "amplitude", 1.0)?;
    let xs = cfg.resolve(a.x, "x", "-2:2:0.001".parse().expect("valid range"))?;
    let state = ContinuumState::new(n, energy, amplitude)?;
    let mut table = Table::new(&["x", "psi"]);
    for x in xs.points() {
        let psi = if a.hermitian {
            if x <= 0.0 {
                continue;
            }
            hermitian_wavefunction(x, n, energy, amplitude, hbar)?
        } else if x == 0.0 {
            0.0
        } else {
            eigenfunction(x, &state, hbar)?
        };
        table.push(vec![x.into(), psi.into()]);
    }
    Ok(Run::complete(
        table,
        PlotSpec { x: "x", y: &["psi"], group: None, title: "eigenfunction" },
    ))
}

fn box_spec(a: &BoxSpectrumArgs, cfg: &ConfigFile) -> Result<Run> {
    let n = cfg.resolve(a.n, "n", 1)?;
    let n_max = cfg.resolve(a.n_max, "n_max", 5)?;
    let eps = cfg.resolve(a.eps, "eps", 0.1)?;
    let hbar = cfg.resolve(a.hbar, "hbar", 1.0)?;
    if let Some(index) = cfg.resolve_opt(a.state, "state")? {
        let state = BoxState::new(n, index, eps, hbar)?;
        let xs = cfg.resolve(a.x, "x", "-1:1:0.001".parse().expect("valid range"))?;
        let mut table = Table::new(&["x", "psi"]);
        for x in xs.points() {
            table.push(vec![x.into(), box_wavefunction(x, &state, hbar)?.into()]);
        }
        return Ok(Run::complete(
            table,
            PlotSpec { x: "x", y: &["psi"], group: None, title: "box state" },
        ));
    }
    let mut table = Table::new(&["n", "N", "eps", "E", "C"]);
    for s in box_spectrum(n, n_max, eps, hbar)? {
        table.push(vec![s.n.into(), s.zero_index.into(), s.eps.into(), s.energy.into(), s.norm_const.into()]);
    }
    Ok(Run::complete(
        table,
        PlotSpec { x: "N", y: &["E"], group: None, title: "box spectrum" },
    ))
}

fn verify(a: &VerifyArgs, cfg: &ConfigFile, seed: Option<u64>) -> Result<Run> {
    let config = SuiteConfig {
        params: a.model.resolve(cfg)?,
        ordering: a.ordering.resolve(cfg)?,
        seed: cfg.resolve(seed, "seed", DEFAULT_SEED)?,
    };
    let selection: Vec<String> = match cfg.resolve_opt(a.checks.clone(), "checks")? {
        Some(list) => list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        None => check_ids().into_iter().map(String::from).collect(),
    };
    let reports = run_suite(&selection, &config)?;
    let mut table = Table::new(&["check_id", "status", "measured", "tolerance", "provenance", "notes"]);
    for r in &reports {
        table.push(vec![
            r.check_id.clone().into(),
            r.status.to_string().into(),
            r.measured.into(),
            r.tolerance.into(),
            r.provenance.to_string().into(),
            r.notes.clone().into(),
        ]);
    }
    let failed = reports.iter().filter(|r| r.status == Status::Fail).count();
    Ok(Run {
        table,
        plot: PlotSpec { x: "check_id", y: &["measured"], group: None, title: "verification" },
        failure: (!overall_pass(&reports)).then(|| VerifyFailed(failed).into()),
        summary: Some(summary_table(&reports)),
    })
}
