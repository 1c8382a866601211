//! Named, reproducible invariant suite across all modules.
//!
//! Every check is deterministic for a given [`SuiteConfig`]: grids are fixed
//! and randomized samples are drawn from a ChaCha stream seeded by
//! `config.seed`. Checks run in parallel; reports come back in registry order.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classical_dynamics::{
    classify_lambda, exact_solution, exact_state, exact_velocity, integrate_eom, radicand, ModelParams, Regime,
};
use crate::error::{Error, Result};
use crate::quantum_spectral::{
    box_gram, box_spectrum, eigenfunction, hermitian_window_max, lambda_quantized, nu_from_params, nu_squared,
    ode_residual, parity_match, pct_reduce, similarity_check, validate_ordering, ContinuumState, SingleTermOrdering,
};
use crate::report::{Provenance, Status, VerificationReport};
use crate::semiclassical::{finite_part_action, wkb_row, WKB_TOLERANCE};
use crate::special_functions::{bessel_j, bessel_j_prime, bessel_y, bessel_y_prime, bessel_zero, BesselOrder};
use crate::numerics::chebyshev_nodes;

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub params: ModelParams,
    pub ordering: SingleTermOrdering,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            params: ModelParams::default(),
            ordering: SingleTermOrdering::new(0.0, 0.75).expect("valid ordering"),
            seed: DEFAULT_SEED,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        SingleTermOrdering::from_triple(self.ordering.alpha1, self.ordering.beta1, self.ordering.gamma1)?;
        Ok(())
    }
}

type CheckFn = fn(&SuiteConfig) -> Result<VerificationReport>;

struct Check {
    id: &'static str,
    provenance: Provenance,
    run: CheckFn,
}

const REGISTRY: &[Check] = &[
    Check { id: "bessel_kernel", provenance: Provenance::Derived, run: bessel_kernel },
    Check { id: "bessel_zeros", provenance: Provenance::Derived, run: bessel_zeros },
    Check { id: "energy_conservation", provenance: Provenance::Paper, run: energy_conservation },
    Check { id: "energy_conservation_exact", provenance: Provenance::Paper, run: energy_conservation_exact },
    Check { id: "integrator_vs_exact", provenance: Provenance::Derived, run: integrator_vs_exact },
    Check { id: "singularity_classification", provenance: Provenance::Derived, run: singularity_classification },
    Check { id: "finite_part", provenance: Provenance::Paper, run: finite_part },
    Check { id: "wkb_identity", provenance: Provenance::Paper, run: wkb_identity },
    Check { id: "ordering_constraints", provenance: Provenance::Trivial, run: ordering_constraints },
    Check { id: "residual_positive", provenance: Provenance::Derived, run: residual_positive },
    Check { id: "residual_negative_control", provenance: Provenance::Derived, run: residual_negative_control },
    Check { id: "parity", provenance: Provenance::Paper, run: parity },
    Check { id: "parity_match", provenance: Provenance::Paper, run: parity_matching },
    Check { id: "pct_identity", provenance: Provenance::Derived, run: pct_identity },
    Check { id: "quantization_roundtrip", provenance: Provenance::Trivial, run: quantization_roundtrip },
    Check { id: "box_orthonormality", provenance: Provenance::Paper, run: box_orthonormality },
    Check { id: "box_energy", provenance: Provenance::Derived, run: box_energy },
    Check { id: "hermitian_singularity", provenance: Provenance::Paper, run: hermitian_singularity },
    Check { id: "similarity", provenance: Provenance::Paper, run: similarity },
];

/// Registered check ids in execution order.
pub fn check_ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.id).collect()
}

/// Runs the selected checks. Numerical failures inside a check become a
/// failing report; unknown ids and an empty selection are errors.
pub fn run_suite<S: AsRef<str>>(selection: &[S], config: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    if selection.is_empty() {
        return Err(Error::EmptySelection);
    }
    for id in selection {
        if !REGISTRY.iter().any(|c| c.id == id.as_ref()) {
            return Err(Error::UnknownCheck(id.as_ref().to_string()));
        }
    }
    config.validate()?;
    let chosen: Vec<&Check> = REGISTRY
        .iter()
        .filter(|c| selection.iter().any(|s| s.as_ref() == c.id))
        .collect();
    Ok(chosen
        .par_iter()
        .map(|c| match (c.run)(config) {
            Ok(report) => report,
            Err(e) => VerificationReport::predicate(c.id, false, f64::NAN, f64::NAN, c.provenance, format!("error: {e}")),
        })
        .collect())
}

pub fn run_all(config: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    run_suite(&check_ids(), config)
}

/// Pass iff every non-skipped report passed.
pub fn overall_pass(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.status != Status::Fail)
}

/// Fixed-width summary table, one row per report.
pub fn summary_table(reports: &[VerificationReport]) -> String {
    let width = reports.iter().map(|r| r.check_id.len()).max().unwrap_or(8).max(8);
    let mut out = format!("{:<width$}  {:<7}  {:>12}  {:>12}  {:<10}\n", "check", "status", "measured", "tolerance", "provenance");
    for r in reports {
        let _ = writeln!(
            out,
            "{:<width$}  {:<7}  {:>12.4e}  {:>12.4e}  {:<10}",
            r.check_id, r.status, r.measured, r.tolerance, r.provenance
        );
    }
    let failed = reports.iter().filter(|r| r.status == Status::Fail).count();
    let _ = writeln!(out, "{} checks, {} failed: {}", reports.len(), failed, if failed == 0 { "PASS" } else { "FAIL" });
    out
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

// Ascending series for J_n, used as an oracle independent of the kernel.
fn series_j(n: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = half.powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..200 {
        term *= -half * half / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

// k-th positive zero of J_n by scanning the series and bisecting.
fn series_zero(n: u32, k: u32) -> f64 {
    let step = 0.05;
    let mut found = 0;
    let mut x = n as f64 + step;
    loop {
        if series_j(n, x) * series_j(n, x + step) < 0.0 {
            found += 1;
            if found == k {
                let (mut lo, mut hi) = (x, x + step);
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if series_j(n, lo) * series_j(n, mid) <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return 0.5 * (lo + hi);
            }
        }
        x += step;
    }
}

fn bessel_kernel(_: &SuiteConfig) -> Result<VerificationReport> {
    let mut worst: f64 = 0.0;
    for n in 0..=10u32 {
        let nu: BesselOrder = n.into();
        for x in log_grid(0.1, 100.0, 61) {
            let (j, y) = (bessel_j(nu, x)?, bessel_y(nu, x)?);
            let w = j * bessel_y_prime(nu, x)? - bessel_j_prime(nu, x)? * y;
            let scale = (j * y).abs().max(1.0);
            worst = worst.max((w - 2.0 / (PI * x)).abs() / scale);
            if n >= 1 {
                let r = bessel_j((n - 1).into(), x)? + bessel_j((n + 1).into(), x)? - 2.0 * n as f64 / x * j;
                worst = worst.max(r.abs());
            }
        }
    }
    Ok(VerificationReport::residual(
        "bessel_kernel",
        worst,
        1e-9,
        Provenance::Derived,
        "Wronskian and three-term recurrence, orders 0..10, log grid on [0.1, 100]",
    ))
}

fn bessel_zeros(_: &SuiteConfig) -> Result<VerificationReport> {
    let mut worst: f64 = 0.0;
    for n in 1..=2 {
        for k in 1..=3 {
            worst = worst.max((bessel_zero(n, k)? - series_zero(n, k)).abs());
        }
    }
    Ok(VerificationReport::residual(
        "bessel_zeros",
        worst,
        1e-9,
        Provenance::Derived,
        "first three zeros of J1 and J2 against series bisection",
    ))
}

fn window_is_regular(p: &ModelParams) -> Result<bool> {
    Ok(classify_lambda(p, (0.0, 10.0))?.regime == Regime::Bounded)
}

fn energy_conservation(config: &SuiteConfig) -> Result<VerificationReport> {
    const ID: &str = "energy_conservation";
    let p = &config.params;
    if !window_is_regular(p)? {
        return Ok(VerificationReport::skipped(ID, Provenance::Paper, "orbit is singular on [0, 10]"));
    }
    let traj = integrate_eom(exact_solution(0.0, p)?, exact_velocity(0.0, p)?, p.lambda, 10.0, 1e-13)?.into_result()?;
    let dev = traj
        .states
        .iter()
        .map(|s| (s.energy(p.lambda) - p.c1).abs())
        .fold(0.0, f64::max);
    Ok(VerificationReport::residual(
        ID,
        dev,
        1e-9,
        Provenance::Paper,
        format!("max |H - C1| along the numerical orbit on [0, 10], {} steps", traj.states.len()),
    ))
}

fn energy_conservation_exact(config: &SuiteConfig) -> Result<VerificationReport> {
    const ID: &str = "energy_conservation_exact";
    let p = &config.params;
    if !window_is_regular(p)? {
        return Ok(VerificationReport::skipped(ID, Provenance::Paper, "orbit is singular on [0, 10]"));
    }
    let mut dev: f64 = 0.0;
    for i in 0..=1000 {
        let s = exact_state(0.01 * i as f64, p)?;
        dev = dev.max((s.energy(p.lambda) - p.c1).abs());
    }
    Ok(VerificationReport::residual(
        ID,
        dev,
        1e-12,
        Provenance::Paper,
        "max |H - C1| along the closed-form (x, p) on [0, 10]",
    ))
}

fn integrator_vs_exact(config: &SuiteConfig) -> Result<VerificationReport> {
    const ID: &str = "integrator_vs_exact";
    let p = &config.params;
    if !window_is_regular(p)? {
        return Ok(VerificationReport::skipped(ID, Provenance::Derived, "orbit is singular on [0, 10]"));
    }
    let traj = integrate_eom(exact_solution(0.0, p)?, exact_velocity(0.0, p)?, p.lambda, 10.0, 1e-13)?.into_result()?;
    let mut dev: f64 = 0.0;
    for s in &traj.states {
        dev = dev.max((s.x - exact_solution(s.t, p)?).abs());
    }
    Ok(VerificationReport::residual(
        ID,
        dev,
        1e-8,
        Provenance::Derived,
        "max |x_numeric - x_exact| on [0, 10]",
    ))
}

fn singularity_classification(config: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (mut disagreements, mut singular) = (0usize, 0usize);
    for _ in 0..1000 {
        let p = ModelParams::new(
            rng.gen_range(-4.0..4.0),
            config.params.hbar,
            rng.gen_range(0.1..4.0),
            rng.gen_range(-6.0..6.0),
        )?;
        let classified = classify_lambda(&p, (0.0, 10.0))?.regime == Regime::Singular;
        let scanned = (0..10_000).any(|i| radicand(10.0 * i as f64 / 9_999.0, &p) <= 0.0);
        disagreements += (classified != scanned) as usize;
        singular += scanned as usize;
    }
    Ok(VerificationReport::residual(
        "singularity_classification",
        disagreements as f64,
        0.0,
        Provenance::Derived,
        format!("1000 random draws on [0, 10], {singular} singular; measured = disagreements with a radicand scan"),
    ))
}

fn finite_part(_: &SuiteConfig) -> Result<VerificationReport> {
    let mut worst: f64 = 0.0;
    for a in [0.5, 1.0, 2.0, 5.0] {
        worst = worst.max((finite_part_action(a)?.finite_part + PI).abs());
    }
    Ok(VerificationReport::residual(
        "finite_part",
        worst,
        1e-6,
        Provenance::Paper,
        "max |I + pi| over A in {0.5, 1, 2, 5}",
    ))
}

fn wkb_identity(config: &SuiteConfig) -> Result<VerificationReport> {
    let mut hbars = vec![0.5, 1.0, 2.0];
    if !hbars.contains(&config.params.hbar) {
        hbars.push(config.params.hbar);
    }
    let mut worst: f64 = 0.0;
    for &hbar in &hbars {
        for n in 0..=10 {
            worst = worst.max(wkb_row(n, hbar, 1.0)?.residual.abs());
        }
    }
    Ok(VerificationReport::residual(
        "wkb_identity",
        worst,
        WKB_TOLERANCE,
        Provenance::Paper,
        format!("max |2 sqrt(lambda_n) |I| - (n + 1/2) hbar pi| for n = 0..10, hbar in {hbars:?}"),
    ))
}

fn ordering_constraints(config: &SuiteConfig) -> Result<VerificationReport> {
    Ok(validate_ordering(&config.ordering.as_scheme()))
}

const RESIDUAL_SIGMAS: [f64; 3] = [-0.75, 0.0, 1.0];
const RESIDUAL_ENERGIES: [f64; 3] = [0.5, 1.0, 2.0];

fn residual_grid() -> Vec<f64> {
    chebyshev_nodes(400, 0.2, 10.0)
}

fn residual_positive(config: &SuiteConfig) -> Result<VerificationReport> {
    let hbar = config.params.hbar;
    let grid = residual_grid();
    let mut orderings = RESIDUAL_SIGMAS
        .iter()
        .map(|&s| SingleTermOrdering::bounded(s))
        .collect::<Result<Vec<_>>>()?;
    if config.ordering.d_bessel().abs() < 1e-12 {
        orderings.push(config.ordering);
    }
    let mut worst: f64 = 0.0;
    for ord in &orderings {
        for n in 1..=6 {
            let lambda = lambda_quantized(n, ord, hbar);
            for e in RESIDUAL_ENERGIES {
                let state = ContinuumState::new(n, e, 1.0)?;
                worst = worst.max(ode_residual(&state, ord, lambda, hbar, &grid)?);
            }
        }
    }
    Ok(VerificationReport::residual(
        "residual_positive",
        worst,
        1e-8,
        Provenance::Derived,
        format!(
            "max residual for n = 1..6, E in {{0.5, 1, 2}}, {} orderings with gamma1 - alpha1 = 3/4",
            orderings.len()
        ),
    ))
}

fn residual_negative_control(config: &SuiteConfig) -> Result<VerificationReport> {
    let hbar = config.params.hbar;
    let grid = residual_grid();
    let mut weakest = f64::INFINITY;
    for s in RESIDUAL_SIGMAS {
        let good = SingleTermOrdering::bounded(s)?;
        let skewed = SingleTermOrdering::new(good.alpha1, good.alpha1 + 0.5)?;
        for n in 1..=6 {
            for e in RESIDUAL_ENERGIES {
                let state = ContinuumState::new(n, e, 1.0)?;
                let shifted = ode_residual(&state, &good, lambda_quantized(n, &good, hbar) + 0.25, hbar, &grid)?;
                let skew = ode_residual(&state, &skewed, lambda_quantized(n, &skewed, hbar), hbar, &grid)?;
                weakest = weakest.min(shifted).min(skew);
            }
        }
    }
    Ok(VerificationReport::predicate(
        "residual_negative_control",
        weakest > 1e-3,
        weakest,
        1e-3,
        Provenance::Derived,
        "smallest residual over controls (gamma1 - alpha1 = 1/2, lambda + 1/4); pass means every control fails to solve",
    ))
}

fn parity(config: &SuiteConfig) -> Result<VerificationReport> {
    let hbar = config.params.hbar;
    let mut worst: f64 = 0.0;
    for n in 1..=6 {
        let state = ContinuumState::new(n, 1.0, 1.0)?;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        for x in log_grid(1e-4, 50.0, 400) {
            worst = worst.max((eigenfunction(-x, &state, hbar)? - sign * eigenfunction(x, &state, hbar)?).abs());
        }
    }
    Ok(VerificationReport::residual(
        "parity",
        worst,
        0.0,
        Provenance::Paper,
        "max |psi_n(-x) - (-1)^n psi_n(x)| for n = 1..6",
    ))
}

fn parity_matching(_: &SuiteConfig) -> Result<VerificationReport> {
    let admitted = (1..=20).all(|k| parity_match(k as f64).admissible);
    let rejected = [0.0, 0.5, 1.5, 2.25, 3.999, 7.0001, -1.0, -2.0, f64::NAN]
        .iter()
        .all(|&nu| !parity_match(nu).admissible);
    Ok(VerificationReport::predicate(
        "parity_match",
        admitted && rejected,
        f64::from(u8::from(!(admitted && rejected))),
        0.0,
        Provenance::Paper,
        format!("positive integers admitted: {admitted}; non-integers, zero and negatives rejected: {rejected}"),
    ))
}

fn random_orderings(seed: u64, count: usize) -> Result<Vec<SingleTermOrdering>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| SingleTermOrdering::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
        .collect()
}

fn pct_identity(config: &SuiteConfig) -> Result<VerificationReport> {
    let mut worst: f64 = 0.0;
    let (lambda, hbar) = (config.params.lambda, config.params.hbar);
    for ord in random_orderings(config.seed, 100)? {
        let r = pct_reduce(&ord, lambda, 1.0, hbar)?;
        let nu2 = nu_squared(&ord, lambda, hbar);
        worst = worst.max((r.strength + 0.25 - nu2).abs() / nu2.abs().max(1.0));
    }
    Ok(VerificationReport::residual(
        "pct_identity",
        worst,
        1e-12,
        Provenance::Derived,
        "max relative |strength + 1/4 - nu^2| over 100 random orderings",
    ))
}

fn quantization_roundtrip(config: &SuiteConfig) -> Result<VerificationReport> {
    let hbar = config.params.hbar;
    let mut worst: f64 = 0.0;
    for ord in random_orderings(config.seed.wrapping_add(1), 100)? {
        for n in 1..=10 {
            let nu = nu_from_params(&ord, lambda_quantized(n, &ord, hbar), hbar)?;
            worst = worst.max((nu - n as f64).abs() / (n as f64 * (1.0 + ord.s().abs()).powi(2)));
        }
    }
    Ok(VerificationReport::residual(
        "quantization_roundtrip",
        worst,
        1e-12,
        Provenance::Trivial,
        "max scaled |nu(lambda_n) - n| over 100 random orderings, n = 1..10",
    ))
}

fn box_orthonormality(_: &SuiteConfig) -> Result<VerificationReport> {
    let gram = box_gram(1, 5, 0.1, 1.0)?;
    let mut worst: f64 = 0.0;
    for (i, row) in gram.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    Ok(VerificationReport::residual(
        "box_orthonormality",
        worst,
        1e-8,
        Provenance::Paper,
        "max |G - I| for n = 1, eps = 0.1, hbar = 1, N, M <= 5",
    ))
}

fn box_energy(_: &SuiteConfig) -> Result<VerificationReport> {
    let j = series_zero(1, 1);
    let e = box_spectrum(1, 1, 0.1, 1.0)?[0].energy;
    Ok(VerificationReport::residual(
        "box_energy",
        e - 0.25 * j * j * 0.01,
        1e-9,
        Provenance::Derived,
        format!("E_1^1 = {e:.15} against 0.25 j^2 0.01 with j_1,1 = {j:.15} from series bisection"),
    ))
}

fn hermitian_singularity(config: &SuiteConfig) -> Result<VerificationReport> {
    let hbar = config.params.hbar;
    let mut weakest = f64::INFINITY;
    for k in 4..=9 {
        let delta = 2f64.powi(-k);
        let inner = hermitian_window_max(1, 1.0, 1.0, hbar, delta / 2.0, delta)?;
        let outer = hermitian_window_max(1, 1.0, 1.0, hbar, delta, 2.0 * delta)?;
        weakest = weakest.min(inner / outer);
    }
    Ok(VerificationReport::predicate(
        "hermitian_singularity",
        weakest >= 1.8,
        weakest,
        1.8,
        Provenance::Paper,
        "smallest growth of the windowed maximum per halving, delta = 2^-4..2^-9",
    ))
}

fn similarity(config: &SuiteConfig) -> Result<VerificationReport> {
    let hbar = config.params.hbar;
    let functions: [fn(f64) -> f64; 3] = [
        |x| (-(x - 2.0) * (x - 2.0)).exp(),
        |x| (1.0 + x - 0.3 * x * x) * (-(x - 2.5) * (x - 2.5) / 2.0).exp(),
        |x| x.powi(3) * (-x).exp(),
    ];
    let mut worst: f64 = 0.0;
    for ord in [config.ordering, SingleTermOrdering::bounded(0.0)?] {
        for f in functions {
            worst = worst.max(similarity_check(&ord, f, hbar)?);
        }
    }
    Ok(VerificationReport::residual(
        "similarity",
        worst,
        1e-6,
        Provenance::Paper,
        "max |H f - m^-eta H_her m^eta f| on [0.5, 5] for three smooth test functions",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_errors() {
        let c = SuiteConfig::default();
        assert!(matches!(run_suite::<&str>(&[], &c), Err(Error::EmptySelection)));
        assert!(matches!(run_suite(&["nope"], &c), Err(Error::UnknownCheck(id)) if id == "nope"));
    }

    #[test]
    fn single_selection_gives_one_report() {
        let r = run_suite(&["finite_part"], &SuiteConfig::default()).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].check_id, "finite_part");
        assert!(r[0].passed());
        assert!(r[0].measured < 1e-6);
    }

    #[test]
    fn reports_follow_registry_order() {
        let r = run_suite(&["parity_match", "finite_part", "bessel_zeros"], &SuiteConfig::default()).unwrap();
        let ids: Vec<_> = r.iter().map(|r| r.check_id.as_str()).collect();
        assert_eq!(ids, ["bessel_zeros", "finite_part", "parity_match"]);
    }

    #[test]
    fn series_oracle_zero() {
        assert!((series_zero(1, 1) - 3.831_705_970_207_512_3).abs() < 1e-12);
    }

    #[test]
    fn singular_configuration_skips_classical_checks() {
        let c = SuiteConfig {
            params: ModelParams::new(-1.0, 1.0, 1.0, -5.0).unwrap(),
            ..SuiteConfig::default()
        };
        let r = run_suite(&["energy_conservation", "integrator_vs_exact"], &c).unwrap();
        assert!(r.iter().all(|r| r.status == Status::Skipped));
        assert!(overall_pass(&r));
    }

    #[test]
    fn summary_marks_failures() {
        let reports = vec![
            VerificationReport::residual("a", 0.0, 1.0, Provenance::Trivial, ""),
            VerificationReport::residual("b", 2.0, 1.0, Provenance::Trivial, ""),
        ];
        assert!(!overall_pass(&reports));
        let table = summary_table(&reports);
        assert!(table.contains("1 failed: FAIL"));
    }
}
