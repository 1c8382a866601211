//! Independent reference implementations used only by tests. Nothing here
//! calls into the library's numerical kernels.
#![allow(dead_code)]

use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Sixty-term ascending series for J_n(x), integer n.
pub fn series_j(n: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut sum = 0.0;
    for k in 0..60u32 {
        let mut term = if k % 2 == 0 { 1.0 } else { -1.0 };
        for i in 1..=k {
            term *= half * half / i as f64;
        }
        for i in 1..=(n + k) {
            term /= i as f64;
        }
        term *= half.powi(n as i32);
        sum += term;
    }
    sum
}

/// Derivative of the ascending series, term by term.
pub fn series_j_prime(n: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut sum = 0.0;
    for k in 0..60u32 {
        let power = (2 * k + n) as i32;
        if power == 0 {
            continue;
        }
        let mut coeff = if k % 2 == 0 { 1.0 } else { -1.0 };
        for i in 1..=k {
            coeff /= i as f64;
        }
        for i in 1..=(n + k) {
            coeff /= i as f64;
        }
        sum += coeff * power as f64 * half.powi(power - 1) / 2.0;
    }
    sum
}

fn digamma_integer(m: u32) -> f64 {
    -EULER_GAMMA + (1..m).map(|k| 1.0 / k as f64).sum::<f64>()
}

/// Y_n(x) for integer n from the logarithmic series
/// Y_n = (2/π)J_n ln(x/2) − (1/π)Σ_{k<n} (n−k−1)!/k! (x/2)^{2k−n}
///       − (1/π)Σ_k [ψ(k+1)+ψ(n+k+1)] (−x²/4)^k (x/2)^n /(k!(n+k)!).
pub fn series_y(n: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut finite = 0.0;
    for k in 0..n {
        let num: f64 = (1..=(n - k - 1)).map(f64::from).product();
        let den: f64 = (1..=k).map(f64::from).product();
        finite += num / den * half.powi(2 * k as i32 - n as i32);
    }
    let mut tail = 0.0;
    for k in 0..60u32 {
        let mut term = if k % 2 == 0 { 1.0 } else { -1.0 };
        for i in 1..=k {
            term *= half * half / i as f64;
        }
        for i in 1..=(n + k) {
            term /= i as f64;
        }
        term *= half.powi(n as i32);
        tail += (digamma_integer(k + 1) + digamma_integer(n + k + 1)) * term;
    }
    2.0 / PI * series_j(n, x) * half.ln() - finite / PI - tail / PI
}

/// Series derivative for Y_n by a fourth-order central difference of
/// [`series_y`] (small steps are fine because the series is analytic).
pub fn series_y_prime(n: u32, x: f64) -> f64 {
    let h = 1e-3;
    (-series_y(n, x + 2.0 * h) + 8.0 * series_y(n, x + h) - 8.0 * series_y(n, x - h)
        + series_y(n, x - 2.0 * h))
        / (12.0 * h)
}

/// N-th positive zero of J_n by scanning and bisecting the series oracle.
pub fn series_zero(n: u32, index: u32) -> f64 {
    let step = 0.25;
    let mut a = if n == 0 { 0.5 } else { n as f64 };
    let mut seen = 0;
    loop {
        let b = a + step;
        if series_j(n, a).signum() != series_j(n, b).signum() {
            seen += 1;
            if seen == index {
                let (mut lo, mut hi) = (a, b);
                let lo_sign = series_j(n, lo).signum();
                while hi - lo > 1e-14 {
                    let mid = 0.5 * (lo + hi);
                    if series_j(n, mid).signum() == lo_sign {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return 0.5 * (lo + hi);
            }
        }
        a = b;
    }
}

/// Hankel asymptotic expansion of J_ν for large x (first few terms).
pub fn hankel_j(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let chi = x - (0.5 * nu + 0.25) * PI;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    for k in 1..12 {
        let kf = k as f64;
        term *= (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * x);
        if k % 2 == 1 {
            q += if (k / 2) % 2 == 0 { term } else { -term };
        } else {
            p += if (k / 2) % 2 == 0 { term } else { -term };
        }
    }
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// ∫_{ε ≤ |x| ≤ A} √(A²−x²)/x² dx from the antiderivative −√(A²−x²)/x − arcsin(x/A).
pub fn analytic_action(a: f64, eps: f64) -> f64 {
    let f = |x: f64| -(a * a - x * x).sqrt() / x - (x / a).asin();
    2.0 * (f(a) - f(eps))
}

/// x(t) of the closed-form trajectory and its first two time derivatives,
/// differentiated by hand.
pub fn trajectory_derivatives(t: f64, lambda: f64, c1: f64, c2: f64) -> (f64, f64, f64) {
    let s = c1.sqrt();
    let u = c2 + s * t;
    let r = lambda / c1 + u * u;
    let x = r.powf(-0.5);
    let xdot = -s * u * r.powf(-1.5);
    let xddot = -c1 * r.powf(-1.5) + 3.0 * c1 * u * u * r.powf(-2.5);
    (x, xdot, xddot)
}

/// Chebyshev nodes on [a, b], ascending.
pub fn chebyshev(n: usize, a: f64, b: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|k| {
            0.5 * (a + b) + 0.5 * (b - a) * ((2 * k + 1) as f64 * PI / (2 * n) as f64).cos()
        })
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Coefficients (of ψ′, of ψ) in the ordered equation written directly in
/// terms of the mass, using m′/m = −4/x, m″/m = 20/x², V = λx², m = 2/x⁴.
pub fn se1_coefficients(alpha: f64, gamma: f64, lambda: f64, energy: f64, hbar: f64, x: f64) -> (f64, f64) {
    let m = 2.0 / x.powi(4);
    let mp_m = -4.0 / x;
    let mpp_m = 20.0 / (x * x);
    let first = (gamma - alpha - 1.0) * mp_m;
    let zeroth = gamma * mpp_m - (alpha * gamma + 2.0 * gamma) * mp_m * mp_m
        + 2.0 * m / (hbar * hbar) * (energy - lambda * x * x);
    (first, zeroth)
}

/// (Ĥ − E)ψ for ψ = J_n(k/x), k = 2√E/ħ, using the expanded single-term
/// operator with analytic mass derivatives and five-point differences on ψ.
/// Returns (residual, scale of the largest term).
pub fn hamiltonian_defect(n: u32, alpha: f64, gamma: f64, lambda: f64, energy: f64, hbar: f64, x: f64) -> (f64, f64) {
    let k = 2.0 * energy.sqrt() / hbar;
    let psi = |y: f64| series_j(n, k / y);
    let h = 1e-4 * x;
    let d1 = (psi(x - 2.0 * h) - 8.0 * psi(x - h) + 8.0 * psi(x + h) - psi(x + 2.0 * h)) / (12.0 * h);
    let d2 = (-psi(x - 2.0 * h) + 16.0 * psi(x - h) - 30.0 * psi(x) + 16.0 * psi(x + h) - psi(x + 2.0 * h))
        / (12.0 * h * h);
    let inv_m = x.powi(4) / 2.0;
    let inv_m_p = 2.0 * x.powi(3);
    let inv_m_pp = 6.0 * x * x;
    let mp2_m3 = 8.0 * x * x;
    let h2 = hbar * hbar / 2.0;
    let kinetic_terms = [
        -h2 * inv_m * d2,
        -h2 * inv_m_p * d1,
        (gamma - alpha) * h2 * inv_m_p * d1,
        h2 * (gamma * inv_m_pp + alpha * gamma * mp2_m3) * psi(x),
        (lambda * x * x - energy) * psi(x),
    ];
    let scale = kinetic_terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    (kinetic_terms.iter().sum(), scale)
}

/// Closed form ∫₀^R ρ J_n(kρ)² dρ = (R²/2)[J_n′(kR)² + (1 − n²/(kR)²) J_n(kR)²],
/// with J from the large-argument expansion (valid for kR ≫ n²).
pub fn lommel_self_overlap(n: u32, k: f64, r: f64) -> f64 {
    let z = k * r;
    let nu = n as f64;
    let j = hankel_j(nu, z);
    let jp = 0.5 * (hankel_j(nu - 1.0, z) - hankel_j(nu + 1.0, z));
    0.5 * r * r * (jp * jp + (1.0 - nu * nu / (z * z)) * j * j)
}
