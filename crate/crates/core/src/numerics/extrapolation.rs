use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    pub value: f64,
    /// Difference between the two best estimates at the highest level.
    pub error_estimate: f64,
    /// `table[i][k]` is the estimate from samples 0..=i after eliminating k error terms.
    pub table: Vec<Vec<f64>>,
}

/// Richardson extrapolation of `samples` taken at step sizes shrinking by
/// `ratio` each time, assuming an error expansion Σ c_k h^{p_k} with the
/// given exponents.
pub fn richardson(samples: &[f64], ratio: f64, exponents: &[f64]) -> Result<Extrapolation> {
    if ratio <= 1.0 || !ratio.is_finite() {
        return Err(Error::InvalidParameter(format!("step ratio must exceed 1, got {ratio}")));
    }
    if samples.len() < exponents.len() + 2 {
        return Err(Error::InvalidParameter(format!(
            "{} samples cannot eliminate {} terms and estimate the error",
            samples.len(),
            exponents.len()
        )));
    }
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(samples.len());
    for (i, &s) in samples.iter().enumerate() {
        let mut row = vec![s];
        for (k, &p) in exponents.iter().enumerate().take(i) {
            let factor = ratio.powf(p) - 1.0;
            let here = row[k];
            let before = table[i - 1][k];
            row.push(here + (here - before) / factor);
        }
        table.push(row);
    }
    let m = exponents.len();
    let n = samples.len();
    let value = table[n - 1][m];
    let error_estimate = (value - table[n - 2][m]).abs();
    Ok(Extrapolation {
        value,
        error_estimate,
        table,
    })
}
