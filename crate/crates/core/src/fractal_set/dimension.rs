use crate::error::{Error, Result};
use crate::rational::{to_f64, Q};
use crate::regression::linear_fit;

use super::set::FractalSet;

/// Windows shorter than this multiple of δ are ignored by the spectrum
/// estimator; at |I|/δ close to 1 the ratio log N / log(|I|/δ) is noise.
pub const MIN_WINDOW_RATIO: f64 = 8.0;

/// Spread (max/min) below which a characteristic table counts as bounded.
const BOUNDED_SPREAD: f64 = 2.0;

#[derive(Debug, Clone)]
pub struct DimensionReport {
    pub minkowski: f64,
    pub minkowski_residual: f64,
    pub assouad: f64,
    pub quasi_assouad: f64,
    /// (θ, estimate)
    pub spectrum: Vec<(f64, f64)>,
    /// (δ, N(E, δ))
    pub covering: Vec<(Q, u64)>,
    /// (δ, δ^β N(E,δ)) at the fitted β
    pub char_minkowski: Vec<(Q, f64)>,
    /// (δ, χ_{A,γ}(δ)) at the fitted quasi-Assouad γ
    pub char_assouad: Vec<(Q, f64)>,
    pub minkowski_char_bounded: bool,
    pub assouad_char_bounded: bool,
}

fn spread(v: &[(Q, f64)]) -> f64 {
    let max = v.iter().map(|x| x.1).fold(f64::MIN, f64::max);
    let min = v.iter().map(|x| x.1).fold(f64::MAX, f64::min);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Minkowski slope, Assouad-spectrum estimates at each θ and the
/// characteristic tables. `scales` must be strictly decreasing in (0,1)
/// and no finer than the set's resolution.
pub fn estimate_dimensions(e: &FractalSet, scales: &[Q], thetas: &[f64]) -> Result<DimensionReport> {
    if scales.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 scales, got {}",
            scales.len()
        )));
    }
    if scales.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidScale("scales must be strictly decreasing".into()));
    }
    if scales[0] >= Q::from_integer(1.into()) || scales[scales.len() - 1] <= Q::from_integer(0.into())
    {
        return Err(Error::InvalidScale("scales must lie in (0,1)".into()));
    }
    if let Some(res) = e.resolution() {
        if let Some(bad) = scales.iter().find(|d| **d < res) {
            return Err(Error::InvalidScale(format!(
                "scale {bad} is finer than the construction resolution {res}"
            )));
        }
    }
    if let Some(t) = thetas.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
        return Err(Error::param("theta", format!("{t} not in (0,1)")));
    }

    let covering: Vec<(Q, u64)> = scales
        .iter()
        .map(|d| e.covering_number(d).map(|n| (d.clone(), n)))
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = scales.iter().map(|d| -to_f64(d).ln()).collect();
    let ys: Vec<f64> = covering.iter().map(|(_, n)| (*n as f64).ln()).collect();
    let fit = linear_fit(&xs, &ys)?;
    let minkowski = fit.slope.clamp(0.0, 1.0);

    // table[k] = list of (|I|/δ, max windowed count) at scale k
    let mut table: Vec<Vec<(f64, f64, u64)>> = Vec::with_capacity(scales.len());
    for d in scales {
        let df = to_f64(d);
        let mut row = Vec::new();
        let mut j = 0i64;
        loop {
            let len = crate::rational::pow2(-j);
            let lf = to_f64(&len);
            if lf / df < MIN_WINDOW_RATIO {
                break;
            }
            row.push((lf, lf / df, e.max_window_count(&len, d)));
            j += 1;
        }
        table.push(row);
    }
    let ratio = |count: u64, r: f64| ((count.max(1) as f64).ln() / r.ln()).clamp(0.0, 1.0);
    let mut spectrum = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let mut best = 0.0f64;
        for (k, d) in scales.iter().enumerate() {
            let floor_len = to_f64(d).powf(theta);
            for &(lf, r, c) in &table[k] {
                if lf >= floor_len {
                    best = best.max(ratio(c, r));
                }
            }
        }
        spectrum.push((theta, best));
    }
    let assouad = table
        .iter()
        .flatten()
        .map(|&(_, r, c)| ratio(c, r))
        .fold(0.0f64, f64::max)
        .max(minkowski);
    let quasi_assouad = spectrum
        .iter()
        .cloned()
        .fold((0.0, minkowski), |acc, (t, v)| if t >= acc.0 { (t, v) } else { acc })
        .1
        .max(minkowski)
        .min(assouad);

    let char_minkowski: Vec<(Q, f64)> = covering
        .iter()
        .map(|(d, n)| (d.clone(), to_f64(d).powf(minkowski) * *n as f64))
        .collect();
    let char_assouad: Vec<(Q, f64)> = scales
        .iter()
        .map(|d| e.assouad_characteristic(quasi_assouad, d).map(|v| (d.clone(), v)))
        .collect::<Result<_>>()?;
    let minkowski_char_bounded = spread(&char_minkowski) <= BOUNDED_SPREAD;
    let assouad_char_bounded = spread(&char_assouad) <= BOUNDED_SPREAD;

    Ok(DimensionReport {
        minkowski,
        minkowski_residual: fit.residual,
        assouad,
        quasi_assouad,
        spectrum,
        covering,
        char_minkowski,
        char_assouad,
        minkowski_char_bounded,
        assouad_char_bounded,
    })
}

impl DimensionReport {
    pub fn covering_csv(&self) -> String {
        let mut s = String::from("delta,delta_f64,covering_number,log_inv_delta,log_n\n");
        for (d, n) in &self.covering {
            let df = to_f64(d);
            s += &format!("{d},{df:.12e},{n},{:.12},{:.12}\n", -df.ln(), (*n as f64).ln());
        }
        s
    }

    pub fn spectrum_csv(&self) -> String {
        let mut s = String::from("theta,spectrum\n");
        for (t, v) in &self.spectrum {
            s += &format!("{t},{v:.12}\n");
        }
        s
    }

    pub fn characteristics_csv(&self) -> String {
        let mut s = String::from("delta,chi_minkowski,chi_assouad\n");
        for ((d, m), (_, a)) in self.char_minkowski.iter().zip(&self.char_assouad) {
            s += &format!("{d},{m:.12},{a:.12}\n");
        }
        s
    }

    pub fn summary_csv(&self) -> String {
        format!(
            "quantity,value\nminkowski,{:.12}\nminkowski_residual,{:.12}\nquasi_assouad,{:.12}\nassouad,{:.12}\nminkowski_char_bounded,{}\nassouad_char_bounded,{}\n",
            self.minkowski,
            self.minkowski_residual,
            self.quasi_assouad,
            self.assouad,
            self.minkowski_char_bounded,
            self.assouad_char_bounded
        )
    }
}
