use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use super::model::{auto_basis, build_hamiltonian};
use crate::mehler;
use crate::polydiff::Polynomial;
use crate::{Error, Result};

pub const DEFAULT_HBARS: [f64; 3] = [0.2, 0.1, 0.05];

#[derive(Clone, Debug, Serialize)]
pub struct FitOptions {
    /// Number of powers `ħ², ħ⁴, …` kept in the model (2 or 3).
    pub terms: usize,
    /// Target truncation weight for the automatic basis size.
    pub tol: f64,
    /// Fixed basis size; chosen from `tol` when absent.
    pub basis: Option<usize>,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            terms: 3,
            tol: 1e-12,
            basis: None,
        }
    }
}

/// Normalised defect `D(x, s, ħ)` sampled over an ħ sweep and fitted to
/// `Σ_k c_k ħ^{2k}`.
#[derive(Clone, Debug, Serialize)]
pub struct HSweepFit {
    pub s: f64,
    pub hbars: Vec<f64>,
    pub xs: Vec<f64>,
    pub basis: Vec<usize>,
    /// `defects[i][j]` at `hbars[i]`, `xs[j]`.
    pub defects: Vec<Vec<f64>>,
    /// `coefficients[j][k]` multiplies `ħ^{2(k+1)}` at `xs[j]`.
    pub coefficients: Vec<Vec<f64>>,
    /// Change of each coefficient when the highest power is dropped and the
    /// largest ħ discarded.
    pub uncertainty: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub condition: f64,
    pub warnings: Vec<String>,
}

impl HSweepFit {
    pub fn c1(&self, j: usize) -> f64 {
        self.coefficients[j][0]
    }

    pub fn c2(&self, j: usize) -> Option<f64> {
        self.coefficients[j].get(1).copied()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("hbar,x,s,defect\n");
        for (h, row) in self.hbars.iter().zip(&self.defects) {
            for (x, d) in self.xs.iter().zip(row) {
                out.push_str(&format!("{h},{x},{},{d:.17e}\n", self.s));
            }
        }
        out
    }
}

fn check_sweep(hbars: &[f64], s: f64) -> Result<()> {
    if hbars.len() < 3 {
        return Err(Error::Fit(format!(
            "need at least 3 ħ values, got {}",
            hbars.len()
        )));
    }
    if hbars.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
        return Err(Error::Fit("ħ values must be positive".into()));
    }
    let ratio = hbars[1] / hbars[0];
    if (ratio - 1.0).abs() < 1e-12 {
        return Err(Error::Fit("ħ values must be distinct".into()));
    }
    for w in hbars.windows(2) {
        if ((w[1] / w[0]) / ratio - 1.0).abs() > 1e-9 {
            return Err(Error::Fit(
                "ħ values must form a geometric progression".into(),
            ));
        }
    }
    if !(s > 0.0) {
        return Err(Error::Fit(format!("s must be positive, got {s}")));
    }
    let top = hbars.iter().cloned().fold(0.0, f64::max);
    if top * s >= 0.5 {
        return Err(Error::Fit(format!(
            "max ħ·s = {} is not below 0.5",
            top * s
        )));
    }
    Ok(())
}

struct Solved {
    coeffs: Vec<f64>,
    residual: f64,
    condition: f64,
}

/// Least squares for `d ≈ Σ_k c_k u^k`, `u = ħ²`, with columns scaled to unit
/// norm before the SVD.
fn least_squares(us: &[f64], d: &[f64], terms: usize) -> Result<Solved> {
    let a = DMatrix::from_fn(us.len(), terms, |i, k| us[i].powi(k as i32 + 1));
    let norms: Vec<f64> = (0..terms).map(|k| a.column(k).norm()).collect();
    let mut scaled = a.clone();
    for (k, n) in norms.iter().enumerate() {
        scaled.column_mut(k).unscale_mut(*n);
    }
    let svd = scaled.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    let b = DVector::from_column_slice(d);
    let y = svd
        .solve(&b, 1e-14 * smax)
        .map_err(|e| Error::Fit(format!("SVD solve failed: {e}")))?;
    let coeffs: Vec<f64> = y.iter().zip(&norms).map(|(v, n)| v / n).collect();
    let residual = (&scaled * &y - &b).norm();
    Ok(Solved {
        coeffs,
        residual,
        condition,
    })
}

/// Samples `D = [e^{−tA}(x,x) − e^{−tH}(x,x)]/P(s,ħ)` on the sweep and fits
/// the ħ² expansion pointwise in `x`.
pub fn fit_expansion(
    v: &Polynomial,
    s: f64,
    xs: &[f64],
    hbars: &[f64],
    opts: &FitOptions,
) -> Result<HSweepFit> {
    check_sweep(hbars, s)?;
    if v.dim() != 1 {
        return Err(Error::Invalid("ħ-sweep fits are only run for n = 1".into()));
    }
    if !(2..=hbars.len().min(4)).contains(&opts.terms) {
        return Err(Error::Fit(format!(
            "cannot fit {} terms from {} ħ values",
            opts.terms,
            hbars.len()
        )));
    }
    if xs.is_empty() {
        return Err(Error::Invalid("no x points given".into()));
    }

    let samples: Vec<(usize, Vec<f64>, Vec<String>)> = hbars
        .par_iter()
        .map(|&h| {
            let t = mehler::t_of_s(s, h)?;
            let k = opts.basis.unwrap_or_else(|| auto_basis(t, h, opts.tol));
            let model = build_hamiltonian(v, h, k)?;
            let diag = model.heat_kernel_diag(t, xs, opts.tol)?;
            let p = mehler::prefactor(s, h, 1)?;
            let mut row = Vec::with_capacity(xs.len());
            let mut warnings = Vec::new();
            for (x, d) in xs.iter().zip(diag) {
                let free = mehler::kernel_eval(&[*x], &[*x], s, h)?;
                row.push((free - d.value) / p);
                warnings.extend(d.warning);
            }
            Ok((k, row, warnings))
        })
        .collect::<Result<_>>()?;

    let us: Vec<f64> = hbars.iter().map(|h| h * h).collect();
    let mut basis = Vec::new();
    let mut defects = Vec::new();
    let mut warnings = Vec::new();
    for (k, row, w) in samples {
        basis.push(k);
        defects.push(row);
        warnings.extend(w);
    }

    // Drop the largest ħ for the comparison fit.
    let big = us
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let small_us: Vec<f64> = us
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != big)
        .map(|(_, u)| *u)
        .collect();

    let mut coefficients = Vec::new();
    let mut uncertainty = Vec::new();
    let mut residuals = Vec::new();
    let mut condition = 0.0f64;
    for j in 0..xs.len() {
        let d: Vec<f64> = defects.iter().map(|row| row[j]).collect();
        let full = least_squares(&us, &d, opts.terms)?;
        let small_d: Vec<f64> = d
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != big)
            .map(|(_, v)| *v)
            .collect();
        let reduced = least_squares(&small_us, &small_d, opts.terms - 1)?;
        let unc: Vec<f64> = (0..opts.terms)
            .map(|k| {
                let other = reduced.coeffs.get(k).copied().unwrap_or(0.0);
                (full.coeffs[k] - other).abs()
            })
            .collect();
        condition = condition.max(full.condition);
        residuals.push(full.residual);
        coefficients.push(full.coeffs);
        uncertainty.push(unc);
    }
    if condition > 1e10 {
        warnings.push(format!(
            "ill-conditioned fit: condition number {condition:.3e}"
        ));
    }

    Ok(HSweepFit {
        s,
        hbars: hbars.to_vec(),
        xs: xs.to_vec(),
        basis,
        defects,
        coefficients,
        uncertainty,
        residuals,
        condition,
        warnings,
    })
}
