use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::hermite::{hermite_functions, position_matrix, position_powers};
use crate::mehler;
use crate::polydiff::{to_f64, Polynomial};
use crate::{Error, Result};

pub const MIN_BASIS: usize = 16;
pub const MAX_POTENTIAL_DEGREE: u32 = 8;
/// Largest total matrix dimension `K^n` accepted by the dense solver.
pub const MAX_MATRIX_DIM: usize = 10_000;

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum ModelPotential {
    Polynomial(Polynomial),
    Pointwise(String),
}

impl ModelPotential {
    pub fn is_zero(&self) -> bool {
        matches!(self, ModelPotential::Polynomial(p) if p.is_zero())
    }
}

/// Discretised `H = A + ħ²V` in the tensor Hermite basis of `A`.
#[derive(Clone, Debug)]
pub struct SpectralModel {
    pub hbar: f64,
    pub dim: usize,
    pub basis: usize,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the eigenvector of `eigenvalues[j]`.
    pub eigenvectors: DMatrix<f64>,
    pub potential: ModelPotential,
}

/// A numeric result with the truncation bookkeeping attached.
#[derive(Clone, Debug, Serialize)]
pub struct Truncated {
    pub value: f64,
    /// Sum over the kept basis only.
    pub raw: f64,
    /// Free-oscillator contribution of the states outside the basis, relative
    /// to `value`.
    pub tail_weight: f64,
    pub warning: Option<String>,
}

fn check_resources(dim: usize, k: usize) -> Result<usize> {
    if !(1..=2).contains(&dim) {
        return Err(Error::Invalid(format!(
            "the oracle supports n = 1 or 2, got n = {dim}"
        )));
    }
    if k < MIN_BASIS {
        return Err(Error::Invalid(format!(
            "basis size {k} is below the minimum {MIN_BASIS}"
        )));
    }
    let total = k
        .checked_pow(dim as u32)
        .filter(|&t| t <= MAX_MATRIX_DIM)
        .ok_or_else(|| {
            Error::Resource(format!(
                "basis {k}^{dim} exceeds the dense limit {MAX_MATRIX_DIM}"
            ))
        })?;
    Ok(total)
}

fn check_hbar(hbar: f64) -> Result<()> {
    if hbar > 0.0 && hbar.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("ħ must be positive, got {hbar}")))
    }
}

fn diagonalize(mut h: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let ht = h.transpose();
    h += ht;
    h *= 0.5;
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |i, j| {
        eig.eigenvectors[(i, order[j])]
    });
    (values, vectors)
}

fn free_diagonal(dim: usize, k: usize, hbar: f64) -> DMatrix<f64> {
    let total = k.pow(dim as u32);
    DMatrix::from_fn(total, total, |i, j| {
        if i != j {
            return 0.0;
        }
        let level = if dim == 1 { i } else { i / k + i % k };
        hbar * level as f64
    })
}

/// Matrix of `H = A + ħ²V` for polynomial `V`, diagonalised.
pub fn build_hamiltonian(v: &Polynomial, hbar: f64, k: usize) -> Result<SpectralModel> {
    check_hbar(hbar)?;
    let dim = v.dim();
    check_resources(dim, k)?;
    let deg = v.degree().unwrap_or(0);
    if deg > MAX_POTENTIAL_DEGREE {
        return Err(Error::Invalid(format!(
            "potential degree {deg} exceeds {MAX_POTENTIAL_DEGREE}"
        )));
    }
    let powers = position_powers(k, deg as usize, hbar);
    let mut h = free_diagonal(dim, k, hbar);
    let h2 = hbar * hbar;
    for (alpha, c) in v.terms() {
        let c = h2 * to_f64(c);
        let a = alpha.as_slice();
        if dim == 1 {
            h += &powers[a[0] as usize] * c;
        } else {
            h += powers[a[0] as usize].kronecker(&powers[a[1] as usize]) * c;
        }
    }
    let (eigenvalues, eigenvectors) = diagonalize(h);
    Ok(SpectralModel {
        hbar,
        dim,
        basis: k,
        eigenvalues,
        eigenvectors,
        potential: ModelPotential::Polynomial(v.clone()),
    })
}

/// `H = A + ħ²V` for a pointwise `V` in one dimension. Matrix elements of `V`
/// come from Gauss–Hermite quadrature on `points` nodes, realised as the
/// eigen-decomposition of the position matrix.
pub fn build_pointwise<F>(
    v: F,
    label: &str,
    hbar: f64,
    k: usize,
    points: usize,
) -> Result<SpectralModel>
where
    F: Fn(f64) -> f64,
{
    check_hbar(hbar)?;
    check_resources(1, k)?;
    if points < k {
        return Err(Error::Invalid(format!(
            "need at least {k} quadrature nodes, got {points}"
        )));
    }
    let eig = SymmetricEigen::new(position_matrix(points, hbar));
    let u = eig.eigenvectors.rows(0, k).into_owned();
    let fv: Vec<f64> = eig.eigenvalues.iter().map(|&x| v(x)).collect();
    let mut weighted = u.clone();
    for (j, f) in fv.iter().enumerate() {
        weighted.column_mut(j).scale_mut(*f);
    }
    let vmat = &weighted * u.transpose();
    let h = free_diagonal(1, k, hbar) + vmat * (hbar * hbar);
    let (eigenvalues, eigenvectors) = diagonalize(h);
    Ok(SpectralModel {
        hbar,
        dim: 1,
        basis: k,
        eigenvalues,
        eigenvectors,
        potential: ModelPotential::Pointwise(label.to_string()),
    })
}

/// Basis size for which the free weight `e^{−tħK}` drops below `tol`.
pub fn auto_basis(t: f64, hbar: f64, tol: f64) -> usize {
    let k = ((1.0 / tol).ln() / (t * hbar)).ceil();
    (k as usize).max(MIN_BASIS)
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "heat time must be positive, got {t}"
        )))
    }
}

fn warn(model: &SpectralModel, tail_weight: f64, tol: f64) -> Option<String> {
    (!model.potential.is_zero() && tail_weight > tol).then(|| {
        format!(
            "basis K = {} leaves tail weight {tail_weight:.3e} > {tol:.1e} at ħ = {}",
            model.basis, model.hbar
        )
    })
}

impl SpectralModel {
    /// Largest deviation of `UᵀU` from the identity.
    pub fn orthogonality_defect(&self) -> f64 {
        let g = self.eigenvectors.transpose() * &self.eigenvectors;
        let n = g.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let e = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - e).abs());
            }
        }
        worst
    }

    /// `Σ_j e^{−tλ_j}`, plus the free trace of the states beyond the basis.
    pub fn heat_trace(&self, t: f64, tol: f64) -> Result<Truncated> {
        check_time(t)?;
        let raw: f64 = self.eigenvalues.iter().map(|l| (-t * l).exp()).sum();
        let q = (-t * self.hbar).exp();
        let n = self.dim as i32;
        let full = (1.0 / (1.0 - q)).powi(n);
        let kept = ((1.0 - q.powi(self.basis as i32)) / (1.0 - q)).powi(n);
        let tail = full - kept;
        let value = raw + tail;
        let tail_weight = tail / value;
        Ok(Truncated {
            value,
            raw,
            tail_weight,
            warning: warn(self, tail_weight, tol),
        })
    }

    /// `Σ_j e^{−tλ_j} φ_j(x)²` at each point, with the free tail
    /// `e^{−tA}(x,x) − Σ_{k<K} e^{−tħk} ψ_k(x)²` added.
    pub fn heat_kernel_diag(&self, t: f64, xs: &[f64], tol: f64) -> Result<Vec<Truncated>> {
        check_time(t)?;
        if self.dim != 1 {
            return Err(Error::Invalid(
                "diagonal kernels are only computed for n = 1".into(),
            ));
        }
        // Beyond this the free tail is below double precision and the time
        // change saturates.
        let with_tail = t * self.hbar * (self.basis as f64) < 40.0;
        let s = mehler::s_of_t(t, self.hbar)?;
        let weights: Vec<f64> = self.eigenvalues.iter().map(|l| (-t * l).exp()).collect();
        xs.iter()
            .map(|&x| {
                let psi = hermite_functions(x, self.basis, self.hbar);
                let psi = nalgebra::DVector::from_vec(psi);
                let phi = self.eigenvectors.tr_mul(&psi);
                let raw: f64 = phi.iter().zip(&weights).map(|(p, w)| w * p * p).sum();
                let tail = if with_tail {
                    let kept_free: f64 = psi
                        .iter()
                        .enumerate()
                        .map(|(k, p)| (-t * self.hbar * k as f64).exp() * p * p)
                        .sum();
                    (mehler::kernel_eval(&[x], &[x], s, self.hbar)? - kept_free).max(0.0)
                } else {
                    0.0
                };
                let value = raw + tail;
                let tail_weight = if value > 0.0 { tail / value } else { 0.0 };
                Ok(Truncated {
                    value,
                    raw,
                    tail_weight,
                    warning: warn(self, tail_weight, tol),
                })
            })
            .collect()
    }
}
