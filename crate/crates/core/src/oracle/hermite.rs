use nalgebra::DMatrix;

/// Position operator `x = √(ħ/2)(a + a†)` in the first `k` eigenstates of
/// the free oscillator.
pub fn position_matrix(k: usize, hbar: f64) -> DMatrix<f64> {
    let scale = (hbar / 2.0).sqrt();
    DMatrix::from_fn(k, k, |i, j| {
        if j == i + 1 {
            scale * (j as f64).sqrt()
        } else if i == j + 1 {
            scale * (i as f64).sqrt()
        } else {
            0.0
        }
    })
}

/// `x^0, x^1, …, x^p` truncated to `k` states. Powers are formed in a basis
/// of `k + p` states first, so every kept entry is exact.
pub fn position_powers(k: usize, p: usize, hbar: f64) -> Vec<DMatrix<f64>> {
    let big = position_matrix(k + p, hbar);
    let mut acc = DMatrix::identity(k + p, k + p);
    let mut out = Vec::with_capacity(p + 1);
    for q in 0..=p {
        if q > 0 {
            acc = &acc * &big;
        }
        out.push(acc.view((0, 0), (k, k)).into_owned());
    }
    out
}

/// `ψ_0(x), …, ψ_{k−1}(x)` with `ψ_j(x) = ħ^{−1/4} h_j(x/√ħ)` and `h_j` the
/// normalised Hermite functions, by the three-term recurrence
/// `h_{j+1} = √(2/(j+1)) ξ h_j − √(j/(j+1)) h_{j−1}`.
pub fn hermite_functions(x: f64, k: usize, hbar: f64) -> Vec<f64> {
    let xi = x / hbar.sqrt();
    let mut out = Vec::with_capacity(k);
    if k == 0 {
        return out;
    }
    let norm = hbar.powf(-0.25);
    let h0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    out.push(h0);
    if k > 1 {
        out.push(2f64.sqrt() * xi * h0);
    }
    for j in 1..k.saturating_sub(1) {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * xi * out[j] - (jf / (jf + 1.0)).sqrt() * out[j - 1];
        out.push(next);
    }
    out.iter_mut().for_each(|v| *v *= norm);
    out
}
