//! Brute-force verification in position space: hard truncation of
//! H(μ) = Δ̂Δ̂ − μv̂ to the sites {−N, …, N}.
//!
//! The squared-Laplacian stencil is the self-convolution of (−1/2, 1, −1/2),
//! i.e. (1/4, −1, 3/2, −1, 1/4); truncation simply cuts it at the boundary
//! (Dirichlet). The impurity subtracts μ at the center site. The truncated
//! Green's function g₀₀(z) = ⟨δ₀, (H₀ − z)⁻¹δ₀⟩ comes from an O(N) banded
//! solve and converges to I(z)/2π; the finite-volume secular function
//! Δ_N(z) = 1 − μ·g₀₀(z) has its root at the truncated eigenvalue, which
//! approaches e(μ) exponentially fast in N (the bound state is localized
//! with per-site factor |ξ₀|).

use std::io::{self, Write};

use crate::error::{Error, Result};

/// Interior row of the truncated bilaplacian, offsets −2..=2.
pub const BILAPLACIAN_STENCIL: [f64; 5] = [0.25, -1.0, 1.5, -1.0, 0.25];

/// Finite truncation of the model on {−N, …, N} (dimension 2N+1).
#[derive(Clone, Copy, Debug)]
pub struct LatticeModel {
    pub n_half: usize,
    pub mu: f64,
}

/// Pentadiagonal-plus-rank-one truncation with Dirichlet cut at ±N.
pub fn build_truncated(n_half: usize, mu: f64) -> LatticeModel {
    assert!(n_half >= 1, "need at least the sites {{-1, 0, 1}}");
    LatticeModel { n_half, mu }
}

impl LatticeModel {
    pub fn dim(&self) -> usize {
        2 * self.n_half + 1
    }

    /// Matrix entry (i, j) in 0-based truncated indices.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let mut v = match j as isize - i as isize {
            -2 | 2 => 0.25,
            -1 | 1 => -1.0,
            0 => 1.5,
            _ => 0.0,
        };
        if i == self.n_half && j == self.n_half {
            v -= self.mu;
        }
        v
    }

    pub fn dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j)).collect())
            .collect()
    }
}

/// Solves the pentadiagonal system (H₀ − z)·g = rhs in O(N) by banded LU
/// without pivoting (H₀ − z is definite on either side of the truncated
/// spectrum); a residual check guards against breakdown.
fn shifted_bilaplacian_solve(n_half: usize, z: f64, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = 2 * n_half + 1;
    assert_eq!(rhs.len(), n);
    let d = 1.5 - z;

    // Doolittle bands: unit-lower l1, l2 folded into the forward pass,
    // upper factor kept as (m, u1, u2).
    let mut m = vec![0.0; n];
    let mut u1 = vec![0.0; n];
    let mut u2 = vec![0.0; n];
    let mut y = vec![0.0; n];
    for i in 0..n {
        let l2 = if i >= 2 { 0.25 / m[i - 2] } else { 0.0 };
        let l1 = if i >= 1 {
            let raw = -1.0 - if i >= 2 { l2 * u1[i - 2] } else { 0.0 };
            raw / m[i - 1]
        } else {
            0.0
        };
        let mut mi = d;
        if i >= 2 {
            mi -= l2 * u2[i - 2];
        }
        if i >= 1 {
            mi -= l1 * u1[i - 1];
        }
        if mi == 0.0 || !mi.is_finite() {
            return Err(Error::Domain(format!(
                "banded factorization broke down at row {i} (z = {z} too close to the truncated spectrum)"
            )));
        }
        m[i] = mi;
        u1[i] = if i + 1 < n {
            -1.0 - if i >= 1 { l1 * u2[i - 1] } else { 0.0 }
        } else {
            0.0
        };
        u2[i] = if i + 2 < n { 0.25 } else { 0.0 };
        y[i] = rhs[i];
        if i >= 1 {
            y[i] -= l1 * y[i - 1];
        }
        if i >= 2 {
            y[i] -= l2 * y[i - 2];
        }
    }
    let mut g = vec![0.0; n];
    for i in (0..n).rev() {
        let mut v = y[i];
        if i + 1 < n {
            v -= u1[i] * g[i + 1];
        }
        if i + 2 < n {
            v -= u2[i] * g[i + 2];
        }
        g[i] = v / m[i];
    }
    Ok(g)
}

/// Residual ‖(H₀ − z)g − rhs‖∞ of a candidate solution.
fn solve_residual(n_half: usize, z: f64, g: &[f64], rhs: &[f64]) -> f64 {
    let n = 2 * n_half + 1;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let mut acc = (1.5 - z) * g[i];
        if i >= 1 {
            acc -= g[i - 1];
        }
        if i >= 2 {
            acc += 0.25 * g[i - 2];
        }
        if i + 1 < n {
            acc -= g[i + 1];
        }
        if i + 2 < n {
            acc += 0.25 * g[i + 2];
        }
        worst = worst.max((acc - rhs[i]).abs());
    }
    worst
}

/// g₀₀(z): center element of the truncated free Green's function.
pub fn truncated_green(n_half: usize, z: f64) -> Result<f64> {
    let n = 2 * n_half + 1;
    let mut rhs = vec![0.0; n];
    rhs[n_half] = 1.0;
    let g = shifted_bilaplacian_solve(n_half, z, &rhs)?;
    let resid = solve_residual(n_half, z, &g, &rhs);
    if !(resid < 1e-12) {
        return Err(Error::Domain(format!(
            "banded solve residual {resid:e} at z = {z}; point too close to the truncated spectrum"
        )));
    }
    Ok(g[n_half])
}

/// Root of Δ_N(z) = 1 − μ·g₀₀(z) outside [0, 4]; converges to e(μ)
/// exponentially in N. Fails with a resolution error when the truncation
/// cannot produce a sign change (|μ| too small for this N).
pub fn secular_eigenvalue(n_half: usize, mu: f64, tol: f64) -> Result<f64> {
    if mu == 0.0 || !mu.is_finite() {
        return Err(Error::Domain("no eigenvalue at μ = 0".into()));
    }
    assert!(tol > 0.0);
    let delta_n = |z: f64| -> Result<f64> { Ok(1.0 - mu * truncated_green(n_half, z)?) };

    // scan toward the band for a sign change
    const SCAN_FLOOR: f64 = 1e-13;
    let (mut a, mut b) = if mu > 0.0 {
        let far = -(mu.abs() + 1.0);
        let mut near = -0.5 * mu.abs().min(1.0);
        let mut found = false;
        while -near > SCAN_FLOOR {
            if delta_n(near)? < 0.0 {
                found = true;
                break;
            }
            near *= 0.25;
        }
        if !found {
            return Err(Error::Resolution(format!(
                "Δ_N has no sign change below the band for N = {n_half}, μ = {mu:e}; increase N"
            )));
        }
        (far, near)
    } else {
        let far = 4.0 + mu.abs() + 1.0;
        let mut near = 4.0 + 0.5 * mu.abs().min(1.0);
        let mut found = false;
        while near - 4.0 > SCAN_FLOOR {
            if delta_n(near)? < 0.0 {
                found = true;
                break;
            }
            near = 4.0 + 0.25 * (near - 4.0);
        }
        if !found {
            return Err(Error::Resolution(format!(
                "Δ_N has no sign change above the band for N = {n_half}, μ = {mu:e}; increase N"
            )));
        }
        (far, near)
    };
    // Δ_N(a) > 0 > Δ_N(b) by construction
    let mut f_a = delta_n(a)?;
    if !(f_a > 0.0) {
        return Err(Error::Resolution(format!(
            "outer secular endpoint lost its sign for N = {n_half}, μ = {mu:e}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (b - a).abs() <= 2.0 * f64::EPSILON * mid.abs().max(1.0) {
            break;
        }
        let f_mid = delta_n(mid)?;
        if f_mid.abs() < tol {
            return Ok(mid);
        }
        if f_mid * f_a > 0.0 {
            a = mid;
            f_a = f_mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Full dense spectrum of a small truncation, with the entries outside the
/// band [0, 4] pulled out.
#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub n_half: usize,
    pub mu: f64,
    /// all 2N+1 eigenvalues, ascending
    pub eigenvalues: Vec<f64>,
    /// eigenvalues beyond [0, 4] with a 1e−9 guard
    pub outside_band: Vec<f64>,
}

impl SpectrumReport {
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "index,eigenvalue")?;
        for (i, e) in self.eigenvalues.iter().enumerate() {
            writeln!(w, "{i},{e:.16e}")?;
        }
        Ok(())
    }
}

const OUTSIDE_BAND_GUARD: f64 = 1e-9;

/// All eigenvalues of the dense truncation via cyclic Jacobi (N ≤ 64).
pub fn dense_spectrum_small(n_half: usize, mu: f64) -> Result<SpectrumReport> {
    let (eigenvalues, _) = dense_eigensystem(n_half, mu, false)?;
    let outside_band = eigenvalues
        .iter()
        .copied()
        .filter(|&e| e < -OUTSIDE_BAND_GUARD || e > 4.0 + OUTSIDE_BAND_GUARD)
        .collect();
    Ok(SpectrumReport {
        n_half,
        mu,
        eigenvalues,
        outside_band,
    })
}

/// Jacobi eigendecomposition of the dense truncation; eigenvalues ascending,
/// optional matching eigenvectors as rows of the returned matrix.
pub fn dense_eigensystem(
    n_half: usize,
    mu: f64,
    with_vectors: bool,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    if n_half > 64 {
        return Err(Error::Domain(format!(
            "dense spectrum is limited to N ≤ 64, got {n_half}"
        )));
    }
    let model = build_truncated(n_half, mu);
    let mut a = model.dense();
    let n = model.dim();
    let mut v = if with_vectors {
        let mut id = vec![vec![0.0; n]; n];
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        id
    } else {
        Vec::new()
    };

    let off_norm = |a: &Vec<Vec<f64>>| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i][j] * a[i][j];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _sweep in 0..100 {
        if off_norm(&a) < 1e-12 {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                if with_vectors {
                    for row in v.iter_mut() {
                        let vp = row[p];
                        let vq = row[q];
                        row[p] = c * vp - s * vq;
                        row[q] = s * vp + c * vq;
                    }
                }
            }
        }
    }
    if !converged && off_norm(&a) >= 1e-12 {
        return Err(Error::Accuracy {
            best: f64::NAN,
            error_estimate: off_norm(&a),
            context: "Jacobi sweeps did not reduce the off-diagonal norm below 1e-12".into(),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i][i]).collect();
    let vectors = if with_vectors {
        order
            .iter()
            .map(|&col| (0..n).map(|row| v[row][col]).collect())
            .collect()
    } else {
        Vec::new()
    };
    Ok((eigenvalues, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::solve_eigenvalue;
    use crate::spectral::{resolvent_closed, SpectralPoint};
    use std::f64::consts::PI;

    #[test]
    fn stencil_is_laplacian_self_convolution() {
        let lap = [-0.5, 1.0, -0.5];
        let mut conv = [0.0; 5];
        for (i, a) in lap.iter().enumerate() {
            for (j, b) in lap.iter().enumerate() {
                conv[i + j] += a * b;
            }
        }
        assert_eq!(conv, BILAPLACIAN_STENCIL);
    }

    #[test]
    fn small_matrix_layout() {
        let m = build_truncated(1, 0.0);
        assert_eq!(
            m.dense(),
            vec![
                vec![1.5, -1.0, 0.25],
                vec![-1.0, 1.5, -1.0],
                vec![0.25, -1.0, 1.5],
            ]
        );
        let m = build_truncated(1, 2.0);
        assert_eq!(m.entry(1, 1), -0.5);
    }

    #[test]
    fn green_matches_continuum() {
        let z = -4.0;
        let g = truncated_green(2000, z).unwrap();
        let cont = resolvent_closed(&SpectralPoint::from_energy(z).unwrap()).value / (2.0 * PI);
        assert!((g - cont).abs() < 1e-10, "g00 {g} vs I/2π {cont}");
        assert!((g - 0.1942217).abs() < 1e-6);
    }

    #[test]
    fn green_far_field() {
        let g = truncated_green(300, -1e6).unwrap();
        assert!(((g - 1e-6) / 1e-6).abs() < 1e-4);
    }

    #[test]
    fn green_grid_consistency_at_large_truncation() {
        // sup over a two-sided grid with dist(z, [0,4]) ≥ 0.5
        let mut sup: f64 = 0.0;
        for k in 0..12 {
            let d = 0.5 * 10f64.powf(2.0 * k as f64 / 11.0);
            for z in [-d, 4.0 + d] {
                let g = truncated_green(2000, z).unwrap();
                let cont =
                    resolvent_closed(&SpectralPoint::from_energy(z).unwrap()).value / (2.0 * PI);
                sup = sup.max((g - cont).abs());
            }
        }
        assert!(sup < 1e-8, "sup deviation {sup:e}");
    }

    #[test]
    fn green_monotone_below_band() {
        let mut prev = truncated_green(400, -8.0).unwrap();
        for k in 1..=20 {
            let z = -8.0 + 7.0 * k as f64 / 20.0;
            let cur = truncated_green(400, z).unwrap();
            assert!(cur > prev, "g00 not increasing at z = {z}");
            prev = cur;
        }
    }

    #[test]
    fn secular_root_matches_continuum() {
        let e_cont = solve_eigenvalue(1.0, 1e-13).unwrap().e;
        let e_n = secular_eigenvalue(2000, 1.0, 1e-13).unwrap();
        assert!((e_n - e_cont).abs() < 1e-8, "e_N {e_n} vs e {e_cont}");

        let mu_star = 2.0 * PI / resolvent_closed(&SpectralPoint::from_energy(-4.0).unwrap()).value;
        let e_n = secular_eigenvalue(2000, mu_star, 1e-13).unwrap();
        assert!((e_n + 4.0).abs() < 1e-8);

        let e_cont = solve_eigenvalue(-1.0, 1e-13).unwrap().e;
        let e_n = secular_eigenvalue(2000, -1.0, 1e-13).unwrap();
        assert!((e_n - e_cont).abs() < 1e-8);
        assert!(e_n > 4.0 && e_n <= 5.0);
    }

    #[test]
    fn tiny_coupling_needs_resolution() {
        let err = secular_eigenvalue(1, 1e-6, 1e-10).unwrap_err();
        assert!(matches!(err, Error::Resolution(_)), "got {err:?}");
    }

    #[test]
    fn clean_spectrum_fills_the_band() {
        let report = dense_spectrum_small(32, 0.0).unwrap();
        assert_eq!(report.eigenvalues.len(), 65);
        assert!(report.outside_band.is_empty());
        for &e in &report.eigenvalues {
            assert!(e > -1e-9 && e < 4.0 + 1e-9);
        }
    }

    #[test]
    fn impurity_splits_exactly_one_level() {
        let report = dense_spectrum_small(32, 3.0).unwrap();
        assert_eq!(report.outside_band.len(), 1);
        assert!(report.outside_band[0] < 0.0);
        assert_eq!(
            report.eigenvalues.iter().filter(|&&e| e < 0.0).count(),
            1
        );

        let report = dense_spectrum_small(32, -3.0).unwrap();
        assert_eq!(report.outside_band.len(), 1);
        assert!(report.outside_band[0] > 4.0);
    }

    #[test]
    fn bound_state_vector_is_even() {
        let (vals, vecs) = dense_eigensystem(24, 3.0, true).unwrap();
        assert!(vals[0] < 0.0);
        let v = &vecs[0];
        let c = v.len() / 2;
        for k in 1..=c {
            assert!(
                (v[c + k] - v[c - k]).abs() < 1e-10,
                "asymmetry at k = {k}: {} vs {}",
                v[c + k],
                v[c - k]
            );
        }
    }

    #[test]
    fn dense_matches_banded_secular_root() {
        let (vals, _) = dense_eigensystem(40, 2.0, false).unwrap();
        let via_secular = secular_eigenvalue(40, 2.0, 1e-12).unwrap();
        assert!((vals[0] - via_secular).abs() < 1e-9);
    }

    #[test]
    fn spectrum_csv_shape() {
        let report = dense_spectrum_small(2, 0.5).unwrap();
        let mut out = Vec::new();
        report.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "index,eigenvalue");
        assert_eq!(text.lines().count(), 6);
    }
}
