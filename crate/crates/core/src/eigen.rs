//! The unique impurity eigenvalue e(μ): bracketing, a safeguarded
//! Newton/bisection solve of Δ(μ; e) = 0, derivatives e′ and e″, and the
//! eigenfunction in momentum and position space.
//!
//! For μ > 0 the eigenvalue sits below the band; the elementary bounds
//! 2π/(4+|z|) ≤ I(z) ≤ 2π/|z| (z < 0) force −μ ≤ e(μ) < 0, which gives an
//! analytic bracket. For μ < 0 the mirrored bound places e(μ) ∈ (4, 4+|μ|].
//! Above the band the solve runs in the offset t = z − 4 so that roots
//! exponentially close to the edge keep full relative precision.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad;
use crate::spectral::{
    self, resolvent_moments, secular, Region, SpectralPoint, BAND_EDGE_GUARD, BAND_MAX,
};

/// Default relative tolerance on the secular determinant.
pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_ITERATIONS: usize = 200;

/// A sign-changing interval for Δ(μ; ·), entirely on one side of the band.
///
/// `lo`/`hi` are energies. Above the band the full-precision offsets
/// z − 4 are kept alongside, since the energies themselves quantize in
/// steps of ulp(4) near the edge.
#[derive(Clone, Copy, Debug)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub region: Region,
    lo_x: f64,
    hi_x: f64,
}

impl Bracket {
    fn point(&self, x: f64) -> SpectralPoint {
        match self.region {
            Region::Below => SpectralPoint::from_energy(x).expect("bracket keeps x below band"),
            Region::Above => {
                SpectralPoint::above_from_offset(x).expect("bracket keeps offset positive")
            }
        }
    }
}

/// The solved eigenvalue with its certificate.
#[derive(Clone, Copy, Debug)]
pub struct EigenResult {
    pub mu: f64,
    /// e(μ) as an f64 energy.
    pub e: f64,
    /// |Δ(μ; e)| at the returned point.
    pub residual: f64,
    pub bracket_used: Bracket,
    pub iterations: usize,
    /// |Δ|/|∂Δ/∂z|, an estimate of the energy error.
    pub error_estimate: f64,
    /// e − 4 at full relative precision, for eigenvalues above the band.
    pub edge_offset: Option<f64>,
}

impl EigenResult {
    /// Momentum-space eigenfunction f(q) = 1/(𝔢(q) − e).
    pub fn eigenfunction_momentum(&self, q: f64) -> Result<f64> {
        eigenfunction_momentum(self.e, q)
    }

    /// Position-space eigenfunction value at lattice site x.
    pub fn eigenfunction_position(&self, x: i64, rel_tol: f64) -> Result<f64> {
        eigenfunction_position(self.e, x, rel_tol)
    }
}

/// Analytic bracket around the eigenvalue; ε starts at 1e−12·max(1,|μ|) and
/// is shrunk geometrically toward the band if the sign condition is not yet
/// met (it tightens for |μ| ≪ 1, where the root sits close to the edge).
pub fn bracket_eigenvalue(mu: f64) -> Result<Bracket> {
    if mu == 0.0 || !mu.is_finite() {
        return Err(Error::Domain(
            "no eigenvalue at μ = 0 (e(·) jumps across the band there)".into(),
        ));
    }
    let eps = 1e-12 * mu.abs().max(1.0);
    let region = if mu > 0.0 { Region::Below } else { Region::Above };

    // Inner endpoint: close enough to the band that Δ has flipped sign.
    // The closed-form balance gives the scale (|μ|/2)^(4/3) below the band
    // and μ²/8 above; start safely inside and back off geometrically.
    let mut inner = match region {
        Region::Below => eps.min(0.25 * (0.5 * mu).powf(4.0 / 3.0)),
        Region::Above => eps.min(0.03 * mu * mu),
    }
    .max(BAND_EDGE_GUARD);
    // Outer endpoint: |e| ≤ |μ| plus slack.
    let outer = mu.abs() + eps;

    let make = |inner: f64, outer: f64| -> Bracket {
        match region {
            Region::Below => Bracket {
                lo: -outer,
                hi: -inner,
                region,
                lo_x: -outer,
                hi_x: -inner,
            },
            Region::Above => Bracket {
                lo: BAND_MAX + inner,
                hi: BAND_MAX + outer,
                region,
                lo_x: inner,
                hi_x: outer,
            },
        }
    };

    let delta_at = |b: &Bracket, x: f64| spectral::determinant(mu, &b.point(x));

    for _ in 0..80 {
        let b = make(inner, outer);
        let f_lo = delta_at(&b, b.lo_x);
        let f_hi = delta_at(&b, b.hi_x);
        if f_lo * f_hi < 0.0 {
            return Ok(b);
        }
        inner *= 1e-2;
        if inner < BAND_EDGE_GUARD {
            return Err(Error::Domain(format!(
                "could not bracket the eigenvalue for μ = {mu:e}: \
                 the root sits inside the band-edge guard"
            )));
        }
    }
    Err(Error::Domain(format!(
        "bracket construction failed for μ = {mu:e}"
    )))
}

/// Solves Δ(μ; e(μ)) = 0 by bracketed Newton with bisection fallback.
/// Monotonicity of Δ on each side of the band makes the root unique.
pub fn solve_eigenvalue(mu: f64, tol: f64) -> Result<EigenResult> {
    assert!(tol > 0.0, "tolerance must be positive");
    let bracket = bracket_eigenvalue(mu)?;
    let mut a = bracket.lo_x;
    let mut b = bracket.hi_x;
    let mut f_a = spectral::determinant(mu, &bracket.point(a));

    let mut x = 0.5 * (a + b);
    let mut iterations = 0;
    let mut best = (x, f64::INFINITY, f64::NAN); // (x, |delta|, ddz)

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let sv = secular(mu, &bracket.point(x));
        if sv.delta.abs() < best.1 {
            best = (x, sv.delta.abs(), sv.ddz);
        }
        if sv.delta.abs() < tol {
            break;
        }
        // shrink the bracket with the sign of Δ at x
        if sv.delta * f_a > 0.0 {
            a = x;
            f_a = sv.delta;
        } else {
            b = x;
        }
        let newton = x - sv.delta / sv.ddz;
        x = if newton.is_finite() && newton > a.min(b) && newton < a.max(b) {
            newton
        } else {
            0.5 * (a + b)
        };
        if (b - a).abs() <= f64::EPSILON * x.abs() {
            // bracket exhausted at machine resolution
            let sv = secular(mu, &bracket.point(x));
            if sv.delta.abs() < best.1 {
                best = (x, sv.delta.abs(), sv.ddz);
            }
            break;
        }
    }

    let (x, residual, ddz) = best;
    let point = bracket.point(x);
    let e = point.z();
    let error_estimate = residual / ddz.abs();
    if residual >= tol {
        return Err(Error::Accuracy {
            best: e,
            error_estimate,
            context: format!("eigenvalue solve for μ = {mu:e} stalled at |Δ| = {residual:e}"),
        });
    }
    Ok(EigenResult {
        mu,
        e,
        residual,
        bracket_used: bracket,
        iterations,
        error_estimate,
        edge_offset: match bracket.region {
            Region::Above => Some(x),
            Region::Below => None,
        },
    })
}

/// e′ and e″ as functions of μ.
#[derive(Clone, Copy, Debug)]
pub struct EigenDerivatives {
    pub e_prime: f64,
    pub e_double_prime: f64,
}

/// Implicit-function derivatives of e(μ) through the resolvent moments
/// J_k = ∫(𝔢 − e)^(−k) dq:
///
///   e′  = −(1/μ)·J₁/J₂                    (< 0 on both sides)
///   e″  = −(2e′/μ)·(1 + μe′·J₃/J₂)        (> 0 for μ < 0, < 0 for μ > 0)
///
/// The inner factor is ≤ 0 by Cauchy–Schwarz (J₂² ≤ J₁J₃ with μe′ = −J₁/J₂),
/// which pins the convexity pattern.
pub fn eigen_derivatives(mu: f64) -> Result<EigenDerivatives> {
    let solved = solve_eigenvalue(mu, DEFAULT_TOL)?;
    let point = match solved.edge_offset {
        Some(t) => SpectralPoint::above_from_offset(t)?,
        None => SpectralPoint::from_energy(solved.e)?,
    };
    let m = resolvent_moments(&point);
    let e_prime = -m.j1 / (mu * m.j2);
    let e_double_prime = -(2.0 * e_prime / mu) * (1.0 + mu * e_prime * m.j3 / m.j2);
    Ok(EigenDerivatives {
        e_prime,
        e_double_prime,
    })
}

/// f(q) = 1/(𝔢(q) − e); even in q, pole-free since e is off the band.
pub fn eigenfunction_momentum(e: f64, q: f64) -> Result<f64> {
    let p = SpectralPoint::from_energy(e)?;
    Ok(1.0 / spectral::dispersion_shift_point(q, &p))
}

/// Position-space eigenfunction
///
///   f̂(x) = (1/2π) ∫_𝕋 e^(−ixq)/(𝔢(q) − e) dq,
///
/// real and even in x, decaying like the dominant pole modulus to the
/// power |x|.
///
/// The integrand is analytic in the strip |Im q| < −ln(pole modulus), so for
/// large |x| the contour is slid to Im q = −c and the exact factor e^(−c|x|)
/// pulled out; the remaining periodic integral has only mild cancellation
/// and is done with Gauss panels whose count scales with |x|. Without the
/// slide, values below ~1e−16 of the integrand scale would drown in f64
/// rounding.
pub fn eigenfunction_position(e: f64, x: i64, rel_tol: f64) -> Result<f64> {
    assert!(rel_tol > 0.0);
    let p = SpectralPoint::from_energy(e)?;
    let xa = x.unsigned_abs() as f64;

    if x == 0 {
        // f̂(0) = I(e)/2π
        let r = spectral::resolvent_quadrature(&p, rel_tol.min(1e-10))?;
        return Ok(r.value / (2.0 * PI));
    }

    // Contour depth: leave δ of analyticity margin so the shifted integrand
    // stays O(1/δ); push decay e^(−x·δ) no lower than ~e−12 to keep the
    // remaining cancellation well above rounding noise.
    let level = -spectral::dominant_pole_modulus(e).ln();
    let delta = (12.0 / xa).max(0.12).min(0.8 * level);
    let shift = (level - delta).max(0.0);

    let g = |t: f64| -> Complex64 {
        let w = Complex64::new(t, -shift);
        let cosw = w.cos();
        let base = (1.0 - cosw) * (1.0 - cosw) - e;
        // e^{−i x_a (t − i·shift)} with the e^{−x_a·shift} factor removed
        let phase = Complex64::new(0.0, -xa * t).exp();
        phase / base
    };

    let mut panels = ((2.0 * xa) as usize).max(16);
    let mut prev: Option<f64> = None;
    for _ in 0..6 {
        let raw = integrate_complex_panels(&g, panels);
        let value = raw.re * (-xa * shift).exp() / (2.0 * PI);
        if let Some(last) = prev {
            if (value - last).abs() <= rel_tol * value.abs().max(f64::MIN_POSITIVE) {
                return Ok(value);
            }
        }
        prev = Some(value);
        panels *= 2;
    }
    Err(Error::Accuracy {
        best: prev.unwrap_or(f64::NAN),
        error_estimate: f64::NAN,
        context: format!("position eigenfunction at x = {x} did not converge to {rel_tol:e}"),
    })
}

/// GL15 panels of a complex periodic integrand over [−π, π].
fn integrate_complex_panels<F: Fn(f64) -> Complex64>(f: &F, panels: usize) -> Complex64 {
    let (nodes, weights) = quad::gauss_legendre_15();
    let width = 2.0 * PI / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..panels {
        let a = -PI + k as f64 * width;
        let mid = a + 0.5 * width;
        let half = 0.5 * width;
        for i in 0..nodes.len() {
            acc += weights[i] * f(mid + half * nodes[i]);
        }
    }
    acc * (0.5 * width)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn mu_for_e_minus4() -> f64 {
        2.0 * PI / (PI * (1.0 + SQRT2).sqrt() / 4.0)
    }

    #[test]
    fn rejects_zero_coupling() {
        assert!(bracket_eigenvalue(0.0).is_err());
        assert!(solve_eigenvalue(0.0, 1e-10).is_err());
    }

    #[test]
    fn bracket_bounds() {
        let b = bracket_eigenvalue(1.0).unwrap();
        assert_eq!(b.region, Region::Below);
        assert!(b.lo >= -1.0 - 1e-9 && b.hi < 0.0);

        let b = bracket_eigenvalue(-1.0).unwrap();
        assert_eq!(b.region, Region::Above);
        assert!(b.lo > 4.0 && b.hi <= 5.0 + 1e-9);

        // large coupling: bracket must contain −μ + 3/2 + O(1/μ)
        let b = bracket_eigenvalue(1e4).unwrap();
        assert!(b.lo <= -1e4 + 1.5 && -1e4 + 1.5 <= b.hi);
    }

    #[test]
    fn closed_form_inversion_points() {
        // μ = 2π/I(−4) ⇒ e = −4
        let r = solve_eigenvalue(mu_for_e_minus4(), 1e-13).unwrap();
        assert!((r.e + 4.0).abs() < 1e-10, "e = {}", r.e);
        assert!(r.residual < 1e-13);

        // μ = −2^(13/4)/√(1+√2) ⇒ e = 8
        let mu = -(2f64.powf(3.25)) / (1.0 + SQRT2).sqrt();
        assert!((mu + 6.1229).abs() < 1e-4);
        let r = solve_eigenvalue(mu, 1e-13).unwrap();
        assert!((r.e - 8.0).abs() < 1e-10, "e = {}", r.e);
    }

    #[test]
    fn near_edge_law_above() {
        let r = solve_eigenvalue(-1e-3, 1e-13).unwrap();
        let t = r.edge_offset.unwrap();
        assert!(((t - 1.25e-7) / 1.25e-7).abs() < 5e-3, "t = {t:e}");
        assert!(r.e > 4.0);
    }

    #[test]
    fn jump_at_zero_coupling() {
        let above = solve_eigenvalue(-1e-6, 1e-12).unwrap();
        assert!(above.e > 4.0);
        assert!(above.edge_offset.unwrap() > 0.0);
        let below = solve_eigenvalue(1e-6, 1e-12).unwrap();
        assert!(below.e < 0.0);
    }

    #[test]
    fn unique_sign_change_in_bracket() {
        for &mu in &[1e-3, 1.0, 1e4, -1e-3, -1.0, -1e4] {
            let b = bracket_eigenvalue(mu).unwrap();
            let n = 400;
            let mut changes = 0;
            let mut prev = spectral::determinant(mu, &b.point(b.lo_x));
            for k in 1..=n {
                // geometric walk keeps resolution near the band edge
                let f = k as f64 / n as f64;
                let x = match b.region {
                    Region::Below => -((-b.lo_x).powf(1.0 - f) * (-b.hi_x).powf(f)),
                    Region::Above => b.lo_x.powf(1.0 - f) * b.hi_x.powf(f),
                };
                let cur = spectral::determinant(mu, &b.point(x));
                if prev * cur < 0.0 {
                    changes += 1;
                }
                prev = cur;
            }
            assert_eq!(changes, 1, "μ = {mu}");
        }
    }

    #[test]
    fn monotone_decreasing_in_mu() {
        let es: Vec<f64> = [-3.0, -1.0, -0.3, 0.3, 1.0, 3.0]
            .iter()
            .map(|&mu| solve_eigenvalue(mu, 1e-12).unwrap().e)
            .collect();
        for w in es.windows(2) {
            assert!(w[0] > w[1]);
        }
    }

    #[test]
    fn large_coupling_limit() {
        for &mu in &[1e4, -1e4] {
            let r = solve_eigenvalue(mu, 1e-12).unwrap();
            assert!((r.e / mu + 1.0).abs() < 2e-4, "μ = {mu}, e = {}", r.e);
            // next-order offset: e ≈ −μ + 3/2
            assert!((r.e + mu - 1.5).abs() < 1e-2, "μ = {mu}, e = {}", r.e);
        }
    }

    #[test]
    fn derivative_signs() {
        for &mu in &[-30.0, -1.0, -1e-2, 1e-2, 1.0, 30.0] {
            let d = eigen_derivatives(mu).unwrap();
            assert!(d.e_prime < 0.0, "e'({mu}) = {}", d.e_prime);
            if mu < 0.0 {
                assert!(d.e_double_prime > 0.0, "e''({mu}) = {}", d.e_double_prime);
            } else {
                assert!(d.e_double_prime < 0.0, "e''({mu}) = {}", d.e_double_prime);
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let mu = 1.0;
        let h = 1e-4;
        let d = eigen_derivatives(mu).unwrap();
        let e = |m: f64| solve_eigenvalue(m, 1e-13).unwrap().e;
        let fd1 = (e(mu + h) - e(mu - h)) / (2.0 * h);
        assert!(
            ((fd1 - d.e_prime) / d.e_prime).abs() < 1e-6,
            "fd {fd1} vs analytic {}",
            d.e_prime
        );
        let h = 3e-3;
        let fd2 = (e(mu + h) - 2.0 * e(mu) + e(mu - h)) / (h * h);
        assert!(
            ((fd2 - d.e_double_prime) / d.e_double_prime).abs() < 1e-4,
            "fd {fd2} vs analytic {}",
            d.e_double_prime
        );
    }

    /// Independent asymptotic route: pushing 1 = (μ/2π)I(e) to large μ with
    /// the moment expansion of the dispersion gives
    /// e(μ) = −μ + 3/2 − (17/8)/μ + O(μ⁻²), hence e′ → −1 + (17/8)/μ² and
    /// e″ → −(17/4)/μ³. The printed-display variant of e″ (with the first
    /// factor's sign flipped) would give O(1/μ) here instead.
    #[test]
    fn derivatives_match_large_coupling_expansion() {
        let mu = 1e3;
        let d = eigen_derivatives(mu).unwrap();
        let e1 = -1.0 + (17.0 / 8.0) / (mu * mu);
        assert!(((d.e_prime - e1) / (e1 + 1.0)).abs() < 3e-2, "e' = {}", d.e_prime);
        let e2 = -(17.0 / 4.0) / (mu * mu * mu);
        assert!(
            ((d.e_double_prime - e2) / e2).abs() < 3e-2,
            "e'' = {} vs asymptotic {e2}",
            d.e_double_prime
        );
    }

    #[test]
    fn momentum_eigenfunction_values() {
        assert!((eigenfunction_momentum(-4.0, 0.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((eigenfunction_momentum(-4.0, PI).unwrap() - 0.125).abs() < 1e-15);
        assert!(eigenfunction_momentum(2.0, 0.3).is_err());
        // even in q
        for &q in &[0.3, 1.1, 2.9] {
            let a = eigenfunction_momentum(-0.7, q).unwrap();
            let b = eigenfunction_momentum(-0.7, -q).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn momentum_eigenfunction_residual() {
        // (𝔢(q) − e)f − (μ/2π)∫f ≡ Δ(μ; e) at the eigenvalue
        let mu = mu_for_e_minus4();
        let r = solve_eigenvalue(mu, 1e-13).unwrap();
        let p = SpectralPoint::from_energy(r.e).unwrap();
        let integral = spectral::resolvent_quadrature(&p, 1e-12).unwrap().value;
        let mut sup: f64 = 0.0;
        for k in 0..2048 {
            let q = -PI + 2.0 * PI * (k as f64 + 0.5) / 2048.0;
            let f = eigenfunction_momentum(r.e, q).unwrap();
            let resid = (spectral::dispersion(q) - r.e) * f - mu / (2.0 * PI) * integral;
            sup = sup.max(resid.abs());
        }
        assert!(sup < 1e-9, "sup residual {sup}");
    }

    /// Independent residue-sum oracle for f̂(x): with Q(ξ) = (ξ−1)⁴ − 4eξ²,
    /// f̂(x) = 4·Σ_{|ξᵢ|<1} ξᵢ^(|x|+1)/Q′(ξᵢ).
    fn position_by_residues(e: f64, x: i64) -> f64 {
        let poles = spectral::inside_poles(e);
        let xa = x.unsigned_abs() as u32;
        let mut acc = Complex64::new(0.0, 0.0);
        for xi in poles {
            let qp = 4.0 * (xi - 1.0).powu(3) - 8.0 * e * xi;
            acc += xi.powu(xa + 1) / qp;
        }
        4.0 * acc.re
    }

    #[test]
    fn position_matches_residue_oracle() {
        for &(e, xs) in &[
            (-4.0, [0i64, 1, 3, 8, 20, 41, 60].as_slice()),
            (-0.4, [0, 2, 5, 12].as_slice()),
            (8.0, [0, 1, 4, 9, 25].as_slice()),
        ] {
            for &x in xs {
                let by_quad = eigenfunction_position(e, x, 1e-9).unwrap();
                let by_res = position_by_residues(e, x);
                assert!(
                    ((by_quad - by_res) / by_res).abs() < 1e-7,
                    "e={e}, x={x}: quad {by_quad:e} vs residues {by_res:e}"
                );
            }
        }
    }

    #[test]
    fn position_evenness_and_center_value() {
        let e = -4.0;
        for x in [1i64, 2, 7, 19, 50] {
            let plus = eigenfunction_position(e, x, 1e-9).unwrap();
            let minus = eigenfunction_position(e, -x, 1e-9).unwrap();
            assert_eq!(plus, minus);
        }
        let center = eigenfunction_position(e, 0, 1e-11).unwrap();
        let expect = PI * (1.0 + SQRT2).sqrt() / 4.0 / (2.0 * PI);
        assert!(((center - expect) / expect).abs() < 1e-10);
        assert!((center - 0.1942217).abs() < 1e-6);
    }

    #[test]
    fn position_decay_rate_fit() {
        let e = -4.0;
        let rate = spectral::residue_data(e).unwrap().xi0.norm().ln();
        let xs: Vec<i64> = (10..=30).map(|k| 2 * k).collect();
        let logs: Vec<f64> = xs
            .iter()
            .map(|&x| {
                eigenfunction_position(e, x, 1e-8)
                    .unwrap()
                    .abs()
                    .ln()
            })
            .collect();
        let slope = least_squares_slope(&xs, &logs);
        assert!(
            ((slope - rate) / rate).abs() < 0.05,
            "fit {slope} vs log|ξ₀| {rate}"
        );
    }

    fn least_squares_slope(xs: &[i64], ys: &[f64]) -> f64 {
        let n = xs.len() as f64;
        let sx: f64 = xs.iter().map(|&x| x as f64).sum();
        let sy: f64 = ys.iter().sum();
        let sxx: f64 = xs.iter().map(|&x| (x as f64) * (x as f64)).sum();
        let sxy: f64 = xs.iter().zip(ys).map(|(&x, &y)| x as f64 * y).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    }
}
