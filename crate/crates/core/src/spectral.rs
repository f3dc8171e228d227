//! Momentum-space model: dispersion, closed-form resolvent integral,
//! quadrature oracle, residue data, and the secular determinant.
//!
//! The free operator acts in L²(𝕋) as multiplication by the dispersion
//! 𝔢(q) = (1 − cos q)², with band [0, 4]. For a real energy z off the band,
//! the resolvent integral
//!
//!   I(z) = ∫_𝕋 dq / (𝔢(q) − z)
//!
//! has the closed form  I(z) = −sign(z)·√2·π·√(√|z−4| + √|z|) / (|z|^(3/4)·√|z−4|),
//! obtained by residues of the quartic (ξ−1)⁴ − 4zξ² in ξ = e^{iq}. The
//! secular determinant Δ(μ; z) = 1 − (μ/2π)·I(z) vanishes exactly at the
//! impurity eigenvalue.
//!
//! Energies are carried as a region plus the distances s = |z| and t = |z−4|
//! so that points exponentially close to the band edge at 4 keep full
//! relative precision (solving in raw z would quantize t in steps of
//! ulp(4) ≈ 8.9e−16, far too coarse for the μ → 0⁻ regime).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{self, QuadResult};

pub const BAND_MIN: f64 = 0.0;
pub const BAND_MAX: f64 = 4.0;

/// Queries closer to the band than this are rejected as domain errors
/// instead of returning astronomically large resolvent values.
pub const BAND_EDGE_GUARD: f64 = 1e-14;

/// Model constants: the coupling and the (fixed) band data.
#[derive(Clone, Debug)]
pub struct ModelParameters {
    pub coupling: f64,
    pub band_min: f64,
    pub band_max: f64,
    pub dispersion: &'static str,
}

impl ModelParameters {
    pub fn new(coupling: f64) -> Self {
        Self {
            coupling,
            band_min: BAND_MIN,
            band_max: BAND_MAX,
            dispersion: "(1 - cos q)^2",
        }
    }
}

/// Which side of the band an energy sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    /// z < 0
    Below,
    /// z > 4
    Above,
}

/// A real energy outside [0, 4], stored as (region, |z|, |z−4|).
#[derive(Clone, Copy, Debug)]
pub struct SpectralPoint {
    region: Region,
    /// |z|
    s: f64,
    /// |z − 4|
    t: f64,
}

impl SpectralPoint {
    pub fn from_energy(z: f64) -> Result<Self> {
        if !z.is_finite() {
            return Err(Error::Domain(format!("energy must be finite, got {z}")));
        }
        if z <= -BAND_EDGE_GUARD {
            Ok(Self {
                region: Region::Below,
                s: -z,
                t: BAND_MAX - z,
            })
        } else if z >= BAND_MAX + BAND_EDGE_GUARD {
            // exact for 2 ≤ z ≤ 8 (Sterbenz), relative-accurate beyond
            Ok(Self {
                region: Region::Above,
                s: z,
                t: z - BAND_MAX,
            })
        } else {
            Err(Error::Domain(format!(
                "energy {z} is inside [{BAND_MIN}, {BAND_MAX}] (or within the edge guard)"
            )))
        }
    }

    /// A point above the band given directly as the offset t = z − 4,
    /// keeping full relative precision for exponentially small offsets.
    pub fn above_from_offset(t: f64) -> Result<Self> {
        if !(t >= BAND_EDGE_GUARD) {
            return Err(Error::Domain(format!(
                "offset above the band must be at least {BAND_EDGE_GUARD:e}, got {t:e}"
            )));
        }
        Ok(Self {
            region: Region::Above,
            s: BAND_MAX + t,
            t,
        })
    }

    pub fn region(&self) -> Region {
        self.region
    }

    /// The energy as a plain f64 (rounds t onto the f64 grid near z = 4).
    pub fn z(&self) -> f64 {
        match self.region {
            Region::Below => -self.s,
            Region::Above => BAND_MAX + self.t,
        }
    }

    /// |z|
    pub fn magnitude(&self) -> f64 {
        self.s
    }

    /// |z − 4|, at full relative precision for Above points.
    pub fn edge_offset(&self) -> f64 {
        self.t
    }

    /// Distance to the band.
    pub fn band_distance(&self) -> f64 {
        match self.region {
            Region::Below => self.s,
            Region::Above => self.t,
        }
    }
}

/// 𝔢(q) = (1 − cos q)² = 4·sin⁴(q/2); even, 2π-periodic, range [0, 4].
pub fn dispersion(q: f64) -> f64 {
    let sh = (0.5 * q).sin();
    let s2 = sh * sh;
    4.0 * s2 * s2
}

/// 𝔢(q) − z without cancellation on either side of the band.
pub(crate) fn dispersion_shift_point(q: f64, p: &SpectralPoint) -> f64 {
    let h = 0.5 * q;
    match p.region {
        Region::Below => dispersion(q) + p.s,
        Region::Above => {
            // 𝔢 − 4 = −4·cos²(q/2)·(1 + sin²(q/2))
            let c = h.cos();
            let sh = h.sin();
            -(4.0 * c * c * (1.0 + sh * sh) + p.t)
        }
    }
}

/// How `ResolventValue` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Quadrature,
}

/// I(z) = ∫_𝕋 dq/(𝔢(q) − z); positive below the band, negative above.
#[derive(Clone, Copy, Debug)]
pub struct ResolventValue {
    pub value: f64,
    pub method: Method,
}

/// The first three resolvent moments J_k = ∫_𝕋 dq/(𝔢(q) − z)^k.
#[derive(Clone, Copy, Debug)]
pub struct ResolventMoments {
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
}

/// Closed-form resolvent integral.
pub fn resolvent_closed(p: &SpectralPoint) -> ResolventValue {
    let rs = p.s.sqrt();
    let rt = p.t.sqrt();
    let s34 = rs * rs.sqrt(); // |z|^(3/4)
    let magnitude = std::f64::consts::SQRT_2 * PI * (rs + rt).sqrt() / (s34 * rt);
    let value = match p.region {
        Region::Below => magnitude,
        Region::Above => -magnitude,
    };
    ResolventValue {
        value,
        method: Method::ClosedForm,
    }
}

/// J₁, J₂, J₃ from analytic derivatives of the closed form
/// (J₂ = I′, J₃ = I″/2).
pub fn resolvent_moments(p: &SpectralPoint) -> ResolventMoments {
    let sigma = match p.region {
        Region::Below => -1.0,
        Region::Above => 1.0,
    };
    let (s, t) = (p.s, p.t);
    let rs = s.sqrt();
    let rt = t.sqrt();
    let u = rs + rt;
    let j1 = resolvent_closed(p).value;

    let up = sigma * 0.5 * (1.0 / rs + 1.0 / rt);
    let upp = -0.25 * (1.0 / (rs * rs * rs) + 1.0 / (rt * rt * rt));
    // logarithmic derivatives of |I|
    let lp = up / (2.0 * u) - sigma * (0.75 / s + 0.5 / t);
    let lpp = (upp * u - up * up) / (2.0 * u * u) + 0.75 / (s * s) + 0.5 / (t * t);

    ResolventMoments {
        j1,
        j2: j1 * lp,
        j3: 0.5 * j1 * (lpp + lp * lp),
    }
}

/// Adaptive-quadrature oracle for I(z), independent of the closed form.
/// Exploits evenness: integrates [0, π] and doubles.
pub fn resolvent_quadrature(p: &SpectralPoint, rel_tol: f64) -> Result<ResolventValue> {
    let r = resolvent_moment_quadrature(p, 1, rel_tol)?;
    Ok(ResolventValue {
        value: r.value,
        method: Method::Quadrature,
    })
}

/// Quadrature for J_k = ∫_𝕋 (𝔢 − z)^(−k) dq, k ≥ 1.
pub fn resolvent_moment_quadrature(p: &SpectralPoint, k: u32, rel_tol: f64) -> Result<QuadResult> {
    assert!(k >= 1);
    let point = *p;
    let f = move |q: f64| dispersion_shift_point(q, &point).powi(-(k as i32));
    let r = quad::adaptive(&f, 0.0, PI, rel_tol)?;
    Ok(QuadResult {
        value: 2.0 * r.value,
        abs_error: 2.0 * r.abs_error,
        evaluations: r.evaluations,
    })
}

/// Δ(μ; z) and its z-derivative. For μ > 0 the determinant is strictly
/// decreasing in z on each region, for μ < 0 strictly increasing.
#[derive(Clone, Copy, Debug)]
pub struct SecularValue {
    pub delta: f64,
    pub ddz: f64,
}

/// Δ(μ; z) = 1 − (μ/2π)·I(z).
pub fn determinant(mu: f64, p: &SpectralPoint) -> f64 {
    1.0 - mu / (2.0 * PI) * resolvent_closed(p).value
}

/// ∂Δ/∂z = −(μ/2π)·∫(𝔢−z)^(−2) dq, with the 1/(2π) inherited from Δ.
pub fn ddz_determinant(mu: f64, p: &SpectralPoint) -> f64 {
    -mu / (2.0 * PI) * resolvent_moments(p).j2
}

pub fn secular(mu: f64, p: &SpectralPoint) -> SecularValue {
    let m = resolvent_moments(p);
    SecularValue {
        delta: 1.0 - mu / (2.0 * PI) * m.j1,
        ddz: -mu / (2.0 * PI) * m.j2,
    }
}

/// Residue data of the quartic (ξ−1)⁴ + 4α⁴ξ² for z = −α⁴ < 0: the inside
/// root ξ₀ and the constant A that rebuild I(z) = 2Aπ/(α³√(4+α⁴)).
#[derive(Clone, Copy, Debug)]
pub struct ResidueData {
    /// α = (−z)^(1/4) > 0
    pub alpha: f64,
    /// A = √((√(4+α⁴) + α²)/2)
    pub big_a: f64,
    /// ξ₀ = (1 − α/A) + i(Aα − α²), inside the unit disk
    pub xi0: Complex64,
}

pub fn residue_data(z: f64) -> Result<ResidueData> {
    if !(z < 0.0) {
        return Err(Error::Domain(format!(
            "residue data needs z < 0, got {z}"
        )));
    }
    let alpha = (-z).sqrt().sqrt();
    let a2 = alpha * alpha;
    let root = (4.0 + a2 * a2).sqrt();
    let big_a = (0.5 * (root + a2)).sqrt();
    let xi0 = Complex64::new(1.0 - alpha / big_a, big_a * alpha - a2);
    Ok(ResidueData { alpha, big_a, xi0 })
}

impl ResidueData {
    /// I(z) rebuilt from the residue computation.
    pub fn resolvent_value(&self) -> f64 {
        let a = self.alpha;
        let a4 = a * a * a * a;
        2.0 * self.big_a * PI / (a * a * a * (4.0 + a4).sqrt())
    }

    /// |(ξ₀−1)⁴ + 4α⁴ξ₀²|; zero up to rounding when ξ₀ is a true root.
    pub fn quartic_residual(&self) -> f64 {
        let a = self.alpha;
        let a4 = a * a * a * a;
        let m = self.xi0 - 1.0;
        let m2 = m * m;
        (m2 * m2 + 4.0 * a4 * self.xi0 * self.xi0).norm()
    }
}

/// The two roots of (ξ−1)⁴ = 4zξ² inside the unit disk, i.e. the poles of
/// 1/(𝔢−z) in ξ = e^{iq}. For z < 0 they are a conjugate pair; for z > 4,
/// two real numbers of opposite sign.
pub fn inside_poles(z: f64) -> [Complex64; 2] {
    let sqrt_z = if z >= 0.0 {
        Complex64::new(z.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-z).sqrt())
    };
    let mut out = [Complex64::default(); 2];
    for (slot, sign) in out.iter_mut().zip([1.0, -1.0]) {
        // (ξ−1)² = ±2√z·ξ  ⇔  ξ² − (2 ± 2√z)ξ + 1 = 0, root product 1
        let b = Complex64::new(2.0, 0.0) + 2.0 * sign * sqrt_z;
        let disc = (b * b - 4.0).sqrt();
        let r1 = 0.5 * (b + disc);
        let r2 = 0.5 * (b - disc);
        *slot = if r1.norm() <= r2.norm() { r1 } else { r2 };
    }
    out
}

/// Modulus of the slowest-decaying pole; position-space Green's functions
/// and eigenfunctions decay like this to the power |x|.
pub fn dominant_pole_modulus(z: f64) -> f64 {
    let [p0, p1] = inside_poles(z);
    p0.norm().max(p1.norm())
}
