//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured figure next to its pinned tolerance (visible under
//! `cargo test --test acceptance -- --nocapture`).

use std::f64::consts::PI;

use bilap_core::asympt::{
    coefficient_report, default_fit_grid, expand_negative, expand_positive,
    fit_coefficients_oracle, implicit_problem_negative, implicit_problem_positive, Regime,
};
use bilap_core::eigen::{self, solve_eigenvalue};
use bilap_core::field::{rat, AlgebraicNumber};
use bilap_core::lattice;
use bilap_core::spectral::{
    determinant, dominant_pole_modulus, residue_data, resolvent_closed, resolvent_quadrature,
    SpectralPoint,
};

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Criterion 1: closed-form resolvent vs adaptive quadrature, 10³ log-spaced
/// energies on both sides, max relative difference < 1e−10.
#[test]
fn criterion_1_resolvent_cross_oracle() {
    let mut worst: f64 = 0.0;
    let mut worst_z = f64::NAN;
    let per_side = 500;
    for k in 0..per_side {
        let exponent = -3.0 + 8.0 * k as f64 / (per_side - 1) as f64;
        for z in [-(10f64.powf(exponent)), 4.0 + 10f64.powf(exponent)] {
            let p = SpectralPoint::from_energy(z).unwrap();
            let closed = resolvent_closed(&p).value;
            let quad = resolvent_quadrature(&p, 1e-12).unwrap().value;
            let rel = ((closed - quad) / closed).abs();
            if rel > worst {
                worst = rel;
                worst_z = z;
            }
        }
    }
    assert!(
        worst < 1e-10,
        "max relative difference {worst:e} at z = {worst_z}"
    );
    println!("criterion 1 PASS: max |closed−quadrature|/|closed| = {worst:.2e} < 1e-10 over 1000 energies");
}

/// Criterion 2: for μ = ±10^k, k = −3..4, exactly one root of Δ, binding
/// below the band for μ > 0 and above for μ < 0, with solver residual
/// |Δ| < 1e−12.
#[test]
fn criterion_2_uniqueness_and_signs() {
    let mut worst_residual: f64 = 0.0;
    for k in -3..=4 {
        for sign in [1.0, -1.0] {
            let mu = sign * 10f64.powi(k);
            let r = solve_eigenvalue(mu, 1e-13).unwrap();
            assert!(r.residual < 1e-12, "μ = {mu}: residual {}", r.residual);
            worst_residual = worst_residual.max(r.residual);
            if mu > 0.0 {
                assert!(r.e < 0.0, "μ = {mu} must bind below the band, got {}", r.e);
            } else {
                assert!(r.e > 4.0, "μ = {mu} must bind above the band, got {}", r.e);
            }
            // exactly one sign change of Δ across the bracket
            let b = &r.bracket_used;
            let (lo, hi) = (b.lo, b.hi);
            let point = |f: f64| -> SpectralPoint {
                if mu > 0.0 {
                    SpectralPoint::from_energy(lo + (hi - lo) * f).unwrap()
                } else {
                    // geometric walk in the offset keeps resolution at the edge
                    let (olo, ohi) = (lo - 4.0, hi - 4.0);
                    SpectralPoint::above_from_offset(olo.powf(1.0 - f) * ohi.powf(f)).unwrap()
                }
            };
            let mut changes = 0;
            let mut prev = determinant(mu, &point(0.0));
            for j in 1..=400 {
                let cur = determinant(mu, &point(j as f64 / 400.0));
                if prev * cur < 0.0 {
                    changes += 1;
                }
                prev = cur;
            }
            assert_eq!(changes, 1, "μ = {mu}: expected exactly one root");
        }
    }
    println!("criterion 2 PASS: unique signed root for all μ = ±10^k, worst residual {worst_residual:.2e} < 1e-12");
}

/// Criterion 3: e strictly decreasing on 100-point grids on each side;
/// e″ from the closed formula matches second finite differences to 1e−4
/// relative and follows the convexity pattern.
#[test]
fn criterion_3_monotone_convex() {
    let mut worst_fd: f64 = 0.0;
    for side in [1.0, -1.0] {
        let mut prev_e = f64::NAN;
        for k in 0..100 {
            let mu = side * 10f64.powf(-2.0 + 4.0 * k as f64 / 99.0);
            let e = solve_eigenvalue(mu, 1e-13).unwrap().e;
            if k > 0 {
                // grid runs away from zero: |μ| grows, e decreases on each side
                if side > 0.0 {
                    assert!(e < prev_e, "not strictly decreasing at μ = {mu}");
                } else {
                    assert!(e > prev_e, "not strictly decreasing at μ = {mu}");
                }
            }
            prev_e = e;

            let d = eigen::eigen_derivatives(mu).unwrap();
            if mu < 0.0 {
                assert!(d.e_double_prime > 0.0, "e''({mu}) should be convex");
            } else {
                assert!(d.e_double_prime < 0.0, "e''({mu}) should be concave");
            }
            let h = 3e-3 * mu.abs();
            let ee = |m: f64| solve_eigenvalue(m, 1e-13).unwrap().e;
            let fd2 = (ee(mu + h) - 2.0 * e + ee(mu - h)) / (h * h);
            let rel = ((fd2 - d.e_double_prime) / d.e_double_prime).abs();
            worst_fd = worst_fd.max(rel);
            assert!(
                rel < 1e-4,
                "μ = {mu}: e'' {} vs FD {fd2} (rel {rel:e})",
                d.e_double_prime
            );
        }
    }
    println!("criterion 3 PASS: strict monotonicity and convexity pattern; worst |e''−FD|/|e''| = {worst_fd:.2e} < 1e-4");
}

/// Criterion 4: |e(μ)/μ + 1| < 2e−4 at |μ| = 10⁴.
#[test]
fn criterion_4_large_coupling_limit() {
    let mut worst: f64 = 0.0;
    for mu in [1e4, -1e4] {
        let e = solve_eigenvalue(mu, 1e-13).unwrap().e;
        let dev = (e / mu + 1.0).abs();
        worst = worst.max(dev);
        assert!(dev < 2e-4, "μ = {mu}: e/μ = {}", e / mu);
    }
    println!("criterion 4 PASS: |e/μ + 1| = {worst:.2e} < 2e-4 at |μ| = 1e4");
}

/// Criterion 5: near-edge laws — (e(μ)−4)/μ² → 1/8 (μ ↗ 0, checked at
/// μ = −1e−2 to 5e−3 relative) and e(μ)/μ^(4/3) → −2^(−4/3) (μ ↘ 0,
/// checked at μ = 1e−3 to 1e−2 relative).
#[test]
fn criterion_5_edge_laws() {
    let mu = -1e-2;
    let t = solve_eigenvalue(mu, 1e-13).unwrap().edge_offset.unwrap();
    let ratio = t / (mu * mu);
    let dev_above = (ratio - 0.125).abs() / 0.125;
    assert!(dev_above < 5e-3, "(e−4)/μ² = {ratio}, expected 1/8");

    let mu = 1e-3;
    let e = solve_eigenvalue(mu, 1e-13).unwrap().e;
    let law = 2f64.powf(-4.0 / 3.0);
    let dev_below = (e / mu.powf(4.0 / 3.0) + law).abs() / law;
    assert!(dev_below < 1e-2, "e/μ^(4/3) = {}", e / mu.powf(4.0 / 3.0));
    println!("criterion 5 PASS: (e−4)/μ² off by {dev_above:.2e} (<5e-3); e/μ^(4/3) off by {dev_below:.2e} (<1e-2)");
}

/// Criterion 6: exact engine coefficients vs the numeric fit oracle — first
/// three of each regime within 1e−6 relative; pinned leading values; the
/// printed reference values are compared and discrepancies reported.
/// Acceptance is engine-vs-fit agreement, not agreement with the reference.
#[test]
fn criterion_6_series_engine_vs_fit() {
    let mut worst: f64 = 0.0;
    for regime in [Regime::NegativeNearZero, Regime::PositiveNearZero] {
        let expansion = match regime {
            Regime::NegativeNearZero => expand_negative(4),
            Regime::PositiveNearZero => expand_positive(4),
        };
        let fit = fit_coefficients_oracle(regime, 4, &default_fit_grid(regime)).unwrap();
        for k in 0..3 {
            let exact = expansion.derived_coeffs[k].to_f64();
            let rel = ((fit.fitted[k] - exact) / exact).abs();
            worst = worst.max(rel);
            assert!(
                rel < 1e-6,
                "{} coefficient {k}: engine {exact} vs fit {} (rel {rel:e})",
                regime.label(),
                fit.fitted[k]
            );
        }
    }

    // pinned leading coefficients, exact in ℚ(2^(1/6))
    let neg = expand_negative(2);
    assert_eq!(
        neg.derived_coeffs[0],
        AlgebraicNumber::sqrt2().scale(&rat(-1, 4)),
        "coefficient of μ must be −1/(2√2), i.e. +1/(2√2) for −μ"
    );
    let pos = expand_positive(2);
    assert_eq!(
        pos.derived_coeffs[0],
        AlgebraicNumber::theta_pow(4).scale(&rat(1, 2)),
        "leading coefficient must be 2^(−1/3)"
    );
    assert_eq!(
        pos.u_coeffs[0],
        AlgebraicNumber::from_rational(rat(1, 24)),
        "positive-regime a₁ must be exactly 1/24"
    );

    // three-way discrepancy report for the printed reference values
    let mut flagged = Vec::new();
    for regime in [Regime::NegativeNearZero, Regime::PositiveNearZero] {
        let rows = coefficient_report(regime, 4, &default_fit_grid(regime)).unwrap();
        for row in &rows {
            if let Some(printed) = &row.paper_value {
                let status = if row.discrepancy() { "DIFFERS" } else { "agrees" };
                println!(
                    "  report [{} n={}]: reference {} | engine {} | fit {:?} -> {status}",
                    regime.label(),
                    row.n,
                    printed,
                    row.engine_exact,
                    row.fit_value,
                );
                if row.discrepancy() {
                    flagged.push((regime.label(), row.n));
                    // where reference and engine differ, the fit must side
                    // with the engine
                    let exact = row.engine_exact.to_f64();
                    let fit = row.fit_value.unwrap();
                    assert!(
                        ((fit - exact) / exact).abs() < 1e-6,
                        "fit does not back the engine at {} n={}",
                        regime.label(),
                        row.n
                    );
                }
            }
        }
    }
    assert!(
        !flagged.is_empty(),
        "expected the known reference discrepancies to be flagged"
    );
    println!("criterion 6 PASS: engine↔fit agree (worst rel {worst:.2e} < 1e-6 on first 3); discrepancies flagged at {flagged:?}");
}

/// Criterion 7: substituting each regime's solved series back into the exact
/// secular series gives the identically zero truncated series through
/// order 4 (exact field equality).
#[test]
fn criterion_7_exact_residual() {
    let p = implicit_problem_negative(4);
    let u = p.solve(4).unwrap();
    let r = p.residual(&u);
    assert!(r.is_zero(), "negative-regime residual {r:?}");
    let p = implicit_problem_positive(4);
    let u = p.solve(4).unwrap();
    let r = p.residual(&u);
    assert!(r.is_zero(), "positive-regime residual {r:?}");
    println!("criterion 7 PASS: exact zero residual through order 4 in both regimes");
}

/// Criterion 8: lattice oracle — |e_N(1) − e(1)| < 1e−6 at N = 2000 with no
/// degradation across N ∈ {125, …, 2000}; dense spectrum at N = 32, μ = 0
/// inside [−1e−9, 4+1e−9]; exactly one eigenvalue outside the band for
/// μ = ±3.
#[test]
fn criterion_8_lattice_oracle() {
    let e_cont = solve_eigenvalue(1.0, 1e-13).unwrap().e;

    // In the visible range the convergence is exponential at the predicted
    // rate |ξ₀|^(2N); the prefactor oscillates with N (conjugate-pole
    // phases), so the rate is read off a parity-consistent window. By
    // N ≈ 20 the error saturates at solver/rounding noise.
    let small: Vec<f64> = [4usize, 8, 12, 16]
        .iter()
        .map(|&n| (lattice::secular_eigenvalue(n, 1.0, 1e-13).unwrap() - e_cont).abs())
        .collect();
    for w in small.windows(2) {
        assert!(w[1] < w[0], "small-N errors not decreasing: {small:?}");
    }
    let rate = ((small[0] / small[3]).ln()) / 24.0; // ΔN = 12 sites, per-site rate of |ξ₀|^(2N)
    let predicted = -dominant_pole_modulus(e_cont).ln();
    assert!(
        (rate - predicted).abs() < 0.15 * predicted,
        "per-site decay rate {rate} vs predicted |ln ξ₀| = {predicted}"
    );

    // Spec grid: exponential convergence has saturated at rounding level for
    // every listed N, so the errors sit at the noise floor; require no
    // degradation beyond it and the hard 1e−6 bound at N = 2000.
    let ns = [125usize, 250, 500, 1000, 2000];
    let errs: Vec<f64> = ns
        .iter()
        .map(|&n| (lattice::secular_eigenvalue(n, 1.0, 1e-13).unwrap() - e_cont).abs())
        .collect();
    const NOISE_FLOOR: f64 = 1e-11;
    for w in errs.windows(2) {
        assert!(
            w[1] <= (1.1 * w[0]).max(NOISE_FLOOR),
            "convergence degraded: {errs:?}"
        );
    }
    assert!(errs[4] < 1e-6, "|e_2000 − e| = {:e}", errs[4]);

    let clean = lattice::dense_spectrum_small(32, 0.0).unwrap();
    assert!(clean.outside_band.is_empty());
    for &ev in &clean.eigenvalues {
        assert!((-1e-9..=4.0 + 1e-9).contains(&ev), "eigenvalue {ev} escapes the band");
    }
    let bound = lattice::dense_spectrum_small(32, 3.0).unwrap();
    assert_eq!(bound.outside_band.len(), 1);
    assert!(bound.outside_band[0] < 0.0);
    let anti = lattice::dense_spectrum_small(32, -3.0).unwrap();
    assert_eq!(anti.outside_band.len(), 1);
    assert!(anti.outside_band[0] > 4.0);

    println!(
        "criterion 8 PASS: |e_2000 − e| = {:.2e} < 1e-6 (small-N rate {rate:.3} ≈ {predicted:.3}); spec-grid errors {errs:?}; clean band and single split level verified",
        errs[4]
    );
}

/// Criterion 9: eigenfunction — eigenvalue-equation residual on a
/// 2048-point momentum grid < 1e−9 (sup norm, normalized), and the
/// position-space decay fit within 5% of log|ξ₀| at e = −4.
#[test]
fn criterion_9_eigenfunction() {
    // couple so that e = −4 exactly solves the secular equation
    let mu = 2.0 * PI / (PI * (1.0 + SQRT2).sqrt() / 4.0);
    let r = solve_eigenvalue(mu, 1e-13).unwrap();
    let p = SpectralPoint::from_energy(r.e).unwrap();
    let integral = resolvent_quadrature(&p, 1e-12).unwrap().value;
    let mut sup: f64 = 0.0;
    let mut fmax: f64 = 0.0;
    for k in 0..2048 {
        let q = -PI + 2.0 * PI * (k as f64 + 0.5) / 2048.0;
        let f = eigen::eigenfunction_momentum(r.e, q).unwrap();
        fmax = fmax.max(f.abs());
        let resid = (bilap_core::spectral::dispersion(q) - r.e) * f - mu / (2.0 * PI) * integral;
        sup = sup.max(resid.abs());
    }
    let normalized = sup / fmax;
    assert!(normalized < 1e-9, "normalized sup residual {normalized:e}");

    let rate = residue_data(-4.0).unwrap().xi0.norm().ln();
    let xs: Vec<i64> = (10..=30).map(|k| 2 * k).collect();
    let logs: Vec<f64> = xs
        .iter()
        .map(|&x| eigen::eigenfunction_position(-4.0, x, 1e-8).unwrap().abs().ln())
        .collect();
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().map(|&x| x as f64).sum();
    let sy: f64 = logs.iter().sum();
    let sxx: f64 = xs.iter().map(|&x| (x * x) as f64).sum();
    let sxy: f64 = xs.iter().zip(&logs).map(|(&x, &y)| x as f64 * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let dev = ((slope - rate) / rate).abs();
    assert!(dev < 0.05, "decay fit {slope} vs log|ξ₀| {rate}");
    println!(
        "criterion 9 PASS: momentum residual {normalized:.2e} < 1e-9; decay fit {slope:.5} vs log|ξ₀| = {rate:.5} (off by {:.2}%, limit 5%)",
        100.0 * dev
    );
}
