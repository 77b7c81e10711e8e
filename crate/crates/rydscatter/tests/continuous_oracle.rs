//! Oracles for the continuous-coupling overlaps: the 2-D quadrature against
//! the printed closed forms, against an independent 1-D reduction, and the
//! point-like limit of the corrected transmissivity against the two-point
//! formula.

use rydscatter::analytic::t_eff_a;
use rydscatter::continuous::{overlaps_closed, overlaps_quadrature, t_continuous_with};
use rydscatter::model::{Direction, DriveField, ScatterParams, WaveguideMode};
use rydscatter::quad2d::adaptive_quad_1d;
use std::f64::consts::{FRAC_PI_2, PI};

/// Correlation density of two width-`lambda` exponential profiles:
/// integrating `nu(x) nu(y) K(x - y)` over the plane equals
/// `int h(s) K(s) ds` with `h(s) = (|s| + lambda/2) e^{-2|s|/lambda} / lambda^2`.
fn correlation_density(lambda: f64, s: f64) -> f64 {
    (s.abs() + 0.5 * lambda) * (-2.0 * s.abs() / lambda).exp() / (lambda * lambda)
}

fn reduce_1d(lambda: f64, center: f64, kernel: impl Fn(f64) -> f64) -> f64 {
    let half = 30.0 * lambda + center.abs();
    adaptive_quad_1d(
        |s| correlation_density(lambda, s) * kernel(s),
        -half,
        half,
        &[0.0, center],
        1e-10,
    )
    .unwrap()
}

#[test]
fn quadrature_matches_the_one_dimensional_reduction() {
    // Two independent numeric routes to the same integrals.
    for lambda in [0.5, FRAC_PI_2, 2.0] {
        for center in [0.0, 1.0, PI, 4.5] {
            let o = overlaps_quadrature(lambda, center, 0.0, 1.0).unwrap();
            let gamma_ref = reduce_1d(lambda, center, |s| (s - center).cos());
            let j_ref = reduce_1d(lambda, center, |s| (s - center).abs().sin());
            assert!(
                (o.gamma_ex - gamma_ref).abs() < 1e-6,
                "Gamma_ex({lambda}, {center}): 2-D {} vs 1-D {}",
                o.gamma_ex,
                gamma_ref
            );
            assert!(
                (o.j_ex - j_ref).abs() < 1e-6,
                "J_ex({lambda}, {center}): 2-D {} vs 1-D {}",
                o.j_ex,
                j_ref
            );
        }
    }
}

#[test]
fn closed_forms_match_quadrature_on_a_parameter_grid() {
    let mut reported = Vec::new();
    for lambda in [0.5, FRAC_PI_2, 2.0] {
        for phi in [PI / 4.0, FRAC_PI_2, PI] {
            for theta in [0.0, FRAC_PI_2, 2.0] {
                let closed = overlaps_closed(lambda, phi, theta, 1.0).unwrap();
                let quad = overlaps_quadrature(lambda, phi, theta, 1.0).unwrap();
                for (name, c, q) in [
                    ("Gamma", closed.gamma, quad.gamma),
                    ("J", closed.j, quad.j),
                    ("Gamma_ex", closed.gamma_ex, quad.gamma_ex),
                    ("Gamma_ex'", closed.gamma_ex_prime, quad.gamma_ex_prime),
                ] {
                    assert!(
                        (c - q).abs() < 1e-6,
                        "{name}({lambda}, {phi}, {theta}): closed {c} vs quadrature {q}"
                    );
                }
                // The exchange Lamb terms are typo-suspect as printed;
                // record the discrepancy instead of asserting it away.
                reported.push((
                    lambda,
                    phi,
                    theta,
                    (closed.j_ex - quad.j_ex).abs(),
                    (closed.j_ex_prime - quad.j_ex_prime).abs(),
                ));
            }
        }
    }
    let max_dev = reported
        .iter()
        .map(|r| r.3.max(r.4))
        .fold(0.0f64, f64::max);
    println!(
        "printed J_ex / J_ex' deviate from quadrature by up to {max_dev:.3e} \
         over the grid (quadrature is the reference)"
    );
    assert!(max_dev > 1e-3, "expected the printed exchange terms to disagree");
}

#[test]
fn point_like_limit_recovers_the_two_point_transmissivity() {
    // As Lambda -> 0 the corrected formula must collapse onto the
    // delta-coupled one for both directions.
    let mut params = ScatterParams {
        drive1: DriveField::new(1.0, 30.0, 0.9),
        mode_a: WaveguideMode::new(1.0, FRAC_PI_2),
        ..ScatterParams::default()
    };
    let upsilon = 1.0 / 900.0;
    let overlaps = overlaps_quadrature(1e-3, FRAC_PI_2, 0.9, upsilon).unwrap();
    for delta in [-30.12, -30.0667, -30.03] {
        params.delta_ka_mhz = delta;
        for direction in [Direction::Forward, Direction::Backward] {
            let cont = t_continuous_with(&params, &overlaps, direction).unwrap();
            let point = t_eff_a(&params, direction).unwrap();
            // Overlaps converge to their point-like limits at O(Lambda);
            // the dip flank amplifies that to ~2e-4 here.
            assert!(
                (cont - point).abs() < 1e-3,
                "delta {delta}: continuous {cont} vs point-like {point}"
            );
        }
    }
}

#[test]
fn width_only_rescales_rates_keeping_probabilities_bounded() {
    let mut params = ScatterParams {
        drive1: DriveField::new(1.0, 30.0, FRAC_PI_2),
        mode_a: WaveguideMode::new(1.0, FRAC_PI_2),
        ..ScatterParams::default()
    };
    for lambda in [0.3, FRAC_PI_2, 3.0] {
        let overlaps = overlaps_quadrature(lambda, FRAC_PI_2, FRAC_PI_2, 1.0 / 900.0).unwrap();
        for i in 0..=100 {
            params.delta_ka_mhz = -30.2 + 0.4 * i as f64 / 100.0;
            for direction in [Direction::Forward, Direction::Backward] {
                let t = t_continuous_with(&params, &overlaps, direction).unwrap();
                assert!(
                    (0.0..=1.0 + 1e-9).contains(&t),
                    "lambda {lambda}: T = {t} out of bounds"
                );
            }
        }
    }
}
