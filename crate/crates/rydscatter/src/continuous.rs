//! Finite-width (continuous) coupling corrections to the single-drive model.
//!
//! The point couplings are replaced by exponential profiles
//! `nu(phi) = (sqrt(Upsilon)/Lambda) exp(-2|phi - phi0|/Lambda)` in phase
//! units, with the second profile centred at `phi0 = phi_a +- theta_1`.
//! Continuous coupling only modifies the Lamb shift and the effective decay
//! rates, through six overlap integrals; the corrected transmissivities
//! keep the point-like structure with those overlaps inserted.
//!
//! `overlaps_closed` evaluates the printed closed forms literally.
//! The printed exchange Lamb-shift terms (the `J_ex` pair) carry a term
//! that grows linearly with the centre phase and an exponential factor
//! whose argument can turn positive, neither of which the defining
//! integrals can produce (they are bounded by `Upsilon`). The quadrature
//! routine is therefore the reference for those two entries; disagreement
//! is reported, never patched silently.

use crate::error::{Error, Result};
use crate::model::{lamb_shift, Direction, ModelFamily, ScatterParams};
use crate::quad2d::{adaptive_quad_2d, Quad2dOptions};
use num_complex::Complex64;
use serde::Serialize;

/// Half-width factor of the truncated quadrature domain, in units of
/// `Lambda`. The profiles decay as `exp(-2|phi|/Lambda)`, so the truncation
/// error is below 1e-17 relative.
pub const DOMAIN_HALF_WIDTHS: f64 = 20.0;

/// Absolute tolerance of the quadrature oracle.
pub const QUAD_ABS_TOL: f64 = 1e-8;

/// Exponential coupling profile of characteristic width `Lambda`
/// (dimensionless, phase units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuousCouplingSpec {
    pub width: f64,
}

impl ContinuousCouplingSpec {
    pub fn new(width: f64) -> Result<Self> {
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "continuous coupling width must be positive and finite, got {width}"
            )));
        }
        Ok(Self { width })
    }

    /// Profile value at `phi` for a profile centred at `center`, normalised
    /// so the point-like limit recovers strength `sqrt(upsilon)`.
    pub fn profile(&self, upsilon: f64, center: f64, phi: f64) -> f64 {
        upsilon.sqrt() / self.width * (-2.0 * (phi - center).abs() / self.width).exp()
    }
}

/// The six overlap integrals (MHz): self terms `Gamma`, `J` and exchange
/// terms between the two coupling profiles, primed for the
/// `phi_a - theta_1` centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlapIntegrals {
    pub gamma: f64,
    pub j: f64,
    pub gamma_ex: f64,
    pub gamma_ex_prime: f64,
    pub j_ex: f64,
    pub j_ex_prime: f64,
}

impl OverlapIntegrals {
    pub fn all_finite(&self) -> bool {
        [
            self.gamma,
            self.j,
            self.gamma_ex,
            self.gamma_ex_prime,
            self.j_ex,
            self.j_ex_prime,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

/// Printed closed forms of the six overlaps, evaluated literally.
pub fn overlaps_closed(
    lambda: f64,
    phi_a: f64,
    theta1: f64,
    upsilon: f64,
) -> Result<OverlapIntegrals> {
    let spec = ContinuousCouplingSpec::new(lambda)?;
    let l = spec.width;
    let denom = (l * l + 4.0).powi(2);
    let gamma = 16.0 * upsilon / denom;
    let j = upsilon * l * (l * l + 12.0) / denom;
    let center_plus = phi_a + theta1;
    let center_minus = phi_a - theta1;
    let gamma_ex = 16.0 * upsilon * center_plus.cos() / denom;
    let gamma_ex_prime = 16.0 * upsilon * center_minus.cos() / denom;
    let j_ex_printed = |phi0: f64| -> f64 {
        upsilon / denom
            * (8.0 * phi0
                + (-2.0 * phi0 / l).exp() * 2.0 * l * l * phi0
                + 12.0 * l
                + l * l * l
                + 16.0 * phi0.sin())
    };
    Ok(OverlapIntegrals {
        gamma,
        j,
        gamma_ex,
        gamma_ex_prime,
        j_ex: j_ex_printed(center_plus),
        j_ex_prime: j_ex_printed(center_minus),
    })
}

fn overlap_quad(
    spec: &ContinuousCouplingSpec,
    upsilon: f64,
    center2: f64,
    kernel_sin_abs: bool,
) -> Result<f64> {
    if upsilon == 0.0 {
        return Ok(0.0);
    }
    let half = DOMAIN_HALF_WIDTHS * spec.width;
    let opts = Quad2dOptions {
        abs_tol: QUAD_ABS_TOL,
        split_diagonal: kernel_sin_abs,
        x_splits: vec![0.0],
        y_splits: vec![center2],
        ..Quad2dOptions::default()
    };
    let s = *spec;
    let f = move |x: f64, y: f64| -> f64 {
        let w = s.profile(upsilon, 0.0, x) * s.profile(upsilon, center2, y);
        if kernel_sin_abs {
            w * (x - y).abs().sin()
        } else {
            w * (x - y).cos()
        }
    };
    let estimate = adaptive_quad_2d(f, -half, half, center2 - half, center2 + half, &opts)?;
    Ok(estimate.value)
}

/// The six overlaps by adaptive quadrature of their defining double
/// integrals; the independent oracle for `overlaps_closed`.
pub fn overlaps_quadrature(
    lambda: f64,
    phi_a: f64,
    theta1: f64,
    upsilon: f64,
) -> Result<OverlapIntegrals> {
    let spec = ContinuousCouplingSpec::new(lambda)?;
    let center_plus = phi_a + theta1;
    let center_minus = phi_a - theta1;
    let gamma = overlap_quad(&spec, upsilon, 0.0, false)?;
    let j = overlap_quad(&spec, upsilon, 0.0, true)?;
    let gamma_ex = overlap_quad(&spec, upsilon, center_plus, false)?;
    let j_ex = overlap_quad(&spec, upsilon, center_plus, true)?;
    let (gamma_ex_prime, j_ex_prime) = if theta1 == 0.0 {
        (gamma_ex, j_ex)
    } else {
        (
            overlap_quad(&spec, upsilon, center_minus, false)?,
            overlap_quad(&spec, upsilon, center_minus, true)?,
        )
    };
    Ok(OverlapIntegrals {
        gamma,
        j,
        gamma_ex,
        gamma_ex_prime,
        j_ex,
        j_ex_prime,
    })
}

/// Continuous-coupling transmissivity with explicitly supplied overlaps.
///
/// `direction` swaps the `+-i(Gamma_ex - Gamma'_ex)` numerator term, which
/// is the same exchange as flipping the sign of `theta_1`.
pub fn t_continuous_with(
    params: &ScatterParams,
    overlaps: &OverlapIntegrals,
    direction: Direction,
) -> Result<f64> {
    params.validate()?;
    if !overlaps.all_finite() {
        return Err(Error::Numerical("non-finite overlap integrals".into()));
    }
    let shift = lamb_shift(ModelFamily::A, &params.drive1, None)?;
    let e = Complex64::new(
        params.delta_ka_mhz + params.drive1.detuning_mhz + shift,
        2.0 * params.gamma_mhz,
    );
    let j_sum = 2.0 * overlaps.j + overlaps.j_ex + overlaps.j_ex_prime;
    let exchange = match direction {
        Direction::Forward => overlaps.gamma_ex - overlaps.gamma_ex_prime,
        Direction::Backward => overlaps.gamma_ex_prime - overlaps.gamma_ex,
    };
    let numerator = e - j_sum + Complex64::new(0.0, exchange);
    let denominator = e - j_sum
        + Complex64::new(
            0.0,
            2.0 * overlaps.gamma + overlaps.gamma_ex + overlaps.gamma_ex_prime,
        );
    if denominator.norm() == 0.0 {
        return Err(Error::Numerical(
            "continuous transmissivity undefined: vanishing denominator".into(),
        ));
    }
    Ok((numerator / denominator).norm_sqr())
}

/// Continuous-coupling transmissivity with overlaps from the quadrature
/// reference.
pub fn t_continuous(
    params: &ScatterParams,
    spec: &ContinuousCouplingSpec,
    direction: Direction,
) -> Result<f64> {
    let overlaps = overlaps_quadrature(
        spec.width,
        params.mode_a.propagation_phase_rad,
        params.drive1.local_phase_rad,
        params.effective_rates(ModelFamily::A)?.upsilon_a_mhz,
    )?;
    t_continuous_with(params, &overlaps, direction)
}

/// Probe detuning at which the real part of the continuous-coupling
/// denominator vanishes (the shifted resonance).
pub fn resonance_delta_ka_continuous(
    params: &ScatterParams,
    overlaps: &OverlapIntegrals,
) -> Result<f64> {
    let shift = lamb_shift(ModelFamily::A, &params.drive1, None)?;
    Ok(-params.drive1.detuning_mhz - shift
        + 2.0 * overlaps.j
        + overlaps.j_ex
        + overlaps.j_ex_prime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn closed_self_overlap_at_reference_width() {
        // Lambda = pi/2, Upsilon = 1: Gamma = 16/(pi^2/4 + 4)^2.
        let o = overlaps_closed(FRAC_PI_2, 0.0, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(o.gamma, 0.38252549892586191, epsilon = 1e-12);
        assert_abs_diff_eq!(o.j, 0.54331388847113593, epsilon = 1e-12);
    }

    #[test]
    fn point_like_limit_of_the_self_overlaps() {
        let o = overlaps_closed(1e-6, 0.9, 0.4, 1.0).unwrap();
        assert_abs_diff_eq!(o.gamma, 1.0, epsilon = 1e-5);
        assert!(o.j.abs() < 1e-5);
        assert_abs_diff_eq!(o.gamma_ex, (0.9f64 + 0.4).cos(), epsilon = 1e-5);
        assert_abs_diff_eq!(o.gamma_ex_prime, (0.9f64 - 0.4).cos(), epsilon = 1e-5);
    }

    #[test]
    fn exchange_overlap_flips_sign_at_opposed_phases() {
        // phi_a + theta_1 = pi gives Gamma_ex = -Gamma.
        let o = overlaps_closed(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, 1.0).unwrap();
        assert_abs_diff_eq!(o.gamma_ex, -0.38252549892586191, epsilon = 1e-12);
    }

    #[test]
    fn quadrature_matches_closed_forms_for_the_cosine_family() {
        for (lambda, phi, theta) in [
            (FRAC_PI_2, FRAC_PI_2, FRAC_PI_2),
            (0.5, 1.0, 0.3),
            (2.0, PI, 0.0),
        ] {
            let closed = overlaps_closed(lambda, phi, theta, 1.0).unwrap();
            let quad = overlaps_quadrature(lambda, phi, theta, 1.0).unwrap();
            assert_abs_diff_eq!(quad.gamma, closed.gamma, epsilon = 1e-6);
            assert_abs_diff_eq!(quad.j, closed.j, epsilon = 1e-6);
            assert_abs_diff_eq!(quad.gamma_ex, closed.gamma_ex, epsilon = 1e-6);
            assert_abs_diff_eq!(quad.gamma_ex_prime, closed.gamma_ex_prime, epsilon = 1e-6);
        }
    }

    #[test]
    fn zero_coupling_transmits_everything() {
        let mut params = ScatterParams::default();
        params.gamma_mhz = 0.0;
        params.drive1.rabi_mhz = 0.0;
        params.delta_ka_mhz = -29.5;
        let spec = ContinuousCouplingSpec::new(FRAC_PI_2).unwrap();
        let t = t_continuous(&params, &spec, Direction::Forward).unwrap();
        assert_abs_diff_eq!(t, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn normal_drive_incidence_is_reciprocal() {
        let mut params = ScatterParams::default();
        params.drive1.local_phase_rad = 0.0;
        let overlaps = overlaps_quadrature(FRAC_PI_2, FRAC_PI_2, 0.0, 1.0 / 900.0).unwrap();
        for delta in [-30.1, -30.0667, -30.02] {
            params.delta_ka_mhz = delta;
            let t12 = t_continuous_with(&params, &overlaps, Direction::Forward).unwrap();
            let t21 = t_continuous_with(&params, &overlaps, Direction::Backward).unwrap();
            assert_eq!(t12, t21);
        }
    }

    #[test]
    fn direction_swap_equals_drive_phase_flip() {
        let mut params = ScatterParams::default();
        params.drive1.local_phase_rad = 0.8;
        params.delta_ka_mhz = -30.05;
        let upsilon = 1.0 / 900.0;
        let forward_flipped = {
            let o = overlaps_quadrature(FRAC_PI_2, FRAC_PI_2, -0.8, upsilon).unwrap();
            let mut p = params;
            p.drive1.local_phase_rad = -0.8;
            t_continuous_with(&p, &o, Direction::Forward).unwrap()
        };
        let backward = {
            let o = overlaps_quadrature(FRAC_PI_2, FRAC_PI_2, 0.8, upsilon).unwrap();
            t_continuous_with(&params, &o, Direction::Backward).unwrap()
        };
        assert_abs_diff_eq!(backward, forward_flipped, epsilon = 1e-12);
    }

    #[test]
    fn transmissivity_stays_in_bounds() {
        let mut params = ScatterParams::default();
        params.drive1.local_phase_rad = FRAC_PI_2;
        let overlaps =
            overlaps_quadrature(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, 1.0 / 900.0).unwrap();
        let mut delta = -30.25;
        while delta < -29.75 {
            params.delta_ka_mhz = delta;
            for dir in [Direction::Forward, Direction::Backward] {
                let t = t_continuous_with(&params, &overlaps, dir).unwrap();
                assert!((0.0..=1.0 + 1e-9).contains(&t), "T = {t} at delta {delta}");
            }
            delta += 0.01;
        }
    }
}
