//! Closed-form scattering formulas and derived metrics.
//!
//! These are the printed expressions evaluated literally: the chiral
//! giant-atom transmissivities with their Lamb-shift term, the symmetric
//! converter efficiencies, and the asymmetric (two-point, two-mode)
//! converter efficiencies. The converter expressions carry no Lamb-shift
//! term; the shifts cancel under the enforced loop condition
//! `Delta_c2 = -Delta_c1` with equal Rabi frequencies, and for unequal
//! drives the closed forms and the solver legitimately differ by the
//! residual shift (flagged by `ScatterParams::regime_warnings`).

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{lamb_shift, Direction, ModelFamily, Port, ScatterParams};

/// One spectrum sample: the probe detuning plus the requested labelled
/// values.
#[derive(Debug, Clone)]
pub struct SpectrumPoint {
    pub delta_ka_mhz: f64,
    pub values: BTreeMap<String, f64>,
}

fn loop_condition(params: &ScatterParams) -> Result<(f64, f64)> {
    let d2 = params.drive2.ok_or(Error::MissingInput {
        model: "converter",
        what: "drive2",
    })?;
    let d1 = params.drive1.detuning_mhz;
    if d2.detuning_mhz + d1 != 0.0 {
        return Err(Error::ResonanceLoop(d1, d2.detuning_mhz));
    }
    Ok((d1, d2.detuning_mhz))
}

/// Complex transmission amplitude of the eliminated single-drive model.
///
/// Numerator and denominator share the detuning term
/// `delta_ka + Delta_c1 + 2 Omega^2/Delta_c1 + 2i gamma`; the direction
/// only flips the sign of the drive phase in the numerator.
pub fn t_eff_a_amplitude(params: &ScatterParams, direction: Direction) -> Result<Complex64> {
    params.validate()?;
    let rates = params.effective_rates(ModelFamily::A)?;
    let upsilon = rates.upsilon_a_mhz;
    let shift = lamb_shift(ModelFamily::A, &params.drive1, None)?;
    let e = Complex64::new(
        params.delta_ka_mhz + params.drive1.detuning_mhz + shift,
        2.0 * params.gamma_mhz,
    );
    let theta = match direction {
        Direction::Forward => params.drive1.local_phase_rad,
        Direction::Backward => -params.drive1.local_phase_rad,
    };
    let phi = params.mode_a.propagation_phase_rad;
    let numerator = e - 2.0 * upsilon * Complex64::from_polar(1.0, theta) * phi.sin();
    let denominator = e
        + Complex64::I
            * 2.0
            * upsilon
            * (1.0 + Complex64::from_polar(1.0, phi) * params.drive1.local_phase_rad.cos());
    if denominator.norm() == 0.0 {
        return Err(Error::Numerical(
            "transmission amplitude undefined: vanishing denominator".into(),
        ));
    }
    Ok(numerator / denominator)
}

/// Transmissivity of the eliminated single-drive model.
pub fn t_eff_a(params: &ScatterParams, direction: Direction) -> Result<f64> {
    Ok(t_eff_a_amplitude(params, direction)?.norm_sqr())
}

/// Reflection amplitude of the eliminated single-drive model, obtained by
/// the same elimination that yields the transmission amplitude. Its modulus
/// is direction-independent.
pub fn r_eff_a_amplitude(params: &ScatterParams) -> Result<Complex64> {
    params.validate()?;
    let rates = params.effective_rates(ModelFamily::A)?;
    let upsilon = rates.upsilon_a_mhz;
    let shift = lamb_shift(ModelFamily::A, &params.drive1, None)?;
    let e = Complex64::new(
        params.delta_ka_mhz + params.drive1.detuning_mhz + shift,
        2.0 * params.gamma_mhz,
    );
    let theta = params.drive1.local_phase_rad;
    let phi = params.mode_a.propagation_phase_rad;
    let denominator =
        e + Complex64::I * 2.0 * upsilon * (1.0 + Complex64::from_polar(1.0, phi) * theta.cos());
    if denominator.norm() == 0.0 {
        return Err(Error::Numerical(
            "reflection amplitude undefined: vanishing denominator".into(),
        ));
    }
    let numerator = -Complex64::I
        * upsilon
        * (1.0 + Complex64::from_polar(1.0, phi + theta))
        * (1.0 + Complex64::from_polar(1.0, phi - theta));
    Ok(numerator / denominator)
}

/// Reflectivity of the eliminated single-drive model.
pub fn r_eff_a(params: &ScatterParams) -> Result<f64> {
    Ok(r_eff_a_amplitude(params)?.norm_sqr())
}

/// Transmission contrast ratio `(T21 - T12) / (T21 + T12)`.
pub fn contrast_ratio(t12: f64, t21: f64) -> Result<f64> {
    if !t12.is_finite() || !t21.is_finite() || t12 < 0.0 || t21 < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "transmissivities must be finite and non-negative, got ({t12}, {t21})"
        )));
    }
    let total = t12 + t21;
    if total == 0.0 {
        return Err(Error::ContrastUndefined);
    }
    Ok((t21 - t12) / total)
}

/// Symmetric-converter efficiencies `[S11, S12, S13, S14]` for a photon
/// incident in mode `a`: reflection, transmission, backward and forward
/// conversion.
///
/// The probabilities are insensitive to the incidence port and to the
/// phases `theta_2` and `phi_b`, which only dress the conversion amplitudes.
pub fn s_eff_b(params: &ScatterParams) -> Result<[f64; 4]> {
    params.validate()?;
    loop_condition(params)?;
    if params.mode_b.is_none() {
        return Err(Error::MissingInput {
            model: "B_eff",
            what: "mode_b",
        });
    }
    let d2 = params.drive2.unwrap();
    let rates = params.effective_rates(ModelFamily::B)?;
    let (ua, ub) = (rates.upsilon_a_mhz, rates.upsilon_b_mhz);
    let e = Complex64::new(
        params.delta_ka_mhz + params.drive1.detuning_mhz,
        2.0 * params.gamma_mhz,
    );
    let denominator = e + Complex64::I * (ua + ub);
    if denominator.norm() == 0.0 {
        return Err(Error::Numerical(
            "converter amplitudes undefined: vanishing denominator".into(),
        ));
    }
    let phi_b = params.mode_b.unwrap().propagation_phase_rad;
    let theta2 = d2.local_phase_rad;
    let s11 = (-Complex64::I * ua) / denominator;
    let s12 = (e + Complex64::I * ub) / denominator;
    let root = (ua * ub).sqrt();
    let s13 = -Complex64::I * root * Complex64::from_polar(1.0, theta2 + phi_b) / denominator;
    let s14 = -Complex64::I * root * Complex64::from_polar(1.0, theta2 - phi_b) / denominator;
    Ok([
        s11.norm_sqr(),
        s12.norm_sqr(),
        s13.norm_sqr(),
        s14.norm_sqr(),
    ])
}

/// Asymmetric-converter efficiencies indexed by absolute output port:
/// `[P_{i->1}, P_{i->2}, P_{i->3}, P_{i->4}]` for a photon incident in mode
/// `a` at port `i`. Port-2 incidence evaluates the port-1 expressions with
/// both drive phases negated and mirrors the outputs (ports 1 and 2 swap,
/// ports 3 and 4 swap).
pub fn p_eff_c(params: &ScatterParams, incidence: Port) -> Result<[f64; 4]> {
    params.validate()?;
    loop_condition(params)?;
    let mode_b = params.mode_b.ok_or(Error::MissingInput {
        model: "C_eff",
        what: "mode_b",
    })?;
    let d2 = params.drive2.unwrap();
    let sign = match incidence {
        Port::P1 => 1.0,
        Port::P2 => -1.0,
        other => return Err(Error::UnknownPort(format!("{other} (mode a only)"))),
    };
    let rates = params.effective_rates(ModelFamily::C)?;
    let (ua, ub) = (rates.upsilon_a_mhz, rates.upsilon_b_mhz);
    let theta1 = sign * params.drive1.local_phase_rad;
    let theta2 = sign * d2.local_phase_rad;
    let phi_a = params.mode_a.propagation_phase_rad;
    let phi_b = mode_b.propagation_phase_rad;
    let e = Complex64::new(
        params.delta_ka_mhz + params.drive1.detuning_mhz,
        2.0 * params.gamma_mhz,
    );
    let ea = Complex64::from_polar(1.0, phi_a);
    let eb = Complex64::from_polar(1.0, phi_b);
    let denominator = e
        + Complex64::I * 2.0 * ua * (1.0 + ea * theta1.cos())
        + Complex64::I * 2.0 * ub * (1.0 + eb * theta2.cos());
    if denominator.norm() == 0.0 {
        return Err(Error::Numerical(
            "converter amplitudes undefined: vanishing denominator".into(),
        ));
    }
    let in_factor = 1.0 + ea * Complex64::from_polar(1.0, -theta1);
    let p1 = -Complex64::I * ua * (1.0 + ea * Complex64::from_polar(1.0, theta1)) * in_factor
        / denominator;
    let p2 = (e - 2.0 * ua * Complex64::from_polar(1.0, theta1) * phi_a.sin()
        + Complex64::I * 2.0 * ub * (1.0 + eb * theta2.cos()))
        / denominator;
    let root = (ua * ub).sqrt();
    let p3 = -Complex64::I * root * (1.0 + eb * Complex64::from_polar(1.0, theta2)) * in_factor
        / denominator;
    let p4 = -Complex64::I
        * root
        * (1.0 + eb.conj() * Complex64::from_polar(1.0, theta2))
        * in_factor
        / denominator;
    let printed = [
        p1.norm_sqr(),
        p2.norm_sqr(),
        p3.norm_sqr(),
        p4.norm_sqr(),
    ];
    Ok(match incidence {
        Port::P1 => printed,
        // Mirrored geometry: reflection exits port 2, transmission port 1,
        // and the converted outputs swap sides.
        _ => [printed[1], printed[0], printed[3], printed[2]],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DriveField, ScatterParams, WaveguideMode};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn fig3_params() -> ScatterParams {
        // Gamma_a = 1 MHz, Omega_c1 = 1 MHz, Delta_c1 = 30 MHz,
        // gamma = 1 kHz, theta_1 = phi_a = pi/2.
        ScatterParams {
            drive1: DriveField::new(1.0, 30.0, FRAC_PI_2),
            mode_a: WaveguideMode::new(1.0, FRAC_PI_2),
            delta_ka_mhz: -30.0 - 2.0 / 30.0,
            ..ScatterParams::default()
        }
    }

    fn converter_params(omega: f64) -> ScatterParams {
        ScatterParams {
            gamma_mhz: 0.0,
            drive1: DriveField::new(omega, 30.0, 0.0),
            drive2: Some(DriveField::new(omega, -30.0, 0.0)),
            mode_a: WaveguideMode::new(1.0, FRAC_PI_2),
            mode_b: Some(WaveguideMode::new(1.0, FRAC_PI_2)),
            delta_ka_mhz: -30.0,
            ..ScatterParams::default()
        }
    }

    #[test]
    fn decoupling_phase_transmits_everything() {
        // phi_a = pi, theta_1 = 0: the two coupling points interfere
        // destructively and the giant atom decouples.
        let mut params = ScatterParams::default();
        params.mode_a.propagation_phase_rad = PI;
        for delta in [-31.0, -30.07, -30.0, -29.5] {
            params.delta_ka_mhz = delta;
            let t = t_eff_a(&params, Direction::Forward).unwrap();
            assert_abs_diff_eq!(t, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn perfect_nonreciprocity_at_the_shifted_resonance() {
        // At delta_ka = -Delta_c1 - 2 Omega^2/Delta_c1 the backward
        // transmissivity is one and the forward one collapses to
        // ((Upsilon - gamma)/(Upsilon + gamma))^2 = (1/19)^2.
        let params = fig3_params();
        let t21 = t_eff_a(&params, Direction::Backward).unwrap();
        let t12 = t_eff_a(&params, Direction::Forward).unwrap();
        assert_abs_diff_eq!(t21, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(t12, 1.0 / 361.0, epsilon = 1e-10);
    }

    #[test]
    fn zero_drive_phase_is_reciprocal() {
        let mut params = fig3_params();
        params.drive1.local_phase_rad = 0.0;
        for delta in [-30.2, -30.067, -29.9] {
            params.delta_ka_mhz = delta;
            let t12 = t_eff_a(&params, Direction::Forward).unwrap();
            let t21 = t_eff_a(&params, Direction::Backward).unwrap();
            assert_abs_diff_eq!(t12, t21, epsilon = 1e-14);
        }
    }

    #[test]
    fn transmission_plus_reflection_is_one_without_loss() {
        let mut params = fig3_params();
        params.gamma_mhz = 0.0;
        for delta in [-30.3, -30.0667, -30.01] {
            params.delta_ka_mhz = delta;
            let t = t_eff_a(&params, Direction::Forward).unwrap();
            let r = r_eff_a(&params).unwrap();
            assert_abs_diff_eq!(t + r, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn contrast_ratio_reference_values() {
        assert_abs_diff_eq!(contrast_ratio(0.0, 1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(contrast_ratio(0.5, 0.5).unwrap(), 0.0);
        assert!(matches!(
            contrast_ratio(0.0, 0.0),
            Err(Error::ContrastUndefined)
        ));
    }

    #[test]
    fn contrast_vanishes_along_the_nonchiral_lines() {
        // theta_1 in {0, pi} makes the transmission reciprocal for any
        // phi_a, so the contrast surface is zero along those lines.
        let mut params = fig3_params();
        for theta in [0.0, PI] {
            for phi in [0.3, FRAC_PI_2, 2.0, PI] {
                params.drive1.local_phase_rad = theta;
                params.mode_a.propagation_phase_rad = phi;
                let t12 = t_eff_a(&params, Direction::Forward).unwrap();
                let t21 = t_eff_a(&params, Direction::Backward).unwrap();
                let i = contrast_ratio(t12, t21).unwrap();
                assert!(i.abs() < 1e-12, "theta {theta}, phi {phi}: I = {i}");
            }
        }
        // The chiral corner theta_1 = phi_a = pi/2 is close to extremal.
        params.drive1.local_phase_rad = FRAC_PI_2;
        params.mode_a.propagation_phase_rad = FRAC_PI_2;
        let t12 = t_eff_a(&params, Direction::Forward).unwrap();
        let t21 = t_eff_a(&params, Direction::Backward).unwrap();
        assert!(contrast_ratio(t12, t21).unwrap() > 0.9);
    }

    #[test]
    fn symmetric_converter_resonance_quarters() {
        let s = s_eff_b(&converter_params(1.0)).unwrap();
        for v in s {
            assert_abs_diff_eq!(v, 0.25, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(s[2] + s[3], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn symmetric_converter_decoupled_mode_b() {
        let mut params = converter_params(1.0);
        params.mode_b.as_mut().unwrap().decay_mhz = 0.0;
        params.delta_ka_mhz = -29.8;
        let s = s_eff_b(&params).unwrap();
        assert_eq!(s[2], 0.0);
        assert_eq!(s[3], 0.0);
        // The survivors reduce to a two-level mirror lineshape.
        let e = params.delta_ka_mhz + 30.0;
        let ua = 1.0 / 900.0;
        let lorentz = ua * ua / (e * e + ua * ua);
        assert_abs_diff_eq!(s[0], lorentz, epsilon = 1e-12);
        assert_abs_diff_eq!(s[0] + s[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn symmetric_converter_probabilities_ignore_output_phases() {
        let mut params = converter_params(2.0);
        params.delta_ka_mhz = -30.003;
        let base = s_eff_b(&params).unwrap();
        params.drive2.as_mut().unwrap().local_phase_rad = 1.1;
        params.mode_b.as_mut().unwrap().propagation_phase_rad = 2.6;
        let dressed = s_eff_b(&params).unwrap();
        for (a, b) in base.iter().zip(dressed.iter()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn converter_closed_forms_reject_broken_loop() {
        let mut params = converter_params(1.0);
        params.drive2.as_mut().unwrap().detuning_mhz = -29.0;
        assert!(matches!(s_eff_b(&params), Err(Error::ResonanceLoop(..))));
        assert!(matches!(
            p_eff_c(&params, Port::P1),
            Err(Error::ResonanceLoop(..))
        ));
    }

    #[test]
    fn asymmetric_converter_perfect_forward_conversion() {
        // theta_1 = theta_2 = phi_a = phi_b = pi/2 at resonance.
        let mut params = converter_params(2.0);
        params.drive1.local_phase_rad = FRAC_PI_2;
        params.drive2.as_mut().unwrap().local_phase_rad = FRAC_PI_2;
        let p = p_eff_c(&params, Port::P1).unwrap();
        assert_abs_diff_eq!(p[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p[2], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p[3], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn asymmetric_converter_output_port_steering() {
        let mut params = converter_params(2.0);
        params.drive1.local_phase_rad = FRAC_PI_2;
        params.drive2.as_mut().unwrap().local_phase_rad = FRAC_PI_2;
        // phi_b = pi splits the converted photon evenly.
        params.mode_b.as_mut().unwrap().propagation_phase_rad = PI;
        let p = p_eff_c(&params, Port::P1).unwrap();
        assert_abs_diff_eq!(p[2], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(p[3], 0.5, epsilon = 1e-12);
        // phi_b = 3 pi/2 sends it all backward.
        params.mode_b.as_mut().unwrap().propagation_phase_rad = 1.5 * PI;
        let p = p_eff_c(&params, Port::P1).unwrap();
        assert_abs_diff_eq!(p[2], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p[3], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn asymmetric_converter_nonchiral_cap() {
        // theta_1 = theta_2 = 0 caps the total conversion at one half. With
        // phi_a = phi_b = pi/2 the two-point self-interference shifts the
        // peak to delta_ka = -Delta_c1 + 4 Upsilon, where the cap is reached
        // exactly.
        let mut params = converter_params(2.0);
        let upsilon = 4.0 / 900.0;
        params.delta_ka_mhz = -30.0 + 4.0 * upsilon;
        let p = p_eff_c(&params, Port::P1).unwrap();
        assert_abs_diff_eq!(p[2] + p[3], 0.5, epsilon = 1e-12);
        // Off the shifted peak the conversion stays below the cap.
        params.delta_ka_mhz = -30.0;
        let p = p_eff_c(&params, Port::P1).unwrap();
        assert!(p[2] + p[3] < 0.5);
    }

    #[test]
    fn port_two_equals_port_one_with_negated_drive_phases() {
        let mut params = converter_params(2.0);
        params.drive1.local_phase_rad = 0.7;
        params.drive2.as_mut().unwrap().local_phase_rad = 2.1;
        params.delta_ka_mhz = -30.004;
        let from_p2 = p_eff_c(&params, Port::P2).unwrap();
        let mut negated = params;
        negated.drive1.local_phase_rad = -0.7;
        negated.drive2.as_mut().unwrap().local_phase_rad = -2.1;
        let from_p1 = p_eff_c(&negated, Port::P1).unwrap();
        // Mirrored outputs: ports 1 and 2 swap, ports 3 and 4 swap.
        for (i, j) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
            assert_abs_diff_eq!(from_p2[i], from_p1[j], epsilon = 1e-15);
        }
        // Total conversion is invariant under the output mirror.
        assert_abs_diff_eq!(
            from_p2[2] + from_p2[3],
            from_p1[2] + from_p1[3],
            epsilon = 1e-15
        );
    }

    #[test]
    fn nonchiral_second_drive_balances_the_converted_ports() {
        // theta_2 = 0 keeps P_{2->3} = P_{2->4} for every detuning.
        let mut params = converter_params(2.0);
        params.drive1.local_phase_rad = 1.2;
        for delta in [-30.3, -30.0, -29.85] {
            params.delta_ka_mhz = delta;
            let p = p_eff_c(&params, Port::P2).unwrap();
            assert_abs_diff_eq!(p[2], p[3], epsilon = 1e-14);
        }
    }
}
