//! Domain types and unit conventions.
//!
//! Everything is expressed in the reduced parameter set that the scattering
//! formulas actually depend on: rates and detunings in MHz, phases in
//! radians. Absolute optical frequencies, the group velocity and the atom
//! separation never appear; the propagation phase `phi = k d` and the drive
//! phase difference `theta` stand in for them and are treated as constants
//! over a spectrum (Markovian regime).

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Complex amplitude, stored as `num_complex::Complex64`.
pub type ComplexScalar = Complex64;

/// The intrinsic dissipation used throughout the reference parameter sets:
/// 1 kHz expressed in MHz.
pub const GAMMA_1KHZ_MHZ: f64 = 0.001;

/// The van der Waals shift used throughout the reference parameter sets:
/// 20 GHz expressed in MHz.
pub const V6_20GHZ_MHZ: f64 = 20_000.0;

/// One classical drive tone: Rabi frequency, detuning from the shifted
/// two-photon line, and the local phase difference between its two
/// illumination points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriveField {
    /// Rabi frequency `Omega` (MHz), non-negative.
    pub rabi_mhz: f64,
    /// Detuning `Delta_c` (MHz). May take either sign.
    pub detuning_mhz: f64,
    /// Local phase difference `theta` (rad) accumulated between the two
    /// atoms. The geometric inputs (drive wave vector, incidence angle,
    /// atom separation) are already folded in.
    pub local_phase_rad: f64,
}

impl DriveField {
    pub fn new(rabi_mhz: f64, detuning_mhz: f64, local_phase_rad: f64) -> Self {
        Self {
            rabi_mhz,
            detuning_mhz,
            local_phase_rad,
        }
    }

    /// Phase folded into `[0, 2pi)`.
    pub fn normalized(self) -> Self {
        Self {
            local_phase_rad: normalize_phase(self.local_phase_rad),
            ..self
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !self.rabi_mhz.is_finite() || self.rabi_mhz < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "{name}.rabi_mhz must be finite and >= 0, got {}",
                self.rabi_mhz
            )));
        }
        if !self.detuning_mhz.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "{name}.detuning_mhz must be finite"
            )));
        }
        if !self.local_phase_rad.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "{name}.local_phase_rad must be finite"
            )));
        }
        Ok(())
    }
}

/// One waveguide band: bare decay rate into the band and the propagation
/// phase between the coupling points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveguideMode {
    /// Bare waveguide decay rate `Gamma` (MHz), non-negative.
    pub decay_mhz: f64,
    /// Propagation phase `phi = k d` (rad), constant per call.
    pub propagation_phase_rad: f64,
}

impl WaveguideMode {
    pub fn new(decay_mhz: f64, propagation_phase_rad: f64) -> Self {
        Self {
            decay_mhz,
            propagation_phase_rad,
        }
    }

    pub fn normalized(self) -> Self {
        Self {
            propagation_phase_rad: normalize_phase(self.propagation_phase_rad),
            ..self
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !self.decay_mhz.is_finite() || self.decay_mhz < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "{name}.decay_mhz must be finite and >= 0, got {}",
                self.decay_mhz
            )));
        }
        if !self.propagation_phase_rad.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "{name}.propagation_phase_rad must be finite"
            )));
        }
        Ok(())
    }
}

/// Full parameter set for one scattering computation.
///
/// `drive2`/`mode_b` are only consulted by the two-mode (converter) models.
/// The probe detuning of mode `b` is never stored: energy conservation in
/// the closed transition loop fixes `delta_kb` once `delta_ka` and the two
/// drive detunings are given.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatterParams {
    /// Intrinsic (free-space) dissipation `gamma` (MHz).
    pub gamma_mhz: f64,
    /// van der Waals shift `V6` (MHz). Recorded for provenance; it does not
    /// enter the reduced equations.
    pub vdw_shift_mhz: f64,
    pub drive1: DriveField,
    pub drive2: Option<DriveField>,
    pub mode_a: WaveguideMode,
    pub mode_b: Option<WaveguideMode>,
    /// Probe detuning `delta_ka` (MHz) of the incident mode-`a` photon.
    pub delta_ka_mhz: f64,
}

impl Default for ScatterParams {
    /// The single-drive reference point: `gamma` = 1 kHz, `Gamma_a` = 1 MHz,
    /// `Omega_c1` = 1 MHz, `Delta_c1` = 30 MHz, `theta_1` = 0,
    /// `phi_a` = pi/2, probed at `delta_ka` = -30 MHz.
    fn default() -> Self {
        Self {
            gamma_mhz: GAMMA_1KHZ_MHZ,
            vdw_shift_mhz: V6_20GHZ_MHZ,
            drive1: DriveField::new(1.0, 30.0, 0.0),
            drive2: None,
            mode_a: WaveguideMode::new(1.0, std::f64::consts::FRAC_PI_2),
            mode_b: None,
            delta_ka_mhz: -30.0,
        }
    }
}

impl ScatterParams {
    pub fn validate(&self) -> Result<()> {
        if !self.gamma_mhz.is_finite() || self.gamma_mhz < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma_mhz must be finite and >= 0, got {}",
                self.gamma_mhz
            )));
        }
        if !self.vdw_shift_mhz.is_finite() {
            return Err(Error::InvalidParameter(
                "vdw_shift_mhz must be finite".into(),
            ));
        }
        if !self.delta_ka_mhz.is_finite() {
            return Err(Error::InvalidParameter(
                "delta_ka_mhz must be finite".into(),
            ));
        }
        self.drive1.validate("drive1")?;
        self.mode_a.validate("mode_a")?;
        if let Some(d2) = &self.drive2 {
            d2.validate("drive2")?;
        }
        if let Some(mb) = &self.mode_b {
            mb.validate("mode_b")?;
        }
        Ok(())
    }

    /// All phases folded into `[0, 2pi)`. Idempotent.
    pub fn normalized(self) -> Self {
        Self {
            drive1: self.drive1.normalized(),
            drive2: self.drive2.map(DriveField::normalized),
            mode_a: self.mode_a.normalized(),
            mode_b: self.mode_b.map(WaveguideMode::normalized),
            ..self
        }
    }

    /// Mode-`b` probe detuning implied by energy conservation around the
    /// transition loop: `delta_kb = delta_ka + Delta_c1 - Delta_c2`.
    /// At the enforced converter condition `Delta_c2 = -Delta_c1` and on
    /// two-photon resonance this reduces to `-delta_ka`.
    pub fn delta_kb_mhz(&self) -> Result<f64> {
        let d2 = self.drive2.ok_or(Error::MissingInput {
            model: "two-mode",
            what: "drive2",
        })?;
        Ok(self.delta_ka_mhz + self.drive1.detuning_mhz - d2.detuning_mhz)
    }

    /// Soft regime diagnostics. These never fail a computation; they flag
    /// parameter sets for which the adiabatic elimination or the printed
    /// converter formulas lose accuracy.
    pub fn regime_warnings(&self, family: ModelFamily) -> Vec<String> {
        let mut warnings = Vec::new();
        let d1 = &self.drive1;
        if d1.detuning_mhz.abs() >= 0.1 * self.vdw_shift_mhz.abs() {
            warnings.push(format!(
                "|Delta_c1| = {} MHz is not small against V6 = {} MHz; the four-level reduction assumes |Delta_c| << V6",
                d1.detuning_mhz.abs(),
                self.vdw_shift_mhz
            ));
        }
        if d1.detuning_mhz.abs() < 10.0 * d1.rabi_mhz {
            warnings.push(format!(
                "|Delta_c1| = {} MHz is not large against Omega_c1 = {} MHz; adiabatic elimination degrades",
                d1.detuning_mhz.abs(),
                d1.rabi_mhz
            ));
        }
        if let Some(d2) = &self.drive2 {
            if d2.detuning_mhz.abs() < 10.0 * d2.rabi_mhz {
                warnings.push(format!(
                    "|Delta_c2| = {} MHz is not large against Omega_c2 = {} MHz; adiabatic elimination degrades",
                    d2.detuning_mhz.abs(),
                    d2.rabi_mhz
                ));
            }
            if matches!(family, ModelFamily::B | ModelFamily::C)
                && (d2.detuning_mhz + d1.detuning_mhz).abs() > 1e-9 * d1.detuning_mhz.abs().max(1.0)
            {
                warnings.push(format!(
                    "Delta_c2 = {} MHz is not -Delta_c1 = {} MHz; the closed transition loop is off resonance",
                    d2.detuning_mhz, -d1.detuning_mhz
                ));
            }
            if matches!(family, ModelFamily::B | ModelFamily::C)
                && (d2.rabi_mhz - d1.rabi_mhz).abs() > 1e-9 * d1.rabi_mhz.max(1.0)
            {
                warnings.push(format!(
                    "Omega_c2 = {} MHz differs from Omega_c1 = {} MHz; the printed converter formulas drop Lamb-shift terms that only cancel for equal drives",
                    d2.rabi_mhz, d1.rabi_mhz
                ));
            }
        }
        warnings
    }

    /// Effective decay rates and Lamb shift after adiabatic elimination.
    pub fn effective_rates(&self, family: ModelFamily) -> Result<EffectiveRates> {
        let upsilon_a = effective_rate(
            self.mode_a.decay_mhz,
            self.drive1.rabi_mhz,
            self.drive1.detuning_mhz,
        )?;
        let upsilon_b = match family {
            ModelFamily::A => 0.0,
            ModelFamily::B | ModelFamily::C => {
                let d2 = self.drive2.ok_or(Error::MissingInput {
                    model: family.name(),
                    what: "drive2",
                })?;
                let mb = self.mode_b.ok_or(Error::MissingInput {
                    model: family.name(),
                    what: "mode_b",
                })?;
                effective_rate(mb.decay_mhz, d2.rabi_mhz, d2.detuning_mhz)?
            }
        };
        Ok(EffectiveRates {
            upsilon_a_mhz: upsilon_a,
            upsilon_b_mhz: upsilon_b,
            lamb_shift_mhz: lamb_shift(family, &self.drive1, self.drive2.as_ref())?,
        })
    }

    /// The probe detuning at which the eliminated two-level line sits:
    /// `-Delta_c1 - lamb_shift` for the driven-pair models. The converter
    /// formulas carry no shift term, so families B and C resonate at
    /// `-Delta_c1` when the loop condition holds.
    pub fn resonance_delta_ka(&self, family: ModelFamily) -> Result<f64> {
        match family {
            ModelFamily::A => Ok(-self.drive1.detuning_mhz
                - lamb_shift(ModelFamily::A, &self.drive1, None)?),
            ModelFamily::B | ModelFamily::C => Ok(-self.drive1.detuning_mhz),
        }
    }
}

/// Effective two-level rates produced by adiabatic elimination:
/// `Upsilon = Gamma Omega^2 / Delta^2` per mode plus the energy shift of
/// the doubly-excited state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveRates {
    pub upsilon_a_mhz: f64,
    pub upsilon_b_mhz: f64,
    pub lamb_shift_mhz: f64,
}

/// Which Hamiltonian is being scattered.
///
/// `Full` variants keep the single-excitation states; `Eff` variants use the
/// adiabatically eliminated two-level system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    AFull,
    AEff,
    BFull,
    BEff,
    CFull,
    CEff,
}

impl ModelKind {
    pub fn family(self) -> ModelFamily {
        match self {
            ModelKind::AFull | ModelKind::AEff => ModelFamily::A,
            ModelKind::BFull | ModelKind::BEff => ModelFamily::B,
            ModelKind::CFull | ModelKind::CEff => ModelFamily::C,
        }
    }

    pub fn is_effective(self) -> bool {
        matches!(self, ModelKind::AEff | ModelKind::BEff | ModelKind::CEff)
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::AFull => "A_full",
            ModelKind::AEff => "A_eff",
            ModelKind::BFull => "B_full",
            ModelKind::BEff => "B_eff",
            ModelKind::CFull => "C_full",
            ModelKind::CEff => "C_eff",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a_full" | "afull" => Ok(ModelKind::AFull),
            "a_eff" | "aeff" => Ok(ModelKind::AEff),
            "b_full" | "bfull" => Ok(ModelKind::BFull),
            "b_eff" | "beff" => Ok(ModelKind::BEff),
            "c_full" | "cfull" => Ok(ModelKind::CFull),
            "c_eff" | "ceff" => Ok(ModelKind::CEff),
            other => Err(Error::InvalidParameter(format!(
                "unknown model kind `{other}` (expected one of a_full, a_eff, b_full, b_eff, c_full, c_eff)"
            ))),
        }
    }
}

/// The three physical configurations: one drive/one mode (A), one drive per
/// atom with separate modes (B), two drives on both atoms with two modes (C).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelFamily {
    A,
    B,
    C,
}

impl ModelFamily {
    pub fn name(self) -> &'static str {
        match self {
            ModelFamily::A => "A",
            ModelFamily::B => "B",
            ModelFamily::C => "C",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(ModelFamily::A),
            "B" => Ok(ModelFamily::B),
            "C" => Ok(ModelFamily::C),
            other => Err(Error::InvalidParameter(format!(
                "unknown model family `{other}` (expected A, B or C)"
            ))),
        }
    }
}

/// Scattering ports. Mode `a` terminates at ports 1 (left) and 2 (right);
/// mode `b` at ports 3 (left) and 4 (right).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Port {
    P1,
    P2,
    P3,
    P4,
}

impl Port {
    pub fn index(self) -> usize {
        match self {
            Port::P1 => 1,
            Port::P2 => 2,
            Port::P3 => 3,
            Port::P4 => 4,
        }
    }

    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            1 => Ok(Port::P1),
            2 => Ok(Port::P2),
            3 => Ok(Port::P3),
            4 => Ok(Port::P4),
            other => Err(Error::UnknownPort(format!("{other}"))),
        }
    }
}

impl std::fmt::Display for Port {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "port {}", self.index())
    }
}

/// Direction of a mode-`a` transmission measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Port 1 to port 2 (left-incident photon).
    Forward,
    /// Port 2 to port 1 (right-incident photon).
    Backward,
}

impl Direction {
    pub fn incidence(self) -> Port {
        match self {
            Direction::Forward => Port::P1,
            Direction::Backward => Port::P2,
        }
    }
}

/// Fold a phase into `[0, 2pi)`.
pub fn normalize_phase(phase: f64) -> f64 {
    let p = phase.rem_euclid(TAU);
    // rem_euclid can return TAU itself for tiny negative inputs.
    if p >= TAU {
        p - TAU
    } else {
        p
    }
}

/// Effective decay rate `Gamma Omega^2 / Delta^2` of the eliminated
/// two-level system into one waveguide mode.
pub fn effective_rate(gamma_mhz: f64, omega_mhz: f64, delta_mhz: f64) -> Result<f64> {
    if delta_mhz == 0.0 {
        return Err(Error::ZeroDetuning);
    }
    let ratio = omega_mhz / delta_mhz;
    Ok(gamma_mhz * ratio * ratio)
}

/// Energy shift of the doubly-excited state produced by the eliminated
/// drives. Models A and C see both transition paths of each drive (factor
/// two); model B has one path per drive.
pub fn lamb_shift(
    family: ModelFamily,
    drive1: &DriveField,
    drive2: Option<&DriveField>,
) -> Result<f64> {
    let shift_of = |d: &DriveField| -> Result<f64> {
        if d.detuning_mhz == 0.0 {
            return Err(Error::ZeroDetuning);
        }
        Ok(d.rabi_mhz * d.rabi_mhz / d.detuning_mhz)
    };
    let s1 = shift_of(drive1)?;
    match family {
        ModelFamily::A => Ok(2.0 * s1),
        ModelFamily::B => {
            let d2 = drive2.ok_or(Error::MissingInput {
                model: "B",
                what: "drive2",
            })?;
            Ok(s1 + shift_of(d2)?)
        }
        ModelFamily::C => {
            let d2 = drive2.ok_or(Error::MissingInput {
                model: "C",
                what: "drive2",
            })?;
            Ok(2.0 * s1 + 2.0 * shift_of(d2)?)
        }
    }
}
