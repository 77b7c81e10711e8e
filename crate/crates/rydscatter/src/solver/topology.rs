//! Declarative coupling topologies for the six supported configurations.
//!
//! A topology lists the retained atomic levels with their reduced complex
//! energies, which waveguide mode couples to which level at which of the two
//! coupling points, and which drive tone connects which pair of levels. The
//! system builder consumes this description; nothing downstream knows about
//! specific models.
//!
//! Reduced units: the group velocity is set to one and the bare coupling is
//! `g = sqrt(Gamma v_g)`, so port amplitudes depend only on the decay rates.
//! All level energies are quoted relative to the incident-photon frame, i.e.
//! a level entry `E` produces the equation `(couplings) - E u = 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{lamb_shift, ModelFamily, ModelKind, ScatterParams};

/// Reduced group velocity. Port probabilities are invariant under this
/// choice; atomic amplitudes scale with `sqrt(v_g)`.
pub const V_G: f64 = 1.0;

/// Which waveguide band a coupling belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeId {
    A,
    B,
}

impl ModeId {
    pub fn label(self) -> &'static str {
        match self {
            ModeId::A => "a",
            ModeId::B => "b",
        }
    }
}

/// A retained atomic level with its reduced complex energy.
#[derive(Debug, Clone)]
pub struct Level {
    pub label: &'static str,
    pub energy: Complex64,
}

/// One mode-to-level coupling at one of the two points (`0` at x = 0,
/// `1` at x = d). `amplitude` is the emission amplitude as it appears in the
/// field equations; atomic equations use its conjugate.
#[derive(Debug, Clone)]
pub struct ModeCouplingTerm {
    pub point: usize,
    pub level: usize,
    pub amplitude: Complex64,
}

/// One waveguide mode with its propagation phase between the points.
#[derive(Debug, Clone)]
pub struct ModeTopology {
    pub id: ModeId,
    pub phase_rad: f64,
    pub couplings: Vec<ModeCouplingTerm>,
}

impl ModeTopology {
    /// Sorted, de-duplicated coupling point indices of this mode.
    pub fn points(&self) -> Vec<usize> {
        let mut pts: Vec<usize> = self.couplings.iter().map(|c| c.point).collect();
        pts.sort_unstable();
        pts.dedup();
        pts
    }
}

/// One drive term `amplitude |to><from| + h.c.` between two retained levels.
#[derive(Debug, Clone)]
pub struct DriveCouplingTerm {
    pub from: usize,
    pub to: usize,
    pub amplitude: Complex64,
}

/// The assembled description of one scattering network.
#[derive(Debug, Clone)]
pub struct CouplingTopology {
    pub kind: ModelKind,
    pub levels: Vec<Level>,
    pub modes: Vec<ModeTopology>,
    pub drives: Vec<DriveCouplingTerm>,
}

impl CouplingTopology {
    /// Build the topology of `kind` at the given parameters.
    ///
    /// Sign convention: the local drive phase `theta` is attached to the
    /// atom-2 couplings with the sign that makes the adiabatic limit of the
    /// full networks coincide, direction label by direction label, with the
    /// eliminated networks and the closed-form transmissivities. Flipping
    /// the sign of `theta` everywhere is the same as mirroring the
    /// propagation axis, so only the labeling of ports is at stake.
    pub fn for_model(kind: ModelKind, params: &ScatterParams) -> Result<Self> {
        params.validate()?;
        let gamma = params.gamma_mhz;
        let delta = params.delta_ka_mhz;
        let d1 = params.drive1;
        let phi_a = params.mode_a.propagation_phase_rad;
        let g_a = (params.mode_a.decay_mhz * V_G).sqrt();
        let i = Complex64::I;

        let two_mode = |what: &'static str| Error::MissingInput {
            model: kind.name(),
            what: match what {
                "drive2" => "drive2",
                _ => "mode_b",
            },
        };

        let topology = match kind {
            ModelKind::AFull => {
                let e_single = Complex64::new(delta, gamma);
                let e_double = Complex64::new(delta + d1.detuning_mhz, 2.0 * gamma);
                CouplingTopology {
                    kind,
                    levels: vec![
                        Level { label: "u_b", energy: e_single },
                        Level { label: "u_c", energy: e_single },
                        Level { label: "u_d", energy: e_double },
                    ],
                    modes: vec![ModeTopology {
                        id: ModeId::A,
                        phase_rad: phi_a,
                        couplings: vec![
                            ModeCouplingTerm { point: 0, level: 0, amplitude: g_a.into() },
                            ModeCouplingTerm { point: 1, level: 1, amplitude: g_a.into() },
                        ],
                    }],
                    drives: vec![
                        DriveCouplingTerm { from: 0, to: 2, amplitude: d1.rabi_mhz.into() },
                        DriveCouplingTerm {
                            from: 1,
                            to: 2,
                            amplitude: Complex64::from_polar(d1.rabi_mhz, -d1.local_phase_rad),
                        },
                    ],
                }
            }
            ModelKind::AEff => {
                let shift = lamb_shift(ModelFamily::A, &d1, None)?;
                let xi_a = effective_coupling(g_a, &d1)?;
                let e_double = Complex64::new(delta + d1.detuning_mhz + shift, 2.0 * gamma);
                CouplingTopology {
                    kind,
                    levels: vec![Level { label: "u_d", energy: e_double }],
                    modes: vec![ModeTopology {
                        id: ModeId::A,
                        phase_rad: phi_a,
                        couplings: vec![
                            ModeCouplingTerm { point: 0, level: 0, amplitude: xi_a.into() },
                            ModeCouplingTerm {
                                point: 1,
                                level: 0,
                                amplitude: xi_a * (i * d1.local_phase_rad).exp(),
                            },
                        ],
                    }],
                    drives: vec![],
                }
            }
            ModelKind::BFull | ModelKind::BEff | ModelKind::CFull | ModelKind::CEff => {
                let d2 = params.drive2.ok_or_else(|| two_mode("drive2"))?;
                let mode_b = params.mode_b.ok_or_else(|| two_mode("mode_b"))?;
                let phi_b = mode_b.propagation_phase_rad;
                let g_b = (mode_b.decay_mhz * V_G).sqrt();
                // Exact stationary-frame detuning of the mode-b photon:
                // delta_kb = delta_ka + Delta_c1 - Delta_c2.
                let delta_b = delta + d1.detuning_mhz - d2.detuning_mhz;
                let e_double = Complex64::new(delta + d1.detuning_mhz, 2.0 * gamma);
                match kind {
                    ModelKind::BFull => CouplingTopology {
                        kind,
                        levels: vec![
                            Level { label: "u_b", energy: Complex64::new(delta, gamma) },
                            Level { label: "u_c", energy: Complex64::new(delta_b, gamma) },
                            Level { label: "u_d", energy: e_double },
                        ],
                        modes: vec![
                            ModeTopology {
                                id: ModeId::A,
                                phase_rad: phi_a,
                                couplings: vec![ModeCouplingTerm {
                                    point: 0,
                                    level: 0,
                                    amplitude: g_a.into(),
                                }],
                            },
                            ModeTopology {
                                id: ModeId::B,
                                phase_rad: phi_b,
                                couplings: vec![ModeCouplingTerm {
                                    point: 1,
                                    level: 1,
                                    amplitude: g_b.into(),
                                }],
                            },
                        ],
                        drives: vec![
                            DriveCouplingTerm { from: 0, to: 2, amplitude: d1.rabi_mhz.into() },
                            DriveCouplingTerm {
                                from: 1,
                                to: 2,
                                amplitude: Complex64::from_polar(d2.rabi_mhz, -d2.local_phase_rad),
                            },
                        ],
                    },
                    ModelKind::BEff => {
                        let shift = lamb_shift(ModelFamily::B, &d1, Some(&d2))?;
                        let xi_a = effective_coupling(g_a, &d1)?;
                        let xi_b = effective_coupling(g_b, &d2)?;
                        let e_eff =
                            Complex64::new(delta + d1.detuning_mhz + shift, 2.0 * gamma);
                        CouplingTopology {
                            kind,
                            levels: vec![Level { label: "u_d", energy: e_eff }],
                            modes: vec![
                                ModeTopology {
                                    id: ModeId::A,
                                    phase_rad: phi_a,
                                    couplings: vec![ModeCouplingTerm {
                                        point: 0,
                                        level: 0,
                                        amplitude: xi_a.into(),
                                    }],
                                },
                                ModeTopology {
                                    id: ModeId::B,
                                    phase_rad: phi_b,
                                    couplings: vec![ModeCouplingTerm {
                                        point: 1,
                                        level: 0,
                                        amplitude: xi_b * (i * d2.local_phase_rad).exp(),
                                    }],
                                },
                            ],
                            drives: vec![],
                        }
                    }
                    ModelKind::CFull => {
                        // Both drives address both atoms, so the retained
                        // single-excitation amplitudes split into a mode-a
                        // branch (reached by absorbing the probe photon) and
                        // a mode-b branch (reached from the doubly-excited
                        // state via drive 2). Merging them would force the
                        // non-resonant cross pairings (mode a with drive 2
                        // and vice versa) that the rotating-wave reduction
                        // discards.
                        let e_single_a = Complex64::new(delta, gamma);
                        let e_single_b = Complex64::new(delta_b, gamma);
                        CouplingTopology {
                            kind,
                            levels: vec![
                                Level { label: "u_b_a", energy: e_single_a },
                                Level { label: "u_c_a", energy: e_single_a },
                                Level { label: "u_b_b", energy: e_single_b },
                                Level { label: "u_c_b", energy: e_single_b },
                                Level { label: "u_d", energy: e_double },
                            ],
                            modes: vec![
                                ModeTopology {
                                    id: ModeId::A,
                                    phase_rad: phi_a,
                                    couplings: vec![
                                        ModeCouplingTerm { point: 0, level: 0, amplitude: g_a.into() },
                                        ModeCouplingTerm { point: 1, level: 1, amplitude: g_a.into() },
                                    ],
                                },
                                ModeTopology {
                                    id: ModeId::B,
                                    phase_rad: phi_b,
                                    couplings: vec![
                                        ModeCouplingTerm { point: 0, level: 2, amplitude: g_b.into() },
                                        ModeCouplingTerm { point: 1, level: 3, amplitude: g_b.into() },
                                    ],
                                },
                            ],
                            drives: vec![
                                DriveCouplingTerm { from: 0, to: 4, amplitude: d1.rabi_mhz.into() },
                                DriveCouplingTerm {
                                    from: 1,
                                    to: 4,
                                    amplitude: Complex64::from_polar(d1.rabi_mhz, -d1.local_phase_rad),
                                },
                                DriveCouplingTerm { from: 2, to: 4, amplitude: d2.rabi_mhz.into() },
                                DriveCouplingTerm {
                                    from: 3,
                                    to: 4,
                                    amplitude: Complex64::from_polar(d2.rabi_mhz, -d2.local_phase_rad),
                                },
                            ],
                        }
                    }
                    ModelKind::CEff => {
                        let shift = lamb_shift(ModelFamily::C, &d1, Some(&d2))?;
                        let xi_a = effective_coupling(g_a, &d1)?;
                        let xi_b = effective_coupling(g_b, &d2)?;
                        let e_eff =
                            Complex64::new(delta + d1.detuning_mhz + shift, 2.0 * gamma);
                        CouplingTopology {
                            kind,
                            levels: vec![Level { label: "u_d", energy: e_eff }],
                            modes: vec![
                                ModeTopology {
                                    id: ModeId::A,
                                    phase_rad: phi_a,
                                    couplings: vec![
                                        ModeCouplingTerm { point: 0, level: 0, amplitude: xi_a.into() },
                                        ModeCouplingTerm {
                                            point: 1,
                                            level: 0,
                                            amplitude: xi_a * (i * d1.local_phase_rad).exp(),
                                        },
                                    ],
                                },
                                ModeTopology {
                                    id: ModeId::B,
                                    phase_rad: phi_b,
                                    couplings: vec![
                                        ModeCouplingTerm { point: 0, level: 0, amplitude: xi_b.into() },
                                        ModeCouplingTerm {
                                            point: 1,
                                            level: 0,
                                            amplitude: xi_b * (i * d2.local_phase_rad).exp(),
                                        },
                                    ],
                                },
                            ],
                            drives: vec![],
                        }
                    }
                    _ => unreachable!(),
                }
            }
        };
        topology.check_consistency()?;
        Ok(topology)
    }

    fn check_consistency(&self) -> Result<()> {
        if self.modes.is_empty() || self.modes.len() > 2 {
            return Err(Error::InvalidParameter(format!(
                "topology must have 1 or 2 modes, got {}",
                self.modes.len()
            )));
        }
        for mode in &self.modes {
            let points = mode.points();
            if points.is_empty() || points.len() > 2 {
                return Err(Error::InvalidParameter(format!(
                    "mode {} must couple at 1 or 2 points, got {}",
                    mode.id.label(),
                    points.len()
                )));
            }
            for c in &mode.couplings {
                if c.point > 1 {
                    return Err(Error::InvalidParameter(format!(
                        "coupling point index {} out of range (0 or 1)",
                        c.point
                    )));
                }
                if c.level >= self.levels.len() {
                    return Err(Error::InvalidParameter(
                        "coupling references a missing level".into(),
                    ));
                }
            }
        }
        for d in &self.drives {
            if d.from >= self.levels.len() || d.to >= self.levels.len() {
                return Err(Error::InvalidParameter(
                    "drive references a missing level".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn mode(&self, id: ModeId) -> Option<&ModeTopology> {
        self.modes.iter().find(|m| m.id == id)
    }
}

/// Effective coupling `xi = -g Omega / Delta` of the eliminated two-photon
/// transition.
fn effective_coupling(g: f64, drive: &crate::model::DriveField) -> Result<f64> {
    if drive.detuning_mhz == 0.0 {
        return Err(Error::ZeroDetuning);
    }
    Ok(-g * drive.rabi_mhz / drive.detuning_mhz)
}
