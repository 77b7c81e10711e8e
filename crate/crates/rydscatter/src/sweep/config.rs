//! TOML sweep configuration.
//!
//! Units are fixed: MHz for rates and detunings, radians for phases.
//! Unknown keys are rejected. Omitted parameters fall back to the
//! single-drive reference point (`gamma` = 0.001 MHz, `Gamma_a` = 1 MHz,
//! `Omega_c1` = 1 MHz, `Delta_c1` = 30 MHz, `phi_a` = pi/2, `theta_1` = 0);
//! converter families default the second drive to the mirrored detuning
//! `Delta_c2 = -Delta_c1` with equal Rabi frequency.

use serde::Deserialize;
use std::f64::consts::FRAC_PI_2;

use crate::continuous::ContinuousCouplingSpec;
use crate::error::{Error, Result};
use crate::model::{
    DriveField, ModelFamily, ScatterParams, WaveguideMode, GAMMA_1KHZ_MHZ, V6_20GHZ_MHZ,
};
use crate::sweep::{Axis, AxisParam, Quantity, SweepSpec};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    model: String,
    outputs: Option<Vec<String>>,
    #[serde(default)]
    params: ParamsDoc,
    axis1: AxisDoc,
    axis2: Option<AxisDoc>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsDoc {
    gamma: Option<f64>,
    v6: Option<f64>,
    delta_ka: Option<f64>,
    drive1: Option<DriveDoc>,
    drive2: Option<DriveDoc>,
    mode_a: Option<ModeDoc>,
    mode_b: Option<ModeDoc>,
    continuous: Option<ContinuousDoc>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DriveDoc {
    rabi: Option<f64>,
    detuning: Option<f64>,
    phase: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeDoc {
    decay: Option<f64>,
    phase: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContinuousDoc {
    width: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisDoc {
    name: String,
    start: f64,
    stop: f64,
    count: usize,
}

fn build_axis(doc: &AxisDoc, which: &str) -> Result<Axis> {
    let param = AxisParam::parse(&doc.name).map_err(|e| match e {
        Error::Config { msg, .. } => Error::config(format!("{which}.name"), msg),
        other => other,
    })?;
    Axis::new(param, doc.start, doc.stop, doc.count).map_err(|e| match e {
        Error::Config { path, msg } => {
            Error::config(format!("{which}.{}", path.trim_start_matches("axis.")), msg)
        }
        other => other,
    })
}

/// Parse a configuration document into a validated sweep.
pub fn parse_config(text: &str) -> Result<SweepSpec> {
    let doc: ConfigDoc =
        toml::from_str(text).map_err(|e| Error::config("<config>", e.to_string()))?;
    let family = ModelFamily::parse(&doc.model)
        .map_err(|e| Error::config("model", e.to_string()))?;

    let p = &doc.params;
    let d1 = p.drive1.as_ref();
    let drive1 = DriveField::new(
        d1.and_then(|d| d.rabi).unwrap_or(1.0),
        d1.and_then(|d| d.detuning).unwrap_or(30.0),
        d1.and_then(|d| d.phase).unwrap_or(0.0),
    );
    let ma = p.mode_a.as_ref();
    let mode_a = WaveguideMode::new(
        ma.and_then(|m| m.decay).unwrap_or(1.0),
        ma.and_then(|m| m.phase).unwrap_or(FRAC_PI_2),
    );
    let two_mode_family = matches!(family, ModelFamily::B | ModelFamily::C);
    let drive2 = if p.drive2.is_some() || two_mode_family {
        let d2 = p.drive2.as_ref();
        Some(DriveField::new(
            d2.and_then(|d| d.rabi).unwrap_or(drive1.rabi_mhz),
            d2.and_then(|d| d.detuning).unwrap_or(-drive1.detuning_mhz),
            d2.and_then(|d| d.phase).unwrap_or(0.0),
        ))
    } else {
        None
    };
    let mode_b = if p.mode_b.is_some() || two_mode_family {
        let mb = p.mode_b.as_ref();
        Some(WaveguideMode::new(
            mb.and_then(|m| m.decay).unwrap_or(mode_a.decay_mhz),
            mb.and_then(|m| m.phase).unwrap_or(mode_a.propagation_phase_rad),
        ))
    } else {
        None
    };
    let params = ScatterParams {
        gamma_mhz: p.gamma.unwrap_or(GAMMA_1KHZ_MHZ),
        vdw_shift_mhz: p.v6.unwrap_or(V6_20GHZ_MHZ),
        drive1,
        drive2,
        mode_a,
        mode_b,
        delta_ka_mhz: p.delta_ka.unwrap_or(-30.0),
    };
    params
        .validate()
        .map_err(|e| Error::config("params", e.to_string()))?;

    let continuous = match &p.continuous {
        Some(c) => Some(
            ContinuousCouplingSpec::new(c.width)
                .map_err(|e| Error::config("params.continuous.width", e.to_string()))?,
        ),
        None => None,
    };

    let outputs: Vec<Quantity> = match &doc.outputs {
        Some(tokens) => tokens
            .iter()
            .map(|t| Quantity::parse(t))
            .collect::<Result<_>>()?,
        None => default_outputs(family),
    };

    let axis1 = build_axis(&doc.axis1, "axis1")?;
    let axis2 = doc
        .axis2
        .as_ref()
        .map(|a| build_axis(a, "axis2"))
        .transpose()?;

    let spec = SweepSpec {
        family,
        params,
        continuous,
        axis1,
        axis2,
        outputs,
    };
    spec.validate()?;
    Ok(spec)
}

fn default_outputs(family: ModelFamily) -> Vec<Quantity> {
    let tokens: &[&str] = match family {
        ModelFamily::A => &["T12_eff", "T21_eff"],
        ModelFamily::B => &["S11_eff", "S12_eff", "Stot_eff"],
        ModelFamily::C => &["P11_eff", "P12_eff", "P13_eff", "P14_eff"],
    };
    tokens
        .iter()
        .map(|t| Quantity::parse(t).expect("default quantities parse"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
model = "A"

[axis1]
name = "delta_ka"
start = -31.0
stop = -29.0
count = 801
"#;

    #[test]
    fn minimal_model_a_config_gets_reference_defaults() {
        let spec = parse_config(MINIMAL).unwrap();
        assert_eq!(spec.family, ModelFamily::A);
        assert_eq!(spec.params.gamma_mhz, 0.001);
        assert_eq!(spec.params.mode_a.propagation_phase_rad, FRAC_PI_2);
        assert_eq!(spec.params.mode_a.decay_mhz, 1.0);
        assert_eq!(spec.params.drive1.rabi_mhz, 1.0);
        assert_eq!(spec.params.vdw_shift_mhz, 20_000.0);
        assert!(spec.params.drive2.is_none());
        assert_eq!(spec.outputs.len(), 2);
        assert_eq!(spec.axis1.count, 801);
    }

    #[test]
    fn converter_families_default_the_mirrored_drive() {
        let text = MINIMAL.replace("model = \"A\"", "model = \"B\"");
        let spec = parse_config(&text).unwrap();
        let d2 = spec.params.drive2.unwrap();
        assert_eq!(d2.detuning_mhz, -30.0);
        assert_eq!(d2.rabi_mhz, 1.0);
        assert!(spec.params.mode_b.is_some());
    }

    #[test]
    fn single_point_axis_is_rejected() {
        let text = MINIMAL.replace("count = 801", "count = 1");
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("at least 2"), "{err}");
    }

    #[test]
    fn delta_kb_axis_is_rejected_with_explanation() {
        let text = MINIMAL.replace("name = \"delta_ka\"", "name = \"delta_kb\"");
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("delta_kb = -delta_ka"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected_with_a_path() {
        let text = format!("{MINIMAL}\n[params]\nbogus_key = 1.0\n");
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("bogus_key"), "{err}");
    }

    #[test]
    fn outputs_must_match_the_model_family() {
        let text = format!("outputs = [\"S11_eff\"]\n{MINIMAL}");
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("family"), "{err}");
    }

    #[test]
    fn continuous_quantities_need_a_width() {
        let text = format!("outputs = [\"Tc12_quad\"]\n{MINIMAL}");
        assert!(parse_config(&text).is_err());
        let with_width = format!(
            "outputs = [\"Tc12_quad\"]\n{MINIMAL}\n[params.continuous]\nwidth = 1.5707963\n"
        );
        assert!(parse_config(&with_width).is_ok(), "{:?}", parse_config(&with_width).err());
    }
}
