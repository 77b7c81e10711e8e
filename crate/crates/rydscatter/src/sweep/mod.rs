//! Parameter sweeps: axis definitions, quantity evaluation and table
//! assembly. Grid points are independent and evaluated in parallel; rows
//! are emitted in deterministic order (second axis outer, first axis
//! inner) regardless of scheduling.

pub mod config;
pub mod presets;
pub mod table;

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::analytic::{contrast_ratio, p_eff_c, r_eff_a, s_eff_b, t_eff_a};
use crate::continuous::{
    overlaps_closed, overlaps_quadrature, t_continuous_with, ContinuousCouplingSpec,
    OverlapIntegrals,
};
use crate::error::{Error, Result};
use crate::model::{Direction, ModelFamily, ModelKind, Port, ScatterParams};
use crate::solver::{scatter, ScatteringSolution};

pub use config::parse_config;
pub use presets::{figure_ids, reproduce, write_figure, FigureOutput};
pub use table::{format_g12, AxisInfo, OutputFormat, Provenance, SweepTable};

/// Which computation path a requested quantity takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Printed closed form.
    Eff,
    /// Direct solve of the eliminated (effective) network.
    EffSolver,
    /// Direct solve of the full four-level network.
    Full,
}

impl Route {
    fn suffix(self) -> &'static str {
        match self {
            Route::Eff => "eff",
            Route::EffSolver => "eff_solver",
            Route::Full => "full",
        }
    }

    fn kind(self, family: ModelFamily) -> ModelKind {
        match (family, self) {
            (ModelFamily::A, Route::Full) => ModelKind::AFull,
            (ModelFamily::A, _) => ModelKind::AEff,
            (ModelFamily::B, Route::Full) => ModelKind::BFull,
            (ModelFamily::B, _) => ModelKind::BEff,
            (ModelFamily::C, Route::Full) => ModelKind::CFull,
            (ModelFamily::C, _) => ModelKind::CEff,
        }
    }
}

/// Overlap integrals used by continuous-coupling quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OverlapSource {
    /// Printed closed forms (including the suspect exchange Lamb terms).
    Closed,
    /// Adaptive quadrature of the defining integrals (reference).
    Quadrature,
}

impl OverlapSource {
    fn suffix(self) -> &'static str {
        match self {
            OverlapSource::Closed => "closed",
            OverlapSource::Quadrature => "quad",
        }
    }
}

/// A computable column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    Transmission { direction: Direction, route: Route },
    Reflection { direction: Direction, route: Route },
    Contrast { route: Route },
    Converter { port: Port, route: Route },
    ConverterTotal { route: Route },
    Asym { incidence: Port, port: Port, route: Route },
    AsymTotal { incidence: Port, route: Route },
    ContinuousTransmission { direction: Direction, source: OverlapSource },
    ContinuousContrast { source: OverlapSource },
}

impl Quantity {
    /// Model family the quantity belongs to.
    pub fn family(self) -> ModelFamily {
        match self {
            Quantity::Transmission { .. }
            | Quantity::Reflection { .. }
            | Quantity::Contrast { .. }
            | Quantity::ContinuousTransmission { .. }
            | Quantity::ContinuousContrast { .. } => ModelFamily::A,
            Quantity::Converter { .. } | Quantity::ConverterTotal { .. } => ModelFamily::B,
            Quantity::Asym { .. } | Quantity::AsymTotal { .. } => ModelFamily::C,
        }
    }

    pub fn needs_continuous(self) -> bool {
        matches!(
            self,
            Quantity::ContinuousTransmission { .. } | Quantity::ContinuousContrast { .. }
        )
    }

    /// Canonical column name.
    pub fn name(self) -> String {
        match self {
            Quantity::Transmission { direction, route } => {
                let d = if direction == Direction::Forward { "12" } else { "21" };
                format!("T{d}_{}", route.suffix())
            }
            Quantity::Reflection { direction, route } => {
                let d = if direction == Direction::Forward { "11" } else { "22" };
                format!("R{d}_{}", route.suffix())
            }
            Quantity::Contrast { route } => format!("I_{}", route.suffix()),
            Quantity::Converter { port, route } => {
                format!("S1{}_{}", port.index(), route.suffix())
            }
            Quantity::ConverterTotal { route } => format!("Stot_{}", route.suffix()),
            Quantity::Asym { incidence, port, route } => {
                format!("P{}{}_{}", incidence.index(), port.index(), route.suffix())
            }
            Quantity::AsymTotal { incidence, route } => {
                if incidence == Port::P1 {
                    format!("Ptot_{}", route.suffix())
                } else {
                    format!("Ptot2_{}", route.suffix())
                }
            }
            Quantity::ContinuousTransmission { direction, source } => {
                let d = if direction == Direction::Forward { "12" } else { "21" };
                format!("Tc{d}_{}", source.suffix())
            }
            Quantity::ContinuousContrast { source } => format!("Ic_{}", source.suffix()),
        }
    }

    /// Parse a column token such as `T12_eff`, `S13_full`, `P24_eff_solver`,
    /// `Ptot2_eff`, `Tc12_quad` or `Ic_closed`.
    pub fn parse(token: &str) -> Result<Self> {
        let err = || {
            Error::config(
                "outputs",
                format!(
                    "unknown quantity `{token}`; expected e.g. T12_eff, T21_full, R11_eff, \
                     I_eff, S11_eff, Stot_full, P13_eff, Ptot2_eff, Tc12_quad, Ic_closed"
                ),
            )
        };
        let (base, rest) = token.split_once('_').ok_or_else(err)?;
        let route = |rest: &str| -> Result<Route> {
            match rest {
                "eff" => Ok(Route::Eff),
                "eff_solver" => Ok(Route::EffSolver),
                "full" => Ok(Route::Full),
                _ => Err(err()),
            }
        };
        let source = |rest: &str| -> Result<OverlapSource> {
            match rest {
                "closed" => Ok(OverlapSource::Closed),
                "quad" => Ok(OverlapSource::Quadrature),
                _ => Err(err()),
            }
        };
        match base {
            "T12" => Ok(Quantity::Transmission { direction: Direction::Forward, route: route(rest)? }),
            "T21" => Ok(Quantity::Transmission { direction: Direction::Backward, route: route(rest)? }),
            "R11" => Ok(Quantity::Reflection { direction: Direction::Forward, route: route(rest)? }),
            "R22" => Ok(Quantity::Reflection { direction: Direction::Backward, route: route(rest)? }),
            "I" => Ok(Quantity::Contrast { route: route(rest)? }),
            "Stot" => Ok(Quantity::ConverterTotal { route: route(rest)? }),
            "Ptot" => Ok(Quantity::AsymTotal { incidence: Port::P1, route: route(rest)? }),
            "Ptot2" => Ok(Quantity::AsymTotal { incidence: Port::P2, route: route(rest)? }),
            "Tc12" => Ok(Quantity::ContinuousTransmission { direction: Direction::Forward, source: source(rest)? }),
            "Tc21" => Ok(Quantity::ContinuousTransmission { direction: Direction::Backward, source: source(rest)? }),
            "Ic" => Ok(Quantity::ContinuousContrast { source: source(rest)? }),
            _ => {
                let bytes = base.as_bytes();
                if bytes.len() == 3 && bytes[0] == b'S' && bytes[1] == b'1' {
                    let port = Port::from_index((bytes[2] - b'0') as usize).map_err(|_| err())?;
                    return Ok(Quantity::Converter { port, route: route(rest)? });
                }
                if bytes.len() == 3 && bytes[0] == b'P' {
                    let incidence = match bytes[1] {
                        b'1' => Port::P1,
                        b'2' => Port::P2,
                        _ => return Err(err()),
                    };
                    let port = Port::from_index((bytes[2] - b'0') as usize).map_err(|_| err())?;
                    return Ok(Quantity::Asym { incidence, port, route: route(rest)? });
                }
                Err(err())
            }
        }
    }
}

/// Sweepable parameter names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisParam {
    DeltaKa,
    Theta1,
    Theta2,
    PhiA,
    PhiB,
    DeltaC1,
    OmegaC1,
    OmegaC2,
    Gamma,
    Lambda,
}

impl AxisParam {
    pub const ALL: [AxisParam; 10] = [
        AxisParam::DeltaKa,
        AxisParam::Theta1,
        AxisParam::Theta2,
        AxisParam::PhiA,
        AxisParam::PhiB,
        AxisParam::DeltaC1,
        AxisParam::OmegaC1,
        AxisParam::OmegaC2,
        AxisParam::Gamma,
        AxisParam::Lambda,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxisParam::DeltaKa => "delta_ka",
            AxisParam::Theta1 => "theta1",
            AxisParam::Theta2 => "theta2",
            AxisParam::PhiA => "phi_a",
            AxisParam::PhiB => "phi_b",
            AxisParam::DeltaC1 => "Delta_c1",
            AxisParam::OmegaC1 => "Omega_c1",
            AxisParam::OmegaC2 => "Omega_c2",
            AxisParam::Gamma => "gamma",
            AxisParam::Lambda => "Lambda",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        if name == "delta_kb" {
            return Err(Error::config(
                "axis.name",
                "delta_kb is not an independent parameter: energy conservation around the \
                 transition loop fixes delta_kb = -delta_ka (sweep delta_ka instead)",
            ));
        }
        Self::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| {
                let names: Vec<&str> = Self::ALL.iter().map(|p| p.name()).collect();
                Error::config(
                    "axis.name",
                    format!("unknown parameter `{name}`; expected one of {}", names.join(", ")),
                )
            })
    }

    fn apply(
        self,
        params: &mut ScatterParams,
        width: &mut Option<f64>,
        value: f64,
    ) -> Result<()> {
        match self {
            AxisParam::DeltaKa => params.delta_ka_mhz = value,
            AxisParam::Theta1 => params.drive1.local_phase_rad = value,
            AxisParam::PhiA => params.mode_a.propagation_phase_rad = value,
            AxisParam::DeltaC1 => params.drive1.detuning_mhz = value,
            AxisParam::OmegaC1 => params.drive1.rabi_mhz = value,
            AxisParam::Gamma => params.gamma_mhz = value,
            AxisParam::Theta2 => {
                params
                    .drive2
                    .as_mut()
                    .ok_or(Error::MissingInput { model: "sweep", what: "drive2" })?
                    .local_phase_rad = value;
            }
            AxisParam::OmegaC2 => {
                params
                    .drive2
                    .as_mut()
                    .ok_or(Error::MissingInput { model: "sweep", what: "drive2" })?
                    .rabi_mhz = value;
            }
            AxisParam::PhiB => {
                params
                    .mode_b
                    .as_mut()
                    .ok_or(Error::MissingInput { model: "sweep", what: "mode_b" })?
                    .propagation_phase_rad = value;
            }
            AxisParam::Lambda => {
                if width.is_none() {
                    return Err(Error::config(
                        "axis.name",
                        "sweeping Lambda requires [params.continuous]",
                    ));
                }
                *width = Some(value);
            }
        }
        Ok(())
    }

    /// Does this parameter enter the continuous-coupling overlap integrals?
    fn affects_overlaps(self) -> bool {
        matches!(
            self,
            AxisParam::Lambda
                | AxisParam::PhiA
                | AxisParam::Theta1
                | AxisParam::OmegaC1
                | AxisParam::DeltaC1
        )
    }
}

/// One sweep axis: `count` evenly spaced values from `start` to `stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub param: AxisParam,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(param: AxisParam, start: f64, stop: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::config(
                "axis.count",
                format!("axis count must be at least 2, got {count}"),
            ));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err(Error::config("axis", "axis bounds must be finite"));
        }
        Ok(Self { param, start, stop, count })
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
    }

    pub fn info(&self) -> AxisInfo {
        AxisInfo {
            name: self.param.name().to_string(),
            start: self.start,
            stop: self.stop,
            count: self.count,
        }
    }
}

/// A fully resolved sweep: model family, fixed parameters, one or two axes
/// and the requested output columns.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub family: ModelFamily,
    pub params: ScatterParams,
    pub continuous: Option<ContinuousCouplingSpec>,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub outputs: Vec<Quantity>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.outputs.is_empty() {
            return Err(Error::config("outputs", "at least one output quantity is required"));
        }
        for q in &self.outputs {
            if q.family() != self.family {
                return Err(Error::config(
                    "outputs",
                    format!(
                        "quantity `{}` belongs to model family {}, config says {}",
                        q.name(),
                        q.family().name(),
                        self.family.name()
                    ),
                ));
            }
            if q.needs_continuous() && self.continuous.is_none() {
                return Err(Error::config(
                    "outputs",
                    format!("quantity `{}` requires [params.continuous]", q.name()),
                ));
            }
        }
        if matches!(self.family, ModelFamily::B | ModelFamily::C) {
            if self.params.drive2.is_none() {
                return Err(Error::MissingInput { model: self.family.name(), what: "drive2" });
            }
            if self.params.mode_b.is_none() {
                return Err(Error::MissingInput { model: self.family.name(), what: "mode_b" });
            }
        }
        Ok(())
    }

    pub fn column_names(&self) -> Vec<String> {
        let mut cols = vec![self.axis1.param.name().to_string()];
        if let Some(axis2) = &self.axis2 {
            cols.push(axis2.param.name().to_string());
        }
        cols.extend(self.outputs.iter().map(|q| q.name()));
        cols
    }

    fn axes_affect_overlaps(&self) -> bool {
        self.axis1.param.affects_overlaps()
            || self.axis2.map_or(false, |a| a.param.affects_overlaps())
    }

    fn provenance(&self) -> Provenance {
        let mut prov = Provenance::new(self.family.name());
        prov.outputs = self.outputs.iter().map(|q| q.name()).collect();
        prov.axes.push(self.axis1.info());
        if let Some(a2) = &self.axis2 {
            prov.axes.push(a2.info());
        }
        let mut params = serde_json::to_value(self.params).expect("params serialize");
        if let Some(cont) = &self.continuous {
            params["continuous"] = serde_json::to_value(cont).expect("spec serialize");
        }
        prov.params = params;
        prov
    }
}

/// Per-point evaluator. Solver solutions and overlap integrals are cached
/// so that several columns sharing a computation pay for it once.
pub struct PointEvaluator {
    pub params: ScatterParams,
    pub continuous: Option<ContinuousCouplingSpec>,
    solutions: BTreeMap<(&'static str, usize), ScatteringSolution>,
    overlaps: BTreeMap<OverlapSource, OverlapIntegrals>,
}

impl PointEvaluator {
    pub fn new(params: ScatterParams, continuous: Option<ContinuousCouplingSpec>) -> Self {
        Self {
            params,
            continuous,
            solutions: BTreeMap::new(),
            overlaps: BTreeMap::new(),
        }
    }

    /// Seed the overlap cache (used when no axis touches the overlap
    /// inputs, so one quadrature serves the whole sweep).
    pub fn with_overlaps(mut self, source: OverlapSource, overlaps: OverlapIntegrals) -> Self {
        self.overlaps.insert(source, overlaps);
        self
    }

    fn solution(&mut self, kind: ModelKind, incidence: Port) -> Result<&ScatteringSolution> {
        let key = (kind.name(), incidence.index());
        if !self.solutions.contains_key(&key) {
            let sol = scatter(kind, &self.params, incidence)?;
            self.solutions.insert(key, sol);
        }
        Ok(&self.solutions[&key])
    }

    fn overlap_integrals(&mut self, source: OverlapSource) -> Result<OverlapIntegrals> {
        if let Some(o) = self.overlaps.get(&source) {
            return Ok(*o);
        }
        let spec = self.continuous.ok_or_else(|| {
            Error::config("params.continuous", "continuous quantities need a coupling width")
        })?;
        let upsilon = self
            .params
            .effective_rates(ModelFamily::A)?
            .upsilon_a_mhz;
        let o = match source {
            OverlapSource::Closed => overlaps_closed(
                spec.width,
                self.params.mode_a.propagation_phase_rad,
                self.params.drive1.local_phase_rad,
                upsilon,
            )?,
            OverlapSource::Quadrature => overlaps_quadrature(
                spec.width,
                self.params.mode_a.propagation_phase_rad,
                self.params.drive1.local_phase_rad,
                upsilon,
            )?,
        };
        self.overlaps.insert(source, o);
        Ok(o)
    }

    fn transmission(&mut self, direction: Direction, route: Route) -> Result<f64> {
        match route {
            Route::Eff => t_eff_a(&self.params, direction),
            _ => {
                let kind = route.kind(ModelFamily::A);
                Ok(self.solution(kind, direction.incidence())?.transmission())
            }
        }
    }

    /// Value of one quantity at the current parameters.
    pub fn value(&mut self, quantity: Quantity) -> Result<f64> {
        match quantity {
            Quantity::Transmission { direction, route } => self.transmission(direction, route),
            Quantity::Reflection { direction, route } => match route {
                Route::Eff => r_eff_a(&self.params),
                _ => {
                    let kind = route.kind(ModelFamily::A);
                    Ok(self.solution(kind, direction.incidence())?.reflection())
                }
            },
            Quantity::Contrast { route } => {
                let t12 = self.transmission(Direction::Forward, route)?;
                let t21 = self.transmission(Direction::Backward, route)?;
                contrast_ratio(t12, t21)
            }
            Quantity::Converter { port, route } => match route {
                Route::Eff => Ok(s_eff_b(&self.params)?[port.index() - 1]),
                _ => {
                    let kind = route.kind(ModelFamily::B);
                    Ok(self.solution(kind, Port::P1)?.probability(port))
                }
            },
            Quantity::ConverterTotal { route } => match route {
                Route::Eff => {
                    let s = s_eff_b(&self.params)?;
                    Ok(s[2] + s[3])
                }
                _ => {
                    let kind = route.kind(ModelFamily::B);
                    let sol = self.solution(kind, Port::P1)?;
                    Ok(sol.probability(Port::P3) + sol.probability(Port::P4))
                }
            },
            Quantity::Asym { incidence, port, route } => match route {
                Route::Eff => Ok(p_eff_c(&self.params, incidence)?[port.index() - 1]),
                _ => {
                    let kind = route.kind(ModelFamily::C);
                    Ok(self.solution(kind, incidence)?.probability(port))
                }
            },
            Quantity::AsymTotal { incidence, route } => match route {
                Route::Eff => {
                    let p = p_eff_c(&self.params, incidence)?;
                    Ok(p[2] + p[3])
                }
                _ => {
                    let kind = route.kind(ModelFamily::C);
                    let sol = self.solution(kind, incidence)?;
                    Ok(sol.probability(Port::P3) + sol.probability(Port::P4))
                }
            },
            Quantity::ContinuousTransmission { direction, source } => {
                let overlaps = self.overlap_integrals(source)?;
                t_continuous_with(&self.params, &overlaps, direction)
            }
            Quantity::ContinuousContrast { source } => {
                let overlaps = self.overlap_integrals(source)?;
                let t12 = t_continuous_with(&self.params, &overlaps, Direction::Forward)?;
                let t21 = t_continuous_with(&self.params, &overlaps, Direction::Backward)?;
                contrast_ratio(t12, t21)
            }
        }
    }
}

/// Run a sweep on the current rayon thread pool.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let n1 = spec.axis1.count;
    let n2 = spec.axis2.map_or(1, |a| a.count);
    let total = n1 * n2;

    // When no axis touches the overlap inputs, one set of overlap
    // integrals serves every grid point.
    let mut hoisted: BTreeMap<OverlapSource, OverlapIntegrals> = BTreeMap::new();
    if !spec.axes_affect_overlaps() {
        let mut seed = PointEvaluator::new(spec.params, spec.continuous);
        for q in &spec.outputs {
            if let Quantity::ContinuousTransmission { source, .. }
            | Quantity::ContinuousContrast { source } = q
            {
                if !hoisted.contains_key(source) {
                    hoisted.insert(*source, seed.overlap_integrals(*source)?);
                }
            }
        }
    }

    let results: Vec<Result<Vec<f64>>> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let i2 = idx / n1;
            let i1 = idx % n1;
            let mut params = spec.params;
            let mut width = spec.continuous.map(|c| c.width);
            if let Some(axis2) = &spec.axis2 {
                axis2.param.apply(&mut params, &mut width, axis2.value(i2))?;
            }
            spec.axis1
                .param
                .apply(&mut params, &mut width, spec.axis1.value(i1))?;
            let continuous = match width {
                Some(w) => Some(ContinuousCouplingSpec::new(w)?),
                None => None,
            };
            let mut evaluator = PointEvaluator::new(params, continuous);
            for (source, o) in &hoisted {
                evaluator = evaluator.with_overlaps(*source, *o);
            }
            let mut row = Vec::with_capacity(spec.outputs.len() + 2);
            row.push(spec.axis1.value(i1));
            if let Some(axis2) = &spec.axis2 {
                row.push(axis2.value(i2));
            }
            for q in &spec.outputs {
                let v = evaluator.value(*q).map_err(|e| {
                    let mut at = format!("{} = {}", spec.axis1.param.name(), spec.axis1.value(i1));
                    if let Some(axis2) = &spec.axis2 {
                        at.push_str(&format!(", {} = {}", axis2.param.name(), axis2.value(i2)));
                    }
                    Error::Numerical(format!("at {at}: {e}"))
                })?;
                row.push(v);
            }
            Ok(row)
        })
        .collect();

    let mut rows = Vec::with_capacity(total);
    for r in results {
        rows.push(r?);
    }
    Ok(SweepTable {
        columns: spec.column_names(),
        rows,
        provenance: spec.provenance(),
    })
}

/// Run a sweep on a dedicated thread pool of `jobs` threads (`None` uses
/// the default pool).
pub fn run_sweep_with_jobs(spec: &SweepSpec, jobs: Option<usize>) -> Result<SweepTable> {
    match jobs {
        None => run_sweep(spec),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
            pool.install(|| run_sweep(spec))
        }
    }
}
