//! Deterministic experiment sweeps and CSV emission for the composed
//! counter family.

use num_rational::Rational64;
use thiserror::Error;

use crate::bcd::WeightProfile;
use crate::compose::{
    compose, pump_machine, pump_round_trip, simulate_composed_run, ComposeError, ComposedMachine,
    StepBudget,
};
use crate::diagrams::{bcd_of, bcd_of_glued, glue, trapezium_from_run, DiagramError, GluedStats, TrapeziumStats};
use crate::machine::MachineError;
use crate::words::LengthProfile;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Compose(#[from] ComposeError),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("dispersion: {0}")]
    Bcd(#[from] crate::bcd::BcdError),
}

pub const CSV_HEADER: &str =
    "n,l_n,width,area,perimeter_comb,perimeter_mod,dispersion,log2_ratio,area_over_l_log2_l";

/// One measured point of the composed counter family.
#[derive(Clone, Debug)]
pub struct ExperimentRecord {
    pub n: u32,
    pub l_n: u64,
    pub width: usize,
    pub area: u64,
    pub perimeter_comb: u64,
    pub perimeter_mod: Rational64,
    pub dispersion: Rational64,
    pub log2_ratio: Option<f64>,
    pub area_ratio: Option<f64>,
}

/// Renders an exact rational with twelve decimal digits, rounding half
/// away from zero.
pub fn format_rational(r: Rational64) -> String {
    let negative = *r.numer() < 0;
    let numer = (*r.numer() as i128).unsigned_abs();
    let denom = (*r.denom() as i128).unsigned_abs();
    let scale: u128 = 1_000_000_000_000;
    let int = numer / denom;
    let rem = numer % denom;
    let mut frac = (rem * scale + denom / 2) / denom;
    let mut int = int;
    if frac >= scale {
        int += 1;
        frac -= scale;
    }
    format!("{}{}.{:012}", if negative { "-" } else { "" }, int, frac)
}

fn format_f64(x: f64) -> String {
    format!("{x:.12}")
}

impl ExperimentRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n,
            self.l_n,
            self.width,
            self.area,
            self.perimeter_comb,
            format_rational(self.perimeter_mod),
            format_rational(self.dispersion),
            self.log2_ratio.map(format_f64).unwrap_or_default(),
            self.area_ratio.map(format_f64).unwrap_or_default(),
        )
    }
}

pub fn records_to_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// One evaluated family point, with the underlying trapezium retained.
pub struct FamilyPoint {
    pub record: ExperimentRecord,
    pub trapezium: TrapeziumStats,
}

pub struct ComposeFamily {
    pub machine: ComposedMachine,
    pub points: Vec<FamilyPoint>,
}

/// Runs the pump round trip through the composed machine for
/// n = 1..=n_max, collecting band statistics and the dispersion of the
/// band-crossing grid.
pub fn compose_family(n_max: u32, budget: &mut StepBudget) -> Result<ComposeFamily, ExperimentError> {
    let pump = pump_machine();
    let cm = compose(&pump)?;
    let profile = LengthProfile::new(cm.machine().max_relation_length(), 1);
    let weight = WeightProfile::ramp(profile.k.max(1));
    let mut points = Vec::new();
    let mut prev_l: Option<u64> = None;
    for n in 1..=n_max {
        let base = pump_round_trip(&pump, n)?;
        let run = simulate_composed_run(&cm, &base, budget)?;
        let trapezium = trapezium_from_run(&run, &profile)?;
        let dispersion = bcd_of(&trapezium).dispersion_grid_aware(&weight)?;
        let l_n = run.length;
        let log2_ratio = prev_l.map(|p| (l_n as f64 / p as f64).log2());
        let area_ratio = if l_n >= 2 {
            Some(run.area as f64 / (l_n as f64 * (l_n as f64).log2()))
        } else {
            None
        };
        prev_l = Some(l_n);
        points.push(FamilyPoint {
            record: ExperimentRecord {
                n,
                l_n,
                width: run.width,
                area: run.area,
                perimeter_comb: trapezium.perimeter_comb,
                perimeter_mod: trapezium.perimeter_mod,
                dispersion,
                log2_ratio,
                area_ratio,
            },
            trapezium,
        });
    }
    Ok(ComposeFamily {
        machine: cm,
        points,
    })
}

/// The glued lower-bound diagram at one n: l(n) copies of the trapezium
/// side by side.
pub struct DehnLowerPoint {
    pub n: u32,
    pub l_n: u64,
    pub copies: u64,
    pub glued: GluedStats,
    pub dispersion: Rational64,
    /// area / (d^2 log2 d), absent for the degenerate first point
    pub ratio: Option<f64>,
}

pub fn dehn_lower_point(n: u32, budget: &mut StepBudget) -> Result<DehnLowerPoint, ExperimentError> {
    let pump = pump_machine();
    let cm = compose(&pump)?;
    let profile = LengthProfile::new(cm.machine().max_relation_length(), 1);
    let weight = WeightProfile::ramp(profile.k.max(1));
    let base = pump_round_trip(&pump, n)?;
    let run = simulate_composed_run(&cm, &base, budget)?;
    let trapezium = trapezium_from_run(&run, &profile)?;
    let glued = glue(&trapezium, run.length)?;
    let dispersion = bcd_of_glued(&glued).dispersion_grid_aware(&weight)?;
    let d = glued.perimeter_comb as f64;
    let ratio = if n >= 2 && d >= 2.0 {
        Some(glued.area as f64 / (d * d * d.log2()))
    } else {
        None
    };
    Ok(DehnLowerPoint {
        n,
        l_n: run.length,
        copies: glued.copies,
        glued,
        dispersion,
        ratio,
    })
}
