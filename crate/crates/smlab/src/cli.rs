//! Command implementations behind the thin binary: each returns its
//! printable report (and CSV payload where applicable) so outputs stay
//! byte-reproducible and testable.

use std::fmt::Write as _;

use num_rational::Rational64;
use num_traits::Zero;
use thiserror::Error;

use crate::adding::{AddingError, ZMachine};
use crate::bcd::{Bcd, BcdError, Chord, ChordClass, WeightProfile};
use crate::compose::{compose, pump_machine, ComposeError, StepBudget};
use crate::experiment::{
    compose_family, dehn_lower_point, format_rational, records_to_csv, ExperimentError,
};
use crate::machine::MachineError;
use crate::machine_fmt::{emit_machine, parse_machine, ParseError};
use crate::presentation::{emit_presentation, presentation_to_text};
use crate::words::LengthProfile;

pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid argument: {0}")]
    InvalidArg(String),
    #[error("{file}: {source}")]
    BcdFile { file: String, source: BcdError },
    #[error("{file}: {source}")]
    MachineFile { file: String, source: ParseError },
    #[error(transparent)]
    Adding(#[from] AddingError),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Compose(#[from] ComposeError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug)]
pub struct CommandOutput {
    pub report: String,
    pub csv: Option<String>,
}

/// Replays the full count on an n-letter tape, checks the closed length
/// formula and the exponential bounds, and tabulates one CSV row per
/// incrementing cycle.
pub fn cmd_adding_run(n: u32, alphabet: &str) -> Result<CommandOutput, CliError> {
    if !(1..=20).contains(&n) {
        return Err(CliError::InvalidArg(format!(
            "n must be between 1 and 20, got {n}"
        )));
    }
    let letters: Vec<String> = alphabet.chars().map(|c| c.to_string()).collect();
    if letters.is_empty() {
        return Err(CliError::InvalidArg("alphabet must be non-empty".into()));
    }
    let refs: Vec<&str> = letters.iter().map(|s| s.as_str()).collect();
    let z = ZMachine::new(&refs)?;
    let u = vec![0usize; n as usize];
    let history = z.full_count_history(&u)?;
    let predicted = ZMachine::predicted_full_count_len(n);
    let lo = 1u64 << n;
    let hi = 6 * lo;
    let length = history.len() as u64;

    // replay cycle by cycle, recording tape values and width
    let mut csv = String::from("cycle,k,length,binary_value\n");
    let mut word = z.start_word(&u)?;
    let width0 = word.len();
    let mut width_constant = true;
    let mut pos = 0usize;
    let cycles = (1u64 << n) - 1;
    let mut counts_ok = true;
    for c in 0..cycles {
        let k = c.trailing_ones() as usize;
        let cycle = z.canonical_cycle_history(&u, k)?;
        for sr in &cycle {
            word = z.machine().apply_rule(*sr, &word)?.word;
            width_constant &= word.len() == width0;
            pos += 1;
        }
        let value = z.binary_value(&z.tape_word(&word))?;
        counts_ok &= value == c + 1;
        let _ = writeln!(csv, "{},{},{},{}", c, k, cycle.len(), value);
    }
    for sr in &history[pos..] {
        word = z.machine().apply_rule(*sr, &word)?.word;
        width_constant &= word.len() == width0;
    }

    let mut report = String::new();
    let _ = writeln!(report, "adding machine Z(A), |A| = {}, n = {n}", letters.len());
    let _ = writeln!(report, "full count length  = {length}");
    let _ = writeln!(report, "formula value      = {predicted}");
    let _ = writeln!(
        report,
        "bounds [2^n, 6*2^n] = [{lo}, {hi}]: {}",
        if (lo..=hi).contains(&length) { "ok" } else { "VIOLATED" }
    );
    let _ = writeln!(
        report,
        "formula match: {}",
        if length == predicted { "ok" } else { "VIOLATED" }
    );
    let _ = writeln!(
        report,
        "constant width: {} (word length {width0})",
        if width_constant { "ok" } else { "VIOLATED" }
    );
    let _ = writeln!(
        report,
        "counter semantics: {}",
        if counts_ok { "ok" } else { "VIOLATED" }
    );
    if length != predicted || !(lo..=hi).contains(&length) || !width_constant || !counts_ok {
        return Err(CliError::Invariant(report));
    }
    Ok(CommandOutput {
        report,
        csv: Some(csv),
    })
}

/// Simulates the composed counter family up to n_max and emits the CSV of
/// measured lengths, widths, areas, perimeters and dispersions.
pub fn cmd_compose_run(n_max: u32) -> Result<CommandOutput, CliError> {
    if n_max > 16 {
        return Err(CliError::InvalidArg(format!(
            "n-max must be at most 16, got {n_max}"
        )));
    }
    let mut budget = StepBudget::new(DEFAULT_STEP_BUDGET);
    let family = compose_family(n_max, &mut budget)?;
    let records: Vec<_> = family.points.iter().map(|p| p.record.clone()).collect();
    let csv = records_to_csv(&records);
    let mut report = String::new();
    let _ = writeln!(report, "composed counter family, n = 1..{n_max}");
    for p in &family.points {
        let r = &p.record;
        let _ = writeln!(
            report,
            "n={:2}  l(n)={:>8}  width={:>3}  area={:>10}",
            r.n, r.l_n, r.width, r.area
        );
    }
    Ok(CommandOutput {
        report,
        csv: Some(csv),
    })
}

/// Dispersion report for a diagram file.
pub fn cmd_bcd(file: &str, content: &str, k_arg: Option<u32>) -> Result<CommandOutput, CliError> {
    let (bcd, k_file) = Bcd::parse(content).map_err(|source| CliError::BcdFile {
        file: file.to_owned(),
        source,
    })?;
    let k = k_arg.or(k_file).unwrap_or(1);
    if k == 0 {
        return Err(CliError::InvalidArg("K must be positive".into()));
    }
    let profile = WeightProfile::ramp(k);
    let one = WeightProfile::ramp(1);
    let d_alpha = bcd
        .dispersion(&profile)
        .map_err(|source| CliError::BcdFile {
            file: file.to_owned(),
            source,
        })?;
    let d_one = bcd.dispersion(&one).map_err(|source| CliError::BcdFile {
        file: file.to_owned(),
        source,
    })?;
    let r = bcd.t_count() as i64;
    let entropy_bound = Rational64::from_integer((r * r - r).max(0));

    let mut report = String::new();
    let _ = writeln!(report, "bcd file: {file}");
    let _ = writeln!(
        report,
        "chords: T={} Q={}; boundary length {}",
        bcd.t_count(),
        bcd.q_count(),
        bcd.boundary().len()
    );
    let _ = writeln!(report, "K = {k}");
    let _ = writeln!(report, "D_alpha = {}", format_rational(d_alpha));
    let _ = writeln!(report, "D_1     = {}", format_rational(d_one));
    let _ = writeln!(
        report,
        "bound r^2 - r = {}: {}",
        entropy_bound,
        if d_one <= entropy_bound { "ok" } else { "VIOLATED" }
    );
    let _ = writeln!(report, "per Q-chord:");
    for q in 0..bcd.q_count() {
        // chord dispersion: delete every other Q-chord's pairs by summing
        // only pairs on this chord
        let mut chord_total = Rational64::zero();
        let nodes = bcd
            .nodes_on(Chord::q(q), 0)
            .map_err(|source| CliError::BcdFile {
                file: file.to_owned(),
                source,
            })?;
        let mut bad = 0usize;
        for (i, &o1) in nodes.iter().enumerate() {
            for (j, &o2) in nodes.iter().enumerate() {
                if i == j {
                    continue;
                }
                if bcd.classify_pair(o1, o2).map_err(|source| CliError::BcdFile {
                    file: file.to_owned(),
                    source,
                })? == crate::bcd::PairClass::Bad
                {
                    bad += 1;
                    let (w1, w2) =
                        bcd.node_weight(o1, o2, &profile)
                            .map_err(|source| CliError::BcdFile {
                                file: file.to_owned(),
                                source,
                            })?;
                    chord_total += w1 * w2;
                }
            }
        }
        let _ = writeln!(
            report,
            "  {}: D_alpha = {} (bad pairs: {bad})",
            bcd.label(Chord {
                class: ChordClass::Q,
                index: q
            }),
            format_rational(chord_total)
        );
    }
    if d_one > entropy_bound {
        return Err(CliError::Invariant(report));
    }
    Ok(CommandOutput { report, csv: None })
}

/// Glued lower-bound diagram report at one family point.
pub fn cmd_dehn_lower(n: u32) -> Result<CommandOutput, CliError> {
    if !(1..=14).contains(&n) {
        return Err(CliError::InvalidArg(format!(
            "n must be between 1 and 14, got {n}"
        )));
    }
    let mut budget = StepBudget::new(DEFAULT_STEP_BUDGET);
    let point = dehn_lower_point(n, &mut budget)?;
    let mut report = String::new();
    let _ = writeln!(report, "glued lower-bound diagram, n = {n}");
    let _ = writeln!(report, "l(n)    = {}", point.l_n);
    let _ = writeln!(report, "copies  = {}", point.copies);
    let _ = writeln!(report, "d       = {}", point.glued.perimeter_comb);
    let _ = writeln!(report, "area    = {}", point.glued.area);
    let _ = writeln!(report, "dispersion = {}", format_rational(point.dispersion));
    match point.ratio {
        Some(ratio) => {
            let _ = writeln!(report, "area/(d^2 log2 d) = {ratio:.12}");
        }
        None => {
            let _ = writeln!(report, "area/(d^2 log2 d) = (degenerate point, omitted)");
        }
    }
    Ok(CommandOutput { report, csv: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MachineChoice {
    Z,
    Pump,
    PumpCompose,
}

impl std::str::FromStr for MachineChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "z" => Ok(MachineChoice::Z),
            "pump" => Ok(MachineChoice::Pump),
            "pump-compose" => Ok(MachineChoice::PumpCompose),
            other => Err(format!(
                "unknown machine '{other}', expected z, pump or pump-compose"
            )),
        }
    }
}

/// Emits the group presentation of one of the built-in machines.
pub fn cmd_presentation(which: MachineChoice) -> Result<CommandOutput, CliError> {
    let text = match which {
        MachineChoice::Z => presentation_to_text(&emit_presentation(ZMachine::new(&["a"])?.machine())),
        MachineChoice::Pump => presentation_to_text(&emit_presentation(&pump_machine())),
        MachineChoice::PumpCompose => {
            presentation_to_text(&emit_presentation(compose(&pump_machine())?.machine()))
        }
    };
    Ok(CommandOutput {
        report: text,
        csv: None,
    })
}

/// Parses a machine file, validates it, and verifies the canonical
/// round trip.
pub fn cmd_machine_check(file: &str, content: &str) -> Result<CommandOutput, CliError> {
    let machine = parse_machine(content).map_err(|source| CliError::MachineFile {
        file: file.to_owned(),
        source,
    })?;
    let canonical = emit_machine(&machine);
    let reparsed = parse_machine(&canonical).map_err(|source| CliError::MachineFile {
        file: file.to_owned(),
        source,
    })?;
    if reparsed != machine {
        return Err(CliError::Invariant(
            "canonical re-emission does not round trip".into(),
        ));
    }
    let profile = LengthProfile::new(machine.max_relation_length(), 1);
    let mut report = String::new();
    let _ = writeln!(report, "machine file: {file}");
    let _ = writeln!(report, "name: {}", machine.name);
    let _ = writeln!(report, "state parts: {}", machine.part_count());
    let mut q_letters = 0;
    for i in 1..=machine.part_count() {
        q_letters += machine.q_part(i).len();
    }
    let _ = writeln!(report, "state letters: {q_letters}");
    let _ = writeln!(report, "positive rules: {}", machine.rules().len());
    let _ = writeln!(report, "stop word: {}", machine.stop_word());
    let _ = writeln!(report, "max relation length L = {}", machine.max_relation_length());
    let _ = writeln!(report, "default delta = {}", profile.delta);
    let _ = writeln!(report, "round trip: ok");
    Ok(CommandOutput { report, csv: None })
}
