//! Trapezium statistics of computations, band-length bounds, side-by-side
//! gluing for the isoperimetric lower-bound experiment, and extraction of
//! the band-crossing chord diagram.
//!
//! Diagrams are never realized as 2-complexes: every quantity measured
//! here is a band-level count.

use num_rational::Rational64;
use thiserror::Error;

use crate::bcd::Bcd;
use crate::compose::ComposedRun;
use crate::machine::{Computation, MachineError, SMachine};
use crate::words::{modified_length, Letter, LengthProfile, LetterClass, Word, WordError};

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error("empty computation has no trapezium")]
    EmptyComputation,
    #[error("side labels differ; copies cannot be glued")]
    SidesDiffer,
    #[error("composed run carries tape letters on its sides")]
    SidesNotClean,
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Band-level statistics of the trapezium of a computation.
#[derive(Clone, Debug)]
pub struct TrapeziumStats {
    pub height: usize,
    pub base_len: usize,
    pub band_cells: Vec<u64>,
    /// tape letters on each band's output word
    pub band_top_a: Vec<usize>,
    pub area: u64,
    pub bottom: Word,
    pub top: Word,
    pub bottom_a: usize,
    pub top_a: usize,
    pub side_len_left: usize,
    pub side_len_right: usize,
    pub sides_equal: bool,
    pub bottom_mod: Rational64,
    pub top_mod: Rational64,
    pub side_mod_left: Rational64,
    pub side_mod_right: Rational64,
    pub perimeter_comb: u64,
    pub perimeter_mod: Rational64,
}

/// Exact statistics from a replayed computation. Side labels are the rule
/// letters crossed plus any tape letters emitted outside the extreme state
/// letters; when the base runs from the first to the last state part those
/// emissions are empty and the two sides coincide.
pub fn trapezium_stats(
    m: &SMachine,
    c: &Computation,
    profile: &LengthProfile,
) -> Result<TrapeziumStats, DiagramError> {
    if c.history.is_empty() {
        return Err(DiagramError::EmptyComputation);
    }
    let height = c.history.len();
    let base_len = c.start.count_class(LetterClass::Q);
    let mut band_cells = Vec::with_capacity(height);
    let mut band_top_a = Vec::with_capacity(height);
    let mut left_label = Word::empty();
    let mut right_label = Word::empty();
    for (step, sr) in c.history.iter().enumerate() {
        let app = m.apply_rule(*sr, &c.words[step])?;
        debug_assert_eq!(app.word, c.words[step + 1]);
        band_cells.push(app.cells);
        band_top_a.push(app.word.count_class(LetterClass::A));
        let theta = Letter::theta(m.rule(sr.id).family).with_sign(sr.sign);
        left_label.push(theta);
        for l in app.left_emit.iter() {
            left_label.push(*l);
        }
        right_label.push(theta);
        for l in app.right_emit.iter() {
            right_label.push(*l);
        }
    }
    let bottom = c.start.clone();
    let top = c.end().clone();
    let area: u64 = band_cells.iter().sum();
    let perimeter_comb =
        (bottom.len() + top.len() + left_label.len() + right_label.len()) as u64;
    let bottom_mod = modified_length(&bottom, profile)?;
    let top_mod = modified_length(&top, profile)?;
    let side_mod_left = modified_length(&left_label, profile)?;
    let side_mod_right = modified_length(&right_label, profile)?;
    Ok(TrapeziumStats {
        height,
        base_len,
        band_cells,
        band_top_a,
        area,
        bottom_a: bottom.count_class(LetterClass::A),
        top_a: top.count_class(LetterClass::A),
        bottom,
        top,
        side_len_left: left_label.len(),
        side_len_right: right_label.len(),
        sides_equal: left_label == right_label,
        bottom_mod,
        top_mod,
        side_mod_left,
        side_mod_right,
        perimeter_mod: bottom_mod + top_mod + side_mod_left + side_mod_right,
        perimeter_comb,
    })
}

/// Statistics from a streaming composed run. Requires clean sides (no
/// emitted tape letters), which holds whenever the base starts in the
/// first state part and ends in the last; both side labels are then the
/// rule-letter run of the history.
pub fn trapezium_from_run(
    run: &ComposedRun,
    profile: &LengthProfile,
) -> Result<TrapeziumStats, DiagramError> {
    if run.steps.is_empty() {
        return Err(DiagramError::EmptyComputation);
    }
    if run.side_a_left != 0 || run.side_a_right != 0 {
        return Err(DiagramError::SidesNotClean);
    }
    let height = run.steps.len();
    let base_len = run.start.count_class(LetterClass::Q);
    let band_cells: Vec<u64> = run.steps.iter().map(|s| s.cells).collect();
    let band_top_a: Vec<usize> = run.steps.iter().map(|s| s.out_a as usize).collect();
    let bottom = run.start.clone();
    let top = run.end.clone();
    let perimeter_comb = (bottom.len() + top.len() + 2 * height) as u64;
    // each rule letter is its own unit factor on the sides
    let side_mod = Rational64::from_integer(height as i64);
    let bottom_mod = modified_length(&bottom, profile)?;
    let top_mod = modified_length(&top, profile)?;
    Ok(TrapeziumStats {
        height,
        base_len,
        band_cells,
        band_top_a,
        area: run.area,
        bottom_a: bottom.count_class(LetterClass::A),
        top_a: top.count_class(LetterClass::A),
        bottom,
        top,
        side_len_left: height,
        side_len_right: height,
        sides_equal: true,
        bottom_mod,
        top_mod,
        side_mod_left: side_mod,
        side_mod_right: side_mod,
        perimeter_mod: bottom_mod + top_mod + side_mod + side_mod,
        perimeter_comb,
    })
}

/// One band out of bounds in a band-length check.
#[derive(Clone, Copy, Debug)]
pub struct BandViolation {
    pub band: usize,
    pub cells: u64,
    pub lower: i64,
    pub upper: i64,
}

/// Checks every band against the bracket
/// `l_a - (L-1) l_b <= cells <= l_a + (L+1) l_b` with `l_a` the tape
/// letters on the band's output word and `l_b` the base length.
pub fn check_band_bounds(t: &TrapeziumStats, max_relation_len: u32) -> Vec<BandViolation> {
    let l = max_relation_len as i64;
    let l_b = t.base_len as i64;
    let mut violations = Vec::new();
    for (band, (&cells, &top_a)) in t.band_cells.iter().zip(t.band_top_a.iter()).enumerate() {
        let l_a = top_a as i64;
        let lower = l_a - (l - 1) * l_b;
        let upper = l_a + (l + 1) * l_b;
        let c = cells as i64;
        if c < lower || c > upper {
            violations.push(BandViolation {
                band,
                cells,
                lower,
                upper,
            });
        }
    }
    violations
}

/// Fitted area ratio `area / (h * (|W|_a + |W'|_a + log2 h + 1))`; the
/// experiment harness asserts it stays within a fixed band across a
/// family.
pub fn check_area_bound(t: &TrapeziumStats) -> f64 {
    let h = t.height as f64;
    let denom = h * ((t.bottom_a + t.top_a) as f64 + h.log2() + 1.0);
    t.area as f64 / denom
}

/// Statistics of m copies of a trapezium glued side by side along their
/// equal side labels. Seam state bands are shared, so the glued diagram
/// has `m * base - (m - 1)` maximal state bands.
#[derive(Clone, Debug)]
pub struct GluedStats {
    pub copies: u64,
    pub height: usize,
    pub q_bands: u64,
    pub area: u64,
    pub perimeter_comb: u64,
    pub perimeter_mod: Rational64,
}

pub fn glue(t: &TrapeziumStats, copies: u64) -> Result<GluedStats, DiagramError> {
    if !t.sides_equal {
        return Err(DiagramError::SidesDiffer);
    }
    let m = copies.max(1);
    Ok(GluedStats {
        copies: m,
        height: t.height,
        q_bands: m * t.base_len as u64 - (m - 1),
        area: m * t.area,
        perimeter_comb: (t.side_len_left + t.side_len_right) as u64
            + m * (t.bottom.len() + t.top.len()) as u64,
        perimeter_mod: t.side_mod_left
            + t.side_mod_right
            + Rational64::from_integer(m as i64) * (t.bottom_mod + t.top_mod),
    })
}

/// The band-crossing chord diagram of a trapezium: every maximal rule band
/// crosses every maximal state band, a full grid.
pub fn bcd_of(t: &TrapeziumStats) -> Bcd {
    Bcd::grid(t.height, t.base_len)
}

/// The band-crossing diagram of a glued stack: seam state bands counted
/// once.
pub fn bcd_of_glued(g: &GluedStats) -> Bcd {
    Bcd::grid(g.height, g.q_bands as usize)
}
