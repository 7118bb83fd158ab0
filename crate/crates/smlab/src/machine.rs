//! S-machine definition, admissibility checking, rule application with
//! exact cell accounting, and computations with length/width/area
//! statistics.
//!
//! A machine has N state parts Q_1..Q_N, tape parts Y_1..Y_{N-1} (with the
//! convention Y_0 = Y_N = empty; tape parts may overlap), and a set of
//! rules closed under inversion. Only positive rules are stored; a
//! [`SignedRule`] addresses either direction.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::words::{Letter, LetterClass, Sign, Symbol, ThetaFamily, Word};

#[derive(Debug, Error)]
pub enum MachineError {
    #[error("machine construction: {0}")]
    Construction(String),
    #[error("word not admissible at position {position}: {reason}")]
    NotAdmissible { position: usize, reason: String },
    #[error("rule {rule} not applicable at sector {sector}: {reason}")]
    NotApplicable {
        rule: String,
        sector: usize,
        reason: String,
    },
    #[error("history is not reduced at step {0}")]
    UnreducedHistory(usize),
    #[error("step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<MachineError>,
    },
    #[error("unknown rule name {0}")]
    UnknownRule(String),
}

/// One part of a rule: `left_before k right_before -> left_after k' right_after`,
/// flank words over the adjacent tape parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RulePart {
    pub left_before: Word,
    pub state_before: Letter,
    pub right_before: Word,
    pub left_after: Word,
    pub state_after: Letter,
    pub right_after: Word,
}

/// A positive rule: one [`RulePart`] per state part plus the commuting
/// tape subsets Y_i(rule) for i = 1..N-1. The inverse rule swaps the two
/// sides of every part and keeps the commuting sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub name: Symbol,
    pub family: ThetaFamily,
    pub parts: Vec<RulePart>,
    pub commuting: Vec<BTreeSet<Symbol>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RuleId(pub usize);

/// A rule reference with a direction.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SignedRule {
    pub id: RuleId,
    pub sign: Sign,
}

impl SignedRule {
    pub fn plus(id: RuleId) -> SignedRule {
        SignedRule {
            id,
            sign: Sign::Plus,
        }
    }

    pub fn minus(id: RuleId) -> SignedRule {
        SignedRule {
            id,
            sign: Sign::Minus,
        }
    }

    pub fn inv(self) -> SignedRule {
        SignedRule {
            id: self.id,
            sign: self.sign.flip(),
        }
    }

    pub fn is_inverse_of(self, other: SignedRule) -> bool {
        self.id == other.id && self.sign != other.sign
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SMachine {
    pub name: String,
    q_parts: Vec<Vec<Letter>>,
    tape_parts: Vec<Vec<Letter>>,
    tape_sets: Vec<BTreeSet<Symbol>>,
    rules: Vec<Rule>,
    stop_word: Word,
    letter_by_symbol: HashMap<Symbol, Letter>,
    rule_by_name: HashMap<Symbol, RuleId>,
}

/// One state-letter occurrence of an admissible word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub letter: Letter,
    /// 1-based state part index.
    pub part: usize,
    pub position: usize,
}

/// Sector between two consecutive state-letter occurrences. `tape` is the
/// 1-based tape part the sector ranges over, or `None` at the two ends
/// where the neighboring tape alphabet is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sector {
    pub word: Word,
    pub tape: Option<usize>,
}

/// Decomposition of an admissible word per the alternation lemma:
/// state occurrences separated by sector words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub occurrences: Vec<Occurrence>,
    pub sectors: Vec<Sector>,
}

/// Result of applying one rule: the rewritten word, the number of cells of
/// the height-1 band (one per state occurrence plus one per commuted tape
/// letter), and the tape letters deposited on the two sides of the band
/// outside the extreme state letters.
#[derive(Clone, Debug)]
pub struct RuleApplication {
    pub word: Word,
    pub cells: u64,
    pub left_emit: Word,
    pub right_emit: Word,
}

/// A replayed computation: start word, reduced history, all intermediate
/// words and per-step cell counts.
#[derive(Clone, Debug, PartialEq)]
pub struct Computation {
    pub start: Word,
    pub history: Vec<SignedRule>,
    pub words: Vec<Word>,
    pub step_cells: Vec<u64>,
}

impl Computation {
    pub fn length(&self) -> usize {
        self.history.len()
    }

    pub fn width(&self) -> usize {
        self.words.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn area(&self) -> u64 {
        self.step_cells.iter().sum()
    }

    pub fn end(&self) -> &Word {
        self.words.last().unwrap_or(&self.start)
    }
}

/// (length, width, area) of a computation.
pub fn computation_stats(c: &Computation) -> (usize, usize, u64) {
    (c.length(), c.width(), c.area())
}

impl SMachine {
    pub fn new(
        name: &str,
        q_parts: Vec<Vec<Letter>>,
        tape_parts: Vec<Vec<Letter>>,
        rules: Vec<Rule>,
        stop_word: Word,
    ) -> Result<SMachine, MachineError> {
        let n = q_parts.len();
        if n == 0 {
            return Err(MachineError::Construction("no state parts".into()));
        }
        if tape_parts.len() != n - 1 {
            return Err(MachineError::Construction(format!(
                "expected {} tape parts, got {}",
                n - 1,
                tape_parts.len()
            )));
        }
        let mut letter_by_symbol: HashMap<Symbol, Letter> = HashMap::new();
        for (i, part) in q_parts.iter().enumerate() {
            if part.is_empty() {
                return Err(MachineError::Construction(format!(
                    "state part {} is empty",
                    i + 1
                )));
            }
            for &l in part {
                if l.class != LetterClass::Q || l.part != (i + 1) as u32 || l.sign != Sign::Plus {
                    return Err(MachineError::Construction(format!(
                        "letter {l} does not belong in state part {}",
                        i + 1
                    )));
                }
                if letter_by_symbol.insert(l.symbol, l).is_some() {
                    return Err(MachineError::Construction(format!(
                        "duplicate state letter {l}"
                    )));
                }
            }
        }
        for (i, part) in tape_parts.iter().enumerate() {
            for &l in part {
                if l.class != LetterClass::A || l.sign != Sign::Plus {
                    return Err(MachineError::Construction(format!(
                        "letter {l} does not belong in tape part {}",
                        i + 1
                    )));
                }
                match letter_by_symbol.get(&l.symbol) {
                    None => {
                        letter_by_symbol.insert(l.symbol, l);
                    }
                    Some(existing) if existing.class == LetterClass::A => {}
                    Some(_) => {
                        return Err(MachineError::Construction(format!(
                            "tape letter {l} collides with a state letter"
                        )))
                    }
                }
            }
        }
        let tape_sets: Vec<BTreeSet<Symbol>> = tape_parts
            .iter()
            .map(|p| p.iter().map(|l| l.symbol).collect())
            .collect();

        let mut rule_by_name = HashMap::new();
        for (idx, rule) in rules.iter().enumerate() {
            if rule.parts.len() != n {
                return Err(MachineError::Construction(format!(
                    "rule {} has {} parts, machine has {}",
                    rule.name,
                    rule.parts.len(),
                    n
                )));
            }
            if rule.commuting.len() != n.saturating_sub(1) {
                return Err(MachineError::Construction(format!(
                    "rule {} has {} commuting sets, expected {}",
                    rule.name,
                    rule.commuting.len(),
                    n - 1
                )));
            }
            for (i, part) in rule.parts.iter().enumerate() {
                let part_idx = (i + 1) as u32;
                for state in [part.state_before, part.state_after] {
                    if state.class != LetterClass::Q
                        || state.part != part_idx
                        || !q_parts[i].contains(&state.positive())
                    {
                        return Err(MachineError::Construction(format!(
                            "rule {} part {}: state letter {state} not in Q_{}",
                            rule.name,
                            i + 1,
                            i + 1
                        )));
                    }
                }
                for (flank, tape_idx) in [
                    (&part.left_before, i),
                    (&part.left_after, i),
                    (&part.right_before, i + 1),
                    (&part.right_after, i + 1),
                ] {
                    // tape_idx is 1-based; 0 and N mean the empty alphabets
                    if tape_idx == 0 || tape_idx == n {
                        if !flank.is_empty() {
                            return Err(MachineError::Construction(format!(
                                "rule {} part {} has a flank over an empty tape alphabet",
                                rule.name,
                                i + 1
                            )));
                        }
                        continue;
                    }
                    for l in flank.iter() {
                        if l.class != LetterClass::A
                            || !tape_sets[tape_idx - 1].contains(&l.symbol)
                        {
                            return Err(MachineError::Construction(format!(
                                "rule {} part {}: flank letter {l} not in Y_{}",
                                rule.name,
                                i + 1,
                                tape_idx
                            )));
                        }
                    }
                }
            }
            for (i, set) in rule.commuting.iter().enumerate() {
                if !set.is_subset(&tape_sets[i]) {
                    return Err(MachineError::Construction(format!(
                        "rule {}: commuting set {} is not a subset of Y_{}",
                        rule.name,
                        i + 1,
                        i + 1
                    )));
                }
            }
            if rule_by_name.insert(rule.name, RuleId(idx)).is_some() {
                return Err(MachineError::Construction(format!(
                    "duplicate rule name {}",
                    rule.name
                )));
            }
        }
        let machine = SMachine {
            name: name.to_owned(),
            q_parts,
            tape_parts,
            tape_sets,
            rules,
            stop_word,
            letter_by_symbol,
            rule_by_name,
        };
        for l in machine.stop_word.iter() {
            if machine.letter_by_symbol.get(&l.symbol).map(|k| k.positive())
                != Some(l.positive())
            {
                return Err(MachineError::Construction(format!(
                    "stop word letter {l} is not declared"
                )));
            }
        }
        Ok(machine)
    }

    pub fn part_count(&self) -> usize {
        self.q_parts.len()
    }

    pub fn q_part(&self, i: usize) -> &[Letter] {
        &self.q_parts[i - 1]
    }

    pub fn tape_part(&self, i: usize) -> &[Letter] {
        &self.tape_parts[i - 1]
    }

    pub fn tape_set(&self, i: usize) -> &BTreeSet<Symbol> {
        &self.tape_sets[i - 1]
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, id: RuleId) -> &Rule {
        &self.rules[id.0]
    }

    pub fn stop_word(&self) -> &Word {
        &self.stop_word
    }

    pub fn rule_id(&self, name: &str) -> Result<RuleId, MachineError> {
        self.rule_by_name
            .get(&Symbol::intern(name))
            .copied()
            .ok_or_else(|| MachineError::UnknownRule(name.to_owned()))
    }

    pub fn signed_rule(&self, name: &str, sign: Sign) -> Result<SignedRule, MachineError> {
        Ok(SignedRule {
            id: self.rule_id(name)?,
            sign,
        })
    }

    /// Resolves a declared letter by symbol name (positive form).
    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.letter_by_symbol.get(&Symbol::intern(name)).copied()
    }

    pub fn rule_name(&self, sr: SignedRule) -> String {
        let base = self.rules[sr.id.0].name.to_string();
        match sr.sign {
            Sign::Plus => base,
            Sign::Minus => format!("{base}^-1"),
        }
    }

    /// The history word over rule-identifier letters.
    pub fn history_word(&self, history: &[SignedRule]) -> Word {
        history
            .iter()
            .map(|sr| {
                Letter::theta(self.rules[sr.id.0].family).with_sign(sr.sign)
            })
            .collect()
    }

    /// Maximal cyclic length of a defining relation: per rule part,
    /// |U| + |V| + 2 for the state relation; commuting relations have
    /// length 4 and never dominate.
    pub fn max_relation_length(&self) -> u32 {
        let mut best = 4;
        for rule in &self.rules {
            for part in &rule.parts {
                let u = part.left_before.len() + 1 + part.right_before.len();
                let v = part.left_after.len() + 1 + part.right_after.len();
                best = best.max((u + v + 2) as u32);
            }
        }
        best
    }

    fn succ_part(&self, j: usize) -> usize {
        j % self.part_count() + 1
    }

    fn pred_part(&self, j: usize) -> usize {
        if j == 1 {
            self.part_count()
        } else {
            j - 1
        }
    }

    /// Tape part of the sector to the right of an occurrence, `None` when
    /// that alphabet is structurally empty.
    fn sector_tape_after(&self, occ: Letter, part: usize) -> Option<usize> {
        let n = self.part_count();
        match occ.sign {
            Sign::Plus => {
                if part == n {
                    None
                } else {
                    Some(part)
                }
            }
            Sign::Minus => {
                if part == 1 {
                    None
                } else {
                    Some(part - 1)
                }
            }
        }
    }

    fn next_part_allowed(&self, occ: Letter, part: usize, next: Letter, next_part: usize) -> bool {
        match (occ.sign, next.sign) {
            (Sign::Plus, Sign::Plus) => next_part == self.succ_part(part),
            (Sign::Plus, Sign::Minus) => next_part == part,
            (Sign::Minus, Sign::Plus) => next_part == part,
            (Sign::Minus, Sign::Minus) => next_part == self.pred_part(part),
        }
    }

    /// Checks the alternation shape of an admissible word: begins and ends
    /// with state letters, sectors range over the single tape part dictated
    /// by the adjacent occurrence, and consecutive state parts are
    /// compatible. Returns the decomposition.
    pub fn check_admissible(&self, w: &Word) -> Result<Decomposition, MachineError> {
        if let Some(pos) = w
            .letters()
            .windows(2)
            .position(|p| p[0].is_inverse_of(p[1]))
        {
            return Err(MachineError::NotAdmissible {
                position: pos,
                reason: "word is not reduced".into(),
            });
        }
        let letters = w.letters();
        if letters.is_empty() {
            return Err(MachineError::NotAdmissible {
                position: 0,
                reason: "empty word".into(),
            });
        }
        let mut occurrences = Vec::new();
        let mut sectors = Vec::new();
        let mut i = 0usize;
        if letters[0].class != LetterClass::Q {
            return Err(MachineError::NotAdmissible {
                position: 0,
                reason: "does not start with a state letter".into(),
            });
        }
        while i < letters.len() {
            let occ = letters[i];
            if occ.class != LetterClass::Q {
                return Err(MachineError::NotAdmissible {
                    position: i,
                    reason: "expected a state letter".into(),
                });
            }
            let part = occ.part as usize;
            occurrences.push(Occurrence {
                letter: occ,
                part,
                position: i,
            });
            i += 1;
            let sector_start = i;
            while i < letters.len() && letters[i].class == LetterClass::A {
                i += 1;
            }
            let sector_word = Word::new(letters[sector_start..i].to_vec());
            if i == letters.len() {
                if !sector_word.is_empty() {
                    return Err(MachineError::NotAdmissible {
                        position: sector_start,
                        reason: "trailing tape letters after the last state letter".into(),
                    });
                }
                break;
            }
            let tape = self.sector_tape_after(occ, part);
            match tape {
                None => {
                    if !sector_word.is_empty() {
                        return Err(MachineError::NotAdmissible {
                            position: sector_start,
                            reason: "sector over an empty tape alphabet must be empty".into(),
                        });
                    }
                }
                Some(t) => {
                    for (k, l) in sector_word.iter().enumerate() {
                        if !self.tape_sets[t - 1].contains(&l.symbol) {
                            return Err(MachineError::NotAdmissible {
                                position: sector_start + k,
                                reason: format!("letter {l} is not in Y_{t}"),
                            });
                        }
                    }
                }
            }
            let next = letters[i];
            if next.class != LetterClass::Q {
                return Err(MachineError::NotAdmissible {
                    position: i,
                    reason: "expected a state letter".into(),
                });
            }
            let next_part = next.part as usize;
            if !self.next_part_allowed(occ, part, next, next_part) {
                return Err(MachineError::NotAdmissible {
                    position: i,
                    reason: format!(
                        "state letter {next} of part {next_part} cannot follow {occ}"
                    ),
                });
            }
            sectors.push(Sector {
                word: sector_word,
                tape,
            });
        }
        Ok(Decomposition {
            occurrences,
            sectors,
        })
    }

    /// Flank data of a signed rule at a given part and occurrence sign.
    /// Returns (left_consume, right_consume, left_produce, right_produce).
    fn flanks(&self, sr: SignedRule, part: usize, occ_sign: Sign) -> (Word, Word, Word, Word) {
        let rp = &self.rules[sr.id.0].parts[part - 1];
        let (lb, rb, la, ra) = match sr.sign {
            Sign::Plus => (&rp.left_before, &rp.right_before, &rp.left_after, &rp.right_after),
            Sign::Minus => (&rp.left_after, &rp.right_after, &rp.left_before, &rp.right_before),
        };
        match occ_sign {
            Sign::Plus => (lb.clone(), rb.clone(), la.clone(), ra.clone()),
            Sign::Minus => (rb.inverse(), lb.inverse(), ra.inverse(), la.inverse()),
        }
    }

    fn state_pair(&self, sr: SignedRule, part: usize) -> (Letter, Letter) {
        let rp = &self.rules[sr.id.0].parts[part - 1];
        match sr.sign {
            Sign::Plus => (rp.state_before, rp.state_after),
            Sign::Minus => (rp.state_after, rp.state_before),
        }
    }

    /// Applies a signed rule to an admissible word. Sector matching uses
    /// group-theoretic stripping: the free-reduced middle
    /// `m = R_i^-1 s L_{i+1}^-1` must lie in the rule's commuting alphabet
    /// of that tape part. Cell count is one per state occurrence plus one
    /// per letter of each middle.
    pub fn apply_rule(&self, sr: SignedRule, w: &Word) -> Result<RuleApplication, MachineError> {
        let decomp = self.check_admissible(w)?;
        let rule_name = self.rule_name(sr);
        let occ_count = decomp.occurrences.len();

        let mut per_occ = Vec::with_capacity(occ_count);
        for (idx, occ) in decomp.occurrences.iter().enumerate() {
            let (expect, produce) = self.state_pair(sr, occ.part);
            if occ.letter.positive() != expect {
                return Err(MachineError::NotApplicable {
                    rule: rule_name.clone(),
                    sector: idx,
                    reason: format!(
                        "state letter {} does not match rule part {}",
                        occ.letter, occ.part
                    ),
                });
            }
            let flanks = self.flanks(sr, occ.part, occ.letter.sign);
            per_occ.push((produce.with_sign(occ.letter.sign), flanks));
        }

        let commuting = &self.rules[sr.id.0].commuting;
        let mut out = Word::empty();
        let mut cells = occ_count as u64;
        out.push(per_occ[0].0);
        for (i, sector) in decomp.sectors.iter().enumerate() {
            let right_consume = &per_occ[i].1 .1;
            let left_consume_next = &per_occ[i + 1].1 .0;
            let middle = right_consume
                .inverse()
                .concat(&sector.word)
                .concat(&left_consume_next.inverse())
                .reduced();
            match sector.tape {
                None => {
                    if !middle.is_empty() {
                        return Err(MachineError::NotApplicable {
                            rule: rule_name.clone(),
                            sector: i,
                            reason: "nonempty middle across an empty tape alphabet".into(),
                        });
                    }
                }
                Some(t) => {
                    let allowed = &commuting[t - 1];
                    for l in middle.iter() {
                        if !allowed.contains(&l.symbol) {
                            return Err(MachineError::NotApplicable {
                                rule: rule_name.clone(),
                                sector: i,
                                reason: format!("letter {l} does not commute with the rule"),
                            });
                        }
                    }
                }
            }
            cells += middle.len() as u64;
            let right_produce = &per_occ[i].1 .3;
            let left_produce_next = &per_occ[i + 1].1 .2;
            let out_sector = right_produce
                .concat(&middle)
                .concat(left_produce_next)
                .reduced();
            for l in out_sector.iter() {
                out.push(*l);
            }
            out.push(per_occ[i + 1].0);
        }
        if !out.is_reduced() {
            // the top of the band must stay reduced; a collapse here means
            // the two neighboring state cells would cancel
            return Err(MachineError::NotApplicable {
                rule: rule_name,
                sector: 0,
                reason: "application would produce an unreduced word".into(),
            });
        }
        let left_emit = per_occ[0].1 .2.clone();
        let right_emit = per_occ[occ_count - 1].1 .3.clone();
        Ok(RuleApplication {
            word: out,
            cells,
            left_emit,
            right_emit,
        })
    }

    /// Checks that a history is reduced as a word in rule identifiers.
    pub fn check_history_reduced(history: &[SignedRule]) -> Result<(), MachineError> {
        for (i, pair) in history.windows(2).enumerate() {
            if pair[0].is_inverse_of(pair[1]) {
                return Err(MachineError::UnreducedHistory(i + 1));
            }
        }
        Ok(())
    }

    /// Folds `apply_rule` over a reduced history, recording every
    /// intermediate word and per-step cell count.
    pub fn run_history(&self, w: &Word, history: &[SignedRule]) -> Result<Computation, MachineError> {
        Self::check_history_reduced(history)?;
        let mut words = Vec::with_capacity(history.len() + 1);
        words.push(w.clone());
        let mut step_cells = Vec::with_capacity(history.len());
        for (step, sr) in history.iter().enumerate() {
            let app = self.apply_rule(*sr, words.last().unwrap()).map_err(|e| {
                MachineError::Step {
                    step,
                    source: Box::new(e),
                }
            })?;
            words.push(app.word);
            step_cells.push(app.cells);
        }
        Ok(Computation {
            start: w.clone(),
            history: history.to_vec(),
            words,
            step_cells,
        })
    }

    /// All signed rules applicable to `w`; with `length_preserving`, only
    /// those whose output has the same combinatorial length.
    pub fn enumerate_applicable(&self, w: &Word, length_preserving: bool) -> Vec<SignedRule> {
        let mut out = Vec::new();
        for idx in 0..self.rules.len() {
            for sign in [Sign::Plus, Sign::Minus] {
                let sr = SignedRule {
                    id: RuleId(idx),
                    sign,
                };
                if let Ok(app) = self.apply_rule(sr, w) {
                    if !length_preserving || app.word.len() == w.len() {
                        out.push(sr);
                    }
                }
            }
        }
        out
    }

    /// Loop-removal surgery: while some interior pair of equal words
    /// `words[i] = words[j]` (1 <= i < j < t) has a junction that stays
    /// reduced (`history[i-1] != history[j]^-1`), splice out the middle and
    /// revalidate. Boundary pairs are kept: trimming them would collapse
    /// legitimate round trips.
    pub fn remove_loops(&self, c: &Computation) -> Result<Computation, MachineError> {
        let mut current = c.clone();
        'outer: loop {
            let t = current.history.len();
            if t < 2 {
                return Ok(current);
            }
            for i in 1..t {
                for j in (i + 1..t).rev() {
                    if current.words[i] == current.words[j]
                        && !current.history[i - 1].is_inverse_of(current.history[j])
                    {
                        let mut history = current.history[..i].to_vec();
                        history.extend_from_slice(&current.history[j..]);
                        current = self.run_history(&current.start, &history)?;
                        continue 'outer;
                    }
                }
            }
            return Ok(current);
        }
    }
}

impl fmt::Display for SMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} state parts, {} positive rules)",
            self.name,
            self.q_parts.len(),
            self.rules.len()
        )
    }
}

/// Parses a whitespace-separated word against a machine's declared
/// letters; `^-1` marks inversion.
pub fn parse_word(m: &SMachine, text: &str) -> Result<Word, MachineError> {
    let mut letters = Vec::new();
    for token in text.split_whitespace() {
        let (name, sign) = match token.strip_suffix("^-1") {
            Some(base) => (base, Sign::Minus),
            None => (token, Sign::Plus),
        };
        let letter = m.letter(name).ok_or_else(|| MachineError::Construction(format!(
            "unknown letter {name}"
        )))?;
        letters.push(letter.with_sign(sign));
    }
    Ok(Word::new(letters))
}
