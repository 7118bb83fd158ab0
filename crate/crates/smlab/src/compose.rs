//! Composition of an S-machine with the adding machine: a p-letter is
//! inserted between consecutive state letters, and every base rule first
//! arms the p-letters, then runs one full binary count in every sector,
//! then disarms them. Time slows down exponentially while width stays
//! linear.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::adding::{resolve_flank, z_rule_templates, AddingError, ZMachine, ZRuleKind};
use crate::machine::{
    Computation, MachineError, Rule, RuleApplication, RuleId, RulePart, SMachine, SignedRule,
};
use crate::words::{Letter, LetterClass, Sign, Symbol, ThetaFamily, Word};

#[derive(Debug, Error)]
pub enum ComposeError {
    #[error("base machine needs at least two state parts")]
    TooFewParts,
    #[error("base word not in k_1..k_N form: {0}")]
    BadBaseWord(String),
    #[error("sector over tape part {tape_part} is not a positive index-0 word (letter {letter})")]
    SectorNotCounterReady { tape_part: usize, letter: String },
    #[error("step budget exceeded")]
    BudgetExceeded,
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Adding(#[from] AddingError),
}

/// Guard against runaway exponential traces. Every composed rule
/// application spends one step; exhaustion is an error, never truncation.
#[derive(Clone, Debug)]
pub struct StepBudget {
    remaining: u64,
}

impl StepBudget {
    pub fn new(limit: u64) -> StepBudget {
        StepBudget { remaining: limit }
    }

    fn spend(&mut self) -> Result<(), ComposeError> {
        if self.remaining == 0 {
            return Err(ComposeError::BudgetExceeded);
        }
        self.remaining -= 1;
        Ok(())
    }
}

/// The two-part pumping machine: states k1, k2, one tape letter alpha, and
/// two rules eta0 = eta1 = [k1 -> k1, k2 -> alpha k2] under distinct
/// names. Pumping eta0 m times and unpumping with eta1^-1 m times is a
/// round trip through k1 alpha^m k2.
pub fn pump_machine() -> SMachine {
    let k1 = Letter::q(1, Symbol::intern("k1"));
    let k2 = Letter::q(2, Symbol::intern("k2"));
    let alpha = Letter::a(1, Symbol::intern("alpha"));
    let mut rules = Vec::new();
    for name in ["eta0", "eta1"] {
        let sym = Symbol::intern(name);
        rules.push(Rule {
            name: sym,
            family: ThetaFamily::register(sym),
            parts: vec![
                RulePart {
                    left_before: Word::empty(),
                    state_before: k1,
                    right_before: Word::empty(),
                    left_after: Word::empty(),
                    state_after: k1,
                    right_after: Word::empty(),
                },
                RulePart {
                    left_before: Word::empty(),
                    state_before: k2,
                    right_before: Word::empty(),
                    left_after: Word::single(alpha),
                    state_after: k2,
                    right_after: Word::empty(),
                },
            ],
            commuting: vec![[alpha.symbol].into_iter().collect()],
        });
    }
    SMachine::new(
        "pump",
        vec![vec![k1], vec![k2]],
        vec![vec![alpha]],
        rules,
        Word::new(vec![k1, k2]),
    )
    .expect("pump machine is well formed")
}

/// The round-trip computation of the pump machine: n pumping steps
/// followed by n unpumping steps, ending where it started.
pub fn pump_round_trip(pump: &SMachine, n: u32) -> Result<Computation, MachineError> {
    let eta0 = pump.signed_rule("eta0", Sign::Plus)?;
    let eta1 = pump.signed_rule("eta1", Sign::Minus)?;
    let mut history = Vec::with_capacity(2 * n as usize);
    history.extend(std::iter::repeat(eta0).take(n as usize));
    history.extend(std::iter::repeat(eta1).take(n as usize));
    pump.run_history(pump.stop_word(), &history)
}

pub struct ComposedMachine {
    machine: SMachine,
    base: SMachine,
    basic: Vec<RuleId>,
    zeta: Vec<RuleId>,
    zrules: Vec<Vec<HashMap<ZRuleKind, RuleId>>>,
    zscratch: Vec<Option<ZMachine>>,
    zero_index: Vec<HashMap<Symbol, usize>>,
    p_plain: Vec<Letter>,
    base_a_part: HashMap<Symbol, u32>,
    one_symbols: HashSet<Symbol>,
}

impl ComposedMachine {
    pub fn machine(&self) -> &SMachine {
        &self.machine
    }

    pub fn base(&self) -> &SMachine {
        &self.base
    }

    pub fn basic_rule(&self, base_rule: RuleId) -> RuleId {
        self.basic[base_rule.0]
    }

    pub fn transition_rule(&self, base_rule: RuleId) -> RuleId {
        self.zeta[base_rule.0]
    }
}

fn reletter(w: &Word, part: u32) -> Word {
    w.iter()
        .map(|l| Letter::a(part, l.symbol).with_sign(l.sign))
        .collect()
}

/// Builds the composed machine: state parts K_1 P_1 K_2 .. P_{N-1} K_N,
/// doubled tape parts, and for every positive base rule a basic rule, one
/// counter copy per sector, and a transition rule.
pub fn compose(s: &SMachine) -> Result<ComposedMachine, ComposeError> {
    let n = s.part_count();
    if n < 2 {
        return Err(ComposeError::TooFewParts);
    }
    let base_rules = s.rules().to_vec();

    // state letters
    let mut q_parts: Vec<Vec<Letter>> = vec![Vec::new(); 2 * n - 1];
    for j in 1..=n {
        q_parts[2 * j - 2] = s
            .q_part(j)
            .iter()
            .map(|l| Letter::q((2 * j - 1) as u32, l.symbol))
            .collect();
    }
    let mut p_plain = Vec::new();
    let mut p_state: HashMap<(usize, Symbol, usize), Letter> = HashMap::new();
    for i in 1..=n - 1 {
        let part = (2 * i) as u32;
        let plain = Letter::q(part, Symbol::intern(&format!("p{i}")));
        p_plain.push(plain);
        let mut letters = vec![plain];
        for rule in &base_rules {
            for j in 1..=3 {
                let sym = Symbol::intern(&format!("p{i}({},{j})", rule.name));
                let letter = Letter::q(part, sym);
                p_state.insert((i, rule.name, j), letter);
                letters.push(letter);
            }
        }
        q_parts[2 * i - 1] = letters;
    }

    // tape letters: odd parts carry both copies, even parts the index-0 copy
    let mut zero: Vec<Vec<Letter>> = Vec::new();
    let mut one: Vec<Vec<Letter>> = Vec::new();
    let mut tape_parts: Vec<Vec<Letter>> = vec![Vec::new(); 2 * n - 2];
    let mut one_symbols = HashSet::new();
    for i in 1..=n - 1 {
        let part = (2 * i - 1) as u32;
        let zero_i: Vec<Letter> = s
            .tape_part(i)
            .iter()
            .map(|l| Letter::a(part, l.symbol))
            .collect();
        let one_i: Vec<Letter> = s
            .tape_part(i)
            .iter()
            .map(|l| Letter::a(part, Symbol::intern(&format!("{}_1", l.symbol))))
            .collect();
        for l in &one_i {
            one_symbols.insert(l.symbol);
        }
        let mut both = zero_i.clone();
        both.extend(one_i.iter().copied());
        tape_parts[2 * i - 2] = both;
        tape_parts[2 * i - 1] = zero_i.clone();
        zero.push(zero_i);
        one.push(one_i);
    }

    let identity = |letter: Letter| RulePart {
        left_before: Word::empty(),
        state_before: letter,
        right_before: Word::empty(),
        left_after: Word::empty(),
        state_after: letter,
        right_after: Word::empty(),
    };

    let mut rules: Vec<Rule> = Vec::new();
    let mut basic = Vec::new();
    let mut zeta = Vec::new();
    let mut zrules: Vec<Vec<HashMap<ZRuleKind, RuleId>>> =
        vec![vec![HashMap::new(); base_rules.len()]; n - 1];

    for (b, base_rule) in base_rules.iter().enumerate() {
        // basic rule: the original k-parts keep their right flanks, the
        // left flank v_j moves to the p_j-part which becomes armed
        let name = Symbol::intern(&format!("bar({})", base_rule.name));
        let mut parts = Vec::with_capacity(2 * n - 1);
        let mut commuting = vec![std::collections::BTreeSet::new(); 2 * n - 2];
        for j in 1..=n {
            let bp = &base_rule.parts[j - 1];
            let kpart = (2 * j - 1) as u32;
            parts.push(RulePart {
                left_before: Word::empty(),
                state_before: Letter::q(kpart, bp.state_before.symbol),
                right_before: reletter(&bp.right_before, kpart),
                left_after: Word::empty(),
                state_after: Letter::q(kpart, bp.state_after.symbol),
                right_after: reletter(&bp.right_after, kpart),
            });
            if j < n {
                let vp = &base_rule.parts[j]; // part j+1 of the base rule
                let ppart = (2 * j - 1) as u32;
                parts.push(RulePart {
                    left_before: reletter(&vp.left_before, ppart),
                    state_before: p_plain[j - 1],
                    right_before: Word::empty(),
                    left_after: reletter(&vp.left_after, ppart),
                    state_after: p_state[&(j, base_rule.name, 1)],
                    right_after: Word::empty(),
                });
                commuting[2 * j - 2] = base_rule.commuting[j - 1].clone();
                // commuting[2j-1] stays empty: the p-part is l-marked
            }
        }
        basic.push(RuleId(rules.len()));
        rules.push(Rule {
            name,
            family: ThetaFamily::register(name),
            parts,
            commuting,
        });

        // counter copies: sector i runs Z(Y_i) renamed into this rule's
        // armed p-states while every other sector stays frozen
        for i in 1..=n - 1 {
            let names_i: Vec<String> = s
                .tape_part(i)
                .iter()
                .map(|l| l.symbol.to_string())
                .collect();
            for t in z_rule_templates(&names_i) {
                let name =
                    Symbol::intern(&format!("zbar({i},{},{})", base_rule.name, t.suffix));
                let mut parts = Vec::with_capacity(2 * n - 1);
                let mut commuting = vec![std::collections::BTreeSet::new(); 2 * n - 2];
                for j in 1..=n {
                    let bp = &base_rule.parts[j - 1];
                    let kprime = Letter::q((2 * j - 1) as u32, bp.state_after.symbol);
                    parts.push(identity(kprime));
                    if j < n {
                        let pp = if j < i {
                            identity(p_state[&(j, base_rule.name, 3)])
                        } else if j > i {
                            identity(p_state[&(j, base_rule.name, 1)])
                        } else {
                            RulePart {
                                left_before: Word::empty(),
                                state_before: p_state[&(i, base_rule.name, t.p_before)],
                                right_before: Word::empty(),
                                left_after: resolve_flank(
                                    &t.left_after,
                                    &zero[i - 1],
                                    &one[i - 1],
                                ),
                                state_after: p_state[&(i, base_rule.name, t.p_after)],
                                right_after: resolve_flank(
                                    &t.right_after,
                                    &zero[i - 1],
                                    &one[i - 1],
                                ),
                            }
                        };
                        parts.push(pp);
                        if j == i {
                            commuting[2 * j - 2] = match t.y1 {
                                crate::adding::ZSet::Full => tape_parts[2 * i - 2]
                                    .iter()
                                    .map(|l| l.symbol)
                                    .collect(),
                                crate::adding::ZSet::Empty => Default::default(),
                                crate::adding::ZSet::ZeroOnly => {
                                    zero[i - 1].iter().map(|l| l.symbol).collect()
                                }
                            };
                            commuting[2 * j - 1] = match t.y2 {
                                crate::adding::ZSet::Empty => Default::default(),
                                _ => zero[i - 1].iter().map(|l| l.symbol).collect(),
                            };
                        } else {
                            commuting[2 * j - 2] =
                                zero[j - 1].iter().map(|l| l.symbol).collect();
                            // commuting[2j-1] stays empty
                        }
                    }
                }
                zrules[i - 1][b].insert(t.kind, RuleId(rules.len()));
                rules.push(Rule {
                    name,
                    family: ThetaFamily::register(name),
                    parts,
                    commuting,
                });
            }
        }

        // transition rule: disarm all p-letters
        let name = Symbol::intern(&format!("zeta({})", base_rule.name));
        let mut parts = Vec::with_capacity(2 * n - 1);
        let mut commuting = vec![std::collections::BTreeSet::new(); 2 * n - 2];
        for j in 1..=n {
            let bp = &base_rule.parts[j - 1];
            parts.push(identity(Letter::q((2 * j - 1) as u32, bp.state_after.symbol)));
            if j < n {
                parts.push(RulePart {
                    left_before: Word::empty(),
                    state_before: p_state[&(j, base_rule.name, 3)],
                    right_before: Word::empty(),
                    left_after: Word::empty(),
                    state_after: p_plain[j - 1],
                    right_after: Word::empty(),
                });
                commuting[2 * j - 2] = zero[j - 1].iter().map(|l| l.symbol).collect();
            }
        }
        zeta.push(RuleId(rules.len()));
        rules.push(Rule {
            name,
            family: ThetaFamily::register(name),
            parts,
            commuting,
        });
    }

    let mut zscratch = Vec::new();
    let mut zero_index = Vec::new();
    for i in 1..=n - 1 {
        let names_i: Vec<String> = s
            .tape_part(i)
            .iter()
            .map(|l| l.symbol.to_string())
            .collect();
        if names_i.is_empty() {
            zscratch.push(None);
        } else {
            let refs: Vec<&str> = names_i.iter().map(|s| s.as_str()).collect();
            zscratch.push(Some(ZMachine::new(&refs)?));
        }
        zero_index.push(
            zero[i - 1]
                .iter()
                .enumerate()
                .map(|(k, l)| (l.symbol, k))
                .collect(),
        );
    }

    let mut base_a_part = HashMap::new();
    for i in 1..=n - 1 {
        for l in s.tape_part(i) {
            base_a_part.entry(l.symbol).or_insert(l.part);
        }
    }

    // the stop word is the base stop word with p-letters inserted
    let machine = SMachine::new(
        &format!("{}*z", s.name),
        q_parts,
        tape_parts,
        rules,
        Word::empty(),
    )?;
    let mut cm = ComposedMachine {
        machine,
        base: s.clone(),
        basic,
        zeta,
        zrules,
        zscratch,
        zero_index,
        p_plain,
        base_a_part,
        one_symbols,
    };
    let stop = composed_start_word(&cm, s.stop_word())?;
    let mut machine_parts_q = Vec::new();
    for j in 1..=cm.machine.part_count() {
        machine_parts_q.push(cm.machine.q_part(j).to_vec());
    }
    let mut machine_parts_y = Vec::new();
    for j in 1..=cm.machine.part_count() - 1 {
        machine_parts_y.push(cm.machine.tape_part(j).to_vec());
    }
    cm.machine = SMachine::new(
        &format!("{}*z", s.name),
        machine_parts_q,
        machine_parts_y,
        cm.machine.rules().to_vec(),
        stop,
    )?;
    Ok(cm)
}

/// Inserts a plain p-letter after each sector of a base admissible word of
/// full ascending base k_1 u_1 k_2 .. k_N.
pub fn composed_start_word(cm: &ComposedMachine, base_word: &Word) -> Result<Word, ComposeError> {
    let n = cm.base.part_count();
    let decomp = cm.base.check_admissible(base_word)?;
    if decomp.occurrences.len() != n {
        return Err(ComposeError::BadBaseWord(base_word.to_string()));
    }
    for (j, occ) in decomp.occurrences.iter().enumerate() {
        if occ.part != j + 1 || occ.letter.sign != Sign::Plus {
            return Err(ComposeError::BadBaseWord(base_word.to_string()));
        }
    }
    let mut out = Word::empty();
    for (j, occ) in decomp.occurrences.iter().enumerate() {
        out.push(Letter::q((2 * j + 1) as u32, occ.letter.symbol));
        if j < n - 1 {
            for l in decomp.sectors[j].word.iter() {
                out.push(Letter::a((2 * j + 1) as u32, l.symbol).with_sign(l.sign));
            }
            out.push(cm.p_plain[j]);
        }
    }
    Ok(out)
}

/// Erases p-letters and index-1 tape letters, mapping the rest back onto
/// the base machine's alphabet.
pub fn project_to_base(cm: &ComposedMachine, w: &Word) -> Word {
    let mut out = Word::empty();
    for l in w.iter() {
        match l.class {
            LetterClass::Q => {
                if l.part % 2 == 1 {
                    let base_part = (l.part + 1) / 2;
                    out.push(Letter::q(base_part, l.symbol).with_sign(l.sign));
                }
            }
            LetterClass::A => {
                if !cm.one_symbols.contains(&l.symbol) {
                    if let Some(&part) = cm.base_a_part.get(&l.symbol) {
                        out.push(Letter::a(part, l.symbol).with_sign(l.sign));
                    }
                }
            }
            LetterClass::Theta => {}
        }
    }
    out
}

#[derive(Clone, Copy, Debug)]
pub struct ComposedStepStat {
    pub cells: u64,
    pub out_len: u32,
    pub out_a: u32,
}

/// Streaming record of a composed run: per-step band data without the
/// intermediate words.
#[derive(Clone, Debug)]
pub struct ComposedRun {
    pub start: Word,
    pub end: Word,
    pub length: u64,
    pub width: usize,
    pub area: u64,
    pub steps: Vec<ComposedStepStat>,
    pub base_step_ends: Vec<u64>,
    pub side_a_left: u64,
    pub side_a_right: u64,
}

struct Driver<'a> {
    cm: &'a ComposedMachine,
    word: Word,
    run: ComposedRun,
    keep: bool,
    history: Vec<SignedRule>,
    words: Vec<Word>,
    step_cells: Vec<u64>,
}

impl<'a> Driver<'a> {
    fn apply(&mut self, sr: SignedRule, budget: &mut StepBudget) -> Result<(), ComposeError> {
        budget.spend()?;
        let app: RuleApplication = self.cm.machine.apply_rule(sr, &self.word)?;
        self.run.length += 1;
        self.run.area += app.cells;
        self.run.width = self.run.width.max(app.word.len());
        self.run.side_a_left += app.left_emit.len() as u64;
        self.run.side_a_right += app.right_emit.len() as u64;
        self.run.steps.push(ComposedStepStat {
            cells: app.cells,
            out_len: app.word.len() as u32,
            out_a: app.word.count_class(LetterClass::A) as u32,
        });
        if self.keep {
            self.history.push(sr);
            self.words.push(app.word.clone());
            self.step_cells.push(app.cells);
        }
        self.word = app.word;
        Ok(())
    }

    fn sector_indices(&self, i: usize) -> Result<Vec<usize>, ComposeError> {
        let decomp = self.cm.machine.check_admissible(&self.word)?;
        let target_part = 2 * i;
        let oi = decomp
            .occurrences
            .iter()
            .position(|o| o.part == target_part)
            .ok_or_else(|| ComposeError::BadBaseWord(self.word.to_string()))?;
        let content = &decomp.sectors[oi - 1].word;
        let mut u = Vec::with_capacity(content.len());
        for l in content.iter() {
            if l.sign != Sign::Plus {
                return Err(ComposeError::SectorNotCounterReady {
                    tape_part: 2 * i - 1,
                    letter: l.to_string(),
                });
            }
            match self.cm.zero_index[i - 1].get(&l.symbol) {
                Some(&idx) => u.push(idx),
                None => {
                    return Err(ComposeError::SectorNotCounterReady {
                        tape_part: 2 * i - 1,
                        letter: l.to_string(),
                    })
                }
            }
        }
        Ok(u)
    }

    fn z_phase(
        &mut self,
        i: usize,
        base_rule: usize,
        forward: bool,
        budget: &mut StepBudget,
    ) -> Result<(), ComposeError> {
        let u = self.sector_indices(i)?;
        let kinds: Vec<ZRuleKind> = if u.is_empty() {
            vec![ZRuleKind::R13]
        } else {
            self.cm.zscratch[i - 1]
                .as_ref()
                .expect("nonempty sector implies a counter copy")
                .full_count_kinds(&u)?
        };
        let map = &self.cm.zrules[i - 1][base_rule];
        if forward {
            for kind in kinds {
                self.apply(SignedRule::plus(map[&kind]), budget)?;
            }
        } else {
            for kind in kinds.into_iter().rev() {
                self.apply(SignedRule::minus(map[&kind]), budget)?;
            }
        }
        Ok(())
    }
}

fn drive(
    cm: &ComposedMachine,
    base: &Computation,
    budget: &mut StepBudget,
    keep: bool,
) -> Result<(ComposedRun, Option<Computation>), ComposeError> {
    let n = cm.base.part_count();
    let start = composed_start_word(cm, &base.start)?;
    let mut driver = Driver {
        cm,
        word: start.clone(),
        run: ComposedRun {
            start: start.clone(),
            end: start.clone(),
            length: 0,
            width: start.len(),
            area: 0,
            steps: Vec::new(),
            base_step_ends: Vec::new(),
            side_a_left: 0,
            side_a_right: 0,
        },
        keep,
        history: Vec::new(),
        words: vec![start.clone()],
        step_cells: Vec::new(),
    };
    for sr in &base.history {
        let b = sr.id.0;
        match sr.sign {
            Sign::Plus => {
                driver.apply(SignedRule::plus(cm.basic[b]), budget)?;
                for i in 1..n {
                    driver.z_phase(i, b, true, budget)?;
                }
                driver.apply(SignedRule::plus(cm.zeta[b]), budget)?;
            }
            Sign::Minus => {
                driver.apply(SignedRule::minus(cm.zeta[b]), budget)?;
                for i in (1..n).rev() {
                    driver.z_phase(i, b, false, budget)?;
                }
                driver.apply(SignedRule::minus(cm.basic[b]), budget)?;
            }
        }
        driver.run.base_step_ends.push(driver.run.length);
    }
    driver.run.end = driver.word.clone();
    let computation = if keep {
        Some(Computation {
            start,
            history: driver.history,
            words: driver.words,
            step_cells: driver.step_cells,
        })
    } else {
        None
    };
    Ok((driver.run, computation))
}

/// Simulates a base computation on the composed machine, keeping every
/// intermediate word.
pub fn simulate_composed(
    cm: &ComposedMachine,
    base: &Computation,
    budget: &mut StepBudget,
) -> Result<Computation, ComposeError> {
    let (_, c) = drive(cm, base, budget, true)?;
    Ok(c.expect("requested words"))
}

/// Simulates a base computation keeping only per-step band statistics;
/// suited to exponential runs.
pub fn simulate_composed_run(
    cm: &ComposedMachine,
    base: &Computation,
    budget: &mut StepBudget,
) -> Result<ComposedRun, ComposeError> {
    let (run, _) = drive(cm, base, budget, false)?;
    Ok(run)
}
