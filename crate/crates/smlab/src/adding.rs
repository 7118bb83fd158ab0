//! The adding machine Z(A): a three-part S-machine implementing a binary
//! counter over a base alphabet A. The state letter p sweeps the tape,
//! flipping letters between the index-0 and index-1 copies of A; one full
//! left-right cycle adds 1 to the binary value of the tape.

use std::collections::HashMap;

use thiserror::Error;

use crate::machine::{MachineError, Rule, RuleId, RulePart, SMachine, SignedRule};
use crate::words::{Letter, Sign, Symbol, ThetaFamily, Word};

#[derive(Debug, Error)]
pub enum AddingError {
    #[error("alphabet must be non-empty")]
    EmptyAlphabet,
    #[error("tape word must be non-empty")]
    EmptyWord,
    #[error("cycle offset {k} out of range for a {n}-letter tape")]
    KOutOfRange { k: usize, n: usize },
    #[error("letter index {0} outside the alphabet")]
    BadLetterIndex(usize),
    #[error("letter {0} is not a counter tape letter")]
    BadTapeLetter(String),
    #[error("negative letter {0} has no binary value")]
    NegativeLetter(String),
    #[error("tape too long for a 64-bit value")]
    TooLong,
    #[error("length-preserving successor not unique at sweep step {0}")]
    NotUnique(usize),
    #[error("full count ended at unexpected word {0}")]
    BadFinalWord(String),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// Rule kinds of Z(A), with the base-letter index where relevant. Used to
/// carry canonical histories between a machine and its embedded copies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZRuleKind {
    R1(usize),
    R12(usize),
    R2(usize),
    R3(usize),
    R21,
    R13,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ZSet {
    Full,
    Empty,
    ZeroOnly,
}

/// Machine-independent description of one positive Z rule: the p-part
/// states and flanks (as alphabet index, copy, sign) plus the two
/// commuting sets. The L- and R-parts are always identities.
pub(crate) struct ZRuleTemplate {
    pub kind: ZRuleKind,
    pub suffix: String,
    pub p_before: usize,
    pub p_after: usize,
    pub left_after: Vec<(usize, u8, Sign)>,
    pub right_after: Vec<(usize, u8, Sign)>,
    pub y1: ZSet,
    pub y2: ZSet,
}

/// The six rule families of the counter, instantiated per base letter:
/// r1 walks p(1) left flipping index-1 letters back to index 0, r12 flips
/// the first index-0 letter and turns p into p(2), r2 walks p(2) right,
/// r21 restarts the cycle at R, r13 ends the counting next to L, r3
/// returns p(3) to R.
pub(crate) fn z_rule_templates(names: &[String]) -> Vec<ZRuleTemplate> {
    let mut out = Vec::new();
    for (i, name) in names.iter().enumerate() {
        out.push(ZRuleTemplate {
            kind: ZRuleKind::R1(i),
            suffix: format!("r1({name})"),
            p_before: 1,
            p_after: 1,
            left_after: vec![(i, 1, Sign::Minus)],
            right_after: vec![(i, 0, Sign::Plus)],
            y1: ZSet::Full,
            y2: ZSet::ZeroOnly,
        });
        out.push(ZRuleTemplate {
            kind: ZRuleKind::R12(i),
            suffix: format!("r12({name})"),
            p_before: 1,
            p_after: 2,
            left_after: vec![(i, 0, Sign::Minus), (i, 1, Sign::Plus)],
            right_after: vec![],
            y1: ZSet::Full,
            y2: ZSet::ZeroOnly,
        });
        out.push(ZRuleTemplate {
            kind: ZRuleKind::R2(i),
            suffix: format!("r2({name})"),
            p_before: 2,
            p_after: 2,
            left_after: vec![(i, 0, Sign::Plus)],
            right_after: vec![(i, 0, Sign::Minus)],
            y1: ZSet::Full,
            y2: ZSet::ZeroOnly,
        });
        out.push(ZRuleTemplate {
            kind: ZRuleKind::R3(i),
            suffix: format!("r3({name})"),
            p_before: 3,
            p_after: 3,
            left_after: vec![(i, 0, Sign::Plus)],
            right_after: vec![(i, 0, Sign::Minus)],
            y1: ZSet::ZeroOnly,
            y2: ZSet::ZeroOnly,
        });
    }
    out.push(ZRuleTemplate {
        kind: ZRuleKind::R21,
        suffix: "r21".into(),
        p_before: 2,
        p_after: 1,
        left_after: vec![],
        right_after: vec![],
        y1: ZSet::Full,
        y2: ZSet::Empty,
    });
    out.push(ZRuleTemplate {
        kind: ZRuleKind::R13,
        suffix: "r13".into(),
        p_before: 1,
        p_after: 3,
        left_after: vec![],
        right_after: vec![],
        y1: ZSet::Empty,
        y2: ZSet::ZeroOnly,
    });
    out
}

pub(crate) fn resolve_flank(
    toks: &[(usize, u8, Sign)],
    zero: &[Letter],
    one: &[Letter],
) -> Word {
    toks.iter()
        .map(|&(i, copy, sign)| {
            let base = if copy == 0 { zero[i] } else { one[i] };
            base.with_sign(sign)
        })
        .collect()
}

pub struct ZMachine {
    machine: SMachine,
    names: Vec<String>,
    zero: Vec<Letter>,
    p: [Letter; 3],
    l_letter: Letter,
    r_letter: Letter,
    kind_by_rule: HashMap<RuleId, ZRuleKind>,
    rule_by_kind: HashMap<ZRuleKind, RuleId>,
    bit_of: HashMap<Symbol, (usize, u8)>,
}

impl ZMachine {
    pub fn new(alphabet: &[&str]) -> Result<ZMachine, AddingError> {
        if alphabet.is_empty() {
            return Err(AddingError::EmptyAlphabet);
        }
        let names: Vec<String> = alphabet.iter().map(|s| s.to_string()).collect();
        let zero: Vec<Letter> = names
            .iter()
            .map(|n| Letter::a(1, Symbol::intern(&format!("{n}0"))))
            .collect();
        let one: Vec<Letter> = names
            .iter()
            .map(|n| Letter::a(1, Symbol::intern(&format!("{n}1"))))
            .collect();
        let l_letter = Letter::q(1, Symbol::intern("L"));
        let p = [
            Letter::q(2, Symbol::intern("p(1)")),
            Letter::q(2, Symbol::intern("p(2)")),
            Letter::q(2, Symbol::intern("p(3)")),
        ];
        let r_letter = Letter::q(3, Symbol::intern("R"));

        let mut y1: Vec<Letter> = zero.clone();
        y1.extend(one.iter().copied());
        let y2: Vec<Letter> = zero.clone();

        let mut rules = Vec::new();
        let mut kind_by_rule = HashMap::new();
        let mut rule_by_kind = HashMap::new();
        for (idx, t) in z_rule_templates(&names).iter().enumerate() {
            let name = Symbol::intern(&t.suffix);
            let family = ThetaFamily::register(name);
            let identity = |letter: Letter| RulePart {
                left_before: Word::empty(),
                state_before: letter,
                right_before: Word::empty(),
                left_after: Word::empty(),
                state_after: letter,
                right_after: Word::empty(),
            };
            let p_part = RulePart {
                left_before: Word::empty(),
                state_before: p[t.p_before - 1],
                right_before: Word::empty(),
                left_after: resolve_flank(&t.left_after, &zero, &one),
                state_after: p[t.p_after - 1],
                right_after: resolve_flank(&t.right_after, &zero, &one),
            };
            let set = |spec: ZSet, full: &[Letter]| match spec {
                ZSet::Full => full.iter().map(|l| l.symbol).collect(),
                ZSet::Empty => Default::default(),
                ZSet::ZeroOnly => zero.iter().map(|l| l.symbol).collect(),
            };
            rules.push(Rule {
                name,
                family,
                parts: vec![identity(l_letter), p_part, identity(r_letter)],
                commuting: vec![set(t.y1, &y1), set(t.y2, &y2)],
            });
            kind_by_rule.insert(RuleId(idx), t.kind);
            rule_by_kind.insert(t.kind, RuleId(idx));
        }

        let stop = Word::new(vec![l_letter, p[2], r_letter]);
        let machine = SMachine::new(
            &format!("z({})", names.join(",")),
            vec![vec![l_letter], p.to_vec(), vec![r_letter]],
            vec![y1, y2],
            rules,
            stop,
        )?;
        let mut bit_of = HashMap::new();
        for (i, l) in zero.iter().enumerate() {
            bit_of.insert(l.symbol, (i, 0u8));
        }
        for (i, l) in one.iter().enumerate() {
            bit_of.insert(l.symbol, (i, 1u8));
        }
        Ok(ZMachine {
            machine,
            names,
            zero,
            p,
            l_letter,
            r_letter,
            kind_by_rule,
            rule_by_kind,
            bit_of,
        })
    }

    pub fn machine(&self) -> &SMachine {
        &self.machine
    }

    pub fn alphabet(&self) -> &[String] {
        &self.names
    }

    pub fn signed(&self, kind: ZRuleKind) -> SignedRule {
        SignedRule::plus(self.rule_by_kind[&kind])
    }

    pub fn kind_of(&self, id: RuleId) -> ZRuleKind {
        self.kind_by_rule[&id]
    }

    /// `L u p(1) R` with `u` the index-0 letters of the given base word.
    pub fn start_word(&self, u: &[usize]) -> Result<Word, AddingError> {
        let mut w = Word::single(self.l_letter);
        for &i in u {
            let l = *self.zero.get(i).ok_or(AddingError::BadLetterIndex(i))?;
            w.push(l);
        }
        w.push(self.p[0]);
        w.push(self.r_letter);
        Ok(w)
    }

    /// All tape letters of a word in order.
    pub fn tape_word(&self, w: &Word) -> Word {
        w.iter()
            .copied()
            .filter(|l| l.class == crate::words::LetterClass::A)
            .collect()
    }

    /// Reads a positive word over the indexed copies as a binary numeral,
    /// most significant digit first.
    pub fn binary_value(&self, u: &Word) -> Result<u64, AddingError> {
        if u.len() > 63 {
            return Err(AddingError::TooLong);
        }
        let mut value = 0u64;
        for l in u.iter() {
            if l.sign == Sign::Minus {
                return Err(AddingError::NegativeLetter(l.to_string()));
            }
            let (_, copy) = self
                .bit_of
                .get(&l.symbol)
                .ok_or_else(|| AddingError::BadTapeLetter(l.to_string()))?;
            value = (value << 1) | u64::from(*copy);
        }
        Ok(value)
    }

    /// History of one incrementing cycle on tape `u = b_1..b_n` whose last
    /// `k` letters currently carry index 1:
    /// `r1(b_n)..r1(b_{n-k+1}) r12(b_{n-k}) r2(b_{n-k+1})..r2(b_n) r21`,
    /// of length `2k + 2`.
    pub fn canonical_cycle_kinds(
        &self,
        u: &[usize],
        k: usize,
    ) -> Result<Vec<ZRuleKind>, AddingError> {
        let n = u.len();
        if n == 0 {
            return Err(AddingError::EmptyWord);
        }
        if k >= n {
            return Err(AddingError::KOutOfRange { k, n });
        }
        for &i in u {
            if i >= self.names.len() {
                return Err(AddingError::BadLetterIndex(i));
            }
        }
        let mut kinds = Vec::with_capacity(2 * k + 2);
        for t in 0..k {
            kinds.push(ZRuleKind::R1(u[n - 1 - t]));
        }
        kinds.push(ZRuleKind::R12(u[n - 1 - k]));
        for idx in (n - k)..n {
            kinds.push(ZRuleKind::R2(u[idx]));
        }
        kinds.push(ZRuleKind::R21);
        Ok(kinds)
    }

    pub fn canonical_cycle_history(
        &self,
        u: &[usize],
        k: usize,
    ) -> Result<Vec<SignedRule>, AddingError> {
        Ok(self
            .canonical_cycle_kinds(u, k)?
            .into_iter()
            .map(|kind| self.signed(kind))
            .collect())
    }

    /// Closed-form total length of the full count on an n-letter tape:
    /// sum over k of (2k+2) * 2^(n-k-1) incrementing cycles plus the final
    /// sweep of length 2n + 1.
    pub fn predicted_full_count_len(n: u32) -> u64 {
        let mut total = 0u64;
        for k in 0..n as u64 {
            total += (2 * k + 2) * (1u64 << (n as u64 - k - 1));
        }
        total + 2 * n as u64 + 1
    }

    /// The full counting history on tape `u`: all `2^n - 1` incrementing
    /// cycles followed by the final sweep. The sweep is found by greedy
    /// unique-successor stepping among length-preserving rules (the closed
    /// form elides its middle), then the whole history is checked against
    /// the closed length formula.
    pub fn full_count_kinds(&self, u: &[usize]) -> Result<Vec<ZRuleKind>, AddingError> {
        let n = u.len();
        if n == 0 {
            return Err(AddingError::EmptyWord);
        }
        let mut kinds: Vec<ZRuleKind> = Vec::new();
        let mut word = self.start_word(u)?;
        let cycles = (1u64 << n) - 1;
        for c in 0..cycles {
            let k = c.trailing_ones() as usize;
            for kind in self.canonical_cycle_kinds(u, k)? {
                let sr = self.signed(kind);
                word = self.machine.apply_rule(sr, &word)?.word;
                kinds.push(kind);
            }
        }
        // final sweep: r1 back to L, r13, r3 back to R
        let mut last = self.signed(ZRuleKind::R21);
        let mut steps = 0usize;
        loop {
            let letters = word.letters();
            let m = letters.len();
            if m >= 2 && letters[m - 2] == self.p[2] && letters[m - 1] == self.r_letter {
                break;
            }
            let cands: Vec<SignedRule> = self
                .machine
                .enumerate_applicable(&word, true)
                .into_iter()
                .filter(|sr| !sr.is_inverse_of(last))
                .collect();
            if cands.len() != 1 || cands[0].sign != Sign::Plus {
                return Err(AddingError::NotUnique(steps));
            }
            let sr = cands[0];
            word = self.machine.apply_rule(sr, &word)?.word;
            kinds.push(self.kind_of(sr.id));
            last = sr;
            steps += 1;
        }
        let expected_end = {
            let mut w = Word::single(self.l_letter);
            for &i in u {
                w.push(self.zero[i]);
            }
            w.push(self.p[2]);
            w.push(self.r_letter);
            w
        };
        if word != expected_end {
            return Err(AddingError::BadFinalWord(word.to_string()));
        }
        if kinds.len() as u64 != Self::predicted_full_count_len(n as u32) {
            return Err(AddingError::NotUnique(kinds.len()));
        }
        Ok(kinds)
    }

    pub fn full_count_history(&self, u: &[usize]) -> Result<Vec<SignedRule>, AddingError> {
        Ok(self
            .full_count_kinds(u)?
            .into_iter()
            .map(|kind| self.signed(kind))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::parse_word;

    fn z1() -> ZMachine {
        ZMachine::new(&["a"]).unwrap()
    }

    fn w(z: &ZMachine, text: &str) -> Word {
        parse_word(z.machine(), text).unwrap()
    }

    #[test]
    fn positive_rule_counts() {
        assert_eq!(z1().machine().rules().len(), 6);
        assert_eq!(ZMachine::new(&["a", "b"]).unwrap().machine().rules().len(), 10);
        assert!(ZMachine::new(&[]).is_err());
    }

    #[test]
    fn restart_rule_freezes_right_sector() {
        let z = z1();
        let r21 = z.signed(ZRuleKind::R21);
        let rule = z.machine().rule(r21.id);
        assert_eq!(rule.commuting[0].len(), 2, "Y1(r21) is all of Y1");
        assert!(rule.commuting[1].is_empty(), "Y2(r21) is empty");
        let r13 = z.signed(ZRuleKind::R13);
        let rule = z.machine().rule(r13.id);
        assert!(rule.commuting[0].is_empty(), "Y1(r13) is empty");
        assert_eq!(rule.commuting[1].len(), 1, "Y2(r13) is the index-0 copy");
    }

    #[test]
    fn binary_value_reads_msb_first() {
        let z = ZMachine::new(&["a", "b"]).unwrap();
        assert_eq!(z.binary_value(&w(&z, "a0 a0")).unwrap(), 0);
        assert_eq!(z.binary_value(&w(&z, "a0 a1")).unwrap(), 1);
        assert_eq!(z.binary_value(&w(&z, "a1 a1 a0")).unwrap(), 6);
        assert_eq!(z.binary_value(&w(&z, "a1 b0 b1")).unwrap(), 5);
        assert!(matches!(
            z.binary_value(&w(&z, "a0^-1")),
            Err(AddingError::NegativeLetter(_))
        ));
    }

    #[test]
    fn cycle_history_shapes() {
        let z = z1();
        let names = |h: &[SignedRule]| -> Vec<String> {
            h.iter().map(|sr| z.machine().rule_name(*sr)).collect()
        };
        let c0 = z.canonical_cycle_history(&[0], 0).unwrap();
        assert_eq!(names(&c0), vec!["r12(a)", "r21"]);
        let c1 = z.canonical_cycle_history(&[0, 0], 1).unwrap();
        assert_eq!(names(&c1), vec!["r1(a)", "r12(a)", "r2(a)", "r21"]);
        assert_eq!(c1.len(), 4, "cycle length is 2k + 2");
        assert!(matches!(
            z.canonical_cycle_history(&[0], 1),
            Err(AddingError::KOutOfRange { .. })
        ));
    }

    #[test]
    fn each_cycle_increments_the_counter() {
        let z = z1();
        let n = 4;
        let u = vec![0usize; n];
        let mut word = z.start_word(&u).unwrap();
        let total = (1u64 << n) - 1;
        for c in 0..total {
            let k = c.trailing_ones() as usize;
            for sr in z.canonical_cycle_history(&u, k).unwrap() {
                word = z.machine().apply_rule(sr, &word).unwrap().word;
            }
            let value = z.binary_value(&z.tape_word(&word)).unwrap();
            assert_eq!(value, c + 1, "after cycle {c}");
        }
    }

    #[test]
    fn full_count_trace_for_one_letter() {
        let z = z1();
        let h = z.full_count_history(&[0]).unwrap();
        assert_eq!(h.len(), 5);
        let c = z.machine().run_history(&z.start_word(&[0]).unwrap(), &h).unwrap();
        let expected = [
            "L a0 p(1) R",
            "L a1 p(2) R",
            "L a1 p(1) R",
            "L p(1) a0 R",
            "L p(3) a0 R",
            "L a0 p(3) R",
        ];
        let got: Vec<String> = c.words.iter().map(|w| w.to_string()).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn full_count_length_formula() {
        assert_eq!(ZMachine::predicted_full_count_len(1), 5);
        assert_eq!(ZMachine::predicted_full_count_len(2), 13);
        assert_eq!(ZMachine::predicted_full_count_len(3), 29);
        let z = z1();
        for n in 1..=6 {
            let u = vec![0usize; n];
            let h = z.full_count_history(&u).unwrap();
            assert_eq!(h.len() as u64, ZMachine::predicted_full_count_len(n as u32));
            let lo = 1u64 << n;
            let hi = 6 * lo;
            assert!((h.len() as u64) >= lo && (h.len() as u64) <= hi);
        }
    }

    #[test]
    fn full_count_keeps_word_length_constant() {
        let z = z1();
        let u = vec![0usize; 4];
        let h = z.full_count_history(&u).unwrap();
        let c = z.machine().run_history(&z.start_word(&u).unwrap(), &h).unwrap();
        let len = c.words[0].len();
        assert!(c.words.iter().all(|w| w.len() == len));
    }

    #[test]
    fn two_letter_alphabet_counts_too() {
        let z = ZMachine::new(&["a", "b"]).unwrap();
        let u = vec![0usize, 1usize, 0usize];
        let h = z.full_count_history(&u).unwrap();
        assert_eq!(h.len() as u64, ZMachine::predicted_full_count_len(3));
        let c = z.machine().run_history(&z.start_word(&u).unwrap(), &h).unwrap();
        let end = z.tape_word(c.end());
        assert_eq!(z.binary_value(&end).unwrap(), 0, "tape returns to index 0");
    }
}
