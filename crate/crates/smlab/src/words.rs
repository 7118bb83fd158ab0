//! Typed letters, free-group words, reduction, projections, and the
//! modified length function.
//!
//! Letters come in three classes: state letters (`Q`), tape letters (`A`)
//! and rule letters (`Theta`). Words are finite sequences of signed letters
//! with free reduction as the only normalization.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num_rational::Rational64;
use num_traits::Zero;
use once_cell::sync::Lazy;
use thiserror::Error;

/// Interned letter symbol. Interning keeps `Letter` copyable and makes
/// words over exponential-length computations cheap to store.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u32);

struct Interner {
    names: Vec<&'static str>,
    ids: HashMap<&'static str, u32>,
}

static INTERNER: Lazy<RwLock<Interner>> = Lazy::new(|| {
    RwLock::new(Interner {
        names: Vec::new(),
        ids: HashMap::new(),
    })
});

impl Symbol {
    pub fn intern(name: &str) -> Symbol {
        {
            let interner = INTERNER.read().unwrap();
            if let Some(&id) = interner.ids.get(name) {
                return Symbol(id);
            }
        }
        let mut interner = INTERNER.write().unwrap();
        if let Some(&id) = interner.ids.get(name) {
            return Symbol(id);
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        let id = interner.names.len() as u32;
        interner.names.push(leaked);
        interner.ids.insert(leaked, id);
        Symbol(id)
    }

    pub fn as_str(self) -> &'static str {
        INTERNER.read().unwrap().names[self.0 as usize]
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Identifier of a rule family (one positive rule together with its
/// inverse). Used as the `part` of `Theta`-class letters; the registry
/// remembers the canonical symbol so histories can be projected.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ThetaFamily(u32);

struct ThetaRegistry {
    names: Vec<Symbol>,
    ids: HashMap<Symbol, u32>,
}

static THETA_FAMILIES: Lazy<RwLock<ThetaRegistry>> = Lazy::new(|| {
    RwLock::new(ThetaRegistry {
        names: Vec::new(),
        ids: HashMap::new(),
    })
});

impl ThetaFamily {
    /// Interned by name: re-registering the same rule name yields the same
    /// family, so parsed machines compare equal to built ones.
    pub fn register(name: Symbol) -> ThetaFamily {
        {
            let reg = THETA_FAMILIES.read().unwrap();
            if let Some(&id) = reg.ids.get(&name) {
                return ThetaFamily(id);
            }
        }
        let mut reg = THETA_FAMILIES.write().unwrap();
        if let Some(&id) = reg.ids.get(&name) {
            return ThetaFamily(id);
        }
        let id = reg.names.len() as u32;
        reg.names.push(name);
        reg.ids.insert(name, id);
        ThetaFamily(id)
    }

    pub fn name(self) -> Symbol {
        THETA_FAMILIES.read().unwrap().names[self.0 as usize]
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum LetterClass {
    Q,
    A,
    Theta,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Sign::Plus
    }
}

/// A signed letter. `part` is the 1-based part index for `Q` and `A`
/// letters and the rule-family index for `Theta` letters. Tape parts of a
/// machine may overlap, so for `A`-letters `part` records the first part
/// the letter was declared in.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub class: LetterClass,
    pub part: u32,
    pub symbol: Symbol,
    pub sign: Sign,
}

impl Letter {
    pub fn q(part: u32, symbol: Symbol) -> Letter {
        Letter {
            class: LetterClass::Q,
            part,
            symbol,
            sign: Sign::Plus,
        }
    }

    pub fn a(part: u32, symbol: Symbol) -> Letter {
        Letter {
            class: LetterClass::A,
            part,
            symbol,
            sign: Sign::Plus,
        }
    }

    /// The canonical rule-identifier letter of a family.
    pub fn theta(family: ThetaFamily) -> Letter {
        Letter {
            class: LetterClass::Theta,
            part: family.index(),
            symbol: family.name(),
            sign: Sign::Plus,
        }
    }

    /// Brother number `index` (1-based) of a rule family, named
    /// `<rule>.<index>`.
    pub fn theta_brother(family: ThetaFamily, index: u32) -> Letter {
        let name = format!("{}.{}", family.name(), index);
        Letter {
            class: LetterClass::Theta,
            part: family.index(),
            symbol: Symbol::intern(&name),
            sign: Sign::Plus,
        }
    }

    pub fn inv(self) -> Letter {
        Letter {
            sign: self.sign.flip(),
            ..self
        }
    }

    pub fn with_sign(self, sign: Sign) -> Letter {
        Letter { sign, ..self }
    }

    pub fn positive(self) -> Letter {
        self.with_sign(Sign::Plus)
    }

    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.symbol == other.symbol && self.class == other.class && self.sign != other.sign
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol)?;
        if self.sign == Sign::Minus {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A word over signed letters. Construction does not normalize; reduced
/// words are obtained with [`Word::reduced`] and tested with
/// [`Word::is_reduced`].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn single(letter: Letter) -> Word {
        Word(vec![letter])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Letter> {
        self.0.iter()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    /// Reverses the word and flips every sign.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// The unique freely reduced form, computed by a single stack pass.
    pub fn reduced(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &letter in &self.0 {
            match stack.last() {
                Some(&top) if top.is_inverse_of(letter) => {
                    stack.pop();
                }
                _ => stack.push(letter),
            }
        }
        Word(stack)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].is_inverse_of(w[1]))
    }

    pub fn count_class(&self, class: LetterClass) -> usize {
        self.0.iter().filter(|l| l.class == class).count()
    }

    /// Keeps only the `Q`-class letters, signs included.
    pub fn project_base(&self) -> Word {
        Word(
            self.0
                .iter()
                .copied()
                .filter(|l| l.class == LetterClass::Q)
                .collect(),
        )
    }

    /// Keeps only the `Theta`-class letters, mapping every brother to the
    /// rule identifier of its family, signs included. Projection happens
    /// before any reduction.
    pub fn project_history(&self) -> Word {
        Word(
            self.0
                .iter()
                .filter(|l| l.class == LetterClass::Theta)
                .map(|l| Letter::theta(ThetaFamily(l.part)).with_sign(l.sign))
                .collect(),
        )
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Word {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, letter) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", letter)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("word is not freely reduced at position {0}")]
    NotReduced(usize),
    #[error("invalid length profile: 2 - 4L*delta - L*K*delta must exceed delta")]
    BadProfile,
}

/// Parameters of the modified length function: `max_relation_len` is the
/// maximal defining-relation length `L`, `delta` the tape-letter weight,
/// and `k` the rim-base bound used to constrain `delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthProfile {
    pub max_relation_len: u32,
    pub delta: Rational64,
    pub k: u32,
}

impl LengthProfile {
    /// Profile with the smallest simple `delta = 1/(4L + LK + 1)`, which
    /// strictly satisfies `2 - 4L*delta - L*K*delta > delta`.
    pub fn new(max_relation_len: u32, k: u32) -> LengthProfile {
        let l = max_relation_len as i64;
        let delta = Rational64::new(1, 4 * l + l * k as i64 + 1);
        let profile = LengthProfile {
            max_relation_len,
            delta,
            k,
        };
        debug_assert!(profile.check().is_ok());
        profile
    }

    pub fn with_delta(
        max_relation_len: u32,
        k: u32,
        delta: Rational64,
    ) -> Result<LengthProfile, WordError> {
        let profile = LengthProfile {
            max_relation_len,
            delta,
            k,
        };
        profile.check()?;
        Ok(profile)
    }

    pub fn check(&self) -> Result<(), WordError> {
        let l = Rational64::from_integer(self.max_relation_len as i64);
        let k = Rational64::from_integer(self.k as i64);
        let two = Rational64::from_integer(2);
        let four = Rational64::from_integer(4);
        if self.delta <= Rational64::zero() {
            return Err(WordError::BadProfile);
        }
        if two - four * l * self.delta - l * k * self.delta > self.delta {
            Ok(())
        } else {
            Err(WordError::BadProfile)
        }
    }
}

/// Modified length of a reduced word: the minimum over decompositions into
/// single letters and syllables (contiguous subwords of combinatorial
/// length at most `L` containing exactly one rule letter and no state
/// letters) of 1 per state letter, 1 per syllable, and `delta` per
/// unabsorbed tape letter. Dynamic programming over positions with exact
/// rational arithmetic.
pub fn modified_length(w: &Word, profile: &LengthProfile) -> Result<Rational64, WordError> {
    if let Some(pos) = w
        .letters()
        .windows(2)
        .position(|pair| pair[0].is_inverse_of(pair[1]))
    {
        return Err(WordError::NotReduced(pos));
    }
    let letters = w.letters();
    let n = letters.len();
    let l = profile.max_relation_len as usize;

    // prefix counts of theta- and q-letters for O(1) syllable tests
    let mut theta_prefix = vec![0usize; n + 1];
    let mut q_prefix = vec![0usize; n + 1];
    for (i, letter) in letters.iter().enumerate() {
        theta_prefix[i + 1] = theta_prefix[i] + usize::from(letter.class == LetterClass::Theta);
        q_prefix[i + 1] = q_prefix[i] + usize::from(letter.class == LetterClass::Q);
    }

    let one = Rational64::from_integer(1);
    let mut dp: Vec<Rational64> = Vec::with_capacity(n + 1);
    dp.push(Rational64::zero());
    for i in 1..=n {
        let letter_cost = match letters[i - 1].class {
            LetterClass::Q | LetterClass::Theta => one,
            LetterClass::A => profile.delta,
        };
        let mut best = dp[i - 1] + letter_cost;
        let lo = i.saturating_sub(l);
        for j in lo..i.saturating_sub(1).max(lo) + 1 {
            if j >= i {
                break;
            }
            let thetas = theta_prefix[i] - theta_prefix[j];
            let qs = q_prefix[i] - q_prefix[j];
            if thetas == 1 && qs == 0 {
                let cand = dp[j] + one;
                if cand < best {
                    best = cand;
                }
            }
        }
        dp.push(best);
    }
    Ok(dp[n])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> Symbol {
        Symbol::intern(s)
    }

    fn a(name: &str) -> Letter {
        Letter::a(1, sym(name))
    }

    fn q(name: &str) -> Letter {
        Letter::q(1, sym(name))
    }

    fn word(letters: &[Letter]) -> Word {
        Word::new(letters.to_vec())
    }

    /// Quadratic oracle: repeatedly remove the first adjacent inverse pair.
    fn reduce_oracle(w: &Word) -> Word {
        let mut letters = w.letters().to_vec();
        loop {
            let mut removed = false;
            for i in 0..letters.len().saturating_sub(1) {
                if letters[i].is_inverse_of(letters[i + 1]) {
                    letters.drain(i..i + 2);
                    removed = true;
                    break;
                }
            }
            if !removed {
                return Word::new(letters);
            }
        }
    }

    fn random_word(seed: u64, len: usize) -> Word {
        // tiny deterministic generator; plenty for word-level tests
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let letters = ["x", "y", "z"];
        (0..len)
            .map(|_| {
                let l = a(letters[(next() % 3) as usize]);
                if next() % 2 == 0 {
                    l
                } else {
                    l.inv()
                }
            })
            .collect()
    }

    #[test]
    fn reduce_cancels_adjacent_inverses() {
        let x = a("x");
        assert_eq!(word(&[x, x.inv()]).reduced(), Word::empty());
        assert_eq!(Word::empty().reduced(), Word::empty());
        let b = a("y");
        assert_eq!(
            word(&[x, b, b.inv(), x]).reduced(),
            word(&[x, x]),
            "inner pair cancels"
        );
    }

    #[test]
    fn reduce_matches_oracle_on_random_words() {
        for seed in 0..200 {
            let w = random_word(seed, (seed % 17) as usize);
            assert_eq!(w.reduced(), reduce_oracle(&w), "word {w}");
        }
    }

    #[test]
    fn reduce_is_idempotent() {
        for seed in 0..100 {
            let w = random_word(seed, 12);
            let r = w.reduced();
            assert_eq!(r.reduced(), r);
        }
    }

    #[test]
    fn invert_basics() {
        assert_eq!(Word::empty().inverse(), Word::empty());
        let x = a("x");
        assert_eq!(word(&[x]).inverse(), word(&[x.inv()]));
        for seed in 0..100 {
            let w = random_word(seed, 9);
            assert_eq!(w.inverse().inverse(), w);
            assert_eq!(w.concat(&w.inverse()).reduced(), Word::empty());
        }
    }

    #[test]
    fn base_projection_keeps_state_letters() {
        let k1 = Letter::q(1, sym("k1"));
        let k2 = Letter::q(2, sym("k2"));
        let t = a("a");
        assert_eq!(word(&[k1, t, k2]).project_base(), word(&[k1, k2]));
        assert_eq!(word(&[k1.inv(), t, k1]).project_base(), word(&[k1.inv(), k1]));
        let fam = ThetaFamily::register(sym("r_proj_base"));
        let th = Letter::theta(fam);
        assert_eq!(word(&[t, th, t.inv()]).project_base(), Word::empty());
    }

    #[test]
    fn history_projection_maps_brothers_to_rule_ids() {
        let fam_r = ThetaFamily::register(sym("r_hist"));
        let fam_s = ThetaFamily::register(sym("s_hist"));
        let th1 = Letter::theta_brother(fam_r, 1);
        let th2 = Letter::theta_brother(fam_s, 2);
        let t = a("a");
        let projected = word(&[th1, t, th2.inv()]).project_history();
        assert_eq!(
            projected,
            word(&[Letter::theta(fam_r), Letter::theta(fam_s).inv()])
        );
        assert_eq!(word(&[t, t.inv()]).project_history(), Word::empty());
        // projection happens before reduction
        let unreduced = word(&[th1, th1.inv()]).project_history();
        assert_eq!(
            unreduced,
            word(&[Letter::theta(fam_r), Letter::theta(fam_r).inv()])
        );
        assert!(!unreduced.is_reduced());
    }

    #[test]
    fn profile_default_delta_satisfies_constraint() {
        for l in [3, 5, 6, 10] {
            for k in [1, 2, 7] {
                let p = LengthProfile::new(l, k);
                assert!(p.check().is_ok());
                assert_eq!(
                    p.delta,
                    Rational64::new(1, 4 * l as i64 + (l * k) as i64 + 1)
                );
            }
        }
        assert!(
            LengthProfile::with_delta(5, 1, Rational64::new(1, 2)).is_err(),
            "large delta violates the constraint"
        );
    }

    fn theta_letter() -> Letter {
        static FAM: Lazy<ThetaFamily> =
            Lazy::new(|| ThetaFamily::register(Symbol::intern("th_len")));
        Letter::theta(*FAM)
    }

    /// Exponential oracle enumerating every decomposition.
    fn modified_length_oracle(w: &Word, p: &LengthProfile) -> Rational64 {
        fn go(letters: &[Letter], p: &LengthProfile) -> Rational64 {
            if letters.is_empty() {
                return Rational64::zero();
            }
            let one = Rational64::from_integer(1);
            let first_cost = match letters[0].class {
                LetterClass::Q | LetterClass::Theta => one,
                LetterClass::A => p.delta,
            };
            let mut best = first_cost + go(&letters[1..], p);
            for end in 2..=letters.len().min(p.max_relation_len as usize) {
                let piece = &letters[..end];
                let thetas = piece
                    .iter()
                    .filter(|l| l.class == LetterClass::Theta)
                    .count();
                let qs = piece.iter().filter(|l| l.class == LetterClass::Q).count();
                if thetas == 1 && qs == 0 {
                    let cand = one + go(&letters[end..], p);
                    if cand < best {
                        best = cand;
                    }
                }
            }
            best
        }
        go(w.letters(), p)
    }

    #[test]
    fn modified_length_of_single_letters() {
        let p = LengthProfile::new(4, 1);
        assert_eq!(
            modified_length(&word(&[q("k")]), &p).unwrap(),
            Rational64::from_integer(1)
        );
        assert_eq!(modified_length(&word(&[a("x")]), &p).unwrap(), p.delta);
        let th = theta_letter();
        let syllable = word(&[th, a("x"), a("x")]);
        assert_eq!(
            modified_length(&syllable, &p).unwrap(),
            Rational64::from_integer(1),
            "a syllable of combinatorial length 3 has length 1"
        );
    }

    #[test]
    fn modified_length_rejects_unreduced() {
        let p = LengthProfile::new(4, 1);
        let x = a("x");
        assert_eq!(
            modified_length(&word(&[x, x.inv()]), &p),
            Err(WordError::NotReduced(0))
        );
    }

    #[test]
    fn modified_length_matches_oracle() {
        let p = LengthProfile::new(3, 1);
        let th = theta_letter();
        let pool = [a("x"), a("y").inv(), th, q("k"), a("x").inv(), th.inv()];
        // all words of length <= 5 over the pool, skipping unreduced ones
        let mut stack: Vec<Vec<Letter>> = vec![Vec::new()];
        while let Some(cur) = stack.pop() {
            let w = Word::new(cur.clone());
            if w.is_reduced() {
                assert_eq!(
                    modified_length(&w, &p).unwrap(),
                    modified_length_oracle(&w, &p),
                    "word {w}"
                );
            }
            if cur.len() < 5 {
                for &l in &pool {
                    let mut next = cur.clone();
                    next.push(l);
                    stack.push(next);
                }
            }
        }
    }

    #[test]
    fn modified_length_of_state_word_is_combinatorial() {
        let p = LengthProfile::new(6, 1);
        let w = word(&[q("k1"), q("k2"), q("k3")]);
        assert_eq!(
            modified_length(&w, &p).unwrap(),
            Rational64::from_integer(3)
        );
    }

    #[test]
    fn modified_length_lower_bound_without_state_letters() {
        // |s| >= max(c, c + (d - L*c) * delta) for words with c rule letters,
        // d tape letters and no state letters
        let p = LengthProfile::new(3, 1);
        let th = theta_letter();
        let pool = [a("x"), a("y"), th, a("x").inv(), th.inv()];
        let mut stack: Vec<Vec<Letter>> = vec![Vec::new()];
        while let Some(cur) = stack.pop() {
            let w = Word::new(cur.clone());
            if w.is_reduced() {
                let c = w.count_class(LetterClass::Theta) as i64;
                let d = w.count_class(LetterClass::A) as i64;
                let len = modified_length(&w, &p).unwrap();
                let bound2 = Rational64::from_integer(c)
                    + Rational64::from_integer(d - p.max_relation_len as i64 * c) * p.delta;
                assert!(len >= Rational64::from_integer(c), "word {w}");
                assert!(len >= bound2, "word {w}");
            }
            if cur.len() < 6 {
                for &l in &pool {
                    let mut next = cur.clone();
                    next.push(l);
                    stack.push(next);
                }
            }
        }
    }

    #[test]
    fn modified_length_subadditivity_band() {
        // For s1, s2 reduced whose concatenation is already reduced:
        // |s1| + |s2| >= |s| > |s1| + |s2| - L*delta. Under cancellation only
        // the upper inequality survives.
        let p = LengthProfile::new(3, 1);
        let l_delta = Rational64::from_integer(p.max_relation_len as i64) * p.delta;
        for seed in 0..300 {
            let s1 = random_word(seed, 8).reduced();
            let s2 = random_word(seed + 1000, 8).reduced();
            let s = s1.concat(&s2).reduced();
            let len1 = modified_length(&s1, &p).unwrap();
            let len2 = modified_length(&s2, &p).unwrap();
            let len = modified_length(&s, &p).unwrap();
            assert!(len <= len1 + len2, "upper bound, seed {seed}");
            let junction_reduced = s1.concat(&s2).is_reduced();
            if junction_reduced {
                assert!(len > len1 + len2 - l_delta, "lower band, seed {seed}");
            }
        }
    }
}
