//! Group presentations of machines: one state relation `U theta' = theta V`
//! per rule part and one commuting relation per rule, tape part and
//! commuting letter. Brothers are written `<rule>.<i>`; the stable letters
//! are the rule families.

use std::fmt::Write as _;

use thiserror::Error;

use crate::machine::SMachine;
use crate::words::{Sign, Symbol, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T, PresentationError> {
    Err(PresentationError::Parse {
        line,
        msg: msg.into(),
    })
}

/// A word at the serialization level: symbols with signs, no class or part
/// information.
pub type PWord = Vec<(Symbol, Sign)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `U . theta_{right} = theta_{left} . V` for one rule part.
    State {
        family: Symbol,
        left_brother: u32,
        right_brother: u32,
        u: PWord,
        v: PWord,
    },
    /// `a . theta_b = theta_b . a` for a commuting tape letter.
    Commute { family: Symbol, brother: u32, a: Symbol },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub machine_name: String,
    pub q_letters: Vec<Symbol>,
    pub a_letters: Vec<Symbol>,
    pub families: Vec<(Symbol, u32)>,
    pub relations: Vec<Relation>,
}

impl Presentation {
    /// Rank of the free part: state plus tape letters.
    pub fn free_rank(&self) -> usize {
        self.q_letters.len() + self.a_letters.len()
    }

    pub fn stable_letters(&self) -> usize {
        self.families.len()
    }
}

fn pword(w: &Word) -> PWord {
    w.iter().map(|l| (l.symbol, l.sign)).collect()
}

/// Builds the presentation of a machine: generators in declaration order,
/// one state relation per part of each positive rule (brother indices wrap
/// past the last part), and commuting relations binding the brother that
/// crosses each tape sector.
pub fn emit_presentation(m: &SMachine) -> Presentation {
    let n = m.part_count() as u32;
    let mut q_letters = Vec::new();
    for i in 1..=m.part_count() {
        for l in m.q_part(i) {
            q_letters.push(l.symbol);
        }
    }
    let mut a_letters = Vec::new();
    for i in 1..=m.part_count().saturating_sub(1) {
        for l in m.tape_part(i) {
            if !a_letters.contains(&l.symbol) {
                a_letters.push(l.symbol);
            }
        }
    }
    let mut families = Vec::new();
    let mut relations = Vec::new();
    for rule in m.rules() {
        families.push((rule.name, n));
        for (idx, part) in rule.parts.iter().enumerate() {
            let i = (idx + 1) as u32;
            let mut u = Word::empty();
            for l in part.left_before.iter() {
                u.push(*l);
            }
            u.push(part.state_before);
            for l in part.right_before.iter() {
                u.push(*l);
            }
            let mut v = Word::empty();
            for l in part.left_after.iter() {
                v.push(*l);
            }
            v.push(part.state_after);
            for l in part.right_after.iter() {
                v.push(*l);
            }
            relations.push(Relation::State {
                family: rule.name,
                left_brother: i,
                right_brother: i % n + 1,
                u: pword(&u),
                v: pword(&v),
            });
        }
        for (idx, set) in rule.commuting.iter().enumerate() {
            let j = (idx + 1) as u32;
            // the sector between parts j and j+1 is crossed by brother j+1
            for l in m.tape_part(idx + 1) {
                if set.contains(&l.symbol) {
                    relations.push(Relation::Commute {
                        family: rule.name,
                        brother: j + 1,
                        a: l.symbol,
                    });
                }
            }
        }
    }
    Presentation {
        machine_name: m.name.clone(),
        q_letters,
        a_letters,
        families,
        relations,
    }
}

fn render_pword(w: &PWord) -> String {
    w.iter()
        .map(|(sym, sign)| match sign {
            Sign::Plus => sym.to_string(),
            Sign::Minus => format!("{sym}^-1"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn presentation_to_text(p: &Presentation) -> String {
    let mut out = String::from("presentation v1\n");
    let _ = writeln!(out, "machine {}", p.machine_name);
    let q: Vec<String> = p.q_letters.iter().map(|s| s.to_string()).collect();
    let _ = writeln!(out, "q-letters {}: {}", q.len(), q.join(" "));
    let a: Vec<String> = p.a_letters.iter().map(|s| s.to_string()).collect();
    let _ = writeln!(out, "a-letters {}: {}", a.len(), a.join(" "));
    let f: Vec<String> = p.families.iter().map(|(s, _)| s.to_string()).collect();
    let _ = writeln!(out, "rule-families {}: {}", f.len(), f.join(" "));
    let _ = writeln!(out, "free-rank {}", p.free_rank());
    let _ = writeln!(out, "relations {}", p.relations.len());
    for rel in &p.relations {
        match rel {
            Relation::State {
                family,
                left_brother,
                right_brother,
                u,
                v,
            } => {
                let _ = writeln!(
                    out,
                    "{} * {}.{} = {}.{} * {}",
                    render_pword(u),
                    family,
                    right_brother,
                    family,
                    left_brother,
                    render_pword(v)
                );
            }
            Relation::Commute { family, brother, a } => {
                let _ = writeln!(
                    out,
                    "{} * {}.{} = {}.{} * {}",
                    a, family, brother, family, brother, a
                );
            }
        }
    }
    out
}

fn parse_pword(text: &str) -> PWord {
    text.split_whitespace()
        .map(|tok| match tok.strip_suffix("^-1") {
            Some(base) => (Symbol::intern(base), Sign::Minus),
            None => (Symbol::intern(tok), Sign::Plus),
        })
        .collect()
}

fn parse_brother(token: &str, line: usize) -> Result<(Symbol, u32), PresentationError> {
    match token.rsplit_once('.') {
        Some((name, idx)) => match idx.parse::<u32>() {
            Ok(i) => Ok((Symbol::intern(name), i)),
            Err(_) => perr(line, format!("bad brother index in '{token}'")),
        },
        None => perr(line, format!("expected '<rule>.<i>', found '{token}'")),
    }
}

pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines.next().ok_or(PresentationError::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    if header != "presentation v1" {
        return perr(ln, format!("expected 'presentation v1', found '{header}'"));
    }
    let (ln, l) = lines.next().ok_or(PresentationError::Parse {
        line: ln,
        msg: "missing machine line".into(),
    })?;
    let machine_name = match l.strip_prefix("machine ") {
        Some(rest) => rest.trim().to_owned(),
        None => return perr(ln, "expected 'machine <name>'"),
    };
    let mut take_list = |prefix: &str| -> Result<Vec<Symbol>, PresentationError> {
        let (ln, l) = lines.next().ok_or(PresentationError::Parse {
            line: 0,
            msg: format!("missing '{prefix}' line"),
        })?;
        let rest = l.strip_prefix(prefix).ok_or(PresentationError::Parse {
            line: ln,
            msg: format!("expected '{prefix} ...', found '{l}'"),
        })?;
        let (count_text, list) = rest.split_once(':').ok_or(PresentationError::Parse {
            line: ln,
            msg: "missing ':'".into(),
        })?;
        let count: usize = count_text.trim().parse().map_err(|_| PresentationError::Parse {
            line: ln,
            msg: format!("bad count '{}'", count_text.trim()),
        })?;
        let symbols: Vec<Symbol> = list.split_whitespace().map(Symbol::intern).collect();
        if symbols.len() != count {
            return perr(ln, format!("count {count} does not match list length {}", symbols.len()));
        }
        Ok(symbols)
    };
    let q_letters = take_list("q-letters")?;
    let a_letters = take_list("a-letters")?;
    let family_names = take_list("rule-families")?;
    let (ln, l) = lines.next().ok_or(PresentationError::Parse {
        line: 0,
        msg: "missing free-rank line".into(),
    })?;
    let free_rank: usize = match l.strip_prefix("free-rank ") {
        Some(rest) => rest.trim().parse().map_err(|_| PresentationError::Parse {
            line: ln,
            msg: "bad free-rank".into(),
        })?,
        None => return perr(ln, "expected 'free-rank <n>'"),
    };
    if free_rank != q_letters.len() + a_letters.len() {
        return perr(ln, "free-rank does not match generator counts");
    }
    let (ln, l) = lines.next().ok_or(PresentationError::Parse {
        line: 0,
        msg: "missing relations line".into(),
    })?;
    let rel_count: usize = match l.strip_prefix("relations ") {
        Some(rest) => rest.trim().parse().map_err(|_| PresentationError::Parse {
            line: ln,
            msg: "bad relation count".into(),
        })?,
        None => return perr(ln, "expected 'relations <n>'"),
    };

    let mut relations = Vec::with_capacity(rel_count);
    let mut brothers_seen: std::collections::HashMap<Symbol, u32> = Default::default();
    for (ln, l) in lines {
        let (lhs, rhs) = l.split_once(" = ").ok_or(PresentationError::Parse {
            line: ln,
            msg: "missing ' = '".into(),
        })?;
        let (u_text, right_tok) = lhs.rsplit_once(" * ").ok_or(PresentationError::Parse {
            line: ln,
            msg: "missing ' * ' on the left side".into(),
        })?;
        let (left_tok, v_text) = rhs.split_once(" * ").ok_or(PresentationError::Parse {
            line: ln,
            msg: "missing ' * ' on the right side".into(),
        })?;
        let (fam_r, right_brother) = parse_brother(right_tok.trim(), ln)?;
        let (fam_l, left_brother) = parse_brother(left_tok.trim(), ln)?;
        if fam_r != fam_l {
            return perr(ln, "relation mixes two rule families");
        }
        let u = parse_pword(u_text);
        let v = parse_pword(v_text);
        let entry = brothers_seen.entry(fam_l).or_insert(0);
        *entry = (*entry).max(left_brother).max(right_brother);
        if left_brother == right_brother && u == v && u.len() == 1 {
            relations.push(Relation::Commute {
                family: fam_l,
                brother: left_brother,
                a: u[0].0,
            });
        } else {
            relations.push(Relation::State {
                family: fam_l,
                left_brother,
                right_brother,
                u,
                v,
            });
        }
    }
    if relations.len() != rel_count {
        return perr(0, format!("expected {rel_count} relations, found {}", relations.len()));
    }
    // brother counts: the declared families carry the part count, which is
    // the maximal brother index seen
    let families = family_names
        .into_iter()
        .map(|f| {
            let n = brothers_seen.get(&f).copied().unwrap_or(0);
            (f, n)
        })
        .collect();
    Ok(Presentation {
        machine_name,
        q_letters,
        a_letters,
        families,
        relations,
    })
}
