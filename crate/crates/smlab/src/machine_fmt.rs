//! Text format for machine descriptions: parts, tape alphabets, stop word
//! and one rule per line in bracket notation, with `->l` marking parts
//! whose commuting alphabet is empty. Emission is canonical, so
//! parse(emit(m)) reproduces the machine and emit(parse(t)) reproduces a
//! canonical file byte for byte.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::machine::{Rule, RulePart, SMachine};
use crate::words::{Letter, LetterClass, Sign, Symbol, ThetaFamily, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        msg: msg.into(),
    })
}

pub fn emit_machine(m: &SMachine) -> String {
    let n = m.part_count();
    let mut out = String::from("smachine v1\n");
    let _ = writeln!(out, "name {}", m.name);
    let _ = writeln!(out, "qparts {n}");
    for i in 1..=n {
        let tokens: Vec<String> = m.q_part(i).iter().map(|l| l.symbol.to_string()).collect();
        let _ = writeln!(out, "q {i}: {}", tokens.join(" "));
    }
    for i in 1..=n.saturating_sub(1) {
        let tokens: Vec<String> = m.tape_part(i).iter().map(|l| l.symbol.to_string()).collect();
        if tokens.is_empty() {
            let _ = writeln!(out, "y {i}:");
        } else {
            let _ = writeln!(out, "y {i}: {}", tokens.join(" "));
        }
    }
    let _ = writeln!(out, "stop: {}", m.stop_word());
    for rule in m.rules() {
        let mut parts = Vec::with_capacity(n);
        for (idx, part) in rule.parts.iter().enumerate() {
            let i = idx + 1;
            let ell = i < n
                && rule.commuting[idx].is_empty()
                && !m.tape_part(i).is_empty();
            let arrow = if ell { "->l" } else { "->" };
            let mut lhs = Vec::new();
            for l in part.left_before.iter() {
                lhs.push(l.to_string());
            }
            lhs.push(part.state_before.to_string());
            for l in part.right_before.iter() {
                lhs.push(l.to_string());
            }
            let mut rhs = Vec::new();
            for l in part.left_after.iter() {
                rhs.push(l.to_string());
            }
            rhs.push(part.state_after.to_string());
            for l in part.right_after.iter() {
                rhs.push(l.to_string());
            }
            parts.push(format!("{} {} {}", lhs.join(" "), arrow, rhs.join(" ")));
        }
        let mut line = format!("rule {}: [{}]", rule.name, parts.join(", "));
        for (idx, set) in rule.commuting.iter().enumerate() {
            let full = m.tape_set(idx + 1);
            if !set.is_empty() && set != full {
                // keep the declared letter order for determinism
                let tokens: Vec<String> = m
                    .tape_part(idx + 1)
                    .iter()
                    .filter(|l| set.contains(&l.symbol))
                    .map(|l| l.symbol.to_string())
                    .collect();
                let _ = write!(line, " | y{} = {}", idx + 1, tokens.join(" "));
            }
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Splits on top-level commas: letter and rule names may contain
/// parenthesized commas of their own.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts
}

struct LetterTable {
    q: Vec<Vec<Letter>>,
    y: Vec<Vec<Letter>>,
}

impl LetterTable {
    fn resolve(&self, token: &str, line: usize) -> Result<Letter, ParseError> {
        let (name, sign) = match token.strip_suffix("^-1") {
            Some(base) => (base, Sign::Minus),
            None => (token, Sign::Plus),
        };
        let sym = Symbol::intern(name);
        for part in &self.q {
            for l in part {
                if l.symbol == sym {
                    return Ok(l.with_sign(sign));
                }
            }
        }
        for part in &self.y {
            for l in part {
                if l.symbol == sym {
                    return Ok(l.with_sign(sign));
                }
            }
        }
        err(line, format!("unknown letter '{name}'"))
    }

    fn resolve_word(&self, text: &str, line: usize) -> Result<Word, ParseError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            letters.push(self.resolve(token, line)?);
        }
        Ok(Word::new(letters))
    }
}

pub fn parse_machine(text: &str) -> Result<SMachine, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, header) = lines.next().ok_or(ParseError {
        line: 1,
        msg: "empty file".into(),
    })?;
    if header != "smachine v1" {
        return err(ln, format!("expected 'smachine v1', found '{header}'"));
    }

    let mut name = String::from("machine");
    let mut pending = lines.next();
    if let Some((_, l)) = pending {
        if let Some(rest) = l.strip_prefix("name ") {
            name = rest.trim().to_owned();
            pending = lines.next();
        }
    }

    let (ln, l) = pending.ok_or(ParseError {
        line: 0,
        msg: "missing qparts line".into(),
    })?;
    let n: usize = match l.strip_prefix("qparts ") {
        Some(rest) => rest
            .trim()
            .parse()
            .map_err(|_| ParseError {
                line: ln,
                msg: format!("bad part count '{}'", rest.trim()),
            })?,
        None => return err(ln, "expected 'qparts <N>'"),
    };
    if n == 0 {
        return err(ln, "machine needs at least one state part");
    }

    let mut q: Vec<Vec<Letter>> = Vec::with_capacity(n);
    for i in 1..=n {
        let (ln, l) = lines.next().ok_or(ParseError {
            line: 0,
            msg: format!("missing 'q {i}:' line"),
        })?;
        let rest = l
            .strip_prefix(&format!("q {i}:"))
            .ok_or(ParseError {
                line: ln,
                msg: format!("expected 'q {i}: ...', found '{l}'"),
            })?;
        let letters: Vec<Letter> = rest
            .split_whitespace()
            .map(|tok| Letter::q(i as u32, Symbol::intern(tok)))
            .collect();
        if letters.is_empty() {
            return err(ln, format!("state part {i} is empty"));
        }
        q.push(letters);
    }
    let mut y: Vec<Vec<Letter>> = Vec::with_capacity(n.saturating_sub(1));
    let mut home: std::collections::HashMap<Symbol, u32> = Default::default();
    for i in 1..=n.saturating_sub(1) {
        let (ln, l) = lines.next().ok_or(ParseError {
            line: 0,
            msg: format!("missing 'y {i}:' line"),
        })?;
        let rest = l.strip_prefix(&format!("y {i}:")).ok_or(ParseError {
            line: ln,
            msg: format!("expected 'y {i}: ...', found '{l}'"),
        })?;
        let letters: Vec<Letter> = rest
            .split_whitespace()
            .map(|tok| {
                let sym = Symbol::intern(tok);
                let part = *home.entry(sym).or_insert(i as u32);
                Letter::a(part, sym)
            })
            .collect();
        y.push(letters);
    }
    let table = LetterTable { q, y };

    let (ln, l) = lines.next().ok_or(ParseError {
        line: 0,
        msg: "missing 'stop:' line".into(),
    })?;
    let stop = match l.strip_prefix("stop:") {
        Some(rest) => table.resolve_word(rest, ln)?,
        None => return err(ln, format!("expected 'stop: ...', found '{l}'")),
    };

    let mut rules: Vec<Rule> = Vec::new();
    for (ln, l) in lines {
        let rest = match l.strip_prefix("rule ") {
            Some(rest) => rest,
            None => return err(ln, format!("expected 'rule ...', found '{l}'")),
        };
        let colon = match rest.find(':') {
            // the rule name may contain parentheses but no colon
            Some(c) => c,
            None => return err(ln, "missing ':' after rule name"),
        };
        let rule_name = rest[..colon].trim();
        let body = rest[colon + 1..].trim();
        let open = body.find('[').ok_or(ParseError {
            line: ln,
            msg: "missing '['".into(),
        })?;
        let close = body.rfind(']').ok_or(ParseError {
            line: ln,
            msg: "missing ']'".into(),
        })?;
        let inside = &body[open + 1..close];
        let tail = body[close + 1..].trim();

        let part_texts = split_top_level(inside);
        if part_texts.len() != n {
            return err(
                ln,
                format!("rule {rule_name} has {} parts, machine has {n}", part_texts.len()),
            );
        }
        let mut parts = Vec::with_capacity(n);
        let mut ell_marks = vec![false; n];
        for (idx, ptext) in part_texts.iter().enumerate() {
            let tokens: Vec<&str> = ptext.split_whitespace().collect();
            let arrow_pos = tokens
                .iter()
                .position(|t| *t == "->" || *t == "->l")
                .ok_or(ParseError {
                    line: ln,
                    msg: format!("part {} of rule {rule_name} has no arrow", idx + 1),
                })?;
            if tokens[arrow_pos] == "->l" {
                ell_marks[idx] = true;
            }
            let parse_side =
                |side: &[&str]| -> Result<(Word, Letter, Word), ParseError> {
                    let mut state = None;
                    let mut left = Vec::new();
                    let mut right = Vec::new();
                    for tok in side {
                        let letter = table.resolve(tok, ln)?;
                        if letter.class == LetterClass::Q {
                            if state.is_some() {
                                return err(
                                    ln,
                                    format!("two state letters in one part of {rule_name}"),
                                );
                            }
                            if letter.sign != Sign::Plus {
                                return err(ln, "state letters in rules must be positive");
                            }
                            state = Some(letter);
                        } else if state.is_none() {
                            left.push(letter);
                        } else {
                            right.push(letter);
                        }
                    }
                    match state {
                        Some(s) => Ok((Word::new(left), s, Word::new(right))),
                        None => err(
                            ln,
                            format!("part of rule {rule_name} has no state letter"),
                        ),
                    }
                };
            let (lb, sb, rb) = parse_side(&tokens[..arrow_pos])?;
            let (la, sa, ra) = parse_side(&tokens[arrow_pos + 1..])?;
            parts.push(RulePart {
                left_before: lb,
                state_before: sb,
                right_before: rb,
                left_after: la,
                state_after: sa,
                right_after: ra,
            });
        }

        let mut commuting: Vec<BTreeSet<Symbol>> = (0..n.saturating_sub(1))
            .map(|idx| {
                if ell_marks[idx] {
                    BTreeSet::new()
                } else {
                    table.y[idx].iter().map(|l| l.symbol).collect()
                }
            })
            .collect();
        if !tail.is_empty() {
            for clause in tail.split('|') {
                let clause = clause.trim();
                if clause.is_empty() {
                    continue;
                }
                let eq = clause.find('=').ok_or(ParseError {
                    line: ln,
                    msg: format!("bad commuting clause '{clause}'"),
                })?;
                let key = clause[..eq].trim();
                let idx: usize = match key.strip_prefix('y') {
                    Some(num) => num.trim().parse().map_err(|_| ParseError {
                        line: ln,
                        msg: format!("bad commuting clause key '{key}'"),
                    })?,
                    None => return err(ln, format!("bad commuting clause key '{key}'")),
                };
                if idx == 0 || idx > n - 1 {
                    return err(ln, format!("commuting clause for unknown tape part {idx}"));
                }
                if ell_marks[idx - 1] {
                    return err(
                        ln,
                        format!("part {idx} is both l-marked and given a commuting set"),
                    );
                }
                let mut set = BTreeSet::new();
                for tok in clause[eq + 1..].split_whitespace() {
                    let letter = table.resolve(tok, ln)?;
                    set.insert(letter.symbol);
                }
                commuting[idx - 1] = set;
            }
        }

        let name_sym = Symbol::intern(rule_name);
        rules.push(Rule {
            name: name_sym,
            family: ThetaFamily::register(name_sym),
            parts,
            commuting,
        });
    }

    SMachine::new(&name, table.q, table.y, rules, stop).map_err(|e| ParseError {
        line: 0,
        msg: e.to_string(),
    })
}
