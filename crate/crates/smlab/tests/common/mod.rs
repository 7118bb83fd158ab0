//! Shared oracles for the integration suites: an exact-geometry
//! reimplementation of dispersion, exhaustive small-diagram enumeration,
//! and random word/computation generators for the counter machine.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};
use rand::Rng;

use smlab::adding::ZMachine;
use smlab::bcd::{Bcd, Chord, ChordClass, WeightProfile};
use smlab::machine::Computation;
use smlab::words::{Letter, Sign, Word};

type Pt = (BigRational, BigRational);

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Boundary position i realized on the unit circle via the tan-half-angle
/// parametrization with t = i; increasing t walks counterclockwise, so the
/// stored boundary order is realized faithfully with exact coordinates.
fn circle_point(i: usize) -> Pt {
    let t = rat(i as i64);
    let one = rat(1);
    let denom = &one + &t * &t;
    (
        (&one - &t * &t) / denom.clone(),
        (rat(2) * &t) / denom,
    )
}

fn cross(a: &Pt, b: &Pt) -> BigRational {
    &a.0 * &b.1 - &a.1 * &b.0
}

fn sub(a: &Pt, b: &Pt) -> Pt {
    (&a.0 - &b.0, &a.1 - &b.1)
}

/// Proper intersection of segments ab and cd; returns the parameter along
/// ab and the intersection point.
fn segment_intersection(a: &Pt, b: &Pt, c: &Pt, d: &Pt) -> Option<(BigRational, Pt)> {
    let r = sub(b, a);
    let s = sub(d, c);
    let denom = cross(&r, &s);
    if denom.is_zero() {
        return None;
    }
    let ca = sub(c, a);
    let t = cross(&ca, &s) / denom.clone();
    let u = cross(&ca, &r) / denom;
    let zero = BigRational::zero();
    let one = rat(1);
    if t <= zero || t >= one || u <= zero || u >= one {
        return None;
    }
    let point = (&a.0 + &t * &r.0, &a.1 + &t * &r.1);
    Some((t, point))
}

struct OracleNode {
    t: usize,
    q: usize,
    point: Pt,
    /// parameter along the T-chord measured from its first endpoint
    t_param: BigRational,
    /// parameter along the Q-chord measured from its first endpoint
    q_param: BigRational,
}

/// Dispersion recomputed from an exact planar realization: chords are
/// straight segments between rational circle points, crossings are solved
/// exactly, left sides are decided by cross products, and weights count
/// crossings toward the chosen endpoint. Completely independent of the
/// combinatorial implementation.
pub fn oracle_dispersion(d: &Bcd, profile: &WeightProfile) -> Rational64 {
    let boundary = d.boundary();
    let mut t_ends: Vec<(Pt, Pt)> = Vec::new();
    let mut q_ends: Vec<(Pt, Pt)> = Vec::new();
    for class in [ChordClass::T, ChordClass::Q] {
        let count = if class == ChordClass::T {
            d.t_count()
        } else {
            d.q_count()
        };
        for index in 0..count {
            let chord = Chord { class, index };
            let mut pts = Vec::new();
            for (pos, c) in boundary.iter().enumerate() {
                if *c == chord {
                    pts.push(circle_point(pos));
                }
            }
            assert_eq!(pts.len(), 2);
            let pair = (pts[0].clone(), pts[1].clone());
            if class == ChordClass::T {
                t_ends.push(pair);
            } else {
                q_ends.push(pair);
            }
        }
    }

    let mut nodes: Vec<OracleNode> = Vec::new();
    for (t, (ta, tb)) in t_ends.iter().enumerate() {
        for (q, (qa, qb)) in q_ends.iter().enumerate() {
            if let Some((t_param, point)) = segment_intersection(ta, tb, qa, qb) {
                let (q_param, _) =
                    segment_intersection(qa, qb, ta, tb).expect("crossing is symmetric");
                nodes.push(OracleNode {
                    t,
                    q,
                    point,
                    t_param,
                    q_param,
                });
            }
        }
    }

    let k = profile.alpha.len();
    let weight = |rank: usize| profile.alpha[rank.min(k) - 1];
    let mut total = Rational64::zero();
    for q in 0..q_ends.len() {
        let mut on_q: Vec<&OracleNode> = nodes.iter().filter(|n| n.q == q).collect();
        on_q.sort_by(|a, b| a.q_param.cmp(&b.q_param));
        for o1 in &on_q {
            for o2 in &on_q {
                if o1.t == o2.t {
                    continue;
                }
                let dir = sub(&o2.point, &o1.point);
                let mut neighbors = Vec::new();
                let mut ranks = Vec::new();
                for o in [o1, o2] {
                    let (ea, _eb) = &t_ends[o.t];
                    let left_is_a = cross(&dir, &sub(ea, &o1.point)).is_positive();
                    let mut on_t: Vec<&OracleNode> =
                        nodes.iter().filter(|n| n.t == o.t).collect();
                    on_t.sort_by(|a, b| a.t_param.cmp(&b.t_param));
                    let idx = on_t
                        .iter()
                        .position(|n| n.t_param == o.t_param)
                        .expect("node on its own chord");
                    let (neighbor, rank) = if left_is_a {
                        (
                            if idx > 0 { Some(on_t[idx - 1].q) } else { None },
                            idx + 1,
                        )
                    } else {
                        (
                            if idx + 1 < on_t.len() {
                                Some(on_t[idx + 1].q)
                            } else {
                                None
                            },
                            on_t.len() - idx,
                        )
                    };
                    neighbors.push(neighbor);
                    ranks.push(rank);
                }
                let good = match (neighbors[0], neighbors[1]) {
                    (None, None) => true,
                    (Some(a), Some(b)) => a == b,
                    _ => false,
                };
                if !good {
                    total += weight(ranks[0]) * weight(ranks[1]);
                }
            }
        }
    }
    total
}

/// All noncrossing matchings of 2m points, each as the chord-index
/// sequence with indices assigned in order of first appearance.
pub fn noncrossing_patterns(m: usize) -> Vec<Vec<Option<usize>>> {
    fn go(slots: Vec<Option<usize>>, next_id: usize, out: &mut Vec<Vec<Option<usize>>>) {
        let first_free = slots.iter().position(|s| s.is_none());
        let first = match first_free {
            None => {
                out.push(slots);
                return;
            }
            Some(p) => p,
        };
        // match the first free slot with a partner leaving even gaps of
        // free slots on both sides
        let free: Vec<usize> = (first + 1..slots.len())
            .filter(|&i| slots[i].is_none())
            .collect();
        for (offset, &partner) in free.iter().enumerate() {
            if offset % 2 == 0 {
                continue; // odd number of free slots between: cannot match
            }
            let mut next = slots.clone();
            next[first] = Some(next_id);
            next[partner] = Some(next_id);
            go(next, next_id + 1, out);
        }
    }
    let mut out = Vec::new();
    go(vec![None; 2 * m], 0, &mut out);
    out
}

/// All k-subsets of 0..n.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every bipartite chord diagram with the given class sizes, up to
/// relabeling within each class.
pub fn exhaustive_diagrams(r: usize, q: usize) -> Vec<Bcd> {
    let total = 2 * (r + q);
    let t_patterns = noncrossing_patterns(r);
    let q_patterns = noncrossing_patterns(q);
    let mut out = Vec::new();
    for t_slots in subsets(total, 2 * r) {
        let is_t: Vec<bool> = {
            let mut v = vec![false; total];
            for &p in &t_slots {
                v[p] = true;
            }
            v
        };
        for tp in &t_patterns {
            for qp in &q_patterns {
                let mut tokens = Vec::with_capacity(total);
                let mut ti = 0usize;
                let mut qi = 0usize;
                for &is_t_pos in &is_t {
                    if is_t_pos {
                        tokens.push(Chord::t(tp[ti].unwrap()));
                        ti += 1;
                    } else {
                        tokens.push(Chord::q(qp[qi].unwrap()));
                        qi += 1;
                    }
                }
                out.push(Bcd::from_boundary(tokens).expect("construction is valid"));
            }
        }
    }
    out
}

/// Random admissible counter word L w1 p(i) w2 R with reduced tape
/// sectors of total length at most `max_tape`.
pub fn random_z_word(z: &ZMachine, rng: &mut impl Rng, max_tape: usize) -> Word {
    let m = z.machine();
    let y1: Vec<Letter> = m.tape_part(1).to_vec();
    let y2: Vec<Letter> = m.tape_part(2).to_vec();
    let total = rng.gen_range(0..=max_tape);
    let left_len = rng.gen_range(0..=total);
    let sample = |rng: &mut dyn rand::RngCore, pool: &[Letter], len: usize| -> Word {
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        while letters.len() < len {
            let base = pool[rng.gen_range(0..pool.len())];
            let letter = if rng.gen_bool(0.5) { base } else { base.inv() };
            if letters.last().map(|l| l.is_inverse_of(letter)) == Some(true) {
                continue;
            }
            letters.push(letter);
        }
        Word::new(letters)
    };
    let w1 = sample(rng, &y1, left_len);
    let w2 = sample(rng, &y2, total - left_len);
    let p = m.q_part(2)[rng.gen_range(0..3)];
    let mut word = Word::single(m.q_part(1)[0]);
    for l in w1.iter() {
        word.push(*l);
    }
    word.push(p);
    for l in w2.iter() {
        word.push(*l);
    }
    word.push(m.q_part(3)[0]);
    word
}

/// Random valid computation from a random admissible word: repeatedly
/// applies a random applicable rule, never the inverse of the previous
/// one.
pub fn random_z_computation(
    z: &ZMachine,
    rng: &mut impl Rng,
    max_tape: usize,
    max_len: usize,
) -> Computation {
    let m = z.machine();
    let start = random_z_word(z, rng, max_tape);
    let target = rng.gen_range(0..=max_len);
    let mut history = Vec::new();
    let mut word = start.clone();
    let mut last: Option<smlab::machine::SignedRule> = None;
    while history.len() < target {
        let mut candidates = m.enumerate_applicable(&word, false);
        if let Some(prev) = last {
            candidates.retain(|sr| !sr.is_inverse_of(prev));
        }
        if candidates.is_empty() {
            break;
        }
        let sr = candidates[rng.gen_range(0..candidates.len())];
        word = m.apply_rule(sr, &word).expect("candidate is applicable").word;
        history.push(sr);
        last = Some(sr);
    }
    m.run_history(&start, &history)
        .expect("replay of a generated history")
}

/// Convenience: a positive sign helper used by a few suites.
pub fn plus() -> Sign {
    Sign::Plus
}
