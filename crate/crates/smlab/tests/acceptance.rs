//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test -p smlab --test acceptance -- --nocapture`.

mod common;

use num_rational::Rational64;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{exhaustive_diagrams, oracle_dispersion, random_z_computation, random_z_word};
use smlab::adding::ZMachine;
use smlab::bcd::{random_bcd, Bcd, Chord, PairClass, WeightProfile};
use smlab::cli::{cmd_adding_run, cmd_compose_run};
use smlab::compose::{compose, pump_machine, pump_round_trip, simulate_composed_run, StepBudget};
use smlab::diagrams::{check_band_bounds, trapezium_from_run, trapezium_stats};
use smlab::experiment::{compose_family, dehn_lower_point};
use smlab::machine_fmt::{emit_machine, parse_machine};
use smlab::presentation::{emit_presentation, parse_presentation, presentation_to_text};
use smlab::words::LengthProfile;

fn verdict(number: u32, name: &str, ok: bool, detail: &str) {
    println!(
        "criterion {number:02} {name}: {} {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {number:02} {name}: {detail}");
}

#[test]
fn criterion_01_adding_exactness() {
    let z = ZMachine::new(&["a"]).unwrap();
    let mut ok = true;
    let mut detail = String::new();
    for n in 1..=12u32 {
        let u = vec![0usize; n as usize];
        let history = z.full_count_history(&u).unwrap();
        let got = history.len() as u64;
        let predicted = ZMachine::predicted_full_count_len(n);
        let lo = 1u64 << n;
        let hi = 6 * lo;
        if got != predicted || got < lo || got > hi {
            ok = false;
            detail = format!("n={n}: got {got}, formula {predicted}, bounds [{lo},{hi}]");
            break;
        }
    }
    verdict(1, "adding-exactness", ok, &detail);
}

#[test]
fn criterion_02_constant_width() {
    let z = ZMachine::new(&["a"]).unwrap();
    let m = z.machine();
    let mut ok = true;
    let mut detail = String::new();
    for n in 1..=12usize {
        let u = vec![0usize; n];
        let history = z.full_count_history(&u).unwrap();
        let c = m.run_history(&z.start_word(&u).unwrap(), &history).unwrap();
        let len0 = c.words[0].len();
        if !c.words.iter().all(|w| w.len() == len0) {
            ok = false;
            detail = format!("n={n}: word lengths vary");
            break;
        }
    }
    verdict(2, "constant-width", ok, &detail);
}

#[test]
fn criterion_03_counter_semantics() {
    let z = ZMachine::new(&["a"]).unwrap();
    let m = z.machine();
    let mut ok = true;
    let mut detail = String::new();
    'outer: for n in 1..=10usize {
        let u = vec![0usize; n];
        let mut word = z.start_word(&u).unwrap();
        let cycles = (1u64 << n) - 1;
        for c in 0..cycles {
            let k = c.trailing_ones() as usize;
            for sr in z.canonical_cycle_history(&u, k).unwrap() {
                word = m.apply_rule(sr, &word).unwrap().word;
            }
            let value = z.binary_value(&z.tape_word(&word)).unwrap();
            if value != c + 1 {
                ok = false;
                detail = format!("n={n}, cycle {c}: value {value}");
                break 'outer;
            }
        }
    }
    verdict(3, "counter-semantics", ok, &detail);
}

#[test]
fn criterion_04_at_most_two_length_preserving() {
    let z = ZMachine::new(&["a"]).unwrap();
    let m = z.machine();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..500 {
        let word = random_z_word(&z, &mut rng, 8);
        let count = m.enumerate_applicable(&word, true).len();
        if count > 2 {
            ok = false;
            detail = format!("sample {i}: {count} length-preserving rules on {word}");
            break;
        }
    }
    verdict(4, "two-length-preserving-successors", ok, &detail);
}

#[test]
fn criterion_05_no_honey_pots() {
    let z = ZMachine::new(&["a"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..200 {
        let c = random_z_computation(&z, &mut rng, 6, 50);
        let bound = c.words[0].len().max(c.end().len());
        if let Some(w) = c.words.iter().find(|w| w.len() > bound) {
            ok = false;
            detail = format!(
                "sample {i}: intermediate length {} exceeds max({}, {})",
                w.len(),
                c.words[0].len(),
                c.end().len()
            );
            break;
        }
    }
    verdict(5, "no-honey-pots", ok, &detail);
}

#[test]
fn criterion_06_dispersion_quadratic_bound() {
    let one = WeightProfile::ramp(1);
    let mut ok = true;
    let mut detail = String::new();
    // randomized sweep
    for seed in 0..1000u64 {
        let r = (seed % 12 + 1) as usize;
        let q = (seed % 7 + 1) as usize;
        let d = random_bcd(seed, r, q);
        let d1 = d.dispersion(&one).unwrap();
        let bound = Rational64::from_integer((r * r - r) as i64);
        if d1 > bound {
            ok = false;
            detail = format!("seed {seed}: D_1 = {d1} > {bound}");
            break;
        }
    }
    // exhaustive sweep over all diagrams with r + q <= 6
    if ok {
        'outer: for r in 0..=6usize {
            for q in 0..=(6 - r) {
                for d in exhaustive_diagrams(r, q) {
                    let d1 = d.dispersion(&one).unwrap();
                    let bound = Rational64::from_integer(((r * r) as i64 - r as i64).max(0));
                    if d1 > bound {
                        ok = false;
                        detail = format!("exhaustive r={r} q={q}: D_1 = {d1} > {bound}");
                        break 'outer;
                    }
                }
            }
        }
    }
    verdict(6, "dispersion-quadratic-bound", ok, &detail);
}

#[test]
fn criterion_07_reference_fixture_pins_orientation() {
    let fixture = include_str!("../fixtures/fig3.bcd");
    let (d, k) = Bcd::parse(fixture).unwrap();
    let profile = WeightProfile::ramp(k.unwrap_or(1));
    let d1 = d.dispersion(&profile).unwrap();
    let o1 = d.node_by_labels("T1", "Q1").unwrap();
    let o2 = d.node_by_labels("T2", "Q1").unwrap();
    let forward_bad = d.classify_pair(o1, o2).unwrap() == PairClass::Bad;
    let reverse_good = d.classify_pair(o2, o1).unwrap() == PairClass::Good;
    let ok = d1 == Rational64::from_integer(1) && forward_bad && reverse_good;
    verdict(
        7,
        "reference-fixture-dispersion",
        ok,
        &format!("D_1 = {d1}, (o1,o2) bad: {forward_bad}, (o2,o1) good: {reverse_good}"),
    );
}

#[test]
fn criterion_08_deletion_monotonicity() {
    let mut ok = true;
    let mut detail = String::new();
    'outer: for seed in 0..500u64 {
        let r = (seed % 6 + 1) as usize;
        let q = (seed % 4 + 1) as usize;
        let d = random_bcd(seed.wrapping_add(77), r, q);
        for k in [1u32, 2, 3] {
            let profile = WeightProfile::ramp(k);
            let before = d.dispersion(&profile).unwrap();
            for t in 0..d.t_count() {
                let after = d
                    .delete_chord(Chord::t(t))
                    .unwrap()
                    .dispersion(&profile)
                    .unwrap();
                if after > before {
                    ok = false;
                    detail = format!("seed {seed} K {k}: deleting T{} raised {before} to {after}", t + 1);
                    break 'outer;
                }
            }
            for q_idx in 0..d.q_count() {
                let after = d
                    .delete_chord(Chord::q(q_idx))
                    .unwrap()
                    .dispersion(&profile)
                    .unwrap();
                if after > before {
                    ok = false;
                    detail = format!(
                        "seed {seed} K {k}: deleting Q{} raised {before} to {after}",
                        q_idx + 1
                    );
                    break 'outer;
                }
            }
        }
    }
    verdict(8, "deletion-monotonicity", ok, &detail);
}

#[test]
fn criterion_09_close_chord_drop() {
    let mut qualifying = 0usize;
    let mut ok = true;
    let mut detail = String::new();
    let mut seed = 0u64;
    while qualifying < 50 && seed < 20_000 {
        let r = (seed % 5 + 2) as usize;
        let q = (seed % 4 + 2) as usize;
        let k = (seed % 3 + 1) as u32;
        let d = random_bcd(seed.wrapping_add(4321), r, q);
        let profile = WeightProfile::ramp(k);
        for cp in 0..d.q_count() {
            for c in 0..d.q_count() {
                if cp == c {
                    continue;
                }
                let drop = match d
                    .close_drop_bound(Chord::q(cp), Chord::q(c), &profile)
                    .unwrap()
                {
                    Some(drop) => drop,
                    None => continue,
                };
                if drop.nodes_on_c_prime == 0 || drop.bound.is_zero() {
                    continue; // vacuous instance
                }
                qualifying += 1;
                let before = d.dispersion(&profile).unwrap();
                let after = d
                    .delete_chord(Chord::q(cp))
                    .unwrap()
                    .dispersion(&profile)
                    .unwrap();
                if before - after < drop.bound {
                    ok = false;
                    detail = format!(
                        "seed {seed} K {k} Q{}->Q{}: drop {} below bound {}",
                        cp + 1,
                        c + 1,
                        before - after,
                        drop.bound
                    );
                }
            }
        }
        seed += 1;
    }
    if qualifying < 50 {
        ok = false;
        detail = format!("only {qualifying} qualifying instances found");
    }
    verdict(
        9,
        "close-chord-drop",
        ok,
        &format!("{detail} ({qualifying} qualifying instances)"),
    );
}

#[test]
fn criterion_10_band_bounds() {
    let mut ok = true;
    let mut detail = String::new();
    // counter families
    let z = ZMachine::new(&["a"]).unwrap();
    let m = z.machine();
    let profile = LengthProfile::new(m.max_relation_length(), 1);
    for n in 1..=10usize {
        let u = vec![0usize; n];
        let history = z.full_count_history(&u).unwrap();
        let c = m.run_history(&z.start_word(&u).unwrap(), &history).unwrap();
        let t = trapezium_stats(m, &c, &profile).unwrap();
        let violations = check_band_bounds(&t, m.max_relation_length());
        if !violations.is_empty() {
            ok = false;
            detail = format!("counter n={n}: {} band violations", violations.len());
            break;
        }
    }
    // composed pump families
    if ok {
        let pump = pump_machine();
        let cm = compose(&pump).unwrap();
        let cprofile = LengthProfile::new(cm.machine().max_relation_length(), 1);
        for n in 1..=12u32 {
            let base = pump_round_trip(&pump, n).unwrap();
            let run =
                simulate_composed_run(&cm, &base, &mut StepBudget::new(10_000_000)).unwrap();
            let t = trapezium_from_run(&run, &cprofile).unwrap();
            let violations = check_band_bounds(&t, cm.machine().max_relation_length());
            if !violations.is_empty() {
                ok = false;
                detail = format!("composed n={n}: {} band violations", violations.len());
                break;
            }
        }
    }
    verdict(10, "band-bounds", ok, &detail);
}

#[test]
fn criterion_11_composed_growth() {
    let family = compose_family(14, &mut StepBudget::new(10_000_000)).unwrap();
    let l: Vec<u64> = family.points.iter().map(|p| p.record.l_n).collect();
    let widths: Vec<usize> = family.points.iter().map(|p| p.record.width).collect();
    let mut ok = true;
    let mut detail = String::new();
    for n in 10..=13usize {
        let ratio = (l[n] as f64 / l[n - 1] as f64).log2();
        if (ratio - 1.0).abs() >= 0.05 {
            ok = false;
            detail = format!("n={n}: log2 ratio {ratio:.4}");
            break;
        }
    }
    if ok {
        let offset = widths[3] as i64 - 4;
        for n in 4..=13usize {
            if widths[n - 1] as i64 - n as i64 != offset {
                ok = false;
                detail = format!("width({n}) - {n} = {} != {offset}", widths[n - 1] as i64 - n as i64);
                break;
            }
        }
    }
    verdict(
        11,
        "composed-growth",
        ok,
        &format!("{detail} (l(14) = {})", l[13]),
    );
}

#[test]
fn criterion_12_area_shape() {
    let family = compose_family(13, &mut StepBudget::new(10_000_000)).unwrap();
    let mut ok = true;
    let mut detail = String::new();
    // fitted lower constant for area >= c * l * log2 l across n = 6..13
    let mut c_fit = f64::INFINITY;
    for p in &family.points {
        if (6..=13).contains(&p.record.n) {
            let r = p.record.area_ratio.expect("l >= 2 here");
            c_fit = c_fit.min(r);
        }
    }
    if !(c_fit.is_finite() && c_fit > 0.0) {
        ok = false;
        detail = format!("fitted c = {c_fit}");
    }
    for p in &family.points {
        if (6..=13).contains(&p.record.n) {
            let l = p.record.l_n as f64;
            if (p.record.area as f64) < c_fit * l * l.log2() - 1e-9 {
                ok = false;
                detail = format!("n={}: area below fitted bound", p.record.n);
            }
        }
    }
    // glued diagrams: area/(d^2 log2 d) within a factor-2 band for n = 8..13
    let mut ratios = Vec::new();
    if ok {
        for n in 8..=13u32 {
            let point = dehn_lower_point(n, &mut StepBudget::new(10_000_000)).unwrap();
            ratios.push(point.ratio.expect("non-degenerate point"));
        }
        let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = ratios.iter().cloned().fold(0.0f64, f64::max);
        if !(min > 0.0 && max / min <= 2.0) {
            ok = false;
            detail = format!("glued ratio band [{min:.6}, {max:.6}] wider than factor 2");
        }
    }
    verdict(
        12,
        "area-shape-n2logn",
        ok,
        &format!("{detail} (fitted c = {c_fit:.6})"),
    );
}

#[test]
fn criterion_13_grid_dispersion() {
    let mut ok = true;
    let mut detail = String::new();
    'outer: for h in 0..=8usize {
        for b in 0..=8usize {
            let g = Bcd::grid(h, b);
            for k in [1u32, 2, 3] {
                let profile = WeightProfile::ramp(k);
                let generic = g.dispersion(&profile).unwrap();
                let fast = g.dispersion_grid_aware(&profile).unwrap();
                let oracle = oracle_dispersion(&g, &profile);
                if !generic.is_zero() || !fast.is_zero() || !oracle.is_zero() {
                    ok = false;
                    detail = format!(
                        "grid {h}x{b} K {k}: generic {generic}, shortcut {fast}, oracle {oracle}"
                    );
                    break 'outer;
                }
            }
        }
    }
    // the oracle also agrees with the generic path off the grid family
    if ok {
        for seed in 0..40u64 {
            let d = random_bcd(seed.wrapping_add(999), 4, 3);
            for k in [1u32, 2] {
                let profile = WeightProfile::ramp(k);
                let generic = d.dispersion(&profile).unwrap();
                let oracle = oracle_dispersion(&d, &profile);
                if generic != oracle {
                    ok = false;
                    detail = format!("seed {seed} K {k}: generic {generic} != oracle {oracle}");
                    break;
                }
            }
        }
    }
    verdict(13, "grid-dispersion", ok, &detail);
}

#[test]
fn criterion_14_round_trips() {
    let mut ok = true;
    let mut detail = String::new();

    // machine files
    let machines = {
        let mut v = Vec::new();
        v.push(ZMachine::new(&["a"]).unwrap().machine().clone());
        v.push(ZMachine::new(&["a", "b"]).unwrap().machine().clone());
        v.push(pump_machine());
        v.push(compose(&pump_machine()).unwrap().machine().clone());
        v
    };
    for m in &machines {
        let text = emit_machine(m);
        match parse_machine(&text) {
            Ok(parsed) if &parsed == m && emit_machine(&parsed) == text => {}
            Ok(_) => {
                ok = false;
                detail = format!("machine {} does not round trip", m.name);
            }
            Err(e) => {
                ok = false;
                detail = format!("machine {}: {e}", m.name);
            }
        }
    }

    // bcd files
    if ok {
        let fixture = include_str!("../fixtures/fig3.bcd");
        let (d, k) = Bcd::parse(fixture).unwrap();
        if d.to_text(k) != fixture {
            ok = false;
            detail = "reference fixture does not round trip".into();
        }
        for seed in 0..30u64 {
            let d = random_bcd(seed, 4, 4);
            let (back, _) = Bcd::parse(&d.to_text(Some(2))).unwrap();
            if back != d {
                ok = false;
                detail = format!("random bcd seed {seed} does not round trip");
                break;
            }
        }
        let g = Bcd::grid(3, 5);
        let (back, _) = Bcd::parse(&g.to_text(None)).unwrap();
        if back != g {
            ok = false;
            detail = "grid bcd does not round trip".into();
        }
    }

    // presentations
    if ok {
        for m in &machines {
            let p = emit_presentation(m);
            let text = presentation_to_text(&p);
            match parse_presentation(&text) {
                Ok(parsed) if parsed == p && presentation_to_text(&parsed) == text => {}
                Ok(_) => {
                    ok = false;
                    detail = format!("presentation of {} does not round trip", m.name);
                }
                Err(e) => {
                    ok = false;
                    detail = format!("presentation of {}: {e}", m.name);
                }
            }
        }
    }

    // CSV and reports byte-identical across runs
    if ok {
        let a = cmd_compose_run(6).unwrap();
        let b = cmd_compose_run(6).unwrap();
        if a.csv != b.csv || a.report != b.report {
            ok = false;
            detail = "compose run output differs between runs".into();
        }
        let a = cmd_adding_run(5, "a").unwrap();
        let b = cmd_adding_run(5, "a").unwrap();
        if a.csv != b.csv || a.report != b.report {
            ok = false;
            detail = "adding run output differs between runs".into();
        }
    }

    verdict(14, "round-trips", ok, &detail);
}
