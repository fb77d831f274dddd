//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Oracles here are written independently of the library's
//! search code.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use grigorchuk::table::render_exact;
use grigorchuk::verify::{injection_table_radius, integer_grid};
use grigorchuk::*;

type Criterion = (&'static str, Duration, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn int(n: i64) -> FieldElement {
    FieldElement::from_integers(n, 0, 0)
}

fn w(s: &str) -> Word {
    s.parse().expect("word literal")
}

fn quarters(upto: &FieldElement) -> Vec<FieldElement> {
    let step = FieldElement::from_ratio(1, 4);
    let mut out = vec![FieldElement::zero()];
    loop {
        let next = out.last().unwrap() + &step;
        if next > *upto {
            return out;
        }
        out.push(next);
    }
}

/// Every word (not only reduced ones) of weight ≤ radius, deduplicated by
/// portrait, keeping the least weight.
fn all_words_oracle(ws: &WeightScheme, radius: &FieldElement) -> BTreeMap<Vec<u8>, (FieldElement, Word)> {
    let mut out: BTreeMap<Vec<u8>, (FieldElement, Word)> = BTreeMap::new();
    let mut stack = vec![(Word::empty(), FieldElement::zero())];
    while let Some((word, weight)) = stack.pop() {
        let key = canonical_key(&word);
        match out.get(&key) {
            Some((best, _)) if *best <= weight => {}
            _ => {
                out.insert(key, (weight.clone(), word.clone()));
            }
        }
        for g in Generator::ALL {
            let next = &weight + ws.weight(g);
            if next <= *radius {
                stack.push((word.with(g), next));
            }
        }
    }
    out
}

/// Unit-weight ball from reduced words of length ≤ radius.
fn reduced_words_oracle(radius: usize) -> BTreeMap<Vec<u8>, usize> {
    let mut out: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    let mut layer = vec![Word::empty()];
    for len in 0..=radius {
        let mut next = Vec::new();
        for word in &layer {
            out.entry(canonical_key(word)).or_insert(len);
            for g in Generator::ALL {
                let ext = word.with(g);
                if reduce(&ext) == ext {
                    next.push(ext);
                }
            }
        }
        layer = next;
    }
    out
}

fn exact_algebra() -> Outcome {
    let r = check_weight_identities(&WeightScheme::omega());
    Outcome {
        ok: r.passed() && r.checked == 13,
        detail: format!("{} exact checks, {} violations", r.checked, r.violations.len()),
    }
}

fn group_sanity() -> Outcome {
    use Generator::*;
    let mut bad = Vec::new();
    for g in Generator::ALL {
        if !is_trivial(&Word::new(vec![g, g])) {
            bad.push(format!("{g}{g} ≠ 1"));
        }
    }
    for (x, y, z) in [(B, C, D), (C, B, D), (B, D, C), (D, B, C), (C, D, B), (D, C, B)] {
        if !is_trivial(&Word::new(vec![x, y, z])) {
            bad.push(format!("{x}{y} ≠ {z}"));
        }
    }
    let psi = verify_psi_consistency(8, 8);
    let ok = bad.is_empty() && psi.passed();
    Outcome {
        ok,
        detail: format!(
            "involutions and Klein table {}, ψ: {} checks, {} violations",
            if bad.is_empty() { "ok" } else { "broken" },
            psi.checked,
            psi.violations.len()
        ),
    }
}

fn enumeration_oracle() -> Outcome {
    let unit = WeightScheme::unit();
    let sizes: Vec<usize> = (0..=2).map(|r| enumerate_ball(&unit, &int(r)).unwrap().len()).collect();
    let mut mismatched = Vec::new();
    for r in 0..=8usize {
        let t = enumerate_ball(&unit, &int(r as i64)).unwrap();
        let oracle = reduced_words_oracle(r);
        let got: BTreeMap<Vec<u8>, usize> = t
            .entries()
            .map(|(k, e)| (k.clone(), e.length.as_rational().unwrap().to_integer().try_into().unwrap()))
            .collect();
        if got != oracle {
            mismatched.push(r);
        }
    }
    Outcome {
        ok: sizes == [1, 5, 11] && mismatched.is_empty(),
        detail: format!("sizes r=0,1,2: {sizes:?}; radii 0..=8 mismatched: {mismatched:?}"),
    }
}

fn boundary_exactness() -> Outcome {
    let omega = WeightScheme::omega();
    let t = enumerate_ball(&omega, &int(1)).unwrap();
    let gamma = growth_function(&t, &int(1)).unwrap();
    let oracle = all_words_oracle(&omega, &int(1));
    let same = oracle.len() == t.len() && oracle.iter().all(|(k, (l, _))| t.get(k).is_some_and(|e| e.length == *l));
    let boundary: Vec<&str> = ["ab", "ba", "dac", "cad"]
        .into_iter()
        .filter(|s| word_weight(&w(s), &omega) == int(1) && t.lookup(&w(s)).is_some_and(|e| e.length == int(1)))
        .collect();
    Outcome {
        ok: gamma == 14 && same && boundary.len() == 4,
        detail: format!("γ(1) = {gamma}, oracle {} elements, weight-1 members {boundary:?}", oracle.len()),
    }
}

fn shortening() -> Outcome {
    let t = enumerate_ball(&WeightScheme::omega(), &int(5)).unwrap();
    let r = verify_shortening(&t).unwrap();
    Outcome {
        ok: r.passed() && r.checked > 0,
        detail: format!("{} elements of H, {} violations", r.checked, r.violations.len()),
    }
}

fn minimal_form() -> Outcome {
    let t = enumerate_ball(&WeightScheme::omega(), &int(4)).unwrap();
    let r = verify_minimal_form(&t).unwrap();
    Outcome {
        ok: r.passed(),
        detail: format!("{} elements, {} checks, {} violations", t.len(), r.checked, r.violations.len()),
    }
}

fn injection() -> Outcome {
    let p = LeafBudgetParams::default();
    let domain = int(3);
    let t = enumerate_ball(&WeightScheme::omega(), &injection_table_radius(&domain)).unwrap();
    let r = verify_injection(&t, &p, &domain).unwrap();
    let first = r.violations.first().map(|v| format!("; first: {} ({})", v.witness, v.actual)).unwrap_or_default();
    Outcome { ok: r.passed(), detail: format!("{} checks, {} violations{first}", r.checked, r.violations.len()) }
}

fn leaf_budget_properties() -> Outcome {
    let f = verify_leaf_budget_properties(&integer_grid(2, 50), &LeafBudgetParams::default());
    let sample: Vec<String> =
        f.concavity.violations.iter().take(3).map(|v| format!("{} ({})", v.witness, v.actual)).collect();
    Outcome {
        ok: f.concavity.passed(),
        detail: format!(
            "concavity: {} pairs, {} violations, e.g. {}; halving (finding): {} points, {} mismatches",
            f.concavity.checked,
            f.concavity.violations.len(),
            if sample.is_empty() { "none".to_string() } else { sample.join(", ") },
            f.halving.checked,
            f.halving.violations.len()
        ),
    }
}

fn exponent_probe() -> Outcome {
    let t = enumerate_ball(&WeightScheme::unit(), &int(10)).unwrap();
    let fit = estimate_alpha(&t, &integer_grid(1, 10)).unwrap();
    let synthetic: Vec<(f64, f64)> = (1..=40).map(|n| (n as f64, (n as f64).powf(0.7).exp())).collect();
    let syn = fit_exponent(&synthetic).unwrap();
    Outcome {
        ok: fit.exponent > 0.4 && fit.exponent < 1.0 && (syn.exponent - 0.7).abs() <= 0.05,
        detail: format!(
            "unit ball r=10: {:.4} (residual {:.4}, stderr {:.4}); synthetic: {:.4}",
            fit.exponent, fit.residual, fit.std_error, syn.exponent
        ),
    }
}

fn submultiplicativity() -> Outcome {
    let mut pairs = 0u64;
    let mut bad = Vec::new();
    let tables = [
        (enumerate_ball(&WeightScheme::omega(), &int(6)).unwrap(), quarters(&int(6))),
        (enumerate_ball(&WeightScheme::unit(), &int(10)).unwrap(), integer_grid(0, 10)),
    ];
    for (t, points) in &tables {
        let gammas: BTreeMap<&FieldElement, u64> = points.iter().zip(growth_series(t, points).unwrap()).collect();
        for (m, gm) in &gammas {
            for (n, gn) in gammas.range::<&FieldElement, _>(*m..) {
                pairs += 1;
                if gm > gn {
                    bad.push(format!("{}: γ({}) > γ({})", t.scheme().name(), render_exact(m), render_exact(n)));
                }
                let sum = *m + *n;
                if let Some(gs) = gammas.get(&sum) {
                    pairs += 1;
                    if *gs > gm * gn {
                        bad.push(format!("{}: γ({0}+{1}) > γ({0})γ({1})", render_exact(m), render_exact(n)));
                    }
                }
            }
        }
    }
    Outcome { ok: bad.is_empty(), detail: format!("{pairs} pair checks, {} violations {bad:?}", bad.len()) }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("exact algebra", Duration::from_secs(1), exact_algebra),
        ("group sanity", Duration::from_secs(60), group_sanity),
        ("enumeration oracle", Duration::from_secs(300), enumeration_oracle),
        ("boundary exactness", Duration::from_secs(60), boundary_exactness),
        ("section shortening, radius 5", Duration::from_secs(600), shortening),
        ("alternating minimal forms, radius 4", Duration::from_secs(600), minimal_form),
        ("injection, radius 3", Duration::from_secs(600), injection),
        ("leaf budget properties", Duration::from_secs(60), leaf_budget_properties),
        ("exponent probe", Duration::from_secs(60), exponent_probe),
        ("monotone and submultiplicative growth", Duration::from_secs(60), submultiplicativity),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let ok = outcome.ok && elapsed < *limit;
        if !ok {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {} [{:.2}s, limit {}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
