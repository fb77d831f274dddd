//! Exhaustive checks of the weight identities, minimal forms, section
//! shortening, ψ, the leaf budget and the tree injection. Failures are
//! returned as data with exact witnesses.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::{self, Write as _};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::encoding::{catalan, decode, encode, leaf_budget, upper_bound, CodeTree, LeafBudgetParams};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::group::{act, activity, psi_split_with, BinaryString, Generator, SectionTable, Word};
use crate::metrics::{growth_series, shortest_paths, BallTable, Paths, WeightScheme, DEFAULT_ELEMENT_CAP};
use crate::portrait::Portrait;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub witness: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checked: u64,
    pub violations: Vec<Violation>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    fn new(suite: &str) -> Self {
        VerificationReport { suite: suite.into(), checked: 0, violations: Vec::new(), elapsed: Duration::ZERO }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(
        &mut self,
        ok: bool,
        witness: impl Into<String>,
        expected: impl Into<String>,
        actual: impl FnOnce() -> String,
    ) {
        self.checked += 1;
        if !ok {
            self.violations.push(Violation { witness: witness.into(), expected: expected.into(), actual: actual() });
        }
    }

    fn finish(mut self, start: Instant) -> Self {
        self.elapsed = start.elapsed();
        self
    }

    /// Text rendering; at most `max_violations` witnesses are listed.
    pub fn render(&self, max_violations: usize) -> String {
        let mut s = format!(
            "{}: {} ({} checks, {} violations)\n",
            self.suite,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checked,
            self.violations.len()
        );
        for v in self.violations.iter().take(max_violations) {
            let _ = writeln!(s, "  {}: expected {}; got {}", v.witness, v.expected, v.actual);
        }
        if self.violations.len() > max_violations {
            let _ = writeln!(s, "  ... {} more", self.violations.len() - max_violations);
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["passed"] = serde_json::Value::Bool(self.passed());
        v
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(usize::MAX))
    }
}

fn eq_check(r: &mut VerificationReport, witness: &str, lhs: &FieldElement, rhs: &FieldElement) {
    r.check(lhs == rhs, witness, "equality", || format!("lhs = {lhs}, rhs = {rhs}"));
}

/// Identities behind the shortening argument, positivity, the triangle
/// inequalities on {b, c, d}, ω(a) + ω(b) = 1 and ω(b) = ω(c) + ω(d).
pub fn check_weight_identities(ws: &WeightScheme) -> VerificationReport {
    use Generator::*;
    let start = Instant::now();
    let mut r = VerificationReport::new("weights");
    let eta = FieldElement::eta();
    let w = |g| ws.weight(g);

    let minpoly = &(&(&eta.pow(3) + &eta.pow(2)) + &eta) - &FieldElement::from_integers(2, 0, 0);
    r.check(minpoly.is_zero(), "η³ + η² + η − 2", "= 0", || minpoly.to_string());

    eq_check(&mut r, "η(ω(a)+ω(b)) = ω(a)+ω(c)", &(&eta * &(w(A) + w(B))), &(w(A) + w(C)));
    eq_check(&mut r, "η(ω(a)+ω(c)) = ω(a)+ω(d)", &(&eta * &(w(A) + w(C))), &(w(A) + w(D)));
    eq_check(&mut r, "η(ω(a)+ω(d)) = ω(b)", &(&eta * &(w(A) + w(D))), w(B));

    for g in Generator::ALL {
        r.check(w(g).is_positive(), format!("ω({g}) > 0"), "positive", || w(g).to_string());
    }
    for (x, y, z) in [(B, C, D), (C, B, D), (D, B, C)] {
        let sum = w(y) + w(z);
        r.check(*w(x) <= sum, format!("ω({x}) ≤ ω({y})+ω({z})"), "≤", || format!("{} vs {sum}", w(x)));
    }
    eq_check(&mut r, "ω(a)+ω(b) = 1", &(w(A) + w(B)), &FieldElement::one());
    eq_check(&mut r, "ω(b) = ω(c)+ω(d)", w(B), &(w(C) + w(D)));
    r.finish(start)
}

/// Compares every length in `t` with the shortest alternating word.
pub fn verify_minimal_form(t: &BallTable) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut r = VerificationReport::new("nf");
    let alt = shortest_paths(t.scheme(), t.radius(), DEFAULT_ELEMENT_CAP, Paths::Alternating)?;
    for (key, e) in t.entries() {
        match alt.get(key) {
            Some(a) => {
                r.check(a.length == e.length, e.word.to_string(), format!("alternating length {}", e.length), || {
                    format!("{} via {}", a.length, a.word)
                })
            }
            None => r.check(false, e.word.to_string(), format!("alternating word of length {}", e.length), || {
                format!("none within radius {}", t.radius())
            }),
        }
    }
    for key in alt.keys() {
        r.check(t.get(key).is_some(), "alternating search", "only elements of the ball", || {
            format!("extra element {}", alt[key].word)
        });
    }
    Ok(r.finish(start))
}

/// η(∂(g) + ω(a)) ≥ ∂(g₀) + ∂(g₁) for every g of the ball in H.
///
/// Needs radius R ≥ η(R + ω(a)): a section missing from the table is then
/// longer than the left-hand side can be, hence a violation.
pub fn verify_shortening(t: &BallTable) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut r = VerificationReport::new("shorten");
    let eta = FieldElement::eta();
    let wa = t.scheme().weight(Generator::A).clone();
    let needed = &eta * &(t.radius() + &wa);
    if *t.radius() < needed {
        return Err(Error::TableTooSmall(format!(
            "shortening check needs R ≥ η(R + ω(a)); R = {} is below {needed}",
            t.radius()
        )));
    }
    let elements: Vec<_> = t.entries().filter(|(_, e)| !activity(&e.word)).map(|(_, e)| e).collect();
    let results: Vec<(String, bool, String)> = elements
        .par_iter()
        .map(|e| {
            let (w0, w1) = psi_split_with(&SectionTable::GRIGORCHUK, &e.word).expect("even parity");
            let bound = &eta * &(&e.length + &wa);
            let witness = format!("g = {} (ψ = ({w0}, {w1}))", e.word);
            match (t.lookup(&w0), t.lookup(&w1)) {
                (Some(a), Some(b)) => {
                    let sum = &a.length + &b.length;
                    (witness, sum <= bound, format!("∂(g₀)+∂(g₁) = {sum}, η(∂(g)+ω(a)) = {bound}"))
                }
                _ => (witness, false, format!("a section lies outside radius {}", t.radius())),
            }
        })
        .collect();
    for (witness, ok, actual) in results {
        r.check(ok, witness, "η(∂(g)+ω(a)) ≥ ∂(g₀)+∂(g₁)", || actual);
    }
    Ok(r.finish(start))
}

/// Reduced words of even a-parity with at most `max_len` letters.
fn reduced_even_words(max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer = vec![Word::empty()];
    for _ in 0..=max_len {
        let mut next = Vec::new();
        for w in &layer {
            if !activity(w) {
                out.push(w.clone());
            }
            for g in Generator::ALL {
                let ext = w.with(g);
                if ext.is_reduced() {
                    next.push(ext);
                }
            }
        }
        layer = next;
    }
    out
}

/// act(w, xσ) = x·act(ψₓ(w), σ) over reduced even words and all σ with
/// |σ| ≤ max_depth.
pub fn verify_psi_consistency(max_word_len: usize, max_depth: usize) -> VerificationReport {
    verify_psi_consistency_with(&SectionTable::GRIGORCHUK, max_word_len, max_depth)
}

pub fn verify_psi_consistency_with(table: &SectionTable, max_word_len: usize, max_depth: usize) -> VerificationReport {
    let start = Instant::now();
    let mut r = VerificationReport::new("psi");
    let strings: Vec<BinaryString> = (0..=max_depth).flat_map(BinaryString::all_of_length).collect();
    let words = reduced_even_words(max_word_len);
    let per_word: Vec<(u64, Vec<Violation>)> = words
        .par_iter()
        .map(|w| {
            let (w0, w1) = psi_split_with(table, w).expect("even parity");
            let mut bad = Vec::new();
            let mut n = 0;
            for s in &strings {
                for (x, sec) in [(false, &w0), (true, &w1)] {
                    n += 1;
                    let lhs = act(w, &s.prepend(x));
                    let rhs = act(sec, s).prepend(x);
                    if lhs != rhs {
                        bad.push(Violation {
                            witness: format!("w = {w}, input {}", s.prepend(x)),
                            expected: format!("{}·act({sec}, σ)", u8::from(x)),
                            actual: format!("{lhs} vs {rhs}"),
                        });
                    }
                }
            }
            (n, bad)
        })
        .collect();
    for (n, bad) in per_word {
        r.checked += n;
        r.violations.extend(bad);
    }
    r.finish(start)
}

/// Outcomes of the two leaf-budget claims.
#[derive(Clone, Debug)]
pub struct LeafBudgetFindings {
    /// L_ℓ + L_m ≤ 2·L_{(ℓ+m)/2} for all grid pairs.
    pub concavity: VerificationReport,
    /// L_{(η/2)(n+ω(a))} = ⌊L_n/2⌋ for all grid points.
    pub halving: VerificationReport,
}

struct BudgetCache<'a> {
    params: &'a LeafBudgetParams,
    values: HashMap<FieldElement, std::result::Result<u64, String>>,
}

impl BudgetCache<'_> {
    fn get(&mut self, n: &FieldElement) -> std::result::Result<u64, String> {
        if let Some(v) = self.values.get(n) {
            return v.clone();
        }
        let v = leaf_budget(n, self.params).map_err(|e| e.to_string());
        self.values.insert(n.clone(), v.clone());
        v
    }
}

pub fn verify_leaf_budget_properties(grid: &[FieldElement], p: &LeafBudgetParams) -> LeafBudgetFindings {
    let start = Instant::now();
    let mut cache = BudgetCache { params: p, values: HashMap::new() };
    let half = FieldElement::from_ratio(1, 2);

    let mut concavity = VerificationReport::new("budget-concavity");
    for (i, l) in grid.iter().enumerate() {
        for m in &grid[i..] {
            let mid = &(l + m) * &half;
            let witness = format!("ℓ = {}, m = {}", crate::table::render_exact(l), crate::table::render_exact(m));
            match (cache.get(l), cache.get(m), cache.get(&mid)) {
                (Ok(a), Ok(b), Ok(c)) => {
                    concavity.check(a + b <= 2 * c, witness, "L_ℓ + L_m ≤ 2·L_{(ℓ+m)/2}", || {
                        format!("{a} + {b} > 2·{c}")
                    })
                }
                (a, b, c) => {
                    concavity.check(false, witness, "resolvable leaf budgets", || format!("{a:?}, {b:?}, {c:?}"))
                }
            }
        }
    }
    let concavity = concavity.finish(start);

    let start = Instant::now();
    let mut halving = VerificationReport::new("budget-halving");
    let wa = WeightScheme::omega().weight(Generator::A).clone();
    let half_eta = &FieldElement::eta() * &half;
    for n in grid {
        let shrunk = &half_eta * &(n + &wa);
        let witness = format!("n = {}", crate::table::render_exact(n));
        match (cache.get(n), cache.get(&shrunk)) {
            (Ok(ln), Ok(ls)) => halving.check(ls == ln / 2, witness, "L_{(η/2)(n+ω(a))} = ⌊L_n/2⌋", || {
                format!("{ls} vs ⌊{ln}/2⌋ = {}", ln / 2)
            }),
            (a, b) => halving.check(false, witness, "resolvable leaf budgets", || format!("{a:?}, {b:?}")),
        }
    }
    LeafBudgetFindings { concavity, halving: halving.finish(start) }
}

/// Radius of a table from which ι of every element of length ≤ `domain` can
/// be computed: max(domain, x*) with x* = 2ηω(a)/(1 − η), the fixed point of
/// x ↦ η(x + 2ω(a)).
pub fn injection_table_radius(domain: &FieldElement) -> FieldElement {
    let eta = FieldElement::eta();
    let wa = WeightScheme::omega().weight(Generator::A).clone();
    let fixed = (&(&eta * &wa) * &FieldElement::from_integers(2, 0, 0))
        .checked_div(&(&FieldElement::one() - &eta))
        .expect("η ≠ 1");
    if *domain > fixed {
        domain.clone()
    } else {
        fixed
    }
}

/// Over all elements of length ≤ `domain`: ι is injective, decode ∘ encode
/// is the identity, leaf counts respect L_{∂(g)}, tree shapes with m leaves
/// number at most C_{m−1}, and γ(n) ≤ C_{L_n−1}·2^{L_n−1}·γ(K)^{L_n} at
/// n = 0, 1/4, 1/2, ..., domain.
pub fn verify_injection(t: &BallTable, p: &LeafBudgetParams, domain: &FieldElement) -> Result<VerificationReport> {
    let start = Instant::now();
    if domain > t.radius() || p.k() > t.radius() {
        return Err(Error::TableTooSmall(format!("domain and K must not exceed table radius {}", t.radius())));
    }
    let mut r = VerificationReport::new("injection");
    let elements: Vec<_> = t.entries().filter(|(_, e)| e.length <= *domain).collect();
    let encoded: Vec<(CodeTree, Portrait, std::result::Result<u64, String>)> = elements
        .par_iter()
        .map(|(_, e)| {
            let tree = encode(&e.word, p, t)?;
            let back = decode(&tree)?;
            Ok((tree, back, leaf_budget(&e.length, p).map_err(|err| err.to_string())))
        })
        .collect::<Result<_>>()?;

    let mut seen: HashMap<String, &Word> = HashMap::new();
    let mut shapes: BTreeMap<usize, HashSet<String>> = BTreeMap::new();
    for ((key, e), (tree, back, budget)) in elements.iter().zip(&encoded) {
        let text = tree.to_string();
        let clash = seen.insert(text.clone(), &e.word);
        r.check(clash.is_none(), format!("ι({})", e.word), "distinct serialization", || {
            format!("{text} also encodes {}", clash.unwrap())
        });
        r.check(&back.canonical_key() == *key, format!("decode(ι({}))", e.word), "the original element", || {
            format!("{back:?}")
        });
        let leaves = tree.leaf_count() as u64;
        match budget {
            Ok(l) => {
                r.check(leaves <= *l, format!("ι({}) = {text}", e.word), format!("≤ L_∂ = {l} leaves"), || {
                    format!("{leaves} leaves at ∂ = {}", e.length)
                })
            }
            Err(msg) => r.check(false, format!("L at ∂({})", e.word), "resolvable leaf budget", || msg.clone()),
        }
        shapes.entry(tree.leaf_count()).or_default().insert(tree.shape());
    }
    for (m, s) in &shapes {
        let c = catalan(*m as u64 - 1);
        r.check(
            num_bigint::BigUint::from(s.len()) <= c,
            format!("{m}-leaf shapes"),
            format!("≤ C_{} = {c}", m - 1),
            || s.len().to_string(),
        );
    }

    let quarter = FieldElement::from_ratio(1, 4);
    let mut points = Vec::new();
    let mut n = FieldElement::zero();
    while n <= *domain {
        points.push(n.clone());
        n = &n + &quarter;
    }
    let gammas = growth_series(t, &points)?;
    for (n, g) in points.iter().zip(gammas) {
        let witness = format!("n = {}", crate::table::render_exact(n));
        match upper_bound(n, p, t) {
            Ok(bound) => {
                r.check(num_bigint::BigUint::from(g) <= bound, witness, "γ(n) ≤ C·2^(L−1)·γ(K)^L", || {
                    format!("γ = {g}, bound = {bound}")
                })
            }
            Err(e) => r.check(false, witness, "resolvable bound", || e.to_string()),
        }
    }
    Ok(r.finish(start))
}

/// Integer grid {from, ..., to} as field elements.
pub fn integer_grid(from: i64, to: i64) -> Vec<FieldElement> {
    (from..=to).map(|n| FieldElement::from_integers(n, 0, 0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::enumerate_ball;

    fn int(n: i64) -> FieldElement {
        FieldElement::from_integers(n, 0, 0)
    }

    #[test]
    fn omega_identities_hold() {
        let r = check_weight_identities(&WeightScheme::omega());
        assert!(r.passed(), "{r}");
        assert_eq!(r.checked, 13);
    }

    #[test]
    fn perturbed_scheme_is_caught() {
        let omega = WeightScheme::omega();
        let bumped = omega.weight(Generator::D) + &FieldElement::from_ratio(1, 100);
        let r = check_weight_identities(&omega.with_weight(Generator::D, bumped).unwrap());
        assert!(!r.passed());
        assert!(r.violations.iter().any(|v| v.witness == "η(ω(a)+ω(d)) = ω(b)"));
        assert!(r.violations.iter().any(|v| v.actual.contains("x^2")));
    }

    #[test]
    fn unit_scheme_fails_identities_but_not_triangles() {
        let r = check_weight_identities(&WeightScheme::unit());
        assert!(!r.passed());
        assert!(r.violations.iter().all(|v| !v.witness.contains('≤')));
    }

    #[test]
    fn minimal_forms_on_small_ball() {
        let t = enumerate_ball(&WeightScheme::omega(), &int(2)).unwrap();
        let r = verify_minimal_form(&t).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.checked as usize, t.len() * 2);
    }

    #[test]
    fn minimal_forms_fail_when_fusion_is_expensive() {
        // ω(d) > ω(b) + ω(c): "bc" beats the alternating "d".
        let ws = WeightScheme::new("cheap-bc", [int(1), int(1), int(1), int(3)]).unwrap();
        let t = enumerate_ball(&ws, &int(2)).unwrap();
        let r = verify_minimal_form(&t).unwrap();
        assert!(!r.passed());
        assert!(r.violations.iter().any(|v| v.witness == "bc"));
    }

    #[test]
    fn shortening_on_small_ball() {
        let t = enumerate_ball(&WeightScheme::omega(), &int(3)).unwrap();
        let r = verify_shortening(&t).unwrap();
        assert!(r.passed(), "{r}");
        let small = enumerate_ball(&WeightScheme::omega(), &int(1)).unwrap();
        assert!(matches!(verify_shortening(&small), Err(Error::TableTooSmall(_))));
    }

    #[test]
    fn shortening_equality_at_d() {
        let omega = WeightScheme::omega();
        let lhs = &FieldElement::eta() * &(omega.weight(Generator::D) + omega.weight(Generator::A));
        assert_eq!(&lhs, omega.weight(Generator::B));
    }

    #[test]
    fn psi_consistency_small() {
        let r = verify_psi_consistency(4, 4);
        assert!(r.passed(), "{r}");
        assert!(r.checked > 0);
    }

    #[test]
    fn wrong_psi_entry_is_caught() {
        let mut table = SectionTable::GRIGORCHUK;
        table.d = (Some(Generator::A), Some(Generator::B));
        let r = verify_psi_consistency_with(&table, 3, 3);
        assert!(!r.passed());
        let mut swapped = SectionTable::GRIGORCHUK;
        swapped.c = (Some(Generator::D), Some(Generator::A));
        assert!(!verify_psi_consistency_with(&swapped, 2, 3).passed());
    }

    #[test]
    fn halving_claim_holds_on_small_grid() {
        let p = LeafBudgetParams::default();
        let f = verify_leaf_budget_properties(&integer_grid(2, 8), &p);
        assert!(f.halving.passed(), "{}", f.halving);
        // 7 + 10 > 2·8 at (4, 6).
        assert!(f.concavity.violations.iter().any(|v| v.witness == "ℓ = 4, m = 6"));
    }

    #[test]
    fn injection_on_radius_two() {
        let p = LeafBudgetParams::default();
        let domain = int(2);
        let t = enumerate_ball(&WeightScheme::omega(), &injection_table_radius(&domain)).unwrap();
        let r = verify_injection(&t, &p, &domain).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn report_rendering() {
        let r = check_weight_identities(&WeightScheme::omega());
        assert!(r.render(3).starts_with("weights: PASS (13 checks, 0 violations)"));
        assert_eq!(r.to_json()["passed"], true);
        assert!(r.to_json().get("elapsed").is_none());
    }
}
