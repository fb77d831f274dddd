//! Weighted word lengths, exhaustive balls in the Cayley graph and the growth
//! function.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::group::{Generator, Word};
use crate::portrait::canonical_key;

/// Default resource guard for enumeration.
pub const DEFAULT_ELEMENT_CAP: usize = 10_000_000;

/// A positive weight on each generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightScheme {
    name: String,
    weights: [FieldElement; 4],
}

impl WeightScheme {
    pub fn new(name: impl Into<String>, weights: [FieldElement; 4]) -> Result<Self> {
        for (g, w) in Generator::ALL.iter().zip(&weights) {
            if !w.is_positive() {
                return Err(Error::Precondition(format!("weight of {g} must be positive, got {w}")));
            }
        }
        Ok(WeightScheme { name: name.into(), weights })
    }

    /// ω(a) = 1 − η³, ω(b) = η³, ω(c) = 1 − η², ω(d) = 1 − η.
    pub fn omega() -> Self {
        WeightScheme {
            name: "omega".into(),
            weights: [
                FieldElement::from_integers(-1, 1, 1),
                FieldElement::from_integers(2, -1, -1),
                FieldElement::from_integers(1, 0, -1),
                FieldElement::from_integers(1, -1, 0),
            ],
        }
    }

    pub fn unit() -> Self {
        WeightScheme { name: "unit".into(), weights: std::array::from_fn(|_| FieldElement::one()) }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "omega" => Ok(Self::omega()),
            "unit" => Ok(Self::unit()),
            other => Err(Error::Parse(format!("unknown weight scheme {other:?} (expected unit or omega)"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn weight(&self, g: Generator) -> &FieldElement {
        &self.weights[g as usize]
    }

    pub fn weights(&self) -> &[FieldElement; 4] {
        &self.weights
    }

    /// Same scheme with one weight replaced; the result must stay positive.
    pub fn with_weight(&self, g: Generator, w: FieldElement) -> Result<Self> {
        let mut weights = self.weights.clone();
        weights[g as usize] = w;
        WeightScheme::new(format!("{}-modified", self.name), weights)
    }
}

/// Exact sum of the letter weights.
pub fn word_weight(w: &Word, ws: &WeightScheme) -> FieldElement {
    let mut counts = [0i64; 4];
    for &g in w.letters() {
        counts[g as usize] += 1;
    }
    let mut total = FieldElement::zero();
    for g in Generator::ALL {
        if counts[g as usize] > 0 {
            total = &total + &ws.weight(g).scale(&num_rational::BigRational::from_integer(counts[g as usize].into()));
        }
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallEntry {
    /// A minimal word: least letter count among minimal-weight words, then
    /// least lexicographically.
    pub word: Word,
    pub length: FieldElement,
}

/// All elements of ∂-length at most `radius`, keyed by canonical portrait
/// key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallTable {
    scheme: WeightScheme,
    radius: FieldElement,
    entries: BTreeMap<Vec<u8>, BallEntry>,
}

impl BallTable {
    pub(crate) fn from_parts(
        scheme: WeightScheme,
        radius: FieldElement,
        entries: BTreeMap<Vec<u8>, BallEntry>,
    ) -> Self {
        BallTable { scheme, radius, entries }
    }

    pub fn scheme(&self) -> &WeightScheme {
        &self.scheme
    }

    pub fn radius(&self) -> &FieldElement {
        &self.radius
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u8>, &BallEntry)> {
        self.entries.iter()
    }

    pub fn get(&self, key: &[u8]) -> Option<&BallEntry> {
        self.entries.get(key)
    }

    pub fn lookup(&self, w: &Word) -> Option<&BallEntry> {
        self.entries.get(&canonical_key(w))
    }

    /// Lengths in increasing order, for bulk growth queries.
    pub fn sorted_lengths(&self) -> Vec<FieldElement> {
        let mut v: Vec<FieldElement> = self.entries.values().map(|e| e.length.clone()).collect();
        v.sort();
        v
    }
}

/// Which words the shortest-path search may traverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Paths {
    /// Every word (adjacent equal letters are skipped; they only lead back).
    All,
    /// Only words without adjacent equal letters and without two adjacent
    /// letters from {b, c, d}.
    Alternating,
}

#[derive(Clone, PartialEq, Eq)]
struct Candidate {
    length: FieldElement,
    word: Word,
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.length
            .cmp(&other.length)
            .then_with(|| self.word.len().cmp(&other.word.len()))
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn last_class(w: &Word) -> u8 {
    match w.letters().last() {
        None => 0,
        Some(Generator::A) => 1,
        Some(_) => 2,
    }
}

/// Dijkstra from the identity with right multiplication by generators and
/// exact priorities. Returns the first-settled (minimal) entry per element.
pub(crate) fn shortest_paths(
    ws: &WeightScheme,
    radius: &FieldElement,
    cap: usize,
    paths: Paths,
) -> Result<BTreeMap<Vec<u8>, BallEntry>> {
    if radius.signum() == Ordering::Less {
        return Err(Error::Precondition(format!("radius {radius} is negative")));
    }
    let mut settled_states: HashSet<Vec<u8>> = HashSet::new();
    let mut best: HashMap<Vec<u8>, Candidate> = HashMap::new();
    let mut out: BTreeMap<Vec<u8>, BallEntry> = BTreeMap::new();
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(Candidate { length: FieldElement::zero(), word: Word::empty() }));

    let state_key = |elem: &[u8], w: &Word| -> Vec<u8> {
        let mut k = elem.to_vec();
        if paths == Paths::Alternating {
            k.push(last_class(w));
        }
        k
    };

    while let Some(Reverse(cand)) = heap.pop() {
        let elem = canonical_key(&cand.word);
        let skey = state_key(&elem, &cand.word);
        if settled_states.contains(&skey) {
            continue;
        }
        settled_states.insert(skey.clone());
        best.remove(&skey);
        out.entry(elem).or_insert_with(|| BallEntry { word: cand.word.clone(), length: cand.length.clone() });

        let last = cand.word.letters().last().copied();
        for g in Generator::ALL {
            if Some(g) == last {
                continue;
            }
            if paths == Paths::Alternating && last.is_some_and(|l| l.in_klein()) && g.in_klein() {
                continue;
            }
            let length = &cand.length + ws.weight(g);
            if length > *radius {
                continue;
            }
            let next = Candidate { length, word: cand.word.with(g) };
            let nkey = state_key(&canonical_key(&next.word), &next.word);
            if settled_states.contains(&nkey) {
                continue;
            }
            if best.get(&nkey).is_some_and(|b| *b <= next) {
                continue;
            }
            best.insert(nkey, next.clone());
            heap.push(Reverse(next));
            if settled_states.len() + best.len() > cap {
                return Err(Error::ResourceLimit { cap });
            }
        }
    }
    Ok(out)
}

/// The ball of the given radius, with exact minimal lengths.
pub fn enumerate_ball(ws: &WeightScheme, radius: &FieldElement) -> Result<BallTable> {
    enumerate_ball_capped(ws, radius, DEFAULT_ELEMENT_CAP)
}

pub fn enumerate_ball_capped(ws: &WeightScheme, radius: &FieldElement, cap: usize) -> Result<BallTable> {
    let entries = shortest_paths(ws, radius, cap, Paths::All)?;
    Ok(BallTable::from_parts(ws.clone(), radius.clone(), entries))
}

/// ∂(w) read from the table.
pub fn length_of(w: &Word, t: &BallTable) -> Result<FieldElement> {
    t.lookup(w)
        .map(|e| e.length.clone())
        .ok_or_else(|| Error::NotInBall { word: w.to_string(), radius: t.radius().to_string() })
}

/// γ(n) = #{g : ∂(g) ≤ n}.
pub fn growth_function(t: &BallTable, n: &FieldElement) -> Result<u64> {
    check_within(t, n)?;
    Ok(t.entries().filter(|(_, e)| e.length <= *n).count() as u64)
}

fn check_within(t: &BallTable, n: &FieldElement) -> Result<()> {
    if n > t.radius() {
        return Err(Error::BeyondRadius { point: n.to_string(), radius: t.radius().to_string() });
    }
    Ok(())
}

/// γ at many points, sharing one sort of the table's lengths.
pub fn growth_series(t: &BallTable, points: &[FieldElement]) -> Result<Vec<u64>> {
    let lengths = t.sorted_lengths();
    points
        .iter()
        .map(|n| {
            check_within(t, n)?;
            Ok(lengths.partition_point(|l| l <= n) as u64)
        })
        .collect()
}

/// Least-squares fit of log log γ(n) against log n.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentFit {
    pub exponent: f64,
    pub intercept: f64,
    /// Standard error of the slope (0 for an exact fit or only two points).
    pub std_error: f64,
    /// Root mean square of the fit residuals.
    pub residual: f64,
    pub points: usize,
}

/// Fits the exponent from (n, γ(n)) pairs; pairs with γ < 2 or n ≤ 0 are
/// dropped.
pub fn fit_exponent(samples: &[(f64, f64)]) -> Result<ExponentFit> {
    let pts: Vec<(f64, f64)> =
        samples.iter().filter(|(n, g)| *n > 0.0 && *g >= 2.0).map(|(n, g)| (n.ln(), g.ln().ln())).collect();
    if pts.len() < 3 {
        return Err(Error::Degenerate(format!("need at least 3 samples with γ ≥ 2, have {}", pts.len())));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx <= f64::EPSILON || syy <= f64::EPSILON {
        return Err(Error::Degenerate("sample points or growth values do not vary".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let std_error = if pts.len() > 2 { (sse / (k - 2.0) / sxx).sqrt() } else { 0.0 };
    Ok(ExponentFit { exponent: slope, intercept, std_error, residual: (sse / k).sqrt(), points: pts.len() })
}

/// Exponent estimate from an enumerated table at the given sample points.
pub fn estimate_alpha(t: &BallTable, points: &[FieldElement]) -> Result<ExponentFit> {
    let gammas = growth_series(t, points)?;
    let samples: Vec<(f64, f64)> = points.iter().zip(&gammas).map(|(n, g)| (n.to_f64(), *g as f64)).collect();
    fit_exponent(&samples)
}
