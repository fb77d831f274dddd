//! Tree representations of group elements.
//!
//! An element of length at most K is a single leaf. A longer element g is
//! written as a root labelled h ∈ {1, a} with gh in the level-1 stabilizer,
//! whose two subtrees represent the sections of gh. Counting such trees
//! bounds the growth function by C_{L−1}·2^{L−1}·γ(K)^L, where L = L_n is the
//! leaf budget for length n.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};

use crate::approx::{self, is_power_of_two, ApproxReal};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::group::{activity, psi_split, reduce, Generator, Word};
use crate::metrics::{growth_function, BallTable, WeightScheme};
use crate::portrait::{canonical_key, Portrait};

pub const DEFAULT_PRECISION_BITS: u32 = 128;
pub const DEFAULT_MAX_PRECISION_BITS: u32 = 4096;

/// ζ = ω(a)/(2/η − 1), where 2/η − 1 = η² + η.
pub fn zeta() -> FieldElement {
    let omega = WeightScheme::omega();
    let denom = FieldElement::from_integers(0, 1, 1);
    omega.weight(Generator::A).checked_div(&denom).expect("η² + η is nonzero")
}

/// 2/η as an exact field element.
pub fn two_over_eta() -> FieldElement {
    FieldElement::from_integers(2, 0, 0).checked_div(&FieldElement::eta()).expect("η is nonzero")
}

/// α = log 2 / log(2/η), enclosed to about `bits` bits.
pub fn alpha(bits: u32) -> ApproxReal {
    let guard = bits + 16;
    let theta = two_over_eta().to_approx(guard + 8);
    let ln_theta = theta.ln(guard).expect("2/η > 1");
    approx::ln2(guard).div(&ln_theta, guard).expect("log(2/η) > 0").rounded(bits)
}

#[derive(Clone, Debug)]
pub struct LeafBudgetParams {
    k: FieldElement,
    zeta: FieldElement,
    alpha: ApproxReal,
    precision_bits: u32,
    max_precision_bits: u32,
}

impl LeafBudgetParams {
    /// Parameters for cutoff K; requires K > ζ.
    pub fn new(k: FieldElement) -> Result<Self> {
        Self::with_precision(k, DEFAULT_PRECISION_BITS, DEFAULT_MAX_PRECISION_BITS)
    }

    pub fn with_precision(k: FieldElement, precision_bits: u32, max_precision_bits: u32) -> Result<Self> {
        let zeta = zeta();
        if k <= zeta {
            return Err(Error::Precondition(format!("K = {k} must exceed ζ ≈ {:.6}", zeta.to_f64())));
        }
        if precision_bits == 0 || max_precision_bits < precision_bits {
            return Err(Error::Precondition("precision limits must satisfy 0 < bits ≤ max".into()));
        }
        Ok(LeafBudgetParams { k, zeta, alpha: alpha(precision_bits), precision_bits, max_precision_bits })
    }

    pub fn k(&self) -> &FieldElement {
        &self.k
    }

    pub fn zeta(&self) -> &FieldElement {
        &self.zeta
    }

    pub fn alpha(&self) -> &ApproxReal {
        &self.alpha
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }
}

impl Default for LeafBudgetParams {
    fn default() -> Self {
        Self::new(FieldElement::one()).expect("1 > ζ")
    }
}

/// L_n = max{1, ⌈2((n − ζ)/(K − ζ))^α⌉ − 1}.
///
/// The ceiling is taken only once the enclosure of 2·r^α separates from the
/// integers. An enclosure that keeps straddling 2^j is resolved exactly:
/// 2·r^α = 2^j iff r = (2/η)^(j−1), which is decidable in Q(η).
pub fn leaf_budget(n: &FieldElement, p: &LeafBudgetParams) -> Result<u64> {
    if n.signum().is_lt() {
        return Err(Error::Precondition(format!("leaf budget at negative n = {n}")));
    }
    if n <= &p.k {
        return Ok(1);
    }
    let ratio = (n - &p.zeta).checked_div(&(&p.k - &p.zeta))?;
    let from_ceiling = |c: &BigInt| -> u64 {
        let l = c - BigInt::one();
        l.to_u64().unwrap_or(u64::MAX).max(1)
    };
    let mut bits = p.precision_bits;
    let mut alpha_ball = p.alpha.clone();
    loop {
        let guard = bits + 16;
        let r = ratio.to_approx(guard);
        let v = r
            .powf(&alpha_ball, guard)
            .ok_or_else(|| Error::Precondition("ratio enclosure is not positive".into()))?
            .scale(&BigInt::from(2).into(), bits);
        if let Some(c) = v.ceil_if_separated() {
            return Ok(from_ceiling(&c));
        }
        let lo = v.lower().ceil().to_integer();
        let hi = v.upper().floor().to_integer();
        if lo == hi {
            if let Some(j) = is_power_of_two(&lo).filter(|&j| j >= 1) {
                if ratio == two_over_eta().pow(j - 1) {
                    return Ok(from_ceiling(&lo));
                }
            }
        }
        if bits >= p.max_precision_bits {
            return Err(Error::PrecisionAmbiguity { n: n.to_string(), bits });
        }
        bits = (bits * 2).min(p.max_precision_bits);
        alpha_ball = alpha(bits + 16);
    }
}

/// The n-th Catalan number, (2n choose n)/(n + 1).
pub fn catalan(n: u64) -> BigUint {
    let mut c = BigUint::one();
    for k in 0..n {
        c = c * BigUint::from(2 * (2 * k + 1)) / BigUint::from(k + 2);
    }
    c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootLabel {
    One,
    A,
}

impl RootLabel {
    fn symbol(self) -> &'static str {
        match self {
            RootLabel::One => "1",
            RootLabel::A => "a",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CodeTree {
    Leaf { key: Vec<u8>, word: Word },
    Node { label: RootLabel, children: Box<[CodeTree; 2]> },
}

impl CodeTree {
    pub fn leaf(word: Word) -> CodeTree {
        CodeTree::Leaf { key: canonical_key(&word), word }
    }

    pub fn node(label: RootLabel, left: CodeTree, right: CodeTree) -> CodeTree {
        CodeTree::Node { label, children: Box::new([left, right]) }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            CodeTree::Leaf { .. } => 1,
            CodeTree::Node { children, .. } => children[0].leaf_count() + children[1].leaf_count(),
        }
    }

    /// The unlabelled shape: "." for a leaf, "(LR)" for a node.
    pub fn shape(&self) -> String {
        match self {
            CodeTree::Leaf { .. } => ".".into(),
            CodeTree::Node { children, .. } => format!("({}{})", children[0].shape(), children[1].shape()),
        }
    }

    /// Parses the "(h g0 g1)" form with leaf words.
    pub fn parse(s: &str) -> Result<CodeTree> {
        let tokens = tokenize(s);
        let mut pos = 0;
        let t = parse_tree(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::MalformedTree(format!("trailing input in {s:?}")));
        }
        Ok(t)
    }
}

fn tokenize(s: &str) -> Vec<String> {
    s.replace('(', " ( ").replace(')', " ) ").split_whitespace().map(str::to_string).collect()
}

fn parse_tree(tokens: &[String], pos: &mut usize) -> Result<CodeTree> {
    let tok = tokens.get(*pos).ok_or_else(|| Error::MalformedTree("unexpected end of input".into()))?;
    *pos += 1;
    if tok != "(" {
        let word: Word = tok.parse().map_err(|e| Error::MalformedTree(format!("leaf {tok:?}: {e}")))?;
        return Ok(CodeTree::leaf(word));
    }
    let label = match tokens.get(*pos).map(String::as_str) {
        Some("1") => RootLabel::One,
        Some("a") => RootLabel::A,
        other => return Err(Error::MalformedTree(format!("node label must be 1 or a, found {other:?}"))),
    };
    *pos += 1;
    let left = parse_tree(tokens, pos)?;
    let right = parse_tree(tokens, pos)?;
    if tokens.get(*pos).map(String::as_str) != Some(")") {
        return Err(Error::MalformedTree("expected )".into()));
    }
    *pos += 1;
    Ok(CodeTree::node(label, left, right))
}

impl fmt::Display for CodeTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeTree::Leaf { word, .. } => write!(f, "{word}"),
            CodeTree::Node { label, children } => {
                write!(f, "({} {} {})", label.symbol(), children[0], children[1])
            }
        }
    }
}

/// ι(g). Leaves carry the table's minimal word for their element.
pub fn encode(g: &Word, p: &LeafBudgetParams, t: &BallTable) -> Result<CodeTree> {
    let key = canonical_key(g);
    let entry = t
        .get(&key)
        .ok_or_else(|| Error::TableTooSmall(format!("length of {g} is not resolvable within radius {}", t.radius())))?;
    if entry.length <= p.k {
        return Ok(CodeTree::Leaf { key, word: entry.word.clone() });
    }
    let (label, gh) =
        if activity(g) { (RootLabel::A, reduce(&g.with(Generator::A))) } else { (RootLabel::One, reduce(g)) };
    let (g0, g1) = psi_split(&gh)?;
    Ok(CodeTree::node(label, encode(&g0, p, t)?, encode(&g1, p, t)?))
}

/// ι⁻¹, assembled as a portrait: a node labelled h stands for x·h where x
/// has sections (g₀, g₁) and acts trivially at the root.
pub fn decode(tree: &CodeTree) -> Result<Portrait> {
    match tree {
        CodeTree::Leaf { key, word } => {
            let p = Portrait::of_word(word);
            if &p.canonical_key() != key {
                return Err(Error::MalformedTree(format!("leaf key does not match word {word}")));
            }
            Ok(p)
        }
        CodeTree::Node { label, children } => {
            let p0 = decode(&children[0])?;
            let p1 = decode(&children[1])?;
            Ok(match label {
                RootLabel::One => Portrait::from_parts(false, p0, p1),
                // (x·a)(yσ) = x(ȳσ), so the sections swap.
                RootLabel::A => Portrait::from_parts(true, p1, p0),
            })
        }
    }
}

/// C_{L−1}·2^{L−1}·γ(K)^L with L = L_n.
pub fn upper_bound(n: &FieldElement, p: &LeafBudgetParams, t: &BallTable) -> Result<BigUint> {
    let gamma_k = growth_function(t, &p.k)
        .map_err(|_| Error::TableTooSmall(format!("γ(K) needs radius ≥ K = {}, table has {}", p.k, t.radius())))?;
    let l = leaf_budget(n, p)?;
    let leaves = u32::try_from(l).map_err(|_| Error::Precondition(format!("leaf budget {l} too large")))?;
    Ok(catalan(l - 1) * (BigUint::one() << (l - 1) as usize) * BigUint::from(gamma_k).pow(leaves))
}
