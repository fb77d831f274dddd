//! Words over {a, b, c, d}, the recursive action on finite binary strings,
//! free-product reduction and the ψ decomposition of the level-1 stabilizer.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    A,
    B,
    C,
    D,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::A, Generator::B, Generator::C, Generator::D];

    pub fn letter(self) -> char {
        match self {
            Generator::A => 'a',
            Generator::B => 'b',
            Generator::C => 'c',
            Generator::D => 'd',
        }
    }

    pub fn from_letter(ch: char) -> Option<Self> {
        match ch {
            'a' => Some(Generator::A),
            'b' => Some(Generator::B),
            'c' => Some(Generator::C),
            'd' => Some(Generator::D),
            _ => None,
        }
    }

    /// True for b, c, d: the non-trivial elements of the Klein group V.
    pub fn in_klein(self) -> bool {
        self != Generator::A
    }

    /// Product of two distinct elements of {b, c, d}.
    fn klein_product(self, other: Self) -> Self {
        use Generator::*;
        match (self, other) {
            (B, C) | (C, B) => D,
            (B, D) | (D, B) => C,
            (C, D) | (D, C) => B,
            _ => unreachable!("klein_product on {self:?}, {other:?}"),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A finite word in the generators. Rendered as a letter string, the empty
/// word as "1".
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Generator>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Generator>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, g: Generator) {
        self.0.push(g);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn with(&self, g: Generator) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(g);
        Word(v)
    }

    /// The inverse word: generators are involutions.
    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Free-product normal form: no equal neighbours and no two adjacent
    /// letters from {b, c, d}.
    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != p[1] && !(p[0].in_klein() && p[1].in_klein()))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for g in &self.0 {
            write!(f, "{}", g.letter())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Letter strings over a, b, c, d; "" and "1" denote the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::empty());
        }
        s.chars()
            .map(|ch| Generator::from_letter(ch).ok_or_else(|| Error::Parse(format!("{ch:?} is not a generator"))))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl From<Vec<Generator>> for Word {
    fn from(v: Vec<Generator>) -> Self {
        Word(v)
    }
}

/// A finite string over {0, 1}.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryString(Vec<bool>);

impl BinaryString {
    pub fn new(bits: Vec<bool>) -> Self {
        BinaryString(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// x·σ.
    pub fn prepend(&self, x: bool) -> BinaryString {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(x);
        v.extend_from_slice(&self.0);
        BinaryString(v)
    }

    /// All strings of exactly `len` bits, in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = BinaryString> {
        (0u64..1u64 << len).map(move |m| BinaryString((0..len).map(|i| m >> (len - 1 - i) & 1 == 1).collect()))
    }
}

impl fmt::Display for BinaryString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryString({self})")
    }
}

impl FromStr for BinaryString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("{ch:?} is not a binary digit"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BinaryString)
    }
}

/// Applies one generator in place, following
/// a(xσ) = x̄σ; b(0σ) = 0a(σ), b(1σ) = 1c(σ); c(0σ) = 0a(σ), c(1σ) = 1d(σ);
/// d(0σ) = 0σ, d(1σ) = 1b(σ).
fn act_generator(g: Generator, bits: &mut [bool]) {
    use Generator::*;
    let mut state = g;
    for bit in bits.iter_mut() {
        state = match (state, *bit) {
            (A, _) => {
                *bit = !*bit;
                return;
            }
            (B, false) | (C, false) => A,
            (B, true) => C,
            (C, true) => D,
            (D, false) => return,
            (D, true) => B,
        };
    }
}

/// Image of `s` under the element represented by `w`; the rightmost
/// generator acts first.
pub fn act(w: &Word, s: &BinaryString) -> BinaryString {
    let mut bits = s.0.clone();
    for &g in w.letters().iter().rev() {
        act_generator(g, &mut bits);
    }
    BinaryString(bits)
}

/// Normal form in the free product ⟨a⟩ ∗ V by a single stack scan.
pub fn reduce(w: &Word) -> Word {
    let mut out: Vec<Generator> = Vec::with_capacity(w.len());
    for &g in w.letters() {
        match out.last().copied() {
            Some(top) if top == g => {
                out.pop();
            }
            Some(top) if top.in_klein() && g.in_klein() => {
                *out.last_mut().unwrap() = top.klein_product(g);
            }
            _ => out.push(g),
        }
    }
    Word(out)
}

/// Parity of the number of a-letters; `false` iff the element fixes the
/// first letter of every string.
pub fn activity(w: &Word) -> bool {
    w.letters().iter().filter(|&&g| g == Generator::A).count() % 2 == 1
}

/// The two sections ψ(x) = (x₀, x₁) of each element of V, `None` standing
/// for the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SectionTable {
    pub b: (Option<Generator>, Option<Generator>),
    pub c: (Option<Generator>, Option<Generator>),
    pub d: (Option<Generator>, Option<Generator>),
}

impl SectionTable {
    /// b ↦ (a, c), c ↦ (a, d), d ↦ (1, b).
    pub const GRIGORCHUK: SectionTable = SectionTable {
        b: (Some(Generator::A), Some(Generator::C)),
        c: (Some(Generator::A), Some(Generator::D)),
        d: (None, Some(Generator::B)),
    };

    fn sections(&self, g: Generator) -> (Option<Generator>, Option<Generator>) {
        match g {
            Generator::B => self.b,
            Generator::C => self.c,
            Generator::D => self.d,
            Generator::A => unreachable!("a has no ψ image"),
        }
    }
}

impl Default for SectionTable {
    fn default() -> Self {
        Self::GRIGORCHUK
    }
}

/// ψ(w) = (w₀, w₁) for a word with even a-parity, as reduced words.
pub fn psi_split(w: &Word) -> Result<(Word, Word)> {
    psi_split_with(&SectionTable::GRIGORCHUK, w)
}

/// ψ with an explicit section table. A letter of V preceded by an odd number
/// of a's is a conjugate x^a and contributes its sections swapped.
pub fn psi_split_with(table: &SectionTable, w: &Word) -> Result<(Word, Word)> {
    if activity(w) {
        return Err(Error::Precondition(format!("psi_split of {w}: odd number of a-letters")));
    }
    let mut left = Vec::with_capacity(w.len() / 2 + 1);
    let mut right = Vec::with_capacity(w.len() / 2 + 1);
    let mut swapped = false;
    for &g in w.letters() {
        if g == Generator::A {
            swapped = !swapped;
            continue;
        }
        let (s0, s1) = table.sections(g);
        let (s0, s1) = if swapped { (s1, s0) } else { (s0, s1) };
        left.extend(s0);
        right.extend(s1);
    }
    Ok((reduce(&Word(left)), reduce(&Word(right))))
}

/// Sections (g|₀, g|₁) of an arbitrary element, defined by
/// g(xσ) = g(x)·g|ₓ(σ), together with its activity.
pub fn sections(w: &Word) -> (bool, Word, Word) {
    let r = reduce(w);
    if activity(&r) {
        // g = (g·a)·a, so g(xσ) = (g·a)(x̄σ) and g|ₓ = (g·a)|ₓ̄.
        let (h0, h1) = psi_split(&reduce(&r.with(Generator::A))).expect("g·a is in H");
        (true, h1, h0)
    } else {
        let (h0, h1) = psi_split(&r).expect("even parity");
        (false, h0, h1)
    }
}

/// Word problem: reduce, then recurse into ψ.
pub fn is_trivial(w: &Word) -> bool {
    let r = reduce(w);
    if r.is_empty() {
        return true;
    }
    if r.len() == 1 || activity(&r) {
        return false;
    }
    let (w0, w1) = psi_split(&r).expect("even parity");
    is_trivial(&w0) && is_trivial(&w1)
}
