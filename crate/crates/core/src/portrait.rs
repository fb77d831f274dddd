//! Canonical portraits: finite decorated binary trees that identify group
//! elements. A node records the activity of a section and its two
//! sub-sections; recursion stops at the nucleus {1, a, b, c, d}.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{reduce, sections, Generator, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Nucleus {
    One,
    A,
    B,
    C,
    D,
}

impl Nucleus {
    pub fn from_word(w: &Word) -> Option<Nucleus> {
        match w.letters() {
            [] => Some(Nucleus::One),
            [g] => Some(Nucleus::from(*g)),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Nucleus::One => '1',
            Nucleus::A => 'a',
            Nucleus::B => 'b',
            Nucleus::C => 'c',
            Nucleus::D => 'd',
        }
    }

    fn from_symbol(ch: u8) -> Option<Nucleus> {
        Some(match ch {
            b'1' => Nucleus::One,
            b'a' => Nucleus::A,
            b'b' => Nucleus::B,
            b'c' => Nucleus::C,
            b'd' => Nucleus::D,
            _ => return None,
        })
    }

    pub fn activity(self) -> bool {
        self == Nucleus::A
    }

    pub fn word(self) -> Word {
        match self {
            Nucleus::One => Word::empty(),
            Nucleus::A => Word::new(vec![Generator::A]),
            Nucleus::B => Word::new(vec![Generator::B]),
            Nucleus::C => Word::new(vec![Generator::C]),
            Nucleus::D => Word::new(vec![Generator::D]),
        }
    }

    /// Activity and sections of the nucleus element.
    fn expansion(self) -> (bool, Nucleus, Nucleus) {
        match self {
            Nucleus::One => (false, Nucleus::One, Nucleus::One),
            Nucleus::A => (true, Nucleus::One, Nucleus::One),
            Nucleus::B => (false, Nucleus::A, Nucleus::C),
            Nucleus::C => (false, Nucleus::A, Nucleus::D),
            Nucleus::D => (false, Nucleus::One, Nucleus::B),
        }
    }
}

impl From<Generator> for Nucleus {
    fn from(g: Generator) -> Self {
        match g {
            Generator::A => Nucleus::A,
            Generator::B => Nucleus::B,
            Generator::C => Nucleus::C,
            Generator::D => Nucleus::D,
        }
    }
}

const NUCLEUS: [Nucleus; 5] = [Nucleus::One, Nucleus::A, Nucleus::B, Nucleus::C, Nucleus::D];

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Portrait {
    Leaf(Nucleus),
    Node { active: bool, children: Box<[Portrait; 2]> },
}

impl Portrait {
    /// Assembles the element with the given activity and sections,
    /// collapsing to a leaf when that element lies in the nucleus.
    pub fn from_parts(active: bool, left: Portrait, right: Portrait) -> Portrait {
        if let (Portrait::Leaf(l), Portrait::Leaf(r)) = (&left, &right) {
            for n in NUCLEUS {
                if n.expansion() == (active, *l, *r) {
                    return Portrait::Leaf(n);
                }
            }
        }
        Portrait::Node { active, children: Box::new([left, right]) }
    }

    pub fn of_word(w: &Word) -> Portrait {
        let r = reduce(w);
        if let Some(n) = Nucleus::from_word(&r) {
            return Portrait::Leaf(n);
        }
        let (active, s0, s1) = sections(&r);
        Portrait::from_parts(active, Portrait::of_word(&s0), Portrait::of_word(&s1))
    }

    pub fn identity() -> Portrait {
        Portrait::Leaf(Nucleus::One)
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Portrait::Leaf(Nucleus::One))
    }

    pub fn activity(&self) -> bool {
        match self {
            Portrait::Leaf(n) => n.activity(),
            Portrait::Node { active, .. } => *active,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Portrait::Leaf(_) => 0,
            Portrait::Node { children, .. } => 1 + children[0].depth().max(children[1].depth()),
        }
    }

    /// Preorder encoding: node := activity-bit ('0'/'1') followed by
    /// 'L' + label or 'N' + left + right.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.encode_into(&mut out);
        out
    }

    fn encode_into(&self, out: &mut Vec<u8>) {
        out.push(if self.activity() { b'1' } else { b'0' });
        match self {
            Portrait::Leaf(n) => {
                out.push(b'L');
                out.push(n.symbol() as u8);
            }
            Portrait::Node { children, .. } => {
                out.push(b'N');
                children[0].encode_into(out);
                children[1].encode_into(out);
            }
        }
    }

    /// Inverse of [`Portrait::canonical_key`]; rejects non-canonical input.
    pub fn from_key(key: &[u8]) -> Result<Portrait> {
        let mut pos = 0;
        let p = decode_at(key, &mut pos)?;
        if pos != key.len() {
            return Err(Error::Parse("trailing bytes after portrait".into()));
        }
        if p.canonical_key() != key {
            return Err(Error::Parse("portrait key is not canonical".into()));
        }
        Ok(p)
    }
}

fn decode_at(key: &[u8], pos: &mut usize) -> Result<Portrait> {
    let mut next = || {
        let b = key.get(*pos).copied().ok_or_else(|| Error::Parse("truncated portrait key".into()));
        *pos += 1;
        b
    };
    let active = match next()? {
        b'0' => false,
        b'1' => true,
        other => return Err(Error::Parse(format!("bad activity byte {other:#x}"))),
    };
    match next()? {
        b'L' => {
            let n = Nucleus::from_symbol(next()?).ok_or_else(|| Error::Parse("bad nucleus label".into()))?;
            Ok(Portrait::Leaf(n))
        }
        b'N' => {
            let left = decode_at(key, pos)?;
            let right = decode_at(key, pos)?;
            Ok(Portrait::from_parts(active, left, right))
        }
        other => Err(Error::Parse(format!("bad node tag {other:#x}"))),
    }
}

/// Convenience: canonical key of a word's element.
pub fn canonical_key(w: &Word) -> Vec<u8> {
    Portrait::of_word(w).canonical_key()
}

impl fmt::Debug for Portrait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Portrait::Leaf(n) => write!(f, "{}", n.symbol()),
            Portrait::Node { active, children } => {
                write!(f, "[{} {:?} {:?}]", u8::from(*active), children[0], children[1])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{act, is_trivial, BinaryString};
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn acts_equal(x: &Word, y: &Word, depth: usize) -> bool {
        (0..=depth).all(|len| BinaryString::all_of_length(len).all(|s| act(x, &s) == act(y, &s)))
    }

    #[test]
    fn portrait_examples() {
        assert_eq!(Portrait::of_word(&w("b")), Portrait::Leaf(Nucleus::B));
        assert_eq!(Portrait::of_word(&w("bc")), Portrait::Leaf(Nucleus::D));
        let expected = Portrait::from_parts(false, Portrait::of_word(&w("ca")), Portrait::of_word(&w("ac")));
        assert_eq!(Portrait::of_word(&w("abab")), expected);
        assert!(matches!(Portrait::of_word(&w("abab")), Portrait::Node { active: false, .. }));
        assert_eq!(Portrait::of_word(&Word::empty()), Portrait::identity());
        assert!(Portrait::of_word(&w("adadadad")).is_identity());
    }

    #[test]
    fn nucleus_words_collapse() {
        // b·(ad)^4 = b although the reduced word is long.
        assert_eq!(Portrait::of_word(&w("badadadad")), Portrait::Leaf(Nucleus::B));
        assert_eq!(Portrait::of_word(&w("adadadada")), Portrait::Leaf(Nucleus::A));
    }

    #[test]
    fn key_examples() {
        assert_eq!(canonical_key(&w("bc")), canonical_key(&w("d")));
        assert_ne!(canonical_key(&w("ab")), canonical_key(&w("ba")));
        assert!(!acts_equal(&w("ab"), &w("ba"), 8));
        assert_eq!(canonical_key(&Word::empty()), b"0L1".to_vec());
        assert_eq!(canonical_key(&w("a")), b"1La".to_vec());
    }

    #[test]
    fn key_round_trip_and_rejection() {
        for s in ["abab", "adacab", "b", "", "cabadacab"] {
            let p = Portrait::of_word(&w(s));
            assert_eq!(Portrait::from_key(&p.canonical_key()).unwrap(), p);
        }
        // Node spelling of b is not canonical.
        assert!(Portrait::from_key(b"0N1La0Lc").is_err());
        assert!(Portrait::from_key(b"0N").is_err());
    }

    fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(0usize..4, 0..=max)
            .prop_map(|v| Word::new(v.into_iter().map(|i| Generator::ALL[i]).collect()))
    }

    proptest! {
        #[test]
        fn equality_matches_word_problem(x in word_strategy(10), y in word_strategy(10)) {
            let same = Portrait::of_word(&x) == Portrait::of_word(&y);
            prop_assert_eq!(same, is_trivial(&x.concat(&y.reversed())));
            if same {
                prop_assert!(acts_equal(&x, &y, 7));
            }
        }

        #[test]
        fn distinct_portraits_are_separated_by_action(x in word_strategy(8), y in word_strategy(8)) {
            // Nucleus elements are told apart within 3 levels, and each level
            // of node structure adds at most one more.
            let px = Portrait::of_word(&x);
            let py = Portrait::of_word(&y);
            let depth = px.depth().max(py.depth()) + 3;
            prop_assert_eq!(acts_equal(&x, &y, depth), px == py);
        }
    }
}
