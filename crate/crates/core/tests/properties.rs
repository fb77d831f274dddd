use grigorchuk::table::{growth_rows, read_table, write_table};
use grigorchuk::verify::injection_table_radius;
use grigorchuk::*;
use proptest::prelude::*;

fn int(n: i64) -> FieldElement {
    FieldElement::from_integers(n, 0, 0)
}

fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0usize..4, 0..=max)
        .prop_map(|v| Word::new(v.into_iter().map(|i| Generator::ALL[i]).collect()))
}

/// Rewrites an even word as a product of elements of V and a-conjugates of
/// them: a star letter behind an odd number of a's becomes a·x·a.
fn as_conjugates(w: &Word) -> Vec<Word> {
    let mut odd = false;
    let mut out = Vec::new();
    for &g in w.letters() {
        match g {
            Generator::A => odd = !odd,
            x if odd => out.push(Word::new(vec![Generator::A, x, Generator::A])),
            x => out.push(Word::new(vec![x])),
        }
    }
    out
}

proptest! {
    #[test]
    fn even_words_lie_in_normal_closure_of_v(w in word_strategy(10)) {
        let w = if activity(&w) { w.with(Generator::A) } else { w };
        let factors = as_conjugates(&w);
        let product = factors.iter().fold(Word::empty(), |acc, f| acc.concat(f));
        prop_assert!(is_trivial(&w.concat(&product.reversed())));
    }

    #[test]
    fn conjugates_of_v_are_even(g in word_strategy(8), i in 1usize..4) {
        let x = Generator::ALL[i];
        let conj = g.concat(&Word::new(vec![x])).concat(&g.reversed());
        prop_assert!(!activity(&conj));
        prop_assert!(!Portrait::of_word(&conj).activity());
    }
}

/// Element lengths behind every interior node of ι(g).
fn check_tree_shortening(tree: &CodeTree, t: &BallTable, eta: &FieldElement, wa: &FieldElement) {
    let CodeTree::Node { children, .. } = tree else { return };
    let parent = decode(tree).unwrap();
    let parent_len = &t.get(&parent.canonical_key()).expect("parent in table").length;
    let bound = eta * &(parent_len + wa);
    for child in children.iter() {
        let key = decode(child).unwrap().canonical_key();
        let len = &t.get(&key).expect("child in table").length;
        assert!(*len <= bound, "child {child} of {tree}: {len} > {bound}");
        check_tree_shortening(child, t, eta, wa);
    }
}

#[test]
fn encode_children_respect_section_shortening() {
    let domain = int(4);
    let t = enumerate_ball(&WeightScheme::omega(), &injection_table_radius(&domain)).unwrap();
    let p = LeafBudgetParams::default();
    let eta = FieldElement::eta();
    let wa = t.scheme().weight(Generator::A).clone();
    for (_, e) in t.entries().filter(|(_, e)| e.length <= domain) {
        check_tree_shortening(&encode(&e.word, &p, &t).unwrap(), &t, &eta, &wa);
    }
}

#[test]
fn injection_holds_on_radius_four() {
    let domain = int(4);
    let t = enumerate_ball(&WeightScheme::omega(), &injection_table_radius(&domain)).unwrap();
    let r = verify_injection(&t, &LeafBudgetParams::default(), &domain).unwrap();
    assert!(r.passed(), "{}", r.render(5));
}

#[test]
fn serialized_trees_parse_back() {
    let t = enumerate_ball(&WeightScheme::omega(), &injection_table_radius(&int(2))).unwrap();
    let p = LeafBudgetParams::default();
    for (key, e) in t.entries().filter(|(_, e)| e.length <= int(2)) {
        let tree = encode(&e.word, &p, &t).unwrap();
        let parsed = CodeTree::parse(&tree.to_string()).unwrap();
        assert_eq!(parsed, tree);
        assert_eq!(&decode(&parsed).unwrap().canonical_key(), key);
    }
}

#[test]
fn saved_table_reproduces_growth() {
    let omega = WeightScheme::omega();
    let t = enumerate_ball(&omega, &int(3)).unwrap();
    let mut buf = Vec::new();
    write_table(&t, &mut buf).unwrap();
    let back = read_table(buf.as_slice()).unwrap();
    let points: Vec<FieldElement> = (0..=12).map(|j| FieldElement::from_ratio(j, 4)).collect();
    assert_eq!(growth_rows(&t, &points, false).unwrap(), growth_rows(&back, &points, false).unwrap());
    assert_eq!(growth_function(&back, &int(1)).unwrap(), 14);
}

#[test]
fn upper_bound_dominates_growth() {
    let t = enumerate_ball(&WeightScheme::omega(), &int(5)).unwrap();
    let p = LeafBudgetParams::default();
    for j in 0..=20 {
        let n = FieldElement::from_ratio(j, 4);
        let g = growth_function(&t, &n).unwrap();
        assert!(num_bigint::BigUint::from(g) <= upper_bound(&n, &p, &t).unwrap(), "n = {j}/4");
    }
}

#[test]
fn larger_cutoff_gives_fewer_leaves() {
    let t = enumerate_ball(&WeightScheme::omega(), &int(4)).unwrap();
    let k1 = LeafBudgetParams::default();
    let k2 = LeafBudgetParams::new(int(2)).unwrap();
    for (_, e) in t.entries().filter(|(_, e)| e.length <= int(2)) {
        assert_eq!(encode(&e.word, &k2, &t).unwrap().leaf_count(), 1);
        assert!(encode(&e.word, &k1, &t).unwrap().leaf_count() >= 1);
    }
}
