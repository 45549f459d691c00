mod common;

use std::collections::BTreeMap;

use common::*;
use profinite::framework::{
    check_axiom_a, check_axiom_b, complement_language, contains, intersect_languages,
    union_languages,
};
use profinite::word::{Dfa, WordFramework};
use profinite::{Error, Framework, Language, Result, Value};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn membership() {
    let fw = parity_and_a();
    let even = Language::new(0, [label("even")]);
    assert!(contains(&fw, &even, &"ab".into()).unwrap());
    assert!(!contains(&fw, &even, &"a".into()).unwrap());
    let has_a = Language::new(1, [label("yes")]);
    assert!(!contains(&fw, &has_a, &"bbb".into()).unwrap());
}

#[test]
fn membership_errors() {
    let fw = parity_and_a();
    let ghost = Language::new(9, [label("even")]);
    assert_eq!(
        contains(&fw, &ghost, &"a".into()).unwrap_err(),
        Error::UnknownRecogniser { index: 9, count: 2 }
    );
    let even = Language::new(0, [label("even")]);
    assert!(matches!(
        contains(&fw, &even, &"abc".into()),
        Err(Error::OutsideDomain(_))
    ));
    let bogus = Language::new(0, [label("maybe")]);
    assert!(matches!(
        contains(&fw, &bogus, &"a".into()),
        Err(Error::InvalidLanguage { .. })
    ));
}

#[test]
fn intersection() {
    let mut fw = parity_and_a();
    let even = Language::new(0, [label("even")]);
    let has_a = Language::new(1, [label("yes")]);
    let both = intersect_languages(&mut fw, &even, &has_a).unwrap();
    assert_eq!(both.recogniser, 2);
    assert_eq!(fw.recogniser_count(), 3);
    assert!(contains(&fw, &both, &"ab".into()).unwrap());
    for w in ab().words().take(127) {
        assert_eq!(
            contains(&fw, &both, &w).unwrap(),
            w.len() % 2 == 0 && w.contains('a'),
            "{w}"
        );
    }
}

#[test]
fn intersection_with_full_language_is_identity() {
    let mut fw = parity_and_a();
    let has_a = Language::new(1, [label("yes")]);
    let full = Language::full(&fw, 1).unwrap();
    let meet = intersect_languages(&mut fw, &has_a, &full).unwrap();
    for w in ab().words().take(100) {
        assert_eq!(
            contains(&fw, &meet, &w).unwrap(),
            contains(&fw, &has_a, &w).unwrap()
        );
    }
}

#[test]
fn intersection_with_complement_is_empty() {
    let mut fw = parity_and_a();
    let even = Language::new(0, [label("even")]);
    let odd = complement_language(&fw, &even).unwrap();
    let meet = intersect_languages(&mut fw, &even, &odd).unwrap();
    // 1 + 2 + 4 + ... + 64 = 127 words of length <= 6; the 126 nonempty ones and ε.
    for w in ab().words().take(127) {
        assert!(!contains(&fw, &meet, &w).unwrap());
    }
}

#[test]
fn complements() {
    let fw = parity_and_a();
    let even = Language::new(0, [label("even")]);
    let odd = complement_language(&fw, &even).unwrap();
    assert_eq!(odd, Language::new(0, [label("odd")]));
    assert_eq!(complement_language(&fw, &odd).unwrap(), even);
    let all = complement_language(&fw, &Language::empty(&fw, 1).unwrap()).unwrap();
    assert_eq!(all, Language::full(&fw, 1).unwrap());
    for w in ab().words().take(7) {
        assert!(contains(&fw, &all, &w).unwrap());
    }
}

#[test]
fn unions() {
    let mut fw = parity_and_a();
    let even = Language::new(0, [label("even")]);
    let has_a = Language::new(1, [label("yes")]);
    let odd = complement_language(&fw, &even).unwrap();
    let everything = union_languages(&mut fw, &even, &odd).unwrap();
    for w in ab().words().take(127) {
        assert!(contains(&fw, &everything, &w).unwrap());
    }
    let nothing = Language::empty(&fw, 0).unwrap();
    let same = union_languages(&mut fw, &nothing, &has_a).unwrap();
    for w in ab().words().take(100) {
        assert_eq!(
            contains(&fw, &same, &w).unwrap(),
            contains(&fw, &has_a, &w).unwrap()
        );
    }
    let either = union_languages(&mut fw, &even, &has_a).unwrap();
    assert!(!contains(&fw, &either, &"b".into()).unwrap());
    assert!(contains(&fw, &either, &"bb".into()).unwrap());
}

#[test]
fn boolean_operations_are_extensionally_commutative_and_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut fw = parity_and_a();
    fw.push(Dfa::contains_symbol(&ab(), 'b').unwrap()).unwrap();
    let words: Vec<String> = ab().words().take(63).collect();
    for _ in 0..10 {
        let l: Vec<Language> = (0..3)
            .map(|i| profinite::framework::random_language(&fw, i, &mut rng).unwrap())
            .collect();
        let ab_ = intersect_languages(&mut fw, &l[0], &l[1]).unwrap();
        let ba = intersect_languages(&mut fw, &l[1], &l[0]).unwrap();
        let left = intersect_languages(&mut fw, &ab_, &l[2]).unwrap();
        let bc = intersect_languages(&mut fw, &l[1], &l[2]).unwrap();
        let right = intersect_languages(&mut fw, &l[0], &bc).unwrap();
        let u1 = union_languages(&mut fw, &l[0], &l[1]).unwrap();
        let u2 = union_languages(&mut fw, &l[1], &l[0]).unwrap();
        for w in &words {
            assert_eq!(
                contains(&fw, &ab_, w).unwrap(),
                contains(&fw, &ba, w).unwrap()
            );
            assert_eq!(
                contains(&fw, &left, w).unwrap(),
                contains(&fw, &right, w).unwrap()
            );
            assert_eq!(
                contains(&fw, &u1, w).unwrap(),
                contains(&fw, &u2, w).unwrap()
            );
            for x in &l {
                let c = complement_language(&fw, x).unwrap();
                assert_eq!(contains(&fw, &c, w).unwrap(), !contains(&fw, x, w).unwrap());
            }
        }
    }
}

#[test]
fn word_axiom_a_uses_singleton_automata() {
    let mut fw = parity_and_a();
    let report = check_axiom_a(&mut fw, 10).unwrap();
    assert!(report.passed);
    assert_eq!(report.witnesses.len(), 10);
    for (w, i) in &report.witnesses {
        assert_eq!(fw.dfa(*i).unwrap(), &Dfa::singleton(&ab(), w).unwrap());
    }
}

#[test]
fn word_axiom_b() {
    let mut fw = parity_and_a();
    fw.push(Dfa::singleton(&ab(), "ab").unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let report = check_axiom_b(&mut fw, 50, 200, &mut rng).unwrap();
    assert!(report.passed, "{report:?}");
    assert_eq!(report.objects_checked, 200);
}

#[test]
fn self_intersection_is_idempotent() {
    let mut fw = parity_and_a();
    let l = Language::new(1, [label("no")]);
    let meet = intersect_languages(&mut fw, &l, &l).unwrap();
    for w in ab().words().take(100) {
        assert_eq!(
            contains(&fw, &meet, &w).unwrap(),
            contains(&fw, &l, &w).unwrap()
        );
    }
}

/// Objects `0..` and one constant recogniser; nothing separates anything.
struct Constant {
    values: Vec<Value>,
}

impl Framework for Constant {
    type Object = u32;

    fn object(&self, n: usize) -> Result<u32> {
        Ok(n as u32)
    }

    fn check_object(&self, _w: &u32) -> Result<()> {
        Ok(())
    }

    fn recogniser_count(&self) -> usize {
        1
    }

    fn value_set(&self, index: usize) -> Result<&[Value]> {
        self.check_index(index)?;
        Ok(&self.values)
    }

    fn evaluate(&self, index: usize, _w: &u32) -> Result<Value> {
        self.check_index(index)?;
        Ok(self.values[0].clone())
    }

    fn intersect(&mut self, _l1: &Language, _l2: &Language) -> Result<Language> {
        unreachable!("not used")
    }
}

#[test]
fn constant_recogniser_separates_nothing() {
    let mut fw = Constant {
        values: vec![label("c")],
    };
    let report = check_axiom_a(&mut fw, 3).unwrap();
    assert!(!report.passed);
    assert_eq!(report.counterexample, Some((0, 1)));
    assert!(report.witnesses.is_empty());
}

#[test]
fn word_framework_file() {
    let text =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/word.json"))
            .unwrap();
    let fw = WordFramework::from_json(&text).unwrap();
    assert_eq!(fw.recogniser_count(), 2);
    let expect: BTreeMap<&str, &str> = [("", "even"), ("a", "odd")].into();
    for (w, v) in expect {
        assert_eq!(fw.evaluate(0, &w.to_string()).unwrap(), label(v));
    }
    assert!(WordFramework::from_json("[]").is_err());
}
