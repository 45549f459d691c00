#![allow(dead_code)]

use profinite::fo::{Formula, Sentence, Signature};
use profinite::word::{Alphabet, Dfa, WordFramework};
use profinite::{TruncatedPoint, Value};
use rand::Rng;

pub fn ab() -> Alphabet {
    Alphabet::new(['a', 'b']).unwrap()
}

/// `[even-length, contains-a]` over `{a, b}`.
pub fn parity_and_a() -> WordFramework {
    let a = ab();
    WordFramework::with_dfas(
        a.clone(),
        [Dfa::even_length(&a), Dfa::contains_symbol(&a, 'a').unwrap()],
    )
    .unwrap()
}

pub fn pt(vals: &[&str]) -> TruncatedPoint {
    vals.iter().copied().collect()
}

pub fn label(s: &str) -> Value {
    Value::label(s)
}

/// A complete DFA with `1..=max_states` states and labels drawn from a pool
/// of three, so distinct states may share a value.
pub fn random_dfa<R: Rng>(rng: &mut R, alphabet: &Alphabet, max_states: usize) -> Dfa {
    let n = rng.gen_range(1..=max_states);
    let transition = (0..n)
        .map(|_| (0..alphabet.len()).map(|_| rng.gen_range(0..n)).collect())
        .collect();
    let value_of = (0..n)
        .map(|_| Value::label(["p", "q", "r"][rng.gen_range(0..3)]))
        .collect();
    Dfa::new(alphabet.clone(), rng.gen_range(0..n), transition, value_of).unwrap()
}

pub fn random_word<R: Rng>(rng: &mut R, alphabet: &Alphabet, max_len: usize) -> String {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| alphabet.symbols()[rng.gen_range(0..alphabet.len())])
        .collect()
}

/// `E` is a strict linear order without a maximum, on a nonempty universe.
pub fn unbounded_linear_order() -> Sentence {
    let core = strict_linear_order_without_max();
    Sentence::new(Formula::exists("x", Formula::eq("x", "x")).and(core.into_formula())).unwrap()
}

/// The same without the nonemptiness conjunct; vacuously true on the empty structure.
pub fn strict_linear_order_without_max() -> Sentence {
    let e = |x: &str, y: &str| Formula::rel("E", &[x, y]);
    let irreflexive = Formula::forall("x", e("x", "x").not());
    let transitive = Formula::forall(
        "x",
        Formula::forall(
            "y",
            Formula::forall("z", e("x", "y").and(e("y", "z")).implies(e("x", "z"))),
        ),
    );
    let total = Formula::forall(
        "x",
        Formula::forall("y", Formula::eq("x", "y").or(e("x", "y")).or(e("y", "x"))),
    );
    let no_max = Formula::forall("x", Formula::exists("y", e("x", "y")));
    Sentence::new(irreflexive.and(transitive).and(total).and(no_max)).unwrap()
}

pub fn digraph_sentences() -> Vec<Sentence> {
    [
        "exists x. E(x,x)",
        "forall x. forall y. !E(x,y) | E(y,x)",
        "exists x. exists y. !x = y",
        "forall x. exists y. E(x,y)",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect()
}

pub fn digraph() -> Signature {
    Signature::digraph()
}
