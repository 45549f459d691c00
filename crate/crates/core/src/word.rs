//! Finite words with complete deterministic automata as recognisers.
//!
//! A recogniser's value on a word is the label of the state it reaches, so
//! `K_φ` is the image of `value_of`. Projections of the profinite space are
//! computed exactly by reachability in product automata.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framework::{Cardinality, Framework, Language};
use crate::space::TruncatedPoint;
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("empty alphabet".into()));
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol {c:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, c: char) -> Result<usize> {
        self.symbols
            .iter()
            .position(|&s| s == c)
            .ok_or(Error::UnknownSymbol(c))
    }

    pub fn check_word(&self, w: &str) -> Result<()> {
        w.chars().try_for_each(|c| self.index_of(c).map(|_| ()))
    }

    /// The `n`-th word in length-lexicographic order (bijective base-k numeral).
    pub fn nth_word(&self, mut n: usize) -> String {
        let k = self.symbols.len();
        let mut digits = Vec::new();
        while n > 0 {
            n -= 1;
            digits.push(self.symbols[n % k]);
            n /= k;
        }
        digits.iter().rev().collect()
    }

    /// ε, a, b, aa, ab, … without end.
    pub fn words(&self) -> impl Iterator<Item = String> + '_ {
        (0..).map(move |n| self.nth_word(n))
    }
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = Error;

    fn try_from(symbols: Vec<String>) -> Result<Self> {
        let chars = symbols
            .iter()
            .map(|s| {
                let mut it = s.chars();
                match (it.next(), it.next()) {
                    (Some(c), None) => Ok(c),
                    _ => Err(Error::InvalidAlphabet(format!(
                        "symbol {s:?} is not one character"
                    ))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Alphabet::new(chars)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.symbols.iter().map(|c| c.to_string()).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct DfaRepr {
    alphabet: Alphabet,
    states: usize,
    initial: usize,
    transition: Vec<Vec<usize>>,
    value_of: Vec<Value>,
}

/// A complete DFA whose output is a label on the reached state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DfaRepr", into = "DfaRepr")]
pub struct Dfa {
    alphabet: Alphabet,
    initial: usize,
    /// `transition[state][symbol index]`
    transition: Vec<Vec<usize>>,
    value_of: Vec<Value>,
    values: Vec<Value>,
}

impl TryFrom<DfaRepr> for Dfa {
    type Error = Error;

    fn try_from(r: DfaRepr) -> Result<Self> {
        if r.transition.len() != r.states || r.value_of.len() != r.states {
            return Err(Error::InvalidDfa(format!(
                "declared {} states but transition has {} rows and value_of {} entries",
                r.states,
                r.transition.len(),
                r.value_of.len()
            )));
        }
        Dfa::new(r.alphabet, r.initial, r.transition, r.value_of)
    }
}

impl From<Dfa> for DfaRepr {
    fn from(d: Dfa) -> Self {
        DfaRepr {
            states: d.transition.len(),
            alphabet: d.alphabet,
            initial: d.initial,
            transition: d.transition,
            value_of: d.value_of,
        }
    }
}

impl Dfa {
    pub fn new(
        alphabet: Alphabet,
        initial: usize,
        transition: Vec<Vec<usize>>,
        value_of: Vec<Value>,
    ) -> Result<Self> {
        let n = transition.len();
        if n == 0 {
            return Err(Error::InvalidDfa("no states".into()));
        }
        if value_of.len() != n {
            return Err(Error::InvalidDfa(format!(
                "{} states but {} values",
                n,
                value_of.len()
            )));
        }
        if initial >= n {
            return Err(Error::InvalidDfa(format!(
                "initial state {initial} out of range"
            )));
        }
        for (s, row) in transition.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::InvalidDfa(format!(
                    "state {s} has {} transitions for {} symbols",
                    row.len(),
                    alphabet.len()
                )));
            }
            if let Some(t) = row.iter().find(|&&t| t >= n) {
                return Err(Error::InvalidDfa(format!(
                    "transition {s} -> {t} out of range"
                )));
            }
        }
        let mut values: Vec<Value> = Vec::new();
        for v in &value_of {
            if !values.contains(v) {
                values.push(v.clone());
            }
        }
        Ok(Dfa {
            alphabet,
            initial,
            transition,
            value_of,
            values,
        })
    }

    /// Two states tracking the parity of the length: `even`, `odd`.
    pub fn even_length(alphabet: &Alphabet) -> Self {
        let k = alphabet.len();
        Dfa::new(
            alphabet.clone(),
            0,
            vec![vec![1; k], vec![0; k]],
            vec!["even".into(), "odd".into()],
        )
        .expect("well-formed")
    }

    /// Two states: `no` until `symbol` has been read, then `yes`.
    pub fn contains_symbol(alphabet: &Alphabet, symbol: char) -> Result<Self> {
        let hit = alphabet.index_of(symbol)?;
        let before = (0..alphabet.len()).map(|i| usize::from(i == hit)).collect();
        Dfa::new(
            alphabet.clone(),
            0,
            vec![before, vec![1; alphabet.len()]],
            vec!["no".into(), "yes".into()],
        )
    }

    /// A single state labelled `label`.
    pub fn constant(alphabet: &Alphabet, label: &str) -> Self {
        Dfa::new(
            alphabet.clone(),
            0,
            vec![vec![0; alphabet.len()]],
            vec![label.into()],
        )
        .expect("well-formed")
    }

    /// The characteristic automaton of one word: a state per proper prefix
    /// (`prefix`), one reached exactly by `w` (`accept`), and a sink (`sink`).
    pub fn singleton(alphabet: &Alphabet, w: &str) -> Result<Self> {
        let letters = w
            .chars()
            .map(|c| alphabet.index_of(c))
            .collect::<Result<Vec<_>>>()?;
        let n = letters.len();
        let sink = n + 1;
        let mut transition = vec![vec![sink; alphabet.len()]; n + 2];
        for (i, &a) in letters.iter().enumerate() {
            transition[i][a] = i + 1;
        }
        let mut value_of = vec![Value::label("prefix"); n];
        value_of.push("accept".into());
        value_of.push("sink".into());
        Dfa::new(alphabet.clone(), 0, transition, value_of)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.transition.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn step(&self, state: usize, symbol: usize) -> usize {
        self.transition[state][symbol]
    }

    pub fn value_of(&self, state: usize) -> &Value {
        &self.value_of[state]
    }

    /// Distinct labels in order of first occurrence.
    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn reached_state(&self, w: &str) -> Result<usize> {
        w.chars().try_fold(self.initial, |s, c| {
            Ok(self.step(s, self.alphabet.index_of(c)?))
        })
    }

    pub fn run(&self, w: &str) -> Result<Value> {
        Ok(self.value_of[self.reached_state(w)?].clone())
    }

    /// Reachable part of the synchronous product; values are pairs.
    pub fn product(&self, other: &Dfa) -> Result<Dfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let k = self.alphabet.len();
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut order = vec![(self.initial, other.initial)];
        ids.insert(order[0], 0);
        let mut transition = Vec::new();
        let mut next = 0;
        while next < order.len() {
            let (p, q) = order[next];
            let mut row = Vec::with_capacity(k);
            for a in 0..k {
                let target = (self.step(p, a), other.step(q, a));
                let id = *ids.entry(target).or_insert_with(|| {
                    order.push(target);
                    order.len() - 1
                });
                row.push(id);
            }
            transition.push(row);
            next += 1;
        }
        let value_of = order
            .iter()
            .map(|&(p, q)| Value::pair(self.value_of[p].clone(), other.value_of[q].clone()))
            .collect();
        Dfa::new(self.alphabet.clone(), 0, transition, value_of)
    }

    /// Moore partition refinement on the reachable part; state values are preserved.
    pub fn minimize(&self) -> Dfa {
        let k = self.alphabet.len();
        let mut reachable = vec![self.initial];
        let mut seen = vec![false; self.state_count()];
        seen[self.initial] = true;
        let mut i = 0;
        while i < reachable.len() {
            for a in 0..k {
                let t = self.step(reachable[i], a);
                if !seen[t] {
                    seen[t] = true;
                    reachable.push(t);
                }
            }
            i += 1;
        }
        let mut class: HashMap<usize, usize> = HashMap::new();
        let mut labels: Vec<&Value> = Vec::new();
        for &s in &reachable {
            let c = match labels.iter().position(|l| *l == &self.value_of[s]) {
                Some(c) => c,
                None => {
                    labels.push(&self.value_of[s]);
                    labels.len() - 1
                }
            };
            class.insert(s, c);
        }
        loop {
            let mut signatures: Vec<(usize, Vec<usize>)> = Vec::new();
            let mut refined: HashMap<usize, usize> = HashMap::new();
            for &s in &reachable {
                let sig = (
                    class[&s],
                    (0..k).map(|a| class[&self.step(s, a)]).collect::<Vec<_>>(),
                );
                let c = match signatures.iter().position(|x| *x == sig) {
                    Some(c) => c,
                    None => {
                        signatures.push(sig);
                        signatures.len() - 1
                    }
                };
                refined.insert(s, c);
            }
            let stable = signatures.len() == class.values().max().map_or(0, |m| m + 1);
            class = refined;
            if stable {
                break;
            }
        }
        let count = class.values().max().map_or(0, |m| m + 1);
        let mut transition = vec![Vec::new(); count];
        let mut value_of = vec![Value::label(""); count];
        for &s in &reachable {
            let c = class[&s];
            if transition[c].is_empty() {
                transition[c] = (0..k).map(|a| class[&self.step(s, a)]).collect();
                value_of[c] = self.value_of[s].clone();
            }
        }
        Dfa::new(
            self.alphabet.clone(),
            class[&self.initial],
            transition,
            value_of,
        )
        .expect("quotient of a complete automaton")
    }
}

fn common_alphabet<'a>(dfas: &[&'a Dfa]) -> Result<Option<&'a Alphabet>> {
    let Some(first) = dfas.first() else {
        return Ok(None);
    };
    if dfas.iter().any(|d| d.alphabet != first.alphabet) {
        return Err(Error::AlphabetMismatch);
    }
    Ok(Some(&first.alphabet))
}

/// The reachable product graph of several automata, explored breadth-first
/// with symbols in alphabet order, so each state is first reached by its
/// length-lexicographically least word.
struct ProductGraph {
    states: Vec<Vec<usize>>,
    edges: Vec<Vec<usize>>,
    parent: Vec<Option<(usize, usize)>>,
}

impl ProductGraph {
    fn explore(alphabet: &Alphabet, dfas: &[&Dfa]) -> Self {
        let k = alphabet.len();
        let start: Vec<usize> = dfas.iter().map(|d| d.initial).collect();
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::from([(start.clone(), 0)]);
        let mut graph = ProductGraph {
            states: vec![start],
            edges: Vec::new(),
            parent: vec![None],
        };
        let mut queue = VecDeque::from([0usize]);
        while let Some(id) = queue.pop_front() {
            let mut row = Vec::with_capacity(k);
            for a in 0..k {
                let target: Vec<usize> = graph.states[id]
                    .iter()
                    .zip(dfas)
                    .map(|(&s, d)| d.step(s, a))
                    .collect();
                let tid = match ids.get(&target) {
                    Some(&t) => t,
                    None => {
                        let t = graph.states.len();
                        ids.insert(target.clone(), t);
                        graph.states.push(target);
                        graph.parent.push(Some((id, a)));
                        queue.push_back(t);
                        t
                    }
                };
                row.push(tid);
            }
            // BFS pops ids in creation order, so rows line up with state ids.
            graph.edges.push(row);
        }
        graph
    }

    fn point(&self, dfas: &[&Dfa], id: usize) -> TruncatedPoint {
        TruncatedPoint::new(
            self.states[id]
                .iter()
                .zip(dfas)
                .map(|(&s, d)| d.value_of(s).clone())
                .collect(),
        )
    }

    fn witness(&self, alphabet: &Alphabet, mut id: usize) -> String {
        let mut letters = Vec::new();
        while let Some((p, a)) = self.parent[id] {
            letters.push(alphabet.symbols()[a]);
            id = p;
        }
        letters.iter().rev().collect()
    }
}

fn witnesses_over(alphabet: &Alphabet, dfas: &[&Dfa]) -> BTreeMap<TruncatedPoint, String> {
    let graph = ProductGraph::explore(alphabet, dfas);
    let mut out = BTreeMap::new();
    for id in 0..graph.states.len() {
        out.entry(graph.point(dfas, id))
            .or_insert_with(|| graph.witness(alphabet, id));
    }
    out
}

/// Every realized value tuple with its length-lexicographically least word.
pub fn reachable_value_witnesses(dfas: &[&Dfa]) -> Result<BTreeMap<TruncatedPoint, String>> {
    let alphabet =
        common_alphabet(dfas)?.ok_or_else(|| Error::InvalidDfa("empty automaton list".into()))?;
    Ok(witnesses_over(alphabet, dfas))
}

/// `{ (run(d_1,w), …, run(d_k,w)) : w ∈ Σ* }`, exactly.
pub fn reachable_value_tuples(dfas: &[&Dfa]) -> Result<std::collections::BTreeSet<TruncatedPoint>> {
    Ok(reachable_value_witnesses(dfas)?.into_keys().collect())
}

/// Number of words whose value tuple is `point`: paths from the start to a
/// matching product state, infinite when such paths pass through a cycle.
fn count_words(alphabet: &Alphabet, dfas: &[&Dfa], point: &TruncatedPoint) -> Cardinality {
    let graph = ProductGraph::explore(alphabet, dfas);
    let n = graph.states.len();
    let target: Vec<bool> = (0..n).map(|id| graph.point(dfas, id) == *point).collect();
    let mut reverse = vec![Vec::new(); n];
    for (s, row) in graph.edges.iter().enumerate() {
        for &t in row {
            reverse[t].push(s);
        }
    }
    let mut useful: Vec<bool> = target.clone();
    let mut stack: Vec<usize> = (0..n).filter(|&i| target[i]).collect();
    while let Some(t) = stack.pop() {
        for &s in &reverse[t] {
            if !useful[s] {
                useful[s] = true;
                stack.push(s);
            }
        }
    }
    if !useful[0] {
        return Cardinality::Finite(0);
    }
    // Iterative DFS over useful states: a back edge means infinitely many words.
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let mut mark = vec![Mark::New; n];
    let mut count = vec![0u64; n];
    let mut frames: Vec<(usize, usize)> = vec![(0, 0)];
    mark[0] = Mark::Open;
    while let Some(frame) = frames.last_mut() {
        let s = frame.0;
        if frame.1 < graph.edges[s].len() {
            let t = graph.edges[s][frame.1];
            frame.1 += 1;
            if !useful[t] {
                continue;
            }
            match mark[t] {
                Mark::Open => return Cardinality::Infinite,
                Mark::New => {
                    mark[t] = Mark::Open;
                    frames.push((t, 0));
                }
                Mark::Done => {}
            }
        } else {
            let own = u64::from(target[s]);
            count[s] = graph.edges[s]
                .iter()
                .filter(|&&t| useful[t])
                .fold(own, |acc, &t| acc.saturating_add(count[t]));
            mark[s] = Mark::Done;
            frames.pop();
        }
    }
    Cardinality::Finite(count[0])
}

/// Words over a fixed alphabet recognised by a growable list of automata.
#[derive(Debug, Clone)]
pub struct WordFramework {
    alphabet: Alphabet,
    dfas: Vec<Dfa>,
    characteristic: HashMap<String, usize>,
}

impl WordFramework {
    pub fn new(alphabet: Alphabet) -> Self {
        WordFramework {
            alphabet,
            dfas: Vec::new(),
            characteristic: HashMap::new(),
        }
    }

    pub fn with_dfas(alphabet: Alphabet, dfas: impl IntoIterator<Item = Dfa>) -> Result<Self> {
        let mut fw = WordFramework::new(alphabet);
        for d in dfas {
            fw.push(d)?;
        }
        Ok(fw)
    }

    /// Parses a JSON array of automata sharing one alphabet.
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        let dfas: Vec<Dfa> = serde_json::from_str(text)?;
        let alphabet = dfas.first().map(|d| d.alphabet.clone()).ok_or_else(|| {
            serde::de::Error::custom("a word framework needs at least one automaton")
        })?;
        WordFramework::with_dfas(alphabet, dfas).map_err(serde::de::Error::custom)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dfa(&self, index: usize) -> Result<&Dfa> {
        self.dfas.get(index).ok_or(Error::UnknownRecogniser {
            index,
            count: self.dfas.len(),
        })
    }

    pub fn dfas(&self) -> &[Dfa] {
        &self.dfas
    }

    /// Appends a recogniser and returns its index.
    pub fn push(&mut self, dfa: Dfa) -> Result<usize> {
        if dfa.alphabet != self.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        self.dfas.push(dfa);
        Ok(self.dfas.len() - 1)
    }

    fn selected(&self, indices: &[usize]) -> Result<Vec<&Dfa>> {
        indices.iter().map(|&i| self.dfa(i)).collect()
    }
}

impl Framework for WordFramework {
    type Object = String;

    fn object(&self, n: usize) -> Result<String> {
        Ok(self.alphabet.nth_word(n))
    }

    fn check_object(&self, w: &String) -> Result<()> {
        self.alphabet
            .check_word(w)
            .map_err(|e| Error::OutsideDomain(format!("{w:?}: {e}")))
    }

    fn recogniser_count(&self) -> usize {
        self.dfas.len()
    }

    fn value_set(&self, index: usize) -> Result<&[Value]> {
        Ok(self.dfa(index)?.values())
    }

    fn evaluate(&self, index: usize, w: &String) -> Result<Value> {
        self.dfa(index)?.run(w)
    }

    fn intersect(&mut self, l1: &Language, l2: &Language) -> Result<Language> {
        let product = self.dfa(l1.recogniser)?.product(self.dfa(l2.recogniser)?)?;
        let accepted: Vec<Value> = product
            .values()
            .iter()
            .filter(|v| match v {
                Value::Pair(a, b) => l1.accepted.contains(a) && l2.accepted.contains(b),
                Value::Label(_) => false,
            })
            .cloned()
            .collect();
        let index = self.push(product)?;
        Ok(Language::new(index, accepted))
    }

    fn characteristic_recogniser(&mut self, w: &String) -> Option<Result<usize>> {
        if let Some(&i) = self.characteristic.get(w) {
            return Some(Ok(i));
        }
        Some(Dfa::singleton(&self.alphabet, w).and_then(|d| {
            let i = self.push(d)?;
            self.characteristic.insert(w.clone(), i);
            Ok(i)
        }))
    }

    fn exact_points(&self, indices: &[usize]) -> Option<Result<BTreeMap<TruncatedPoint, String>>> {
        Some(
            self.selected(indices)
                .map(|dfas| witnesses_over(&self.alphabet, &dfas)),
        )
    }

    fn exact_preimage_size(
        &self,
        indices: &[usize],
        point: &TruncatedPoint,
    ) -> Option<Result<Cardinality>> {
        Some(
            self.selected(indices)
                .map(|dfas| count_words(&self.alphabet, &dfas, point)),
        )
    }
}
