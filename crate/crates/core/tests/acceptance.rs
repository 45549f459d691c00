//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Brute-force oracles here are written against bitmasks and share no code
//! with the library routines they check.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use common::*;
use profinite::equations::{
    self, check_definable, satisfies_equation, LanguageFamily, VerdictKind,
};
use profinite::fo::{
    canonical_structures, evaluate_sentence, random_sentence, realized_truth_tuples, FoFramework,
};
use profinite::framework::{
    check_axiom_a, check_axiom_b, complement_language, contains, intersect_languages,
    random_language, union_languages,
};
use profinite::lattice::{self, random_instance, PointSet};
use profinite::space::{
    approximation_space, check_duality, check_isolated, permutation_invariance, realize, truncate,
};
use profinite::word::{reachable_value_tuples, Alphabet, Dfa, WordFramework};
use profinite::{Cardinality, Framework, Language, TruncatedPoint};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0;
const THEOREM_TRIALS: usize = 200;
const MAX_POINTS: usize = 5;
const THEOREM_TIME_LIMIT: Duration = Duration::from_secs(5);
const FO_TIME_LIMIT: Duration = Duration::from_secs(30);
/// Largest reachable product for which all words up to that length are enumerated.
const PUMPING_LIMIT: usize = 16;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn mask(a: &PointSet) -> u32 {
    a.iter().fold(0, |m, p| m | (1 << p))
}

fn masks(f: &lattice::Family) -> BTreeSet<u32> {
    f.iter().map(mask).collect()
}

/// Unions of intersections of generators, plus the empty set and the whole space.
fn oracle_lattice(n: usize, gens: &[u32]) -> BTreeSet<u32> {
    let full = (1u32 << n) - 1;
    let meets: Vec<u32> = (1u32..1 << gens.len())
        .map(|s| {
            (0..gens.len())
                .filter(|i| s & (1 << i) != 0)
                .fold(full, |m, i| m & gens[i])
        })
        .collect();
    let mut out: BTreeSet<u32> = [0, full].into();
    for s in 1u64..1 << meets.len() {
        out.insert(
            (0..meets.len())
                .filter(|i| s & (1 << i) != 0)
                .fold(0, |m, i| m | meets[i]),
        );
    }
    out
}

/// Unions of atoms, where an atom collects the points agreeing on every generator.
fn oracle_boolean(n: usize, gens: &[u32]) -> BTreeSet<u32> {
    let mut atoms: Vec<u32> = Vec::new();
    let signature = |p: usize| gens.iter().map(|g| g & (1 << p) != 0).collect::<Vec<_>>();
    for p in 0..n {
        match atoms
            .iter_mut()
            .find(|a| signature(a.trailing_zeros() as usize) == signature(p))
        {
            Some(a) => *a |= 1 << p,
            None => atoms.push(1 << p),
        }
    }
    (0u32..1 << atoms.len())
        .map(|s| {
            (0..atoms.len())
                .filter(|i| s & (1 << i) != 0)
                .fold(0, |m, i| m | atoms[i])
        })
        .collect()
}

/// Subsets satisfying every implication that holds in all of `family`.
fn oracle_defined(n: usize, family: &BTreeSet<u32>, symmetric: bool) -> BTreeSet<u32> {
    let holds = |u: usize, v: usize| {
        family
            .iter()
            .all(|&a| a & (1 << u) == 0 || a & (1 << v) != 0)
    };
    let mut eqs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if holds(u, v) && (!symmetric || holds(v, u)) {
                eqs.push((u, v));
            }
        }
    }
    (0u32..1 << n)
        .filter(|&a| {
            eqs.iter()
                .all(|&(u, v)| a & (1 << u) == 0 || a & (1 << v) != 0)
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for t in 0..THEOREM_TRIALS {
        let (n, gens) = random_instance(&mut rng, MAX_POINTS);
        let check = lattice::check_lattice_theorem(n, &gens).map_err(|e| e.to_string())?;
        let family: lattice::Family = check.family.iter().cloned().collect();
        let expected = oracle_lattice(n, &gens.iter().map(mask).collect::<Vec<_>>());
        ensure(masks(&family) == expected, || {
            format!("trial {t}: closure differs from oracle")
        })?;
        let defined = lattice::defined_family(n, &lattice::derive_equations(n, &family))
            .map_err(|e| e.to_string())?;
        ensure(defined == family && check.holds, || {
            format!("trial {t}: defined family != closure")
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < THEOREM_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{THEOREM_TRIALS}/{THEOREM_TRIALS} trials, {elapsed:.2?}"
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for t in 0..THEOREM_TRIALS {
        let (n, gens) = random_instance(&mut rng, MAX_POINTS);
        let check = lattice::check_boolean_corollary(n, &gens).map_err(|e| e.to_string())?;
        let family: lattice::Family = check.family.iter().cloned().collect();
        let expected = oracle_boolean(n, &gens.iter().map(mask).collect::<Vec<_>>());
        ensure(masks(&family) == expected, || {
            format!("trial {t}: Boolean closure differs from oracle")
        })?;
        let sym = lattice::symmetrize(&lattice::derive_equations(n, &family));
        ensure(
            check.equations.iter().copied().collect::<BTreeSet<_>>() == sym,
            || format!("trial {t}: equations"),
        )?;
        let defined = lattice::defined_family(n, &sym).map_err(|e| e.to_string())?;
        ensure(defined == family && check.holds, || {
            format!("trial {t}: defined family != Boolean closure")
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < THEOREM_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{THEOREM_TRIALS}/{THEOREM_TRIALS} trials, {elapsed:.2?}"
    ))
}

fn criterion_3() -> Outcome {
    let run = || -> profinite::Result<Outcome> {
        let mut fw = parity_and_a();
        let even = Language::new(0, [label("even")]);
        let has_a = Language::new(1, [label("yes")]);
        let meet = intersect_languages(&mut fw, &even, &has_a)?;
        let join = union_languages(&mut fw, &even, &has_a)?;
        let members = [
            Language::empty(&fw, 0)?,
            Language::full(&fw, 0)?,
            even.clone(),
            has_a.clone(),
            meet.clone(),
            join.clone(),
        ];
        let indices: Vec<usize> = (0..fw.recogniser_count()).collect();
        let space = approximation_space(&fw, &indices, 0)?;
        if !(space.exact() && space.len() == 4) {
            return Ok(Err(format!(
                "expected an exact 4-point space, got {}",
                space.len()
            )));
        }
        let fam = LanguageFamily::new([even.clone(), has_a.clone()]);
        let closure = equations::lattice_closure(&space, &fam)?;
        let images: BTreeSet<PointSet> = members
            .iter()
            .map(|l| equations::image(&space, l))
            .collect::<profinite::Result<_>>()?;
        if images != closure {
            return Ok(Err("member images are not the lattice closure".into()));
        }
        for l in &members {
            if check_definable(&space, &fam, l)?.verdict != VerdictKind::InLattice {
                return Ok(Err(format!("{l:?} not reported IN_LATTICE")));
            }
        }
        for generator in [&even, &has_a] {
            let single = LanguageFamily::new([generator.clone()]);
            let complement = complement_language(&fw, generator)?;
            let verdict = check_definable(&space, &single, &complement)?;
            let Some(cert) = verdict.certificate else {
                return Ok(Err(format!(
                    "no certificate against complement of {generator:?}"
                )));
            };
            let generator_ok = satisfies_equation(&space, generator, &cert)?;
            let complement_fails = !satisfies_equation(&space, &complement, &cert)?;
            let extremes_ok = satisfies_equation(&space, &Language::empty(&fw, 0)?, &cert)?
                && satisfies_equation(&space, &Language::full(&fw, 0)?, &cert)?;
            if !(generator_ok && complement_fails && extremes_ok) {
                return Ok(Err(format!(
                    "certificate {} -> {} does not re-verify",
                    cert.u, cert.v
                )));
            }
        }
        Ok(Ok(
            "6 closure members IN_LATTICE; 2 complement certificates re-verified".into(),
        ))
    };
    run().map_err(|e| e.to_string())?
}

/// Reachable product states by naive saturation, only to size the enumeration.
fn reachable_product_states(dfas: &[Dfa]) -> usize {
    let mut seen: HashSet<Vec<usize>> = HashSet::from([dfas.iter().map(|d| d.initial()).collect()]);
    loop {
        let next: Vec<Vec<usize>> = seen
            .iter()
            .flat_map(|s| {
                (0..2).map(move |a| s.iter().zip(dfas).map(|(&q, d)| d.step(q, a)).collect())
            })
            .filter(|s: &Vec<usize>| !seen.contains(s))
            .collect();
        if next.is_empty() {
            return seen.len();
        }
        seen.extend(next);
    }
}

fn random_dfa_list<R: Rng>(rng: &mut R, alphabet: &Alphabet) -> Vec<Dfa> {
    loop {
        let k = rng.gen_range(1..=3);
        let dfas: Vec<Dfa> = (0..k).map(|_| random_dfa(rng, alphabet, 4)).collect();
        if reachable_product_states(&dfas) <= PUMPING_LIMIT {
            return dfas;
        }
    }
}

fn criterion_4() -> Outcome {
    let a = ab();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut largest = 0;
    for case in 0..30 {
        let dfas = random_dfa_list(&mut rng, &a);
        let bound = reachable_product_states(&dfas);
        largest = largest.max(bound);
        let refs: Vec<&Dfa> = dfas.iter().collect();
        let exact = reachable_value_tuples(&refs).map_err(|e| e.to_string())?;
        let words = (1usize << (bound + 1)) - 1;
        let brute: BTreeSet<TruncatedPoint> = a
            .words()
            .take(words)
            .map(|w| TruncatedPoint::new(dfas.iter().map(|d| d.run(&w).unwrap()).collect()))
            .collect();
        ensure(exact == brute, || {
            format!("case {case}: reachability and enumeration disagree")
        })?;
    }
    Ok(format!("30/30 lists, largest product {largest} states"))
}

fn criterion_5() -> Outcome {
    let a = ab();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    for case in 0..20 {
        let fw = WordFramework::with_dfas(a.clone(), random_dfa_list(&mut rng, &a))
            .map_err(|e| e.to_string())?;
        let indices: Vec<usize> = (0..fw.recogniser_count()).collect();
        let space = approximation_space(&fw, &indices, 0).map_err(|e| e.to_string())?;
        let coord = rng.gen_range(0..indices.len());
        let l = random_language(&fw, indices[coord], &mut rng).map_err(|e| e.to_string())?;
        let report = check_duality(&fw, &l, &space).map_err(|e| e.to_string())?;
        ensure(report.passed && report.exact, || {
            format!("case {case}: {report:?}")
        })?;
        let img = equations::image(&space, &l).map_err(|e| e.to_string())?;
        for (i, p) in space.points().iter().enumerate() {
            for (j, q) in space.points().iter().enumerate() {
                if p.values()[coord] == q.values()[coord] {
                    ensure(img.contains(i) == img.contains(j), || {
                        format!("case {case}: cylinder split")
                    })?;
                }
            }
            let w = realize(&fw, &space, p).map_err(|e| e.to_string())?;
            ensure(truncate(&fw, &indices, &w).unwrap() == *p, || {
                format!("case {case}: bad witness")
            })?;
            ensure(contains(&fw, &l, &w).unwrap() == img.contains(i), || {
                format!("case {case}: membership")
            })?;
        }
    }
    Ok("20/20 languages".into())
}

fn criterion_6() -> Outcome {
    let a = ab();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    for case in 0..10 {
        let w = random_word(&mut rng, &a, 4);
        let mut fw = parity_and_a();
        fw.push(random_dfa(&mut rng, &a, 4)).unwrap();
        let base: Vec<usize> = (0..fw.recogniser_count()).collect();
        let s = fw
            .characteristic_recogniser(&w)
            .unwrap()
            .map_err(|e| e.to_string())?;
        let mut indices = base.clone();
        indices.push(s);
        let report = check_isolated(&fw, &w, &indices, 0).map_err(|e| e.to_string())?;
        ensure(
            report.exact && report.isolated && report.realizations == Cardinality::Finite(1),
            || format!("case {case} ({w:?}): {report:?}"),
        )?;
        // Without the singleton coordinate every point has infinitely many words.
        let point = truncate(&fw, &base, &w).unwrap();
        let before = fw.exact_preimage_size(&base, &point).unwrap().unwrap();
        ensure(before == Cardinality::Infinite, || {
            format!("case {case}: {before:?} before adding singleton")
        })?;
    }
    Ok("10/10 words isolated".into())
}

fn criterion_7() -> Outcome {
    let a = ab();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    for case in 0..20 {
        let report = if case % 2 == 0 {
            let fw =
                WordFramework::with_dfas(a.clone(), (0..3).map(|_| random_dfa(&mut rng, &a, 4)))
                    .map_err(|e| e.to_string())?;
            let mut perm: Vec<usize> = (0..3).collect();
            perm.shuffle(&mut rng);
            permutation_invariance(&fw, &[0, 1, 2], &perm, 0)
        } else {
            let sig = digraph();
            let fw = FoFramework::with_sentences(
                sig.clone(),
                (0..3).map(|_| random_sentence(&mut rng, &sig, 3)),
            )
            .map_err(|e| e.to_string())?;
            let mut perm: Vec<usize> = (0..3).collect();
            perm.shuffle(&mut rng);
            permutation_invariance(&fw, &[0, 1, 2], &perm, 3)
        }
        .map_err(|e| e.to_string())?;
        ensure(report.passed, || format!("case {case}: {report:?}"))?;
    }
    Ok("20/20 permutations (10 exact word, 10 first-order at size 3)".into())
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let sig = digraph();
    let s = unbounded_linear_order();
    let mut checked = 0;
    for n in 0..=4 {
        for m in canonical_structures(&sig, n).map_err(|e| e.to_string())? {
            ensure(!evaluate_sentence(&s, &m, &sig).unwrap(), || {
                format!("satisfied by {m}")
            })?;
            checked += 1;
        }
    }
    ensure(checked == 1 + 2 + 10 + 104 + 3044, || {
        format!("{checked} structures enumerated")
    })?;
    let tuples = realized_truth_tuples(&sig, &[s], 4).map_err(|e| e.to_string())?;
    ensure(tuples == BTreeSet::from([pt(&["false"])]), || {
        format!("realized {tuples:?}")
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed < FO_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "false on all {checked} structures of size <= 4, {elapsed:.2?}"
    ))
}

fn criterion_9() -> Outcome {
    let mut fw =
        FoFramework::with_sentences(digraph(), digraph_sentences()).map_err(|e| e.to_string())?;
    let a = check_axiom_a(&mut fw, 10).map_err(|e| e.to_string())?;
    ensure(a.passed, || format!("axiom a: {:?}", a.counterexample))?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let b = check_axiom_b(&mut fw, 20, 3, &mut rng).map_err(|e| e.to_string())?;
    ensure(b.passed, || format!("axiom b: {:?}", b.counterexample))?;
    Ok(format!(
        "axiom a up to 10 objects; axiom b 20 trials on {} structures",
        b.objects_checked
    ))
}

fn criterion_10() -> Outcome {
    // The 4-point space of [even-length, contains-a].
    let fw = parity_and_a();
    let space = approximation_space(&fw, &[0, 1], 0).map_err(|e| e.to_string())?;
    let gens = LanguageFamily::new([
        Language::new(0, [label("even")]),
        Language::new(1, [label("yes")]),
    ]);
    let images = gens.images(&space).map_err(|e| e.to_string())?;
    let m = oracle_lattice(4, &images.iter().map(mask).collect::<Vec<_>>());
    let d = oracle_defined(4, &m, false);
    println!(
        "    oracle, 4-point space {:?}",
        space
            .points()
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
    );
    println!(
        "    oracle, lattice closure: {} subsets {:?}",
        m.len(),
        m.iter().map(|a| format!("{a:04b}")).collect::<Vec<_>>()
    );
    let holds = |u: usize, v: usize| m.iter().all(|&a| a & (1 << u) == 0 || a & (1 << v) != 0);
    let non_reflexive: Vec<String> = (0..4)
        .flat_map(|u| (0..4).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v && holds(u, v))
        .map(|(u, v)| format!("{} -> {}", space.points()[u], space.points()[v]))
        .collect();
    println!("    oracle, non-reflexive equations: {non_reflexive:?}");
    println!(
        "    oracle, defined family: {} subsets, equal to closure: {}",
        d.len(),
        d == m
    );
    ensure(m.len() == 6 && d == m, || {
        "6-member closure is not equation-defined".into()
    })?;
    let verifier = equations::verify_lattice_theorem(&space, &gens).map_err(|e| e.to_string())?;
    ensure(verifier.holds && verifier.defined_size == 6, || {
        format!("{verifier:?}")
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for t in 0..THEOREM_TRIALS {
        let (n, gens) = random_instance(&mut rng, MAX_POINTS);
        let closure = oracle_lattice(n, &gens.iter().map(mask).collect::<Vec<_>>());
        let oracle_says = oracle_defined(n, &closure, false) == closure;
        let verifier_says = lattice::check_lattice_theorem(n, &gens)
            .map_err(|e| e.to_string())?
            .holds;
        ensure(oracle_says == verifier_says, || {
            format!("trial {t}: oracle {oracle_says}, verifier {verifier_says}")
        })?;
    }
    Ok(format!(
        "D = M = 6 on the 4-point space ({} non-reflexive equations); verifier matches oracle on {THEOREM_TRIALS} trials",
        non_reflexive.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("finite-space lattice theorem", criterion_1),
        ("Boolean corollary with symmetric equations", criterion_2),
        ("word framework end to end", criterion_3),
        ("exact reachability vs. enumeration", criterion_4),
        ("duality at truncation level", criterion_5),
        ("isolated points", criterion_6),
        ("order independence", criterion_7),
        ("no finite unbounded linear order", criterion_8),
        ("first-order framework axioms", criterion_9),
        ("closure vs. defined family oracle", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
