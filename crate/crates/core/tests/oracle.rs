//! Library results against brute force that enumerates every fake set or
//! every labeled plan directly.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use discreet_weighing::judge::{classify_privacy, consistent_assignments, count_consistent, membership_counts};
use discreet_weighing::search::{enumerate_f2_optimum, search_discreet_with, Pruning, SearchOutcome};
use discreet_weighing::strategies::build_named;
use discreet_weighing::weighmodel::{partition_by_itinerary, Outcome, ProblemInstance, Transcript, Weighing, WeighingPlan};
use proptest::prelude::*;

use common::{arb_setup, brute_consistent, combinations, weigh};

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn judge_matches_brute_force((t, f, fakes, plan) in arb_setup(10, 4), s in 0usize..=10) {
        prop_assume!(s <= t);
        let outcomes = plan.weighings.iter().map(|w| weigh(w, &fakes)).collect();
        let tr = Transcript::new(plan, outcomes).unwrap();
        for size in [f, s] {
            let brute = brute_consistent(t, size, &tr);
            prop_assert_eq!(count_consistent(t, size, &tr).unwrap(), brute.len() as u128);
            let listed: Vec<Vec<usize>> =
                consistent_assignments(t, size, &tr).unwrap().iter().map(|x| x.coins().to_vec()).collect();
            prop_assert_eq!(&listed, &brute);
            let mut per_coin = vec![0u128; t];
            for set in &brute {
                for &c in set {
                    per_coin[c] += 1;
                }
            }
            prop_assert_eq!(membership_counts(t, size, &tr).unwrap(), per_coin);
        }
    }
}

fn brute_privacy(t: usize, sets: &[Vec<usize>]) -> (Vec<usize>, Vec<usize>) {
    let real = (0..t).filter(|c| sets.iter().all(|s| !s.contains(c))).collect();
    let fake = (0..t).filter(|c| sets.iter().all(|s| s.contains(c))).collect();
    (real, fake)
}

type Case = (&'static str, usize, usize, usize, Option<usize>, usize);

#[test]
fn full_scale_strategies_against_brute_force() {
    // (strategy, t, f, d, a, expected count)
    let cases: [Case; 5] = [
        ("equal-piles", 80, 2, 1, Some(2), 1600),
        ("official", 80, 3, 2, None, 8000),
        ("leftover-reveal", 80, 3, 2, None, 16900),
        ("reference-pile", 80, 3, 2, None, 8000),
        ("triple-case", 80, 3, 2, None, 13254),
    ];
    for (name, t, f, d, a, want) in cases {
        let b = build_named(name, &ProblemInstance::new(t, f, d).unwrap(), a).unwrap();
        let tr = b.transcript().unwrap();
        let sets = brute_consistent(t, f, &tr);
        assert_eq!(sets.len(), want, "{name}");
        assert!(brute_consistent(t, d, &tr).is_empty(), "{name}: d still consistent");
        let (real, fake) = brute_privacy(t, &sets);
        let p = classify_privacy(&b.instance, &tr).unwrap();
        assert_eq!(p.revealed_real, real, "{name}");
        assert_eq!(p.revealed_fake, fake, "{name}");
        let best = sets.iter().flatten().fold(vec![0usize; t], |mut acc, &c| {
            acc[c] += 1;
            acc
        });
        let max = *best.iter().max().unwrap() as u128;
        assert_eq!(membership_counts(t, f, &tr).unwrap().into_iter().max().unwrap(), max, "{name}");
    }
}

#[test]
fn four_fakes_in_two_piles_against_brute_force() {
    let b = build_named("equal-piles", &ProblemInstance::new(80, 4, 3).unwrap(), Some(2)).unwrap();
    let tr = b.transcript().unwrap();
    assert_eq!(brute_consistent(80, 4, &tr).len(), 608400);
}

/// Every ordered weighing on `t` coins: disjoint pans of equal nonzero size.
fn all_weighings(t: usize) -> Vec<Weighing> {
    let mut out = Vec::new();
    for k in 1..=t / 2 {
        for left in combinations(t, k) {
            let rest: Vec<usize> = (0..t).filter(|c| !left.contains(c)).collect();
            for pick in combinations(rest.len(), k) {
                out.push(Weighing::new(left.iter().copied(), pick.iter().map(|&i| rest[i])));
            }
        }
    }
    out
}

/// Outcome sequences under which some size-`f` placement gives a valid
/// discreet proof against `d`, for one labeled plan.
fn brute_discreet_outcomes(t: usize, f: usize, d: usize, plan: &[Weighing]) -> Vec<Vec<Outcome>> {
    let key = |set: &[usize]| plan.iter().map(|w| weigh(w, set)).collect::<Vec<_>>();
    let mut groups: BTreeMap<Vec<Outcome>, Vec<Vec<usize>>> = BTreeMap::new();
    for set in combinations(t, f) {
        groups.entry(key(&set)).or_default().push(set);
    }
    let rival: BTreeSet<Vec<Outcome>> = combinations(t, d).map(|s| key(&s)).collect();
    groups
        .into_iter()
        .filter(|(k, sets)| {
            let (real, fake) = brute_privacy(t, sets);
            !rival.contains(k) && real.is_empty() && fake.is_empty()
        })
        .map(|(k, _)| k)
        .collect()
}

fn brute_exists(t: usize, f: usize, d: usize, w: usize, weighings: &[Weighing]) -> bool {
    let mut idx = vec![0usize; w];
    loop {
        let plan: Vec<Weighing> = idx.iter().map(|&i| weighings[i].clone()).collect();
        if !brute_discreet_outcomes(t, f, d, &plan).is_empty() {
            return true;
        }
        let mut pos = w;
        loop {
            if pos == 0 {
                return false;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < weighings.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

#[test]
fn search_matches_labeled_plan_enumeration() {
    for (max_t, w) in [(6, 1), (6, 2), (4, 3)] {
        for t in 2..=max_t {
            let weighings = all_weighings(t);
            for f in 1..t {
                for d in (0..=t).filter(|&d| d != f) {
                    let exists = brute_exists(t, f, d, w, &weighings);
                    for pruning in [Pruning::Auto, Pruning::Off] {
                        // a plan of fewer weighings repeats one to reach w
                        let found = search_discreet_with(t, f, d, w, pruning).unwrap();
                        assert_eq!(
                            matches!(found, SearchOutcome::Found(_)),
                            exists,
                            "({t},{f},{d}) w={w} {pruning:?}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn discreet_two_against_one_proofs_are_balanced_and_paired() {
    for t in 4..=6 {
        let weighings = all_weighings(t);
        for a in &weighings {
            for b in &weighings {
                let plan = [a.clone(), b.clone()];
                for outcomes in brute_discreet_outcomes(t, 2, 1, &plan) {
                    assert!(outcomes.iter().all(|&o| o == Outcome::Balanced), "{plan:?}");
                    let classes = partition_by_itinerary(&WeighingPlan::new(t, plan.to_vec()).unwrap());
                    for it in classes.keys() {
                        assert!(!it.is_self_conjugate(), "{plan:?}");
                        assert!(classes.contains_key(&it.conjugate()), "{plan:?}");
                    }
                }
            }
        }
    }
}

/// Max of `sum a*b` over pair multisets of total `t` with at least
/// `need_odd` odd-total pairs, by dynamic programming over the remaining
/// total and the odd pairs still owed.
fn dp_optimum(t: usize, need_odd: usize) -> Option<u128> {
    // best[n][o]: best value using total n with at least o odd pairs
    let mut best = vec![vec![None::<u128>; need_odd + 1]; t + 1];
    best[0][0] = Some(0);
    for n in 1..=t {
        for o in 0..=need_odd {
            let mut top = None;
            for s in 2..=n {
                let odd = s % 2;
                let prev = best[n - s][o.saturating_sub(odd)];
                if let Some(v) = prev {
                    let gain = ((s / 2) * (s - s / 2)) as u128;
                    top = top.max(Some(v + gain));
                }
            }
            best[n][o] = top;
        }
    }
    best[t][need_odd]
}

#[test]
fn pair_optimum_matches_dynamic_programming() {
    for t in 4..=30 {
        let need = if t % 2 == 1 { 3 } else { 0 };
        let lib = enumerate_f2_optimum(t).ok().map(|(v, _)| v);
        assert_eq!(lib, dp_optimum(t, need), "t={t}");
    }
}
