//! Independent brute-force judge and shared generators.
//!
//! Nothing here goes through the library's class-based counting: every
//! candidate fake set is listed and weighed coin by coin.

#![allow(dead_code)]

use discreet_weighing::weighmodel::{Outcome, Transcript, Weighing, WeighingPlan};
use proptest::prelude::*;

/// All `k`-subsets of `0..n` in lexicographic order.
pub struct Combinations {
    n: usize,
    cur: Option<Vec<usize>>,
}

pub fn combinations(n: usize, k: usize) -> Combinations {
    Combinations { n, cur: if k <= n { Some((0..k).collect()) } else { None } }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.cur = Some(next);
                break;
            }
        }
        Some(out)
    }
}

pub fn weigh(w: &Weighing, fakes: &[usize]) -> Outcome {
    let left = fakes.iter().filter(|c| w.left.contains(c)).count() as i64;
    let right = fakes.iter().filter(|c| w.right.contains(c)).count() as i64;
    match left - right {
        x if x > 0 => Outcome::LeftLighter,
        x if x < 0 => Outcome::RightLighter,
        _ => Outcome::Balanced,
    }
}

pub fn brute_consistent(t: usize, s: usize, tr: &Transcript) -> Vec<Vec<usize>> {
    combinations(t, s)
        .filter(|set| {
            tr.plan
                .weighings
                .iter()
                .zip(&tr.outcomes)
                .all(|(w, &o)| weigh(w, set) == o)
        })
        .collect()
}

pub fn choose(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// A weighing with `k` coins per pan taken from a shuffled coin list.
pub fn weighing_from(perm: &[usize], k: usize) -> Weighing {
    Weighing::new(perm[..k].iter().copied(), perm[k..2 * k].iter().copied())
}

pub fn arb_weighing(t: usize) -> impl Strategy<Value = Weighing> {
    (1..=t / 2, Just((0..t).collect::<Vec<_>>()).prop_shuffle()).prop_map(|(k, perm)| weighing_from(&perm, k))
}

/// A random valid plan on `t` coins with `0..=max_w` weighings.
pub fn arb_plan(t: usize, max_w: usize) -> impl Strategy<Value = WeighingPlan> {
    prop::collection::vec(arb_weighing(t), 0..=max_w).prop_map(move |ws| WeighingPlan::new(t, ws).unwrap())
}

/// `(t, f, fakes, plan)` with `2 <= t <= max_t`, `1 <= f < t`.
pub fn arb_setup(max_t: usize, max_w: usize) -> impl Strategy<Value = (usize, usize, Vec<usize>, WeighingPlan)> {
    (2..=max_t).prop_flat_map(move |t| {
        (1..t).prop_flat_map(move |f| {
            (
                Just(t),
                Just(f),
                prop::sample::subsequence((0..t).collect::<Vec<_>>(), f),
                arb_plan(t, max_w),
            )
        })
    })
}

pub mod props {
    use discreet_weighing::judge::count_consistent;
    use discreet_weighing::metrics::revealing_metrics;
    use discreet_weighing::rational::Rational;
    use discreet_weighing::report::RunReport;
    use discreet_weighing::strategies::{build_named, StrategyBundle};
    use discreet_weighing::weighmodel::{
        simulate_transcript, FakeSet, Itinerary, Outcome, ProblemInstance, Symbol, Weighing, WeighingPlan,
    };
    use proptest::prelude::*;
    use proptest::test_runner::TestCaseError;

    use super::{arb_weighing, choose};

    /// Every itinerary of length `len`.
    pub fn all_itineraries(len: usize) -> Vec<Itinerary> {
        let mut out = vec![Itinerary(vec![])];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|it| {
                    [Symbol::L, Symbol::R, Symbol::O].into_iter().map(move |s| {
                        let mut v = it.0.clone();
                        v.push(s);
                        Itinerary(v)
                    })
                })
                .collect();
        }
        out
    }

    /// Conjugation is an involution, and only the all-`O` itinerary is
    /// fixed by it.
    pub fn conjugation_involution(max_len: usize) -> Result<(), String> {
        for len in 0..=max_len {
            for it in all_itineraries(len) {
                if it.conjugate().conjugate() != it {
                    return Err(format!("{it} is not restored"));
                }
                let off_only = it.0.iter().all(|&s| s == Symbol::O);
                if it.is_self_conjugate() != off_only || (it.conjugate() == it) != off_only {
                    return Err(format!("{it} has the wrong self-conjugacy"));
                }
            }
        }
        Ok(())
    }

    pub fn monotone_under_append(
        t: usize,
        f: usize,
        fakes: &[usize],
        plan: &WeighingPlan,
        extra: &Weighing,
        outcome: Outcome,
    ) -> Result<(), TestCaseError> {
        let tr = simulate_transcript(plan, &FakeSet::new(fakes.iter().copied())).unwrap();
        let longer = tr.extended(extra.clone(), outcome).unwrap();
        for s in [f, 0, t / 2, t] {
            let before = count_consistent(t, s, &tr).unwrap();
            let after = count_consistent(t, s, &longer).unwrap();
            prop_assert!(after <= before, "s={s}: {after} > {before}");
        }
        Ok(())
    }

    pub fn strict_leak(t: usize, f: usize, fakes: &[usize], plan: &WeighingPlan) -> Result<(), TestCaseError> {
        prop_assume!(!plan.is_empty());
        let tr = simulate_transcript(plan, &FakeSet::new(fakes.iter().copied())).unwrap();
        let new = count_consistent(t, f, &tr).unwrap();
        prop_assert!(new >= 1 && new < choose(t as u128, f as u128));
        let m = revealing_metrics(t, f, new).unwrap();
        prop_assert!(m.factor_x > Rational::one());
        prop_assert!(m.coefficient_r > Rational::zero() && m.coefficient_r < Rational::one());
        Ok(())
    }

    /// Small instances of every constructor, each meeting its preconditions.
    pub fn arb_bundle() -> impl Strategy<Value = StrategyBundle> {
        let equal = (2usize..=3, 1usize..=3, 0usize..=6).prop_map(|(a, m, extra)| {
            let n = m + 1 + extra;
            ("equal-piles", a * n, a * m, a * m - 1, Some(a))
        });
        let triple = (2usize..=4, 0usize..3, 4usize..=8).prop_map(|(f, r, k)| {
            let r = 1 + r % (f - 1);
            ("triple-case", f * k + r, f, f - 1, None)
        });
        let official = (1usize..=4, 1usize..=2).prop_map(|(m, d)| ("official", 8 * m, 3, d, None));
        let leftover = (2usize..=4, 0usize..3, 3usize..=10).prop_map(|(f, r, k)| {
            let r = 1 + r % (f - 1);
            ("leftover-reveal", f * k + r, f, f - 1, None)
        });
        let reference = (2usize..=4, 2usize..=8, 0usize..3).prop_map(|(f, n, d)| {
            ("reference-pile", (f + 1) * n, f, 1 + d % (f - 1), None)
        });
        prop_oneof![equal, triple, official, leftover, reference].prop_map(|(name, t, f, d, a)| {
            let inst = ProblemInstance::new(t, f, d).unwrap();
            build_named(name, &inst, a).unwrap_or_else(|e| panic!("{name} {inst}: {e}"))
        })
    }

    pub fn guess_at_least_prior(bundle: &StrategyBundle) -> Result<(), TestCaseError> {
        let r = RunReport::from_bundle(bundle).unwrap();
        prop_assert!(r.verdict.valid, "{} {} is not valid", bundle.name, bundle.instance);
        let prior = Rational::new(bundle.instance.f as u64, bundle.instance.t as u64);
        let p = r.guess.unwrap().uniform.prob;
        prop_assert!(p >= prior);
        if !r.privacy.unwrap().discreet {
            prop_assert!(p > prior, "{} {}: {} not above {}", bundle.name, bundle.instance, p, prior);
        }
        Ok(())
    }

    pub fn arb_monotone_case(
    ) -> impl Strategy<Value = ((usize, usize, Vec<usize>, WeighingPlan), Weighing, Outcome)> {
        super::arb_setup(12, 3).prop_flat_map(|setup| {
            let t = setup.0;
            (
                Just(setup),
                arb_weighing(t),
                prop_oneof![Just(Outcome::Balanced), Just(Outcome::LeftLighter), Just(Outcome::RightLighter)],
            )
        })
    }

    /// `r(k + 1) + (f - r)k = t` for the triple-case layout, checked on
    /// the piles the constructor actually builds.
    pub fn triple_case_sizes(max_f: usize, max_k: usize) -> Result<(), String> {
        use discreet_weighing::strategies::build_triple_case;
        for f in 2..=max_f {
            for k in 4..=max_k {
                for r in 1..f {
                    let t = f * k + r;
                    let b = build_triple_case(&ProblemInstance::new(t, f, f - 1).unwrap())
                        .map_err(|e| format!("({t},{f}): {e}"))?;
                    let group = |i: usize| -> usize { (0..3).map(|c| b.cases.cases[c][i].coins.len()).sum() };
                    let total: usize = (0..f).map(group).sum();
                    if total != t || r * (k + 1) + (f - r) * k != t {
                        return Err(format!("({t},{f}): piles cover {total}"));
                    }
                    for i in 0..f {
                        let want = if i < r { k + 1 } else { k };
                        if group(i) != want {
                            return Err(format!("({t},{f}): group {i} has {} coins, want {want}", group(i)));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
