//! The judge's deduction engine.
//!
//! Coins sharing an itinerary are interchangeable as far as the scale can
//! tell, so consistent fake sets are counted class by class: choose how many
//! fakes each itinerary class holds, keep the choices that reproduce every
//! observed outcome, and weight each by a product of binomials. Nothing is
//! materialized unless the caller asks for the sets themselves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weighmodel::{
    partition_by_itinerary, Coin, FakeSet, Outcome, ProblemInstance, Symbol, Transcript,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofVerdict {
    pub valid: bool,
    #[serde(rename = "consistent_f")]
    pub consistent_count_f: u128,
    #[serde(rename = "consistent_d")]
    pub consistent_count_d: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrivacyReport {
    pub discreet: bool,
    pub revealed_real: Vec<Coin>,
    pub revealed_fake: Vec<Coin>,
}

/// Size of an itinerary class and the per-weighing contribution
/// (+1 left, -1 right, 0 off) of one fake coin drawn from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ClassShape {
    pub size: usize,
    pub signs: Vec<i64>,
}

pub(crate) fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

fn overflow() -> Error {
    Error::Argument("number of fake sets does not fit in 128 bits".into())
}

/// Depth-first walk over fake-count compositions `k[c] <= size[c]`,
/// `sum k = s`. When `target` is given, only compositions reproducing it
/// are visited. `visit` receives the composition, the final per-weighing
/// difference `fakes_left - fakes_right`, and the number of coin sets the
/// composition stands for.
pub(crate) fn for_each_composition(
    classes: &[ClassShape],
    weighings: usize,
    s: usize,
    target: Option<&[Outcome]>,
    mut visit: impl FnMut(&[usize], &[i64], u128),
) -> Result<()> {
    let mut capacity = vec![0usize; classes.len() + 1];
    for i in (0..classes.len()).rev() {
        capacity[i] = capacity[i + 1] + classes[i].size;
    }
    let mut walk = Walk {
        classes,
        capacity: &capacity,
        target,
        ks: vec![0; classes.len()],
        diff: vec![0; weighings],
        overflowed: false,
    };
    walk.descend(0, s, 1, &mut visit);
    if walk.overflowed {
        Err(overflow())
    } else {
        Ok(())
    }
}

struct Walk<'a> {
    classes: &'a [ClassShape],
    capacity: &'a [usize],
    target: Option<&'a [Outcome]>,
    ks: Vec<usize>,
    diff: Vec<i64>,
    overflowed: bool,
}

impl Walk<'_> {
    fn reachable(&self, remaining: usize) -> bool {
        let Some(target) = self.target else { return true };
        let rem = remaining as i64;
        target.iter().zip(&self.diff).all(|(o, &d)| match o {
            Outcome::Balanced => d.abs() <= rem,
            Outcome::LeftLighter => d + rem >= 1,
            Outcome::RightLighter => d - rem <= -1,
        })
    }

    fn descend(
        &mut self,
        idx: usize,
        remaining: usize,
        weight: u128,
        visit: &mut impl FnMut(&[usize], &[i64], u128),
    ) {
        if self.overflowed || remaining > self.capacity[idx] || !self.reachable(remaining) {
            return;
        }
        if idx == self.classes.len() {
            if let Some(target) = self.target {
                if !target.iter().zip(&self.diff).all(|(&o, &d)| Outcome::from_difference(d) == o) {
                    return;
                }
            }
            visit(&self.ks, &self.diff, weight);
            return;
        }
        let class = &self.classes[idx];
        let max_k = class.size.min(remaining);
        for k in 0..=max_k {
            let Some(w) = binomial(class.size, k).and_then(|b| weight.checked_mul(b)) else {
                self.overflowed = true;
                return;
            };
            self.ks[idx] = k;
            for (d, &sg) in self.diff.iter_mut().zip(&class.signs) {
                *d += sg * k as i64;
            }
            self.descend(idx + 1, remaining - k, w, visit);
            for (d, &sg) in self.diff.iter_mut().zip(&class.signs) {
                *d -= sg * k as i64;
            }
        }
        self.ks[idx] = 0;
    }
}

/// Itinerary classes of a transcript's plan, with their coins.
pub(crate) fn class_table(tr: &Transcript) -> (Vec<ClassShape>, Vec<Vec<Coin>>) {
    partition_by_itinerary(&tr.plan)
        .into_iter()
        .map(|(it, coins)| {
            let signs = it.symbols().iter().map(|s: &Symbol| s.sign()).collect();
            (ClassShape { size: coins.len(), signs }, coins)
        })
        .unzip()
}

fn check_size(t: usize, s: usize, tr: &Transcript) -> Result<()> {
    tr.validate()?;
    if tr.plan.t != t {
        return Err(Error::Argument(format!("transcript is for t={}, not t={t}", tr.plan.t)));
    }
    if s > t {
        return Err(Error::Argument(format!("hypothesis size {s} exceeds t={t}")));
    }
    Ok(())
}

/// Every size-`s` coin set that reproduces the transcript, in lexicographic
/// order.
pub fn consistent_assignments(t: usize, s: usize, tr: &Transcript) -> Result<Vec<FakeSet>> {
    check_size(t, s, tr)?;
    let (shapes, coins) = class_table(tr);
    let mut out = Vec::new();
    for_each_composition(&shapes, tr.plan.len(), s, Some(&tr.outcomes), |ks, _, _| {
        expand(&coins, ks, &mut out);
    })?;
    out.sort_unstable();
    Ok(out.into_iter().map(FakeSet::from_sorted).collect())
}

fn expand(coins: &[Vec<Coin>], ks: &[usize], out: &mut Vec<Vec<Coin>>) {
    fn rec(coins: &[Vec<Coin>], ks: &[usize], idx: usize, cur: &mut Vec<Coin>, out: &mut Vec<Vec<Coin>>) {
        if idx == ks.len() {
            let mut set = cur.clone();
            set.sort_unstable();
            out.push(set);
            return;
        }
        choose(&coins[idx], ks[idx], 0, cur, &mut |cur| rec(coins, ks, idx + 1, cur, out));
    }
    fn choose(pool: &[Coin], k: usize, from: usize, cur: &mut Vec<Coin>, next: &mut dyn FnMut(&mut Vec<Coin>)) {
        if k == 0 {
            next(cur);
            return;
        }
        for i in from..=pool.len() - k {
            cur.push(pool[i]);
            choose(pool, k - 1, i + 1, cur, next);
            cur.pop();
        }
    }
    rec(coins, ks, 0, &mut Vec::new(), out);
}

pub fn count_consistent(t: usize, s: usize, tr: &Transcript) -> Result<u128> {
    check_size(t, s, tr)?;
    let (shapes, _) = class_table(tr);
    let mut total: u128 = 0;
    let mut overflowed = false;
    for_each_composition(&shapes, tr.plan.len(), s, Some(&tr.outcomes), |_, _, w| {
        match total.checked_add(w) {
            Some(v) => total = v,
            None => overflowed = true,
        }
    })?;
    if overflowed {
        return Err(overflow());
    }
    Ok(total)
}

/// For every coin, the number of consistent size-`s` sets containing it.
pub fn membership_counts(t: usize, s: usize, tr: &Transcript) -> Result<Vec<u128>> {
    check_size(t, s, tr)?;
    let (shapes, coins) = class_table(tr);
    let mut per_class = vec![0u128; shapes.len()];
    for_each_composition(&shapes, tr.plan.len(), s, Some(&tr.outcomes), |ks, _, w| {
        for (c, &k) in ks.iter().enumerate() {
            if k > 0 {
                // w * k / n: sets of this composition that contain a given coin of class c
                per_class[c] += w / shapes[c].size as u128 * k as u128
                    + (w % shapes[c].size as u128) * k as u128 / shapes[c].size as u128;
            }
        }
    })?;
    let mut counts = vec![0u128; t];
    for (class, members) in coins.iter().enumerate() {
        for &coin in members {
            counts[coin] = per_class[class];
        }
    }
    Ok(counts)
}

pub fn verify_proof(inst: &ProblemInstance, tr: &Transcript, placement: &FakeSet) -> Result<ProofVerdict> {
    if placement.len() != inst.f {
        return Err(Error::Argument(format!(
            "placement has {} coins but f={}",
            placement.len(),
            inst.f
        )));
    }
    placement.check_range(inst.t)?;
    let count_f = count_consistent(inst.t, inst.f, tr)?;
    let count_d = count_consistent(inst.t, inst.d, tr)?;
    let placed = crate::weighmodel::simulate_transcript(&tr.plan, placement)?;
    let placement_fits = placed.outcomes == tr.outcomes;
    Ok(ProofVerdict {
        valid: count_f >= 1 && count_d == 0 && placement_fits,
        consistent_count_f: count_f,
        consistent_count_d: count_d,
    })
}

/// Which coins the transcript pins down, over the surviving size-`f` sets.
pub fn classify_privacy(inst: &ProblemInstance, tr: &Transcript) -> Result<PrivacyReport> {
    check_size(inst.t, inst.f, tr)?;
    if count_consistent(inst.t, inst.d, tr)? != 0 {
        return Err(Error::State(format!(
            "transcript does not rule out {} fakes",
            inst.d
        )));
    }
    let (shapes, coins) = class_table(tr);
    let mut may_be_fake = vec![false; shapes.len()];
    let mut may_be_real = vec![false; shapes.len()];
    let mut any = false;
    for_each_composition(&shapes, tr.plan.len(), inst.f, Some(&tr.outcomes), |ks, _, _| {
        any = true;
        for (c, &k) in ks.iter().enumerate() {
            may_be_fake[c] |= k > 0;
            may_be_real[c] |= k < shapes[c].size;
        }
    })?;
    if !any {
        return Err(Error::State(format!("no set of {} fakes reproduces the transcript", inst.f)));
    }
    let collect = |flags: &[bool]| {
        let mut v: Vec<Coin> = flags
            .iter()
            .zip(&coins)
            .filter(|(&flag, _)| !flag)
            .flat_map(|(_, members)| members.iter().copied())
            .collect();
        v.sort_unstable();
        v
    };
    let revealed_real = collect(&may_be_fake);
    let revealed_fake = collect(&may_be_real);
    Ok(PrivacyReport {
        discreet: revealed_real.is_empty() && revealed_fake.is_empty(),
        revealed_real,
        revealed_fake,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weighmodel::{simulate_transcript, Weighing, WeighingPlan};

    fn balanced_pairs() -> Transcript {
        let plan = WeighingPlan::new(4, vec![Weighing::new([0, 1], [2, 3])]).unwrap();
        Transcript::new(plan, vec![Outcome::Balanced]).unwrap()
    }

    #[test]
    fn small_balanced_example() {
        let tr = balanced_pairs();
        let sets = consistent_assignments(4, 2, &tr).unwrap();
        let expect: Vec<FakeSet> = [[0, 2], [0, 3], [1, 2], [1, 3]].into_iter().map(FakeSet::new).collect();
        assert_eq!(sets, expect);
        assert!(consistent_assignments(4, 1, &tr).unwrap().is_empty());
        assert_eq!(count_consistent(4, 0, &tr).unwrap(), 1);
        assert_eq!(membership_counts(4, 2, &tr).unwrap(), vec![2, 2, 2, 2]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(80, 3), Some(82160));
        assert_eq!(binomial(80, 4), Some(1581580));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(0, 0), Some(1));
        assert!(binomial(1000, 500).is_none());
    }

    #[test]
    fn leftover_attempt_fails_to_prove() {
        // Three piles of 26 shown equal, the last two coins never weighed.
        let plan = WeighingPlan::new(
            80,
            vec![Weighing::new(0..26, 26..52), Weighing::new(0..26, 52..78)],
        )
        .unwrap();
        let inst = ProblemInstance::new(80, 3, 2).unwrap();
        let placement = FakeSet::new([0, 26, 52]);
        let tr = simulate_transcript(&plan, &placement).unwrap();
        let verdict = verify_proof(&inst, &tr, &placement).unwrap();
        assert!(!verdict.valid);
        assert_eq!(verdict.consistent_count_d, 1);
        assert!(matches!(classify_privacy(&inst, &tr), Err(Error::State(_))));
    }

    #[test]
    fn empty_plan_proves_nothing() {
        let inst = ProblemInstance::new(6, 2, 1).unwrap();
        let placement = FakeSet::new([0, 1]);
        let tr = simulate_transcript(&WeighingPlan::empty(6), &placement).unwrap();
        let verdict = verify_proof(&inst, &tr, &placement).unwrap();
        assert_eq!(verdict, ProofVerdict { valid: false, consistent_count_f: 15, consistent_count_d: 6 });
    }

    #[test]
    fn placement_size_must_match() {
        let inst = ProblemInstance::new(4, 2, 1).unwrap();
        let err = verify_proof(&inst, &balanced_pairs(), &FakeSet::new([0])).unwrap_err();
        assert!(matches!(err, Error::Argument(_)));
    }

    #[test]
    fn inconsistent_placement_is_invalid() {
        let inst = ProblemInstance::new(4, 2, 1).unwrap();
        let verdict = verify_proof(&inst, &balanced_pairs(), &FakeSet::new([0, 1])).unwrap();
        assert!(!verdict.valid);
        assert_eq!(verdict.consistent_count_f, 4);
        assert_eq!(verdict.consistent_count_d, 0);
    }

    #[test]
    fn single_pair_privacy() {
        let inst = ProblemInstance::new(4, 2, 1).unwrap();
        let report = classify_privacy(&inst, &balanced_pairs()).unwrap();
        assert!(report.discreet);
        // 0 balances 1 and is lighter than 2: both 0 and 1 are fake.
        let plan = WeighingPlan::new(4, vec![Weighing::new([0], [1]), Weighing::new([0], [2])]).unwrap();
        let tr = Transcript::new(plan, vec![Outcome::Balanced, Outcome::LeftLighter]).unwrap();
        let report = classify_privacy(&inst, &tr).unwrap();
        assert_eq!(report.revealed_fake, vec![0, 1]);
        assert_eq!(report.revealed_real, vec![2, 3]);
        assert!(!report.discreet);
    }

    #[test]
    fn json_field_names() {
        let v = ProofVerdict { valid: true, consistent_count_f: 8000, consistent_count_d: 0 };
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"valid":true,"consistent_f":8000,"consistent_d":0}"#
        );
    }
}
