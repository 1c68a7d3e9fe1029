//! Bounded exhaustive search for discreet strategies, and the exact
//! optimum for two fakes against one.
//!
//! Coins with the same itinerary are interchangeable, so a plan is searched
//! as an [`ItineraryProfile`]: how many coins follow each itinerary. With
//! `w` weighings there are `3^w` itineraries, and a profile is admissible
//! when every weighing has equally many coins on both pans, at least one
//! each. Every plan of fewer than `w` weighings is matched by a `w`-weighing
//! plan that repeats a weighing, but the search still walks every length
//! from 1 up to the bound so that the first witness is also a shortest one.
//!
//! All results certify only plans within the weighing bound.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::judge::{for_each_composition, ClassShape};
use crate::metrics::{CaseStructure, Pile};
use crate::strategies::StrategyBundle;
use crate::weighmodel::{
    partition_by_itinerary, Coin, FakeSet, Itinerary, Outcome, ProblemInstance, Symbol, Weighing,
    WeighingPlan,
};

pub const MAX_SEARCH_COINS: usize = 12;
pub const MAX_SEARCH_WEIGHINGS: usize = 4;

/// Per-itinerary coin counts for a fixed number of weighings.
///
/// Itineraries are indexed base 3 with the first weighing most significant
/// and `O < L < R`, so index order is lexicographic order of the strings
/// `O`, `L`, `R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ItineraryProfile {
    weighings: usize,
    counts: Vec<usize>,
}

const DIGITS: [Symbol; 3] = [Symbol::O, Symbol::L, Symbol::R];

fn digit_of(s: Symbol) -> usize {
    match s {
        Symbol::O => 0,
        Symbol::L => 1,
        Symbol::R => 2,
    }
}

fn index_itinerary(weighings: usize, mut index: usize) -> Itinerary {
    let mut symbols = vec![Symbol::O; weighings];
    for slot in symbols.iter_mut().rev() {
        *slot = DIGITS[index % 3];
        index /= 3;
    }
    Itinerary(symbols)
}

fn itinerary_index(it: &Itinerary) -> usize {
    it.symbols().iter().fold(0, |acc, &s| acc * 3 + digit_of(s))
}

impl ItineraryProfile {
    pub fn new(weighings: usize, counts: Vec<usize>) -> Result<Self> {
        if counts.len() != 3usize.pow(weighings as u32) {
            return Err(Error::Argument(format!(
                "{} counts for {weighings} weighings",
                counts.len()
            )));
        }
        Ok(ItineraryProfile { weighings, counts })
    }

    pub fn from_plan(plan: &WeighingPlan) -> Self {
        let w = plan.len();
        let mut counts = vec![0; 3usize.pow(w as u32)];
        for (it, coins) in partition_by_itinerary(plan) {
            counts[itinerary_index(&it)] = coins.len();
        }
        ItineraryProfile { weighings: w, counts }
    }

    pub fn weighings(&self) -> usize {
        self.weighings
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn count(&self, it: &Itinerary) -> usize {
        if it.len() != self.weighings {
            return 0;
        }
        self.counts[itinerary_index(it)]
    }

    /// Occupied itineraries with their counts, in index order.
    pub fn classes(&self) -> Vec<(Itinerary, usize)> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(i, &n)| (index_itinerary(self.weighings, i), n))
            .collect()
    }

    /// Whether each weighing has the same nonzero number of coins per pan.
    pub fn is_balanced(&self) -> bool {
        (0..self.weighings).all(|i| {
            let (mut l, mut r) = (0, 0);
            for (it, n) in self.classes() {
                match it.symbols()[i] {
                    Symbol::L => l += n,
                    Symbol::R => r += n,
                    Symbol::O => {}
                }
            }
            l == r && l > 0
        })
    }

    /// Occupied conjugate pairs `(|δ|, |δ̄|)`, taking `δ` as the member with
    /// the smaller index. Self-conjugate classes are not included.
    pub fn conjugate_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, &n) in self.counts.iter().enumerate() {
            let j = conjugate_index(self.weighings, i);
            if i < j && (n > 0 || self.counts[j] > 0) {
                out.push((n, self.counts[j]));
            }
        }
        out
    }

    /// A labeled plan with this profile: coins are handed out to itineraries
    /// in index order.
    pub fn to_plan(&self) -> (WeighingPlan, Vec<Vec<Coin>>) {
        let mut weighings = vec![Weighing { left: vec![], right: vec![] }; self.weighings];
        let mut members = Vec::new();
        let mut next = 0;
        for (it, n) in self.classes() {
            let coins: Vec<Coin> = (next..next + n).collect();
            next += n;
            for (w, s) in weighings.iter_mut().zip(it.symbols()) {
                match s {
                    Symbol::L => w.left.extend(&coins),
                    Symbol::R => w.right.extend(&coins),
                    Symbol::O => {}
                }
            }
            members.push(coins);
        }
        (WeighingPlan { t: next, weighings }, members)
    }

    fn shapes(&self) -> Vec<ClassShape> {
        self.classes()
            .into_iter()
            .map(|(it, size)| ClassShape { size, signs: it.symbols().iter().map(|s| s.sign()).collect() })
            .collect()
    }
}

impl fmt::Display for ItineraryProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.classes().iter().map(|(it, n)| format!("{it}:{n}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for ItineraryProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let classes: BTreeMap<String, usize> =
            self.classes().into_iter().map(|(it, n)| (it.to_string(), n)).collect();
        #[derive(Serialize)]
        struct Repr {
            weighings: usize,
            classes: BTreeMap<String, usize>,
        }
        Repr { weighings: self.weighings, classes }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ItineraryProfile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Repr {
            weighings: usize,
            classes: BTreeMap<Itinerary, usize>,
        }
        let repr = Repr::deserialize(d)?;
        if repr.weighings > 8 {
            return Err(D::Error::custom("too many weighings for a profile"));
        }
        let mut counts = vec![0; 3usize.pow(repr.weighings as u32)];
        for (it, n) in repr.classes {
            if it.len() != repr.weighings {
                return Err(D::Error::custom(format!("itinerary {it} has the wrong length")));
            }
            counts[itinerary_index(&it)] = n;
        }
        Ok(ItineraryProfile { weighings: repr.weighings, counts })
    }
}

fn conjugate_index(weighings: usize, index: usize) -> usize {
    itinerary_index(&index_itinerary(weighings, index).conjugate())
}

/// Conjugate pairs of class sizes, `(|δ_j|, |δ̄_j|)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDistribution {
    pub pairs: Vec<(usize, usize)>,
}

impl PairDistribution {
    pub fn total(&self) -> usize {
        self.pairs.iter().map(|(a, b)| a + b).sum()
    }

    pub fn new_possibilities(&self) -> u128 {
        self.pairs.iter().map(|&(a, b)| a as u128 * b as u128).sum()
    }

    pub fn odd_pairs(&self) -> usize {
        self.pairs.iter().filter(|(a, b)| (a + b) % 2 == 1).count()
    }

    /// Each pair larger side first, pairs in descending order. Which side
    /// of a pair is called the conjugate is arbitrary.
    pub fn canonical(&self) -> PairDistribution {
        let mut pairs: Vec<_> = self.pairs.iter().map(|&(a, b)| (a.max(b), a.min(b))).collect();
        pairs.sort_unstable_by(|x, y| y.cmp(x));
        PairDistribution { pairs }
    }
}

/// Whether the two-against-one structure (no coin off the scale throughout,
/// a class occupied only with its conjugate) is imposed while searching.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pruning {
    /// Prune by pair structure when `f = 2` and `d = 1`, otherwise search
    /// every profile.
    Auto,
    Off,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub profile: ItineraryProfile,
    pub bundle: StrategyBundle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Box<Witness>),
    /// No plan of at most `bound` weighings gives a valid discreet proof.
    Exhausted { bound: usize },
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SearchOutcome::Found(w) => Some(w),
            SearchOutcome::Exhausted { .. } => None,
        }
    }
}

pub fn search_discreet(t: usize, f: usize, d: usize, max_weighings: usize) -> Result<SearchOutcome> {
    search_discreet_with(t, f, d, max_weighings, Pruning::Auto)
}

pub fn search_discreet_with(
    t: usize,
    f: usize,
    d: usize,
    max_weighings: usize,
    pruning: Pruning,
) -> Result<SearchOutcome> {
    let inst = check_bounds(t, f, d, max_weighings)?;
    let pair_pruned = pruning == Pruning::Auto && f == 2 && d == 1;
    for w in 1..=max_weighings {
        let found = ProfileSearch::new(t, f, d, w, pair_pruned).first_witness()?;
        if let Some((profile, outcome)) = found {
            let bundle = witness_bundle(&inst, &profile, &outcome)?;
            return Ok(SearchOutcome::Found(Box::new(Witness { profile, bundle })));
        }
    }
    Ok(SearchOutcome::Exhausted { bound: max_weighings })
}

/// Every discreet profile with exactly `weighings` weighings, in index
/// order.
pub fn all_discreet_profiles(
    t: usize,
    f: usize,
    d: usize,
    weighings: usize,
    pruning: Pruning,
) -> Result<Vec<ItineraryProfile>> {
    check_bounds(t, f, d, weighings)?;
    let pair_pruned = pruning == Pruning::Auto && f == 2 && d == 1;
    ProfileSearch::new(t, f, d, weighings, pair_pruned).all_witnesses()
}

fn check_bounds(t: usize, f: usize, d: usize, weighings: usize) -> Result<ProblemInstance> {
    if t > MAX_SEARCH_COINS {
        return Err(Error::Bounds(format!("t={t} exceeds {MAX_SEARCH_COINS}")));
    }
    if weighings > MAX_SEARCH_WEIGHINGS {
        return Err(Error::Bounds(format!("{weighings} weighings exceed {MAX_SEARCH_WEIGHINGS}")));
    }
    ProblemInstance::new(t, f, d)
}

/// Outcome sequence of a weighing plan, as recorded in a witness.
type OutcomeKey = Vec<Outcome>;

struct ProfileSearch {
    t: usize,
    f: usize,
    d: usize,
    w: usize,
    size: usize,
    conj: Vec<usize>,
    /// Per index, the pan (+1 left, -1 right, 0 off) in each weighing.
    signs: Vec<Vec<i64>>,
    pair_pruned: bool,
}

struct Frame {
    counts: Vec<usize>,
    balance: Vec<i64>,
    on_left: Vec<usize>,
}

impl ProfileSearch {
    fn new(t: usize, f: usize, d: usize, w: usize, pair_pruned: bool) -> Self {
        let size = 3usize.pow(w as u32);
        let signs = (0..size)
            .map(|i| index_itinerary(w, i).symbols().iter().map(|s| s.sign()).collect())
            .collect();
        let conj = (0..size).map(|i| conjugate_index(w, i)).collect();
        ProfileSearch { t, f, d, w, size, conj, signs, pair_pruned }
    }

    /// Allowed counts at `idx` given the counts already fixed before it.
    fn choices(&self, idx: usize, remaining: usize, counts: &[usize]) -> std::ops::RangeInclusive<usize> {
        if self.pair_pruned {
            let c = self.conj[idx];
            if c == idx {
                return 0..=0;
            }
            if c < idx {
                return if counts[c] == 0 { 0..=0 } else { 1..=remaining };
            }
        }
        0..=remaining
    }

    fn place(&self, frame: &mut Frame, idx: usize, n: usize, sign: i64) {
        frame.counts[idx] = if sign > 0 { n } else { 0 };
        for (i, &s) in self.signs[idx].iter().enumerate() {
            frame.balance[i] += sign * s * n as i64;
            if s == 1 {
                if sign > 0 {
                    frame.on_left[i] += n;
                } else {
                    frame.on_left[i] -= n;
                }
            }
        }
    }

    /// Seeds for parallel work: all admissible counts for the first two
    /// indices, in lexicographic order.
    fn seeds(&self) -> Vec<(usize, usize)> {
        let zero = vec![0; self.size];
        let mut out = Vec::new();
        for a in self.choices(0, self.t, &zero) {
            let mut counts = zero.clone();
            counts[0] = a;
            for b in self.choices(1, self.t - a, &counts) {
                out.push((a, b));
            }
        }
        out
    }

    fn walk(
        &self,
        frame: &mut Frame,
        idx: usize,
        remaining: usize,
        visit: &mut dyn FnMut(&[usize]) -> Result<ControlFlow<()>>,
    ) -> Result<ControlFlow<()>> {
        if frame.balance.iter().any(|b| b.unsigned_abs() as usize > remaining) {
            return Ok(ControlFlow::Continue(()));
        }
        if idx == self.size {
            if remaining == 0 && frame.balance.iter().all(|&b| b == 0) && frame.on_left.iter().all(|&l| l > 0) {
                return visit(&frame.counts);
            }
            return Ok(ControlFlow::Continue(()));
        }
        for n in self.choices(idx, remaining, &frame.counts) {
            self.place(frame, idx, n, 1);
            let flow = self.walk(frame, idx + 1, remaining - n, visit);
            self.place(frame, idx, n, -1);
            if flow?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    fn run_seed(
        &self,
        (a, b): (usize, usize),
        visit: &mut dyn FnMut(&[usize]) -> Result<ControlFlow<()>>,
    ) -> Result<ControlFlow<()>> {
        let mut frame = Frame {
            counts: vec![0; self.size],
            balance: vec![0; self.w],
            on_left: vec![0; self.w],
        };
        self.place(&mut frame, 0, a, 1);
        self.place(&mut frame, 1, b, 1);
        self.walk(&mut frame, 2, self.t - a - b, visit)
    }

    fn first_witness(&self) -> Result<Option<(ItineraryProfile, OutcomeKey)>> {
        let results: Vec<Result<Option<(ItineraryProfile, OutcomeKey)>>> = self
            .seeds()
            .into_par_iter()
            .map(|seed| {
                let mut found = None;
                let _ = self.run_seed(seed, &mut |counts| {
                    let profile = ItineraryProfile { weighings: self.w, counts: counts.to_vec() };
                    Ok(match discreet_outcome(&profile, self.f, self.d)? {
                        Some(outcome) => {
                            found = Some((profile, outcome));
                            ControlFlow::Break(())
                        }
                        None => ControlFlow::Continue(()),
                    })
                })?;
                Ok(found)
            })
            .collect();
        for r in results {
            if let Some(hit) = r? {
                return Ok(Some(hit));
            }
        }
        Ok(None)
    }

    fn all_witnesses(&self) -> Result<Vec<ItineraryProfile>> {
        let per_seed: Vec<Result<Vec<ItineraryProfile>>> = self
            .seeds()
            .into_par_iter()
            .map(|seed| {
                let mut found = Vec::new();
                let _ = self.run_seed(seed, &mut |counts| {
                    let profile = ItineraryProfile { weighings: self.w, counts: counts.to_vec() };
                    if discreet_outcome(&profile, self.f, self.d)?.is_some() {
                        found.push(profile);
                    }
                    Ok(ControlFlow::Continue(()))
                })?;
                Ok(found)
            })
            .collect();
        let mut out = Vec::new();
        for r in per_seed {
            out.extend(r?);
        }
        Ok(out)
    }
}

#[derive(Default)]
struct OutcomeClasses {
    may_be_fake: u64,
    may_be_real: u64,
}

/// The first outcome sequence (in outcome order) under which some
/// placement of `f` fakes gives a valid, discreet proof against `d`.
fn discreet_outcome(profile: &ItineraryProfile, f: usize, d: usize) -> Result<Option<OutcomeKey>> {
    let shapes = profile.shapes();
    let w = profile.weighings;
    let mut by_outcome: BTreeMap<OutcomeKey, OutcomeClasses> = BTreeMap::new();
    for_each_composition(&shapes, w, f, None, |ks, diff, _| {
        let key: OutcomeKey = diff.iter().map(|&x| Outcome::from_difference(x)).collect();
        let entry = by_outcome.entry(key).or_default();
        for (c, &k) in ks.iter().enumerate() {
            if k > 0 {
                entry.may_be_fake |= 1 << c;
            }
            if k < shapes[c].size {
                entry.may_be_real |= 1 << c;
            }
        }
    })?;
    let mut rival = HashSet::new();
    for_each_composition(&shapes, w, d, None, |_, diff, _| {
        rival.insert(diff.iter().map(|&x| Outcome::from_difference(x)).collect::<OutcomeKey>());
    })?;
    let all = (1u64 << shapes.len()) - 1;
    Ok(by_outcome
        .into_iter()
        .find(|(key, e)| !rival.contains(key) && e.may_be_fake == all && e.may_be_real == all)
        .map(|(key, _)| key))
}

/// Expands a discreet profile into a labeled bundle: the placement is the
/// first composition reproducing `outcome`, and every such composition
/// becomes one case.
fn witness_bundle(inst: &ProblemInstance, profile: &ItineraryProfile, outcome: &[Outcome]) -> Result<StrategyBundle> {
    let (plan, members) = profile.to_plan();
    let shapes = profile.shapes();
    let mut cases = Vec::new();
    for_each_composition(&shapes, profile.weighings, inst.f, Some(outcome), |ks, _, _| {
        let case: Vec<Pile> = ks
            .iter()
            .zip(&members)
            .filter(|(&k, _)| k > 0)
            .map(|(&k, coins)| Pile { coins: coins.clone(), fakes: k })
            .collect();
        cases.push(case);
    })?;
    let first = cases.first().ok_or_else(|| Error::State("witness outcome has no placement".into()))?;
    let placement: FakeSet = first.iter().flat_map(|p| p.coins[..p.fakes].iter().copied()).collect();
    Ok(StrategyBundle {
        name: "search-witness".into(),
        instance: *inst,
        plan,
        placement,
        cases: CaseStructure { t: inst.t, cases },
        expected_discreet: true,
        revealed_expected: Vec::new(),
    })
}

/// Largest enumeration size before falling back to the closed form.
pub const F2_ENUMERATION_LIMIT: usize = 40;

/// Most new possibilities a discreet two-fakes-versus-one strategy can
/// leave on `t` coins, with a pair distribution attaining it.
pub fn optimal_f2_new_possibilities(t: usize) -> Result<(u128, PairDistribution)> {
    if t <= F2_ENUMERATION_LIMIT {
        enumerate_f2_optimum(t)
    } else {
        closed_form_f2_optimum(t)
    }
}

fn check_f2_size(t: usize) -> Result<()> {
    if t % 2 == 1 && t <= 7 {
        return Err(Error::Argument(format!(
            "no discreet strategy exists for t={t} coins with two fakes against one"
        )));
    }
    if t < 4 {
        return Err(Error::Argument(format!("t={t} is too small")));
    }
    Ok(())
}

/// Closed forms: `(t/2)^2` for even `t`, and
/// `(floor(t/2) - 2)(floor(t/2) - 3) + 4` for odd `t`.
pub fn closed_form_f2_optimum(t: usize) -> Result<(u128, PairDistribution)> {
    check_f2_size(t)?;
    let pairs = if t.is_multiple_of(2) {
        vec![(t / 2, t / 2)]
    } else {
        let m = t / 2;
        vec![(m - 2, m - 3), (1, 2), (2, 1)]
    };
    let dist = PairDistribution { pairs };
    Ok((dist.new_possibilities(), dist))
}

/// Exhaustive maximum of `sum a_j b_j` over multisets of pairs with
/// `a_j, b_j >= 1` and total `t`; for odd `t` at least three pairs must
/// have an odd total. The witness is canonical (see
/// [`PairDistribution::canonical`]); among equal values the
/// lexicographically largest canonical witness is kept.
pub fn enumerate_f2_optimum(t: usize) -> Result<(u128, PairDistribution)> {
    check_f2_size(t)?;
    let need_odd = if t % 2 == 1 { 3 } else { 0 };
    // candidate pairs (a >= b >= 1) in descending order
    let mut kinds: Vec<(usize, usize)> =
        (2..=t).flat_map(|s| (1..=s / 2).map(move |b| (s - b, b))).collect();
    kinds.sort_unstable_by(|x, y| y.cmp(x));

    let mut best: Option<(u128, Vec<(usize, usize)>)> = None;
    let mut cur = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        kinds: &[(usize, usize)],
        from: usize,
        left: usize,
        odd: usize,
        value: u128,
        need_odd: usize,
        cur: &mut Vec<(usize, usize)>,
        best: &mut Option<(u128, Vec<(usize, usize)>)>,
    ) {
        if left == 0 {
            if odd >= need_odd {
                let better = match best {
                    None => true,
                    Some((v, w)) => value > *v || (value == *v && *cur > *w),
                };
                if better {
                    *best = Some((value, cur.clone()));
                }
            }
            return;
        }
        for (i, &(a, b)) in kinds.iter().enumerate().skip(from) {
            if a + b > left {
                continue;
            }
            cur.push((a, b));
            let odd_next = odd + (a + b) % 2;
            rec(kinds, i, left - a - b, odd_next, value + (a * b) as u128, need_odd, cur, best);
            cur.pop();
        }
    }
    rec(&kinds, 0, t, 0, 0, need_odd, &mut cur, &mut best);
    let (value, pairs) =
        best.ok_or_else(|| Error::Argument(format!("no admissible pair distribution for t={t}")))?;
    Ok((value, PairDistribution { pairs }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItineraryLemmaReport {
    pub t: usize,
    pub bound: usize,
    /// Discreet profiles examined, over every weighing count up to `bound`.
    pub profiles: usize,
    pub min_classes: Option<usize>,
    pub min_odd_pairs: Option<usize>,
    pub holds: bool,
}

impl ItineraryLemmaReport {
    pub fn vacuous(&self) -> bool {
        self.profiles == 0
    }
}

/// Checks, for every discreet two-fakes-versus-one profile on an odd number
/// of coins within the bound, that at least six itineraries are occupied
/// and at least three conjugate pairs have an odd total.
pub fn check_itinerary_lemma(t: usize, max_weighings: usize) -> Result<ItineraryLemmaReport> {
    if t.is_multiple_of(2) || t > 11 {
        return Err(Error::Bounds(format!("needs odd t <= 11, got {t}")));
    }
    if max_weighings > 3 {
        return Err(Error::Bounds(format!("{max_weighings} weighings exceed 3")));
    }
    let mut profiles = 0;
    let mut min_classes: Option<usize> = None;
    let mut min_odd: Option<usize> = None;
    for w in 1..=max_weighings {
        for p in all_discreet_profiles(t, 2, 1, w, Pruning::Auto)? {
            profiles += 1;
            let classes = p.classes().len();
            let odd = PairDistribution { pairs: p.conjugate_pairs() }.odd_pairs();
            min_classes = Some(min_classes.map_or(classes, |m| m.min(classes)));
            min_odd = Some(min_odd.map_or(odd, |m| m.min(odd)));
        }
    }
    let holds = min_classes.is_none_or(|c| c >= 6) && min_odd.is_none_or(|o| o >= 3);
    Ok(ItineraryLemmaReport { t, bound: max_weighings, profiles, min_classes, min_odd_pairs: min_odd, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::judge::{classify_privacy, verify_proof};
    use crate::strategies::build_triple_case;

    #[test]
    fn index_round_trip() {
        for w in 0..4 {
            for i in 0..3usize.pow(w as u32) {
                assert_eq!(itinerary_index(&index_itinerary(w, i)), i);
            }
        }
        assert_eq!(index_itinerary(2, 0).to_string(), "OO");
        assert_eq!(index_itinerary(2, 5).to_string(), "LR");
        assert_eq!(conjugate_index(2, 5), 7);
    }

    #[test]
    fn profile_of_triple_case() {
        let b = build_triple_case(&ProblemInstance::new(9, 2, 1).unwrap()).unwrap();
        let p = ItineraryProfile::from_plan(&b.plan);
        assert_eq!(p.total(), 9);
        assert!(p.is_balanced());
        assert_eq!(p.classes().len(), 6);
        let pairs = PairDistribution { pairs: p.conjugate_pairs() };
        assert_eq!(pairs.canonical().pairs, vec![(2, 1), (2, 1), (2, 1)]);
        assert_eq!(pairs.new_possibilities(), 6);
        assert_eq!(discreet_outcome(&p, 2, 1).unwrap(), Some(vec![Outcome::Balanced; 2]));
    }

    #[test]
    fn expansion_reproduces_profile() {
        let p = ItineraryProfile::new(2, vec![0, 2, 1, 0, 0, 0, 0, 1, 2]).unwrap();
        let (plan, _) = p.to_plan();
        assert_eq!(ItineraryProfile::from_plan(&plan), p);
    }

    #[test]
    fn profile_json() {
        let p = ItineraryProfile::new(1, vec![1, 2, 2]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"weighings":1,"classes":{"L":2,"O":1,"R":2}}"#);
        assert_eq!(serde_json::from_str::<ItineraryProfile>(&s).unwrap(), p);
        assert!(serde_json::from_str::<ItineraryProfile>(r#"{"weighings":1,"classes":{"LL":1}}"#).is_err());
    }

    #[test]
    fn small_impossibility() {
        for t in [3, 5, 7] {
            assert_eq!(search_discreet(t, 2, 1, 2).unwrap(), SearchOutcome::Exhausted { bound: 2 });
        }
    }

    #[test]
    fn nine_coins_have_a_witness() {
        let out = search_discreet(9, 2, 1, 2).unwrap();
        let w = out.witness().expect("witness");
        let tr = w.bundle.transcript().unwrap();
        assert!(verify_proof(&w.bundle.instance, &tr, &w.bundle.placement).unwrap().valid);
        assert!(classify_privacy(&w.bundle.instance, &tr).unwrap().discreet);
        assert_eq!(ItineraryProfile::from_plan(&w.bundle.plan), w.profile);
        let pairs = PairDistribution { pairs: w.profile.conjugate_pairs() };
        assert_eq!(pairs.canonical().pairs, vec![(2, 1), (2, 1), (2, 1)]);
    }

    #[test]
    fn even_split_is_found_at_once() {
        let out = search_discreet(4, 2, 1, 1).unwrap();
        let w = out.witness().unwrap();
        assert_eq!(w.profile.weighings(), 1);
        assert_eq!(w.bundle.cases.cases.len(), 1);
    }

    #[test]
    fn bounds_are_enforced() {
        assert!(matches!(search_discreet(13, 2, 1, 2), Err(Error::Bounds(_))));
        assert!(matches!(search_discreet(9, 2, 1, 5), Err(Error::Bounds(_))));
        assert!(matches!(check_itinerary_lemma(8, 2), Err(Error::Bounds(_))));
        assert!(matches!(check_itinerary_lemma(13, 2), Err(Error::Bounds(_))));
        assert!(search_discreet(5, 5, 1, 2).is_err());
    }

    #[test]
    fn f2_optimum_examples() {
        let (v, w) = enumerate_f2_optimum(9).unwrap();
        assert_eq!(v, 6);
        assert_eq!(w.pairs, vec![(2, 1), (2, 1), (2, 1)]);
        let (v, w) = closed_form_f2_optimum(9).unwrap();
        assert_eq!((v, w.pairs), (6, vec![(2, 1), (1, 2), (2, 1)]));
        assert_eq!(optimal_f2_new_possibilities(80).unwrap(), (1600, PairDistribution { pairs: vec![(40, 40)] }));
        assert_eq!(optimal_f2_new_possibilities(81).unwrap().0, 1410);
        for t in [3, 5, 7] {
            assert!(optimal_f2_new_possibilities(t).is_err());
        }
        assert!(optimal_f2_new_possibilities(2).is_err());
    }

    #[test]
    fn lemma_on_small_odd_counts() {
        let r = check_itinerary_lemma(5, 3).unwrap();
        assert!(r.vacuous() && r.holds);
        let r = check_itinerary_lemma(9, 2).unwrap();
        assert!(r.profiles > 0 && r.holds);
        assert_eq!(r.min_classes, Some(6));
    }
}
