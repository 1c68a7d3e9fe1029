//! Constructors for the named weighing strategies.
//!
//! Piles occupy contiguous coin ranges in the order each constructor lists
//! them, and a pile holding fakes holds them at its lowest indices. Families
//! of piles are shown equal with a star pattern: the first pile against each
//! of the others.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{CaseStructure, Pile};
use crate::weighmodel::{simulate_transcript, Coin, FakeSet, ProblemInstance, Transcript, Weighing, WeighingPlan};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyBundle {
    pub name: String,
    pub instance: ProblemInstance,
    pub plan: WeighingPlan,
    pub placement: FakeSet,
    pub cases: CaseStructure,
    pub expected_discreet: bool,
    pub revealed_expected: Vec<Coin>,
}

impl StrategyBundle {
    /// The transcript produced by weighing with the bundle's own placement.
    pub fn transcript(&self) -> Result<Transcript> {
        simulate_transcript(&self.plan, &self.placement)
    }
}

pub const STRATEGY_NAMES: [&str; 5] =
    ["equal-piles", "triple-case", "official", "leftover-reveal", "reference-pile"];

/// Builds a strategy by its CLI name. `a` is only used by `equal-piles`.
pub fn build_named(name: &str, inst: &ProblemInstance, a: Option<usize>) -> Result<StrategyBundle> {
    match name {
        "equal-piles" => {
            let a = a.ok_or_else(|| Error::Construction("equal-piles needs a pile count a".into()))?;
            build_equal_piles(inst, a)
        }
        "triple-case" => build_triple_case(inst),
        "official" => build_official(inst),
        "leftover-reveal" => build_leftover_reveal(inst),
        "reference-pile" => build_reference_pile(inst),
        other => Err(Error::Argument(format!(
            "unknown strategy {other:?}, expected one of {}",
            STRATEGY_NAMES.join(", ")
        ))),
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Construction(msg()))
    }
}

/// Lays piles out back to back from coin 0.
fn layout(sizes: &[usize]) -> Vec<Range<Coin>> {
    let mut next = 0;
    sizes
        .iter()
        .map(|&s| {
            let r = next..next + s;
            next += s;
            r
        })
        .collect()
}

fn union(ranges: &[&Range<Coin>]) -> Vec<Coin> {
    ranges.iter().flat_map(|r| (*r).clone()).collect()
}

fn star(groups: &[Vec<Coin>]) -> Vec<Weighing> {
    groups[1..].iter().map(|g| Weighing::new(groups[0].clone(), g.clone())).collect()
}

fn single_piles(ranges: &[&Range<Coin>]) -> Vec<Pile> {
    ranges.iter().map(|r| Pile::single((*r).clone())).collect()
}

/// `a` equal piles with `f/a` fakes each, all shown to weigh the same.
pub fn build_equal_piles(inst: &ProblemInstance, a: usize) -> Result<StrategyBundle> {
    let ProblemInstance { t, f, d } = *inst;
    require(a > 1, || format!("pile count a={a} must exceed 1"))?;
    require(t % a == 0, || format!("a={a} does not divide t={t}"))?;
    require(f % a == 0, || format!("a={a} does not divide f={f}"))?;
    require(d % a != 0, || format!("a={a} divides d={d}, so equal piles cannot rule it out"))?;
    let size = t / a;
    let per_pile = f / a;
    let piles = layout(&vec![size; a]);
    let groups: Vec<Vec<Coin>> = piles.iter().map(|r| r.clone().collect()).collect();
    let plan = WeighingPlan::new(t, star(&groups))?;
    let placement = piles.iter().flat_map(|r| r.start..r.start + per_pile).collect();
    let cases = CaseStructure {
        t,
        cases: vec![groups.into_iter().map(|coins| Pile { coins, fakes: per_pile }).collect()],
    };
    Ok(StrategyBundle {
        name: "equal-piles".into(),
        instance: *inst,
        plan,
        placement,
        cases,
        expected_discreet: true,
        revealed_expected: Vec::new(),
    })
}

/// Three families `A_i`, `B_i`, `C_i` (`i = 1..f`) such that the fakes sit
/// one per `A_i`, one per `B_i`, or one per `C_i`. With `t = f*k + r`:
/// `|A_i| = k-2, |B_i| = 1, |C_i| = 2` for `i <= r` and
/// `|A_i| = k-3, |B_i| = 2, |C_i| = 1` otherwise, so every `A_i + B_i` holds
/// `k-1` coins and every `B_i + C_i` holds 3.
pub fn build_triple_case(inst: &ProblemInstance) -> Result<StrategyBundle> {
    let ProblemInstance { t, f, d } = *inst;
    let (k, r) = (t / f, t % f);
    require(r != 0, || format!("f={f} divides t={t}; use equal piles instead"))?;
    require(k >= 4, || format!("need floor(t/f) >= 4, got {k}"))?;
    require(0 < d && d < f, || format!("need 0 < d < f, got d={d}, f={f}"))?;

    let mut sizes = Vec::with_capacity(3 * f);
    sizes.extend((0..f).map(|i| if i < r { k - 2 } else { k - 3 }));
    sizes.extend((0..f).map(|i| if i < r { 1 } else { 2 }));
    sizes.extend((0..f).map(|i| if i < r { 2 } else { 1 }));
    let piles = layout(&sizes);
    let (a_piles, rest) = piles.split_at(f);
    let (b_piles, c_piles) = rest.split_at(f);

    let ab: Vec<Vec<Coin>> = (0..f).map(|i| union(&[&a_piles[i], &b_piles[i]])).collect();
    let bc: Vec<Vec<Coin>> = (0..f).map(|i| union(&[&b_piles[i], &c_piles[i]])).collect();
    let mut weighings = star(&ab);
    weighings.extend(star(&bc));
    let plan = WeighingPlan::new(t, weighings)?;

    let placement = a_piles.iter().map(|r| r.start).collect();
    let family = |ps: &[Range<Coin>]| single_piles(&ps.iter().collect::<Vec<_>>());
    let cases = CaseStructure { t, cases: vec![family(a_piles), family(b_piles), family(c_piles)] };
    Ok(StrategyBundle {
        name: "triple-case".into(),
        instance: *inst,
        plan,
        placement,
        cases,
        expected_discreet: true,
        revealed_expected: Vec::new(),
    })
}

/// Piles `A, B` of `t/8` and `C, D, E` of `t/4`, fakes in `A, D, E`:
/// `A+C = B+D`, `A+B = E`, then `C+D` heavier than `A+B+E`.
pub fn build_official(inst: &ProblemInstance) -> Result<StrategyBundle> {
    let ProblemInstance { t, f, d } = *inst;
    require(f == 3, || format!("needs f=3, got f={f}"))?;
    require(0 < d && d < 3, || format!("needs 0 < d < 3, got d={d}"))?;
    require(t % 8 == 0, || format!("t={t} not divisible by 8"))?;
    let piles = layout(&[t / 8, t / 8, t / 4, t / 4, t / 4]);
    let [a, b, c, dd, e] = [&piles[0], &piles[1], &piles[2], &piles[3], &piles[4]];
    let plan = WeighingPlan::new(
        t,
        vec![
            Weighing::new(union(&[a, c]), union(&[b, dd])),
            Weighing::new(union(&[a, b]), union(&[e])),
            Weighing::new(union(&[c, dd]), union(&[a, b, e])),
        ],
    )?;
    let placement = [a, dd, e].iter().map(|r| r.start).collect();
    let cases = CaseStructure { t, cases: vec![single_piles(&[a, dd, e]), single_piles(&[b, c, e])] };
    Ok(StrategyBundle {
        name: "official".into(),
        instance: *inst,
        plan,
        placement,
        cases,
        expected_discreet: true,
        revealed_expected: Vec::new(),
    })
}

/// `f` piles of `floor(t/f)` with one fake each and `r = t mod f` leftover
/// coins. After showing the piles equal, the leftovers plus
/// `max(0, d+1-r)` genuine coins borrowed from the piles (spread evenly,
/// taken from the top of each pile) are shown to weigh the same coin for
/// coin. That group is revealed genuine.
pub fn build_leftover_reveal(inst: &ProblemInstance) -> Result<StrategyBundle> {
    let ProblemInstance { t, f, d } = *inst;
    let (k, r) = (t / f, t % f);
    require(r != 0, || format!("f={f} divides t={t}, so there are no leftover coins"))?;
    require(d % f != 0, || format!("f={f} divides d={d}"))?;
    let reserve = f * (d + 1).div_ceil(f);
    require(reserve < t && d < t - reserve, || {
        format!("need d < t - f*ceil((d+1)/f), got t={t}, f={f}, d={d}")
    })?;
    let borrow = (d + 1).saturating_sub(r);
    let per_pile = |i: usize| borrow / f + usize::from(i < borrow % f);
    require(per_pile(0) < k, || format!("piles of {k} cannot lend {} genuine coins", per_pile(0)))?;

    let mut sizes = vec![k; f];
    sizes.push(r);
    let piles = layout(&sizes);
    let groups: Vec<Vec<Coin>> = piles[..f].iter().map(|p| p.clone().collect()).collect();
    let mut weighings = star(&groups);

    let mut equal_group: Vec<Coin> = piles[f].clone().collect();
    let mut lent = Vec::new();
    for (i, p) in piles[..f].iter().enumerate() {
        lent.extend(p.end - per_pile(i)..p.end);
    }
    equal_group.extend(&lent);
    equal_group.sort_unstable();
    let singles: Vec<Vec<Coin>> = equal_group.iter().map(|&c| vec![c]).collect();
    weighings.extend(star(&singles));
    let plan = WeighingPlan::new(t, weighings)?;

    let placement = piles[..f].iter().map(|p| p.start).collect();
    let remaining: Vec<Pile> = piles[..f]
        .iter()
        .enumerate()
        .map(|(i, p)| Pile::single(p.start..p.end - per_pile(i)))
        .collect();
    Ok(StrategyBundle {
        name: "leftover-reveal".into(),
        instance: *inst,
        plan,
        placement,
        cases: CaseStructure { t, cases: vec![remaining] },
        expected_discreet: false,
        revealed_expected: equal_group,
    })
}

/// `f+1` equal piles, fakes one in each of the first `f`, each of which is
/// shown lighter than the last pile. The last pile is revealed genuine.
pub fn build_reference_pile(inst: &ProblemInstance) -> Result<StrategyBundle> {
    let ProblemInstance { t, f, d } = *inst;
    require(t % (f + 1) == 0, || format!("f+1={} does not divide t={t}", f + 1))?;
    require(0 < d && d < f, || format!("need 0 < d < f, got d={d}, f={f}"))?;
    let piles = layout(&vec![t / (f + 1); f + 1]);
    let reference: Vec<Coin> = piles[f].clone().collect();
    let weighings = piles[..f].iter().map(|p| Weighing::new(p.clone(), reference.clone())).collect();
    let plan = WeighingPlan::new(t, weighings)?;
    let placement = piles[..f].iter().map(|p| p.start).collect();
    let cases = CaseStructure { t, cases: vec![single_piles(&piles[..f].iter().collect::<Vec<_>>())] };
    Ok(StrategyBundle {
        name: "reference-pile".into(),
        instance: *inst,
        plan,
        placement,
        cases,
        expected_discreet: false,
        revealed_expected: reference,
    })
}
