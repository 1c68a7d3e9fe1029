//! Coins, weighings, outcomes and itineraries.
//!
//! Coins are indexed `0..t`. A weighing puts two disjoint, equally sized
//! groups of coins on the pans; since every fake weighs the same and is
//! lighter than every real coin, the outcome depends only on how many fakes
//! sit on each pan.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Coin = usize;

/// One courtroom scenario: `t` coins, `f` of them actually fake, and a rival
/// claim of `d` fakes that the lawyer has to rule out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct ProblemInstance {
    pub t: usize,
    pub f: usize,
    pub d: usize,
}

#[derive(Deserialize)]
struct RawInstance {
    t: usize,
    f: usize,
    d: usize,
}

impl TryFrom<RawInstance> for ProblemInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        ProblemInstance::new(raw.t, raw.f, raw.d)
    }
}

impl ProblemInstance {
    pub fn new(t: usize, f: usize, d: usize) -> Result<Self> {
        if f == 0 || f >= t {
            return Err(Error::Instance(format!("need 0 < f < t, got t={t}, f={f}")));
        }
        if d > t {
            return Err(Error::Instance(format!("need d <= t, got t={t}, d={d}")));
        }
        if d == f {
            return Err(Error::Instance(format!("d must differ from f (both {f})")));
        }
        Ok(ProblemInstance { t, f, d })
    }
}

impl fmt::Display for ProblemInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-{}", self.t, self.f, self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Balanced,
    LeftLighter,
    RightLighter,
}

impl Outcome {
    /// Outcome of a weighing whose left pan holds `left` fakes and right pan
    /// holds `right` fakes.
    pub fn from_fake_counts(left: usize, right: usize) -> Outcome {
        use std::cmp::Ordering::*;
        match left.cmp(&right) {
            Equal => Outcome::Balanced,
            Greater => Outcome::LeftLighter,
            Less => Outcome::RightLighter,
        }
    }

    /// Outcome given the signed difference `fakes_left - fakes_right`.
    pub fn from_difference(diff: i64) -> Outcome {
        match diff {
            0 => Outcome::Balanced,
            d if d > 0 => Outcome::LeftLighter,
            _ => Outcome::RightLighter,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Balanced => "balanced",
            Outcome::LeftLighter => "left_lighter",
            Outcome::RightLighter => "right_lighter",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weighing {
    pub left: Vec<Coin>,
    pub right: Vec<Coin>,
}

impl Weighing {
    pub fn new(left: impl IntoIterator<Item = Coin>, right: impl IntoIterator<Item = Coin>) -> Self {
        let mut left: Vec<Coin> = left.into_iter().collect();
        let mut right: Vec<Coin> = right.into_iter().collect();
        left.sort_unstable();
        right.sort_unstable();
        Weighing { left, right }
    }

    /// Position of `coin` in this weighing.
    pub fn side_of(&self, coin: Coin) -> Symbol {
        if self.left.contains(&coin) {
            Symbol::L
        } else if self.right.contains(&coin) {
            Symbol::R
        } else {
            Symbol::O
        }
    }

    /// Structural violations plus, when `t` is given, out-of-range coins.
    fn violations(&self, index: usize, t: Option<usize>, out: &mut Vec<Violation>) {
        let mut seen = BTreeMap::new();
        for (side, coins) in [(Symbol::L, &self.left), (Symbol::R, &self.right)] {
            for &coin in coins.iter() {
                if let Some(t) = t {
                    if coin >= t {
                        out.push(Violation::OutOfRange { weighing: index, coin, t });
                    }
                }
                match seen.insert(coin, side) {
                    Some(prev) if prev == side => {
                        out.push(Violation::DuplicateCoin { weighing: index, coin })
                    }
                    Some(_) => out.push(Violation::Overlap { weighing: index, coin }),
                    None => {}
                }
            }
        }
        if self.left.is_empty() || self.right.is_empty() {
            out.push(Violation::EmptyPan { weighing: index });
        }
        if self.left.len() != self.right.len() {
            out.push(Violation::UnequalPans {
                weighing: index,
                left: self.left.len(),
                right: self.right.len(),
            });
        }
    }

    fn check(&self) -> Result<()> {
        let mut v = Vec::new();
        self.violations(0, None, &mut v);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(v))
        }
    }
}

/// Problems found by [`validate_plan`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Overlap { weighing: usize, coin: Coin },
    DuplicateCoin { weighing: usize, coin: Coin },
    UnequalPans { weighing: usize, left: usize, right: usize },
    EmptyPan { weighing: usize },
    OutOfRange { weighing: usize, coin: Coin, t: usize },
    FakeOutOfRange { coin: Coin, t: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Overlap { weighing, coin } => {
                write!(f, "weighing {weighing}: coin {coin} is on both pans")
            }
            Violation::DuplicateCoin { weighing, coin } => {
                write!(f, "weighing {weighing}: coin {coin} listed twice on one pan")
            }
            Violation::UnequalPans { weighing, left, right } => {
                write!(f, "weighing {weighing}: pans hold {left} and {right} coins")
            }
            Violation::EmptyPan { weighing } => write!(f, "weighing {weighing}: empty pan"),
            Violation::OutOfRange { weighing, coin, t } => {
                write!(f, "weighing {weighing}: coin {coin} out of range for t={t}")
            }
            Violation::FakeOutOfRange { coin, t } => {
                write!(f, "fake coin {coin} out of range for t={t}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::Validation(self.violations))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeighingPlan {
    pub t: usize,
    pub weighings: Vec<Weighing>,
}

impl WeighingPlan {
    pub fn new(t: usize, weighings: Vec<Weighing>) -> Result<Self> {
        let plan = WeighingPlan { t, weighings };
        plan.validate()?;
        Ok(plan)
    }

    pub fn empty(t: usize) -> Self {
        WeighingPlan { t, weighings: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.weighings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weighings.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        validate_plan(self).into_result()
    }
}

pub fn validate_plan(plan: &WeighingPlan) -> ValidationReport {
    let mut violations = Vec::new();
    for (i, w) in plan.weighings.iter().enumerate() {
        w.violations(i, Some(plan.t), &mut violations);
    }
    ValidationReport { violations }
}

/// A set of coins, kept sorted and free of duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FakeSet {
    coins: Vec<Coin>,
}

impl FakeSet {
    pub fn new(coins: impl IntoIterator<Item = Coin>) -> Self {
        let mut coins: Vec<Coin> = coins.into_iter().collect();
        coins.sort_unstable();
        coins.dedup();
        FakeSet { coins }
    }

    /// Wraps coins already sorted strictly ascending.
    pub(crate) fn from_sorted(coins: Vec<Coin>) -> Self {
        debug_assert!(coins.windows(2).all(|w| w[0] < w[1]));
        FakeSet { coins }
    }

    pub fn coins(&self) -> &[Coin] {
        &self.coins
    }

    pub fn len(&self) -> usize {
        self.coins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coins.is_empty()
    }

    pub fn contains(&self, coin: Coin) -> bool {
        self.coins.binary_search(&coin).is_ok()
    }

    pub fn check_range(&self, t: usize) -> Result<()> {
        let bad: Vec<_> = self
            .coins
            .iter()
            .filter(|&&c| c >= t)
            .map(|&coin| Violation::FakeOutOfRange { coin, t })
            .collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(bad))
        }
    }

    fn count_in(&self, pan: &[Coin]) -> usize {
        pan.iter().filter(|&&c| self.contains(c)).count()
    }
}

impl FromIterator<Coin> for FakeSet {
    fn from_iter<I: IntoIterator<Item = Coin>>(iter: I) -> Self {
        FakeSet::new(iter)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    #[serde(flatten)]
    pub plan: WeighingPlan,
    pub outcomes: Vec<Outcome>,
}

impl Transcript {
    pub fn new(plan: WeighingPlan, outcomes: Vec<Outcome>) -> Result<Self> {
        let tr = Transcript { plan, outcomes };
        tr.validate()?;
        Ok(tr)
    }

    pub fn validate(&self) -> Result<()> {
        self.plan.validate()?;
        if self.outcomes.len() != self.plan.len() {
            return Err(Error::Argument(format!(
                "transcript has {} outcomes for {} weighings",
                self.outcomes.len(),
                self.plan.len()
            )));
        }
        Ok(())
    }

    /// The same transcript with one more weighing appended.
    pub fn extended(&self, weighing: Weighing, outcome: Outcome) -> Result<Transcript> {
        let mut plan = self.plan.clone();
        plan.weighings.push(weighing);
        let mut outcomes = self.outcomes.clone();
        outcomes.push(outcome);
        Transcript::new(plan, outcomes)
    }
}

pub fn simulate_outcome(w: &Weighing, fakes: &FakeSet) -> Result<Outcome> {
    w.check()?;
    Ok(Outcome::from_fake_counts(fakes.count_in(&w.left), fakes.count_in(&w.right)))
}

pub fn simulate_transcript(plan: &WeighingPlan, fakes: &FakeSet) -> Result<Transcript> {
    plan.validate()?;
    fakes.check_range(plan.t)?;
    let outcomes = plan
        .weighings
        .iter()
        .map(|w| Outcome::from_fake_counts(fakes.count_in(&w.left), fakes.count_in(&w.right)))
        .collect();
    Ok(Transcript { plan: plan.clone(), outcomes })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    L,
    R,
    O,
}

impl Symbol {
    pub fn conjugate(self) -> Symbol {
        match self {
            Symbol::L => Symbol::R,
            Symbol::R => Symbol::L,
            Symbol::O => Symbol::O,
        }
    }

    /// Contribution of a fake coin with this symbol to `fakes_left - fakes_right`.
    pub fn sign(self) -> i64 {
        match self {
            Symbol::L => 1,
            Symbol::R => -1,
            Symbol::O => 0,
        }
    }

    fn as_char(self) -> char {
        match self {
            Symbol::L => 'L',
            Symbol::R => 'R',
            Symbol::O => 'O',
        }
    }
}

/// A coin's pan (left, right or off the scale) in each weighing, in
/// weighing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Itinerary(pub Vec<Symbol>);

impl Itinerary {
    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conjugate(&self) -> Itinerary {
        Itinerary(self.0.iter().map(|s| s.conjugate()).collect())
    }

    pub fn is_self_conjugate(&self) -> bool {
        *self == self.conjugate()
    }
}

/// Free-function form of [`Itinerary::conjugate`].
pub fn conjugate(it: &Itinerary) -> Itinerary {
    it.conjugate()
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|s| write!(f, "{}", s.as_char()))
    }
}

impl FromStr for Itinerary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'L' => Ok(Symbol::L),
                'R' => Ok(Symbol::R),
                'O' => Ok(Symbol::O),
                other => Err(Error::Argument(format!("bad itinerary symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Itinerary)
    }
}

impl Serialize for Itinerary {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Itinerary {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn itinerary_of(plan: &WeighingPlan, coin: Coin) -> Result<Itinerary> {
    if coin >= plan.t {
        return Err(Error::Validation(vec![Violation::FakeOutOfRange { coin, t: plan.t }]));
    }
    Ok(Itinerary(plan.weighings.iter().map(|w| w.side_of(coin)).collect()))
}

/// Groups every coin by its itinerary. Coins within a class are ascending.
pub fn partition_by_itinerary(plan: &WeighingPlan) -> BTreeMap<Itinerary, Vec<Coin>> {
    let mut side = vec![vec![Symbol::O; plan.len()]; plan.t];
    for (i, w) in plan.weighings.iter().enumerate() {
        for &c in w.left.iter().filter(|&&c| c < plan.t) {
            side[c][i] = Symbol::L;
        }
        for &c in w.right.iter().filter(|&&c| c < plan.t) {
            side[c][i] = Symbol::R;
        }
    }
    let mut classes: BTreeMap<Itinerary, Vec<Coin>> = BTreeMap::new();
    for (coin, symbols) in side.into_iter().enumerate() {
        classes.entry(Itinerary(symbols)).or_default().push(coin);
    }
    classes
}
