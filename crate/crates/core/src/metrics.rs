//! Leakage measures.
//!
//! The revealing factor compares how many size-`f` fake sets were possible
//! before and after the weighings. The guessing measures look at a judge who
//! only wants to point at one fake coin, either under a uniform posterior
//! over the surviving sets or against a lawyer who randomizes over the cases
//! a strategy leaves open.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::judge::binomial;
use crate::rational::Rational;
use crate::weighmodel::{Coin, FakeSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RevealingMetrics {
    #[serde(rename = "old")]
    pub old_possibilities: u128,
    #[serde(rename = "new")]
    pub new_possibilities: u128,
    #[serde(rename = "X")]
    pub factor_x: Rational,
    #[serde(rename = "R")]
    pub coefficient_r: Rational,
}

impl RevealingMetrics {
    pub fn x_display(&self) -> String {
        self.factor_x.round_half_even(3)
    }

    pub fn r_display(&self) -> String {
        self.coefficient_r.round_half_even(3)
    }
}

pub fn revealing_metrics(t: usize, f: usize, new_possibilities: u128) -> Result<RevealingMetrics> {
    let old = binomial(t, f).ok_or_else(|| Error::Argument(format!("C({t},{f}) overflows")))?;
    if new_possibilities == 0 {
        return Err(Error::Argument("new possibilities must be at least 1".into()));
    }
    if new_possibilities > old {
        return Err(Error::Argument(format!(
            "new possibilities {new_possibilities} exceed C({t},{f}) = {old}"
        )));
    }
    let factor_x = Rational::new(old, new_possibilities);
    let coefficient_r = Rational::one() - factor_x.recip();
    Ok(RevealingMetrics {
        old_possibilities: old,
        new_possibilities,
        factor_x,
        coefficient_r,
    })
}

fn check_divisor(what: &str, n: usize, a: usize) -> Result<()> {
    if a < 2 {
        return Err(Error::Argument(format!("pile count a={a} must exceed 1")));
    }
    if !n.is_multiple_of(a) {
        return Err(Error::Argument(format!("a={a} does not divide {what}={n}")));
    }
    Ok(())
}

/// Revealing factor of splitting `t` coins into `a` equal piles with `f/a`
/// fakes each: `C(t, f) / C(t/a, f/a)^a`.
pub fn strategy6_factor(t: usize, f: usize, a: usize) -> Result<Rational> {
    check_divisor("t", t, a)?;
    check_divisor("f", f, a)?;
    let too_big = || Error::Argument("binomial overflows".into());
    let old = binomial(t, f).ok_or_else(too_big)?;
    let per_pile = binomial(t / a, f / a).ok_or_else(too_big)?;
    let mut new = Rational::one();
    for _ in 0..a {
        new = new * Rational::from(per_pile);
    }
    Ok(Rational::from(old) / new)
}

fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, i| acc * Rational::from_int(i as u64))
}

fn power(base: usize, exp: usize) -> Rational {
    (0..exp).fold(Rational::one(), |acc, _| acc * Rational::from_int(base as u64))
}

/// Limit of [`strategy6_factor`] as `t` grows:
/// `f^f / f! * ((f/a)! / (f/a)^(f/a))^a`.
pub fn strategy6_asymptotic(f: usize, a: usize) -> Result<f64> {
    check_divisor("f", f, a)?;
    let g = f / a;
    let inner = factorial(g) / power(g, g);
    let mut value = power(f, f) / factorial(f);
    for _ in 0..a {
        value = &value * &inner;
    }
    Ok(value.to_f64())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingleGuess {
    pub coin: Coin,
    pub prob: Rational,
}

/// The coin most likely to be fake when one of `consistent` is drawn with
/// the given weights (uniform by default). Ties go to the lowest index.
pub fn best_single_guess(consistent: &[FakeSet], weights: Option<&[Rational]>) -> Result<SingleGuess> {
    if consistent.is_empty() {
        return Err(Error::Argument("no consistent fake sets to guess from".into()));
    }
    let uniform;
    let weights = match weights {
        Some(w) => {
            if w.len() != consistent.len() {
                return Err(Error::Argument(format!(
                    "{} weights for {} sets",
                    w.len(),
                    consistent.len()
                )));
            }
            if w.iter().any(Rational::is_negative) || w.iter().cloned().sum::<Rational>() != Rational::one() {
                return Err(Error::Argument("weights must be nonnegative and sum to 1".into()));
            }
            w
        }
        None => {
            uniform = vec![Rational::new(1, consistent.len() as u64); consistent.len()];
            &uniform[..]
        }
    };
    let top = consistent.iter().flat_map(|s| s.coins().iter().copied()).max().unwrap_or(0);
    let mut marginal = vec![Rational::zero(); top + 1];
    for (set, w) in consistent.iter().zip(weights) {
        for &c in set.coins() {
            marginal[c] = &marginal[c] + w;
        }
    }
    let (coin, prob) = argmax_first(marginal.into_iter())
        .ok_or_else(|| Error::Argument("consistent sets contain no coins".into()))?;
    Ok(SingleGuess { coin, prob })
}

/// Uniform-posterior best guess from per-coin membership counts over `total`
/// equally likely sets (see [`crate::judge::membership_counts`]).
pub fn best_single_guess_from_counts(counts: &[u128], total: u128) -> Result<SingleGuess> {
    if total == 0 {
        return Err(Error::Argument("no consistent fake sets to guess from".into()));
    }
    let (coin, &hits) = counts
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, &u128)>, (i, c)| match best {
            Some((_, b)) if b >= c => best,
            _ => Some((i, c)),
        })
        .ok_or_else(|| Error::Argument("no coins".into()))?;
    Ok(SingleGuess { coin, prob: Rational::new(hits, total) })
}

fn argmax_first(values: impl Iterator<Item = Rational>) -> Option<(usize, Rational)> {
    values.enumerate().fold(None, |best, (i, v)| match best {
        Some((_, ref b)) if *b >= v => best,
        _ => Some((i, v)),
    })
}

/// A group of coins known to hold exactly `fakes` fakes in some case,
/// uniformly placed within it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pile {
    pub coins: Vec<Coin>,
    #[serde(default = "one_fake")]
    pub fakes: usize,
}

fn one_fake() -> usize {
    1
}

impl Pile {
    pub fn single(coins: impl IntoIterator<Item = Coin>) -> Pile {
        Pile { coins: coins.into_iter().collect(), fakes: 1 }
    }
}

/// The mutually exclusive ways a strategy leaves the fakes distributed.
/// Piles may be shared between cases but must be disjoint within one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseStructure {
    pub t: usize,
    pub cases: Vec<Vec<Pile>>,
}

impl CaseStructure {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Argument(msg));
        if self.cases.is_empty() {
            return bad("case structure has no cases".into());
        }
        let mut fake_total = None;
        for (i, case) in self.cases.iter().enumerate() {
            let mut seen = vec![false; self.t];
            let mut total = 0;
            for pile in case {
                if pile.fakes == 0 || pile.fakes > pile.coins.len() {
                    return bad(format!("case {i}: pile of {} coins cannot hold {} fakes", pile.coins.len(), pile.fakes));
                }
                for &c in &pile.coins {
                    if c >= self.t {
                        return bad(format!("case {i}: coin {c} out of range for t={}", self.t));
                    }
                    if std::mem::replace(&mut seen[c], true) {
                        return bad(format!("case {i}: coin {c} appears in two piles"));
                    }
                }
                total += pile.fakes;
            }
            match fake_total {
                None => fake_total = Some(total),
                Some(f) if f != total => {
                    return bad(format!("case {i} places {total} fakes, earlier cases place {f}"))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn fake_count(&self) -> usize {
        self.cases.first().map_or(0, |c| c.iter().map(|p| p.fakes).sum())
    }

    /// Number of distinct fake sets each case allows.
    pub fn case_sizes(&self) -> Vec<u128> {
        self.cases
            .iter()
            .map(|case| {
                case.iter()
                    .map(|p| binomial(p.coins.len(), p.fakes).unwrap_or(u128::MAX))
                    .fold(1u128, u128::saturating_mul)
            })
            .collect()
    }

    /// Per coin, the probability of being fake in each case.
    fn coin_rows(&self) -> Vec<Vec<Rational>> {
        let mut rows = vec![vec![Rational::zero(); self.cases.len()]; self.t];
        for (j, case) in self.cases.iter().enumerate() {
            for pile in case {
                let share = Rational::new(pile.fakes as u64, pile.coins.len() as u64);
                for &c in &pile.coins {
                    rows[c][j] = share.clone();
                }
            }
        }
        rows
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlacementDistribution {
    pub probabilities: Vec<Rational>,
}

pub fn case_marginals(cs: &CaseStructure, p: &PlacementDistribution) -> Result<Vec<Rational>> {
    cs.validate()?;
    if p.probabilities.len() != cs.cases.len() {
        return Err(Error::Argument(format!(
            "{} probabilities for {} cases",
            p.probabilities.len(),
            cs.cases.len()
        )));
    }
    Ok(cs
        .coin_rows()
        .iter()
        .map(|row| row.iter().zip(&p.probabilities).map(|(a, q)| a * q).sum())
        .collect())
}

pub const MAX_MINIMAX_CASES: usize = 6;

/// The lawyer's case distribution minimizing the judge's best single-coin
/// hit probability, with that probability.
///
/// The objective is a maximum of linear forms over the simplex, so the
/// optimum sits where `m` of the constraints `row . p = z` or `p_j = 0`
/// hold with equality together with `sum p = 1`. Every such choice is
/// solved exactly and the feasible one with the smallest `z` wins.
pub fn minimax_distribution(cs: &CaseStructure) -> Result<(PlacementDistribution, Rational)> {
    cs.validate()?;
    let m = cs.cases.len();
    if m > MAX_MINIMAX_CASES {
        return Err(Error::Argument(format!("{m} cases exceed the supported {MAX_MINIMAX_CASES}")));
    }
    let rows = undominated(cs.coin_rows());
    if m == 1 {
        let value = rows.iter().map(|r| r[0].clone()).max().unwrap_or_else(Rational::zero);
        return Ok((PlacementDistribution { probabilities: vec![Rational::one()] }, value));
    }

    // constraint k < rows.len(): row_k . p - z = 0; otherwise p_{k - rows.len()} = 0
    let pool = rows.len() + m;
    let mut best: Option<(Vec<Rational>, Rational)> = None;
    for chosen in Subsets::new(pool, m) {
        let mut a = Vec::with_capacity(m + 1);
        let mut b = Vec::with_capacity(m + 1);
        let mut ones = vec![Rational::one(); m];
        ones.push(Rational::zero());
        a.push(ones);
        b.push(Rational::one());
        for &k in &chosen {
            let mut eq = vec![Rational::zero(); m + 1];
            if k < rows.len() {
                eq[..m].clone_from_slice(&rows[k]);
                eq[m] = Rational::from_int(-1);
            } else {
                eq[k - rows.len()] = Rational::one();
            }
            a.push(eq);
            b.push(Rational::zero());
        }
        let Some(x) = solve(a, b) else { continue };
        let (p, z) = (&x[..m], &x[m]);
        if p.iter().any(Rational::is_negative) {
            continue;
        }
        let feasible = rows.iter().all(|r| dot(r, p) <= *z);
        if feasible && best.as_ref().is_none_or(|(_, bz)| z < bz) {
            best = Some((p.to_vec(), z.clone()));
        }
    }
    let (probabilities, value) =
        best.ok_or_else(|| Error::Argument("no feasible placement distribution".into()))?;
    Ok((PlacementDistribution { probabilities }, value))
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Distinct rows not componentwise below another row; those can never be
/// the binding maximum on the simplex.
fn undominated(mut rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    rows.sort();
    rows.dedup();
    let keep: Vec<bool> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            !rows.iter().enumerate().any(|(j, s)| i != j && r.iter().zip(s).all(|(x, y)| x <= y))
        })
        .collect();
    rows.into_iter().zip(keep).filter_map(|(r, k)| k.then_some(r)).collect()
}

/// Exact Gauss-Jordan elimination; `None` when singular.
#[allow(clippy::needless_range_loop)]
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v = &*v * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..n {
                    let delta = &factor * &a[col][c];
                    a[r][c] = &a[r][c] - &delta;
                }
                let delta = &factor * &b[col];
                b[r] = &b[r] - &delta;
            }
        }
    }
    Some(b)
}

/// k-subsets of 0..n in lexicographic order.
struct Subsets {
    n: usize,
    cur: Option<Vec<usize>>,
}

impl Subsets {
    fn new(n: usize, k: usize) -> Subsets {
        Subsets { n, cur: (k <= n).then(|| (0..k).collect()) }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.cur.as_mut()?;
        let out = cur.clone();
        let k = cur.len();
        match (0..k).rev().find(|&i| cur[i] < self.n - k + i) {
            Some(i) => {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
            }
            None => self.cur = None,
        }
        Some(out)
    }
}
