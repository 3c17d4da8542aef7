//! Linear extensions: exact counting over the lattice of order ideals,
//! lexicographic enumeration, and pair probabilities.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::prob::{fraction_string, PairProbability};
use crate::set::ElementSet;

/// Default bound on memoized order ideals per count.
pub const DEFAULT_MEMO_BUDGET: usize = 1 << 26;

/// Default bound on the poset size accepted by [`enumerate_extensions`].
pub const DEFAULT_ENUMERATION_LIMIT: usize = 10;

/// Posets up to this size use a dense memo table indexed by ideal bitmask.
const DENSE_MEMO_MAX: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountConfig {
    pub max_memo_entries: usize,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig { max_memo_entries: DEFAULT_MEMO_BUDGET }
    }
}

/// e(P), the number of linear extensions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtensionCount(BigUint);

impl ExtensionCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }
}

impl From<u64> for ExtensionCount {
    fn from(v: u64) -> Self {
        ExtensionCount(v.into())
    }
}

impl fmt::Display for ExtensionCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for ExtensionCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn count_extensions(p: &Poset) -> Result<ExtensionCount> {
    count_extensions_with(p, &CountConfig::default())
}

/// Counts extensions by `f(I) = sum of f(I - m)` over maximal `m` of the
/// ideal `I`, memoized on the ideal bitmask, starting from the full set.
///
/// Runs in `u128` first and redoes the count in big integers only if a
/// partial sum overflows.
pub fn count_extensions_with(p: &Poset, cfg: &CountConfig) -> Result<ExtensionCount> {
    match IdealCounter::<u128>::new(p, cfg.max_memo_entries).run() {
        Ok(v) => Ok(ExtensionCount(BigUint::from(v))),
        Err(Halt::Overflow) => match IdealCounter::<BigUint>::new(p, cfg.max_memo_entries).run() {
            Ok(v) => Ok(ExtensionCount(v)),
            Err(halt) => Err(halt.into_error(cfg)),
        },
        Err(halt) => Err(halt.into_error(cfg)),
    }
}

trait Tally: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn try_add(&mut self, other: &Self) -> bool;
}

impl Tally for u128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    #[inline]
    fn try_add(&mut self, other: &Self) -> bool {
        match self.checked_add(*other) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
}

impl Tally for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn try_add(&mut self, other: &Self) -> bool {
        *self += other;
        true
    }
}

enum Halt {
    Overflow,
    Capacity,
}

impl Halt {
    fn into_error(self, cfg: &CountConfig) -> Error {
        match self {
            Halt::Capacity | Halt::Overflow => Error::CapacityExceeded(format!(
                "more than {} order ideals while counting linear extensions",
                cfg.max_memo_entries
            )),
        }
    }
}

enum Memo<T> {
    Dense(Vec<Option<T>>),
    Sparse(FxHashMap<u64, T>),
}

struct IdealCounter<T> {
    above: Vec<ElementSet>,
    memo: Memo<T>,
    entries: usize,
    budget: usize,
}

impl<T: Tally> IdealCounter<T> {
    fn new(p: &Poset, budget: usize) -> Self {
        let n = p.len();
        let memo = if n <= DENSE_MEMO_MAX {
            Memo::Dense(vec![None; 1 << n])
        } else {
            Memo::Sparse(FxHashMap::default())
        };
        IdealCounter {
            above: (0..n).map(|x| p.up_set(x)).collect(),
            memo,
            entries: 0,
            budget,
        }
    }

    fn run(mut self) -> std::result::Result<T, Halt> {
        let full = ElementSet::full(self.above.len());
        self.count(full)
    }

    fn lookup(&self, ideal: ElementSet) -> Option<T> {
        match &self.memo {
            Memo::Dense(v) => v[ideal.bits() as usize].clone(),
            Memo::Sparse(m) => m.get(&ideal.bits()).cloned(),
        }
    }

    fn store(&mut self, ideal: ElementSet, value: T) -> std::result::Result<(), Halt> {
        self.entries += 1;
        if self.entries > self.budget {
            return Err(Halt::Capacity);
        }
        match &mut self.memo {
            Memo::Dense(v) => v[ideal.bits() as usize] = Some(value),
            Memo::Sparse(m) => {
                m.insert(ideal.bits(), value);
            }
        }
        Ok(())
    }

    fn count(&mut self, ideal: ElementSet) -> std::result::Result<T, Halt> {
        // Ideals with at most one element have exactly one extension.
        if ideal.len() <= 1 {
            return Ok(T::one());
        }
        if let Some(v) = self.lookup(ideal) {
            return Ok(v);
        }
        let mut total = T::zero();
        for m in ideal.iter() {
            if self.above[m].intersects(ideal) {
                continue;
            }
            let sub = self.count(ideal.without(m))?;
            if !total.try_add(&sub) {
                return Err(Halt::Overflow);
            }
        }
        self.store(ideal, total.clone())?;
        Ok(total)
    }
}

/// Streams every linear extension once, in lexicographic order of index
/// sequences.
pub fn enumerate_extensions(p: &Poset) -> Result<Extensions<'_>> {
    enumerate_extensions_with(p, DEFAULT_ENUMERATION_LIMIT)
}

pub fn enumerate_extensions_with(p: &Poset, max_elements: usize) -> Result<Extensions<'_>> {
    if p.len() > max_elements {
        return Err(Error::CapacityExceeded(format!(
            "enumerating extensions of {} elements (limit {max_elements})",
            p.len()
        )));
    }
    Ok(Extensions { poset: p, seq: Vec::with_capacity(p.len()), placed: ElementSet::EMPTY, state: State::Fresh })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Fresh,
    Running,
    Done,
}

pub struct Extensions<'a> {
    poset: &'a Poset,
    seq: Vec<usize>,
    placed: ElementSet,
    state: State,
}

impl Extensions<'_> {
    /// Smallest placeable element with index at least `from`.
    fn next_available(&self, from: usize) -> Option<usize> {
        (from..self.poset.len())
            .find(|&x| !self.placed.contains(x) && self.poset.down_set(x).is_subset(self.placed))
    }

    fn descend(&mut self) {
        while self.seq.len() < self.poset.len() {
            let x = self.next_available(0).expect("a finite poset always has a minimal element");
            self.seq.push(x);
            self.placed = self.placed.with(x);
        }
    }
}

impl Iterator for Extensions<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        match self.state {
            State::Done => return None,
            State::Fresh => {
                self.state = State::Running;
                self.descend();
                return Some(self.seq.clone());
            }
            State::Running => {}
        }
        while let Some(last) = self.seq.pop() {
            self.placed = self.placed.without(last);
            if let Some(x) = self.next_available(last + 1) {
                self.seq.push(x);
                self.placed = self.placed.with(x);
                self.descend();
                return Some(self.seq.clone());
            }
        }
        self.state = State::Done;
        None
    }
}

/// ℙ(x ≺ y): the fraction of linear extensions placing `x` before `y`.
///
/// Comparable pairs give 1 or 0. Incomparable pairs are conditioned by
/// adding `x < y` and recounting.
pub fn prob_before(p: &Poset, x: usize, y: usize) -> Result<PairProbability> {
    p.check_index(x)?;
    p.check_index(y)?;
    if x == y {
        return Err(Error::PreconditionViolated(format!(
            "probability of `{}` before itself",
            p.label(x)
        )));
    }
    if p.lt(x, y) {
        return Ok(PairProbability::one());
    }
    if p.lt(y, x) {
        return Ok(PairProbability::zero());
    }
    let total = count_extensions(p)?;
    prob_before_given(p, &total, x, y)
}

/// As [`prob_before`] for an incomparable pair, reusing a known e(P).
pub(crate) fn prob_before_given(
    p: &Poset,
    total: &ExtensionCount,
    x: usize,
    y: usize,
) -> Result<PairProbability> {
    let conditioned = count_extensions(&p.add_relation(x, y)?)?;
    Ok(PairProbability::from_counts(conditioned.value(), total.value()))
}

/// Where `a` falls relative to a chain `b_1 < ... < b_n`:
/// `q_1 = ℙ(a ≺ b_1)`, `q_j = ℙ(b_{j-1} ≺ a ≺ b_j)`, `q_{n+1} = ℙ(b_n ≺ a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QDistribution {
    q: Vec<BigRational>,
}

impl QDistribution {
    pub fn values(&self) -> &[BigRational] {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// `q_j` with 1-based `j`.
    pub fn get(&self, j: usize) -> &BigRational {
        &self.q[j - 1]
    }

    pub fn sum(&self) -> BigRational {
        self.q.iter().fold(BigRational::zero(), |acc, v| acc + v)
    }

    /// `q_1 + ... + q_j`.
    pub fn prefix_sum(&self, j: usize) -> BigRational {
        self.q[..j].iter().fold(BigRational::zero(), |acc, v| acc + v)
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.q.windows(2).all(|w| w[0] >= w[1])
    }

    /// The 1-based `r` with `q_1 + .. + q_{r-1} <= 1/2 < q_1 + .. + q_r`.
    pub fn split_index(&self) -> usize {
        let half = BigRational::new(1.into(), 2.into());
        let mut acc = BigRational::zero();
        for (i, v) in self.q.iter().enumerate() {
            acc += v;
            if acc > half {
                return i + 1;
            }
        }
        unreachable!("q sums to one")
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.q.iter().map(fraction_string).collect()
    }
}

/// The q-distribution of `a` against `chain`.
///
/// The chain occupies a fixed relative order in every extension, so the
/// events `b_{j-1} ≺ a ≺ b_j` partition the extensions and each `q_j` is a
/// difference of consecutive `ℙ(a ≺ b_j)`.
pub fn q_distribution(p: &Poset, a: usize, chain: &[usize]) -> Result<QDistribution> {
    p.check_index(a)?;
    for &b in chain {
        p.check_index(b)?;
    }
    if chain.is_empty() {
        return Err(Error::PreconditionViolated("empty chain".into()));
    }
    if chain.contains(&a) {
        return Err(Error::PreconditionViolated(format!("`{}` lies on the chain", p.label(a))));
    }
    if !chain.windows(2).all(|w| p.lt(w[0], w[1])) {
        return Err(Error::NotAChain);
    }
    let total = count_extensions(p)?;
    let mut before = Vec::with_capacity(chain.len());
    for &b in chain {
        let pr = if p.lt(a, b) {
            PairProbability::one()
        } else if p.lt(b, a) {
            PairProbability::zero()
        } else {
            prob_before_given(p, &total, a, b)?
        };
        before.push(pr.as_ratio().clone());
    }
    let mut q = Vec::with_capacity(chain.len() + 1);
    let mut prev = BigRational::zero();
    for cum in &before {
        q.push(cum - &prev);
        prev = cum.clone();
    }
    q.push(BigRational::one() - prev);
    let dist = QDistribution { q };
    debug_assert!(dist.sum().is_one());
    Ok(dist)
}
