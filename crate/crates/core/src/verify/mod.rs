//! Exhaustive small-poset generation and machine checks of the balanced-pair
//! theorem for N-free posets together with its supporting lemmas.

mod canon;

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use canon::{canonical_form, CanonicalForm, CANONICAL_MAX};

use crate::balance::{find_balanced_nfree, find_balanced_nfree_all_choices, ConstructiveStep};
use crate::error::{Error, Result};
use crate::linext::prob_before;
use crate::nfree::{check_lemma2, check_lemma2prime, check_lemma3, critical_pairs, find_n, swap_check};
use crate::poset::{default_label, Poset, MAX_ELEMENTS};
use crate::prob::ratio_below_third;
use crate::set::ElementSet;

/// Default cap on exhaustive enumeration.
pub const DEFAULT_MAX_N: usize = 7;

/// At most this many failure descriptions are kept per size.
const KEPT_FAILURES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationConfig {
    pub max_n: usize,
    pub jobs: usize,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig {
            max_n: DEFAULT_MAX_N,
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

impl EnumerationConfig {
    pub fn with_jobs(jobs: usize) -> Self {
        EnumerationConfig { jobs, ..Self::default() }
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.jobs == 0 {
            return Err(Error::PreconditionViolated("worker count must be positive".into()));
        }
        if n > self.max_n || n > CANONICAL_MAX {
            return Err(Error::CapacityExceeded(format!(
                "enumerating posets of size {n} (cap {})",
                self.max_n.min(CANONICAL_MAX)
            )));
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| Error::PreconditionViolated(format!("thread pool: {e}")))
    }
}

/// One representative per isomorphism class of `n`-element posets, ordered
/// by canonical form.
pub fn enumerate_posets(n: usize) -> Result<Vec<Poset>> {
    enumerate_posets_with(n, &EnumerationConfig::default())
}

/// Every strict upper-triangular relation on `0..n` that is transitively
/// closed describes a naturally labelled poset, and every poset has such a
/// labelling; deduplicating by canonical form leaves one per class.
pub fn enumerate_posets_with(n: usize, cfg: &EnumerationConfig) -> Result<Vec<Poset>> {
    cfg.check(n)?;
    let forms = cfg.pool()?.install(|| closed_upper_triangular_forms(n));
    Ok(forms.into_iter().map(|f| f.to_poset()).collect())
}

fn upper_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Up-set rows for the relation selected by `mask`, if it is closed.
fn closed_rows(pairs: &[(usize, usize)], n: usize, mask: u64) -> Option<Vec<ElementSet>> {
    let mut above = vec![ElementSet::EMPTY; n];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        if mask >> k & 1 == 1 {
            above[i] = above[i].with(j);
        }
    }
    let closed = (0..n).all(|i| above[i].iter().all(|j| above[j].is_subset(above[i])));
    closed.then_some(above)
}

fn closed_upper_triangular_forms(n: usize) -> BTreeSet<CanonicalForm> {
    let pairs = upper_pairs(n);
    let candidates = 1u64 << pairs.len();
    (0..candidates)
        .into_par_iter()
        .fold(BTreeSet::new, |mut acc, mask| {
            if let Some(rows) = closed_rows(&pairs, n, mask) {
                acc.insert(canon::canonical_rows(&rows));
            }
            acc
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Census {
    pub total: usize,
    pub nfree: usize,
}

pub fn census_nfree(n: usize) -> Result<Census> {
    census_nfree_with(n, &EnumerationConfig::default())
}

pub fn census_nfree_with(n: usize, cfg: &EnumerationConfig) -> Result<Census> {
    let posets = enumerate_posets_with(n, cfg)?;
    let nfree = cfg.pool()?.install(|| posets.par_iter().filter(|p| find_n(p).is_none()).count());
    Ok(Census { total: posets.len(), nfree })
}

/// Deterministic random poset: each pair `i < j` is related independently
/// with probability `edge_bias`, then closed.
///
/// # Panics
///
/// If `n > 64` or `edge_bias` lies outside `[0, 1]`.
pub fn random_poset(n: usize, edge_bias: Ratio<u64>, seed: u64) -> Poset {
    assert!(n <= MAX_ELEMENTS, "random poset of {n} elements");
    assert!(edge_bias <= Ratio::one(), "edge bias above one");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (num, den) = (*edge_bias.numer(), *edge_bias.denom());
    let relation: Vec<(usize, usize)> = upper_pairs(n)
        .into_iter()
        .filter(|_| rng.random_range(0..den) < num)
        .collect();
    Poset::from_relations((0..n).map(default_label).collect(), &relation).expect("upper-triangular relations are acyclic")
}

/// Outcome of checking one poset. Merging is field-wise addition, so the
/// order in which outcomes arrive cannot change a report.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SizeReport {
    pub n: usize,
    pub total: usize,
    pub nfree: usize,
    /// N-free posets that are not chains.
    pub checked: usize,
    pub theorem_passes: usize,
    pub theorem_failures: usize,
    pub lemma_passes: usize,
    pub lemma_failures: usize,
    /// Constructive runs that went through the chain split.
    pub chain_splits: usize,
    /// Constructive runs over every qualifying `(a, b)` choice.
    pub choice_runs: usize,
    pub choice_failures: usize,
    /// Non-N-free posets whose N witness failed re-validation.
    pub witness_failures: usize,
    pub failure_details: Vec<String>,
    pub elapsed: Duration,
}

impl SizeReport {
    pub fn failures(&self) -> usize {
        self.theorem_failures + self.lemma_failures + self.choice_failures + self.witness_failures
    }

    /// `n=<k> total=<t> nfree=<f> checked=<c> failures=<x>`
    pub fn machine_line(&self) -> String {
        format!(
            "n={} total={} nfree={} checked={} failures={}",
            self.n,
            self.total,
            self.nfree,
            self.checked,
            self.failures()
        )
    }

    fn merge(mut self, other: SizeReport) -> SizeReport {
        self.total += other.total;
        self.nfree += other.nfree;
        self.checked += other.checked;
        self.theorem_passes += other.theorem_passes;
        self.theorem_failures += other.theorem_failures;
        self.lemma_passes += other.lemma_passes;
        self.lemma_failures += other.lemma_failures;
        self.chain_splits += other.chain_splits;
        self.choice_runs += other.choice_runs;
        self.choice_failures += other.choice_failures;
        self.witness_failures += other.witness_failures;
        self.failure_details.extend(other.failure_details);
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub sizes: Vec<SizeReport>,
}

impl VerificationReport {
    pub fn failures(&self) -> usize {
        self.sizes.iter().map(SizeReport::failures).sum()
    }

    pub fn machine_lines(&self) -> String {
        self.sizes.iter().map(|s| s.machine_line() + "\n").collect()
    }
}

/// Human-readable table; timings are left out so output is reproducible.
impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>2} {:>6} {:>6} {:>7} {:>8} {:>8} {:>7} {:>7} {:>7}",
            "n", "total", "nfree", "checked", "theorem", "lemmas", "splits", "choices", "fails"
        )?;
        for s in &self.sizes {
            writeln!(
                f,
                "{:>2} {:>6} {:>6} {:>7} {:>8} {:>8} {:>7} {:>7} {:>7}",
                s.n,
                s.total,
                s.nfree,
                s.checked,
                s.theorem_passes,
                s.lemma_passes,
                s.chain_splits,
                s.choice_runs,
                s.failures()
            )?;
            for d in &s.failure_details {
                writeln!(f, "   ! {d}")?;
            }
        }
        Ok(())
    }
}

pub fn verify_theorem(max_n: usize, jobs: usize) -> Result<VerificationReport> {
    verify_theorem_with(&EnumerationConfig { jobs, ..EnumerationConfig::default() }, max_n)
}

/// Checks every poset of size `0..=max_n`: N-free non-chains must yield a
/// re-verified certificate from every qualifying choice, N-free posets must
/// pass the lemma suite, and other posets must carry a valid N witness.
pub fn verify_theorem_with(cfg: &EnumerationConfig, max_n: usize) -> Result<VerificationReport> {
    cfg.check(max_n)?;
    let pool = cfg.pool()?;
    let mut sizes = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        let start = Instant::now();
        let posets = enumerate_posets_with(n, cfg)?;
        let mut report = pool.install(|| {
            posets
                .par_iter()
                .map(check_poset)
                .collect::<Vec<_>>()
                .into_iter()
                .fold(SizeReport { n, ..SizeReport::default() }, SizeReport::merge)
        });
        report.failure_details.truncate(KEPT_FAILURES);
        report.elapsed = start.elapsed();
        sizes.push(report);
    }
    Ok(VerificationReport { sizes })
}

fn check_poset(p: &Poset) -> SizeReport {
    let mut r = SizeReport { n: p.len(), total: 1, ..SizeReport::default() };
    let fail = |r: &mut SizeReport, what: &str| r.failure_details.push(format!("{what}: {p:?}"));

    if let Some(w) = find_n(p) {
        if !w.is_valid(p) {
            r.witness_failures += 1;
            fail(&mut r, "invalid N witness");
        }
        return r;
    }
    r.nfree = 1;

    match lemma_suite(p) {
        Ok(()) => r.lemma_passes += 1,
        Err(what) => {
            r.lemma_failures += 1;
            fail(&mut r, &what);
        }
    }

    if p.is_total() {
        return r;
    }
    r.checked = 1;
    match theorem_check(p) {
        Ok(split) => {
            r.theorem_passes += 1;
            r.chain_splits += split as usize;
        }
        Err(what) => {
            r.theorem_failures += 1;
            fail(&mut r, &what);
        }
    }
    match find_balanced_nfree_all_choices(p) {
        Ok(runs) => {
            r.choice_runs += runs.len();
            for run in runs {
                if let Err(e) = run {
                    r.choice_failures += 1;
                    fail(&mut r, &format!("alternative choice: {e}"));
                }
            }
        }
        Err(e) => {
            r.choice_failures += 1;
            fail(&mut r, &format!("alternative choices: {e}"));
        }
    }
    r
}

fn lemma_suite(p: &Poset) -> std::result::Result<(), String> {
    if !check_lemma2(p) {
        return Err("common-cover lemma".into());
    }
    if !check_lemma2prime(p) {
        return Err("upper covers in one level".into());
    }
    if !check_lemma3(p) {
        return Err("up-set chain lemma".into());
    }
    for cp in critical_pairs(p) {
        match swap_check(p, cp) {
            Ok(true) => {}
            Ok(false) => return Err(format!("swap check on critical pair ({}, {})", cp.x, cp.y)),
            Err(e) => return Err(e.to_string()),
        }
        match prob_before(p, cp.x, cp.y) {
            Ok(pr) if pr.at_least_half() => {}
            Ok(pr) => return Err(format!("critical pair ({}, {}) has probability {pr}", cp.x, cp.y)),
            Err(e) => return Err(e.to_string()),
        }
    }
    let stripped = p.strip_forced_minimum();
    if !stripped.removed.is_empty() && find_n(&stripped.residual).is_some() {
        return Err("deleting a forced minimum created an N".into());
    }
    Ok(())
}

/// Returns whether the chain split was used.
fn theorem_check(p: &Poset) -> std::result::Result<bool, String> {
    let cert = match find_balanced_nfree(p) {
        Ok(Some(c)) => c,
        Ok(None) => return Err("no certificate for a non-chain".into()),
        Err(e) => return Err(e.to_string()),
    };
    let recount = prob_before(p, cert.x, cert.y).map_err(|e| e.to_string())?;
    if recount != cert.prob || !recount.is_balanced() {
        return Err(format!("certificate probability {} does not re-verify", cert.prob));
    }
    let trace = cert.trace.ok_or("constructive certificate without trace")?;
    if trace.step != ConstructiveStep::ChainSplit {
        return Ok(false);
    }
    let q = trace.q.ok_or("chain split without q-distribution")?;
    if !q.sum().is_one() {
        return Err("q does not sum to one".into());
    }
    if !q.is_nonincreasing() {
        return Err(format!("q not monotone: {:?}", q.to_strings()));
    }
    if !ratio_below_third(q.get(1)) {
        return Err(format!("q_1 = {} is not below 1/3", q.to_strings()[0]));
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let cfg = EnumerationConfig::with_jobs(2);
        let counts: Vec<usize> = (0..=5).map(|n| enumerate_posets_with(n, &cfg).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn census_examples() {
        let cfg = EnumerationConfig::with_jobs(2);
        assert_eq!(census_nfree_with(1, &cfg).unwrap(), Census { total: 1, nfree: 1 });
        assert_eq!(census_nfree_with(3, &cfg).unwrap(), Census { total: 5, nfree: 5 });
        assert_eq!(census_nfree_with(4, &cfg).unwrap(), Census { total: 16, nfree: 15 });
    }

    #[test]
    fn cap_is_enforced() {
        assert!(enumerate_posets(8).unwrap_err().is_capacity());
        let cfg = EnumerationConfig { max_n: 3, jobs: 1 };
        assert!(enumerate_posets_with(4, &cfg).unwrap_err().is_capacity());
        let cfg = EnumerationConfig { max_n: 3, jobs: 0 };
        assert!(matches!(enumerate_posets_with(2, &cfg), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn random_poset_extremes_and_determinism() {
        assert_eq!(random_poset(5, Ratio::new(0, 1), 17), Poset::antichain(5));
        assert_eq!(random_poset(5, Ratio::new(1, 1), 17), Poset::chain(5));
        let a = random_poset(12, Ratio::new(1, 3), 99);
        assert_eq!(a, random_poset(12, Ratio::new(1, 3), 99));
    }

    #[test]
    fn verify_small() {
        let r = verify_theorem(4, 2).unwrap();
        assert_eq!(r.failures(), 0, "{r}");
        assert_eq!(r.sizes[4].nfree, 15);
        assert_eq!(r.sizes[4].checked, 14);
        let r = verify_theorem(1, 1).unwrap();
        assert_eq!(r.sizes.iter().map(|s| s.checked).sum::<usize>(), 0);
        assert_eq!(r.failures(), 0);
        assert_eq!(r.machine_lines(), "n=0 total=1 nfree=1 checked=0 failures=0\nn=1 total=1 nfree=1 checked=0 failures=0\n");
    }
}
