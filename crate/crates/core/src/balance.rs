//! Balanced pairs: an exhaustive scan over all incomparable pairs, and a
//! constructive search for N-free posets that follows the level/chain
//! argument step by step and records what it did.

use std::cmp::Ordering;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linext::{count_extensions, prob_before, prob_before_given, q_distribution, QDistribution};
use crate::nfree::{find_n, twin_pairs_in};
use crate::poset::Poset;
use crate::prob::PairProbability;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exhaustive,
    Constructive,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Exhaustive => "exhaustive",
            Method::Constructive => "constructive",
        })
    }
}

/// Which exit of the constructive procedure produced the certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructiveStep {
    /// Both selected elements are maximal, so ℙ is exactly 1/2.
    MaximalTwins,
    /// ℙ(a ≺ b) was already in range.
    DirectPair,
    /// Split along the chain above `b` using the q-distribution.
    ChainSplit,
}

impl fmt::Display for ConstructiveStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstructiveStep::MaximalTwins => "maximal-twins",
            ConstructiveStep::DirectPair => "direct-pair",
            ConstructiveStep::ChainSplit => "chain-split",
        })
    }
}

/// A probe made along the way: `ℙ(x ≺ y)` in the original poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Probe {
    pub x: usize,
    pub y: usize,
    pub prob: PairProbability,
}

/// Element indices refer to the input poset, not the stripped residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructiveTrace {
    pub stripped_prefix: Vec<usize>,
    /// Level index inside the stripped poset.
    pub level: usize,
    pub a: usize,
    pub b: usize,
    /// `a` and `b` were exchanged because ℙ(a ≺ b) exceeded 2/3.
    pub swapped: bool,
    pub step: ConstructiveStep,
    /// `U(b) ∪ {b}` in increasing order, starting with `b`.
    pub chain: Vec<usize>,
    pub q: Option<QDistribution>,
    /// 1-based split index into `q`.
    pub r: Option<usize>,
    pub candidates_checked: Vec<Probe>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceCertificate {
    pub x: usize,
    pub y: usize,
    /// ℙ(x ≺ y).
    pub prob: PairProbability,
    pub method: Method,
    pub trace: Option<ConstructiveTrace>,
}

impl BalanceCertificate {
    /// JSON form with labels and `num/den` strings.
    pub fn to_json(&self, p: &Poset) -> Value {
        let mut v = json!({
            "pair": [p.label(self.x), p.label(self.y)],
            "prob": self.prob.to_string(),
            "method": self.method.to_string(),
        });
        if let Some(t) = &self.trace {
            let names = |xs: &[usize]| -> Vec<&str> { xs.iter().map(|&x| p.label(x)).collect() };
            v["trace"] = json!({
                "stripped_prefix": names(&t.stripped_prefix),
                "level": t.level,
                "a": p.label(t.a),
                "b": p.label(t.b),
                "swapped": t.swapped,
                "step": t.step.to_string(),
                "chain": names(&t.chain),
                "q": t.q.as_ref().map(QDistribution::to_strings),
                "r": t.r,
                "candidates_checked": t.candidates_checked.iter().map(|c| json!({
                    "pair": [p.label(c.x), p.label(c.y)],
                    "prob": c.prob.to_string(),
                })).collect::<Vec<_>>(),
            });
        }
        v
    }
}

/// ℙ(x ≺ y) for every incomparable pair `x < y` (by index).
pub fn all_pair_probabilities(p: &Poset) -> Result<Vec<Probe>> {
    let pairs = p.incomparable_pairs();
    if pairs.is_empty() {
        return Ok(Vec::new());
    }
    let total = count_extensions(p)?;
    pairs
        .into_iter()
        .map(|(x, y)| Ok(Probe { x, y, prob: prob_before_given(p, &total, x, y)? }))
        .collect()
}

/// The first probe (in input order) closest to 1/2.
pub(crate) fn most_balanced(probes: &[Probe]) -> Option<&Probe> {
    probes.iter().fold(None, |best: Option<&Probe>, c| match best {
        Some(b) if c.prob.cmp_distance_to_half(&b.prob) != Ordering::Less => Some(b),
        _ => Some(c),
    })
}

/// The balanced incomparable pair closest to 1/2, smallest index pair on
/// ties. `None` for chains or when nothing qualifies.
pub fn find_balanced_exhaustive(p: &Poset) -> Result<Option<BalanceCertificate>> {
    let balanced: Vec<Probe> = all_pair_probabilities(p)?.into_iter().filter(|c| c.prob.is_balanced()).collect();
    Ok(most_balanced(&balanced).map(|c| BalanceCertificate {
        x: c.x,
        y: c.y,
        prob: c.prob.clone(),
        method: Method::Exhaustive,
        trace: None,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Selection {
    pub level: usize,
    pub a: usize,
    pub b: usize,
}

/// Highest level holding two elements with the same lower covers, and the
/// lexicographically smallest such pair in it. If exactly one of the two
/// has a nonempty up-set it is returned as `b`.
pub fn select_ab(p: &Poset) -> Result<Selection> {
    let levels = p.level_decomposition();
    for level in (0..levels.len()).rev() {
        if let Some(&(a, b)) = twin_pairs_in(p, levels.level(level)).first() {
            return Ok(orient(p, Selection { level, a, b }));
        }
    }
    Err(Error::PreconditionViolated(
        "no level holds two elements with equal lower covers".into(),
    ))
}

/// Every qualifying pair in the selected level, each oriented like
/// [`select_ab`] orients its choice.
pub fn all_selections(p: &Poset) -> Result<Vec<Selection>> {
    let first = select_ab(p)?;
    let level = p.level_decomposition().level(first.level);
    Ok(twin_pairs_in(p, level)
        .into_iter()
        .map(|(a, b)| orient(p, Selection { level: first.level, a, b }))
        .collect())
}

fn orient(p: &Poset, s: Selection) -> Selection {
    if p.up_set(s.b).is_empty() && !p.up_set(s.a).is_empty() {
        Selection { a: s.b, b: s.a, ..s }
    } else {
        s
    }
}

/// Balanced pair for an N-free poset via the constructive procedure.
///
/// Returns `None` exactly when the poset is a chain. Reaching a state the
/// argument rules out yields [`Error::TheoremViolation`].
pub fn find_balanced_nfree(p: &Poset) -> Result<Option<BalanceCertificate>> {
    require_n_free(p)?;
    let stripped = p.strip_forced_minimum();
    if stripped.residual.is_empty() {
        return Ok(None);
    }
    let sel = select_ab(&stripped.residual)?;
    constructive(p, &stripped, sel).map(Some)
}

/// Runs the constructive procedure from every qualifying `(a, b)` choice in
/// the selected level, not just the lexicographic one.
pub fn find_balanced_nfree_all_choices(p: &Poset) -> Result<Vec<Result<BalanceCertificate>>> {
    require_n_free(p)?;
    let stripped = p.strip_forced_minimum();
    if stripped.residual.is_empty() {
        return Ok(Vec::new());
    }
    Ok(all_selections(&stripped.residual)?
        .into_iter()
        .map(|sel| constructive(p, &stripped, sel))
        .collect())
}

fn require_n_free(p: &Poset) -> Result<()> {
    match find_n(p) {
        None => Ok(()),
        Some(w) => Err(Error::NotNFree(format!("N at {}", w.labels(p).join(" ")))),
    }
}

fn constructive(p: &Poset, stripped: &crate::poset::Stripped, sel: Selection) -> Result<BalanceCertificate> {
    let res = &stripped.residual;
    let orig = |x: usize| stripped.origin[x];
    let Selection { level, mut a, mut b } = sel;

    let mut trace = ConstructiveTrace {
        stripped_prefix: stripped.removed.clone(),
        level,
        a: orig(a),
        b: orig(b),
        swapped: false,
        step: ConstructiveStep::MaximalTwins,
        chain: Vec::new(),
        q: None,
        r: None,
        candidates_checked: Vec::new(),
    };

    if res.up_set(a).is_empty() && res.up_set(b).is_empty() {
        let prob = PairProbability::half();
        trace.chain = vec![orig(b)];
        trace.candidates_checked.push(Probe { x: orig(a), y: orig(b), prob: prob.clone() });
        return certify(p, orig(a), orig(b), prob, trace);
    }

    let total = count_extensions(res)?;
    let first = prob_before_given(res, &total, a, b)?;
    trace.candidates_checked.push(Probe { x: orig(a), y: orig(b), prob: first.clone() });
    if first.is_balanced() {
        trace.step = ConstructiveStep::DirectPair;
        trace.chain = sorted_chain(res, b).into_iter().map(orig).collect();
        return certify(p, orig(a), orig(b), first, trace);
    }
    if first.above_two_thirds() {
        std::mem::swap(&mut a, &mut b);
        trace.swapped = true;
        trace.a = orig(a);
        trace.b = orig(b);
    }
    if res.up_set(b).is_empty() {
        return Err(Error::TheoremViolation(format!(
            "ℙ({} ≺ {}) < 1/3 with nothing above {}",
            res.label(a),
            res.label(b),
            res.label(b)
        )));
    }

    trace.step = ConstructiveStep::ChainSplit;
    let chain = sorted_chain(res, b);
    trace.chain = chain.iter().map(|&x| orig(x)).collect();
    if !res.is_chain(res.up_set(b).with(b)) {
        return Err(Error::TheoremViolation(format!("up-set of {} is not a chain", res.label(b))));
    }
    let q = q_distribution(res, a, &chain)?;
    let r = q.split_index();
    trace.r = Some(r);

    let n = chain.len();
    let mut best: Option<Probe> = None;
    // Candidates are b_{r-1} and b_r; ℙ(a ≺ b_j) is the j-th prefix sum.
    for j in [r.wrapping_sub(1), r] {
        if j < 1 || j > n {
            continue;
        }
        let prob = PairProbability::from_ratio(q.prefix_sum(j));
        let probe = Probe { x: orig(a), y: orig(chain[j - 1]), prob };
        let balanced = probe.prob.is_balanced();
        trace.candidates_checked.push(probe.clone());
        if balanced && best.as_ref().is_none_or(|b| probe.prob.cmp_distance_to_half(&b.prob) == Ordering::Less) {
            best = Some(probe);
        }
    }
    trace.q = Some(q);
    match best {
        Some(Probe { x, y, prob }) => certify(p, x, y, prob, trace),
        None => Err(Error::TheoremViolation(format!(
            "neither chain candidate around r = {r} is balanced (a = {})",
            res.label(a)
        ))),
    }
}

/// `U(b) ∪ {b}` sorted by the order; on a chain, by down-set size.
fn sorted_chain(p: &Poset, b: usize) -> Vec<usize> {
    let mut chain: Vec<usize> = p.up_set(b).with(b).iter().collect();
    chain.sort_by_key(|&x| (p.down_set(x).len(), x));
    chain
}

/// Recomputes ℙ(x ≺ y) on the input poset before handing out a certificate.
fn certify(
    p: &Poset,
    x: usize,
    y: usize,
    prob: PairProbability,
    trace: ConstructiveTrace,
) -> Result<BalanceCertificate> {
    let check = prob_before(p, x, y)?;
    if check != prob || !check.is_balanced() || !p.incomparable(x, y) {
        return Err(Error::TheoremViolation(format!(
            "certificate ({}, {}) claims {prob} but recount gives {check}",
            p.label(x),
            p.label(y)
        )));
    }
    Ok(BalanceCertificate { x, y, prob, method: Method::Constructive, trace: Some(trace) })
}
