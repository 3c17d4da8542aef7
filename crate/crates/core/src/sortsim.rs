//! Sorting a hidden linear extension by pairwise queries, always asking
//! about the most balanced incomparable pair.

use num_bigint::BigUint;
use num_traits::One;

use crate::balance::{all_pair_probabilities, most_balanced};
use crate::error::{Error, Result};
use crate::linext::{count_extensions, ExtensionCount};
use crate::poset::Poset;
use crate::prob::PairProbability;

/// `⌈log₂ e(P)⌉`, read off the bit length of `e(P) - 1`.
pub fn info_lower_bound(p: &Poset) -> Result<u64> {
    let e = count_extensions(p)?.into_inner();
    Ok((e - 1u32).bits())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub x: usize,
    pub y: usize,
    /// ℙ(x ≺ y) in the poset as it stood when the question was asked.
    pub prob: PairProbability,
    /// Whether `x` precedes `y` in the hidden order.
    pub answer: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortTranscript {
    pub queries: Vec<Query>,
    pub comparisons: usize,
    pub initial_e: ExtensionCount,
    pub all_queries_balanced: bool,
}

impl SortTranscript {
    /// Replays the answers into `p` and returns the resulting order, which
    /// must be total.
    pub fn replay(&self, p: &Poset) -> Result<Vec<usize>> {
        let mut cur = p.clone();
        for q in &self.queries {
            cur = if q.answer { cur.add_relation(q.x, q.y)? } else { cur.add_relation(q.y, q.x)? };
        }
        if !cur.is_total() {
            return Err(Error::PreconditionViolated("answers do not determine a total order".into()));
        }
        let mut order: Vec<usize> = (0..cur.len()).collect();
        order.sort_by_key(|&x| cur.down_set(x).len());
        Ok(order)
    }

    /// `3^k >= e` and `3^k <= e * 2^k` for `k` comparisons, i.e.
    /// `⌈log₃ e⌉ <= k <= ⌊log_{3/2} e⌋`.
    pub fn within_balanced_bounds(&self) -> bool {
        let k = self.comparisons as u32;
        let e = self.initial_e.value();
        let three_k = BigUint::from(3u32).pow(k);
        let two_k = BigUint::one() << k;
        &three_k >= e && three_k <= e * two_k
    }

    /// One line per query followed by the summary footer.
    pub fn render(&self, p: &Poset, lower_bound: u64) -> String {
        let mut out = String::new();
        for q in &self.queries {
            out.push_str(&format!(
                "? {} {}  p={}  -> {}\n",
                p.label(q.x),
                p.label(q.y),
                q.prob,
                if q.answer { "yes" } else { "no" }
            ));
        }
        out.push_str(&format!(
            "comparisons={} lb={} balanced={}\n",
            self.comparisons, lower_bound, self.all_queries_balanced
        ));
        out
    }
}

/// Determines `hidden` by repeatedly asking "is x before y?" for the pair
/// whose ℙ is closest to 1/2 (smallest index pair on ties).
pub fn simulate_sort(p: &Poset, hidden: &[usize]) -> Result<SortTranscript> {
    if !p.is_linear_extension(hidden) {
        let shown: Vec<String> =
            hidden.iter().map(|&x| if x < p.len() { p.label(x).to_owned() } else { x.to_string() }).collect();
        return Err(Error::HiddenNotAnExtension(shown.join(" ")));
    }
    let mut position = vec![0; p.len()];
    for (i, &x) in hidden.iter().enumerate() {
        position[x] = i;
    }
    let initial_e = count_extensions(p)?;
    let mut cur = p.clone();
    let mut queries = Vec::new();
    while !cur.is_total() {
        let probes = all_pair_probabilities(&cur)?;
        let pick = most_balanced(&probes).expect("a non-chain has an incomparable pair").clone();
        let answer = position[pick.x] < position[pick.y];
        cur = if answer { cur.add_relation(pick.x, pick.y)? } else { cur.add_relation(pick.y, pick.x)? };
        queries.push(Query { x: pick.x, y: pick.y, prob: pick.prob, answer });
    }
    let all_queries_balanced = queries.iter().all(|q| q.prob.is_balanced());
    Ok(SortTranscript { comparisons: queries.len(), queries, initial_e, all_queries_balanced })
}
