//! The N pattern, critical pairs, and executable checks of the structural
//! lemmas for N-free posets.

use crate::error::{Error, Result};
use crate::linext::enumerate_extensions_with;
use crate::poset::Poset;
use crate::set::ElementSet;

/// Largest poset [`swap_check`] will enumerate.
pub const SWAP_CHECK_LIMIT: usize = 8;

/// Four distinct elements with covers `a ⋖ b`, `c ⋖ b`, `c ⋖ d` and no
/// other comparabilities among them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NWitness {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl NWitness {
    pub fn is_valid(&self, p: &Poset) -> bool {
        let NWitness { a, b, c, d } = *self;
        let n = p.len();
        if a >= n || b >= n || c >= n || d >= n {
            return false;
        }
        let distinct: ElementSet = [a, b, c, d].into_iter().collect();
        distinct.len() == 4
            && p.upper_covers(a).contains(b)
            && p.upper_covers(c).contains(b)
            && p.upper_covers(c).contains(d)
            && p.incomparable(a, c)
            && p.incomparable(a, d)
            && p.incomparable(b, d)
    }

    pub fn labels<'a>(&self, p: &'a Poset) -> [&'a str; 4] {
        [p.label(self.a), p.label(self.b), p.label(self.c), p.label(self.d)]
    }
}

/// An incomparable pair with `U(y) ⊆ U(x)` and `D(x) ⊆ D(y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CriticalPair {
    pub x: usize,
    pub y: usize,
}

/// Lexicographically smallest N by `(a, b, c, d)`, found by walking cover
/// edges rather than all 4-tuples.
pub fn find_n(p: &Poset) -> Option<NWitness> {
    let n = p.len();
    if n < 4 {
        return None;
    }
    let upper: Vec<ElementSet> = (0..n).map(|x| p.upper_covers(x)).collect();
    let lower: Vec<ElementSet> = (0..n).map(|x| p.lower_covers(x)).collect();
    for a in 0..n {
        for b in upper[a].iter() {
            for c in lower[b].without(a).iter() {
                for d in upper[c].without(b).iter() {
                    let w = NWitness { a, b, c, d };
                    if w.is_valid(p) {
                        return Some(w);
                    }
                }
            }
        }
    }
    None
}

pub fn is_n_free(p: &Poset) -> bool {
    find_n(p).is_none()
}

/// Elements sharing an upper cover have equal upper-cover sets, and
/// elements sharing a lower cover have equal lower-cover sets.
pub fn check_lemma2(p: &Poset) -> bool {
    let n = p.len();
    let upper: Vec<ElementSet> = (0..n).map(|x| p.upper_covers(x)).collect();
    let lower: Vec<ElementSet> = (0..n).map(|x| p.lower_covers(x)).collect();
    let agree = |sets: &[ElementSet]| {
        (0..n).all(|x| (x + 1..n).all(|y| !sets[x].intersects(sets[y]) || sets[x] == sets[y]))
    };
    agree(&upper) && agree(&lower)
}

/// All upper covers of each element lie in a single level.
pub fn check_lemma2prime(p: &Poset) -> bool {
    let levels = p.level_decomposition();
    (0..p.len()).all(|x| {
        let mut covers = p.upper_covers(x).iter().map(|y| levels.level_of(y));
        match covers.next() {
            Some(first) => covers.all(|l| l == first),
            None => true,
        }
    })
}

/// Largest level index containing two distinct elements with identical
/// lower-cover sets.
pub fn twin_level(p: &Poset) -> Option<usize> {
    let levels = p.level_decomposition();
    (0..levels.len()).rev().find(|&i| !twin_pairs_in(p, levels.level(i)).is_empty())
}

/// Pairs `(a, b)`, `a < b` by index, inside `level` with equal lower covers.
pub(crate) fn twin_pairs_in(p: &Poset, level: ElementSet) -> Vec<(usize, usize)> {
    let members: Vec<usize> = level.iter().collect();
    let covers: Vec<ElementSet> = members.iter().map(|&x| p.lower_covers(x)).collect();
    let mut out = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if covers[i] == covers[j] {
                out.push((members[i], members[j]));
            }
        }
    }
    out
}

/// In the highest level that holds two elements with equal lower covers,
/// every element's up-set together with the element forms a chain.
pub fn check_lemma3(p: &Poset) -> bool {
    let Some(i) = twin_level(p) else {
        return true;
    };
    let level = p.level_decomposition().level(i);
    level.iter().all(|x| p.is_chain(p.up_set(x).with(x)))
}

pub fn is_critical(p: &Poset, x: usize, y: usize) -> bool {
    p.incomparable(x, y)
        && p.up_set(y).is_subset(p.up_set(x))
        && p.down_set(x).is_subset(p.down_set(y))
}

pub fn critical_pairs(p: &Poset) -> Vec<CriticalPair> {
    let n = p.len();
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| is_critical(p, x, y))
        .map(|(x, y)| CriticalPair { x, y })
        .collect()
}

/// Swapping `x` and `y` in any extension that puts `y` first yields an
/// extension putting `x` first, and distinct inputs give distinct outputs.
pub fn swap_check(p: &Poset, cp: CriticalPair) -> Result<bool> {
    p.check_index(cp.x)?;
    p.check_index(cp.y)?;
    if p.len() > SWAP_CHECK_LIMIT {
        return Err(Error::CapacityExceeded(format!(
            "swap check on {} elements (limit {SWAP_CHECK_LIMIT})",
            p.len()
        )));
    }
    let CriticalPair { x, y } = cp;
    let mut images = std::collections::HashSet::new();
    for mut ext in enumerate_extensions_with(p, SWAP_CHECK_LIMIT)? {
        let px = ext.iter().position(|&e| e == x).expect("x in extension");
        let py = ext.iter().position(|&e| e == y).expect("y in extension");
        if py > px {
            continue;
        }
        ext.swap(px, py);
        if !p.is_linear_extension(&ext) || !images.insert(ext) {
            return Ok(false);
        }
    }
    Ok(true)
}
