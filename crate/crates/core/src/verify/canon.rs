//! Canonical forms for small posets.
//!
//! The form is the minimum row-major strict-order matrix over all element
//! orderings that list refinement classes in a fixed order. Classes come from
//! iterated colour refinement on (down-set, up-set) structure, which is
//! isomorphism invariant, so two posets share a form iff they are isomorphic.

use crate::error::{Error, Result};
use crate::poset::{default_label, Poset};
use crate::set::ElementSet;

/// Largest poset accepted by [`canonical_form`].
pub const CANONICAL_MAX: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub n: usize,
    /// Row-major bits of `x < y`, first entry most significant.
    pub matrix_bits: u128,
}

impl CanonicalForm {
    /// Rebuilds a representative poset with default labels.
    pub fn to_poset(&self) -> Poset {
        let n = self.n;
        let bit = |i: usize, j: usize| self.matrix_bits >> (n * n - 1 - (i * n + j)) & 1 == 1;
        let above = (0..n).map(|i| (0..n).filter(|&j| bit(i, j)).collect()).collect();
        Poset::from_closed_rows((0..n).map(default_label).collect(), above)
    }
}

pub fn canonical_form(p: &Poset) -> Result<CanonicalForm> {
    let n = p.len();
    if n > CANONICAL_MAX {
        return Err(Error::CapacityExceeded(format!(
            "canonical form of {n} elements (limit {CANONICAL_MAX})"
        )));
    }
    let above: Vec<ElementSet> = (0..n).map(|x| p.up_set(x)).collect();
    Ok(canonical_rows(&above))
}

/// Canonical form straight from up-set rows (closed, acyclic, `n <= 11`).
pub(crate) fn canonical_rows(above: &[ElementSet]) -> CanonicalForm {
    let n = above.len();
    let below = transpose(above);
    let colour = refine(above, &below);

    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (colour[x], x));
    for &x in &order {
        match cells.last_mut() {
            Some(cell) if colour[cell[0]] == colour[x] => cell.push(x),
            _ => cells.push(vec![x]),
        }
    }
    // Elements with identical down- and up-sets are interchangeable; keep
    // only one ordering of each such group.
    for cell in &mut cells {
        cell.sort_by_key(|&x| (above[x].bits(), below[x].bits(), x));
    }

    let mut best = u128::MAX;
    let mut perm = Vec::with_capacity(n);
    search(above, &below, &mut cells, 0, &mut perm, &mut best);
    CanonicalForm { n, matrix_bits: if n == 0 { 0 } else { best } }
}

fn transpose(above: &[ElementSet]) -> Vec<ElementSet> {
    let mut below = vec![ElementSet::EMPTY; above.len()];
    for (x, row) in above.iter().enumerate() {
        for y in row.iter() {
            below[y] = below[y].with(x);
        }
    }
    below
}

/// Stable colouring: start from (|D|, |U|), then split by the sorted colours
/// of each element's down-set and up-set until nothing changes.
fn refine(above: &[ElementSet], below: &[ElementSet]) -> Vec<usize> {
    let n = above.len();
    let mut colour: Vec<usize> = Vec::new();
    let mut sigs: Vec<Vec<usize>> = (0..n).map(|x| vec![below[x].len(), above[x].len()]).collect();
    loop {
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = sigs.iter().map(|s| distinct.binary_search(s).expect("own signature")).collect();
        let classes = distinct.len();
        let stable = colour.iter().copied().max().map_or(false, |m| m + 1 == classes);
        colour = next;
        if stable || classes == n {
            return colour;
        }
        sigs = (0..n)
            .map(|x| {
                let mut d: Vec<usize> = below[x].iter().map(|y| colour[y]).collect();
                let mut u: Vec<usize> = above[x].iter().map(|y| colour[y]).collect();
                d.sort_unstable();
                u.sort_unstable();
                let mut s = Vec::with_capacity(d.len() + u.len() + 3);
                s.push(colour[x]);
                s.push(d.len());
                s.extend(d);
                s.push(usize::MAX);
                s.extend(u);
                s
            })
            .collect();
    }
}

fn encode(above: &[ElementSet], perm: &[usize]) -> u128 {
    let mut bits = 0u128;
    for &x in perm {
        for &y in perm {
            bits = bits << 1 | above[x].contains(y) as u128;
        }
    }
    bits
}

fn search(
    above: &[ElementSet],
    below: &[ElementSet],
    cells: &mut [Vec<usize>],
    k: usize,
    perm: &mut Vec<usize>,
    best: &mut u128,
) {
    if k == cells.len() {
        let code = encode(above, perm);
        if code < *best {
            *best = code;
        }
        return;
    }
    let mut cell = std::mem::take(&mut cells[k]);
    permute(&mut cell, 0, &mut |order: &[usize]| {
        if has_redundant_twin_order(above, below, order) {
            return;
        }
        let len = perm.len();
        perm.extend_from_slice(order);
        search(above, below, cells, k + 1, perm, best);
        perm.truncate(len);
    });
    cells[k] = cell;
}

/// Twins (same down- and up-set) must appear in ascending index order.
fn has_redundant_twin_order(above: &[ElementSet], below: &[ElementSet], order: &[usize]) -> bool {
    order.iter().enumerate().any(|(i, &x)| {
        order[i + 1..].iter().any(|&y| y < x && above[x] == above[y] && below[x] == below[y])
    })
}

/// Calls `f` on every permutation of `items`.
fn permute(items: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n_poset() -> Poset {
        Poset::parse("elements: a b c d\na b\nc b\nc d\n").unwrap()
    }

    #[test]
    fn relabelled_n_has_the_same_form() {
        let other = Poset::parse("elements: d c b a\nc d\nc b\na b\n").unwrap();
        assert_eq!(canonical_form(&n_poset()).unwrap(), canonical_form(&other).unwrap());
    }

    #[test]
    fn distinguishes_non_isomorphic() {
        assert_ne!(
            canonical_form(&Poset::chain(3)).unwrap(),
            canonical_form(&Poset::antichain(3)).unwrap()
        );
        let diamond = Poset::parse("elements: z x y o\nz x\nz y\nx o\ny o\n").unwrap();
        assert_ne!(canonical_form(&n_poset()).unwrap(), canonical_form(&diamond).unwrap());
    }

    #[test]
    fn form_rebuilds_an_isomorphic_poset() {
        let f = canonical_form(&n_poset()).unwrap();
        let q = f.to_poset();
        assert_eq!(canonical_form(&q).unwrap(), f);
        assert_eq!(q.relation_pairs().len(), 3);
    }

    #[test]
    fn empty_and_capacity() {
        assert_eq!(canonical_form(&Poset::empty()).unwrap(), CanonicalForm { n: 0, matrix_bits: 0 });
        assert!(canonical_form(&Poset::antichain(10)).unwrap_err().is_capacity());
        assert_eq!(canonical_form(&Poset::antichain(9)).unwrap().matrix_bits, 0);
    }
}
