//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the counting engine, the canonical-form search, or the N finder.

#![allow(dead_code)]

use balanced_pair::Poset;

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == items.len() {
            out.push(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            go(k + 1, items, out);
            items.swap(k, i);
        }
    }
    let mut out = Vec::new();
    go(0, &mut (0..n).collect(), &mut out);
    out
}

/// Linear extensions by filtering all permutations against the relation.
pub fn brute_extensions(p: &Poset) -> Vec<Vec<usize>> {
    let pairs = p.relation_pairs();
    permutations(p.len())
        .into_iter()
        .filter(|perm| {
            let mut pos = vec![0; perm.len()];
            for (i, &x) in perm.iter().enumerate() {
                pos[x] = i;
            }
            pairs.iter().all(|&(x, y)| pos[x] < pos[y])
        })
        .collect()
}

/// `(extensions with x before y, all extensions)`.
pub fn brute_prob(p: &Poset, x: usize, y: usize) -> (usize, usize) {
    let exts = brute_extensions(p);
    let before = exts
        .iter()
        .filter(|e| e.iter().position(|&v| v == x) < e.iter().position(|&v| v == y))
        .count();
    (before, exts.len())
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn reduced(num: usize, den: usize) -> String {
    let g = gcd(num, den);
    format!("{}/{}", num / g, den / g)
}

/// Minimum row-major encoding over every permutation of a strict relation
/// matrix.
pub fn brute_canonical(lt: &[Vec<bool>], perms: &[Vec<usize>]) -> u128 {
    perms
        .iter()
        .map(|perm| {
            let mut bits = 0u128;
            for &x in perm {
                for &y in perm {
                    bits = bits << 1 | lt[x][y] as u128;
                }
            }
            bits
        })
        .min()
        .unwrap_or(0)
}

pub fn matrix(p: &Poset) -> Vec<Vec<bool>> {
    (0..p.len()).map(|x| (0..p.len()).map(|y| p.lt(x, y)).collect()).collect()
}

/// N detection from the definition: four distinct elements, three covers,
/// three incomparabilities.
pub fn brute_has_n(lt: &[Vec<bool>]) -> bool {
    let n = lt.len();
    let cover = |x: usize, y: usize| lt[x][y] && !(0..n).any(|z| lt[x][z] && lt[z][y]);
    let incomparable = |x: usize, y: usize| x != y && !lt[x][y] && !lt[y][x];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let distinct = a != b && a != c && a != d && b != c && b != d && c != d;
                    if distinct
                        && cover(a, b)
                        && cover(c, b)
                        && cover(c, d)
                        && incomparable(a, c)
                        && incomparable(a, d)
                        && incomparable(b, d)
                    {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Every strict partial order on `n` labelled points (all `n(n-1)` off-
/// diagonal entries free), deduplicated by brute canonical form.
/// Returns `(classes, N-free classes)`.
pub fn brute_census(n: usize) -> (usize, usize) {
    let cells: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let perms = permutations(n);
    let mut seen = std::collections::BTreeMap::new();
    for mask in 0u64..(1 << cells.len()) {
        let mut lt = vec![vec![false; n]; n];
        for (k, &(i, j)) in cells.iter().enumerate() {
            lt[i][j] = mask >> k & 1 == 1;
        }
        let antisymmetric = (0..n).all(|i| (0..n).all(|j| !(lt[i][j] && lt[j][i])));
        let transitive =
            (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(lt[i][j] && lt[j][k]) || lt[i][k])));
        if antisymmetric && transitive {
            let form = brute_canonical(&lt, &perms);
            seen.entry(form).or_insert_with(|| brute_has_n(&lt));
        }
    }
    (seen.len(), seen.values().filter(|has_n| !**has_n).count())
}
