//! Finite posets stored as strict-order bitmask rows.
//!
//! Elements are indexed `0..n` in declaration order; labels only matter at
//! the text boundary. Every `Poset` is transitively closed and acyclic by
//! construction.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::set::ElementSet;

/// Largest supported poset; element sets must fit in one `u64`.
pub const MAX_ELEMENTS: usize = 64;

/// Label used for element `i` when a poset is built without explicit labels.
pub fn default_label(i: usize) -> String {
    if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("e{i}")
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    labels: Vec<String>,
    /// `below[x]` is the strict down-set of `x`.
    below: Vec<ElementSet>,
    /// `above[x]` is the strict up-set of `x`.
    above: Vec<ElementSet>,
}

/// `(x, y)` is in the relation when `y` is an upper cover of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverRelation {
    pairs: Vec<(usize, usize)>,
}

impl CoverRelation {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.binary_search(&(x, y)).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelDecomposition {
    levels: Vec<ElementSet>,
    level_of: Vec<usize>,
}

impl LevelDecomposition {
    pub fn levels(&self) -> &[ElementSet] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn level(&self, i: usize) -> ElementSet {
        self.levels[i]
    }

    /// Index of the level containing element `x`.
    pub fn level_of(&self, x: usize) -> usize {
        self.level_of[x]
    }
}

/// Result of repeatedly deleting a unique minimum.
#[derive(Clone, Debug)]
pub struct Stripped {
    pub residual: Poset,
    /// Deleted elements, in deletion order, as indices of the input poset.
    pub removed: Vec<usize>,
    /// `origin[i]` is the input index of residual element `i`.
    pub origin: Vec<usize>,
}

/// Smallest transitively closed superset of `relation` on `n` elements.
///
/// Pairs come back sorted. Fails if the closure relates some element to
/// itself.
pub fn transitive_closure(relation: &[(usize, usize)], n: usize) -> Result<Vec<(usize, usize)>> {
    if n > MAX_ELEMENTS {
        return Err(Error::TooManyElements(n));
    }
    let mut above = vec![ElementSet::EMPTY; n];
    for &(x, y) in relation {
        if x >= n || y >= n {
            return Err(Error::UnknownElement(x.max(y).to_string()));
        }
        above[x] = above[x].with(y);
    }
    close_rows(&mut above).map_err(|x| Error::CycleDetected(x.to_string()))?;
    Ok(rows_to_pairs(&above))
}

/// Warshall closure over up-set rows. On a cycle returns an element on it.
fn close_rows(above: &mut [ElementSet]) -> std::result::Result<(), usize> {
    let n = above.len();
    for k in 0..n {
        let row_k = above[k];
        for i in 0..n {
            if above[i].contains(k) {
                above[i] = above[i] | row_k;
            }
        }
    }
    match (0..n).find(|&i| above[i].contains(i)) {
        Some(x) => Err(x),
        None => Ok(()),
    }
}

fn rows_to_pairs(above: &[ElementSet]) -> Vec<(usize, usize)> {
    above
        .iter()
        .enumerate()
        .flat_map(|(x, row)| row.iter().map(move |y| (x, y)))
        .collect()
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

impl Poset {
    /// The poset with no elements.
    pub fn empty() -> Self {
        Poset { labels: Vec::new(), below: Vec::new(), above: Vec::new() }
    }

    /// Builds a poset from labels and a (not necessarily closed) relation
    /// over label indices.
    pub fn from_relations(labels: Vec<String>, relation: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if n > MAX_ELEMENTS {
            return Err(Error::TooManyElements(n));
        }
        let mut seen = HashMap::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            if seen.insert(label.as_str(), i).is_some() {
                return Err(Error::DuplicateElement(label.clone()));
            }
        }
        let mut above = vec![ElementSet::EMPTY; n];
        for &(x, y) in relation {
            if x >= n || y >= n {
                return Err(Error::UnknownElement(x.max(y).to_string()));
            }
            above[x] = above[x].with(y);
        }
        close_rows(&mut above).map_err(|x| Error::CycleDetected(labels[x].clone()))?;
        let below = transpose(&above);
        Ok(Poset { labels, below, above })
    }

    /// Like [`Poset::from_relations`] with default labels `a, b, c, ...`.
    pub fn with_relations(n: usize, relation: &[(usize, usize)]) -> Result<Self> {
        Self::from_relations((0..n).map(default_label).collect(), relation)
    }

    /// Builds from up-set rows that are already closed and acyclic.
    pub(crate) fn from_closed_rows(labels: Vec<String>, above: Vec<ElementSet>) -> Self {
        debug_assert_eq!(labels.len(), above.len());
        debug_assert!(above.iter().enumerate().all(|(x, row)| {
            !row.contains(x) && row.iter().all(|y| above[y].is_subset(*row))
        }));
        let below = transpose(&above);
        Poset { labels, below, above }
    }

    pub fn chain(n: usize) -> Self {
        let above = (0..n).map(|i| ElementSet::full(n) - ElementSet::full(i + 1)).collect();
        Self::from_closed_rows((0..n).map(default_label).collect(), above)
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_closed_rows((0..n).map(default_label).collect(), vec![ElementSet::EMPTY; n])
    }

    /// Parses the line-oriented text format.
    ///
    /// ```text
    /// # comment
    /// elements: a b c d
    /// a b
    /// c b
    /// c d
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut labels: Option<Vec<String>> = None;
        let mut relation_lines: Vec<(usize, String, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = lineno + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("elements:") {
                if labels.is_some() {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "second `elements:` line".into(),
                    });
                }
                let tokens: Vec<String> = rest.split_whitespace().map(str::to_owned).collect();
                if let Some(bad) = tokens.iter().find(|t| t.contains(',')) {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!("element token `{bad}` contains a comma"),
                    });
                }
                labels = Some(tokens);
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                [x, y] => relation_lines.push((lineno, (*x).to_owned(), (*y).to_owned())),
                _ => {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!("expected `lower upper`, found `{line}`"),
                    })
                }
            }
        }
        let labels = labels.ok_or(Error::Parse {
            line: 0,
            message: "missing `elements:` line".into(),
        })?;
        if labels.len() > MAX_ELEMENTS {
            return Err(Error::TooManyElements(labels.len()));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.as_str(), i).is_some() {
                return Err(Error::DuplicateElement(label.clone()));
            }
        }
        let lookup = |t: &str| index.get(t).copied().ok_or_else(|| Error::UnknownElement(t.to_owned()));
        let mut relation = Vec::with_capacity(relation_lines.len());
        for (_, x, y) in &relation_lines {
            relation.push((lookup(x)?, lookup(y)?));
        }
        Self::from_relations(labels, &relation)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// All element indices as a set.
    #[inline]
    pub fn elements(&self) -> ElementSet {
        ElementSet::full(self.len())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    /// Index of the element with the given label.
    pub fn index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownElement(label.to_owned()))
    }

    pub(crate) fn check_index(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownElement(x.to_string()))
        }
    }

    /// `x < y` in the strict order.
    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.above[x].contains(y)
    }

    /// D(x): elements strictly below `x`.
    #[inline]
    pub fn down_set(&self, x: usize) -> ElementSet {
        self.below[x]
    }

    /// U(x): elements strictly above `x`.
    #[inline]
    pub fn up_set(&self, x: usize) -> ElementSet {
        self.above[x]
    }

    #[inline]
    pub fn comparable(&self, x: usize, y: usize) -> bool {
        x == y || self.lt(x, y) || self.lt(y, x)
    }

    #[inline]
    pub fn incomparable(&self, x: usize, y: usize) -> bool {
        !self.comparable(x, y)
    }

    /// Every two distinct members of `s` are comparable.
    pub fn is_chain(&self, s: ElementSet) -> bool {
        s.iter().all(|x| (s - self.above[x] - self.below[x]) == ElementSet::singleton(x))
    }

    /// The whole poset is a chain (vacuously true when empty).
    pub fn is_total(&self) -> bool {
        self.is_chain(self.elements())
    }

    pub fn minimal_elements(&self) -> ElementSet {
        (0..self.len()).filter(|&x| self.below[x].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> ElementSet {
        (0..self.len()).filter(|&x| self.above[x].is_empty()).collect()
    }

    /// Elements of `s` with nothing above them inside `s`.
    #[inline]
    pub fn maximal_within(&self, s: ElementSet) -> ElementSet {
        s.iter().filter(|&x| !self.above[x].intersects(s)).collect()
    }

    /// Elements of `s` with nothing below them inside `s`.
    #[inline]
    pub fn minimal_within(&self, s: ElementSet) -> ElementSet {
        s.iter().filter(|&x| !self.below[x].intersects(s)).collect()
    }

    pub fn upper_covers(&self, x: usize) -> ElementSet {
        let up = self.above[x];
        up.iter().fold(up, |acc, z| acc - self.above[z])
    }

    pub fn lower_covers(&self, x: usize) -> ElementSet {
        let down = self.below[x];
        down.iter().fold(down, |acc, z| acc - self.below[z])
    }

    pub fn covers(&self) -> CoverRelation {
        let pairs = (0..self.len())
            .flat_map(|x| self.upper_covers(x).iter().map(move |y| (x, y)))
            .collect();
        CoverRelation { pairs }
    }

    /// All strict relations `(x, y)` with `x < y`, sorted.
    pub fn relation_pairs(&self) -> Vec<(usize, usize)> {
        rows_to_pairs(&self.above)
    }

    /// Unordered incomparable pairs, reported as `(x, y)` with `x < y` by index.
    pub fn incomparable_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .filter(|&(x, y)| self.incomparable(x, y))
            .collect()
    }

    pub fn level_decomposition(&self) -> LevelDecomposition {
        let mut levels = Vec::new();
        let mut level_of = vec![0; self.len()];
        let mut rest = self.elements();
        while !rest.is_empty() {
            let level = self.minimal_within(rest);
            for x in level.iter() {
                level_of[x] = levels.len();
            }
            levels.push(level);
            rest = rest - level;
        }
        LevelDecomposition { levels, level_of }
    }

    /// The subposet induced on `keep`, reindexed in ascending order. The
    /// second component maps new indices to old ones.
    pub fn induced(&self, keep: ElementSet) -> (Poset, Vec<usize>) {
        let origin: Vec<usize> = keep.iter().collect();
        let mut position = vec![usize::MAX; self.len()];
        for (new, &old) in origin.iter().enumerate() {
            position[old] = new;
        }
        let remap = |s: ElementSet| -> ElementSet { (s & keep).iter().map(|o| position[o]).collect() };
        let labels = origin.iter().map(|&o| self.labels[o].clone()).collect();
        let above = origin.iter().map(|&o| remap(self.above[o])).collect();
        (Poset::from_closed_rows(labels, above), origin)
    }

    /// Deletes the minimum element while there is exactly one minimal
    /// element. The residual is empty or has at least two minimal elements.
    pub fn strip_forced_minimum(&self) -> Stripped {
        let mut rest = self.elements();
        let mut removed = Vec::new();
        loop {
            let mins = self.minimal_within(rest);
            if mins.len() != 1 {
                break;
            }
            let m = mins.first().expect("one minimal element");
            removed.push(m);
            rest = rest.without(m);
        }
        let (residual, origin) = self.induced(rest);
        Stripped { residual, removed, origin }
    }

    /// The poset with `x < y` added and closed.
    pub fn add_relation(&self, x: usize, y: usize) -> Result<Poset> {
        self.check_index(x)?;
        self.check_index(y)?;
        if x == y || self.lt(y, x) {
            return Err(Error::WouldCreateCycle(self.labels[x].clone(), self.labels[y].clone()));
        }
        if self.lt(x, y) {
            return Ok(self.clone());
        }
        let lower = self.below[x].with(x);
        let upper = self.above[y].with(y);
        let mut next = self.clone();
        for u in lower.iter() {
            next.above[u] = next.above[u] | upper;
        }
        for v in upper.iter() {
            next.below[v] = next.below[v] | lower;
        }
        Ok(next)
    }

    /// Checks that `seq` lists every element once and respects the order.
    pub fn is_linear_extension(&self, seq: &[usize]) -> bool {
        if seq.len() != self.len() {
            return false;
        }
        let mut placed = ElementSet::EMPTY;
        for &x in seq {
            if x >= self.len() || placed.contains(x) || !self.below[x].is_subset(placed) {
                return false;
            }
            placed = placed.with(x);
        }
        true
    }
}

impl FromStr for Poset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Poset::parse(s)
    }
}

/// Writes the text format with cover relations only.
impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "elements:")?;
        for l in &self.labels {
            write!(f, " {l}")?;
        }
        writeln!(f)?;
        for &(x, y) in self.covers().pairs() {
            writeln!(f, "{} {}", self.labels[x], self.labels[y])?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .covers()
            .pairs()
            .iter()
            .map(|&(x, y)| format!("{}<{}", self.labels[x], self.labels[y]))
            .collect();
        write!(f, "Poset[{}; {}]", self.labels.join(" "), covers.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n_poset() -> Poset {
        Poset::parse("elements: a b c d\na b\nc b\nc d\n").unwrap()
    }

    fn set(p: &Poset, labels: &[&str]) -> ElementSet {
        labels.iter().map(|l| p.index(l).unwrap()).collect()
    }

    #[test]
    fn parses_three_element_poset() {
        let p = Poset::parse("elements: x y z\nx y\n").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.relation_pairs(), vec![(0, 1)]);
        assert!(p.incomparable(0, 2));
    }

    #[test]
    fn parse_skips_comments_and_blank_lines() {
        let p = Poset::parse("# the N\n\n  elements: a b c d  \n# covers\na b\n\nc b\nc d\n").unwrap();
        assert_eq!(p, n_poset());
    }

    #[test]
    fn parse_retains_isolated_elements() {
        let p = Poset::parse("elements: a b c\n").unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.relation_pairs().is_empty());
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            Poset::parse("elements: p q\np q\nq p\n").unwrap_err(),
            Error::CycleDetected("p".into())
        );
        assert_eq!(Poset::parse("elements: p q\np r\n").unwrap_err(), Error::UnknownElement("r".into()));
        assert_eq!(Poset::parse("elements: p q p\n").unwrap_err(), Error::DuplicateElement("p".into()));
        assert!(matches!(Poset::parse("p q\n"), Err(Error::Parse { .. })));
        assert!(matches!(Poset::parse("elements: a\nelements: b\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Poset::parse("elements: a b\na b c\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Poset::parse("elements: a,b\n"), Err(Error::Parse { .. })));
        assert_eq!(Poset::parse("elements: a\na a\n").unwrap_err(), Error::CycleDetected("a".into()));
    }

    #[test]
    fn parse_rejects_more_than_64_elements() {
        let labels: Vec<String> = (0..65).map(|i| format!("v{i}")).collect();
        let text = format!("elements: {}\n", labels.join(" "));
        assert_eq!(Poset::parse(&text).unwrap_err(), Error::TooManyElements(65));
        let text = format!("elements: {}\n", labels[..64].join(" "));
        assert_eq!(Poset::parse(&text).unwrap().len(), 64);
    }

    #[test]
    fn closure_examples() {
        assert_eq!(transitive_closure(&[(0, 1), (1, 2)], 3).unwrap(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(transitive_closure(&[], 3).unwrap(), vec![]);
        assert_eq!(transitive_closure(&[(0, 1), (1, 0)], 2).unwrap_err(), Error::CycleDetected("0".into()));
        assert!(matches!(transitive_closure(&[(0, 5)], 3), Err(Error::UnknownElement(_))));
    }

    #[test]
    fn covers_examples() {
        let chain = Poset::parse("elements: a b c\na b\nb c\na c\n").unwrap();
        assert_eq!(chain.covers().pairs(), &[(0, 1), (1, 2)]);
        let p = n_poset();
        assert_eq!(p.covers().pairs(), &[(0, 1), (2, 1), (2, 3)]);
        assert!(Poset::antichain(3).covers().is_empty());
    }

    #[test]
    fn down_and_up_sets() {
        let p = n_poset();
        assert_eq!(p.down_set(p.index("b").unwrap()), set(&p, &["a", "c"]));
        assert!(p.down_set(p.index("a").unwrap()).is_empty());
        assert_eq!(p.up_set(p.index("c").unwrap()), set(&p, &["b", "d"]));
        assert!(p.up_set(p.index("d").unwrap()).is_empty());
        let chain = Poset::chain(3);
        assert_eq!(chain.down_set(2), set(&chain, &["a", "b"]));
        assert_eq!(chain.up_set(0), set(&chain, &["b", "c"]));
        assert_eq!(p.index("z").unwrap_err(), Error::UnknownElement("z".into()));
    }

    #[test]
    fn incomparability() {
        let p = n_poset();
        assert!(p.incomparable(0, 2));
        assert!(!p.incomparable(0, 1));
        assert!(!p.incomparable(3, 3));
        assert_eq!(p.incomparable_pairs(), vec![(0, 2), (0, 3), (1, 3)]);
    }

    #[test]
    fn chains() {
        let p = n_poset();
        assert!(p.is_chain(set(&p, &["c", "b"])));
        assert!(!p.is_chain(set(&p, &["b", "d"])));
        assert!(p.is_chain(ElementSet::EMPTY));
        assert!(p.is_chain(ElementSet::singleton(1)));
        assert!(Poset::empty().is_total());
        assert!(Poset::chain(4).is_total());
        assert!(!p.is_total());
    }

    #[test]
    fn levels() {
        let p = n_poset();
        let lv = p.level_decomposition();
        assert_eq!(lv.levels(), &[set(&p, &["a", "c"]), set(&p, &["b", "d"])]);
        let chain = Poset::chain(3);
        assert_eq!(chain.level_decomposition().levels(), &[
            ElementSet::singleton(0),
            ElementSet::singleton(1),
            ElementSet::singleton(2)
        ]);
        assert_eq!(Poset::antichain(4).level_decomposition().levels(), &[ElementSet::full(4)]);
        assert!(Poset::empty().level_decomposition().is_empty());
    }

    #[test]
    fn strip_examples() {
        let s = Poset::chain(3).strip_forced_minimum();
        assert!(s.residual.is_empty());
        assert_eq!(s.removed, vec![0, 1, 2]);

        let s = n_poset().strip_forced_minimum();
        assert_eq!(s.residual, n_poset());
        assert!(s.removed.is_empty());

        let p = Poset::parse("elements: z a b c d\nz a\nz c\na b\nc b\nc d\n").unwrap();
        let s = p.strip_forced_minimum();
        assert_eq!(s.residual, n_poset());
        assert_eq!(s.removed, vec![0]);
        assert_eq!(s.origin, vec![1, 2, 3, 4]);
    }

    #[test]
    fn add_relation_closes() {
        let p = n_poset();
        let q = p.add_relation(0, 2).unwrap();
        assert!(q.lt(0, 2) && q.lt(0, 3) && q.lt(0, 1));
        assert_eq!(q.relation_pairs(), vec![(0, 1), (0, 2), (0, 3), (2, 1), (2, 3)]);
        let chain = Poset::chain(2);
        assert_eq!(chain.add_relation(0, 1).unwrap(), chain);
        assert_eq!(chain.add_relation(1, 0).unwrap_err(), Error::WouldCreateCycle("b".into(), "a".into()));
    }

    #[test]
    fn display_round_trips() {
        let p = Poset::parse("elements: a b c\na b\nb c\na c\n").unwrap();
        assert_eq!(p.to_string(), "elements: a b c\na b\nb c\n");
        assert_eq!(Poset::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn linear_extension_check() {
        let p = n_poset();
        assert!(p.is_linear_extension(&[2, 3, 0, 1]));
        assert!(!p.is_linear_extension(&[1, 0, 2, 3]));
        assert!(!p.is_linear_extension(&[0, 2, 1]));
        assert!(!p.is_linear_extension(&[0, 0, 2, 1]));
    }
}
