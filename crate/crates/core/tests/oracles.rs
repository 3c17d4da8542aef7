mod common;

use balanced_pair::linext::enumerate_extensions_with;
use balanced_pair::nfree::{check_lemma2, check_lemma2prime, check_lemma3, critical_pairs, swap_check};
use balanced_pair::verify::EnumerationConfig;
use balanced_pair::*;
use common::*;
use num_rational::Ratio;
use proptest::prelude::*;

fn n_poset() -> Poset {
    Poset::parse("elements: a b c d\na b\nc b\nc d\n").unwrap()
}

#[test]
fn n_poset_values_match_permutation_filter() {
    let p = n_poset();
    let exts = brute_extensions(&p);
    assert_eq!(exts.len(), 5);
    assert_eq!(count_extensions(&p).unwrap(), 5u64.into());
    assert_eq!(reduced(brute_prob(&p, 0, 2).0, 5), "2/5");
    assert_eq!(reduced(brute_prob(&p, 0, 3).0, 5), "4/5");
    assert_eq!(reduced(brute_prob(&p, 1, 3).0, 5), "2/5");
    for (x, y) in p.incomparable_pairs() {
        let (num, den) = brute_prob(&p, x, y);
        assert_eq!(prob_before(&p, x, y).unwrap().to_string(), reduced(num, den));
    }
    let listed: Vec<Vec<usize>> = enumerate_extensions(&p).unwrap().collect();
    let mut brute = exts.clone();
    brute.sort();
    assert_eq!(listed, brute);
}

#[test]
fn census_matches_brute_force_dedup() {
    let cfg = EnumerationConfig::with_jobs(2);
    for n in 0..=4 {
        let (classes, nfree) = brute_census(n);
        let got = verify::census_nfree_with(n, &cfg).unwrap();
        assert_eq!((got.total, got.nfree), (classes, nfree), "n = {n}");
    }
    assert_eq!(brute_census(3), (5, 5));
    assert_eq!(brute_census(4), (16, 15));
}

#[test]
fn enumeration_classes_are_pairwise_non_isomorphic() {
    // Compare against the full-permutation minimum, which is a complete
    // invariant by definition.
    for n in 0..=5 {
        let perms = permutations(n);
        let posets = enumerate_posets(n).unwrap();
        let mut forms: Vec<u128> = posets.iter().map(|p| brute_canonical(&matrix(p), &perms)).collect();
        forms.sort();
        forms.dedup();
        assert_eq!(forms.len(), posets.len(), "n = {n}");
    }
}

#[test]
fn canonical_form_agrees_with_brute_force_classes() {
    let perms = permutations(6);
    let mut by_fast = std::collections::HashMap::new();
    for seed in 0..400 {
        let p = random_poset(6, Ratio::new(seed % 5, 4), seed);
        let fast = canonical_form(&p).unwrap();
        let slow = brute_canonical(&matrix(&p), &perms);
        if let Some(prev) = by_fast.insert(fast, slow) {
            assert_eq!(prev, slow, "same fast form, different classes");
        }
    }
    let mut slow_values: Vec<u128> = by_fast.values().copied().collect();
    slow_values.sort();
    slow_values.dedup();
    assert_eq!(slow_values.len(), by_fast.len(), "different fast forms, same class");
}

#[test]
fn find_n_matches_definition_on_all_posets_up_to_six() {
    for n in 0..=6 {
        for p in enumerate_posets(n).unwrap() {
            let w = find_n(&p);
            assert_eq!(w.is_some(), brute_has_n(&matrix(&p)), "{p:?}");
            if let Some(w) = w {
                assert!(w.is_valid(&p));
            }
        }
    }
}

#[test]
fn critical_pairs_and_lemma_checks_over_all_small_posets() {
    let mut seen_failure = false;
    for n in 0..=6 {
        for p in enumerate_posets(n).unwrap() {
            for cp in critical_pairs(&p) {
                assert!(swap_check(&p, cp).unwrap(), "{p:?} {cp:?}");
                assert!(prob_before(&p, cp.x, cp.y).unwrap().at_least_half());
            }
            if is_n_free(&p) {
                assert!(check_lemma2(&p) && check_lemma2prime(&p) && check_lemma3(&p), "{p:?}");
            } else {
                seen_failure |= !check_lemma2(&p);
            }
        }
    }
    assert!(seen_failure, "the common-cover check never failed on a non-N-free poset");
}

#[test]
fn strip_preserves_n_freeness_and_probabilities() {
    for n in 1..=6 {
        for p in enumerate_posets(n).unwrap() {
            let s = p.strip_forced_minimum();
            if s.removed.is_empty() {
                continue;
            }
            if is_n_free(&p) {
                assert!(is_n_free(&s.residual), "{p:?}");
            }
            for (x, y) in s.residual.incomparable_pairs() {
                assert_eq!(
                    prob_before(&s.residual, x, y).unwrap(),
                    prob_before(&p, s.origin[x], s.origin[y]).unwrap()
                );
            }
        }
    }
}

#[test]
fn constructive_and_exhaustive_agree_on_existence() {
    for n in 0..=6 {
        for p in enumerate_posets(n).unwrap() {
            if !is_n_free(&p) {
                continue;
            }
            let c = find_balanced_nfree(&p).unwrap();
            let e = find_balanced_exhaustive(&p).unwrap();
            assert_eq!(c.is_some(), e.is_some(), "{p:?}");
            assert_eq!(c.is_none(), p.is_total());
        }
    }
}

#[test]
fn worst_case_sorting_meets_information_bound() {
    for n in 0..=5 {
        for p in enumerate_posets(n).unwrap() {
            let lb = info_lower_bound(&p).unwrap();
            let worst = enumerate_extensions(&p)
                .unwrap()
                .map(|h| simulate_sort(&p, &h).unwrap().comparisons)
                .max()
                .unwrap();
            assert!(worst as u64 >= lb, "{p:?}");
        }
    }
}

fn arb_poset(max_n: usize) -> impl Strategy<Value = Poset> {
    (0..=max_n, 0u64..=4, any::<u64>()).prop_map(|(n, k, seed)| random_poset(n, Ratio::new(k, 4), seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn covers_close_back_to_the_order(p in arb_poset(12)) {
        let closed = transitive_closure(p.covers().pairs(), p.len()).unwrap();
        prop_assert_eq!(closed, p.relation_pairs());
        prop_assert_eq!(Poset::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn levels_climb_along_covers(p in arb_poset(12)) {
        let lv = p.level_decomposition();
        let union = lv.levels().iter().fold(ElementSet::EMPTY, |a, &b| a | b);
        prop_assert_eq!(union, p.elements());
        prop_assert_eq!(lv.levels().first().copied().unwrap_or_default(), p.minimal_elements());
        for &(x, y) in p.covers().pairs() {
            prop_assert!(lv.level_of(y) > lv.level_of(x));
        }
    }

    #[test]
    fn exactly_one_relation_per_pair(p in arb_poset(10)) {
        for x in 0..p.len() {
            for y in 0..p.len() {
                let cases = [p.lt(x, y), p.lt(y, x), x == y, p.incomparable(x, y)];
                prop_assert_eq!(cases.iter().filter(|&&c| c).count(), 1);
                prop_assert_eq!(p.incomparable(x, y), p.incomparable(y, x));
            }
        }
    }

    #[test]
    fn complementary_probabilities(p in arb_poset(9)) {
        for (x, y) in p.incomparable_pairs() {
            let a = prob_before(&p, x, y).unwrap();
            let b = prob_before(&p, y, x).unwrap();
            prop_assert_eq!(a.complement(), b);
        }
    }

    #[test]
    fn count_matches_enumeration(p in arb_poset(8)) {
        let listed = enumerate_extensions_with(&p, 8).unwrap().count();
        prop_assert_eq!(count_extensions(&p).unwrap(), (listed as u64).into());
    }

    #[test]
    fn q_distribution_is_a_distribution(p in arb_poset(8), pick in any::<usize>()) {
        let n = p.len();
        prop_assume!(n >= 2);
        let a = pick % n;
        let b = (pick / n) % n;
        prop_assume!(a != b && p.incomparable(a, b));
        let mut chain: Vec<usize> = p.up_set(b).with(b).iter().collect();
        chain.sort_by_key(|&x| p.down_set(x).len());
        chain.retain(|&x| x != a);
        if p.is_chain(chain.iter().copied().collect()) {
            let q = q_distribution(&p, a, &chain).unwrap();
            prop_assert!(q.sum() == num_rational::BigRational::from_integer(1.into()));
            prop_assert!(q.values().iter().all(|v| *v >= num_rational::BigRational::from_integer(0.into())));
        }
    }

    #[test]
    fn sorting_replays_to_hidden_order(p in arb_poset(7), pick in any::<usize>()) {
        let exts: Vec<Vec<usize>> = enumerate_extensions(&p).unwrap().collect();
        let hidden = &exts[pick % exts.len()];
        let t = simulate_sort(&p, hidden).unwrap();
        prop_assert_eq!(&t.replay(&p).unwrap(), hidden);
        if t.all_queries_balanced {
            prop_assert!(t.within_balanced_bounds());
        }
    }
}
