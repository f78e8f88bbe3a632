//! Property tests for the matrix, similarity, mining and top-N invariants.

use proptest::collection::vec;
use proptest::prelude::*;

use reclab_core::ratings::{NormMethod, RatingMatrix};
use reclab_core::recommend::{ParamMap, RatingData, Registry};
use reclab_core::rulemine::{self, TransactionDb};
use reclab_core::similarity::{similarity, Measure, SimilarityParams};

/// Tuples over a bounded user/item grid with no duplicate pairs.
fn tuple_set(max_users: usize, max_items: usize) -> impl Strategy<Value = Vec<(String, String, f64)>> {
    vec(
        (0..max_users, 0..max_items, -10i32..=10i32),
        1..=max_users * max_items,
    )
    .prop_map(|raw| {
        let mut seen = std::collections::HashSet::new();
        raw.into_iter()
            .filter(|(u, i, _)| seen.insert((*u, *i)))
            .map(|(u, i, r)| (format!("u{u}"), format!("i{i}"), r as f64 / 2.0))
            .collect()
    })
}

proptest! {
    #[test]
    fn from_tuples_round_trips(tuples in tuple_set(8, 8)) {
        let m = RatingMatrix::from_tuples(&tuples).unwrap();
        let mut back = m.to_tuples();
        let mut original = tuples.clone();
        back.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        original.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        prop_assert_eq!(back, original);
    }

    #[test]
    fn centered_rows_have_mean_zero(tuples in tuple_set(8, 8)) {
        let m = RatingMatrix::from_tuples(&tuples).unwrap();
        let (norm, _) = m.normalize(NormMethod::Center).unwrap();
        for u in 0..norm.n_users() {
            let row = norm.row(u);
            let sum: f64 = row.iter().map(|&(_, v)| v).sum();
            prop_assert!(sum.abs() <= 1e-12 * row.len().max(1) as f64);
        }
    }

    #[test]
    fn normalize_preserves_missing_pattern(tuples in tuple_set(8, 8)) {
        let m = RatingMatrix::from_tuples(&tuples).unwrap();
        for method in [NormMethod::Center, NormMethod::ZScore] {
            let (norm, _) = m.normalize(method).unwrap();
            for u in 0..m.n_users() {
                let a: Vec<usize> = m.row(u).iter().map(|&(i, _)| i).collect();
                let b: Vec<usize> = norm.row(u).iter().map(|&(i, _)| i).collect();
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn similarity_ranges_and_symmetry(
        tuples in tuple_set(6, 10),
        measure in prop_oneof![Just(Measure::Pearson), Just(Measure::Cosine)],
    ) {
        let m = RatingMatrix::from_tuples(&tuples).unwrap();
        let params = SimilarityParams::new(measure);
        for a in 0..m.n_users() {
            for b in 0..m.n_users() {
                let ab = similarity(m.row(a), m.row(b), &params).unwrap();
                let ba = similarity(m.row(b), m.row(a), &params).unwrap();
                prop_assert_eq!(ab, ba);
                if let Some(s) = ab {
                    prop_assert!(s >= -1.0 - 1e-12 && s <= 1.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn cosine_positive_scaling_invariance(
        tuples in tuple_set(5, 8),
        scale in 0.01f64..100.0,
    ) {
        let m = RatingMatrix::from_tuples(&tuples).unwrap();
        let params = SimilarityParams::new(Measure::Cosine);
        for a in 0..m.n_users() {
            for b in 0..m.n_users() {
                let base = similarity(m.row(a), m.row(b), &params).unwrap();
                let scaled_row: Vec<(usize, f64)> =
                    m.row(a).iter().map(|&(i, v)| (i, v * scale)).collect();
                let scaled = similarity(&scaled_row, m.row(b), &params).unwrap();
                match (base, scaled) {
                    (Some(x), Some(y)) => prop_assert!((x - y).abs() < 1e-9),
                    (None, None) => {}
                    // scaling can only flip definedness when a norm collapses to 0
                    (a, b) => prop_assert!(a.is_none() || b.is_none()),
                }
            }
        }
    }

    #[test]
    fn jaccard_range_and_self(transactions in vec(vec(0usize..10, 0..6), 1..12)) {
        let sets: Vec<Vec<usize>> = transactions
            .into_iter()
            .map(|mut t| {
                t.sort_unstable();
                t.dedup();
                t
            })
            .collect();
        for a in &sets {
            for b in &sets {
                if let Some(s) = reclab_core::similarity::jaccard(a, b, 0) {
                    prop_assert!((0.0..=1.0).contains(&s));
                }
            }
            if !a.is_empty() {
                prop_assert_eq!(reclab_core::similarity::jaccard(a, a, 0), Some(1.0));
            }
        }
    }

    #[test]
    fn apriori_matches_brute_force(
        transactions in vec(vec(0usize..8, 0..6), 1..=24),
        support_pct in 1usize..60,
        max_len in 1usize..4,
    ) {
        let db_rows: Vec<Vec<usize>> = transactions
            .into_iter()
            .map(|mut t| {
                t.sort_unstable();
                t.dedup();
                t
            })
            .collect();
        let n = db_rows.len();
        let min_support = support_pct as f64 / 100.0;
        let db = TransactionDb::from_transactions(db_rows.clone(), 8);
        let mined = rulemine::mine_frequent(&db, min_support, max_len).unwrap();

        // brute force over all 2^8 non-empty itemsets
        let mut expected = std::collections::BTreeMap::new();
        for mask in 1u32..(1 << 8) {
            let items: Vec<usize> = (0..8).filter(|i| mask & (1 << i) != 0).collect();
            if items.len() > max_len {
                continue;
            }
            let count = db_rows
                .iter()
                .filter(|t| items.iter().all(|i| t.binary_search(i).is_ok()))
                .count();
            if count as f64 / n as f64 > min_support {
                expected.insert(items, count);
            }
        }
        let mut got = std::collections::BTreeMap::new();
        for set in &mined.sets {
            got.insert(set.items.clone(), set.count);
        }
        prop_assert_eq!(got, expected);

        // anti-monotonicity: every subset of a frequent set is frequent
        let frequent: std::collections::BTreeSet<Vec<usize>> =
            mined.sets.iter().map(|s| s.items.clone()).collect();
        for set in &mined.sets {
            for skip in 0..set.items.len() {
                if set.items.len() > 1 {
                    let subset: Vec<usize> = set
                        .items
                        .iter()
                        .enumerate()
                        .filter(|&(p, _)| p != skip)
                        .map(|(_, &i)| i)
                        .collect();
                    prop_assert!(frequent.contains(&subset));
                }
            }
        }
    }

    #[test]
    fn rules_satisfy_constraints(
        transactions in vec(vec(0usize..8, 1..6), 2..=20),
        support_pct in 5usize..40,
        conf_pct in 10usize..90,
    ) {
        let db_rows: Vec<Vec<usize>> = transactions
            .into_iter()
            .map(|mut t| {
                t.sort_unstable();
                t.dedup();
                t
            })
            .collect();
        let min_support = support_pct as f64 / 100.0;
        let min_confidence = conf_pct as f64 / 100.0;
        let db = TransactionDb::from_transactions(db_rows.clone(), 8);
        let rs = rulemine::mine_rules(&db, min_support, min_confidence, 3).unwrap();
        let n = db_rows.len() as f64;
        for rule in &rs.rules {
            prop_assert!(rule.support > min_support);
            prop_assert!(rule.confidence > min_confidence);
            prop_assert!(rule.lhs.len() + 1 <= 3);
            prop_assert!(!rule.lhs.contains(&rule.rhs));
            // support(X ∪ Y) = confidence · support(X)
            let lhs_count = db_rows
                .iter()
                .filter(|t| rule.lhs.iter().all(|i| t.binary_search(i).is_ok()))
                .count() as f64;
            prop_assert!((rule.support - rule.confidence * (lhs_count / n)).abs() < 1e-12);
        }

        // recommendations never contain basket items, scores non-increasing
        let basket = db_rows[0].clone();
        let recs = rulemine::recommend_from_rules(&rs, &basket, 10);
        for w in recs.windows(2) {
            prop_assert!(w[0].1 >= w[1].1);
        }
        for (item, _) in &recs {
            prop_assert!(basket.binary_search(item).is_err());
        }
    }

    #[test]
    fn top_n_lists_match_exhaustive_sort(
        tuples in tuple_set(10, 10),
        n in 1usize..8,
        seed in 0u64..50,
    ) {
        let m = RatingMatrix::from_tuples(&tuples).unwrap();
        let data = RatingData::Real(m);
        let reg = Registry::with_builtins();
        let mut params = ParamMap::new();
        params.insert("seed".into(), serde_json::json!(seed));
        let model = reg.fit("RANDOM", &data, &params).unwrap();
        let top = model.predict_top_n(&data, n).unwrap();
        let ratings = model.predict_ratings(&data).unwrap();
        for u in 0..data.n_users() {
            let list = &top.lists[u];
            prop_assert!(list.len() <= n);
            // scores non-increasing, ties by ascending index
            for w in list.windows(2) {
                prop_assert!(w[0].1 > w[1].1 || (w[0].1 == w[1].1 && w[0].0 < w[1].0));
            }
            // no known items
            let known = data.known_items(u);
            for &(i, _) in list {
                prop_assert!(known.binary_search(&i).is_err());
            }
            // every listed score >= every unlisted candidate score
            let floor = list.last().map(|&(_, s)| s).unwrap_or(f64::NEG_INFINITY);
            if list.len() == n {
                for &(i, v) in ratings.row(u) {
                    if !list.iter().any(|&(j, _)| j == i) {
                        prop_assert!(v <= floor);
                    }
                }
            } else {
                // short list: every candidate is already listed
                prop_assert_eq!(list.len(), ratings.row(u).len());
            }
        }
    }
}
