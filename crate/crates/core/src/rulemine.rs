//! Frequent-itemset mining and association-rule induction over a binary
//! rating matrix viewed as transactions.
//!
//! Mining is level-wise Apriori with strict `>` thresholds on support and
//! confidence. Supports are stored as transaction counts so the relative
//! values are exact integer ratios.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ratings::BinaryRatingMatrix;

/// Transactions derived from a binary rating matrix: one sorted item set
/// per user.
#[derive(Debug, Clone)]
pub struct TransactionDb {
    transactions: Vec<Vec<usize>>,
    n_items: usize,
}

impl TransactionDb {
    pub fn from_binary(m: &BinaryRatingMatrix) -> Self {
        TransactionDb {
            transactions: (0..m.n_users()).map(|u| m.row(u).to_vec()).collect(),
            n_items: m.n_items(),
        }
    }

    pub fn from_transactions(transactions: Vec<Vec<usize>>, n_items: usize) -> Self {
        TransactionDb {
            transactions,
            n_items,
        }
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }

    pub fn transactions(&self) -> &[Vec<usize>] {
        &self.transactions
    }
}

/// A frequent itemset with its transaction count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequentItemset {
    /// Sorted item indices.
    pub items: Vec<usize>,
    pub count: usize,
}

/// All frequent itemsets of a mining run, with the database size needed to
/// turn counts into relative supports.
#[derive(Debug, Clone)]
pub struct FrequentItemsets {
    pub sets: Vec<FrequentItemset>,
    pub n_transactions: usize,
}

impl FrequentItemsets {
    pub fn support(&self, set: &FrequentItemset) -> f64 {
        set.count as f64 / self.n_transactions as f64
    }
}

/// An association rule `lhs -> rhs` with a single item on the right.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    /// Sorted item indices, non-empty, disjoint from `rhs`.
    pub lhs: Vec<usize>,
    pub rhs: usize,
    pub support: f64,
    pub confidence: f64,
}

/// Rules surviving the mining thresholds, plus the thresholds themselves.
#[derive(Debug, Clone)]
pub struct RuleSet {
    pub rules: Vec<Rule>,
    pub min_support: f64,
    pub min_confidence: f64,
    pub max_len: usize,
}

impl RuleSet {
    /// CSV export: `lhs;rhs;support;confidence` with lhs items `|`-joined.
    pub fn to_csv(&self, item_labels: &[String]) -> String {
        let mut out = String::from("lhs;rhs;support;confidence\n");
        for rule in &self.rules {
            let lhs = rule
                .lhs
                .iter()
                .map(|&i| item_labels[i].as_str())
                .collect::<Vec<_>>()
                .join("|");
            out.push_str(&format!(
                "{lhs};{};{};{}\n",
                item_labels[rule.rhs], rule.support, rule.confidence
            ));
        }
        out
    }
}

/// Mines all itemsets with relative support strictly above `min_support`
/// and size at most `max_len`, level-wise.
pub fn mine_frequent(
    db: &TransactionDb,
    min_support: f64,
    max_len: usize,
) -> Result<FrequentItemsets> {
    if db.is_empty() {
        return Err(Error::EmptyInput);
    }
    if min_support.is_nan() || min_support <= 0.0 || min_support > 1.0 {
        return Err(Error::InvalidArgument(
            "min_support must be in (0, 1]".into(),
        ));
    }
    if max_len == 0 {
        return Err(Error::InvalidArgument("max_len must be at least 1".into()));
    }
    let n = db.len();
    let frequent = |count: usize| count as f64 / n as f64 > min_support;

    let mut sets: Vec<FrequentItemset> = Vec::new();

    // level 1
    let mut counts = vec![0usize; db.n_items()];
    for t in db.transactions() {
        for &i in t {
            counts[i] += 1;
        }
    }
    let mut level: Vec<Vec<usize>> = Vec::new();
    for (i, &c) in counts.iter().enumerate() {
        if frequent(c) {
            sets.push(FrequentItemset {
                items: vec![i],
                count: c,
            });
            level.push(vec![i]);
        }
    }

    let mut size = 1;
    while !level.is_empty() && size < max_len {
        let candidates = join_level(&level);
        let mut next = Vec::new();
        for cand in candidates {
            if !all_subsets_frequent(&cand, &level) {
                continue;
            }
            let count = db
                .transactions()
                .iter()
                .filter(|t| is_subset(&cand, t))
                .count();
            if frequent(count) {
                sets.push(FrequentItemset {
                    items: cand.clone(),
                    count,
                });
                next.push(cand);
            }
        }
        level = next;
        size += 1;
    }
    Ok(FrequentItemsets {
        sets,
        n_transactions: n,
    })
}

/// Joins a level of size-k sets into size-(k+1) candidates: two sets merge
/// when they share their first k-1 items.
fn join_level(level: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for (a, first) in level.iter().enumerate() {
        for second in &level[a + 1..] {
            let k = first.len();
            if first[..k - 1] == second[..k - 1] && first[k - 1] < second[k - 1] {
                let mut cand = first.clone();
                cand.push(second[k - 1]);
                out.push(cand);
            }
        }
    }
    out
}

fn all_subsets_frequent(cand: &[usize], level: &[Vec<usize>]) -> bool {
    (0..cand.len()).all(|skip| {
        let subset: Vec<usize> = cand
            .iter()
            .enumerate()
            .filter(|&(p, _)| p != skip)
            .map(|(_, &i)| i)
            .collect();
        level.contains(&subset)
    })
}

fn is_subset(needle: &[usize], haystack: &[usize]) -> bool {
    let mut j = 0;
    for &x in needle {
        while j < haystack.len() && haystack[j] < x {
            j += 1;
        }
        if j >= haystack.len() || haystack[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Derives all rules `X -> y` with a single-item right-hand side, non-empty
/// `X`, both `X` and `X ∪ {y}` frequent, and confidence strictly above
/// `min_confidence`.
pub fn induce_rules(frequent: &FrequentItemsets, min_confidence: f64) -> RuleSet {
    let index: HashMap<&[usize], usize> = frequent
        .sets
        .iter()
        .map(|s| (s.items.as_slice(), s.count))
        .collect();
    let n = frequent.n_transactions as f64;
    let mut rules = Vec::new();
    for set in &frequent.sets {
        if set.items.len() < 2 {
            continue;
        }
        for (pos, &rhs) in set.items.iter().enumerate() {
            let lhs: Vec<usize> = set
                .items
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != pos)
                .map(|(_, &i)| i)
                .collect();
            let lhs_count = index[lhs.as_slice()];
            let confidence = set.count as f64 / lhs_count as f64;
            if confidence > min_confidence {
                rules.push(Rule {
                    lhs,
                    rhs,
                    support: set.count as f64 / n,
                    confidence,
                });
            }
        }
    }
    RuleSet {
        rules,
        min_support: 0.0,
        min_confidence,
        max_len: 0,
    }
}

/// Mines frequent itemsets and induces rules in one step, recording the
/// thresholds in the returned set.
pub fn mine_rules(
    db: &TransactionDb,
    min_support: f64,
    min_confidence: f64,
    max_len: usize,
) -> Result<RuleSet> {
    let frequent = mine_frequent(db, min_support, max_len)?;
    let mut rules = induce_rules(&frequent, min_confidence);
    rules.min_support = min_support;
    rules.max_len = max_len;
    Ok(rules)
}

/// Two-step recommendation from a rule set: match rules whose left-hand
/// side is contained in the basket, then rank their right-hand sides.
///
/// The score of an item is the highest confidence among its matching
/// rules; ties are broken by higher support, then ascending item index.
/// Basket items are never recommended.
pub fn recommend_from_rules(rs: &RuleSet, basket: &[usize], n: usize) -> Vec<(usize, f64)> {
    // (confidence, support) of the best rule per candidate item
    let mut best: HashMap<usize, (f64, f64)> = HashMap::new();
    for rule in &rs.rules {
        if basket.binary_search(&rule.rhs).is_ok() {
            continue;
        }
        if !is_subset(&rule.lhs, basket) {
            continue;
        }
        let entry = best.entry(rule.rhs).or_insert((rule.confidence, rule.support));
        if rule.confidence > entry.0
            || (rule.confidence == entry.0 && rule.support > entry.1)
        {
            *entry = (rule.confidence, rule.support);
        }
    }
    let mut ranked: Vec<(usize, (f64, f64))> = best.into_iter().collect();
    ranked.sort_by(|a, b| {
        b.1 .0
            .partial_cmp(&a.1 .0)
            .unwrap()
            .then(b.1 .1.partial_cmp(&a.1 .1).unwrap())
            .then(a.0.cmp(&b.0))
    });
    ranked.truncate(n);
    ranked.into_iter().map(|(item, (conf, _))| (item, conf)).collect()
}
