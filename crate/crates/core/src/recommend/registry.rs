//! Algorithm registry: name → implementation, per data kind.

use serde_json::{json, Value};

use crate::error::{Error, Result};

use super::{
    ar, hybrid, ibcf, popular, random, rerecommend, svd, ubcf, AlgorithmState, DataKind, ParamMap,
    RatingData, RecommenderModel,
};

/// A registry entry: algorithm name, the data kind it handles, a short
/// description, and its default parameters.
#[derive(Debug, Clone)]
pub struct AlgorithmSpec {
    pub name: String,
    pub data_kind: DataKind,
    pub description: String,
    pub default_params: ParamMap,
}

impl AlgorithmSpec {
    pub fn new(
        name: &str,
        data_kind: DataKind,
        description: &str,
        default_params: Value,
    ) -> Self {
        let default_params = match default_params {
            Value::Object(map) => map,
            Value::Null => ParamMap::new(),
            other => panic!("default params must be a JSON object, got {other}"),
        };
        AlgorithmSpec {
            name: name.to_string(),
            data_kind,
            description: description.to_string(),
            default_params,
        }
    }
}

/// Builds algorithm state from training data and resolved parameters. The
/// registry itself is passed through so composite algorithms can fit their
/// children.
pub type Constructor =
    Box<dyn Fn(&Registry, &RatingData, &ParamMap) -> Result<Box<dyn AlgorithmState>> + Send + Sync>;

/// Registry of recommender algorithms, keyed by `(name, data kind)`.
/// Entries keep registration order; user algorithms can be added at
/// runtime with [`Registry::register`].
pub struct Registry {
    entries: Vec<(AlgorithmSpec, Constructor)>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl Registry {
    pub fn empty() -> Self {
        Registry {
            entries: Vec::new(),
        }
    }

    /// Registry with all built-in algorithms.
    pub fn with_builtins() -> Self {
        let mut reg = Registry::empty();
        for (spec, ctor) in builtin_entries() {
            reg.register(spec, ctor)
                .expect("built-in registrations are unique");
        }
        reg
    }

    /// Adds an algorithm; `(name, data kind)` must be unused.
    pub fn register(&mut self, spec: AlgorithmSpec, ctor: Constructor) -> Result<()> {
        if self
            .entries
            .iter()
            .any(|(s, _)| s.name == spec.name && s.data_kind == spec.data_kind)
        {
            return Err(Error::AlreadyRegistered {
                name: spec.name,
                kind: spec.data_kind,
            });
        }
        self.entries.push((spec, ctor));
        Ok(())
    }

    /// All entries for a data kind, in registration order.
    pub fn entries(&self, kind: DataKind) -> Vec<&AlgorithmSpec> {
        self.entries
            .iter()
            .map(|(s, _)| s)
            .filter(|s| s.data_kind == kind)
            .collect()
    }

    pub fn get(&self, name: &str, kind: DataKind) -> Option<&AlgorithmSpec> {
        self.entries
            .iter()
            .map(|(s, _)| s)
            .find(|s| s.name == name && s.data_kind == kind)
    }

    /// Fits `name` on `data`. `params` override the registered defaults;
    /// unknown parameter names are rejected.
    pub fn fit(&self, name: &str, data: &RatingData, params: &ParamMap) -> Result<RecommenderModel> {
        let kind = data.kind();
        let (spec, ctor) = self
            .entries
            .iter()
            .find(|(s, _)| s.name == name && s.data_kind == kind)
            .ok_or_else(|| Error::UnknownAlgorithm {
                name: name.to_string(),
                kind,
            })?;
        let merged = merge_params(&spec.default_params, params)?;
        let state = ctor(self, data, &merged)?;
        Ok(RecommenderModel::new(
            spec.name.clone(),
            kind,
            merged,
            data,
            state,
        ))
    }
}

/// Overrides defaults with user parameters, rejecting unknown names.
fn merge_params(defaults: &ParamMap, user: &ParamMap) -> Result<ParamMap> {
    let mut merged = defaults.clone();
    for (key, value) in user {
        if !defaults.contains_key(key) {
            return Err(Error::InvalidParam {
                name: key.clone(),
                message: format!(
                    "unknown parameter (expected one of: {})",
                    defaults.keys().cloned().collect::<Vec<_>>().join(", ")
                ),
            });
        }
        merged.insert(key.clone(), value.clone());
    }
    Ok(merged)
}

fn builtin_entries() -> Vec<(AlgorithmSpec, Constructor)> {
    use DataKind::{Binary, Real};
    let mut entries: Vec<(AlgorithmSpec, Constructor)> = Vec::new();

    entries.push((
        AlgorithmSpec::new(
            "RANDOM",
            Real,
            "Uniform random scores over the training rating range; baseline.",
            json!({ "seed": null }),
        ),
        Box::new(|_reg, data, params| random::fit_real(data, params)),
    ));
    entries.push((
        AlgorithmSpec::new(
            "POPULAR",
            Real,
            "Ranks items by how many users rated them; rating predictions add the normalized column mean to the user mean.",
            json!({ "normalize": "center", "seed": null }),
        ),
        Box::new(|_reg, data, params| popular::fit_real(data, params)),
    ));
    entries.push((
        AlgorithmSpec::new(
            "RERECOMMEND",
            Real,
            "Re-recommends the user's own highly rated items, optionally jittered.",
            json!({ "randomize": 1.0, "min_rating": null, "seed": null }),
        ),
        Box::new(|_reg, data, params| rerecommend::fit(data, params)),
    ));
    entries.push((
        AlgorithmSpec::new(
            "UBCF",
            Real,
            "User-based collaborative filtering: aggregates ratings from the most similar users.",
            json!({
                "method": "cosine",
                "nn": 25,
                "weighted": true,
                "normalize": "center",
                "min_matching_items": 0,
                "drop_nonpositive": true,
                "seed": null
            }),
        ),
        Box::new(|_reg, data, params| ubcf::fit_real(data, params)),
    ));
    entries.push((
        AlgorithmSpec::new(
            "IBCF",
            Real,
            "Item-based collaborative filtering over a k-truncated item similarity matrix.",
            json!({
                "k": 30,
                "method": "cosine",
                "normalize": "center",
                "min_matching_items": 0,
                "drop_nonpositive": true,
                "seed": null
            }),
        ),
        Box::new(|_reg, data, params| ibcf::fit_real(data, params)),
    ));
    entries.push((
        AlgorithmSpec::new(
            "SVD",
            Real,
            "Rank-k SVD approximation with column-mean imputation of missing cells.",
            json!({ "k": 10, "maxiter": 100, "normalize": "center", "seed": null }),
        ),
        Box::new(|_reg, data, params| svd::fit_real(data, params)),
    ));
    entries.push((
        AlgorithmSpec::new(
            "HYBRID",
            Real,
            "Combines child recommenders by weighted averages of min-max scaled scores.",
            json!({ "recommenders": null, "weights": null, "seed": null }),
        ),
        Box::new(hybrid::fit),
    ));

    entries.push((
        AlgorithmSpec::new(
            "RANDOM",
            Binary,
            "Uniformly random ranking of the user's unknown items; baseline.",
            json!({ "seed": null }),
        ),
        Box::new(|_reg, data, params| random::fit_binary(data, params)),
    ));
    entries.push((
        AlgorithmSpec::new(
            "POPULAR",
            Binary,
            "Ranks items by how many users have them; scores are usage fractions.",
            json!({ "seed": null }),
        ),
        Box::new(|_reg, data, params| popular::fit_binary(data, params)),
    ));
    entries.push((
        AlgorithmSpec::new(
            "UBCF",
            Binary,
            "User-based collaborative filtering with Jaccard neighborhoods over 0-1 profiles.",
            json!({
                "method": "jaccard",
                "nn": 25,
                "weighted": true,
                "min_matching_items": 0,
                "seed": null
            }),
        ),
        Box::new(|_reg, data, params| ubcf::fit_binary(data, params)),
    ));
    entries.push((
        AlgorithmSpec::new(
            "IBCF",
            Binary,
            "Item-based collaborative filtering: sums Jaccard similarities between candidate and basket items.",
            json!({ "k": 30, "method": "jaccard", "min_matching_items": 0, "seed": null }),
        ),
        Box::new(|_reg, data, params| ibcf::fit_binary(data, params)),
    ));
    entries.push((
        AlgorithmSpec::new(
            "AR",
            Binary,
            "Association rules mined from user baskets; recommends right-hand sides of matching rules by confidence.",
            json!({ "support": 0.1, "confidence": 0.8, "maxlen": 3, "seed": null }),
        ),
        Box::new(|_reg, data, params| ar::fit(data, params)),
    ));
    entries.push((
        AlgorithmSpec::new(
            "HYBRID",
            Binary,
            "Combines child recommenders by weighted averages of min-max scaled scores.",
            json!({ "recommenders": null, "weights": null, "seed": null }),
        ),
        Box::new(hybrid::fit),
    ));

    entries
}
