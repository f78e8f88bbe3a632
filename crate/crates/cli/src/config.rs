//! Experiment configuration: a JSON file describing the dataset, the
//! evaluation scheme, and the algorithms to compare. Reruns with an
//! identical config produce byte-identical result files.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use reclab_core::evaluate::SchemeMethod;
use reclab_core::recommend::ParamMap;
use reclab_core::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: DatasetConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binarize: Option<BinarizeConfig>,
    pub scheme: SchemeConfig,
    pub algorithms: Vec<AlgorithmEntry>,
    /// `topNList` or `ratings`.
    pub mode: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n_values: Vec<usize>,
    pub output: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub path: PathBuf,
    /// `tuples` or `dense`.
    pub format: String,
    /// `real` or `binary`.
    pub kind: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BinarizeConfig {
    pub min_rating: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    /// `split`, `cross` or `bootstrap`.
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runs: Option<usize>,
    pub given: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub good_rating: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub name: String,
    #[serde(default, skip_serializing_if = "ParamMap::is_empty")]
    pub params: ParamMap,
}

impl SchemeConfig {
    pub fn method(&self) -> Result<SchemeMethod> {
        match self.method.as_str() {
            "split" => {
                let train = self.train.ok_or_else(|| {
                    Error::InvalidArgument("split scheme requires `train`".into())
                })?;
                Ok(SchemeMethod::Split { train })
            }
            "cross" => {
                let k = self
                    .k
                    .ok_or_else(|| Error::InvalidArgument("cross scheme requires `k`".into()))?;
                Ok(SchemeMethod::Cross { k })
            }
            "bootstrap" => Ok(SchemeMethod::Bootstrap {
                train_size: self.train_size,
            }),
            other => Err(Error::InvalidArgument(format!(
                "unknown scheme method `{other}`"
            ))),
        }
    }
}

impl ExperimentConfig {
    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidArgument(format!("config {}: {e}", path.display())))
    }
}
