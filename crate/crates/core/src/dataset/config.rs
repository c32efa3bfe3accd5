use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::DatasetError;
use crate::imaging::DEFAULT_LAMBDA;

/// Traffic class name. Doubles as the class's directory name, so it must be a
/// single path component.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ClassLabel(String);

impl ClassLabel {
    pub fn new(name: impl Into<String>) -> Result<Self, DatasetError> {
        let name = name.into();
        if name.is_empty() {
            return Err(DatasetError::InvalidConfig("class label is empty".into()));
        }
        if name == "." || name == ".." || name.contains(['/', '\\', '\0']) {
            return Err(DatasetError::InvalidConfig(format!(
                "class label {name:?} is not a valid directory name"
            )));
        }
        Ok(Self(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for ClassLabel {
    type Error = DatasetError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        ClassLabel::new(s)
    }
}

impl From<ClassLabel> for String {
    fn from(c: ClassLabel) -> String {
        c.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputSpec {
    pub path: PathBuf,
    pub label: ClassLabel,
    /// Take at most this many packets, counted from the start of the trace.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_packets: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildConfig {
    pub output_dir: PathBuf,
    pub global_seed: u64,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(rename = "input", default)]
    pub inputs: Vec<InputSpec>,
}

fn default_lambda() -> f64 {
    DEFAULT_LAMBDA
}

impl BuildConfig {
    /// Parse TOML. Relative paths are resolved against `base_dir`.
    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self, DatasetError> {
        let mut cfg: BuildConfig = toml::from_str(text)?;
        cfg.output_dir = base_dir.join(&cfg.output_dir);
        for input in &mut cfg.inputs {
            input.path = base_dir.join(&input.path);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Load a TOML config file; relative paths are taken from the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, DatasetError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| DatasetError::io(path, e))?;
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        Self::from_toml_str(&text, base)
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        if self.inputs.is_empty() {
            return Err(DatasetError::InvalidConfig(
                "at least one [[input]] is required".into(),
            ));
        }
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(DatasetError::InvalidConfig(format!(
                "lambda must be finite and non-negative, got {}",
                self.lambda
            )));
        }
        let mut dirs: HashMap<String, &ClassLabel> = HashMap::new();
        for input in &self.inputs {
            if input.max_packets == Some(0) {
                return Err(DatasetError::InvalidConfig(format!(
                    "{}: max_packets must be >= 1",
                    input.path.display()
                )));
            }
            // Distinct labels that differ only by case would share a
            // directory on case-insensitive file systems.
            let key = input.label.as_str().to_lowercase();
            match dirs.get(&key) {
                Some(existing) if *existing != &input.label => {
                    return Err(DatasetError::DuplicateClassDirectoryCollision(
                        existing.to_string(),
                        input.label.to_string(),
                    ));
                }
                Some(_) => {}
                None => {
                    dirs.insert(key, &input.label);
                }
            }
        }
        Ok(())
    }

    /// Distinct labels in order of first appearance.
    pub fn classes(&self) -> Vec<ClassLabel> {
        let mut out: Vec<ClassLabel> = Vec::new();
        for input in &self.inputs {
            if !out.contains(&input.label) {
                out.push(input.label.clone());
            }
        }
        out
    }
}
