//! `facetnav.toml` plus environment overrides.
//!
//! ```toml
//! port = 8080
//! data_dir = "topics"
//!
//! [summarizer]
//! url = "http://localhost:9000"
//! timeout_ms = 10000
//! token_budget = 1024
//! output_tokens = 100
//! cache_capacity = 1024
//!
//! [clustering]
//! cd_merge_threshold = 0.5
//! ```

use std::path::{Path, PathBuf};

use facetnav_core::{ClusteringConfig, SummarySettings};
use serde::Deserialize;

use crate::error::CliError;

pub const DEFAULT_CONFIG_FILE: &str = "facetnav.toml";
pub const DEFAULT_PORT: u16 = 8080;
pub const DEFAULT_TIMEOUT_MS: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub port: u16,
    pub data_dir: Option<PathBuf>,
    pub ui_dir: Option<PathBuf>,
    pub summarizer: SummarizerConfig,
    pub clustering: ClusteringConfig,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            port: DEFAULT_PORT,
            data_dir: None,
            ui_dir: None,
            summarizer: SummarizerConfig::default(),
            clustering: ClusteringConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default)]
pub struct SummarizerConfig {
    /// Base URL of an external summarizer; the fallback is used when unset.
    pub url: Option<String>,
    pub timeout_ms: u64,
    #[serde(flatten)]
    pub settings: SummarySettings,
}

impl Default for SummarizerConfig {
    fn default() -> Self {
        Self {
            url: None,
            timeout_ms: DEFAULT_TIMEOUT_MS,
            settings: SummarySettings::default(),
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))
    }

    /// Reads `path`, or `facetnav.toml` in the working directory when it
    /// exists, then applies environment overrides.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let mut config = match path {
            Some(p) => Self::read(p)?,
            None if Path::new(DEFAULT_CONFIG_FILE).is_file() => Self::read(Path::new(DEFAULT_CONFIG_FILE))?,
            None => Self::default(),
        };
        config.apply_env(|k| std::env::var(k).ok())?;
        config.clustering.validate()?;
        Ok(config)
    }

    fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// `SUMMARIZER_URL` (empty disables the external backend) and
    /// `SUMMARIZER_TIMEOUT_MS`.
    pub fn apply_env(&mut self, var: impl Fn(&str) -> Option<String>) -> Result<(), CliError> {
        if let Some(url) = var("SUMMARIZER_URL") {
            self.summarizer.url = Some(url).filter(|u| !u.trim().is_empty());
        }
        if let Some(ms) = var("SUMMARIZER_TIMEOUT_MS") {
            self.summarizer.timeout_ms = ms
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("SUMMARIZER_TIMEOUT_MS: not a number: {ms:?}")))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use facetnav_core::InputOrder;

    #[test]
    fn defaults_when_empty() {
        assert_eq!(Config::parse("").unwrap(), Config::default());
    }

    #[test]
    fn nested_tables() {
        let c = Config::parse(
            r#"
            port = 9001
            data_dir = "topics"
            [summarizer]
            url = "http://localhost:9000"
            output_tokens = 60
            input_order = "document"
            [clustering]
            cd_merge_threshold = 0.7
            "#,
        )
        .unwrap();
        assert_eq!(c.port, 9001);
        assert_eq!(c.data_dir.as_deref(), Some(Path::new("topics")));
        assert_eq!(c.summarizer.url.as_deref(), Some("http://localhost:9000"));
        assert_eq!(c.summarizer.timeout_ms, DEFAULT_TIMEOUT_MS);
        assert_eq!(c.summarizer.settings.output_tokens, 60);
        assert_eq!(c.summarizer.settings.token_budget, 1024);
        assert_eq!(c.summarizer.settings.input_order, InputOrder::Document);
        assert_eq!(c.clustering.cd_merge_threshold, 0.7);
        assert_eq!(c.clustering.alignment_threshold, 0.5);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(Config::parse("prot = 1").is_err());
    }

    #[test]
    fn env_overrides() {
        let mut c = Config::parse("[summarizer]\nurl = \"http://a\"").unwrap();
        c.apply_env(|k| match k {
            "SUMMARIZER_URL" => Some("http://b".into()),
            "SUMMARIZER_TIMEOUT_MS" => Some("250".into()),
            _ => None,
        })
        .unwrap();
        assert_eq!(c.summarizer.url.as_deref(), Some("http://b"));
        assert_eq!(c.summarizer.timeout_ms, 250);

        c.apply_env(|k| (k == "SUMMARIZER_URL").then(String::new)).unwrap();
        assert_eq!(c.summarizer.url, None);
        assert!(c.apply_env(|_| Some("soon".into())).is_err());
    }
}
