//! TOML run configuration; command-line flags override file values.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};

/// Keys accepted in a config file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub problem: Option<String>,
    pub method: Option<String>,
    pub rule: Option<String>,
    pub alpha: Option<f64>,
    pub alpha2: Option<f64>,
    pub n_list: Option<Vec<usize>>,
    pub ni_offset: Option<usize>,
    pub newton_tol: Option<f64>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// `self` with every key set in `flags` replaced.
    pub fn overridden_by(self, flags: FileConfig) -> FileConfig {
        FileConfig {
            problem: flags.problem.or(self.problem),
            method: flags.method.or(self.method),
            rule: flags.rule.or(self.rule),
            alpha: flags.alpha.or(self.alpha),
            alpha2: flags.alpha2.or(self.alpha2),
            n_list: flags.n_list.or(self.n_list),
            ni_offset: flags.ni_offset.or(self.ni_offset),
            newton_tol: flags.newton_tol.or(self.newton_tol),
            out: flags.out.or(self.out),
        }
    }
}
