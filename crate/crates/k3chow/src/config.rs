//! Run configuration: the surface model plus verifier limits, read from a
//! declarative TOML file. Gram entries are written as rational strings
//! (`"2"`, `"-1/2"`) so the file stays exact.

use crate::rational::parse_q;
use crate::surface::SurfaceModel;
use crate::Error;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    #[serde(default)]
    pub surface: SurfaceSection,
    #[serde(default)]
    pub run: RunSection,
}

fn default_schema_version() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSection {
    pub ns_rank: usize,
    /// Row-major Gram matrix of the NS lattice, entries as rational strings.
    pub gram: Vec<Vec<String>>,
}

impl Default for SurfaceSection {
    fn default() -> Self {
        SurfaceSection {
            ns_rank: 1,
            gram: vec![vec!["2".into()]],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default = "default_term_ceiling")]
    pub term_ceiling: usize,
    /// Worker count for batch runs; 0 means all cores.
    #[serde(default)]
    pub parallelism: usize,
    #[serde(default = "default_output")]
    pub output: String,
}

fn default_term_ceiling() -> usize {
    4_000_000
}

fn default_output() -> String {
    "report.json".into()
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            term_ceiling: default_term_ceiling(),
            parallelism: 0,
            output: default_output(),
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schema_version: 1,
            surface: SurfaceSection::default(),
            run: RunSection::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<RunConfig, Error> {
        let cfg: RunConfig =
            toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.schema_version != 1 {
            return Err(Error::Config(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        if self.run.term_ceiling == 0 {
            return Err(Error::Config("term_ceiling must be at least 1".into()));
        }
        self.surface_model()?;
        Ok(())
    }

    /// Builds and checks the surface model.
    pub fn surface_model(&self) -> Result<Arc<SurfaceModel>, Error> {
        if self.surface.gram.len() != self.surface.ns_rank {
            return Err(Error::Config(format!(
                "gram matrix has {} rows, ns_rank is {}",
                self.surface.gram.len(),
                self.surface.ns_rank
            )));
        }
        let gram = self
            .surface
            .gram
            .iter()
            .map(|row| row.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        SurfaceModel::new(gram)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trip() {
        let cfg = RunConfig::default();
        let s = toml::to_string(&cfg).unwrap();
        let back = RunConfig::from_toml_str(&s).unwrap();
        assert_eq!(cfg, back);
        assert_eq!(back.surface_model().unwrap().ns_rank(), 1);
    }

    #[test]
    fn partial_files_fill_defaults() {
        let cfg = RunConfig::from_toml_str("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        let cfg2 = RunConfig::from_toml_str("[run]\nterm_ceiling = 10\n").unwrap();
        assert_eq!(cfg2.run.term_ceiling, 10);
        assert_eq!(cfg2.surface, SurfaceSection::default());
    }

    #[test]
    fn rejects_bad_gram() {
        let bad = r#"
[surface]
ns_rank = 2
gram = [["1", "0"], ["0", "x"]]
"#;
        assert!(RunConfig::from_toml_str(bad).is_err());
        let degenerate = r#"
[surface]
ns_rank = 1
gram = [["0"]]
"#;
        assert!(RunConfig::from_toml_str(degenerate).is_err());
    }

    #[test]
    fn rational_gram_entries() {
        let s = r#"
[surface]
ns_rank = 2
gram = [["0", "1/2"], ["1/2", "0"]]
"#;
        let cfg = RunConfig::from_toml_str(s).unwrap();
        let m = cfg.surface_model().unwrap();
        assert_eq!(m.ns_rank(), 2);
    }
}
