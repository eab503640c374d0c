//! Run configuration, read from a `key = value` file and overridden by
//! flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use d2color::coloring::brute::DEFAULT_EDGE_GUARD;
use d2color::coloring::Engine;
use d2color::reduction::DEFAULT_NAE_GUARD;

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Decision limit for the solver; absent means unlimited.
    pub node_budget: Option<u64>,
    pub edge_guard: usize,
    pub nae_guard: usize,
    /// Directory with `fanout.gadget`, `fanout.cert` and so on. Absent
    /// means the gadgets built into the binary.
    pub gadget_dir: Option<PathBuf>,
    /// `learning` or `backjump`.
    pub engine: String,
    /// Whether `encode-cnf` writes the variable map as comments.
    pub cnf_comments: bool,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            node_budget: None,
            edge_guard: DEFAULT_EDGE_GUARD,
            nae_guard: DEFAULT_NAE_GUARD,
            gadget_dir: None,
            engine: "learning".into(),
            cnf_comments: true,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        RunConfig::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<RunConfig> {
        Ok(toml::from_str(text)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.node_budget == Some(0) {
            bail!("node_budget must be positive");
        }
        if self.edge_guard == 0 || self.nae_guard == 0 {
            bail!("guards must be positive");
        }
        if let Some(dir) = &self.gadget_dir {
            if !dir.is_dir() {
                bail!("gadget_dir {} is not a directory", dir.display());
            }
        }
        self.engine()?;
        Ok(())
    }

    pub fn engine(&self) -> Result<Engine> {
        match self.engine.as_str() {
            "learning" => Ok(Engine::Learning),
            "backjump" => Ok(Engine::Backjump),
            other => bail!("unknown engine `{other}`, expected `learning` or `backjump`"),
        }
    }
}
