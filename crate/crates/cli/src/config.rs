//! Run configuration: optional TOML file, flag overrides, the config hash and output headers.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use malle_core::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const TOOL: &str = "malle-lab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Keys accepted in a `--config` file. Command-line flags take precedence.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub registry: Option<PathBuf>,
    pub assume_l_torsion: Option<bool>,
    pub base: Option<String>,
    pub budget: Option<u64>,
    pub json: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Precondition(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| {
            let (line, column) = e.span().map(|s| line_col(&text, s.start)).unwrap_or((1, 1));
            Error::Parse {
                line,
                column,
                message: format!("{}: {}", path.display(), e.message()),
            }
        })
    }

    /// Relative paths in the file are taken relative to the file itself.
    pub fn rebase(mut self, file: &Path) -> Self {
        if let (Some(reg), Some(dir)) = (&self.registry, file.parent()) {
            if reg.is_relative() {
                self.registry = Some(dir.join(reg));
            }
        }
        self
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// The resolved, result-affecting part of a run. Worker counts, budgets and
/// output locations are left out so they do not change the hash.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: &str, seed: u64) -> Self {
        RunConfig {
            command: command.to_string(),
            params: BTreeMap::new(),
            seed,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.params
            .insert(key.to_string(), serde_json::to_value(value).expect("plain data"));
        self
    }

    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("plain data");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn header_line(&self) -> String {
        format!("{TOOL} {VERSION} config-sha256={} seed={}", self.hash(), self.seed)
    }

    pub fn header_json(&self) -> Value {
        serde_json::json!({
            "tool": TOOL,
            "version": VERSION,
            "config_sha256": self.hash(),
            "seed": self.seed,
            "config": self,
        })
    }

    /// `{"header": ..., "result": payload}` with sorted keys.
    pub fn wrap_json(&self, payload: Value) -> String {
        let doc = serde_json::json!({ "header": self.header_json(), "result": payload });
        let mut s = serde_json::to_string_pretty(&doc).expect("plain data");
        s.push('\n');
        s
    }
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
    Ok(hex::encode(Sha256::digest(bytes)))
}

/// Absolute path whose parent directory exists.
pub fn resolve_output(path: &Path) -> Result<PathBuf> {
    let abs = std::path::absolute(path)?;
    match abs.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => Err(Error::Precondition(format!(
            "output directory {} does not exist",
            dir.display()
        ))),
        _ => Ok(abs),
    }
}

pub fn resolve_input(path: &Path) -> Result<PathBuf> {
    let abs = std::path::absolute(path)?;
    if !abs.is_file() {
        return Err(Error::Precondition(format!("input file {} not found", abs.display())));
    }
    Ok(abs)
}

/// Writes to a file when a path is given, else to stdout.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
            so.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_ignores_insertion_order() {
        let mut a = RunConfig::new("census", 1);
        a.set("degree", 3).set("max_disc", 100);
        let mut b = RunConfig::new("census", 1);
        b.set("max_disc", 100).set("degree", 3);
        assert_eq!(a.hash(), b.hash());
        b.set("degree", 4);
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn seed_changes_the_header() {
        let a = RunConfig::new("table", 0);
        let b = RunConfig::new("table", 7);
        assert_ne!(a.header_line(), b.header_line());
        assert!(a.header_line().starts_with("malle-lab "));
    }

    #[test]
    fn config_errors_carry_positions() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, "seed = 3\nworkers = \"x\"\n").unwrap();
        match FileConfig::load(&p) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        std::fs::write(&p, "seed = 3\nbogus = 1\n").unwrap();
        assert!(FileConfig::load(&p).is_err());
        std::fs::write(&p, "seed = 3\nregistry = \"r.txt\"\n").unwrap();
        let c = FileConfig::load(&p).unwrap().rebase(&p);
        assert_eq!(c.seed, Some(3));
        assert_eq!(c.registry.unwrap(), dir.path().join("r.txt"));
    }
}
