//! Pipeline configuration, read from TOML.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::schema::read_text;
use super::IoError;
use crate::game::Map;
use crate::sim::{BatchConfig, CommLevel, DEFAULT_ROUNDS, DEFAULT_TURNS};

fn default_games() -> usize {
    10
}

fn default_levels() -> Vec<CommLevel> {
    CommLevel::TALKING.to_vec()
}

fn default_rounds() -> u32 {
    DEFAULT_ROUNDS
}

fn default_turns() -> u32 {
    DEFAULT_TURNS
}

/// Everything a run reads or writes. There is no default seed: runs are
/// reproducible only if the seed is written down.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    pub out: PathBuf,
    #[serde(default)]
    pub map: Option<PathBuf>,
    #[serde(default)]
    pub corpora: Vec<PathBuf>,
    #[serde(default = "default_games")]
    pub games_per_level: usize,
    #[serde(default = "default_levels")]
    pub levels: Vec<CommLevel>,
    #[serde(default = "default_rounds")]
    pub rounds: u32,
    #[serde(default = "default_turns")]
    pub turns: u32,
}

impl PipelineConfig {
    /// Parses and checks a config. Relative paths are taken from the
    /// config file's directory; every input path must exist.
    pub fn load(path: &Path) -> Result<PipelineConfig, IoError> {
        let base = path.parent().unwrap_or(Path::new("."));
        PipelineConfig::parse(&read_text(path)?, base)
    }

    pub fn parse(text: &str, base: &Path) -> Result<PipelineConfig, IoError> {
        let mut c: PipelineConfig =
            toml::from_str(text).map_err(|e| IoError::Config(e.message().to_string()))?;
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut c.out);
        c.map.as_mut().map(fix);
        c.corpora.iter_mut().for_each(fix);
        for p in c.map.iter().chain(&c.corpora) {
            if !p.exists() {
                return Err(IoError::Config(format!("{} does not exist", p.display())));
            }
        }
        if c.games_per_level == 0 {
            return Err(IoError::Config("games_per_level must be at least 1".into()));
        }
        if c.levels.is_empty() {
            return Err(IoError::Config("no communication levels".into()));
        }
        Ok(c)
    }

    /// The configured map, or the standard board.
    pub fn load_map(&self) -> Result<Arc<Map>, IoError> {
        match &self.map {
            None => Ok(Map::standard()),
            Some(p) => Map::load(p)
                .map(Arc::new)
                .map_err(|e| IoError::Config(format!("{}: {e}", p.display()))),
        }
    }

    pub fn batch(&self) -> BatchConfig {
        BatchConfig {
            games_per_level: self.games_per_level,
            levels: self.levels.clone(),
            turns: self.turns,
            rounds: self.rounds,
            ..BatchConfig::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_is_required() {
        let e = PipelineConfig::parse("out = \"x\"\n", Path::new(".")).unwrap_err();
        assert!(e.to_string().contains("seed"), "{e}");
    }

    #[test]
    fn defaults_and_relative_paths() {
        let c = PipelineConfig::parse("seed = 7\nout = \"runs\"\n", Path::new("/tmp/cfg")).unwrap();
        assert_eq!(c.out, PathBuf::from("/tmp/cfg/runs"));
        assert_eq!((c.games_per_level, c.turns, c.rounds), (10, 14, 3));
        assert_eq!(c.levels.len(), 3);
    }

    #[test]
    fn missing_inputs_rejected() {
        let text = "seed = 1\nout = \"o\"\ncorpora = [\"nowhere.jsonl\"]\n";
        assert!(matches!(
            PipelineConfig::parse(text, Path::new("/nonexistent")),
            Err(IoError::Config(_))
        ));
    }
}
