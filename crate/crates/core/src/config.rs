//! Optional engine configuration file (TOML `key = value` pairs).

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Deserialize;

use crate::rdf::Iri;
use crate::reasoner::ReasonerConfig;

pub const DEFAULT_SESSION_TTL_HOURS: f64 = 24.0;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config {path}: {message}")]
    Invalid { path: PathBuf, message: String },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    part_of_iri: Option<String>,
    has_part_iri: Option<String>,
    inherit_inverse: Option<bool>,
    root_class_iri: Option<String>,
    cache_dir: Option<PathBuf>,
    session_ttl_hours: Option<f64>,
    auxiliary_categories: Option<Vec<String>>,
    cors_origins: Option<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub reasoner: ReasonerConfig,
    pub root_class: Option<Iri>,
    pub cache_dir: PathBuf,
    pub session_ttl: Duration,
    /// Extra classes offered as annotation categories.
    pub auxiliary_categories: Vec<Iri>,
    pub cors_origins: Vec<String>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            reasoner: ReasonerConfig::default(),
            root_class: None,
            cache_dir: default_cache_dir(),
            session_ttl: Duration::from_secs_f64(DEFAULT_SESSION_TTL_HOURS * 3600.0),
            auxiliary_categories: Vec::new(),
            cors_origins: Vec::new(),
        }
    }
}

/// `$XDG_CACHE_HOME/mcforge`, then `~/.cache/mcforge`, then the temp dir.
pub fn default_cache_dir() -> PathBuf {
    let non_empty = |key: &str| std::env::var_os(key).filter(|v| !v.is_empty()).map(PathBuf::from);
    if let Some(xdg) = non_empty("XDG_CACHE_HOME") {
        return xdg.join("mcforge");
    }
    if let Some(home) = non_empty("HOME") {
        return home.join(".cache").join("mcforge");
    }
    std::env::temp_dir().join("mcforge-cache")
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        Config::parse(&text).map_err(|message| ConfigError::Invalid {
            path: path.to_owned(),
            message,
        })
    }

    pub fn parse(text: &str) -> Result<Config, String> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| e.message().to_owned())?;
        let iri = |key: &str, v: String| Iri::new(v).map_err(|e| format!("{key}: {e}"));
        let mut config = Config::default();
        if let Some(v) = file.part_of_iri {
            config.reasoner.part_of = iri("part_of_iri", v)?;
        }
        if let Some(v) = file.has_part_iri {
            config.reasoner.has_part = Some(iri("has_part_iri", v)?);
        }
        if let Some(v) = file.inherit_inverse {
            config.reasoner.inherit_inverse = v;
        }
        if let Some(v) = file.root_class_iri {
            config.root_class = Some(iri("root_class_iri", v)?);
        }
        if let Some(v) = file.cache_dir {
            config.cache_dir = v;
        }
        if let Some(hours) = file.session_ttl_hours {
            if !(hours.is_finite() && hours > 0.0) {
                return Err(format!("session_ttl_hours must be positive, got {hours}"));
            }
            config.session_ttl = Duration::from_secs_f64(hours * 3600.0);
        }
        if let Some(v) = file.auxiliary_categories {
            config.auxiliary_categories = v
                .into_iter()
                .map(|c| iri("auxiliary_categories", c))
                .collect::<Result<_, _>>()?;
        }
        if let Some(v) = file.cors_origins {
            config.cors_origins = v;
        }
        Ok(config)
    }
}
