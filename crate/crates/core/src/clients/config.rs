use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};

/// Resolved backend settings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClientConfig {
    pub gen_url: Option<String>,
    pub srl_url: Option<String>,
    pub score_url: Option<String>,
    pub timeout: Duration,
    /// Extra attempts after the first failed one.
    pub retries: u32,
    pub n_beams: u32,
    pub no_repeat_bigrams: bool,
}

impl Default for ClientConfig {
    fn default() -> Self {
        ClientConfig {
            gen_url: None,
            srl_url: None,
            score_url: None,
            timeout: Duration::from_secs(30),
            retries: 2,
            n_beams: 10,
            no_repeat_bigrams: true,
        }
    }
}

/// One layer of settings (environment, flags or config file); unset
/// fields fall through to the layer below.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub gen_url: Option<String>,
    pub srl_url: Option<String>,
    pub score_url: Option<String>,
    pub timeout_ms: Option<u64>,
    pub retries: Option<u32>,
    pub n_beams: Option<u32>,
    pub no_repeat_bigrams: Option<bool>,
}

impl PartialConfig {
    /// Reads `TAILOR_GEN_URL`, `TAILOR_SRL_URL`, `TAILOR_SCORE_URL`,
    /// `TAILOR_TIMEOUT_MS` and `TAILOR_RETRIES` through `lookup`.
    pub fn from_env_with(lookup: impl Fn(&str) -> Option<String>) -> Result<Self, String> {
        let num = |key: &str| -> Result<Option<u64>, String> {
            lookup(key).map(|v| v.trim().parse().map_err(|_| format!("{key}={v:?} is not a number"))).transpose()
        };
        Ok(PartialConfig {
            gen_url: lookup("TAILOR_GEN_URL"),
            srl_url: lookup("TAILOR_SRL_URL"),
            score_url: lookup("TAILOR_SCORE_URL"),
            timeout_ms: num("TAILOR_TIMEOUT_MS")?,
            retries: num("TAILOR_RETRIES")?.map(|r| r as u32),
            n_beams: None,
            no_repeat_bigrams: None,
        })
    }

    pub fn from_env() -> Result<Self, String> {
        Self::from_env_with(|k| std::env::var(k).ok().filter(|v| !v.is_empty()))
    }

    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::from_toml(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn apply(&self, base: &mut ClientConfig) {
        macro_rules! take {
            ($($field:ident),*) => { $(if let Some(v) = &self.$field { base.$field = Some(v.clone()); })* };
        }
        take!(gen_url, srl_url, score_url);
        if let Some(ms) = self.timeout_ms {
            base.timeout = Duration::from_millis(ms);
        }
        if let Some(r) = self.retries {
            base.retries = r;
        }
        if let Some(n) = self.n_beams {
            base.n_beams = n;
        }
        if let Some(b) = self.no_repeat_bigrams {
            base.no_repeat_bigrams = b;
        }
    }
}

impl ClientConfig {
    /// Layers settings: defaults, then environment, then flags, then the
    /// config file (which wins).
    pub fn resolve(env: &PartialConfig, flags: &PartialConfig, file: Option<&PartialConfig>) -> ClientConfig {
        let mut cfg = ClientConfig::default();
        env.apply(&mut cfg);
        flags.apply(&mut cfg);
        if let Some(file) = file {
            file.apply(&mut cfg);
        }
        cfg
    }
}
