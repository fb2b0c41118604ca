use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Result};
use clap::Args;
use tailor_core::clients::{
    ClientConfig, ClientError, GenerateRequest, Generator, HttpClient, MockGenerator, MockScorer, MockSrl, PartialConfig, Scorer,
    SrlPredictor,
};
use tailor_core::prompt::{serialize, PromptSpec};

#[derive(Args, Debug, Clone, Default)]
pub struct BackendArgs {
    /// Use the in-process mock generator, SRL predictor and scorer.
    #[arg(long, global = true)]
    pub mock: bool,
    /// TOML file with gen_url, srl_url, score_url, timeout_ms, retries,
    /// n_beams, no_repeat_bigrams. Overrides flags and environment.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Generator base URL (POST /generate). Env: TAILOR_GEN_URL.
    #[arg(long, global = true)]
    pub gen_url: Option<String>,
    /// SRL predictor base URL (POST /srl). Env: TAILOR_SRL_URL.
    #[arg(long, global = true)]
    pub srl_url: Option<String>,
    /// Scorer base URL (POST /score). Env: TAILOR_SCORE_URL.
    #[arg(long, global = true)]
    pub score_url: Option<String>,
    /// Per-request timeout. Env: TAILOR_TIMEOUT_MS.
    #[arg(long, global = true)]
    pub timeout_ms: Option<u64>,
    /// Extra attempts after a transport error or 5xx. Env: TAILOR_RETRIES.
    #[arg(long, global = true)]
    pub retries: Option<u32>,
    /// Beam width requested from the generator.
    #[arg(long, global = true)]
    pub beams: Option<u32>,
}

pub struct Backends {
    pub generator: Option<Arc<dyn Generator>>,
    pub srl: Option<Arc<dyn SrlPredictor>>,
    pub scorer: Option<Arc<dyn Scorer>>,
    pub n_beams: u32,
    pub no_repeat_bigrams: bool,
}

impl Backends {
    pub fn from_args(args: &BackendArgs) -> Result<Self> {
        if args.mock {
            return Ok(Backends {
                generator: Some(Arc::new(MockGenerator)),
                srl: Some(Arc::new(MockSrl)),
                scorer: Some(Arc::new(MockScorer)),
                n_beams: args.beams.unwrap_or(10),
                no_repeat_bigrams: true,
            });
        }
        let env = match PartialConfig::from_env() {
            Ok(c) => c,
            Err(e) => bail!("environment: {e}"),
        };
        let flags = PartialConfig {
            gen_url: args.gen_url.clone(),
            srl_url: args.srl_url.clone(),
            score_url: args.score_url.clone(),
            timeout_ms: args.timeout_ms,
            retries: args.retries,
            n_beams: args.beams,
            no_repeat_bigrams: None,
        };
        let file = match &args.config {
            Some(p) => match PartialConfig::load(p) {
                Ok(c) => Some(c),
                Err(e) => bail!("config {}: {e}", p.display()),
            },
            None => None,
        };
        let config = ClientConfig::resolve(&env, &flags, file.as_ref());
        if config.n_beams == 0 {
            bail!("n_beams must be at least 1");
        }
        let (n_beams, no_repeat_bigrams) = (config.n_beams, config.no_repeat_bigrams);
        let (has_gen, has_srl, has_score) = (config.gen_url.is_some(), config.srl_url.is_some(), config.score_url.is_some());
        let http = Arc::new(HttpClient::new(config));
        Ok(Backends {
            generator: has_gen.then(|| http.clone() as Arc<dyn Generator>),
            srl: has_srl.then(|| http.clone() as Arc<dyn SrlPredictor>),
            scorer: has_score.then(|| http.clone() as Arc<dyn Scorer>),
            n_beams,
            no_repeat_bigrams,
        })
    }

    pub fn generate(&self, prompt: &PromptSpec, candidates: u32, banned: &[String]) -> Result<Option<Vec<String>>, ClientError> {
        let Some(g) = &self.generator else { return Ok(None) };
        let request = GenerateRequest {
            prompt: serialize(prompt),
            n_beams: self.n_beams,
            no_repeat_bigrams: self.no_repeat_bigrams,
            banned_phrases: banned.to_vec(),
            max_candidates: candidates,
        };
        g.generate(&request).map(Some)
    }
}
