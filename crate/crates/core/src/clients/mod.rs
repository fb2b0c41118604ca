//! Contracts for the three external services (generator, SRL predictor, LM
//! scorer), an HTTP implementation, and deterministic in-process mocks.

mod config;
mod http;
mod mock;

use serde::{Deserialize, Serialize};

use crate::srl::SrlSentence;

pub use config::{ClientConfig, PartialConfig};
pub use http::HttpClient;
pub use mock::{mock_generate, mock_generate_output, placeholder, srl_from_tagged, MockGenerator, MockScorer, MockSrl, FILLER};

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error("request {request_id} failed after {attempts} attempt(s): {message}")]
    Transport { request_id: String, attempts: u32, message: String },
    #[error("request {request_id}: backend answered HTTP {status}")]
    Status { request_id: String, status: u16 },
    #[error("request {request_id}: malformed response: {message}")]
    Schema { request_id: String, message: String },
    #[error("no {0} backend configured")]
    NotConfigured(&'static str),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerateRequest {
    pub prompt: String,
    pub n_beams: u32,
    pub no_repeat_bigrams: bool,
    #[serde(default)]
    pub banned_phrases: Vec<String>,
    pub max_candidates: u32,
}

impl GenerateRequest {
    /// Beam search of width 10 with repeated bigrams blocked, one candidate.
    pub fn new(prompt: impl Into<String>) -> Self {
        GenerateRequest {
            prompt: prompt.into(),
            n_beams: 10,
            no_repeat_bigrams: true,
            banned_phrases: Vec::new(),
            max_candidates: 1,
        }
    }

    pub fn validate(&self) -> Result<(), ClientError> {
        if self.n_beams == 0 {
            return Err(ClientError::InvalidRequest("n_beams must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreResponse {
    pub loss: f64,
    pub perplexity: f64,
}

impl ScoreResponse {
    pub fn from_loss(loss: f64) -> Option<Self> {
        (loss.is_finite() && loss > 0.0).then(|| ScoreResponse { loss, perplexity: loss.exp() })
    }
}

pub trait Generator: Send + Sync {
    /// Up to `max_candidates` generations, best first.
    fn generate(&self, request: &GenerateRequest) -> Result<Vec<String>, ClientError>;
}

pub trait SrlPredictor: Send + Sync {
    fn predict(&self, text: &str) -> Result<SrlSentence, ClientError>;
}

pub trait Scorer: Send + Sync {
    /// One response per text, in order.
    fn score(&self, texts: &[String]) -> Result<Vec<ScoreResponse>, ClientError>;
}
