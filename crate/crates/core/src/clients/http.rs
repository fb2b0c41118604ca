use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Duration;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{ClientConfig, ClientError, GenerateRequest, Generator, ScoreResponse, Scorer, SrlPredictor};
use crate::srl::{parse_record, CorpusRecord, SrlSentence};

static NEXT_ID: AtomicU64 = AtomicU64::new(0);

fn request_id() -> String {
    format!("tailor-{}-{}", std::process::id(), NEXT_ID.fetch_add(1, Ordering::Relaxed))
}

#[derive(Serialize)]
struct GenerateWire<'a> {
    request_id: &'a str,
    #[serde(flatten)]
    request: &'a GenerateRequest,
}

#[derive(Deserialize)]
struct GenerateReply {
    candidates: Vec<String>,
    #[serde(default)]
    constraints_honored: Option<bool>,
}

#[derive(Serialize)]
struct SrlWire<'a> {
    request_id: &'a str,
    text: &'a str,
}

#[derive(Serialize)]
struct ScoreWire<'a> {
    request_id: &'a str,
    texts: &'a [String],
}

#[derive(Deserialize)]
struct ScoreItem {
    loss: f64,
}

#[derive(Deserialize)]
struct ScoreReply {
    scores: Vec<ScoreItem>,
}

/// JSON-over-HTTP client for all three backends. Connections are pooled by
/// the shared agent; the client is cheap to share across threads.
pub struct HttpClient {
    agent: ureq::Agent,
    config: ClientConfig,
}

impl HttpClient {
    pub fn new(config: ClientConfig) -> Self {
        let agent = ureq::Agent::config_builder().timeout_global(Some(config.timeout)).http_status_as_error(false).build().into();
        HttpClient { agent, config }
    }

    pub fn config(&self) -> &ClientConfig {
        &self.config
    }

    fn post<Req: Serialize, Resp: DeserializeOwned>(&self, url: &str, id: &str, body: &Req) -> Result<Resp, ClientError> {
        let attempts = self.config.retries + 1;
        let mut last = String::new();
        for attempt in 1..=attempts {
            match self.agent.post(url).header("X-Request-Id", id).send_json(body) {
                Ok(mut resp) => {
                    let status = resp.status().as_u16();
                    if status >= 500 {
                        last = format!("HTTP {status}");
                    } else if status >= 400 {
                        return Err(ClientError::Status { request_id: id.to_string(), status });
                    } else {
                        return resp
                            .body_mut()
                            .read_json::<Resp>()
                            .map_err(|e| ClientError::Schema { request_id: id.to_string(), message: e.to_string() });
                    }
                }
                Err(e) => last = e.to_string(),
            }
            log::debug!("request {id} attempt {attempt}/{attempts} to {url} failed: {last}");
            if attempt < attempts {
                std::thread::sleep(Duration::from_millis(25 * u64::from(attempt)));
            }
        }
        Err(ClientError::Transport { request_id: id.to_string(), attempts, message: last })
    }
}

fn endpoint(base: &Option<String>, what: &'static str, path: &str) -> Result<String, ClientError> {
    let base = base.as_deref().ok_or(ClientError::NotConfigured(what))?;
    Ok(format!("{}{path}", base.trim_end_matches('/')))
}

impl Generator for HttpClient {
    fn generate(&self, request: &GenerateRequest) -> Result<Vec<String>, ClientError> {
        request.validate()?;
        if request.max_candidates == 0 {
            return Ok(Vec::new());
        }
        let url = endpoint(&self.config.gen_url, "generator", "/generate")?;
        let id = request_id();
        let reply: GenerateReply = self.post(&url, &id, &GenerateWire { request_id: &id, request })?;
        if reply.constraints_honored == Some(false) && !request.banned_phrases.is_empty() {
            log::warn!("request {id}: generator did not honor banned phrases");
        }
        let mut out = reply.candidates;
        out.truncate(request.max_candidates as usize);
        Ok(out)
    }
}

impl SrlPredictor for HttpClient {
    fn predict(&self, text: &str) -> Result<SrlSentence, ClientError> {
        let url = endpoint(&self.config.srl_url, "SRL", "/srl")?;
        let id = request_id();
        let record: CorpusRecord = self.post(&url, &id, &SrlWire { request_id: &id, text })?;
        let (sentence, warnings) =
            parse_record(record).map_err(|message| ClientError::Schema { request_id: id.clone(), message })?;
        for w in warnings {
            log::warn!("request {id}: {w}");
        }
        Ok(sentence)
    }
}

impl Scorer for HttpClient {
    fn score(&self, texts: &[String]) -> Result<Vec<ScoreResponse>, ClientError> {
        if texts.is_empty() {
            return Ok(Vec::new());
        }
        let url = endpoint(&self.config.score_url, "scorer", "/score")?;
        let id = request_id();
        let reply: ScoreReply = self.post(&url, &id, &ScoreWire { request_id: &id, texts })?;
        if reply.scores.len() != texts.len() {
            return Err(ClientError::Schema {
                request_id: id,
                message: format!("{} scores for {} texts", reply.scores.len(), texts.len()),
            });
        }
        reply
            .scores
            .iter()
            .map(|s| {
                ScoreResponse::from_loss(s.loss).ok_or_else(|| ClientError::Schema {
                    request_id: id.clone(),
                    message: format!("loss {} is not positive", s.loss),
                })
            })
            .collect()
    }
}
