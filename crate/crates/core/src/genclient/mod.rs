//! Client for paraphrase generation backends.
//!
//! Wire protocol: `POST /generate` with
//! `{"text", "num_return", "top_p", "max_length", "seed"}` answers
//! `{"candidates": [..]}` on 200 or `{"error": ".."}` on 4xx/5xx;
//! `GET /health` answers `{"status": "ok"}`. Candidate order from the
//! backend is preserved as-is.

mod batch;
mod candidates;
mod transport;

use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use batch::{batch_generate, Failure, RunReport};
pub use candidates::{load_candidates_file, CandidateLine, CandidateLoad};
#[cfg(feature = "http")]
pub use transport::HttpTransport;
pub use transport::{HttpReply, Transport, TransportError};

/// Environment variable holding the backend base URL.
pub const BACKEND_URL_ENV: &str = "PARADECAY_BACKEND_URL";

#[derive(Debug, Error)]
pub enum GenError {
    #[error("backend unreachable after {attempts} attempts: {message}")]
    BackendUnreachable { attempts: u32, message: String },
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("backend error (HTTP {status}): {message}")]
    Backend { status: u16, message: String },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error(transparent)]
    Corpus(#[from] crate::corpusio::CorpusError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenerationParams {
    pub num_return: u32,
    pub top_p: f64,
    pub max_length: u32,
    pub seed: Option<u64>,
}

impl Default for GenerationParams {
    fn default() -> Self {
        Self {
            num_return: 10,
            top_p: 0.95,
            max_length: 512,
            seed: None,
        }
    }
}

impl GenerationParams {
    pub fn validate(&self) -> Result<(), GenError> {
        if self.num_return == 0 {
            return Err(GenError::InvalidRequest("num_return must be at least 1".into()));
        }
        if !(self.top_p > 0.0 && self.top_p <= 1.0) {
            return Err(GenError::InvalidRequest(format!(
                "top_p = {} is outside (0, 1]",
                self.top_p
            )));
        }
        if self.max_length == 0 {
            return Err(GenError::InvalidRequest("max_length must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateRequest {
    pub text: String,
    pub num_return: u32,
    pub top_p: f64,
    pub max_length: u32,
    pub seed: Option<u64>,
}

impl GenerateRequest {
    pub fn new(text: &str, params: &GenerationParams) -> Self {
        Self {
            text: text.to_string(),
            num_return: params.num_return,
            top_p: params.top_p,
            max_length: params.max_length,
            seed: params.seed,
        }
    }
}

#[derive(Debug, Deserialize)]
struct CandidatesBody {
    candidates: Vec<String>,
}

#[derive(Debug, Deserialize)]
struct ErrorBody {
    error: String,
}

/// Candidates for one text. `short` is set when the backend returned fewer
/// than requested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generation {
    pub candidates: Vec<String>,
    pub short: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub attempts: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            attempts: 3,
            base_delay: Duration::from_millis(500),
        }
    }
}

impl RetryPolicy {
    fn delay(&self, attempt: u32) -> Duration {
        self.base_delay * 2u32.saturating_pow(attempt)
    }
}

pub struct GenerationClient<T> {
    transport: T,
    retry: RetryPolicy,
}

enum Attempt {
    Done(Result<Generation, GenError>),
    Retry(GenError),
}

impl<T: Transport> GenerationClient<T> {
    pub fn new(transport: T) -> Self {
        Self {
            transport,
            retry: RetryPolicy::default(),
        }
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    pub fn health(&self) -> Result<(), GenError> {
        let reply = self.transport.get("/health").map_err(|e| GenError::BackendUnreachable {
            attempts: 1,
            message: e.0,
        })?;
        let v: serde_json::Value = serde_json::from_str(&reply.body)
            .map_err(|e| GenError::Protocol(format!("health body: {e}")))?;
        if reply.status == 200 && v["status"] == "ok" {
            Ok(())
        } else {
            Err(GenError::Backend {
                status: reply.status,
                message: reply.body,
            })
        }
    }

    fn attempt(&self, body: &str, num_return: u32) -> Attempt {
        let reply = match self.transport.post_json("/generate", body) {
            Ok(r) => r,
            Err(e) => {
                return Attempt::Retry(GenError::BackendUnreachable {
                    attempts: 0,
                    message: e.0,
                })
            }
        };
        match reply.status {
            200 => {
                let parsed: Result<CandidatesBody, _> = serde_json::from_str(&reply.body);
                Attempt::Done(match parsed {
                    Ok(b) => Ok(Generation {
                        short: b.candidates.len() < num_return as usize,
                        candidates: b.candidates,
                    }),
                    Err(e) => Err(GenError::Protocol(format!("bad /generate body: {e}"))),
                })
            }
            status @ 400..=599 => {
                let message = serde_json::from_str::<ErrorBody>(&reply.body)
                    .map(|b| b.error)
                    .unwrap_or_else(|_| reply.body.chars().take(200).collect());
                let err = GenError::Backend { status, message };
                if status >= 500 {
                    Attempt::Retry(err)
                } else {
                    Attempt::Done(Err(err))
                }
            }
            status => Attempt::Done(Err(GenError::Protocol(format!(
                "unexpected HTTP status {status}"
            )))),
        }
    }

    /// Requests candidates for `text`. Transport failures and 5xx replies are
    /// retried with exponential backoff.
    pub fn generate_paraphrases(
        &self,
        text: &str,
        params: &GenerationParams,
    ) -> Result<Generation, GenError> {
        params.validate()?;
        if text.trim().is_empty() {
            return Err(GenError::InvalidRequest("text is empty".into()));
        }
        let body = serde_json::to_string(&GenerateRequest::new(text, params))
            .expect("request serializes");
        let attempts = self.retry.attempts.max(1);
        let mut last = None;
        for attempt in 0..attempts {
            if attempt > 0 {
                thread::sleep(self.retry.delay(attempt - 1));
            }
            match self.attempt(&body, params.num_return) {
                Attempt::Done(result) => return result,
                Attempt::Retry(err) => last = Some(err),
            }
        }
        Err(match last {
            Some(GenError::BackendUnreachable { message, .. }) => {
                GenError::BackendUnreachable { attempts, message }
            }
            Some(other) => other,
            None => unreachable!("at least one attempt is made"),
        })
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    /// Transport answering from a closure over (call index, request body).
    pub(crate) struct ScriptedTransport<F> {
        pub calls: AtomicUsize,
        pub respond: F,
    }

    impl<F> ScriptedTransport<F>
    where
        F: Fn(usize, &str) -> Result<HttpReply, TransportError> + Send + Sync,
    {
        pub fn new(respond: F) -> Self {
            Self {
                calls: AtomicUsize::new(0),
                respond,
            }
        }
    }

    impl<F> Transport for ScriptedTransport<F>
    where
        F: Fn(usize, &str) -> Result<HttpReply, TransportError> + Send + Sync,
    {
        fn post_json(&self, _path: &str, body: &str) -> Result<HttpReply, TransportError> {
            let n = self.calls.fetch_add(1, Ordering::SeqCst);
            (self.respond)(n, body)
        }

        fn get(&self, _path: &str) -> Result<HttpReply, TransportError> {
            Ok(HttpReply {
                status: 200,
                body: r#"{"status":"ok"}"#.into(),
            })
        }
    }

    pub(crate) fn ok(candidates: &[String]) -> Result<HttpReply, TransportError> {
        Ok(HttpReply {
            status: 200,
            body: serde_json::json!({ "candidates": candidates }).to_string(),
        })
    }

    fn fast() -> RetryPolicy {
        RetryPolicy {
            attempts: 3,
            base_delay: Duration::from_millis(1),
        }
    }

    #[test]
    fn echoes_backend_order() {
        let cands: Vec<String> = (0..10).map(|i| format!("cand {i}")).collect();
        let c2 = cands.clone();
        let client = GenerationClient::new(ScriptedTransport::new(move |_, _| ok(&c2)));
        let g = client
            .generate_paraphrases("hello there", &GenerationParams::default())
            .unwrap();
        assert_eq!(g.candidates, cands);
        assert!(!g.short);
    }

    #[test]
    fn short_reply_is_flagged() {
        let client = GenerationClient::new(ScriptedTransport::new(|_, _| {
            ok(&(0..6).map(|i| i.to_string()).collect::<Vec<_>>())
        }));
        let g = client
            .generate_paraphrases("x", &GenerationParams::default())
            .unwrap();
        assert_eq!(g.candidates.len(), 6);
        assert!(g.short);
    }

    #[test]
    fn missing_candidates_is_protocol_error() {
        let client = GenerationClient::new(ScriptedTransport::new(|_, _| {
            Ok(HttpReply {
                status: 200,
                body: r#"{"outputs":[]}"#.into(),
            })
        }));
        let err = client
            .generate_paraphrases("x", &GenerationParams::default())
            .unwrap_err();
        assert!(matches!(err, GenError::Protocol(_)), "{err}");
    }

    #[test]
    fn request_body_matches_wire_format() {
        let client = GenerationClient::new(ScriptedTransport::new(|_, body| {
            assert_eq!(
                body,
                r#"{"text":"hi","num_return":10,"top_p":0.95,"max_length":512,"seed":null}"#
            );
            ok(&[])
        }));
        client
            .generate_paraphrases("hi", &GenerationParams::default())
            .unwrap();
    }

    #[test]
    fn client_errors_are_not_retried() {
        let t = ScriptedTransport::new(|_, _| {
            Ok(HttpReply {
                status: 400,
                body: r#"{"error":"num_return must be positive"}"#.into(),
            })
        });
        let client = GenerationClient::new(&t).with_retry(fast());
        let err = client
            .generate_paraphrases("x", &GenerationParams::default())
            .unwrap_err();
        assert!(matches!(err, GenError::Backend { status: 400, .. }));
        assert_eq!(t.calls.load(Ordering::SeqCst), 1);
    }

    #[test]
    fn unreachable_after_retries() {
        let t = ScriptedTransport::new(|_, _| Err(TransportError("refused".into())));
        let client = GenerationClient::new(&t).with_retry(fast());
        let err = client
            .generate_paraphrases("x", &GenerationParams::default())
            .unwrap_err();
        assert!(matches!(err, GenError::BackendUnreachable { attempts: 3, .. }));
        assert_eq!(t.calls.load(Ordering::SeqCst), 3);
    }

    #[test]
    fn transient_failure_recovers() {
        let t = ScriptedTransport::new(|n, _| {
            if n == 0 {
                Ok(HttpReply {
                    status: 503,
                    body: r#"{"error":"busy"}"#.into(),
                })
            } else {
                ok(&["a".into()])
            }
        });
        let client = GenerationClient::new(&t).with_retry(fast());
        let params = GenerationParams {
            num_return: 1,
            ..Default::default()
        };
        assert_eq!(client.generate_paraphrases("x", &params).unwrap().candidates, ["a"]);
    }

    #[test]
    fn backoff_doubles() {
        let p = RetryPolicy::default();
        assert_eq!(p.delay(0), Duration::from_millis(500));
        assert_eq!(p.delay(1), Duration::from_millis(1000));
    }

    #[test]
    fn params_validation() {
        assert!(GenerationParams::default().validate().is_ok());
        for bad in [
            GenerationParams { num_return: 0, ..Default::default() },
            GenerationParams { top_p: 0.0, ..Default::default() },
            GenerationParams { top_p: 1.5, ..Default::default() },
        ] {
            assert!(bad.validate().is_err());
        }
    }
}
