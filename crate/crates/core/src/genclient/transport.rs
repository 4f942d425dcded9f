use thiserror::Error;

/// Status and body of an HTTP exchange.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpReply {
    pub status: u16,
    pub body: String,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("transport failure: {0}")]
pub struct TransportError(pub String);

/// Minimal request surface the generation client needs. Implementations
/// must be shareable across worker threads.
pub trait Transport: Send + Sync {
    fn post_json(&self, path: &str, body: &str) -> Result<HttpReply, TransportError>;
    fn get(&self, path: &str) -> Result<HttpReply, TransportError>;
}

impl<T: Transport + ?Sized> Transport for &T {
    fn post_json(&self, path: &str, body: &str) -> Result<HttpReply, TransportError> {
        (**self).post_json(path, body)
    }

    fn get(&self, path: &str) -> Result<HttpReply, TransportError> {
        (**self).get(path)
    }
}

#[cfg(feature = "http")]
pub use http::HttpTransport;

#[cfg(feature = "http")]
mod http {
    use std::time::Duration;

    use super::{HttpReply, Transport, TransportError};

    /// Blocking HTTP/1.1 transport against a backend base URL.
    pub struct HttpTransport {
        base_url: String,
        agent: ureq::Agent,
    }

    impl HttpTransport {
        pub fn new(base_url: &str, timeout: Duration) -> Self {
            let agent: ureq::Agent = ureq::Agent::config_builder()
                .http_status_as_error(false)
                .timeout_global(Some(timeout))
                .build()
                .into();
            Self {
                base_url: base_url.trim_end_matches('/').to_string(),
                agent,
            }
        }

        fn url(&self, path: &str) -> String {
            format!("{}{}", self.base_url, path)
        }
    }

    fn reply(
        res: Result<ureq::http::Response<ureq::Body>, ureq::Error>,
    ) -> Result<HttpReply, TransportError> {
        let mut resp = res.map_err(|e| TransportError(e.to_string()))?;
        let status = resp.status().as_u16();
        let body = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| TransportError(e.to_string()))?;
        Ok(HttpReply { status, body })
    }

    impl Transport for HttpTransport {
        fn post_json(&self, path: &str, body: &str) -> Result<HttpReply, TransportError> {
            reply(
                self.agent
                    .post(&self.url(path))
                    .header("content-type", "application/json")
                    .send(body),
            )
        }

        fn get(&self, path: &str) -> Result<HttpReply, TransportError> {
            reply(self.agent.get(&self.url(path)).call())
        }
    }
}
