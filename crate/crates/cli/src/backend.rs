//! Client for an external summarizer speaking the `/summarize` protocol:
//! `POST {text, max_tokens}` answered by `{summary}`.

use std::time::Duration;

use facetnav_core::{BackendError, SummaryBackend};
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize)]
struct SummarizeRequest<'a> {
    text: &'a str,
    max_tokens: usize,
}

#[derive(Debug, Deserialize)]
struct SummarizeResponse {
    summary: String,
}

pub struct HttpSummarizer {
    endpoint: String,
    agent: ureq::Agent,
}

impl HttpSummarizer {
    /// `url` is the service base; `/summarize` is appended unless present.
    pub fn new(url: &str, timeout: Duration) -> Self {
        let base = url.trim_end_matches('/');
        let endpoint = if base.ends_with("/summarize") {
            base.to_string()
        } else {
            format!("{base}/summarize")
        };
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(true)
            .build()
            .into();
        Self { endpoint, agent }
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }
}

impl SummaryBackend for HttpSummarizer {
    fn id(&self) -> String {
        format!("http:{}", self.endpoint)
    }

    fn summarize(&self, text: &str, max_tokens: usize) -> Result<String, BackendError> {
        let mut response = self
            .agent
            .post(&self.endpoint)
            .send_json(SummarizeRequest { text, max_tokens })
            .map_err(|e| match e {
                ureq::Error::Timeout(_) => BackendError::Timeout,
                ureq::Error::StatusCode(code) => BackendError::BadResponse(format!("status {code}")),
                other => BackendError::Unavailable(other.to_string()),
            })?;
        let body: SummarizeResponse = response
            .body_mut()
            .read_json()
            .map_err(|e| BackendError::BadResponse(e.to_string()))?;
        Ok(body.summary)
    }
}
