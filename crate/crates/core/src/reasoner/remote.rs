//! HTTP client for an external reasoning service.
//!
//! Requests are `POST {endpoint}/v1/reason` with body
//! `{"kind", "prompt", "context"}`; replies are flat JSON objects whose
//! fields depend on the query kind.

use super::{QueryKind, Reasoner, ReasonerQuery, ReasonerReply};
use crate::dsrg::RelationValue;
use crate::error::ReasonerError;
use crate::geometry::Point2;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Duration;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RemoteConfig {
    pub endpoint: String,
    pub timeout_s: f64,
    pub retries: u32,
    /// Delay before the first retry; doubles on each further attempt.
    pub backoff_ms: u64,
}

impl Default for RemoteConfig {
    fn default() -> Self {
        Self {
            endpoint: "http://127.0.0.1:8080".into(),
            timeout_s: 10.0,
            retries: 2,
            backoff_ms: 200,
        }
    }
}

pub struct RemoteReasoner {
    config: RemoteConfig,
    agent: ureq::Agent,
    clamped: AtomicU64,
}

impl RemoteReasoner {
    pub fn new(config: RemoteConfig) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs_f64(config.timeout_s.max(0.001))))
            .http_status_as_error(false)
            .build()
            .into();
        Self {
            config,
            agent,
            clamped: AtomicU64::new(0),
        }
    }

    /// Number of replies whose scalars had to be clamped into `[0, 1]`.
    pub fn clamped_replies(&self) -> u64 {
        self.clamped.load(Ordering::Relaxed)
    }

    fn url(&self) -> String {
        format!("{}/v1/reason", self.config.endpoint.trim_end_matches('/'))
    }

    fn post_once(&self, body: &str) -> Result<String, ReasonerError> {
        let mut resp = self
            .agent
            .post(&self.url())
            .header("content-type", "application/json")
            .send(body)
            .map_err(|e| ReasonerError::Unavailable(e.to_string()))?;
        if resp.status().as_u16() != 200 {
            return Err(ReasonerError::Unavailable(format!("http status {}", resp.status())));
        }
        resp.body_mut()
            .read_to_string()
            .map_err(|e| ReasonerError::Unavailable(e.to_string()))
    }
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value, ReasonerError> {
    v.get(name)
        .ok_or_else(|| ReasonerError::ProtocolViolation(format!("reply lacks `{name}`")))
}

fn number(v: &Value, name: &str) -> Result<f64, ReasonerError> {
    field(v, name)?
        .as_f64()
        .ok_or_else(|| ReasonerError::ProtocolViolation(format!("`{name}` is not a number")))
}

/// Parses a wire reply for a query of `kind`.
pub fn parse_reply(kind: QueryKind, body: &str) -> Result<ReasonerReply, ReasonerError> {
    let v: Value = serde_json::from_str(body).map_err(|e| ReasonerError::ProtocolViolation(e.to_string()))?;
    let bad = |what: &str| ReasonerError::ProtocolViolation(what.to_owned());
    Ok(match kind {
        QueryKind::Localize => ReasonerReply::Localize {
            region: match field(&v, "region")? {
                Value::Null => None,
                Value::String(s) => Some(s.clone()),
                _ => return Err(bad("`region` must be a string or null")),
            },
            confidence: number(&v, "confidence")?,
        },
        QueryKind::InferRelationObject | QueryKind::InferRelationRoom => {
            let relations = if let Some(list) = v.get("relations") {
                serde_json::from_value::<Vec<RelationValue>>(list.clone()).map_err(|e| bad(&e.to_string()))?
            } else {
                vec![serde_json::from_value::<RelationValue>(field(&v, "relation")?.clone())
                    .map_err(|e| bad(&e.to_string()))?]
            };
            ReasonerReply::Relation {
                relations,
                confidence: number(&v, "confidence")?,
            }
        }
        QueryKind::VerifyDetection => ReasonerReply::Verify {
            affirm: field(&v, "affirm")?.as_bool().ok_or_else(|| bad("`affirm` must be boolean"))?,
            confidence: number(&v, "confidence")?,
        },
        QueryKind::Redetect => {
            let found = field(&v, "found")?.as_bool().ok_or_else(|| bad("`found` must be boolean"))?;
            let position = if found {
                let p: [f64; 2] =
                    serde_json::from_value(field(&v, "position")?.clone()).map_err(|e| bad(&e.to_string()))?;
                Some(Point2::from(p))
            } else {
                None
            };
            ReasonerReply::Redetect {
                position,
                confidence: number(&v, "confidence")?,
            }
        }
        QueryKind::Similarity => ReasonerReply::Similarity {
            similarity: number(&v, "similarity")?,
        },
    })
}

impl Reasoner for RemoteReasoner {
    fn query(&self, q: &ReasonerQuery) -> Result<ReasonerReply, ReasonerError> {
        let body = serde_json::to_string(q).map_err(|e| ReasonerError::ProtocolViolation(e.to_string()))?;
        let mut delay = Duration::from_millis(self.config.backoff_ms);
        let mut attempt = 0;
        let text = loop {
            match self.post_once(&body) {
                Ok(t) => break t,
                Err(e) if attempt >= self.config.retries => return Err(e),
                Err(_) => {
                    std::thread::sleep(delay);
                    delay *= 2;
                    attempt += 1;
                }
            }
        };
        let mut reply = parse_reply(q.kind, &text)?;
        if reply.clamp() {
            self.clamped.fetch_add(1, Ordering::Relaxed);
        }
        Ok(reply)
    }
}
