//! Client for the ARC-AGI-3 HTTP API, exposed through the same
//! [`Environment`] contract as the local simulator.

pub mod mock;
mod pacer;
pub mod wire;

pub use pacer::Pacer;

use std::time::Duration;

use log::{debug, warn};
use serde::Serialize;
use thiserror::Error;

use crate::action::{ActionRef, ActionScheme};
use crate::env::{EnvError, EnvSignal, Environment, ResetCause, StepResult};
use crate::frame::Frame;
use wire::{FrameData, GameState};

/// Environment variable holding the API key.
pub const API_KEY_ENV: &str = "ARC_API_KEY";
pub const DEFAULT_BASE_URL: &str = "https://three.arcprize.org";
/// Competition ceiling on environment steps per second.
pub const MAX_RATE: f64 = 10.0;

#[derive(Clone, Debug)]
pub struct ApiConfig {
    pub base_url: String,
    pub api_key: String,
    pub game_id: String,
    /// Requests per second, at most [`MAX_RATE`].
    pub rate_limit: f64,
    pub timeout: Duration,
    pub retries: u32,
    /// Pause before the first retry; doubles on each further attempt.
    pub retry_backoff: Duration,
    /// Forces the action scheme instead of deriving it from `available_actions`.
    pub scheme: Option<ActionScheme>,
    pub tags: Vec<String>,
}

impl ApiConfig {
    pub fn new(base_url: impl Into<String>, api_key: impl Into<String>, game_id: impl Into<String>) -> Self {
        ApiConfig {
            base_url: base_url.into(),
            api_key: api_key.into(),
            game_id: game_id.into(),
            rate_limit: MAX_RATE,
            timeout: Duration::from_secs(30),
            retries: 3,
            retry_backoff: Duration::from_millis(250),
            scheme: None,
            tags: Vec::new(),
        }
    }

    /// Reads the key from [`API_KEY_ENV`].
    pub fn from_env(base_url: impl Into<String>, game_id: impl Into<String>) -> Result<Self, ClientError> {
        let key = std::env::var(API_KEY_ENV)
            .map_err(|_| ClientError::Config(format!("{API_KEY_ENV} is not set")))?;
        Ok(ApiConfig::new(base_url, key, game_id))
    }

    pub fn validate(&self) -> Result<(), ClientError> {
        if !(self.rate_limit > 0.0 && self.rate_limit <= MAX_RATE) {
            return Err(ClientError::Config(format!(
                "rate limit {} must be in (0, {MAX_RATE}]",
                self.rate_limit
            )));
        }
        if self.game_id.is_empty() {
            return Err(ClientError::Config("game id is empty".into()));
        }
        if !self.base_url.starts_with("http://") && !self.base_url.starts_with("https://") {
            return Err(ClientError::Config(format!("base url `{}` is not http(s)", self.base_url)));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("authentication rejected (HTTP {status})")]
    Auth { status: u16 },
    #[error("unexpected response: {message}")]
    Protocol { message: String, raw: String },
    #[error("network failure after {attempts} attempts: {message}")]
    Network { message: String, attempts: u32 },
    #[error("invalid client configuration: {0}")]
    Config(String),
}

/// A validated game response.
#[derive(Clone, Debug, PartialEq)]
pub struct RemoteFramePayload {
    pub frame: Frame,
    pub state: GameState,
    pub score: u32,
    pub win_score: Option<u32>,
    pub guid: Option<String>,
    pub available_actions: Vec<u8>,
    /// Response body as received.
    pub raw: String,
}

impl RemoteFramePayload {
    pub fn parse(raw: &str) -> Result<Self, ClientError> {
        let protocol = |message: String| ClientError::Protocol {
            message,
            raw: raw.to_string(),
        };
        let data: FrameData = serde_json::from_str(raw).map_err(|e| protocol(e.to_string()))?;
        let frame = wire::decode_frame(&data.frame).map_err(|e| protocol(e.to_string()))?;
        Ok(RemoteFramePayload {
            frame,
            state: data.state,
            score: data.score,
            win_score: data.win_score,
            guid: data.guid,
            available_actions: data.available_actions,
            raw: raw.to_string(),
        })
    }
}

/// A live game session.
pub struct ArcEnv {
    config: ApiConfig,
    http: ureq::Agent,
    pacer: Pacer,
    card_id: String,
    guid: Option<String>,
    scheme: ActionScheme,
    score: u32,
    win_score: Option<u32>,
    won: bool,
    /// Frame of a reset that no step has consumed yet.
    fresh: Option<Frame>,
    retries_used: u64,
    requests: u64,
}

impl ArcEnv {
    /// Opens a scorecard and resets the game, pacing with a private pacer.
    pub fn open(config: ApiConfig) -> Result<Self, ClientError> {
        let pacer = Pacer::new(config.rate_limit);
        Self::open_with_pacer(config, pacer)
    }

    /// Like [`ArcEnv::open`], sharing `pacer` with other handles on the same key.
    pub fn open_with_pacer(config: ApiConfig, pacer: Pacer) -> Result<Self, ClientError> {
        config.validate()?;
        let http = ureq::Agent::new_with_config(
            ureq::Agent::config_builder()
                .timeout_global(Some(config.timeout))
                .http_status_as_error(false)
                .build(),
        );
        let mut env = ArcEnv {
            config,
            http,
            pacer,
            card_id: String::new(),
            guid: None,
            scheme: ActionScheme::Combined,
            score: 0,
            win_score: None,
            won: false,
            fresh: None,
            retries_used: 0,
            requests: 0,
        };
        let body = wire::OpenScorecardRequest {
            tags: env.config.tags.clone(),
        };
        let raw = env.post(wire::OPEN_SCORECARD, &body)?;
        let card: wire::OpenScorecardResponse = serde_json::from_str(&raw)
            .map_err(|e| ClientError::Protocol { message: e.to_string(), raw })?;
        env.card_id = card.card_id;
        let payload = env.send_reset(false)?;
        env.scheme = match env.config.scheme {
            Some(s) => s,
            None => wire::scheme_from_available(&payload.available_actions).ok_or_else(|| ClientError::Protocol {
                message: format!("no usable actions in {:?}", payload.available_actions),
                raw: payload.raw.clone(),
            })?,
        };
        env.fresh = Some(payload.frame);
        Ok(env)
    }

    pub fn card_id(&self) -> &str {
        &self.card_id
    }

    /// Retries spent on transient failures so far.
    pub fn retries_used(&self) -> u64 {
        self.retries_used
    }

    pub fn requests_sent(&self) -> u64 {
        self.requests
    }

    /// Closes the scorecard.
    pub fn close(mut self) -> Result<(), ClientError> {
        let body = wire::CloseScorecardRequest {
            card_id: self.card_id.clone(),
        };
        self.post(wire::CLOSE_SCORECARD, &body).map(|_| ())
    }

    fn send_reset(&mut self, keep_session: bool) -> Result<RemoteFramePayload, ClientError> {
        let body = wire::ResetRequest {
            game_id: self.config.game_id.clone(),
            card_id: self.card_id.clone(),
            guid: if keep_session { self.guid.clone() } else { None },
        };
        let raw = self.post(&wire::command_path(wire::RESET_COMMAND), &body)?;
        let payload = RemoteFramePayload::parse(&raw)?;
        if payload.guid.is_some() {
            self.guid = payload.guid.clone();
        }
        if !keep_session {
            self.score = payload.score;
            self.won = false;
        }
        if payload.win_score.is_some() {
            self.win_score = payload.win_score;
        }
        Ok(payload)
    }

    fn post<B: Serialize>(&mut self, path: &str, body: &B) -> Result<String, ClientError> {
        let url = format!("{}{path}", self.config.base_url.trim_end_matches('/'));
        let mut last_failure = String::new();
        for attempt in 0..=self.config.retries {
            if attempt > 0 {
                self.retries_used += 1;
                warn!("retrying {path} (attempt {}): {last_failure}", attempt + 1);
                std::thread::sleep(self.config.retry_backoff * (1 << (attempt - 1).min(6)));
            }
            self.pacer.acquire();
            self.requests += 1;
            debug!("POST {url}");
            let result = self
                .http
                .post(&url)
                .header(wire::API_KEY_HEADER, &self.config.api_key)
                .header("Accept", "application/json")
                .send_json(body);
            let mut response = match result {
                Ok(r) => r,
                Err(e) => {
                    last_failure = e.to_string();
                    continue;
                }
            };
            let status = response.status().as_u16();
            let text = match response.body_mut().read_to_string() {
                Ok(t) => t,
                Err(e) => {
                    last_failure = e.to_string();
                    continue;
                }
            };
            match status {
                200..=299 => return Ok(text),
                401 | 403 => return Err(ClientError::Auth { status }),
                408 | 429 | 500..=599 => last_failure = format!("HTTP {status}"),
                _ => {
                    return Err(ClientError::Protocol {
                        message: format!("HTTP {status} from {path}"),
                        raw: text,
                    })
                }
            }
        }
        Err(ClientError::Network {
            message: last_failure,
            attempts: self.config.retries + 1,
        })
    }
}

impl Environment for ArcEnv {
    fn game_id(&self) -> &str {
        &self.config.game_id
    }

    fn scheme(&self) -> ActionScheme {
        self.scheme
    }

    fn level_count(&self) -> Option<usize> {
        self.win_score.map(|n| n as usize)
    }

    fn reset(&mut self) -> Result<Frame, EnvError> {
        if let Some(frame) = self.fresh.clone() {
            return Ok(frame);
        }
        let payload = self.send_reset(false)?;
        self.fresh = Some(payload.frame.clone());
        Ok(payload.frame)
    }

    fn step(&mut self, action: &ActionRef) -> Result<StepResult, EnvError> {
        if self.won {
            return Err(EnvError::Finished);
        }
        if !self.scheme.accepts(action) {
            return Err(EnvError::InvalidAction {
                action: *action,
                reason: format!("not part of the {:?} scheme", self.scheme),
            });
        }
        self.fresh = None;
        if *action == ActionRef::Reset {
            let payload = self.send_reset(true)?;
            return Ok(StepResult {
                frame: payload.frame,
                signal: Some(EnvSignal::LevelReset(ResetCause::Requested)),
            });
        }
        let (command, xy) = wire::action_command(action);
        let body = wire::ActionRequest {
            game_id: self.config.game_id.clone(),
            guid: self.guid.clone().unwrap_or_default(),
            x: xy.map(|p| p.0),
            y: xy.map(|p| p.1),
        };
        let raw = self.post(&wire::command_path(&command), &body)?;
        let payload = RemoteFramePayload::parse(&raw)?;
        if payload.win_score.is_some() {
            self.win_score = payload.win_score;
        }
        let advanced = payload.score > self.score;
        self.score = payload.score;
        let (frame, signal) = match payload.state {
            GameState::Win => {
                self.won = true;
                (payload.frame, Some(EnvSignal::GameWon))
            }
            GameState::GameOver => {
                // the level is over; restart it so play can continue
                let restarted = self.send_reset(true)?;
                (restarted.frame, Some(EnvSignal::LevelReset(ResetCause::Unknown)))
            }
            _ if advanced => (payload.frame, Some(EnvSignal::LevelComplete)),
            _ => (payload.frame, None),
        };
        Ok(StepResult { frame, signal })
    }
}
