//! In-process HTTP server speaking the wire format, backed either by a local
//! simulator or by a recorded fixture.

use std::collections::VecDeque;
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::wire::{self, ActionRequest, FrameData, GameState, ResetRequest};
use crate::action::ActionRef;
use crate::env::{EnvError, EnvSignal, Environment, SyntheticEnv};

pub const FIXTURE_VERSION: u32 = 1;

/// One request/response pair as seen on the wire.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exchange {
    pub path: String,
    pub request: Value,
    pub status: u16,
    pub response: Value,
}

/// A recorded session, replayable by [`MockServer::replay`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MockFixture {
    pub version: u32,
    pub game_id: String,
    pub exchanges: Vec<Exchange>,
}

impl MockFixture {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// One exchange per line, so recorded sessions stay diffable.
    pub fn to_json(&self) -> String {
        let line = |v: &Exchange| serde_json::to_string(v).expect("fixtures always serialize");
        let exchanges: Vec<String> = self.exchanges.iter().map(line).collect();
        format!(
            "{{\"version\":{},\"game_id\":{},\"exchanges\":[\n{}\n]}}",
            self.version,
            serde_json::Value::from(self.game_id.as_str()),
            exchanges.join(",\n")
        )
    }
}

/// Plays a [`SyntheticEnv`] behind the remote protocol. Every level restart is
/// reported as `GAME_OVER`, which the client acknowledges with a `RESET`.
struct SyntheticSession {
    initial: SyntheticEnv,
    env: SyntheticEnv,
    cards: u32,
    sessions: u32,
    guid: Option<String>,
    score: u32,
    over: bool,
}

enum Backend {
    Synthetic(Box<SyntheticSession>),
    Replay { fixture: MockFixture, cursor: usize },
}

struct MockState {
    backend: Backend,
    started: Instant,
    stamps: Vec<Duration>,
    exchanges: Vec<Exchange>,
    failures: VecDeque<u16>,
    expected_key: Option<String>,
}

pub struct MockServer {
    url: String,
    server: Arc<tiny_http::Server>,
    state: Arc<Mutex<MockState>>,
    worker: Option<JoinHandle<()>>,
}

fn error_body(message: impl Into<String>) -> Value {
    json!({ "error": message.into() })
}

impl SyntheticSession {
    fn game_id(&self) -> &str {
        self.initial.game_id()
    }

    fn frame_data(&self, state: GameState) -> Value {
        let data = FrameData {
            game_id: self.game_id().to_string(),
            guid: self.guid.clone(),
            frame: wire::encode_frame(self.env.frame()),
            state,
            score: self.score,
            win_score: self.env.level_count().map(|n| n as u32),
            available_actions: wire::available_actions(self.env.scheme()),
        };
        serde_json::to_value(data).expect("frame data serializes")
    }

    fn handle(&mut self, path: &str, body: &Value) -> (u16, Value) {
        if path == wire::OPEN_SCORECARD {
            self.cards += 1;
            return (200, json!({ "card_id": format!("card-{}", self.cards) }));
        }
        if path == wire::CLOSE_SCORECARD {
            return (200, body.clone());
        }
        let Some(command) = path.strip_prefix("/api/cmd/") else {
            return (404, error_body(format!("no route {path}")));
        };
        if command == wire::RESET_COMMAND {
            let Ok(req) = serde_json::from_value::<ResetRequest>(body.clone()) else {
                return (400, error_body("bad reset body"));
            };
            if req.game_id != self.game_id() {
                return (404, error_body(format!("unknown game {}", req.game_id)));
            }
            match req.guid {
                None => {
                    self.sessions += 1;
                    self.env = self.initial.clone();
                    self.env.reset().expect("synthetic reset cannot fail");
                    self.guid = Some(format!("guid-{}", self.sessions));
                    self.score = 0;
                    self.over = false;
                }
                Some(g) if Some(&g) != self.guid.as_ref() => return (404, error_body("unknown session")),
                Some(_) if self.over => self.over = false,
                Some(_) => {
                    self.env.step(&ActionRef::Reset).expect("synthetic reset cannot fail");
                }
            }
            return (200, self.frame_data(GameState::NotFinished));
        }
        let Ok(req) = serde_json::from_value::<ActionRequest>(body.clone()) else {
            return (400, error_body("bad action body"));
        };
        if Some(&req.guid) != self.guid.as_ref() {
            return (404, error_body("unknown session"));
        }
        let Some(action) = wire::parse_command(command, &req) else {
            return (400, error_body(format!("unknown command {command}")));
        };
        if self.over {
            return (409, error_body("game over; reset first"));
        }
        match self.env.step(&action) {
            Ok(result) => {
                let state = match result.signal {
                    Some(EnvSignal::LevelReset(_)) => {
                        self.over = true;
                        GameState::GameOver
                    }
                    Some(EnvSignal::LevelComplete) => {
                        self.score += 1;
                        GameState::NotFinished
                    }
                    Some(EnvSignal::GameWon) => {
                        self.score += 1;
                        GameState::Win
                    }
                    None => GameState::NotFinished,
                };
                (200, self.frame_data(state))
            }
            Err(EnvError::Finished) => (409, error_body("game already won")),
            Err(e) => (400, error_body(e.to_string())),
        }
    }
}

impl Backend {
    fn handle(&mut self, path: &str, body: &Value) -> (u16, Value) {
        match self {
            Backend::Synthetic(session) => session.handle(path, body),
            Backend::Replay { fixture, cursor } => {
                let Some(expected) = fixture.exchanges.get(*cursor) else {
                    return (409, error_body("fixture exhausted"));
                };
                if expected.path != path || &expected.request != body {
                    return (
                        409,
                        error_body(format!(
                            "exchange {} expected {} {}, got {path} {body}",
                            *cursor, expected.path, expected.request
                        )),
                    );
                }
                *cursor += 1;
                (expected.status, expected.response.clone())
            }
        }
    }
}

impl MockServer {
    /// Serves `env` from its current definition; every `RESET` without a
    /// session id starts the game over.
    pub fn synthetic(env: SyntheticEnv) -> std::io::Result<Self> {
        Self::start(Backend::Synthetic(Box::new(SyntheticSession {
            initial: env.clone(),
            env,
            cards: 0,
            sessions: 0,
            guid: None,
            score: 0,
            over: false,
        })))
    }

    /// Answers requests from `fixture` in order; any deviation gets HTTP 409.
    pub fn replay(fixture: MockFixture) -> std::io::Result<Self> {
        Self::start(Backend::Replay { fixture, cursor: 0 })
    }

    fn start(backend: Backend) -> std::io::Result<Self> {
        let server = tiny_http::Server::http("127.0.0.1:0").map_err(std::io::Error::other)?;
        let port = server
            .server_addr()
            .to_ip()
            .map(|a| a.port())
            .ok_or_else(|| std::io::Error::other("mock server has no ip address"))?;
        let server = Arc::new(server);
        let state = Arc::new(Mutex::new(MockState {
            backend,
            started: Instant::now(),
            stamps: Vec::new(),
            exchanges: Vec::new(),
            failures: VecDeque::new(),
            expected_key: None,
        }));
        let worker = {
            let server = Arc::clone(&server);
            let state = Arc::clone(&state);
            std::thread::spawn(move || {
                for request in server.incoming_requests() {
                    serve(&state, request);
                }
            })
        };
        Ok(MockServer {
            url: format!("http://127.0.0.1:{port}"),
            server,
            state,
            worker: Some(worker),
        })
    }

    pub fn url(&self) -> &str {
        &self.url
    }

    /// Rejects requests whose API key differs with HTTP 401.
    pub fn expect_key(&self, key: impl Into<String>) {
        self.lock().expected_key = Some(key.into());
    }

    /// Answers the next requests with these statuses before serving normally.
    pub fn inject_failures(&self, statuses: impl IntoIterator<Item = u16>) {
        self.lock().failures.extend(statuses);
    }

    /// Arrival times of every request, relative to server start.
    pub fn request_times(&self) -> Vec<Duration> {
        self.lock().stamps.clone()
    }

    /// Exchanges answered by the backend, in arrival order.
    pub fn exchanges(&self) -> Vec<Exchange> {
        self.lock().exchanges.clone()
    }

    pub fn fixture(&self, game_id: &str) -> MockFixture {
        MockFixture {
            version: FIXTURE_VERSION,
            game_id: game_id.to_string(),
            exchanges: self.exchanges(),
        }
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, MockState> {
        self.state.lock().expect("mock state poisoned")
    }
}

impl Drop for MockServer {
    fn drop(&mut self) {
        self.server.unblock();
        if let Some(worker) = self.worker.take() {
            let _ = worker.join();
        }
    }
}

fn serve(state: &Mutex<MockState>, mut request: tiny_http::Request) {
    let path = request.url().to_string();
    let key = request
        .headers()
        .iter()
        .find(|h| h.field.equiv(wire::API_KEY_HEADER))
        .map(|h| h.value.as_str().to_string());
    let mut text = String::new();
    let read = request.as_reader().read_to_string(&mut text);
    let (status, body) = {
        let mut st = state.lock().expect("mock state poisoned");
        let at = st.started.elapsed();
        st.stamps.push(at);
        if read.is_err() {
            (400, error_body("unreadable body"))
        } else if st.expected_key.as_ref().is_some_and(|k| key.as_ref() != Some(k)) {
            (401, error_body("bad api key"))
        } else if let Some(code) = st.failures.pop_front() {
            (code, error_body("injected failure"))
        } else {
            match serde_json::from_str::<Value>(&text) {
                Ok(body) => {
                    let (status, response) = st.backend.handle(&path, &body);
                    st.exchanges.push(Exchange {
                        path: path.clone(),
                        request: body,
                        status,
                        response: response.clone(),
                    });
                    (status, response)
                }
                Err(e) => (400, error_body(e.to_string())),
            }
        }
    };
    let header = tiny_http::Header::from_bytes(&b"Content-Type"[..], &b"application/json"[..])
        .expect("static header");
    let response = tiny_http::Response::from_string(body.to_string())
        .with_status_code(status)
        .with_header(header);
    if let Err(e) = request.respond(response) {
        log::warn!("mock server failed to respond: {e}");
    }
}
