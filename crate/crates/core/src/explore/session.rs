//! Per-session exploration history.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::corpus::SentenceRef;
use crate::error::{Error, Result};
use crate::explore::Selection;

/// Oldest entries are evicted beyond this many.
pub const HISTORY_CAP: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SessionToken(String);

impl SessionToken {
    /// 128 random bits, hex encoded.
    pub fn generate() -> Self {
        let bytes: [u8; 16] = rand::random();
        Self(bytes.iter().map(|b| format!("{b:02x}")).collect())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub selection: Selection,
    pub labels: Vec<String>,
    pub summary_text: String,
    pub summary_sentences: Vec<String>,
    pub sentence_refs: Vec<SentenceRef>,
    pub timestamp_ms: u64,
}

pub fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

#[derive(Debug)]
pub struct Session {
    pub token: SessionToken,
    pub created_at_ms: u64,
    history: VecDeque<HistoryEntry>,
    selections: HashMap<String, Selection>,
}

impl Session {
    fn new() -> Self {
        Self {
            token: SessionToken::generate(),
            created_at_ms: now_ms(),
            history: VecDeque::new(),
            selections: HashMap::new(),
        }
    }

    pub fn record(&mut self, entry: HistoryEntry) {
        if self.history.len() == HISTORY_CAP {
            self.history.pop_front();
        }
        self.history.push_back(entry);
    }

    /// Newest first.
    pub fn history(&self) -> impl Iterator<Item = &HistoryEntry> {
        self.history.iter().rev()
    }

    /// Latest selection made in this session on a topic.
    pub fn selection(&self, topic_id: &str) -> Option<&Selection> {
        self.selections.get(topic_id)
    }

    pub fn set_selection(&mut self, selection: Selection) {
        self.selections.insert(selection.topic_id.clone(), selection);
    }
}

/// All live sessions. Each session has its own lock.
#[derive(Debug, Default)]
pub struct SessionStore {
    sessions: Mutex<HashMap<SessionToken, Arc<Mutex<Session>>>>,
}

impl SessionStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn create(&self) -> Arc<Mutex<Session>> {
        let session = Session::new();
        let token = session.token.clone();
        let session = Arc::new(Mutex::new(session));
        self.sessions
            .lock()
            .expect("session map poisoned")
            .insert(token, session.clone());
        session
    }

    pub fn get(&self, token: &str) -> Result<Arc<Mutex<Session>>> {
        self.sessions
            .lock()
            .expect("session map poisoned")
            .get(&SessionToken(token.to_string()))
            .cloned()
            .ok_or_else(|| Error::UnknownSession(token.to_string()))
    }

    /// The named session, or a fresh one when the token is absent or unknown.
    pub fn get_or_create(&self, token: Option<&str>) -> Arc<Mutex<Session>> {
        token
            .and_then(|t| self.get(t).ok())
            .unwrap_or_else(|| self.create())
    }

    pub fn record_history(&self, token: &str, entry: HistoryEntry) -> Result<()> {
        self.get(token)?.lock().expect("session poisoned").record(entry);
        Ok(())
    }

    pub fn list_history(&self, token: &str) -> Result<Vec<HistoryEntry>> {
        let session = self.get(token)?;
        let session = session.lock().expect("session poisoned");
        Ok(session.history().cloned().collect())
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().expect("session map poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
