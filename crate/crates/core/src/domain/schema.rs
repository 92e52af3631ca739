use serde::{Deserialize, Serialize};

/// On-disk domain format. States are arrays of fluent names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainDocument {
    pub fluents: Vec<String>,
    pub initial: Vec<String>,
    pub actions: Vec<String>,
    pub reactions: Vec<String>,
    pub transitions: Vec<TransitionDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDocument {
    pub from: Vec<String>,
    pub action: String,
    pub reaction: String,
    pub to: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveDocument {
    pub action: String,
    pub reaction: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDocument {
    pub states: Vec<Vec<String>>,
    pub moves: Vec<MoveDocument>,
}
