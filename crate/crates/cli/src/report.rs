use mub_core::linalg::Mode;
use serde::{Deserialize, Serialize};

/// Envelope for every command's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub seed: u64,
    pub mode: Mode,
    pub payload: serde_json::Value,
    pub verdict: String,
    /// Whether the verdict is the expected outcome of the command.
    pub success: bool,
}

impl ReportDocument {
    pub fn new(command: &[String], seed: u64, mode: Mode, payload: impl Serialize, verdict: impl Into<String>, success: bool) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_vec(),
            seed,
            mode,
            payload: serde_json::to_value(payload).expect("report payloads serialize"),
            verdict: verdict.into(),
            success,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mub_core::search::SearchConfig;

    #[test]
    fn document_round_trips() {
        let doc = ReportDocument::new(
            &["search".to_string()],
            7,
            Mode::Float,
            SearchConfig::default(),
            "0 clusters",
            true,
        );
        let back = ReportDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(doc, back);
        assert_eq!(back.payload["cluster_threshold"], serde_json::json!(1e-6));
    }
}
