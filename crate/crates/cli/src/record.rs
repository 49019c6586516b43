use serde::Serialize;
use sha2::{Digest, Sha256};

use rp2hunt_core::builder::{SearchConfig, StageCounters};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Ok,
    NotFound,
    Error,
}

/// One command invocation, written as a JSON object or a CSV row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub input_digest: String,
    pub config: Option<SearchConfig>,
    pub outcome: Outcome,
    pub wall_time_ms: f64,
    pub counters: Option<StageCounters>,
}

impl RunRecord {
    pub const CSV_HEADER: &'static str = "command,input_digest,outcome,wall_time_ms,seed,attempts";

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub fn to_csv_row(&self) -> String {
        let outcome = match self.outcome {
            Outcome::Ok => "ok",
            Outcome::NotFound => "not-found",
            Outcome::Error => "error",
        };
        let seed = self.config.as_ref().map(|c| c.seed.to_string()).unwrap_or_default();
        let attempts = self.counters.map(|c| c.attempts.to_string()).unwrap_or_default();
        format!(
            "{},{},{outcome},{:.3},{seed},{attempts}",
            self.command, self.input_digest, self.wall_time_ms
        )
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn csv_row_shape() {
        let r = RunRecord {
            command: "find-rp2".into(),
            input_digest: "00".into(),
            config: Some(SearchConfig::default().with_seed(3)),
            outcome: Outcome::NotFound,
            wall_time_ms: 1.5,
            counters: Some(StageCounters { attempts: 7, ..Default::default() }),
        };
        assert_eq!(r.to_csv_row(), "find-rp2,00,not-found,1.500,3,7");
        assert_eq!(RunRecord::CSV_HEADER.split(',').count(), r.to_csv_row().split(',').count());
        assert!(r.to_json().contains("\"outcome\":\"not-found\""));
    }
}
