//! Experiment configurations shared by the command line and JSON files.

use clap::Subcommand;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{LabError, LabResult};

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Check one output string against the relation.
    IsmrVerify {
        #[arg(long)]
        p: u32,
        /// Input bits, e.g. 110.
        #[arg(long)]
        x: String,
        /// Output dits.
        #[arg(long)]
        y: String,
    },
    /// Exhaustive best linear strategy for a modular XOR game.
    GameBrute {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: usize,
        /// uniform-dit or hamming-binary.
        #[arg(long, default_value = "uniform-dit")]
        dist: String,
        /// Leading symbols fixed to 0.
        #[arg(long, default_value_t = 0)]
        r: usize,
    },
    /// Closed-form correlation and winning-probability bounds for n = 1..=n_max.
    GameBound {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value = "uniform-dit")]
        dist: String,
        #[arg(long, default_value_t = 0)]
        r: usize,
    },
    /// Qubit parity-halving circuit: exact invalid mass and sampled validity.
    SimPhp {
        #[arg(long)]
        n: usize,
        /// path, tree or grid3d.
        #[arg(long, default_value = "tree")]
        graph: String,
        /// Exact output law per input instead of sampling.
        #[arg(long)]
        #[serde(default)]
        exhaustive: bool,
        /// Shots per input when sampling.
        #[arg(long, default_value_t = 200)]
        shots: u64,
    },
    /// Qupit circuit: exact and sampled correlation per input.
    SimQupit {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "path")]
        graph: String,
        /// direct or teleport.
        #[arg(long, default_value = "direct")]
        gadget: String,
        /// Sampled runs per input on top of the exact values (0 to skip).
        #[arg(long, default_value_t = 0)]
        shots: u64,
        /// Inputs sampled when the input space is too large to list.
        #[arg(long, default_value_t = 20)]
        inputs: usize,
    },
    /// Empirical switching probability for random depth-2 circuits.
    SwitchEmpirical {
        #[arg(long, default_value_t = 400)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        m: usize,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        keep: f64,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        trials: u64,
    },
    /// ANF of a decision tree stored as JSON.
    Anf {
        #[arg(long)]
        tree: String,
        /// Number of variables (defaults to the tree's arity).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Surface-code logical failure rates under local stochastic noise.
    QecThreshold {
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long = "L-list", default_value = "3,5,7")]
        #[serde(rename = "L_list")]
        l_list: String,
        #[arg(long, default_value = "0.005")]
        tau_list: String,
        #[arg(long)]
        trials: u64,
    },
    /// One-layer bounded-threshold decomposition of an activation.
    NnDecompose {
        #[arg(long, default_value = "relu")]
        activation: String,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        w: f64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Input size where classical lower bounds overtake linear quantum size.
    ResourceEstimate {
        /// exact-const-k, exact-poly-k, average-poly-k or all.
        #[arg(long, default_value = "all")]
        row: String,
        #[arg(long, default_value = "3,4,5")]
        d_list: String,
        #[arg(long, default_value_t = 1.0)]
        c_q: f64,
        #[arg(long, default_value_t = 1.0)]
        hidden: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::IsmrVerify { .. } => "ismr-verify",
            Command::GameBrute { .. } => "game-brute",
            Command::GameBound { .. } => "game-bound",
            Command::SimPhp { .. } => "sim-php",
            Command::SimQupit { .. } => "sim-qupit",
            Command::SwitchEmpirical { .. } => "switch-empirical",
            Command::Anf { .. } => "anf",
            Command::QecThreshold { .. } => "qec-threshold",
            Command::NnDecompose { .. } => "nn-decompose",
            Command::ResourceEstimate { .. } => "resource-estimate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub command: Command,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl ExperimentConfig {
    /// Parses a config file; a previous output (JSON report or CSV with a
    /// `#` header line) is accepted too and replays its embedded config.
    pub fn from_text(text: &str) -> LabResult<Self> {
        let body = match text.strip_prefix('#') {
            Some(rest) => rest.lines().next().unwrap_or(""),
            None => text,
        };
        let value: serde_json::Value = serde_json::from_str(body).map_err(diag)?;
        let value = match value.get("header").and_then(|h| h.get("config")).or_else(|| value.get("config")) {
            Some(cfg) => cfg.clone(),
            None => value,
        };
        serde_json::from_value(value).map_err(diag)
    }

    /// Canonical JSON without the output path.
    pub fn canonical_json(&self) -> String {
        let mut c = self.clone();
        c.out = None;
        serde_json::to_string(&c).expect("config serializes")
    }

    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical_json().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn diag(e: serde_json::Error) -> LabError {
    LabError::Config { line: e.line(), column: e.column(), msg: e.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_hash() {
        let text = r#"{"subcommand":"qec-threshold","p":3,"L_list":"3,5","tau_list":"0.01","trials":100,"seed":7}"#;
        let c = ExperimentConfig::from_text(text).unwrap();
        assert_eq!(c.command.name(), "qec-threshold");
        let again = ExperimentConfig::from_text(&c.canonical_json()).unwrap();
        assert_eq!(c, again);
        assert_eq!(c.hash(), again.hash());
        let other = ExperimentConfig { seed: 8, ..c.clone() };
        assert_ne!(c.hash(), other.hash());
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = ExperimentConfig::from_text("{\n  \"subcommand\": \"anf\",\n  \"tree\": }").unwrap_err();
        match err {
            LabError::Config { line, .. } => assert_eq!(line, 3),
            e => panic!("unexpected {e}"),
        }
        assert!(ExperimentConfig::from_text(r#"{"subcommand":"anf","tree":"t.json"}"#).is_err());
    }
}
