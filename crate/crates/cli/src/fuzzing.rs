//! Entry points shared by the fuzz targets and the corpus replay test.
//! Each must return normally on any input.

use clap::Parser;
use masspart::stattest::{check_assumption1, KsReport};
use masspart::MassPartition;

use crate::args::Cli;

fn text(data: &[u8]) -> Option<&str> {
    std::str::from_utf8(data).ok()
}

/// Parsed partitions must survive a write/read round trip.
pub fn partition_csv(data: &[u8]) {
    if let Some(p) = text(data).and_then(|s| MassPartition::from_csv(s).ok()) {
        let back = MassPartition::from_csv(&p.to_csv()).expect("written CSV parses");
        assert_eq!(back, p);
    }
}

pub fn partition_json(data: &[u8]) {
    if let Some(p) = text(data).and_then(|s| MassPartition::from_json(s).ok()) {
        let back = MassPartition::from_json(&p.to_json()).expect("written JSON parses");
        assert_eq!(back, p);
    }
}

pub fn ks_report_json(data: &[u8]) {
    if let Ok(r) = serde_json::from_slice::<KsReport>(data) {
        let _ = r.effective_n();
        let _ = r.clone().gate(0.5);
        let _ = serde_json::to_string(&r);
    }
}

/// Whitespace-separated arguments; parsing only, nothing is run.
pub fn cli_args(data: &[u8]) {
    if let Some(s) = text(data) {
        let args = std::iter::once("masspart").chain(s.split_whitespace());
        if let Ok(cli) = Cli::try_parse_from(args) {
            let _ = format!("{cli:?}");
        }
    }
}

pub fn seed(data: &[u8]) {
    if let Some(s) = text(data) {
        if let Ok(v) = crate::config::parse_seed(s) {
            assert_eq!(crate::config::parse_seed(&v.to_string()).unwrap(), v);
        }
    }
}

pub fn sequences_csv(data: &[u8]) {
    if let Some((a, b)) = text(data).and_then(|s| crate::commands::parse_sequences(s).ok()) {
        let _ = check_assumption1(&a, &b);
    }
}

/// Every target by name, for the replay test.
pub type Target = fn(&[u8]);

pub const TARGETS: [(&str, Target); 6] = [
    ("partition_csv", partition_csv),
    ("partition_json", partition_json),
    ("ks_report_json", ks_report_json),
    ("cli_args", cli_args),
    ("seed", seed),
    ("sequences_csv", sequences_csv),
];
