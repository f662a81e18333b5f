#![allow(dead_code)]

use std::path::PathBuf;

use cpnet::io::{parse_net, parse_outcome};
use cpnet::{CpNet, Outcome};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn fixture(name: &str) -> CpNet {
    parse_net(&fixture_text(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn o(net: &CpNet, text: &str) -> Outcome {
    parse_outcome(text, net).unwrap_or_else(|e| panic!("{text}: {e}"))
}

/// Value of a `# key: value` comment line in a fixture.
pub fn fixture_note(name: &str, key: &str) -> Option<String> {
    fixture_text(name).lines().find_map(|l| {
        l.strip_prefix("# ")
            .and_then(|r| r.strip_prefix(key))
            .and_then(|r| r.strip_prefix(": "))
            .map(str::to_string)
    })
}
