//! Example systems shipped with the crate.

use crate::error::{Error, Result};
use crate::model::{InputStream, KbConfig, ReactiveMcs};
use crate::syntax::{parse_stream, parse_system};

#[derive(Clone, Copy, Debug)]
pub struct Example {
    pub name: &'static str,
    pub summary: &'static str,
    pub system: &'static str,
    pub stream: &'static str,
}

macro_rules! example {
    ($name:literal, $stream:literal, $summary:literal) => {
        Example {
            name: $name,
            summary: $summary,
            system: include_str!(concat!("../systems/", $name, ".rmcs")),
            stream: include_str!(concat!("../systems/", $stream, ".stream")),
        }
    };
}

pub const EXAMPLES: &[Example] = &[
    example!("stove", "stove", "power switch toggling a stored power state"),
    example!("stove_no_next", "stove_no_next", "stove with immediate operations, no equilibrium on switch"),
    example!("stove_temp", "stove_temp", "stove with a temperature sensor classified cold or hot"),
    example!("scenario", "scenario", "assisted living over six instants"),
    example!("scenario_adjusted", "scenario", "assisted living without immediate position updates"),
    example!("self_justification", "self_justification", "two minimal equilibria, one grounded"),
    example!("clock", "clock", "logical clock bootstrapped from an empty knowledge base"),
    example!("sensor_merge", "sensor_merge", "priority merge of conflicting sensors"),
    example!("stove_emergency_window", "stove_emergency_window", "timestamped alerts with a forgetting window"),
    example!("evolp", "evolp", "evolving logic program with an assert and events"),
    example!("turing", "turing", "Turing machine service running an even-ones machine on 0110"),
];

pub fn example(name: &str) -> Option<&'static Example> {
    EXAMPLES.iter().find(|e| e.name == name)
}

impl Example {
    pub fn load(&self) -> Result<(ReactiveMcs, KbConfig, InputStream)> {
        let (m, cfg) = parse_system(self.system)?;
        let stream = parse_stream(self.stream, &m)?;
        Ok((m, cfg, stream))
    }
}

pub fn load(name: &str) -> Result<(ReactiveMcs, KbConfig, InputStream)> {
    example(name).ok_or_else(|| Error::Config(format!("no bundled example {name}")))?.load()
}
