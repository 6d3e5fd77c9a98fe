use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

/// One result record. Fields are declared in alphabetical order so the
/// serialized key order is fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope {
    pub cache_hit: bool,
    pub command: String,
    pub elapsed_ms: u64,
    pub error_bound: String,
    /// Exact reference value, when the check has one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub inputs: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    pub precision_digits: u32,
    pub value: String,
}

impl Envelope {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("envelope serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

pub(crate) struct Printer<'a> {
    out: &'a mut dyn Write,
    format: Format,
    header_done: bool,
}

impl<'a> Printer<'a> {
    pub fn new(out: &'a mut dyn Write, format: Format) -> Self {
        Self {
            out,
            format,
            header_done: false,
        }
    }

    pub fn emit(&mut self, env: &Envelope) -> io::Result<()> {
        match self.format {
            Format::Json => writeln!(self.out, "{}", env.to_json_line()),
            Format::Text => {
                if !self.header_done {
                    writeln!(
                        self.out,
                        "{:<9} {:<34} {:>6} {:<10} {:<4} value",
                        "command", "inputs", "ms", "bound", "pass"
                    )?;
                    self.header_done = true;
                }
                let inputs = env
                    .inputs
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join(" ");
                let pass = match env.pass {
                    Some(true) => "ok",
                    Some(false) => "FAIL",
                    None => "-",
                };
                let hit = if env.cache_hit { "*" } else { "" };
                write!(
                    self.out,
                    "{:<9} {:<34} {:>6} {:<10} {:<4} {}",
                    env.command,
                    inputs,
                    format!("{}{hit}", env.elapsed_ms),
                    env.error_bound,
                    pass,
                    env.value
                )?;
                if let Some(exact) = &env.exact {
                    write!(self.out, "  (exact {exact})")?;
                }
                writeln!(self.out)
            }
        }
    }
}
