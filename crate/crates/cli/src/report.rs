//! Command output: ordered key/value lines plus a truth verdict.

use genera_core::Error;
use std::process::ExitCode;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

#[derive(Debug)]
pub struct Report {
    lines: Vec<(String, String)>,
    pub verdict: Verdict,
}

impl Report {
    pub fn new() -> Self {
        Report { lines: Vec::new(), verdict: Verdict::True }
    }

    pub fn line(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.lines.push((key.to_string(), value.to_string()));
        self
    }

    pub fn verdict(mut self, v: impl Into<Verdict>) -> Self {
        self.verdict = v.into();
        self
    }

    /// Human mode prints `key: value`, with multi-line values indented
    /// below their key. Machine mode prints `key=value`, numbering the lines
    /// of multi-line values as `key[i]=line`.
    pub fn render(&self, machine: bool) -> String {
        let mut out = String::new();
        for (k, v) in &self.lines {
            let multi = v.contains('\n');
            match (machine, multi) {
                (true, false) => out.push_str(&format!("{k}={v}\n")),
                (true, true) => {
                    for (i, l) in v.lines().enumerate() {
                        out.push_str(&format!("{k}[{i}]={l}\n"));
                    }
                }
                (false, false) => out.push_str(&format!("{k}: {v}\n")),
                (false, true) => {
                    out.push_str(&format!("{k}:\n"));
                    for l in v.lines() {
                        out.push_str(&format!("  {l}\n"));
                    }
                }
            }
        }
        out
    }
}

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

pub fn exit_code(outcome: &Result<Report, Error>) -> ExitCode {
    ExitCode::from(match outcome {
        Ok(r) if r.verdict == Verdict::True => 0,
        Ok(_) => 1,
        Err(Error::Input(_)) => EXIT_INPUT,
        Err(Error::Resource(_)) => EXIT_RESOURCE,
    })
}
