use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
    Csv,
}

/// The machine-readable record of one invocation. Numbers travel as strings
/// and nothing time-dependent is recorded, so equal inputs give equal bytes.
#[derive(Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub caps: Value,
    pub truncated: Option<String>,
    pub passed: bool,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value) -> Self {
        RunReport { command: command.into(), inputs, outputs: Value::Null, caps: Value::Null, truncated: None, passed: true }
    }

    pub fn outputs(mut self, outputs: Value) -> Self {
        self.outputs = outputs;
        self
    }

    pub fn passed(mut self, passed: bool) -> Self {
        self.passed = passed;
        self
    }
}

pub struct Outcome {
    pub report: RunReport,
    pub human: String,
    pub csv: Option<String>,
    pub exit: u8,
}

impl Outcome {
    pub fn new(report: RunReport, human: String) -> Self {
        Outcome { report, human, csv: None, exit: 0 }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn exit_if(mut self, cond: bool, code: u8) -> Self {
        if cond {
            self.exit = code;
            self.report.passed = false;
        }
        self
    }

    pub fn render(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Human => Ok(self.human.clone()),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.report).map_err(|e| e.to_string())?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => self
                .csv
                .clone()
                .ok_or_else(|| format!("--csv is not available for {}", self.report.command)),
        }
    }
}
