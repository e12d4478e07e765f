use serde::Serialize;

/// Ordered findings of one command. The exit code is derived from it.
#[derive(Debug, Default, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub values: Vec<(String, String)>,
    pub verified: Vec<String>,
    pub undetermined: Vec<String>,
    pub failures: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            schema: 1,
            command: command.to_string(),
            ..Report::default()
        }
    }

    pub fn value(&mut self, key: &str, value: impl Into<String>) {
        self.values.push((key.to_string(), value.into()));
    }

    pub fn pass(&mut self, what: impl Into<String>) {
        self.verified.push(what.into());
    }

    pub fn undetermined(&mut self, what: impl Into<String>) {
        self.undetermined.push(what.into());
    }

    pub fn fail(&mut self, what: impl Into<String>) {
        self.failures.push(what.into());
    }

    /// 0 when everything checked out, 2 with undetermined verdicts, 1 on any
    /// failure or witness.
    pub fn exit_code(&self) -> i32 {
        if !self.failures.is_empty() {
            1
        } else if !self.undetermined.is_empty() {
            2
        } else {
            0
        }
    }

    fn status(&self) -> &'static str {
        match self.exit_code() {
            0 => "ok",
            2 => "undetermined",
            _ => "failed",
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        let width = self.values.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.values {
            out.push_str(&format!("{k:<width$}  {v}\n"));
        }
        for v in &self.verified {
            out.push_str(&format!("verified: {v}\n"));
        }
        for u in &self.undetermined {
            out.push_str(&format!("undetermined: {u}\n"));
        }
        for f in &self.failures {
            out.push_str(&format!("failed: {f}\n"));
        }
        out.push_str(&format!("status: {}\n", self.status()));
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(flatten)]
            report: &'a Report,
            status: &'static str,
        }
        serde_json::to_string_pretty(&Out {
            report: self,
            status: self.status(),
        })
        .expect("report serializes")
    }
}
