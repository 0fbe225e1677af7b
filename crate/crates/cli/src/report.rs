//! Line-oriented verification reports rendered as text, CSV or JSON.

use std::fmt::Write;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    fn word(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Line {
    pub status: Status,
    /// Name of the identity a checked line asserts, e.g. `invariance`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tag: Option<&'static str>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub title: String,
    pub lines: Vec<Line>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Csv,
    Json,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            lines: Vec::new(),
        }
    }

    pub fn info(&mut self, text: impl Into<String>) {
        self.lines.push(Line {
            status: Status::Info,
            tag: None,
            text: text.into(),
        });
    }

    pub fn check(&mut self, tag: &'static str, ok: bool, text: impl Into<String>) -> bool {
        self.lines.push(Line {
            status: Status::from_bool(ok),
            tag: Some(tag),
            text: text.into(),
        });
        ok
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.status != Status::Fail)
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Text => {
                let mut s = format!("# {}\n", self.title);
                for l in &self.lines {
                    let _ = match l.tag {
                        Some(tag) => writeln!(s, "{} [{}] {}", l.status.word(), tag, l.text),
                        None => writeln!(s, "{} {}", l.status.word(), l.text),
                    };
                }
                let _ = writeln!(s, "{}", if self.passed() { "result: pass" } else { "result: FAIL" });
                s
            }
            ReportFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let _ = w.write_record(["status", "tag", "text"]);
                for l in &self.lines {
                    let _ = w.write_record([l.status.word(), l.tag.unwrap_or(""), &l.text]);
                }
                String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
            }
            ReportFormat::Json => {
                #[derive(Serialize)]
                struct Out<'a> {
                    #[serde(flatten)]
                    report: &'a Report,
                    passed: bool,
                }
                let out = Out {
                    report: self,
                    passed: self.passed(),
                };
                serde_json::to_string_pretty(&out).unwrap_or_default() + "\n"
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders() {
        let mut r = Report::new("demo");
        r.info("n = 2");
        assert!(r.check("invariance", true, "0 violations"));
        assert!(r.passed());
        let text = r.render(ReportFormat::Text);
        assert_eq!(text, "# demo\nINFO n = 2\nPASS [invariance] 0 violations\nresult: pass\n");
        r.check("row-sum", false, "map 3, with, commas");
        assert!(!r.passed());
        let csv = r.render(ReportFormat::Csv);
        assert!(csv.contains("FAIL,row-sum,\"map 3, with, commas\""));
        let json: serde_json::Value = serde_json::from_str(&r.render(ReportFormat::Json)).unwrap();
        assert_eq!(json["passed"], false);
        assert_eq!(json["lines"][1]["tag"], "invariance");
    }
}
