//! The `gendiv` command line: document parsing, assertion runs, reports,
//! certificate rechecks and canonical formatting.

pub mod cert;
mod document;
mod report;
mod run;

pub use document::{parse_document, Assertion, Check, DivisorSource, Document, Entity, Item, ParseOptions, StackSource, ASSERT_KINDS};
pub use report::{recheck, RecheckLine, Report, TOOL};
pub use run::{run, run_assertion, Entry, RunOptions, Verdict};

/// Output and exit status of one subcommand.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn input_error(msg: String) -> CommandOutput {
    CommandOutput { stdout: String::new(), stderr: format!("error: {}\n", msg), code: 3 }
}

pub fn check_text(text: &str, parse: &ParseOptions, run: &RunOptions, json: bool) -> CommandOutput {
    let doc = match parse_document(text, parse) {
        Ok(d) => d,
        Err(e) => return input_error(e.to_string()),
    };
    let report = Report::build(&doc, run);
    let stdout = if json { report.json() } else { report.text() };
    CommandOutput { stdout, stderr: String::new(), code: report.exit_code() }
}

pub fn recheck_text(json: &str) -> CommandOutput {
    let value: serde_json::Value = match serde_json::from_str(json) {
        Ok(v) => v,
        Err(e) => return input_error(format!("report is not JSON: {}", e)),
    };
    match recheck(&value) {
        Ok(lines) => {
            let mut out = String::new();
            let mut bad = 0;
            for l in &lines {
                match &l.problem {
                    None => out.push_str(&format!("RECHECK {} {} OK certificates={}\n", l.index, l.check, l.certificates)),
                    Some(p) => {
                        bad += 1;
                        out.push_str(&format!("RECHECK {} {} FAILED {}\n", l.index, l.check, p));
                    }
                }
            }
            out.push_str(&format!("RECHECK SUMMARY ok={} failed={}\n", lines.len() - bad, bad));
            CommandOutput { stdout: out, stderr: String::new(), code: if bad == 0 { 0 } else { 1 } }
        }
        Err(e) => input_error(e),
    }
}

pub fn fmt_text(text: &str) -> CommandOutput {
    match parse_document(text, &ParseOptions { trust_primes: true }) {
        Ok(d) => CommandOutput { stdout: d.canonical(), stderr: String::new(), code: 0 },
        Err(e) => input_error(e.to_string()),
    }
}
