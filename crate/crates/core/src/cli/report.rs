use serde_json::{json, Map, Value};

use super::cert;
use super::document::{parse_document, Document, ParseOptions};
use super::run::{run, run_assertion, Entry, RunOptions, Verdict};

pub const TOOL: &str = "gendiv";

#[derive(Clone, Debug)]
pub struct Report {
    pub source: String,
    pub options: (ParseOptions, RunOptions),
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn build(doc: &Document, opts: &RunOptions) -> Report {
        Report { source: doc.source.clone(), options: (doc.options.clone(), opts.clone()), entries: run(doc, opts) }
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.entries.iter().filter(|e| e.verdict == v).count()
    }

    /// 0 all pass, 1 any failure, 2 unknowns without failures, 3 errors.
    pub fn exit_code(&self) -> i32 {
        if self.count(Verdict::Error) > 0 {
            3
        } else if self.count(Verdict::Fail) > 0 {
            1
        } else if self.count(Verdict::Unknown) > 0 {
            2
        } else {
            0
        }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!("CHECK {} {} {}\n", e.check, e.verdict.label(), e.detail));
        }
        out.push_str(&format!(
            "SUMMARY pass={} fail={} unknown={} error={}\n",
            self.count(Verdict::Pass),
            self.count(Verdict::Fail),
            self.count(Verdict::Unknown),
            self.count(Verdict::Error)
        ));
        out
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| {
                json!({
                    "index": i,
                    "line": e.line,
                    "check": e.check,
                    "assertion": e.assertion,
                    "verdict": e.verdict.label(),
                    "detail": e.detail,
                    "certificates": e.certificates,
                })
            })
            .collect();
        json!({
            "tool": TOOL,
            "version": env!("CARGO_PKG_VERSION"),
            "document": self.source,
            "options": {
                "bound": self.options.1.bound,
                "trust_primes": self.options.0.trust_primes,
            },
            "entries": entries,
            "summary": {
                "pass": self.count(Verdict::Pass),
                "fail": self.count(Verdict::Fail),
                "unknown": self.count(Verdict::Unknown),
                "error": self.count(Verdict::Error),
            },
        })
    }

    /// Pretty JSON with sorted keys (serde_json maps are ordered).
    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&sort(self.to_json())).expect("serializable");
        s.push('\n');
        s
    }
}

fn sort(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut pairs: Vec<(String, Value)> = m.into_iter().collect();
            pairs.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(pairs.into_iter().map(|(k, v)| (k, sort(v))).collect::<Map<_, _>>())
        }
        Value::Array(a) => Value::Array(a.into_iter().map(sort).collect()),
        v => v,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecheckLine {
    pub index: usize,
    pub check: String,
    pub certificates: usize,
    pub problem: Option<String>,
}

/// Re-parses the embedded document, re-validates every certificate and
/// re-runs every assertion, comparing verdicts and details.
pub fn recheck(report: &Value) -> Result<Vec<RecheckLine>, String> {
    if report["tool"] != TOOL {
        return Err("not a gendiv report".into());
    }
    let source = report["document"].as_str().ok_or("report has no document")?;
    let popts = ParseOptions { trust_primes: report["options"]["trust_primes"].as_bool().unwrap_or(false) };
    let ropts = RunOptions { bound: report["options"]["bound"].as_u64().map(|b| b as u32), jobs: None };
    let doc = parse_document(source, &popts).map_err(|e| format!("embedded document does not parse: {}", e))?;
    let asserts: Vec<_> = doc.assertions().collect();
    let entries = report["entries"].as_array().ok_or("report has no entries")?;
    if entries.len() != asserts.len() {
        return Err(format!("{} entries for {} assertions", entries.len(), asserts.len()));
    }
    let mut out = Vec::new();
    for (i, (e, a)) in entries.iter().zip(&asserts).enumerate() {
        let fresh = run_assertion(&doc, a, &ropts);
        let certs = e["certificates"].as_array().cloned().unwrap_or_default();
        let data: Vec<Value> = fresh.certificates.iter().filter(|c| c["type"] == "recomputed").map(|c| c["data"].clone()).collect();
        let mut problem = None;
        if e["verdict"] != fresh.verdict.label() || e["detail"] != fresh.detail.as_str() {
            problem = Some(format!("recomputed {} {} differs", fresh.verdict.label(), fresh.detail));
        }
        if e["verdict"] == "PASS" && certs.len() < 2 {
            problem.get_or_insert_with(|| "PASS entry without a certificate".into());
        }
        for (k, c) in certs.iter().enumerate() {
            if let Err(why) = cert::verify(&doc, c, &data) {
                problem.get_or_insert_with(|| format!("certificate {}: {}", k, why));
            }
        }
        out.push(RecheckLine { index: i, check: e["check"].as_str().unwrap_or("?").to_string(), certificates: certs.len(), problem });
    }
    Ok(out)
}
