//! Report output as JSON, CSV or plain text.

use std::fmt::Write as _;

use serde::Serialize;

use crate::cryptosystem::Cryptosystem;
use crate::error::{Error, Result};
use crate::gap::GapReport;
use crate::io::{CryptosystemDoc, InputDoc};
use crate::notions::{LemmaRecord, NotionReport};
use crate::rational::{format_rational, Rational};
use crate::verify::VerifySummary;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(Error::Parse(format!(
                "unknown format `{other}`, expected json, csv or text"
            ))),
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

fn compact<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("reports always serialize")
}

/// `(notion, value, certificate)` rows.
fn csv_rows(rows: &[(String, String, String)]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["notion", "value", "certificate"])
        .expect("writing to memory");
    for (a, b, c) in rows {
        w.write_record([a, b, c]).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is UTF-8")
}

fn row(notion: &str, value: &Rational, cert: String) -> (String, String, String) {
    (notion.to_string(), format_rational(value), cert)
}

pub fn notion_report(r: &NotionReport, format: Format) -> String {
    let c = &r.certificates;
    match format {
        Format::Json => json(r),
        Format::Csv => csv_rows(&[
            row("ind", &r.eps_ind, compact(&c.ind)),
            row("ps_cs", &r.eps_ps_cs_sup, compact(&c.ps_cs)),
            row("ps_cm", &r.eps_ps_cm_sup, compact(&c.ps_cm)),
            row("ps_sm", &r.eps_ps_sm_sup, compact(&c.ps_sm)),
            row("ss", &r.eps_ss_sup, compact(&c.ss)),
        ]),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "channel: {} messages x {} cryptograms",
                r.messages.len(),
                r.cryptograms.len()
            );
            if let Some(ds) = r.doubly_stochastic {
                let _ = writeln!(s, "doubly stochastic: {ds}");
            }
            let _ = writeln!(
                s,
                "grid: resolution {}, {} distributions",
                r.grid_resolution, r.grid_points
            );
            let dist = |d: &[Rational]| d.iter().map(format_rational).collect::<Vec<_>>().join(" ");
            let _ = writeln!(
                s,
                "IND     {}  pair ({}, {})",
                r.eps_ind, c.ind.m0, c.ind.m1
            );
            let _ = writeln!(
                s,
                "PS^cs   {}  at [{}] message {}",
                r.eps_ps_cs_sup,
                dist(&c.ps_cs.distribution),
                c.ps_cs.message.as_deref().unwrap_or("-")
            );
            let _ = writeln!(
                s,
                "PS^cm   {}  at [{}]",
                r.eps_ps_cm_sup,
                dist(&c.ps_cm.distribution)
            );
            let _ = writeln!(
                s,
                "PS^sm   {}  at [{}] cryptogram {}",
                r.eps_ps_sm_sup,
                dist(&c.ps_sm.distribution),
                c.ps_sm.cryptogram.as_deref().unwrap_or("-")
            );
            let _ = write!(
                s,
                "SS      {}  at [{}]",
                r.eps_ss_sup,
                dist(&c.ss.distribution)
            );
            if let Some(d) = &c.ss.distinguisher {
                let _ = write!(
                    s,
                    " f = {{{}}} q = {} h = {{{}}}",
                    d.f.join(", "),
                    d.q,
                    d.h.join(", ")
                );
            }
            s.push('\n');
            s
        }
    }
}

pub fn cryptosystem(sys: &Cryptosystem, format: Format) -> String {
    match format {
        Format::Json => json(&InputDoc::Cryptosystem(CryptosystemDoc::from(sys))),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["key", "probability", "message", "cryptogram"])
                .expect("writing to memory");
            for (k, key) in sys.keys().symbols().iter().enumerate() {
                let p = format_rational(sys.key_dist().prob(k));
                for (m, msg) in sys.messages().symbols().iter().enumerate() {
                    let c = sys.cryptograms().symbol(sys.encrypt(m, k));
                    w.write_record([key.as_str(), &p, msg, c])
                        .expect("writing to memory");
                }
            }
            String::from_utf8(w.into_inner().expect("flush to memory")).expect("UTF-8")
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{} keys", sys.keys().len());
            for (k, key) in sys.keys().symbols().iter().enumerate() {
                let images: Vec<String> = sys
                    .messages()
                    .symbols()
                    .iter()
                    .enumerate()
                    .map(|(m, msg)| {
                        format!("{msg}->{}", sys.cryptograms().symbol(sys.encrypt(m, k)))
                    })
                    .collect();
                let _ = writeln!(s, "{key}  {}  {}", sys.key_dist().prob(k), images.join(" "));
            }
            s
        }
    }
}

pub fn gap_report(r: &GapReport, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => {
            let mut rows = vec![
                row("ind", &r.eps_ind, compact(&r.eps_ind_pair)),
                row("ps_sm_uniform", &r.eps_ps_sm_uniform, String::new()),
                row(
                    "insecure_cryptogram_probability",
                    &r.insecure_cryptogram_probability,
                    String::new(),
                ),
            ];
            for (c, d) in r.posterior_distances.iter().enumerate() {
                rows.push(row(
                    &format!("posterior_distance_c{}", c + 1),
                    d,
                    String::new(),
                ));
            }
            for (name, v) in [
                ("ps_cs_sup", &r.eps_ps_cs_sup),
                ("ps_cm_sup", &r.eps_ps_cm_sup),
                ("ps_sm_sup", &r.eps_ps_sm_sup),
                ("ss_sup", &r.eps_ss_sup),
            ] {
                if let Some(v) = v {
                    rows.push(row(name, v, String::new()));
                }
            }
            csv_rows(&rows)
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "n = {}, delta = {}", r.n, r.delta);
            let _ = writeln!(
                s,
                "IND                  {}  pair ({}, {})",
                r.eps_ind, r.eps_ind_pair.m0, r.eps_ind_pair.m1
            );
            let _ = writeln!(s, "PS^sm (uniform)      {}", r.eps_ps_sm_uniform);
            let _ = writeln!(
                s,
                "Pr[C in {{c1, c2}}]    {}",
                r.insecure_cryptogram_probability
            );
            for (name, v) in [
                ("PS^cs sup", &r.eps_ps_cs_sup),
                ("PS^cm sup", &r.eps_ps_cm_sup),
                ("PS^sm sup", &r.eps_ps_sm_sup),
                ("SS sup", &r.eps_ss_sup),
            ] {
                if let Some(v) = v {
                    let _ = writeln!(s, "{name:<20} {v}");
                }
            }
            for skip in &r.skipped {
                let _ = writeln!(s, "skipped: {skip}");
            }
            let _ = writeln!(s, "synthesized cipher: {} keys", r.key_count);
            s
        }
    }
}

pub fn verify_summary(v: &VerifySummary, format: Format) -> String {
    match format {
        Format::Json => json(v),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["check", "passed", "failed"])
                .expect("writing to memory");
            for t in &v.tallies {
                w.write_record([t.check.clone(), t.passed.to_string(), t.failed.to_string()])
                    .expect("writing to memory");
            }
            String::from_utf8(w.into_inner().expect("flush to memory")).expect("UTF-8")
        }
        Format::Text => {
            let c = &v.config;
            let mut s = String::new();
            let _ = writeln!(
                s,
                "seed {} count {} sizes {}..={} grid {} ss-cap {}",
                c.seed, c.count, c.min_size, c.max_size, c.grid, c.ss_cap
            );
            for t in &v.tallies {
                let _ = writeln!(
                    s,
                    "{:<24} passed {:>6}  failed {:>4}",
                    t.check, t.passed, t.failed
                );
            }
            for ce in &v.counterexamples {
                let _ = writeln!(s, "COUNTEREXAMPLE {}: {}", ce.check, ce.detail);
                let _ = writeln!(s, "{}", compact(&ce.instance));
            }
            let _ = writeln!(s, "{}", if v.all_passed() { "ALL PASS" } else { "FAIL" });
            s
        }
    }
}

pub fn lemma_record(r: &LemmaRecord, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["lhs", "rhs", "abs_ad_minus_bc", "holds"])
                .expect("writing to memory");
            w.write_record([
                format_rational(&r.lhs),
                format_rational(&r.rhs),
                format_rational(&r.abs_ad_minus_bc),
                r.holds.to_string(),
            ])
            .expect("writing to memory");
            String::from_utf8(w.into_inner().expect("flush to memory")).expect("UTF-8")
        }
        Format::Text => format!(
            "lhs {}\nrhs {}\n|ad-bc| {}\nlhs = 2 rhs: {}\n",
            r.lhs, r.rhs, r.abs_ad_minus_bc, r.holds
        ),
    }
}
