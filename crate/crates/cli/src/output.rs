//! Rendering of results as JSON, TSV or aligned text. Torsion prints as
//! `Z/p^e`, free parts as `R^r`.

use std::fmt::Write as _;

use clap::ValueEnum;
use hecke_core::specseq::{Assembled, Page};
use hecke_core::HomologySummary;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Pretty,
}

pub fn json_string(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

pub fn summary(h: &HomologySummary, p: u64, format: Format) -> String {
    match format {
        Format::Json => json_string(&serde_json::to_value(h).expect("serializable")),
        Format::Tsv => {
            let mut out = String::from("n\ti\tw\tgroup\n");
            for (&(n, i, w), g) in &h.entries {
                let _ = writeln!(out, "{n}\t{i}\t{w}\t{}", g.render(p));
            }
            out
        }
        Format::Pretty => {
            let mut out = String::new();
            let _ = writeln!(out, "{:>4} {:>5} {:>4}  group", "n", "i", "w");
            for (&(n, i, w), g) in &h.entries {
                let _ = writeln!(out, "{n:>4} {i:>5} {w:>4}  {}", g.render(p));
            }
            out
        }
    }
}

pub fn page(pg: &Page, p: u64, format: Format) -> String {
    match format {
        Format::Json => json_string(&pg.to_json_value()),
        Format::Tsv => pg.to_tsv(p),
        Format::Pretty => {
            let mut out = String::new();
            let _ = writeln!(out, "page {}", pg.r);
            let _ = writeln!(out, "{:>4} {:>5} {:>4}  group", "s", "t", "w");
            for (&(s, t, w), g) in &pg.entries {
                let _ = writeln!(out, "{s:>4} {t:>5} {w:>4}  {}", g.render(p));
            }
            out
        }
    }
}

pub fn assembled(a: &Assembled, p: u64, format: Format) -> String {
    match format {
        Format::Json => json_string(&a.to_json_value()),
        Format::Tsv => {
            let mut out = String::from("w\tdegree\tgroup\n");
            for (&(w, d), g) in &a.entries {
                let _ = writeln!(out, "{w}\t{d}\t{}", g.render(p));
            }
            out
        }
        Format::Pretty => {
            let mut out = String::new();
            let weights: std::collections::BTreeSet<u32> = a.entries.keys().map(|k| k.0).collect();
            for w in weights {
                let _ = writeln!(out, "weight {w}: {}", a.render(w, p));
            }
            out
        }
    }
}

/// A list of integers, one per line in TSV, comma-separated when pretty.
pub fn integers(label: &str, xs: &[u64], format: Format) -> String {
    match format {
        Format::Json => json_string(&json!({ label: xs })),
        Format::Tsv => {
            let mut out = format!("i\t{label}\n");
            for (i, x) in xs.iter().enumerate() {
                let _ = writeln!(out, "{i}\t{x}");
            }
            out
        }
        Format::Pretty => xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",") + "\n",
    }
}
