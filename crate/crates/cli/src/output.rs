//! CSV output with a `#` metadata preamble.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

/// Formats like C `%.17g`: 17 significant digits, trailing zeros removed,
/// exponent form below 1e-4 and from 1e17.
pub fn g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mant), exp.abs())
    } else {
        trim_zeros(&format!("{x:.*}", (16 - exp) as usize)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Quotes a field when it holds a separator, quote or line break.
pub fn field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A CSV document: metadata comments, a header row and data rows.
#[derive(Debug, Clone)]
pub struct Csv {
    text: String,
    columns: usize,
}

/// One cell of a row.
pub enum Cell<'a> {
    Num(f64),
    Int(u64),
    Text(&'a str),
    Bool(bool),
}

impl Csv {
    pub fn new(meta: &[(String, String)], header: &[&str]) -> Self {
        let mut text = format!("# cantor-evt {}\n", env!("CARGO_PKG_VERSION"));
        for (k, v) in meta {
            let _ = writeln!(text, "# {k}={v}");
        }
        text.push_str(&header.join(","));
        text.push('\n');
        Csv {
            text,
            columns: header.len(),
        }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        assert_eq!(cells.len(), self.columns, "row width matches the header");
        let parts: Vec<String> = cells
            .iter()
            .map(|c| match c {
                Cell::Num(v) => g17(*v),
                Cell::Int(v) => v.to_string(),
                Cell::Text(s) => field(s),
                Cell::Bool(b) => b.to_string(),
            })
            .collect();
        self.text.push_str(&parts.join(","));
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// Writes to `path`, or to standard output when absent.
pub fn emit(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}
