//! Record emission in JSON lines, CSV or plain text, and element printing.

use std::io::{self, Stdout, Write};

use anyhow::Result;
use clap::ValueEnum;
use serde_json::{Map, Value};
use xrh_core::ff::{FieldCtx, Fq, Fq2};
use xrh_core::poly::{LaurentPoly, UniPoly};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Writes records to stdout. JSON records carry the tool version and, when
/// a field is given, p, k and both moduli. CSV takes its header from the
/// first record.
pub struct Emitter {
    format: Format,
    csv: Option<(csv::Writer<Stdout>, Vec<String>)>,
}

impl Emitter {
    pub fn new(format: Format) -> Self {
        Emitter { format, csv: None }
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn record(&mut self, ctx: Option<&FieldCtx>, body: Value, text: impl FnOnce() -> String) -> Result<()> {
        let mut obj = Map::new();
        if self.format == Format::Json {
            obj.insert("version".into(), VERSION.into());
        }
        if let Some(ctx) = ctx {
            obj.extend(field_meta(ctx));
        }
        match body {
            Value::Object(m) => obj.extend(m),
            other => {
                obj.insert("value".into(), other);
            }
        }
        match self.format {
            Format::Text => writeln!(io::stdout(), "{}", text())?,
            Format::Json => writeln!(io::stdout(), "{}", Value::Object(obj))?,
            Format::Csv => {
                if self.csv.is_none() {
                    let header: Vec<String> = obj.keys().cloned().collect();
                    let mut w = csv::Writer::from_writer(io::stdout());
                    w.write_record(&header)?;
                    self.csv = Some((w, header));
                }
                let (w, header) = self.csv.as_mut().expect("writer created above");
                w.write_record(header.iter().map(|key| obj.get(key).map(cell).unwrap_or_default()))?;
            }
        }
        Ok(())
    }

    pub fn finish(self) -> Result<()> {
        if let Some((mut w, _)) = self.csv {
            w.flush()?;
        }
        io::stdout().flush()?;
        Ok(())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn field_meta(ctx: &FieldCtx) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("p".into(), ctx.p().into());
    m.insert("k".into(), ctx.k().into());
    m.insert("mid_modulus".into(), ctx.mid_modulus_encoding().into());
    m.insert("top_modulus".into(), ctx.top_modulus_encoding().into());
    m
}

/// Prints field elements as encodings, or in polynomial-basis form.
#[derive(Clone, Copy)]
pub struct Printer<'a> {
    pub ctx: &'a FieldCtx,
    pub pretty: bool,
}

impl Printer<'_> {
    pub fn mid(&self, a: Fq) -> Value {
        if self.pretty {
            self.ctx.mid().basis_form(a).into()
        } else {
            a.0.into()
        }
    }

    pub fn top(&self, a: Fq2) -> Value {
        if self.pretty {
            self.ctx.top().basis_form(a).into()
        } else {
            a.0.into()
        }
    }

    fn coeff(&self, c: Fq) -> String {
        if !self.pretty {
            return c.0.to_string();
        }
        let s = self.ctx.mid().basis_form(c);
        if s.contains(' ') {
            format!("({s})")
        } else {
            s
        }
    }

    /// A polynomial in `a`, in the same layout as its `Display`.
    pub fn uni(&self, u: &UniPoly) -> String {
        if !self.pretty {
            return u.to_string();
        }
        let terms: Vec<String> = u
            .coeffs()
            .iter()
            .enumerate()
            .rev()
            .filter(|&(_, &c)| c != Fq(0))
            .map(|(i, &c)| match (i, c.0) {
                (0, _) => self.coeff(c),
                (1, 1) => "a".into(),
                (1, _) => format!("{}*a", self.coeff(c)),
                (i, 1) => format!("a^{i}"),
                (i, _) => format!("{}*a^{i}", self.coeff(c)),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    pub fn laurent(&self, h: &LaurentPoly) -> String {
        if !self.pretty {
            return h.to_string();
        }
        // reuse the plain layout and swap each coefficient
        let plain = h.to_string();
        if h.is_zero() {
            return plain;
        }
        h.terms2()
            .rev()
            .zip(plain.split(" + "))
            .map(|((_, c), term)| match term.split_once('*') {
                Some((_, rest)) => format!("{}*{rest}", self.coeff(c)),
                None => self.coeff(c),
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// `c*x^e` terms of f, highest exponent first.
    pub fn terms(&self, terms: &[(u64, u32)]) -> String {
        if terms.is_empty() {
            return "0".into();
        }
        terms.iter().rev().map(|&(e, c)| format!("{}*x^{e}", self.coeff(Fq(c)))).collect::<Vec<_>>().join(" + ")
    }
}
