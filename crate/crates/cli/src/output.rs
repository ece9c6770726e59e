//! Fixed-format number rendering and CSV assembly.

use std::io::Write;

use crate::config::ScenarioConfig;
use crate::error::CliError;

/// Format like C's `%.12e`: twelve mantissa digits, signed exponent with at
/// least two digits.
pub fn fmt_sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// A table of named float columns over a shared first column.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub key: String,
    pub keys: Vec<f64>,
    pub columns: Vec<(String, Vec<f64>)>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }

    /// `#` comment lines with the effective config, a header row, then one
    /// row per key, `\n`-terminated.
    pub fn write_csv<W: Write>(&self, cfg: &ScenarioConfig, command: &str, mut out: W) -> Result<(), CliError> {
        writeln!(out, "# magnus {command}")?;
        let mut shown = cfg.clone();
        shown.out = None;
        for line in shown.to_config_string().lines() {
            writeln!(out, "# {line}")?;
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let mut header = vec![self.key.clone()];
        header.extend(self.columns.iter().map(|(n, _)| n.clone()));
        w.write_record(&header)?;
        for (i, k) in self.keys.iter().enumerate() {
            let mut row = vec![fmt_sci(*k)];
            row.extend(self.columns.iter().map(|(_, v)| fmt_sci(v[i])));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self, cfg: &ScenarioConfig, command: &str) -> Result<String, CliError> {
        let mut buf = Vec::new();
        self.write_csv(cfg, command, &mut buf)?;
        Ok(String::from_utf8(buf).expect("ascii output"))
    }
}
