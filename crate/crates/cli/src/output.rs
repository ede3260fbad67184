use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::args::OutputArgs;

pub fn sink(out: &OutputArgs) -> Result<Box<dyn Write>> {
    Ok(match &out.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json<T: Serialize>(out: &OutputArgs, value: &T) -> Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// 17 significant digits, enough to round-trip any double.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_index(i: Option<usize>) -> String {
    i.map(|i| i.to_string()).unwrap_or_default()
}

pub struct Csv {
    w: Box<dyn Write>,
}

impl Csv {
    pub fn new(out: &OutputArgs, header: &[String]) -> Result<Self> {
        let mut csv = Self { w: sink(out)? };
        csv.row(header)?;
        Ok(csv)
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        writeln!(self.w, "{}", fields.join(","))?;
        Ok(())
    }

    /// A `#` record, skipped by readers that honour comments.
    pub fn comment(&mut self, key: &str, value: impl std::fmt::Display) -> Result<()> {
        writeln!(self.w, "# {key},{value}")?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 123456.789, f64::MIN_POSITIVE, -0.0] {
            assert_eq!(num(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(num(f64::INFINITY).parse::<f64>().unwrap(), f64::INFINITY);
    }

    #[test]
    fn indices() {
        assert_eq!(opt_index(Some(3)), "3");
        assert_eq!(opt_index(None), "");
    }
}
