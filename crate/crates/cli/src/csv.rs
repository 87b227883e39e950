//! CSV emission and parsing for time series.
//!
//! Format: header `t,n1,n2,n3,engine`, one row per sample, engines in fixed
//! order and times ascending within each engine, LF line endings. Values are
//! printed with 17 significant digits so parsing an emitted file reproduces
//! every f64 bit-exactly.

use std::io::{self, Write};
use triosc::{Engine, TimeSeries};

/// Writes series sorted by engine label, then time.
pub fn write_csv<W: Write>(mut w: W, series: &[TimeSeries]) -> io::Result<()> {
    w.write_all(b"t,n1,n2,n3,engine\n")?;
    for engine in Engine::ALL {
        for s in series.iter().filter(|s| s.engine == engine) {
            for i in 0..s.len() {
                writeln!(
                    w,
                    "{:.16e},{:.16e},{:.16e},{:.16e},{}",
                    s.times[i],
                    s.n1[i],
                    s.n2[i],
                    s.n3[i],
                    engine.label()
                )?;
            }
        }
    }
    Ok(())
}

pub fn format_csv(series: &[TimeSeries]) -> String {
    let mut buffer = Vec::new();
    write_csv(&mut buffer, series).expect("in-memory write");
    String::from_utf8(buffer).expect("csv is ascii")
}

/// One parsed CSV record.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub t: f64,
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
    pub engine: Engine,
}

/// Parses text produced by [`write_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>, String> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "t,n1,n2,n3,engine")) => {}
        other => return Err(format!("bad header: {:?}", other.map(|(_, h)| h))),
    }
    let mut rows = Vec::new();
    for (index, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(format!("line {}: expected 5 fields, got {}", index + 1, fields.len()));
        }
        let num = |i: usize| -> Result<f64, String> {
            fields[i]
                .parse::<f64>()
                .map_err(|_| format!("line {}: bad number `{}`", index + 1, fields[i]))
        };
        let engine = Engine::from_label(fields[4])
            .ok_or_else(|| format!("line {}: unknown engine `{}`", index + 1, fields[4]))?;
        rows.push(CsvRow { t: num(0)?, n1: num(1)?, n2: num(2)?, n3: num(3)?, engine });
    }
    Ok(rows)
}

/// A gnuplot script plotting the three modes of each engine from `csv_path`.
pub fn gnuplot_script(csv_path: &str, engines: &[Engine]) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator \",\"\n");
    s.push_str("set xlabel \"t\"\n");
    s.push_str("set ylabel \"mean photon number\"\n");
    s.push_str("set key outside\n");
    s.push_str("plot \\\n");
    let mut clauses = Vec::new();
    for engine in engines {
        for (column, mode) in [(2, "n1"), (3, "n2"), (4, "n3")] {
            clauses.push(format!(
                "  \"{csv_path}\" using 1:(strcol(5) eq \"{engine}\" ? ${column} : NaN) \
                 with lines title \"{mode} ({engine})\"",
            ));
        }
    }
    s.push_str(&clauses.join(", \\\n"));
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use triosc::evolve::analytic_series;
    use triosc::SystemParams;

    fn sample_series() -> TimeSeries {
        let p = SystemParams::new(4.0, 0.5, 0.5, 10.0, Complex64::new(4.0, 0.0)).unwrap();
        let times: Vec<f64> = (0..40).map(|i| 0.37 * i as f64).collect();
        analytic_series(&p, &times)
    }

    #[test]
    fn header_and_shape() {
        let series = sample_series();
        let text = format_csv(std::slice::from_ref(&series));
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,n1,n2,n3,engine");
        assert_eq!(text.lines().count(), 41);
        assert!(!text.contains('\r'));
        assert!(text.lines().skip(1).all(|l| l.ends_with(",analytic")));
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let series = sample_series();
        let rows = parse_csv(&format_csv(std::slice::from_ref(&series))).unwrap();
        assert_eq!(rows.len(), series.len());
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.t.to_bits(), series.times[i].to_bits());
            assert_eq!(row.n1.to_bits(), series.n1[i].to_bits());
            assert_eq!(row.n2.to_bits(), series.n2[i].to_bits());
            assert_eq!(row.n3.to_bits(), series.n3[i].to_bits());
            assert_eq!(row.engine, Engine::Analytic);
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_csv("nope\n").is_err());
        assert!(parse_csv("t,n1,n2,n3,engine\n1,2,3\n").is_err());
        assert!(parse_csv("t,n1,n2,n3,engine\n1,2,3,4,warp\n").is_err());
    }
}
