//! Batch pipeline: triple-file ingestion, parallel gain reports with a
//! deterministic order, selection criteria by c-band, and CSV emission
//! (full report, histograms, scatter data).

use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::gains::{full_report, AbcTriple, GainReport};

/// Fixed column order of the report CSV.
pub const REPORT_COLUMNS: &str =
    "a,b,c,quality,rag,rag_d,rpg,mpag,mpag_star,mpag_d,mpg,sag,sag_p,sag_d,spg,cag,cpg";

/// A line-level ingestion failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Result of lenient parsing: the valid triples plus per-line diagnostics
/// for the skipped ones.
#[derive(Debug, Default)]
pub struct ParsedTriples {
    pub triples: Vec<AbcTriple>,
    pub skipped: Vec<ParseError>,
}

/// Parses a line-oriented triple file: `a b c` in decimal, extra trailing
/// columns ignored, `#` starts a comment, blank lines skipped. In strict
/// mode the first bad line aborts; in lenient mode bad lines are collected
/// as warnings.
pub fn parse_triples<R: BufRead>(
    reader: R,
    strict: bool,
) -> std::result::Result<ParsedTriples, ParseError> {
    let mut out = ParsedTriples::default();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| ParseError {
            line: lineno,
            message: format!("read error: {e}"),
        })?;
        let content = match line.find('#') {
            Some(pos) => &line[..pos],
            None => &line[..],
        };
        if content.trim().is_empty() {
            continue;
        }
        match parse_line(content) {
            Ok(t) => out.triples.push(t),
            Err(message) => {
                let err = ParseError {
                    line: lineno,
                    message,
                };
                if strict {
                    return Err(err);
                }
                out.skipped.push(err);
            }
        }
    }
    Ok(out)
}

fn parse_line(content: &str) -> std::result::Result<AbcTriple, String> {
    let mut fields = content.split_whitespace();
    let mut next = |name: &str| -> std::result::Result<BigUint, String> {
        let tok = fields
            .next()
            .ok_or_else(|| format!("missing column {name}"))?;
        BigUint::from_str(tok).map_err(|_| format!("malformed integer `{tok}`"))
    };
    let a = next("a")?;
    let b = next("b")?;
    let c = next("c")?;
    AbcTriple::new(a, b, c).map_err(|e| e.to_string())
}

/// One row of the batch output.
#[derive(Debug, Clone)]
pub struct ReportRow {
    pub triple: AbcTriple,
    pub report: GainReport,
}

/// Computes a report per triple on a pool of `parallelism` workers
/// (0 = default) and returns rows sorted by `(c, a)`, so the output is
/// identical at any parallelism level.
pub fn batch_report(triples: Vec<AbcTriple>, parallelism: usize) -> Result<Vec<ReportRow>> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))?;
    let mut rows: Vec<ReportRow> = pool.install(|| {
        triples
            .into_par_iter()
            .map(|triple| {
                let report = full_report(&triple);
                ReportRow { triple, report }
            })
            .collect()
    });
    rows.sort_by(|x, y| (x.triple.c(), x.triple.a()).cmp(&(y.triple.c(), y.triple.a())));
    Ok(rows)
}

/// The gain metrics addressable by name in histograms, scatter plots and
/// selection criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Quality,
    Rag,
    Rpg,
    Mpag,
    Mpg,
    Sag,
    Spg,
    Cag,
    Cpg,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Quality => "quality",
            Metric::Rag => "rag",
            Metric::Rpg => "rpg",
            Metric::Mpag => "mpag",
            Metric::Mpg => "mpg",
            Metric::Sag => "sag",
            Metric::Spg => "spg",
            Metric::Cag => "cag",
            Metric::Cpg => "cpg",
        }
    }

    pub fn value(self, report: &GainReport) -> f64 {
        match self {
            Metric::Quality => report.quality,
            Metric::Rag => report.rag,
            Metric::Rpg => report.rpg,
            Metric::Mpag => report.mpag,
            Metric::Mpg => report.mpg,
            Metric::Sag => report.sag,
            Metric::Spg => report.spg,
            Metric::Cag => report.cag,
            Metric::Cpg => report.cpg,
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quality" | "qu" => Ok(Metric::Quality),
            "rag" => Ok(Metric::Rag),
            "rpg" => Ok(Metric::Rpg),
            "mpag" => Ok(Metric::Mpag),
            "mpg" => Ok(Metric::Mpg),
            "sag" => Ok(Metric::Sag),
            "spg" => Ok(Metric::Spg),
            "cag" => Ok(Metric::Cag),
            "cpg" => Ok(Metric::Cpg),
            other => Err(Error::UnknownMetric(other.to_string())),
        }
    }
}

/// One c-band of selection thresholds. A row in the band is selected when
/// ANY present threshold is exceeded; a band with no thresholds selects
/// everything.
#[derive(Debug, Clone, PartialEq)]
pub struct Band {
    pub c_min: BigUint,
    /// Exclusive upper bound; `None` means unbounded.
    pub c_max: Option<BigUint>,
    pub rag: Option<f64>,
    pub rpg: Option<f64>,
    pub mpag: Option<f64>,
    pub mpg: Option<f64>,
    pub sag: Option<f64>,
    pub spg: Option<f64>,
}

impl Band {
    fn contains(&self, c: &BigUint) -> bool {
        c >= &self.c_min && self.c_max.as_ref().is_none_or(|m| c < m)
    }

    fn selects(&self, report: &GainReport) -> bool {
        let thresholds = [
            (self.rag, report.rag),
            (self.rpg, report.rpg),
            (self.mpag, report.mpag),
            (self.mpg, report.mpg),
            (self.sag, report.sag),
            (self.spg, report.spg),
        ];
        if thresholds.iter().all(|(t, _)| t.is_none()) {
            return true;
        }
        thresholds.iter().any(|(t, v)| t.is_some_and(|t| *v > t))
    }
}

/// Disjoint, ordered bands covering every `c >= 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportCriteria {
    pub bands: Vec<Band>,
}

impl ReportCriteria {
    /// Parses the band-per-line format
    /// `c_min c_max rag rpg mpag mpg sag spg`
    /// with `inf` for the open upper bound and `none` for an absent
    /// threshold. Bands must be contiguous, start at or below 3, and end
    /// unbounded.
    pub fn parse(text: &str) -> Result<Self> {
        let mut bands = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            if line.trim().is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 8 {
                return Err(Error::InvalidCriteria(format!(
                    "line {lineno}: expected 8 columns, got {}",
                    toks.len()
                )));
            }
            let c_min = BigUint::from_str(toks[0]).map_err(|_| {
                Error::InvalidCriteria(format!("line {lineno}: bad c_min `{}`", toks[0]))
            })?;
            let c_max = if toks[1] == "inf" {
                None
            } else {
                Some(BigUint::from_str(toks[1]).map_err(|_| {
                    Error::InvalidCriteria(format!("line {lineno}: bad c_max `{}`", toks[1]))
                })?)
            };
            let threshold = |tok: &str| -> Result<Option<f64>> {
                if tok == "none" {
                    Ok(None)
                } else {
                    tok.parse::<f64>().map(Some).map_err(|_| {
                        Error::InvalidCriteria(format!("line {lineno}: bad threshold `{tok}`"))
                    })
                }
            };
            bands.push(Band {
                c_min,
                c_max,
                rag: threshold(toks[2])?,
                rpg: threshold(toks[3])?,
                mpag: threshold(toks[4])?,
                mpg: threshold(toks[5])?,
                sag: threshold(toks[6])?,
                spg: threshold(toks[7])?,
            });
        }
        let criteria = Self { bands };
        criteria.validate()?;
        Ok(criteria)
    }

    fn validate(&self) -> Result<()> {
        if self.bands.is_empty() {
            return Err(Error::InvalidCriteria("no bands".into()));
        }
        if self.bands[0].c_min > BigUint::from(3u32) {
            return Err(Error::InvalidCriteria(
                "first band must start at c <= 3".into(),
            ));
        }
        for pair in self.bands.windows(2) {
            match &pair[0].c_max {
                Some(m) if *m == pair[1].c_min => {}
                _ => {
                    return Err(Error::InvalidCriteria(
                        "bands must be contiguous and ordered".into(),
                    ))
                }
            }
        }
        if self.bands.last().unwrap().c_max.is_some() {
            return Err(Error::InvalidCriteria(
                "last band must be unbounded (c_max = inf)".into(),
            ));
        }
        Ok(())
    }

    pub fn selects(&self, row: &ReportRow) -> bool {
        self.bands
            .iter()
            .find(|b| b.contains(row.triple.c()))
            .is_some_and(|b| b.selects(&row.report))
    }
}

/// Keeps the rows selected by the criteria.
pub fn filter_criteria(rows: Vec<ReportRow>, criteria: &ReportCriteria) -> Vec<ReportRow> {
    rows.into_iter().filter(|r| criteria.selects(r)).collect()
}

/// Histogram request: metric, bin width, optional half-open value range.
#[derive(Debug, Clone)]
pub struct HistogramSpec {
    pub metric: Metric,
    pub bin_width: f64,
    pub range: Option<(f64, f64)>,
}

impl HistogramSpec {
    pub fn new(metric: Metric, bin_width: f64) -> Result<Self> {
        if bin_width.is_nan() || bin_width <= 0.0 {
            return Err(Error::InvalidCriteria("bin width must be positive".into()));
        }
        Ok(Self {
            metric,
            bin_width,
            range: None,
        })
    }
}

/// Renders a float with at most 10 significant digits, trailing zeros
/// trimmed, `.` separator, no locale.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (9 - exponent).max(0) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// `bin_start,count` CSV with `bin_start = floor(value / width) * width`,
/// ascending, empty bins omitted.
pub fn emit_histogram(rows: &[ReportRow], spec: &HistogramSpec) -> String {
    use std::collections::BTreeMap;
    let mut bins: BTreeMap<i64, u64> = BTreeMap::new();
    for row in rows {
        let v = spec.metric.value(&row.report);
        if !v.is_finite() {
            continue;
        }
        if let Some((lo, hi)) = spec.range {
            if v < lo || v >= hi {
                continue;
            }
        }
        let idx = (v / spec.bin_width).floor() as i64;
        *bins.entry(idx).or_insert(0) += 1;
    }
    let mut out = String::from("bin_start,count\n");
    for (idx, count) in bins {
        out.push_str(&format!(
            "{},{}\n",
            format_float(idx as f64 * spec.bin_width),
            count
        ));
    }
    out
}

/// `x,y` CSV of two metrics per row.
pub fn emit_scatter(rows: &[ReportRow], x: Metric, y: Metric) -> String {
    let mut out = format!("{},{}\n", x.name(), y.name());
    for row in rows {
        out.push_str(&format!(
            "{},{}\n",
            format_float(x.value(&row.report)),
            format_float(y.value(&row.report))
        ));
    }
    out
}

/// The full report CSV in the fixed column order.
pub fn emit_report_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(REPORT_COLUMNS);
    out.push('\n');
    for row in rows {
        let r = &row.report;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            row.triple.a(),
            row.triple.b(),
            row.triple.c(),
            format_float(r.quality),
            format_float(r.rag),
            r.real.degree,
            format_float(r.rpg),
            format_float(r.mpag),
            r.multiple
                .star
                .expect("multiple witness has a star")
                .label(),
            r.multiple.degree,
            format_float(r.mpg),
            format_float(r.sag),
            r.single.prime.as_ref().expect("single witness has a prime"),
            r.single.degree,
            format_float(r.spg),
            format_float(r.cag),
            format_float(r.cpg),
        ));
    }
    out
}

/// Triples rendered back into the line format accepted by
/// [`parse_triples`].
pub fn emit_triple_lines(triples: &[AbcTriple]) -> String {
    let mut out = String::new();
    for t in triples {
        out.push_str(&format!("{} {} {}\n", t.a(), t.b(), t.c()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn parse(text: &str, strict: bool) -> std::result::Result<ParsedTriples, ParseError> {
        parse_triples(Cursor::new(text.as_bytes()), strict)
    }

    #[test]
    fn parse_golden_lines() {
        let parsed = parse("# comment\n1 8 9\n", true).unwrap();
        assert_eq!(parsed.triples.len(), 1);
        assert_eq!(parsed.triples[0].c(), &BigUint::from(9u32));

        let parsed = parse("2 6436341 6436343\n", true).unwrap();
        assert_eq!(parsed.triples[0].c(), &BigUint::from(6436343u32));

        // Trailing columns ignored, inline comments stripped.
        let parsed = parse("1 8 9 1.2262 extra # note\n", true).unwrap();
        assert_eq!(parsed.triples.len(), 1);
    }

    #[test]
    fn parse_strict_aborts_with_line_number() {
        let err = parse("1 8 9\n2 57395628 6436343\n", true).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("not additive"));

        let err = parse("1 8 nine\n", true).unwrap_err();
        assert!(err.message.contains("malformed integer"));
    }

    #[test]
    fn parse_lenient_collects_warnings() {
        let parsed = parse("1 8 9\n2 4 6\nbogus\n5 27 32\n", false).unwrap();
        assert_eq!(parsed.triples.len(), 2);
        assert_eq!(parsed.skipped.len(), 2);
        assert_eq!(parsed.skipped[0].line, 2);
        assert_eq!(parsed.skipped[1].line, 3);
    }

    #[test]
    fn parse_emit_round_trip() {
        let parsed = parse("1 8 9\n5 27 32\n3 125 128\n", true).unwrap();
        let text = emit_triple_lines(&parsed.triples);
        let again = parse(&text, true).unwrap();
        assert_eq!(again.triples, parsed.triples);
    }

    #[test]
    fn batch_rows_are_sorted_by_c_then_a() {
        let parsed = parse("3 125 128\n1 8 9\n32 49 81\n1 80 81\n", true).unwrap();
        let rows = batch_report(parsed.triples, 1).unwrap();
        let keys: Vec<(String, String)> = rows
            .iter()
            .map(|r| (r.triple.c().to_string(), r.triple.a().to_string()))
            .collect();
        assert_eq!(
            keys,
            vec![
                ("9".into(), "1".into()),
                ("81".into(), "1".into()),
                ("81".into(), "32".into()),
                ("128".into(), "3".into())
            ]
        );
    }

    #[test]
    fn batch_is_deterministic_across_parallelism() {
        let text = "1 8 9\n5 27 32\n1 48 49\n1 63 64\n1 80 81\n32 49 81\n3 125 128\n";
        let p1 = parse(text, true).unwrap().triples;
        let p8 = parse(text, true).unwrap().triples;
        let csv1 = emit_report_csv(&batch_report(p1, 1).unwrap());
        let csv8 = emit_report_csv(&batch_report(p8, 8).unwrap());
        assert_eq!(csv1, csv8);
    }

    #[test]
    fn report_csv_golden_row() {
        let parsed = parse("2 6436341 6436343\n", true).unwrap();
        let rows = batch_report(parsed.triples, 1).unwrap();
        let csv = emit_report_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(REPORT_COLUMNS));
        let row = lines.next().unwrap();
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[0], "2");
        assert_eq!(fields[3], "1.629911684"); // quality
        assert_eq!(fields[4], "1.462830852"); // rag
        assert_eq!(fields[5], "5"); // rag_d
        assert_eq!(fields[8], "b"); // mpag_star
        assert_eq!(fields[12], "3"); // sag_p
    }

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(1.6299116841969533), "1.629911684");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(1.46), "1.46");
        assert_eq!(format_float(0.9012345678912345), "0.9012345679");
        assert_eq!(format_float(0.0), "0");
    }

    fn table7() -> ReportCriteria {
        ReportCriteria::parse(
            "3 1000000000000000000 1.10 2.66 1.37 1.57 1.31 1.90\n\
             1000000000000000000 9223372036854775808 0.90 2.45 1.09 1.51 1.02 1.86\n\
             9223372036854775808 inf none none none none none none\n",
        )
        .unwrap()
    }

    #[test]
    fn criteria_selects_by_band() {
        let criteria = table7();
        let parsed = parse("2 6436341 6436343\n", true).unwrap();
        let rows = batch_report(parsed.triples, 1).unwrap();
        // rag 1.46283 > 1.10 in the first band.
        assert!(criteria.selects(&rows[0]));

        // All metrics below the first band's thresholds.
        let parsed = parse("7 19 26\n", true).unwrap();
        let rows = batch_report(parsed.triples, 1).unwrap();
        assert!(!criteria.selects(&rows[0]));
        assert!(filter_criteria(rows, &criteria).is_empty());
    }

    #[test]
    fn empty_band_selects_everything() {
        let criteria = ReportCriteria::parse("3 inf none none none none none none\n").unwrap();
        let parsed = parse("7 19 26\n1 8 9\n", true).unwrap();
        let rows = batch_report(parsed.triples, 1).unwrap();
        assert_eq!(filter_criteria(rows, &criteria).len(), 2);
    }

    #[test]
    fn criteria_validation_errors() {
        assert!(ReportCriteria::parse("").is_err());
        // gap between bands
        assert!(ReportCriteria::parse(
            "3 10 none none none none none none\n20 inf none none none none none none\n"
        )
        .is_err());
        // bounded last band
        assert!(ReportCriteria::parse("3 10 none none none none none none\n").is_err());
        // starts too high
        assert!(ReportCriteria::parse("5 inf none none none none none none\n").is_err());
        assert!(ReportCriteria::parse("3 inf 1.1 none none\n").is_err());
    }

    #[test]
    fn histogram_golden() {
        let parsed = parse("2 6436341 6436343\n", true).unwrap();
        let rows = batch_report(parsed.triples, 1).unwrap();
        let spec = HistogramSpec::new(Metric::Rag, 0.01).unwrap();
        assert_eq!(emit_histogram(&rows, &spec), "bin_start,count\n1.46,1\n");

        let empty = emit_histogram(&[], &spec);
        assert_eq!(empty, "bin_start,count\n");
    }

    #[test]
    fn histogram_counts_sum_to_rows() {
        let parsed = parse("1 8 9\n5 27 32\n1 48 49\n1 63 64\n1 80 81\n", true).unwrap();
        let rows = batch_report(parsed.triples, 1).unwrap();
        let spec = HistogramSpec::new(Metric::Quality, 0.01).unwrap();
        let total: u64 = emit_histogram(&rows, &spec)
            .lines()
            .skip(1)
            .map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap())
            .sum();
        assert_eq!(total, rows.len() as u64);
    }

    #[test]
    fn scatter_emits_one_line_per_row() {
        let parsed = parse("1 8 9\n5 27 32\n", true).unwrap();
        let rows = batch_report(parsed.triples, 1).unwrap();
        let csv = emit_scatter(&rows, Metric::Quality, Metric::Rag);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "quality,rag");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn metric_names_round_trip() {
        for m in [
            Metric::Quality,
            Metric::Rag,
            Metric::Rpg,
            Metric::Mpag,
            Metric::Mpg,
            Metric::Sag,
            Metric::Spg,
            Metric::Cag,
            Metric::Cpg,
        ] {
            assert_eq!(m.name().parse::<Metric>().unwrap(), m);
        }
        assert!(matches!(
            "bogus".parse::<Metric>(),
            Err(Error::UnknownMetric(_))
        ));
    }
}
