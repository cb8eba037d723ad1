//! abc-gains: approximation-gain analysis for abc-triples.
//!
//! Exit codes: 0 success, 1 input validation failure, 2 internal error.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::ToPrimitive;

use abc_gains::gains::{full_report, AbcTriple, GainKind};
use abc_gains::padic::{
    best_padic_approx, cf_rational, explain_gain, format_digits, padic_digits, Residue,
};
use abc_gains::report::{
    batch_report, emit_histogram, emit_report_csv, emit_scatter, filter_criteria, parse_triples,
    HistogramSpec, Metric, ParsedTriples, ReportCriteria, ReportRow,
};
use abc_gains::surd::{cf_surd, convergents_of, search_from_surd};

#[derive(Parser)]
#[command(
    name = "abc-gains",
    version,
    about = "Approximation-gain and power-gain analysis for abc-triples"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Triple file ("a b c" per line, '#' comments); stdin when absent or "-"
    file: Option<PathBuf>,

    /// Worker threads for the batch computation (0 = all cores)
    #[arg(long, default_value_t = 0)]
    parallelism: usize,

    /// Skip malformed lines with a warning instead of aborting
    #[arg(long)]
    lenient: bool,

    /// Selection criteria file (one band per line:
    /// "c_min c_max rag rpg mpag mpg sag spg", with inf/none sentinels)
    #[arg(long)]
    criteria: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the full gain report CSV for a triple file
    Gains(InputArgs),

    /// Enumerate all abc-triples with c below a bound
    Enumerate {
        /// Exclusive upper bound on c
        #[arg(long)]
        limit: u64,
    },

    /// Explain the surd approximation behind a gain
    Explain {
        /// The triple, e.g. --triple "2 6436341 6436343"
        #[arg(long)]
        triple: String,

        /// Which gain to explain: rag, mpag or sag
        #[arg(long)]
        metric: String,
    },

    /// Best rational approximation to a residue via lattice reduction
    PadicApprox {
        #[arg(long)]
        alpha: BigUint,
        #[arg(long)]
        modulus: BigUint,
    },

    /// Continued fraction of a rational (--num/--den) or a surd (--surd K S)
    Cf {
        #[arg(long, conflicts_with = "surd", requires = "den")]
        num: Option<BigUint>,
        #[arg(long, requires = "num")]
        den: Option<BigUint>,
        /// k and s for the surd k^(1/s)
        #[arg(long, num_args = 2, value_names = ["K", "S"])]
        surd: Option<Vec<u64>>,
        /// Number of partial quotients for the surd expansion
        #[arg(long, default_value_t = 10)]
        count: usize,
    },

    /// Scan convergents of k^(1/s) for high-quality triples
    SurdSearch {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        s: u32,
        /// Largest convergent denominator to scan
        #[arg(long, default_value = "1000000")]
        max_q: BigUint,
        #[arg(long, default_value_t = 1.0)]
        min_quality: f64,
    },

    /// Histogram or scatter CSV over the gain reports of a triple file
    Report {
        #[command(flatten)]
        input: InputArgs,

        /// Metric to histogram
        #[arg(long, conflicts_with = "scatter")]
        histogram: Option<String>,

        /// Bin width for the histogram
        #[arg(long, default_value_t = 0.01)]
        bin: f64,

        /// Two metrics to emit as x,y pairs
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        scatter: Option<Vec<String>>,
    },
}

enum CliError {
    /// Bad user input: exit code 1.
    Input(String),
    /// Everything else: exit code 2.
    Internal(String),
}

impl From<abc_gains::Error> for CliError {
    fn from(e: abc_gains::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gains(input) => {
            let rows = load_rows(&input)?;
            print_output(&emit_report_csv(&rows))
        }
        Command::Enumerate { limit } => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            for t in abc_gains::enumerate::enumerate_abc(limit)? {
                writeln!(out, "{} {} {}", t.a(), t.b(), t.c())
                    .map_err(|e| CliError::Internal(e.to_string()))?;
            }
            Ok(())
        }
        Command::Explain { triple, metric } => explain(&triple, &metric),
        Command::PadicApprox { alpha, modulus } => padic_approx(alpha, modulus),
        Command::Cf {
            num,
            den,
            surd,
            count,
        } => cf(num, den, surd, count),
        Command::SurdSearch {
            k,
            s,
            max_q,
            min_quality,
        } => surd_search(k, s, &max_q, min_quality),
        Command::Report {
            input,
            histogram,
            bin,
            scatter,
        } => {
            let rows = load_rows(&input)?;
            match (histogram, scatter) {
                (Some(metric), None) => {
                    let metric = Metric::from_str(&metric)?;
                    let spec = HistogramSpec::new(metric, bin)?;
                    print_output(&emit_histogram(&rows, &spec))
                }
                (None, Some(metrics)) => {
                    let x = Metric::from_str(&metrics[0])?;
                    let y = Metric::from_str(&metrics[1])?;
                    print_output(&emit_scatter(&rows, x, y))
                }
                _ => Err(CliError::Input(
                    "choose exactly one of --histogram or --scatter".into(),
                )),
            }
        }
    }
}

fn read_input(file: &Option<PathBuf>) -> Result<Box<dyn BufRead>, CliError> {
    match file {
        Some(path) if path.as_os_str() != "-" => {
            let f = File::open(path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok(Box::new(BufReader::new(f)))
        }
        _ => Ok(Box::new(BufReader::new(io::stdin()))),
    }
}

fn load_rows(input: &InputArgs) -> Result<Vec<ReportRow>, CliError> {
    let reader = read_input(&input.file)?;
    let ParsedTriples { triples, skipped } =
        parse_triples(reader, !input.lenient).map_err(|e| CliError::Input(e.to_string()))?;
    for warn in &skipped {
        eprintln!("warning: {warn}");
    }
    if !skipped.is_empty() {
        eprintln!("warning: skipped {} malformed line(s)", skipped.len());
    }
    let rows =
        batch_report(triples, input.parallelism).map_err(|e| CliError::Internal(e.to_string()))?;
    match &input.criteria {
        Some(path) => {
            let mut text = String::new();
            File::open(path)
                .and_then(|mut f| f.read_to_string(&mut text))
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let criteria = ReportCriteria::parse(&text)?;
            Ok(filter_criteria(rows, &criteria))
        }
        None => Ok(rows),
    }
}

fn print_output(text: &str) -> Result<(), CliError> {
    io::stdout()
        .write_all(text.as_bytes())
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn parse_triple_arg(text: &str) -> Result<AbcTriple, CliError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(CliError::Input(format!(
            "expected three integers \"a b c\", got `{text}`"
        )));
    }
    let mut nums = Vec::with_capacity(3);
    for p in parts {
        nums.push(
            BigUint::from_str(p)
                .map_err(|_| CliError::Input(format!("malformed integer `{p}`")))?,
        );
    }
    let c = nums.pop().unwrap();
    let b = nums.pop().unwrap();
    let a = nums.pop().unwrap();
    Ok(AbcTriple::new(a, b, c)?)
}

fn explain(triple: &str, metric: &str) -> Result<(), CliError> {
    let t = parse_triple_arg(triple)?;
    let report = full_report(&t);
    let (value, witness) = match metric {
        "rag" => (report.rag, &report.real),
        "mpag" => (report.mpag, &report.multiple),
        "sag" => (report.sag, &report.single),
        other => {
            return Err(CliError::Input(format!(
                "unknown metric `{other}` (expected rag, mpag or sag)"
            )))
        }
    };
    let e = explain_gain(&t, witness)?;
    println!("triple:        {t}");
    println!("quality:       {}", fmt(report.quality));
    let witness_desc = match witness.kind {
        GainKind::Real => format!("d = {}", witness.degree),
        GainKind::MultiplePadic => {
            format!("star = {}, d = {}", e.star, witness.degree)
        }
        GainKind::SinglePadic => format!(
            "p = {}, d = {}",
            witness.prime.as_ref().unwrap(),
            witness.degree
        ),
    };
    println!(
        "{:<14} {} ({witness_desc})",
        format!("{metric}:"),
        fmt(value)
    );
    println!("enhanced rad:  {}", witness.enhanced_radical);
    let modulus_desc = e
        .modulus_factors
        .iter()
        .map(|(p, n)| {
            if *n == 1 {
                p.to_string()
            } else {
                format!("{p}^{n}")
            }
        })
        .collect::<Vec<_>>()
        .join(" * ");
    println!("modulus:       {} = {}", modulus_desc, e.modulus);
    println!("congruence:    {}", e.congruence());
    println!("surd:          {}", e.surd);
    println!("approximation: {}/{}", e.approximation.0, e.approximation.1);
    println!("cf quotients:  {}", join_big(&e.cf_quotients));
    Ok(())
}

fn padic_approx(alpha: BigUint, modulus: BigUint) -> Result<(), CliError> {
    let target = Residue::new(alpha.clone(), modulus.clone())?;
    let approx = best_padic_approx(&target);
    println!("target:     {target}");
    println!(
        "reduction:  k = [{}]",
        approx
            .trace
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!("shortest:   ({}, {})", approx.vector.0, approx.vector.1);
    println!("fraction:   {}/{}", approx.vector.0, approx.vector.1);
    println!("cf:         {}", join_big(&cf_rational(&alpha, &modulus)));
    // For a prime-power modulus, show the digit expansion too.
    let f = abc_gains::arith::factorize(&modulus)?;
    if f.entries().len() == 1 {
        if let Some(p) = f.entries()[0].0.to_u64() {
            let n = f.entries()[0].1;
            let digits = padic_digits(
                &num_bigint::BigInt::from(alpha),
                &num_bigint::BigInt::from(1u32),
                p,
                n as usize,
            )?;
            println!("digits:     {}", format_digits(&digits, true));
        }
    }
    Ok(())
}

fn cf(
    num: Option<BigUint>,
    den: Option<BigUint>,
    surd: Option<Vec<u64>>,
    count: usize,
) -> Result<(), CliError> {
    match (num, den, surd) {
        (Some(num), Some(den), None) => {
            if den == BigUint::from(0u32) {
                return Err(CliError::Input("denominator must be positive".into()));
            }
            let quotients = cf_rational(&num, &den);
            println!("cf:          {}", join_big(&quotients));
            print_convergents(&convergents_of(&quotients));
            Ok(())
        }
        (None, None, Some(ks)) => {
            let cf = cf_surd(ks[0], ks[1] as u32, count)?;
            println!("cf:          {}", join_big(&cf.quotients));
            print_convergents(&cf.convergents);
            Ok(())
        }
        _ => Err(CliError::Input(
            "pass either --num N --den D or --surd K S".into(),
        )),
    }
}

fn print_convergents(convergents: &[(BigUint, BigUint)]) {
    let rendered: Vec<String> = convergents
        .iter()
        .map(|(p, q)| format!("{p}/{q}"))
        .collect();
    println!("convergents: {}", rendered.join(", "));
}

fn surd_search(k: u64, s: u32, max_q: &BigUint, min_quality: f64) -> Result<(), CliError> {
    let candidates = search_from_surd(k, s, max_q, min_quality)?;
    println!("p/q,d,a,b,c,predicted_quality,quality");
    for c in candidates {
        println!(
            "{}/{},{},{},{},{},{},{}",
            c.p,
            c.q,
            c.diff,
            c.triple.a(),
            c.triple.b(),
            c.triple.c(),
            fmt(c.predicted_quality),
            fmt(c.actual_quality)
        );
    }
    Ok(())
}

fn join_big(xs: &[BigUint]) -> String {
    format!(
        "[{}]",
        xs.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    )
}

fn fmt(v: f64) -> String {
    abc_gains::report::format_float(v)
}
