use clap::{Parser, Subcommand, ValueEnum};
use cubiclab::constants::{const_a, const_b, predict_counts, r_shintani, CountScope, Prediction};
use cubiclab::enumerate::{enumerate_compact, CompactClass, Sign};
use cubiclab::fields::{invariants_q, invariants_quadratic, FieldInvariants};
use cubiclab::local_zeta::{explicit_local_zeta, lambda_local, SplitType};
use cubiclab::report::build_report;
use cubiclab::special::{zeta_k, MAX_DIGITS};
use cubiclab::verify::{run_suite, Suite, SuiteOptions};
use serde_json::{json, Value};
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cubiclab", version, about = "Binary cubic forms, cubic rings and discriminant densities")]
struct Cli {
    /// Worker threads (default: CUBICLAB_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Pos,
    Neg,
    Both,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Ringmap,
    Reducible,
    Localzeta,
    Dirichlet,
    Shintani,
}

#[derive(Clone, Copy, ValueEnum)]
enum TypeArg {
    Sp,
    Ur,
    Rm,
}

#[derive(Subcommand)]
enum Cmd {
    /// List GL2(Z)-classes of binary cubic forms with 0 < |disc| <= X.
    Enumerate {
        #[arg(long)]
        max_disc: u64,
        #[arg(long, value_enum, default_value = "both")]
        sign: SignArg,
        #[arg(long, default_value_t = false, action = clap::ArgAction::Set)]
        weighted: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a property suite and print PASS/FAIL as JSON.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        max_disc: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Field invariants and density constants as JSON.
    Constants {
        /// `Q` or `quad:D` with D a fundamental discriminant.
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 40)]
        precision: u32,
    },
    /// Counts against the two-term asymptotic at geometric checkpoints.
    Report {
        #[arg(long)]
        max_disc: u64,
        #[arg(long, default_value_t = 4)]
        checkpoints: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a local zeta function in factored form.
    LocalZeta {
        #[command(subcommand)]
        what: LocalZetaCmd,
    },
}

#[derive(Subcommand)]
enum LocalZetaCmd {
    /// Closed form for one splitting type.
    Render {
        #[arg(long)]
        q: u64,
        #[arg(long = "type", value_enum)]
        kind: Option<TypeArg>,
        /// Render the univariate lambda factor instead.
        #[arg(long, conflicts_with = "kind")]
        lambda: bool,
        /// Also print Taylor coefficients up to this total degree.
        #[arg(long)]
        series: Option<u32>,
    },
}

enum Failure {
    Usage(String),
    Verification,
    Io(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn init_threads(n: Option<usize>) -> Result<(), Failure> {
    let n = match n {
        Some(n) => Some(n),
        None => match std::env::var("CUBICLAB_THREADS") {
            Ok(v) => {
                Some(v.parse().map_err(|_| usage(format!("CUBICLAB_THREADS must be a positive integer, got '{v}'")))?)
            }
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        if n == 0 {
            return Err(usage("thread count must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Io(e.to_string()))?;
    }
    Ok(())
}

fn write_out(out: &Option<PathBuf>, body: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn class_json(c: &CompactClass, weighted: bool) -> Value {
    let mut v = json!({
        "disc": c.disc,
        "x0": c.form[0], "x1": c.form[1], "x2": c.form[2], "x3": c.form[3],
        "aut_order": c.aut,
        "rtype": c.rtype.label(),
        "signature": c.signature(),
    });
    if weighted {
        v["weight"] = json!(format!("1/{}", c.aut));
    }
    v
}

fn cmd_enumerate(x: u64, sign: SignArg, weighted: bool, format: Format, out: &Option<PathBuf>) -> Result<(), Failure> {
    if x == 0 {
        return Err(usage("--max-disc must be at least 1"));
    }
    let sign = match sign {
        SignArg::Pos => Sign::Pos,
        SignArg::Neg => Sign::Neg,
        SignArg::Both => Sign::Both,
    };
    let classes = enumerate_compact(x, sign).map_err(|e| usage(e.to_string()))?;
    let body = match format {
        Format::Csv => {
            let mut s = String::from("disc,x0,x1,x2,x3,aut_order,rtype,signature");
            if weighted {
                s.push_str(",weight");
            }
            s.push('\n');
            for c in &classes {
                let [a, b, cc, d] = c.form;
                s.push_str(&format!("{},{a},{b},{cc},{d},{},{},{}", c.disc, c.aut, c.rtype.label(), c.signature()));
                if weighted {
                    s.push_str(&format!(",1/{}", c.aut));
                }
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let rows: Vec<Value> = classes.iter().map(|c| class_json(c, weighted)).collect();
            let mut s = serde_json::to_string_pretty(&rows).expect("serializable");
            s.push('\n');
            s
        }
    };
    write_out(out, &body)
}

fn cmd_verify(suite: SuiteArg, max_disc: Option<u64>, p: Option<u64>) -> Result<(), Failure> {
    let s = match suite {
        SuiteArg::Ringmap => Suite::RingMap,
        SuiteArg::Reducible => Suite::Reducible,
        SuiteArg::Localzeta => Suite::LocalZeta,
        SuiteArg::Dirichlet => Suite::Dirichlet,
        SuiteArg::Shintani => Suite::Shintani,
    };
    if let Some(p) = p {
        if !matches!(s, Suite::LocalZeta) {
            return Err(usage("--p only applies to the localzeta suite"));
        }
        if !cubiclab::int::is_prime_u64(p) {
            return Err(usage(format!("--p {p} is not prime")));
        }
    }
    if max_disc == Some(0) {
        return Err(usage("--max-disc must be at least 1"));
    }
    if matches!(s, Suite::Shintani) && max_disc.is_some_and(|x| x < cubiclab::report::MIN_REPORT_BOUND) {
        return Err(usage(format!("shintani needs --max-disc >= {}", cubiclab::report::MIN_REPORT_BOUND)));
    }
    let r = run_suite(s, SuiteOptions { max_disc, p });
    println!("{}", serde_json::to_string(&r).expect("serializable"));
    if let Some(extra) = &r.extra {
        print!("{extra}");
    }
    if r.pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

/// Largest binary precision the double-precision evaluators can certify.
fn max_bits() -> u32 {
    (MAX_DIGITS as f64 / std::f64::consts::LOG10_2).floor() as u32
}

fn dec(x: f64, digits: usize) -> String {
    format!("{x:.digits$e}")
}

fn reduced((a, b): (u32, u32)) -> String {
    let g = num_integer::gcd(a, b);
    format!("{}/{}", a / g, b / g)
}

fn prediction_json(p: &Prediction, digits: usize) -> Value {
    json!({
        "main_coeff": dec(p.main_coeff, digits),
        "secondary_coeff": dec(p.secondary_coeff, digits),
        "exponents": ["1", "5/6"],
        "error_exponent": reduced(p.error_exponent),
    })
}

fn parse_field(s: &str) -> Result<FieldInvariants, Failure> {
    if s == "Q" {
        return Ok(invariants_q());
    }
    let d = s
        .strip_prefix("quad:")
        .and_then(|d| d.parse::<i64>().ok())
        .ok_or_else(|| usage(format!("field must be Q or quad:D, got '{s}'")))?;
    invariants_quadratic(d).map_err(|e| usage(e.to_string()))
}

fn cmd_constants(field: &str, bits: u32) -> Result<(), Failure> {
    if bits == 0 || bits > max_bits() {
        return Err(usage(format!("--precision must be in 1..={} bits with double-precision evaluators", max_bits())));
    }
    let k = parse_field(field)?;
    let digits = ((bits as f64) * std::f64::consts::LOG10_2).floor().max(1.0) as usize;
    let err = |e: cubiclab::constants::ConstantsError| Failure::Io(e.to_string());
    let a = const_a(&k).map_err(err)?;
    let b = const_b(&k).map_err(err)?;
    let z2 = zeta_k(k.disc, 2.0).map_err(|e| Failure::Io(e.to_string()))?;
    let z13 = zeta_k(k.disc, 1.0 / 3.0).map_err(|e| Failure::Io(e.to_string()))?;
    let mut predictions = Vec::new();
    for r in 0..=k.r1 {
        let mut entry = json!({ "r": r });
        for (name, scope) in [
            ("all_rings", CountScope::AllRings),
            ("field_only", CountScope::FieldOnly),
            ("field_aggregate", CountScope::FieldAggregate),
        ] {
            entry[name] = prediction_json(&predict_counts(&k, r, scope).map_err(err)?, digits);
        }
        if k.h3.is_some() {
            for (name, cube) in [("steinitz_cube", true), ("steinitz_noncube", false)] {
                entry[name] =
                    prediction_json(&predict_counts(&k, r, CountScope::SteinitzClass { cube }).map_err(err)?, digits);
            }
        }
        predictions.push(entry);
    }
    let mut v = json!({
        "field": k.name(),
        "invariants": {
            "degree": k.degree, "r1": k.r1, "r2": k.r2, "disc_abs": k.disc_abs, "h": k.h,
            "reg": dec(k.reg, digits), "roots_of_unity": k.roots_of_unity, "h3": k.h3,
        },
        "c": dec(k.c_k(), digits),
        "A": dec(a, digits),
        "B": dec(b, digits),
        "zeta_k(2)": dec(z2.value, digits),
        "zeta_k(1/3)": dec(z13.value, digits),
        "predictions": predictions,
        "precision": {
            "requested_bits": bits,
            "decimal_digits": digits,
            "max_certified_digits": MAX_DIGITS,
            "zeta_k(1/3)_error": dec(z13.error, 2),
        },
    });
    if k.disc.is_none() {
        v["r"] = json!(dec(r_shintani().map_err(err)?, digits));
    }
    println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
    Ok(())
}

fn cmd_report(x: u64, k: usize, out: &PathBuf) -> Result<(), Failure> {
    let r = build_report(x, k).map_err(|e| match e {
        cubiclab::report::ReportError::BoundTooSmall(_) | cubiclab::report::ReportError::NoCheckpoints => {
            usage(e.to_string())
        }
        other => Failure::Io(other.to_string()),
    })?;
    fs::create_dir_all(out)?;
    fs::write(out.join("report.csv"), r.csv())?;
    let mut js = serde_json::to_string_pretty(&r.summary_json()).expect("serializable");
    js.push('\n');
    fs::write(out.join("report.json"), js)?;
    print!("{}", cubiclab::report::residual_table(&r));
    Ok(())
}

fn cmd_local_zeta(what: &LocalZetaCmd) -> Result<(), Failure> {
    let LocalZetaCmd::Render { q, kind, lambda, series } = what;
    if *q < 2 {
        return Err(usage("--q must be at least 2"));
    }
    let f = if *lambda {
        lambda_local(*q)
    } else {
        let t = match kind.ok_or_else(|| usage("give --type sp|ur|rm or --lambda"))? {
            TypeArg::Sp => SplitType::Sp,
            TypeArg::Ur => SplitType::Ur,
            TypeArg::Rm => SplitType::Rm,
        };
        explicit_local_zeta(*q, t)
    };
    println!("{f}");
    if let Some(d) = series {
        println!("{}", f.series(*d));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    init_threads(cli.threads)?;
    match &cli.cmd {
        Cmd::Enumerate { max_disc, sign, weighted, format, out } => {
            cmd_enumerate(*max_disc, *sign, *weighted, *format, out)
        }
        Cmd::Verify { suite, max_disc, p } => cmd_verify(*suite, *max_disc, *p),
        Cmd::Constants { field, precision } => cmd_constants(field, *precision),
        Cmd::Report { max_disc, checkpoints, out } => cmd_report(*max_disc, *checkpoints, out),
        Cmd::LocalZeta { what } => cmd_local_zeta(what),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
