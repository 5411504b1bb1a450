//! Command-line surface: factorials, p-sequences, closures, constants,
//! and the verification suite, in deterministic text or JSON.

use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bhargava::arith::{FactoredInteger, DEFAULT_DIGIT_CAP};
use bhargava::closure::describe_closure;
use bhargava::pordering::{
    brute_factorial_with, p_sequence_stable_with, DEFAULT_TRUNCATION_CEILING,
};
use bhargava::quadratic::{closed_form_factorial, daiz_constant, normalize_quadratic};
use bhargava::subsets::{parse_set_spec, Poly, SetSpec};
use bhargava::verify::{self, Selector};

#[derive(Parser)]
#[command(name = "bhargava", about = "Bhargava factorials in exact arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Brute,
    Closed,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the Bhargava factorial l!_S of a set.
    Factorial(FactorialArgs),
    /// Compute a stabilized p-sequence with its p-ordering prefix.
    Psequence(PsequenceArgs),
    /// Describe the p-adic closure of a polynomial image mod p^K.
    Closure(ClosureArgs),
    /// Evaluate a named constant.
    Constant(ConstantArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FactorialArgs {
    /// Set spec: Z | AP:<a>,<b> | poly:[c0,...,cn] | primes | explicit:[...]
    #[arg(long)]
    set: String,
    #[arg(long)]
    l: u64,
    #[arg(long, value_enum, default_value = "brute")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_TRUNCATION_CEILING)]
    truncation_ceiling: usize,
    #[arg(long, default_value_t = DEFAULT_DIGIT_CAP)]
    digit_cap: usize,
}

#[derive(Args)]
struct PsequenceArgs {
    #[arg(long)]
    set: String,
    #[arg(long)]
    prime: u64,
    #[arg(long)]
    l: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_TRUNCATION_CEILING)]
    truncation_ceiling: usize,
}

#[derive(Args)]
struct ClosureArgs {
    /// Polynomial coefficients, ascending: [c0,c1,...,cn]
    #[arg(long)]
    poly: String,
    #[arg(long)]
    prime: u64,
    #[arg(long)]
    depth: u32,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct ConstantArgs {
    /// Constant name; only "daiz" is defined.
    name: String,
    #[arg(long, default_value_t = 1_000_000)]
    prime_bound: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// all | pord | closure | bounds | power | constants
    #[arg(default_value = "all", value_parser = parse_selector)]
    selector: Selector,
    /// Time budget in seconds; grids shrink deterministically (largest
    /// parameter first) if it is exceeded.
    #[arg(long, default_value_t = 600)]
    budget: u64,
}

fn parse_selector(s: &str) -> Result<Selector, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> bhargava::Result<ExitCode> {
    match command {
        Command::Factorial(args) => factorial(args),
        Command::Psequence(args) => psequence(args),
        Command::Closure(args) => closure(args),
        Command::Constant(args) => constant(args),
        Command::Verify(args) => Ok(verify_cmd(args)),
    }
}

fn render_factored(value: &FactoredInteger, digit_cap: usize) -> String {
    value
        .to_decimal(digit_cap)
        .unwrap_or_else(|_| value.to_string())
}

fn quad_form(set: &SetSpec) -> bhargava::Result<bhargava::quadratic::QuadNormalForm> {
    match set {
        SetSpec::PolyImage(f) if f.degree() == 2 => {
            normalize_quadratic(f.coeff(2), f.coeff(1), f.coeff(0))
        }
        _ => Err(bhargava::Error::OutOfDomain(
            "the closed form applies to quadratic polynomial images only".into(),
        )),
    }
}

fn factorial(args: FactorialArgs) -> bhargava::Result<ExitCode> {
    let set = parse_set_spec(&args.set)?;
    let mut out = serde_json::Map::new();
    out.insert("set".into(), set.to_string().into());
    out.insert("l".into(), args.l.into());
    let mut text = Vec::new();
    let mut brute_value = None;
    if matches!(args.mode, Mode::Brute | Mode::Both) {
        let brute = brute_factorial_with(&set, args.l as usize, args.truncation_ceiling)?;
        text.push(format!(
            "brute: {}{}",
            render_factored(&brute.value, args.digit_cap),
            if brute.stabilized { "" } else { "  [NOT STABILIZED]" }
        ));
        out.insert("brute".into(), brute.value.to_json(args.digit_cap));
        out.insert("stabilized".into(), brute.stabilized.into());
        brute_value = Some(brute.value);
    }
    if matches!(args.mode, Mode::Closed | Mode::Both) {
        let q = quad_form(&set)?;
        let closed = closed_form_factorial(&q, args.l);
        text.push(format!("closed: {}", render_factored(&closed, args.digit_cap)));
        out.insert("closed".into(), closed.to_json(args.digit_cap));
        if let Some(brute) = &brute_value {
            let agree = *brute == closed;
            text.push(format!("agree: {agree}"));
            out.insert("agree".into(), agree.into());
        }
    }
    match args.format {
        Format::Text => {
            if text.len() == 1 {
                // Single-mode output is just the value.
                println!("{}", text[0].split_once(": ").unwrap().1);
            } else {
                for line in text {
                    println!("{line}");
                }
            }
        }
        Format::Json => println!("{}", serde_json::Value::Object(out)),
    }
    Ok(ExitCode::SUCCESS)
}

fn psequence(args: PsequenceArgs) -> bhargava::Result<ExitCode> {
    let set = parse_set_spec(&args.set)?;
    if !bhargava::arith::is_prime(args.prime) {
        return Err(bhargava::Error::InvalidArgument(format!(
            "{} is not prime",
            args.prime
        )));
    }
    let r = p_sequence_stable_with(&set, args.prime, args.l, args.truncation_ceiling)?;
    match args.format {
        Format::Text => {
            let elements: Vec<String> = r.elements.iter().map(|e| e.to_string()).collect();
            let psequence: Vec<String> = r.psequence.iter().map(|v| v.to_string()).collect();
            println!("elements:  [{}]", elements.join(", "));
            println!("psequence: [{}]", psequence.join(", "));
            println!(
                "truncation: {} (stabilized: {})",
                r.truncation_used, r.stabilized
            );
        }
        Format::Json => {
            let obj = serde_json::json!({
                "set": set.to_string(),
                "p": r.p,
                "elements": r.elements.iter().map(|&e| i64::try_from(e).expect("element fits i64")).collect::<Vec<_>>(),
                "psequence": r.psequence,
                "truncation_used": r.truncation_used,
                "stabilized": r.stabilized,
            });
            println!("{obj}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn closure(args: ClosureArgs) -> bhargava::Result<ExitCode> {
    let coeffs = parse_poly_arg(&args.poly)?;
    let f = Poly::new(coeffs);
    let d = describe_closure(&f, args.prime, args.depth)?;
    match args.format {
        Format::Text => {
            println!("case: {}", d.case.as_str());
            let mut balls = d.balls.clone();
            balls.sort();
            for b in balls {
                println!("ball: {} + {}^{} Z", b.center, d.p, b.depth);
            }
            for r in &d.isolated {
                println!("isolated: {r}");
            }
        }
        Format::Json => println!("{}", d.to_json()),
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_poly_arg(text: &str) -> bhargava::Result<Vec<i64>> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| bhargava::Error::Syntax {
            pos: 0,
            msg: "expected a bracketed coefficient list [c0,...,cn]".into(),
        })?;
    inner
        .split(',')
        .map(|part| {
            part.trim().parse().map_err(|_| bhargava::Error::Syntax {
                pos: 0,
                msg: format!("expected an integer, found {part:?}"),
            })
        })
        .collect()
}

fn constant(args: ConstantArgs) -> bhargava::Result<ExitCode> {
    if args.name != "daiz" {
        return Err(bhargava::Error::InvalidArgument(format!(
            "unknown constant {:?}; only \"daiz\" is defined",
            args.name
        )));
    }
    if args.prime_bound < 2 {
        return Err(bhargava::Error::InvalidArgument(
            "the prime bound must be at least 2".into(),
        ));
    }
    let value = daiz_constant(args.prime_bound);
    match args.format {
        Format::Text => println!("{value:.7}"),
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "constant": "daiz",
                "prime_bound": args.prime_bound,
                "value": value,
            })
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn verify_cmd(args: VerifyArgs) -> ExitCode {
    let reports = verify::run(args.selector, Duration::from_secs(args.budget));
    let mut all_passed = true;
    for report in &reports {
        let status = if report.passed { "PASS" } else { "FAIL" };
        println!("{status}  {}: {}", report.name, report.detail);
        all_passed &= report.passed;
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
