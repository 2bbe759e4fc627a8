//! `twisted` command-line front-end.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage,
//! parse or carrier-construction errors.

mod battery;

use std::ffi::OsString;
use std::io::Write;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use serde::Serialize;
use twisted_core::expr::{parse_element, parse_pp, GRAMMAR};
use twisted_core::prop_verify::DEFAULT_SEED;
use twisted_core::{
    invert_xtilde, q_binomial, reduce_mod_ideal_power, specialize, taylor_expand,
    verify_localization_base_change, verify_quotient_base_change, xi_twisted_power,
    AlgebraCarrier, AlgebraElement, Error, PPElement, TwistSpec,
};

pub use battery::{run_battery, BatteryResult};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

const FLAGS_HELP: &str = "\
flags:
  --q generic|p/r     twist parameter q (default: generic)
  --h p/r             twist shift h (default: 0)
  --order N           truncation order when not given positionally
  --samples N         randomized samples for verify-localization (default: 25)
  --seed N            seed for randomized checks (default: 42)
  --json              JSON output
  --quotient G        work in the twisted quotient A/(G)
  --localize          work in the localization at x";

#[derive(Debug, Parser)]
#[command(
    name = "twisted",
    about = "Exact twisted principal parts, q-binomials and base-change checks",
    after_help = FLAGS_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Twist parameter: "generic" or an exact rational p/r.
    #[arg(long, global = true, default_value = "generic")]
    q: String,

    /// Twist shift: an exact rational.
    #[arg(long, global = true, default_value = "0", allow_hyphen_values = true)]
    h: String,

    #[arg(long, global = true)]
    order: Option<usize>,

    #[arg(long, global = true)]
    samples: Option<usize>,

    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[arg(long, global = true)]
    json: bool,

    /// Work in the twisted quotient A/(G).
    #[arg(long, global = true, value_name = "G", allow_hyphen_values = true)]
    quotient: Option<String>,

    /// Work in the localization at x.
    #[arg(long, global = true)]
    localize: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quantum binomial coefficient C(n,k)_q.
    #[command(allow_negative_numbers = true)]
    Qbinom { n: u32, k: i64 },
    /// Twisted power EXPR^(n).
    TwistedPow {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        n: usize,
    },
    /// xi^(k) = (xt - x)(xt - sigma(x))...(xt - sigma^(k-1)(x)).
    XiPow { k: Option<usize> },
    /// Taylor coefficients of EXPR on the xi basis at order n.
    Taylor {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        n: Option<usize>,
    },
    /// Inverse of xt modulo I^(n+1) in the localization at x.
    InvertXt { n: Option<usize> },
    /// Base change along the twisted quotient A -> A/(G).
    VerifyQuotient {
        #[arg(allow_hyphen_values = true)]
        g: String,
        n: Option<usize>,
    },
    /// Base change along the localization A -> A[1/x].
    VerifyLocalization { n: Option<usize> },
    /// Runs the invariant battery.
    Identities {
        #[arg(long, default_value_t = 20)]
        max: usize,
    },
}

/// Carrier and output settings shared by all subcommands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub twist: TwistSpec,
    pub carrier: AlgebraCarrier,
    pub order: Option<usize>,
    pub seed: u64,
    pub json: bool,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn parse_rational(s: &str, flag: &str) -> Result<BigRational, Failure> {
    BigRational::from_str(s.trim())
        .map_err(|_| Failure::Usage(format!("{flag}: expected an exact rational p/r, got {s:?}")))
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self, Failure> {
        let q0 = match cli.q.as_str() {
            "generic" => None,
            s => Some(parse_rational(s, "--q")?),
        };
        let h = parse_rational(&cli.h, "--h")?;
        let twist = TwistSpec::with_parameters(q0, h)?;
        let plain = AlgebraCarrier::plain(twist.clone());
        let carrier = match (&cli.quotient, cli.localize) {
            (Some(_), true) => {
                return Err(Failure::Usage(
                    "--quotient and --localize are mutually exclusive".into(),
                ))
            }
            (Some(g), false) => plain.make_quotient(&parse_element(g, &plain)?)?,
            (None, true) => plain.make_localization(&[AlgebraElement::x()])?,
            (None, false) => plain,
        };
        Ok(RunConfig {
            twist,
            carrier,
            order: cli.order,
            seed: cli.seed,
            json: cli.json,
        })
    }

    fn order(&self, positional: Option<usize>) -> Result<usize, Failure> {
        positional
            .or(self.order)
            .ok_or_else(|| Failure::Usage("missing order: pass it positionally or via --order".into()))
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

/// Parses `args` (including the program name) and runs one subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let _ = write!(err, "{e}");
            let _ = writeln!(err, "\nexpression grammar:\n{GRAMMAR}\n\n{FLAGS_HELP}");
            return EXIT_USAGE;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\n{FLAGS_HELP}");
            EXIT_USAGE
        }
        Err(Failure::Domain(Error::Parse(p))) => {
            let _ = writeln!(err, "error: {p}\n\nexpression grammar:\n{GRAMMAR}");
            EXIT_USAGE
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[derive(Serialize)]
struct QbinomJson<'a> {
    n: u32,
    k: i64,
    value: &'a str,
}

#[derive(Serialize)]
struct ValueJson<'a> {
    expr: &'a str,
    n: usize,
    value: &'a str,
}

#[derive(Serialize)]
struct XiJson<'a> {
    k: usize,
    value: &'a str,
}

#[derive(Serialize)]
struct InverseJson<'a> {
    order: usize,
    witness: &'a str,
    inverse: &'a str,
    check: bool,
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<u8, Failure> {
    let cfg = RunConfig::from_cli(cli)?;
    let carrier = &cfg.carrier;
    let line = |out: &mut dyn Write, s: &str| {
        let _ = writeln!(out, "{s}");
    };
    match &cli.command {
        Command::Qbinom { n, k } => {
            let mut value = q_binomial(*n, *k);
            if let Some(q0) = cfg.twist.mode().specialized_value() {
                value = specialize(&value, q0)?;
            }
            let value = value.to_string();
            if cfg.json {
                line(out, &to_json(&QbinomJson { n: *n, k: *k, value: &value }));
            } else {
                line(out, &value);
            }
        }
        Command::TwistedPow { expr, n } => {
            let f = parse_element(expr, carrier)?;
            let value = carrier.twisted_power(&f, *n).to_string();
            if cfg.json {
                line(out, &to_json(&ValueJson { expr, n: *n, value: &value }));
            } else {
                line(out, &value);
            }
        }
        Command::XiPow { k } => {
            let k = cfg.order(*k)?;
            let value = xi_twisted_power(carrier, k).to_string();
            if cfg.json {
                line(out, &to_json(&XiJson { k, value: &value }));
            } else {
                line(out, &value);
            }
        }
        Command::Taylor { expr, n } => {
            let n = cfg.order(*n)?;
            let e = parse_pp(expr, carrier)?;
            let t = taylor_expand(&e, n);
            if cfg.json {
                line(out, &t.to_json());
            } else {
                for (k, c) in t.coeffs().iter().enumerate() {
                    line(out, &format!("c{k} = {c}"));
                }
            }
        }
        Command::InvertXt { n } => {
            let n = cfg.order(*n)?;
            let loc = if carrier.inverts_x() {
                carrier.clone()
            } else if carrier.is_plain() {
                carrier.make_localization(&[AlgebraElement::x()])?
            } else {
                return Err(Failure::Usage("invert-xt needs the localization at x".into()));
            };
            let w = invert_xtilde(&loc, n)?;
            let check = reduce_mod_ideal_power(&(&PPElement::xtilde(&loc) * &w.inverse), n).is_one();
            let witness = w.witness_string();
            let inverse = w.inverse.to_string();
            if cfg.json {
                line(
                    out,
                    &to_json(&InverseJson { order: n, witness: &witness, inverse: &inverse, check }),
                );
            } else {
                line(out, &format!("witness: {witness}"));
                line(out, &format!("inverse: {inverse}"));
                line(out, &format!("check: {check}"));
            }
            return Ok(if check { EXIT_OK } else { EXIT_FAILED });
        }
        Command::VerifyQuotient { g, n } => {
            let n = cfg.order(*n)?;
            let plain = AlgebraCarrier::plain(cfg.twist.clone());
            let g = parse_element(g, &plain)?;
            let mut report = verify_quotient_base_change(&cfg.twist, &g, n)?;
            report.seed = cfg.seed;
            line(out, &report.to_json());
            return Ok(if report.is_success() { EXIT_OK } else { EXIT_FAILED });
        }
        Command::VerifyLocalization { n } => {
            let n = cfg.order(*n)?;
            let samples = cli.samples.unwrap_or(25);
            let report = verify_localization_base_change(&cfg.twist, n, samples, cfg.seed)?;
            line(out, &report.to_json());
            return Ok(if report.is_success() { EXIT_OK } else { EXIT_FAILED });
        }
        Command::Identities { max } => {
            let result = run_battery(*max, cfg.seed);
            if cfg.json {
                line(out, &result.to_json());
            } else {
                for (name, ok) in &result.checks {
                    line(out, &format!("{} {name}", if *ok { "PASS" } else { "FAIL" }));
                }
                line(
                    out,
                    &format!("{} checks, {} failures", result.checks.len(), result.failures()),
                );
            }
            return Ok(if result.failures() == 0 { EXIT_OK } else { EXIT_FAILED });
        }
    }
    Ok(EXIT_OK)
}
