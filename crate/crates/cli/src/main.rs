use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spx_core::decompose::{decompose_z, DecompositionResult};
use spx_core::lang::{atoms, parse_sd, parse_sentence};
use spx_core::perms::px_group;
use spx_core::principles::{
    check_axioms, check_invariance, check_spx_pair, check_uli_consistency, check_wip, classify,
    Principle, PrincipleReport, WipBounds,
};
use spx_core::prob::{eval_qf, mixture_eval, parse_fn_doc, Family, ProbFnSpec, SimplexVector};
use spx_core::rational::{format_rational, int, parse_rational_list, rat, Rational};
use spx_core::spectra::{pspectrum, spec_perm_group, spectrum_class_ratio};
use spx_core::{Error, Limits, StateDescription};

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "spx", version, about = "Exact unary inductive logic toolkit")]
struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Largest enumeration any single operation may perform.
    #[arg(long, global = true, value_name = "N")]
    max_enum: Option<u64>,
    /// Permit three-predicate decompositions.
    #[arg(long, global = true)]
    allow_q3: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the atoms of L_q.
    Atoms {
        #[arg(long)]
        q: usize,
    },
    /// P-spectrum of a state description.
    Pspec {
        #[arg(long)]
        sd: String,
    },
    /// Atom permutations induced by predicate permutations.
    Perms {
        #[arg(long)]
        q: usize,
        /// List the whole spectrum-preserving group instead.
        #[arg(long)]
        spectrum_preserving: bool,
    },
    /// Evaluate a function on a state description or sentence.
    Eval {
        #[command(flatten)]
        func: FnArgs,
        #[arg(long, conflicts_with = "qf", required_unless_present = "qf")]
        sd: Option<String>,
        #[arg(long)]
        qf: Option<String>,
        /// Language for --qf when the function does not fix it.
        #[arg(long)]
        q: Option<usize>,
    },
    /// Check one principle within bounds.
    Check {
        #[arg(long)]
        principle: String,
        #[command(flatten)]
        func: FnArgs,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        n: usize,
        /// Larger language for ULi consistency (default q + 1).
        #[arg(long)]
        q_large: Option<usize>,
    },
    /// Run every applicable checker.
    Classify {
        #[command(flatten)]
        func: FnArgs,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        n: usize,
    },
    /// Reproduce a worked example.
    Example {
        #[arg(value_enum)]
        name: ExampleName,
    },
    /// Write z_x as (1+λ)w1 − λw2.
    Decompose {
        #[arg(long)]
        q: usize,
        /// Comma-separated simplex vector, e.g. 1/2,1/4,1/8,1/8.
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        verify_len: usize,
        /// Include every checked state description in JSON output.
        #[arg(long)]
        certificate: bool,
    },
    /// Fraction of the spectrum class of υ whose first constants carry θ.
    Ratio {
        #[arg(long = "Q", value_name = "Q")]
        big_q: usize,
        #[arg(long)]
        upsilon: String,
        #[arg(long)]
        theta: String,
    },
}

#[derive(Args)]
struct FnArgs {
    #[arg(long = "fn", value_enum)]
    family: FnFamily,
    /// JSON parameter file.
    #[arg(long)]
    params: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum FnFamily {
    Wx,
    Vpt,
    Vptn,
    Zx,
    Mixture,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleName {
    PxNotSpx,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Guard(_) => 3,
        Error::Singular | Error::RegularitySearch { .. } | Error::Verification(_) => 1,
        _ => 2,
    }
}

struct Output {
    text: String,
    json: Value,
    code: u8,
}

impl Output {
    fn ok(text: String, kind: &str, payload: Value) -> Self {
        Output {
            text,
            json: json!({"kind": kind, "payload": payload}),
            code: 0,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut limits = Limits::default();
    if let Some(m) = cli.max_enum {
        limits.max_enum = m;
    }
    if cli.allow_q3 {
        limits.decompose_q_max = limits.decompose_q_max.max(3);
    }
    match run(&cli.command, &limits) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                println!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn load_fn(args: &FnArgs) -> Result<ProbFnSpec, Failure> {
    let text = fs::read_to_string(&args.params)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", args.params.display())))?;
    let doc: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{} is not JSON: {e}", args.params.display())))?;
    let hint = match args.family {
        FnFamily::Wx => Family::Wx,
        FnFamily::Vpt => Family::Vpt,
        FnFamily::Vptn => Family::Vptn,
        FnFamily::Zx => Family::Zx,
        FnFamily::Mixture => Family::Mixture,
    };
    Ok(parse_fn_doc(&doc, Some(hint))?)
}

fn report_output(reports: Vec<PrincipleReport>) -> Output {
    let failed = reports.iter().any(|r| !r.passed());
    let text = reports
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join("\n");
    let payload = if reports.len() == 1 {
        reports[0].to_json()
    } else {
        Value::Array(reports.iter().map(PrincipleReport::to_json).collect())
    };
    Output {
        text,
        json: json!({"kind": "report", "payload": payload}),
        code: u8::from(failed),
    }
}

fn run(command: &Command, limits: &Limits) -> Result<Output, Failure> {
    match command {
        Command::Atoms { q } => {
            let list = atoms(*q, limits)?;
            let text = list
                .iter()
                .map(|a| format!("α{}\t{}\tγ={}\t{}", a.index(), a.sign_string(), a.gamma(), a.formula()))
                .collect::<Vec<_>>()
                .join("\n");
            let payload = list
                .iter()
                .map(|a| {
                    json!({
                        "index": a.index(),
                        "signs": a.sign_string(),
                        "gamma": a.gamma(),
                        "formula": a.formula(),
                    })
                })
                .collect();
            Ok(Output::ok(text, "table", Value::Array(payload)))
        }
        Command::Pspec { sd } => {
            let sd = parse_sd(sd)?;
            let s = pspectrum(&sd);
            Ok(Output::ok(s.to_string(), "value", s.to_json()))
        }
        Command::Perms {
            q,
            spectrum_preserving,
        } => {
            limits.check_q(*q)?;
            let group = if *spectrum_preserving {
                spec_perm_group(*q, limits)?
            } else {
                px_group(*q)
            };
            let lines: Vec<String> = group.iter().map(|p| p.to_string()).collect();
            let payload = group.iter().map(|p| json!(p.perm().image())).collect();
            Ok(Output::ok(lines.join("\n"), "table", Value::Array(payload)))
        }
        Command::Eval { func, sd, qf, q } => {
            let spec = load_fn(func)?;
            let value = match (sd, qf) {
                (Some(sd), _) => mixture_eval(&spec, &parse_sd(sd)?, limits)?,
                (None, Some(s)) => {
                    let q = q.or_else(|| spec.fixed_q()).ok_or_else(|| {
                        Failure::Usage("--q is required for this function family".into())
                    })?;
                    eval_qf(&spec, &parse_sentence(s)?, q, limits)?
                }
                (None, None) => return Err(Failure::Usage("give --sd or --qf".into())),
            };
            let text = format_rational(&value);
            Ok(Output::ok(text.clone(), "value", json!(text)))
        }
        Command::Check {
            principle,
            func,
            q,
            n,
            q_large,
        } => {
            let principle: Principle = principle.parse()?;
            let spec = load_fn(func)?;
            let report = match principle {
                Principle::Axioms => check_axioms(&spec, *q, *n, limits)?,
                Principle::Wip => check_wip(&spec, *q, &WipBounds::default(), limits)?,
                Principle::UliConsistency => {
                    check_uli_consistency(&spec, *q, q_large.unwrap_or(q + 1), *n, limits)?
                }
                p => check_invariance(&spec, p, *q, *n, limits)?,
            };
            Ok(report_output(vec![report]))
        }
        Command::Classify { func, q, n } => {
            let spec = load_fn(func)?;
            Ok(report_output(classify(&spec, *q, *n, limits)?))
        }
        Command::Example { name } => match name {
            ExampleName::PxNotSpx => px_not_spx(limits),
        },
        Command::Decompose {
            q,
            x,
            seed,
            verify_len,
            certificate,
        } => {
            let x = SimplexVector::new(parse_rational_list(x)?)?;
            if x.q() != *q {
                return Err(Failure::Usage(format!(
                    "--x has {} entries but L_{q} has {}",
                    x.entries().len(),
                    1usize << q
                )));
            }
            let result = decompose_z(&x, *seed, *verify_len, limits)?;
            Ok(decomposition_output(&result, *certificate))
        }
        Command::Ratio {
            big_q,
            upsilon,
            theta,
        } => {
            let upsilon = parse_sd(upsilon)?;
            let theta = parse_sd(theta)?;
            if upsilon.q() != *big_q || theta.q() != *big_q {
                return Err(Failure::Usage(format!(
                    "both descriptions must be over L_{big_q}"
                )));
            }
            let r = spectrum_class_ratio(&upsilon, &theta, limits)?;
            let text = format_rational(&r);
            Ok(Output::ok(text.clone(), "value", json!(text)))
        }
    }
}

fn decomposition_output(result: &DecompositionResult, certificate: bool) -> Output {
    let components = |s: &ProbFnSpec| match s {
        ProbFnSpec::Mixture(parts) => parts.len(),
        _ => 1,
    };
    let text = format!(
        "lambda = {}\ndet A = {}\nw1: {} building blocks\nw2: {} building blocks\n\
         identity z = (1+lambda)w1 - lambda w2 verified on {} descriptions (lengths <= {})",
        format_rational(&result.lambda),
        format_rational(result.det_a()),
        components(&result.w1),
        components(&result.w2),
        result.certificate.len(),
        result.verified_length,
    );
    let mut payload = result.to_json();
    if certificate {
        payload["certificate"] = result.certificate_json();
    }
    Output::ok(text, "decomposition", payload)
}

fn px_not_spx(limits: &Limits) -> Result<Output, Failure> {
    let b = SimplexVector::new([1, 2, 4, 5, 2, 3, 1, 1].iter().map(|&k| rat(k, 19)).collect())?;
    let w = b.symmetrized(&px_group(3))?;
    let theta = StateDescription::new(3, vec![2, 5, 7, 7, 4])?;
    let phi = StateDescription::new(3, vec![3, 5, 6, 6, 7])?;
    let (st, sp) = (pspectrum(&theta), pspectrum(&phi));
    let wt = mixture_eval(&w, &theta, limits)?;
    let wp = mixture_eval(&w, &phi, limits)?;
    let scale: Rational = int(6) * int(19).pow(5);
    let px = check_invariance(&w, Principle::Px, 3, 5, limits)?;
    let spx = check_spx_pair(&w, &theta, &phi, limits)?;
    let spx_global = check_invariance(&w, Principle::SPx, 3, 5, limits)?;
    let verdict = if spx.passed() {
        "SPx holds on this pair".to_string()
    } else {
        "SPx violated: w(Θ) ≠ w(Φ)".to_string()
    };
    let text = format!(
        "b = {}\n\
         Θ = {theta}\nΦ = {phi}\n\
         spectrum(Θ) = {st}\nspectrum(Φ) = {sp}\n\
         w(Θ) = {} = {}/(6·19^5)\n\
         w(Φ) = {} = {}/(6·19^5)\n\
         quoted numerators 1094 and 1224 do not match the recomputed {} and {}\n\
         {px}\n\
         {spx_global}\n\
         {verdict}",
        b.entries().iter().map(format_rational).collect::<Vec<_>>().join(", "),
        format_rational(&wt),
        format_rational(&(&wt * &scale)),
        format_rational(&wp),
        format_rational(&(&wp * &scale)),
        format_rational(&(&wt * &scale)),
        format_rational(&(&wp * &scale)),
    );
    let payload = json!({
        "b": spx_core::rational::list_to_json(b.entries()),
        "theta": theta.to_string(),
        "phi": phi.to_string(),
        "spectrum_theta": st.to_json(),
        "spectrum_phi": sp.to_json(),
        "spectra_equal": st == sp,
        "w_theta": format_rational(&wt),
        "w_phi": format_rational(&wp),
        "numerators_over_6_19_5": [format_rational(&(&wt * &scale)), format_rational(&(&wp * &scale))],
        "quoted_numerators": ["1094", "1224"],
        "px": px.to_json(),
        "spx_pair": spx.to_json(),
        "spx_first_violation": spx_global.to_json(),
        "verdict": verdict,
    });
    Ok(Output::ok(text, "report", payload))
}
