use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use wittsym::forms::{self, RelationKind};
use wittsym::json::{self as wj, CovectorJson, TensorJson, ValueJson, WittJson};
use wittsym::ring::{AnyRing, Codec, Payload, Ring, RingElement, TorsionFree};
use wittsym::suite::{self, SuiteSpec};
use wittsym::symbol::{LocalField, PrecisionPolicy, SymbolValue};
use wittsym::witt::{WittRing, WittVector};
use wittsym::{with_ring, with_torsion_free, Budget, Error};

/// Witt vectors, Artin–Schreier–Witt symbols and their pairings over F_q((t)).
///
/// JSON arguments are given inline or as `@path`.
#[derive(Parser, Debug)]
#[command(name = "wittsym", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Residue characteristic.
    #[arg(long, global = true, default_value_t = 2)]
    p: u64,
    /// Residue degree: K = F_{p^f}((t)).
    #[arg(long, global = true, default_value_t = 1)]
    f: u32,
    /// Witt length.
    #[arg(long, global = true, default_value_t = 1)]
    n: usize,
    /// Second Witt length for two-level pairings.
    #[arg(long, global = true)]
    m: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 100)]
    samples: u64,
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Initial slack of the symbol precision policy.
    #[arg(long, global = true)]
    precision_slack: Option<u32>,
    /// Budget table as `p:n,...`.
    #[arg(long, global = true)]
    budget: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Arithmetic in W_n(R).
    #[command(subcommand)]
    Witt(WittCmd),
    /// The symbol [a, b).
    #[command(subcommand)]
    Symbol(SymbolCmd),
    /// The pairings ((a, b)).
    #[command(subcommand)]
    Pairing(PairingCmd),
    /// Formal tensors and the map alpha.
    #[command(subcommand)]
    Forms(FormsCmd),
    /// Property suites.
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Subcommand, Debug)]
enum WittCmd {
    Add { #[arg(long)] a: String, #[arg(long)] b: String },
    Mul { #[arg(long)] a: String, #[arg(long)] b: String },
    Neg { #[arg(long)] a: String },
    Frob { #[arg(long)] a: String },
    /// V, truncated to the same length unless `--extend`.
    Versch {
        #[arg(long)]
        a: String,
        #[arg(long)]
        extend: bool,
    },
    /// The Teichmüller lift of a ring element, of length `--n`.
    Teich { #[arg(long)] x: String },
    Ghost { #[arg(long)] a: String },
    /// x_0, ..., x_{n-1} with a = sum V^i [x_i].
    Decompose { #[arg(long)] a: String },
}

#[derive(Subcommand, Debug)]
enum SymbolCmd {
    /// [a, b)_{p^n} for a in W_n(K), b in K^x.
    Asw { #[arg(long)] a: String, #[arg(long)] b: String },
    /// [x, b)_{p^inf} for a covector x.
    AswInf { #[arg(long)] x: String, #[arg(long)] b: String },
    /// ((a, b))_{p^m, p^n}.
    Pair { #[arg(long)] a: String, #[arg(long)] b: String },
}

#[derive(Subcommand, Debug)]
enum PairingCmd {
    N { #[arg(long)] a: String, #[arg(long)] b: String },
    Mn { #[arg(long)] a: String, #[arg(long)] b: String },
    Inf { #[arg(long)] x: String, #[arg(long)] y: String },
}

#[derive(Subcommand, Debug)]
enum FormsCmd {
    /// alpha_{p^n} of a tensor.
    Eval { #[arg(long)] tensor: String },
    /// Checks that alpha vanishes on sampled generators of a relation kind.
    Check { #[arg(long)] relation: String },
}

#[derive(Subcommand, Debug)]
enum SuiteCmd {
    List,
    Run { #[arg(long)] name: String },
}

/// Exit status: a failed identity, or a usage or precision problem.
enum Failure {
    Violation(Value),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::RouteDisagreement(_) => Failure::Violation(json!({ "error": e.to_string() })),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_out = cli.global.json;
    match dispatch(&cli) {
        Ok(v) => {
            emit(&v, json_out);
            ExitCode::SUCCESS
        }
        Err(Failure::Violation(v)) => {
            emit(&v, json_out);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Like `println!`, but a closed pipe is not an error.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

fn emit(v: &Value, json_out: bool) {
    if json_out {
        out!("{v}");
        return;
    }
    if let (Some(value), Some(modulus)) = (v.get("value"), v.get("modulus")) {
        out!("{value} mod {modulus}");
    } else if let Some(list) = v.get("suites").and_then(Value::as_array) {
        for s in list {
            out!("{:<26} {}", s["id"].as_str().unwrap_or(""), s["description"].as_str().unwrap_or(""));
        }
    } else if let Some(failures) = v.get("failures").and_then(Value::as_array) {
        out!(
            "{}: {} samples, {} failures",
            v["suite"].as_str().unwrap_or(""),
            v["samples_run"],
            failures.len()
        );
        for f in failures {
            out!("  sample {}: {}", f["index"], f["witness"]);
        }
        if let Some(o) = v.get("observed") {
            out!("  observed: {o}");
        }
    } else {
        out!("{}", serde_json::to_string_pretty(v).unwrap_or_default());
    }
}

fn read_arg(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn parse<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T, Failure> {
    Ok(wj::parse(&read_arg(arg)?)?)
}

fn budget(g: &Global) -> Result<Budget, Failure> {
    Ok(match &g.budget {
        Some(s) => s.parse()?,
        None => Budget::default(),
    })
}

fn policy(g: &Global) -> PrecisionPolicy {
    match g.precision_slack {
        Some(r) => PrecisionPolicy::with_slack(r),
        None => PrecisionPolicy::default(),
    }
}

fn field(g: &Global) -> Result<LocalField, Failure> {
    Ok(LocalField::with_config(g.p, g.f, budget(g)?, policy(g))?)
}

fn provenance(g: &Global, command: &str, kf: &LocalField) -> Value {
    json!({
        "command": command,
        "field": format!("F_{}((t))", kf.field().order()),
        "p": g.p,
        "f": g.f,
        "precision": policy(g),
        "method": "ghost-residue",
        "version": env!("CARGO_PKG_VERSION"),
    })
}

fn value(v: &SymbolValue, prov: Value) -> Value {
    serde_json::to_value(ValueJson::new(v, prov)).expect("values serialize")
}

fn dispatch(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Witt(cmd) => witt(g, cmd),
        Command::Symbol(cmd) => symbol(g, cmd),
        Command::Pairing(cmd) => pairing(g, cmd),
        Command::Forms(cmd) => forms_cmd(g, cmd),
        Command::Suite(cmd) => suite_cmd(g, cmd),
    }
}

fn witt_ring<R: Ring>(base: &R, p: u64, n: usize, g: &Global) -> Result<WittRing<R>, Failure> {
    Ok(WittRing::with_budget(base.clone(), p, n.max(1), &budget(g)?)?)
}

fn encode<R: Codec>(w: &WittRing<R>, a: &WittVector<R::Elem>) -> Value {
    serde_json::to_value(wj::encode_witt(w.base(), w.p(), a)).expect("vectors serialize")
}

fn witt(g: &Global, cmd: &WittCmd) -> Outcome {
    if let WittCmd::Teich { x } = cmd {
        let x: RingElement = parse(x)?;
        let any = AnyRing::from_descriptor(&x.ring)?;
        return with_ring!(&any, r => {
            let w = witt_ring(r, x.ring.p, g.n, g)?;
            let c = r.decode(&x.coeffs)?;
            Ok(encode(&w, &w.teichmuller_len(c, g.n)))
        });
    }
    let a_arg = match cmd {
        WittCmd::Add { a, .. }
        | WittCmd::Mul { a, .. }
        | WittCmd::Neg { a }
        | WittCmd::Frob { a }
        | WittCmd::Versch { a, .. }
        | WittCmd::Ghost { a }
        | WittCmd::Decompose { a } => a,
        WittCmd::Teich { .. } => unreachable!(),
    };
    let a: WittJson = parse(a_arg)?;
    let any = AnyRing::from_descriptor(&a.ring)?;
    if let WittCmd::Ghost { .. } = cmd {
        return with_torsion_free!(&any, r => ghost(r, &a, g)).map_err(Failure::from)?;
    }
    let b: Option<WittJson> = match cmd {
        WittCmd::Add { b, .. } | WittCmd::Mul { b, .. } => Some(parse(b)?),
        _ => None,
    };
    with_ring!(&any, r => {
        let extend = matches!(cmd, WittCmd::Versch { extend: true, .. });
        let w = witt_ring(r, a.p, a.n + extend as usize, g)?;
        let x = wj::decode_witt(r, a.p, &a)?;
        let y = b.as_ref().map(|b| wj::decode_witt(r, a.p, b)).transpose()?;
        let out = match cmd {
            WittCmd::Add { .. } => w.add(&x, y.as_ref().expect("two operands"))?,
            WittCmd::Mul { .. } => w.mul(&x, y.as_ref().expect("two operands"))?,
            WittCmd::Neg { .. } => w.neg(&x)?,
            WittCmd::Frob { .. } => w.frobenius(&x)?,
            WittCmd::Versch { .. } => w.verschiebung(&x, x.len() + extend as usize)?,
            WittCmd::Decompose { .. } => {
                let parts: Vec<Payload> = w.teich_decompose(&x)?.iter().map(|c| r.encode(c)).collect();
                return Ok(json!({ "p": a.p, "n": a.n, "ring": a.ring, "parts": parts }));
            }
            WittCmd::Teich { .. } | WittCmd::Ghost { .. } => unreachable!(),
        };
        Ok(encode(&w, &out))
    })
}

fn ghost<R: TorsionFree + Codec>(r: &R, a: &WittJson, g: &Global) -> Result<Outcome, Error> {
    let w = match witt_ring(r, a.p, a.n, g) {
        Ok(w) => w,
        Err(f) => return Ok(Err(f)),
    };
    let x = wj::decode_witt(r, a.p, a)?;
    let comps: Vec<Payload> = w.ghost(&x)?.iter().map(|c| r.encode(c)).collect();
    Ok(Ok(json!({ "p": a.p, "n": a.n, "ring": a.ring, "ghost": comps })))
}

fn kwitt(kf: &LocalField, arg: &str) -> Result<wittsym::symbol::KWitt, Failure> {
    let a: WittJson = parse(arg)?;
    Ok(wj::decode_witt(kf.k(), kf.p(), &a)?)
}

fn kelem(kf: &LocalField, arg: &str) -> Result<wittsym::symbol::KElem, Failure> {
    let v: Value = parse(arg)?;
    // either a bare payload or a full ring element
    let payload: Payload = match v.get("coeffs") {
        Some(c) if v.get("ring").is_some() => {
            let e: RingElement = serde_json::from_value(v.clone()).map_err(|e| Failure::Usage(e.to_string()))?;
            if AnyRing::from_descriptor(&e.ring)? != AnyRing::Laurent(kf.k().clone()) {
                return Err(Error::RingMismatch.into());
            }
            serde_json::from_value(c.clone()).map_err(|e| Failure::Usage(e.to_string()))?
        }
        _ => serde_json::from_value(v).map_err(|e| Failure::Usage(e.to_string()))?,
    };
    Ok(wj::decode_unit(kf, &payload)?)
}

fn covector(kf: &LocalField, arg: &str) -> Result<wittsym::covector::Covector<wittsym::symbol::KElem>, Failure> {
    let x: CovectorJson = parse(arg)?;
    Ok(kf.covectors().from_window(wj::decode_window(kf.k(), kf.p(), &x)?))
}

fn symbol(g: &Global, cmd: &SymbolCmd) -> Outcome {
    let kf = field(g)?;
    match cmd {
        SymbolCmd::Asw { a, b } => {
            let (a, b) = (kwitt(&kf, a)?, kelem(&kf, b)?);
            Ok(value(&kf.asw_symbol(&a, &b)?, provenance(g, "symbol asw", &kf)))
        }
        SymbolCmd::AswInf { x, b } => {
            let (x, b) = (covector(&kf, x)?, kelem(&kf, b)?);
            Ok(value(&kf.asw_symbol_inf(&x, &b)?, provenance(g, "symbol asw-inf", &kf)))
        }
        SymbolCmd::Pair { a, b } => {
            let (a, b) = (kwitt(&kf, a)?, kwitt(&kf, b)?);
            Ok(value(&kf.pairing_mn(&a, &b)?, provenance(g, "symbol pair", &kf)))
        }
    }
}

fn pairing(g: &Global, cmd: &PairingCmd) -> Outcome {
    let kf = field(g)?;
    let (v, name) = match cmd {
        PairingCmd::N { a, b } => (kf.pairing_n(&kwitt(&kf, a)?, &kwitt(&kf, b)?)?, "pairing n"),
        PairingCmd::Mn { a, b } => (kf.pairing_mn(&kwitt(&kf, a)?, &kwitt(&kf, b)?)?, "pairing mn"),
        PairingCmd::Inf { x, y } => (kf.pairing_inf(&covector(&kf, x)?, &covector(&kf, y)?)?, "pairing inf"),
    };
    Ok(value(&v, provenance(g, name, &kf)))
}

fn spec(g: &Global, name: &str) -> Result<SuiteSpec, Failure> {
    Ok(SuiteSpec {
        suite: name.to_string(),
        p: g.p,
        f: g.f,
        n: g.n,
        m: g.m,
        samples: g.samples,
        seed: g.seed,
        policy: policy(g),
        budget: budget(g)?,
    })
}

fn report(r: wittsym::suite::SuiteReport) -> Outcome {
    let passed = r.passed();
    let v = serde_json::to_value(r).expect("reports serialize");
    if passed {
        Ok(v)
    } else {
        Err(Failure::Violation(v))
    }
}

fn forms_cmd(g: &Global, cmd: &FormsCmd) -> Outcome {
    match cmd {
        FormsCmd::Eval { tensor } => {
            let kf = field(g)?;
            let t: TensorJson = parse(tensor)?;
            let x = wj::decode_tensor(&kf, &t)?;
            Ok(value(&forms::alpha_eval(&kf, &x)?, provenance(g, "forms eval", &kf)))
        }
        FormsCmd::Check { relation } => {
            let kind: RelationKind = relation.parse()?;
            report(suite::check_relation(&spec(g, "relation-check")?, kind)?)
        }
    }
}

fn suite_cmd(g: &Global, cmd: &SuiteCmd) -> Outcome {
    match cmd {
        SuiteCmd::List => Ok(json!({ "suites": suite::catalog() })),
        SuiteCmd::Run { name } => report(suite::run_suite(&spec(g, name)?)?),
    }
}
