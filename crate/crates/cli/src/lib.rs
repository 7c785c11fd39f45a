//! Argument handling and output rendering for the `binomod` binary.
//!
//! Every command produces one envelope
//! `{tool_version, command, params, result, status}` with big integers
//! encoded as decimal strings, rendered as JSON, CSV or plain text.

use std::collections::BTreeMap;
use std::str::FromStr;

use binomod::periods::{admissible, mu_exhaustive};
use binomod::{
    class_sum, class_sum_oracle, conjecture_sweep, mu, nu, verify_identity, ClassSumQuery, CongruenceReport, Error,
    IdentityId, IdentityParams, Modulus, PeriodReport, SweepReport,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "binomod",
    version,
    about = "Class sums of binomial coefficients modulo prime powers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// nu_m(q), the universal period modulus
    Nu(Flags),
    /// One class sum [n r]_m(a) modulo q^N
    Sum(Flags),
    /// Minimal period mu_m(a, q)
    Mu(Flags),
    /// Check one congruence identity
    Verify {
        identity: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Compare max mu_m(a, q) over admissible a with nu_m(q)
    Sweep(Flags),
    /// Run the built-in battery of known values
    Selftest(Flags),
}

/// Numeric flags are kept as strings and parsed exactly on use.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    #[arg(long = "N", allow_hyphen_values = true)]
    pub big_n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    #[arg(long = "T", allow_hyphen_values = true)]
    pub big_t: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Use the Pascal-row route for `sum`
    #[arg(long)]
    pub oracle: bool,
    /// Worker threads for `sweep`
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Scan every exponent instead of the divisors of nu
    #[arg(long)]
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    PreconditionFailed,
    InternalError,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::PreconditionFailed => "precondition_failed",
            Status::InternalError => "internal_error",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::PreconditionFailed => 2,
            Status::InternalError => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub result: Value,
    pub status: Status,
}

impl Envelope {
    pub fn to_json(&self) -> Value {
        let params: Map<String, Value> = self
            .params
            .iter()
            .map(|(k, v)| (k.clone(), Value::from(v.clone())))
            .collect();
        json!({
            "tool_version": TOOL_VERSION,
            "command": self.command,
            "params": params,
            "result": self.result,
            "status": self.status.as_str(),
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => to_csv(&self.to_json()),
            Format::Plain => to_plain(self),
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
/// Returns the rendered output and the process exit code.
pub fn run<I, T>(argv: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (e.render().to_string(), code);
        }
    };
    let env = execute(&cli.command);
    (env.render(cli.format), env.status.exit_code())
}

pub fn execute(command: &Command) -> Envelope {
    let (name, flags) = match command {
        Command::Nu(f) => ("nu".to_string(), f),
        Command::Sum(f) => ("sum".to_string(), f),
        Command::Mu(f) => ("mu".to_string(), f),
        Command::Verify { identity, flags } => (format!("verify {identity}"), flags),
        Command::Sweep(f) => ("sweep".to_string(), f),
        Command::Selftest(f) => ("selftest".to_string(), f),
    };
    let mut ctx = Ctx {
        flags,
        params: BTreeMap::new(),
    };
    // raw values first; parsed flags overwrite them with their normal form
    for name in FLAG_NAMES {
        if let Some(raw) = ctx.raw(name) {
            ctx.params.insert(name.to_string(), raw.clone());
        }
    }
    for (name, on) in [("oracle", flags.oracle), ("exhaustive", flags.exhaustive)] {
        if on {
            ctx.params.insert(name.to_string(), "true".to_string());
        }
    }
    if let Some(j) = flags.jobs {
        ctx.params.insert("jobs".into(), j.to_string());
    }
    let outcome = match command {
        Command::Nu(_) => cmd_nu(&mut ctx),
        Command::Sum(_) => cmd_sum(&mut ctx),
        Command::Mu(_) => cmd_mu(&mut ctx),
        Command::Verify { identity, .. } => cmd_verify(identity, &mut ctx),
        Command::Sweep(_) => cmd_sweep(&mut ctx),
        Command::Selftest(_) => cmd_selftest(),
    };
    let (result, status) = match outcome {
        Ok((value, status)) => (value, status),
        Err(e) => {
            let (kind, status) = match &e {
                Error::InvalidArgument(_) => ("invalid_argument", Status::PreconditionFailed),
                Error::Precondition(_) => ("precondition", Status::PreconditionFailed),
                Error::Internal(_) => ("internal", Status::InternalError),
            };
            (json!({ "error": kind, "message": e.to_string() }), status)
        }
    };
    Envelope {
        command: name,
        params: ctx.params,
        result,
        status,
    }
}

type Outcome = binomod::Result<(Value, Status)>;

const FLAG_NAMES: [&str; 11] = ["m", "q", "N", "n", "r", "a", "l", "k", "T", "p", "alpha"];

struct Ctx<'a> {
    flags: &'a Flags,
    params: BTreeMap<String, String>,
}

impl Ctx<'_> {
    fn raw(&self, name: &str) -> Option<&String> {
        let f = self.flags;
        match name {
            "m" => f.m.as_ref(),
            "q" => f.q.as_ref(),
            "N" => f.big_n.as_ref(),
            "n" => f.n.as_ref(),
            "r" => f.r.as_ref(),
            "a" => f.a.as_ref(),
            "l" => f.l.as_ref(),
            "k" => f.k.as_ref(),
            "T" => f.big_t.as_ref(),
            "p" => f.p.as_ref(),
            "alpha" => f.alpha.as_ref(),
            _ => None,
        }
    }

    fn opt_int(&mut self, name: &str) -> binomod::Result<Option<BigInt>> {
        let Some(raw) = self.raw(name) else { return Ok(None) };
        let v = BigInt::from_str(raw.trim())
            .map_err(|_| Error::InvalidArgument(format!("--{name}: '{raw}' is not a decimal integer")))?;
        self.params.insert(name.to_string(), v.to_string());
        Ok(Some(v))
    }

    fn int(&mut self, name: &str) -> binomod::Result<BigInt> {
        self.opt_int(name)?
            .ok_or_else(|| Error::InvalidArgument(format!("missing required flag --{name}")))
    }

    fn nat(&mut self, name: &str) -> binomod::Result<BigUint> {
        self.int(name)?
            .to_biguint()
            .ok_or_else(|| Error::InvalidArgument(format!("--{name} must be non-negative")))
    }

    fn small<T: TryFrom<BigUint>>(&mut self, name: &str) -> binomod::Result<T> {
        T::try_from(self.nat(name)?).map_err(|_| Error::InvalidArgument(format!("--{name} is too large")))
    }
}

fn ok(v: Value) -> Outcome {
    Ok((v, Status::Ok))
}

fn s(x: impl ToString) -> Value {
    Value::from(x.to_string())
}

fn list<T: std::fmt::Display>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(s).collect())
}

pub fn period_json(rep: &PeriodReport) -> Value {
    json!({
        "q": s(&rep.q),
        "m": s(rep.m),
        "a": rep.a.as_ref().map(s),
        "nu": s(&rep.nu),
        "mu": rep.mu.as_ref().map(s),
        "admissibility": rep.admissibility.map(|c| c.as_str()),
        "divisors_checked": list(&rep.divisors_checked),
    })
}

pub fn congruence_json(rep: &CongruenceReport) -> Value {
    let params: Map<String, Value> = rep.params.iter().map(|(k, v)| (k.clone(), s(v))).collect();
    json!({
        "identity": rep.identity.as_str(),
        "params": params,
        "lhs": list(&rep.lhs),
        "rhs": list(&rep.rhs),
        "modulus": s(&rep.modulus),
        "holds": rep.holds,
    })
}

pub fn sweep_json(rep: &SweepReport) -> Value {
    let entries: Vec<Value> = rep
        .entries
        .iter()
        .map(|e| {
            json!({
                "a": s(&e.a),
                "a_mod_q": s(&e.a_mod_q),
                "admissibility": e.admissibility.as_str(),
                "mu": e.mu.as_ref().map(s),
            })
        })
        .collect();
    json!({
        "m": s(rep.m),
        "q": s(&rep.q),
        "nu": s(&rep.nu),
        "hypothesis_met": rep.hypothesis_met,
        "max_mu": s(&rep.max_mu),
        "attaining": list(&rep.attaining),
        "verdict": rep.verdict.as_str(),
        "residue_discrepancies": list(&rep.residue_discrepancies),
        "entries": entries,
    })
}

fn cmd_nu(ctx: &mut Ctx) -> Outcome {
    let m = ctx.small::<usize>("m")?;
    let q = ctx.nat("q")?;
    let v = nu(m, &q)?;
    ok(json!({ "m": s(m), "q": s(&q), "nu": s(v) }))
}

fn cmd_sum(ctx: &mut Ctx) -> Outcome {
    let n = ctx.nat("n")?;
    let r = ctx.int("r")?;
    let m = ctx.small::<usize>("m")?;
    let a = ctx.int("a")?;
    let q = ctx.nat("q")?;
    let big_n = match ctx.opt_int("N")? {
        Some(v) => {
            u32::try_from(v).map_err(|_| Error::InvalidArgument("--N must be a small non-negative integer".into()))?
        }
        None => 1,
    };
    let modulus = Modulus::new(q, big_n)?;
    let query = ClassSumQuery::new(n, r, m, a, &modulus);
    let (value, route) = if ctx.flags.oracle {
        (class_sum_oracle(&query)?, "oracle")
    } else {
        (class_sum(&query)?, "ring")
    };
    ok(json!({ "value": s(value), "modulus": s(modulus.value()), "route": route }))
}

fn cmd_mu(ctx: &mut Ctx) -> Outcome {
    let m = ctx.small::<usize>("m")?;
    let a = ctx.int("a")?;
    let q = ctx.nat("q")?;
    if !ctx.flags.exhaustive {
        return ok(period_json(&mu(m, &a, &q)?));
    }
    let class = admissible(&a, m, &q)?;
    let bound = nu(m, &q)?;
    let bound_u64 = bound
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument(format!("nu = {bound} too large for an exhaustive scan")))?;
    let found = mu_exhaustive(m, &a, &q, bound_u64)?;
    let found = found.ok_or_else(|| Error::Internal(format!("no period up to nu = {bound}")))?;
    ok(json!({
        "q": s(&q),
        "m": s(m),
        "a": s(&a),
        "nu": s(&bound),
        "mu": s(found),
        "admissibility": class.as_str(),
        "mode": "exhaustive",
    }))
}

fn cmd_verify(identity: &str, ctx: &mut Ctx) -> Outcome {
    let id = IdentityId::from_str(identity)?;
    let mut nat = |name: &str| -> binomod::Result<Option<BigUint>> {
        match ctx.opt_int(name)? {
            Some(v) => v
                .to_biguint()
                .map(Some)
                .ok_or_else(|| Error::InvalidArgument(format!("--{name} must be non-negative"))),
            None => Ok(None),
        }
    };
    let mut ps = IdentityParams {
        q: nat("q")?,
        m: nat("m")?,
        l: nat("l")?,
        n: nat("n")?,
        k: nat("k")?,
        t: nat("T")?,
        p: nat("p")?,
        alpha: nat("alpha")?,
        ..IdentityParams::default()
    };
    ps.a = ctx.opt_int("a")?;
    ps.r = ctx.opt_int("r")?;
    let reports = verify_identity(id, &ps)?;
    match reports.as_slice() {
        [rep] => ok(congruence_json(rep)),
        reps => ok(json!({
            "identity": id.as_str(),
            "holds": reps.iter().all(|r| r.holds),
            "reports": reps.iter().map(congruence_json).collect::<Vec<_>>(),
        })),
    }
}

fn cmd_sweep(ctx: &mut Ctx) -> Outcome {
    let m = ctx.small::<usize>("m")?;
    let q = ctx.nat("q")?;
    ok(sweep_json(&conjecture_sweep(m, &q, ctx.flags.jobs)?))
}

/// Published nu and mu values; any mismatch is an internal error.
fn cmd_selftest() -> Outcome {
    let mut checks = Vec::new();
    let mut all = true;
    let mut record = |name: String, expected: u64, got: binomod::Result<Option<BigUint>>| {
        let got_s = match &got {
            Ok(Some(v)) => v.to_string(),
            Ok(None) => "none".to_string(),
            Err(e) => e.to_string(),
        };
        let pass = matches!(&got, Ok(Some(v)) if *v == BigUint::from(expected));
        all &= pass;
        checks.push(json!({ "name": name, "expected": s(expected), "got": got_s, "pass": pass }));
    };
    for (m, q, want) in [(7usize, 9u64, 2184u64), (7, 5, 15624), (6, 11, 120), (1, 9, 6)] {
        record(format!("nu_{m}({q})"), want, nu(m, &BigUint::from(q)).map(Some));
    }
    let mus: [(usize, i64, u64, u64); 15] = [
        (7, -1, 9, 1092),
        (7, 1, 9, 546),
        (7, -2, 9, 546),
        (7, 4, 9, 546),
        (7, 3, 9, 3),
        (7, -3, 9, 3),
        (7, 0, 9, 1),
        (7, 1, 5, 868),
        (7, -1, 5, 1736),
        (7, 2, 5, 2232),
        (7, -2, 5, 15624),
        (6, 1, 11, 60),
        (6, -1, 11, 60),
        (6, 2, 11, 120),
        (6, 5, 11, 120),
    ];
    for (m, a, q, want) in mus {
        record(
            format!("mu_{m}({a},{q})"),
            want,
            mu(m, &BigInt::from(a), &BigUint::from(q)).map(|r| r.mu),
        );
    }
    let sweep = conjecture_sweep(6, &BigUint::from(11u32), None).map(|r| Some(r.max_mu));
    record("sweep max mu_6(a,11)".into(), 120, sweep);
    let status = if all { Status::Ok } else { Status::InternalError };
    let total = checks.len();
    Ok((json!({ "passed": all, "total": s(total), "checks": checks }), status))
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, &'static str, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) if map.is_empty() => out.push((prefix.to_string(), "object", String::new())),
        Value::Array(xs) if xs.is_empty() => out.push((prefix.to_string(), "array", String::new())),
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&join(&format!("[{i}]")), x, out);
            }
        }
        Value::String(x) => out.push((prefix.to_string(), "string", x.clone())),
        Value::Bool(b) => out.push((prefix.to_string(), "bool", b.to_string())),
        Value::Number(n) => out.push((prefix.to_string(), "number", n.to_string())),
        Value::Null => out.push((prefix.to_string(), "null", String::new())),
    }
}

/// One `path,type,value` row per leaf. Array positions appear as `[i]`
/// path segments so [`csv_to_json`] can rebuild the exact document.
pub fn to_csv(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["path", "type", "value"]).expect("in-memory write");
    for (path, ty, value) in rows {
        w.write_record([path.as_str(), ty, value.as_str()])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Inverse of [`to_csv`].
pub fn csv_to_json(text: &str) -> Result<Value, String> {
    let mut root = Value::Null;
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    for rec in rdr.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let (path, ty, raw) = (&rec[0], &rec[1], &rec[2]);
        let leaf = match ty {
            "string" => Value::from(raw),
            "bool" => Value::from(raw == "true"),
            "number" => serde_json::from_str(raw).map_err(|e| e.to_string())?,
            "null" => Value::Null,
            "array" => Value::Array(Vec::new()),
            "object" => Value::Object(Map::new()),
            other => return Err(format!("unknown type '{other}'")),
        };
        let mut slot = &mut root;
        if !path.is_empty() {
            for seg in path.split('.') {
                slot = match seg.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
                    Some(idx) => {
                        let i: usize = idx.parse().map_err(|_| format!("bad index in {path}"))?;
                        if slot.is_null() {
                            *slot = Value::Array(Vec::new());
                        }
                        let xs = slot.as_array_mut().ok_or_else(|| format!("{path}: not an array"))?;
                        if xs.len() <= i {
                            xs.resize(i + 1, Value::Null);
                        }
                        &mut xs[i]
                    }
                    None => {
                        if slot.is_null() {
                            *slot = Value::Object(Map::new());
                        }
                        let map = slot.as_object_mut().ok_or_else(|| format!("{path}: not an object"))?;
                        map.entry(seg.to_string()).or_insert(Value::Null)
                    }
                };
            }
        }
        *slot = leaf;
    }
    Ok(root)
}

fn to_plain(env: &Envelope) -> String {
    let mut rows = Vec::new();
    flatten("", &env.result, &mut rows);
    let mut out = String::new();
    for (path, _, value) in rows {
        out.push_str(&format!("{path}: {value}\n"));
    }
    if env.status != Status::Ok {
        out.push_str(&format!("status: {}\n", env.status.as_str()));
    }
    out
}
