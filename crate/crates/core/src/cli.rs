//! Command-line front end.
//!
//! Every subcommand prints either a short human-readable report or, with
//! `--json`, one JSON document whose keys appear in the order of the fields of
//! [`Report`]. Absent fields are omitted, never `null`.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage error,
//! 3 degenerate parameters, 4 eventually trivial solution,
//! 5 digit budget exceeded, 6 zero set undecided within the horizon.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::closed_form::{iterate_direct_values, solve, verify_with_budget, OrbitTerm, Solution};
use crate::error::{Error, Result};
use crate::exact_arith::{parse_rational, FactoredValue, Rational, Sign, DEFAULT_DIGIT_BUDGET};
use crate::linearization::{linear_orbit, InitialPair};
use crate::matrix_power::{classify, eigenvalues, power, Eigenvalues, Mat2, SystemParams};
use crate::zero_sets::{zero_set_member, MembershipStatus, ZeroSetVerdict, DEFAULT_HORIZON};

pub const SCHEMA: &str = "cubic-orbit/1";
pub const DIGIT_BUDGET_ENV: &str = "CUBIC_ORBIT_DIGIT_BUDGET";
const MIN_DIGIT_BUDGET: u64 = 1000;

pub mod exit {
    pub const OK: i32 = 0;
    pub const MISMATCH: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const DEGENERATE: i32 = 3;
    pub const TRIVIAL: i32 = 4;
    pub const BUDGET: i32 = 5;
    pub const UNKNOWN: i32 = 6;
}

#[derive(Parser, Debug)]
#[command(name = "cubic-orbit", version, about = "Exact orbits of x' = ax²y + bxy², y' = cx²y + dxy²")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Which of the four parameter cases applies
    Classify(Base),
    /// Discriminant and eigenvalues of the coefficient matrix
    Eigen(Base),
    /// n-th power of the coefficient matrix
    Power(WithN),
    /// Linearized state (u_n, v_n)
    Orbit(WithInitN),
    /// Whether the orbit is eventually (0, 0)
    Zeroset(WithInit),
    /// Closed-form (x_n, y_n)
    Solve(WithInitN),
    /// Terms 0..=n by direct iteration
    Iterate(WithInitN),
    /// Compare closed form, reconstruction and direct iteration for n = 0..=N
    Verify(WithInitDepth),
}

#[derive(Args, Debug)]
struct Base {
    #[arg(short = 'a', allow_hyphen_values = true, value_parser = rational_arg)]
    a: Rational,
    #[arg(short = 'b', allow_hyphen_values = true, value_parser = rational_arg)]
    b: Rational,
    #[arg(short = 'c', allow_hyphen_values = true, value_parser = rational_arg)]
    c: Rational,
    #[arg(short = 'd', allow_hyphen_values = true, value_parser = rational_arg)]
    d: Rational,
    /// Emit one JSON document on stdout
    #[arg(long)]
    json: bool,
    /// Print x and y as signed products of rational powers instead of expanding them
    #[arg(long)]
    factored: bool,
    /// Linear steps scanned when the zero set cannot be decided exactly
    #[arg(long, default_value_t = DEFAULT_HORIZON, value_parser = clap::value_parser!(u64).range(1..))]
    horizon: u64,
    /// Largest number of decimal digits any expanded value may have
    #[arg(long, value_parser = clap::value_parser!(u64).range(MIN_DIGIT_BUDGET..))]
    digit_budget: Option<u64>,
}

#[derive(Args, Debug)]
struct WithN {
    #[command(flatten)]
    base: Base,
    #[arg(short = 'n', short_alias = 'N')]
    n: u64,
}

#[derive(Args, Debug)]
struct Init {
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    x0: Rational,
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    y0: Rational,
}

#[derive(Args, Debug)]
struct WithInit {
    #[command(flatten)]
    base: Base,
    #[command(flatten)]
    init: Init,
}

#[derive(Args, Debug)]
struct WithInitN {
    #[command(flatten)]
    base: Base,
    #[command(flatten)]
    init: Init,
    #[arg(short = 'n', short_alias = 'N')]
    n: u64,
}

#[derive(Args, Debug)]
struct WithInitDepth {
    #[command(flatten)]
    base: Base,
    #[command(flatten)]
    init: Init,
    #[arg(short = 'N', short_alias = 'n', default_value_t = 6)]
    n: u64,
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

impl Base {
    fn params(&self) -> SystemParams {
        SystemParams::new(self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone())
    }
}

impl Init {
    fn pair(&self) -> InitialPair {
        InitialPair::new(self.x0.clone(), self.y0.clone())
    }
}

/// A value as it appears in JSON: `"p/q"` when expanded, sign and
/// `[base, exponent]` pairs when factored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueJson {
    Expanded(String),
    Factored { sign: i8, factors: Vec<(String, String)> },
}

impl ValueJson {
    pub fn expanded(r: &Rational) -> Self {
        Self::Expanded(r.to_string())
    }

    pub fn factored(v: &FactoredValue) -> Self {
        Self::Factored {
            sign: v.sign().as_i8(),
            factors: v.factors().iter().map(|(b, e)| (b.to_string(), e.to_string())).collect(),
        }
    }

    pub fn to_factored(&self) -> Result<FactoredValue> {
        match self {
            Self::Expanded(s) => Ok(FactoredValue::from_rational(&parse_rational(s)?)),
            Self::Factored { sign, factors } => {
                let sign = Sign::from_i8(*sign).ok_or_else(|| Error::ParseRational(sign.to_string()))?;
                let factors = factors
                    .iter()
                    .map(|(b, e)| {
                        let exp = e.parse::<BigUint>().map_err(|_| Error::ParseRational(e.clone()))?;
                        Ok((parse_rational(b)?, exp))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(FactoredValue::new(sign, factors))
            }
        }
    }

    fn human(&self) -> String {
        match self {
            Self::Expanded(s) => s.clone(),
            Self::Factored { .. } => self.to_factored().map(|v| v.to_string()).unwrap_or_default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivialJson {
    pub member: bool,
    pub status: MembershipStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
}

impl From<&ZeroSetVerdict> for TrivialJson {
    fn from(v: &ZeroSetVerdict) -> Self {
        Self { member: v.is_member(), status: v.status, witness: v.witness, horizon: v.horizon }
    }
}

/// Agreement of each computation path. `iterate` is the reference and is
/// `true` whenever present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathsJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reconstruct: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterate: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenJson {
    pub discriminant: String,
    pub lambda1: String,
    pub lambda2: String,
    pub rational: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearJson {
    pub u: String,
    pub v: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub n: u64,
    pub x: ValueJson,
    pub y: ValueJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowJson {
    pub n: u64,
    pub x: String,
    pub y: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reconstruct: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorJson {
    pub code: i32,
    pub message: String,
}

/// The one JSON document every subcommand emits.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<ValueJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<ValueJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trivial: Option<TrivialJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<PathsJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigen: Option<EigenJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<[[String; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<LinearJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<RowJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_divergence: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncated_at: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorJson>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DegenerateParameters => exit::DEGENERATE,
        Error::TrivialSolutionEncountered { .. } => exit::TRIVIAL,
        Error::DigitBudgetExceeded { .. } => exit::BUDGET,
        Error::UnknownWithinHorizon { .. } => exit::UNKNOWN,
        Error::ParseRational(_) => exit::USAGE,
        _ => exit::MISMATCH,
    }
}

struct Ctx {
    json: bool,
    factored: bool,
    horizon: u64,
    budget: u64,
}

impl Ctx {
    fn value(&self, v: &FactoredValue) -> Result<ValueJson> {
        if self.factored {
            Ok(ValueJson::factored(v))
        } else {
            Ok(ValueJson::expanded(&v.expand(self.budget)?))
        }
    }

    fn rational(&self, r: &Rational) -> ValueJson {
        if self.factored {
            ValueJson::factored(&FactoredValue::from_rational(r))
        } else {
            ValueJson::expanded(r)
        }
    }
}

fn matrix_json(m: &Mat2<Rational>) -> [[String; 2]; 2] {
    m.rows.clone().map(|row| row.map(|e| e.to_string()))
}

fn params_json(p: &SystemParams) -> ParamsJson {
    ParamsJson { a: p.a.to_string(), b: p.b.to_string(), c: p.c.to_string(), d: p.d.to_string() }
}

/// Outcome of a subcommand before printing: the report and its exit code.
struct Outcome {
    report: Report,
    code: i32,
    human: Vec<String>,
}

fn outcome(report: Report, human: Vec<String>) -> Outcome {
    Outcome { report, code: exit::OK, human }
}

fn report(command: &str, p: &SystemParams) -> Report {
    Report {
        schema: SCHEMA.to_string(),
        command: command.to_string(),
        params: Some(params_json(p)),
        case: Some(classify(p).name().to_string()),
        ..Report::default()
    }
}

fn cmd_classify(p: &SystemParams) -> Outcome {
    let r = report("classify", p);
    let line = format!("case: {}", r.case.as_deref().unwrap_or_default());
    outcome(r, vec![line])
}

fn cmd_eigen(p: &SystemParams) -> Outcome {
    let e = eigenvalues(p);
    let (l1, l2, rational) = match &e.values {
        Eigenvalues::Rational { lambda1, lambda2 } => (lambda1.to_string(), lambda2.to_string(), true),
        Eigenvalues::Quadratic { lambda1, lambda2 } => (lambda1.to_string(), lambda2.to_string(), false),
    };
    let mut r = report("eigen", p);
    let human = vec![
        format!("case: {}", classify(p)),
        format!("discriminant: {}", e.discriminant),
        format!("lambda1: {l1}"),
        format!("lambda2: {l2}"),
    ];
    r.eigen = Some(EigenJson { discriminant: e.discriminant.to_string(), lambda1: l1, lambda2: l2, rational });
    outcome(r, human)
}

fn cmd_power(p: &SystemParams, n: u64) -> Outcome {
    let m = power(p, n);
    let mut r = report("power", p);
    r.n = Some(n);
    r.matrix = Some(matrix_json(&m));
    outcome(r, vec![format!("case: {}", classify(p)), format!("A^{n} = {m}")])
}

fn cmd_orbit(p: &SystemParams, init: &InitialPair, n: u64) -> Outcome {
    let s = linear_orbit(p, init, n);
    let ratio = (!s.u.is_zero()).then(|| (&s.v / &s.u).to_string());
    let mut r = report("orbit", p);
    r.n = Some(n);
    let mut human = vec![format!("u_{n} = {}", s.u), format!("v_{n} = {}", s.v)];
    if let Some(q) = &ratio {
        human.push(format!("v_{n}/u_{n} = {q}"));
    }
    r.linear = Some(LinearJson { u: s.u.to_string(), v: s.v.to_string(), ratio });
    outcome(r, human)
}

fn verdict_lines(v: &ZeroSetVerdict) -> Vec<String> {
    let mut lines = vec![format!("member: {}", v.is_member())];
    match v.status {
        MembershipStatus::Member => lines.push(format!(
            "witness: {} (x_n = y_n = 0 for n >= {})",
            v.witness.unwrap_or_default(),
            v.witness.unwrap_or_default() + 1
        )),
        MembershipStatus::NonMember => {}
        MembershipStatus::UnknownWithinHorizon => {
            lines.push(format!("undecided: no zero within horizon {}", v.horizon.unwrap_or_default()))
        }
    }
    lines
}

fn cmd_zeroset(p: &SystemParams, init: &InitialPair, ctx: &Ctx) -> Result<Outcome> {
    let v = zero_set_member(p, init, ctx.horizon)?;
    let mut r = report("zeroset", p);
    r.trivial = Some(TrivialJson::from(&v));
    let code = if v.status == MembershipStatus::UnknownWithinHorizon { exit::UNKNOWN } else { exit::OK };
    Ok(Outcome { report: r, code, human: verdict_lines(&v) })
}

fn term_human(t: &TermJson) -> Vec<String> {
    vec![format!("x_{} = {}", t.n, t.x.human()), format!("y_{} = {}", t.n, t.y.human())]
}

fn term_json(t: &OrbitTerm, ctx: &Ctx) -> Result<TermJson> {
    Ok(TermJson { n: t.n, x: ctx.value(&t.x)?, y: ctx.value(&t.y)? })
}

fn cmd_solve(p: &SystemParams, init: &InitialPair, n: u64, ctx: &Ctx) -> Result<Outcome> {
    let mut r = report("solve", p);
    r.n = Some(n);
    match solve(p, init, n, ctx.horizon)? {
        Solution::Term(t) => {
            let t = term_json(&t, ctx)?;
            let human = term_human(&t);
            r.x = Some(t.x);
            r.y = Some(t.y);
            Ok(outcome(r, human))
        }
        Solution::Trivial(t) => {
            let v = ZeroSetVerdict::member(t.witness);
            r.trivial = Some(TrivialJson::from(&v));
            if n > t.witness {
                let zero = ctx.rational(&Rational::zero());
                r.x = Some(zero.clone());
                r.y = Some(zero);
            }
            let mut human = vec!["eventually trivial solution".to_string()];
            human.extend(verdict_lines(&v));
            Ok(Outcome { report: r, code: exit::TRIVIAL, human })
        }
    }
}

fn cmd_iterate(p: &SystemParams, init: &InitialPair, n: u64, ctx: &Ctx) -> Result<Outcome> {
    let values = iterate_direct_values(p, init, n, ctx.budget)?;
    let terms: Vec<TermJson> = values
        .iter()
        .enumerate()
        .map(|(k, (x, y))| TermJson { n: k as u64, x: ctx.rational(x), y: ctx.rational(y) })
        .collect();
    let mut r = report("iterate", p);
    r.n = Some(n);
    let human = terms.iter().flat_map(term_human).collect();
    let last = terms.last().expect("term 0 is always present");
    r.x = Some(last.x.clone());
    r.y = Some(last.y.clone());
    r.terms = Some(terms);
    Ok(outcome(r, human))
}

fn all_some_true(values: impl Iterator<Item = Option<bool>>) -> Option<bool> {
    values.flatten().fold(None, |acc, b| Some(acc.unwrap_or(true) && b))
}

fn cmd_verify(p: &SystemParams, init: &InitialPair, n: u64, ctx: &Ctx) -> Result<Outcome> {
    if p.is_degenerate() {
        return Err(Error::DegenerateParameters);
    }
    let v = verify_with_budget(p, init, n, ctx.horizon, ctx.budget);
    let mut r = report("verify", p);
    r.n = Some(n);
    r.trivial = v.zero_set.as_ref().map(TrivialJson::from);
    r.paths = Some(PathsJson {
        closed_form: all_some_true(v.rows.iter().map(|row| row.closed_form)),
        reconstruct: all_some_true(v.rows.iter().map(|row| row.reconstruct)),
        iterate: Some(true),
    });
    r.first_divergence = v.first_divergence;
    r.truncated_at = v.truncated_at;
    let mut human = vec![format!("case: {}", v.case)];
    if let Some(z) = &v.zero_set {
        human.extend(verdict_lines(z));
    }
    let mark = |b: Option<bool>| match b {
        Some(true) => "ok",
        Some(false) => "DIFFERS",
        None => "-",
    };
    for row in &v.rows {
        human.push(format!(
            "n={}: closed_form={} reconstruct={}",
            row.n,
            mark(row.closed_form),
            mark(row.reconstruct)
        ));
    }
    if let Some(t) = v.truncated_at {
        human.push(format!("direct iteration stopped at n={t}: digit budget"));
    }
    r.rows = Some(
        v.rows
            .iter()
            .map(|row| RowJson {
                n: row.n,
                x: row.x.to_string(),
                y: row.y.to_string(),
                closed_form: row.closed_form,
                reconstruct: row.reconstruct,
            })
            .collect(),
    );
    let code = if v.all_agree() { exit::OK } else { exit::MISMATCH };
    human.push(if code == exit::OK { "all paths agree".into() } else { "paths disagree".into() });
    Ok(Outcome { report: r, code, human })
}

fn budget_from_env(env_budget: Option<&str>) -> std::result::Result<u64, String> {
    match env_budget {
        None => Ok(DEFAULT_DIGIT_BUDGET),
        Some(s) => match s.trim().parse::<u64>() {
            Ok(v) if v >= MIN_DIGIT_BUDGET => Ok(v),
            _ => Err(format!("{DIGIT_BUDGET_ENV} must be an integer >= {MIN_DIGIT_BUDGET}, got {s:?}")),
        },
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify(_) => "classify",
        Command::Eigen(_) => "eigen",
        Command::Power(_) => "power",
        Command::Orbit(_) => "orbit",
        Command::Zeroset(_) => "zeroset",
        Command::Solve(_) => "solve",
        Command::Iterate(_) => "iterate",
        Command::Verify(_) => "verify",
    }
}

fn base_of(c: &Command) -> &Base {
    match c {
        Command::Classify(b) | Command::Eigen(b) => b,
        Command::Power(w) => &w.base,
        Command::Zeroset(w) => &w.base,
        Command::Orbit(w) | Command::Solve(w) | Command::Iterate(w) => &w.base,
        Command::Verify(w) => &w.base,
    }
}

/// Runs the CLI with the digit budget taken from the environment unless
/// `--digit-budget` is given.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let env = std::env::var(DIGIT_BUDGET_ENV).ok();
    run_with_env(args, env.as_deref(), out, err)
}

pub fn run_with_env<I, T>(args: I, env_budget: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    exit::OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    exit::USAGE
                }
            };
        }
    };

    let base = base_of(&cli.command);
    let budget = match base.digit_budget {
        Some(b) => b,
        None => match budget_from_env(env_budget) {
            Ok(b) => b,
            Err(msg) => {
                let _ = writeln!(err, "error: {msg}");
                return exit::USAGE;
            }
        },
    };
    let ctx = Ctx { json: base.json, factored: base.factored, horizon: base.horizon, budget };
    let p = base.params();

    let result = match &cli.command {
        Command::Classify(_) => Ok(cmd_classify(&p)),
        Command::Eigen(_) => Ok(cmd_eigen(&p)),
        Command::Power(w) => Ok(cmd_power(&p, w.n)),
        Command::Orbit(w) => Ok(cmd_orbit(&p, &w.init.pair(), w.n)),
        Command::Zeroset(w) => cmd_zeroset(&p, &w.init.pair(), &ctx),
        Command::Solve(w) => cmd_solve(&p, &w.init.pair(), w.n, &ctx),
        Command::Iterate(w) => cmd_iterate(&p, &w.init.pair(), w.n, &ctx),
        Command::Verify(w) => cmd_verify(&p, &w.init.pair(), w.n, &ctx),
    };

    let Outcome { report, code, human } = match result {
        Ok(o) => o,
        Err(e) => {
            let code = exit_code(&e);
            let mut r = report(command_name(&cli.command), &p);
            if let Error::TrivialSolutionEncountered { index } = e {
                r.trivial = Some(TrivialJson::from(&ZeroSetVerdict::member(index)));
            }
            r.error = Some(ErrorJson { code, message: e.to_string() });
            Outcome { report: r, code, human: Vec::new() }
        }
    };

    if let Some(e) = &report.error {
        let _ = writeln!(err, "error: {}", e.message);
    }
    if ctx.json {
        match serde_json::to_string(&report) {
            Ok(s) => {
                let _ = writeln!(out, "{s}");
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return exit::MISMATCH;
            }
        }
    } else {
        for line in human {
            let _ = writeln!(out, "{line}");
        }
    }
    code
}
