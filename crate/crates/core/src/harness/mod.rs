//! Command-line orchestration: argument parsing, check campaigns, JSON
//! reports and quiver exports.
//!
//! Exit codes: 0 pass, 1 usage error, 2 mathematical violation,
//! 3 sampling failure.

mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use rand::seq::index::sample;
use rand::Rng;
use serde_json::{json, Value};

pub use report::{
    omega_json, scalars, ser_opt_scalar, ser_scalar, violation_json, Check, Report, Status, Timing,
};

use crate::error::{Error, Result};
use crate::exact::{fmt_scalar, int, is_integer, Jet, Mat, Scalar};
use crate::family::{rng_from_seed, FamilyFunction, DEFAULT_BOUND};
use crate::identity::{verify_corollary_with, verify_long_identity, PencilDeterminant};
use crate::mutation::{all_coords, check_divisibility, MutationState, Verdict};
use crate::poisson::{
    bracket_from_gradients, gradients_all, gradients_std, log_canonical_check, log_canonical_pairs,
    sample_points, std_bracket_from_gradients, BracketKind, Evaluator, LogCanonical,
};
use crate::seedcore::{
    build_dual_seed, build_initial_seed, diagonal_reduce, to_dot, to_json, Quiver, Seed, VertexKind,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_SAMPLING: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "double-cluster",
    version,
    about = "Exact checks of the generalized cluster structure on D(GL_n) and GL_n*",
    args_override_self = true
)]
pub struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON file whose keys are flag names; explicit flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact verification campaigns.
    #[command(subcommand)]
    Verify(Verify),
    /// Build a quiver and print or export it.
    Quiver(QuiverArgs),
    /// Mutate the initial seed and check the adjacent cluster.
    Mutate(MutateArgs),
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Constancy of `{f_i, f_j} / (f_i f_j)` over random points.
    LogCanonical(LogCanonicalArgs),
    /// The Krylov determinantal identity on random `(A, u, v)`.
    Identity(TrialArgs),
    /// Factorization of the pencil determinant through `phi_1_1`.
    Corollary(CorollaryArgs),
    /// Casimir functions bracket to zero with the family.
    Casimirs(CasimirArgs),
}

#[derive(Args, Debug, Clone)]
pub struct LogCanonicalArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 5)]
    pub points: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value = "double", value_parser = parse_bracket)]
    pub bracket: BracketKind,
    /// Check only this many randomly chosen pairs.
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Replace the special function by its sum with a stable one.
    #[arg(long)]
    pub corrupt: bool,
}

#[derive(Args, Debug, Clone)]
pub struct TrialArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct CorollaryArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Random-line trials of the divisibility test (0 disables it).
    #[arg(long, default_value_t = 20)]
    pub divisibility_trials: usize,
}

#[derive(Args, Debug, Clone)]
pub struct CasimirArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub points: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// `double` on the full family, `std` on the diagonal reduction.
    #[arg(long, default_value = "double", value_parser = parse_bracket)]
    pub bracket: BracketKind,
    /// Comma-separated function names replacing the default family.
    #[arg(long, value_delimiter = ',')]
    pub functions: Option<Vec<String>>,
}

#[derive(Args, Debug, Clone)]
pub struct QuiverArgs {
    #[arg(long)]
    pub n: usize,
    /// DOT output path, `-` for stdout.
    #[arg(long)]
    pub dot: Option<String>,
    /// JSON output path, `-` for stdout.
    #[arg(long)]
    pub json: Option<String>,
    #[arg(long, conflicts_with = "diagonal")]
    pub dual: bool,
    #[arg(long)]
    pub diagonal: bool,
}

#[derive(Args, Debug, Clone)]
pub struct MutateArgs {
    #[arg(long)]
    pub n: usize,
    /// First mutation direction.
    #[arg(long)]
    pub at: Option<String>,
    /// Further directions, applied after `--at`.
    #[arg(long, value_delimiter = ',')]
    pub sequence: Option<Vec<String>>,
    #[arg(long, default_value_t = 4)]
    pub points: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Integrality and divisibility checks for every exchange.
    #[arg(long)]
    pub check_regularity: bool,
    /// Random-line trials per divisibility test.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
}

fn parse_bracket(s: &str) -> std::result::Result<BracketKind, String> {
    s.parse()
        .map_err(|_| format!("unknown bracket `{s}` (expected double, std or dual)"))
}

/// What one invocation produced. `main` prints the streams and exits.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResampleExhausted { .. } | Error::Vanishing { .. } | Error::Singular { .. } => EXIT_SAMPLING,
        Error::UnsupportedSize(_)
        | Error::UnknownName(_)
        | Error::NotMutable(_)
        | Error::DepthExceeded(_)
        | Error::InvalidIndex { .. } => EXIT_USAGE,
        _ => EXIT_VIOLATION,
    }
}

const SUBCOMMANDS: &[&str] = &[
    "verify",
    "log-canonical",
    "identity",
    "corollary",
    "casimirs",
    "quiver",
    "mutate",
];

/// Removes `--config PATH` from `args` and splices the file's flags in right
/// after the subcommand words, so later explicit flags override them.
fn expand_config(mut args: Vec<String>) -> Run<Vec<String>> {
    let mut path = None;
    let mut i = 1;
    while i < args.len() {
        if args[i] == "--config" {
            if i + 1 >= args.len() {
                return Err(usage("--config needs a path"));
            }
            path = Some(args.remove(i + 1));
            args.remove(i);
        } else if let Some(p) = args[i].strip_prefix("--config=") {
            path = Some(p.to_string());
            args.remove(i);
        } else {
            i += 1;
        }
    }
    let Some(path) = path else { return Ok(args) };
    let text = std::fs::read_to_string(&path).map_err(|e| usage(format!("cannot read config {path}: {e}")))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| usage(format!("invalid config {path}: {e}")))?;
    let Value::Object(map) = value else {
        return Err(usage("config must be a JSON object"));
    };
    let mut tokens = Vec::new();
    for (key, v) in map {
        let flag = format!("--{}", key.replace('_', "-"));
        match v {
            Value::Bool(true) => tokens.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Number(x) => tokens.extend([flag, x.to_string()]),
            Value::String(s) => tokens.extend([flag, s]),
            Value::Array(items) => {
                let parts: Vec<String> = items
                    .iter()
                    .map(|it| match it {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                tokens.extend([flag, parts.join(",")]);
            }
            Value::Object(_) => return Err(usage(format!("config key `{key}` must not be an object"))),
        }
    }
    let start = args.iter().position(|a| SUBCOMMANDS.contains(&a.as_str()));
    let mut at = start.unwrap_or(args.len());
    while at < args.len() && SUBCOMMANDS.contains(&args[at].as_str()) {
        at += 1;
    }
    args.splice(at..at, tokens);
    Ok(args)
}

/// Parses and runs one command line (`args[0]` is the program name).
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let echo: Vec<String> = args.iter().skip(1).cloned().collect();
    let mut out = Outcome::default();
    let expanded = match expand_config(args) {
        Ok(a) => a,
        Err(f) => return failure_outcome(f),
    };
    let cli = match Cli::try_parse_from(expanded) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            if code == EXIT_PASS {
                out.stdout = text;
            } else {
                out.stderr = text;
            }
            out.code = code;
            return out;
        }
    };
    let start = Instant::now();
    let result = match &cli.command {
        Command::Verify(Verify::LogCanonical(a)) => verify_log_canonical(a, echo),
        Command::Verify(Verify::Identity(a)) => verify_identity(a, echo),
        Command::Verify(Verify::Corollary(a)) => verify_corollary(a, echo),
        Command::Verify(Verify::Casimirs(a)) => verify_casimirs(a, echo),
        Command::Mutate(a) => mutate(a, echo),
        Command::Quiver(a) => return quiver_command(a, echo, cli.out.as_deref()),
    };
    match result {
        Ok(mut report) => {
            report.timing.elapsed_ms = start.elapsed().as_millis();
            out.code = if report.passed() { EXIT_PASS } else { EXIT_VIOLATION };
            if let Err(e) = emit(&report.to_json(), cli.out.as_deref(), &mut out) {
                return e;
            }
            if let Some(line) = failure_line(&report) {
                out.stderr.push_str(&line);
            }
            out
        }
        Err(f) => failure_outcome(f),
    }
}

fn failure_outcome(f: Failure) -> Outcome {
    let (code, stderr) = match f {
        Failure::Usage(m) => (EXIT_USAGE, format!("error: {m}\n")),
        Failure::Engine(e) => (exit_code(&e), format!("error: {e}\n")),
    };
    Outcome {
        code,
        stdout: String::new(),
        stderr,
    }
}

fn failure_line(report: &Report) -> Option<String> {
    let c = report.checks.iter().find(|c| c.status == Status::Fail)?;
    Some(format!("FAIL {}: {}\n", c.name, c.detail))
}

fn emit(text: &str, path: Option<&Path>, out: &mut Outcome) -> std::result::Result<(), Outcome> {
    match path {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: cannot write {}: {e}\n", p.display()),
        }),
        None => {
            out.stdout.push_str(text);
            out.stdout.push('\n');
            Ok(())
        }
    }
}

/// The seed whose extended cluster is checked under `kind`.
pub fn seed_for(kind: BracketKind, n: usize) -> Result<Seed> {
    match kind {
        BracketKind::Double => build_initial_seed(n),
        BracketKind::Standard => diagonal_reduce(&build_initial_seed(n)?),
        BracketKind::Dual => build_dual_seed(n),
    }
}

/// A family with one component replaced by its sum with another. Used to
/// confirm that the checks detect a broken family.
pub struct Corrupted<'a, E: Evaluator + ?Sized> {
    pub base: &'a E,
    pub target: usize,
    pub add: usize,
}

impl<E: Evaluator + ?Sized> Corrupted<'_, E> {
    fn patch<T: Clone + std::ops::Add<Output = T>>(&self, mut v: Vec<T>) -> Vec<T> {
        v[self.target] = v[self.target].clone() + v[self.add].clone();
        v
    }
}

impl<E: Evaluator + ?Sized> Evaluator for Corrupted<'_, E> {
    fn labels(&self) -> Vec<String> {
        let mut l = self.base.labels();
        l[self.target] = format!("{}+{}", l[self.target], l[self.add]);
        l
    }
    fn eval(&self, x: &Mat<Scalar>, y: &Mat<Scalar>) -> Result<Vec<Scalar>> {
        Ok(self.patch(self.base.eval(x, y)?))
    }
    fn eval_jet(&self, x: &Mat<Jet>, y: &Mat<Jet>) -> Result<Vec<Jet>> {
        Ok(self.patch(self.base.eval_jet(x, y)?))
    }
}

/// `(special vertex or first mutable, first stable)` of a seed.
pub fn corruption_target(seed: &Seed) -> Option<(usize, usize)> {
    let vs = &seed.quiver.vertices;
    let target = vs
        .iter()
        .position(|v| v.is_special())
        .or_else(|| vs.iter().position(|v| v.kind == VertexKind::Mutable))?;
    let add = vs.iter().position(|v| v.kind == VertexKind::Stable)?;
    Some((target, add))
}

fn all_pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect()
}

fn verify_log_canonical(a: &LogCanonicalArgs, echo: Vec<String>) -> Run<Report> {
    if a.n < 2 {
        return Err(usage("--n must be at least 2"));
    }
    if a.points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    let seed = seed_for(a.bracket, a.n)?;
    let corrupted;
    let e: &dyn Evaluator = if a.corrupt {
        let (target, add) = corruption_target(&seed).ok_or_else(|| usage("family has nothing to corrupt"))?;
        corrupted = Corrupted {
            base: &seed,
            target,
            add,
        };
        &corrupted
    } else {
        &seed
    };
    let mut rng = rng_from_seed(a.seed);
    let points = sample_points(e, a.bracket, a.n, a.points, &mut rng, DEFAULT_BOUND)?;
    let name = format!("log-canonical/{}", a.bracket.as_str());
    let check = match a.pairs {
        None => match log_canonical_check(e, &points, a.bracket)? {
            LogCanonical::Constant(o) => Check::new(name, Status::Pass, json!({ "omega": omega_json(&o) })),
            LogCanonical::Violated(v) => Check::new(name, Status::Fail, violation_json(&v)),
        },
        Some(k) => {
            let labels = e.labels();
            let pairs = all_pairs(labels.len());
            if k == 0 || k > pairs.len() {
                return Err(usage(format!("--pairs must be between 1 and {}", pairs.len())));
            }
            let mut chosen: Vec<(usize, usize)> = sample(&mut rng, pairs.len(), k).into_iter().map(|t| pairs[t]).collect();
            chosen.sort_unstable();
            match log_canonical_pairs(e, &points, a.bracket, &chosen)? {
                Ok(ratios) => {
                    let omega: Vec<Value> = chosen
                        .iter()
                        .zip(&ratios)
                        .map(|(&(i, j), w)| json!([labels[i], labels[j], fmt_scalar(w)]))
                        .collect();
                    Check::new(name, Status::Pass, json!({ "pairs": omega }))
                }
                Err(v) => Check::new(name, Status::Fail, violation_json(&v)),
            }
        }
    };
    Ok(Report::new(echo, a.n, a.seed, vec![check]))
}

fn random_scalars<R: Rng>(rng: &mut R, len: usize) -> Vec<Scalar> {
    (0..len).map(|_| int(rng.gen_range(-DEFAULT_BOUND..=DEFAULT_BOUND))).collect()
}

fn verify_identity(a: &TrialArgs, echo: Vec<String>) -> Run<Report> {
    if a.n < 2 {
        return Err(usage("the identity is stated for n >= 2"));
    }
    let mut rng = rng_from_seed(a.seed);
    let mut checks = Vec::with_capacity(a.trials);
    for t in 0..a.trials {
        let entries = random_scalars(&mut rng, a.n * a.n);
        let m = Mat::from_fn(a.n, a.n, |i, j| entries[i * a.n + j].clone());
        let u = random_scalars(&mut rng, a.n);
        let v = random_scalars(&mut rng, a.n);
        let r = verify_long_identity(&m, &u, &v)?;
        let detail = json!({
            "a": (0..a.n).map(|i| scalars(&m.row(i))).collect::<Vec<_>>(),
            "u": scalars(&u),
            "v": scalars(&v),
            "lhs": fmt_scalar(&r.lhs),
            "rhs": fmt_scalar(&r.rhs),
        });
        checks.push(Check::pass_if(format!("identity/trial-{t:03}"), r.equal, detail));
    }
    Ok(Report::new(echo, a.n, a.seed, checks))
}

fn point_json(p: &crate::family::DoublePoint) -> Value {
    let n = p.n();
    json!({
        "x": (0..n).map(|i| scalars(&p.x.row(i))).collect::<Vec<_>>(),
        "y": (0..n).map(|i| scalars(&p.y.row(i))).collect::<Vec<_>>(),
    })
}

fn verdict_check(name: String, v: &Verdict) -> Check {
    match v {
        Verdict::DivisibleEvidence { trials } => Check::new(name, Status::Evidence, json!({ "trials": trials })),
        Verdict::NotDivisible(w) => Check::new(name, Status::Fail, serde_json::to_value(w).unwrap_or(Value::Null)),
    }
}

fn verify_corollary(a: &CorollaryArgs, echo: Vec<String>) -> Run<Report> {
    if a.n < 3 {
        return Err(usage("the corollary is stated for n > 2"));
    }
    let n = a.n;
    let state = MutationState::new(build_initial_seed(n)?);
    let phi11 = FamilyFunction::phi(n, 1, 1)?;
    let mut rng = rng_from_seed(a.seed);
    let points = sample_points(&phi11, BracketKind::Double, n, a.trials, &mut rng, DEFAULT_BOUND)?;
    let mut checks = Vec::new();
    let mut signs = Vec::new();
    for (t, p) in points.iter().enumerate() {
        let r = verify_corollary_with(p, &state)?;
        signs.push(r.relative_sign);
        let mut detail = serde_json::to_value(&r).unwrap_or(Value::Null);
        detail["point"] = point_json(p);
        checks.push(Check::pass_if(format!("corollary/trial-{t:03}"), r.equal, detail));
    }
    checks.push(Check::new(
        "corollary/exchange-sign",
        Status::Info,
        json!({ "cofactor_over_exchange_value": signs }),
    ));
    if a.divisibility_trials > 0 {
        let pen = PencilDeterminant::new(n)?;
        let deg = phi11.degree().expect("phi has a total degree");
        let v = check_divisibility(
            &pen,
            pen.degree(),
            &phi11,
            deg,
            &all_coords(n),
            a.divisibility_trials,
            n,
            &mut rng,
        )?;
        checks.push(verdict_check("corollary/divisibility".into(), &v));
    }
    Ok(Report::new(echo, n, a.seed, checks))
}

fn verify_casimirs(a: &CasimirArgs, echo: Vec<String>) -> Run<Report> {
    if a.n < 2 {
        return Err(usage("--n must be at least 2"));
    }
    let n = a.n;
    let family: Vec<FamilyFunction> = match &a.functions {
        Some(names) => names
            .iter()
            .map(|s| FamilyFunction::parse(n, s.trim()))
            .collect::<Result<_>>()?,
        None => {
            let mut f = seed_for(a.bracket, n)?.cluster;
            if a.bracket == BracketKind::Standard {
                f.extend((1..n).map(|r| FamilyFunction::c(n, r)).collect::<Result<Vec<_>>>()?);
            }
            f
        }
    };
    let casimirs: Vec<usize> = (0..family.len()).filter(|&i| family[i].is_casimir()).collect();
    let labels = family.labels();
    let mut rng = rng_from_seed(a.seed);
    let points = sample_points(&family, a.bracket, n, a.points, &mut rng, DEFAULT_BOUND)?;
    let mut nonzero = Vec::new();
    let mut checked = 0usize;
    for (k, p) in points.iter().enumerate() {
        let brackets: Vec<(usize, usize, Scalar)> = match a.bracket {
            BracketKind::Standard => {
                let (_, g) = gradients_std(&family, &p.x)?;
                let mut out = Vec::new();
                for &i in &casimirs {
                    for j in 0..family.len() {
                        out.push((i, j, std_bracket_from_gradients(&g[i], &g[j])?));
                    }
                }
                out
            }
            _ => {
                let (_, g) = gradients_all(&family, p)?;
                let mut out = Vec::new();
                for &i in &casimirs {
                    for j in 0..family.len() {
                        out.push((i, j, bracket_from_gradients(&g[i], &g[j])?));
                    }
                }
                out
            }
        };
        for (i, j, b) in brackets {
            checked += 1;
            if !b.is_zero() {
                nonzero.push(json!({
                    "pair": [labels[i], labels[j]],
                    "point": k,
                    "bracket": fmt_scalar(&b),
                }));
            }
        }
    }
    let detail = json!({
        "casimirs": casimirs.iter().map(|&i| labels[i].clone()).collect::<Vec<_>>(),
        "brackets_checked": checked,
        "nonzero": nonzero,
    });
    let name = format!("casimirs/{}", a.bracket.as_str());
    Ok(Report::new(echo, n, a.seed, vec![Check::pass_if(name, nonzero.is_empty(), detail)]))
}

fn counts_json(q: &Quiver) -> Value {
    json!({
        "vertices": q.vertex_count() - q.count_kind(VertexKind::Isolated),
        "mutable": q.count_kind(VertexKind::Mutable),
        "stable": q.count_kind(VertexKind::Stable),
        "isolated": q.count_kind(VertexKind::Isolated),
        "arrows": q.arrow_count(),
    })
}

fn quiver_command(a: &QuiverArgs, echo: Vec<String>, out_path: Option<&Path>) -> Outcome {
    let build = || -> Run<Quiver> {
        if a.n < 2 {
            return Err(usage("--n must be at least 2"));
        }
        let seed = if a.dual {
            build_dual_seed(a.n)?
        } else if a.diagonal {
            diagonal_reduce(&build_initial_seed(a.n)?)?
        } else {
            build_initial_seed(a.n)?
        };
        Ok(seed.quiver)
    };
    let q = match build() {
        Ok(q) => q,
        Err(f) => return failure_outcome(f),
    };
    let mut out = Outcome::default();
    let mut to_stdout = false;
    for (target, text) in [(&a.dot, to_dot(&q)), (&a.json, format!("{}\n", to_json(&q)))] {
        match target.as_deref() {
            None => {}
            Some("-") => {
                out.stdout.push_str(&text);
                to_stdout = true;
            }
            Some(path) => {
                if let Err(e) = std::fs::write(path, text) {
                    return failure_outcome(usage(format!("cannot write {path}: {e}")));
                }
            }
        }
    }
    let c = counts_json(&q);
    let line = format!(
        "Q_{}: {} vertices ({} mutable, {} stable) + {} isolated, {} arrows\n",
        a.n, c["vertices"], c["mutable"], c["stable"], c["isolated"], c["arrows"]
    );
    if to_stdout {
        out.stderr.push_str(&line);
    } else {
        out.stdout.push_str(&line);
    }
    if let Some(p) = out_path {
        let report = Report::new(echo, a.n, 0, vec![Check::new("quiver/counts", Status::Pass, c)]);
        if let Err(e) = emit(&report.to_json(), Some(p), &mut out) {
            return e;
        }
    }
    out
}

fn mutate(a: &MutateArgs, echo: Vec<String>) -> Run<Report> {
    if a.n < 2 {
        return Err(usage("--n must be at least 2"));
    }
    let directions: Vec<String> = a
        .at
        .iter()
        .cloned()
        .chain(a.sequence.iter().flatten().cloned())
        .map(|s| s.trim().to_string())
        .collect();
    if directions.is_empty() {
        return Err(usage("give --at and/or --sequence"));
    }
    let initial = MutationState::new(build_initial_seed(a.n)?);
    let mut states = vec![initial];
    for d in &directions {
        let next = states.last().expect("nonempty").mutate_named(d)?;
        states.push(next);
    }
    let last = states.last().expect("nonempty");
    let mut rng = rng_from_seed(a.seed);
    let points = sample_points(last, BracketKind::Double, a.n, a.points, &mut rng, DEFAULT_BOUND)?;
    let mut checks = Vec::new();

    for (step, (before, d)) in states.iter().zip(&directions).enumerate() {
        let rule = &states[step + 1].history[step];
        checks.push(Check::new(
            format!("mutation/{step:02}-{d}"),
            Status::Info,
            json!({
                "vertex": before.labels()[rule.vertex],
                "d": rule.d,
                "degree_flags": states[step + 1].flags,
            }),
        ));
    }

    let lc = match log_canonical_check(last, &points, BracketKind::Double)? {
        LogCanonical::Constant(o) => Check::new("log-canonical/adjacent", Status::Pass, json!({ "omega": omega_json(&o) })),
        LogCanonical::Violated(v) => Check::new("log-canonical/adjacent", Status::Fail, violation_json(&v)),
    };
    checks.push(lc);

    let first = &states[0];
    let restored = points
        .iter()
        .map(|p| Ok(first.values(&p.x, &p.y)? == last.values(&p.x, &p.y)?))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);
    checks.push(Check::new(
        "values/equal-to-initial",
        Status::Info,
        json!({ "equal": restored }),
    ));

    if a.check_regularity {
        for (step, before) in states[..directions.len()].iter().enumerate() {
            let after = &states[step + 1];
            let k = after.history[step].vertex;
            let label = after.labels()[k].clone();
            let mut bad = Vec::new();
            for (pi, p) in points.iter().enumerate() {
                let v = after.values(&p.x, &p.y)?.swap_remove(k);
                if !is_integer(&v) {
                    bad.push(json!({ "point": pi, "value": fmt_scalar(&v) }));
                }
            }
            checks.push(Check::pass_if(
                format!("regularity/{step:02}-integral"),
                bad.is_empty(),
                json!({ "variable": label, "non_integral": bad }),
            ));
            let num = before.numerator(k)?;
            let var = before.variable(k);
            let (Some(nd), Some(dd)) = (num.degree(), var.degree()) else {
                return Err(Failure::Engine(Error::Structural(format!(
                    "no degree bound for the exchange at {label}"
                ))));
            };
            let v = check_divisibility(&num, nd, &var, dd, &all_coords(a.n), a.trials, a.n, &mut rng)?;
            checks.push(verdict_check(format!("regularity/{step:02}-divisibility"), &v));
        }
    }
    Ok(Report::new(echo, a.n, a.seed, checks))
}
