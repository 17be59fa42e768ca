use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use qsym_core::context::generic_points;
use qsym_core::difference::ParamOrder;
use qsym_core::lassalle::ls_operator;
use qsym_core::oracle::macdonald_q;
use qsym_core::partition::parse_parts;
use qsym_core::raising::raising_operator_resolved;
use qsym_core::report::{CheckReport, RunReport, Status, Tier};
use qsym_core::suite::{self, g_expansion_json};
use qsym_core::{make_context, parse_rational, Field, Genericity, Partition, Rational, Result};

#[derive(Parser, Debug)]
#[command(name = "qsym", version, about = "Exact checks for raising-operator formulas of Macdonald polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Print Q_λ from the Gram–Schmidt oracle.
    Oracle,
    /// Q_λ from the raising-operator series, checked against the oracle.
    Raise,
    /// Q_λ from the Lassalle–Schlosser sum, checked against the oracle.
    Ls,
    /// Residual of the D1 eigen-equation on the truncated series.
    Eigen,
    /// Compare Lassalle–Schlosser and raising-operator coefficients.
    CompareLs,
    /// The n = 3 hypergeometric form of the series.
    IdentityN3,
    /// Three-variable transfer identity and β-relation.
    N3Tilde,
    /// Run a named batch of checks.
    Suite {
        #[arg(value_enum)]
        name: SuiteName,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SuiteName {
    Schur,
    HallLittlewood,
    Truncation,
    Full,
}

#[derive(Args, Debug, Serialize)]
struct Opts {
    /// Partition, comma separated; trailing zeros set the number of variables.
    #[arg(long, global = true, value_parser = parse_lambda)]
    lambda: Option<Shape>,
    /// Number of variables.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=8))]
    n: Option<u32>,
    #[arg(long, global = true, value_parser = parse_point)]
    #[serde(serialize_with = "render_opt")]
    q: Option<Rational>,
    #[arg(long, global = true, value_parser = parse_point)]
    #[serde(serialize_with = "render_opt")]
    t: Option<Rational>,
    /// Truncation degree of the ratio series.
    #[arg(long = "N", global = true)]
    #[serde(rename = "N")]
    order: Option<usize>,
    /// Upper bound on θ entries.
    #[arg(long, global = true)]
    bound: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of generic (q, t) points when none are given.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=18))]
    trials: u32,
    #[arg(long, global = true)]
    json: bool,
    /// Treat conjecture-tier checks as hard.
    #[arg(long, global = true)]
    strict: bool,
    /// Order of the (q, t) parameters in the difference operator.
    #[arg(long, global = true, default_value_t = ParamOrder::QT)]
    param_order: ParamOrder,
}

fn render_opt<S: serde::Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&r.render()),
        None => s.serialize_none(),
    }
}

/// Parsed `--lambda`, zeros kept.
#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
struct Shape(Vec<u32>);

fn parse_lambda(s: &str) -> std::result::Result<Shape, String> {
    let parts = parse_parts(s).map_err(|e| e.to_string())?;
    Partition::new(parts.clone()).map_err(|e| e.to_string())?;
    if parts.is_empty() {
        return Err("empty partition".into());
    }
    Ok(Shape(parts))
}

fn parse_point(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

impl Opts {
    /// `(q, t)` pairs: the given point, or `trials` generic ones.
    fn points(&self) -> std::result::Result<Vec<(Rational, Rational)>, String> {
        match (&self.q, &self.t) {
            (Some(q), Some(t)) => Ok(vec![(q.clone(), t.clone())]),
            (None, None) => Ok(generic_points(self.trials as usize, self.seed)),
            _ => Err("give both --q and --t, or neither".into()),
        }
    }

    fn qs(&self) -> Vec<Rational> {
        match &self.q {
            Some(q) => vec![q.clone()],
            None => generic_points(self.trials as usize, self.seed).into_iter().map(|p| p.0).collect(),
        }
    }

    fn ts(&self) -> Vec<Rational> {
        match &self.t {
            Some(t) => vec![t.clone()],
            None => generic_points(self.trials as usize, self.seed).into_iter().map(|p| p.1).collect(),
        }
    }

    fn lambda(&self) -> std::result::Result<Vec<u32>, String> {
        let mut l = self.lambda.clone().ok_or("--lambda is required")?.0;
        if let Some(n) = self.n {
            let n = n as usize;
            if l.len() > n {
                return Err(format!("λ has more than n = {n} entries"));
            }
            l.resize(n, 0);
        }
        Ok(l)
    }

    fn lambdas(&self, default: impl FnOnce() -> Vec<Vec<u32>>) -> std::result::Result<Vec<Vec<u32>>, String> {
        if self.lambda.is_some() {
            Ok(vec![self.lambda()?])
        } else {
            Ok(default())
        }
    }
}

fn lam_key(l: &[u32]) -> String {
    l.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// Expansion data for `raise`/`ls` at one point.
fn expansion(kind: &str, lambda: &[u32], q: &Rational, t: &Rational) -> Result<(Value, bool)> {
    let ctx = make_context(lambda.len(), Some(lambda), q.clone(), t.clone(), 0, Genericity::Checked)?;
    let op = match kind {
        "raise" => raising_operator_resolved(lambda, &ctx)?,
        _ => ls_operator(lambda, q, t)?,
    };
    let g = qsym_core::symfunc::GFamily::new(lambda.iter().sum::<u32>() as usize, q, t)?;
    let got = op.apply(lambda, &g)?;
    let want = macdonald_q(&Partition::new(lambda.to_vec())?, q, t)?;
    let matches = got == want;
    let v = json!({
        "lambda": lambda,
        "q": q.render(),
        "t": t.render(),
        "g_expansion": g_expansion_json(&op, lambda),
        "Q": got,
        "matches_oracle": matches,
    });
    Ok((v, matches))
}

fn run(cmd: Command, o: &Opts) -> std::result::Result<(Vec<CheckReport>, Value), String> {
    let mut checks = Vec::new();
    let mut result = Value::Null;
    match cmd {
        Command::Oracle => {
            let l = o.lambda()?;
            let lam = Partition::new(l.clone()).map_err(|e| e.to_string())?;
            let mut out = Vec::new();
            for (q, t) in o.points()? {
                checks.push(suite::check_oracle(lam.weight(), &q, &t));
                match macdonald_q(&lam, &q, &t) {
                    Ok(f) => out.push(json!({ "q": q.render(), "t": t.render(), "Q": f })),
                    Err(e) => out.push(json!({ "q": q.render(), "t": t.render(), "error": e.to_string() })),
                }
            }
            result = json!({ "lambda": lam, "basis": "power_sum", "values": out });
        }
        Command::Raise | Command::Ls => {
            let kind = if matches!(cmd, Command::Raise) { "raise" } else { "ls" };
            let anchor = if kind == "raise" { "raising-operator formula" } else { "Lassalle–Schlosser sum" };
            let l = o.lambda()?;
            let mut out = Vec::new();
            for (q, t) in o.points()? {
                let id = format!("{kind}.{}.q{}.t{}", lam_key(&l), q.render(), t.render());
                let params = json!({ "lambda": l, "point": { "q": q.render(), "t": t.render() } });
                match expansion(kind, &l, &q, &t) {
                    Ok((v, ok)) => {
                        checks.push(CheckReport::new(id, anchor, Tier::Hard, ok, false, params, Value::Null));
                        out.push(v);
                    }
                    Err(e) => checks.push(CheckReport::error(id, anchor, params, &e)),
                }
            }
            result = if out.len() == 1 { out.remove(0) } else { Value::Array(out) };
        }
        Command::Eigen => {
            let n = o.n.unwrap_or(2) as usize;
            let order = o.order.unwrap_or(3);
            for (q, t) in o.points()? {
                checks.push(suite::check_eigen(n, order, &q, &t, o.seed, o.param_order, o.strict));
            }
        }
        Command::CompareLs => {
            let l = o.lambda()?;
            let bound = o.bound.unwrap_or(2);
            let tier = if l.len() <= 3 { Tier::Hard } else { Tier::Conjecture };
            for (q, t) in o.points()? {
                checks.push(suite::check_compare(&l, bound, &q, &t, tier, o.strict));
            }
        }
        Command::IdentityN3 => {
            let order = o.order.unwrap_or(4);
            for (q, t) in o.points()? {
                checks.push(suite::check_identity_n3(order, &q, &t, o.seed, o.strict));
            }
        }
        Command::N3Tilde => {
            let bound = o.bound.unwrap_or(2);
            for (q, t) in o.points()? {
                checks.push(suite::check_n3_tilde(bound, &q, &t, o.seed));
            }
        }
        Command::Suite { name } => checks = run_suite(name, o)?,
    }
    Ok((checks, result))
}

fn run_suite(name: SuiteName, o: &Opts) -> std::result::Result<Vec<CheckReport>, String> {
    let mut checks = Vec::new();
    match name {
        SuiteName::Schur => {
            let shapes = o.lambdas(|| suite::shapes(5).into_iter().map(|p| p.parts().to_vec()).collect())?;
            for q in o.qs() {
                for l in &shapes {
                    checks.push(suite::check_schur(l, &q));
                }
            }
        }
        SuiteName::HallLittlewood => {
            let shapes = o.lambdas(|| suite::padded_shapes(5, 3))?;
            for t in o.ts() {
                for l in &shapes {
                    checks.push(suite::check_hall_littlewood(l, &t));
                }
            }
        }
        SuiteName::Truncation => {
            let ns = o.n.map_or(vec![2, 3], |n| vec![n as usize]);
            let order = o.order.unwrap_or(3);
            for (q, t) in o.points()? {
                for &n in &ns {
                    checks.push(suite::check_truncation(n, order, &q, &t, o.seed));
                }
            }
        }
        SuiteName::Full => {
            let order = o.order.unwrap_or(3);
            let points = o.points()?;
            for (q, t) in &points {
                for d in 1..=4 {
                    checks.push(suite::check_oracle(d, q, t));
                }
                for l in suite::padded_shapes(4, 3) {
                    checks.push(suite::check_raise(&l, q, t));
                    checks.push(suite::check_ls(&l, q, t));
                }
                checks.push(suite::check_eigen(2, order + 2, q, t, o.seed, o.param_order, o.strict));
                checks.push(suite::check_eigen(3, order, q, t, o.seed, o.param_order, o.strict));
                checks.push(suite::check_compare(&[2, 1], 4, q, t, Tier::Hard, o.strict));
                checks.push(suite::check_compare(&[2, 1, 0], 2, q, t, Tier::Hard, o.strict));
                checks.push(suite::check_n3_tilde(2, q, t, o.seed));
                checks.push(suite::check_identity_n3(order, q, t, o.seed, o.strict));
                checks.push(suite::check_truncation(3, order, q, t, o.seed));
                checks.push(suite::check_schur(&[2, 1, 1], q));
                checks.push(suite::check_hall_littlewood(&[2, 1, 1], t));
                checks.push(suite::check_t_power_vanishing(3, 2, q, o.seed));
            }
        }
    }
    Ok(checks)
}

fn summary(run: &RunReport) -> String {
    let mut out = String::new();
    let (mut pass, mut fail, mut reported) = (0, 0, 0);
    for c in &run.checks {
        let tag = match c.status {
            Status::Pass => {
                pass += 1;
                "PASS"
            }
            Status::Fail => {
                fail += 1;
                "FAIL"
            }
            Status::Reported => {
                reported += 1;
                "NOTE"
            }
        };
        out.push_str(&format!("{tag}  {}  ({})\n", c.check_id, c.anchor));
        if !c.witness.is_null() && c.status != Status::Pass {
            out.push_str(&format!("      witness: {}\n", c.witness));
        }
    }
    if !run.result.is_null() {
        out.push_str(&serde_json::to_string_pretty(&run.result).expect("serialisable"));
        out.push('\n');
    }
    out.push_str(&format!("{} checks: {pass} passed, {reported} reported, {fail} failed\n", run.checks.len()));
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (checks, result) = match run(cli.command, &cli.opts) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let config = json!({ "command": cli.command, "options": cli.opts });
    let report = RunReport::new(config, checks).with_result(result);
    let text = if cli.opts.json {
        serde_json::to_string_pretty(&report).expect("serialisable") + "\n"
    } else {
        summary(&report)
    };
    // A closed pipe (e.g. `| head`) is not an error worth a panic.
    let _ = std::io::stdout().write_all(text.as_bytes());
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
