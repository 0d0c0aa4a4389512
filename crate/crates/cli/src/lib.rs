//! The `equising` command line: argument parsing, dispatch and report
//! rendering. [`run`] returns the exit code and both output streams so the
//! binary and the tests share one code path.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use equising_core::algebra::{BivarPoly, FamilyPoly, PuiseuxSeries};
use equising_core::arcs::{fmt_scalar, series_json, BarAnalysis, Branch, Branches};
use equising_core::checker::{check_family, CheckConfig, Condition, FamilyReport};
use equising_core::corpus::{parse_family, run_corpus};
use equising_core::flow::{euler_lemma_check, flow_check, FlowConfig, FlowStatus, WeightedForm};
use equising_core::polygon::{polygon_of, relative_polygon};
use equising_core::rat::{fmt_rat, parse_rat, Rat};
use equising_core::roots::expand::{render_root, ExpandConfig, Root};
use equising_core::{Error, DEFAULT_PRECISION};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

/// Overrides the default working precision when `--precision` is absent.
pub const PRECISION_ENV: &str = "EQUISING_PRECISION";

#[derive(Parser, Debug)]
#[command(name = "equising", version, about = "Equisingularity checks for real plane-curve families")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Starting working precision in bits.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Cap on the number of terms in a root expansion.
    #[arg(long, global = true, default_value_t = equising_core::DEFAULT_MAX_TERMS)]
    pub max_terms: usize,
    /// Cap on exponent denominators.
    #[arg(long, global = true, default_value_t = equising_core::DEFAULT_DENOM_CAP)]
    pub denom_cap: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, value_enum, default_value_t = BranchSel::Both)]
    pub branch: BranchSel,
    /// Truncation order K of parameter series.
    #[arg(long = "t-order", global = true, default_value_t = 8)]
    pub t_order: usize,
    /// Read the expression from a file instead of the command line.
    #[arg(long, global = true)]
    pub file: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchSel {
    Pos,
    Neg,
    Both,
}

impl BranchSel {
    fn admits(&self, b: Branch) -> bool {
        match self {
            BranchSel::Both => true,
            BranchSel::Pos => b == Branch::Pos,
            BranchSel::Neg => b == Branch::Neg,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            BranchSel::Pos => "pos",
            BranchSel::Neg => "neg",
            BranchSel::Both => "both",
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Newton polygon, absolute or relative to an arc.
    Polygon {
        expr: Option<String>,
        /// Arc as `exponent:coefficient` pairs, e.g. `1:-1,3/2:2`.
        #[arg(long)]
        arc: Option<String>,
        /// Parameter value at which a family is specialized.
        #[arg(long, default_value = "0")]
        t: String,
    },
    /// Newton-Puiseux roots on each half-branch.
    Roots { expr: Option<String> },
    /// Bars carrying a B-root of f or of f_x.
    Bars { expr: Option<String> },
    /// Critical points with their values.
    Critical { expr: Option<String> },
    /// The complete initial form: polar bars with their initial forms.
    Cif { expr: Option<String> },
    /// Decide conditions (a), (A), (A') for a family.
    CheckFamily {
        expr: Option<String>,
        /// Comma-separated parameter values; must contain 0.
        #[arg(long = "t-grid")]
        t_grid: Option<String>,
        #[arg(long, default_value = "a,A,Aprime")]
        conditions: String,
    },
    /// Integrate the trivializing field and report the level drift.
    FlowCheck {
        expr: Option<String>,
        #[arg(long, default_value_t = 10)]
        starts: usize,
        /// Inner wall r_min.
        #[arg(long, default_value = "1/8")]
        wall: String,
        #[arg(long = "t-span", default_value = "0:1/4")]
        t_span: String,
        #[arg(long, default_value_t = 1e-10)]
        rtol: f64,
        #[arg(long, default_value_t = 1e-12)]
        atol: f64,
        /// Largest admissible relative drift.
        #[arg(long = "max-drift", default_value_t = 1e-6)]
        max_drift: f64,
    },
    /// The v-order of |X W_X| + |Y W_Y| along X = u v^h, Y = v.
    EulerCheck {
        form: Option<String>,
        #[arg(long)]
        u0: String,
        /// Weight of X; inferred from the form when omitted.
        #[arg(long)]
        h: Option<String>,
    },
    /// Run the bundled families and print a pass/fail table.
    Corpus {
        #[arg(long = "t-grid")]
        t_grid: Option<String>,
    },
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(msg: impl std::fmt::Display) -> Outcome {
        Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let precision = match resolve_precision(cli.global.precision, std::env::var(PRECISION_ENV).ok()) {
        Ok(p) => p,
        Err(e) => return Outcome::input_error(e),
    };
    match dispatch(&cli, precision) {
        Ok((code, result, text)) => {
            let stdout = match cli.global.format {
                Format::Json => {
                    let doc = json!({
                        "command": command_name(&cli.command),
                        "config": config_json(&cli.global, precision),
                        "result": result,
                    });
                    let mut s = serde_json::to_string_pretty(&doc).expect("serializable report");
                    s.push('\n');
                    s
                }
                Format::Text => text,
            };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(e) => Outcome::input_error(e),
    }
}

fn resolve_precision(flag: Option<u32>, env: Option<String>) -> Result<u32, String> {
    if let Some(p) = flag {
        return check_precision(p);
    }
    match env {
        Some(s) => s.trim().parse::<u32>().map_err(|_| format!("{PRECISION_ENV} must be a positive integer, got `{s}`")).and_then(check_precision),
        None => Ok(DEFAULT_PRECISION),
    }
}

fn check_precision(p: u32) -> Result<u32, String> {
    if (32..=equising_core::MAX_PRECISION).contains(&p) {
        Ok(p)
    } else {
        Err(format!("precision must lie in 32..={}", equising_core::MAX_PRECISION))
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Polygon { .. } => "polygon",
        Command::Roots { .. } => "roots",
        Command::Bars { .. } => "bars",
        Command::Critical { .. } => "critical",
        Command::Cif { .. } => "cif",
        Command::CheckFamily { .. } => "check-family",
        Command::FlowCheck { .. } => "flow-check",
        Command::EulerCheck { .. } => "euler-check",
        Command::Corpus { .. } => "corpus",
    }
}

fn config_json(g: &GlobalArgs, precision: u32) -> Value {
    json!({
        "precision": precision,
        "max_terms": g.max_terms,
        "denom_cap": g.denom_cap,
        "seed": g.seed,
        "t_order": g.t_order,
        "branch": g.branch.name(),
    })
}

fn expand_config(g: &GlobalArgs, precision: u32) -> ExpandConfig {
    ExpandConfig { prec: precision, denom_cap: g.denom_cap, max_terms: g.max_terms, ..ExpandConfig::default() }
}

type Dispatched = (i32, Value, String);

fn dispatch(cli: &Cli, precision: u32) -> Result<Dispatched, String> {
    let g = &cli.global;
    let expand = expand_config(g, precision);
    let e = |x: Error| x.to_string();
    match &cli.command {
        Command::Polygon { expr, arc, t } => {
            let f = specialized(&input(expr, g)?, g.t_order, t)?;
            let p = match arc {
                Some(a) => relative_polygon(&f, &parse_arc(a)?, &()).map_err(e)?,
                None => polygon_of(&f).map_err(e)?,
            };
            let j = p.to_json();
            let text = format!("vertices {}\n", j["vertices"]);
            Ok((EXIT_HOLDS, j, text))
        }
        Command::Roots { expr } => {
            let f = polynomial(&input(expr, g)?)?;
            let br = Branches::compute(&f, &expand).map_err(e)?;
            let mut out = serde_json::Map::new();
            let mut text = String::new();
            for b in [Branch::Pos, Branch::Neg].into_iter().filter(|b| g.branch.admits(*b)) {
                let roots = &br.get(b).roots;
                out.insert(b.name().into(), Value::Array(roots.iter().map(root_json).collect()));
                for r in roots {
                    let _ = writeln!(text, "{} {}", b.name(), render_root(r));
                }
            }
            Ok((EXIT_HOLDS, Value::Object(out), text))
        }
        Command::Bars { expr } | Command::Cif { expr } => {
            let f = polynomial(&input(expr, g)?)?;
            let a = BarAnalysis::compute(&f, g.seed, &expand).map_err(e)?;
            let polar_only = matches!(cli.command, Command::Cif { .. });
            let bars: Vec<Value> = a
                .bars
                .iter()
                .filter(|b| g.branch.admits(b.branch) && (!polar_only || b.polar))
                .map(|b| b.to_json())
                .collect();
            let text = bars.iter().map(|b| format!("{b}\n")).collect();
            Ok((EXIT_HOLDS, Value::Array(bars), text))
        }
        Command::Critical { expr } => {
            let f = polynomial(&input(expr, g)?)?;
            let a = BarAnalysis::compute(&f, g.seed, &expand).map_err(e)?;
            let cps: Vec<Value> = a
                .critical
                .iter()
                .filter(|c| g.branch.admits(a.bars[c.bar].branch))
                .map(|c| c.to_json(&a.bars))
                .collect();
            let mut text = String::new();
            for c in a.critical.iter().filter(|c| g.branch.admits(a.bars[c.bar].branch)) {
                let b = &a.bars[c.bar];
                let _ = writeln!(
                    text,
                    "{} c={} m={} value=({}, {})",
                    b.branch.name(),
                    fmt_scalar(&c.coordinate),
                    c.mult,
                    fmt_scalar(&c.value),
                    c.loj.as_ref().map(fmt_rat).unwrap_or_else(|| "inf".into())
                );
            }
            Ok((EXIT_HOLDS, Value::Array(cps), text))
        }
        Command::CheckFamily { expr, t_grid, conditions } => {
            let family = family_input(&input(expr, g)?, g.t_order)?;
            let conds = conditions.split(',').map(Condition::parse).collect::<equising_core::Result<Vec<_>>>().map_err(e)?;
            let cfg = check_config(g, t_grid, expand)?;
            let report = check_family(&family, &conds, &cfg).map_err(e)?;
            Ok((verdict_code(&report), report.to_json(), verdict_text(&report)))
        }
        Command::FlowCheck { expr, starts, wall, t_span, rtol, atol, max_drift } => {
            let family = family_input(&input(expr, g)?, g.t_order)?;
            let (a, b) = t_span.split_once(':').ok_or("--t-span takes a:b")?;
            let cfg = FlowConfig {
                t_span: (rational(a)?, rational(b)?),
                r_min: rational(wall)?,
                rtol: *rtol,
                atol: *atol,
                starts: *starts,
                seed: g.seed,
                ..FlowConfig::default()
            };
            let tr = flow_check(&family, &cfg, &expand).map_err(e)?;
            let bad = tr.iter().any(|t| t.status == FlowStatus::Singular || !(t.max_drift <= *max_drift));
            let mut text = String::new();
            for t in &tr {
                let _ = writeln!(text, "start ({}, {}) drift {:.3e} {}", t.start.0, t.start.1, t.max_drift, t.status.name());
            }
            let worst = tr.iter().map(|t| t.max_drift).fold(0.0, f64::max);
            let j = json!({
                "trajectories": tr.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
                "max_drift": worst,
                "drift_bound": max_drift,
                "holds": !bad,
            });
            Ok((if bad { EXIT_FAILS } else { EXIT_HOLDS }, j, text))
        }
        Command::EulerCheck { form, u0, h } => {
            let text_in = input(form, g)?;
            let poly = polynomial(&text_in)?;
            let w = match h {
                Some(h) => WeightedForm::new(poly, rational(h)?),
                None => WeightedForm::infer(poly, Rat::from_integer(1.into())),
            }
            .map_err(e)?;
            let r = euler_lemma_check(&w, &rational(u0)?).map_err(e)?;
            let ok = r.order.as_ref() == Some(&r.d) && r.unit_nonzero;
            let mut j = r.to_json();
            j["h"] = Value::String(fmt_rat(&w.h));
            j["holds"] = Value::Bool(ok);
            let text = format!(
                "order {} d {} unit_nonzero {}\n",
                r.order.as_ref().map(fmt_rat).unwrap_or_else(|| "inf".into()),
                fmt_rat(&r.d),
                r.unit_nonzero
            );
            Ok((if ok { EXIT_HOLDS } else { EXIT_FAILS }, j, text))
        }
        Command::Corpus { t_grid } => {
            let cfg = check_config(g, t_grid, expand)?;
            let r = run_corpus(g.t_order, &cfg).map_err(e)?;
            let code = if r.all_passed() {
                EXIT_HOLDS
            } else if r.rows.iter().filter(|row| !row.passed()).all(|row| row.statuses().contains(&"undecided")) {
                EXIT_UNDECIDED
            } else {
                EXIT_FAILS
            };
            Ok((code, r.to_json(), r.table()))
        }
    }
}

fn input(expr: &Option<String>, g: &GlobalArgs) -> Result<String, String> {
    match (expr, &g.file) {
        (Some(_), Some(_)) => Err("give either an expression or --file, not both".into()),
        (Some(s), None) => Ok(s.clone()),
        (None, Some(path)) => std::fs::read_to_string(path).map(|s| s.trim().to_string()).map_err(|err| format!("{path}: {err}")),
        (None, None) => Err("missing input expression".into()),
    }
}

fn rational(s: &str) -> Result<Rat, String> {
    parse_rat(s).ok_or_else(|| format!("`{s}` is not a rational number"))
}

fn polynomial(s: &str) -> Result<BivarPoly<Rat>, String> {
    equising_core::algebra::parse_bivar(s).map_err(|e| e.to_string())
}

fn family_input(s: &str, k: usize) -> Result<FamilyPoly, String> {
    parse_family(s, k).map_err(|e| e.to_string())
}

fn specialized(s: &str, k: usize, t: &str) -> Result<BivarPoly<Rat>, String> {
    Ok(family_input(s, k)?.specialize(&rational(t)?))
}

/// Parses `e:c,e:c,...` into an arc with rational coefficients.
pub fn parse_arc(s: &str) -> Result<PuiseuxSeries<Rat>, String> {
    let mut terms = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (e, c) = part.split_once(':').ok_or_else(|| format!("arc term `{part}` is not exponent:coefficient"))?;
        let e = rational(e)?;
        if e <= Rat::from_integer(0.into()) {
            return Err(format!("arc exponent `{}` must be positive", fmt_rat(&e)));
        }
        terms.push((e, rational(c)?));
    }
    Ok(PuiseuxSeries::from_terms(terms, None))
}

fn check_config(g: &GlobalArgs, t_grid: &Option<String>, expand: ExpandConfig) -> Result<CheckConfig, String> {
    let mut cfg = CheckConfig { seed: g.seed, expand, ..CheckConfig::default() };
    if let Some(grid) = t_grid {
        let mut ts = grid.split(',').map(rational).collect::<Result<Vec<_>, _>>()?;
        ts.sort();
        ts.dedup();
        cfg.grid = ts;
    }
    Ok(cfg)
}

fn root_json(r: &Root) -> Value {
    json!({ "terms": series_json(&r.series), "mult": r.mult, "exact": r.is_exact() })
}

/// Fails beats undecided beats holds.
pub fn verdict_code(r: &FamilyReport) -> i32 {
    if r.verdicts.iter().any(|v| !v.holds && !v.undecided) {
        EXIT_FAILS
    } else if r.verdicts.iter().any(|v| v.undecided) {
        EXIT_UNDECIDED
    } else {
        EXIT_HOLDS
    }
}

fn verdict_text(r: &FamilyReport) -> String {
    let mut out = format!("family {}\n", r.family);
    for v in &r.verdicts {
        let _ = writeln!(out, "{}: {}", v.condition.name(), v.status());
        for w in &v.witnesses {
            let _ = writeln!(out, "  witness {w}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_resolution() {
        assert_eq!(resolve_precision(None, None), Ok(DEFAULT_PRECISION));
        assert_eq!(resolve_precision(None, Some("256".into())), Ok(256));
        assert_eq!(resolve_precision(Some(512), Some("256".into())), Ok(512));
        assert!(resolve_precision(None, Some("lots".into())).is_err());
        assert!(resolve_precision(Some(8), None).is_err());
    }

    #[test]
    fn arcs_parse() {
        let a = parse_arc("1:-1, 3/2:2").unwrap();
        assert_eq!(a.len(), 2);
        assert!(parse_arc("0:1").is_err());
        assert!(parse_arc("1").is_err());
    }
}
