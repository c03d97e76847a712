//! Command-line front end for `bbs-core`.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use bbs_core::crystal::ParseError;
use bbs_core::energy_dist::{group_solitons, local_energy_table, phi_via_energy_with, render_ascii, rigging_of_group, Rule};
use bbs_core::pbbs::{energy_spectrum, time_evolve};
use bbs_core::scattering::{
    count_states, generic_period, inverse_scattering, scatter, solve_ivp, ActionAngle, Capacities, Method,
};
use bbs_core::theta::{reconstruct, ThetaLattice};
use bbs_core::{affine_r, combinatorial_r, phi, phi_inverse, AffineElement, BoxElement, Path, RiggedConfiguration};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

mod selftest;

#[derive(Parser, Debug)]
#[command(name = "bbs", version, about = "Box-ball systems, rigged configurations and inverse scattering")]
struct Cli {
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Combinatorial R on x (x) y
    RMatrix {
        x: String,
        y: String,
        /// Affine modes d,e
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        modes: Option<Vec<i64>>,
    },
    /// Apply T_l repeatedly and print every row
    Evolve {
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        steps: i64,
        path: String,
    },
    /// Rigged configuration of a path
    Phi {
        path: String,
        /// Use the local energy distribution instead of box adding
        #[arg(long)]
        via_energy: bool,
    },
    /// Path of a rigged configuration given as JSON (argument or stdin)
    PhiInverse {
        config: Option<String>,
        /// Require 0 <= r <= p
        #[arg(long)]
        strict: bool,
    },
    /// Local energy difference table and soliton groups
    EnergyDist {
        path: String,
        #[arg(long, value_enum, default_value_t = RuleArg::TopDown)]
        rule: RuleArg,
        /// Dot diagram instead of digits
        #[arg(long)]
        ascii_art: bool,
    },
    /// Action-angle variables of a path
    Scatter {
        path: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Highest)]
        method: MethodArg,
    },
    /// Path of action-angle JSON (argument or stdin)
    Unscatter { angle: Option<String> },
    /// Generic period of T_l on an iso-level set
    Period {
        #[arg(long)]
        l: u32,
        #[command(flatten)]
        level: LevelArgs,
    },
    /// Number of states in an iso-level set
    Count {
        #[command(flatten)]
        level: LevelArgs,
    },
    /// Solve the initial value problem for a schedule l:steps[,l:steps...]
    Ivp {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        time: Vec<String>,
        path: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Highest)]
        method: MethodArg,
    },
    /// Theta-function tables for a multiplicity-free path
    ThetaTable {
        path: String,
        /// Carrier capacities l_1,l_2,...
        #[arg(long, value_delimiter = ',', default_value = "1")]
        schedule: Vec<u32>,
    },
    /// Run the built-in golden examples
    Selftest,
}

#[derive(Args, Debug)]
struct LevelArgs {
    /// Number of sites
    #[arg(long = "L")]
    length: Option<usize>,
    /// Common capacity
    #[arg(long)]
    s: Option<u32>,
    /// Site capacities s_1,...,s_L
    #[arg(long, value_delimiter = ',')]
    capacities: Option<Vec<u32>>,
    /// Soliton lengths
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<u32>>,
    /// Read L, capacities and lengths off a path instead
    #[arg(long)]
    path: Option<String>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum RuleArg {
    TopDown,
    BottomUp,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum MethodArg {
    Highest,
    Grouping,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Highest => Method::HighestReduction,
            MethodArg::Grouping => Method::SolitonGrouping,
        }
    }
}

enum Failure {
    Usage(String),
    Domain(String),
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn io(e: std::io::Error) -> Failure {
    Failure::Domain(format!("IoError: {e}"))
}

fn parse_path(s: &str) -> Result<Path, Failure> {
    s.parse().map_err(|e: ParseError| usage(format!("bad path {s:?}: {e}")))
}

fn parse_element(s: &str) -> Result<BoxElement, Failure> {
    s.parse().map_err(|e: ParseError| usage(format!("bad element {s:?}: {e}")))
}

fn read_input(arg: Option<String>, stdin: &mut dyn Read) -> Result<String, Failure> {
    match arg {
        Some(s) => Ok(s),
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(io)?;
            Ok(s)
        }
    }
}

fn big_json(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

fn emit(out: &mut dyn Write, s: impl std::fmt::Display) -> Outcome {
    writeln!(out, "{s}").map_err(io)
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    match dispatch(cli, stdin, stdout) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}\n\nFor more information, try '--help'.");
            2
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}

fn dispatch(cli: Cli, stdin: &mut dyn Read, out: &mut dyn Write) -> Outcome {
    let json = cli.json;
    match cli.command {
        Command::RMatrix { x, y, modes } => r_matrix(&x, &y, modes, json, out),
        Command::Evolve { l, steps, path } => evolve(l, steps, &path, json, out),
        Command::Phi { path, via_energy } => {
            let b = parse_path(&path)?;
            let rc = if via_energy {
                phi_via_energy_with(&b, Rule::TopDown).map_err(domain)?
            } else {
                phi(&b)
            };
            emit(out, serde_json::to_string(&rc).unwrap())
        }
        Command::PhiInverse { config, strict } => {
            let text = read_input(config, stdin)?;
            let rc: RiggedConfiguration =
                serde_json::from_str(text.trim()).map_err(|e| usage(format!("bad rigged configuration JSON: {e}")))?;
            let b = phi_inverse(&rc, strict).map_err(domain)?;
            if json {
                emit(out, json!({ "path": b.to_string() }))
            } else {
                emit(out, b)
            }
        }
        Command::EnergyDist { path, rule, ascii_art } => energy_dist(&path, rule, ascii_art, json, out),
        Command::Scatter { path, method } => {
            let b = parse_path(&path)?;
            let aa = scatter(&b, method.into()).map_err(domain)?;
            emit(out, serde_json::to_string(&aa).unwrap())
        }
        Command::Unscatter { angle } => {
            let text = read_input(angle, stdin)?;
            let aa: ActionAngle =
                serde_json::from_str(text.trim()).map_err(|e| usage(format!("bad action-angle JSON: {e}")))?;
            let b = inverse_scattering(&aa).map_err(domain)?;
            if json {
                emit(out, json!({ "path": b.to_string() }))
            } else {
                emit(out, b)
            }
        }
        Command::Period { l, level } => {
            let (m, len, caps) = level_of(&level)?;
            let n = generic_period(&m, len, &caps, l).map_err(domain)?;
            if json {
                emit(out, json!({ "l": l, "period": big_json(&n) }))
            } else {
                emit(out, n)
            }
        }
        Command::Count { level } => {
            let (m, len, caps) = level_of(&level)?;
            let n = count_states(&m, len, &caps).map_err(domain)?;
            if json {
                emit(out, json!({ "count": big_json(&n) }))
            } else {
                emit(out, n)
            }
        }
        Command::Ivp { time, path, method } => {
            let b = parse_path(&path)?;
            let schedule = time
                .iter()
                .map(|t| parse_time(t))
                .collect::<Result<Vec<_>, _>>()?;
            let got = solve_ivp(&b, &schedule, method.into()).map_err(domain)?;
            if json {
                emit(out, json!({ "path": got.to_string() }))
            } else {
                emit(out, got)
            }
        }
        Command::ThetaTable { path, schedule } => theta_table(&path, schedule, json, out),
        Command::Selftest => {
            let results = selftest::run_all();
            let failed = results.iter().filter(|r| !r.1).count();
            if json {
                let v: Vec<Value> = results.iter().map(|(n, ok)| json!({ "name": n, "pass": ok })).collect();
                emit(out, json!({ "results": v, "failed": failed }))?;
            } else {
                for (name, ok) in &results {
                    emit(out, format!("{name}: {}", if *ok { "PASS" } else { "FAIL" }))?;
                }
            }
            if failed == 0 {
                Ok(())
            } else {
                Err(Failure::Domain(format!("SelftestFailed: {failed} example(s) failed")))
            }
        }
    }
}

fn parse_time(t: &str) -> Result<(u32, i64), Failure> {
    let bad = || usage(format!("bad time step {t:?}; expected l:steps"));
    let (l, s) = t.split_once(':').ok_or_else(bad)?;
    let l: u32 = l.trim().parse().map_err(|_| bad())?;
    let s: i64 = s.trim().parse().map_err(|_| bad())?;
    if l == 0 {
        return Err(bad());
    }
    Ok((l, s))
}

fn level_of(a: &LevelArgs) -> Result<(BTreeMap<u32, u32>, usize, Capacities), Failure> {
    if let Some(p) = &a.path {
        if a.length.is_some() || a.s.is_some() || a.capacities.is_some() || a.mu.is_some() {
            return Err(usage("--path cannot be combined with --L, --s, --capacities or --mu"));
        }
        let b = parse_path(p)?;
        let b = if b.weight() < 0 { b.omega() } else { b };
        let sp = energy_spectrum(&b).map_err(domain)?;
        return Ok((sp.multiplicities(), b.len(), Capacities::of(&b)));
    }
    let mut m = BTreeMap::new();
    for &j in a.mu.as_deref().unwrap_or(&[]) {
        if j == 0 {
            return Err(usage("soliton lengths must be positive"));
        }
        *m.entry(j).or_insert(0) += 1;
    }
    let (len, caps) = match (&a.capacities, a.length, a.s) {
        (Some(c), None, None) => (c.len(), Capacities::Sites(c.clone())),
        (None, Some(len), Some(s)) => (len, Capacities::Uniform(s)),
        _ => return Err(usage("give either --L and --s, or --capacities, or --path")),
    };
    if len == 0 || caps.sites(len).contains(&0) {
        return Err(usage("capacities and L must be positive"));
    }
    Ok((m, len, caps))
}

fn r_matrix(x: &str, y: &str, modes: Option<Vec<i64>>, json: bool, out: &mut dyn Write) -> Outcome {
    let (x, y) = (parse_element(x)?, parse_element(y)?);
    let (a, b, h) = combinatorial_r(x, y);
    match modes {
        Some(m) if m.len() != 2 => Err(usage("--modes takes exactly two integers d,e")),
        Some(m) => {
            let (p, q) = affine_r(AffineElement::new(x, m[0]), AffineElement::new(y, m[1]));
            if json {
                emit(out, json!({ "left": p.to_string(), "right": q.to_string(), "energy": h }))
            } else {
                emit(out, format!("{p}.{q} H={h}"))
            }
        }
        None if json => emit(out, json!({ "left": a.to_string(), "right": b.to_string(), "energy": h })),
        None => emit(out, format!("{a}.{b} H={h}")),
    }
}

fn evolve(l: u32, steps: i64, path: &str, json: bool, out: &mut dyn Write) -> Outcome {
    let b = parse_path(path)?;
    if l == 0 {
        return Err(usage("--l must be at least 1"));
    }
    let mut rows = vec![b.clone()];
    let mut energies = Vec::new();
    let mut cur = b;
    for _ in 0..steps.unsigned_abs() {
        if steps > 0 {
            let (next, e) = time_evolve(&cur, l).map_err(domain)?;
            energies.push(e);
            cur = next;
        } else {
            cur = bbs_core::pbbs::time_evolve_inverse(&cur, l).map_err(domain)?;
        }
        rows.push(cur.clone());
    }
    if json {
        let rows: Vec<String> = rows.iter().map(|r| r.to_string()).collect();
        emit(out, json!({ "l": l, "rows": rows, "energies": energies }))
    } else {
        for r in rows {
            emit(out, r.join(" . "))?;
        }
        Ok(())
    }
}

fn energy_dist(path: &str, rule: RuleArg, ascii_art: bool, json: bool, out: &mut dyn Write) -> Outcome {
    let b = parse_path(path)?;
    let t = local_energy_table(&b, None);
    let rule = match rule {
        RuleArg::TopDown => Rule::TopDown,
        RuleArg::BottomUp => Rule::BottomUp,
    };
    let groups = group_solitons(&t, rule).map_err(domain)?;
    let riggings: Vec<(u32, usize, i64)> = groups
        .iter()
        .map(|&(mu, j)| (mu, j, rigging_of_group(&b, &t, mu, j)))
        .collect();
    if json {
        let g: Vec<Value> = riggings
            .iter()
            .map(|&(mu, j, r)| json!({ "length": mu, "column": j, "rigging": r }))
            .collect();
        return emit(out, json!({ "table": t.diff_table(), "groups": g }));
    }
    if ascii_art {
        write!(out, "{}", render_ascii(&t)).map_err(io)?;
    } else {
        for (l, row) in t.diff_table().iter().enumerate() {
            let digits: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            emit(out, format!("E({},j)-E({},j): {}", l + 1, l, digits.join(" ")))?;
        }
    }
    for (mu, j, r) in riggings {
        emit(out, format!("group length={mu} column={j} rigging={r}"))?;
    }
    Ok(())
}

fn render_table(rows: &[Vec<String>]) -> String {
    rows.iter().map(|r| r.join(" ")).collect::<Vec<_>>().join("\n")
}

fn theta_table(path: &str, schedule: Vec<u32>, json: bool, out: &mut dyn Write) -> Outcome {
    let b = parse_path(path)?;
    if schedule.contains(&0) {
        return Err(usage("schedule entries must be positive"));
    }
    let aa = scatter(&b, Method::HighestReduction).map_err(domain)?;
    let lat = ThetaLattice::from_action_angle(&aa, schedule).map_err(domain)?;
    let rec = reconstruct(&lat).map_err(domain)?;
    let strs = |t: &Vec<Vec<num_rational::BigRational>>| -> Vec<Vec<String>> {
        t.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
    };
    let nums = |t: Vec<Vec<u32>>| -> Vec<Vec<String>> {
        t.into_iter().map(|r| r.into_iter().map(|x| x.to_string()).collect()).collect()
    };
    if json {
        let rows: Vec<String> = rec.rows.iter().map(|r| r.to_string()).collect();
        let carriers: Vec<Vec<String>> = rec
            .carriers
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        return emit(
            out,
            json!({
                "angles": aa.angles,
                "theta": strs(&rec.theta),
                "theta_shifted": strs(&rec.theta_shift),
                "site_edges": rec.site_edges(),
                "carrier_edges": rec.carrier_edges(),
                "rows": rows,
                "carriers": carriers,
                "conjectural": rec.conjectural,
            }),
        );
    }
    emit(out, "theta(z):")?;
    emit(out, render_table(&strs(&rec.theta)))?;
    emit(out, "theta(z + h_inf):")?;
    emit(out, render_table(&strs(&rec.theta_shift)))?;
    emit(out, "site edges:")?;
    emit(out, render_table(&nums(rec.site_edges())))?;
    emit(out, "carrier edges:")?;
    emit(out, render_table(&nums(rec.carrier_edges())))?;
    emit(out, "rows:")?;
    for r in &rec.rows {
        emit(out, r)?;
    }
    if rec.conjectural {
        emit(out, "note: mixed capacities; this reconstruction is conjectural")?;
    }
    Ok(())
}
