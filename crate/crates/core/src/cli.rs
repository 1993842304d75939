//! Command-line front end and the JSON report.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::boundary::{hole_tree, isolated_value_pair, property_verdicts, pruned_branch_census, CENSUS_BUDGET};
use crate::checks::{check_ids, run_check, CheckOutcome};
use crate::complexity::{complexity_profile, profile_csv, ProfileMode};
use crate::elements::{alternating_pair, pair_report, ElementSpec};
use crate::error::{Error, Result};
use crate::factors::{boundary_pullback_check, build_isolating_code, emit_code, parse_code, FactorModel, IsolationSetup, SlidingBlockCode, DEFAULT_SATURATION};
use crate::gallery::{gallery, parse_params, Declarations, NAMES};
use crate::periodicity::{check_oxtoby, class_census, min_hole_gap, periodic_density, verify_period_structure};
use crate::words::{build_level, emit_schedule_text, parse_schedule_text, FillingSchedule, Letter};

pub const SCHEMA: &str = "toeplitz-lab/1";

/// Largest period printed as a pattern.
const MAX_SHOWN_PERIOD: usize = 256;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "toeplitz-lab", version, about = "Toeplitz subshifts by hole filling")]
pub struct Cli {
    /// Number of levels to analyze.
    #[arg(long, global = true, default_value_t = 3)]
    pub depth: usize,
    /// Position window `lo:hi`.
    #[arg(long, global = true, value_parser = parse_window)]
    pub window: Option<(i64, i64)>,
    /// Level by which holes are resolved; defaults to depth + 2 where available.
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Gallery parameter `key=value`.
    #[arg(long = "param", global = true)]
    pub params: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Level patterns of a schedule.
    Build {
        schedule: String,
        /// Print the schedule in the text format instead.
        #[arg(long)]
        export: bool,
    },
    /// Letter at one position.
    Eval { schedule: String, position: String },
    /// Densities, period structure and Oxtoby verdicts.
    Analyze { schedule: String },
    /// Hole tree and finiteness verdicts.
    Boundary {
        schedule: String,
        #[arg(long, default_value_t = 64)]
        max_nodes: usize,
    },
    /// Applies or constructs a sliding block code.
    Factor {
        schedule: String,
        /// Code table file.
        #[arg(long, conflicts_with_all = ["run_code", "isolate"])]
        code: Option<PathBuf>,
        /// `a^(2J+1) -> a`, everything else to b.
        #[arg(long, conflicts_with = "isolate")]
        run_code: Option<usize>,
        /// Builds the isolating code from this level of the least branch.
        #[arg(long)]
        isolate: Option<usize>,
        /// Levels above l2 searched for code words.
        #[arg(long, default_value_t = 4)]
        collect: usize,
        /// Writes the code to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Compares two elements of the subshift.
    Pair {
        schedule: String,
        /// The pair of alternating-digit shifts of this level.
        #[arg(long, conflicts_with = "shift")]
        alternating: Option<usize>,
        /// Two shifts `k` of x.
        #[arg(long, num_args = 2, allow_negative_numbers = true)]
        shift: Vec<String>,
        #[arg(long)]
        radius: Vec<i64>,
    },
    /// Subword complexity profile.
    Complexity {
        schedule: String,
        /// Comma separated word lengths.
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Mode::Window)]
        mode: Mode,
        /// Level of the decomposition.
        #[arg(long, default_value_t = 1)]
        level: usize,
    },
    /// Lists the gallery or shows one entry.
    Gallery { name: Option<String> },
    /// Runs named checks; `all` runs every one.
    Verify {
        #[arg(required = true)]
        ids: Vec<String>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Window,
    Decomposition,
}

fn parse_window(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo = a.trim().parse::<i64>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<i64>().map_err(|e| e.to_string())?;
    if lo > hi {
        return Err("lo must not exceed hi".into());
    }
    Ok((lo, hi))
}

/// Machine-readable result of one invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub target: Option<String>,
    pub depth: usize,
    pub window: Option<(i64, i64)>,
    pub resolution: Option<usize>,
    pub checks: Vec<CheckOutcome>,
    pub data: Value,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// Exit code and standard output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok((report, text)) => {
            let stdout = match cli.format {
                Format::Json => report.to_json() + "\n",
                Format::Text => text,
            };
            Outcome { code: if report.passed() { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

struct Loaded {
    schedule: FillingSchedule,
    declarations: Declarations,
}

fn load(name: &str, params: &[String]) -> Result<Loaded> {
    if NAMES.contains(&name) {
        let g = gallery(name, &parse_params(params)?)?;
        return Ok(Loaded { schedule: g.schedule, declarations: g.declarations });
    }
    if !params.is_empty() {
        return Err(Error::Invalid("--param applies to gallery names only".into()));
    }
    let text = std::fs::read_to_string(name).map_err(|e| Error::Invalid(format!("{name}: {e}")))?;
    Ok(Loaded { schedule: parse_schedule_text(&text)?, declarations: Declarations::default() })
}

fn resolution(cli: &Cli, s: &FillingSchedule) -> usize {
    cli.resolution.unwrap_or_else(|| s.available_levels(cli.depth + 2).max(cli.depth))
}

fn execute(cli: &Cli) -> Result<(Report, String)> {
    let mut report = Report {
        schema: SCHEMA.to_string(),
        command: String::new(),
        target: None,
        depth: cli.depth,
        window: cli.window,
        resolution: None,
        checks: Vec::new(),
        data: Value::Null,
    };
    let mut text = String::new();
    match &cli.command {
        Command::Build { schedule, export } => {
            report.command = "build".into();
            let x = load(schedule, &cli.params)?.schedule;
            report.target = Some(x.label().to_string());
            if *export {
                text = emit_schedule_text(&x, cli.depth);
                report.data = json!({ "text": text });
            } else {
                let mut levels = Vec::new();
                for l in 1..=cli.depth {
                    let (p, h) = x.period_and_holes(l)?;
                    let pattern = match p.to_usize() {
                        Some(n) if n <= MAX_SHOWN_PERIOD => Some(x.alphabet().render(build_level(&x, l)?.pattern.symbols())),
                        _ => None,
                    };
                    let _ = writeln!(text, "level {l}: period {p}, holes {h}{}", pattern.as_ref().map(|w| format!(", ({w})")).unwrap_or_default());
                    levels.push(json!({ "level": l, "period": p.to_string(), "holes": h.to_string(), "pattern": pattern }));
                }
                report.data = json!({ "levels": levels });
            }
        }
        Command::Eval { schedule, position } => {
            report.command = "eval".into();
            let x = load(schedule, &cli.params)?.schedule;
            report.target = Some(x.label().to_string());
            let j: BigInt = position.parse().map_err(|_| Error::Invalid(format!("bad position {position:?}")))?;
            let v = x.evaluate(&j, cli.depth);
            let shown = v.map(|a| x.alphabet().char_of(a).to_string()).unwrap_or_else(|| "?".into());
            let _ = writeln!(text, "{shown}");
            report.data = json!({ "position": j.to_string(), "letter": v.map(|_| shown.clone()) });
        }
        Command::Analyze { schedule } => {
            report.command = "analyze".into();
            let g = load(schedule, &cli.params)?;
            let x = &g.schedule;
            report.target = Some(x.label().to_string());
            let res = resolution(cli, x);
            report.resolution = Some(res);
            let mut levels = Vec::new();
            for l in 1..=cli.depth {
                let (p, h) = x.period_and_holes(l)?;
                let density = periodic_density(x, l)?;
                let gap = min_hole_gap(x, l)?;
                let _ = writeln!(text, "level {l}: period {p}, holes {h}, density {density}, min gap {gap}");
                levels.push(json!({ "level": l, "period": p.to_string(), "holes": h.to_string(), "density": density.to_string(), "min_gap": gap.to_string() }));
            }
            let scan = x.period(res)? / x.period(cli.depth)?;
            let (structure, oxtoby) = if scan <= num_bigint::BigUint::from(CENSUS_BUDGET) {
                let cert = verify_period_structure(x, &x.scale(cli.depth)?, cli.depth, res)?;
                (json!(cert.all_pass()), format!("{:?}", check_oxtoby(x, cli.depth, res)?))
            } else {
                (Value::Null, "skipped: census beyond budget".to_string())
            };
            let v = property_verdicts(x, &g.declarations, cli.depth, res)?;
            let _ = writeln!(text, "period structure: {structure}\noxtoby: {oxtoby}\nfpc: {:?}\nhs: {:?}\nfb: {:?}", v.fpc, v.hs, v.fb);
            report.data = json!({
                "levels": levels,
                "period_structure": structure,
                "oxtoby": oxtoby,
                "verdicts": v,
            });
        }
        Command::Boundary { schedule, max_nodes } => {
            report.command = "boundary".into();
            let g = load(schedule, &cli.params)?;
            let x = &g.schedule;
            report.target = Some(x.label().to_string());
            let res = resolution(cli, x);
            report.resolution = Some(res);
            let tree = hole_tree(x, cli.depth, res)?;
            let branch = tree.least_branch();
            let isolation = match &branch {
                Some(b) if x.alphabet().size() >= 2 => format!("{:?}", isolated_value_pair(&tree, x.alphabet(), b, Letter(0), Letter(1))?),
                _ => "no branch".into(),
            };
            let v = property_verdicts(x, &g.declarations, cli.depth, res)?;
            text.push_str(&tree.render(x.alphabet(), *max_nodes));
            let _ = writeln!(
                text,
                "counts: {:?}\npruned: {:?}\nleast branch: {:?}\nisolation: {isolation}\nfpc: {:?}\nhs: {:?}\nfb: {:?}",
                tree.counts(),
                pruned_branch_census(&tree),
                branch,
                v.fpc,
                v.hs,
                v.fb
            );
            report.data = json!({
                "counts": tree.counts(),
                "pruned": pruned_branch_census(&tree),
                "least_branch": branch.map(|b| b.iter().map(ToString::to_string).collect::<Vec<_>>()),
                "isolation": isolation,
                "verdicts": v,
            });
        }
        Command::Factor { schedule, code, run_code, isolate, collect, emit } => {
            report.command = "factor".into();
            let x = load(schedule, &cli.params)?.schedule;
            report.target = Some(x.label().to_string());
            let res = resolution(cli, &x);
            report.resolution = Some(res);
            let mut extra = json!({});
            let code = if let Some(path) = code {
                parse_code(&std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?)?
            } else if let Some(j) = run_code {
                SlidingBlockCode::run_code(x.alphabet().clone(), *j, Letter(0), Letter(1))
            } else if let Some(l1) = isolate {
                let tree = hole_tree(&x, cli.depth, res)?;
                let branch = tree.least_branch().ok_or(Error::NoHoles)?;
                let setup = IsolationSetup { l1: *l1, max_l2: cli.depth, collection_levels: *collect, resolution_cap: res + collect + 2 };
                let iso = build_isolating_code(&x, &tree, &branch, Letter(0), Letter(1), &setup)?;
                let _ = writeln!(text, "isolating code: l1 {}, l2 {}, {} members, saturated {}", iso.l1, iso.l2, iso.members, iso.saturated);
                extra = json!({ "l1": iso.l1, "l2": iso.l2, "members": iso.members, "saturated": iso.saturated, "skipped": iso.skipped, "search": iso.search });
                iso.code
            } else {
                return Err(Error::Invalid("factor needs --code, --run-code or --isolate".into()));
            };
            if let Some(path) = emit {
                std::fs::write(path, emit_code(&code)).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
            }
            let strict = FactorModel::new(&code, &x);
            let tree = hole_tree(&strict, cli.depth, res)?;
            let sat_res = res.max(cli.depth + DEFAULT_SATURATION + 1);
            let saturated = FactorModel::new(&code, &x).saturating(DEFAULT_SATURATION);
            let census = class_census(&saturated, cli.depth, sat_res)?;
            let aper: Vec<Vec<String>> = (1..=cli.depth).map(|l| census.aperiodic_residues(l).iter().map(ToString::to_string).collect()).collect();
            let pullback = boundary_pullback_check(&code, &x, cli.depth, sat_res)?;
            let _ = writeln!(
                text,
                "radius {}\nhole tree counts: {:?}\npruned: {:?}\naperiodic residues (saturated at resolution {sat_res}): {aper:?}\npullback holds: {}",
                code.radius,
                tree.counts(),
                pruned_branch_census(&tree),
                pullback.holds()
            );
            report.data = json!({
                "radius": code.radius,
                "counts": tree.counts(),
                "pruned": pruned_branch_census(&tree),
                "aperiodic": aper,
                "saturated_resolution": sat_res,
                "pullback_holds": pullback.holds(),
                "construction": extra,
            });
        }
        Command::Pair { schedule, alternating, shift, radius } => {
            report.command = "pair".into();
            let x = load(schedule, &cli.params)?.schedule;
            report.target = Some(x.label().to_string());
            let res = resolution(cli, &x);
            report.resolution = Some(res);
            let (e1, e2) = match (alternating, shift.as_slice()) {
                (Some(l), _) => alternating_pair(*l),
                (None, [a, b]) => {
                    let k = |s: &String| s.parse::<BigInt>().map(ElementSpec::Shift).map_err(|_| Error::Invalid(format!("bad shift {s:?}")));
                    (k(a)?, k(b)?)
                }
                _ => return Err(Error::Invalid("pair needs --alternating or two --shift values".into())),
            };
            let radii = if radius.is_empty() { vec![x.period(cli.depth)?.to_i64().ok_or_else(|| Error::TooLarge("radius".into()))?] } else { radius.clone() };
            let r = pair_report(&x, &e1, &e2, cli.depth, &radii, res)?;
            let _ = writeln!(text, "{} vs {}\nΦ agreement depth {} of {}", e1.describe(), e2.describe(), r.phi_agreement_depth, r.phi_depth);
            for c in &r.censuses {
                let _ = writeln!(text, "radius {}: {} differences, {} unresolved", c.radius, c.differences, c.unresolved);
            }
            report.data = json!({ "elements": [e1.describe(), e2.describe()], "report": r });
        }
        Command::Complexity { schedule, lengths, mode, level } => {
            report.command = "complexity".into();
            let x = load(schedule, &cli.params)?.schedule;
            report.target = Some(x.label().to_string());
            let mode = match mode {
                Mode::Decomposition => ProfileMode::Decomposition { level: *level },
                Mode::Window => {
                    let (lo, hi) = cli.window.unwrap_or((0, 4096));
                    let max_level = resolution(cli, &x);
                    report.resolution = Some(max_level);
                    ProfileMode::Window { lo, hi, max_level }
                }
            };
            let rows = complexity_profile(&x, lengths, &mode)?;
            text = profile_csv(&rows);
            report.data = json!({ "mode": mode, "rows": rows });
        }
        Command::Gallery { name } => {
            report.command = "gallery".into();
            match name {
                None => {
                    text = NAMES.iter().map(|n| format!("{n}\n")).collect();
                    report.data = json!({ "names": NAMES });
                }
                Some(n) => {
                    let g = gallery(n, &parse_params(&cli.params)?)?;
                    report.target = Some(g.schedule.label().to_string());
                    let levels = g.schedule.available_levels(cli.depth);
                    let body = emit_schedule_text(&g.schedule, levels);
                    let _ = writeln!(text, "{body}# declarations {:?}", g.declarations);
                    report.data = json!({ "declarations": g.declarations, "text": body });
                }
            }
        }
        Command::Verify { ids } => {
            report.command = "verify".into();
            let mut wanted: Vec<String> = if ids.iter().any(|i| i == "all") { check_ids().iter().map(|s| s.to_string()).collect() } else { ids.clone() };
            wanted.sort();
            wanted.dedup();
            for id in &wanted {
                let o = run_check(id).ok_or_else(|| Error::Invalid(format!("unknown check {id:?}; known: {}", check_ids().join(", "))))?;
                let _ = writeln!(text, "{} {} ({}): {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.provenance, o.detail);
                report.checks.push(o);
            }
        }
    }
    Ok((report, text))
}
