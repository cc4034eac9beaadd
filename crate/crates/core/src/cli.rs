//! Command-line front end. Reports are key-sorted JSON on stdout.
//!
//! Exit codes: 0 when the property holds or the command succeeded, 1 when
//! the property fails, 2 on usage, parse or input errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::chain_graph::build_chain_graph;
use crate::dyadic::Exact;
use crate::error::{Error, Result};
use crate::metric::PointSet;
use crate::render::{render_dot, render_svg};
use crate::shadow::{
    check_cofinal_variant, check_limit_variant, check_property, check_shadowing, CofinalKind, Direction,
    LimitKind, PropertyKind, VariantParams, Verdict,
};
use crate::systems::{build_system, load_system, parse_sets_file, save_system, write_sets_file, Builder, FiniteSystem};
use crate::trajectories::{alpha_family, forward_orbit, gamma_limit};

#[derive(Debug, Parser)]
#[command(name = "chainlab", version, about = "Limit sets, chain recurrence and shadowing on finite systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SystemName {
    Square,
    CircleStack,
    Torus,
    PeriodicCofinal,
    SquareSequence,
    IntervalSquare,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Forward,
    Backward,
    TwoSided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Pe,
    Pa,
    Tols,
    Dtols,
    Gtols,
    Cofinal,
    TsCofinal,
    GCofinal,
    Limit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Dot,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an example system and write it in the text format.
    Gen {
        #[arg(long, value_enum)]
        system: SystemName,
        /// Truncation level: N for the square systems, the ring count for the
        /// circle stack, k for the interval map. Ignored by the torus.
        #[arg(long, default_value_t = 4)]
        level: u32,
        #[arg(long)]
        grid_q: Option<u64>,
        #[arg(long)]
        rot_p: Option<u64>,
        /// Side depth of the square sequence (defaults to the level).
        #[arg(long)]
        depth: Option<u32>,
        /// Spiral rings per gap in the square sequence (defaults to the level).
        #[arg(long)]
        rings: Option<u32>,
        #[arg(long)]
        out: PathBuf,
        /// Also write the builder's named sets.
        #[arg(long)]
        sets_out: Option<PathBuf>,
    },
    /// List δ-chain components, or every ICT set with --exhaustive.
    Ict {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        delta: Exact,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
    },
    /// Forward orbit, ω-limit, α-limit family and optionally γ-limit of a point.
    Limits {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        point: usize,
        #[arg(long)]
        gamma: bool,
    },
    /// Decide finite-horizon shadowing.
    Shadow {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        direction: DirectionArg,
        #[arg(long)]
        eps: Exact,
        #[arg(long)]
        delta: Exact,
        #[arg(long)]
        horizon: usize,
    },
    /// Decide a limit-set property over the candidate family.
    Props {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        check: Check,
        #[arg(long)]
        delta: Exact,
        /// Defaults to delta.
        #[arg(long)]
        eps: Option<Exact>,
        #[arg(long, default_value = "0/2^0")]
        tau: Exact,
        /// Named sets added to the candidate family and used to name witnesses.
        #[arg(long)]
        sets: Option<PathBuf>,
    },
    /// Draw the system, with chain edges when --delta is given.
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        delta: Option<Exact>,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parses `args` (including the program name), runs the command, and
/// returns the exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Param(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Param(format!("cannot write {}: {e}", path.display())))
}

fn load(path: &PathBuf) -> Result<FiniteSystem> {
    load_system(&read(path)?)
}

fn emit(out: &mut dyn Write, value: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("values serialize");
    writeln!(out, "{text}").map_err(|e| Error::Param(format!("cannot write report: {e}")))
}

fn builder(
    system: SystemName,
    level: u32,
    grid_q: Option<u64>,
    rot_p: Option<u64>,
    depth: Option<u32>,
    rings: Option<u32>,
) -> Builder {
    match system {
        SystemName::Square => Builder::Square { n: level },
        SystemName::CircleStack => Builder::CircleStack {
            n_max: level,
            q: grid_q.unwrap_or(8),
            p: rot_p.unwrap_or(3),
        },
        SystemName::Torus => Builder::Torus { q: grid_q.unwrap_or(89), p: rot_p.unwrap_or(55) },
        SystemName::PeriodicCofinal => Builder::PeriodicCofinal { n: level },
        SystemName::SquareSequence => Builder::SquareSequence {
            n: level,
            m: depth.unwrap_or(level),
            k: rings.unwrap_or(level),
        },
        SystemName::IntervalSquare => Builder::IntervalSquare { k: level },
    }
}

/// Attaches the names of matching named sets to a witness.
fn verdict_value(verdict: &Verdict, names: &BTreeMap<String, PointSet>) -> Value {
    let mut value = serde_json::to_value(verdict).expect("verdicts serialize");
    if let Some(w) = verdict.witness.as_ref().and_then(|w| w.sets()) {
        let label = |set: &PointSet| -> Vec<String> {
            names.iter().filter(|(_, s)| *s == set).map(|(n, _)| n.clone()).collect()
        };
        let mut found = label(w.0);
        if w.1 != w.0 {
            found.extend(label(w.1));
        }
        value["witness"]["names"] = json!(found);
    }
    value
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Gen { system, level, grid_q, rot_p, depth, rings, out: path, sets_out } => {
            let built = build_system(builder(system, level, grid_q, rot_p, depth, rings))?;
            write_file(&path, &save_system(&built.system))?;
            if let Some(sets_path) = sets_out {
                write_file(&sets_path, &write_sets_file(&built.landmarks))?;
            }
            emit(
                out,
                &json!({
                    "system": built.system.space().header(),
                    "points": built.system.len(),
                    "out": path.display().to_string(),
                }),
            )?;
            Ok(0)
        }
        Command::Ict { input, delta, exhaustive, max_size } => {
            let sys = load(&input)?;
            let g = build_chain_graph(&sys, delta)?;
            let components: Vec<Value> = g
                .chain_components()
                .iter()
                .map(|c| json!({ "size": c.len(), "ids": c }))
                .collect();
            let mut report = json!({
                "delta": delta.to_string(),
                "edges": g.edge_count(),
                "components": components,
            });
            if exhaustive {
                report["ict_sets"] = json!(g.enumerate_ict(max_size)?);
            }
            emit(out, &report)?;
            Ok(0)
        }
        Command::Limits { input, point, gamma } => {
            let sys = load(&input)?;
            let orbit = forward_orbit(&sys, point)?;
            let mut report = json!({
                "point": point,
                "label": sys.point(point)?.label(),
                "tail": orbit.tail,
                "omega": PointSet::new(orbit.cycle.clone()),
                "alpha_family": alpha_family(&sys, point)?,
            });
            if gamma {
                report["gamma"] = json!(gamma_limit(&sys, point)?);
            }
            emit(out, &report)?;
            Ok(0)
        }
        Command::Shadow { input, direction, eps, delta, horizon } => {
            let sys = load(&input)?;
            let direction = match direction {
                DirectionArg::Forward => Direction::Forward,
                DirectionArg::Backward => Direction::Backward,
                DirectionArg::TwoSided => Direction::TwoSided,
            };
            let verdict = check_shadowing(&sys, direction, eps, delta, horizon)?;
            emit(out, &verdict_value(&verdict, &BTreeMap::new()))?;
            Ok(if verdict.holds { 0 } else { 1 })
        }
        Command::Props { input, check, delta, eps, tau, sets } => {
            let sys = load(&input)?;
            let names = match sets {
                Some(path) => parse_sets_file(&read(&path)?)?,
                None => BTreeMap::new(),
            };
            let params = VariantParams::new(eps.unwrap_or(delta), delta)
                .with_tau(tau)
                .with_extra_sets(names.values().cloned().collect());
            let verdict = match check {
                Check::Pe => check_property(&sys, PropertyKind::Pe, &params)?,
                Check::Pa => check_property(&sys, PropertyKind::Pa, &params)?,
                Check::Tols => check_limit_variant(&sys, LimitKind::Tols, &params)?,
                Check::Dtols => check_limit_variant(&sys, LimitKind::DeltaRestrictedTols, &params)?,
                Check::Gtols => check_limit_variant(&sys, LimitKind::GammaRestrictedTols, &params)?,
                Check::Limit => check_limit_variant(&sys, LimitKind::LimitShadowing, &params)?,
                Check::Cofinal => check_cofinal_variant(&sys, CofinalKind::CofinalOrbital, &params)?,
                Check::TsCofinal => check_cofinal_variant(&sys, CofinalKind::TwoSidedCofinal, &params)?,
                Check::GCofinal => check_cofinal_variant(&sys, CofinalKind::GammaRestrictedTwoSidedCofinal, &params)?,
            };
            emit(out, &verdict_value(&verdict, &names))?;
            Ok(if verdict.holds { 0 } else { 1 })
        }
        Command::Render { input, delta, format, out: path } => {
            let sys = load(&input)?;
            let g = delta.map(|d| build_chain_graph(&sys, d)).transpose()?;
            let doc = match format {
                Format::Dot => render_dot(&sys, g.as_ref()),
                Format::Svg => render_svg(&sys, g.as_ref())?,
            };
            write_file(&path, &doc)?;
            emit(out, &json!({ "out": path.display().to_string(), "bytes": doc.len() }))?;
            Ok(0)
        }
    }
}
