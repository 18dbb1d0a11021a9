//! The `ca-signals` command line.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad arguments or
//! configuration, 3 the site budget ran out (partial output is kept and ends
//! with a truncation marker).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use ca_signals_core::analysis::{gap_probe, ultimate_period, PeriodOutcome};
use ca_signals_core::engine::{record_region, SiteLookup, DEFAULT_BUDGET};
use ca_signals_core::signals::{detect_streaming, follow_streaming, follower_for_xy};
use ca_signals_core::{Coord, ImpulseCA, MoveConvention, MovePartition, NeighborhoodKind, RunOptions, Time};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::formats::{dump_diagram, signal_from_json, signal_to_json, DiagramFile, FollowerFile};
use crate::parse::{parse_coord, parse_partition, CaSpec};
use crate::render::{color_map, render_ppm, render_slice, render_wplane};
use crate::rules::{parse_rules, serialize_rules};
use crate::verify::{search_two_state, to_json, verify_basic, verify_bounds, verify_log2, verify_xy};

pub const BUDGET_ENV: &str = "CA_SIGNALS_MEM_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "ca-signals", version, about = "Impulse cellular automata and the signals they draw")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run an automaton and dump its diagram as JSON.
    Simulate {
        #[command(flatten)]
        ca: CaArg,
        #[arg(long)]
        steps: Time,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a diagram dump.
    Render {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long, value_enum)]
        mode: RenderMode,
        /// Slice time for `slice`.
        #[arg(long)]
        t: Option<Time>,
        /// Counter index for `wplane`.
        #[arg(long)]
        k: Option<Time>,
        /// File for text modes, directory for `ppm`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the signal detected by a move partition.
    Detect {
        #[command(flatten)]
        ca: CaArg,
        /// `state:(offset);…`; defaults to the forced partition for log2.
        #[arg(long)]
        partition: Option<String>,
        #[arg(long)]
        steps: Time,
        #[command(flatten)]
        walk: WalkArgs,
    },
    /// Print the signal walked by a finite follower.
    Follow {
        #[command(flatten)]
        ca: CaArg,
        /// Follower JSON; defaults to the base-xy follower for xy and merged automata.
        #[arg(long)]
        follower: Option<PathBuf>,
        #[arg(long)]
        steps: Time,
        #[command(flatten)]
        walk: WalkArgs,
    },
    /// Diagonal words, their periods, and signal gaps.
    #[command(subcommand)]
    Analyze(Analyze),
    /// Check the constructions and bounds; exit 1 on a failed check.
    #[command(subcommand)]
    Verify(Verify),
    /// Exhaustive rule searches.
    #[command(subcommand)]
    Search(Search),
    /// Rule files.
    #[command(subcommand)]
    Rules(Rules),
}

#[derive(Args, Debug)]
pub struct CaArg {
    /// log2, xy:X,Y, merged:X,Y, quiescent or file:PATH.
    #[arg(long = "ca", default_value = "log2")]
    pub spec: String,
}

#[derive(Args, Debug)]
pub struct WalkArgs {
    #[arg(long, value_enum, default_value_t = Convention::Negated)]
    pub convention: Convention,
    /// Only evaluate cells at most this far behind the front.
    #[arg(long)]
    pub band: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Convention {
    Aswritten,
    Negated,
}

impl From<Convention> for MoveConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Aswritten => MoveConvention::AsWritten,
            Convention::Negated => MoveConvention::Negated,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RenderMode {
    Slice,
    Ppm,
    Wplane,
}

#[derive(Subcommand, Debug)]
pub enum Analyze {
    /// The diagonal word `Dg_i`.
    Diagonal {
        #[command(flatten)]
        ca: CaArg,
        #[arg(long, allow_hyphen_values = true)]
        i: String,
        #[arg(long, default_value_t = 64)]
        len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Preperiod and period of `Dg_i` over a window.
    Period {
        #[command(flatten)]
        ca: CaArg,
        #[arg(long, allow_hyphen_values = true)]
        i: String,
        #[arg(long, default_value_t = 256)]
        horizon: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// How far a signal trails the diagonal.
    Gap {
        #[arg(long)]
        signal: PathBuf,
        #[arg(long, default_value = "trellis")]
        neighborhood: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Binary slow-down: anchors and counter rows.
    Log2 {
        #[arg(long, default_value_t = 2048)]
        steps: Time,
        #[arg(long, default_value_t = 16)]
        rows: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Base-xy slow-down: follower anchors and digit planes.
    Xy {
        #[arg(long)]
        x: u32,
        #[arg(long)]
        y: u32,
        #[arg(long, default_value_t = 1000)]
        steps: Time,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Periodicity and length envelopes of the low diagonals.
    Bounds {
        #[command(flatten)]
        ca: CaArg,
        #[arg(long, default_value_t = 6)]
        rmax: u32,
        #[arg(long, default_value_t = 4096)]
        window: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Followers on a blank background walk basic signals; log2 does not.
    Basic {
        #[arg(long, default_value_t = 50)]
        followers: usize,
        #[arg(long, default_value_t = 256)]
        window: usize,
        #[arg(long, default_value_t = 2000)]
        log2_window: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Search {
    /// Every two-state table against the values a slow-down needs.
    TwoState {
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Rules {
    /// Parse and validate a rule file.
    Check { path: PathBuf },
    /// Print an automaton in rule-file syntax.
    Print {
        #[command(flatten)]
        ca: CaArg,
    },
}

/// Why a command did not exit 0.
#[derive(Debug)]
pub enum Failure {
    Config(anyhow::Error),
    Verification,
    Overflow { last_completed: Time },
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Verification => 1,
            Failure::Config(_) => 2,
            Failure::Overflow { .. } => 3,
        }
    }
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Config(e.into())
    }
}

type CmdResult = Result<(), Failure>;

fn run_options() -> anyhow::Result<RunOptions> {
    let budget = match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().with_context(|| format!("{BUDGET_ENV}={v} is not a site count"))?,
        Err(_) => DEFAULT_BUDGET,
    };
    Ok(RunOptions::with_budget(budget))
}

fn build_ca(arg: &CaArg) -> anyhow::Result<ImpulseCA> {
    Ok(CaSpec::parse(&arg.spec)?.build()?)
}

fn emit(out: Option<&Path>, text: &[u8]) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text)?;
            Ok(stdout.flush()?)
        }
    }
}

fn emit_report<T: Serialize>(out: Option<&Path>, report: &T, pass: bool) -> CmdResult {
    emit(out, to_json(report).as_bytes())?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn simulate(ca: &ImpulseCA, steps: Time, out: Option<&Path>) -> CmdResult {
    let opts = run_options()?;
    let outcome = match out {
        Some(p) => {
            let file = fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut w = io::BufWriter::new(file);
            let o = dump_diagram(ca, steps, &opts, &mut w).context("writing the diagram")?;
            w.flush().context("writing the diagram")?;
            o
        }
        None => {
            let mut w = io::BufWriter::new(io::stdout().lock());
            let o = dump_diagram(ca, steps, &opts, &mut w).context("writing the diagram")?;
            w.flush().context("writing the diagram")?;
            o
        }
    };
    if outcome.truncated {
        return Err(Failure::Overflow { last_completed: outcome.last_completed });
    }
    Ok(())
}

fn render(diagram: &Path, mode: RenderMode, t: Option<Time>, k: Option<Time>, out: Option<&Path>) -> CmdResult {
    let text = fs::read_to_string(diagram).with_context(|| format!("reading {}", diagram.display()))?;
    let d = DiagramFile::parse(&text).map_err(|e| anyhow!("{}: {e}", diagram.display()))?;
    match mode {
        RenderMode::Slice => {
            let t = t.ok_or_else(|| anyhow!("--mode slice needs --t"))?;
            emit(out, render_slice(&d, t)?.as_bytes())?;
        }
        RenderMode::Wplane => {
            let k = k.ok_or_else(|| anyhow!("--mode wplane needs --k"))?;
            emit(out, render_wplane(&d, k)?.as_bytes())?;
        }
        RenderMode::Ppm => {
            let dir = out.ok_or_else(|| anyhow!("--mode ppm needs --out DIR"))?;
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let width = d.horizon().to_string().len().max(4);
            for (t, frame) in render_ppm(&d)?.iter().enumerate() {
                let p = dir.join(format!("slice_{t:0width$}.ppm"));
                fs::write(&p, frame).with_context(|| format!("writing {}", p.display()))?;
            }
            let colors = serde_json::to_string_pretty(&color_map(&d)).expect("color map serializes") + "\n";
            fs::write(dir.join("colors.json"), colors).context("writing colors.json")?;
        }
    }
    Ok(())
}

fn walk_options(walk: &WalkArgs) -> anyhow::Result<RunOptions> {
    Ok(RunOptions { band: walk.band, ..run_options()? })
}

fn detect(ca: &ImpulseCA, spec: &str, partition: Option<&str>, steps: Time, walk: &WalkArgs) -> CmdResult {
    let p = match partition {
        Some(text) => parse_partition(ca, text).map_err(|e| anyhow!("--partition: {e}"))?,
        None if spec == "log2" => MovePartition::log2(ca).map_err(anyhow::Error::from)?,
        None => return Err(anyhow!("--partition is required for `{spec}`").into()),
    };
    let s = detect_streaming(ca, &p, walk.convention.into(), steps, &walk_options(walk)?).map_err(anyhow::Error::from)?;
    emit(walk.out.as_deref(), signal_to_json(&s).as_bytes())?;
    Ok(())
}

fn follow(ca: &ImpulseCA, spec: &CaSpec, follower: Option<&Path>, steps: Time, walk: &WalkArgs) -> CmdResult {
    let f = match (follower, spec) {
        (Some(p), _) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            FollowerFile::parse(&text)
                .and_then(|f| f.build(ca))
                .with_context(|| format!("follower {}", p.display()))?
        }
        (None, CaSpec::Xy(x, y) | CaSpec::Merged(x, y)) => follower_for_xy(ca, *x, *y).map_err(anyhow::Error::from)?,
        (None, _) => return Err(anyhow!("--follower is required for this automaton").into()),
    };
    let trace = follow_streaming(ca, &f, walk.convention.into(), steps, &walk_options(walk)?)
        .map_err(anyhow::Error::from)?;
    emit(walk.out.as_deref(), signal_to_json(&trace.signal).as_bytes())?;
    Ok(())
}

fn join_symbols(ca: &ImpulseCA, letters: &[ca_signals_core::StateId]) -> String {
    let syms: Vec<&str> = letters.iter().map(|s| ca.symbol(*s)).collect();
    let sep = if ca.alphabet().symbols().iter().all(|s| s.chars().count() == 1) { "" } else { " " };
    syms.join(sep)
}

/// Records just the sites of `Dg_i` for `len` letters.
fn diagonal_word(ca: &ImpulseCA, i: &Coord, len: usize) -> anyhow::Result<ca_signals_core::engine::DiagonalWord> {
    if i.dim() != ca.dim() {
        bail!("--i has {} components, the automaton is {}-dimensional", i.dim(), ca.dim());
    }
    if !i.is_natural() {
        let d = record_region(ca, 0, &RunOptions::default(), |_, _| false)?;
        return Ok(d.diagonal(i, len)?);
    }
    let start = (i.max_component() as Time).div_ceil(2);
    let horizon = start + Time::try_from(len).context("--len too large")?;
    let idx = *i;
    let band = i.max_component() as u32;
    let opts = RunOptions { band: Some(band), ..run_options()? };
    let rec = record_region(ca, horizon, &opts, move |c, t| {
        c.as_slice().iter().zip(idx.as_slice()).all(|(u, i)| t as i64 - *u as i64 == *i as i64)
    })?;
    Ok(rec.diagonal(i, len)?)
}

#[derive(Serialize)]
struct DiagonalJson {
    i: Vec<i32>,
    start_time: Time,
    letters: Vec<String>,
}

#[derive(Serialize)]
struct PeriodJson {
    i: Vec<i32>,
    horizon: usize,
    periodic: bool,
    alpha: Option<String>,
    beta: Option<String>,
    alpha_len: Option<usize>,
    beta_len: Option<usize>,
}

#[derive(Serialize)]
struct LevelJson {
    m: u64,
    last_time: Time,
    c: u64,
}

#[derive(Serialize)]
struct GapJson {
    classification: &'static str,
    length: usize,
    fitted_c: Option<u64>,
    last_change: Time,
    levels: Vec<LevelJson>,
}

fn analyze(cmd: Analyze) -> CmdResult {
    match cmd {
        Analyze::Diagonal { ca, i, len, out } => {
            let ca = build_ca(&ca)?;
            let i = parse_coord(&i).map_err(|e| anyhow!("--i: {e}"))?;
            let w = diagonal_word(&ca, &i, len)?;
            let report = DiagonalJson {
                i: i.as_slice().to_vec(),
                start_time: w.start_time,
                letters: w.letters.iter().map(|s| ca.symbol(*s).to_string()).collect(),
            };
            emit(out.as_deref(), to_json(&report).as_bytes())?;
        }
        Analyze::Period { ca, i, horizon, out } => {
            let ca = build_ca(&ca)?;
            let i = parse_coord(&i).map_err(|e| anyhow!("--i: {e}"))?;
            if horizon < 4 {
                return Err(anyhow!("--horizon must be at least 4").into());
            }
            let w = diagonal_word(&ca, &i, horizon)?;
            let mut report = PeriodJson {
                i: i.as_slice().to_vec(),
                horizon,
                periodic: false,
                alpha: None,
                beta: None,
                alpha_len: None,
                beta_len: None,
            };
            if let PeriodOutcome::Periodic(d) = ultimate_period(&w.letters, horizon) {
                report.periodic = true;
                report.alpha = Some(join_symbols(&ca, &d.alpha));
                report.beta = Some(join_symbols(&ca, &d.beta));
                report.alpha_len = Some(d.alpha.len());
                report.beta_len = Some(d.beta.len());
            }
            emit(out.as_deref(), to_json(&report).as_bytes())?;
        }
        Analyze::Gap { signal, neighborhood, out } => {
            let kind = NeighborhoodKind::from_name(&neighborhood)
                .ok_or_else(|| anyhow!("unknown neighborhood `{neighborhood}`"))?;
            let text = fs::read_to_string(&signal).with_context(|| format!("reading {}", signal.display()))?;
            let s = signal_from_json(&text).map_err(|e| anyhow!("{}: {e}", signal.display()))?;
            if s.len() < 64 {
                return Err(anyhow!("the gap probe needs at least 64 sites, got {}", s.len()).into());
            }
            let g = gap_probe(&s, kind);
            let report = GapJson {
                classification: g.classification.name(),
                length: s.len(),
                fitted_c: g.fitted_c,
                last_change: g.last_change,
                levels: g.levels.iter().map(|l| LevelJson { m: l.m, last_time: l.last_time, c: l.c }).collect(),
            };
            emit(out.as_deref(), to_json(&report).as_bytes())?;
        }
    }
    Ok(())
}

fn verify(cmd: Verify) -> CmdResult {
    let opts = run_options()?;
    match cmd {
        Verify::Log2 { steps, rows, out } => {
            let r = verify_log2(steps, rows, &opts).map_err(anyhow::Error::from)?;
            emit_report(out.as_deref(), &r, r.pass)
        }
        Verify::Xy { x, y, steps, out } => {
            let r = verify_xy(x, y, steps, &opts).map_err(anyhow::Error::from)?;
            emit_report(out.as_deref(), &r, r.pass)
        }
        Verify::Bounds { ca, rmax, window, out } => {
            let ca = build_ca(&ca)?;
            if ca.dim() != 2 || ca.neighborhood().kind != NeighborhoodKind::Trellis {
                return Err(anyhow!("bounds are checked on 2-D trellis automata").into());
            }
            if window < 4 {
                return Err(anyhow!("--window must be at least 4").into());
            }
            let r = verify_bounds(&ca, rmax, window, &opts).map_err(anyhow::Error::from)?;
            emit_report(out.as_deref(), &r, r.pass)
        }
        Verify::Basic { followers, window, log2_window, seed, out } => {
            if window < 4 || log2_window < 4 {
                return Err(anyhow!("windows must be at least 4").into());
            }
            let r = verify_basic(followers, window, log2_window, seed, &opts).map_err(anyhow::Error::from)?;
            emit_report(out.as_deref(), &r, r.pass)
        }
    }
}

fn rules(cmd: Rules) -> CmdResult {
    match cmd {
        Rules::Check { path } => {
            let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let ca = parse_rules(&text).with_context(|| path.display().to_string())?;
            let msg = format!(
                "ok: {} states, {} rules, neighborhood {}\n",
                ca.num_states(),
                ca.table().rules().len(),
                ca.neighborhood()
            );
            emit(None, msg.as_bytes())?;
        }
        Rules::Print { ca } => emit(None, serialize_rules(&build_ca(&ca)?).as_bytes())?,
    }
    Ok(())
}

pub fn dispatch(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Simulate { ca, steps, out } => simulate(&build_ca(&ca)?, steps, out.as_deref()),
        Command::Render { diagram, mode, t, k, out } => render(&diagram, mode, t, k, out.as_deref()),
        Command::Detect { ca, partition, steps, walk } => {
            detect(&build_ca(&ca)?, &ca.spec, partition.as_deref(), steps, &walk)
        }
        Command::Follow { ca, follower, steps, walk } => {
            let spec = CaSpec::parse(&ca.spec).map_err(anyhow::Error::from)?;
            follow(&spec.build().map_err(anyhow::Error::from)?, &spec, follower.as_deref(), steps, &walk)
        }
        Command::Analyze(a) => analyze(a),
        Command::Verify(v) => verify(v),
        Command::Search(Search::TwoState { limit, out }) => {
            let r = search_two_state(limit).map_err(anyhow::Error::from)?;
            emit_report(out.as_deref(), &r, r.pass)
        }
        Command::Rules(r) => rules(r),
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Config(e) => eprintln!("error: {e:#}"),
                Failure::Verification => eprintln!("verification failed"),
                Failure::Overflow { last_completed } => {
                    eprintln!("site budget exhausted; output ends at t={last_completed}")
                }
            }
            ExitCode::from(f.code())
        }
    }
}
