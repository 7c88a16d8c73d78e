//! `vsep` command-line front end.

mod bench;
mod record;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use vsep::gen::{generate, halfplane_sides, random_sides, PointDistribution};
use vsep::instance::{LabeledPointSet, Side};
use vsep::io::{digest, format_points, parse_balls, parse_points, LabelMode, PointsFile};
use vsep::separator::balanced_voronoi_separator;
use vsep::solvers::{
    exact_small_separator, greedy_separator, local_search_hit, ptas_separator, HitInstance, HitResult,
};
use vsep::verify::verify_separated;
use vsep::{Config, Error, Point};

use record::RunRecord;
use svg::Figure;

#[derive(Parser, Debug)]
#[command(name = "vsep", version, about = "Balanced Voronoi separators and separator hitting sets")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

/// Solver constants. Flags override `VSEP_*` environment variables, which
/// override the defaults.
#[derive(Args, Debug)]
struct ConfigArgs {
    /// Relative numeric tolerance.
    #[arg(long, global = true, env = "VSEP_EPS_NUM")]
    eps_num: Option<f64>,
    /// Doubling constant c_dbl^d override.
    #[arg(long, global = true, env = "VSEP_C_DBL")]
    c_dbl: Option<f64>,
    /// Separator size constant override.
    #[arg(long, global = true, env = "VSEP_C_SEP")]
    c_sep: Option<f64>,
    /// Approximation scheme constant: k = c_ptas / eps^2.
    #[arg(long, global = true, env = "VSEP_C_PTAS")]
    c_ptas: Option<f64>,
    #[arg(long, global = true, env = "VSEP_MAX_RETRIES")]
    max_retries: Option<u32>,
    /// Exact search time cap in seconds; 0 disables it.
    #[arg(long, global = true, env = "VSEP_EXACT_TIME_CAP")]
    exact_time_cap: Option<f64>,
    #[arg(long, global = true, env = "VSEP_EXACT_RESTARTS")]
    exact_restarts: Option<usize>,
    /// Time cap of each exact sub-solve in seconds; 0 disables it.
    #[arg(long, global = true, env = "VSEP_PTAS_SUB_TIME_CAP")]
    ptas_sub_time_cap: Option<f64>,
    #[arg(long, global = true, env = "VSEP_PTAS_SUB_BUDGET_CAP")]
    ptas_sub_budget_cap: Option<usize>,
}

impl ConfigArgs {
    fn to_config(&self) -> Config {
        let mut c = Config::default();
        let cap = |s: f64| (s > 0.0).then_some(s);
        if let Some(v) = self.eps_num {
            c.eps_num = v;
        }
        if let Some(v) = self.c_dbl {
            c.c_dbl_override = Some(v);
        }
        if let Some(v) = self.c_sep {
            c.c_sep = Some(v);
        }
        if let Some(v) = self.c_ptas {
            c.c_ptas = v;
        }
        if let Some(v) = self.max_retries {
            c.max_retries = v;
        }
        if let Some(v) = self.exact_time_cap {
            c.exact_time_cap_secs = cap(v);
        }
        if let Some(v) = self.exact_restarts {
            c.exact_restarts = v;
        }
        if let Some(v) = self.ptas_sub_time_cap {
            c.ptas_sub_time_cap_secs = cap(v);
        }
        if let Some(v) = self.ptas_sub_budget_cap {
            c.ptas_sub_budget_cap = v;
        }
        c
    }
}

#[derive(Args, Debug)]
struct Output {
    /// Write the JSON run record here instead of standard output.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write an SVG figure (planar inputs only).
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write the output guard points as a point file.
    #[arg(long)]
    guards_out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Labels {
    None,
    Random,
    Halfplane,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a seeded point file.
    Gen {
        kind: PointDistribution,
        n: usize,
        d: usize,
        seed: u64,
        /// Append a label column.
        #[arg(long, value_enum, default_value = "none")]
        labels: Labels,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Balanced sphere separator of an (unlabeled) point file.
    Separate {
        points: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the LP check that the guards separate inside from outside.
        #[arg(long)]
        skip_verify: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Greedy separator of a labeled point file.
    Greedy {
        points: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Smallest separator with at most `budget` guards.
    Exact {
        points: PathBuf,
        #[arg(long, default_value_t = 4)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Approximation scheme on a labeled point file.
    Ptas {
        points: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Local search on a labeled point file or on a disk file.
    Localsearch {
        /// Labeled point file.
        #[arg(required_unless_present = "disks", conflicts_with = "disks")]
        points: Option<PathBuf>,
        /// Disk file with rows `x y r`.
        #[arg(long)]
        disks: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        ell: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Check that a guard file separates the classes of a labeled point file.
    Verify {
        points: PathBuf,
        guards: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Separator size sweep over n = 2^min_exp ..= 2^max_exp; writes CSV.
    Bench {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 10)]
        min_exp: u32,
        #[arg(long, default_value_t = 16)]
        max_exp: u32,
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[arg(long, default_value = "uniform")]
        kind: PointDistribution,
        /// CSV output; standard output when absent.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// JSON run record with the per-size medians.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// Failure that maps to a specific exit status.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(Exit(code, _)) = err.downcast_ref::<Exit>() {
        return *code;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::NoSolutionWithinBudget(_)) => 2,
        Some(
            Error::TimeCapExceeded(_)
            | Error::NonTermination(_)
            | Error::RetriesExhausted(_)
            | Error::TooLarge(_)
            | Error::ExchangeBudgetExceeded(_),
        ) => 3,
        _ => 1,
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read_points(path: &Path, mode: LabelMode) -> anyhow::Result<PointsFile> {
    parse_points(&read(path)?, mode).with_context(|| format!("parsing {}", path.display()))
}

fn read_instance(path: &Path) -> anyhow::Result<LabeledPointSet> {
    let file = read_points(path, LabelMode::Labeled)?;
    file.into_instance().with_context(|| format!("instance in {}", path.display()))
}

fn instance_digest(inst: &LabeledPointSet) -> String {
    digest(format_points(inst.points(), Some(inst.sides())).as_bytes())
}

/// Emits the record and the optional guard and SVG files.
fn finish(rec: &RunRecord, out: &Output, guards: &[Point], figure: Option<Figure<'_>>) -> anyhow::Result<()> {
    if let Some(p) = &out.guards_out {
        write(p, &format_points(guards, None))?;
    }
    if let (Some(p), Some(fig)) = (&out.svg, figure) {
        write(p, &fig.render())?;
    }
    let text = serde_json::to_string_pretty(rec)? + "\n";
    match &out.json {
        Some(p) => write(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn hit_record(
    command: &str,
    seed: Option<u64>,
    params: serde_json::Value,
    inst: &LabeledPointSet,
    solve: impl FnOnce() -> vsep::Result<HitResult>,
) -> anyhow::Result<(RunRecord, HitResult)> {
    let mut rec = RunRecord::new(command, seed, params);
    rec.instance_digest = Some(instance_digest(inst));
    let res = rec.time("solve", solve)?;
    let report = rec.time("verify", || verify_separated(inst, &res.points))?;
    rec.size("guards", res.len());
    rec.verdict("separated", report.separated);
    rec.result = serde_json::to_value(&res)?;
    Ok((rec, res))
}

/// Writes the outputs of a hitting-set run, then fails if the independent
/// verification did not pass.
fn finish_hit(rec: &RunRecord, out: &Output, inst: &LabeledPointSet, res: &HitResult) -> anyhow::Result<()> {
    finish(rec, out, &res.points, Some(figure(inst, &res.points)))?;
    if rec.verdicts.get("separated") != Some(&true) {
        return Err(Exit(2, "solver output failed independent verification".into()).into());
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = cli.config.to_config();
    let cfg_json = serde_json::to_value(&cfg)?;
    let params = |extra: serde_json::Value| json!({ "config": cfg_json, "args": extra });
    match cli.command {
        Command::Gen {
            kind,
            n,
            d,
            seed,
            labels,
            output,
        } => {
            let pts = generate(kind, n, d, seed)?;
            let sides: Option<Vec<Side>> = match labels {
                Labels::None => None,
                Labels::Random => Some(random_sides(n, seed)),
                Labels::Halfplane => Some(halfplane_sides(&pts, seed)),
            };
            let text = format!(
                "# vsep gen {kind} {n} {d} {seed} labels={labels:?}\n{}",
                format_points(&pts, sides.as_deref())
            );
            match output {
                Some(p) => write(&p, &text)?,
                None => print!("{text}"),
            }
        }
        Command::Separate {
            points,
            seed,
            skip_verify,
            out,
        } => {
            let file = read_points(&points, LabelMode::Auto)?;
            let mut rec = RunRecord::new("separate", Some(seed), params(json!({ "points": points })));
            rec.instance_digest = Some(digest(format_points(&file.points, None).as_bytes()));
            let sep = rec.time("solve", || balanced_voronoi_separator(&file.points, seed, &cfg))?;
            rec.size("guards", sep.guards.len());
            rec.size("inside", sep.inside.len());
            rec.size("outside", sep.outside.len());
            let mut bad = Vec::new();
            if !skip_verify {
                let inst = LabeledPointSet::from_partition(file.points.clone(), &sep.inside, &sep.outside)?;
                let report = rec.time("verify", || verify_separated(&inst, &sep.guards))?;
                rec.verdict("separated", report.separated);
                bad.extend(report.witness);
            }
            rec.result = serde_json::to_value(&sep)?;
            let sides: Vec<Side> = (0..file.points.len())
                .map(|i| if sep.inside.binary_search(&i).is_ok() { Side::One } else { Side::Two })
                .collect();
            let figure = Figure {
                points: &file.points,
                sides: Some(&sides),
                guards: &sep.guards,
                sphere: Some(&sep.sphere),
                bad_pairs: &bad,
            };
            finish(&rec, &out, &sep.guards, Some(figure))?;
            if !bad.is_empty() {
                return Err(Exit(2, "separator failed verification".into()).into());
            }
        }
        Command::Greedy { points, out } => {
            let inst = read_instance(&points)?;
            let (rec, res) = hit_record("greedy", None, params(json!({ "points": points })), &inst, || {
                greedy_separator(&inst)
            })?;
            finish_hit(&rec, &out, &inst, &res)?;
        }
        Command::Exact {
            points,
            budget,
            seed,
            out,
        } => {
            let inst = read_instance(&points)?;
            let args = json!({ "points": points, "budget": budget });
            let (rec, res) = hit_record("exact", Some(seed), params(args), &inst, || {
                exact_small_separator(&inst, budget, seed, &cfg)
            })?;
            finish_hit(&rec, &out, &inst, &res)?;
        }
        Command::Ptas { points, eps, seed, out } => {
            let inst = read_instance(&points)?;
            let args = json!({ "points": points, "eps": eps });
            let (rec, res) = hit_record("ptas", Some(seed), params(args), &inst, || {
                ptas_separator(&inst, eps, seed, &cfg)
            })?;
            finish_hit(&rec, &out, &inst, &res)?;
        }
        Command::Localsearch {
            points,
            disks,
            ell,
            seed,
            out,
        } => match (points, disks) {
            (Some(points), None) => {
                let inst = read_instance(&points)?;
                let args = json!({ "points": points, "ell": ell });
                let hit = HitInstance::Voronoi(inst.clone());
                let (rec, res) = hit_record("localsearch", Some(seed), params(args), &inst, || {
                    local_search_hit(&hit, ell, seed, &cfg)
                })?;
                finish_hit(&rec, &out, &inst, &res)?;
            }
            (None, Some(disks)) => {
                let text = read(&disks)?;
                let balls = parse_balls(&text).with_context(|| format!("parsing {}", disks.display()))?;
                let args = json!({ "disks": disks, "ell": ell });
                let mut rec = RunRecord::new("localsearch", Some(seed), params(args));
                rec.instance_digest = Some(digest(vsep::io::format_balls(&balls).as_bytes()));
                let res =
                    rec.time("solve", || local_search_hit(&HitInstance::ExplicitDisks(balls), ell, seed, &cfg))?;
                rec.size("points", res.len());
                rec.verdict("stabbed", res.certificate.is_valid());
                rec.result = serde_json::to_value(&res)?;
                finish(&rec, &out, &res.points, None)?;
                if !res.certificate.is_valid() {
                    return Err(Exit(2, "some disk is not stabbed".into()).into());
                }
            }
            _ => return Err(anyhow!("give either a point file or --disks")),
        },
        Command::Verify { points, guards, out } => {
            let inst = read_instance(&points)?;
            let guard_points = match parse_points(&read(&guards)?, LabelMode::Unlabeled) {
                Ok(f) => f.points,
                Err(Error::EmptyInput) => Vec::new(),
                Err(e) => return Err(e).with_context(|| format!("parsing {}", guards.display())),
            };
            let mut rec = RunRecord::new("verify", None, params(json!({ "points": points, "guards": guards })));
            rec.instance_digest = Some(instance_digest(&inst));
            let report = rec.time("verify", || verify_separated(&inst, &guard_points))?;
            rec.size("guards", guard_points.len());
            rec.verdict("separated", report.separated);
            rec.result = serde_json::to_value(&report)?;
            let bad: Vec<_> = report.witness.iter().cloned().collect();
            let fig = Figure {
                bad_pairs: &bad,
                ..figure(&inst, &guard_points)
            };
            finish(&rec, &out, &guard_points, Some(fig))?;
            if let Some(w) = &report.witness {
                return Err(Exit(
                    2,
                    format!("not separated: points {} and {} share a cell boundary at {:?}", w.p1, w.p2, w.witness.coords()),
                )
                .into());
            }
        }
        Command::Bench {
            d,
            min_exp,
            max_exp,
            seeds,
            kind,
            csv,
            json,
        } => {
            if min_exp > max_exp || max_exp > 24 {
                return Err(anyhow!("need min_exp <= max_exp <= 24"));
            }
            let sizes: Vec<usize> = (min_exp..=max_exp).map(|e| 1usize << e).collect();
            let args = json!({ "d": d, "sizes": sizes, "seeds": seeds, "kind": kind });
            let mut rec = RunRecord::new("bench", None, params(args));
            let rows = rec.time("sweep", || bench::sweep(kind, d, &sizes, seeds, &cfg))?;
            let summary = bench::summarize(&rows);
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r)?;
            }
            let text = String::from_utf8(w.into_inner()?)?;
            match csv {
                Some(p) => write(&p, &text)?,
                None => print!("{text}"),
            }
            rec.size("rows", rows.len());
            rec.result = serde_json::to_value(&summary)?;
            if let Some(p) = json {
                write(&p, &(serde_json::to_string_pretty(&rec)? + "\n"))?;
            }
            eprintln!("median |S|/n^(1-1/d) spread across n: {:.3}", summary.spread);
        }
    }
    Ok(())
}

fn figure<'a>(inst: &'a LabeledPointSet, guards: &'a [Point]) -> Figure<'a> {
    Figure {
        points: inst.points(),
        sides: Some(inst.sides()),
        guards,
        ..Figure::default()
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
