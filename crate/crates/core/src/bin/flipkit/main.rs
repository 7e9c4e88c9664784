//! `flipkit`: command-line front end.
//!
//! Exit codes: 0 pass or witness found, 1 property failure or no witness,
//! 2 refusal or usage error. Output files are written only after a command
//! has fully succeeded.

mod report;
mod verify;

use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use flipkit::breaksep::{
    break_from_sep, breakability_search2, separability_search, BreakBudget, BreakWitness, SepBreakCase,
    DEFAULT_PARTITION_VERTEX_CAP,
};
use flipkit::conversion::{convert, definable_conversion, max_stretch};
use flipkit::generate;
use flipkit::io;
use flipkit::metric::FlipMetric;
use flipkit::vc::{sauer_shelah_bound, shatter_table, vc_dimension, DEFAULT_VC_VERTEX_CAP};
use flipkit::{Eps, Error, FlipSpec, Graph, Partition, WeightFn, DEFAULT_MAX_PARTS};

use report::{Outcome, RunReport};
use verify::{Lemma, Mode};

#[derive(Parser, Debug)]
#[command(name = "flipkit", version, about = "Flips, flip metrics and flip-separability on small graphs")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Most parts whose flips may be enumerated.
    #[arg(long, global = true, env = "FLIPKIT_MAX_PARTS")]
    max_parts: Option<usize>,
    /// Also write the JSON run report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Print wall time to stderr (never part of the report).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    Path,
    Cycle,
    Clique,
    Star,
    Grid,
    Hypercube,
    Gnp,
    Halfgraph,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExportFormat {
    Dot,
    Csv,
    ReportCsv,
}

#[derive(Args, Debug)]
struct MetricSource {
    /// Partition file (`v part_id` lines).
    #[arg(long, group = "source")]
    partition: Option<PathBuf>,
    /// Defining set, e.g. "0,3,5".
    #[arg(long, group = "source")]
    set: Option<String>,
    /// Family file, one set per line.
    #[arg(long, group = "source")]
    family: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Generate a graph: path N | cycle N | clique N | star N | grid R C |
    /// hypercube D | gnp N P | halfgraph N.
    Gen {
        kind: GenKind,
        params: Vec<String>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Diameter of a graph and of its complement.
    Diam {
        graph: PathBuf,
        /// Read the bipartite format and use the bipartite complement.
        #[arg(long)]
        bipartite: bool,
    },
    /// VC-dimension, witness and shatter table (CSV).
    Vcdim {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VC_VERTEX_CAP)]
        max_vertices: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Flip distances as CSV `u,v,dist`.
    Dist {
        graph: PathBuf,
        #[command(flatten)]
        source: MetricSource,
        u: Option<usize>,
        v: Option<usize>,
        #[arg(long)]
        all_pairs: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Convert a partition metric into one concrete flip.
    Convert {
        graph: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        /// Write the flipped graph.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        emit_certificates: Option<PathBuf>,
        #[arg(long)]
        emit_dot: Option<PathBuf>,
        #[arg(long)]
        emit_partition: Option<PathBuf>,
        /// Check dist_P ≤ 6·dist_G' on all pairs by enumerating flips.
        #[arg(long)]
        check: bool,
        /// Also search a definable flip emulating the result.
        #[arg(long)]
        definable: bool,
        #[arg(long, default_value_t = 2)]
        r_max: u32,
        #[arg(long, default_value_t = 3)]
        s_max: usize,
    },
    /// Budgeted flip-breakability search.
    Break {
        graph: PathBuf,
        #[arg(long = "W")]
        w: PathBuf,
        /// Second pool for the two-set variant.
        #[arg(long = "W2")]
        w2: Option<PathBuf>,
        #[arg(short, long)]
        r: u32,
        #[arg(short, long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        s_max: usize,
        #[arg(long)]
        part_cap: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        max_nodes: u64,
        /// Search partition flips of V instead of definable flips.
        #[arg(long)]
        raw_partitions: bool,
        #[arg(long, default_value_t = DEFAULT_PARTITION_VERTEX_CAP)]
        max_vertices: usize,
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Exhaustive flip-separability search. Integer weights compare exactly;
    /// real weights use an absolute tolerance of 1e-9.
    Separate {
        graph: PathBuf,
        /// Weights file (`v weight` lines); unit weights if omitted.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(short, long)]
        r: u32,
        /// Threshold as `a/b` or a decimal.
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 2)]
        k_max: usize,
        #[arg(long, default_value_t = DEFAULT_PARTITION_VERTEX_CAP)]
        max_vertices: usize,
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Separability at radius 4r with ε = 1/2 on the indicator of W, then
    /// two subsets of W of size m with disjoint r-balls. Needs |W| = 4m².
    Sep2break {
        graph: PathBuf,
        #[arg(long = "W")]
        w: PathBuf,
        #[arg(short, long)]
        r: u32,
        #[arg(short, long)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        k_max: usize,
        #[arg(long, default_value_t = DEFAULT_PARTITION_VERTEX_CAP)]
        max_vertices: usize,
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Sweep a property exhaustively or over random instances.
    Verify {
        lemma: Lemma,
        /// Check every instance of size N.
        #[arg(long, group = "mode")]
        exhaustive: Option<usize>,
        /// Check COUNT random instances.
        #[arg(long, group = "mode")]
        random: Option<u64>,
        /// Size bound for random instances.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Export a graph as DOT or CSV, or a run report as CSV.
    Export {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ExportFormat::Dot)]
        format: ExportFormat,
        /// Colour vertices by this partition (DOT only).
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

/// What a command produced. Nothing is written until the command is done.
struct Output {
    report: RunReport,
    /// Text for stdout; the JSON report when `None`.
    stdout: Option<String>,
    files: Vec<(PathBuf, String)>,
}

impl Output {
    fn report(report: RunReport) -> Self {
        Output {
            report,
            stdout: None,
            files: Vec::new(),
        }
    }

    /// Sends `payload` to `out` if given, else to stdout.
    fn payload(report: RunReport, out: &Option<PathBuf>, payload: String) -> Self {
        match out {
            Some(path) => Output {
                report,
                stdout: None,
                files: vec![(path.clone(), payload)],
            },
            None => Output {
                report,
                stdout: Some(payload),
                files: Vec::new(),
            },
        }
    }

    fn file(mut self, path: &Option<PathBuf>, content: impl FnOnce() -> String) -> Self {
        if let Some(p) = path {
            self.files.push((p.clone(), content()));
        }
        self
    }
}

fn read_text(path: &Path) -> flipkit::Result<String> {
    let mut s = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| s = t)
    };
    res.map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    Ok(s)
}

fn load_graph(path: &Path) -> flipkit::Result<Graph> {
    io::read_graph(&read_text(path)?)
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let result = run(&cli);
    if cli.timing {
        eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(out) => {
            let json = out.report.to_json();
            let mut files = out.files;
            if let Some(p) = &cli.report {
                files.push((p.clone(), json.clone()));
            }
            for (path, content) in &files {
                if let Err(e) = fs::write(path, content) {
                    eprintln!("flipkit: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            print!("{}", out.stdout.unwrap_or(json));
            if let Some(cex) = &out.report.counterexample {
                eprintln!("flipkit: counterexample: {cex}");
            }
            ExitCode::from(out.report.outcome.exit_code())
        }
        Err(e) => {
            eprintln!("flipkit: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> flipkit::Result<Output> {
    let max_parts = cli.max_parts.unwrap_or(DEFAULT_MAX_PARTS);
    let seed = cli.seed;
    match &cli.cmd {
        Cmd::Gen { kind, params, out } => cmd_gen(*kind, params, out, seed),
        Cmd::Diam { graph, bipartite } => cmd_diam(graph, *bipartite),
        Cmd::Vcdim {
            graph,
            max_vertices,
            out,
        } => cmd_vcdim(graph, *max_vertices, out),
        Cmd::Dist {
            graph,
            source,
            u,
            v,
            all_pairs,
            out,
        } => cmd_dist(graph, source, (*u, *v), *all_pairs, out, max_parts),
        Cmd::Convert {
            graph,
            partition,
            out,
            emit_certificates,
            emit_dot,
            emit_partition,
            check,
            definable,
            r_max,
            s_max,
        } => {
            let g = load_graph(graph)?;
            let p = io::read_partition(&read_text(partition)?, g.n())?;
            let opts = ConvertOpts {
                check: *check,
                definable: definable.then_some((*r_max, *s_max)),
                max_parts,
            };
            let o = cmd_convert(&g, &p, &opts)?;
            let (flipped, refined, certs, dot) = (
                io::write_graph(&o.1),
                io::write_partition(&o.2),
                o.3.clone(),
                io::export_dot(&o.1, Some(&o.2)),
            );
            Ok(Output::report(o.0)
                .file(out, || flipped)
                .file(emit_partition, || refined)
                .file(emit_certificates, || certs)
                .file(emit_dot, || dot))
        }
        Cmd::Break {
            graph,
            w,
            w2,
            r,
            m,
            s_max,
            part_cap,
            max_nodes,
            raw_partitions,
            max_vertices,
            witness,
            stats,
        } => {
            let g = load_graph(graph)?;
            let w1 = io::read_vertex_list(&read_text(w)?)?;
            let w2v = match w2 {
                Some(p) => io::read_vertex_list(&read_text(p)?)?,
                None => w1.clone(),
            };
            let budget = BreakBudget {
                s_max: *s_max,
                part_cap: part_cap.unwrap_or(max_parts),
                max_nodes: *max_nodes,
                raw_partitions: *raw_partitions,
                max_vertices: *max_vertices,
            };
            let out = breakability_search2(&g, &w1, &w2v, *r, *m, &budget, false)?;
            let mut report = RunReport::new("break")
                .param("graph", graph)
                .param("W", &w1)
                .param("W2", &w2v)
                .param("r", r)
                .param("m", m)
                .param("s_max", s_max)
                .param("part_cap", budget.part_cap)
                .param("max_nodes", max_nodes)
                .param("raw_partitions", raw_partitions);
            report.count("sets_tried", out.stats.sets_tried);
            report.count("sets_skipped", out.stats.sets_skipped);
            report.count("flips_enumerated", out.stats.flips_considered);
            let found = out.witness.is_some();
            report.outcome = if found { Outcome::Witness } else { Outcome::Fail };
            report.details = out.witness.as_ref().map(witness_json).unwrap_or(Value::Null);
            let stats_csv = io::csv_string(
                &["sets_tried", "sets_skipped", "flips_enumerated", "found"],
                &[vec![
                    out.stats.sets_tried.to_string(),
                    out.stats.sets_skipped.to_string(),
                    out.stats.flips_considered.to_string(),
                    found.to_string(),
                ]],
            )?;
            let wjson = pretty(&report.details);
            Ok(Output::report(report).file(witness, || wjson).file(stats, || stats_csv))
        }
        Cmd::Separate {
            graph,
            weights,
            r,
            eps,
            k_max,
            max_vertices,
            witness,
            stats,
        } => {
            let g = load_graph(graph)?;
            let w = match weights {
                Some(p) => io::read_weights(&read_text(p)?, g.n())?,
                None => WeightFn::uniform(g.n()),
            };
            let e: Eps = eps.parse()?;
            let out = separability_search(&g, &w, *r, e, *k_max, max_parts, *max_vertices)?;
            let mut report = RunReport::new("separate")
                .param("graph", graph)
                .param("weights", weights)
                .param("r", r)
                .param("eps", e.to_string())
                .param("k_max", k_max)
                .param("max_vertices", max_vertices);
            report.count("partitions_enumerated", out.stats.partitions_considered);
            report.count("flips_enumerated", out.stats.flips_considered);
            let found = out.separation.is_some();
            report.outcome = if found { Outcome::Witness } else { Outcome::Fail };
            if let Some(sep) = &out.separation {
                let heaviest = (0..g.n())
                    .filter(|&v| w.is_small(v, e))
                    .map(|v| w.of_set(&sep.flipped.ball(v, *r).expect("vertex in range")))
                    .fold(0.0f64, f64::max);
                report.details = json!({
                    "partition": sep.partition.parts(),
                    "spec": spec_json(&sep.spec),
                    "max_small_ball_weight": heaviest,
                    "threshold": e.as_f64() * w.total(),
                });
            }
            let stats_csv = io::csv_string(
                &["partitions_enumerated", "flips_enumerated", "found"],
                &[vec![
                    out.stats.partitions_considered.to_string(),
                    out.stats.flips_considered.to_string(),
                    found.to_string(),
                ]],
            )?;
            let wjson = pretty(&report.details);
            Ok(Output::report(report).file(witness, || wjson).file(stats, || stats_csv))
        }
        Cmd::Sep2break {
            graph,
            w,
            r,
            m,
            k_max,
            max_vertices,
            witness,
            stats,
        } => {
            let g = load_graph(graph)?;
            let wv = io::read_vertex_list(&read_text(w)?)?;
            let mut wset = wv.clone();
            wset.sort_unstable();
            wset.dedup();
            if wset.len() != 4 * m * m {
                return Err(usage(format!("|W| = {} but m = {m} needs 4m² = {}", wset.len(), 4 * m * m)));
            }
            let weights = WeightFn::indicator(g.n(), &wset)?;
            let half = Eps::new(1, 2)?;
            let sep = separability_search(&g, &weights, 4 * r, half, *k_max, max_parts, *max_vertices)?;
            let mut report = RunReport::new("sep2break")
                .param("graph", graph)
                .param("W", &wset)
                .param("r", r)
                .param("m", m)
                .param("k_max", k_max)
                .param("max_vertices", max_vertices);
            report.count("partitions_enumerated", sep.stats.partitions_considered);
            report.count("flips_enumerated", sep.stats.flips_considered);
            let mut found = false;
            match &sep.separation {
                None => {
                    report.outcome = Outcome::Fail;
                    report.details = json!({ "separation": Value::Null });
                }
                Some(s) => {
                    let brk = break_from_sep(&g, &wset, *r, (&s.partition, &s.spec))?;
                    found = true;
                    report.outcome = Outcome::Witness;
                    let case = match brk.case {
                        SepBreakCase::DenseBall { center } => json!({ "case": "dense_ball", "center": center }),
                        SepBreakCase::Scattered => json!({ "case": "scattered" }),
                    };
                    report.details = json!({
                        "separation": { "partition": s.partition.parts(), "spec": spec_json(&s.spec) },
                        "witness": witness_json(&brk.witness),
                        "case": case,
                    });
                }
            }
            let stats_csv = io::csv_string(
                &["partitions_enumerated", "flips_enumerated", "found"],
                &[vec![
                    sep.stats.partitions_considered.to_string(),
                    sep.stats.flips_considered.to_string(),
                    found.to_string(),
                ]],
            )?;
            let wjson = pretty(&report.details);
            Ok(Output::report(report).file(witness, || wjson).file(stats, || stats_csv))
        }
        Cmd::Verify {
            lemma,
            exhaustive,
            random,
            n,
        } => {
            let mode = match (exhaustive, random) {
                (Some(k), None) => Mode::Exhaustive(*k),
                (None, Some(c)) => Mode::Random { count: *c, n: *n, seed },
                _ => return Err(usage("verify needs --exhaustive N or --random COUNT")),
            };
            let res = verify::run(*lemma, mode, max_parts)?;
            let mut report = RunReport::new("verify").param("lemma", lemma.name()).param("max_parts", max_parts);
            report = match mode {
                Mode::Exhaustive(k) => report.param("mode", "exhaustive").param("n", k),
                Mode::Random { count, n, seed } => {
                    report.param("mode", "random").param("count", count).param("n", n).param("seed", seed)
                }
            };
            report.count("instances_checked", res.checked);
            for (k, v) in &res.counters {
                report.count(k, *v);
            }
            if let Some(r) = res.max_ratio {
                report.details = json!({ "max_ratio": r });
                if matches!(mode, Mode::Random { .. }) {
                    report.details["ratios"] = json!(res.ratios);
                }
            }
            report.outcome = if res.counterexample.is_some() { Outcome::Fail } else { Outcome::Pass };
            report.counterexample = res.counterexample;
            Ok(Output::report(report))
        }
        Cmd::Export {
            input,
            format,
            partition,
            out,
        } => {
            let text = read_text(input)?;
            let report = RunReport::new("export").param("input", input).param("format", format!("{format:?}"));
            let payload = match format {
                ExportFormat::Dot => {
                    let g = io::read_graph(&text)?;
                    let p = match partition {
                        Some(path) => Some(io::read_partition(&read_text(path)?, g.n())?),
                        None => None,
                    };
                    io::export_dot(&g, p.as_ref())
                }
                ExportFormat::Csv => {
                    let g = io::read_graph(&text)?;
                    let rows: Vec<Vec<String>> = g.edges().map(|(u, v)| vec![u.to_string(), v.to_string()]).collect();
                    io::csv_string(&["u", "v"], &rows)?
                }
                ExportFormat::ReportCsv => {
                    let v: Value = serde_json::from_str(&text).map_err(|e| usage(format!("bad report JSON: {e}")))?;
                    report::report_csv(&v)?
                }
            };
            Ok(Output::payload(report, out, payload))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn spec_json(s: &FlipSpec) -> Value {
    json!(s.pairs().map(|(i, j)| [i, j]).collect::<Vec<_>>())
}

fn witness_json(w: &BreakWitness) -> Value {
    json!({
        "set": w.set,
        "partition": w.partition.parts(),
        "spec": spec_json(&w.spec),
        "a1": w.a1,
        "a2": w.a2,
    })
}

fn gen_graph(kind: GenKind, params: &[String], seed: u64) -> flipkit::Result<Graph> {
    let int = |i: usize| -> flipkit::Result<usize> {
        params
            .get(i)
            .ok_or_else(|| usage(format!("{kind:?} needs parameter {}", i + 1)))?
            .parse()
            .map_err(|_| usage(format!("parameter {:?} is not a count", params[i])))
    };
    let arity = match kind {
        GenKind::Grid | GenKind::Gnp => 2,
        _ => 1,
    };
    if params.len() != arity {
        return Err(usage(format!("{kind:?} takes {arity} parameter(s), got {}", params.len())));
    }
    Ok(match kind {
        GenKind::Path => generate::path(int(0)?),
        GenKind::Cycle => generate::cycle(int(0)?)?,
        GenKind::Clique => generate::clique(int(0)?),
        GenKind::Star => generate::star(int(0)?),
        GenKind::Grid => generate::grid(int(0)?, int(1)?),
        GenKind::Hypercube => generate::hypercube(int(0)? as u32)?,
        GenKind::Halfgraph => generate::halfgraph(int(0)?),
        GenKind::Gnp => {
            let p: f64 = params[1].parse().map_err(|_| usage(format!("bad probability {:?}", params[1])))?;
            generate::gnp(int(0)?, p, seed)?
        }
    })
}

fn cmd_gen(kind: GenKind, params: &[String], out: &Option<PathBuf>, seed: u64) -> flipkit::Result<Output> {
    let g = gen_graph(kind, params, seed)?;
    let mut report = RunReport::new("gen")
        .param("kind", format!("{kind:?}").to_lowercase())
        .param("params", params)
        .param("seed", seed);
    report.count("vertices", g.n() as u64);
    report.count("edges", g.edge_count() as u64);
    Ok(Output::payload(report, out, io::write_graph(&g)))
}

fn cmd_diam(path: &Path, bipartite: bool) -> flipkit::Result<Output> {
    let text = read_text(path)?;
    let mut report = RunReport::new("diam").param("graph", path).param("bipartite", bipartite);
    if bipartite {
        let b = io::read_bipartite(&text)?;
        let c = b.complement();
        let case = flipkit::conversion::classify_bipartite(&b)?;
        report.count("vertices", b.n() as u64);
        report.count("edges", b.graph().edge_count() as u64);
        report.details = json!({
            "diameter": b.diameter()?.to_string(),
            "complement_diameter": c.diameter()?.to_string(),
            "connected": b.is_connected(),
            "complement_connected": c.is_connected(),
            "case": case,
        });
    } else {
        let g = io::read_graph(&text)?;
        report.count("vertices", g.n() as u64);
        report.count("edges", g.edge_count() as u64);
        report.details = json!({
            "diameter": g.diameter()?.to_string(),
            "complement_diameter": g.complement().diameter()?.to_string(),
        });
    }
    Ok(Output::report(report))
}

fn cmd_vcdim(path: &Path, max_vertices: usize, out: &Option<PathBuf>) -> flipkit::Result<Output> {
    let g = load_graph(path)?;
    let vc = vc_dimension(&g, max_vertices)?;
    let table = shatter_table(&g, g.n());
    let d = vc.vcdim as u64;
    let rows: Vec<Vec<String>> = table
        .iter()
        .enumerate()
        .map(|(k, pi)| vec![k.to_string(), pi.to_string(), sauer_shelah_bound(k as u64, d).to_string()])
        .collect();
    let witness: Vec<String> = vc.witness.iter().map(ToString::to_string).collect();
    let csv = format!(
        "# vcdim={}\n# witness={}\n{}",
        vc.vcdim,
        witness.join(" "),
        io::csv_string(&["k", "pi", "sauer_shelah_bound"], &rows)?
    );
    let mut report = RunReport::new("vcdim").param("graph", path).param("max_vertices", max_vertices);
    report.count("vcdim", d);
    report.details = json!({ "witness": vc.witness, "pi": table });
    Ok(Output::payload(report, out, csv))
}

fn cmd_dist(
    path: &Path,
    source: &MetricSource,
    pair: (Option<usize>, Option<usize>),
    all_pairs: bool,
    out: &Option<PathBuf>,
    max_parts: usize,
) -> flipkit::Result<Output> {
    let g = load_graph(path)?;
    let metric = FlipMetric::new(&g, max_parts);
    let pairs: Vec<(usize, usize)> = match (pair, all_pairs) {
        ((Some(u), Some(v)), false) => vec![(u, v)],
        ((None, None), true) => (0..g.n()).flat_map(|u| (u + 1..g.n()).map(move |v| (u, v))).collect(),
        _ => return Err(usage("dist needs either `U V` or --all-pairs")),
    };
    for &(u, v) in &pairs {
        if u >= g.n() || v >= g.n() {
            return Err(usage(format!("vertex out of range for n = {}", g.n())));
        }
    }
    let matrix = if let Some(p) = &source.partition {
        let p = io::read_partition(&read_text(p)?, g.n())?;
        metric.all_pairs_partition(&p)?
    } else if let Some(s) = &source.set {
        metric.all_pairs_definable(&io::parse_set(s)?)?
    } else if let Some(f) = &source.family {
        metric.all_pairs_family(&io::read_family(&read_text(f)?)?)?
    } else {
        return Err(usage("dist needs --partition, --set or --family"));
    };
    let rows: Vec<Vec<String>> = pairs
        .iter()
        .map(|&(u, v)| vec![u.to_string(), v.to_string(), matrix[u][v].to_string()])
        .collect();
    let mut report = RunReport::new("dist")
        .param("graph", path)
        .param("partition", &source.partition)
        .param("set", &source.set)
        .param("family", &source.family);
    report.count("pairs", pairs.len() as u64);
    Ok(Output::payload(report, out, io::csv_string(&["u", "v", "dist"], &rows)?))
}

struct ConvertOpts {
    check: bool,
    definable: Option<(u32, usize)>,
    max_parts: usize,
}

fn cmd_convert(g: &Graph, p: &Partition, opts: &ConvertOpts) -> flipkit::Result<(RunReport, Graph, Partition, String)> {
    let (res, emulation) = match opts.definable {
        Some((r_max, s_max)) => {
            let dc = definable_conversion(g, p, r_max, s_max)?;
            (dc.conversion, Some(dc.emulation))
        }
        None => (convert(g, p)?, None),
    };
    let mut report = RunReport::new("convert")
        .param("parts", p.len())
        .param("vertices", g.n())
        .param("check", opts.check)
        .param("definable", opts.definable);
    report.count("parts", p.len() as u64);
    report.count("refined_parts", res.refined.len() as u64);
    report.count("refined_parts_bound", (p.len() as u64) << p.len());
    report.count("flipped_edges", res.flipped.edge_count() as u64);
    let mut details = json!({
        "refined": res.refined.parts(),
        "spec": spec_json(&res.spec),
        "parts": res.parts,
        "pairs": res.pairs,
    });
    report.outcome = Outcome::Ok;
    if opts.check {
        let dp = FlipMetric::new(g, opts.max_parts).all_pairs_partition(p)?;
        match max_stretch(&dp, &res.flipped) {
            Some(r) => {
                details["max_ratio"] = json!(r);
                report.outcome = if r <= 6.0 { Outcome::Pass } else { Outcome::Fail };
            }
            None => report.outcome = Outcome::Fail,
        }
    }
    if let Some(em) = emulation {
        report.count("emulation_sets_tried", em.stats.sets_tried);
        details["emulation"] = match &em.witness {
            Some(w) => json!({ "set": w.set, "partition": w.partition.parts(), "spec": spec_json(&w.spec) }),
            None => Value::Null,
        };
    }
    report.details = details;
    let mut rows: Vec<Vec<String>> = res
        .parts
        .iter()
        .map(|d| {
            vec![
                "part".into(),
                d.part.to_string(),
                if d.flipped { "complement_diameter_gt_3" } else { "complement_diameter_le_3" }.into(),
                d.flipped.to_string(),
                String::new(),
            ]
        })
        .collect();
    rows.extend(res.pairs.iter().map(|d| {
        let blocks: Vec<String> = d.flipped_blocks.iter().map(|(i, j)| format!("{i}{j}")).collect();
        vec![
            "pair".into(),
            format!("{}-{}", d.parts.0, d.parts.1),
            d.case.tag().into(),
            (!d.flipped_blocks.is_empty()).to_string(),
            blocks.join(" "),
        ]
    }));
    let certs = io::csv_string(&["kind", "indices", "case_tag", "flipped", "blocks"], &rows)?;
    Ok((report, res.flipped, res.refined, certs))
}
