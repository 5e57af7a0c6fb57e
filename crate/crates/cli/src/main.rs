//! `neardist` command-line front end.
//!
//! Every run writes its outputs into `--output-dir` together with a
//! `manifest.json` recording the command, parameters, files and seed.
//! Exit codes: 0 success, 1 semantic negative (bound exceeded or hypothesis
//! fails), 2 bad input or parameters, 3 point data not in the plane.

mod args;
mod manifest;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use neardist_core::io::{self, PointFormat};
use neardist_core::{
    build_graph, case1_angle_diagnostic, check_hypothesis, count_pairs, diameter, emp1_chain,
    find_tripartite, homogenize, min_pairwise_distance, problem3_chain, random_separated,
    remark2_three_column, two_column, verify_theorem, Case, ConstructionOutput, Error,
    IntervalFamily, PointSet, SearchConfig,
};
use serde_json::{json, Value};

use args::{Cli, Command, Format, Generate};
use manifest::RunManifest;

const SEMANTIC_NEGATIVE: u8 = 1;
const INPUT_ERROR: u8 = 2;
const UNSUPPORTED: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Positive) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(SEMANTIC_NEGATIVE),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::UnsupportedDimension(_) => UNSUPPORTED,
                _ => INPUT_ERROR,
            })
        }
    }
}

enum Outcome {
    Positive,
    Negative,
}

impl Outcome {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Positive
        } else {
            Outcome::Negative
        }
    }
}

/// Collects output files and writes the manifest last.
struct Run<'a> {
    cli: &'a Cli,
    manifest: RunManifest,
}

impl<'a> Run<'a> {
    fn new(cli: &'a Cli, params: Value, inputs: Vec<&Path>) -> Self {
        Run {
            cli,
            manifest: RunManifest::new(cli.command.name(), params, inputs, cli.seed),
        }
    }

    fn write(&mut self, name: &str, contents: &str) -> neardist_core::Result<()> {
        io::write_atomic(&self.cli.output_dir.join(name), contents.as_bytes())?;
        self.manifest.output_paths.push(name.to_string());
        Ok(())
    }

    fn write_json<T: serde::Serialize>(
        &mut self,
        name: &str,
        value: &T,
    ) -> neardist_core::Result<()> {
        self.write(name, &io::to_json_string(value)?)
    }

    fn write_points(&mut self, stem: &str, ps: &PointSet) -> neardist_core::Result<()> {
        let format = match self.cli.format {
            Format::Json => PointFormat::Json,
            Format::Csv => PointFormat::Csv,
        };
        let name = format!("{stem}.{}", format.extension());
        self.write(&name, &io::points_to_string(ps, format)?)
    }

    fn finish(self) -> neardist_core::Result<()> {
        let text = io::to_json_string(&self.manifest)?;
        io::write_atomic(&self.cli.output_dir.join("manifest.json"), text.as_bytes())
    }
}

fn params<T: serde::Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn run(cli: &Cli) -> neardist_core::Result<Outcome> {
    match &cli.command {
        Command::Generate(g) => generate(cli, g),
        Command::Count(a) => {
            let ps = io::read_points(&a.inputs.points)?;
            let iv = io::read_intervals(&a.inputs.intervals)?;
            let report = count_pairs(&ps, &iv, a.method);
            let mut run = Run::new(cli, params(a), vec![&a.inputs.points, &a.inputs.intervals]);
            run.write_json("count_report.json", &report)?;
            run.finish()?;
            println!("n={} total={} method={}", ps.n(), report.total, a.method);
            Ok(Outcome::Positive)
        }
        Command::CheckHypothesis(a) => {
            let iv = io::read_intervals(&a.intervals)?;
            let report = check_hypothesis(&iv, a.delta)?;
            let mut run = Run::new(cli, params(a), vec![&a.intervals]);
            run.write_json("hypothesis_report.json", &report)?;
            run.finish()?;
            println!(
                "k={} delta={} holds={} violations={}",
                iv.k(),
                a.delta,
                report.holds,
                report.violations.len()
            );
            Ok(Outcome::from_bool(report.holds))
        }
        Command::Verify(a) => {
            let ps = io::read_points(&a.inputs.points)?;
            let iv = io::read_intervals(&a.inputs.intervals)?;
            let report = verify_theorem(&ps, &iv, a.delta, a.c)?;
            let mut run = Run::new(cli, params(a), vec![&a.inputs.points, &a.inputs.intervals]);
            run.write_json("verify_report.json", &report)?;
            run.finish()?;
            println!(
                "n={} total={} bound={} within_bound={} hypothesis_holds={}",
                ps.n(),
                report.count.total,
                report.bound_value,
                report.within_bound,
                report.hypothesis.holds
            );
            Ok(Outcome::from_bool(
                report.within_bound && report.hypothesis.holds,
            ))
        }
        Command::Search(a) => search(cli, a),
        Command::Analyze(a) => analyze(cli, a),
        Command::Diameter(a) => {
            let ps = io::read_points(&a.points)?;
            let (min_dist, separated) = min_pairwise_distance(&ps);
            let d = diameter(&ps);
            let body = json!({
                "n": ps.n(),
                "diameter": d,
                "min_distance": min_dist.is_finite().then_some(min_dist),
                "separated": separated,
            });
            let mut run = Run::new(cli, params(a), vec![&a.points]);
            run.write_json("diameter.json", &body)?;
            run.finish()?;
            println!("n={} diameter={d}", ps.n());
            Ok(Outcome::Positive)
        }
    }
}

fn generate(cli: &Cli, g: &Generate) -> neardist_core::Result<Outcome> {
    let out: ConstructionOutput = match *g {
        Generate::TwoColumn { n, k, t, eps } => two_column(n, k, t, eps)?,
        Generate::Remark2 { n, t1, t2 } => remark2_three_column(n, t1, t2)?,
        Generate::Emp1 { n, k, t } => emp1_chain(n, k, t)?,
        Generate::Problem3 { n, k, t } => problem3_chain(n, k, t)?,
        Generate::Random { n, box_side } => {
            let seed = cli.seed.unwrap_or(0);
            let ps = random_separated(n, box_side, seed)?;
            let mut run = Run::new(cli, params(g), vec![]);
            run.manifest.seed = Some(seed);
            run.write_points("points", &ps)?;
            run.write_json(
                "construction.json",
                &json!({
                    "name": "random",
                    "params": {"n": n, "box": box_side, "seed": seed},
                    "predicted_count": null,
                }),
            )?;
            run.finish()?;
            println!("generated random n={n}");
            return Ok(Outcome::Positive);
        }
    };
    let mut run = Run::new(cli, params(g), vec![]);
    run.write_points("points", &out.ps)?;
    run.write_json("intervals.json", &out.iv)?;
    run.write_json("construction.json", &out.sidecar())?;
    run.finish()?;
    println!(
        "generated {} n={} predicted_count={}",
        out.name,
        out.ps.n(),
        out.predicted_count
    );
    Ok(Outcome::Positive)
}

fn search(cli: &Cli, a: &args::SearchArgs) -> neardist_core::Result<Outcome> {
    let mut inputs: Vec<&Path> = Vec::new();
    let initial = match &a.initial {
        Some(path) => {
            inputs.push(path);
            Some(io::read_points(path)?)
        }
        None => None,
    };
    let mut config = match &a.config {
        Some(path) => {
            inputs.push(path);
            let config: SearchConfig = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            config
        }
        None => {
            let iv = match (&a.intervals, &a.t) {
                (Some(path), _) => {
                    inputs.push(path);
                    io::read_intervals(path)?
                }
                (None, Some(t)) => IntervalFamily::new(t.clone(), a.alpha)?,
                (None, None) => {
                    return Err(Error::InvalidInput(
                        "search needs --config, --intervals or --t".into(),
                    ))
                }
            };
            let n = match (a.n, &initial) {
                (Some(n), _) => n,
                (None, Some(ps)) => ps.n(),
                (None, None) => {
                    return Err(Error::InvalidInput("search needs --n or --initial".into()))
                }
            };
            let mut c = SearchConfig::with_defaults(n, iv, a.iterations, 0);
            c.restarts = a.restarts;
            if let Some(v) = a.initial_temperature {
                c.initial_temperature = v;
            }
            if let Some(v) = a.cooling_factor {
                c.cooling_factor = v;
            }
            if let Some(v) = a.jitter_sigma {
                c.jitter_sigma = v;
            }
            if let Some(v) = a.teleport_probability {
                c.teleport_probability = v;
            }
            c
        }
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let result = neardist_core::anneal(&config, initial.as_ref())?;

    let mut trajectory = csv::Writer::from_writer(Vec::new());
    for sample in &result.trajectory {
        trajectory.serialize(sample)?;
    }
    let trajectory = String::from_utf8(trajectory.into_inner().map_err(|e| e.into_error())?)
        .expect("csv output is utf-8");

    let mut run = Run::new(cli, params(a), inputs);
    run.manifest.seed = Some(config.seed);
    run.write_points("best_points", &result.best_ps)?;
    run.write_json(
        "search_summary.json",
        &json!({
            "config": config,
            "best_count": result.best_count,
            "accepted_moves": result.accepted_moves,
            "rejected_moves": result.rejected_moves,
        }),
    )?;
    run.write("trajectory.csv", &trajectory)?;
    run.finish()?;
    println!(
        "n={} best_count={} iterations={}",
        config.n, result.best_count, config.iterations
    );
    Ok(Outcome::Positive)
}

fn analyze(cli: &Cli, a: &args::AnalyzeArgs) -> neardist_core::Result<Outcome> {
    let ps = io::read_points(&a.inputs.points)?;
    let iv = io::read_intervals(&a.inputs.intervals)?;
    let m = a.m.unwrap_or(a.s);
    if a.s == 0 || m == 0 || m > a.s {
        return Err(Error::Precondition(format!(
            "need 1 <= m <= s, got s={} m={m}",
            a.s
        )));
    }
    // Validates delta up front, even when no witness exists.
    neardist_core::proof_constants(a.delta)?;
    let g = build_graph(&ps, &iv);
    let body = match find_tripartite(&g, a.s) {
        None => json!({"status": "none", "s": a.s, "m": m, "edges": g.edge_count()}),
        Some(w) => {
            let h = homogenize(&g, &w, m);
            let mut diagnostics = Vec::new();
            if let Some(h) = h.as_ref().filter(|h| h.case() == Case::CaseI) {
                for &y in &h.b2 {
                    for &z in &h.d2 {
                        diagnostics.push(case1_angle_diagnostic(&ps, [w.x, y, z], &iv, a.delta)?);
                    }
                }
            }
            json!({
                "status": "found",
                "s": a.s,
                "m": m,
                "edges": g.edge_count(),
                "x": w.x,
                "B": w.b,
                "D": w.d,
                "B2": h.as_ref().map(|h| &h.b2),
                "D2": h.as_ref().map(|h| &h.d2),
                "labels": h.as_ref().map(|h| json!({"xy": h.l_xy, "xz": h.l_xz, "yz": h.l_yz})),
                "case": h.as_ref().map(|h| h.case()),
                "angle_diagnostics": diagnostics,
            })
        }
    };
    let mut run = Run::new(cli, params(a), vec![&a.inputs.points, &a.inputs.intervals]);
    run.write_json("analysis.json", &body)?;
    run.finish()?;
    println!(
        "status={} edges={}",
        body["status"].as_str().unwrap_or(""),
        g.edge_count()
    );
    Ok(Outcome::Positive)
}
