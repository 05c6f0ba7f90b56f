use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use quic::embed::{embed_exact, truncate_head, EmbeddingRecord};
use quic::experiments::{
    self as exp, compare_pair, default_family_pairs, parse_grid, reps_instance_set, BroomStudy, CfiCampaign,
    CfiOutcome, ExhaustiveOptions, ExperimentConfig, ExperimentKind, SamplingConfig, SweepAxis, SweepInstances,
};
use quic::graph::{from_edge_list, generate, FamilySpec};
use quic::noise::NoiseSpec;
use quic::qsim::CircuitParams;
use quic::sampling::sample_counts;
use quic::{cfi, qsim, Graph};

#[derive(Parser)]
#[command(
    name = "quic",
    version,
    about = "Training-free quantum graph embeddings and their validation suites"
)]
struct Cli {
    /// Global seed; every stochastic step derives from it.
    #[arg(long, env = "QUIC_SEED", default_value_t = 0, global = true)]
    seed: u64,
    /// Write the JSON artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone, Copy)]
struct CircuitArgs {
    #[arg(long, default_value_t = CircuitParams::CANONICAL.theta_enc)]
    theta_enc: f64,
    #[arg(long, default_value_t = CircuitParams::CANONICAL.theta_ent)]
    theta_ent: f64,
    #[arg(long, default_value_t = CircuitParams::CANONICAL.theta_mix)]
    theta_mix: f64,
    /// Entangler/mixer repetitions (default 2; 1 for exhaustive validation).
    #[arg(long)]
    reps: Option<usize>,
}

impl CircuitArgs {
    fn params(&self, default_reps: usize) -> CircuitParams {
        CircuitParams {
            theta_enc: self.theta_enc,
            theta_ent: self.theta_ent,
            theta_mix: self.theta_mix,
            reps: self.reps.unwrap_or(default_reps),
        }
    }
}

#[derive(Args, Clone, Copy)]
struct ShotArgs {
    /// Shots per full histogram.
    #[arg(long, default_value_t = 1 << 15)]
    shots: u64,
    /// Shots per subsample.
    #[arg(long, default_value_t = 1 << 12)]
    subsample: u64,
    /// Null and signal repeats.
    #[arg(long, default_value_t = 64)]
    repeats: usize,
    /// Head length; 0 compares untruncated distributions.
    #[arg(long, default_value_t = 100)]
    head: usize,
}

impl ShotArgs {
    fn sampling(&self) -> SamplingConfig {
        SamplingConfig {
            shots: self.shots,
            subsample: self.subsample,
            repeats: self.repeats,
            head: self.head,
            threshold: 3.0,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Embed one graph (exact, or sampled with --shots).
    Embed {
        /// Graph file (.json or edge list) or family spec such as `path:6`.
        graph: String,
        #[command(flatten)]
        circuit: CircuitArgs,
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, default_value_t = 100)]
        head: usize,
    },
    /// Exact distances and the null/signal z-test for two graphs.
    Compare {
        a: String,
        b: String,
        #[command(flatten)]
        circuit: CircuitArgs,
        #[command(flatten)]
        shot: ShotArgs,
        /// Noise spec JSON file: {"p1": .., "p2": .., "p_ro": ..}.
        #[arg(long)]
        noise: Option<PathBuf>,
    },
    /// CFI pairs: build, optionally write them out, and test separation.
    Cfi {
        /// Base graph family spec; repeatable.
        #[arg(long, required = true)]
        base: Vec<String>,
        /// Directory for the constructed graphs.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        rep_list: Vec<usize>,
        #[arg(long, default_value_t = qsim::DEFAULT_MAX_QUBITS)]
        max_qubits: usize,
        #[arg(long)]
        noise: Option<PathBuf>,
        #[command(flatten)]
        circuit: CircuitArgs,
        #[command(flatten)]
        shot: ShotArgs,
    },
    /// Exhaustive small-graph suite or the family rewiring suite.
    Validate {
        /// Enumerate all graphs up to this order.
        #[arg(long, conflicts_with = "families")]
        exhaustive: Option<usize>,
        /// Run the ER/BA rewiring and structured family pairs.
        #[arg(long)]
        families: bool,
        /// Also run the finite-shot test on every exhaustive pair.
        #[arg(long)]
        with_shots: bool,
        #[arg(long)]
        keep_pairs: bool,
        #[arg(long)]
        noise: Option<PathBuf>,
        #[command(flatten)]
        circuit: CircuitArgs,
        #[command(flatten)]
        shot: ShotArgs,
    },
    /// Broom study: marginal distance and null threshold per cutoff.
    Broom {
        #[arg(long, default_value_t = 17)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        pendants: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        rep_list: Vec<usize>,
        #[arg(long, default_value_t = 1 << 20)]
        reference_shots: u64,
        #[arg(long, default_value_t = 1 << 12)]
        subsample: u64,
        #[arg(long, default_value_t = 256)]
        repeats: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        circuit: CircuitArgs,
    },
    /// One-axis parameter sweep.
    Sweep {
        #[arg(long)]
        axis: String,
        /// `start:stop:step` or a comma list.
        #[arg(long)]
        grid: String,
        /// CFI bases for the angle axes (ignored for reps).
        #[arg(long, default_values_t = ["path:4".to_string(), "star:4".to_string()])]
        base: Vec<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        circuit: CircuitArgs,
        #[command(flatten)]
        shot: ShotArgs,
    },
    /// The regular and strongly regular hard pairs.
    Srg {
        #[arg(long)]
        noise: Option<PathBuf>,
        #[command(flatten)]
        circuit: CircuitArgs,
        #[command(flatten)]
        shot: ShotArgs,
    },
    /// z against subsample size for two graphs.
    Shots {
        a: String,
        b: String,
        #[arg(long, value_delimiter = ',', default_value = "64,128,256,512,1024,2048,4096,8192")]
        grid: Vec<u64>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        circuit: CircuitArgs,
        #[command(flatten)]
        shot: ShotArgs,
    },
    /// Noisy exact separation of two graphs as each noise parameter is scaled.
    NoiseScan {
        a: String,
        b: String,
        /// JSON noise spec for the base point (defaults to 1e-4, 5e-3, 1e-2).
        #[arg(long)]
        noise: Option<PathBuf>,
        #[arg(long, default_value_t = 4.0)]
        factor: f64,
        #[arg(long, default_value_t = 2000)]
        trajectories: usize,
        #[arg(long, default_value_t = 20)]
        repetitions: usize,
        #[command(flatten)]
        circuit: CircuitArgs,
    },
    /// Sorted head profile of one graph.
    Profile {
        graph: String,
        #[arg(long, default_value_t = 100)]
        head: usize,
        /// Shot count for the 5% Poisson resolution floor.
        #[arg(long, default_value_t = 1 << 12)]
        shots: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        circuit: CircuitArgs,
    },
}

fn load_graph(s: &str) -> Result<Graph> {
    let path = Path::new(s);
    if path.exists() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {s}"))?;
        return if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).with_context(|| format!("parsing {s}"))
        } else {
            from_edge_list(&text).with_context(|| format!("parsing {s}"))
        };
    }
    let spec: FamilySpec = s
        .parse()
        .with_context(|| format!("{s:?} is neither a file nor a family spec"))?;
    Ok(generate(&spec)?)
}

fn load_noise(path: &Option<PathBuf>) -> Result<Option<NoiseSpec>> {
    let Some(path) = path else { return Ok(None) };
    let spec: NoiseSpec = serde_json::from_str(&fs::read_to_string(path)?)
        .with_context(|| format!("parsing noise spec {}", path.display()))?;
    spec.validate()?;
    Ok(Some(spec))
}

struct Run {
    seed: u64,
    out: Option<PathBuf>,
}

impl Run {
    fn config(&self, kind: ExperimentKind, params: CircuitParams, sampling: SamplingConfig) -> ExperimentConfig {
        ExperimentConfig {
            params,
            sampling,
            output: self.out.clone(),
            ..ExperimentConfig::new(kind, self.seed)
        }
    }

    fn emit<T: Serialize>(&self, config: &ExperimentConfig, results: &T) -> Result<()> {
        match &self.out {
            Some(path) => exp::write_artifact(path, config, results)?,
            None => {
                let artifact = exp::Artifact {
                    config: config.clone(),
                    results,
                };
                let mut out = std::io::stdout().lock();
                let written = serde_json::to_writer_pretty(&mut out, &artifact)
                    .map_err(std::io::Error::from)
                    .and_then(|_| writeln!(out));
                match written {
                    Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                    other => other?,
                }
            }
        }
        Ok(())
    }
}

fn summary(c: &exp::PairComparison) {
    match &c.separation {
        Some(r) => eprintln!("{}\texact_l1={:.3e}", r.summary_line(&c.id), c.exact_l1),
        None => eprintln!("{}\tqubits={}\texact_l1={:.3e}", c.id, c.qubits.0, c.exact_l1),
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let run = Run {
        seed: cli.seed,
        out: cli.out,
    };
    match cli.cmd {
        Command::Embed {
            graph,
            circuit,
            shots,
            head,
        } => {
            let g = load_graph(&graph)?;
            let params = circuit.params(2);
            let exact = embed_exact(&g, &params)?;
            let d = match shots {
                Some(n) => {
                    let p = qsim::output_distribution(&qsim::run_circuit(&g, &params)?);
                    sample_counts(&p, n, run.seed)?.sorted()
                }
                None => exact,
            };
            let record = EmbeddingRecord::new(&g, params, shots, &truncate_head(&d, head));
            let mut cfg = run.config(
                ExperimentKind::Embed,
                params,
                SamplingConfig {
                    head,
                    ..Default::default()
                },
            );
            cfg.extra = json!({ "graph": graph });
            run.emit(&cfg, &record)?;
        }
        Command::Compare {
            a,
            b,
            circuit,
            shot,
            noise,
        } => {
            let (ga, gb) = (load_graph(&a)?, load_graph(&b)?);
            let noise = load_noise(&noise)?;
            let params = circuit.params(2);
            let c = compare_pair(
                format!("{a}|{b}"),
                &ga,
                &gb,
                &params,
                &shot.sampling(),
                noise.as_ref(),
                true,
                run.seed,
            )?;
            summary(&c);
            let mut cfg = run.config(ExperimentKind::Compare, params, shot.sampling());
            cfg.noise = noise;
            cfg.extra = json!({ "a": a, "b": b });
            run.emit(&cfg, &c)?;
        }
        Command::Cfi {
            base,
            emit,
            rep_list,
            max_qubits,
            noise,
            circuit,
            shot,
        } => {
            let bases = base
                .iter()
                .map(|s| s.parse::<FamilySpec>().with_context(|| format!("base {s:?}")))
                .collect::<Result<Vec<_>>>()?;
            if let Some(dir) = &emit {
                fs::create_dir_all(dir)?;
                for spec in &bases {
                    let pair = cfi::build_cfi(&generate(spec)?, None)?;
                    let file = dir.join(format!("cfi_{}.json", spec.to_string().replace([':', ','], "_")));
                    fs::write(&file, serde_json::to_string_pretty(&pair)?)?;
                    eprintln!("wrote {}", file.display());
                }
            }
            let campaign = CfiCampaign {
                bases: bases.clone(),
                reps: rep_list,
                max_qubits,
                noise: load_noise(&noise)?,
                ..Default::default()
            };
            let params = circuit.params(2);
            let entries = exp::run_cfi_campaign(&campaign, &params, &shot.sampling(), run.seed)?;
            for e in &entries {
                match &e.outcome {
                    CfiOutcome::Skipped { ceiling } => {
                        eprintln!("cfi({})\tqubits={}\tskipped (ceiling {ceiling})", e.base, e.qubits)
                    }
                    CfiOutcome::Ran { runs, .. } => runs.iter().for_each(|r| summary(&r.comparison)),
                }
            }
            let mut cfg = run.config(ExperimentKind::Cfi, params, shot.sampling());
            cfg.families = bases;
            cfg.noise = campaign.noise;
            cfg.extra = serde_json::to_value(&campaign)?;
            run.emit(&cfg, &entries)?;
        }
        Command::Validate {
            exhaustive,
            families,
            with_shots,
            keep_pairs,
            noise,
            circuit,
            shot,
        } => {
            if let Some(max_n) = exhaustive {
                let params = circuit.params(1);
                let opts = ExhaustiveOptions { with_shots, keep_pairs };
                let r = exp::run_validate_exhaustive(max_n, &params, &shot.sampling(), &opts, run.seed)?;
                for s in &r.sizes {
                    eprintln!(
                        "n={}\tgraphs={}\tpairs={}\tseparated={}\tmin_l1={:?}",
                        s.n, s.graphs, s.pairs, s.separated, s.min_l1
                    );
                }
                let mut cfg = run.config(ExperimentKind::ValidateExhaustive, params, shot.sampling());
                cfg.extra = json!({ "max_n": max_n, "options": opts });
                run.emit(&cfg, &r)?;
            } else if families {
                let params = circuit.params(2);
                let noise = load_noise(&noise)?;
                let pairs = default_family_pairs(run.seed)?;
                let r = exp::run_validate_families(&pairs, &params, &shot.sampling(), noise.as_ref(), run.seed)?;
                r.pairs.iter().for_each(summary);
                let mut cfg = run.config(ExperimentKind::ValidateFamilies, params, shot.sampling());
                cfg.noise = noise;
                run.emit(&cfg, &r)?;
            } else {
                bail!("choose --exhaustive N or --families");
            }
        }
        Command::Broom {
            n,
            pendants,
            rep_list,
            reference_shots,
            subsample,
            repeats,
            csv,
            circuit,
        } => {
            let study = BroomStudy {
                n,
                pendants,
                reps: rep_list,
                reference_shots,
                subsample,
                repeats,
                ..Default::default()
            };
            let params = circuit.params(2);
            let r = exp::run_broom_study(&study, &params, run.seed)?;
            for c in &r.crossings {
                eprintln!("reps={}\tcrossing={:?}", c.reps, c.retained);
            }
            if let Some(path) = csv {
                exp::write_csv(&path, &r.rows)?;
            }
            let mut cfg = run.config(
                ExperimentKind::Broom,
                params,
                SamplingConfig {
                    subsample,
                    repeats,
                    head: 0,
                    ..Default::default()
                },
            );
            cfg.extra = serde_json::to_value(&study)?;
            run.emit(&cfg, &r)?;
        }
        Command::Sweep {
            axis,
            grid,
            base,
            csv,
            circuit,
            shot,
        } => {
            let axis: SweepAxis = axis.parse()?;
            let grid = parse_grid(&grid)?;
            let params = circuit.params(2);
            let instances = if axis == SweepAxis::Reps {
                SweepInstances::Sets(reps_instance_set(run.seed)?)
            } else {
                let pairs = base
                    .iter()
                    .map(|s| {
                        let pair = cfi::build_cfi(&generate(&s.parse()?)?, None)?;
                        Ok((format!("cfi({s})"), pair.untwisted, pair.twisted))
                    })
                    .collect::<Result<Vec<_>>>()?;
                SweepInstances::Pairs(pairs)
            };
            let rows = exp::run_sweep(axis, &grid, &instances, &params, &shot.sampling(), run.seed)?;
            for r in &rows {
                eprintln!(
                    "{}={}\t{}\trank={}\tmean_z={:?}\tmean_tv={:?}",
                    r.axis, r.value, r.family, r.rank, r.mean_z, r.mean_tv
                );
            }
            if let Some(path) = csv {
                exp::write_csv(&path, &rows)?;
            }
            let mut cfg = run.config(ExperimentKind::Sweep, params, shot.sampling());
            cfg.extra = json!({ "axis": axis, "grid": grid, "bases": base });
            run.emit(&cfg, &rows)?;
        }
        Command::Srg { noise, circuit, shot } => {
            let params = circuit.params(2);
            let noise = load_noise(&noise)?;
            let r = exp::run_srg_suite(&params, &shot.sampling(), noise.as_ref(), run.seed)?;
            r.iter().for_each(summary);
            let mut cfg = run.config(ExperimentKind::SrgSuite, params, shot.sampling());
            cfg.noise = noise;
            run.emit(&cfg, &r)?;
        }
        Command::Shots {
            a,
            b,
            grid,
            csv,
            circuit,
            shot,
        } => {
            let (ga, gb) = (load_graph(&a)?, load_graph(&b)?);
            let params = circuit.params(2);
            let rows = exp::run_shot_scaling(&ga, &gb, &params, &grid, &shot.sampling(), run.seed)?;
            if let Some(path) = csv {
                exp::write_csv(&path, &rows)?;
            }
            let mut cfg = run.config(ExperimentKind::ShotScaling, params, shot.sampling());
            cfg.extra = json!({ "a": a, "b": b, "grid": grid });
            run.emit(&cfg, &rows)?;
        }
        Command::NoiseScan {
            a,
            b,
            noise,
            factor,
            trajectories,
            repetitions,
            circuit,
        } => {
            let (ga, gb) = (load_graph(&a)?, load_graph(&b)?);
            let params = circuit.params(2);
            let mut scan = exp::NoiseScan {
                factor,
                trajectories,
                repetitions,
                ..Default::default()
            };
            if let Some(spec) = load_noise(&noise)? {
                scan.base = spec;
            }
            let report = exp::run_noise_scan(&ga, &gb, &params, &scan, run.seed)?;
            eprintln!(
                "{a}|{b}\tnoiseless={:.3e}\tviolations={:.1}%",
                report.noiseless_separation,
                100.0 * report.violation_rate
            );
            let mut cfg = run.config(ExperimentKind::NoiseScan, params, SamplingConfig::default());
            cfg.noise = Some(scan.base);
            cfg.extra = json!({ "a": a, "b": b, "scan": scan });
            run.emit(&cfg, &report)?;
        }
        Command::Profile {
            graph,
            head,
            shots,
            csv,
            circuit,
        } => {
            let g = load_graph(&graph)?;
            let params = circuit.params(2);
            let rows = exp::run_head_profile(&g, &params, head, shots)?;
            if let Some(path) = csv {
                exp::write_csv(&path, &rows)?;
            }
            let mut cfg = run.config(
                ExperimentKind::HeadProfile,
                params,
                SamplingConfig {
                    head,
                    shots,
                    ..Default::default()
                },
            );
            cfg.extra = json!({ "graph": graph });
            run.emit(&cfg, &rows)?;
        }
    }
    Ok(())
}
