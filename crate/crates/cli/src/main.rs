mod params;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use bwtraj_core::eval::default_interval;
use bwtraj_core::ingest::{burst_fixture, synth, write_trajectories, Dataset, MotionModel, Schema, SynthSpec};
use bwtraj_core::{
    accuracy, compare, window_histogram, AlgorithmKind, CompareOptions, Error, ErrorClass, ImpSign,
    Predictor, RatioPlan, Result, Sample, Samples, Trajectories, WindowConfig,
};

use params::{AlgoArgs, DEFAULT_DELTA};

#[derive(Parser, Debug)]
#[command(name = "bwtraj", version, about = "Trajectory compression under per-window bandwidth limits")]
struct Cli {
    /// Directory searched for relative input paths that do not exist in
    /// the working directory.
    #[arg(long, global = true, env = "BWTRAJ_DATA_DIR")]
    data_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compress a CSV dataset; writes the kept input rows.
    Compress {
        #[command(flatten)]
        algo: AlgoArgs,
        #[command(flatten)]
        io: Io,
    },
    /// Mean synchronized distance between a dataset and a compressed copy.
    Evaluate {
        #[command(flatten)]
        io: Io,
        /// Output of `compress` for the same input.
        #[arg(long)]
        sample: PathBuf,
        /// Seconds between evaluation instants; defaults to the smallest
        /// per-trajectory median sampling gap.
        #[arg(long)]
        interval: Option<f64>,
    },
    /// Count points per time window.
    Histogram {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
        /// Defaults to the first timestamp in the input.
        #[arg(long)]
        start: Option<f64>,
        /// Cap to report violations against.
        #[arg(long)]
        bw: Option<usize>,
    },
    /// Run several algorithms at one target ratio and tabulate the results.
    Bench(BenchArgs),
    /// Write a synthetic dataset.
    Synth(SynthArgs),
}

#[derive(clap::Args, Debug)]
struct Io {
    #[arg(long)]
    input: PathBuf,
    /// Defaults to standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// TOML column mapping; defaults to `id,ts,x,y,sog,cog`.
    #[arg(long)]
    schema: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct BenchArgs {
    /// Dataset to use; without it a synthetic burst dataset is generated.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    schema: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    ratio: f64,
    /// Comma-separated algorithm names, or `all`.
    #[arg(long, default_value = "all")]
    algos: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    interval: Option<f64>,
    #[arg(long)]
    precision: Option<f64>,
    #[arg(long)]
    predictor: Option<Predictor>,
    #[arg(long)]
    imp_sign: Option<ImpSign>,
    /// Include wall-clock times (makes the report vary between runs).
    #[arg(long)]
    timing: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Format {
    Csv,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum Model {
    ConstantVelocity,
    RandomWalk,
    SquareWave,
    Burst,
    Mixed,
}

#[derive(clap::Args, Debug)]
struct SynthArgs {
    #[arg(long, value_enum, default_value_t = Model::Burst)]
    model: Model,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    trajectories: Option<usize>,
    /// Seconds.
    #[arg(long)]
    duration: Option<f64>,
    /// Mean seconds between points.
    #[arg(long)]
    period: Option<f64>,
    #[arg(long)]
    jitter: Option<f64>,
    /// Mean speed in m/s.
    #[arg(long)]
    speed: Option<f64>,
    /// Seconds between turns for square-wave and mixed.
    #[arg(long, default_value_t = 120.0)]
    leg: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

impl SynthArgs {
    fn spec(&self) -> SynthSpec {
        let mut spec = match self.model {
            Model::Burst => burst_fixture(),
            m => {
                let model = match m {
                    Model::ConstantVelocity => MotionModel::ConstantVelocity,
                    Model::RandomWalk => MotionModel::RandomWalk,
                    Model::SquareWave => MotionModel::SquareWave { leg: self.leg },
                    _ => MotionModel::Mixed { leg: self.leg },
                };
                SynthSpec::new(20, 3_600.0, 10.0, model)
            }
        };
        if let Some(v) = self.trajectories {
            spec.trajectories = v;
        }
        if let Some(v) = self.duration {
            spec.duration = v;
        }
        if let Some(v) = self.period {
            spec.period = v;
        }
        if let Some(v) = self.jitter {
            spec.jitter = v;
        }
        if let Some(v) = self.speed {
            spec.speed = v;
        }
        spec
    }
}

fn resolve_input(path: &Path, data_dir: Option<&Path>) -> PathBuf {
    match data_dir {
        Some(dir) if path.is_relative() && !path.exists() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

fn load_schema(path: Option<&Path>) -> Result<Schema> {
    match path {
        Some(p) => Schema::from_file(p),
        None => Ok(Schema::native()),
    }
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (a.canonicalize(), b.canonicalize()) {
        (Ok(x), Ok(y)) => x == y,
        _ => false,
    }
}

/// Runs `f` against the output file, or standard output.
fn with_output<F>(path: Option<&Path>, inputs: &[&Path], f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match path {
        Some(p) if p.as_os_str() != "-" => {
            if inputs.iter().any(|i| same_file(i, p)) {
                return Err(Error::Config(format!("output {} would overwrite an input", p.display())));
            }
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        _ => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn echo(config: serde_json::Value) {
    eprintln!("{config}");
}

fn display(p: &Option<PathBuf>) -> String {
    p.as_ref().map_or_else(|| "-".into(), |p| p.display().to_string())
}

fn run(cli: Cli) -> Result<()> {
    let data_dir = cli.data_dir.as_deref();
    match cli.command {
        Command::Compress { algo, io } => {
            let input = resolve_input(&io.input, data_dir);
            let schema = load_schema(io.schema.as_deref())?;
            // reject unknown names before reading a large file
            algo.kind()?;
            let data = Dataset::from_path(&input, &schema, None)?;
            let alg = algo.resolve(&data.trajectories)?;
            echo(json!({
                "command": "compress",
                "input": input.display().to_string(),
                "output": display(&io.output),
                "schema": schema,
                "projection": data.projection,
                "config": alg,
            }));
            let samples = alg.run(&data.trajectories)?;
            with_output(io.output.as_deref(), &[&input], |w| data.write_samples(&samples, w))
        }
        Command::Evaluate { io, sample, interval } => {
            let input = resolve_input(&io.input, data_dir);
            let sample_path = resolve_input(&sample, data_dir);
            let schema = load_schema(io.schema.as_deref())?;
            let original = Dataset::from_path(&input, &schema, None)?;
            // project the sample exactly like the original
            let kept = Dataset::from_path(&sample_path, &schema, original.projection)?;
            let samples: Samples = kept
                .trajectories
                .into_iter()
                .map(|(id, t)| (id, Sample::new(id, t.into_points())))
                .collect();
            let interval = match interval {
                Some(i) => i,
                None => default_interval(&original.trajectories).ok_or(Error::EmptyInput)?,
            };
            echo(json!({
                "command": "evaluate",
                "input": input.display().to_string(),
                "sample": sample_path.display().to_string(),
                "output": display(&io.output),
                "schema": schema,
                "projection": original.projection,
                "interval": interval,
            }));
            let report = accuracy(&original.trajectories, &samples, interval)?;
            with_output(io.output.as_deref(), &[&input, &sample_path], |w| report.write_csv(w))
        }
        Command::Histogram { io, delta, start, bw } => {
            let input = resolve_input(&io.input, data_dir);
            let schema = load_schema(io.schema.as_deref())?;
            let data = Dataset::from_path(&input, &schema, None)?;
            let start = match start {
                Some(s) => s,
                None => bwtraj_core::algorithm::time_span(&data.trajectories)
                    .ok_or(Error::EmptyInput)?
                    .0,
            };
            // bw only labels violations; usize::MAX when not given
            let cfg = WindowConfig::new(bw.unwrap_or(usize::MAX), delta, start)?;
            echo(json!({
                "command": "histogram",
                "input": input.display().to_string(),
                "output": display(&io.output),
                "schema": schema,
                "delta": delta,
                "start": start,
                "bw": bw,
            }));
            let samples: Samples = data
                .trajectories
                .into_iter()
                .map(|(id, t)| (id, Sample::new(id, t.into_points())))
                .collect();
            let h = window_histogram(&samples, &cfg, None);
            if let Some(b) = bw {
                eprintln!("{} of {} windows above {b}; busiest {}", h.violations(), h.counts.len(), h.max());
            }
            with_output(io.output.as_deref(), &[&input], |w| h.write_csv(w))
        }
        Command::Bench(args) => bench(args, data_dir),
        Command::Synth(args) => {
            let spec = args.spec();
            echo(json!({
                "command": "synth",
                "seed": args.seed,
                "spec": spec,
                "output": display(&args.output),
            }));
            let data = synth(args.seed, &spec)?;
            with_output(args.output.as_deref(), &[], |w| write_trajectories(&data, w))
        }
    }
}

fn bench(args: BenchArgs, data_dir: Option<&Path>) -> Result<()> {
    let kinds = AlgorithmKind::parse_list(&args.algos)?;
    let (data, source): (Trajectories, serde_json::Value) = match &args.input {
        Some(p) => {
            let input = resolve_input(p, data_dir);
            let schema = load_schema(args.schema.as_deref())?;
            let d = Dataset::from_path(&input, &schema, None)?;
            (d.trajectories, json!({ "input": input.display().to_string(), "schema": schema }))
        }
        None => {
            let spec = burst_fixture();
            (synth(args.seed, &spec)?, json!({ "synth": spec, "seed": args.seed }))
        }
    };
    let mut plan = RatioPlan::new(args.ratio, args.delta);
    plan.start = args.start;
    plan.predictor = args.predictor.unwrap_or_default();
    plan.precision = args.precision;
    plan.sign = args.imp_sign.unwrap_or_default();
    let algorithms = kinds
        .iter()
        .map(|k| plan.derive(*k, &data))
        .collect::<Result<Vec<_>>>()?;
    let opts = CompareOptions {
        interval: args.interval,
        window: plan.window_for(&data)?,
        timing: args.timing,
    };
    echo(json!({
        "command": "bench",
        "data": source,
        "ratio": args.ratio,
        "options": opts,
        "algorithms": algorithms,
        "output": display(&args.output),
    }));
    let report = compare(&data, &algorithms, &opts)?;
    let inputs: Vec<&Path> = args.input.as_deref().into_iter().collect();
    with_output(args.output.as_deref(), &inputs, |w| match args.format {
        Format::Csv => report.write_csv(w),
        Format::Text => Ok(write!(w, "{report}")?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Usage => 2,
                ErrorClass::Data => 3,
                ErrorClass::Internal => 4,
            })
        }
    }
}
