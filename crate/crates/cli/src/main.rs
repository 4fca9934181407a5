use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sturmtree::census::{ball_census_with, CensusOptions};
use sturmtree::classify::{self, TypeProfile};
use sturmtree::cover::{ball_size, lift_ball_capped, DEFAULT_CAP};
use sturmtree::graph::{parse_presentation, Presentation};
use sturmtree::verify::{self, Status, VerifyConfig};
use sturmtree::words::{self, InfiniteWord};
use sturmtree::{catalog, export, oracle, Error, Parallelism};

#[derive(Parser)]
#[command(name = "sturmtree", version, about = "Ball censuses of colored regular trees given by quotient presentations")]
struct Cli {
    /// Worker threads for the census; 1 runs sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Largest ball (in nodes) any command may lift.
    #[arg(long, global = true, env = "STURMTREE_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print n, b(n) and the number of special n-balls.
    Census(CensusArgs),
    /// Type sets, Sturmian flag, shape and reconstruction.
    Classify(ClassifyArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
    /// DOT or JSON rendering of a presentation or a lifted ball.
    Export(ExportArgs),
    /// List catalog entries.
    Catalog,
    /// Factor complexity of a mechanical or periodic word, and the census of
    /// its uniform lift.
    Word(WordArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Presentation JSON file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Catalog entry name.
    #[arg(long)]
    example: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
    Dot,
}

#[derive(Args)]
struct CensusArgs {
    #[command(flatten)]
    source: Source,
    #[arg(short = 'n', long = "radius", default_value_t = 8)]
    radius: usize,
    /// Compare against the brute-force oracle.
    #[arg(long, overrides_with = "no_oracle")]
    oracle: bool,
    #[arg(long = "no-oracle")]
    no_oracle: bool,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    source: Source,
    #[arg(short = 'n', long = "radius", default_value_t = 8)]
    radius: usize,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Replace this catalog entry by its corrupted variant.
    #[arg(long)]
    corrupt: Option<String>,
    #[arg(long, overrides_with = "no_oracle")]
    oracle: bool,
    /// Skip the oracle comparisons; they are reported SKIPPED.
    #[arg(long = "no-oracle")]
    no_oracle: bool,
    /// Run only these criteria.
    #[arg(long = "only", value_delimiter = ',')]
    only: Vec<usize>,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    source: Source,
    /// Export the ball around this position instead of the presentation.
    #[arg(long)]
    ball: Option<i64>,
    #[arg(short = 'n', long = "radius", default_value_t = 1)]
    radius: usize,
    #[arg(long, value_enum, default_value_t = Format::Dot)]
    format: Format,
    /// Write here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct WordArgs {
    /// Slope as `p/q` or a continued fraction `[0;1,2,...]`.
    #[arg(long, conflicts_with_all = ["fibonacci", "periodic"])]
    slope: Option<String>,
    /// Fibonacci slope with denominator at least this.
    #[arg(long, conflicts_with = "periodic")]
    fibonacci: Option<i128>,
    /// Periodic block over a-z.
    #[arg(long)]
    periodic: Option<String>,
    #[arg(short = 'n', long = "radius", default_value_t = 6)]
    radius: usize,
    /// Self count, edge index and degree of the uniform lift.
    #[arg(long, num_args = 3, value_names = ["S", "T", "K"], default_values_t = [1, 1, 3])]
    lift: Vec<u32>,
}

/// Errors that carry their own exit code.
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
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::CapExceeded { .. } => 3,
                _ => 2,
            };
        }
        if cause.downcast_ref::<sturmtree::PresentationError>().is_some() || cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
    }
    2
}

struct Ctx {
    opts: CensusOptions,
}

impl Ctx {
    fn load(&self, source: &Source) -> anyhow::Result<Presentation> {
        if let Some(name) = &source.example {
            return catalog::example(name).with_context(|| format!("loading catalog entry {name}"));
        }
        let path = source.input.as_ref().expect("clap enforces one source");
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        parse_presentation(&text).with_context(|| format!("parsing {}", path.display()))
    }

    fn precheck(&self, p: &Presentation, n: usize) -> anyhow::Result<()> {
        let needed = ball_size(p.degree(), n).unwrap_or(u64::MAX);
        if needed > self.opts.cap as u64 {
            return Err(Error::CapExceeded { needed, cap: self.opts.cap }.into());
        }
        Ok(())
    }
}

fn census(ctx: &Ctx, a: &CensusArgs) -> anyhow::Result<String> {
    let p = ctx.load(&a.source)?;
    ctx.precheck(&p, a.radius + 1)?;
    let c = ball_census_with(&p, a.radius, ctx.opts)?;
    if a.oracle && !a.no_oracle {
        let o = oracle::brute_force_census_capped(&p, a.radius, oracle::default_search_radius(&p, a.radius), ctx.opts.cap)?;
        let diff = oracle::compare(&c, &o);
        let (warnings, errors): (Vec<_>, Vec<_>) = diff.iter().partition(|d| d.contains("UNSATURATED"));
        for w in warnings {
            eprintln!("warning: {w}");
        }
        if !errors.is_empty() {
            return Err(Exit(1, format!("oracle disagrees:\n{}", errors.iter().map(|s| s.as_str()).collect::<Vec<_>>().join("\n"))).into());
        }
        eprintln!("oracle agrees through n = {}", a.radius);
    }
    Ok(match a.format {
        Format::Json => serde_json::to_string_pretty(&c.to_json())?,
        Format::Tsv => c.to_tsv(),
        Format::Dot => bail!(Exit(2, "census has no DOT form".into())),
    })
}

fn profile_rows(profiles: &[TypeProfile], p: &Presentation, c: &sturmtree::BallCensus, n: usize) -> String {
    let mut out = String::from("position\tcolor\tmax_type\tcensored\ttype_set\tkey\n");
    for q in profiles {
        let set: Vec<String> = q.type_set.iter().map(|t| t.to_string()).collect();
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            q.position,
            p.color_name(p.vertex(q.position).color),
            q.max_type,
            q.censored,
            if set.is_empty() { "-".into() } else { set.join(",") },
            c.classes(n)[q.class_id as usize].key.short_hex(),
        ));
    }
    out
}

fn classify_cmd(ctx: &Ctx, a: &ClassifyArgs) -> anyhow::Result<String> {
    let p = ctx.load(&a.source)?;
    let n = a.radius;
    ctx.precheck(&p, n + 2)?;
    let c = ball_census_with(&p, n + 1, ctx.opts)?;
    let profiles = classify::profiles_from(&p, &c, n)?;
    let sturmian = classify::is_sturmian_up_to(&c, n);
    let shape = classify::classify_shape(&p);
    let plateau = classify::detect_periodic(&c);
    let rebuilt = match plateau {
        Some(m) if m <= n => Some(classify::reconstruct_from(&p, &c, n)?),
        _ => None,
    };
    let neighbor = classify::neighbor_type_check_from(&p, &c, &profiles, n);
    Ok(match a.format {
        Format::Json => {
            let profiles: Vec<_> = profiles
                .iter()
                .map(|q| {
                    json!({
                        "position": q.position,
                        "type_set": q.type_set,
                        "max_type": q.max_type,
                        "censored": q.censored,
                        "key": c.classes(n)[q.class_id as usize].key.hex(),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&json!({
                "radius": n,
                "sturmian": sturmian,
                "b": c.values()[..=n],
                "shape": serde_json::from_str::<serde_json::Value>(&shape.to_json())?,
                "plateau": plateau,
                "reconstructed": rebuilt.as_ref().map(|q| serde_json::from_str::<serde_json::Value>(&q.to_json()).expect("valid json")),
                "neighbor_violations": neighbor.violations,
                "profiles": profiles,
            }))?
        }
        Format::Tsv => {
            let mut out = String::new();
            out.push_str(&format!("# sturmian\t{sturmian}\n"));
            out.push_str(&format!("# shape\t{}\n", shape.to_json()));
            match (&plateau, &rebuilt) {
                (Some(m), Some(q)) => {
                    out.push_str(&format!("# plateau\t{m}\n"));
                    out.push_str(&format!(
                        "# reconstructed\t{} vertices\t{}\n",
                        q.finite_len().unwrap_or(0),
                        q.to_json()
                    ));
                }
                _ => out.push_str("# plateau\tnone\n"),
            }
            out.push_str(&format!("# neighbor_violations\t{}\n", neighbor.violations.len()));
            out.push_str(&profile_rows(&profiles, &p, &c, n));
            out
        }
        Format::Dot => bail!(Exit(2, "classify has no DOT form".into())),
    })
}

fn verify_cmd(ctx: &Ctx, a: &VerifyArgs) -> anyhow::Result<String> {
    if let Some(name) = &a.corrupt {
        catalog::corrupted(name).with_context(|| format!("no corrupted variant of {name}"))?;
    }
    let cfg = VerifyConfig {
        oracle: !a.no_oracle,
        corrupt: a.corrupt.clone(),
        census: ctx.opts,
    };
    let ids: Vec<usize> = if a.only.is_empty() {
        (1..=verify::TITLES.len()).collect()
    } else {
        a.only.clone()
    };
    let mut failed = Vec::new();
    for id in ids {
        let r = verify::run_criterion(id, &cfg);
        println!("{r}");
        if r.status == Status::Fail {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        Ok("all criteria passed\n".into())
    } else {
        let list: Vec<String> = failed.iter().map(|i| i.to_string()).collect();
        Err(Exit(1, format!("failed criteria: {}", list.join(", "))).into())
    }
}

fn export_cmd(ctx: &Ctx, a: &ExportArgs) -> anyhow::Result<String> {
    let p = ctx.load(&a.source)?;
    let text = match (a.ball, a.format) {
        (None, Format::Dot) => export::presentation_dot(&p),
        (None, Format::Json) => p.to_json_pretty(),
        (Some(pos), f) => {
            let ball = lift_ball_capped(&p, pos, a.radius, ctx.opts.cap)?;
            match f {
                Format::Dot => export::ball_dot(&ball),
                _ => serde_json::to_string_pretty(&export::ball_json(&ball))?,
            }
        }
        (None, Format::Tsv) => bail!(Exit(2, "presentations export as dot or json".into())),
    };
    match &a.output {
        Some(path) => {
            std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn word_cmd(ctx: &Ctx, a: &WordArgs) -> anyhow::Result<String> {
    let w = if let Some(s) = &a.slope {
        InfiniteWord::mechanical(words::parse_slope(s)?, 0.into())?
    } else if let Some(block) = &a.periodic {
        InfiniteWord::periodic(block)?
    } else {
        InfiniteWord::fibonacci(a.fibonacci.unwrap_or(1_000_000))
    };
    let n = a.radius;
    w.check_factor_window(2 * n + 3)?;
    let (s, t, k) = (a.lift[0], a.lift[1], a.lift[2]);
    let lift = words::lift_word_uniform(&w, s, t, k)?;
    ctx.precheck(&lift, n + 1)?;
    let c = ball_census_with(&lift, n, ctx.opts)?;
    let mut out = String::from("n\tp(n)\tb(n)\n");
    for i in 0..=n {
        let p = words::word_complexity(&w, i, 4096)?;
        out.push_str(&format!("{i}\t{p}\t{}\n", c.b(i)));
    }
    Ok(out)
}

fn run(cli: Cli) -> anyhow::Result<String> {
    let mut opts = CensusOptions {
        cap: cli.cap,
        ..CensusOptions::default()
    };
    match cli.jobs {
        Some(0) => bail!(Exit(2, "--jobs must be at least 1".into())),
        Some(1) => opts.parallelism = Parallelism::Sequential,
        Some(_j) => {
            #[cfg(feature = "parallel")]
            rayon::ThreadPoolBuilder::new()
                .num_threads(_j)
                .build_global()
                .context("starting the thread pool")?;
        }
        None => {}
    }
    let ctx = Ctx { opts };
    match &cli.command {
        Command::Census(a) => census(&ctx, a),
        Command::Classify(a) => classify_cmd(&ctx, a),
        Command::Verify(a) => verify_cmd(&ctx, a),
        Command::Export(a) => export_cmd(&ctx, a),
        Command::Catalog => Ok(catalog::NAMES.iter().map(|n| format!("{n}\n")).collect()),
        Command::Word(a) => word_cmd(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
