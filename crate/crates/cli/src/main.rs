//! `xab`: batch front end for the `xab-core` toolkit.
//!
//! Exit status: 0 on success, 1 when an input violates a precondition,
//! 2 when a verification verdict fails, 64 on usage errors.

use std::io::{self, Read, Write};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use xab_core::empirical::{
    empirical_measure, fourier_average, invariance_defect, semiequidist_profile, CircleArc,
    MapChoice, Target, DEFAULT_EQUIDIST_TOLERANCE, DEFAULT_FOURIER_ORDER,
};
use xab_core::entropy::{
    block_entropy_estimate, count_r, growth_profile, itinerary_choices, kt_bound, q_bound,
};
use xab_core::irregular::{synthesize_point, verify_irregular, IrregularRecipe, SynthesisInputs};
use xab_core::moran::{
    box_counting_estimate, moran_dims, rational_from_str, realize_intervals, MoranStructure,
    DEFAULT_INTERVAL_BUDGET,
};
use xab_core::numtheory::mult_indep_check;
use xab_core::{orbit_grid, DigitWord, TorusPoint};

/// Environment variable fixing the worker thread count.
const THREADS_VAR: &str = "XAB_THREADS";

const EXIT_PRECONDITION: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "xab",
    version,
    about = "Orbits of the times-a, times-b action on the circle"
)]
struct Cli {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for randomized steps, echoed in the output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Pair {
    #[arg(short = 'a', default_value_t = 2)]
    a: u64,
    #[arg(short = 'b', default_value_t = 3)]
    b: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The N x N grid a^m b^n x as exact rationals.
    Orbit {
        #[command(flatten)]
        pair: Pair,
        #[arg(short = 'x')]
        x: String,
        #[arg(short = 'N')]
        n: usize,
    },
    /// Histogram and Fourier coefficients of the N-empirical measure.
    Empirical {
        #[command(flatten)]
        pair: Pair,
        #[arg(short = 'x')]
        x: String,
        #[arg(short = 'N')]
        n: usize,
        /// Histogram cells.
        #[arg(short = 'd', default_value_t = 10)]
        d: usize,
        /// Highest Fourier mode.
        #[arg(short = 'K', default_value_t = DEFAULT_FOURIER_ORDER)]
        order: usize,
    },
    /// Fourier average at frequency k and its invariance defects, per horizon.
    Fourier {
        #[command(flatten)]
        pair: Pair,
        #[arg(short = 'x')]
        x: String,
        #[arg(short = 'k', default_value_t = 1, allow_negative_numbers = true)]
        k: i64,
        #[arg(short = 'N')]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        horizons: Vec<usize>,
    },
    /// Dimension bounds s1, s2 of a Moran structure.
    MoranDim {
        /// e.g. "n=2,4;c=1/4 periodic" or a JSON object.
        #[arg(long)]
        spec: String,
        /// Levels scanned for explicit structures.
        #[arg(short = 'K')]
        levels: Option<usize>,
    },
    /// Box-counting slope of a realized Moran structure.
    BoxDim {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        depth: usize,
        /// Box sizes as p/q.
        #[arg(long, value_delimiter = ',', required = true)]
        scales: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_INTERVAL_BUDGET)]
        budget: u64,
    },
    /// Build a base-ab word whose empirical measures oscillate.
    SynthIrregular {
        #[command(flatten)]
        pair: Pair,
        #[arg(short = 'r', default_value = "1/2")]
        r: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Monte Carlo samples per measure estimate.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Re-check a word and recipe produced by synth-irregular.
    VerifyIrregular {
        /// JSON file with "word" and "recipe" ("-" for stdin).
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Number of length-N words over k symbols with entropy <= t.
    CountR {
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 'N')]
        n: usize,
        #[arg(short = 't')]
        t: f64,
    },
    /// (1/N) log |R(k, N, t)| with its finite-N bound.
    Growth {
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 't')]
        t: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        horizons: Vec<usize>,
    },
    /// Itinerary of x under T_a through the M-fold refinement of I_d.
    Itinerary {
        #[arg(short = 'a', default_value_t = 2)]
        a: u64,
        #[arg(short = 'x')]
        x: String,
        #[arg(short = 'd', default_value_t = 2)]
        d: u64,
        #[arg(short = 'M', default_value_t = 1)]
        m: usize,
        #[arg(short = 'N')]
        n: usize,
    },
    /// Dimension bound for points of T_a-entropy at most t.
    KtBound {
        #[command(flatten)]
        pair: Pair,
        #[arg(short = 't')]
        t: f64,
    },
    /// The bound 2t/(log a + t).
    QBound {
        #[arg(short = 'a', default_value_t = 2)]
        a: u64,
        #[arg(short = 't')]
        t: f64,
    },
    /// Visit frequencies of an open arc against t times its length.
    Equidist {
        #[command(flatten)]
        pair: Pair,
        #[arg(short = 'x')]
        x: String,
        /// Open arc "lo,hi" with rational endpoints.
        #[arg(long, default_value = "0,1/2")]
        target: String,
        #[arg(long, value_delimiter = ',', required = true)]
        horizons: Vec<usize>,
        /// Claimed t in (0, 1].
        #[arg(short = 't', default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = DEFAULT_EQUIDIST_TOLERANCE)]
        tolerance: f64,
    },
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Copy)]
struct RunConfig {
    seed: u64,
    format: Option<Format>,
}

impl RunConfig {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    /// Warns (without failing) when `log a / log b` is rational.
    fn check_pair(&self, pair: Pair) {
        if pair.a >= 2 && pair.b >= 2 && !mult_indep_check(pair.a, pair.b) {
            eprintln!(
                "warning: {} and {} are powers of a common integer; they are not multiplicatively independent",
                pair.a, pair.b
            );
        }
    }
}

enum Failure {
    Precondition(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Precondition(e)
    }
}

impl From<xab_core::Error> for Failure {
    fn from(e: xab_core::Error) -> Self {
        Failure::Precondition(e.into())
    }
}

/// Buffered output plus whether a verification verdict failed.
struct Output {
    text: String,
    failed: Option<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, failed: None }
    }
}

fn point(s: &str) -> anyhow::Result<TorusPoint> {
    s.parse().with_context(|| format!("invalid point `{s}`"))
}

fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn csv(seed: u64, header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = format!("# seed={seed}\n{header}\n");
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

fn run(cmd: Command, cfg: RunConfig) -> Result<Output, Failure> {
    let seed = cfg.seed;
    Ok(match cmd {
        Command::Orbit { pair, x, n } => {
            cfg.check_pair(pair);
            let x = point(&x)?;
            let grid = orbit_grid(&x, pair.a, pair.b, n)?;
            match cfg.format_or(Format::Csv) {
                Format::Csv => Output::ok(csv(
                    seed,
                    "m,n,point",
                    grid.iter().enumerate().flat_map(|(m, row)| {
                        row.iter()
                            .enumerate()
                            .map(move |(j, p)| format!("{m},{j},{p}"))
                    }),
                )),
                Format::Json => {
                    let rows: Vec<Vec<String>> = grid
                        .iter()
                        .map(|row| row.iter().map(ToString::to_string).collect())
                        .collect();
                    Output::ok(json_line(&json!({
                        "a": pair.a, "b": pair.b, "x": x.to_string(), "N": n, "seed": seed,
                        "grid": rows,
                    })))
                }
            }
        }
        Command::Empirical {
            pair,
            x,
            n,
            d,
            order,
        } => {
            cfg.check_pair(pair);
            let x = point(&x)?;
            let mu = empirical_measure::<f64>(&x, pair.a, pair.b, n, d, order)?;
            let lebesgue = xab_core::empirical::FourierCoefficients::lebesgue(order);
            let dist = xab_core::empirical::weak_star_distance(mu.fourier(), &lebesgue)?;
            match cfg.format_or(Format::Json) {
                Format::Csv => Output::ok(csv(
                    seed,
                    "cell,count,weight",
                    mu.counts()
                        .iter()
                        .zip(mu.weights())
                        .enumerate()
                        .map(|(j, (c, w))| format!("{j}/{d},{c},{w}")),
                )),
                Format::Json => {
                    let coeffs: Vec<[f64; 2]> = mu
                        .fourier()
                        .nonnegative()
                        .iter()
                        .map(|c| [c.re, c.im])
                        .collect();
                    Output::ok(json_line(&json!({
                        "a": pair.a, "b": pair.b, "x": x.to_string(), "N": n, "d": d, "K": order,
                        "seed": seed,
                        "counts": mu.counts(),
                        "weights": mu.weights(),
                        "fourier": coeffs,
                        "distance_to_lebesgue": dist,
                    })))
                }
            }
        }
        Command::Fourier {
            pair,
            x,
            k,
            n,
            horizons,
        } => {
            cfg.check_pair(pair);
            let x = point(&x)?;
            let mut hs = horizons;
            hs.extend(n);
            if hs.is_empty() {
                return Err(anyhow!("give -N or --horizons").into());
            }
            let rows = hs
                .iter()
                .map(|&h| {
                    let c = fourier_average::<f64>(&x, pair.a, pair.b, h, k)?;
                    let (da, db) = if k == 0 {
                        (0.0, 0.0)
                    } else {
                        (
                            invariance_defect::<f64>(&x, pair.a, pair.b, h, k, MapChoice::A)?,
                            invariance_defect::<f64>(&x, pair.a, pair.b, h, k, MapChoice::B)?,
                        )
                    };
                    Ok((h, c, da, db))
                })
                .collect::<xab_core::Result<Vec<_>>>()?;
            match cfg.format_or(Format::Json) {
                Format::Csv => Output::ok(csv(
                    seed,
                    "N,re,im,abs,defect_a,defect_b,bound",
                    rows.iter().map(|(h, c, da, db)| {
                        format!(
                            "{h},{},{},{},{da},{db},{}",
                            c.re,
                            c.im,
                            c.norm(),
                            2.0 / *h as f64
                        )
                    }),
                )),
                Format::Json => {
                    let entries: Vec<Value> = rows
                        .iter()
                        .map(|(h, c, da, db)| {
                            json!({
                                "N": h, "re": c.re, "im": c.im, "abs": c.norm(),
                                "defect_a": da, "defect_b": db, "bound": 2.0 / *h as f64,
                            })
                        })
                        .collect();
                    Output::ok(json_line(&json!({
                        "a": pair.a, "b": pair.b, "x": x.to_string(), "k": k, "seed": seed,
                        "averages": entries,
                    })))
                }
            }
        }
        Command::MoranDim { spec, levels } => {
            let s: MoranStructure = spec.parse()?;
            let levels = levels.or(s.levels()).unwrap_or(2);
            let d = moran_dims::<f64>(&s, levels)?;
            match cfg.format_or(Format::Json) {
                Format::Csv => Output::ok(csv(
                    seed,
                    "s1,s2,exact",
                    [format!("{},{},{}", d.s1, d.s2, d.exact)],
                )),
                Format::Json => Output::ok(json_line(&json!({
                    "structure": s.to_string(), "K": levels, "seed": seed,
                    "s1": d.s1, "s2": d.s2, "exact": d.exact,
                }))),
            }
        }
        Command::BoxDim {
            spec,
            depth,
            scales,
            budget,
        } => {
            let s: MoranStructure = spec.parse()?;
            let scales = scales
                .iter()
                .map(|e| rational_from_str(e))
                .collect::<xab_core::Result<Vec<_>>>()?;
            let intervals = realize_intervals(&s, depth, budget)?;
            let est = box_counting_estimate::<f64>(&intervals, &scales)?;
            let scale_text: Vec<String> = scales.iter().map(ToString::to_string).collect();
            match cfg.format_or(Format::Json) {
                Format::Csv => Output::ok(csv(
                    seed,
                    "depth,intervals,estimate",
                    [format!("{depth},{},{est}", intervals.len())],
                )),
                Format::Json => Output::ok(json_line(&json!({
                    "structure": s.to_string(), "depth": depth, "intervals": intervals.len(),
                    "scales": scale_text, "seed": seed, "estimate": est,
                }))),
            }
        }
        Command::SynthIrregular {
            pair,
            r,
            depth,
            samples,
        } => {
            cfg.check_pair(pair);
            let r = rational_from_str(&r)?;
            let mut inputs = SynthesisInputs::new(pair.a, pair.b, r, depth);
            inputs.targets.seed = seed;
            if let Some(s) = samples {
                inputs.targets.samples = s;
            }
            let (word, recipe) = synthesize_point(&inputs, seed)?;
            let recipe_value = serde_json::to_value(&recipe).expect("recipe serializes");
            Output::ok(json_line(&json!({
                "seed": seed,
                "word": word.to_string(),
                "recipe": recipe_value,
            })))
        }
        Command::VerifyIrregular { input } => {
            let text = if input == "-" {
                let mut s = String::new();
                io::stdin()
                    .read_to_string(&mut s)
                    .context("reading stdin")?;
                s
            } else {
                std::fs::read_to_string(&input).with_context(|| format!("reading {input}"))?
            };
            let v: Value = serde_json::from_str(&text).context("input is not JSON")?;
            let word: DigitWord = v
                .get("word")
                .and_then(Value::as_str)
                .ok_or_else(|| anyhow!("missing string field `word`"))?
                .parse()?;
            let recipe_json = v
                .get("recipe")
                .ok_or_else(|| anyhow!("missing field `recipe`"))?;
            let recipe = IrregularRecipe::from_json(&recipe_json.to_string())?;
            let report = verify_irregular::<f64>(&word, &recipe)?;
            let out = json_line(&json!({
                "seed": recipe.seed,
                "report": serde_json::to_value(&report).expect("report serializes"),
            }));
            Output {
                failed: (!report.pass).then(|| "irregular point failed verification".to_string()),
                text: out,
            }
        }
        Command::CountR { k, n, t } => {
            let count = count_r(k, n, t)?;
            match cfg.format {
                None => Output::ok(format!("{count}\n")),
                Some(Format::Csv) => {
                    Output::ok(csv(seed, "k,N,t,count", [format!("{k},{n},{t},{count}")]))
                }
                Some(Format::Json) => Output::ok(json_line(&json!({
                    "k": k, "N": n, "t": t, "seed": seed, "count": count.to_string(),
                }))),
            }
        }
        Command::Growth { k, t, horizons } => {
            let prof = growth_profile::<f64>(k, t, &horizons)?;
            match cfg.format_or(Format::Csv) {
                Format::Csv => Output::ok(csv(
                    seed,
                    "N,value,bound",
                    prof.iter()
                        .map(|g| format!("{},{},{}", g.n, g.value, g.bound)),
                )),
                Format::Json => Output::ok(json_line(&json!({
                    "k": k, "t": t, "seed": seed,
                    "profile": serde_json::to_value(&prof).expect("profile serializes"),
                }))),
            }
        }
        Command::Itinerary { a, x, d, m, n } => {
            let x = point(&x)?;
            let rec = itinerary_choices::<f64>(&x, a, d, m, n)?;
            let h = rec.q.entropy();
            let block = block_entropy_estimate::<f64>(&x, a, d, m, n)?;
            match cfg.format_or(Format::Json) {
                Format::Csv => Output::ok(csv(
                    seed,
                    "j,index",
                    rec.indices
                        .iter()
                        .enumerate()
                        .map(|(j, i)| format!("{j},{i}")),
                )),
                Format::Json => Output::ok(json_line(&json!({
                    "seed": seed,
                    "record": serde_json::to_value(&rec).expect("record serializes"),
                    "entropy": h,
                    "block_entropy": block,
                    "decimation_identity": rec.decimation_identity_holds(),
                }))),
            }
        }
        Command::KtBound { pair, t } => {
            cfg.check_pair(pair);
            let v = kt_bound::<f64>(pair.a, pair.b, t)?;
            bound_output(
                cfg,
                json!({"a": pair.a, "b": pair.b, "t": t, "seed": seed, "bound": v}),
                v,
            )
        }
        Command::QBound { a, t } => {
            let v = q_bound::<f64>(a, t)?;
            bound_output(cfg, json!({"a": a, "t": t, "seed": seed, "bound": v}), v)
        }
        Command::Equidist {
            pair,
            x,
            target,
            horizons,
            t,
            tolerance,
        } => {
            cfg.check_pair(pair);
            let x = point(&x)?;
            let (lo, hi) = target
                .split_once(',')
                .ok_or_else(|| anyhow!("target must be `lo,hi`"))?;
            let arc = CircleArc::open(rational_from_str(lo)?, rational_from_str(hi)?)?;
            let report = semiequidist_profile::<f64>(
                &x,
                pair.a,
                pair.b,
                &Target::Arc(arc),
                &horizons,
                t,
                tolerance,
            )?;
            let text = match cfg.format_or(Format::Json) {
                Format::Csv => csv(
                    seed,
                    "N,average,threshold",
                    report
                        .horizons
                        .iter()
                        .zip(&report.averages)
                        .map(|(h, v)| format!("{h},{v},{}", report.threshold)),
                ),
                Format::Json => json_line(&json!({
                    "a": pair.a, "b": pair.b, "x": x.to_string(), "target": target, "seed": seed,
                    "report": serde_json::to_value(&report).expect("report serializes"),
                })),
            };
            Output {
                failed: (!report.pass).then(|| "semiequidistribution verdict failed".to_string()),
                text,
            }
        }
    })
}

fn bound_output(cfg: RunConfig, v: Value, bound: f64) -> Output {
    match cfg.format_or(Format::Json) {
        Format::Csv => Output::ok(csv(cfg.seed, "bound", [bound.to_string()])),
        Format::Json => Output::ok(json_line(&v)),
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v
            .parse()
            .with_context(|| format!("{THREADS_VAR} must be a positive integer"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_PRECONDITION);
    }
    let cfg = RunConfig {
        seed: cli.seed,
        format: cli.format,
    };
    match run(cli.command, cfg) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout
                .write_all(out.text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(EXIT_PRECONDITION);
            }
            match out.failed {
                Some(msg) => {
                    eprintln!("verification failed: {msg}");
                    ExitCode::from(EXIT_VERIFICATION)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(Failure::Precondition(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_PRECONDITION)
        }
    }
}
