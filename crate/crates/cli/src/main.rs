use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use galois_forge::config::{Orientation, OutputFormat, Resolved, RunConfig, SCHEMA};
use galois_forge::criterion::{both_orientations, check, CriterionReport};
use galois_forge::fixtures::{verify_paper, FixtureRun};
use galois_forge::model::{build_model, compare_orders, implicitize, verify_galois};
use galois_forge::search::{search, SearchSpace};
use galois_forge::Error;

#[derive(Parser)]
#[command(name = "galois-forge", version, about = "Plane models of P^1 with two inner Galois points")]
struct Cli {
    /// Closure cap for subgroup generation.
    #[arg(long, global = true, env = "GALOIS_FORGE_CAP")]
    cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    One,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputArg {
    Json,
    Text,
}

impl From<OutputArg> for OutputFormat {
    fn from(o: OutputArg) -> Self {
        match o {
            OutputArg::Json => OutputFormat::Json,
            OutputArg::Text => OutputFormat::Text,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide the criterion for a configuration.
    Check {
        config: PathBuf,
        #[arg(long, value_enum)]
        orientation: Option<OrientationArg>,
        #[arg(long, value_enum)]
        output: Option<OutputArg>,
    },
    /// Build and verify the plane model of a passing configuration.
    Construct {
        config: PathBuf,
        #[arg(long)]
        implicitize: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, value_enum)]
        output: Option<OutputArg>,
    },
    /// Enumerate a search space and list the passing configurations.
    Search {
        space: PathBuf,
        #[arg(long)]
        max_results: Option<usize>,
    },
    /// Recompute the reference curves and compare with their recorded data.
    VerifyPaper {
        #[arg(long)]
        char0: bool,
        #[arg(long, value_enum, default_value = "text")]
        output: OutputArg,
    },
}

/// Exit status 2 for malformed or unusable input, 1 for everything else.
enum Failure {
    Input(anyhow::Error),
    Other(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        use Error::*;
        match e {
            Parse(_) | NonPrimeCharacteristic(_) | ReducibleModulus(_) | UnsupportedKind(_) | NoSuchRoot { .. }
            | NotFiniteWithinCap { .. } | SingularMatrix | PointsEqual | FieldMismatch | SpecMismatch
            | EtaNotInG2 | SpaceTooLarge { .. } => Failure::Input(e.into()),
            other => Failure::Other(other.into()),
        }
    }
}

type Outcome = std::result::Result<bool, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Input)
}

fn load(path: &Path, cap: Option<usize>) -> std::result::Result<Resolved, Failure> {
    let text = read(path)?;
    let cfg = RunConfig::from_json(&text).map_err(|e| Failure::Input(anyhow::Error::from(e).context(path.display().to_string())))?;
    Ok(cfg.resolve(cap)?)
}

fn with_schema(v: Value) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("schema".into(), Value::String(SCHEMA.into()));
    if let Value::Object(m) = v {
        out.extend(m);
    }
    Value::Object(out)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn cmd_check(path: &Path, cap: Option<usize>, orientation: Option<OrientationArg>, output: Option<OutputArg>) -> Outcome {
    let r = load(path, cap)?;
    let cfg = &r.configuration;
    let both = match orientation {
        Some(OrientationArg::Both) => true,
        Some(OrientationArg::One) => false,
        None => r.options.orientation == Orientation::Both,
    };
    let format = output.map(OutputFormat::from).unwrap_or(r.options.output);
    let reports: Vec<(&str, CriterionReport)> = if both {
        let (a, b) = both_orientations(cfg)?;
        vec![("as given", a), ("swapped", b)]
    } else {
        vec![("as given", check(cfg)?)]
    };
    let passes = reports.iter().all(|(_, r)| r.passes);
    match format {
        OutputFormat::Json => {
            let mut v = json!({ "passes": passes, "report": to_value(&reports[0].1) });
            if let Some((_, s)) = reports.get(1) {
                v["swapped"] = to_value(s);
            }
            println!("{}", pretty(&with_schema(v)));
        }
        OutputFormat::Text => {
            for (label, rep) in &reports {
                if both {
                    println!("== {label}");
                }
                print!("{}", rep.render_text(&r.roots));
            }
        }
    }
    Ok(passes)
}

fn cmd_construct(path: &Path, cap: Option<usize>, implicit: bool, out_dir: &Path, output: Option<OutputArg>) -> Outcome {
    let r = load(path, cap)?;
    let cfg = &r.configuration;
    let roots = &r.roots;
    let format = output.map(OutputFormat::from).unwrap_or(r.options.output);
    let report = check(cfg)?;
    if !report.passes {
        match format {
            OutputFormat::Json => println!("{}", pretty(&with_schema(json!({ "passes": false, "report": to_value(&report) })))),
            OutputFormat::Text => print!("{}", report.render_text(roots)),
        }
        eprintln!("error: the configuration does not satisfy the criterion; no model written");
        return Ok(false);
    }
    let model = build_model(cfg, &report)?;
    let verification = verify_galois(&model, cfg, &report)?;
    let orders = compare_orders(&model, &report)?;
    let mut problems: Vec<String> = orders
        .iter()
        .filter(|o| !o.agrees)
        .map(|o| format!("order prediction disagrees at {}", o.point.pretty(roots)))
        .collect();
    let curve = if implicit || r.options.implicitize {
        let c = implicitize(&model)?;
        let m1 = c.f.multiplicity_at(&model.image_p1) as i64;
        let m2 = c.f.multiplicity_at(&model.image_p2) as i64;
        if c.degree as i64 != report.degree {
            problems.push(format!("implicit degree {} differs from {}", c.degree, report.degree));
        }
        if (m1, m2) != (report.m_p1, report.m_p2) {
            problems.push(format!("implicit multiplicities ({m1}, {m2}) differ from ({}, {})", report.m_p1, report.m_p2));
        }
        Some((c, m1, m2))
    } else {
        None
    };
    if !problems.is_empty() {
        for p in &problems {
            eprintln!("error: {p}");
        }
        return Ok(false);
    }

    let mut files = vec![
        ("model.json", with_schema(to_value(&model))),
        ("verification.json", with_schema(json!({ "report": to_value(&report), "galois": to_value(&verification) }))),
        ("orders.json", with_schema(json!({ "orders": to_value(&orders) }))),
    ];
    if let Some((c, m1, m2)) = &curve {
        files.push((
            "implicit.json",
            with_schema(json!({ "curve": to_value(c), "multiplicity_p1": m1, "multiplicity_p2": m2 })),
        ));
    }
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))
        .map_err(Failure::Other)?;
    for (name, v) in &files {
        let p = out_dir.join(name);
        fs::write(&p, pretty(v) + "\n")
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::Other)?;
    }
    match format {
        OutputFormat::Json => {
            let names: Vec<&str> = files.iter().map(|(n, _)| *n).collect();
            let mut v = json!({ "passes": true, "degree": model.degree, "files": names });
            if let Some((_, m1, m2)) = &curve {
                v["implicit_multiplicities"] = json!([m1, m2]);
            }
            println!("{}", pretty(&with_schema(v)));
        }
        OutputFormat::Text => {
            println!("degree {}", model.degree);
            println!("P1 -> {:?}, P2 -> {:?}", model.image_p1, model.image_p2);
            println!("D = {}", verification.d.pretty(roots));
            for o in &orders {
                println!("    {:<10} alpha {:>3} beta {:>3}", o.point.pretty(roots), o.alpha, o.beta);
            }
            if let Some((c, m1, m2)) = &curve {
                println!("implicit curve of degree {}, multiplicities {m1} and {m2}", c.degree);
            }
            for (n, _) in &files {
                println!("wrote {}", out_dir.join(n).display());
            }
        }
    }
    Ok(true)
}

fn cmd_search(path: &Path, max_results: Option<usize>) -> Outcome {
    let text = read(path)?;
    let space = SearchSpace::from_json(&text)?;
    let catalog = search(&space, max_results)?;
    println!("{}", pretty(&to_value(&catalog)));
    Ok(true)
}

fn render_run(run: &FixtureRun) -> String {
    let mut s = format!("{} over {}: {}\n", run.fixture, run.field, if run.passes() { "ok" } else { "MISMATCH" });
    for c in &run.comparisons {
        let mark = if c.ok { "ok" } else { "MISMATCH" };
        s += &format!("    {:<8} {}: expected {}, got {}\n", mark, c.quantity, c.expected, c.actual);
    }
    s
}

fn cmd_verify_paper(char0: bool, output: OutputArg) -> Outcome {
    let runs = verify_paper(char0)?;
    let passes = runs.iter().all(FixtureRun::passes);
    match output {
        OutputArg::Json => println!("{}", pretty(&with_schema(json!({ "passes": passes, "runs": to_value(&runs) })))),
        OutputArg::Text => {
            for run in &runs {
                print!("{}", render_run(run));
            }
            println!("{}", if passes { "all fixtures match" } else { "some quantities do not match" });
        }
    }
    Ok(passes)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cap = cli.cap;
    let outcome = match &cli.command {
        Command::Check { config, orientation, output } => cmd_check(config, cap, *orientation, *output),
        Command::Construct { config, implicitize, out_dir, output } => {
            cmd_construct(config, cap, *implicitize, out_dir, *output)
        }
        Command::Search { space, max_results } => cmd_search(space, *max_results),
        Command::VerifyPaper { char0, output } => cmd_verify_paper(*char0, *output),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
