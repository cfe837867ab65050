//! Command-line front end: normal forms, normal tensors, curvature data,
//! classification, orbit equivalence, dimension counts, the stratum census,
//! and preset document generation.
//!
//! Exit codes: 0 on success, 1 on a domain error (the library's message is
//! printed verbatim), 2 on a usage error.

mod doc;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use jetmoduli::metric::{curvature_point_data, gauss_curvature};
use jetmoduli::normal_form::{dim_moduli, dim_normal, gauss_check, normal_tensors, normalize};
use jetmoduli::sample;
use jetmoduli::strata2d::{
    census, invariants, orbit_equivalent, preset_h, stabilizer, type_of_jet, y_membership,
    OrbitWitness, PresetKind,
};

use doc::{JetDocument, Payload};
use report::{envelope, fmt_rat, gauss_value, print_json, rat_value};

#[derive(Parser)]
#[command(
    name = "jetmoduli",
    version,
    about = "Exact normal forms and moduli strata for finite-order jets of Riemannian metrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a metric document to Gauss normal form.
    Normalize {
        /// Input metric document.
        input: PathBuf,
        /// Write the normalized document here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Machine-readable report.
        #[arg(long)]
        json: bool,
    },
    /// Normal tensors of the normalized metric.
    Tensors {
        input: PathBuf,
        #[arg(long)]
        json: bool,
        /// Render values as decimals with this many digits (text mode).
        #[arg(long)]
        decimal: Option<u32>,
    },
    /// Curvature jet and point data of the normalized surface metric.
    Curvature {
        input: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        decimal: Option<u32>,
    },
    /// Invariant vector (p1), (p1,p2) or (p1..p5) of a surface metric.
    Invariants {
        /// Invariant order: 2, 3 or 4.
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
        order: u8,
        input: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        decimal: Option<u32>,
    },
    /// Automorphism group type of metric (or hpoly) documents.
    Classify {
        /// One or more documents; results are reported in input order.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Decide orbit equivalence of two metric documents of equal order.
    Equiv {
        #[arg(short = 'a', long = "first")]
        a: PathBuf,
        #[arg(short = 'b', long = "second")]
        b: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Moduli-space dimension and normal-tensor dimensions.
    Dim {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        json: bool,
    },
    /// The stratum list of the order-r moduli space (n = 2).
    Census {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        json: bool,
    },
    /// Write a preset metric document.
    Make {
        #[arg(long, value_enum)]
        preset: PresetArg,
        /// Rotation order m for the pm/qm/pmq presets.
        #[arg(long)]
        m: Option<u32>,
        /// Jet order of the metric.
        #[arg(long)]
        r: u32,
        /// Seed for the `random` preset (reproducible).
        #[arg(long)]
        seed: Option<u64>,
        /// Optional label stored in the document.
        #[arg(long)]
        label: Option<String>,
        /// Write to a file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    /// h = 0 (flat; type O(2)).
    Zero,
    /// h = p_m = Re(z^m) (type D_m; needs r >= m + 2).
    Pm,
    /// h = q_m = Im(z^m) (type D_m; needs r >= m + 2).
    Qm,
    /// h = p_m + (x^2 + y^2) q_m (type K_m; needs r >= m + 4).
    Pmq,
    /// h = x + xy (type K_1; needs r >= 4).
    Xxy,
    /// Seeded random normal-form metric.
    Random,
}

enum CliError {
    Usage(String),
    Domain(String),
}

impl From<jetmoduli::Error> for CliError {
    fn from(e: jetmoduli::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<String> for CliError {
    fn from(e: String) -> Self {
        CliError::Domain(e)
    }
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe, like other line-oriented tools.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Load a metric document and fix the frame when that is exact; the
/// diagnostic for inexact frames comes from the library untouched.
fn load_metric(path: &Path) -> Result<(jetmoduli::metric::MetricJet, Option<String>), CliError> {
    let document = doc::load(path)?;
    let g = document.as_metric()?.clone();
    let g = g.identity_frame()?;
    Ok((g, document.label))
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Normalize { input, output, json } => {
            let (g, label) = load_metric(&input)?;
            let normal = normalize(&g)?;
            let check = gauss_check(&normal)?;
            let out_doc = JetDocument::metric(normal, label);
            if let Some(path) = &output {
                doc::save(&out_doc, path)?;
            }
            if json {
                let mut m = envelope("normalize");
                m.insert("gauss_check".into(), Value::Bool(check));
                m.insert("document".into(), doc::document_value(&out_doc));
                print_json(m);
            } else if let Some(path) = &output {
                println!("wrote {} (gauss_check: {check})", path.display());
            } else {
                print!("{}", doc::render(&out_doc));
            }
            Ok(())
        }
        Command::Tensors { input, json, decimal } => {
            let (g, _) = load_metric(&input)?;
            let normal = normalize(&g)?;
            let tensors = normal_tensors(&normal)?;
            if json {
                let mut m = envelope("tensors");
                m.insert("dim".into(), Value::from(g.dim() as u64));
                m.insert("order".into(), Value::from(u64::from(g.order())));
                let orders: Vec<Value> = tensors
                    .iter()
                    .map(|t| {
                        let mut o = Map::new();
                        o.insert("s".into(), Value::from(u64::from(t.tensor_order())));
                        let comps: Vec<Value> = t
                            .components()
                            .map(|((i, j, ks), v)| {
                                let mut c = Map::new();
                                c.insert("index".into(), Value::String(tensor_key(*i, *j, ks)));
                                c.insert("value".into(), rat_value(v));
                                Value::Object(c)
                            })
                            .collect();
                        o.insert("components".into(), Value::Array(comps));
                        Value::Object(o)
                    })
                    .collect();
                m.insert("orders".into(), Value::Array(orders));
                print_json(m);
            } else {
                println!(
                    "normal tensors of the normalized jet (n = {}, r = {}):",
                    g.dim(),
                    g.order()
                );
                for t in &tensors {
                    let count = t.components().count();
                    if count == 0 {
                        println!("s={}: all components zero", t.tensor_order());
                        continue;
                    }
                    println!("s={}:", t.tensor_order());
                    for ((i, j, ks), v) in t.components() {
                        println!("  ({}) = {}", tensor_key(*i, *j, ks), fmt_rat(v, decimal));
                    }
                }
            }
            Ok(())
        }
        Command::Curvature { input, json, decimal } => {
            let (g, _) = load_metric(&input)?;
            let normal = normalize(&g)?;
            let k = gauss_curvature(&normal)?;
            let data = curvature_point_data(&k);
            if json {
                let mut m = envelope("curvature");
                m.insert("order".into(), Value::from(u64::from(g.order())));
                let mut jet = Map::new();
                for (idx, c) in k.terms() {
                    jet.insert(idx.to_string(), rat_value(c));
                }
                m.insert("k_jet".into(), Value::Object(jet));
                m.insert("k0".into(), rat_value(&data.k0));
                if g.order() >= 3 {
                    m.insert(
                        "grad".into(),
                        Value::Array(data.grad.iter().map(rat_value).collect()),
                    );
                }
                if g.order() >= 4 {
                    m.insert(
                        "hess".into(),
                        Value::Array(
                            data.hess
                                .iter()
                                .map(|row| Value::Array(row.iter().map(rat_value).collect()))
                                .collect(),
                        ),
                    );
                }
                print_json(m);
            } else {
                println!("curvature jet (order {}): {}", k.order(), k);
                println!("K(0) = {}", fmt_rat(&data.k0, decimal));
                if g.order() >= 3 {
                    println!(
                        "grad K(0) = ({}, {})",
                        fmt_rat(&data.grad[0], decimal),
                        fmt_rat(&data.grad[1], decimal)
                    );
                }
                if g.order() >= 4 {
                    println!(
                        "Hess K(0) = [[{}, {}], [{}, {}]]",
                        fmt_rat(&data.hess[0][0], decimal),
                        fmt_rat(&data.hess[0][1], decimal),
                        fmt_rat(&data.hess[1][0], decimal),
                        fmt_rat(&data.hess[1][1], decimal)
                    );
                }
            }
            Ok(())
        }
        Command::Invariants { order, input, json, decimal } => {
            let (g, _) = load_metric(&input)?;
            let v = invariants(&g, order)?;
            let y = if order == 4 {
                Some(y_membership(&v)?)
            } else {
                None
            };
            if json {
                let mut m = envelope("invariants");
                m.insert("order".into(), Value::from(u64::from(order)));
                m.insert(
                    "values".into(),
                    Value::Array(v.values.iter().map(rat_value).collect()),
                );
                if let Some(y) = y {
                    m.insert("y_membership".into(), Value::Bool(y));
                }
                print_json(m);
            } else {
                println!("invariants (r = {order}):");
                for (i, p) in v.values.iter().enumerate() {
                    println!("  p{} = {}", i + 1, fmt_rat(p, decimal));
                }
                if let Some(y) = y {
                    println!("y membership: {y}");
                }
            }
            Ok(())
        }
        Command::Classify { inputs, json } => {
            let mut results = Vec::new();
            for path in &inputs {
                let document = doc::load(path)?;
                let (kind, group) = match &document.payload {
                    Payload::Metric(g) => ("metric", type_of_jet(&g.identity_frame()?)?),
                    Payload::HPoly(h) => ("hpoly", stabilizer(h)),
                };
                results.push((path.display().to_string(), kind, group));
            }
            if json {
                let mut m = envelope("classify");
                m.insert(
                    "results".into(),
                    Value::Array(
                        results
                            .iter()
                            .map(|(input, kind, group)| {
                                let mut r = Map::new();
                                r.insert("input".into(), Value::String(input.clone()));
                                r.insert("kind".into(), Value::String((*kind).into()));
                                r.insert("type".into(), Value::String(group.to_string()));
                                Value::Object(r)
                            })
                            .collect(),
                    ),
                );
                print_json(m);
            } else {
                for (input, _, group) in &results {
                    println!("{input}: {group}");
                }
            }
            Ok(())
        }
        Command::Equiv { a, b, json } => {
            let (ga, _) = load_metric(&a)?;
            let (gb, _) = load_metric(&b)?;
            let witness = orbit_equivalent(&ga, &gb)?;
            if json {
                let mut m = envelope("equiv");
                m.insert("equivalent".into(), Value::Bool(witness.is_some()));
                if let Some(w) = &witness {
                    let (kind, sol) = match w {
                        OrbitWitness::Rotation(s) => ("rotation", s),
                        OrbitWitness::Reflection(s) => ("reflection", s),
                    };
                    let mut wv = Map::new();
                    wv.insert("kind".into(), Value::String(kind.into()));
                    wv.insert("exponent".into(), Value::from(u64::from(sol.g)));
                    wv.insert("value".into(), gauss_value(&sol.w));
                    let (re, im) = sol.numeric_witness();
                    let mut num = Map::new();
                    num.insert("re".into(), Value::from(re));
                    num.insert("im".into(), Value::from(im));
                    wv.insert("numeric".into(), Value::Object(num));
                    m.insert("witness".into(), Value::Object(wv));
                }
                print_json(m);
            } else {
                match &witness {
                    Some(w) => println!("equivalent; {w}"),
                    None => println!("not equivalent"),
                }
            }
            Ok(())
        }
        Command::Dim { n, r, json } => {
            let moduli = dim_moduli(n, r);
            let normal_dims: Vec<(u32, u64)> = (2..=r).map(|s| (s, dim_normal(n, s))).collect();
            if json {
                let mut m = envelope("dim");
                m.insert("n".into(), Value::from(u64::from(n)));
                m.insert("r".into(), Value::from(u64::from(r)));
                m.insert("moduli_dim".into(), Value::from(moduli));
                m.insert(
                    "normal_dims".into(),
                    Value::Array(
                        normal_dims
                            .iter()
                            .map(|(s, d)| {
                                let mut e = Map::new();
                                e.insert("s".into(), Value::from(u64::from(*s)));
                                e.insert("dim".into(), Value::from(*d));
                                Value::Object(e)
                            })
                            .collect(),
                    ),
                );
                print_json(m);
            } else {
                println!("moduli dimension (n = {n}, r = {r}): {moduli}");
                if !normal_dims.is_empty() {
                    println!("normal tensor dimensions:");
                    for (s, d) in &normal_dims {
                        println!("  s={s}: {d}");
                    }
                }
            }
            Ok(())
        }
        Command::Census { r, json } => {
            let strata = census(r);
            if json {
                let mut m = envelope("census");
                m.insert("r".into(), Value::from(u64::from(r)));
                m.insert(
                    "strata".into(),
                    Value::Array(
                        strata
                            .iter()
                            .map(|g| Value::String(g.to_string()))
                            .collect(),
                    ),
                );
                m.insert("count".into(), Value::from(strata.len() as u64));
                print_json(m);
            } else {
                println!("strata of the moduli space of {r}-jets (n = 2):");
                for g in &strata {
                    println!("  {g}");
                }
                println!("count: {}", strata.len());
            }
            Ok(())
        }
        Command::Make { preset, m, r, seed, label, output, json } => {
            let g = match preset {
                PresetArg::Zero => preset_h(PresetKind::Zero, 1, r)?,
                PresetArg::Xxy => preset_h(PresetKind::XPlusXy, 1, r)?,
                PresetArg::Pm | PresetArg::Qm | PresetArg::Pmq => {
                    let m = m.ok_or_else(|| {
                        CliError::Usage(format!(
                            "preset `{}` requires --m",
                            preset_name(preset)
                        ))
                    })?;
                    if m == 0 {
                        return Err(CliError::Usage("--m must be at least 1".into()));
                    }
                    let kind = match preset {
                        PresetArg::Pm => PresetKind::Pm,
                        PresetArg::Qm => PresetKind::Qm,
                        _ => PresetKind::PmPlusR2Qm,
                    };
                    preset_h(kind, m, r)?
                }
                PresetArg::Random => {
                    let mut rng = sample::rng_from_seed(seed.unwrap_or(0));
                    sample::normal_metric_2d(&mut rng, r)
                }
            };
            let out_doc = JetDocument::metric(g, label);
            if let Some(path) = &output {
                doc::save(&out_doc, path)?;
            }
            if json {
                let mut env = envelope("make");
                env.insert("preset".into(), Value::String(preset_name(preset).into()));
                env.insert("document".into(), doc::document_value(&out_doc));
                print_json(env);
            } else if let Some(path) = &output {
                println!("wrote {}", path.display());
            } else {
                print!("{}", doc::render(&out_doc));
            }
            Ok(())
        }
    }
}

fn preset_name(p: PresetArg) -> &'static str {
    match p {
        PresetArg::Zero => "zero",
        PresetArg::Pm => "pm",
        PresetArg::Qm => "qm",
        PresetArg::Pmq => "pmq",
        PresetArg::Xxy => "xxy",
        PresetArg::Random => "random",
    }
}

/// 1-based display key "i,j;k_1,..,k_s" for a tensor component.
fn tensor_key(i: usize, j: usize, ks: &[usize]) -> String {
    let tail: Vec<String> = ks.iter().map(|k| (k + 1).to_string()).collect();
    format!("{},{};{}", i + 1, j + 1, tail.join(","))
}
