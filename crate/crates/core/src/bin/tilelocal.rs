//! `tilelocal`: command-line harness over the library.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 usage or configuration error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use tilelocal::error::{Error, Result};
use tilelocal::io::{
    family_from_file, homotopy_from_file, homotopy_to_file, localized_from_file, localized_to_file, pipeline_from_file,
    read_json, render_patch, to_json_string, write_atomic, FamilyFile, HomotopyFile, LocalizedFile, PipelineFile,
    Spaces,
};
use tilelocal::locality::{check_local, tiling_metric_bounds};
use tilelocal::localize::{
    choose_parameters, equivariant_localize, homotopy_localize, localize, LocalizedMap, MollifierScheme,
};
use tilelocal::map::{MapPipeline, TilingMap};
use tilelocal::patch::{central_patch, enumerate_patch_classes, Patch};
use tilelocal::rational::Rational;
use tilelocal::section::{approximant_summary, build_section, Section, SectionFile};
use tilelocal::system::SubstitutionSystem;
use tilelocal::tiling::{sample_hull, Tiling};
use tilelocal::verify::{parameter_report, verify_theorem1, verify_theorem2, verify_theorem3, VerificationReport};

#[derive(Parser)]
#[command(
    name = "tilelocal",
    version,
    about = "Localize continuous maps between substitution tiling spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bundled and user-supplied substitution systems.
    #[command(subcommand)]
    Spaces(SpacesCmd),
    #[command(subcommand)]
    Patches(PatchesCmd),
    #[command(subcommand)]
    Approximant(ApproximantCmd),
    #[command(subcommand)]
    Map(MapCmd),
    /// Build the local map f_ε from a pipeline.
    Localize(LocalizeArgs),
    #[command(subcommand)]
    Homotopy(HomotopyCmd),
    #[command(subcommand)]
    Equivariant(EquivariantCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Bounds on the tiling metric between two tilings.
    Metric(MetricArgs),
    #[command(subcommand)]
    Plot(PlotCmd),
}

#[derive(Subcommand)]
enum SpacesCmd {
    List,
    Validate {
        #[arg(long)]
        space: String,
    },
    /// Write a seeded hull sample as a tiling file.
    Sample {
        #[arg(long)]
        space: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PatchesCmd {
    Enumerate {
        #[arg(long)]
        space: String,
        #[arg(long)]
        radius: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ApproximantCmd {
    Build {
        #[arg(long)]
        space: String,
        #[arg(long)]
        radius: Rational,
        #[arg(long)]
        out: PathBuf,
        /// Also write the cell structure of the approximant.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum MapCmd {
    CheckLocal {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        radius: Rational,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        /// Substitution file for spaces the map names beyond the catalog.
        #[arg(long)]
        space: Vec<String>,
    },
    /// Central patch of the image of one tiling.
    Apply {
        #[arg(long)]
        map: PathBuf,
        #[command(flatten)]
        input: TilingInput,
        #[arg(long, default_value = "4")]
        radius: Rational,
        #[arg(long)]
        space: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A tiling file, or a seeded sample of the named space.
#[derive(Args)]
struct TilingInput {
    #[arg(long)]
    tiling: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct LocalizeArgs {
    #[arg(long)]
    map: PathBuf,
    #[arg(long)]
    epsilon: Rational,
    #[arg(long)]
    space: Vec<String>,
    /// Exported section whose radius equals R; searched lazily otherwise.
    #[arg(long)]
    section: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum HomotopyCmd {
    Localize {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        epsilon: Rational,
        #[arg(long, default_value_t = 11)]
        grid: usize,
        #[arg(long)]
        space: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum EquivariantCmd {
    Localize {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        group: String,
        #[arg(long)]
        epsilon: Rational,
        #[arg(long)]
        space: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    space: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyCmd {
    Theorem1(VerifyArgs),
    /// Reads a localized homotopy file.
    Theorem2(VerifyArgs),
    Theorem3(VerifyArgs),
}

#[derive(Args)]
struct MetricArgs {
    #[arg(long)]
    space: String,
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long, default_value_t = 16)]
    depth: usize,
}

#[derive(Subcommand)]
enum PlotCmd {
    /// Text rendering of a central patch.
    Patch {
        #[arg(long)]
        space: String,
        #[command(flatten)]
        input: TilingInput,
        #[arg(long, default_value = "4")]
        radius: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Outcome {
    Success,
    PropertyFailed,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    emit(out, &to_json_string(value)?)
}

fn spaces_with(extra: &[String]) -> Result<Spaces> {
    let mut spaces = Spaces::default();
    for s in extra {
        spaces.resolve(s)?;
    }
    Ok(spaces)
}

fn load_pipeline(path: &Path, spaces: &Spaces) -> Result<MapPipeline> {
    let file: PipelineFile = read_json(path)?;
    pipeline_from_file(&file, spaces).map_err(|e| in_file(path, e))
}

fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { path: p, msg } => Error::parse(format!("{}: {p}", path.display()), msg),
        other => other,
    }
}

fn load_tiling(sys: &Arc<SubstitutionSystem>, input: &TilingInput) -> Result<Tiling> {
    let tiling = match (&input.tiling, input.seed) {
        (Some(path), None) => read_json::<Tiling>(path)?,
        (None, Some(seed)) => sample_hull(sys, 1, seed).remove(0),
        _ => {
            return Err(Error::parse(
                "--tiling/--seed",
                "give exactly one of --tiling and --seed",
            ))
        }
    };
    if tiling.space != sys.name {
        return Err(Error::parse(
            "space",
            format!("tiling is in '{}', expected '{}'", tiling.space, sys.name),
        ));
    }
    tiling.check(sys)?;
    Ok(tiling)
}

fn patch_json(p: &Patch, sys: &SubstitutionSystem) -> Value {
    let tiles: Vec<Value> = p
        .tiles
        .iter()
        .map(|(c, &l)| json!({ "cell": &c[..sys.dim], "label": sys.label_name(l) }))
        .collect();
    json!({ "shift": p.shift, "tiles": tiles })
}

fn load_localized(path: &Path, spaces: &Spaces) -> Result<LocalizedMap> {
    let file: LocalizedFile = read_json(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    localized_from_file(&file, spaces, dir).map_err(|e| in_file(path, e))
}

fn finish_report(report: &VerificationReport, out: Option<&Path>) -> Result<Outcome> {
    emit_json(out, report)?;
    for p in &report.properties {
        eprintln!("{}: {}", p.name, if p.pass { "PASS" } else { "FAIL" });
    }
    Ok(if report.passed() {
        Outcome::Success
    } else {
        Outcome::PropertyFailed
    })
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Spaces(SpacesCmd::List) => {
            let spaces = Spaces::default();
            for name in spaces.names() {
                let sys = spaces.get(name)?;
                let group = sys.group.as_ref().map_or(String::new(), |g| format!(", C{}", g.order));
                println!(
                    "{name}: dimension {}, expansion {}, {} labels{group}",
                    sys.dim,
                    sys.expansion,
                    sys.alphabet_size()
                );
            }
            Ok(Outcome::Success)
        }
        Command::Spaces(SpacesCmd::Validate { space }) => {
            let sys = Spaces::default().resolve(&space)?;
            let report = sys.validate()?;
            emit_json(None, &report)?;
            let ok = report.rule_shapes_ok && report.primitive && report.group_compatible != Some(false);
            Ok(if ok { Outcome::Success } else { Outcome::PropertyFailed })
        }
        Command::Spaces(SpacesCmd::Sample { space, seed, out }) => {
            let sys = Spaces::default().resolve(&space)?;
            emit_json(out.as_deref(), &sample_hull(&sys, 1, seed)[0])?;
            Ok(Outcome::Success)
        }
        Command::Patches(PatchesCmd::Enumerate { space, radius, out }) => {
            let sys = Spaces::default().resolve(&space)?;
            let census = enumerate_patch_classes(&sys, &radius)?;
            let classes: Vec<Value> = census
                .classes
                .iter()
                .map(|(class, regions)| {
                    json!({
                        "cells": class.tiles.iter().map(|(c, _)| c[..sys.dim].to_vec()).collect::<Vec<_>>(),
                        "labels": class.tiles.iter().map(|(_, l)| sys.label_name(*l)).collect::<Vec<_>>(),
                        "regions": regions,
                    })
                })
                .collect();
            emit_json(
                out.as_deref(),
                &json!({ "space": sys.name, "radius": radius, "census": census.count(), "classes": classes }),
            )?;
            Ok(Outcome::Success)
        }
        Command::Approximant(ApproximantCmd::Build {
            space,
            radius,
            out,
            summary,
        }) => {
            let sys = Spaces::default().resolve(&space)?;
            let section = build_section(sys.clone(), radius.clone())?;
            emit_json(Some(&out), &section.export())?;
            if let Some(path) = summary {
                emit_json(Some(&path), &approximant_summary(&sys, &radius)?)?;
            }
            eprintln!("{} classes at radius {radius}", section.census());
            Ok(Outcome::Success)
        }
        Command::Map(MapCmd::CheckLocal {
            map,
            radius,
            samples,
            seed,
            space,
        }) => {
            let spaces = spaces_with(&space)?;
            let f = load_pipeline(&map, &spaces)?;
            let verdict = check_local(&f, &radius, samples, seed)?;
            let witness = verdict.counterexample.as_ref().map(|(a, b)| json!([a, b]));
            emit_json(
                None,
                &json!({ "radius": radius, "checked": verdict.checked, "pass": verdict.pass, "seed": seed, "counterexample": witness }),
            )?;
            Ok(if verdict.pass {
                Outcome::Success
            } else {
                Outcome::PropertyFailed
            })
        }
        Command::Map(MapCmd::Apply {
            map,
            input,
            radius,
            space,
            out,
        }) => {
            let spaces = spaces_with(&space)?;
            let f = load_pipeline(&map, &spaces)?;
            let t = load_tiling(&f.source, &input)?;
            let patch = f.apply(&t.place(&f.source)?, &radius)?;
            emit_json(out.as_deref(), &patch_json(&patch, &f.target))?;
            Ok(Outcome::Success)
        }
        Command::Localize(args) => {
            let spaces = spaces_with(&args.space)?;
            let f = load_pipeline(&args.map, &spaces)?;
            let (fe, section_ref) = match &args.section {
                None => (localize(f, &args.epsilon)?, None),
                Some(path) => {
                    let params = choose_parameters(&f, &args.epsilon)?;
                    let file: SectionFile = read_json(path)?;
                    if file.radius != params.radius {
                        return Err(Error::parse(
                            "--section",
                            format!("section radius {} differs from R = {}", file.radius, params.radius),
                        ));
                    }
                    let section = Section::import(f.source.clone(), &file)?;
                    let scheme = MollifierScheme::standard(f.source.dim);
                    let fe = LocalizedMap::new(Arc::new(f), Arc::new(section), Arc::new(scheme), params)?;
                    (fe, Some(std::fs::canonicalize(path)?.display().to_string()))
                }
            };
            emit_json(Some(&args.out), &localized_to_file(&fe, section_ref))?;
            let report = parameter_report(&fe);
            eprintln!(
                "δ = {}, R = {}, locality radius {}",
                fe.params.delta,
                fe.params.radius,
                fe.locality_radius()
            );
            if let Some(path) = &args.report {
                emit_json(Some(path), &report)?;
            }
            Ok(if report.passed() {
                Outcome::Success
            } else {
                Outcome::PropertyFailed
            })
        }
        Command::Homotopy(HomotopyCmd::Localize {
            family,
            epsilon,
            grid,
            space,
            out,
        }) => {
            let spaces = spaces_with(&space)?;
            let file: FamilyFile = read_json(&family)?;
            let fam = family_from_file(&file, &spaces).map_err(|e| in_file(&family, e))?;
            let h = homotopy_localize(fam, &epsilon, grid)?;
            emit_json(Some(&out), &homotopy_to_file(&h))?;
            eprintln!(
                "δ = {}, R = {}, {} slices",
                h.params.delta,
                h.params.radius,
                h.slices.len()
            );
            Ok(Outcome::Success)
        }
        Command::Equivariant(EquivariantCmd::Localize {
            map,
            group,
            epsilon,
            space,
            out,
        }) => {
            let spaces = spaces_with(&space)?;
            let f = load_pipeline(&map, &spaces)?;
            let g = f
                .source
                .group
                .clone()
                .filter(|g| format!("C{}", g.order) == group)
                .ok_or_else(|| Error::parse("--group", format!("space '{}' has no group {group}", f.source.name)))?;
            let fe = equivariant_localize(f, &epsilon, &g)?;
            emit_json(Some(&out), &localized_to_file(&fe, None))?;
            eprintln!("δ = {}, R = {}", fe.params.delta, fe.params.radius);
            Ok(Outcome::Success)
        }
        Command::Verify(cmd) => {
            let (args, suite) = match cmd {
                VerifyCmd::Theorem1(a) => (a, 1),
                VerifyCmd::Theorem2(a) => (a, 2),
                VerifyCmd::Theorem3(a) => (a, 3),
            };
            let spaces = spaces_with(&args.space)?;
            let report = match suite {
                1 => verify_theorem1(&load_localized(&args.input, &spaces)?, args.samples, args.seed)?,
                2 => {
                    let file: HomotopyFile = read_json(&args.input)?;
                    let h = homotopy_from_file(&file, &spaces).map_err(|e| in_file(&args.input, e))?;
                    verify_theorem2(&h, args.samples, args.seed)?
                }
                _ => {
                    let fe = load_localized(&args.input, &spaces)?;
                    if fe.group.is_none() {
                        return Err(Error::parse("group", "theorem3 needs an equivariant localization"));
                    }
                    verify_theorem3(&fe, args.samples, args.seed)?
                }
            };
            finish_report(&report, args.out.as_deref())
        }
        Command::Metric(args) => {
            let sys = Spaces::default().resolve(&args.space)?;
            let a = load_tiling(
                &sys,
                &TilingInput {
                    tiling: Some(args.a),
                    seed: None,
                },
            )?;
            let b = load_tiling(
                &sys,
                &TilingInput {
                    tiling: Some(args.b),
                    seed: None,
                },
            )?;
            emit_json(None, &tiling_metric_bounds(&sys, &a, &b, args.depth)?)?;
            Ok(Outcome::Success)
        }
        Command::Plot(PlotCmd::Patch {
            space,
            input,
            radius,
            out,
        }) => {
            let sys = Spaces::default().resolve(&space)?;
            let t = load_tiling(&sys, &input)?;
            let patch = central_patch(&t.place(&sys)?, &radius)?;
            emit(out.as_deref(), &render_patch(&patch, &sys))?;
            Ok(Outcome::Success)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Parameter(_) | Error::Structural(_) | Error::Io(_) | Error::Json(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = std::env::var("TILELOCAL_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::PropertyFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
