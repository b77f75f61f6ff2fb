//! `bridgelab` command line: generate presentations of `L_{m,n}`, check the
//! 2-connected condition, report component invariants, perturb, render.
//!
//! Exit status: 0 when the command succeeds and its condition holds, 1 when a
//! condition fails or a report disagrees with the expected structure, 2 on
//! invalid input.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use bridgelab::bundles::{bundles_at, check_condition, Certificate};
use bridgelab::family::{
    build_h_with_log, build_knot_presentation, build_v_presentation, GeneratorParams,
};
use bridgelab::invariants::{link_report, LinkReport};
use bridgelab::moves::{move_lower_bound, perturb};
use bridgelab::presentation::{format_level, parse_level, Level, PlatPresentation};
use bridgelab::render::{chord_diagram_svg, presentation_svg};

#[derive(Parser)]
#[command(name = "bridgelab", version, about = "Bridge spheres of plat presentations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build L_{m,n} (or K_{m,n}) as a presentation.
    Generate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Comma separated half-twist counts, one per site.
        #[arg(long, value_delimiter = ',')]
        twists: Option<Vec<u32>>,
        /// `default` or comma separated `x:y` sites, bottom row first.
        #[arg(long, default_value = "default")]
        staircase: String,
        /// Sphere the presentation is taken with respect to.
        #[arg(long, default_value = "h", value_parser = ["h", "v"])]
        sphere: String,
        /// Emit the knot K_{m,n} instead of the link.
        #[arg(long)]
        knot: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the construction log here.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Decide the 2-connected condition at the bottom level.
    Check {
        /// Presentation file; standard input when absent or `-`.
        file: Option<PathBuf>,
        /// Levels at which n-bundles are reported.
        #[arg(long)]
        level: Vec<String>,
        /// Write the certificate here and pass the presentation through.
        #[arg(long)]
        emit_cert: Option<PathBuf>,
    },
    /// Report n-bundles of the upper arc system at one level.
    Bundles {
        file: Option<PathBuf>,
        #[arg(long)]
        level: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Components, V-maxima and determinants.
    Invariants {
        file: Option<PathBuf>,
        /// Print one line per component.
        #[arg(long)]
        per_component: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Add one bridge next to a top arc.
    Perturb {
        file: Option<PathBuf>,
        #[arg(long)]
        bridge: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower bound on perturbation and de-perturbation moves.
    Bound {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// SVG of the level diagram, or of the chord diagram at `--level`.
    Render {
        file: Option<PathBuf>,
        #[arg(long)]
        level: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certificate and invariants in one document.
    Report {
        file: Option<PathBuf>,
        #[arg(long)]
        level: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    /// A condition failed; the output was still produced.
    Condition,
    Input(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read_input(file: &Option<PathBuf>) -> Result<PlatPresentation, Failure> {
    let text = match file {
        Some(path) if path.as_os_str() != "-" => fs::read_to_string(path)?,
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let p = PlatPresentation::from_json(&text)?;
    if let Some(v) = p.validate().first() {
        return Err(Failure::Input(format!("invalid presentation: {v}")));
    }
    Ok(p)
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Outcome {
    match out {
        Some(path) if path.as_os_str() != "-" => fs::write(path, text)?,
        _ => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn pretty<T: Serialize>(value: &T) -> Result<String, Failure> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn levels(p: &PlatPresentation, given: &[String]) -> Result<Vec<Level>, Failure> {
    if given.is_empty() {
        // Generated presentations report the bundles at height 2.
        let generated = p.meta.as_ref().and_then(|m| m.m).is_some();
        return Ok(if generated { vec![Level::from_integer(2)] } else { Vec::new() });
    }
    given.iter().map(|s| Ok(parse_level(s)?)).collect()
}

fn parse_staircase(s: &str, m: usize, n: usize) -> Result<GeneratorParams, Failure> {
    let mut params = GeneratorParams::new(m, n)?;
    if s != "default" {
        params.staircase = s
            .split(',')
            .map(|site| {
                let (x, y) = site
                    .split_once(':')
                    .ok_or_else(|| Failure::Input(format!("staircase site {site:?} is not x:y")))?;
                Ok((x.trim().parse::<usize>()?, format_level(&parse_level(y)?)))
            })
            .collect::<Result<_, Failure>>()?;
    }
    Ok(params)
}

#[derive(Serialize)]
struct Report<'a> {
    certificate: &'a Certificate,
    invariants: &'a LinkReport,
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Generate { m, n, twists, staircase, sphere, knot, out, log } => {
            let mut params = parse_staircase(&staircase, m, n)?;
            if let Some(t) = twists {
                params = params.with_twists(t);
            }
            params.validate()?;
            let (h, construction) = build_h_with_log(&params)?;
            let p = match (knot, sphere.as_str()) {
                (true, "v") => return Err(Failure::Input("the knot is only generated with respect to H".into())),
                (true, _) => build_knot_presentation(&params)?,
                (false, "v") => build_v_presentation(&params)?,
                (false, _) => h,
            };
            if let Some(path) = log {
                fs::write(path, construction.to_json() + "\n")?;
            }
            write_output(&out, &(p.to_json() + "\n"))
        }
        Command::Check { file, level, emit_cert } => {
            let p = read_input(&file)?;
            let cert = check_condition(&p, &levels(&p, &level)?)?;
            let text = cert.to_json() + "\n";
            match emit_cert {
                Some(path) => {
                    fs::write(path, text)?;
                    write_output(&None, &(p.to_json() + "\n"))?;
                }
                None => write_output(&None, &text)?,
            }
            eprintln!(
                "condition holds: {}, unperturbed: {}, triples: {}",
                cert.condition_holds,
                cert.unperturbed,
                cert.triples.len()
            );
            if cert.condition_holds {
                Ok(())
            } else {
                Err(Failure::Condition)
            }
        }
        Command::Bundles { file, level, json } => {
            let p = read_input(&file)?;
            let found = bundles_at(&p, &parse_level(&level)?)?;
            write_output(&json, &pretty(&found)?)
        }
        Command::Invariants { file, per_component, json } => {
            let p = read_input(&file)?;
            let report = link_report(&p)?;
            if per_component {
                for c in &report.components {
                    eprintln!(
                        "component {}: V-maxima {}, H-maxima {}, determinant {}, {}",
                        c.label,
                        c.v_maxima,
                        c.h_maxima,
                        c.determinant,
                        serde_json::to_string(&c.classification)?
                    );
                }
            }
            match &json {
                Some(_) => {
                    write_output(&json, &pretty(&report)?)?;
                    write_output(&None, &(p.to_json() + "\n"))?;
                }
                None => write_output(&None, &pretty(&report)?)?,
            }
            if report.matches_expected == Some(false) {
                return Err(Failure::Condition);
            }
            Ok(())
        }
        Command::Perturb { file, bridge, out } => {
            let p = read_input(&file)?;
            let (q, record) = perturb(&p, bridge)?;
            eprintln!("bridge number {} -> {}", record.before, record.after);
            write_output(&out, &(q.to_json() + "\n"))
        }
        Command::Bound { m, n } => write_output(&None, &format!("{}\n", move_lower_bound(m, n)?)),
        Command::Render { file, level, out } => {
            let p = read_input(&file)?;
            let svg = match level {
                Some(s) => chord_diagram_svg(&p, &parse_level(&s)?)?,
                None => presentation_svg(&p),
            };
            write_output(&out, &svg)
        }
        Command::Report { file, level, out } => {
            let p = read_input(&file)?;
            let certificate = check_condition(&p, &levels(&p, &level)?)?;
            let invariants = link_report(&p)?;
            write_output(&out, &pretty(&Report { certificate: &certificate, invariants: &invariants })?)?;
            if certificate.condition_holds && invariants.matches_expected != Some(false) {
                Ok(())
            } else {
                Err(Failure::Condition)
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Condition) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
