use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adsein::domain::{default_boundary_grid, InvisibleDomain};
use adsein::fixtures::{
    build_fixture, random_probes, run_suite, schottky_domain, FixtureKind, SampleParams,
    SuiteOptions, SUITES,
};
use adsein::forms::{change_basis, AmbientVector, FormBasis};
use adsein::geodesics::expansion_probe;
use adsein::groups::{cartan_summary, GroupElement};
use adsein::io::parse_generators;
use adsein::limit_sets::{
    approximate_limit_set, certify_negative, parse_word, GroupPresentation, LimitSetSample,
    RelationHint,
};
use adsein::nalgebra::DVector;
use adsein::projective::ProjectivePoint;
use adsein::sphere::sphere_grid;
use adsein::GeometryError;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "adsein",
    version,
    about = "Geometry of O(2,n) acting on Einstein and anti-de Sitter space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SampledFixture {
    Schottky,
    Cyclic,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainFixture {
    Schottky,
    Fuchsian,
    Join,
}

#[derive(Subcommand)]
enum Command {
    /// Cartan decomposition of every matrix in a generator file.
    Cartan {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the limit set of a generated group and certify negativity.
    Limitset {
        #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        fixture: Option<SampledFixture>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, default_value_t = 10.0)]
        gap_min: f64,
        #[arg(long, default_value_t = 1e-4)]
        dedupe: f64,
        /// Treat the generators as possibly satisfying relations.
        #[arg(long)]
        relations: bool,
        /// CSV of sampled points.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the invisible domain and export envelope and region tables.
    Domain {
        #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
        limit_set: Option<PathBuf>,
        #[arg(long, value_enum)]
        fixture: Option<DomainFixture>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Dimension of the sphere in the join fixture.
        #[arg(long, default_value_t = 0)]
        p: usize,
        #[arg(long, default_value_t = 2.0 * PI / 512.0)]
        mesh: f64,
        #[arg(long, default_value_t = 9)]
        max_len: usize,
        #[arg(long, default_value_t = 2000)]
        probes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory for `envelope.csv` and `regions.csv`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Expansion probe of a group word at a projective point.
    Geodesics {
        #[arg(long)]
        input: PathBuf,
        /// Word in the generators, `a` for the first, `A` for its inverse.
        #[arg(long, default_value = "a")]
        word: String,
        /// Comma-separated coordinates in the basis of the generator file;
        /// defaults to the first basis vector. Reported points are in the
        /// diagonal basis.
        #[arg(long)]
        point: Option<String>,
        #[arg(long, default_value_t = 0.5)]
        radius: f64,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2.0 * PI / 512.0)]
        mesh: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// JSON report file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// OBJ surfaces of f⁺, f⁻ and the future horizon for n = 2.
    ExportMesh {
        #[arg(long, value_enum, default_value = "schottky")]
        fixture: DomainFixture,
        #[arg(long, default_value_t = 2.0 * PI / 512.0)]
        mesh: f64,
        #[arg(long, default_value_t = 9)]
        max_len: usize,
        #[arg(long, default_value_t = 48)]
        rings: usize,
        #[arg(long, default_value_t = 96)]
        sectors: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Input(String),
    Bound(String),
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_elements(path: &Path) -> Result<Vec<GroupElement>, Failure> {
    Ok(parse_generators(&read(path)?)?.elements()?)
}

fn cartan(input: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = String::from("index,lambda,mu,gap,identity_component,reconstruction_error\n");
    for (i, g) in load_elements(input)?.iter().enumerate() {
        let s = cartan_summary(g)?;
        text.push_str(&format!(
            "{i},{:e},{:e},{:e},{},{:e}\n",
            s.lambda, s.mu, s.gap, s.identity_component, s.reconstruction_error
        ));
    }
    emit(out, &text)
}

fn presentation(
    input: Option<&Path>,
    fixture: Option<SampledFixture>,
    n: usize,
    relations: bool,
) -> Result<GroupPresentation, Failure> {
    let hint = if relations {
        RelationHint::Unknown
    } else {
        RelationHint::Free
    };
    if let Some(path) = input {
        return Ok(GroupPresentation::new(load_elements(path)?, hint)?);
    }
    let kind = match fixture {
        Some(SampledFixture::Schottky) => FixtureKind::SchottkyO12inO22 { separation: 2.0 },
        _ => FixtureKind::CyclicProximal {
            n,
            lambda: 3.0,
            mu: 1.0,
        },
    };
    build_fixture(kind, 1.0)?
        .presentation
        .ok_or_else(|| Failure::Input("fixture has no generators".into()))
}

#[allow(clippy::too_many_arguments)]
fn limitset(
    input: Option<&Path>,
    fixture: Option<SampledFixture>,
    n: usize,
    max_len: usize,
    gap_min: f64,
    dedupe: f64,
    relations: bool,
    out: Option<&Path>,
) -> Result<(), Failure> {
    if max_len == 0 {
        return Err(GeometryError::EmptySample.into());
    }
    let g = presentation(input, fixture, n, relations)?;
    let s = approximate_limit_set(&g, max_len, gap_min, dedupe)?;
    let negativity = if s.len() >= 2 {
        let r = certify_negative(&s)?;
        json!({ "negative": r.negative, "worst": r.worst, "worst_pair": r.worst_pair })
    } else {
        serde_json::Value::Null
    };
    let report = json!({
        "points": s.len(),
        "invariance_residual": s.invariance_residual,
        "negativity": negativity,
    });
    if let Some(path) = out {
        write(path, &s.to_csv())?;
    }
    println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    Ok(())
}

fn domain_for(
    limit_set: Option<&Path>,
    fixture: Option<DomainFixture>,
    n: usize,
    p: usize,
    mesh: f64,
    max_len: usize,
) -> Result<InvisibleDomain, Failure> {
    if let Some(path) = limit_set {
        let s = LimitSetSample::from_csv(&read(path)?, mesh)?;
        return Ok(InvisibleDomain::build(s, mesh)?);
    }
    let kind = match fixture {
        Some(DomainFixture::Fuchsian) => FixtureKind::FuchsianLatticeSphere { n },
        Some(DomainFixture::Join) => FixtureKind::JoinSpheres { p, n },
        _ => return Ok(schottky_domain(mesh, max_len)?.1),
    };
    let f = build_fixture(kind, mesh)?;
    Ok(f.domain(SampleParams::default(), default_boundary_grid(n, mesh))?)
}

fn geodesics(
    input: &Path,
    word: &str,
    point: Option<&str>,
    radius: f64,
    trials: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let g = GroupPresentation::new(load_elements(input)?, RelationHint::Free)?;
    let letters = parse_word(word)?;
    if letters.iter().any(|l| *l >= g.letter_count()) {
        return Err(Failure::Input(format!(
            "word `{word}` uses a missing generator"
        )));
    }
    let first = g.generators()[0].clone();
    let w = letters.iter().fold(
        GroupElement::identity(first.dim(), first.basis()),
        |acc, l| acc.compose(g.letter(*l)),
    );
    let rep: Vec<f64> = match point {
        Some(s) => s
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<f64>()
                    .map_err(|_| Failure::Input(format!("bad coordinate `{c}`")))
            })
            .collect::<Result<_, _>>()?,
        None => {
            let mut e = vec![0.0; w.dim()];
            e[0] = 1.0;
            e
        }
    };
    if rep.len() != w.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: w.dim(),
            found: rep.len(),
        }
        .into());
    }
    let v = AmbientVector::new(DVector::from_column_slice(&rep), first.basis());
    let p = ProjectivePoint::new(change_basis(&v, FormBasis::Diagonal).coords);
    let r = expansion_probe(&w, &p, radius, trials, seed)?;
    let report = json!({
        "word": word,
        "c_est": r.c_est,
        "samples": r.samples,
        "witness_point": r.witness_point.rep().as_slice(),
    });
    emit(
        out,
        &format!("{}\n", serde_json::to_string_pretty(&report).expect("json")),
    )
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Cartan { input, out } => cartan(&input, out.as_deref()),
        Command::Limitset {
            input,
            fixture,
            n,
            max_len,
            gap_min,
            dedupe,
            relations,
            out,
        } => limitset(
            input.as_deref(),
            fixture,
            n,
            max_len,
            gap_min,
            dedupe,
            relations,
            out.as_deref(),
        ),
        Command::Domain {
            limit_set,
            fixture,
            n,
            p,
            mesh,
            max_len,
            probes,
            seed,
            out,
        } => {
            if !mesh.is_finite() || mesh <= 0.0 || n < 2 {
                return Err(Failure::Input("need mesh > 0 and n ≥ 2".into()));
            }
            let d = domain_for(limit_set.as_deref(), fixture, n, p, mesh, max_len)?;
            let dim = d.sphere_dim();
            let grid = sphere_grid(dim, 4000, seed);
            write(&out.join("envelope.csv"), &d.envelope_csv(&grid))?;
            let pts = random_probes(dim, probes, d.center(), seed);
            write(&out.join("regions.csv"), &d.region_csv(&pts, 2.0 * mesh)?)?;
            eprintln!(
                "limit set: {} points, conformal boundary samples: {}",
                d.lambda().len(),
                d.boundary_size()
            );
            Ok(())
        }
        Command::Geodesics {
            input,
            word,
            point,
            radius,
            trials,
            seed,
            out,
        } => geodesics(
            &input,
            &word,
            point.as_deref(),
            radius,
            trials,
            seed,
            out.as_deref(),
        ),
        Command::Verify {
            suite,
            n,
            mesh,
            seed,
            max_len,
            out,
        } => {
            if !mesh.is_finite() || mesh <= 0.0 || n < 2 {
                return Err(Failure::Input("need mesh > 0 and n ≥ 2".into()));
            }
            let report = run_suite(
                &suite,
                SuiteOptions {
                    n,
                    mesh,
                    seed,
                    max_len,
                },
            )?;
            let text = format!("{}\n", serde_json::to_string_pretty(&report).expect("json"));
            emit(out.as_deref(), &text)?;
            if report.passed {
                Ok(())
            } else {
                let failed: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.name.as_str())
                    .collect();
                Err(Failure::Bound(format!(
                    "failed checks: {}",
                    failed.join(", ")
                )))
            }
        }
        Command::ExportMesh {
            fixture,
            mesh,
            max_len,
            rings,
            sectors,
            out,
        } => {
            let d = domain_for(None, Some(fixture), 2, 0, mesh, max_len)?;
            write(&out, &d.export_obj(rings, sectors)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Bound(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
