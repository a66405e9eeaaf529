use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use patchwork::bounds::{bounds_report, BoundsReport};
use patchwork::complex::{
    betti, build_tmanifold, cell_census, connected_components, contains, CellCensus, TManifold,
};
use patchwork::glued::{betti_glued, build_glued};
use patchwork::intersection::{intersect, validate_orientation};
use patchwork::io;
use patchwork::lattice::{binomial, Triangulation, TriangulationReport};
use patchwork::maxcurve::{
    build_family, cycle_census, verify_maximality, CycleCensus, CycleClasses, MaximalityVerdict,
};
use patchwork::mesh::{build_mesh, to_obj, to_off};
use patchwork::phase::{validate_rps, RealPhaseStructure, RpsReport};

#[derive(Parser)]
#[command(name = "patchwork", version, about = "Combinatorial patchworking of real phase structures")]
struct Cli {
    /// Print machine-readable JSON reports.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a triangulation and optionally a phase structure on it.
    Validate { tri: PathBuf, rps: Option<PathBuf> },
    /// F2 homology and cell census of a T-manifold.
    Homology { tri: PathBuf, rps: PathBuf },
    /// Dual graph, Harnack and volume bounds, Hodge numbers.
    Bounds { tri: PathBuf },
    /// Stable intersection of two structures along an edge orientation.
    Intersect {
        tri: PathBuf,
        first: PathBuf,
        second: PathBuf,
        orientation: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Build the maximal curve and surface of degree d.
    Maxcurve {
        d: i64,
        /// Classify the components of the curve.
        #[arg(long)]
        census: bool,
        /// Write the triangulation, signs, orientation, structures and meshes here.
        #[arg(long)]
        export_dir: Option<PathBuf>,
    },
    /// Mesh of a T-manifold in dimension 3.
    Export {
        tri: PathBuf,
        rps: PathBuf,
        #[arg(long, value_enum)]
        format: MeshFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cells and Betti numbers of the glued space.
    Glued {
        tri: PathBuf,
        #[arg(long)]
        betti: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MeshFormat {
    Off,
    Obj,
}

/// A failure already explained by a printed report.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Rejected(String);

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let internal = e
                .chain()
                .any(|c| c.downcast_ref::<patchwork::error::Error>().is_some_and(|e| e.is_internal()));
            ExitCode::from(if internal { 2 } else { 1 })
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("PATCHWORK_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().with_context(|| format!("PATCHWORK_THREADS={v:?} is not a number"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Validate { tri, rps } => validate(cli.json, tri, rps.as_deref()),
        Command::Homology { tri, rps } => homology(cli.json, tri, rps),
        Command::Bounds { tri } => {
            let t = io::load_triangulation(tri)?;
            let r = bounds_report(&t)?;
            emit(cli.json, &r, render_bounds)
        }
        Command::Intersect { tri, first, second, orientation, output } => {
            intersect_cmd(cli.json, tri, first, second, orientation, output)
        }
        Command::Maxcurve { d, census, export_dir } => maxcurve(cli.json, *d, *census, export_dir.as_deref()),
        Command::Export { tri, rps, format, output } => export(tri, rps, *format, output.as_deref()),
        Command::Glued { tri, betti } => glued(cli.json, tri, *betti),
    }
}

fn emit<T: Serialize>(json: bool, value: &T, human: impl Fn(&T) -> String) -> anyhow::Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        print!("{}", human(value));
    }
    Ok(())
}

fn load_structure(tri: &Triangulation, path: &Path) -> anyhow::Result<RealPhaseStructure> {
    let text = io::read_text(path)?;
    io::structure_from_json(tri, &text).with_context(|| format!("loading {}", path.display()))
}

#[derive(Serialize)]
struct TriangulationSummary {
    valid: bool,
    dim: usize,
    vertices: usize,
    maximal_simplices: usize,
    volume: u64,
    problems: Vec<String>,
}

#[derive(Serialize)]
struct StructureSummary {
    valid: bool,
    codim: usize,
    direction_failures: Vec<String>,
    parity_failures: Vec<ParityFailure>,
}

#[derive(Serialize)]
struct ParityFailure {
    simplex: String,
    orthant: String,
}

#[derive(Serialize)]
struct ValidateReport {
    triangulation: TriangulationSummary,
    structure: Option<StructureSummary>,
}

fn summarize_triangulation(t: &Triangulation, r: &TriangulationReport) -> TriangulationSummary {
    TriangulationSummary {
        valid: r.is_valid(),
        dim: t.dim(),
        vertices: t.num_vertices(),
        maximal_simplices: r.maximal_simplices,
        volume: r.determinant_volume,
        problems: r.problems(),
    }
}

fn summarize_structure(rps: &RealPhaseStructure, r: &RpsReport) -> StructureSummary {
    StructureSummary {
        valid: r.is_valid(),
        codim: rps.codim(),
        direction_failures: r.direction_failures.iter().map(|s| s.to_string()).collect(),
        parity_failures: r
            .parity_failures
            .iter()
            .map(|(s, o)| ParityFailure { simplex: s.to_string(), orthant: o.clone() })
            .collect(),
    }
}

fn validate(json: bool, tri: &Path, rps: Option<&Path>) -> anyhow::Result<()> {
    let t = io::load_triangulation(tri)?;
    let tr = t.validate();
    let triangulation = summarize_triangulation(&t, &tr);
    let structure = match rps {
        Some(p) if tr.is_valid() => {
            let e = load_structure(&t, p)?;
            let r = validate_rps(&t, &e)?;
            Some(summarize_structure(&e, &r))
        }
        _ => None,
    };
    let report = ValidateReport { triangulation, structure };
    emit(json, &report, render_validate)?;
    let mut bad = Vec::new();
    if !report.triangulation.valid {
        bad.push(format!("triangulation {} is invalid", tri.display()));
    }
    if let Some(s) = &report.structure {
        if !s.valid {
            let first = s
                .direction_failures
                .first()
                .map(|x| format!("wrong direction on {x}"))
                .or_else(|| s.parity_failures.first().map(|f| format!("parity fails on {} at {}", f.simplex, f.orthant)))
                .unwrap_or_default();
            bad.push(format!("structure is invalid: {first}"));
        }
    }
    if !bad.is_empty() {
        return Err(Rejected(bad.join("; ")).into());
    }
    Ok(())
}

fn render_validate(r: &ValidateReport) -> String {
    let mut out = String::new();
    let t = &r.triangulation;
    writeln!(
        out,
        "triangulation: dim {} vertices {} simplices {} volume {} -> {}",
        t.dim,
        t.vertices,
        t.maximal_simplices,
        t.volume,
        if t.valid { "valid" } else { "INVALID" }
    )
    .ok();
    for p in &t.problems {
        writeln!(out, "  {p}").ok();
    }
    if let Some(s) = &r.structure {
        writeln!(out, "structure: codim {} -> {}", s.codim, if s.valid { "valid" } else { "INVALID" }).ok();
        for d in &s.direction_failures {
            writeln!(out, "  direction failure on {d}").ok();
        }
        for f in &s.parity_failures {
            writeln!(out, "  parity failure on {} at orthant {}", f.simplex, f.orthant).ok();
        }
    }
    out
}

#[derive(Serialize)]
struct HomologyReport {
    codim: usize,
    dim: usize,
    cell_counts: Vec<usize>,
    betti: Vec<usize>,
    euler_characteristic: i64,
    components: usize,
    census: CellCensus,
    expected_max_cells: u64,
}

fn tmanifold_report(t: &Triangulation, tm: &TManifold) -> HomologyReport {
    let n = t.dim();
    let k = tm.codim();
    let vol = patchwork::bounds::volume(t);
    HomologyReport {
        codim: k,
        dim: tm.dim(),
        cell_counts: tm.complex().counts.clone(),
        betti: betti(tm),
        euler_characteristic: tm.complex().euler_characteristic(),
        components: connected_components(tm).count,
        census: cell_census(tm),
        expected_max_cells: (k..=n).map(|i| binomial(n as u64, i as u64)).sum::<u64>() * vol,
    }
}

fn homology(json: bool, tri: &Path, rps: &Path) -> anyhow::Result<()> {
    let t = io::load_triangulation(tri)?;
    let e = load_structure(&t, rps)?;
    let gc = build_glued(&t)?;
    let tm = build_tmanifold(&t, &gc, &e)?;
    emit(json, &tmanifold_report(&t, &tm), render_homology)
}

fn render_homology(r: &HomologyReport) -> String {
    let mut out = String::new();
    writeln!(out, "T-manifold of codimension {} (dimension {})", r.codim, r.dim).ok();
    writeln!(out, "{:>4} {:>8} {:>6}", "m", "cells", "b_m").ok();
    for (m, c) in r.cell_counts.iter().enumerate() {
        writeln!(out, "{m:>4} {c:>8} {:>6}", r.betti.get(m).copied().unwrap_or(0)).ok();
    }
    writeln!(out, "components: {}", r.components).ok();
    writeln!(out, "euler characteristic: {}", r.euler_characteristic).ok();
    writeln!(
        out,
        "maximal cells: {} (expected {}), simplicial: {}",
        r.census.max_cells, r.expected_max_cells, r.census.simplicial_max_cells
    )
    .ok();
    out
}

fn render_bounds(r: &BoundsReport) -> String {
    let mut out = String::new();
    let rows: Vec<(&str, String)> = vec![
        ("dimension", r.n.to_string()),
        ("volume", r.volume.to_string()),
        ("boundary volume", r.boundary_volume.to_string()),
        ("b1 of dual graph", r.b1_graph.to_string()),
        ("b1 from volumes", r.b1_formula.to_string()),
        ("dual graph planar", r.planar.to_string()),
        ("curve components <= b1 + 1", r.harnack_bound.to_string()),
        ("curve components <= volume bound", r.curve_volume_bound.to_string()),
        ("surface components <=", r.surface_bound.map_or("-".into(), |b| b.to_string())),
        ("codegree", r.codegree.to_string()),
        ("interior lattice point", r.interior_point.to_string()),
        ("maximal curve possible", r.maximal_curve_possible.to_string()),
    ];
    for (k, v) in rows {
        writeln!(out, "{k:<34} {v}").ok();
    }
    for (k, h) in r.hodge.iter().enumerate() {
        writeln!(out, "h^(0,q) for codimension {}: {h:?}", k + 1).ok();
    }
    out
}

#[derive(Serialize)]
struct IntersectReport {
    codim: usize,
    valid: bool,
    contained_in_first: bool,
    contained_in_second: bool,
    output: String,
}

fn intersect_cmd(
    json: bool,
    tri: &Path,
    first: &Path,
    second: &Path,
    orientation: &Path,
    output: &Path,
) -> anyhow::Result<()> {
    let t = io::load_triangulation(tri)?;
    let e1 = load_structure(&t, first)?;
    let e2 = load_structure(&t, second)?;
    let o = io::orientation_from_json(&t, &io::read_text(orientation)?)
        .with_context(|| format!("loading {}", orientation.display()))?;
    validate_orientation(&t, &o)?;
    let e = intersect(&t, &e1, &e2, &o)?;
    let valid = validate_rps(&t, &e)?.is_valid();
    io::write_text(output, &io::rps_to_json(&t, &e))?;
    let report = IntersectReport {
        codim: e.codim(),
        valid,
        contained_in_first: contains(&t, &e1, &e)?,
        contained_in_second: contains(&t, &e2, &e)?,
        output: output.display().to_string(),
    };
    emit(json, &report, |r| {
        format!(
            "wrote {}-structure to {}\nvalid: {}\ncontained in first: {}\ncontained in second: {}\n",
            r.codim, r.output, r.valid, r.contained_in_first, r.contained_in_second
        )
    })
}

#[derive(Serialize)]
struct MaxcurveReport {
    #[serde(flatten)]
    verdict: MaximalityVerdict,
    census: Option<CensusReport>,
    exported: Vec<String>,
}

#[derive(Serialize)]
struct CensusReport {
    #[serde(flatten)]
    census: CycleCensus,
    expected: CycleClasses,
}

fn maxcurve(json: bool, d: i64, census: bool, export_dir: Option<&Path>) -> anyhow::Result<()> {
    let verdict = verify_maximality(d)?;
    let pair = if census || export_dir.is_some() { Some(build_family(d)?) } else { None };
    let census = match (&pair, census) {
        (Some(p), true) => Some(CensusReport {
            census: cycle_census(&p.floor, &p.curve)?,
            expected: CycleClasses::expected(d),
        }),
        _ => None,
    };
    let mut exported = Vec::new();
    if let (Some(p), Some(dir)) = (&pair, export_dir) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let t = &p.floor.triangulation;
        let mut files: Vec<(&str, String)> = vec![
            ("triangulation.json", io::triangulation_to_json(t)),
            ("signs.json", io::signs_to_json(&p.floor.mu)),
            ("orientation.json", io::orientation_to_json(t, &p.floor.orientation)),
            ("surface.rps.json", io::rps_to_json(t, &p.surface_structure)),
            ("curve.rps.json", io::rps_to_json(t, &p.curve_structure)),
            ("surface.off", to_off(&build_mesh(t, &p.surface_structure, &p.surface)?)?),
            ("curve.obj", to_obj(&build_mesh(t, &p.curve_structure, &p.curve)?)),
        ];
        if let Some(c) = &census {
            files.push(("census.json", serde_json::to_string_pretty(c)?));
        }
        for (name, text) in files {
            let path = dir.join(name);
            io::write_text(&path, &text)?;
            exported.push(path.display().to_string());
        }
    }
    let pass = verdict.pass;
    let report = MaxcurveReport { verdict, census, exported };
    emit(json, &report, render_maxcurve)?;
    if !pass {
        bail!(patchwork::error::Error::invariant(report.verdict.problems.join("; ")));
    }
    Ok(())
}

fn render_maxcurve(r: &MaxcurveReport) -> String {
    let v = &r.verdict;
    let mut out = String::new();
    writeln!(out, "degree {}", v.d).ok();
    writeln!(out, "curve components: {} (expected {}, b1 + 1 = {})", v.components, v.expected_components, v.b1_graph + 1).ok();
    writeln!(out, "dual graph planar: {}", v.planar).ok();
    writeln!(
        out,
        "surface Betti numbers: {:?}, total {} (expected {})",
        v.surface_betti, v.surface_total, v.expected_surface_total
    )
    .ok();
    if let Some(c) = &r.census {
        let got = &c.census.classified;
        let exp = &c.expected;
        writeln!(out, "{:<14} {:>6} {:>9}", "family", "found", "expected").ok();
        let rows = [
            ("horizontal", got.horizontal, exp.horizontal),
            ("transversal", got.transversal, exp.transversal),
            ("pure join", got.pure_join, exp.pure_join),
            ("boundary join", got.boundary_join, exp.boundary_join),
            ("axisless", got.axisless, exp.axisless),
            ("global", got.global, exp.global),
        ];
        for (name, a, b) in rows {
            writeln!(out, "{name:<14} {a:>6} {b:>9}").ok();
        }
        writeln!(out, "{:<14} {:>6} {:>9}", "total", c.census.total, exp.total()).ok();
        writeln!(out, "all components are circles: {}", c.census.all_circles).ok();
    }
    for f in &r.exported {
        writeln!(out, "wrote {f}").ok();
    }
    writeln!(out, "{}", if v.pass { "PASS" } else { "FAIL" }).ok();
    out
}

fn export(tri: &Path, rps: &Path, format: MeshFormat, output: Option<&Path>) -> anyhow::Result<()> {
    let t = io::load_triangulation(tri)?;
    let e = load_structure(&t, rps)?;
    let gc = build_glued(&t)?;
    let tm = build_tmanifold(&t, &gc, &e)?;
    let mesh = build_mesh(&t, &e, &tm)?;
    let text = match format {
        MeshFormat::Off => to_off(&mesh)?,
        MeshFormat::Obj => to_obj(&mesh),
    };
    match output {
        Some(p) => io::write_text(p, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct GluedReport {
    dim: usize,
    cell_counts: Vec<usize>,
    euler_characteristic: i64,
    betti: Option<Vec<usize>>,
}

fn glued(json: bool, tri: &Path, with_betti: bool) -> anyhow::Result<()> {
    let t = io::load_triangulation(tri)?;
    let gc = build_glued(&t)?;
    let report = GluedReport {
        dim: t.dim(),
        cell_counts: gc.complex().counts.clone(),
        euler_characteristic: gc.complex().euler_characteristic(),
        betti: with_betti.then(|| betti_glued(&gc)),
    };
    emit(json, &report, |r| {
        let mut out = String::new();
        writeln!(out, "glued space of dimension {}", r.dim).ok();
        writeln!(out, "{:>4} {:>8} {:>6}", "m", "cells", "b_m").ok();
        for (m, c) in r.cell_counts.iter().enumerate() {
            let b = r.betti.as_ref().map_or("-".into(), |b| b[m].to_string());
            writeln!(out, "{m:>4} {c:>8} {b:>6}").ok();
        }
        writeln!(out, "euler characteristic: {}", r.euler_characteristic).ok();
        out
    })
}
