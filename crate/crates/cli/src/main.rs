//! `assocfold`: build, fold and verify exact generalized associahedra.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 internal error.
//! Errors are reported on stderr as a JSON object.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use assocfold::affine::{forms_to_json, mesh_residuals, propagate_forms, ParamSet};
use assocfold::arquiver::knit;
use assocfold::error::{Error, Result};
use assocfold::exactfield::{parse_rational, rationals};
use assocfold::export::{export_json, export_off, polytope_json, section_json, to_json_string};
use assocfold::folding::{load_folding, supported_foldings, validate_folding, FoldSpec};
use assocfold::polytope::{normal_fan, polytope_from_forms, SimplePolytope};
use assocfold::report::{Check, Report};
use assocfold::rootsystem::{build_quiver, CartanType, Orientation};
use assocfold::section::{run_fold, FoldRun};
use assocfold::ExactScalar;

/// Seed for fan-completeness sampling when none is given.
const DEFAULT_SEED: u64 = 20_240_601;
const DEFAULT_SAMPLES: usize = 1000;
/// Ambient polytopes with more vertices than this need `--deep`.
const DEEP_VERTEX_LIMIT: u64 = 10_000;

#[derive(Parser)]
#[command(name = "assocfold", version, about = "Exact generalized associahedra from mesh relations and folding sections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List supported Cartan types with their Coxeter data.
    ListTypes {
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Build the associahedron of a simply-laced type.
    Build(TypeArgs),
    /// Knit the Auslander-Reiten quiver and print the mesh equations.
    Knit(TypeArgs),
    /// Section the associahedron of the unfolded type by the folding plane.
    Fold(FoldArgs),
    /// Run the verification suite for a type or a folding.
    Verify(VerifyArgs),
    /// Write JSON and OFF artifacts for a type or a folding.
    Export(VerifyArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// Positive rational base parameter, e.g. `1` or `3/2`.
    #[arg(long = "c", default_value = "1", allow_hyphen_values = true)]
    c: String,
    /// `bipartite`, or a JSON file of 1-based arrows `[[1,2],[3,2]]`.
    #[arg(long, default_value = "bipartite")]
    orientation: String,
    /// Allow non-bipartite orientations in folded runs.
    #[arg(long)]
    allow_mutations: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Enable runs whose ambient polytope exceeds 10^4 vertices (E8 scale).
    #[arg(long)]
    deep: bool,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    off: Option<PathBuf>,
}

#[derive(Args)]
struct TypeArgs {
    #[arg(long = "type")]
    ty: String,
    /// Print the staggered grid of the knitted quiver.
    #[arg(long)]
    dump: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct FoldArgs {
    #[arg(long)]
    source: Option<String>,
    #[arg(long)]
    target: Option<String>,
    /// Order of a dihedral target given as `--target I2`.
    #[arg(long)]
    m: Option<u32>,
    /// Print the supported foldings and exit.
    #[arg(long)]
    list: bool,
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "type")]
    ty: Option<String>,
    #[arg(long)]
    source: Option<String>,
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    m: Option<u32>,
    #[command(flatten)]
    common: Common,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn parse_type(label: &str, m: Option<u32>) -> Result<CartanType> {
    let l = label.trim().to_ascii_uppercase();
    match (l.as_str(), m) {
        ("I2", Some(m)) => CartanType::I2(m).new_checked(),
        ("I2", None) => Err(invalid("dihedral target I2 needs --m")),
        (_, Some(_)) if !l.starts_with("I2") => Err(invalid("--m only applies to I2 targets")),
        _ => label.parse(),
    }
}

fn parse_base(c: &str) -> Result<ExactScalar> {
    let q = parse_rational(c)?;
    let v = ExactScalar::from_rational(&rationals(), q);
    if !v.is_positive() {
        return Err(invalid(format!("--c must be positive, got {c}")));
    }
    Ok(v)
}

fn parse_orientation(spec: &str) -> Result<Orientation> {
    if spec == "bipartite" {
        return Ok(Orientation::Bipartite);
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let arrows: Vec<[usize; 2]> = serde_json::from_str(&text)?;
    if arrows.iter().any(|a| a[0] == 0 || a[1] == 0) {
        return Err(invalid("orientation arrows are 1-based"));
    }
    Ok(Orientation::Explicit(arrows.iter().map(|a| (a[0] - 1, a[1] - 1)).collect()))
}

fn check_deep(ty: CartanType, deep: bool) -> Result<()> {
    let v = ty.catalan_count();
    if v > DEEP_VERTEX_LIMIT && !deep {
        return Err(invalid(format!("{ty} has {v} clusters; pass --deep to enable runs of this size")));
    }
    Ok(())
}

fn print_json(value: &impl Serialize) -> Result<()> {
    print!("{}", to_json_string(value)?);
    Ok(())
}

struct Ambient {
    ty: CartanType,
    params: ParamSet,
    polytope: SimplePolytope,
}

fn build_ambient(ty: CartanType, common: &Common) -> Result<Ambient> {
    if !ty.is_simply_laced() {
        return Err(invalid(format!("{ty} is not simply-laced; use `fold --target {ty}`")));
    }
    check_deep(ty, common.deep)?;
    let q = build_quiver(ty, parse_orientation(&common.orientation)?)?;
    let mq = knit(&q)?;
    let params = ParamSet::uniform(&mq, &parse_base(&common.c)?)?;
    let polytope = polytope_from_forms(&propagate_forms(&mq, &params)?, &rationals())?;
    Ok(Ambient { ty, params, polytope })
}

fn write_ambient(a: &Ambient, common: &Common) -> Result<()> {
    if let Some(p) = &common.json {
        export_json(&polytope_json(&a.polytope, &a.ty.to_string(), Some(&a.params)), p)?;
    }
    if let Some(p) = &common.off {
        export_off(&a.polytope, p)?;
    }
    Ok(())
}

fn ambient_summary(a: &Ambient) -> serde_json::Value {
    json!({
        "type": a.ty.to_string(),
        "dim": a.polytope.dim,
        "f_vector": a.polytope.f_vector(),
        "catalan": a.ty.catalan_count(),
        "almost_positive_roots": a.ty.almost_positive_count(),
    })
}

fn load_fold(source: Option<&str>, target: Option<&str>, m: Option<u32>, common: &Common) -> Result<FoldSpec> {
    let target = parse_type(target.ok_or_else(|| invalid("--target is required"))?, m)?;
    let source = source.map(|s| s.parse::<CartanType>()).transpose()?;
    let mut fold = load_folding(target, source)?;
    check_deep(fold.source_type(), common.deep)?;
    let orientation = parse_orientation(&common.orientation)?;
    if !matches!(orientation, Orientation::Bipartite) {
        fold = fold.with_orientation(orientation, common.allow_mutations)?;
    }
    Ok(fold)
}

fn fold_run(fold: &FoldSpec, common: &Common) -> Result<FoldRun> {
    let base = parse_base(&common.c)?;
    run_fold(fold, &base)
}

fn write_fold(run: &FoldRun, common: &Common) -> Result<()> {
    if let Some(p) = &common.json {
        export_json(&section_json(run), p)?;
    }
    if let Some(p) = &common.off {
        export_off(&run.section.polytope, p)?;
    }
    Ok(())
}

fn fold_summary(run: &FoldRun) -> serde_json::Value {
    let f = &run.plane.fold;
    json!({
        "source": f.source_type().to_string(),
        "target": f.target_type().to_string(),
        "field": f.field.label(),
        "ambient_f_vector": run.ambient.f_vector(),
        "section_f_vector": run.section.polytope.f_vector(),
        "catalan": f.target_type().catalan_count(),
        "almost_positive_roots": f.target_type().almost_positive_count(),
    })
}

fn fold_report(fold: &FoldSpec, run: &FoldRun, common: &Common) -> Result<Report> {
    let mut report = validate_folding(fold)?;
    report.extend(run.verify(common.samples, common.seed)?);
    Ok(report)
}

fn ambient_report(a: &Ambient, common: &Common) -> Result<Report> {
    let p = &a.polytope;
    let mut r = Report::default();
    let want_v = a.ty.catalan_count() as usize;
    r.push(Check::expect(
        "vertex_count",
        p.vertices.len() == want_v,
        format!("{} vertices, Cat({}) = {want_v}", p.vertices.len(), a.ty),
    ));
    let want_f = a.ty.almost_positive_count() as usize;
    r.push(Check::expect(
        "facet_count",
        p.supporting_facets().len() == want_f,
        format!("{} facets, nh/2 + n = {want_f}", p.supporting_facets().len()),
    ));
    r.push(match p.check_vertices().and_then(|_| p.check_flips()) {
        Ok(()) => Check::pass("simple_flips", "every vertex on exactly n facets; edges are flips"),
        Err(e) => Check::from_witnesses("simple_flips", "simplicity and flips", vec![e.to_string()]),
    });
    let q = build_quiver(a.ty, parse_orientation(&common.orientation)?)?;
    let mq = knit(&q)?;
    let forms = propagate_forms(&mq, &a.params)?;
    let bad: Vec<String> = mesh_residuals(&mq, &forms, &a.params)
        .iter()
        .zip(mq.meshes())
        .filter(|(res, _)| res.linear.iter().any(|&x| x != 0) || !res.constant.is_zero())
        .map(|(_, m)| m.start.to_string())
        .collect();
    r.push(Check::from_witnesses("mesh_relations", format!("{} meshes", mq.meshes().len()), bad));
    let c = normal_fan(p).check_completeness(common.samples, common.seed)?;
    r.push(Check::from_witnesses(
        "fan_complete",
        format!("{} sampled directions, {} resampled on boundaries", c.samples, c.resampled),
        c.failures.iter().map(|(y, k)| format!("{y:?} in {k} cones")).collect(),
    ));
    Ok(r)
}

/// Prints the report and turns a failure into exit code 1.
fn finish(summary: serde_json::Value, report: Report) -> Result<()> {
    let passed = report.passed();
    print_json(&json!({ "summary": summary, "passed": passed, "checks": report.checks }))?;
    report.into_result().map(|_| ())
}

enum Target<'a> {
    Type(CartanType),
    Fold(Option<&'a str>, &'a str, Option<u32>),
}

fn target_of(a: &VerifyArgs) -> Result<Target<'_>> {
    match (&a.ty, &a.target) {
        (Some(t), None) if a.source.is_none() => Ok(Target::Type(t.parse()?)),
        (None, Some(t)) => Ok(Target::Fold(a.source.as_deref(), t, a.m)),
        _ => Err(invalid("give either --type, or --target with an optional --source")),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::ListTypes { json } => {
            let mut types: Vec<CartanType> = Vec::new();
            types.extend((1..=8).map(CartanType::A));
            types.extend((2..=8).map(CartanType::B));
            types.extend((2..=8).map(CartanType::C));
            types.extend((4..=8).map(CartanType::D));
            types.extend((6..=8).map(CartanType::E));
            types.extend([CartanType::F4, CartanType::G2, CartanType::H3, CartanType::H4]);
            types.extend((3..=8).map(CartanType::I2));
            let rows: Vec<serde_json::Value> = types
                .iter()
                .map(|t| {
                    let d = t.coxeter_data();
                    json!({
                        "type": t.to_string(),
                        "rank": t.rank(),
                        "coxeter_number": d.h,
                        "exponents": d.exponents,
                        "simply_laced": t.is_simply_laced(),
                        "field": t.natural_field().label(),
                        "catalan": t.catalan_count(),
                        "almost_positive_roots": t.almost_positive_count(),
                    })
                })
                .collect();
            match json {
                Some(p) => export_json(&rows, &p),
                None => {
                    println!("{:<7} {:>4} {:>4} {:>8} {:>6}  field", "type", "rank", "h", "clusters", "facets");
                    for t in &types {
                        println!(
                            "{:<7} {:>4} {:>4} {:>8} {:>6}  {}",
                            t.to_string(),
                            t.rank(),
                            t.coxeter_data().h,
                            t.catalan_count(),
                            t.almost_positive_count(),
                            t.natural_field().label()
                        );
                    }
                    println!("I2(m) is supported for every m >= 3.");
                    Ok(())
                }
            }
        }
        Command::Build(a) => {
            let ty: CartanType = a.ty.parse()?;
            let amb = build_ambient(ty, &a.common)?;
            write_ambient(&amb, &a.common)?;
            print_json(&ambient_summary(&amb))
        }
        Command::Knit(a) => {
            let ty: CartanType = a.ty.parse()?;
            if !ty.is_simply_laced() {
                return Err(invalid(format!("{ty} is not simply-laced; knitting needs an ADE quiver")));
            }
            let q = build_quiver(ty, parse_orientation(&a.common.orientation)?)?;
            let mq = knit(&q)?;
            if a.dump {
                print!("{}", mq.dump());
            }
            for e in mq.equations() {
                println!("{e}");
            }
            if let Some(p) = &a.common.json {
                let params = ParamSet::uniform(&mq, &parse_base(&a.common.c)?)?;
                let forms = propagate_forms(&mq, &params)?;
                export_json(
                    &json!({
                        "type": ty.to_string(),
                        "equations": mq.equations(),
                        "forms": forms_to_json(&forms),
                    }),
                    p,
                )?;
            }
            Ok(())
        }
        Command::Fold(a) => {
            if a.list {
                let entries = supported_foldings()?;
                for e in &entries {
                    println!("{:<9} -> {:<16} {}", e.source, e.target, e.origin);
                }
                return Ok(());
            }
            let fold = load_fold(a.source.as_deref(), a.target.as_deref(), a.m, &a.common)?;
            let run = fold_run(&fold, &a.common)?;
            write_fold(&run, &a.common)?;
            if a.verify {
                finish(fold_summary(&run), fold_report(&fold, &run, &a.common)?)
            } else {
                print_json(&fold_summary(&run))
            }
        }
        Command::Verify(a) => match target_of(&a)? {
            Target::Type(ty) => {
                let amb = build_ambient(ty, &a.common)?;
                finish(ambient_summary(&amb), ambient_report(&amb, &a.common)?)
            }
            Target::Fold(s, t, m) => {
                let fold = load_fold(s, Some(t), m, &a.common)?;
                let run = fold_run(&fold, &a.common)?;
                finish(fold_summary(&run), fold_report(&fold, &run, &a.common)?)
            }
        },
        Command::Export(a) => {
            if a.common.json.is_none() && a.common.off.is_none() {
                return Err(invalid("export needs --json and/or --off"));
            }
            match target_of(&a)? {
                Target::Type(ty) => write_ambient(&build_ambient(ty, &a.common)?, &a.common),
                Target::Fold(s, t, m) => {
                    let fold = load_fold(s, Some(t), m, &a.common)?;
                    write_fold(&fold_run(&fold, &a.common)?, &a.common)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let message = e.render().to_string();
            eprintln!("{}", json!({ "error": "invalid_input", "message": message.trim(), "exit_code": 2 }));
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.exit_code();
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string(), "exit_code": code }));
            ExitCode::from(code as u8)
        }
    }
}
