//! Command-line front end. Each subcommand parses its inputs, calls the
//! library and renders the result as text or JSON.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::algebra::{AlgebraVector, GradedLieAlgebra, JacobiReport, StratificationReport};
use crate::catalog::{self, AlgebraDefinition, Builder, CatalogEntry};
use crate::curvature::{self, ItemVerdict, Trichotomy};
use crate::error::{Error, Result};
use crate::forms::{self, InvariantForm, ScalingWeight};
use crate::lattice::{self, GroupClosure, LatticeSpec, ScalingClosure};
use crate::predictor::{self, BundleOptions, CoverageTable, GrowthBound, HypothesisBundle};
use crate::rational::{self, Rational};
use crate::subspace::{self, NotFoundReason, SearchConfig, SearchOutcome, SearchStage, Subspace};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(
    name = "carnot",
    version,
    about = "Exact computations on stratified nilpotent Lie algebras"
)]
struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel sections; output does not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the catalog builders, or describe one entry.
    Catalog {
        /// Catalog id such as `heisenberg_o:2`.
        id: Option<String>,
    },
    /// Validate Jacobi, grading and stratification.
    Check { source: String },
    /// Write the algebra definition document.
    Export {
        source: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Certify a horizontal subspace as isotropic and regular.
    Certify {
        source: String,
        #[command(flatten)]
        subspace: SubspaceArgs,
    },
    /// Search for an isotropic regular subspace of a given dimension.
    Search {
        source: String,
        #[arg(long)]
        dim: usize,
        /// Random candidates tried after the coordinate subsets.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Filling and divergence exponent table.
    Predict {
        source: String,
        #[command(flatten)]
        subspace: SubspaceArgs,
        /// Assert the maximal dimension of an isotropic subspace of V_1.
        #[arg(long)]
        max_isotropic_dim: Option<usize>,
        /// Assert a scalable lattice for algebras of nilpotency degree above 2.
        #[arg(long)]
        assert_lattice: bool,
    },
    /// Sectional curvatures of basis planes, with the trichotomy for a subspace.
    Curvature {
        source: String,
        #[command(flatten)]
        subspace: SubspaceArgs,
        /// Assert that the subspace has maximal dimension.
        #[arg(long)]
        maximal: bool,
    },
    /// Kernel of d on 2-forms pairing the second layer with the first.
    Pittet { source: String },
    /// Build and check a scalable lattice, or check given generators.
    Lattice {
        source: String,
        /// JSON file `{"rows": [["p/q", ...], ...]}` with lattice generators.
        #[arg(long)]
        generators_file: Option<PathBuf>,
    },
    /// Differential of a left-invariant form.
    FormsD {
        source: String,
        /// Inline form literal `{"degree": p, "terms": [...]}`.
        #[arg(
            long,
            conflicts_with = "form_file",
            required_unless_present = "form_file"
        )]
        form: Option<String>,
        #[arg(long)]
        form_file: Option<PathBuf>,
    },
    /// Cube form of a subspace and its closedness.
    Cube {
        source: String,
        #[command(flatten)]
        subspace: SubspaceArgs,
        /// Number of leading covectors omitted.
        #[arg(long, default_value_t = 0)]
        omit: usize,
    },
}

#[derive(Debug, Args)]
struct SubspaceArgs {
    /// Comma-separated basis labels, e.g. `h1,h2`.
    #[arg(long, conflicts_with = "subspace_file")]
    subspace: Option<String>,
    /// JSON file `{"rows": [["p/q", ...], ...]}` in basis order.
    #[arg(long)]
    subspace_file: Option<PathBuf>,
}

/// Failure modes of a subcommand before a report exists.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Uncertified(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Report {
    ok: bool,
    text: String,
    json: Value,
}

type Outcome = std::result::Result<Report, Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    CommandResult {
                        exit_code: EXIT_OK,
                        stdout: rendered,
                        stderr: String::new(),
                    }
                }
                _ => CommandResult {
                    exit_code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: rendered,
                },
            };
        }
    };
    let outcome = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
        {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Err(Failure::Usage(format!("thread pool: {e}"))),
        },
        None => dispatch(&cli.command),
    };
    match outcome {
        Ok(report) => CommandResult {
            exit_code: if report.ok {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            },
            stdout: if cli.json {
                let mut s = serde_json::to_string_pretty(&report.json).expect("serializable");
                s.push('\n');
                s
            } else {
                report.text
            },
            stderr: String::new(),
        },
        Err(Failure::Usage(msg)) => CommandResult {
            exit_code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Check(msg)) => CommandResult {
            exit_code: EXIT_CHECK_FAILED,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn dispatch(command: &Command) -> Outcome {
    match command {
        Command::Catalog { id } => cmd_catalog(id.as_deref()),
        Command::Check { source } => cmd_check(source),
        Command::Export { source, output } => cmd_export(source, output.as_deref()),
        Command::Certify { source, subspace } => cmd_certify(source, subspace),
        Command::Search {
            source,
            dim,
            random,
            seed,
        } => cmd_search(source, *dim, *random, *seed),
        Command::Predict {
            source,
            subspace,
            max_isotropic_dim,
            assert_lattice,
        } => cmd_predict(source, subspace, *max_isotropic_dim, *assert_lattice),
        Command::Curvature {
            source,
            subspace,
            maximal,
        } => cmd_curvature(source, subspace, *maximal),
        Command::Pittet { source } => cmd_pittet(source),
        Command::Lattice {
            source,
            generators_file,
        } => cmd_lattice(source, generators_file.as_deref()),
        Command::FormsD {
            source,
            form,
            form_file,
        } => cmd_forms_d(source, form.as_deref(), form_file.as_deref()),
        Command::Cube {
            source,
            subspace,
            omit,
        } => cmd_cube(source, subspace, *omit),
    }
}

/// A resolved `source` argument: a catalog entry or a definition file.
struct Source {
    algebra: GradedLieAlgebra,
    entry: Option<CatalogEntry>,
}

fn is_catalog_id(source: &str) -> bool {
    source
        .split_once(':')
        .is_some_and(|(name, _)| Builder::from_id(name).is_some())
}

fn load_source(source: &str) -> Result<Source> {
    if is_catalog_id(source) {
        let entry = catalog::build(source)?;
        Ok(Source {
            algebra: entry.algebra.clone(),
            entry: Some(entry),
        })
    } else {
        Ok(Source {
            algebra: catalog::load_algebra(Path::new(source))?,
            entry: None,
        })
    }
}

fn load_definition(source: &str) -> Result<AlgebraDefinition> {
    if is_catalog_id(source) {
        let g = catalog::build(source)?.algebra;
        Ok(AlgebraDefinition {
            name: g.name().to_string(),
            basis: g.basis().to_vec(),
            layers: g.layers().to_vec(),
            table: g.table().clone(),
        })
    } else {
        catalog::load_definition(Path::new(source))
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RowsFile {
    rows: Vec<Vec<String>>,
}

fn read_rows(path: &Path) -> Result<Vec<AlgebraVector>> {
    let file: RowsFile = serde_json::from_str(&read_file(path)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    file.rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| rational::parse(c))
                .collect::<Result<Vec<_>>>()
                .map(AlgebraVector)
        })
        .collect()
}

fn parse_subspace(algebra: &GradedLieAlgebra, args: &SubspaceArgs) -> Result<Option<Subspace>> {
    if let Some(list) = &args.subspace {
        let labels: Vec<&str> = list.split(',').map(str::trim).collect();
        if labels.iter().any(|l| l.is_empty()) {
            return Err(Error::Parse(format!("empty label in `{list}`")));
        }
        return Subspace::from_labels(algebra, &labels).map(Some);
    }
    if let Some(path) = &args.subspace_file {
        return Subspace::new(algebra, &read_rows(path)?).map(Some);
    }
    Ok(None)
}

fn require_subspace(algebra: &GradedLieAlgebra, args: &SubspaceArgs) -> Result<Subspace> {
    parse_subspace(algebra, args)?
        .ok_or_else(|| Error::Parse("`--subspace` or `--subspace-file` is required".into()))
}

fn q(r: &Rational) -> Value {
    Value::String(rational::format(r))
}

fn vector_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

fn rows_json(rows: &[AlgebraVector]) -> Value {
    json!({ "rows": rows.iter().map(|r| vector_json(&r.0)).collect::<Vec<_>>() })
}

fn subspace_text(algebra: &GradedLieAlgebra, s: &Subspace) -> String {
    let parts: Vec<String> = s.rows().iter().map(|r| algebra.format_vector(r)).collect();
    format!("span({})", parts.join(", "))
}

fn bound_json(b: &GrowthBound) -> Value {
    json!({
        "target": b.target.tag(),
        "m": b.m,
        "exponent": b.exponent.as_ref().map(q),
        "relation": b.relation.tag(),
        "source": b.source,
        "note": b.note,
    })
}

fn cmd_catalog(id: Option<&str>) -> Outcome {
    let Some(id) = id else {
        let mut text = String::new();
        let mut builders = Vec::new();
        for b in Builder::ALL {
            text.push_str(&format!(
                "{:<14} n >= {}  {}\n",
                b.id(),
                b.min_n(),
                b.description()
            ));
            builders.push(json!({
                "id": b.id(),
                "min_n": b.min_n(),
                "description": b.description(),
            }));
        }
        return Ok(Report {
            ok: true,
            text,
            json: json!({ "builders": builders }),
        });
    };
    let entry = catalog::build(id)?;
    let g = &entry.algebra;
    let mut text = format!(
        "{}  {}\ndimension {}, layers {:?}, D = {}\n",
        entry.id(),
        g.name(),
        g.dim(),
        g.layer_dims(),
        g.hausdorff_dimension()
    );
    if let Some(s) = &entry.designated_subspace {
        text.push_str(&format!("designated subspace: {}\n", subspace_text(g, s)));
    }
    if let Some(k1) = entry.max_isotropic_dim {
        text.push_str(&format!("maximal isotropic dimension: {k1}\n"));
    }
    for b in &entry.literature {
        text.push_str(&format!("known: {b}\n"));
    }
    for note in &entry.notes {
        text.push_str(&format!("note: {note}\n"));
    }
    let json = json!({
        "id": entry.id(),
        "name": g.name(),
        "dim": g.dim(),
        "layer_dims": g.layer_dims(),
        "hausdorff_dimension": g.hausdorff_dimension(),
        "designated_subspace": entry.designated_subspace.as_ref().map(|s| rows_json(s.rows())),
        "max_isotropic_dim": entry.max_isotropic_dim,
        "literature": entry.literature.iter().map(bound_json).collect::<Vec<_>>(),
        "notes": entry.notes,
    });
    Ok(Report {
        ok: true,
        text,
        json,
    })
}

fn cmd_check(source: &str) -> Outcome {
    let def = load_definition(source)?;
    let label = |i: usize| def.basis[i].clone();
    let (jacobi_ok, jacobi_json, jacobi_text) = match def.table.jacobi_check() {
        JacobiReport::Pass => (true, json!({ "pass": true }), "jacobi: pass".to_string()),
        JacobiReport::Fail { triple, residual } => {
            let names = [label(triple.0), label(triple.1), label(triple.2)];
            let residual_text = format_with_labels(&def.basis, &residual);
            (
                false,
                json!({ "pass": false, "triple": names, "residual": vector_json(&residual.0) }),
                format!(
                    "jacobi: FAIL at ({}, {}, {}), cyclic sum = {residual_text}",
                    names[0], names[1], names[2]
                ),
            )
        }
    };
    let name = def.name.clone();
    let mut text = format!("{name}\n{jacobi_text}\n");
    let mut json = json!({ "name": name, "jacobi": jacobi_json });
    let graded_ok = match def.into_algebra() {
        Ok(g) => {
            text.push_str("grading: pass\n");
            json["grading"] = json!({ "pass": true });
            let strat = g.stratification_check();
            match &strat {
                StratificationReport::Pass => {
                    text.push_str("stratification: pass\n");
                    json["stratification"] = json!({ "pass": true });
                }
                StratificationReport::Diagnostic {
                    layer,
                    uncovered,
                    message,
                } => {
                    text.push_str(&format!("stratification: FAIL ({message})\n"));
                    json["stratification"] = json!({
                        "pass": false,
                        "layer": layer,
                        "uncovered": uncovered,
                        "message": message,
                    });
                }
            }
            text.push_str(&format!(
                "dimension {}, layers {:?}, D = {}\n",
                g.dim(),
                g.layer_dims(),
                g.hausdorff_dimension()
            ));
            json["dim"] = json!(g.dim());
            json["layer_dims"] = json!(g.layer_dims());
            json["hausdorff_dimension"] = json!(g.hausdorff_dimension());
            strat.passed()
        }
        Err(e @ Error::GradingViolation { .. }) => {
            text.push_str(&format!("grading: FAIL ({e})\n"));
            json["grading"] = json!({ "pass": false, "message": e.to_string() });
            false
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Report {
        ok: jacobi_ok && graded_ok,
        text,
        json,
    })
}

fn format_with_labels(basis: &[String], v: &AlgebraVector) -> String {
    let parts: Vec<String> = v
        .support()
        .map(|i| format!("{}*{}", rational::format(&v.0[i]), basis[i]))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn cmd_export(source: &str, output: Option<&Path>) -> Outcome {
    let src = load_source(source)?;
    let doc = catalog::algebra_to_json(&src.algebra);
    let json: Value = serde_json::from_str(&doc).expect("valid document");
    let text = match output {
        Some(path) => {
            catalog::save_algebra(&src.algebra, path)?;
            format!("wrote {}\n", path.display())
        }
        None => doc,
    };
    Ok(Report {
        ok: true,
        text,
        json,
    })
}

fn cmd_certify(source: &str, args: &SubspaceArgs) -> Outcome {
    let src = load_source(source)?;
    let g = &src.algebra;
    let s = require_subspace(g, args)?;
    let iso = subspace::is_isotropic(g, &s)?;
    let reg = subspace::is_regular(g, &s)?;
    let mut text = format!(
        "subspace: {}\nisotropic: {}\n",
        subspace_text(g, &s),
        iso.isotropic
    );
    if let Some((a, b)) = iso.witness {
        text.push_str(&format!(
            "  witness: rows {a} and {b} have nonzero bracket {}\n",
            g.format_vector(&g.bracket(&s.rows()[a], &s.rows()[b])?)
        ));
    }
    text.push_str(&format!(
        "regular: {} (rank {} of {})\n",
        reg.regular, reg.rank, reg.required_rank
    ));
    let json = json!({
        "isotropic": iso.isotropic,
        "regular": reg.regular,
        "rank": reg.rank,
        "required_rank": reg.required_rank,
        "witness": iso.witness.map(|(a, b)| [a, b]),
    });
    Ok(Report {
        ok: iso.isotropic && reg.regular,
        text,
        json,
    })
}

fn cmd_search(source: &str, dim: usize, random: usize, seed: u64) -> Outcome {
    let src = load_source(source)?;
    let g = &src.algebra;
    let config = SearchConfig {
        random_candidates: random,
        seed,
        ..SearchConfig::default()
    };
    let bound = subspace::gromov_dimension_bound(g, dim)?;
    let outcome = subspace::search_certified_subspace(g, dim, &config)?;
    let bound_json = json!({ "lhs": bound.lhs, "rhs": bound.rhs, "satisfied": bound.satisfied() });
    let bound_text = format!(
        "dimension bound: {} <= {} {}\n",
        bound.lhs,
        bound.rhs,
        if bound.satisfied() {
            "holds"
        } else {
            "violated"
        }
    );
    Ok(match outcome {
        SearchOutcome::Found {
            subspace,
            stage,
            candidates_checked,
        } => {
            let stage = match stage {
                SearchStage::Coordinate => "coordinate",
                SearchStage::Random => "random",
            };
            Report {
                ok: true,
                text: format!(
                    "{bound_text}found: {} ({stage} stage, {candidates_checked} candidates)\n",
                    subspace_text(g, &subspace)
                ),
                json: json!({
                    "found": true,
                    "bound": bound_json,
                    "stage": stage,
                    "candidates_checked": candidates_checked,
                    "subspace": rows_json(subspace.rows()),
                }),
            }
        }
        SearchOutcome::NotFound {
            reason,
            candidates_checked,
        } => {
            let reason = match reason {
                NotFoundReason::DimensionBound => "dimension_bound",
                NotFoundReason::BudgetExhausted => "budget_exhausted",
            };
            Report {
                ok: false,
                text: format!(
                    "{bound_text}not found: {reason} ({candidates_checked} candidates)\n"
                ),
                json: json!({
                    "found": false,
                    "bound": bound_json,
                    "reason": reason,
                    "candidates_checked": candidates_checked,
                }),
            }
        }
    })
}

/// Largest certified coordinate subspace allowed by the dimension bound.
fn default_subspace(g: &GradedLieAlgebra) -> Result<Subspace> {
    for k in (1..=g.n1()).rev() {
        if !subspace::gromov_dimension_bound(g, k)?.satisfied() {
            continue;
        }
        if let SearchOutcome::Found { subspace, .. } =
            subspace::search_certified_subspace(g, k, &SearchConfig::default())?
        {
            return Ok(subspace);
        }
    }
    Err(Error::Uncertified("found among coordinate subspaces"))
}

fn cmd_predict(
    source: &str,
    args: &SubspaceArgs,
    max_isotropic_dim: Option<usize>,
    assert_lattice: bool,
) -> Outcome {
    let src = load_source(source)?;
    let g = &src.algebra;
    let s = match parse_subspace(g, args)? {
        Some(s) => s,
        None => match src
            .entry
            .as_ref()
            .and_then(|e| e.designated_subspace.clone())
        {
            Some(s) => s,
            None => default_subspace(g)?,
        },
    };
    let options = BundleOptions {
        assert_lattice,
        max_isotropic_dim: max_isotropic_dim
            .or_else(|| src.entry.as_ref().and_then(|e| e.max_isotropic_dim)),
        literature: src
            .entry
            .as_ref()
            .map(|e| e.literature.clone())
            .unwrap_or_default(),
    };
    let bundle = HypothesisBundle::new(g, &s, options)?;
    let table = predictor::coverage_table(&bundle);
    let conflicts: Vec<Value> = table
        .rows
        .iter()
        .filter(|r| r.conflict)
        .map(|r| json!({ "target": r.target.tag(), "m": r.m }))
        .collect();
    let text = format!(
        "{}\nsubspace: {}\n{}",
        g.name(),
        subspace_text(g, &s),
        table.render_text()
    );
    let json = json!({
        "algebra": g.name(),
        "subspace": rows_json(s.rows()),
        "regular": bundle.regular(),
        "lattice": bundle.lattice().tag(),
        "max_isotropic_dim": bundle.max_isotropic_dim(),
        "bounds": all_bounds(&table),
        "conflicts": conflicts,
        "notes": table.notes,
    });
    Ok(Report {
        ok: conflicts.is_empty(),
        text,
        json,
    })
}

fn all_bounds(table: &CoverageTable) -> Vec<Value> {
    table
        .rows
        .iter()
        .flat_map(|r| r.bounds.iter().map(bound_json))
        .collect()
}

fn verdict_json(g: &GradedLieAlgebra, v: &ItemVerdict) -> Value {
    match v {
        ItemVerdict::Holds(w) => json!({
            "status": "holds",
            "witnesses": w.iter().map(|&(j, i)| [g.label(j), g.label(i)]).collect::<Vec<_>>(),
        }),
        ItemVerdict::Fails { index, partner } => json!({
            "status": "fails",
            "index": g.label(*index),
            "partner": partner.map(|p| g.label(p)),
        }),
        ItemVerdict::Skipped => json!({ "status": "skipped" }),
    }
}

fn verdict_text(g: &GradedLieAlgebra, v: &ItemVerdict) -> String {
    match v {
        ItemVerdict::Holds(w) => {
            let pairs: Vec<String> = w
                .iter()
                .map(|&(j, i)| format!("{}~{}", g.label(j), g.label(i)))
                .collect();
            format!("holds [{}]", pairs.join(", "))
        }
        ItemVerdict::Fails {
            index,
            partner: Some(p),
        } => format!("FAILS at ({}, {})", g.label(*p), g.label(*index)),
        ItemVerdict::Fails {
            index,
            partner: None,
        } => format!("FAILS: no witness for {}", g.label(*index)),
        ItemVerdict::Skipped => "skipped (maximality not asserted)".into(),
    }
}

fn trichotomy_ok(t: &Trichotomy) -> bool {
    [&t.flat, &t.negative, &t.positive]
        .iter()
        .all(|v| !matches!(v, ItemVerdict::Fails { .. }))
}

fn cmd_curvature(source: &str, args: &SubspaceArgs, maximal: bool) -> Outcome {
    let src = load_source(source)?;
    let g = &src.algebra;
    let table = curvature::curvature_table(g);
    let mut text = String::new();
    let mut pairs = Vec::new();
    for (&(u, v), k) in &table {
        text.push_str(&format!(
            "K({}, {}) = {}\n",
            g.label(u),
            g.label(v),
            rational::format(k)
        ));
        pairs.push(json!({ "u": g.label(u), "v": g.label(v), "k": q(k) }));
    }
    let mut json = json!({ "algebra": g.name(), "pairs": pairs, "trichotomy": null });
    let mut ok = true;
    if let Some(s) = parse_subspace(g, args)? {
        let t = curvature::trichotomy_report(g, &s, maximal)?;
        ok = trichotomy_ok(&t);
        text.push_str(&format!(
            "trichotomy for {}\n  flat: {}\n  negative: {}\n  positive: {}\n",
            subspace_text(g, &s),
            verdict_text(g, &t.flat),
            verdict_text(g, &t.negative),
            verdict_text(g, &t.positive)
        ));
        json["trichotomy"] = json!({
            "subspace": t.subspace.iter().map(|&i| g.label(i)).collect::<Vec<_>>(),
            "flat": verdict_json(g, &t.flat),
            "negative": verdict_json(g, &t.negative),
            "positive": verdict_json(g, &t.positive),
        });
    }
    Ok(Report { ok, text, json })
}

fn cmd_pittet(source: &str) -> Outcome {
    let src = load_source(source)?;
    let g = &src.algebra;
    let k = forms::pittet_kernel(g)?;
    let mut text = format!(
        "{}: {} variables, {} equations, rank {}, kernel dimension {}\n",
        g.name(),
        k.variables.len(),
        k.equations,
        k.rank,
        k.dim()
    );
    for v in &k.basis {
        let terms: Vec<String> = v
            .iter()
            .zip(&k.variables)
            .filter(|(c, _)| !num_traits::Zero::is_zero(*c))
            .map(|(c, &(y, x))| format!("{}*{}^{}", rational::format(c), g.label(y), g.label(x)))
            .collect();
        text.push_str(&format!("  {}\n", terms.join(" + ")));
    }
    let json = json!({
        "algebra": g.name(),
        "variables": k.variables.iter().map(|&(y, x)| [g.label(y), g.label(x)]).collect::<Vec<_>>(),
        "equations": k.equations,
        "rank": k.rank,
        "kernel_dim": k.dim(),
        "kernel": k.basis.iter().map(|v| vector_json(v)).collect::<Vec<_>>(),
    });
    Ok(Report {
        ok: true,
        text,
        json,
    })
}

fn cmd_lattice(source: &str, generators_file: Option<&Path>) -> Outcome {
    let src = load_source(source)?;
    let g = &src.algebra;
    let spec = match generators_file {
        Some(path) => LatticeSpec::new(read_rows(path)?)?,
        None => lattice::build_scalable_lattice(g)?,
    };
    let group = lattice::check_group_closure(g, &spec)?;
    let scaling = lattice::check_scaling_closure(g, &spec)?;
    let mut text = String::from("generators:\n");
    for v in spec.generators() {
        text.push_str(&format!("  {}\n", g.format_vector(v)));
    }
    let group_json = match &group {
        GroupClosure::Pass => {
            text.push_str("group closure: pass\n");
            json!({ "pass": true, "violation": null })
        }
        GroupClosure::Violation {
            left,
            right,
            product,
        } => {
            text.push_str(&format!(
                "group closure: FAIL, generators {left} and {right} multiply to {}\n",
                g.format_vector(product)
            ));
            json!({
                "pass": false,
                "violation": { "left": left, "right": right, "product": vector_json(&product.0) },
            })
        }
    };
    let scaling_json = match &scaling {
        ScalingClosure::Pass => {
            text.push_str("scaling closure: pass\n");
            json!({ "pass": true, "violation": null })
        }
        ScalingClosure::Violation { generator, image } => {
            text.push_str(&format!(
                "scaling closure: FAIL, s_2 maps generator {generator} to {}\n",
                g.format_vector(image)
            ));
            json!({
                "pass": false,
                "violation": { "generator": generator, "image": vector_json(&image.0) },
            })
        }
    };
    let json = json!({
        "generators": spec.generators().iter().map(|v| vector_json(&v.0)).collect::<Vec<_>>(),
        "group_closure": group_json,
        "scaling_closure": scaling_json,
    });
    Ok(Report {
        ok: group == GroupClosure::Pass && scaling == ScalingClosure::Pass,
        text,
        json,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FormLiteral {
    degree: usize,
    terms: Vec<FormTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FormTerm {
    indices: Vec<usize>,
    coeff: String,
}

fn parse_form(dim: usize, text: &str) -> Result<InvariantForm> {
    let lit: FormLiteral =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("form literal: {e}")))?;
    let terms = lit
        .terms
        .into_iter()
        .map(|t| Ok((t.indices, rational::parse(&t.coeff)?)))
        .collect::<Result<Vec<_>>>()?;
    InvariantForm::from_terms(dim, lit.degree, terms)
}

fn form_json(f: &InvariantForm) -> Value {
    json!({
        "degree": f.degree(),
        "terms": f
            .terms()
            .iter()
            .map(|(k, c)| json!({ "indices": k, "coeff": q(c) }))
            .collect::<Vec<_>>(),
    })
}

fn form_text(g: &GradedLieAlgebra, f: &InvariantForm) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = f
        .terms()
        .iter()
        .map(|(k, c)| {
            let mono: Vec<String> = k.iter().map(|&i| format!("{}*", g.label(i))).collect();
            let mono = if mono.is_empty() {
                "1".to_string()
            } else {
                mono.join("^")
            };
            format!("{} {mono}", rational::format(c))
        })
        .collect();
    parts.join(" + ")
}

fn weight_json(w: &Result<ScalingWeight>) -> Value {
    match w {
        Ok(ScalingWeight::Uniform(n)) => json!(n),
        Ok(ScalingWeight::Mixed(per)) => json!({
            "mixed": per
                .iter()
                .map(|(k, w)| json!({ "indices": k, "weight": w }))
                .collect::<Vec<_>>(),
        }),
        Err(_) => Value::Null,
    }
}

fn weight_text(w: &Result<ScalingWeight>) -> String {
    match w {
        Ok(ScalingWeight::Uniform(n)) => n.to_string(),
        Ok(ScalingWeight::Mixed(_)) => "mixed".into(),
        Err(_) => "none (zero form)".into(),
    }
}

fn cmd_forms_d(source: &str, form: Option<&str>, form_file: Option<&Path>) -> Outcome {
    let src = load_source(source)?;
    let g = &src.algebra;
    let literal = match (form, form_file) {
        (Some(text), _) => text.to_string(),
        (None, Some(path)) => read_file(path)?,
        (None, None) => {
            return Err(Failure::Usage(
                "`--form` or `--form-file` is required".into(),
            ))
        }
    };
    let gamma = parse_form(g.dim(), &literal)?;
    let d = forms::differential(g, &gamma)?;
    let weight = forms::scaling_weight(g, &gamma);
    let text = format!(
        "form: {}\nd(form): {}\nclosed: {}\nscaling weight: {}\n",
        form_text(g, &gamma),
        form_text(g, &d),
        d.is_zero(),
        weight_text(&weight)
    );
    let json = json!({
        "form": form_json(&gamma),
        "differential": form_json(&d),
        "closed": d.is_zero(),
        "scaling_weight": weight_json(&weight),
    });
    Ok(Report {
        ok: true,
        text,
        json,
    })
}

fn cmd_cube(source: &str, args: &SubspaceArgs, omit: usize) -> Outcome {
    let src = load_source(source)?;
    let g = &src.algebra;
    let s = require_subspace(g, args)?;
    let gamma = forms::cube_form(g, &s, omit)?;
    let closed = forms::differential(g, &gamma)?.is_zero();
    let weight = forms::scaling_weight(g, &gamma);
    let text = format!(
        "cube form omitting {omit}: {}\nclosed: {closed}\nscaling weight: {}\n",
        form_text(g, &gamma),
        weight_text(&weight)
    );
    let json = json!({
        "omit": omit,
        "form": form_json(&gamma),
        "closed": closed,
        "scaling_weight": weight_json(&weight),
    });
    Ok(Report {
        ok: closed,
        text,
        json,
    })
}
