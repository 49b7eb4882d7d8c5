//! Command-line interface for binary constant-dimension subspace codes:
//! reproducible construction, verification, bound evaluation, fixture
//! inspection, graph generation, ILP model export, and clique search.
//!
//! Every command writes its primary artifact to `--out` (or stdout) and a
//! JSON run report to stderr. Deterministic commands produce bit-identical
//! artifacts and result sections across runs; the worker count never
//! changes results.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use cdcodes::bounds::{improved_johnson_bound_with_trace, johnson_bound, KnownValues};
use cdcodes::codes::{
    configuration_dual_solids, configuration_to_solids, extended_lmrd, format_configuration,
    gabidulin, lifted_gabidulin, load_configuration, read_code_file, verify_words,
    write_code_file, zero_last_row_subcode, ExtensionVariant,
};
use cdcodes::ilp::{build_ambient_model, build_restriction_model, Cut, LinearModel};
use cdcodes::search::{
    build_extension_graph, build_mrd_extension_graph, enumerate_cliques_split, read_graph_text,
    GroupAction, SearchGraph,
};

#[derive(Parser)]
#[command(name = "cdcodes", version, about = "Constant-dimension subspace code toolkit")]
struct Cli {
    /// Output format for result summaries.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a code and write it in the code file format.
    Construct {
        /// Which code: the lifted Gabidulin code or one of its two optimal
        /// one-word extensions.
        #[arg(value_enum)]
        variant: Variant,
        /// Output path for the code file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a code file: exact minimum distance, incidence caps, and the
    /// near-maximum hyperplane witness audit.
    Verify {
        /// Path to a code file.
        path: PathBuf,
        /// Additionally require at least this minimum distance.
        #[arg(long)]
        min_distance: Option<usize>,
    },
    /// Evaluate the iterated Johnson bound and its divisible refinement.
    Bounds { q: u64, v: u64, d: u64, k: u64 },
    /// Echo a bundled hyperplane configuration in the plane encoding.
    Table { index: usize },
    /// Decode plane encodings from stdin (one string, or a comma-separated
    /// configuration row, per line) into hexadecimal generator rows.
    Parse,
    /// Encode planes given as comma-separated hexadecimal generator rows
    /// (one plane per line on stdin) into their digit strings.
    Format,
    /// Build the extension graph of a bundled configuration and export it.
    Graph {
        index: usize,
        /// Output path for the graph text (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate an ILP model and export it as LP text.
    Ilp {
        /// Variable space: 8 for the ambient solid model, 7 for the
        /// restriction model inside the distinguished hyperplane.
        #[arg(long)]
        space: u32,
        /// Bundled configuration index prescribing codewords (required for
        /// --space 7; optional for --space 8).
        #[arg(long)]
        index: Option<usize>,
        /// Incidence budget for points and hyperplanes (--space 8 only;
        /// defaults to the configuration size, or 17 without one).
        #[arg(long)]
        f: Option<u64>,
        /// Emit the linear relaxation instead of the binary program.
        #[arg(long)]
        relax: bool,
        /// Extra cuts: fix-zero:<var> or coverage:<var>:<rhs>.
        #[arg(long = "cut")]
        cuts: Vec<String>,
        /// Output path for the LP file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a maximum clique, or enumerate cliques of a given size, in an
    /// exported graph.
    Clique {
        /// Path to a graph in the text exchange format.
        path: PathBuf,
        /// Enumerate all cliques of exactly this size (otherwise report one
        /// maximum clique).
        #[arg(long)]
        target: Option<usize>,
        /// Path to vertex permutations (one generator per line, 1-based
        /// images) enabling orbit-split enumeration.
        #[arg(long)]
        group: Option<PathBuf>,
        /// Worker threads for subproblems; never changes the result set.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Build the extension graph of the zero-last-row Gabidulin subcode and
    /// optionally enumerate its maximum cliques.
    MrdExtend {
        /// Restrict vertices to matrices with this last row (hex digit).
        #[arg(long)]
        restrict_last_row: Option<String>,
        /// Solve for the maximum clique size and count the maximum cliques.
        #[arg(long)]
        enumerate: bool,
        /// Output path for the graph text.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Lmrd,
    ExtendedA,
    ExtendedB,
}

#[derive(Serialize)]
struct RunReport {
    command: Vec<String>,
    inputs_digest: String,
    results: Value,
    wall_ms: u128,
}

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok((results, digest, exit_ok)) => {
            let report = RunReport {
                command: argv,
                inputs_digest: digest,
                results,
                wall_ms: start.elapsed().as_millis(),
            };
            eprintln!("{}", serde_json::to_string(&report).expect("report serializes"));
            if !exit_ok {
                std::process::exit(1);
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(1);
        }
    }
}

fn digest_bytes(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("{:x}", hasher.finalize())
}

fn digest_args(parts: &[String]) -> String {
    digest_bytes(parts.join("\u{1f}").as_bytes())
}

/// Writes an artifact to the path or stdout; returns true when stdout was
/// used (summaries then move to stderr).
fn write_artifact(
    out: &Option<PathBuf>,
    write: impl FnOnce(&mut dyn Write) -> anyhow::Result<()>,
) -> anyhow::Result<bool> {
    match out {
        Some(path) => {
            let file = File::create(path)
                .with_context(|| format!("cannot create {}", path.display()))?;
            let mut w = BufWriter::new(file);
            write(&mut w)?;
            w.flush()?;
            Ok(false)
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write(&mut w)?;
            w.flush()?;
            Ok(true)
        }
    }
}

fn emit_summary(cli: &Cli, to_stderr: bool, text: String, json_value: &Value) {
    let rendered = match cli.format {
        Format::Text => text,
        Format::Json => serde_json::to_string_pretty(json_value).expect("results serialize"),
    };
    if to_stderr {
        eprintln!("{rendered}");
    } else {
        println!("{rendered}");
    }
}

fn run(cli: &Cli) -> anyhow::Result<(Value, String, bool)> {
    match &cli.command {
        Command::Construct { variant, out } => cmd_construct(cli, *variant, out),
        Command::Verify { path, min_distance } => cmd_verify(cli, path, *min_distance),
        Command::Bounds { q, v, d, k } => cmd_bounds(cli, *q, *v, *d, *k),
        Command::Table { index } => cmd_table(cli, *index),
        Command::Parse => cmd_parse(cli),
        Command::Format => cmd_format(cli),
        Command::Graph { index, out } => cmd_graph(cli, *index, out),
        Command::Ilp {
            space,
            index,
            f,
            relax,
            cuts,
            out,
        } => cmd_ilp(cli, *space, *index, *f, *relax, cuts, out),
        Command::Clique {
            path,
            target,
            group,
            workers,
        } => cmd_clique(cli, path, *target, group, *workers),
        Command::MrdExtend {
            restrict_last_row,
            enumerate,
            out,
        } => cmd_mrd_extend(cli, restrict_last_row, *enumerate, out),
    }
}

fn cmd_construct(
    cli: &Cli,
    variant: Variant,
    out: &Option<PathBuf>,
) -> anyhow::Result<(Value, String, bool)> {
    let (name, code) = match variant {
        Variant::Lmrd => ("lmrd", lifted_gabidulin()),
        Variant::ExtendedA => ("extended-a", extended_lmrd(ExtensionVariant::A)),
        Variant::ExtendedB => ("extended-b", extended_lmrd(ExtensionVariant::B)),
    };
    let min_distance = code.min_distance();
    let used_stdout = write_artifact(out, |w| {
        write_code_file(&code, w)?;
        Ok(())
    })?;
    let mut results = json!({
        "variant": name,
        "words": code.len(),
        "v": code.ambient(),
        "k": code.dim(),
        "min_distance": min_distance,
    });
    // The extra word's distance histogram distinguishes the two extensions.
    if let Variant::ExtendedA | Variant::ExtendedB = variant {
        let extra = match variant {
            Variant::ExtendedA => ExtensionVariant::A.extra_word(),
            _ => ExtensionVariant::B.extra_word(),
        };
        let histogram = code.distance_profile(&extra);
        results["extra_word_distances"] = json!(histogram
            .iter()
            .map(|(d, n)| (d.to_string(), n))
            .collect::<std::collections::BTreeMap<_, _>>());
    }
    let text = format!(
        "{name}: N={} v={} k={} min_distance={}",
        code.len(),
        code.ambient(),
        code.dim(),
        min_distance.map_or("-".into(), |d| d.to_string()),
    );
    emit_summary(cli, used_stdout, text, &results);
    Ok((results, digest_args(&[name.to_string()]), true))
}

fn cmd_verify(
    cli: &Cli,
    path: &Path,
    min_distance: Option<usize>,
) -> anyhow::Result<(Value, String, bool)> {
    let mut bytes = Vec::new();
    File::open(path)
        .with_context(|| format!("cannot open {}", path.display()))?
        .read_to_end(&mut bytes)?;
    let digest = digest_bytes(&bytes);
    let parsed = read_code_file(bytes.as_slice())?;
    let report = verify_words(
        parsed.ambient,
        parsed.dim,
        &parsed.words,
        min_distance,
        &KnownValues::default(),
    );
    let ok = report.ok;
    let results = serde_json::to_value(&report)?;
    let text = format!(
        "words={} v={} k={} min_distance={} point_degree={}{} hyperplane_degree={}{} witnesses={} ok={}",
        report.word_count,
        report.ambient,
        report.dimension,
        report.min_distance.map_or("-".into(), |d| d.to_string()),
        report.max_point_degree,
        report.point_cap.map_or(String::new(), |c| format!("/{c}")),
        report.max_hyperplane_degree,
        report
            .hyperplane_cap
            .map_or(String::new(), |c| format!("/{c}")),
        match &report.hyperplane_witness_misses {
            None => "n/a".to_string(),
            Some(misses) if misses.is_empty() => "all".to_string(),
            Some(misses) => format!("{} missing", misses.len()),
        },
        ok,
    );
    emit_summary(cli, false, text, &results);
    Ok((results, digest, ok))
}

fn cmd_bounds(cli: &Cli, q: u64, v: u64, d: u64, k: u64) -> anyhow::Result<(Value, String, bool)> {
    let table = KnownValues::default();
    let johnson = johnson_bound(q, v, d, k, &table)?;
    let (improved, trace) = improved_johnson_bound_with_trace(q, v, d, k, &table)?;
    let mut lines = vec![
        format!("johnson(q={q}, v={v}, d={d}; k={k}) = {johnson}"),
        format!("improved(q={q}, v={v}, d={d}; k={k}) = {improved}"),
    ];
    let mut trace_json = Vec::new();
    for level in &trace {
        let trials: Vec<Value> = level
            .floor
            .trials
            .iter()
            .map(|t| {
                let witness = t.witness.as_ref().map(|parts| {
                    parts
                        .iter()
                        .map(|p| p.to_string())
                        .collect::<Vec<_>>()
                        .join("+")
                });
                lines.push(format!(
                    "  level {}: b={} residual={}{}",
                    level.level,
                    t.b,
                    t.residual,
                    witness
                        .as_ref()
                        .map_or(" (not representable)".to_string(), |w| format!(" = {w}")),
                ));
                json!({ "b": t.b, "residual": t.residual, "witness": t.witness })
            })
            .collect();
        trace_json.push(json!({
            "level": level.level,
            "dividend": level.dividend,
            "summands": level.floor.summands,
            "trials": trials,
        }));
    }
    let results = json!({
        "q": q, "v": v, "d": d, "k": k,
        "johnson": johnson,
        "improved": improved,
        "trace": trace_json,
    });
    emit_summary(cli, false, lines.join("\n"), &results);
    let digest = digest_args(&[q.to_string(), v.to_string(), d.to_string(), k.to_string()]);
    Ok((results, digest, true))
}

fn cmd_table(cli: &Cli, index: usize) -> anyhow::Result<(Value, String, bool)> {
    let planes = load_configuration(index)?;
    let encoding = format_configuration(&planes)?;
    let results = json!({
        "index": index,
        "planes": planes.len(),
        "encoding": encoding,
    });
    emit_summary(cli, false, encoding.clone(), &results);
    Ok((results, digest_bytes(encoding.as_bytes()), true))
}

fn cmd_parse(cli: &Cli) -> anyhow::Result<(Value, String, bool)> {
    let mut input = String::new();
    std::io::stdin().read_to_string(&mut input)?;
    let mut lines = Vec::new();
    for token in input.lines().flat_map(|line| line.split(',')) {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        let plane = cdcodes::codes::parse_plane_encoding(token)?;
        let rows: Vec<String> = plane.rows().iter().map(|r| format!("{r:x}")).collect();
        lines.push(rows.join(","));
    }
    let text = lines.join("\n");
    let results = json!({ "planes": lines.len(), "rows": lines });
    emit_summary(cli, false, text, &results);
    Ok((results, digest_bytes(input.as_bytes()), true))
}

fn cmd_format(cli: &Cli) -> anyhow::Result<(Value, String, bool)> {
    let mut input = String::new();
    std::io::stdin().read_to_string(&mut input)?;
    let mut lines = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let rows: Vec<u64> = line
            .split(',')
            .map(|t| u64::from_str_radix(t.trim(), 16))
            .collect::<Result<_, _>>()
            .with_context(|| format!("line {}: rows must be hexadecimal", i + 1))?;
        let plane = cdcodes::geometry::Subspace::from_rows(7, rows);
        lines.push(cdcodes::codes::format_plane_encoding(&plane)?);
    }
    let text = lines.join("\n");
    let results = json!({ "planes": lines.len(), "encodings": lines });
    emit_summary(cli, false, text, &results);
    Ok((results, digest_bytes(input.as_bytes()), true))
}

fn cmd_graph(cli: &Cli, index: usize, out: &Option<PathBuf>) -> anyhow::Result<(Value, String, bool)> {
    let planes = load_configuration(index)?;
    let solids = configuration_to_solids(&planes)?;
    let graph = build_extension_graph(&solids)?;
    let used_stdout = write_artifact(out, |w| {
        graph.write_text(w)?;
        Ok(())
    })?;
    let results = json!({
        "index": index,
        "prescribed_solids": solids.len(),
        "vertices": graph.len(),
        "edges": graph.edge_count(),
    });
    let text = format!(
        "configuration {index}: {} vertices, {} edges",
        graph.len(),
        graph.edge_count()
    );
    emit_summary(cli, used_stdout, text, &results);
    let digest = digest_bytes(format_configuration(&planes)?.as_bytes());
    Ok((results, digest, true))
}

fn parse_cut(spec: &str) -> anyhow::Result<Cut> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["fix-zero", var] => Ok(Cut::FixZero {
            variable: var.parse().context("bad variable in fix-zero cut")?,
        }),
        ["coverage", var, rhs] => Ok(Cut::Coverage {
            variable: var.parse().context("bad variable in coverage cut")?,
            rhs: rhs.parse().context("bad right-hand side in coverage cut")?,
        }),
        _ => bail!("cut must be fix-zero:<var> or coverage:<var>:<rhs>"),
    }
}

fn cmd_ilp(
    cli: &Cli,
    space: u32,
    index: Option<usize>,
    f: Option<u64>,
    relax: bool,
    cuts: &[String],
    out: &Option<PathBuf>,
) -> anyhow::Result<(Value, String, bool)> {
    let mut model: LinearModel = match space {
        8 => {
            let fixed = match index {
                Some(i) => configuration_to_solids(&load_configuration(i)?)?,
                None => Vec::new(),
            };
            let budget = f.unwrap_or(if fixed.is_empty() { 17 } else { fixed.len() as u64 });
            build_ambient_model(8, &fixed, budget, relax)?
        }
        7 => {
            let i = index.context("--space 7 needs --index")?;
            if relax {
                bail!("the restriction model is only generated as a binary program");
            }
            if f.is_some() {
                bail!("--f only applies to --space 8");
            }
            build_restriction_model(&configuration_dual_solids(&load_configuration(i)?)?)?
        }
        other => bail!("--space must be 8 or 7, got {other}"),
    };
    for spec in cuts {
        model.apply_cut(parse_cut(spec)?)?;
    }
    let used_stdout = write_artifact(out, |w| {
        model.write_lp(w)?;
        Ok(())
    })?;
    let audit = model.audit();
    let results = serde_json::to_value(&audit)?;
    let text = format!(
        "{}: {} variables, {} constraints, {} fixings",
        audit.name,
        audit.variables,
        audit.constraints,
        audit.fixings_zero + audit.fixings_one,
    );
    emit_summary(cli, used_stdout, text, &results);
    let mut digest_parts = vec![space.to_string(), format!("{index:?}"), format!("{f:?}"), relax.to_string()];
    digest_parts.extend(cuts.iter().cloned());
    Ok((results, digest_args(&digest_parts), true))
}

fn read_permutations(path: &Path, n: usize) -> anyhow::Result<GroupAction> {
    let mut text = String::new();
    File::open(path)
        .with_context(|| format!("cannot open {}", path.display()))?
        .read_to_string(&mut text)?;
    let mut perms = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut perm = Vec::with_capacity(n);
        for token in line.split_whitespace() {
            let image: usize = token
                .parse()
                .with_context(|| format!("line {}: bad vertex {token:?}", i + 1))?;
            if image == 0 || image > n {
                bail!("line {}: vertex {image} out of range 1..={n}", i + 1);
            }
            perm.push((image - 1) as u32);
        }
        perms.push(perm);
    }
    Ok(GroupAction::from_permutations(n, perms)?)
}

fn cmd_clique(
    cli: &Cli,
    path: &Path,
    target: Option<usize>,
    group: &Option<PathBuf>,
    workers: Option<usize>,
) -> anyhow::Result<(Value, String, bool)> {
    let mut bytes = Vec::new();
    File::open(path)
        .with_context(|| format!("cannot open {}", path.display()))?
        .read_to_end(&mut bytes)?;
    let digest = digest_bytes(&bytes);
    let graph: SearchGraph<()> = read_graph_text(bytes.as_slice())?;

    let run = |graph: &SearchGraph<()>| -> anyhow::Result<(Value, String)> {
        match (target, group) {
            (Some(size), Some(group_path)) => {
                let action = read_permutations(group_path, graph.len())?;
                let cliques = enumerate_cliques_split(graph, &action, size)?;
                Ok(render_cliques(size, &cliques))
            }
            (Some(size), None) => {
                let cliques = graph.enumerate_cliques(size);
                Ok(render_cliques(size, &cliques))
            }
            (None, _) => {
                let (size, witness) = graph.max_clique();
                let one_based: Vec<usize> = witness.iter().map(|v| v + 1).collect();
                let results = json!({ "max_clique": size, "witness": one_based });
                let text = format!(
                    "max clique {size}: {}",
                    one_based
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                );
                Ok((results, text))
            }
        }
    };
    let (results, text) = match workers {
        Some(count) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(count)
                .build()
                .context("cannot build worker pool")?;
            pool.install(|| run(&graph))?
        }
        None => run(&graph)?,
    };
    emit_summary(cli, false, text, &results);
    Ok((results, digest, true))
}

fn render_cliques(size: usize, cliques: &[Vec<usize>]) -> (Value, String) {
    let one_based: Vec<Vec<usize>> = cliques
        .iter()
        .map(|c| c.iter().map(|v| v + 1).collect())
        .collect();
    let mut lines = vec![format!("{} cliques of size {size}", cliques.len())];
    for clique in &one_based {
        lines.push(
            clique
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
    }
    let results = json!({ "size": size, "count": cliques.len(), "cliques": one_based });
    (results, lines.join("\n"))
}

fn cmd_mrd_extend(
    cli: &Cli,
    restrict: &Option<String>,
    enumerate: bool,
    out: &Option<PathBuf>,
) -> anyhow::Result<(Value, String, bool)> {
    let restrict_row = match restrict {
        Some(token) => Some(u64::from_str_radix(token, 16).context("last row must be a hex digit")?),
        None => None,
    };
    let base = zero_last_row_subcode(&gabidulin(3));
    let graph = build_mrd_extension_graph(&base, restrict_row)?;
    let used_stdout = match out {
        Some(_) => write_artifact(out, |w| {
            graph.write_text(w)?;
            Ok(())
        })?,
        None => false,
    };
    let mut results = json!({
        "base_words": base.len(),
        "vertices": graph.len(),
        "edges": graph.edge_count(),
    });
    let mut text = format!(
        "extension graph: {} vertices, {} edges",
        graph.len(),
        graph.edge_count()
    );
    if enumerate {
        let (size, _) = graph.max_clique();
        let maximum = graph.enumerate_cliques(size);
        results["max_clique"] = json!(size);
        results["maximum_clique_count"] = json!(maximum.len());
        text.push_str(&format!(
            "; max clique {size}, {} maximum cliques",
            maximum.len()
        ));
    }
    emit_summary(cli, used_stdout, text, &results);
    let digest = digest_args(&[format!("{restrict_row:?}"), enumerate.to_string()]);
    Ok((results, digest, true))
}
