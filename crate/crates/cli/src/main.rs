//! algred command line: dimension tables, reduction reports, Rees
//! consistency checks, and generalized Weyl algebra computations, over
//! exact rational arithmetic.

mod expr;
mod input;
mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use algred::{
    bad_prime_detect, check_gr_presentation, filtered_dims, gwa_catalog, gwa_dims, gwa_multiply,
    gwa_reduce, good_reduction_report, hilbert_dims, leading_ideal_presentation,
    reduce_presentation, rees_presentation, specialize_presentation, Coeff, DvrError, GwaElement,
    GwaError, Mode, Presentation, PresentationError, Rational, ReductionError, SpecValue, UniPoly,
    ValuationSpec, GWA_CATALOG,
};

use input::{parse_coeff, PresentationFile};
use report::{
    tool_info, CatalogFile, CatalogRow, ConsistencyRow, DimsFile, DimsRow, GrCheckOut,
    GwaDimsFile, GwaPrimeOut, GwaReduceFile, MultFile, ObstructionOut, ParamRow, PrimeReport,
    ReducedGwaOut, ReesFile, ReportFile, TextTable,
};

/// Default size envelope; free-algebra word counts grow like g^n.
const MAX_GENERATORS: usize = 4;
const MAX_DEGREE_LIMIT: usize = 10;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Valuation(#[from] DvrError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Gwa(#[from] GwaError),
}

#[derive(Parser)]
#[command(
    name = "algred",
    version,
    about = "Exact dimension, reduction, Rees, and generalized Weyl algebra computations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Lift the default size limits (generators <= 4, max degree <= 10)
    #[arg(long, global = true)]
    unsafe_limits: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension table of a presented algebra, optionally alongside its
    /// reductions
    Dims(DimsArgs),
    /// Reduction report at one or more primes
    Reduce(ReduceArgs),
    /// Rees presentation, its specializations, and the dimension
    /// consistency check
    Rees(ReesArgs),
    /// Generalized Weyl algebras: catalog, products, reduction, dimensions
    #[command(subcommand)]
    Gwa(GwaCommand),
}

#[derive(Args)]
struct DimsArgs {
    /// Presentation file (JSON)
    #[arg(long)]
    input: PathBuf,
    /// Largest degree to tabulate
    #[arg(long, default_value_t = 8)]
    max_degree: usize,
    /// Also tabulate the reduction at this prime (repeatable)
    #[arg(long = "prime", value_name = "P")]
    primes: Vec<u64>,
}

#[derive(Args)]
struct ReduceArgs {
    /// Presentation file (JSON)
    #[arg(long)]
    input: PathBuf,
    /// Reduce at this prime (repeatable)
    #[arg(long = "prime", value_name = "P", required = true)]
    primes: Vec<u64>,
    /// Largest degree to compare
    #[arg(long, default_value_t = 8)]
    max_degree: usize,
}

#[derive(Args)]
struct ReesArgs {
    /// Presentation file (JSON, filtered mode)
    #[arg(long)]
    input: PathBuf,
    /// Largest degree for the consistency check
    #[arg(long, default_value_t = 8)]
    max_degree: usize,
}

#[derive(Subcommand)]
enum GwaCommand {
    /// List the built-in models
    Catalog,
    /// Multiply expressions and print the normal form
    Mult(MultArgs),
    /// Reduce a model's defining data at one or more primes
    Reduce(GwaReduceArgs),
    /// Dimensions of the filtration pieces
    Dims(GwaDimsArgs),
}

#[derive(Args)]
struct MultArgs {
    /// Catalog model name
    #[arg(long)]
    name: String,
    /// Model parameter as KEY=VALUE (repeatable)
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Expressions over X, Y, h; multiple expressions are multiplied left
    /// to right
    #[arg(required = true)]
    exprs: Vec<String>,
}

#[derive(Args)]
struct GwaReduceArgs {
    /// Catalog model name
    #[arg(long)]
    name: String,
    /// Model parameter as KEY=VALUE (repeatable)
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Reduce at this prime (repeatable)
    #[arg(long = "prime", value_name = "P", required = true)]
    primes: Vec<u64>,
}

#[derive(Args)]
struct GwaDimsArgs {
    /// Catalog model name; validated, though the counts do not depend on it
    #[arg(long)]
    name: Option<String>,
    /// Largest filtration degree to tabulate
    #[arg(long, default_value_t = 8)]
    max_degree: usize,
    /// Filtration degree assigned to h
    #[arg(long, default_value_t = 2)]
    degree_of_h: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Dims(args) => cmd_dims(args, cli.format, cli.unsafe_limits),
        Command::Reduce(args) => cmd_reduce(args, cli.format, cli.unsafe_limits),
        Command::Rees(args) => cmd_rees(args, cli.format, cli.unsafe_limits),
        Command::Gwa(sub) => match sub {
            GwaCommand::Catalog => cmd_gwa_catalog(cli.format),
            GwaCommand::Mult(args) => cmd_gwa_mult(args, cli.format),
            GwaCommand::Reduce(args) => cmd_gwa_reduce(args, cli.format),
            GwaCommand::Dims(args) => cmd_gwa_dims(args, cli.format, cli.unsafe_limits),
        },
    }
}

fn load_input(path: &Path) -> Result<(String, PresentationFile), CliError> {
    let display = path.display().to_string();
    let raw = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: display.clone(),
        source,
    })?;
    let file = serde_json::from_str(&raw).map_err(|source| CliError::Json {
        path: display,
        source,
    })?;
    Ok((raw, file))
}

fn input_hash(raw: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(raw.as_bytes());
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn check_degree_limit(max_degree: usize, unsafe_limits: bool) -> Result<(), CliError> {
    if !unsafe_limits && max_degree > MAX_DEGREE_LIMIT {
        return Err(CliError::Input(format!(
            "--max-degree {max_degree} exceeds the default limit of {MAX_DEGREE_LIMIT}; \
             pass --unsafe-limits to override"
        )));
    }
    Ok(())
}

fn check_generator_limit(generators: usize, unsafe_limits: bool) -> Result<(), CliError> {
    if !unsafe_limits && generators > MAX_GENERATORS {
        return Err(CliError::Input(format!(
            "{generators} generators exceeds the default limit of {MAX_GENERATORS}; \
             pass --unsafe-limits to override"
        )));
    }
    Ok(())
}

fn dedup_primes(primes: &[u64]) -> Vec<u64> {
    let mut seen = BTreeSet::new();
    primes.iter().copied().filter(|p| seen.insert(*p)).collect()
}

fn parse_params(entries: &[String]) -> Result<BTreeMap<String, Rational>, CliError> {
    let mut out = BTreeMap::new();
    for e in entries {
        let (k, v) = e.split_once('=').ok_or_else(|| {
            CliError::Input(format!("--param {e:?} is not of the form KEY=VALUE"))
        })?;
        out.insert(k.trim().to_string(), parse_coeff(v)?);
    }
    Ok(out)
}

fn dims_for<K: Coeff>(pres: &Presentation<K>, n: usize) -> Result<Vec<usize>, PresentationError> {
    let table = match pres.mode() {
        Mode::Graded => hilbert_dims(pres, n)?,
        Mode::Filtered => filtered_dims(pres, n)?,
    };
    Ok(table.dims)
}

fn print_output<T: Serialize>(format: Format, doc: &T, table: &str) {
    match format {
        Format::Json => {
            let text = serde_json::to_string_pretty(doc).expect("report types serialize");
            println!("{text}");
        }
        Format::Table => print!("{table}"),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn degree_header(max_degree: usize) -> Vec<String> {
    let mut row = vec!["degree".to_string()];
    row.extend((0..=max_degree).map(|d| d.to_string()));
    row
}

fn dims_row(label: &str, values: &[usize]) -> Vec<String> {
    let mut row = vec![label.to_string()];
    row.extend(values.iter().map(|v| v.to_string()));
    row
}

fn cmd_dims(args: DimsArgs, format: Format, unsafe_limits: bool) -> Result<ExitCode, CliError> {
    let (raw, file) = load_input(&args.input)?;
    let pres = file.to_presentation()?;
    check_generator_limit(pres.generators().len(), unsafe_limits)?;
    check_degree_limit(args.max_degree, unsafe_limits)?;
    let mut rows = vec![DimsRow {
        field: "Q".to_string(),
        values: dims_for(&pres, args.max_degree)?,
    }];
    for p in dedup_primes(&args.primes) {
        let v = ValuationSpec::new(p)?;
        let reduced = reduce_presentation(&pres, &v)?;
        rows.push(DimsRow {
            field: format!("F_{p}"),
            values: dims_for(&reduced, args.max_degree)?,
        });
    }
    let doc = DimsFile {
        tool: tool_info(),
        input_hash: input_hash(&raw),
        mode: file.mode,
        max_degree: args.max_degree,
        dims: rows,
    };
    let mut table = TextTable::default();
    table.row(degree_header(doc.max_degree));
    for row in &doc.dims {
        table.row(dims_row(&row.field, &row.values));
    }
    let text = format!("mode: {}\n{}", doc.mode, table.render(""));
    print_output(format, &doc, &text);
    Ok(ExitCode::SUCCESS)
}

fn cmd_reduce(args: ReduceArgs, format: Format, unsafe_limits: bool) -> Result<ExitCode, CliError> {
    let (raw, file) = load_input(&args.input)?;
    let pres = file.to_presentation()?;
    let n = args.max_degree;
    check_generator_limit(pres.generators().len(), unsafe_limits)?;
    check_degree_limit(n, unsafe_limits)?;
    let names = pres.generator_names();
    let (target, gr_check) = match pres.mode() {
        Mode::Graded => (pres, None),
        Mode::Filtered => {
            let gr = check_gr_presentation(&pres, n)?;
            let leading = leading_ideal_presentation(&pres)?;
            (
                leading,
                Some(GrCheckOut {
                    holds: gr.holds,
                    first_failing_degree: gr.first_failing_degree,
                }),
            )
        }
    };
    let primes = dedup_primes(&args.primes);
    let mut reports = Vec::with_capacity(primes.len());
    for p in &primes {
        let v = ValuationSpec::new(*p)?;
        let r = good_reduction_report(&target, &v, n)?;
        reports.push(PrimeReport::from_report(&r, &names));
    }
    let all_well = reports.iter().all(|r| r.reduces_well);
    let doc = ReportFile {
        tool: tool_info(),
        input_hash: input_hash(&raw),
        mode: file.mode,
        primes,
        max_degree: n,
        gr_check,
        reports,
    };
    print_output(format, &doc, &render_reduce_table(&doc));
    Ok(if all_well {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn render_reduce_table(doc: &ReportFile) -> String {
    let mut out = format!("mode: {}\n", doc.mode);
    if let Some(gr) = &doc.gr_check {
        if gr.holds {
            out.push_str(
                "leading parts present the associated graded: yes; \
                 reducing the leading-part presentation\n",
            );
        } else {
            out.push_str(&format!(
                "leading parts present the associated graded: NO \
                 (first failure in degree {})\n",
                gr.first_failing_degree.expect("a failing check has a degree")
            ));
        }
    }
    for r in &doc.reports {
        out.push_str(&format!("\np = {}\n", r.prime));
        let mut table = TextTable::default();
        table.row(degree_header(doc.max_degree));
        table.row(dims_row("Q", &r.dims_rational));
        table.row(dims_row(&r.residue_field, &r.dims_residue));
        table.row(dims_row("defect", &r.defect));
        out.push_str(&table.render("  "));
        out.push_str(&format!("  reduces well: {}\n", yes_no(r.reduces_well)));
        out.push_str(&format!(
            "  domain up to degree {}: {}\n",
            doc.max_degree,
            yes_no(r.domain_up_to_degree)
        ));
        if let Some(z) = &r.zero_divisor {
            out.push_str(&format!(
                "  zero divisor: ({}) * ({}) = 0 at bidegree ({}, {})\n",
                z.left, z.right, z.bidegree.0, z.bidegree.1
            ));
        }
        if let Some(d) = r.first_bad_degree {
            out.push_str(&format!("  first defective degree: {d}\n"));
        }
    }
    out
}

fn relation_lines(pres: &Presentation<Rational>) -> Vec<String> {
    let names = pres.generator_names();
    pres.relations()
        .iter()
        .map(|r| r.display_with_names(&names))
        .collect()
}

fn cmd_rees(args: ReesArgs, format: Format, unsafe_limits: bool) -> Result<ExitCode, CliError> {
    let (raw, file) = load_input(&args.input)?;
    let pres = file.to_presentation()?;
    if pres.mode() != Mode::Filtered {
        return Err(CliError::Input(
            "rees requires a filtered presentation".to_string(),
        ));
    }
    check_generator_limit(pres.generators().len(), unsafe_limits)?;
    check_degree_limit(args.max_degree, unsafe_limits)?;
    let n = args.max_degree;
    let rees = rees_presentation(&pres)?;
    let t = pres.nvars();
    let at_one = specialize_presentation(&rees, t, SpecValue::One, Mode::Filtered)?;
    let at_zero = specialize_presentation(&rees, t, SpecValue::Zero, Mode::Graded)?;
    let leading = leading_ideal_presentation(&pres)?;
    let recovers_input = at_one == pres;
    let matches_leading_parts = at_zero == leading;
    let rees_dims = hilbert_dims(&rees, n)?;
    let input_dims = filtered_dims(&pres, n)?;
    let consistency: Vec<ConsistencyRow> = (0..=n)
        .map(|d| ConsistencyRow {
            degree: d,
            rees: rees_dims.dims[d],
            input: input_dims.dims[d],
            ok: rees_dims.dims[d] == input_dims.dims[d],
        })
        .collect();
    let all_ok = recovers_input && matches_leading_parts && consistency.iter().all(|c| c.ok);
    let doc = ReesFile {
        tool: tool_info(),
        input_hash: input_hash(&raw),
        rees: PresentationFile::from_presentation(&rees),
        at_t_one: PresentationFile::from_presentation(&at_one),
        at_t_zero: PresentationFile::from_presentation(&at_zero),
        recovers_input,
        matches_leading_parts,
        consistency,
    };

    let t_name = &rees.generator_names()[t];
    let mut text = format!(
        "rees presentation (graded; generators {}):\n",
        rees.generator_names().join(", ")
    );
    for line in relation_lines(&rees) {
        text.push_str(&format!("  {line}\n"));
    }
    text.push_str(&format!(
        "{t_name} := 1 (recovers the input: {}):\n",
        yes_no(recovers_input)
    ));
    for line in relation_lines(&at_one) {
        text.push_str(&format!("  {line}\n"));
    }
    text.push_str(&format!(
        "{t_name} := 0 (the leading parts: {}):\n",
        yes_no(matches_leading_parts)
    ));
    for line in relation_lines(&at_zero) {
        text.push_str(&format!("  {line}\n"));
    }
    text.push_str("dimension consistency (rees degree n vs the input's filtration):\n");
    let mut table = TextTable::default();
    table.row(degree_header(n));
    table.row(dims_row("rees", &doc.consistency.iter().map(|c| c.rees).collect::<Vec<_>>()));
    table.row(dims_row("input", &doc.consistency.iter().map(|c| c.input).collect::<Vec<_>>()));
    let mut verdict = vec!["verdict".to_string()];
    verdict.extend(doc.consistency.iter().map(|c| {
        if c.ok {
            "OK".to_string()
        } else {
            "BAD".to_string()
        }
    }));
    table.row(verdict);
    text.push_str(&table.render("  "));

    print_output(format, &doc, &text);
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_gwa_catalog(format: Format) -> Result<ExitCode, CliError> {
    let models: Vec<CatalogRow> = GWA_CATALOG
        .iter()
        .map(|e| CatalogRow {
            name: e.name.to_string(),
            params: e
                .params
                .iter()
                .map(|(n, d)| ParamRow {
                    name: n.to_string(),
                    default: d.map(|v| v.to_string()),
                })
                .collect(),
            description: e.description.to_string(),
        })
        .collect();
    let doc = CatalogFile {
        tool: tool_info(),
        models,
    };
    let mut table = TextTable::default();
    table.row(["name", "parameters", "description"]);
    for m in &doc.models {
        let params = if m.params.is_empty() {
            "-".to_string()
        } else {
            m.params
                .iter()
                .map(|p| match &p.default {
                    Some(d) => format!("{} (default {})", p.name, d),
                    None => format!("{} (required)", p.name),
                })
                .collect::<Vec<_>>()
                .join(", ")
        };
        table.row([m.name.clone(), params, m.description.clone()]);
    }
    print_output(format, &doc, &table.render_left(""));
    Ok(ExitCode::SUCCESS)
}

fn cmd_gwa_mult(args: MultArgs, format: Format) -> Result<ExitCode, CliError> {
    let params = parse_params(&args.params)?;
    let data = gwa_catalog(&args.name, &params)?;
    let mut acc: Option<GwaElement<Rational>> = None;
    for e in &args.exprs {
        let parsed = expr::parse(e, &data)?;
        acc = Some(match acc {
            None => parsed,
            Some(prev) => gwa_multiply(&data, &prev, &parsed),
        });
    }
    let result = acc.expect("clap requires at least one expression");
    let doc = MultFile {
        tool: tool_info(),
        model: args.name,
        result: result.to_string(),
    };
    print_output(format, &doc, &format!("{result}\n"));
    Ok(ExitCode::SUCCESS)
}

fn cmd_gwa_reduce(args: GwaReduceArgs, format: Format) -> Result<ExitCode, CliError> {
    let params = parse_params(&args.params)?;
    let data = gwa_catalog(&args.name, &params)?;
    let primes = dedup_primes(&args.primes);
    let mut reports = Vec::with_capacity(primes.len());
    let mut text = String::new();
    for p in &primes {
        let v = ValuationSpec::new(*p)?;
        let verdict = bad_prime_detect(&data, &v);
        let reduced = if verdict.good {
            let red = gwa_reduce(&data, &v)?;
            let sigma_of_h = UniPoly::from_coeffs(vec![
                red.sigma().beta().clone(),
                red.sigma().alpha().clone(),
            ]);
            Some(ReducedGwaOut {
                sigma_of_h: sigma_of_h.to_string(),
                a: red.a().to_string(),
            })
        } else {
            None
        };
        if let Some(r) = &reduced {
            text.push_str(&format!(
                "p = {p}: good\n  sigma(h) = {}\n  a = {}\n",
                r.sigma_of_h, r.a
            ));
            if verdict.a_reduces_to_zero {
                text.push_str("  note: a reduces to zero, so the reduction is not a domain\n");
            }
        } else {
            text.push_str(&format!("p = {p}: bad prime\n"));
            for b in &verdict.bad {
                text.push_str(&format!(
                    "  {} = {} has valuation {} at p = {p}\n",
                    b.location, b.value, b.valuation
                ));
            }
        }
        reports.push(GwaPrimeOut {
            prime: *p,
            good: verdict.good,
            obstructions: verdict
                .bad
                .iter()
                .map(|b| ObstructionOut {
                    location: b.location.to_string(),
                    value: b.value.to_string(),
                    valuation: b.valuation,
                })
                .collect(),
            a_reduces_to_zero: verdict.a_reduces_to_zero,
            reduced,
        });
    }
    let all_good = reports.iter().all(|r| r.good);
    let doc = GwaReduceFile {
        tool: tool_info(),
        model: args.name,
        params: params.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        reports,
    };
    print_output(format, &doc, &text);
    Ok(if all_good {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_gwa_dims(
    args: GwaDimsArgs,
    format: Format,
    unsafe_limits: bool,
) -> Result<ExitCode, CliError> {
    if let Some(name) = &args.name {
        if !GWA_CATALOG.iter().any(|e| e.name == name) {
            return Err(GwaError::UnknownModel(name.clone()).into());
        }
    }
    if args.degree_of_h == 0 {
        return Err(CliError::Input("--degree-of-h must be positive".to_string()));
    }
    check_degree_limit(args.max_degree, unsafe_limits)?;
    let table = gwa_dims(args.max_degree, args.degree_of_h);
    let doc = GwaDimsFile {
        tool: tool_info(),
        model: args.name,
        max_degree: args.max_degree,
        degree_of_h: args.degree_of_h,
        values: table.dims,
    };
    let mut text_table = TextTable::default();
    text_table.row(degree_header(doc.max_degree));
    text_table.row(dims_row("dim", &doc.values));
    print_output(format, &doc, &text_table.render(""));
    Ok(ExitCode::SUCCESS)
}
