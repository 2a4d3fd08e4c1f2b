//! The `signed02` command line.
//!
//! Exit codes: 0 success, 1 refusal (no certificate, failed filter, failed
//! extension, or no solution when `--expect-solution` is given), 2 usage or
//! input error.

mod expr;

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use signed02::catalog::{constructible_rows, Catalog, CatalogObject, TABLE};
use signed02::extension::{
    delete_vertices, extend_four_to_three, extend_four_to_three_with, extend_one_vertex, extend_one_vertex_with,
    extend_zero_pair, extend_zero_pair_relaxed_with, extend_zero_pair_with, ExtensionError,
};
use signed02::io::{parse_graph6, parse_signed, parse_weighing, write_graph6, write_signed, write_weighing};
use signed02::search::{search_signatures_with, search_weighing, SearchOptions};
use signed02::spectral::{best_certificate, certify_four_sym, certify_three_sym, filter_sr2se};
use signed02::weighing::{from_bipartite_sr2se, is_proper, to_bipartite_sr2se};
use signed02::{structure_report, SignedGraph, SpectrumKind};

#[derive(Parser, Debug)]
#[command(name = "signed02", version, about = "Signed graphs with symmetric spectra: certificates, searches, extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the strongest spectral certificate and the structure report.
    Check(InputArgs),
    /// Enumerate signings with A² = rI up to switching isomorphism.
    Search(SearchArgs),
    /// Enumerate weighing matrices with intersection numbers 0 and 2.
    SearchWeighing(SearchWeighingArgs),
    /// Build a graph from a construction expression, e.g. `ltimes-k2(R5.4)`.
    Construct(ConstructArgs),
    /// Extend a graph back towards spectrum {±λ}.
    Extend(ExtendArgs),
    /// Evaluate the necessary conditions for (n, r) signed rectagraphs with A² = rI.
    Filter(FilterArgs),
    /// Transcode between graph6, sg1 and weighing-matrix text.
    Convert(ConvertArgs),
    /// List the table of known graphs or print one entry.
    Catalog(CatalogArgs),
}

#[derive(Args, Debug, Clone, Default)]
struct InputArgs {
    /// Catalog id (R4.2, G5, Clebsch, ...).
    #[arg(long)]
    catalog: Option<String>,
    /// Construction expression.
    #[arg(long)]
    expr: Option<String>,
    /// File in sg1 format (`-` for stdin).
    #[arg(long)]
    signed: Option<PathBuf>,
    /// File with one graph6 line (`-` for stdin); the signing is all-positive.
    #[arg(long = "graph6-file", alias = "graph6")]
    graph6: Option<PathBuf>,
    /// Weighing matrix for an ingest row, as ID=FILE.
    #[arg(long = "weighing", value_name = "ID=FILE")]
    weighing: Vec<String>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Maximum number of branching decisions.
    #[arg(long)]
    budget: Option<u64>,
    /// Base vertex of the normalized labelling.
    #[arg(long, default_value_t = 0)]
    base: usize,
    /// Run on one thread.
    #[arg(long)]
    serial: bool,
    /// Write solutions (sg1, blank-line separated) here instead of stdout.
    #[arg(long)]
    solutions: Option<PathBuf>,
    /// Write the proof log here instead of stdout.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Exit 1 when no solution is found.
    #[arg(long)]
    expect_solution: bool,
}

#[derive(Args, Debug)]
struct SearchWeighingArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    budget: Option<u64>,
    /// Keep only proper matrices.
    #[arg(long)]
    proper: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    expect_solution: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum GraphFormat {
    Sg1,
    Graph6,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    expression: String,
    #[arg(long, value_enum, default_value_t = GraphFormat::Sg1)]
    format: GraphFormat,
    #[arg(long = "weighing", value_name = "ID=FILE")]
    weighing: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum ExtendMode {
    /// Pick the step from the certificate and repeat until A² = λ²I.
    Auto,
    One,
    FourToThree,
    ZeroPair,
    ZeroPairRelaxed,
}

#[derive(Args, Debug)]
struct ExtendArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Delete these vertices first (comma separated).
    #[arg(long, value_delimiter = ',')]
    delete: Vec<usize>,
    /// Target λ²; inferred from the certificate when omitted.
    #[arg(long)]
    lambda_sq: Option<i64>,
    #[arg(long, value_enum, default_value_t = ExtendMode::Auto)]
    mode: ExtendMode,
    /// In auto mode, fall back to the relaxed zero-pair step.
    #[arg(long)]
    relaxed: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FilterArgs {
    /// Order, or a range `a..b` (inclusive).
    #[arg(long)]
    n: String,
    /// Degree, or a range `a..b` (inclusive).
    #[arg(long)]
    r: String,
    #[arg(long)]
    bipartite: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Graph6,
    Sg1,
    Weighing,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    /// Input file (`-` for stdin).
    input: PathBuf,
    #[arg(long, value_enum)]
    from: Format,
    #[arg(long, value_enum)]
    to: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    /// Entry to print; lists the table when omitted.
    id: Option<String>,
    #[arg(long, value_enum, default_value_t = GraphFormat::Sg1)]
    format: GraphFormat,
    #[arg(long = "weighing", value_name = "ID=FILE")]
    weighing: Vec<String>,
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

fn refusal(msg: impl Into<String>) -> Failure {
    Failure { code: 1, msg: msg.into() }
}

type Outcome = Result<(), Failure>;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    let result = match cli.command {
        Command::Check(a) => check(&a, out),
        Command::Search(a) => search(&a, out, err),
        Command::SearchWeighing(a) => search_weighing_cmd(&a, out),
        Command::Construct(a) => construct(&a, out),
        Command::Extend(a) => extend(&a, out, err),
        Command::Filter(a) => filter(&a, out),
        Command::Convert(a) => convert(&a, out),
        Command::Catalog(a) => catalog_cmd(&a, out),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: &Option<PathBuf>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => write!(out, "{text}").map_err(|e| usage(e.to_string())),
    }
}

fn load_catalog(specs: &[String]) -> Result<Catalog, Failure> {
    let mut cat = Catalog::new();
    for spec in specs {
        let (id, file) = spec.split_once('=').ok_or_else(|| usage(format!("--weighing expects ID=FILE, got `{spec}`")))?;
        let text = read_input(&PathBuf::from(file))?;
        let w = parse_weighing(&text).map_err(|e| usage(format!("{file}: {e}")))?;
        cat = cat.with_weighing(id, w).map_err(|e| usage(e.to_string()))?;
    }
    Ok(cat)
}

fn load_graph(a: &InputArgs) -> Result<SignedGraph, Failure> {
    let given = [a.catalog.is_some(), a.expr.is_some(), a.signed.is_some(), a.graph6.is_some()];
    if given.iter().filter(|&&b| b).count() != 1 {
        return Err(usage("give exactly one of --catalog, --expr, --signed, --graph6-file"));
    }
    let cat = load_catalog(&a.weighing)?;
    if let Some(id) = &a.catalog {
        return cat.signed(id).map_err(|e| usage(e.to_string()));
    }
    if let Some(e) = &a.expr {
        return expr::evaluate(e, &cat).map_err(usage);
    }
    if let Some(p) = &a.signed {
        return parse_signed(&read_input(p)?).map_err(|e| usage(format!("{}: {e}", p.display())));
    }
    let p = a.graph6.as_ref().expect("one input given");
    let text = read_input(p)?;
    let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    parse_graph6(line.trim().as_bytes()).map(|g| g.to_signed()).map_err(|e| usage(format!("{}: {e}", p.display())))
}

fn w(out: &mut dyn Write, s: std::fmt::Arguments<'_>) -> Outcome {
    out.write_fmt(s).map_err(|e| usage(e.to_string()))
}

fn check(a: &InputArgs, out: &mut dyn Write) -> Outcome {
    let g = load_graph(a)?;
    let cert = best_certificate(&g);
    let rep = structure_report(&g);
    w(out, format_args!("{cert}\n"))?;
    let degree = rep.degree.map_or("irregular".to_string(), |d| d.to_string());
    w(
        out,
        format_args!(
            "n={} edges={} negative={} degree={} connected={} bipartite={} triangle-free={} zero-two={} quadrangles={}\n",
            g.n(),
            g.edge_count(),
            g.negative_edge_count(),
            degree,
            rep.connected,
            rep.bipartite,
            rep.triangle_free,
            rep.zero_two,
            rep.quadrangle_count
        ),
    )?;
    if cert.kind == SpectrumKind::Other {
        return Err(refusal("no symmetric-spectrum certificate applies"));
    }
    Ok(())
}

fn search(a: &SearchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let g = load_graph(&a.input)?;
    let opts = SearchOptions { budget: a.budget, parallel: !a.serial, base: a.base, free_edge_order: None };
    let res = search_signatures_with(g.support(), &opts).map_err(|e| usage(e.to_string()))?;
    for (row, c) in res.log.row_candidates.iter().enumerate() {
        let _ = writeln!(err, "depth {row} candidates {c}");
    }
    w(
        out,
        format_args!(
            "classes {} raw {} nodes {} exhausted {}\n",
            res.solutions.len(),
            res.raw_solutions,
            res.nodes_explored,
            res.exhausted
        ),
    )?;
    let sols: Vec<String> = res.solutions.iter().map(write_signed).collect();
    let sol_text = sols.join("\n");
    match &a.solutions {
        Some(_) => emit(out, &a.solutions, &sol_text)?,
        None if !sol_text.is_empty() => w(out, format_args!("{sol_text}\n"))?,
        None => {}
    }
    let log = res.log.to_text();
    match &a.log {
        Some(_) => emit(out, &a.log, &log)?,
        None => w(out, format_args!("{log}"))?,
    }
    if a.expect_solution && res.solutions.is_empty() {
        return Err(refusal("no signing with A² = rI found"));
    }
    Ok(())
}

fn search_weighing_cmd(a: &SearchWeighingArgs, out: &mut dyn Write) -> Outcome {
    let res = search_weighing(a.n, a.r, a.budget);
    let mats: Vec<_> = res.matrices.iter().filter(|m| !a.proper || is_proper(m)).collect();
    w(
        out,
        format_args!(
            "classes {} proper {} raw {} nodes {} exhausted {}\n",
            mats.len(),
            mats.iter().filter(|m| is_proper(m)).count(),
            res.raw,
            res.nodes_explored,
            res.exhausted
        ),
    )?;
    let text: Vec<String> = mats.iter().map(|m| write_weighing(m)).collect();
    let text = text.join("\n");
    match &a.out {
        Some(_) => emit(out, &a.out, &text)?,
        None if !text.is_empty() => w(out, format_args!("{text}\n"))?,
        None => {}
    }
    if a.expect_solution && mats.is_empty() {
        return Err(refusal(format!("no ({}, {}) weighing matrix found", a.n, a.r)));
    }
    Ok(())
}

fn render(g: &SignedGraph, f: GraphFormat) -> String {
    match f {
        GraphFormat::Sg1 => write_signed(g),
        GraphFormat::Graph6 => format!("{}\n", write_graph6(g.support())),
    }
}

fn construct(a: &ConstructArgs, out: &mut dyn Write) -> Outcome {
    let cat = load_catalog(&a.weighing)?;
    let g = expr::evaluate(&a.expression, &cat).map_err(usage)?;
    emit(out, &a.out, &render(&g, a.format))
}

fn extend(a: &ExtendArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let mut g = load_graph(&a.input)?;
    if !a.delete.is_empty() {
        g = delete_vertices(&g, &a.delete).map_err(|e| usage(e.to_string()))?;
        let _ = writeln!(err, "deleted {:?}: {}", a.delete, best_certificate(&g));
    }
    let fail = |e: ExtensionError| refusal(e.to_string());
    let lam = a.lambda_sq;
    let h = match a.mode {
        ExtendMode::One => match lam {
            Some(l) => extend_one_vertex_with(&g, l),
            None => extend_one_vertex(&g),
        }
        .map_err(fail)?,
        ExtendMode::FourToThree => match lam {
            Some(l) => extend_four_to_three_with(&g, l),
            None => extend_four_to_three(&g),
        }
        .map_err(fail)?,
        ExtendMode::ZeroPair => match lam {
            Some(l) => extend_zero_pair_with(&g, l),
            None => extend_zero_pair(&g),
        }
        .map_err(fail)?,
        ExtendMode::ZeroPairRelaxed => {
            let l = lam.or_else(|| certify_three_sym(&g).ok().map(|c| c.lambda_sq));
            let l = l.ok_or_else(|| usage("give --lambda-sq for the relaxed zero-pair step"))?;
            extend_zero_pair_relaxed_with(&g, l).map_err(fail)?
        }
        ExtendMode::Auto => auto_extend(g, lam, a.relaxed, err)?,
    };
    let _ = writeln!(err, "result: {}", best_certificate(&h));
    emit(out, &a.out, &write_signed(&h))
}

fn auto_extend(mut g: SignedGraph, lam: Option<i64>, relaxed: bool, err: &mut dyn Write) -> Result<SignedGraph, Failure> {
    let lam = match lam {
        Some(l) => l,
        None => {
            let cert = certify_three_sym(&g).or_else(|_| certify_four_sym(&g)).map_err(|e| {
                refusal(format!("cannot infer λ² (no ThreeSym or FourSym certificate: {e}); pass --lambda-sq"))
            })?;
            cert.lambda_sq
        }
    };
    for _ in 0..3 {
        if signed02::spectral::certify_two_sym(&g).is_ok_and(|c| c.lambda_sq == lam) {
            return Ok(g);
        }
        let three = signed02::spectral::certify_three_sym_with(&g, lam).ok();
        let step = match three.map(|c| c.d) {
            Some(1) => ("one-vertex", extend_one_vertex_with(&g, lam)),
            Some(2) => {
                let strict = extend_zero_pair_with(&g, lam);
                match strict {
                    Err(e) if relaxed => {
                        let _ = writeln!(err, "strict zero-pair step refused ({e}); trying relaxed");
                        ("zero-pair-relaxed", extend_zero_pair_relaxed_with(&g, lam))
                    }
                    other => ("zero-pair", other),
                }
            }
            _ => ("four-to-three", extend_four_to_three_with(&g, lam)),
        };
        g = step.1.map_err(|e| refusal(format!("{} step: {e}", step.0)))?;
        let _ = writeln!(err, "{} step: {}", step.0, best_certificate(&g));
    }
    Err(refusal("no A² = λ²I graph after three steps"))
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<u64>, Failure> {
    let bad = || usage(format!("expected a number or a range a..b, got `{s}`"));
    match s.split_once("..") {
        Some((a, b)) => {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            Ok(a..=b)
        }
        None => {
            let a: u64 = s.trim().parse().map_err(|_| bad())?;
            Ok(a..=a)
        }
    }
}

fn filter(a: &FilterArgs, out: &mut dyn Write) -> Outcome {
    let ns = parse_range(&a.n)?;
    let rs = parse_range(&a.r)?;
    let mut failed = 0usize;
    let kind = if a.bipartite { " bipartite" } else { "" };
    for n in ns {
        for r in rs.clone() {
            let v = filter_sr2se(n, r, a.bipartite);
            if !v.passed {
                failed += 1;
            }
            w(out, format_args!("n={n} r={r}{kind}: {v}\n"))?;
        }
    }
    if failed > 0 {
        return Err(refusal(format!("{failed} parameter pair(s) fail")));
    }
    Ok(())
}

fn convert(a: &ConvertArgs, out: &mut dyn Write) -> Outcome {
    let text = read_input(&a.input)?;
    let name = a.input.display().to_string();
    let bad = |e: String| usage(format!("{name}: {e}"));
    let g: Option<SignedGraph>;
    let mut weighing = None;
    match a.from {
        Format::Graph6 => {
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
            g = Some(parse_graph6(line.trim().as_bytes()).map_err(|e| bad(e.to_string()))?.to_signed());
        }
        Format::Sg1 => g = Some(parse_signed(&text).map_err(|e| bad(e.to_string()))?),
        Format::Weighing => {
            let m = parse_weighing(&text).map_err(|e| bad(e.to_string()))?;
            g = None;
            weighing = Some(m);
        }
    }
    let result = match (a.to, g, weighing) {
        (Format::Weighing, None, Some(m)) => write_weighing(&m),
        (Format::Weighing, Some(g), _) => {
            let (m, _) = from_bipartite_sr2se(&g).map_err(|e| refusal(e.to_string()))?;
            write_weighing(&m)
        }
        (to, None, Some(m)) => {
            let g = to_bipartite_sr2se(&m).map_err(|e| refusal(e.to_string()))?;
            render(&g, if to == Format::Graph6 { GraphFormat::Graph6 } else { GraphFormat::Sg1 })
        }
        (Format::Graph6, Some(g), _) => render(&g, GraphFormat::Graph6),
        (Format::Sg1, Some(g), _) => render(&g, GraphFormat::Sg1),
        (_, None, None) => unreachable!("an input was parsed"),
    };
    emit(out, &a.out, &result)
}

fn catalog_cmd(a: &CatalogArgs, out: &mut dyn Write) -> Outcome {
    let cat = load_catalog(&a.weighing)?;
    let Some(id) = &a.id else {
        let buildable: Vec<&str> = constructible_rows().iter().map(|r| r.id).collect();
        for row in TABLE.iter() {
            let status = if buildable.contains(&row.id) { "built-in" } else { "needs weighing data" };
            w(out, format_args!("{row} ({status})\n"))?;
        }
        w(out, format_args!("named: G<r> Q<r> FQ<r> Clebsch T K22 K4 B742\n"))?;
        return Ok(());
    };
    let obj = cat.get(id).map_err(|e| usage(e.to_string()))?;
    let g = match obj {
        CatalogObject::Signed(g) => g,
        CatalogObject::Underlying(u) => u.to_signed(),
    };
    emit(out, &None, &render(&g, a.format))
}
