//! Command-line surface: JSON input, command dispatch, deterministic output.
//!
//! Exit codes: 0 success, 1 invalid input (schema or unrealizable data),
//! 2 internal verification failure (pipeline disagreement).

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use curvelink::equisingularity::{validate_and_order, ContactPair, EquisigType};
use curvelink::pipelines::{
    alexander_iterative, poincare_iterative, verify, Expanded, PipelineResult,
};
use curvelink::resolution_graph;
use curvelink::semigroup::{conductor_and_symmetry, CharExponents};

/// JSON input document: branches by characteristic exponents, pair data as
/// intersections `[i, j, m]` or contacts `[i, j, q, c]` with 1-based branch
/// indices, and an optional default truncation order.
#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct InputDocument {
    pub branches: Vec<BranchSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<PairData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncate: Option<usize>,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct BranchSpec {
    #[serde(rename = "char")]
    pub chars: Vec<i128>,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct PairData {
    pub mode: PairMode,
    pub data: Vec<Vec<i128>>,
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "lowercase")]
pub enum PairMode {
    Intersection,
    Contact,
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid json: {}", e))
    }

    /// Canonical re-emission; parsing the result reproduces the document.
    pub fn canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    /// Validates the schema and builds the equisingularity type. Contact
    /// data is converted to intersections immediately.
    pub fn to_equisig(&self) -> Result<EquisigType, String> {
        let r = self.branches.len();
        if r == 0 {
            return Err("schema: no branches".into());
        }
        let chars: Vec<CharExponents> = self
            .branches
            .iter()
            .map(|b| CharExponents::new(b.chars.clone()).map_err(|e| format!("branch: {}", e)))
            .collect::<Result<_, _>>()?;
        if r == 1 {
            if let Some(p) = &self.pairs {
                if !p.data.is_empty() {
                    return Err("schema: pair data given for a single branch".into());
                }
            }
            return Ok(EquisigType::single(chars.into_iter().next().unwrap()));
        }
        let pairs = self
            .pairs
            .as_ref()
            .ok_or_else(|| "schema: pair data required for several branches".to_string())?;
        let index = |x: i128| -> Result<usize, String> {
            if x < 1 || x > r as i128 {
                return Err(format!("schema: branch index {} out of range", x));
            }
            Ok(x as usize - 1)
        };
        match pairs.mode {
            PairMode::Intersection => {
                let mut entries = Vec::new();
                for row in &pairs.data {
                    if row.len() != 3 {
                        return Err("schema: intersection entries are [i, j, m]".into());
                    }
                    entries.push((index(row[0])?, index(row[1])?, row[2]));
                }
                EquisigType::from_intersections(chars, &entries).map_err(|e| e.to_string())
            }
            PairMode::Contact => {
                let mut entries = Vec::new();
                for row in &pairs.data {
                    if row.len() != 4 {
                        return Err("schema: contact entries are [i, j, q, c]".into());
                    }
                    if row[2] < 0 {
                        return Err("schema: contact level must be nonnegative".into());
                    }
                    entries.push((
                        index(row[0])?,
                        index(row[1])?,
                        ContactPair::new(row[2] as usize, row[3]),
                    ));
                }
                EquisigType::from_contacts(chars, &entries).map_err(|e| e.to_string())
            }
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "curvelink",
    about = "Exact Poincare series and Alexander polynomials of plane curve singularities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    /// Input JSON file.
    file: PathBuf,
    /// Print the factored form.
    #[arg(long)]
    factored: bool,
    /// Print the expanded polynomial or truncated series.
    #[arg(long)]
    expanded: bool,
    /// Print the step-by-step trace.
    #[arg(long)]
    trace: bool,
    /// Truncation order for one-branch series.
    #[arg(long)]
    truncate: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-branch semigroup data: generators, gcd sequence, conductor.
    Semigroup { file: PathBuf },
    /// Pairwise intersection multiplicities and contact pairs.
    Contact { file: PathBuf },
    /// Special vertices of the dual resolution graph.
    Graph {
        file: PathBuf,
        /// Emit Graphviz DOT instead of the vertex table.
        #[arg(long)]
        dot: bool,
    },
    /// Poincare series (iterative pipeline).
    Poincare(SeriesArgs),
    /// Alexander polynomial of the link (satellization pipeline).
    Alexander(SeriesArgs),
    /// Run all pipelines and check their coincidence.
    Verify {
        file: PathBuf,
        /// Truncation order for one-branch series.
        #[arg(long)]
        truncate: Option<usize>,
    },
}

/// Runs the CLI; returns the process exit code, writing to the given
/// streams. Output is deterministic for fixed inputs.
pub fn run(argv: &[String], out: &mut String, err: &mut String) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e);
            return 1;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {}", msg);
            1
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(err, "internal error: {}", msg);
            2
        }
    }
}

enum Failure {
    Input(String),
    Internal(String),
}

fn load(file: &PathBuf) -> Result<(InputDocument, EquisigType), Failure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::Input(format!("{}: {}", file.display(), e)))?;
    let doc = InputDocument::parse(&text).map_err(Failure::Input)?;
    let et = doc.to_equisig().map_err(Failure::Input)?;
    Ok((doc, et))
}

fn truncation(cli: Option<usize>, doc: &InputDocument) -> Option<usize> {
    cli.or(doc.truncate).or_else(|| {
        std::env::var("CURVELINK_TRUNCATE")
            .ok()
            .and_then(|s| s.parse().ok())
    })
}

fn fmt_list(values: &[i128]) -> String {
    let items: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn order_line(et: &EquisigType) -> Result<String, Failure> {
    let (perm, _) = validate_and_order(et).map_err(|e| Failure::Input(e.to_string()))?;
    let items: Vec<String> = perm.iter().map(|&i| (i + 1).to_string()).collect();
    Ok(format!("good order: [{}]", items.join(", ")))
}

fn print_result(
    out: &mut String,
    args: &SeriesArgs,
    et: &EquisigType,
    result: &PipelineResult,
) -> Result<(), Failure> {
    let _ = writeln!(out, "{}", order_line(et)?);
    let default = !(args.factored || args.expanded || args.trace);
    if args.trace {
        for step in &result.trace {
            let _ = writeln!(out, "step {}: {}", step.id, step.factors);
            let _ = writeln!(out, "  accumulated: {}", step.after);
        }
    }
    if args.factored || default {
        let _ = writeln!(out, "factored: {}", result.factored);
    }
    if args.expanded || default {
        match &result.expanded {
            Expanded::Polynomial(p) => {
                let _ = writeln!(out, "expanded: {}", p);
            }
            Expanded::Series(coeffs) => {
                let items: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                let _ = writeln!(out, "series: [{}]", items.join(", "));
            }
        }
    }
    Ok(())
}

fn dispatch(cli: Cli, out: &mut String) -> Result<i32, Failure> {
    match cli.command {
        Command::Semigroup { file } => {
            let (_, et) = load(&file)?;
            for (i, b) in et.branches().iter().enumerate() {
                let pairs: Vec<String> = b
                    .puiseux_pairs()
                    .iter()
                    .map(|(p, m)| format!("({}, {})", p, m))
                    .collect();
                let (conductor, symmetric) = conductor_and_symmetry(&b.semigroup())
                    .map_err(|e| Failure::Input(e.to_string()))?;
                let _ = writeln!(
                    out,
                    "branch {}: chars {} gens {} e {} n {} pairs [{}]",
                    i + 1,
                    fmt_list(b.chars().exponents()),
                    fmt_list(b.gens()),
                    fmt_list(b.e_sequence()),
                    fmt_list(b.n_sequence()),
                    pairs.join(", "),
                );
                let _ = writeln!(
                    out,
                    "  conductor {} symmetric {}{}",
                    conductor,
                    symmetric,
                    if b.is_smooth() { " (semigroup N)" } else { "" }
                );
            }
            Ok(0)
        }
        Command::Contact { file } => {
            let (_, et) = load(&file)?;
            let _ = writeln!(out, "{}", order_line(&et)?);
            for i in 0..et.r() {
                for j in (i + 1)..et.r() {
                    let _ = writeln!(
                        out,
                        "({}, {}): m = {} contact = {}",
                        i + 1,
                        j + 1,
                        et.intersection(i, j),
                        et.contact(i, j),
                    );
                }
            }
            Ok(0)
        }
        Command::Graph { file, dot } => {
            let (_, et) = load(&file)?;
            let g = resolution_graph::build(&et).map_err(|e| Failure::Input(e.to_string()))?;
            if dot {
                let _ = write!(out, "{}", g.to_dot());
                return Ok(0);
            }
            let _ = writeln!(out, "{}", order_line(&et)?);
            for v in g.vertices() {
                let marker = if v.id == g.sigma0() {
                    " sigma0"
                } else if v.id == g.origin() {
                    " first"
                } else {
                    ""
                };
                let n_rho = match v.n_rho {
                    Some(n) => format!(" n_rho={}", n),
                    None => String::new(),
                };
                let _ = writeln!(
                    out,
                    "vertex {}: {} v={} valence={} s={}{}{}",
                    v.id,
                    v.kind.name(),
                    fmt_list(&v.value),
                    v.valence,
                    v.s,
                    n_rho,
                    marker,
                );
            }
            for (i, &at) in g.arrows().iter().enumerate() {
                let _ = writeln!(out, "arrow C{} at vertex {}", i + 1, at);
            }
            Ok(0)
        }
        Command::Poincare(args) => {
            let (doc, et) = load(&args.file)?;
            let n = truncation(args.truncate, &doc);
            let result =
                poincare_iterative(&et, n).map_err(|e| Failure::Internal(e.to_string()))?;
            print_result(out, &args, &et, &result)?;
            Ok(0)
        }
        Command::Alexander(args) => {
            let (doc, et) = load(&args.file)?;
            let n = truncation(args.truncate, &doc);
            let result =
                alexander_iterative(&et, n).map_err(|e| Failure::Internal(e.to_string()))?;
            print_result(out, &args, &et, &result)?;
            Ok(0)
        }
        Command::Verify { file, truncate } => {
            let (doc, et) = load(&file)?;
            let n = truncation(truncate, &doc);
            let report = verify(&et, n).map_err(|e| Failure::Internal(e.to_string()))?;
            let items: Vec<String> = report.order.iter().map(|i| i.to_string()).collect();
            let _ = writeln!(out, "good order: [{}]", items.join(", "));
            for c in &report.comparisons {
                let _ = writeln!(
                    out,
                    "{} {} ({})",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.label,
                    c.detail,
                );
            }
            if report.all_pass() {
                let _ = writeln!(
                    out,
                    "{}",
                    if et.r() > 1 {
                        "3 pipelines agree"
                    } else {
                        "series identities agree"
                    }
                );
                Ok(0)
            } else {
                let _ = writeln!(out, "VERIFICATION FAILED");
                Ok(2)
            }
        }
    }
}
