//! Command dispatch for the `cyczeta` binary.
//!
//! Exit codes: 0 success, 1 domain error (including a failed invariance
//! check), 2 parse, schema or usage error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::blowup::{apply_blowup, compare, BlowupError, InvarianceReport};
use crate::campaign::run_campaign;
use crate::document::{format_config, parse_config, parse_unchecked, Document, DocumentError};
use crate::model::DivisorConfiguration;
use crate::zeta::{
    compute_micc, compute_naive, compute_zeta, hodge_zeta, pole_candidates, stringy_residue, topological_zeta,
    twisted_topological_zeta, ZetaError,
};

#[derive(Parser, Debug)]
#[command(name = "cyczeta", version, about = "Motivic infinite cyclic zeta functions from resolution data")]
struct Cli {
    /// Comma-separated component ids overriding the document's selection.
    #[arg(long, global = true, value_delimiter = ',')]
    selection: Option<Vec<String>>,
    /// Write standard output to this file instead.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the zeta function as a rational series.
    Zeta { file: PathBuf },
    /// Print the motivic infinite cyclic cover class.
    Micc { file: PathBuf },
    /// Print the naive zeta function.
    Naive { file: PathBuf },
    /// Print the Hodge specialization (uses hodge_table).
    Hodge { file: PathBuf },
    /// Print the topological zeta function in s (uses chi_table).
    Topzeta { file: PathBuf },
    /// Print the twisted topological zeta function for a character of the given order.
    Twisted {
        #[arg(long)]
        order: i64,
        file: PathBuf,
    },
    /// Print the residue at T = uv (local stringy E-function).
    Stringy { file: PathBuf },
    /// Apply the document's blow-up script and print the resulting document.
    Blowup { file: PathBuf },
    /// Check invariance: along a document's blow-up script, between two
    /// documents, or over a random campaign.
    Verify {
        file: Option<PathBuf>,
        other: Option<PathBuf>,
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the pole candidates surviving cancellation.
    Poles { file: PathBuf },
    /// Print the limit of the zeta function as T goes to infinity.
    Limit { file: PathBuf },
    /// Report configuration and blow-up script violations.
    Validate { file: PathBuf },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Domain(String),
    Input(String),
}

impl From<ZetaError> for Failure {
    fn from(e: ZetaError) -> Self {
        match e {
            ZetaError::Model(m) => Failure::Input(m.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

impl From<BlowupError> for Failure {
    fn from(e: BlowupError) -> Self {
        match e {
            BlowupError::Invalid(_) => Failure::Input(e.to_string()),
            BlowupError::Zeta(z) => z.into(),
        }
    }
}

fn read(path: &Path, checked: bool) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let parsed = if checked { parse_config(&text) } else { parse_unchecked(&text) };
    parsed.map_err(|e: DocumentError| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path, selection: &Option<Vec<String>>) -> Result<Document, Failure> {
    let mut doc = read(path, false)?;
    if let Some(sel) = selection {
        doc.config.selection = sel.iter().cloned().collect();
    }
    let v = doc.config.validate();
    if !v.is_empty() {
        return Err(Failure::Input(format!("{}: {}", path.display(), v.join("; "))));
    }
    Ok(doc)
}

fn script_steps(doc: &Document) -> Result<Vec<DivisorConfiguration>, Failure> {
    let mut steps = vec![doc.config.clone()];
    for (i, spec) in doc.blowups.iter().enumerate() {
        let next = apply_blowup(steps.last().expect("nonempty"), spec)
            .map_err(|e| Failure::from(e).prefix(&format!("blow-up #{i}: ")))?;
        steps.push(next);
    }
    Ok(steps)
}

impl Failure {
    fn prefix(self, p: &str) -> Self {
        match self {
            Failure::Domain(s) => Failure::Domain(format!("{p}{s}")),
            Failure::Input(s) => Failure::Input(format!("{p}{s}")),
        }
    }
}

fn report_line(out: &mut String, label: &str, rep: &InvarianceReport) {
    let naive = match rep.naive_equal {
        Some(true) => "equal",
        Some(false) => "NOT equal",
        None => "skipped (no geom classes)",
    };
    let _ = writeln!(
        out,
        "{label}: zeta {}, naive {naive}, cover {}",
        if rep.zeta_equal { "equal" } else { "NOT equal" },
        if rep.micc_equal { "equal" } else { "NOT equal" }
    );
    if !rep.zeta_equal {
        let _ = writeln!(out, "  witness: {}", rep.witness);
    }
}

/// Returns whether every check passed.
fn verify(
    file: Option<PathBuf>,
    other: Option<PathBuf>,
    random: Option<usize>,
    seed: u64,
    selection: &Option<Vec<String>>,
    out: &mut String,
) -> Result<bool, Failure> {
    let mut ok = true;
    let mut checked_any = false;
    if let Some(n) = random {
        checked_any = true;
        let results = run_campaign(n, seed)?;
        let failed: Vec<_> = results.iter().filter(|r| !r.passed()).collect();
        let _ = writeln!(out, "random campaign: seed {seed}, {n} cases, {} passed", n - failed.len());
        for r in &failed {
            let _ = writeln!(
                out,
                "  case {}: zeta {}, naive {}, control {}",
                r.index,
                r.zeta_equal,
                r.naive_equal,
                if r.control_detected { "detected" } else { "MISSED" }
            );
        }
        ok &= failed.is_empty();
    }
    match (file, other) {
        (Some(a), Some(b)) => {
            checked_any = true;
            let (da, db) = (load(&a, selection)?, load(&b, selection)?);
            let rep = compare(&da.config, &db.config)?;
            report_line(out, "documents", &rep);
            ok &= rep.holds();
        }
        (Some(a), None) => {
            let doc = load(&a, selection)?;
            if doc.blowups.is_empty() && random.is_none() {
                return Err(Failure::Input(format!("{}: no blowups to verify", a.display())));
            }
            let steps = script_steps(&doc)?;
            for (i, pair) in steps.windows(2).enumerate() {
                checked_any = true;
                let rep = compare(&pair[0], &pair[1])?;
                report_line(out, &format!("blow-up #{i} ({})", doc.blowups[i].new_id), &rep);
                ok &= rep.holds();
            }
        }
        (None, _) => {}
    }
    if !checked_any {
        return Err(Failure::Input("nothing to verify: give a file or --random".into()));
    }
    let _ = writeln!(out, "INVARIANT: {}", if ok { "equal" } else { "NOT equal" });
    Ok(ok)
}

fn dispatch(cli: Cli, out: &mut String) -> Result<bool, Failure> {
    let sel = &cli.selection;
    match cli.command {
        Command::Zeta { file } => {
            let _ = writeln!(out, "{}", compute_zeta(&load(&file, sel)?.config)?);
        }
        Command::Micc { file } => {
            let _ = writeln!(out, "{}", compute_micc(&load(&file, sel)?.config)?);
        }
        Command::Naive { file } => {
            let _ = writeln!(out, "{}", compute_naive(&load(&file, sel)?.config)?);
        }
        Command::Hodge { file } => {
            let doc = load(&file, sel)?;
            let _ = writeln!(out, "{}", hodge_zeta(&doc.config, &doc.hodge_table)?);
        }
        Command::Topzeta { file } => {
            let doc = load(&file, sel)?;
            let z = topological_zeta(&doc.config, &doc.chi_table)?;
            let _ = writeln!(out, "{z}");
        }
        Command::Twisted { order, file } => {
            let doc = load(&file, sel)?;
            let _ = writeln!(out, "{}", twisted_topological_zeta(&doc.config, order, &doc.chi_table)?);
        }
        Command::Stringy { file } => {
            let doc = load(&file, sel)?;
            let _ = writeln!(out, "{}", stringy_residue(&doc.config, &doc.hodge_table)?);
        }
        Command::Blowup { file } => {
            let doc = load(&file, sel)?;
            let last = script_steps(&doc)?.pop().expect("nonempty");
            let result = Document {
                config: last,
                blowups: Vec::new(),
                hodge_table: doc.hodge_table,
                chi_table: doc.chi_table,
            };
            out.push_str(&format_config(&result));
        }
        Command::Verify {
            file,
            other,
            random,
            seed,
        } => return verify(file, other, random, seed, sel, out),
        Command::Poles { file } => {
            let z = compute_zeta(&load(&file, sel)?.config)?;
            for p in pole_candidates(&z) {
                let _ = writeln!(out, "{p}  s = {}", p.s_value());
            }
        }
        Command::Limit { file } => {
            let z = compute_zeta(&load(&file, sel)?.config)?;
            let _ = writeln!(out, "{}", z.limit().map_err(|e| Failure::Domain(e.to_string()))?);
        }
        Command::Validate { file } => {
            let mut doc = read(&file, false)?;
            if let Some(s) = sel {
                doc.config.selection = s.iter().cloned().collect();
            }
            let mut violations = doc.config.validate();
            if violations.is_empty() {
                if let Err(Failure::Input(msg) | Failure::Domain(msg)) = script_steps(&doc) {
                    violations.push(msg);
                }
            }
            if violations.is_empty() {
                let _ = writeln!(out, "valid");
            } else {
                return Err(Failure::Input(violations.join("\n")));
            }
        }
    }
    Ok(true)
}

/// Runs the command line given by `args` (the first item is the program
/// name) and captures its output.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let output = cli.output.clone();
    let mut out = String::new();
    let (code, stderr) = match dispatch(cli, &mut out) {
        Ok(true) => (0, String::new()),
        Ok(false) => (1, String::new()),
        Err(Failure::Domain(msg)) => (1, format!("error: {msg}\n")),
        Err(Failure::Input(msg)) => (2, format!("error: {msg}\n")),
    };
    if let Some(path) = output {
        if let Err(e) = std::fs::write(&path, &out) {
            return Outcome {
                code: 2,
                stdout: String::new(),
                stderr: format!("error: {}: {e}\n", path.display()),
            };
        }
        out.clear();
    }
    Outcome {
        code,
        stdout: out,
        stderr,
    }
}
