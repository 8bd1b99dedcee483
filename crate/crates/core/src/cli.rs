//! Batch command-line frontend: parse a system description file, run
//! reduction or verification, and emit reduced systems, coefficient
//! matrices, and certificates.
//!
//! Exit codes: 0 success, 1 parse error, 2 no free matrix / bound
//! violation, 3 verification failure, 4 resource limit.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};

use crate::bijection::{enumerate_rref, matrix_for_point, point_for_matrix};
use crate::error::Error;
use crate::gf::FieldSpec;
use crate::oracle::{
    check_sharpness, zero_sets_equal, SharpnessMode,
};
use crate::poly::{format_poly, parse_poly, value_table, MultiPoly};
use crate::reducer::{
    bound_check, reduce_polynomials, reduce_system, Mode, ReductionResult, SystemTable,
};
use crate::space::{enum_affine, enum_projective, format_affine, projective_bound};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_NO_FREE_MATRIX: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;
pub const EXIT_RESOURCE_LIMIT: i32 = 4;

#[derive(Parser)]
#[command(name = "fqreduce", version, about = "Reduce equation systems over finite fields to n scalar linear combinations with the same zero set")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Reduce the system described in an input file.
    Reduce(ReduceArgs),
    /// Verify the extremal instance: n+1 coordinate functions on one
    /// representative per projective point cannot be reduced to n.
    Witness(WitnessArgs),
    /// Dump the point/matrix correspondence and self-test both round trips.
    Lemma(LemmaArgs),
}

#[derive(Args)]
pub struct ReduceArgs {
    /// Input file (see the README for the grammar).
    pub input: String,
    /// Certify zero-set equality of input and output with the brute-force oracle.
    #[arg(long)]
    pub verify: bool,
    /// Refuse instances whose |X| exceeds the reduction bound.
    #[arg(long)]
    pub strict: bool,
    /// Number of output rows (defaults to the space dimension).
    #[arg(long)]
    pub target: Option<usize>,
    /// Seed for randomized subroutines (none in this command; accepted for
    /// uniformity).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker count; sweeps currently run sequentially.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args)]
pub struct WitnessArgs {
    /// Field literal, e.g. `2`, `5`, `2^3`, `2^2 modulus {1,1,1}`.
    #[arg(long)]
    pub field: String,
    /// Projective dimension n.
    #[arg(long)]
    pub n: usize,
    /// Sweep every matrix instead of random sampling.
    #[arg(long)]
    pub exhaustive: bool,
    /// Matrix budget: cap for the exhaustive sweep, sample count otherwise.
    #[arg(long, default_value_t = 1_000_000)]
    pub limit: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker count; sweeps currently run sequentially.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args)]
pub struct LemmaArgs {
    #[arg(long)]
    pub field: String,
    #[arg(long)]
    pub n: usize,
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::Usage(_) => EXIT_PARSE,
        Error::NoFreeMatrix { .. }
        | Error::EmptyProjectiveZeroSet { .. }
        | Error::BoundExceeded { .. } => EXIT_NO_FREE_MATRIX,
        Error::ResourceLimit(_) => EXIT_RESOURCE_LIMIT,
        Error::DivisionByZero { .. } | Error::NotAProjectivePoint => EXIT_PARSE,
    }
}

/// Parsed form of a system description file.
pub struct SystemFile {
    pub spec: FieldSpec,
    pub mode: FileMode,
}

pub enum FileMode {
    Polynomials {
        mode: Mode,
        vars: Vec<String>,
        polys: Vec<MultiPoly>,
    },
    Table(SystemTable),
}

/// Line-oriented input grammar: `field <literal>`, `mode
/// affine|projective|table`, then `vars`+`poly` lines or
/// `points`+`row` lines. `#` starts a comment.
pub fn parse_system_file(text: &str) -> Result<SystemFile, Error> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (fline, field_decl) = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, "empty input file"))?;
    let field_lit = field_decl
        .strip_prefix("field")
        .ok_or_else(|| Error::parse(fline, 1, "expected 'field <literal>'"))?;
    let spec = FieldSpec::parse(field_lit)
        .map_err(|e| Error::parse(fline, 7, e.to_string()))?;

    let (mline, mode_decl) = lines
        .next()
        .ok_or_else(|| Error::parse(fline + 1, 1, "expected 'mode affine|projective|table'"))?;
    let mode_word = mode_decl
        .strip_prefix("mode")
        .map(str::trim)
        .ok_or_else(|| Error::parse(mline, 1, "expected 'mode affine|projective|table'"))?;

    match mode_word {
        "affine" | "projective" => {
            let mode = if mode_word == "affine" { Mode::Affine } else { Mode::Projective };
            let (vline, vars_decl) = lines
                .next()
                .ok_or_else(|| Error::parse(mline + 1, 1, "expected 'vars <name> ...'"))?;
            let vars: Vec<String> = vars_decl
                .strip_prefix("vars")
                .ok_or_else(|| Error::parse(vline, 1, "expected 'vars <name> ...'"))?
                .split_whitespace()
                .map(|s| s.to_string())
                .collect();
            if vars.is_empty() {
                return Err(Error::parse(vline, 5, "at least one variable required"));
            }
            let mut polys = Vec::new();
            for (pline, l) in lines {
                let src = l
                    .strip_prefix("poly")
                    .ok_or_else(|| Error::parse(pline, 1, "expected 'poly <expression>'"))?;
                let offset = l.len() - src.len();
                let f = parse_poly(src, &vars, &spec).map_err(|e| match e {
                    Error::Parse { col, msg, .. } => Error::parse(pline, col + offset, msg),
                    other => other,
                })?;
                polys.push(f);
            }
            if polys.is_empty() {
                return Err(Error::parse(mline + 2, 1, "no 'poly' lines"));
            }
            Ok(SystemFile { spec, mode: FileMode::Polynomials { mode, vars, polys } })
        }
        "table" => {
            let (pline, points_decl) = lines
                .next()
                .ok_or_else(|| Error::parse(mline + 1, 1, "expected 'points <label> ...'"))?;
            let labels: Vec<String> = points_decl
                .strip_prefix("points")
                .ok_or_else(|| Error::parse(pline, 1, "expected 'points <label> ...'"))?
                .split_whitespace()
                .map(|s| s.to_string())
                .collect();
            let mut rows = Vec::new();
            for (rline, l) in lines {
                let vals = l
                    .strip_prefix("row")
                    .ok_or_else(|| Error::parse(rline, 1, "expected 'row <v> ...'"))?;
                let row = vals
                    .split_whitespace()
                    .map(|v| spec.parse_element(v))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| Error::parse(rline, 5, e.to_string()))?;
                rows.push(row);
            }
            if rows.is_empty() {
                return Err(Error::parse(pline + 1, 1, "no 'row' lines"));
            }
            let table = SystemTable::new(labels, rows, spec.clone())
                .map_err(|e| Error::parse(pline, 1, e.to_string()))?;
            Ok(SystemFile { spec, mode: FileMode::Table(table) })
        }
        other => Err(Error::parse(mline, 6, format!("unknown mode '{other}'"))),
    }
}

fn render_steps(out: &mut String, result: &ReductionResult) {
    for (i, step) in result.steps.iter().enumerate() {
        let _ = writeln!(
            out,
            "step {}: m {}, used {}, probes {}",
            i + 1,
            step.m,
            step.used_matrices.len(),
            step.probe_count
        );
    }
    let _ = writeln!(out, "coefficients:");
    let _ = write!(out, "{}", result.coefficients);
}

/// Run `reduce`; returns (output document, exit code).
pub fn cmd_reduce(args: &ReduceArgs) -> (String, i32) {
    let text = match std::fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => return (format!("error: cannot read {}: {e}\n", args.input), EXIT_PARSE),
    };
    let file = match parse_system_file(&text) {
        Ok(f) => f,
        Err(e) => return (format!("error: {e}\n"), exit_code_for(&e)),
    };
    let mut out = String::new();
    let _ = writeln!(out, "field {}", file.spec);
    match file.mode {
        FileMode::Polynomials { mode, vars, polys } => {
            let target = args.target.unwrap_or(match mode {
                Mode::Affine => vars.len(),
                Mode::Projective => vars.len().saturating_sub(1),
            });
            let _ = writeln!(
                out,
                "mode {}",
                if mode == Mode::Affine { "affine" } else { "projective" }
            );
            let _ = writeln!(out, "target {target}");
            let red = match reduce_polynomials(&polys, mode, target, args.strict) {
                Ok(r) => r,
                Err(e) => {
                    let _ = writeln!(out, "error: {e}");
                    return (out, exit_code_for(&e));
                }
            };
            for w in &red.warnings {
                let _ = writeln!(out, "warning: {w}");
            }
            render_steps(&mut out, &red.result);
            for (i, g) in red.polys.iter().enumerate() {
                let _ = writeln!(out, "poly g{} = {}", i + 1, format_poly(g, &vars));
            }
            if args.verify {
                // re-evaluate the reduced polynomials from scratch and
                // compare zero sets against the input system
                let verified = verify_polys(&polys, &red.polys, mode, &file.spec);
                match verified {
                    Ok(true) => {
                        let _ = writeln!(out, "verify: zero sets equal");
                    }
                    Ok(false) => {
                        let _ = writeln!(out, "verify: FAILED (zero sets differ)");
                        return (out, EXIT_VERIFY_FAILED);
                    }
                    Err(e) => {
                        let _ = writeln!(out, "verify: FAILED ({e})");
                        return (out, EXIT_VERIFY_FAILED);
                    }
                }
            }
            (out, EXIT_OK)
        }
        FileMode::Table(table) => {
            let Some(target) = args.target else {
                let _ = writeln!(out, "error: table mode requires --target");
                return (out, EXIT_PARSE);
            };
            let _ = writeln!(out, "mode table");
            let _ = writeln!(out, "target {target}");
            if args.strict && !bound_check(table.npoints(), target, &file.spec) {
                let e = Error::BoundExceeded {
                    x_size: table.npoints(),
                    bound: projective_bound(target, file.spec.q()),
                    n: target,
                };
                let _ = writeln!(out, "error: {e}");
                return (out, exit_code_for(&e));
            }
            let red = match reduce_system(&table, target) {
                Ok(r) => r,
                Err(e) => {
                    let _ = writeln!(out, "error: {e}");
                    return (out, exit_code_for(&e));
                }
            };
            render_steps(&mut out, &red);
            for (i, row) in red.reduced.rows().iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "row g{} = [{}]", i + 1, cells.join(", "));
            }
            if args.verify {
                match zero_sets_equal(&table, &red.reduced) {
                    Ok(true) => {
                        let _ = writeln!(out, "verify: zero sets equal");
                    }
                    _ => {
                        let _ = writeln!(out, "verify: FAILED (zero sets differ)");
                        return (out, EXIT_VERIFY_FAILED);
                    }
                }
            }
            (out, EXIT_OK)
        }
    }
}

fn verify_polys(
    original: &[MultiPoly],
    reduced: &[MultiPoly],
    mode: Mode,
    spec: &FieldSpec,
) -> Result<bool, Error> {
    let nvars = original[0].nvars();
    let (points, labels): (Vec<_>, Vec<String>) = match mode {
        Mode::Affine => {
            let pts = enum_affine(nvars, spec)?;
            let labels = pts.iter().map(|p| format_affine(p)).collect();
            (pts, labels)
        }
        Mode::Projective => {
            let pts = enum_projective(nvars - 1, spec)?;
            let labels = pts.iter().map(|p| p.to_string()).collect();
            (pts.iter().map(|p| p.coords().to_vec()).collect(), labels)
        }
    };
    let t1 = value_table(original, &points, labels.clone())?;
    let t2 = value_table(reduced, &points, labels)?;
    zero_sets_equal(&t1, &t2)
}

/// Run `witness`; returns (report document, exit code).
pub fn cmd_witness(args: &WitnessArgs) -> (String, i32) {
    let spec = match FieldSpec::parse(&args.field) {
        Ok(s) => s,
        Err(e) => return (format!("error: {e}\n"), EXIT_PARSE),
    };
    let mode = if args.exhaustive {
        SharpnessMode::Exhaustive
    } else {
        SharpnessMode::KernelCertified
    };
    match check_sharpness(args.n, &spec, mode, args.limit, args.seed) {
        Ok(report) => {
            let ok = report.z_of_f_empty && report.all_have_zero;
            (
                report.to_string(),
                if ok { EXIT_OK } else { EXIT_VERIFY_FAILED },
            )
        }
        Err(e) => (format!("error: {e}\n"), exit_code_for(&e)),
    }
}

/// Run `lemma`; returns (dump document, exit code).
pub fn cmd_lemma(args: &LemmaArgs) -> (String, i32) {
    let spec = match FieldSpec::parse(&args.field) {
        Ok(s) => s,
        Err(e) => return (format!("error: {e}\n"), EXIT_PARSE),
    };
    if args.n < 1 {
        return ("error: n must be at least 1\n".to_string(), EXIT_PARSE);
    }
    let points = match enum_projective(args.n, &spec) {
        Ok(p) => p,
        Err(e) => return (format!("error: {e}\n"), exit_code_for(&e)),
    };
    let mut out = String::new();
    let matrices: Vec<_> = enumerate_rref(args.n, &spec).collect();
    let _ = writeln!(out, "field {}", spec);
    let _ = writeln!(out, "n {}", args.n);
    let _ = writeln!(out, "count {}", matrices.len());
    if matrices.len() <= 10 {
        for m in &matrices {
            let rows: Vec<String> = (0..args.n)
                .map(|r| {
                    let cells: Vec<String> =
                        m.expand().row(r).iter().map(|v| v.to_string()).collect();
                    format!("[{}]", cells.join(", "))
                })
                .collect();
            let _ = writeln!(out, "{}  <->  {}", rows.join(" "), point_for_matrix(m));
        }
    }
    let mut ok = matrices.len() == points.len();
    for x in &points {
        if point_for_matrix(&matrix_for_point(x)) != *x {
            ok = false;
        }
    }
    for m in &matrices {
        if matrix_for_point(&point_for_matrix(m)) != *m {
            ok = false;
        }
    }
    let _ = writeln!(out, "round trips: {}", if ok { "OK" } else { "MISMATCH" });
    (out, if ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

/// Dispatch a parsed command line; returns the process exit code after
/// printing the output document to stdout.
pub fn run(cli: &Cli) -> i32 {
    let (out, code) = match &cli.command {
        Command::Reduce(args) => cmd_reduce(args),
        Command::Witness(args) => cmd_witness(args),
        Command::Lemma(args) => cmd_lemma(args),
    };
    print!("{out}");
    code
}
