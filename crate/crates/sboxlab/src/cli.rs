//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage,
//! input-format or precondition errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use sboxlab_core::quadratic::{
    check_qform_theorem, construct_abc, construct_btt, construct_gold, construct_li, QForm,
};
use sboxlab_core::search::SearchConfig;
use sboxlab_core::tables::SumIdentities;
use sboxlab_core::{
    bct_boura_canteaut, bct_definition, bct_paircount, boomerang_uniformity, ddt,
    default_reduction_poly, differential_uniformity, Field, SBox, Subfield,
};
use thiserror::Error;

use crate::csv::table_csv;
use crate::format::{parse_hex, parse_sbox, write_sbox, write_sbox_with_comment, FormatError};
use crate::parallel;
use crate::report::{write_report, DEFAULT_SHOWN};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sboxlab", version, about = "DDT/BCT analysis of Sboxes over GF(2^n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print degree, permutation status, delta and (for permutations) beta.
    Analyze { file: PathBuf },
    /// Difference distribution table as CSV.
    Ddt {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Boomerang connectivity table as CSV.
    Bct {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Pairs)]
        method: Method,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print `delta=<int> beta=<int>`.
    Uniformity { file: PathBuf },
    /// Build one of the known differentially 4-uniform constructions.
    Construct {
        #[command(subcommand)]
        which: Construction,
    },
    /// Check the quadratic-form boomerang statements over F_q.
    VerifyQform {
        file: PathBuf,
        #[arg(long)]
        q: u64,
    },
    /// Check the BCT row and column sum identities for every nonzero index.
    VerifySums { file: PathBuf },
    /// Exhaustive searches.
    Search {
        #[command(subcommand)]
        which: SearchKind,
    },
    /// Write the compositional inverse.
    Invert {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// From the definition, via the inverse table.
    Def,
    /// Pair counting inside derivative preimage sets.
    Pairs,
    /// DDT plus preimage pairs of the inverse.
    Bc,
}

#[derive(Debug, clap::Args)]
struct FieldArgs {
    /// Reduction polynomial in hex; defaults to the least irreducible one.
    #[arg(long, value_parser = hex_arg)]
    poly: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Construction {
    /// x^(2^t+1)
    Gold {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u32,
        #[command(flatten)]
        common: FieldArgs,
    },
    /// x^(2^m+2) + lambda x, n = 2m
    Li {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = hex_arg)]
        lambda: u32,
        #[command(flatten)]
        common: FieldArgs,
    },
    /// beta x^(2^s+1) + beta^(2^k) x^(2^-k + 2^(k+s)), n = 3k
    Btt {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        s: u32,
        /// Primitive element; defaults to the least one.
        #[arg(long, value_parser = hex_arg)]
        beta: Option<u32>,
        #[command(flatten)]
        common: FieldArgs,
    },
    /// x^(2^(s+1)+2) + A x + B x^4 + C x^16
    Abc {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, value_parser = hex_arg)]
        a: u32,
        #[arg(long, value_parser = hex_arg)]
        b: u32,
        #[arg(long, value_parser = hex_arg)]
        c: u32,
        #[command(flatten)]
        common: FieldArgs,
    },
}

#[derive(Debug, Subcommand)]
enum SearchKind {
    /// Count (A, B, C) making x^(2^(s+1)+2) + A x + B x^4 + C x^16 a permutation.
    Abc {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, env = "SBOXLAB_JOBS", default_value_t = 1)]
        jobs: usize,
        /// Skip the delta/beta check of every permutation found.
        #[arg(long)]
        no_verify_bct: bool,
        #[arg(long, value_parser = hex_arg)]
        poly: Option<u32>,
        /// Write a text report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Put every retained witness in the report instead of the first 32.
        #[arg(long)]
        all_witnesses: bool,
    },
}

fn hex_arg(s: &str) -> Result<u32, String> {
    parse_hex(s).ok_or_else(|| format!("`{s}` is not a hex number"))
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error(transparent)]
    Core(#[from] sboxlab_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => EXIT_FAILED,
            _ => EXIT_USAGE,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load(path: &Path) -> CliResult<SBox> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_sbox(&text).map_err(|source| CliError::Format {
        path: path.display().to_string(),
        source,
    })
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn field_for(n: u32, poly: Option<u32>) -> CliResult<Field> {
    let poly = match poly {
        Some(p) => p,
        None => default_reduction_poly(n)?,
    };
    Ok(Field::new(n, poly)?)
}

fn say(out: &mut dyn Write, line: &str) -> CliResult<()> {
    writeln!(out, "{line}").map_err(|source| CliError::Io {
        path: "<stdout>".into(),
        source,
    })
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Analyze { file } => {
            let f = load(&file)?;
            let field = f.field();
            say(out, &format!("n={} poly={:#x}", field.degree(), field.reduction_poly()))?;
            say(out, &format!("permutation={}", f.is_permutation()))?;
            say(out, &format!("degree={}", f.algebraic_degree()))?;
            say(out, &uniformity_line(&f)?)
        }
        Command::Uniformity { file } => {
            let f = load(&file)?;
            say(out, &uniformity_line(&f)?)
        }
        Command::Ddt { file, out: path } => {
            let f = load(&file)?;
            emit(path.as_deref(), &table_csv(&ddt(&f)), out)
        }
        Command::Bct {
            file,
            method,
            out: path,
        } => {
            let f = load(&file)?;
            if !f.is_permutation() {
                return Err(sboxlab_core::Error::NotAPermutation.into());
            }
            let t = match method {
                Method::Def => bct_definition(&f)?,
                Method::Pairs => bct_paircount(&f),
                Method::Bc => bct_boura_canteaut(&f)?,
            };
            emit(path.as_deref(), &table_csv(&t), out)
        }
        Command::Construct { which } => construct(which, out),
        Command::VerifyQform { file, q } => {
            let f = load(&file)?;
            let sub = Subfield::with_size(q, f.field().degree())?;
            QForm::from_sbox(&f, sub).map_err(|e| {
                CliError::Failed(format!("not a quadratic form over F_{q}: {e}"))
            })?;
            let report = check_qform_theorem(&f, sub);
            write!(out, "{report}").map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Failed("quadratic-form check failed".into()))
            }
        }
        Command::VerifySums { file } => {
            let f = load(&file)?;
            let sums = SumIdentities::new(&f)?;
            let mut bad = 0;
            let last = f.field().mask();
            for i in 1..=last {
                for (kind, triple) in [("row", sums.row(i)?), ("column", sums.column(i)?)] {
                    if !triple.agrees() {
                        bad += 1;
                        say(
                            out,
                            &format!(
                                "{kind} {i:#x}: bct={} zeros={} ddt2={}",
                                triple.bct, triple.second_derivative_zeros, triple.squared_ddt
                            ),
                        )?;
                    }
                }
            }
            say(
                out,
                &format!("checked {} rows and {} columns, {bad} mismatches", last, last),
            )?;
            if bad == 0 {
                Ok(())
            } else {
                Err(CliError::Failed("sum identities do not hold".into()))
            }
        }
        Command::Search { which } => match which {
            SearchKind::Abc {
                n,
                s,
                jobs,
                no_verify_bct,
                poly,
                out: path,
                all_witnesses,
            } => {
                let field = field_for(n, poly)?;
                let cfg = SearchConfig {
                    n,
                    s,
                    verify_bct: !no_verify_bct,
                    jobs,
                };
                let result = parallel::search_abc(field, &cfg)?;
                say(out, &format!("n={n} s={s} poly={:#x}", field.reduction_poly()))?;
                say(out, &format!("total_candidates={}", result.total_candidates))?;
                say(out, &format!("permutation_count={}", result.permutation_count))?;
                let show = |v: Option<bool>| v.map_or("unverified".to_string(), |b| b.to_string());
                say(
                    out,
                    &format!(
                        "all_delta_4={} all_beta_4={}",
                        show(result.all_delta_4),
                        show(result.all_beta_4)
                    ),
                )?;
                if !result.classified_counts.is_empty() {
                    let classes: Vec<String> = result
                        .classified_counts
                        .iter()
                        .map(|(k, v)| format!("{k}={v}"))
                        .collect();
                    say(out, &classes.join(" "))?;
                }
                if let Some(p) = path {
                    let shown = if all_witnesses {
                        result.witnesses.len()
                    } else {
                        DEFAULT_SHOWN
                    };
                    emit(Some(&p), &write_report(&result, shown), out)?;
                }
                if result.verified() {
                    Ok(())
                } else {
                    Err(CliError::Failed("some permutation is not delta=4 beta=4".into()))
                }
            }
        },
        Command::Invert { file, out: path } => {
            let f = load(&file)?;
            emit(path.as_deref(), &write_sbox(&f.inverse()?), out)
        }
    }
}

fn uniformity_line(f: &SBox) -> CliResult<String> {
    let delta = differential_uniformity(f);
    Ok(if f.is_permutation() {
        format!("delta={delta} beta={}", boomerang_uniformity(f)?)
    } else {
        format!("delta={delta}")
    })
}

fn construct(which: Construction, out: &mut dyn Write) -> CliResult<()> {
    let (f, comment, path) = match which {
        Construction::Gold { n, t, common } => {
            let field = field_for(n, common.poly)?;
            (construct_gold(field, t)?, format!("gold n={n} t={t}"), common.out)
        }
        Construction::Li { n, lambda, common } => {
            let field = field_for(n, common.poly)?;
            (
                construct_li(field, lambda)?,
                format!("li n={n} lambda={lambda:#x}"),
                common.out,
            )
        }
        Construction::Btt { k, s, beta, common } => {
            let field = field_for(3 * k, common.poly)?;
            let beta = beta.unwrap_or_else(|| field.find_primitive());
            (
                construct_btt(field, k, s, Some(beta))?,
                format!("btt k={k} s={s} beta={beta:#x}"),
                common.out,
            )
        }
        Construction::Abc {
            n,
            s,
            a,
            b,
            c,
            common,
        } => {
            let field = field_for(n, common.poly)?;
            (
                construct_abc(field, s, a, b, c)?,
                format!("abc n={n} s={s} a={a:#x} b={b:#x} c={c:#x}"),
                common.out,
            )
        }
    };
    emit(path.as_deref(), &write_sbox_with_comment(&f, Some(&comment)), out)
}
