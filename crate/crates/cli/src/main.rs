//! `wreathkit` command-line front end.
//!
//! `--ranks` lists ranks outermost base first: `--ranks n,m` is
//! `Z^n wr Z^m`, and `--ranks m3,m2,m1` is `Z^m3 wr (Z^m2 wr Z^m1)`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wreathkit::equations::{
    check_system, parse_assignment, parse_system, serialize_assignment, serialize_system, Assignment,
};
use wreathkit::interp::{compile_iterated, IteratedReduction};
use wreathkit::reduction::{compile, oracle_ef, ReductionOutput};
use wreathkit::selftest::all_suites;
use wreathkit::wreath::lcs_rank;
use wreathkit::{parse_int_list, Error, GroupElement, GroupSpec, IntPolynomial, IteratedSpec, NestedElement, WreathElement};

#[derive(Parser)]
#[command(name = "wreathkit", version, about = "Equations over wreath products of free abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile an integer polynomial into a system of group equations.
    Compile {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        output: Output,
    },
    /// Build a satisfying assignment from an integer root.
    Witness {
        #[command(flatten)]
        target: Target,
        /// Comma-separated root, e.g. `2,3`.
        #[arg(long, allow_hyphen_values = true)]
        solution: String,
        #[command(flatten)]
        output: Output,
    },
    /// Check an assignment against a system; exit status 1 if unsatisfied.
    Verify {
        #[arg(long, default_value = "1,1")]
        ranks: String,
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
    },
    /// Compute e_f directly in the group ring and test its membership.
    Oracle {
        #[command(flatten)]
        target: Target,
        #[arg(long, allow_hyphen_values = true)]
        solution: String,
    },
    /// Read the integer root back from a satisfying assignment.
    Extract {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        assignment: PathBuf,
    },
    /// Rank of the i-th lower central series quotient of Z^n wr Z^m.
    LcsRank {
        #[arg(long, default_value = "1,1")]
        ranks: String,
        #[arg(long)]
        i: usize,
    },
    /// Run the randomized property suites.
    Selftest {
        /// Samples per suite; each suite's default when omitted.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct Target {
    /// Polynomial in z1, z2, ..., e.g. `z1^2*z2 - 3*z1 + 7`.
    #[arg(long)]
    poly: String,
    /// Ranks, outermost base first.
    #[arg(long, default_value = "1,1")]
    ranks: String,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

enum Failure {
    Error(Error),
    Io(String, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Error(Error::Parse { .. } | Error::Usage(_) | Error::RankMismatch { .. }) => 2,
            Failure::Error(_) => 3,
            Failure::Io(..) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Error(e) => write!(f, "{e}"),
            Failure::Io(path, e) => write!(f, "{path}: {e}"),
        }
    }
}

type Run<T> = Result<T, Failure>;

fn read(path: &Path) -> Run<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.display().to_string(), e))
}

fn emit(output: &Output, text: &str) -> Run<()> {
    match &output.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(path.display().to_string(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn ranks(text: &str) -> Run<IteratedSpec> {
    let values = parse_int_list(text)?;
    let ranks = values
        .iter()
        .map(|&r| usize::try_from(r).map_err(|_| Error::Usage(format!("ranks must be positive, got {r}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IteratedSpec::from_outermost_first(&ranks)?)
}

/// Either the flat two-level pipeline or its lift through further levels.
enum Pipeline {
    Flat(ReductionOutput),
    Iterated(IteratedReduction),
}

fn pipeline(target: &Target) -> Run<Pipeline> {
    let f = IntPolynomial::parse(&target.poly, 0)?;
    let spec = ranks(&target.ranks)?;
    Ok(match spec.as_flat() {
        Some(flat) => Pipeline::Flat(compile(&f, flat)),
        None => Pipeline::Iterated(compile_iterated(&f, &spec)?),
    })
}

fn solution(text: &str, f: &IntPolynomial) -> Run<Vec<i64>> {
    let z = parse_int_list(text)?;
    if z.len() != f.vars() {
        return Err(Error::Usage(format!("polynomial has {} variables, got a tuple of length {}", f.vars(), z.len())).into());
    }
    Ok(z)
}

fn verify<E: GroupElement>(spec: &E::Spec, system: &str, assignment: &str) -> Run<bool> {
    let sys = parse_system::<E>(system, spec)?;
    let asg: Assignment<E> = parse_assignment(assignment, spec)?;
    let report = check_system(&sys, &asg, spec)?;
    println!("{report}");
    Ok(report.is_satisfied())
}

fn run(cli: Cli) -> Run<ExitCode> {
    match cli.command {
        Command::Compile { target, output } => {
            let text = match pipeline(&target)? {
                Pipeline::Flat(out) => serialize_system(&out.system),
                Pipeline::Iterated(out) => serialize_system(&out.system),
            };
            emit(&output, &text)?;
        }
        Command::Witness { target, solution: z, output } => {
            let text = match pipeline(&target)? {
                Pipeline::Flat(out) => serialize_assignment(&out.witness(&solution(&z, &out.polynomial)?)?),
                Pipeline::Iterated(out) => serialize_assignment(&out.witness(&solution(&z, &out.inner.polynomial)?)?),
            };
            emit(&output, &text)?;
        }
        Command::Verify { ranks: r, system, assignment } => {
            let spec = ranks(&r)?;
            let (system, assignment) = (read(&system)?, read(&assignment)?);
            let satisfied = match spec.as_flat() {
                Some(flat) => verify::<WreathElement>(&flat, &system, &assignment)?,
                None => verify::<NestedElement>(&spec, &system, &assignment)?,
            };
            if !satisfied {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Oracle { target, solution: z } => {
            let f = IntPolynomial::parse(&target.poly, 0)?;
            let spec = ranks(&target.ranks)?;
            let z = solution(&z, &f)?;
            let result = oracle_ef(&f, &z, spec.ranks()[0])?;
            println!("e_f = {}", result.e_f);
            println!("{result}");
        }
        Command::Extract { target, assignment } => {
            let text = read(&assignment)?;
            let z = match pipeline(&target)? {
                Pipeline::Flat(out) => out.extract_solution(&parse_assignment(&text, &out.spec)?)?,
                Pipeline::Iterated(out) => out.extract_solution(&parse_assignment(&text, &out.spec)?)?,
            };
            println!("{}", z.iter().map(i64::to_string).collect::<Vec<_>>().join(","));
        }
        Command::LcsRank { ranks: r, i } => {
            let spec = ranks(&r)?;
            let flat: GroupSpec = spec
                .as_flat()
                .ok_or_else(|| Error::Usage(format!("lcs-rank needs exactly two ranks, got {spec}")))?;
            println!("{}", lcs_rank(i, flat)?);
        }
        Command::Selftest { samples, seed } => {
            let reports = all_suites(samples, seed);
            for r in &reports {
                println!("{r}");
            }
            if reports.iter().any(|r| !r.passed()) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => {
            let _ = std::io::stdout().flush();
            code
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
