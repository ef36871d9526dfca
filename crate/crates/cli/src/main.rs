use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use kleinian::linalg::rational::{self, frac};
use kleinian::verify::{self, VerificationReport};
use kleinian::{
    build_framed_quiver, corner_from_staircase, enumerate_monoid_staircases, enumerate_regular_fixed_points,
    enumerate_staircases, euler_characteristic_series, face_poset, intersect_with_invariants, j_star_corner,
    rep_from_ideal, weight_profile, CornerJson, CornerModule, DynkinType, Face, QuiverRepresentation, RMatrix, RepJson,
    Staircase, Vertex,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const DEFAULT_SEED: u64 = 20240229;

#[derive(Parser)]
#[command(
    name = "kleinian",
    version,
    about = "Quivers, fixed points and stability bounds for Kleinian singularities"
)]
struct Cli {
    /// Worker threads for enumeration and verification (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect framed McKay quivers.
    #[command(subcommand)]
    Quiver(QuiverCmd),
    /// Face poset of the closed chamber.
    Poset {
        #[arg(long = "type")]
        kind: DynkinType,
        #[arg(long, value_enum, default_value = "text")]
        format: PosetFormat,
    },
    /// Staircases, fixed points and Euler counts in type A.
    #[command(subcommand)]
    Hilb(HilbCmd),
    /// Corner modules over the cornered algebra for J={0}.
    #[command(subcommand)]
    Corner(CornerCmd),
    /// Representations of the framed quiver.
    #[command(subcommand)]
    Rep(RepCmd),
    /// Check the dimension-vector bound for one J.
    Verify {
        #[arg(long = "type")]
        kind: DynkinType,
        #[arg(long)]
        n: usize,
        /// Comma-separated vertices, e.g. 0,2.
        #[arg(long = "J")]
        face: String,
    },
    /// Check the bound for every nonempty J.
    VerifyAll {
        #[arg(long = "type")]
        kind: DynkinType,
        #[arg(long)]
        n: usize,
        /// Write the JSON reports here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum QuiverCmd {
    Show {
        #[arg(long = "type")]
        kind: DynkinType,
        /// Dimension vector (1; n delta) to print alongside.
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PosetFormat {
    Text,
    Dot,
    Json,
}

#[derive(Args)]
struct InputArg {
    /// JSON payload path; `-` or absent reads stdin.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum HilbCmd {
    /// All staircases with N cells, one JSON object per line.
    Staircases {
        #[arg(long)]
        n: usize,
        /// Print the weight profile for this r as well.
        #[arg(long)]
        r: Option<usize>,
    },
    /// Regular-type staircases with n(r+1) cells.
    FixedPoints {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
    },
    /// Order ideals of the invariant monoid with n cells.
    MonoidStaircases {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
    },
    /// Euler characteristics chi_0..chi_nmax as CSV.
    Chi {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        nmax: usize,
    },
    /// Invariant part of a staircase.
    Intersect {
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        input: InputArg,
    },
}

#[derive(Subcommand)]
enum CornerCmd {
    /// Residuals of the commutators and of f.
    Check {
        #[arg(long = "type")]
        kind: DynkinType,
        #[command(flatten)]
        input: InputArg,
    },
    /// Cyclicity of w and vanishing of w*.
    Stable {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        conj: Conjugations,
    },
    /// Joint spectrum of (A1, A2, A3).
    Chow {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        conj: Conjugations,
    },
    /// Restrict a type-A representation to the corner.
    FromRep {
        #[command(flatten)]
        input: InputArg,
    },
    /// Corner module of C[x,y]^Gamma / I for the invariant part of a staircase.
    FromStaircase {
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        input: InputArg,
    },
}

#[derive(Args)]
struct Conjugations {
    /// Also recompute after this many random changes of basis.
    #[arg(long, default_value_t = 0)]
    conjugations: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum RepCmd {
    /// Moment residual at every vertex.
    Residual {
        #[command(flatten)]
        input: InputArg,
    },
    /// Is the representation generated by the framing vector?
    Cyclic {
        #[command(flatten)]
        input: InputArg,
    },
    /// The representation C[x,y]/I of a regular-type staircase.
    FromStaircase {
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        input: InputArg,
    },
}

/// Result of a command that ran to completion.
enum Outcome {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let mut out = io::stdout().lock();
    match run(cli.command, &mut out) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(2),
        Err(e)
            if e.downcast_ref::<io::Error>()
                .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read_input(arg: &InputArg) -> anyhow::Result<String> {
    match arg.input.as_deref() {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s)
        }
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(arg: &InputArg) -> anyhow::Result<T> {
    serde_json::from_str(&read_input(arg)?).context("malformed JSON payload")
}

fn read_corner(arg: &InputArg) -> anyhow::Result<CornerModule> {
    Ok(CornerModule::from_json(&parse_json::<CornerJson>(arg)?)?)
}

fn read_rep(arg: &InputArg) -> anyhow::Result<QuiverRepresentation> {
    Ok(QuiverRepresentation::from_json(&parse_json::<RepJson>(arg)?)?)
}

fn print_json(out: &mut impl Write, value: &impl serde::Serialize) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> RMatrix {
    loop {
        let rows = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| frac(rng.random_range(-4..=4), rng.random_range(1..=3)))
                    .collect()
            })
            .collect();
        let m = RMatrix::from_rows(rows).expect("square");
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// Runs `f` on `m` and on `conj.conjugations` random conjugates; fails if
/// any answer differs.
fn invariant_under_conjugation<T: PartialEq>(
    m: &CornerModule,
    conj: &Conjugations,
    f: impl Fn(&CornerModule) -> anyhow::Result<T>,
) -> anyhow::Result<(T, bool)> {
    let base = f(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(conj.seed);
    for _ in 0..conj.conjugations {
        let p = random_invertible(&mut rng, m.n());
        if f(&m.conjugate(&p)?)? != base {
            return Ok((base, false));
        }
    }
    Ok((base, true))
}

fn run(cmd: Command, out: &mut impl Write) -> anyhow::Result<Outcome> {
    match cmd {
        Command::Quiver(QuiverCmd::Show { kind, n }) => {
            let q = build_framed_quiver(kind);
            match n {
                None => print_json(out, &q.to_json())?,
                Some(n) => {
                    let mut value = serde_json::to_value(q.to_json())?;
                    value["v"] = serde_json::Value::Object(q.dimension_vector(n).to_json());
                    print_json(out, &value)?;
                }
            }
        }
        Command::Poset { kind, format } => {
            let p = face_poset(kind)?;
            match format {
                PosetFormat::Dot => write!(out, "{}", p.to_dot())?,
                PosetFormat::Json => print_json(out, &p)?,
                PosetFormat::Text => {
                    for line in p.hasse_lines() {
                        writeln!(out, "{line}")?;
                    }
                }
            }
        }
        Command::Hilb(cmd) => hilb(cmd, out)?,
        Command::Corner(cmd) => return corner(cmd, out),
        Command::Rep(cmd) => return rep(cmd, out),
        Command::Verify { kind, n, face } => {
            let face = Face::parse(&face)?;
            let report = verify::verify_bound(kind, n, &face)?;
            print_json(out, &report)?;
            if !report.is_verified() {
                return Ok(Outcome::Failed);
            }
        }
        Command::VerifyAll { kind, n, out: path } => {
            if n == 0 {
                bail!("n must be positive");
            }
            let reports = verify::verify_all(kind, n)?;
            for r in &reports {
                writeln!(out, "{}", r.summary_line())?;
            }
            writeln!(out, "{} {}", kind, verify::summarize(&reports))?;
            if let Some(path) = path {
                let text = serde_json::to_string_pretty(&reports)? + "\n";
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            }
            if !reports.iter().all(VerificationReport::is_verified) {
                return Ok(Outcome::Failed);
            }
        }
    }
    Ok(Outcome::Ok)
}

fn hilb(cmd: HilbCmd, out: &mut impl Write) -> anyhow::Result<()> {
    match cmd {
        HilbCmd::Staircases { n, r } => {
            for s in enumerate_staircases(n) {
                match r {
                    Some(r) => {
                        let profile = weight_profile(&s, r);
                        writeln!(out, "{}", json!({ "cells": s.cells(), "weights": profile.counts() }))?
                    }
                    None => writeln!(out, "{s}")?,
                }
            }
        }
        HilbCmd::FixedPoints { r, n } => {
            for s in enumerate_regular_fixed_points(r, n) {
                writeln!(out, "{s}")?;
            }
        }
        HilbCmd::MonoidStaircases { r, n } => {
            for m in enumerate_monoid_staircases(r, n) {
                writeln!(out, "{m}")?;
            }
        }
        HilbCmd::Chi { r, nmax } => {
            write!(
                out,
                "{}",
                kleinian::hilb::euler_csv(&euler_characteristic_series(r, nmax))
            )?;
        }
        HilbCmd::Intersect { r, input } => {
            let s: Staircase = parse_json(&input)?;
            writeln!(out, "{}", intersect_with_invariants(&s, r))?;
        }
    }
    Ok(())
}

fn corner(cmd: CornerCmd, out: &mut impl Write) -> anyhow::Result<Outcome> {
    match cmd {
        CornerCmd::Check { kind, input } => {
            let m = read_corner(&input)?;
            let report = m.check_relations(kind)?;
            let valid = report.is_valid();
            print_json(
                out,
                &json!({
                    "valid": valid,
                    "commutators": {
                        "A1A2": report.commutators[0].to_wire(),
                        "A1A3": report.commutators[1].to_wire(),
                        "A2A3": report.commutators[2].to_wire(),
                    },
                    "f": report.f_residual.to_wire(),
                }),
            )?;
            if !valid {
                return Ok(Outcome::Failed);
            }
        }
        CornerCmd::Stable { input, conj } => {
            let m = read_corner(&input)?;
            let (stable, invariant) = invariant_under_conjugation(&m, &conj, |m| Ok(m.is_eta_stable()?))?;
            let wstar = m.wstar_vanishes();
            print_json(
                out,
                &json!({
                    "eta_stable": stable,
                    "wstar_vanishes": wstar.vanishes,
                    "wstar_nonzero": wstar.nonzero,
                    "conjugations": conj.conjugations,
                    "basis_invariant": invariant,
                }),
            )?;
            if !invariant {
                return Ok(Outcome::Failed);
            }
        }
        CornerCmd::Chow { input, conj } => {
            let m = read_corner(&input)?;
            let (points, invariant) = invariant_under_conjugation(&m, &conj, |m| Ok(m.hilbert_chow()?))?;
            let points: Vec<Vec<String>> = points
                .iter()
                .map(|p| p.iter().map(rational::to_wire).collect())
                .collect();
            print_json(out, &json!({ "points": points, "basis_invariant": invariant }))?;
            if !invariant {
                return Ok(Outcome::Failed);
            }
        }
        CornerCmd::FromRep { input } => {
            let rep = read_rep(&input)?;
            print_json(out, &j_star_corner(&rep)?.to_json())?;
        }
        CornerCmd::FromStaircase { r, input } => {
            let s: Staircase = parse_json(&input)?;
            print_json(out, &corner_from_staircase(&intersect_with_invariants(&s, r)).to_json())?;
        }
    }
    Ok(Outcome::Ok)
}

fn rep(cmd: RepCmd, out: &mut impl Write) -> anyhow::Result<Outcome> {
    match cmd {
        RepCmd::Residual { input } => {
            let rep = read_rep(&input)?;
            let residuals = rep.moment_residual();
            let mut map = serde_json::Map::new();
            for (i, m) in residuals.iter().enumerate() {
                map.insert(Vertex::from_index(i).to_string(), json!(m.to_wire()));
            }
            let zero = residuals.iter().all(RMatrix::is_zero);
            print_json(out, &json!({ "preprojective": zero, "residuals": map }))?;
        }
        RepCmd::Cyclic { input } => {
            let rep = read_rep(&input)?;
            print_json(out, &json!({ "cyclic": rep.is_cyclic_at_infinity()? }))?;
        }
        RepCmd::FromStaircase { r, input } => {
            let s: Staircase = parse_json(&input)?;
            let Some(n) = weight_profile(&s, r).regular_n() else {
                bail!(
                    "staircase is not of regular type for r={r}: weights {:?}",
                    weight_profile(&s, r).counts()
                );
            };
            print_json(out, &rep_from_ideal(&s, r, n)?.to_json())?;
        }
    }
    Ok(Outcome::Ok)
}
