//! `boxcount`: enumerate coloured 3D diagrams and pyramid partitions, evaluate
//! product formulas, and check them against each other.

use std::{fs, io::Write, path::PathBuf, process::ExitCode};

use anyhow::{bail, Context};
use boxcount_core::{
    colouring::{GroupAction, GroupSpec},
    dtsign,
    enum3d::{self, Diagram},
    fock::{
        identities::{run_suite, Suite},
        transfer,
    },
    formulas::{self, Formula},
    pyramid,
    series::{Monomial, Series},
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "boxcount", version, about = "Coloured box counting and its product formulas")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "BOXCOUNT_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate coloured 3D diagrams.
    Enum {
        #[arg(long)]
        group: GroupAction,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        shard: ShardArgs,
        /// Print the number of diagrams per size instead of the series.
        #[arg(long)]
        totals: bool,
    },
    /// Enumerate pyramid partitions.
    Pyramid {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        shard: ShardArgs,
        #[arg(long)]
        totals: bool,
    },
    /// Evaluate a product formula: zn:<n>, klein, pyramid, dt-orb:<group>, dt-res:<group>.
    Formula {
        #[arg(long)]
        which: Formula,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Evaluate an operator product: zn:<n>, pyramid, z2z2 or klein.
    Transfer {
        #[arg(long)]
        which: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Compare two exact computations of the same series.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        /// Group for thm-zn, crc and sign-flip.
        #[arg(long)]
        group: Option<GroupAction>,
        #[arg(long)]
        max_degree: u32,
    },
    /// Check vertex-operator identities on small partitions.
    VerifyOps {
        /// heisenberg, commutators, weights, e-ops, checkerboard, a-prime, cyclic or all.
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 6)]
        cutoff: u32,
    },
    /// Fixed-point sign of one diagram, e.g. --diagram '[[0,0,0],[1,0,0]]'.
    Sign {
        #[arg(long)]
        group: GroupAction,
        #[arg(long)]
        diagram: String,
    },
    /// Compare two series previously written with --format json.
    Diff { left: PathBuf, right: PathBuf },
    /// Signed (DT) enumeration of 3D diagrams.
    Dt {
        #[arg(long)]
        group: GroupAction,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    max_degree: u32,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ShardArgs {
    #[arg(long, default_value_t = 1)]
    shards: usize,
    #[arg(long, default_value_t = 0)]
    shard: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Theorem {
    ThmZn,
    ThmKlein,
    ThmPyramid,
    #[value(name = "lemma-7.2")]
    KleinPyramid,
    Crc,
    SignFlip,
    Transfer,
}

/// Failures that are not usage errors.
struct Mismatch(String);

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(Mismatch(report))) => {
            println!("{report}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(series: &Series, run: &RunArgs) -> anyhow::Result<()> {
    let mut text = match run.format {
        Format::Json => series.to_json()?,
        Format::Csv => series.to_csv()?,
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    write_out(&text, run.out.as_ref())
}

fn write_out(text: &str, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn totals_table(series: &Series) -> String {
    let mut out = String::from("degree,count\n");
    for (d, c) in series.degree_totals().iter().enumerate() {
        out.push_str(&format!("{d},{c}\n"));
    }
    out
}

fn check_shard(s: &ShardArgs) -> anyhow::Result<()> {
    if s.shards == 0 || s.shard >= s.shards {
        bail!("shard index {} must be below shard count {}", s.shard, s.shards);
    }
    Ok(())
}

fn run(cmd: Command) -> anyhow::Result<Option<Mismatch>> {
    match cmd {
        Command::Enum { group, run, shard, totals } => {
            check_shard(&shard)?;
            let s = enum3d::coloured_series_shard(&group.colouring(), run.max_degree, shard.shards, shard.shard)?;
            output(&s, &run, totals)?;
        }
        Command::Pyramid { run, shard, totals } => {
            check_shard(&shard)?;
            let s = pyramid::pyramid_series_shard(run.max_degree, shard.shards, shard.shard)?;
            output(&s, &run, totals)?;
        }
        Command::Formula { which, run } => emit(&which.evaluate(run.max_degree)?, &run)?,
        Command::Transfer { which, run } => {
            let n = run.max_degree;
            let s = match which.as_str() {
                "pyramid" => transfer::transfer_pyramid(n)?,
                "z2z2" => transfer::transfer_pyramid_checkerboard(n)?,
                "klein" => transfer::transfer_klein(n)?,
                other => match other.parse::<GroupAction>() {
                    Ok(GroupAction::Cyclic(k)) => transfer::transfer_zn(k, n)?,
                    _ => bail!("unknown transfer {other:?}; expected zn:<n>, pyramid, z2z2 or klein"),
                },
            };
            emit(&s, &run)?;
        }
        Command::Verify { theorem, group, max_degree } => return verify(theorem, group, max_degree),
        Command::VerifyOps { suite, cutoff } => {
            let mut failed = Vec::new();
            for o in run_suite(suite, cutoff)? {
                match &o.failure {
                    None => println!("PASS {}", o.name),
                    Some(f) => {
                        println!("FAIL {}", o.name);
                        failed.push(format!("{}: {f}", o.name));
                    }
                }
            }
            if !failed.is_empty() {
                return Ok(Some(Mismatch(format!("first failure: {}", failed[0]))));
            }
        }
        Command::Sign { group, diagram } => {
            let boxes: Vec<(u32, u32, u32)> =
                serde_json::from_str(&diagram).context("diagram must be a JSON list of [i,j,k] triples")?;
            let d = Diagram::new(boxes)?;
            let parity = dtsign::invariant_parity(&d, group);
            let sign = dtsign::sign_closed_form(&d, group);
            let counts = d.colour_counts(&group.colouring());
            let report = serde_json::json!({
                "group": group.to_string(),
                "boxes": d.size(),
                "colour_counts": counts,
                "parity": parity,
                "sign": if parity == 1 { -1 } else { 1 },
                "closed_form_sign": sign,
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            if (parity == 1) != (sign == -1) {
                return Ok(Some(Mismatch("parity and closed-form sign disagree".into())));
            }
        }
        Command::Diff { left, right } => {
            let read = |p: &PathBuf| -> anyhow::Result<Series> {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                Series::from_json(&text).with_context(|| format!("parsing {}", p.display()))
            };
            let (l, r) = (read(&left)?, read(&right)?);
            if l.vars() != r.vars() {
                return Ok(Some(Mismatch(format!(
                    "MISMATCH: variables {:?} vs {:?}",
                    l.vars().names(),
                    r.vars().names()
                ))));
            }
            return Ok(compare("diff", &left.display().to_string(), &l, &right.display().to_string(), &r));
        }
        Command::Dt { group, run } => emit(&dtsign::dt_signed_series(group, run.max_degree), &run)?,
    }
    Ok(None)
}

fn output(s: &Series, run: &RunArgs, totals: bool) -> anyhow::Result<()> {
    if totals {
        write_out(&totals_table(s), run.out.as_ref())
    } else {
        emit(s, run)
    }
}

fn need_group(group: Option<GroupAction>, default: GroupAction) -> GroupAction {
    group.unwrap_or(default)
}

fn formula_group(group: GroupAction) -> anyhow::Result<GroupSpec> {
    Ok(formulas::group_spec(group)?)
}

/// Compares two series; a mismatch names the first differing monomial.
fn compare(label: &str, left_name: &str, left: &Series, right_name: &str, right: &Series) -> Option<Mismatch> {
    match left.first_difference(right) {
        None => {
            println!("OK {label}: {left_name} = {right_name} through degree {}", left.trunc().min(right.trunc()));
            None
        }
        Some((exp, l, r)) => {
            let m = Monomial::from_exponents(false, &exp);
            Some(Mismatch(format!(
                "MISMATCH {label}: first difference at {}: {left_name} has {l}, {right_name} has {r}",
                m.display(left.vars())
            )))
        }
    }
}

fn verify(theorem: Theorem, group: Option<GroupAction>, n: u32) -> anyhow::Result<Option<Mismatch>> {
    let mut checks: Vec<(String, &str, Series, &str, Series)> = Vec::new();
    match theorem {
        Theorem::ThmZn => {
            let g = need_group(group, GroupAction::Cyclic(2));
            let GroupAction::Cyclic(k) = g else {
                bail!("thm-zn needs --group zn:<n>");
            };
            checks.push((g.to_string(), "enumeration", enum3d::coloured_series(&g.colouring(), n), "product", formulas::closed_zn(k, n)?));
        }
        Theorem::ThmKlein => {
            let c = GroupAction::Klein.colouring();
            checks.push(("klein".into(), "enumeration", enum3d::coloured_series(&c, n), "product", formulas::closed_klein(n)?));
        }
        Theorem::ThmPyramid => {
            checks.push(("pyramid".into(), "enumeration", pyramid::pyramid_series(n), "product", formulas::closed_pyramid(n)?));
        }
        Theorem::KleinPyramid => {
            checks.push(("klein".into(), "product", formulas::closed_klein(n)?, "pyramid product", formulas::klein_from_pyramid(n)?));
        }
        Theorem::Crc => {
            let g = need_group(group, GroupAction::Cyclic(2));
            let (l, r) = formulas::crc_sides(&formula_group(g)?, n)?;
            checks.push((g.to_string(), "orbifold", l, "resolution", r));
        }
        Theorem::SignFlip => {
            let g = need_group(group, GroupAction::Cyclic(2));
            let s = formula_group(g)?;
            let flipped = enum3d::coloured_series(&g.colouring(), n).substitute_signs(&formulas::dt_sign_flips(&s));
            checks.push((g.to_string(), "signed enumeration", dtsign::dt_signed_series(g, n), "flipped enumeration", flipped.clone()));
            checks.push((g.to_string(), "flipped enumeration", flipped, "orbifold product", formulas::dt_orbifold(&s, n)?));
        }
        Theorem::Transfer => match group {
            Some(GroupAction::Cyclic(k)) => {
                let g = GroupAction::Cyclic(k);
                checks.push((g.to_string(), "transfer", transfer::transfer_zn(k, n)?, "enumeration", enum3d::coloured_series(&g.colouring(), n)));
            }
            Some(GroupAction::Klein) => {
                checks.push(("klein".into(), "transfer", transfer::transfer_klein(n)?, "enumeration", enum3d::coloured_series(&GroupAction::Klein.colouring(), n)));
            }
            Some(g) => bail!("no operator product for {g}"),
            None => {
                let brute = pyramid::pyramid_series(n);
                checks.push(("pyramid".into(), "transfer", transfer::transfer_pyramid(n)?, "enumeration", brute.clone()));
                checks.push(("pyramid".into(), "checkerboard transfer", transfer::transfer_pyramid_checkerboard(n)?, "enumeration", brute));
            }
        },
    }
    for (label, ln, l, rn, r) in &checks {
        if let Some(m) = compare(label, ln, l, rn, r) {
            return Ok(Some(m));
        }
    }
    Ok(None)
}
