//! `profinite`: approximation spaces, equations and lattice checks from the command line.

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use profinite::equations::{self, LanguageFamily, VerdictKind};
use profinite::fo::FoFramework;
use profinite::framework::random_language;
use profinite::lattice::{self, TrialSummary};
use profinite::space::{self, approximation_space, ApproximationSpace};
use profinite::word::WordFramework;
use profinite::{Error, Framework, Language, TruncatedPoint};

#[derive(Parser, Debug)]
#[command(
    name = "profinite",
    version,
    about = "Truncated profinite spaces and lattices of recognisable languages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Kind of framework described by --file.
    #[arg(long, value_enum, global = true, default_value = "word")]
    framework: Kind,

    /// Framework definition (JSON).
    #[arg(long, global = true)]
    file: Option<PathBuf>,

    /// Enumeration budget: structure size for `fo`, ignored by exact `word` spaces.
    #[arg(long, global = true, default_value_t = 3)]
    budget: usize,

    /// Comma-separated recogniser indices; defaults to every recogniser in the file.
    #[arg(long, global = true, value_delimiter = ',')]
    indices: Option<Vec<usize>>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,

    #[arg(long, value_enum, global = true, default_value = "json")]
    output: Output,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the approximation space for the selected recognisers.
    Approx,
    /// Print every equation satisfied by the lattice generated by a family of languages.
    Equations {
        /// JSON array of languages.
        #[arg(long)]
        generators: PathBuf,
    },
    /// Decide whether a language lies in the lattice generated by a family.
    Check {
        #[arg(long)]
        generators: PathBuf,
        #[arg(long)]
        candidate: PathBuf,
    },
    /// Run randomized checks of the lattice/equation correspondence.
    Verify,
    /// Print the first object realizing a point, given as a JSON array of values.
    Realize {
        #[arg(long)]
        point: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Word,
    Fo,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Output {
    Json,
    Text,
}

/// Exit status with its message.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(what: impl Display) -> Self {
        Failure {
            code: 2,
            message: what.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnknownRecogniser { .. } | Error::CoordinateMissing(_) => 3,
            Error::Parse { .. } | Error::InvalidLanguage { .. } | Error::PointNotInSpace(_) => 2,
            _ => 4,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(cli: &Cli, value: &T, text: impl FnOnce() -> String) {
    let body = match cli.output {
        Output::Json => serde_json::to_string_pretty(value).expect("serializable report"),
        Output::Text => text(),
    };
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{body}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CliResult<u8> {
    let Some(path) = &cli.file else {
        return match cli.command {
            Command::Verify => verify_abstract(cli).map(|(code, _)| code),
            _ => Err(Failure::parse("--file is required")),
        };
    };
    let text = read(path)?;
    match cli.framework {
        Kind::Word => {
            let mut fw = WordFramework::from_json(&text)
                .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
            dispatch(cli, &mut fw)
        }
        Kind::Fo => {
            let mut fw = FoFramework::from_json(&text)
                .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
            dispatch(cli, &mut fw)
        }
    }
}

fn indices<F: Framework>(cli: &Cli, fw: &F) -> CliResult<Vec<usize>> {
    let indices = cli
        .indices
        .clone()
        .unwrap_or_else(|| (0..fw.recogniser_count()).collect());
    indices.iter().try_for_each(|&i| fw.check_index(i))?;
    Ok(indices)
}

fn load_family<F: Framework>(fw: &F, path: &Path) -> CliResult<LanguageFamily> {
    let fam: LanguageFamily = read_json(path)?;
    for l in &fam.members {
        l.validate(fw)?;
    }
    Ok(fam)
}

fn dispatch<F: Framework>(cli: &Cli, fw: &mut F) -> CliResult<u8> {
    let indices = indices(cli, fw)?;
    let space = approximation_space(fw, &indices, cli.budget)?;
    match &cli.command {
        Command::Approx => {
            emit(cli, &space, || space_text(&space));
            Ok(0)
        }
        Command::Equations { generators } => {
            let fam = load_family(fw, generators)?;
            let closure = equations::lattice_closure(&space, &fam)?;
            let es = equations::derive_equations(&space, &closure)?;
            emit(cli, &es, || {
                let mut out = format!("{} equations (exact: {})", es.equations.len(), es.exact);
                for e in &es.equations {
                    out.push_str(&format!("\n{} -> {}", e.u, e.v));
                }
                out
            });
            Ok(0)
        }
        Command::Check {
            generators,
            candidate,
        } => {
            let fam = load_family(fw, generators)?;
            let candidate: Language = read_json(candidate)?;
            candidate.validate(fw)?;
            let verdict = equations::check_definable(&space, &fam, &candidate)?;
            emit(cli, &verdict, || match &verdict.certificate {
                None => format!("IN_LATTICE (exact: {})", verdict.exact),
                Some(e) => format!("SEPARATED by {} -> {} (exact: {})", e.u, e.v, verdict.exact),
            });
            Ok(match verdict.verdict {
                VerdictKind::InLattice => 0,
                VerdictKind::Separated => 1,
            })
        }
        Command::Verify => verify_framework(cli, fw, &space),
        Command::Realize { point } => {
            let point: TruncatedPoint = serde_json::from_str(point).map_err(Failure::parse)?;
            let w = space::realize(fw, &space, &point)?;
            emit(cli, &w, || w.to_string());
            Ok(0)
        }
    }
}

fn space_text(space: &ApproximationSpace) -> String {
    let mut out = format!(
        "level {} recognisers {:?} exact {} ({} points)",
        space.level(),
        space.recogniser_indices(),
        space.exact(),
        space.len()
    );
    for p in space.points() {
        out.push_str(&format!("\n{p}"));
    }
    out
}

fn summary_text(s: &TrialSummary) -> String {
    format!(
        "seed {}: lattice {}/{} boolean {}/{}",
        s.seed, s.lattice_passed, s.trials, s.boolean_passed, s.trials
    )
}

fn verify_abstract(cli: &Cli) -> CliResult<(u8, TrialSummary)> {
    let summary = lattice::random_trials(cli.seed, cli.trials, 5)?;
    if cli.file.is_none() {
        emit(cli, &summary, || summary_text(&summary));
    }
    Ok((u8::from(!summary.all_passed()), summary))
}

#[derive(Serialize)]
struct FrameworkTrials {
    points: usize,
    exact: bool,
    trials: usize,
    lattice_passed: usize,
    boolean_passed: usize,
}

#[derive(Serialize)]
struct VerifyReport {
    finite: TrialSummary,
    framework: FrameworkTrials,
}

/// The abstract trials plus random generator families over the loaded framework's space.
fn verify_framework<F: Framework>(cli: &Cli, fw: &F, space: &ApproximationSpace) -> CliResult<u8> {
    let (_, finite) = verify_abstract(cli)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut ft = FrameworkTrials {
        points: space.len(),
        exact: space.exact(),
        trials: cli.trials,
        lattice_passed: 0,
        boolean_passed: 0,
    };
    let coords = space.recogniser_indices();
    for _ in 0..cli.trials {
        let k = if coords.is_empty() {
            0
        } else {
            rng.gen_range(0..=3)
        };
        let members = (0..k)
            .map(|_| random_language(fw, coords[rng.gen_range(0..coords.len())], &mut rng))
            .collect::<Result<Vec<_>, _>>()?;
        let fam = LanguageFamily::new(members);
        ft.lattice_passed += usize::from(equations::verify_lattice_theorem(space, &fam)?.holds);
        ft.boolean_passed += usize::from(equations::verify_boolean_corollary(space, &fam)?.holds);
    }
    let ok =
        finite.all_passed() && ft.lattice_passed == ft.trials && ft.boolean_passed == ft.trials;
    let report = VerifyReport {
        finite,
        framework: ft,
    };
    emit(cli, &report, || {
        format!(
            "{}\nframework ({} points, exact {}): lattice {}/{} boolean {}/{}",
            summary_text(&report.finite),
            report.framework.points,
            report.framework.exact,
            report.framework.lattice_passed,
            report.framework.trials,
            report.framework.boolean_passed,
            report.framework.trials
        )
    });
    Ok(u8::from(!ok))
}
