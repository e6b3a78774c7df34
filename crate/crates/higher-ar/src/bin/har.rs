//! Command-line surface: knit categories from quiver spec files, print label
//! tables and AR quivers, construct and verify almost split sequences, fold
//! tensor factors into higher almost split sequences, and run the self-test
//! suites.

use clap::{Parser, Subcommand, ValueEnum};
use higher_ar::almostsplit::{
    build_base_sequence, commuting_square_holds, extract_chain_map, tensor_almost_split,
    ExtractedPair,
};
use higher_ar::ctcat::{tensor_category, CTCategory};
use higher_ar::oracle;
use higher_ar::quiver::QuiverSpec;
use higher_ar::report::{fold_categories, split_label, verify_sequence_file, write_sequence_file};
use higher_ar::{Error, Result};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "har", about = "higher almost split sequences over tensor products of path algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// List the indecomposables of a quiver with slices and dimension vectors.
    Indecs { quiver: PathBuf },
    /// Emit the AR quiver (solid: irreducible maps, dotted: τ⁻).
    Arquiver {
        quiver: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Dot)]
        format: OutputFormat,
    },
    /// Build and verify the almost split sequence starting at a label.
    Arseq {
        quiver: PathBuf,
        #[arg(long)]
        start: String,
    },
    /// Fold several factors and print the verified higher almost split
    /// sequence starting at a tensor label.
    #[command(name = "tensor-seq")]
    TensorSeq {
        /// Factor quiver files, folded left-associatively.
        quivers: Vec<PathBuf>,
        /// Start label, factors joined by `⊗` (ASCII fallback `(x)`).
        #[arg(long)]
        start: String,
        /// Expected common start slice (checked when given).
        #[arg(long)]
        slice: Option<usize>,
    },
    /// Re-verify a printed sequence file from scratch.
    Verify { file: PathBuf },
    /// Run the invariant and oracle suites; exit code 0 iff all pass.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_class(&e))
        }
    }
}

fn error_class(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::UnknownLabel(_) => 2,
        Error::RepInfinite => 3,
        Error::HeterogeneousFactors(_) => 4,
        Error::SliceMismatch(_) => 5,
        Error::VerificationFailed(_) => 6,
        _ => 1,
    }
}

fn load_quiver(path: &Path) -> Result<Arc<QuiverSpec>> {
    let text = std::fs::read_to_string(path)?;
    let name = path.file_stem().map_or("quiver".to_string(), |s| s.to_string_lossy().into_owned());
    Ok(Arc::new(QuiverSpec::parse(&name, &text)?))
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Indecs { quiver } => {
            let q = load_quiver(&quiver)?;
            let (_, cat) = fold_categories(&[q])?;
            print!("{}", cat.label_table());
            match cat.homogeneity() {
                Some(l) => println!("homogeneous of length {l}"),
                None => println!("not homogeneous"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Arquiver { quiver, format } => {
            let q = load_quiver(&quiver)?;
            let (_, cat) = fold_categories(&[q])?;
            match format {
                OutputFormat::Dot => print!("{}", cat.dot()),
                OutputFormat::Text => print!("{}", cat.label_table()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Arseq { quiver, start } => {
            let q = load_quiver(&quiver)?;
            let (_, cat) = fold_categories(&[q.clone()])?;
            let idx = cat.index_of(&start).ok_or_else(|| Error::UnknownLabel(start.clone()))?;
            let (seq, report) = build_base_sequence(&cat, idx)?;
            print!("{}", write_sequence_file(&[q], &cat, &seq.complex, &report));
            Ok(ExitCode::SUCCESS)
        }
        Command::TensorSeq { quivers, start, slice } => {
            if quivers.is_empty() {
                return Err(Error::Parse("tensor-seq needs at least one quiver file".into()));
            }
            let qs: Vec<Arc<QuiverSpec>> =
                quivers.iter().map(|p| load_quiver(p)).collect::<Result<_>>()?;
            let starts = split_label(&start);
            if starts.len() != qs.len() {
                return Err(Error::Parse(format!(
                    "start label has {} factors but {} quivers were given",
                    starts.len(),
                    qs.len()
                )));
            }
            let factors: Vec<Arc<CTCategory>> = qs
                .iter()
                .map(|q| higher_ar::ctcat::knit(q).map(Arc::new))
                .collect::<Result<_>>()?;
            if factors.len() > 1 {
                let ls: Vec<Option<usize>> = factors.iter().map(|c| c.homogeneity()).collect();
                if ls.iter().any(Option::is_none) || ls.windows(2).any(|w| w[0] != w[1]) {
                    return Err(Error::HeterogeneousFactors(format!(
                        "factor orbit lengths {ls:?}"
                    )));
                }
            }
            let start_indices: Vec<usize> = factors
                .iter()
                .zip(&starts)
                .map(|(cat, name)| {
                    cat.index_of(name).ok_or_else(|| Error::UnknownLabel(name.clone()))
                })
                .collect::<Result<_>>()?;
            let slices: Vec<usize> = factors
                .iter()
                .zip(&start_indices)
                .map(|(cat, &i)| cat.slice(i))
                .collect();
            if slices.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::SliceMismatch(format!(
                    "start labels lie in slices {slices:?}; a common slice is required"
                )));
            }
            if let Some(s) = slice {
                if slices[0] != s {
                    return Err(Error::SliceMismatch(format!(
                        "start labels lie in slice {} but --slice {s} was requested",
                        slices[0]
                    )));
                }
            }
            let mut pairs: Vec<ExtractedPair> = Vec::with_capacity(factors.len());
            for (cat, &i) in factors.iter().zip(&start_indices) {
                let (seq, _) = build_base_sequence(cat, i)?;
                pairs.push(extract_chain_map(&seq)?);
            }
            let mut acc_cat = factors[0].clone();
            let mut acc_pair = pairs.remove(0);
            let mut last = None;
            for (cat, pair) in factors[1..].iter().zip(pairs) {
                let tcat = Arc::new(tensor_category(&acc_cat, cat)?);
                let step = tensor_almost_split(&tcat, &acc_pair, &pair)?;
                acc_cat = tcat;
                acc_pair = step.pair;
                last = Some((step.seq, step.report));
            }
            match last {
                Some((seq, report)) => {
                    print!("{}", write_sequence_file(&qs, &acc_cat, &seq.complex, &report));
                }
                None => {
                    // single factor: the base sequence itself
                    let (seq, report) = build_base_sequence(&acc_cat, start_indices[0])?;
                    print!("{}", write_sequence_file(&qs, &acc_cat, &seq.complex, &report));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file } => {
            let text = std::fs::read_to_string(&file)?;
            let (_, report) = verify_sequence_file(&text)?;
            print!("{report}");
            if report.pass() {
                Ok(ExitCode::SUCCESS)
            } else {
                Err(Error::VerificationFailed("sequence file failed re-verification".into()))
            }
        }
        Command::Selftest => selftest(),
    }
}

// The reference A5 orientation drives all self-test suites.
const SELFTEST_QUIVER: &str = "vertices = 5\narrow 1 -> 2\narrow 2 -> 3\narrow 4 -> 3\narrow 5 -> 4\n";

fn selftest() -> Result<ExitCode> {
    let q = Arc::new(QuiverSpec::parse("a5", SELFTEST_QUIVER)?);
    let base = Arc::new(higher_ar::ctcat::knit(&q)?);
    let t2 = Arc::new(tensor_category(&base, &base)?);
    let mut all_ok = true;
    let mut check = |name: &str, ok: bool, detail: String| {
        println!("{name}: {} ({detail})", if ok { "ok" } else { "FAIL" });
        all_ok &= ok;
    };

    check(
        "slice-vanishing (base)",
        oracle::slice_vanishing_scan(&base),
        format!("{} labels", base.label_count()),
    );
    check(
        "slice-vanishing (2-fold)",
        oracle::slice_vanishing_scan(&t2),
        format!("{} labels", t2.label_count()),
    );

    let (checked, mismatches) = oracle::hom_agreement_suite(&base, &t2, 25, 0xA11CE);
    check("hom dimensions vs direct solve", mismatches == 0, format!("{checked} pairs"));

    let (checked, failures) = oracle::rad_formula_suite(&base, 10, 0xB0B);
    check("radical product formula", failures == 0, format!("{checked} tuples"));

    let (checked, failures) = oracle::kunneth_suite(&base, &t2, 100, 0xC0FFEE);
    check("Künneth convolution", failures == 0, format!("{checked} pairs"));

    let (trues, falses, disagreements) = oracle::cone_law_suite(&base, 50, 0xD1CE);
    check(
        "cone exactness = quasi-isomorphism",
        disagreements == 0 && trues > 0 && falses > 0,
        format!("{trues} quasi-isos, {falses} non-quasi-isos"),
    );

    // base sequences, extraction and the commuting square for every
    // noninjective label
    let mut seq_ok = true;
    let mut square_ok = true;
    let mut count = 0;
    for i in 0..base.label_count() {
        if base.tau_next(i).is_none() {
            continue;
        }
        count += 1;
        match build_base_sequence(&base, i) {
            Ok((seq, report)) => {
                seq_ok &= report.pass();
                if let Ok(pair) = extract_chain_map(&seq) {
                    for x in 0..base.label_count() {
                        square_ok &= commuting_square_holds(&base, x, &pair.phi);
                    }
                } else {
                    square_ok = false;
                }
            }
            Err(_) => seq_ok = false,
        }
    }
    check("base sequences verified", seq_ok, format!("{count} noninjective labels"));
    check("cone/corner commuting square", square_ok, format!("{count} chain maps x {} labels", base.label_count()));

    if all_ok {
        println!("selftest: all suites passed");
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Error::VerificationFailed("selftest found failures".into()))
    }
}
