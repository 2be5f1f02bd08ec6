//! Subcommands, their flags and the artifact plumbing around them.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use maass_core::lift::{
    cor41_scan, fj_extract, lift_table, maass_solve, maass_verify, mtype_check, ClassData, CoefficientTable, MaassParameter, SolutionKind,
};
use maass_core::modforms::{level1_eigenform, plus_cusp_space, plus_eigenform, DEFAULT_PRECISION};
use maass_core::quadform::padic::{bad_places, hilbert_int};
use maass_core::quadform::{EvenLattice, HalfIntegralForm};
use maass_core::siegel::{CapabilityTable, LocalSiegelData};
use maass_core::{Error, Result};

use crate::acceptance::{acceptance_suite, run_criterion, Artifacts, Profile};

pub const DEFAULT_SEED: u64 = 20240601;

#[derive(Debug, Parser, Serialize)]
#[command(name = "maass", version, about = "Exact Fourier coefficients of lifts and the Maass relations that characterize them")]
pub struct Cli {
    /// Directory for JSON/CSV artifacts and manifest.json; without it the main artifact goes to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads, defaults to the available parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Json,
    Csv,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Siegel series, F, F~ and the local phi of one form at one prime.
    Siegel {
        /// Even matrix 2h, rows separated by ';', e.g. "2,1;1,2".
        #[arg(long)]
        form: String,
        #[arg(long)]
        p: u64,
        /// Highest brute-forced coefficient, defaults to f_p.
        #[arg(long)]
        jmax: Option<u32>,
    },
    /// Echelon basis of the plus space of weight k + 1/2.
    PlusSpace {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        prec: usize,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
    },
    /// Coefficient table of the lift of the weight 2k eigenform to genus 2 or 4.
    Lift {
        #[arg(long, value_parser = parse_genus)]
        genus: usize,
        #[arg(long)]
        twok: u32,
        #[arg(long)]
        dmax: u64,
    },
    /// Checks a table against a candidate c through the Maass relations.
    VerifyMaass {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        param: PathBuf,
        /// 2k, where the table has weight k + n.
        #[arg(long)]
        twok: u32,
    },
    /// Solves the Maass relations of a table for c.
    SolveMaass {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        twok: u32,
        /// Largest D used, defaults to the table bound.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Fourier-Jacobi coefficient of a table for an index S.
    Fj {
        #[arg(long)]
        table: PathBuf,
        /// Even matrix S, e.g. "2" or "2,1,0;1,2,0;0,0,2".
        #[arg(long)]
        index: String,
        #[arg(long)]
        twok: u32,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Discriminants achieved by classes of size 2n against the predicted set.
    ScanCor41 {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        bound: u64,
    },
    /// Border lemmas, eta signs and sampled Hilbert reciprocity.
    CheckLemmas {
        #[arg(long, value_enum, default_value_t = Profile::Full)]
        profile: Profile,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Every acceptance criterion with a per-criterion table.
    Acceptance {
        #[arg(long, value_enum, default_value_t = Profile::Full)]
        profile: Profile,
    },
}

/// What a subcommand produced.
pub struct Outcome {
    pub artifacts: Artifacts,
    /// Artifact printed to stdout when no output directory is given.
    pub primary: Option<String>,
    pub summary: String,
    pub pass: bool,
}

impl Outcome {
    fn single(name: &str, text: String, summary: String, pass: bool) -> Self {
        Outcome { artifacts: Artifacts::from([(name.to_string(), text)]), primary: Some(name.to_string()), summary, pass }
    }
}

fn parse_genus(s: &str) -> std::result::Result<usize, String> {
    match s {
        "2" => Ok(2),
        "4" => Ok(4),
        _ => Err(format!("genus must be 2 or 4, got {s}")),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
}

fn half_weight(twok: u32) -> Result<u32> {
    if twok % 2 == 1 || twok == 0 {
        return Err(Error::Usage(format!("--twok must be a positive even integer, got {twok}")));
    }
    Ok(twok / 2)
}

fn load_table(path: &Path, k: u32) -> Result<CoefficientTable> {
    let mut table = CoefficientTable::from_json(&read(path)?, k)?;
    table.weight = k + (table.genus / 2) as u32;
    Ok(table)
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("artifact serialization")
}

pub fn execute(cli: &Cli, caps: &CapabilityTable) -> Result<Outcome> {
    Ok(match &cli.command {
        Command::Siegel { form, p, jmax } => {
            let h = HalfIntegralForm::parse(form)?;
            let ld = LocalSiegelData::compute(&h, *p, *jmax, caps)?;
            let summary =
                format!("{h} at p = {p}: f_p = {}, {} Siegel coefficients, deg F = {}", ld.fp, ld.bcoeffs.len(), ld.f_coeffs.len() - 1);
            Outcome::single("siegel.json", pretty(&ld.to_json()), summary, true)
        }
        Command::PlusSpace { k, prec, emit } => {
            let basis = plus_cusp_space(*k, *prec)?;
            let (name, text) = match emit {
                Emit::Json => ("plus_space.json", pretty(&basis.iter().map(|g| g.to_pairs()).collect::<Vec<_>>())),
                Emit::Csv => {
                    let mut text = String::from("basis,m,c\n");
                    for (i, g) in basis.iter().enumerate() {
                        for [m, c] in g.to_pairs() {
                            text.push_str(&format!("{i},{m},{c}\n"));
                        }
                    }
                    ("plus_space.csv", text)
                }
            };
            Outcome::single(name, text, format!("weight {k}+1/2 plus space: dimension {} to precision {prec}", basis.len()), true)
        }
        Command::Lift { genus, twok, dmax } => {
            let k = half_weight(*twok)?;
            let g = plus_eigenform(k, (*dmax as usize + 1).max(maass_core::modforms::plus::min_precision(k)))?;
            let f = level1_eigenform(*twok, 40)?;
            let lt = lift_table(*genus, &g, &f, *dmax, caps)?;
            let mismatches = lt.mismatches();
            let param = MaassParameter::from_eigenform(&g, *dmax)?;
            let summary = format!(
                "genus {genus}, 2k = {twok}: {} classes with D <= {dmax}, {} where the two routes differ",
                lt.route_b.len(),
                mismatches.len()
            );
            let mut out = Outcome::single("table.json", lt.route_b.to_json(), summary, mismatches.is_empty());
            out.artifacts.insert("param.json".into(), param.to_json());
            out
        }
        Command::VerifyMaass { table, param, twok } => {
            let k = half_weight(*twok)?;
            let table = load_table(table, k)?;
            let c = MaassParameter::from_json(&read(param)?, k)?;
            let classes = ClassData::compute_all(table.index(), caps)?;
            let r = maass_verify(&table, &c, &classes)?;
            let summary = format!("{} classes checked, {} failures", r.checked, r.failures.len());
            Outcome::single("verify.json", pretty(&r), summary, r.pass)
        }
        Command::SolveMaass { table, twok, bound } => {
            let k = half_weight(*twok)?;
            let table = load_table(table, k)?;
            let classes = ClassData::compute_all(table.index(), caps)?;
            let sol = maass_solve(&table, k, bound.unwrap_or(table.d_max()), &classes)?;
            let summary = format!(
                "{} equations in {} unknowns: {:?} solution, kernel dimension {}",
                sol.equations,
                sol.indices.len(),
                sol.kind,
                sol.kernel.len()
            );
            let pass = sol.kind != SolutionKind::Empty;
            Outcome::single("solution.json", pretty(&sol), summary, pass)
        }
        Command::Fj { table, index, twok, bound } => {
            let k = half_weight(*twok)?;
            let table = load_table(table, k)?;
            let s = EvenLattice::parse(index)?;
            let jt = fj_extract(&table, &s, bound.unwrap_or(table.d_max()))?;
            let m = mtype_check(&jt);
            let summary =
                format!("index {}: {} coefficients, M-type {}", s.encoding(), jt.entries.len(), if m.ok { "holds" } else { "fails" });
            let mut out = Outcome::single("fj.json", jt.to_json(), summary, m.ok);
            out.artifacts.insert("mtype.json".into(), pretty(&m));
            out
        }
        Command::ScanCor41 { n, bound } => {
            let r = cor41_scan(*n, *bound)?;
            let summary = format!(
                "n = {n}, D <= {bound}: {} discriminants achieved, sets {}",
                r.achieved.len(),
                if r.equal { "agree" } else { "differ" }
            );
            Outcome::single("cor41.json", pretty(&r), summary, r.equal)
        }
        Command::CheckLemmas { profile, samples } => {
            let (report, mut artifacts) = run_criterion(7, *profile, caps)?;
            let (checked, failures) = hilbert_reciprocity(cli.seed, *samples);
            let pass = report.pass && failures.is_empty();
            artifacts.insert("reciprocity.json".into(), pretty(&json!({ "seed": cli.seed, "samples": checked, "failures": failures })));
            let summary = format!("{}\nHilbert reciprocity: {checked} sampled pairs, {} failures", report.line(), failures.len());
            Outcome { artifacts, primary: None, summary, pass }
        }
        Command::Acceptance { profile } => {
            let report = acceptance_suite(*profile, caps);
            Outcome { pass: report.all_pass(), summary: report.table(), artifacts: report.artifacts, primary: None }
        }
    })
}

/// `prod_v (a, b)_v = 1` on seeded random pairs.
pub fn hilbert_reciprocity(seed: u64, samples: usize) -> (usize, Vec<(i128, i128)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..samples {
        let a = nonzero(&mut rng);
        let b = nonzero(&mut rng);
        let prod: i8 = bad_places(a * b).into_iter().map(|v| hilbert_int(a, b, v)).product();
        if prod != 1 {
            failures.push((a, b));
        }
    }
    (samples, failures)
}

fn nonzero(rng: &mut ChaCha8Rng) -> i128 {
    loop {
        let x: i64 = rng.random_range(-100_000..=100_000);
        if x != 0 {
            return x as i128;
        }
    }
}

/// Writes artifacts and `manifest.json` under `dir`.
pub fn write_out(dir: &Path, cli: &Cli, caps: &CapabilityTable, artifacts: &Artifacts) -> Result<()> {
    let io = |e: std::io::Error| Error::Usage(format!("cannot write to {}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let mut hashes = serde_json::Map::new();
    for (name, text) in artifacts {
        fs::write(dir.join(name), text).map_err(io)?;
        hashes.insert(name.clone(), json!(hex::encode(Sha256::digest(text.as_bytes()))));
    }
    let manifest = json!({
        "config": cli,
        "versions": { "maass-cli": env!("CARGO_PKG_VERSION"), "maass-core": maass_core::VERSION },
        "capability": caps,
        "artifacts": hashes,
    });
    fs::write(dir.join("manifest.json"), pretty(&manifest)).map_err(io)
}

/// Runs the parsed command and returns the process exit code.
pub fn dispatch(cli: &Cli) -> Result<u8> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    }
    let caps = CapabilityTable::from_env()?;
    let outcome = execute(cli, &caps)?;
    match (&cli.out, &outcome.primary) {
        (Some(dir), _) => {
            write_out(dir, cli, &caps, &outcome.artifacts)?;
            println!("{}", outcome.summary);
        }
        (None, Some(name)) => {
            print!("{}", outcome.artifacts[name]);
            if !outcome.artifacts[name].ends_with('\n') {
                println!();
            }
            eprintln!("{}", outcome.summary);
        }
        (None, None) => println!("{}", outcome.summary),
    }
    Ok(if outcome.pass { 0 } else { 2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocity_holds_on_samples() {
        let (n, failures) = hilbert_reciprocity(DEFAULT_SEED, 200);
        assert_eq!(n, 200);
        assert!(failures.is_empty(), "{failures:?}");
    }

    #[test]
    fn flags_parse() {
        let cli = Cli::try_parse_from(["maass", "siegel", "--form", "2,1;1,2", "--p", "3"]).unwrap();
        assert!(matches!(cli.command, Command::Siegel { p: 3, .. }));
        assert_eq!(cli.seed, DEFAULT_SEED);
        assert!(Cli::try_parse_from(["maass", "siegel", "--bogus"]).is_err());
        assert!(Cli::try_parse_from(["maass", "lift", "--genus", "3", "--twok", "18", "--dmax", "4"]).is_err());
    }

    #[test]
    fn odd_twok_is_a_usage_error() {
        assert!(matches!(half_weight(17), Err(Error::Usage(_))));
    }
}
