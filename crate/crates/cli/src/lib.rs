//! Argument grammar and dispatcher for the `dfqkd` binary.
//!
//! Every command ends its report with one machine-readable summary line.
//! Exit status: 0 success, 1 verification failure, 2 usage or input error.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use dfqkd_core::dfstates::{EIGHT_QUBIT_LABELS, SIX_QUBIT_LABELS};
use dfqkd_core::{
    complete_basis, df_dimension, df_subspace_basis, dfvec, discriminate,
    eight_qubit_state, fidelity, four_qubit_state, invariance_score, mutually_unbiased_check,
    named_state, run_session, six_qubit_state, spin_residuals, verify_table1, Discrimination,
    Eve, MeasurementSetting, NoiseModel, SessionConfig, StateVector,
};
use num_complex::Complex64;

const INVARIANCE_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "dfqkd", version, about = "Decoherence-free states and permutation-based BB84")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a named state to a DFVEC file (`-` for stdout).
    Gen { label: String, output: PathBuf },
    /// Score a DFVEC state against Haar-random collective noise.
    VerifyInvariance {
        input: PathBuf,
        #[arg(default_value_t = 100)]
        trials: usize,
        #[arg(default_value_t = 0)]
        seed: u64,
    },
    /// DF subspace dimension for an even number of qubits.
    Dim { n: usize },
    /// Check the distinguishing settings for every pair of 6-qubit basis states.
    Table1,
    /// Complete the product-state basis for N qubits with Gram-Schmidt.
    Complete {
        n: usize,
        /// For N=8, include the supersinglet among the inputs.
        #[arg(long)]
        with_supersinglet: bool,
    },
    /// Simulate the permutation-based BB84 protocol.
    Bb84 {
        #[arg(long, default_value_t = 10_000)]
        rounds: usize,
        #[arg(long, default_value = "collective-haar")]
        noise: String,
        #[arg(long, default_value = "none")]
        eve: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw one channel realization for the whole session.
        #[arg(long)]
        static_noise: bool,
    },
    /// Try to perfectly distinguish two named states with one fixed setting.
    Distinguish {
        label_a: String,
        label_b: String,
        setting: String,
    },
    /// Overlap table of the four BB84 signal states.
    Mub,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    VerificationFailed = 1,
    UsageError = 2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub status: Status,
    pub text: String,
}

impl Report {
    fn verdict(passed: bool, text: String) -> Self {
        Self {
            status: if passed {
                Status::Success
            } else {
                Status::VerificationFailed
            },
            text,
        }
    }
}

/// `%.12g`-style rendering.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

pub fn dispatch(cmd: Command) -> Report {
    let result = match cmd {
        Command::Gen { label, output } => gen(&label, &output),
        Command::VerifyInvariance {
            input,
            trials,
            seed,
        } => verify_invariance(&input, trials, seed),
        Command::Dim { n } => dim(n),
        Command::Table1 => table1(),
        Command::Complete {
            n,
            with_supersinglet,
        } => complete(n, with_supersinglet),
        Command::Bb84 {
            rounds,
            noise,
            eve,
            seed,
            static_noise,
        } => bb84(rounds, &noise, &eve, seed, static_noise),
        Command::Distinguish {
            label_a,
            label_b,
            setting,
        } => distinguish(&label_a, &label_b, &setting),
        Command::Mub => mub(),
    };
    result.unwrap_or_else(|message| Report {
        status: Status::UsageError,
        text: format!("error: {message}"),
    })
}

type CmdResult = Result<Report, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn gen(label: &str, output: &PathBuf) -> CmdResult {
    let psi = named_state(label).map_err(err)?;
    let body = dfvec::to_string(&psi);
    let mut text = String::new();
    if output.as_os_str() == "-" {
        text.push_str(&body);
    } else {
        std::fs::write(output, &body).map_err(|e| format!("{}: {e}", output.display()))?;
        let _ = writeln!(
            text,
            "wrote {label}: {} qubits, {} nonzero amplitudes, norm {}",
            psi.n_qubits(),
            body.lines().count() - 1,
            sig12(psi.norm())
        );
    }
    let _ = write!(text, "gen {label} {}", output.display());
    Ok(Report::verdict(true, text))
}

fn read_state(path: &PathBuf) -> Result<StateVector, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    dfvec::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn verify_invariance(input: &PathBuf, trials: usize, seed: u64) -> CmdResult {
    let raw = read_state(input)?;
    let norm = raw.norm();
    let psi = raw.normalized().map_err(err)?;
    let score = invariance_score(&psi, trials, seed).map_err(err)?;
    let [jx, jy, jz] = spin_residuals(&psi);
    let passed = score >= 1.0 - INVARIANCE_TOL;
    let mut text = String::new();
    let _ = writeln!(text, "file: {}", input.display());
    let _ = writeln!(text, "qubits: {}", psi.n_qubits());
    let _ = writeln!(text, "input norm: {}", sig12(norm));
    let _ = writeln!(text, "|Jx psi| = {}, |Jy psi| = {}, |Jz psi| = {}", sig12(jx), sig12(jy), sig12(jz));
    let _ = writeln!(text, "min fidelity over {trials} Haar draws (seed {seed}): {}", sig12(score));
    let _ = write!(
        text,
        "invariance {trials} {} {}",
        sig12(score),
        if passed { "PASS" } else { "FAIL" }
    );
    Ok(Report::verdict(passed, text))
}

fn dim(n: usize) -> CmdResult {
    let rec = df_dimension(n).map_err(err)?;
    let mut text = String::new();
    let _ = writeln!(text, "N = {n}");
    let _ = writeln!(text, "exact_dim {}", rec.exact_dim);
    let _ = writeln!(text, "logical_qubits {}", sig12(rec.logical_qubits));
    let _ = writeln!(text, "asymptotic_estimate {}", sig12(rec.asymptotic_estimate));
    let mut passed = true;
    if n <= dfqkd_core::dfstates::MAX_SOLVER_QUBITS {
        let solved = df_subspace_basis(n).map_err(err)?.states.len() as u128;
        passed = solved == rec.exact_dim;
        let _ = writeln!(text, "nullspace_dim {solved}");
    }
    let _ = write!(text, "dim {n} {}", rec.exact_dim);
    Ok(Report::verdict(passed, text))
}

fn table1() -> CmdResult {
    let report = verify_table1().map_err(err)?;
    Ok(Report::verdict(report.all_passed(), report.to_string()))
}

fn complete(n: usize, with_supersinglet: bool) -> CmdResult {
    let labels: Vec<&str> = match n {
        2 => vec![],
        4 => vec!["0"],
        6 => SIX_QUBIT_LABELS[..4].to_vec(),
        8 if with_supersinglet => EIGHT_QUBIT_LABELS[..13].to_vec(),
        8 => EIGHT_QUBIT_LABELS[..12].to_vec(),
        _ => return Err(format!("complete supports N = 2, 4, 6, 8; got {n}")),
    };
    let existing = labels
        .iter()
        .map(|l| match n {
            4 => four_qubit_state(l),
            6 => six_qubit_state(l),
            _ => eight_qubit_state(l),
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let rest = complete_basis(&existing, n).map_err(err)?;
    let mut text = String::new();
    let _ = writeln!(text, "inputs: [{}]", labels.join(", "));
    let _ = writeln!(text, "complement dimension: {}", rest.len());
    for (k, v) in rest.iter().enumerate() {
        let terms = v.terms(1e-12);
        let _ = writeln!(text, "state {k}: {} nonzero amplitudes", terms.len());
        for (bits, a) in terms {
            let _ = writeln!(text, "  {bits} {}", fmt_complex(a));
        }
    }
    if n == 8 && with_supersinglet && rest.len() == 1 {
        let explicit = eight_qubit_state("0010").map_err(err)?;
        let f = fidelity(&rest[0], &explicit).map_err(err)?;
        let _ = writeln!(text, "fidelity with 0010: {}", sig12(f));
    }
    let _ = write!(text, "complete {n} {}", rest.len());
    Ok(Report::verdict(true, text))
}

fn fmt_complex(a: Complex64) -> String {
    if a.im == 0.0 {
        sig12(a.re)
    } else {
        format!("{}{}{}i", sig12(a.re), if a.im < 0.0 { "-" } else { "+" }, sig12(a.im.abs()))
    }
}

fn bb84(rounds: usize, noise: &str, eve: &str, seed: u64, static_noise: bool) -> CmdResult {
    let noise: NoiseModel = noise.parse().map_err(err)?;
    let eve: Eve = eve.parse().map_err(err)?;
    let cfg = SessionConfig::new(rounds, noise.with_per_round(!static_noise), eve, seed);
    let stats = run_session(&cfg).map_err(err)?;
    let mut text = String::new();
    let _ = writeln!(text, "noise: {}{}", cfg.noise, if static_noise { " (static)" } else { " (per round)" });
    let _ = writeln!(text, "eve: {:?}", cfg.eve);
    let _ = writeln!(text, "seed: {seed}");
    let _ = writeln!(text, "rounds sent: {}", stats.rounds_sent);
    let _ = writeln!(text, "rounds sifted: {}", stats.rounds_sifted);
    let _ = writeln!(text, "sifted fraction: {}", sig12(stats.sifted_fraction));
    let _ = writeln!(text, "errors in sifted: {}", stats.errors_in_sifted);
    let _ = writeln!(text, "qber: {}", sig12(stats.qber));
    if let Some(q) = stats.qber_given_eve_wrong_basis {
        let _ = writeln!(text, "qber given eve wrong basis: {}", sig12(q));
    }
    let _ = writeln!(text, "out-of-support sifted readouts: {}", stats.flagged_in_sifted);
    let _ = write!(
        text,
        "bb84 {} {} {} {}",
        stats.rounds_sent,
        stats.rounds_sifted,
        stats.errors_in_sifted,
        sig12(stats.qber)
    );
    Ok(Report::verdict(true, text))
}

fn distinguish(label_a: &str, label_b: &str, setting: &str) -> CmdResult {
    let a = named_state(label_a).map_err(err)?;
    let b = named_state(label_b).map_err(err)?;
    let s: MeasurementSetting = setting.parse().map_err(err)?;
    let outcome = discriminate(&s, &a, &b).map_err(err)?;
    let (passed, diagnostic) = match &outcome {
        Discrimination::Success(_) => (true, "disjoint supports".to_owned()),
        Discrimination::Failure {
            success_probability,
        } => (
            false,
            format!("success_probability={}", sig12(*success_probability)),
        ),
    };
    let verdict = if passed { "PASS" } else { "FAIL" };
    Ok(Report::verdict(
        passed,
        format!("{label_a} {label_b} {s} {verdict} {diagnostic}\ndistinguish {label_a} {label_b} {s} {verdict}"),
    ))
}

fn mub() -> CmdResult {
    let report = mutually_unbiased_check().map_err(err)?;
    let cross: Vec<String> = report.cross.iter().flatten().map(|c| sig12(*c)).collect();
    Ok(Report::verdict(
        report.mutually_unbiased() && report.orthonormal(),
        format!("{report}\nmub {}", cross.join(" ")),
    ))
}
