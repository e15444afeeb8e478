//! Batch front-end over scenario files.
//!
//! Exit codes: 0 = true/feasible/valid, 1 = false/infeasible, 2 = input
//! error, 3 = numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use povcal::effects::State;
use povcal::kernels::{self, MarkovKernel};
use povcal::observables::Observable;
use povcal::scenario::{self, Scenario};
use povcal::{divergences, order, PovError, Tolerances, DEFAULT_SEED};

#[derive(Parser)]
#[command(
    name = "povcal",
    about = "POVM post-processing: smearing, the fuzzy preorder, clean observables, sufficiency",
    long_about = "Scenario files are JSON: complex numbers as [re, im] pairs, matrices as \
row-major arrays of rows, kernels as arrays of stochastic rows. Kernel rows align with the \
canonical (sorted-label) atom order of the named source observable."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit machine-readable JSON reports
    #[arg(long, global = true)]
    json: bool,

    /// Scale factor applied to the equality and LP-feasibility tolerances
    #[arg(long, global = true, env = "POVCAL_TOL", default_value_t = 1.0)]
    tol: f64,

    /// RNG seed for sampled evidence
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Validate every object in a scenario file
    Check { file: PathBuf },
    /// Smear an observable by a kernel
    Smear {
        file: PathBuf,
        #[arg(long)]
        observable: String,
        #[arg(long)]
        kernel: String,
        /// Write a scenario file holding the source, the result, and the kernel
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide lhs ⪯ rhs and print the witness kernel or INFEASIBLE
    Preorder {
        file: PathBuf,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Decide two-sided fuzzy equivalence
    Equiv {
        file: PathBuf,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Decide whether an observable is clean (every nonzero atom rank one)
    Clean {
        file: PathBuf,
        #[arg(long)]
        observable: String,
        /// Also print the rank-one refinement and the LP cross-check
        #[arg(long)]
        witness: bool,
    },
    /// Decompose an observable with commuting range into a sharp mother and a kernel
    Mother {
        file: PathBuf,
        #[arg(long)]
        observable: String,
    },
    /// Evaluate an f-divergence between two named probability-vector states
    Divergence {
        file: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        /// Generator: tv, kl or hellinger
        #[arg(long)]
        f: String,
    },
    /// Decide whether a kernel is sufficient for a family of probability vectors
    Sufficiency {
        file: PathBuf,
        #[arg(long)]
        kernel: String,
        /// Comma-separated names of probability-vector states
        #[arg(long, value_delimiter = ',')]
        family: Vec<String>,
        /// Use the Blackwell recovery LP instead of the Hellinger criterion
        #[arg(long)]
        blackwell: bool,
    },
    /// Run the sufficiency equivalence battery for a smearing
    Battery {
        file: PathBuf,
        #[arg(long)]
        xi: String,
        #[arg(long)]
        eta: String,
        #[arg(long)]
        kernel: String,
        /// Faithful reference state
        #[arg(long)]
        state: String,
        /// Number of extra sampled states
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !cli.tol.is_finite() || cli.tol <= 0.0 {
        eprintln!("error: --tol must be a positive finite number");
        return ExitCode::from(2);
    }
    let tols = Tolerances::scaled(cli.tol);
    match run(&cli, &tols) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                PovError::NumericalFailure(_) | PovError::DegeneracyResolutionFailed { .. } => {
                    ExitCode::from(3)
                }
                _ => ExitCode::from(2),
            }
        }
    }
}

fn emit(json_flag: bool, human: &str, value: Value) {
    if json_flag {
        println!("{}", serde_json::to_string(&value).expect("report serializes"));
    } else {
        println!("{human}");
    }
}

fn kernel_rows_human(rows: &[Vec<f64>]) -> String {
    rows.iter()
        .map(|row| {
            row.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn probability_state<'a>(sc: &'a Scenario, name: &str) -> Result<&'a Vec<f64>, PovError> {
    match sc.state(name)? {
        State::Tribe(p) => Ok(p),
        State::Hilbert(_) => Err(PovError::InvalidInput(format!(
            "state `{name}` is a density matrix; this command needs a probability vector \
(use the tribe backend)"
        ))),
    }
}

fn observable_human(o: &Observable) -> String {
    format!(
        "labels: {:?}\n{}",
        o.labels(),
        serde_json::to_string(&scenario::observable_to_json(o)).expect("observable serializes")
    )
}

fn run(cli: &Cli, tols: &Tolerances) -> Result<u8, PovError> {
    match &cli.command {
        Command::Check { file } => {
            let sc = Scenario::from_path(file)?;
            emit(
                cli.json,
                &format!(
                    "OK: {} observables, {} kernels, {} states (dim {})",
                    sc.observables.len(),
                    sc.kernels.len(),
                    sc.states.len(),
                    sc.dim
                ),
                json!({
                    "valid": true,
                    "dim": sc.dim,
                    "observables": sc.observables.keys().collect::<Vec<_>>(),
                    "kernels": sc.kernels.keys().collect::<Vec<_>>(),
                    "states": sc.states.keys().collect::<Vec<_>>(),
                }),
            );
            Ok(0)
        }
        Command::Smear { file, observable, kernel, out } => {
            let sc = Scenario::from_path(file)?;
            let xi = sc.observable(observable)?;
            let nu = sc.kernel(kernel)?;
            let eta = kernels::smear(xi, nu)?;
            if let Some(path) = out {
                let mut emitted = Scenario {
                    dim: sc.dim,
                    backend: sc.backend,
                    observables: Default::default(),
                    kernels: Default::default(),
                    states: Default::default(),
                };
                emitted.observables.insert("source".into(), xi.clone());
                emitted.observables.insert("smeared".into(), eta.clone());
                emitted.kernels.insert("kernel".into(), nu.clone());
                std::fs::write(
                    path,
                    serde_json::to_string_pretty(&emitted.to_json()).expect("scenario serializes"),
                )
                .map_err(|e| PovError::InvalidInput(format!("{}: {e}", path.display())))?;
            }
            emit(
                cli.json,
                &observable_human(&eta),
                json!({
                    "labels": eta.labels(),
                    "observable": scenario::observable_to_json(&eta),
                }),
            );
            Ok(0)
        }
        Command::Preorder { file, lhs, rhs } => {
            let sc = Scenario::from_path(file)?;
            let verdict =
                order::preorder_leq(sc.observable(lhs)?, sc.observable(rhs)?, tols)?;
            match verdict.witness {
                Some(witness) => {
                    emit(
                        cli.json,
                        &format!(
                            "FEASIBLE (residual {:.3e})\n{}",
                            verdict.residual,
                            kernel_rows_human(witness.rows())
                        ),
                        json!({
                            "feasible": true,
                            "witness": witness.rows(),
                            "residual": verdict.residual,
                        }),
                    );
                    Ok(0)
                }
                None => {
                    emit(cli.json, "INFEASIBLE", json!({ "feasible": false }));
                    Ok(1)
                }
            }
        }
        Command::Equiv { file, lhs, rhs } => {
            let sc = Scenario::from_path(file)?;
            let eq = order::fuzzy_equivalent(sc.observable(lhs)?, sc.observable(rhs)?, tols)?;
            emit(
                cli.json,
                if eq.equivalent { "EQUIVALENT" } else { "NOT EQUIVALENT" },
                json!({
                    "equivalent": eq.equivalent,
                    "forward_feasible": eq.forward.holds,
                    "backward_feasible": eq.backward.holds,
                }),
            );
            Ok(if eq.equivalent { 0 } else { 1 })
        }
        Command::Clean { file, observable, witness } => {
            let sc = Scenario::from_path(file)?;
            let eta = sc.observable(observable)?;
            if *witness {
                let report = order::is_clean_with_evidence(eta, tols)?;
                emit(
                    cli.json,
                    &format!(
                        "{}\nrefinement outcomes: {}\nrefinement ⪯ observable: {}\nobservable ⪯ refinement: {}",
                        if report.clean { "CLEAN" } else { "NOT CLEAN" },
                        report.refinement.refined.outcome_count(),
                        report.refinement_below_eta.holds,
                        report.eta_below_refinement.holds,
                    ),
                    json!({
                        "clean": report.clean,
                        "refinement": scenario::observable_to_json(&report.refinement.refined),
                        "label_map": report.refinement.label_map,
                        "refinement_below": report.refinement_below_eta.holds,
                        "below_refinement": report.eta_below_refinement.holds,
                    }),
                );
                Ok(if report.clean { 0 } else { 1 })
            } else {
                let clean = order::is_clean(eta)?;
                emit(
                    cli.json,
                    if clean { "CLEAN" } else { "NOT CLEAN" },
                    json!({ "clean": clean }),
                );
                Ok(if clean { 0 } else { 1 })
            }
        }
        Command::Mother { file, observable } => {
            let sc = Scenario::from_path(file)?;
            match order::pvm_mother(sc.observable(observable)?, tols) {
                Ok((mother, nu)) => {
                    emit(
                        cli.json,
                        &format!(
                            "{}\nkernel:\n{}",
                            observable_human(&mother),
                            kernel_rows_human(nu.rows())
                        ),
                        json!({
                            "commuting": true,
                            "mother": scenario::observable_to_json(&mother),
                            "kernel": nu.rows(),
                        }),
                    );
                    Ok(0)
                }
                Err(PovError::NotCommuting { defect }) => {
                    emit(
                        cli.json,
                        "NOT_COMMUTING",
                        json!({ "commuting": false, "defect": defect }),
                    );
                    Ok(1)
                }
                Err(e) => Err(e),
            }
        }
        Command::Divergence { file, p, q, f } => {
            let sc = Scenario::from_path(file)?;
            let pv = probability_state(&sc, p)?;
            let qv = probability_state(&sc, q)?;
            let gen = divergences::builtin(f)?;
            let value = divergences::f_divergence(&gen, pv, qv)?;
            emit(
                cli.json,
                &value.to_string(),
                json!({
                    "generator": f,
                    "value": value.finite(),
                    "finite": value.is_finite(),
                }),
            );
            Ok(0)
        }
        Command::Sufficiency { file, kernel, family, blackwell } => {
            let sc = Scenario::from_path(file)?;
            let nu: &MarkovKernel = sc.kernel(kernel)?;
            let members: Vec<Vec<f64>> = family
                .iter()
                .map(|name| probability_state(&sc, name).cloned())
                .collect::<Result<_, _>>()?;
            let (sufficient, detail) = if *blackwell {
                let (ok, recovery) = order::blackwell_sufficient(nu, &members, tols)?;
                (
                    ok,
                    json!({
                        "criterion": "blackwell",
                        "sufficient": ok,
                        "recovery": recovery.as_ref().map(|r| r.rows().to_vec()),
                    }),
                )
            } else {
                let ok = order::sufficient_for_family(nu, &members)?;
                (ok, json!({ "criterion": "hellinger", "sufficient": ok }))
            };
            emit(
                cli.json,
                if sufficient { "SUFFICIENT" } else { "NOT SUFFICIENT" },
                detail,
            );
            Ok(if sufficient { 0 } else { 1 })
        }
        Command::Battery { file, xi, eta, kernel, state, samples } => {
            let sc = Scenario::from_path(file)?;
            let report = order::equivalence_battery(
                sc.observable(xi)?,
                sc.observable(eta)?,
                sc.kernel(kernel)?,
                sc.state(state)?,
                *samples,
                cli.seed,
                tols,
            )?;
            emit(
                cli.json,
                &format!(
                    "pairwise: {}\nvs_mixture: {}\nhellinger_max_gap: {:e}\nblackwell: {}\nfuzzy_equivalent: {}\nagree: {}",
                    report.pairwise,
                    report.vs_mixture,
                    report.hellinger_max_gap,
                    report.blackwell,
                    report.fuzzy_equivalent,
                    report.agree,
                ),
                serde_json::to_value(&report).expect("report serializes"),
            );
            Ok(if report.agree { 0 } else { 1 })
        }
    }
}
