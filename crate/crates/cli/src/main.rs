//! `crn` — command-line front end for the reaction-network analysis library.
//!
//! Exit codes partition outcomes: 0 the main theorem applies (or the command
//! simply succeeded), 1 it does not apply / a check failed, 2 input or parse
//! error, 3 a resource cap was hit.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crn_core::ball::norm_ball;
use crn_core::cones::{build_cone, cone_from_generators, viable_set, ConeConstruction, ConeError};
use crn_core::corpus;
use crn_core::factorize::{classify, matrix_strings, pnd_factorize, ConeFamily};
use crn_core::graphs::{bipartite_graph, r_graph, ri_graph, strongly_connected, EdgeSign};
use crn_core::kinetics::{KineticsSpec, RateEvaluator};
use crn_core::network::{parse_network, to_crn_text, to_json, ReactionNetwork};
use crn_core::rational::{q_to_string, Q};
use crn_core::verify::{
    contractivity_check, convergence_check, integrate_checkpoints, monotonicity_oracle,
    strong_witnesses, conservation_rows, CONTRACTIVITY_TOL, MONOTONICITY_TOL,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXIT_OK: u8 = 0;
const EXIT_DOES_NOT_APPLY: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

/// Convergence cluster diameter tolerance.
const CONVERGENCE_DIAMETER_TOL: f64 = 1e-5;
/// Convergence equilibrium residual tolerance.
const CONVERGENCE_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "crn",
    version,
    about = "Reaction-network factorization, cone construction, and contraction checks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a network file and echo it in normalized form.
    Parse {
        file: PathBuf,
        /// Emit the network as JSON instead of reaction text.
        #[arg(long)]
        json: bool,
    },
    /// Decide the exact factorization Gamma = P * N * D.
    Factorize {
        file: PathBuf,
        /// Emit machine-readable JSON.
        #[arg(long)]
        json: bool,
    },
    /// Full structural classification: factorization, flags, cone family,
    /// graph connectivity, and whether the contraction theorem applies.
    Classify {
        file: PathBuf,
        /// Emit machine-readable JSON with a run manifest.
        #[arg(long)]
        json: bool,
    },
    /// Emit one of the network's graphs as adjacency JSON or DOT.
    Graph {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: GraphKind,
        /// Emit Graphviz DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Construct the monotonicity cone (and optionally the norm ball).
    Cone {
        file: PathBuf,
        /// Cone family to use; `auto` follows the classification.
        #[arg(long, value_enum, default_value_t = FamilyArg::Auto)]
        family: FamilyArg,
        /// Also build the contraction-norm unit ball and emit its vertices.
        #[arg(long)]
        emit_ball: bool,
    },
    /// Run the numerical verification suite: monotonicity oracle, strong
    /// witnesses, weak contractivity, and convergence.
    Verify {
        file: PathBuf,
        /// Master seed; defaults to the CRN_SEED environment variable, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Random states for the monotonicity oracle.
        #[arg(long, default_value_t = 100)]
        states: usize,
        /// Compatible trajectory pairs for the contractivity check.
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        /// Integration horizon.
        #[arg(long = "t-final", default_value_t = 50.0)]
        t_final: f64,
        /// Nominal integrator step.
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Skip the compactness precondition in the convergence check.
        #[arg(long)]
        assume_persistent: bool,
        /// Emit machine-readable JSON with a run manifest.
        #[arg(long)]
        json: bool,
    },
    /// Integrate the mass-action ODE from a given start and emit CSV.
    Simulate {
        file: PathBuf,
        /// Comma-separated initial concentrations, one per species.
        #[arg(long)]
        x0: String,
        #[arg(long = "t-final", default_value_t = 20.0)]
        t_final: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Number of evenly spaced output rows.
        #[arg(long, default_value_t = 100)]
        points: usize,
        /// Seed for rate constants not fixed in the file.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Classify and verify the bundled corpus networks.
    Corpus {
        /// Run a single named network instead of the whole corpus.
        #[arg(long)]
        network: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    R,
    Ri,
    Bipartite,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Auto,
    TypeC,
    Cube,
    SubsetSum,
}

/// Everything needed to reproduce a report byte for byte.
#[derive(Serialize)]
struct RunManifest {
    command: String,
    input_sha256: String,
    seed: Option<u64>,
    version: &'static str,
}

impl RunManifest {
    fn new(command: &str, input: &[u8], seed: Option<u64>) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(input);
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for b in digest {
            write!(hex, "{b:02x}").unwrap();
        }
        RunManifest {
            command: command.to_string(),
            input_sha256: hex,
            seed,
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}

fn default_seed(seed: Option<u64>) -> u64 {
    seed.or_else(|| std::env::var("CRN_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(0)
}

fn load_network(path: &Path) -> Result<(ReactionNetwork, Vec<u8>), u8> {
    let bytes = std::fs::read(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_INPUT
    })?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| {
        eprintln!("error: {} is not valid UTF-8", path.display());
        EXIT_INPUT
    })?;
    let net = parse_network(&text).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_INPUT
    })?;
    Ok((net, bytes))
}

fn cone_error_exit(e: &ConeError) -> u8 {
    match e {
        ConeError::ClosureCap { .. } | ConeError::DimensionCap { .. } => EXIT_RESOURCE,
        _ => EXIT_DOES_NOT_APPLY,
    }
}

fn run(cli: Cli) -> u8 {
    match cli.cmd {
        Cmd::Parse { file, json } => cmd_parse(&file, json),
        Cmd::Factorize { file, json } => cmd_factorize(&file, json),
        Cmd::Classify { file, json } => cmd_classify(&file, json),
        Cmd::Graph { file, kind, dot } => cmd_graph(&file, kind, dot),
        Cmd::Cone { file, family, emit_ball } => cmd_cone(&file, family, emit_ball),
        Cmd::Verify { file, seed, states, pairs, t_final, dt, assume_persistent, json } => {
            cmd_verify(&file, default_seed(seed), states, pairs, t_final, dt, assume_persistent, json)
        }
        Cmd::Simulate { file, x0, t_final, dt, points, seed } => {
            cmd_simulate(&file, &x0, t_final, dt, points, default_seed(seed))
        }
        Cmd::Corpus { network, seed, json } => cmd_corpus(network.as_deref(), default_seed(seed), json),
    }
}

// ---------------------------------------------------------------------------
// parse
// ---------------------------------------------------------------------------

fn cmd_parse(file: &Path, json: bool) -> u8 {
    let (net, _) = match load_network(file) {
        Ok(v) => v,
        Err(code) => return code,
    };
    if json {
        println!("{}", to_json(&net));
    } else {
        print!("{}", to_crn_text(&net));
    }
    EXIT_OK
}

// ---------------------------------------------------------------------------
// factorize
// ---------------------------------------------------------------------------

fn cmd_factorize(file: &Path, json: bool) -> u8 {
    let (net, _) = match load_network(file) {
        Ok(v) => v,
        Err(code) => return code,
    };
    match pnd_factorize(&net.gamma) {
        Ok(f) => {
            if json {
                let out = serde_json::json!({
                    "factorizable": true,
                    "stage": serde_json::Value::Null,
                    "P": matrix_strings(&f.p),
                    "N": matrix_strings(&f.n),
                    "D": f.d.iter().map(q_to_string).collect::<Vec<_>>(),
                });
                println!("{out}");
            } else {
                println!("factorizable: yes ({:?})", f.n_class);
                print_matrix("P", &matrix_strings(&f.p));
                print_matrix("N", &matrix_strings(&f.n));
                println!("D = diag({})", f.d.iter().map(q_to_string).collect::<Vec<_>>().join(", "));
            }
            EXIT_OK
        }
        Err(e) => {
            if json {
                let out = serde_json::json!({
                    "factorizable": false,
                    "stage": format!("{:?}", e.stage),
                    "P": serde_json::Value::Null,
                    "N": serde_json::Value::Null,
                    "D": serde_json::Value::Null,
                });
                println!("{out}");
            } else {
                println!("factorizable: no (rejected at stage {:?})", e.stage);
            }
            EXIT_DOES_NOT_APPLY
        }
    }
}

fn print_matrix(name: &str, rows: &[Vec<String>]) {
    println!("{name} =");
    for row in rows {
        println!("  [{}]", row.join(", "));
    }
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

fn cmd_classify(file: &Path, json: bool) -> u8 {
    let (net, bytes) = match load_network(file) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let report = classify(&net);
    if json {
        let out = serde_json::json!({
            "manifest": RunManifest::new("classify", &bytes, None),
            "report": report.to_json_value(),
        });
        println!("{out}");
    } else {
        println!("factorizable:          {}", report.factorizable);
        if let Some(stage) = report.failure_stage {
            println!("failure stage:         {stage:?}");
        }
        println!("cone family:           {:?}", report.cone_family);
        println!("non-catalytic:         {}", report.non_catalytic);
        println!("RI strongly connected: {}", report.ri_strongly_connected);
        println!("theorem applies:       {}", report.theorem_applies);
        for note in &report.notes {
            println!("note: {note}");
        }
    }
    if report.theorem_applies {
        EXIT_OK
    } else {
        EXIT_DOES_NOT_APPLY
    }
}

// ---------------------------------------------------------------------------
// graph
// ---------------------------------------------------------------------------

fn cmd_graph(file: &Path, kind: GraphKind, dot: bool) -> u8 {
    let (net, _) = match load_network(file) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let reaction_names: Vec<String> = net.reactions.iter().map(|r| r.name.clone()).collect();
    match kind {
        GraphKind::R => {
            let g = r_graph(&net);
            if dot {
                println!("graph r {{");
                for name in &reaction_names {
                    println!("  \"{name}\";");
                }
                for (i, j, sign, shared) in &g.edges {
                    let label = match sign {
                        EdgeSign::Positive => "+",
                        EdgeSign::Negative => "-",
                        EdgeSign::Unsigned => "0",
                    };
                    let species: Vec<&str> =
                        shared.iter().map(|&s| net.species[s].as_str()).collect();
                    println!(
                        "  \"{}\" -- \"{}\" [label=\"{} {}\"];",
                        reaction_names[*i],
                        reaction_names[*j],
                        label,
                        species.join(",")
                    );
                }
                println!("}}");
            } else {
                let edges: Vec<serde_json::Value> = g
                    .edges
                    .iter()
                    .map(|(i, j, sign, shared)| {
                        serde_json::json!({
                            "a": reaction_names[*i],
                            "b": reaction_names[*j],
                            "sign": format!("{sign:?}"),
                            "shared_species": shared.iter().map(|&s| net.species[s].clone()).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                let out = serde_json::json!({
                    "kind": "r",
                    "nodes": reaction_names,
                    "edges": edges,
                    "connected": g.is_connected(),
                });
                println!("{out}");
            }
        }
        GraphKind::Ri | GraphKind::Bipartite => {
            let (g, nodes, kind_name) = match kind {
                GraphKind::Ri => (ri_graph(&net), reaction_names.clone(), "ri"),
                _ => {
                    let mut nodes = net.species.clone();
                    nodes.extend(reaction_names.iter().cloned());
                    (bipartite_graph(&net), nodes, "bipartite")
                }
            };
            if dot {
                println!("digraph {kind_name} {{");
                for name in &nodes {
                    println!("  \"{name}\";");
                }
                for (i, outs) in g.adj.iter().enumerate() {
                    for &j in outs {
                        println!("  \"{}\" -> \"{}\";", nodes[i], nodes[j]);
                    }
                }
                println!("}}");
            } else {
                let out = serde_json::json!({
                    "kind": kind_name,
                    "nodes": nodes,
                    "adj": g.adj,
                    "strongly_connected": strongly_connected(&g),
                });
                println!("{out}");
            }
        }
    }
    EXIT_OK
}

// ---------------------------------------------------------------------------
// cone
// ---------------------------------------------------------------------------

/// Builds the cone construction, optionally overriding the family chosen by
/// the classifier.
fn build_cone_with_family(
    net: &ReactionNetwork,
    family: FamilyArg,
) -> Result<ConeConstruction, ConeError> {
    if family == FamilyArg::Auto {
        return build_cone(net);
    }
    let classification = classify(net);
    let Some(fact) = classification.factorization.clone() else {
        return Err(ConeError::NotFactorizable(
            classification.failure_stage.expect("unfactorizable reports carry a stage"),
        ));
    };
    let forced = match family {
        FamilyArg::TypeC => {
            // honor the cross-polytope/simplex dichotomy decided upstream
            match classification.cone_family {
                ConeFamily::CrossPolytope | ConeFamily::Simplex => classification.cone_family,
                _ => ConeFamily::Simplex,
            }
        }
        FamilyArg::Cube => ConeFamily::Cube,
        FamilyArg::SubsetSum => ConeFamily::SubsetSum,
        FamilyArg::Auto => unreachable!(),
    };
    let viable = viable_set(&fact, forced, &net.reversible())?;
    let extreme = crn_core::geometry::extreme::reduce_to_extreme(
        &viable.vectors,
        crn_core::cones::EXTREME_EXACT_CAP,
    );
    let factor_generators = crn_core::cones::lift_points(&extreme);
    let species_generators = crn_core::cones::apply_p(&fact.p, &factor_generators);
    let cone = cone_from_generators(species_generators)?;
    Ok(ConeConstruction { classification, viable, factor_generators, cone })
}

fn vectors_to_strings(vs: &[Vec<Q>]) -> Vec<Vec<String>> {
    vs.iter().map(|v| v.iter().map(q_to_string).collect()).collect()
}

fn cmd_cone(file: &Path, family: FamilyArg, emit_ball: bool) -> u8 {
    let (net, _) = match load_network(file) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let cons = match build_cone_with_family(&net, family) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return cone_error_exit(&e);
        }
    };
    let ball = if emit_ball {
        match norm_ball(&cons.cone, &net.gamma) {
            Ok(b) => Some(b),
            Err(e) => {
                eprintln!("error: norm ball construction failed: {e}");
                return EXIT_DOES_NOT_APPLY;
            }
        }
    } else {
        None
    };
    let mut out = serde_json::json!({
        "family": cons.viable.family,
        "symmetrized": cons.viable.symmetrized,
        "viable_set": vectors_to_strings(&cons.viable.vectors),
        "factor_generators": vectors_to_strings(&cons.factor_generators),
        "generators": vectors_to_strings(&cons.cone.generators),
        "dual_generators": vectors_to_strings(&cons.cone.dual_generators),
        "notes": cons.viable.notes,
    });
    if let Some(b) = ball {
        out["ball"] = serde_json::json!({
            "dim": b.dim,
            "im_basis": vectors_to_strings(&b.im_basis),
            "slice_vertices": vectors_to_strings(&b.slice_vertices),
            "h_points": vectors_to_strings(&b.h_points),
        });
    }
    println!("{out}");
    EXIT_OK
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

/// One full verification run; shared between `verify` and `corpus`.
#[allow(clippy::too_many_arguments)]
fn verify_report(
    net: &ReactionNetwork,
    seed: u64,
    states: usize,
    pairs: usize,
    t_final: f64,
    dt: f64,
    assume_persistent: bool,
) -> Result<(serde_json::Value, bool), (String, u8)> {
    let classification = classify(net);
    if !classification.theorem_applies {
        let reason = if !classification.factorizable {
            "no factorization"
        } else if !classification.non_catalytic {
            "network is catalytic"
        } else {
            "RI-graph is not strongly connected"
        };
        return Err((format!("theorem does not apply: {reason}"), EXIT_DOES_NOT_APPLY));
    }
    let cons = build_cone(net).map_err(|e| (e.to_string(), cone_error_exit(&e)))?;
    let ball = norm_ball(&cons.cone, &net.gamma)
        .map_err(|e| (format!("norm ball construction failed: {e}"), EXIT_DOES_NOT_APPLY))?;

    // Each stage derives its own generator from the master seed, so the
    // stages are independently reproducible.
    let mut rng_mono = ChaCha8Rng::seed_from_u64(seed);
    let spec = KineticsSpec::from_hints(net, &mut rng_mono, Some(seed));
    let ev = RateEvaluator::new(net, &spec).map_err(|e| (e, EXIT_INPUT))?;
    let mono = monotonicity_oracle(&ev, &cons.cone, states, &mut rng_mono, MONOTONICITY_TOL);

    let witnesses = strong_witnesses(net, &cons).map_err(|e| (e.to_string(), EXIT_RESOURCE))?;

    let mut rng_contr = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let contractivity = contractivity_check(
        net,
        &ball,
        pairs,
        t_final,
        50,
        dt,
        &mut rng_contr,
        CONTRACTIVITY_TOL,
    )
    .map_err(|e| (format!("contractivity check failed: {e}"), EXIT_DOES_NOT_APPLY))?;

    let mut rng_conv = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let mut convergence = convergence_check(
        net,
        &spec,
        10,
        4.0 * t_final,
        dt,
        &mut rng_conv,
        CONVERGENCE_DIAMETER_TOL,
        CONVERGENCE_RESIDUAL_TOL,
    )
    .map_err(|e| (format!("convergence check failed: {e}"), EXIT_DOES_NOT_APPLY))?;
    if assume_persistent && !convergence.classes_compact {
        convergence.pass = convergence.final_diameter <= CONVERGENCE_DIAMETER_TOL
            && convergence.max_residual <= CONVERGENCE_RESIDUAL_TOL;
    }

    let all_pass =
        mono.pass && witnesses.all_witnessed && contractivity.pass && convergence.pass;
    let report = serde_json::json!({
        "classification": classification.to_json_value(),
        "parameters": {
            "seed": seed,
            "states": states,
            "pairs": pairs,
            "t_final": t_final,
            "dt": dt,
            "checkpoints": 50,
            "assume_persistent": assume_persistent,
        },
        "tolerances": {
            "monotonicity": MONOTONICITY_TOL,
            "contractivity": CONTRACTIVITY_TOL,
            "convergence_diameter": CONVERGENCE_DIAMETER_TOL,
            "convergence_residual": CONVERGENCE_RESIDUAL_TOL,
        },
        "monotonicity": mono,
        "strong_witnesses": {
            "n_proper_faces": witnesses.n_proper_faces,
            "n_witnessed": witnesses.n_witnessed,
            "all_witnessed": witnesses.all_witnessed,
        },
        "contractivity": contractivity,
        "convergence": convergence,
        "pass": all_pass,
    });
    Ok((report, all_pass))
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    file: &Path,
    seed: u64,
    states: usize,
    pairs: usize,
    t_final: f64,
    dt: f64,
    assume_persistent: bool,
    json: bool,
) -> u8 {
    let (net, bytes) = match load_network(file) {
        Ok(v) => v,
        Err(code) => return code,
    };
    match verify_report(&net, seed, states, pairs, t_final, dt, assume_persistent) {
        Ok((report, all_pass)) => {
            if json {
                let out = serde_json::json!({
                    "manifest": RunManifest::new("verify", &bytes, Some(seed)),
                    "report": report,
                });
                println!("{out}");
            } else {
                print_verify_summary(&report);
            }
            if all_pass {
                EXIT_OK
            } else {
                EXIT_DOES_NOT_APPLY
            }
        }
        Err((msg, code)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

fn print_verify_summary(report: &serde_json::Value) {
    let verdict = |v: &serde_json::Value| if v.as_bool() == Some(true) { "pass" } else { "FAIL" };
    println!(
        "monotonicity:   {} (min pairing {})",
        verdict(&report["monotonicity"]["pass"]),
        report["monotonicity"]["min_pairing"]
    );
    println!(
        "strong faces:   {} ({}/{} witnessed)",
        verdict(&report["strong_witnesses"]["all_witnessed"]),
        report["strong_witnesses"]["n_witnessed"],
        report["strong_witnesses"]["n_proper_faces"]
    );
    println!(
        "contractivity:  {} (max increase {}, min relative decrease {})",
        verdict(&report["contractivity"]["pass"]),
        report["contractivity"]["max_increase"],
        report["contractivity"]["min_relative_decrease"]
    );
    println!(
        "convergence:    {} (diameter {}, residual {})",
        verdict(&report["convergence"]["pass"]),
        report["convergence"]["final_diameter"],
        report["convergence"]["max_residual"]
    );
    println!("overall:        {}", verdict(&report["pass"]));
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

fn cmd_simulate(file: &Path, x0: &str, t_final: f64, dt: f64, points: usize, seed: u64) -> u8 {
    let (net, _) = match load_network(file) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let parsed: Result<Vec<f64>, _> = x0.split(',').map(|s| s.trim().parse::<f64>()).collect();
    let x0 = match parsed {
        Ok(v) if v.len() == net.n_species() && v.iter().all(|x| *x >= 0.0 && x.is_finite()) => v,
        _ => {
            eprintln!(
                "error: --x0 must be {} comma-separated nonnegative numbers",
                net.n_species()
            );
            return EXIT_INPUT;
        }
    };
    if points == 0 || t_final <= 0.0 || dt <= 0.0 {
        eprintln!("error: --points, --t-final, and --dt must be positive");
        return EXIT_INPUT;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = KineticsSpec::from_hints(&net, &mut rng, Some(seed));
    let ev = match RateEvaluator::new(&net, &spec) {
        Ok(ev) => ev,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let checkpoints: Vec<f64> =
        (1..=points).map(|k| t_final * k as f64 / points as f64).collect();
    let res = match integrate_checkpoints(&ev, &x0, &checkpoints, dt, &conservation_rows(&net)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: integration failed: {e}");
            return EXIT_DOES_NOT_APPLY;
        }
    };
    println!("t,{}", net.species.join(","));
    let row = |t: f64, x: &[f64]| {
        let vals: Vec<String> = x.iter().map(|v| format!("{v}")).collect();
        println!("{t},{}", vals.join(","));
    };
    row(0.0, &x0);
    for (t, x) in checkpoints.iter().zip(&res.states) {
        row(*t, x);
    }
    eprintln!("conservation drift: {}", res.conservation_drift);
    EXIT_OK
}

// ---------------------------------------------------------------------------
// corpus
// ---------------------------------------------------------------------------

fn cmd_corpus(network: Option<&str>, seed: u64, json: bool) -> u8 {
    let sources = corpus::corpus_sources();
    let selected: Vec<(&str, String)> = match network {
        Some(name) => {
            let Some(entry) = sources.into_iter().find(|(n, _)| *n == name) else {
                eprintln!("error: unknown corpus network `{name}`");
                return EXIT_INPUT;
            };
            vec![entry]
        }
        None => sources,
    };
    let mut entries = Vec::new();
    let mut worst = EXIT_OK;
    for (name, src) in &selected {
        let net = parse_network(src).expect("built-in networks parse");
        let classification = classify(&net);
        // Light verification parameters keep the corpus sweep fast; the
        // verdicts are re-derived each run rather than snapshotted.
        let mut capped = false;
        let (verified, detail) = if classification.theorem_applies {
            match verify_report(&net, seed, 25, 5, 30.0, 2e-3, false) {
                Ok((report, pass)) => (Some(pass), Some(report)),
                Err((msg, code)) => {
                    worst = worst.max(code);
                    capped = code == EXIT_RESOURCE;
                    eprintln!("{name}: {msg}");
                    (Some(false), None)
                }
            }
        } else {
            (None, None)
        };
        if verified == Some(false) {
            worst = worst.max(EXIT_DOES_NOT_APPLY);
        }
        if !classification.theorem_applies {
            worst = worst.max(EXIT_DOES_NOT_APPLY);
        }
        if json {
            entries.push(serde_json::json!({
                "network": name,
                "classification": classification.to_json_value(),
                "verified": verified,
                "resource_capped": capped,
                "verify_report": detail,
            }));
        } else {
            let applies = if classification.theorem_applies { "applies" } else { "does not apply" };
            let verdict = match (verified, capped) {
                (Some(true), _) => "verified",
                (Some(false), true) => "verification hit a resource cap",
                (Some(false), false) => "verification FAILED",
                (None, _) => "not verified",
            };
            println!(
                "{name}: {applies} (family {:?}) — {verdict}",
                classification.cone_family
            );
        }
    }
    if json {
        let out = serde_json::json!({
            "seed": seed,
            "networks": entries,
        });
        println!("{out}");
    }
    worst
}
