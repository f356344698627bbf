use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use fockline_core::algebra::{FockPolyState, ModeId, Polarization};
use fockline_core::dsl::{bind, BoundCircuit, ParamEnv};
use fockline_core::elements::CoherentState;
use fockline_core::measurement::{report, report_coherent, DetectorSpec};
use fockline_core::oracle::{compare, compare_coherent, oracle_simulate, OracleConfig, AGREEMENT_TOL, MAX_VECTOR_DIM};
use fockline_core::random::{seeded_circuits, RandomCircuitOptions};
use fockline_core::sim::{run_coherent, run_fock, slot_labels, SimOptions};
use serde_json::{json, Value};

use crate::args::{Backend, Command, CommonArgs, Format, RunArgs};
use crate::render::{report_text, state_json, state_text, StateView};
use crate::{check_valid, load, load_bound, CliError, Settings, EXIT_OK, EXIT_RUNTIME};

pub(crate) fn execute(
    command: Command,
    settings: &Settings,
    stdout: &mut String,
    stderr: &mut String,
) -> Result<i32, CliError> {
    match command {
        Command::Check { file } => check(&file, stdout),
        Command::Simulate(run) => simulate(&run, settings, stdout),
        Command::Explain(run) => explain(&run, stdout),
        Command::Probs {
            run,
            detect,
            coincidence,
        } => probs(&run, detect.as_deref(), &coincidence, settings, stdout),
        Command::Oracle {
            file,
            opts,
            random,
            seed,
        } => oracle(file.as_deref(), &opts, random, seed, settings, stdout, stderr),
    }
}

fn check(file: &Path, stdout: &mut String) -> Result<i32, CliError> {
    let c = load(file)?;
    check_valid(file, &c)?;
    let _ = writeln!(
        stdout,
        "{}: ok ({} statements, {} paths)",
        file.display(),
        c.statements.len(),
        c.all_paths().len()
    );
    Ok(EXIT_OK)
}

fn sim_options(opts: &CommonArgs) -> SimOptions {
    SimOptions {
        prune_eps: opts.prune_eps,
        circular: opts.circular_basis.into(),
    }
}

fn oracle_config(opts: &CommonArgs, settings: &Settings) -> OracleConfig {
    OracleConfig {
        n_max: opts.truncation,
        dim_cap: settings.dim_cap,
        vector_cap: MAX_VECTOR_DIM,
        circular: opts.circular_basis.into(),
    }
}

fn runtime(file: &Path) -> impl Fn(String) -> CliError + '_ {
    move |m| CliError::Runtime(format!("{}: {m}", file.display()))
}

/// States from the start of the circuit to its end, per backend.
enum Evolution {
    Fock(Vec<FockPolyState>),
    Coherent(Vec<CoherentState>),
    Oracle { state: FockPolyState, truncation_tail: f64 },
}

impl Evolution {
    fn final_view(&self) -> StateView<'_> {
        match self {
            Evolution::Fock(s) => StateView::Fock {
                state: s.last().expect("at least the input"),
                backend: "engine",
                truncation_tail: 0.0,
            },
            Evolution::Coherent(s) => StateView::Coherent(s.last().expect("at least the input")),
            Evolution::Oracle { state, truncation_tail } => StateView::Fock {
                state,
                backend: "oracle",
                truncation_tail: *truncation_tail,
            },
        }
    }
}

fn evolve(run: &RunArgs, bc: &BoundCircuit, settings: &Settings) -> Result<Evolution, CliError> {
    let err = runtime(&run.file);
    let opts = sim_options(&run.opts);
    Ok(match run.backend_for(bc) {
        Backend::Engine => Evolution::Fock(run_fock(bc, &opts).map_err(|e| err(e.to_string()))?),
        Backend::Coherent => Evolution::Coherent(run_coherent(bc, &opts).map_err(|e| err(e.to_string()))?),
        Backend::Oracle => {
            let r = oracle_simulate(bc, &oracle_config(&run.opts, settings)).map_err(|e| err(e.to_string()))?;
            Evolution::Oracle {
                state: r.state.to_poly_state(run.opts.prune_eps),
                truncation_tail: r.truncation_tail,
            }
        }
    })
}

fn emit_json(stdout: &mut String, v: &Value) {
    stdout.push_str(&serde_json::to_string_pretty(v).expect("JSON values always serialize"));
    stdout.push('\n');
}

fn simulate(run: &RunArgs, settings: &Settings, stdout: &mut String) -> Result<i32, CliError> {
    let bc = load_bound(&run.file, &run.opts)?;
    let ev = evolve(run, &bc, settings)?;
    match run.opts.format {
        Format::Text => stdout.push_str(&state_text(&ev.final_view())),
        Format::Json => emit_json(stdout, &state_json(&ev.final_view())),
    }
    Ok(EXIT_OK)
}

fn explain(run: &RunArgs, stdout: &mut String) -> Result<i32, CliError> {
    let bc = load_bound(&run.file, &run.opts)?;
    let ev = evolve(run, &bc, &Settings::default())?;
    let views: Vec<StateView> = match &ev {
        Evolution::Fock(s) => s
            .iter()
            .map(|state| StateView::Fock {
                state,
                backend: "engine",
                truncation_tail: 0.0,
            })
            .collect(),
        Evolution::Coherent(s) => s.iter().map(StateView::Coherent).collect(),
        Evolution::Oracle { .. } => {
            return Err(CliError::Runtime(
                "explain supports the engine and coherent backends".to_string(),
            ))
        }
    };
    match run.opts.format {
        Format::Text => {
            for (step, view) in views.iter().enumerate() {
                match step.checked_sub(1).map(|i| &bc.elements[i]) {
                    None => {
                        let _ = writeln!(stdout, "step 0: input");
                    }
                    Some(el) => {
                        let _ = writeln!(stdout, "step {step}: line {}: {}", el.line, el.text);
                    }
                }
                stdout.push_str(&state_text(view));
            }
        }
        Format::Json => {
            let snapshots: Vec<Value> = views
                .iter()
                .enumerate()
                .map(|(step, view)| {
                    let el = step.checked_sub(1).map(|i| &bc.elements[i]);
                    json!({
                        "step": step,
                        "line": el.map(|e| e.line),
                        "element": el.map(|e| e.text.clone()),
                        "state": state_json(view),
                    })
                })
                .collect();
            emit_json(stdout, &json!({ "snapshots": snapshots }));
        }
    }
    Ok(EXIT_OK)
}

/// Accepts `3H` or a slot name such as `5R` from a basis change.
fn resolve_mode(token: &str, labels: &BTreeMap<ModeId, String>) -> Result<ModeId, CliError> {
    let token = token.trim();
    if let Some((mode, _)) = labels.iter().find(|(_, l)| l.as_str() == token) {
        return Ok(mode.clone());
    }
    token
        .parse::<ModeId>()
        .map_err(|e| CliError::Runtime(format!("unknown detector `{token}`: {e}")))
}

fn probs(
    run: &RunArgs,
    detect: Option<&[String]>,
    coincidence: &[String],
    settings: &Settings,
    stdout: &mut String,
) -> Result<i32, CliError> {
    let bc = load_bound(&run.file, &run.opts)?;
    let ev = evolve(run, &bc, settings)?;
    let labels = slot_labels(&bc);
    let modes = match detect {
        None => bc
            .paths
            .iter()
            .flat_map(|p| Polarization::BOTH.map(|pol| ModeId::new(p.clone(), pol)))
            .collect(),
        Some(tokens) => tokens
            .iter()
            .filter(|t| !t.trim().is_empty())
            .map(|t| resolve_mode(t, &labels))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let coincidences = coincidence
        .iter()
        .map(|group| {
            group
                .split(',')
                .map(|t| resolve_mode(t, &labels))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let spec = DetectorSpec { modes, coincidences };
    let err = runtime(&run.file);
    let rep = match &ev {
        Evolution::Fock(s) => report(s.last().expect("at least the input"), &spec),
        Evolution::Coherent(s) => report_coherent(s.last().expect("at least the input"), &spec),
        Evolution::Oracle { state, .. } => report(state, &spec),
    }
    .map_err(|e| err(e.to_string()))?
    .with_labels(&labels);
    match run.opts.format {
        Format::Text => {
            let _ = writeln!(stdout, "backend: {}", run.backend_for(&bc).name());
            stdout.push_str(&report_text(&rep));
        }
        Format::Json => {
            let mut v = serde_json::to_value(&rep).expect("reports serialize");
            v["backend"] = json!(run.backend_for(&bc).name());
            emit_json(stdout, &v);
        }
    }
    Ok(EXIT_OK)
}

struct Comparison {
    name: String,
    n_max: u32,
    dimension: usize,
    truncation_tail: f64,
    deviation: f64,
}

fn compare_circuit(
    name: String,
    bc: &BoundCircuit,
    opts: &CommonArgs,
    settings: &Settings,
) -> Result<Comparison, String> {
    let photons = bc.photon_count() > 0;
    if photons && bc.has_coherent() {
        return Err("oracle comparison needs photon sources or coherent sources, not both".into());
    }
    let run = oracle_simulate(bc, &oracle_config(opts, settings)).map_err(|e| e.to_string())?;
    let sim = sim_options(opts);
    let deviation = if bc.has_coherent() {
        let cs = run_coherent(bc, &sim).map_err(|e| e.to_string())?;
        compare_coherent(cs.last().expect("at least the input"), &run.state)
    } else {
        let fs = run_fock(bc, &sim).map_err(|e| e.to_string())?;
        compare(fs.last().expect("at least the input"), &run.state)
    }
    .map_err(|e| e.to_string())?;
    Ok(Comparison {
        name,
        n_max: run.n_max,
        dimension: run.state.dim(),
        truncation_tail: run.truncation_tail,
        deviation,
    })
}

fn oracle(
    file: Option<&Path>,
    opts: &CommonArgs,
    random: Option<usize>,
    seed: u64,
    settings: &Settings,
    stdout: &mut String,
    stderr: &mut String,
) -> Result<i32, CliError> {
    let mut jobs: Vec<(String, BoundCircuit)> = Vec::new();
    match (file, random) {
        (Some(_), Some(_)) => {
            return Err(CliError::Runtime(
                "give either a circuit file or --random, not both".into(),
            ))
        }
        (None, None) => return Err(CliError::Runtime("oracle needs a circuit file or --random N".into())),
        (Some(f), None) => jobs.push((f.display().to_string(), load_bound(f, opts)?)),
        (None, Some(n)) => {
            for (i, c) in seeded_circuits(seed, n, &RandomCircuitOptions::default())
                .iter()
                .enumerate()
            {
                let bc = bind(c, &ParamEnv::new()).expect("random circuits bind without parameters");
                jobs.push((format!("random-{seed}-{i}"), bc));
            }
        }
    }

    let single = random.is_none();
    let mut results = Vec::new();
    for (name, bc) in &jobs {
        match compare_circuit(name.clone(), bc, opts, settings) {
            Ok(c) => results.push(c),
            Err(e) if single => return Err(runtime(&PathBuf::from(name))(e)),
            Err(e) => {
                let _ = writeln!(stderr, "{name}: {e}");
                results.push(Comparison {
                    name: name.clone(),
                    n_max: 0,
                    dimension: 0,
                    truncation_tail: 0.0,
                    deviation: f64::INFINITY,
                });
            }
        }
    }
    let passed = results.iter().filter(|r| r.deviation < AGREEMENT_TOL).count();
    let total = results.len();
    match opts.format {
        Format::Text => {
            for r in &results {
                let verdict = if r.deviation < AGREEMENT_TOL { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    stdout,
                    "{}: n_max={} dimension={} max deviation {:.3e} {verdict}",
                    r.name, r.n_max, r.dimension, r.deviation
                );
                if r.truncation_tail > 0.0 {
                    let _ = writeln!(
                        stdout,
                        "  truncation tail {:.3e} (compared below the truncation)",
                        r.truncation_tail
                    );
                }
            }
            let _ = writeln!(stdout, "{passed}/{total} PASS (tolerance {AGREEMENT_TOL:e})");
        }
        Format::Json => {
            let rows: Vec<Value> = results
                .iter()
                .map(|r| {
                    json!({
                        "circuit": r.name,
                        "n_max": r.n_max,
                        "dimension": r.dimension,
                        "truncation_tail": r.truncation_tail,
                        // infinity (a failed run) has no JSON form
                        "deviation": if r.deviation.is_finite() { json!(r.deviation) } else { Value::Null },
                        "pass": r.deviation < AGREEMENT_TOL,
                    })
                })
                .collect();
            emit_json(
                stdout,
                &json!({ "results": rows, "passed": passed, "total": total, "tolerance": AGREEMENT_TOL }),
            );
        }
    }
    Ok(if passed == total { EXIT_OK } else { EXIT_RUNTIME })
}
