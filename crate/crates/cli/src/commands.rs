use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use phi4_core::gates::{
    calibrate_entangling, calibrate_x_gate, design_entangling_schedule, entangling_check, write_calibrations, z_gate_beta,
    PhaseConvention,
};
use phi4_core::passage::{check_parameters, propagate_sweep_traced, rescaled_sweep, scale_parameters, write_trace_csv};
use phi4_core::pipeline::{
    compile, decision, estimate_resources, hadamard_test, ideal_unitary, insert_swaps, read_fields, simulate_schedule, write_fields,
    CompileConfig, CompiledFields, Decision, FieldFormat, ModelLevel, Part, ResourceEstimate, ResourcePrefactors,
};
use phi4_core::schrodinger::{default_grid, exact_energies, solve_bound_states, Grid};
use phi4_core::spectrum::spectrum_sweep;
use phi4_core::{
    ChirpSource, Complex64, Frame, LogicalCircuit, PotentialSpec, TwoLevelSweep, TwoQubitSchedule, UnitsConvention,
};

use crate::output::{Cell, Format, Report, Table};
use crate::{
    CalibrateGate, Cli, Command, ConventionArg, EigensolveArgs, Failure, FrameArg, HadamardArgs, Kind, Outcome, PartArg, PassageArgs,
    ResourceArgs, SpectrumArgs, Units, VerifyArgs,
};

type Result<T> = std::result::Result<T, Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Invalid(msg.into())
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn config<T: DeserializeOwned>(cli: &Cli) -> Result<Option<T>> {
    cli.config.as_deref().map(read_json).transpose()
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Artifact path under `--out`, which must be given.
fn artifact(cli: &Cli, name: &str) -> Result<std::path::PathBuf> {
    let dir = cli.out.as_ref().ok_or_else(|| invalid(format!("writing {name} needs --out")))?;
    std::fs::create_dir_all(dir)?;
    Ok(dir.join(name))
}

fn load_circuit(path: &Path) -> Result<LogicalCircuit> {
    let c: LogicalCircuit = read_json(path)?;
    c.validate()?;
    Ok(c)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Eigensolve(a) => eigensolve(cli, a).map(Into::into),
        Command::Passage(a) => passage(cli, a).map(Into::into),
        Command::Spectrum(a) => spectrum(cli, a).map(Into::into),
        Command::Calibrate { gate } => calibrate(cli, gate).map(Into::into),
        Command::Compile(a) => compile_circuit(cli, &a.circuit).map(Into::into),
        Command::Verify(a) => verify(cli, a),
        Command::Hadamard(a) => hadamard(cli, a),
        Command::EstimateResources(a) => resources(cli, a).map(Into::into),
    }
}

fn potential(cli: &Cli, a: &EigensolveArgs) -> Result<PotentialSpec> {
    if let Some(p) = config::<PotentialSpec>(cli)? {
        p.validate()?;
        return Ok(p);
    }
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| invalid(format!("--{name} is required for this potential")));
    let units = match a.units {
        Units::Natural => UnitsConvention::Natural { mass: a.mass },
        Units::HbarTwoMassOne => UnitsConvention::HbarTwoMassOne,
        Units::HbarMassOne => UnitsConvention::HbarMassOne,
    };
    Ok(match a.kind.ok_or_else(|| invalid("give --kind or a --config potential"))? {
        Kind::PoschlTeller => PotentialSpec::poschl_teller(need(a.alpha, "alpha")?, need(a.lambda, "lambda")?, units)?,
        Kind::Qes => PotentialSpec::qes(need(a.g, "g")?, need(a.b, "b")?)?,
        Kind::SquareBarrier => PotentialSpec::square_barrier(need(a.height, "height")?, need(a.width, "width")?, a.mass)?,
    })
}

fn eigensolve(cli: &Cli, a: &EigensolveArgs) -> Result<Report> {
    let p = potential(cli, a)?;
    let base = default_grid(&p, a.states)?;
    let grid = match a.points {
        Some(n) => Grid::new(base.x_min, base.x_max, n)?,
        None => base,
    };
    let sol = solve_bound_states(&p, &grid, a.states)?;
    let exact = exact_energies(&p).ok();
    let parity: Vec<f64> = (0..sol.energies.len()).map(|k| sol.parity(k)).collect();
    let mut table = Table::new(&["state", "energy", "exact", "parity"]);
    for (k, e) in sol.energies.iter().enumerate() {
        let x = exact.as_ref().and_then(|v| v.get(k)).map_or(Cell::Text(String::new()), |v| Cell::Num(*v));
        table.push(vec![k.into(), (*e).into(), x, parity[k].into()]);
    }
    if a.wavefunctions {
        let mut t = Table::new(&["x"]);
        t.columns.extend((0..sol.energies.len()).map(|k| format!("psi_{k}")));
        for (i, x) in grid.points().into_iter().enumerate() {
            let mut row = vec![Cell::Num(x)];
            row.extend(sol.wavefunctions.iter().map(|w| Cell::Num(w[i])));
            t.push(row);
        }
        t.write(BufWriter::new(File::create(artifact(cli, "wavefunctions.csv")?)?))?;
    }
    Ok(Report {
        name: "eigensolve",
        json: json!({
            "potential": to_json(&p),
            "grid": to_json(&grid),
            "energies": sol.energies,
            "exact": exact,
            "parity": parity,
        }),
        table,
    })
}

fn passage(cli: &Cli, a: &PassageArgs) -> Result<Report> {
    let omega0 = a.omega0.unwrap_or(1.0);
    let (sweep, conditions) = if let Some(eps) = a.epsilon {
        let p = scale_parameters(eps)?.prep(omega0, 1.0);
        (rescaled_sweep(&p, a.max_duration)?, Some(check_parameters(&p, eps, 1.0)?))
    } else {
        let base: Option<TwoLevelSweep> = config(cli)?;
        let pick = |flag: Option<f64>, from: Option<f64>, name: &str| {
            flag.or(from).ok_or_else(|| invalid(format!("--{name} is required without --epsilon or --config")))
        };
        let mut s = TwoLevelSweep::new(
            a.omega0.or(base.map(|b| b.omega0)).unwrap_or(1.0),
            pick(a.rabi, base.map(|b| b.rabi), "rabi")?,
            pick(a.bandwidth, base.map(|b| b.bandwidth), "bandwidth")?,
            pick(a.duration, base.map(|b| b.duration), "duration")?,
        )?;
        s.diagonal_rabi = base.map_or(0.0, |b| b.diagonal_rabi);
        s.validate()?;
        (s, None)
    };
    let frame = match a.frame {
        FrameArg::Lab => Frame::Lab,
        FrameArg::Rwa => Frame::Rwa,
    };
    let (result, trace) = propagate_sweep_traced(&sweep, frame, a.trace)?;
    if a.trace > 0 {
        write_trace_csv(&trace, BufWriter::new(File::create(artifact(cli, "trace.csv")?)?))?;
    }
    let bound = sweep.rwa_bound();
    let mut pairs: Vec<(&str, Cell)> = vec![
        ("omega0", sweep.omega0.into()),
        ("rabi", sweep.rabi.into()),
        ("bandwidth", sweep.bandwidth.into()),
        ("duration", sweep.duration.into()),
        ("fidelity", result.fidelity.into()),
        ("norm", result.norm.into()),
        ("rwa_bound", bound.into()),
    ];
    if let Some(c) = &conditions {
        pairs.push(("conditions_pass", c.pass.into()));
    }
    Ok(Report {
        name: "passage",
        json: json!({
            "sweep": to_json(&sweep),
            "result": to_json(&result),
            "rwa_bound": bound,
            "conditions": conditions.as_ref().map(to_json),
        }),
        table: Table::fields(pairs),
    })
}

fn spectrum(cli: &Cli, a: &SpectrumArgs) -> Result<Report> {
    let source = match config::<ChirpSource>(cli)? {
        Some(s) => {
            s.validate()?;
            s
        }
        None => {
            let need = |v: Option<f64>, name: &str| v.ok_or_else(|| invalid(format!("--{name} is required without --config")));
            ChirpSource::new(a.omega0.unwrap_or(0.0), need(a.bandwidth, "bandwidth")?, need(a.duration, "duration")?)?
        }
    };
    if a.points < 2 {
        return Err(invalid("--points must be at least 2"));
    }
    let b = source.bandwidth();
    let lo = a.from.unwrap_or(source.omega0 - 1.5 * b);
    let hi = a.to.unwrap_or(source.omega0 + 1.5 * b);
    let omegas: Vec<f64> = (0..a.points).map(|i| lo + (hi - lo) * i as f64 / (a.points - 1) as f64).collect();
    let samples = spectrum_sweep(&source, &omegas)?;
    let mut table = Table::new(&["omega", "re", "im", "power", "bound"]);
    for s in &samples {
        table.push(vec![s.omega.into(), s.value.re.into(), s.value.im.into(), s.power.into(), s.bound.into()]);
    }
    Ok(Report {
        name: "spectrum",
        json: json!({ "source": to_json(&source), "energy": source.energy(), "samples": to_json(&samples) }),
        table,
    })
}

fn calibrate(cli: &Cli, gate: &CalibrateGate) -> Result<Report> {
    let (record, detail) = match *gate {
        CalibrateGate::X { g, beta, target, convention } => {
            let convention = match convention {
                ConventionArg::IncludeIdle => PhaseConvention::IncludeIdle,
                ConventionArg::ExcludeIdle => PhaseConvention::ExcludeIdle,
            };
            let cal = calibrate_x_gate(g, beta, target, convention)?;
            (cal.record(), to_json(&cal))
        }
        CalibrateGate::Z { theta, lambda, tau, alpha0 } => {
            let z = z_gate_beta(theta, lambda, tau, alpha0)?;
            (z.record(), to_json(&z))
        }
        CalibrateGate::Entangling { b, c, d, alpha, beta, duration, z_min } => {
            let schedule = match alpha {
                Some(alpha) => design_entangling_schedule(alpha, beta.unwrap_or(0.0), b, duration, z_min)?,
                None => TwoQubitSchedule::bump(b, c.unwrap_or(0.0), d.unwrap_or(0.0), duration)?,
            };
            let gate = calibrate_entangling(&schedule, z_min)?;
            let detail = json!({
                "closure": to_json(&gate.closure),
                "duration": gate.schedule.total_duration(),
                "alpha": gate.logical.alpha,
                "beta": gate.logical.beta,
                "leakage": gate.logical.leakage,
                "unitarity_error": gate.propagation.unitarity_error,
                "entangling": entangling_check(gate.logical.alpha, gate.logical.beta),
            });
            (gate.record(), detail)
        }
    };
    if cli.out.is_some() {
        write_calibrations(std::slice::from_ref(&record), BufWriter::new(File::create(artifact(cli, "calibrations.json")?)?))?;
    }
    let mut pairs: Vec<(&str, Cell)> = vec![
        ("gate", format!("{:?}", record.gate).to_lowercase().into()),
        ("parameter", record.parameter.clone().into()),
        ("value", record.value.into()),
        ("residual", record.residual.into()),
        ("infidelity", record.infidelity.into()),
    ];
    let phase_names = ["phase_0", "phase_1", "phase_2", "phase_3"];
    for (name, p) in phase_names.iter().zip(&record.phases) {
        pairs.push((name, (*p).into()));
    }
    Ok(Report {
        name: "calibrate",
        json: json!({ "record": to_json(&record), "detail": detail }),
        table: Table::fields(pairs),
    })
}

fn compile_config(cli: &Cli) -> Result<CompileConfig> {
    Ok(config::<CompileConfig>(cli)?.unwrap_or_default())
}

fn compile_path(cli: &Cli, path: &Path) -> Result<CompiledFields> {
    let circuit = insert_swaps(&load_circuit(path)?)?;
    Ok(compile(&circuit, &compile_config(cli)?)?)
}

fn resource_pairs(r: &ResourceEstimate) -> Vec<(&'static str, Cell)> {
    vec![
        ("n_qubits", r.n_qubits.into()),
        ("gates", r.gates.into()),
        ("depth", r.depth.into()),
        ("lambda", r.lambda.into()),
        ("prep_time_scale", r.prep_time_scale.into()),
        ("gate_time_scale", r.gate_time_scale.into()),
        ("total_time_scale", r.total_time_scale.into()),
        ("volume_scale", r.volume_scale.into()),
        ("bit_count_scale", r.bit_count_scale.into()),
        ("total_time", r.total_time.into()),
        ("volume", r.volume.into()),
        ("time_samples", r.time_samples.into()),
        ("space_samples", r.space_samples.into()),
        ("samples", r.samples.into()),
        ("bits", r.bits.into()),
    ]
}

fn compile_circuit(cli: &Cli, path: &Path) -> Result<Report> {
    let f = compile_path(cli, path)?;
    let header = match &cli.out {
        Some(dir) => {
            let format = match cli.format {
                Format::Json => FieldFormat::Binary,
                Format::Csv => FieldFormat::Csv,
            };
            Some(write_fields(&f, dir, "fields", format)?.display().to_string())
        }
        None => None,
    };
    let mut pairs = vec![("config_hash", Cell::from(f.config_hash.clone())), ("epsilon", f.epsilon.into())];
    pairs.extend(resource_pairs(&f.resources));
    Ok(Report {
        name: "compile",
        json: json!({
            "config_hash": f.config_hash,
            "circuit": to_json(&f.circuit),
            "native_gates": f.native.len(),
            "epsilon": f.epsilon,
            "grid": to_json(&f.grid),
            "layout": to_json(&f.layout),
            "prep": to_json(&f.prep),
            "windows": to_json(&f.windows),
            "resources": to_json(&f.resources),
            "fields_header": header,
        }),
        table: Table::fields(pairs),
    })
}

fn decision_label(d: Decision) -> &'static str {
    match d {
        Decision::AboveTwoThirds => "above_two_thirds",
        Decision::BelowOneThird => "below_one_third",
        Decision::PromiseViolated => "promise_violated",
    }
}

fn verify(cli: &Cli, a: &VerifyArgs) -> Result<Outcome> {
    let compiled = match (&a.circuit, &a.fields) {
        (Some(c), _) => compile_path(cli, c)?,
        (None, Some(h)) => read_fields(h)?.0.compiled,
        (None, None) => return Err(invalid("give --circuit or --fields")),
    };
    let level = if a.ideal { ModelLevel::Ideal } else { ModelLevel::GateModels };
    let r = simulate_schedule(&compiled, level)?;
    let ideal = ideal_unitary(&compiled.circuit)?[(0, 0)].norm_sqr();
    let deviation = (r.vacuum_return_probability - ideal).abs();
    let d = decision(r.vacuum_return_probability.clamp(0.0, 1.0))?;
    let table = Table::fields(vec![
        ("vacuum_return_probability", r.vacuum_return_probability.into()),
        ("ideal_probability", ideal.into()),
        ("deviation", deviation.into()),
        ("infidelity_budget", r.infidelity_budget.into()),
        ("total_infidelity", r.total_infidelity.into()),
        ("prep_fidelity", r.prep_fidelity.into()),
        ("reverse_fidelity", r.reverse_fidelity.into()),
        ("decision", decision_label(d.decision).into()),
    ]);
    Ok(Outcome {
        report: Report {
            name: "verify",
            json: json!({
                "simulation": to_json(&r),
                "ideal_probability": ideal,
                "deviation": deviation,
                "within_budget": deviation <= r.infidelity_budget,
                "decision": to_json(&d),
            }),
            table,
        },
        promise_violated: d.decision == Decision::PromiseViolated,
    })
}

fn hadamard(cli: &Cli, a: &HadamardArgs) -> Result<Outcome> {
    let circuit = load_circuit(&a.circuit)?;
    let u = ideal_unitary(&circuit)?;
    let mut psi = vec![Complex64::new(0.0, 0.0); u.nrows()];
    psi[0] = Complex64::new(1.0, 0.0);
    let part = match a.part {
        PartArg::Re => Part::Re,
        PartArg::Im => Part::Im,
    };
    let shot = hadamard_test(&u, &psi, part, a.shots, cli.seed)?;
    let exact = match part {
        Part::Re => u[(0, 0)].re,
        Part::Im => u[(0, 0)].im,
    };
    // the control reads 0 with probability (1 + estimate)/2
    let d = decision((0.5 * (1.0 + shot.estimate)).clamp(0.0, 1.0))?;
    let table = Table::fields(vec![
        ("estimate", shot.estimate.into()),
        ("standard_error", shot.standard_error.into()),
        ("exact", exact.into()),
        ("p0", shot.p0.into()),
        ("shots", shot.shots.into()),
        ("seed", shot.seed.into()),
        ("decision", decision_label(d.decision).into()),
    ]);
    Ok(Outcome {
        report: Report {
            name: "hadamard",
            json: json!({ "shot": to_json(&shot), "exact": exact, "decision": to_json(&d) }),
            table,
        },
        promise_violated: d.decision == Decision::PromiseViolated,
    })
}

fn resources(cli: &Cli, a: &ResourceArgs) -> Result<Report> {
    let k: ResourcePrefactors = config(cli)?.unwrap_or_default();
    let r = estimate_resources(a.qubits, a.gates, a.depth, &k)?;
    Ok(Report {
        name: "estimate-resources",
        json: to_json(&r),
        table: Table::fields(resource_pairs(&r)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decision_labels_match_serde_names() {
        for d in [Decision::AboveTwoThirds, Decision::BelowOneThird, Decision::PromiseViolated] {
            assert_eq!(to_json(&d), Value::String(decision_label(d).into()));
        }
    }
}
