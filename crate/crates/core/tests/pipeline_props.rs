use std::f64::consts::PI;

use proptest::prelude::*;

use phi4_core::pipeline::{
    compile, hadamard_test, ideal_unitary, insert_swaps, read_fields, simulate_schedule, write_fields, CompileConfig, FieldFormat,
    ModelLevel, Part,
};
use phi4_core::{Complex64, GateSpec, LogicalCircuit};

fn gate(n: usize) -> impl Strategy<Value = GateSpec> {
    let pair = (0..n, 1..n).prop_map(move |(a, k)| [a, (a + k) % n]);
    prop_oneof![
        (0..n, -PI..PI).prop_map(|(qubit, theta)| GateSpec::Xrot { qubit, theta }),
        (0..n, -PI..PI).prop_map(|(qubit, theta)| GateSpec::Zrot { qubit, theta }),
        (pair.clone(), -PI..PI, -PI..PI).prop_map(|(qubits, alpha, beta)| GateSpec::Entangling { qubits, alpha, beta }),
        pair.prop_map(|q| GateSpec::Swap { qubits: [q[0].min(q[1]), q[0].max(q[1])] }),
    ]
}

fn circuit(max_qubits: usize, max_gates: usize) -> impl Strategy<Value = LogicalCircuit> {
    (2..=max_qubits)
        .prop_flat_map(move |n| (Just(n), prop::collection::vec(gate(n), 0..=max_gates)))
        .prop_map(|(n, gates)| LogicalCircuit::new(n, gates).unwrap())
}

/// ‖U − e^{iφ}V‖ entrywise max with φ = arg tr(V†U).
fn phase_distance(u: &phi4_core::adiabatic::CMatrix, v: &phi4_core::adiabatic::CMatrix) -> f64 {
    let tr = (v.adjoint() * u).trace();
    let phase = tr / tr.norm();
    (u - v * phase).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn swap_insertion_preserves_the_unitary(c in circuit(5, 10)) {
        let routed = insert_swaps(&c).unwrap();
        prop_assert!(routed.is_nearest_neighbor());
        let d = phase_distance(&ideal_unitary(&routed).unwrap(), &ideal_unitary(&c).unwrap());
        prop_assert!(d < 1e-12, "{d}");
        // each routed gate becomes at most 2(n − 2) swaps plus itself
        prop_assert!(routed.gates.len() <= c.gates.len() * (2 * c.n_qubits - 3));
        prop_assert!(routed.depth() <= routed.gates.len());
    }

    #[test]
    fn hadamard_test_is_deterministic(seed in any::<u64>(), shots in 1u64..5000, phi in -PI..PI) {
        let u = phi4_core::adiabatic::CMatrix::identity(2, 2) * Complex64::from_polar(1.0, phi);
        let psi = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        for part in [Part::Re, Part::Im] {
            let a = hadamard_test(&u, &psi, part, shots, seed).unwrap();
            let b = hadamard_test(&u, &psi, part, shots, seed).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert!((-1.0..=1.0).contains(&a.estimate));
            prop_assert!(a.standard_error <= 1.0 / (shots as f64).sqrt());
        }
    }
}

fn quick() -> CompileConfig {
    CompileConfig {
        epsilon: Some(0.8),
        oversampling: 1.0,
        ..CompileConfig::default()
    }
}

proptest! {
    #![proptest_config(config(4))]

    #[test]
    fn fields_switch_off_at_the_ends(c in circuit(3, 4)) {
        let f = compile(&insert_swaps(&c).unwrap(), &quick()).unwrap();
        let last = f.grid.time_samples - 1;
        for k in [0, last] {
            prop_assert!(f.j1_row(k).iter().chain(f.j2_row(k).iter()).all(|v| v.abs() < 1e-12), "row {k}");
        }
        // spatial edges of the volume stay dark at every time
        for k in 0..f.grid.time_samples {
            for row in [f.j1_row(k), f.j2_row(k)] {
                prop_assert!(row[0].abs() < 1e-12 && row[row.len() - 1].abs() < 1e-12, "row {k}");
            }
        }
    }

    #[test]
    fn field_files_round_trip(c in circuit(3, 4), csv in any::<bool>()) {
        let f = compile(&insert_swaps(&c).unwrap(), &quick()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let format = if csv { FieldFormat::Csv } else { FieldFormat::Binary };
        let path = write_fields(&f, dir.path(), "fields", format).unwrap();
        let (header, data) = read_fields(&path).unwrap();
        prop_assert_eq!(&header.compiled, &f);
        for k in 0..f.grid.time_samples {
            let (a, b) = (f.j1_row(k), f.j2_row(k));
            for i in 0..f.grid.space_samples {
                prop_assert_eq!(data.j1_at(k, i).to_bits(), a[i].to_bits());
                prop_assert_eq!(data.j2_at(k, i).to_bits(), b[i].to_bits());
            }
        }
    }

    #[test]
    fn infidelity_adds_up(c in circuit(3, 4)) {
        let f = compile(&insert_swaps(&c).unwrap(), &CompileConfig::default()).unwrap();
        let r = simulate_schedule(&f, ModelLevel::GateModels).unwrap();
        let n = f.circuit.n_qubits as f64;
        let prep = 1.0 - r.prep_fidelity * r.reverse_fidelity;
        let gate = r.windows.iter().map(|w| w.infidelity).fold(0.0, f64::max);
        prop_assert!(r.total_infidelity <= n * prep + r.windows.len() as f64 * gate + 1e-15);
        let p = ideal_unitary(&f.circuit).unwrap()[(0, 0)].norm_sqr();
        prop_assert!((r.vacuum_return_probability - p).abs() <= r.infidelity_budget);
    }
}

#[test]
fn volume_grows_no_faster_than_n_log_n() {
    let volume = |n: usize| compile(&LogicalCircuit::new(n, vec![]).unwrap(), &quick()).unwrap().resources.volume;
    let v: Vec<(f64, f64)> = [2usize, 4, 8].iter().map(|&n| (n as f64, volume(n))).collect();
    let c = v[0].1 / (v[0].0 * v[0].0.ln());
    for (n, vol) in &v {
        assert!(*vol > 0.0);
        assert!(*vol <= c * n * n.ln() * (1.0 + 1e-12), "n = {n}: {vol} vs {}", c * n * n.ln());
    }
}
