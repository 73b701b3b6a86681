//! Benchmark fixtures shared by the criterion targets.

use phi4_core::{GateSpec, LogicalCircuit};

/// Nearest-neighbour circuit on `n` qubits with one layer of each gate kind.
pub fn layered_circuit(n: usize) -> LogicalCircuit {
    let mut gates = Vec::new();
    for q in 0..n {
        gates.push(GateSpec::Xrot { qubit: q, theta: 0.3 + 0.1 * q as f64 });
        gates.push(GateSpec::Zrot { qubit: q, theta: -0.2 });
    }
    for q in 0..n.saturating_sub(1) {
        gates.push(GateSpec::Entangling { qubits: [q, q + 1], alpha: 0.5, beta: 0.25 });
    }
    LogicalCircuit::new(n, gates).expect("valid circuit")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layered_circuit_is_nearest_neighbour() {
        let c = layered_circuit(4);
        assert!(c.is_nearest_neighbor());
        assert_eq!(c.gates.len(), 11);
    }
}
