use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::adiabatic::CMatrix;
use crate::error::{invalid, Error, Result};
use crate::gates::ideal_entangling;

pub const MAX_QUBITS: usize = 12;

/// One logical gate. Qubit 0 is the most significant bit of a basis index;
/// two-qubit gates act on |q₀ q₁⟩ in the order given.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum GateSpec {
    /// exp(−iθX/2).
    Xrot { qubit: usize, theta: f64 },
    /// exp(−iθZ/2).
    Zrot { qubit: usize, theta: f64 },
    /// diag(1, e^{iβ}, e^{iα}, 1).
    Entangling { qubits: [usize; 2], alpha: f64, beta: f64 },
    Swap { qubits: [usize; 2] },
}

impl GateSpec {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            GateSpec::Xrot { qubit, .. } | GateSpec::Zrot { qubit, .. } => vec![qubit],
            GateSpec::Entangling { qubits, .. } | GateSpec::Swap { qubits } => qubits.to_vec(),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, GateSpec::Entangling { .. } | GateSpec::Swap { .. })
    }

    pub fn is_adjacent(&self) -> bool {
        match *self {
            GateSpec::Entangling { qubits, .. } | GateSpec::Swap { qubits } => qubits[0].abs_diff(qubits[1]) == 1,
            _ => true,
        }
    }

    /// Ideal 2×2 or 4×4 matrix on `qubits()`.
    pub fn matrix(&self) -> CMatrix {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match *self {
            GateSpec::Xrot { theta, .. } => {
                let (s, co) = (0.5 * theta).sin_cos();
                CMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)])
            }
            GateSpec::Zrot { theta, .. } => CMatrix::from_row_slice(
                2,
                2,
                &[Complex64::from_polar(1.0, -0.5 * theta), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, 0.5 * theta)],
            ),
            GateSpec::Entangling { alpha, beta, .. } => ideal_entangling(alpha, beta),
            GateSpec::Swap { .. } => {
                let mut m = CMatrix::zeros(4, 4);
                for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
                    m[(i, j)] = c(1.0, 0.0);
                }
                m
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogicalCircuit {
    pub n_qubits: usize,
    pub gates: Vec<GateSpec>,
}

impl LogicalCircuit {
    pub fn new(n_qubits: usize, gates: Vec<GateSpec>) -> Result<Self> {
        let c = Self { n_qubits, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 {
            return Err(invalid("circuit needs at least one qubit"));
        }
        for (k, g) in self.gates.iter().enumerate() {
            let q = g.qubits();
            if q.iter().any(|&i| i >= self.n_qubits) {
                return Err(invalid(format!("gate {k} addresses a qubit outside 0..{}", self.n_qubits)));
            }
            if q.len() == 2 && q[0] == q[1] {
                return Err(invalid(format!("gate {k} acts twice on qubit {}", q[0])));
            }
            let finite = match *g {
                GateSpec::Xrot { theta, .. } | GateSpec::Zrot { theta, .. } => theta.is_finite(),
                GateSpec::Entangling { alpha, beta, .. } => alpha.is_finite() && beta.is_finite(),
                GateSpec::Swap { .. } => true,
            };
            if !finite {
                return Err(invalid(format!("gate {k} has a non-finite angle")));
            }
        }
        Ok(())
    }

    pub fn is_nearest_neighbor(&self) -> bool {
        self.gates.iter().all(GateSpec::is_adjacent)
    }

    /// Number of layers under greedy as-soon-as-possible scheduling.
    pub fn depth(&self) -> usize {
        let mut busy = vec![0usize; self.n_qubits];
        for g in &self.gates {
            let q = g.qubits();
            let layer = q.iter().map(|&i| busy[i]).max().unwrap_or(0) + 1;
            for i in q {
                busy[i] = layer;
            }
        }
        busy.into_iter().max().unwrap_or(0)
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }
}

/// Route every non-adjacent two-qubit gate through a chain of adjacent swaps
/// that moves the second qubit next to the first and back afterwards.
pub fn insert_swaps(circuit: &LogicalCircuit) -> Result<LogicalCircuit> {
    circuit.validate()?;
    let mut out = Vec::with_capacity(circuit.gates.len());
    for g in &circuit.gates {
        if g.is_adjacent() {
            out.push(*g);
            continue;
        }
        let [a, b] = match *g {
            GateSpec::Entangling { qubits, .. } | GateSpec::Swap { qubits } => qubits,
            _ => unreachable!("single-qubit gates are adjacent"),
        };
        // walk b toward a; it ends next to a on the same side
        let step: isize = if b > a { -1 } else { 1 };
        let stop = (a as isize - step) as usize;
        let mut chain = Vec::new();
        let mut pos = b;
        while pos != stop {
            let next = (pos as isize + step) as usize;
            chain.push(GateSpec::Swap { qubits: [pos.min(next), pos.max(next)] });
            pos = next;
        }
        out.extend(chain.iter().copied());
        out.push(match *g {
            GateSpec::Entangling { alpha, beta, .. } => GateSpec::Entangling { qubits: [a, stop], alpha, beta },
            GateSpec::Swap { .. } => GateSpec::Swap { qubits: [a.min(stop), a.max(stop)] },
            _ => unreachable!(),
        });
        out.extend(chain.iter().rev().copied());
    }
    LogicalCircuit::new(circuit.n_qubits, out)
}

/// Apply a 2×2 or 4×4 `gate` on `qubits` to an n-qubit state vector.
pub fn apply_gate(state: &mut [Complex64], n_qubits: usize, qubits: &[usize], gate: &CMatrix) -> Result<()> {
    let dim = 1usize << n_qubits;
    if state.len() != dim {
        return Err(Error::DimensionMismatch(state.len(), dim));
    }
    let k = qubits.len();
    if gate.nrows() != 1 << k || gate.ncols() != 1 << k {
        return Err(Error::DimensionMismatch(gate.nrows(), 1 << k));
    }
    let bits: Vec<usize> = qubits.iter().map(|&q| n_qubits - 1 - q).collect();
    let mask: usize = bits.iter().map(|b| 1usize << b).sum();
    let mut local = vec![Complex64::new(0.0, 0.0); 1 << k];
    for base in 0..dim {
        if base & mask != 0 {
            continue;
        }
        let index = |sub: usize| -> usize {
            // sub's most significant bit addresses qubits[0]
            (0..k).fold(base, |acc, j| if sub >> (k - 1 - j) & 1 == 1 { acc | 1 << bits[j] } else { acc })
        };
        for (sub, slot) in local.iter_mut().enumerate() {
            *slot = state[index(sub)];
        }
        for r in 0..1 << k {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, v) in local.iter().enumerate() {
                acc += gate[(r, c)] * v;
            }
            state[index(r)] = acc;
        }
    }
    Ok(())
}

/// Dense 2ⁿ×2ⁿ product of the ideal gate matrices.
pub fn ideal_unitary(circuit: &LogicalCircuit) -> Result<CMatrix> {
    circuit.validate()?;
    if circuit.n_qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits(circuit.n_qubits));
    }
    let ops: Vec<(Vec<usize>, CMatrix)> = circuit.gates.iter().map(|g| (g.qubits(), g.matrix())).collect();
    compose(circuit.n_qubits, &ops)
}

/// U = ops[last]···ops[0] as a dense matrix, built column by column.
pub fn compose(n_qubits: usize, ops: &[(Vec<usize>, CMatrix)]) -> Result<CMatrix> {
    let dim = 1usize << n_qubits;
    let mut u = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    let mut col = vec![Complex64::new(0.0, 0.0); dim];
    for j in 0..dim {
        col.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        col[j] = Complex64::new(1.0, 0.0);
        for (q, m) in ops {
            apply_gate(&mut col, n_qubits, q, m)?;
        }
        u.set_column(j, &nalgebra::DVector::from_column_slice(&col));
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = LogicalCircuit::new(3, vec![]).unwrap();
        let u = ideal_unitary(&c).unwrap();
        assert_eq!(u, CMatrix::identity(8, 8));
        assert_eq!(c.depth(), 0);
    }

    #[test]
    fn half_rotations_compose() {
        let half = GateSpec::Xrot { qubit: 0, theta: std::f64::consts::FRAC_PI_2 };
        let two = ideal_unitary(&LogicalCircuit::new(1, vec![half, half]).unwrap()).unwrap();
        let full = ideal_unitary(&LogicalCircuit::new(1, vec![GateSpec::Xrot { qubit: 0, theta: std::f64::consts::PI }]).unwrap()).unwrap();
        assert!(close(&two, &full) < 1e-15);
    }

    #[test]
    fn entangling_creates_schmidt_rank_two() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = vec![Complex64::new(0.5, 0.0); 4];
        let g = GateSpec::Entangling { qubits: [0, 1], alpha: std::f64::consts::PI, beta: 0.0 };
        apply_gate(&mut psi, 2, &[0, 1], &g.matrix()).unwrap();
        let m = CMatrix::from_row_slice(2, 2, &psi);
        let sv = m.svd(false, false).singular_values;
        assert!((sv[0] - h).abs() < 1e-12 && (sv[1] - h).abs() < 1e-12);
    }

    #[test]
    fn qubit_order_in_basis_index() {
        let c = LogicalCircuit::new(2, vec![GateSpec::Xrot { qubit: 0, theta: std::f64::consts::PI }]).unwrap();
        let u = ideal_unitary(&c).unwrap();
        // |00⟩ → −i|10⟩
        assert!((u[(2, 0)] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn adjacent_circuit_unchanged() {
        let c = LogicalCircuit::new(
            3,
            vec![
                GateSpec::Entangling { qubits: [1, 2], alpha: 0.3, beta: 0.1 },
                GateSpec::Swap { qubits: [0, 1] },
            ],
        )
        .unwrap();
        assert_eq!(insert_swaps(&c).unwrap(), c);
    }

    #[test]
    fn routed_gate_preserves_unitary() {
        for qubits in [[0, 3], [3, 0], [1, 3]] {
            let c = LogicalCircuit::new(
                4,
                vec![
                    GateSpec::Xrot { qubit: 0, theta: 0.7 },
                    GateSpec::Entangling { qubits, alpha: 1.1, beta: -0.4 },
                    GateSpec::Zrot { qubit: 3, theta: 0.2 },
                ],
            )
            .unwrap();
            let routed = insert_swaps(&c).unwrap();
            assert!(routed.is_nearest_neighbor());
            let diff = close(&ideal_unitary(&c).unwrap(), &ideal_unitary(&routed).unwrap());
            assert!(diff < 1e-13, "{qubits:?}: {diff}");
        }
    }

    #[test]
    fn too_many_qubits() {
        let c = LogicalCircuit::new(13, vec![]).unwrap();
        assert!(matches!(ideal_unitary(&c), Err(Error::TooManyQubits(13))));
    }
}
