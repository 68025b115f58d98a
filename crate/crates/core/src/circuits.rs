//! Circuit representation and the builders for the diagonalizing network
//! `U_dis = U_Bog · U_FT · U_JW` and the time-evolution layer `U(t)`.
//!
//! Every builder emits two-qubit gates on adjacent wires only.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dense::{check_dense_size, DenseOperator};
use crate::error::{invalid, Error, Result};
use crate::gates::{self, GateKind, GateMatrix};
use crate::statevector::{check_targets, StateVector};
use crate::xymodel::{dispersion, ModeTable, ModelParams};

/// A gate bound to qubit positions.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    pub gate: GateMatrix,
    pub targets: Vec<usize>,
}

impl GateOp {
    pub fn new(gate: GateMatrix, targets: Vec<usize>) -> Self {
        Self { gate, targets }
    }

    pub fn dagger(&self) -> Self {
        Self::new(self.gate.dagger(), self.targets.clone())
    }

    pub fn is_adjacent(&self) -> bool {
        match self.targets.as_slice() {
            [a, b] => a.abs_diff(*b) == 1,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n: usize,
    ops: Vec<GateOp>,
}

/// Gate counts and greedy ASAP depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircuitStats {
    pub n: usize,
    pub total: usize,
    pub one_qubit: usize,
    pub two_qubit: usize,
    pub depth: usize,
    pub two_qubit_depth: usize,
    pub by_name: BTreeMap<String, usize>,
}

impl CircuitStats {
    pub fn count(&self, name: &str) -> usize {
        self.by_name.get(name).copied().unwrap_or(0)
    }
}

#[derive(Serialize, Deserialize)]
struct OpDoc {
    name: String,
    params: Vec<f64>,
    targets: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct CircuitDoc {
    n: usize,
    ops: Vec<OpDoc>,
}

impl Circuit {
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 {
            return invalid("circuit needs at least one qubit");
        }
        Ok(Self { n, ops: Vec::new() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, op: GateOp) -> Result<()> {
        check_targets(self.n, &op.gate, &op.targets)?;
        self.ops.push(op);
        Ok(())
    }

    fn add(&mut self, gate: GateMatrix, targets: &[usize]) -> Result<()> {
        self.push(GateOp::new(gate, targets.to_vec()))
    }

    /// Appends every op of `other`, which must act on the same register.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n != self.n {
            return invalid(format!(
                "cannot append a {}-qubit circuit to a {}-qubit one",
                other.n, self.n
            ));
        }
        self.ops.extend(other.ops.iter().cloned());
        Ok(())
    }

    /// Copy of `other` placed on wires `offset..offset + other.n`.
    fn append_shifted(&mut self, other: &Circuit, offset: usize) -> Result<()> {
        for op in &other.ops {
            let targets = op.targets.iter().map(|t| t + offset).collect();
            self.push(GateOp::new(op.gate.clone(), targets))?;
        }
        Ok(())
    }

    /// Applies the ops in order.
    pub fn run(&self, state: &mut StateVector) -> Result<()> {
        if state.n() != self.n {
            return invalid(format!(
                "{}-qubit circuit on a {}-qubit state",
                self.n,
                state.n()
            ));
        }
        for op in &self.ops {
            state.apply_gate(&op.gate, &op.targets)?;
        }
        Ok(())
    }

    pub fn apply_to(&self, state: &StateVector) -> Result<StateVector> {
        let mut out = state.clone();
        self.run(&mut out)?;
        Ok(out)
    }

    /// Reversed order with every gate conjugate-transposed.
    pub fn dagger(&self) -> Circuit {
        Circuit {
            n: self.n,
            ops: self.ops.iter().rev().map(GateOp::dagger).collect(),
        }
    }

    pub fn to_unitary(&self) -> Result<DenseOperator> {
        check_dense_size(self.n)?;
        let columns = (0..1usize << self.n)
            .map(|idx| {
                let mut s = StateVector::basis_index(self.n, idx)?;
                for op in &self.ops {
                    s.apply_gate_unchecked(&op.gate, &op.targets);
                }
                Ok(s)
            })
            .collect::<Result<Vec<_>>>()?;
        DenseOperator::from_columns(&columns)
    }

    pub fn stats(&self) -> CircuitStats {
        let mut by_name = BTreeMap::new();
        let mut level = vec![0usize; self.n];
        let mut level2 = vec![0usize; self.n];
        let (mut one, mut two) = (0, 0);
        for op in &self.ops {
            *by_name.entry(op.gate.name().to_string()).or_insert(0) += 1;
            let start = op.targets.iter().map(|&t| level[t]).max().unwrap_or(0) + 1;
            for &t in &op.targets {
                level[t] = start;
            }
            if op.targets.len() == 2 {
                two += 1;
                let start2 = op.targets.iter().map(|&t| level2[t]).max().unwrap_or(0) + 1;
                for &t in &op.targets {
                    level2[t] = start2;
                }
            } else {
                one += 1;
            }
        }
        CircuitStats {
            n: self.n,
            total: self.ops.len(),
            one_qubit: one,
            two_qubit: two,
            depth: level.into_iter().max().unwrap_or(0),
            two_qubit_depth: level2.into_iter().max().unwrap_or(0),
            by_name,
        }
    }

    /// Every two-qubit op acts on neighbouring wires.
    pub fn is_linear(&self) -> bool {
        self.ops.iter().all(GateOp::is_adjacent)
    }

    /// Replaces each composite gate by its basic-gate sequence. Elementary
    /// gates pass through.
    pub fn decomposed(&self) -> Result<Circuit> {
        let mut out = Circuit::new(self.n)?;
        for op in &self.ops {
            if op.gate.kind().is_elementary() {
                out.push(op.clone())?;
                continue;
            }
            for local in gates::decompose(&op.gate)? {
                let targets = local.targets.iter().map(|&t| op.targets[t]).collect();
                out.push(GateOp::new(local.gate, targets))?;
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        let ops = self
            .ops
            .iter()
            .map(|op| {
                if matches!(op.gate.kind(), GateKind::Custom { .. }) {
                    return Err(Error::Serialization(format!(
                        "custom gate {} has no name+params form",
                        op.gate.name()
                    )));
                }
                Ok(OpDoc {
                    name: op.gate.name().to_string(),
                    params: op.gate.params(),
                    targets: op.targets.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        serde_json::to_string_pretty(&CircuitDoc { n: self.n, ops })
            .map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        let doc: CircuitDoc =
            serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        let mut circ = Circuit::new(doc.n)?;
        for op in doc.ops {
            let gate = GateMatrix::from_name_params(&op.name, &op.params)?;
            circ.push(GateOp::new(gate, op.targets))?;
        }
        Ok(circ)
    }

    /// For a circuit of swap-type gates only: `out[p]` is the input wire
    /// whose content ends up on wire `p`.
    pub fn wire_permutation(&self) -> Result<Vec<usize>> {
        let mut wires: Vec<usize> = (0..self.n).collect();
        for op in &self.ops {
            match (op.gate.kind(), op.targets.as_slice()) {
                (GateKind::Swap | GateKind::Fswap, &[a, b]) => wires.swap(a, b),
                _ => return invalid(format!("{} is not a wire permutation", op.gate.name())),
            }
        }
        Ok(wires)
    }
}

/// Fourier-mode label carried by a wire: mode `k` of a transform over
/// `size` sites. Sites start as `size = 1, k = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Label {
    size: usize,
    k: usize,
}

/// Momentum label on each output wire, found by pushing labels through the
/// circuit. Fourier gates must receive two equal sub-transform modes of the
/// matching size; swaps permute; every other gate leaves labels alone.
/// Labels above `n/2` are reported as `k − n`.
pub fn track_mode_labels(circuit: &Circuit) -> Result<Vec<i64>> {
    let n = circuit.n;
    let mut labels = vec![Label { size: 1, k: 0 }; n];
    for op in circuit.ops() {
        match (op.gate.kind(), op.targets.as_slice()) {
            (GateKind::Swap | GateKind::Fswap, &[a, b]) => labels.swap(a, b),
            (&GateKind::Fourier { n: m, k }, &[a, b]) => {
                let want = Label {
                    size: m / 2,
                    k: k % (m / 2).max(1),
                };
                if labels[a] != want || labels[b] != want {
                    return invalid(format!(
                        "F^{m}_{k} on wires ({a},{b}) sees {:?} and {:?}",
                        labels[a], labels[b]
                    ));
                }
                labels[a] = Label { size: m, k };
                labels[b] = Label {
                    size: m,
                    k: k + m / 2,
                };
            }
            (GateKind::FourierDg { .. }, _) => {
                return invalid("inverse Fourier gates are not tracked")
            }
            _ => {}
        }
    }
    labels
        .iter()
        .map(|l| {
            if l.size != n {
                return invalid(format!("wire left holding a size-{} mode", l.size));
            }
            let k = l.k as i64;
            Ok(if k > (n / 2) as i64 { k - n as i64 } else { k })
        })
        .collect()
}

fn check_power_of_two(n: usize, min: usize) -> Result<()> {
    if n < min || !n.is_power_of_two() {
        return invalid(format!("n = {n} must be a power of two >= {min}"));
    }
    Ok(())
}

/// One X per qubit.
pub fn jw_layer(n: usize) -> Result<Circuit> {
    let mut c = Circuit::new(n)?;
    for q in 0..n {
        c.add(gates::x(), &[q])?;
    }
    Ok(c)
}

/// fSWAP network moving even wires to the top half and odd wires to the
/// bottom half, order preserved. Layer `i` starts at wire `i` and holds
/// `n/2 − i` gates at stride 2.
pub fn parity_sort_network(n: usize) -> Result<Circuit> {
    check_power_of_two(n, 2)?;
    let mut c = Circuit::new(n)?;
    for i in 1..n / 2 {
        for j in 0..n / 2 - i {
            let q = i + 2 * j;
            c.add(gates::fswap(), &[q, q + 1])?;
        }
    }
    Ok(c)
}

/// Fermionic FFT. Output wire pairs `(2i, 2i+1)` carry modes `i` and
/// `i + n/2`.
pub fn fft_circuit(n: usize) -> Result<Circuit> {
    check_power_of_two(n, 2)?;
    let mut c = Circuit::new(n)?;
    if n == 2 {
        c.add(gates::fourier_gate(2, 0)?, &[0, 1])?;
        return Ok(c);
    }
    let sort = parity_sort_network(n)?;
    let half = n / 2;
    // sub-transforms in natural order: fft(n/2) then its own sort
    let mut sub = fft_circuit(half)?;
    sub.append(&parity_sort_network(half)?)?;
    c.append(&sort)?;
    c.append_shifted(&sub, 0)?;
    c.append_shifted(&sub, half)?;
    c.append(&sort.dagger_structural())?;
    for i in 0..half {
        c.add(gates::fourier_gate(n, i)?, &[2 * i, 2 * i + 1])?;
    }
    Ok(c)
}

impl Circuit {
    /// Reversed op list with the gates untouched; the inverse of a network
    /// of self-inverse gates.
    fn dagger_structural(&self) -> Circuit {
        Circuit {
            n: self.n,
            ops: self.ops.iter().rev().cloned().collect(),
        }
    }
}

/// fSWAP cascades taking the FFT output order `(0, n/2, 1, 1+n/2, …)` to the
/// paired order `(0, n/2, 1, −1, 2, −2, …)`. Cascade `i` runs from
/// `i = n/4 − 1` down to 1; each descends `4i` gates from its start wire
/// and climbs back `4i − 1`, and the start wire moves down by 2.
pub fn bog_sort_network(n: usize) -> Result<Circuit> {
    check_power_of_two(n, 4)?;
    let mut c = Circuit::new(n)?;
    let mut start = 3;
    for i in (1..n / 4).rev() {
        let mut q = start;
        for _ in 0..4 * i {
            c.add(gates::fswap(), &[q, q + 1])?;
            q += 1;
        }
        for _ in 0..4 * i - 1 {
            c.add(gates::fswap(), &[q - 2, q - 1])?;
            q -= 1;
        }
        start += 2;
    }
    Ok(c)
}

/// Bogoliubov gates `B(θ_i)` on pairs `(2i, 2i+1)`.
pub fn bog_layer(params: &ModelParams) -> Result<Circuit> {
    let n = params.n();
    let mut c = Circuit::new(n)?;
    for i in 0..n / 2 {
        let d = dispersion(params, i as i64)?;
        c.add(gates::bogoliubov_gate(d.theta)?, &[2 * i, 2 * i + 1])?;
    }
    Ok(c)
}

/// The disentangler: maps eigenstates of the chain Hamiltonian to
/// computational basis states laid out by the mode table.
pub fn u_dis(params: &ModelParams) -> Result<Circuit> {
    let n = params.n();
    let mut c = jw_layer(n)?;
    c.append(&fft_circuit(n)?)?;
    c.append(&bog_sort_network(n)?)?;
    c.append(&bog_layer(params)?)?;
    Ok(c)
}

/// Diagonal evolution for time `t` in the disentangled basis, one gate per
/// wire.
pub fn u_time(params: &ModelParams, t: f64) -> Result<Circuit> {
    if !t.is_finite() {
        return invalid("time must be finite");
    }
    let table = ModeTable::new(params.n())?;
    let mut c = Circuit::new(params.n())?;
    for (p, &k) in table.order.iter().enumerate() {
        let d = dispersion(params, k)?;
        c.add(
            gates::time_evolution_gate(d.e, d.eps, params.lambda(), t)?,
            &[p],
        )?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn pairs(c: &Circuit) -> Vec<(usize, usize)> {
        c.ops()
            .iter()
            .map(|o| (o.targets[0], o.targets[1]))
            .collect()
    }

    #[test]
    fn jw_layer_flips_everything() {
        let c = jw_layer(4).unwrap();
        assert_eq!(c.stats().count("x"), 4);
        let out = c.apply_to(&StateVector::basis("1111").unwrap()).unwrap();
        assert_eq!(out.amplitude("0000").unwrap(), Complex64::new(1., 0.));
        let u = jw_layer(2).unwrap().to_unitary().unwrap();
        assert_eq!(u.entry(3, 0), Complex64::new(1., 0.));
        assert_eq!(u.entry(0, 3), Complex64::new(1., 0.));
    }

    #[test]
    fn parity_sort_layout() {
        assert_eq!(pairs(&parity_sort_network(4).unwrap()), vec![(1, 2)]);
        assert_eq!(
            pairs(&parity_sort_network(8).unwrap()),
            vec![(1, 2), (3, 4), (5, 6), (2, 3), (4, 5), (3, 4)]
        );
        assert!(parity_sort_network(2).unwrap().is_empty());
        assert!(parity_sort_network(6).is_err());
        assert_eq!(
            parity_sort_network(8).unwrap().wire_permutation().unwrap(),
            vec![0, 2, 4, 6, 1, 3, 5, 7]
        );
    }

    #[test]
    fn bog_sort_layout() {
        assert!(bog_sort_network(4).unwrap().is_empty());
        assert_eq!(
            pairs(&bog_sort_network(8).unwrap()),
            vec![(3, 4), (4, 5), (5, 6), (6, 7), (5, 6), (4, 5), (3, 4)]
        );
        assert!(bog_sort_network(2).is_err());
    }

    #[test]
    fn fft_counts() {
        let s = fft_circuit(8).unwrap().stats();
        assert_eq!(s.count("fourier"), 12);
        assert_eq!(fft_circuit(2).unwrap().len(), 1);
        let names: Vec<String> = fft_circuit(4)
            .unwrap()
            .ops()
            .iter()
            .map(|o| o.gate.to_string())
            .collect();
        assert_eq!(names[0], "fswap");
        assert_eq!(names.len(), 6);
        assert!(fft_circuit(12).is_err());
    }

    #[test]
    fn label_tracking_matches_mode_table() {
        for n in [4, 8, 16] {
            let params = ModelParams::new(n, 1., 0.5, 0.3).unwrap();
            let labels = track_mode_labels(&u_dis(&params).unwrap()).unwrap();
            assert_eq!(labels, ModeTable::new(n).unwrap().order);
        }
    }

    #[test]
    fn builders_are_linear() {
        let params = ModelParams::new(16, 1., 0.7, 0.4).unwrap();
        assert!(u_dis(&params).unwrap().is_linear());
        assert!(u_dis(&params).unwrap().decomposed().unwrap().is_linear());
    }

    #[test]
    fn dagger_undoes_circuit() {
        let params = ModelParams::new(4, 1., 1., 0.5).unwrap();
        let c = u_dis(&params).unwrap();
        let psi = StateVector::random(4, 3).unwrap();
        let back = c.dagger().apply_to(&c.apply_to(&psi).unwrap()).unwrap();
        assert!(back.max_abs_diff(&psi) < 1e-12);
        assert_eq!(c.dagger().dagger(), c);
    }

    #[test]
    fn json_round_trip() {
        let params = ModelParams::new(4, 1., 1., 0.5).unwrap();
        let c = u_dis(&params).unwrap();
        let back = Circuit::from_json(&c.to_json().unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(Circuit::from_json(
            "{\"n\": 2, \"ops\": [{\"name\": \"nope\", \"params\": [], \"targets\": [0]}]}"
        )
        .is_err());
        assert!(Circuit::from_json(
            "{\"n\": 2, \"ops\": [{\"name\": \"x\", \"params\": [], \"targets\": [5]}]}"
        )
        .is_err());
    }

    #[test]
    fn to_unitary_limit() {
        assert!(matches!(
            jw_layer(13).unwrap().to_unitary(),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn u_time_one_gate_per_qubit() {
        for n in [4, 8, 16] {
            let params = ModelParams::new(n, 1., 1., 0.5).unwrap();
            assert_eq!(u_time(&params, 0.3).unwrap().stats().total, n);
        }
    }
}
