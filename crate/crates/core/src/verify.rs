//! Self-check suite behind `xychain verify`.

use crate::circuits::{
    bog_sort_network, parity_sort_network, track_mode_labels, u_dis, u_time, Circuit, GateOp,
};
use crate::error::{invalid, Result};
use crate::gates::{self, equivalent_up_to_phase, sequence_matrix, GateKind};
use crate::statevector::{index_to_bitstring, StateVector};
use crate::xymodel::{all_eigen_energies, dense_hamiltonian, dispersion, ModeTable, ModelParams};

/// Deliberate corruption used to show the suite catches broken builders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Every fSWAP in the disentangler is replaced by a plain SWAP.
    FswapSign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub n: usize,
    pub passed: bool,
    pub detail: String,
}

const POINTS: [(f64, f64, f64); 4] = [
    (1.0, 1.0, 0.5),
    (1.0, 0.0, 0.3),
    (-1.0, 0.5, 1.25),
    (1.0, 1.0, 1.0),
];

fn with_fault(circuit: Circuit, fault: Option<Fault>) -> Result<Circuit> {
    match fault {
        None => Ok(circuit),
        Some(Fault::FswapSign) => {
            let mut out = Circuit::new(circuit.n())?;
            for op in circuit.ops() {
                let gate = if *op.gate.kind() == GateKind::Fswap {
                    gates::swap()
                } else {
                    op.gate.clone()
                };
                out.push(GateOp::new(gate, op.targets.clone()))?;
            }
            Ok(out)
        }
    }
}

fn check(name: &str, n: usize, worst: f64, tol: f64) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        n,
        passed: worst <= tol,
        detail: format!("max error {worst:.3e} (tol {tol:.0e})"),
    }
}

fn flag(name: &str, n: usize, ok: bool, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        n,
        passed: ok,
        detail,
    }
}

/// Runs every check at each chain length.
pub fn run_suite(sizes: &[usize], fault: Option<Fault>) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for &n in sizes {
        if n < 4 || !n.is_power_of_two() || n > 8 {
            return invalid(format!("verify supports n = 4 or 8, got {n}"));
        }
        out.extend(suite_for(n, fault)?);
    }
    Ok(out)
}

fn suite_for(n: usize, fault: Option<Fault>) -> Result<Vec<CheckResult>> {
    let mut results = Vec::new();
    let params: Vec<ModelParams> = POINTS
        .iter()
        .map(|&(j, g, l)| ModelParams::new(n, j, g, l))
        .collect::<Result<_>>()?;

    let mut worst = 0.0f64;
    for k in 0..n / 2 {
        worst = worst.max(gates::fourier_gate(n, k)?.unitarity_error());
    }
    for p in &params {
        for k in 1 - (n as i64) / 2..=(n as i64) / 2 {
            let d = dispersion(p, k)?;
            worst = worst.max(gates::bogoliubov_gate(d.theta)?.unitarity_error());
            worst = worst
                .max(gates::time_evolution_gate(d.e, d.eps, p.lambda(), 0.37)?.unitarity_error());
        }
    }
    results.push(check("gate unitarity", n, worst, 1e-12));

    let mut failures = Vec::new();
    let mut candidates = vec![gates::fswap()];
    for k in 0..n / 2 {
        candidates.push(gates::fourier_gate(n, k)?);
    }
    for p in &params {
        for k in 0..(n as i64) / 2 {
            let d = dispersion(p, k)?;
            candidates.push(gates::bogoliubov_gate(d.theta)?);
            candidates.push(gates::time_evolution_gate(d.e, d.eps, p.lambda(), 1.3)?);
        }
    }
    for g in &candidates {
        let seq = gates::decompose(g)?;
        let m = sequence_matrix(&seq, g.arity())?;
        if !equivalent_up_to_phase(g.data(), &m, g.dim(), 1e-10) {
            failures.push(g.to_string());
        }
    }
    results.push(flag(
        "decomposition equivalence",
        n,
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} gates match up to global phase", candidates.len())
        } else {
            format!("mismatch: {}", failures.join(", "))
        },
    ));

    let evens_then_odds: Vec<usize> = (0..n).step_by(2).chain((1..n).step_by(2)).collect();
    let sort_ok = parity_sort_network(n)?.wire_permutation()? == evens_then_odds;
    let fft_order: Vec<i64> = (0..n / 2)
        .flat_map(|i| [i as i64, (i + n / 2) as i64])
        .collect();
    let fft_order: Vec<i64> = fft_order
        .into_iter()
        .map(|k| if k > (n / 2) as i64 { k - n as i64 } else { k })
        .collect();
    let perm = bog_sort_network(n)?.wire_permutation()?;
    let after: Vec<i64> = perm.iter().map(|&w| fft_order[w]).collect();
    let table = ModeTable::new(n)?;
    let bog_ok = after == table.order;
    results.push(flag(
        "permutation oracles",
        n,
        sort_ok && bog_ok,
        format!("parity sort {sort_ok}, pairing sort {bog_ok}"),
    ));

    let circuits: Vec<Circuit> = params
        .iter()
        .map(|p| with_fault(u_dis(p)?, fault))
        .collect::<Result<_>>()?;
    let labels_ok = track_mode_labels(&circuits[0])
        .map(|l| l == table.order)
        .unwrap_or(false);
    results.push(flag(
        "mode table",
        n,
        labels_ok,
        format!("label tracking matches {:?}", table.order),
    ));
    results.push(flag(
        "linear connectivity",
        n,
        circuits.iter().all(Circuit::is_linear),
        "two-qubit gates on adjacent wires".into(),
    ));

    let (mut unit, mut offdiag, mut spectrum_err, mut resid) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (p, c) in params.iter().zip(&circuits) {
        let u = c.to_unitary()?;
        unit = unit.max(u.unitarity_error());
        let h = dense_hamiltonian(p)?;
        let d = h.conjugate_by(&u)?;
        offdiag = offdiag.max(d.off_diagonal_norm() / h.frobenius_norm());

        let mut from_circuit: Vec<f64> = d.diagonal().iter().map(|z| z.re).collect();
        let mut oracle = h.eigenvalues()?;
        from_circuit.sort_by(f64::total_cmp);
        oracle.sort_by(f64::total_cmp);
        for (a, b) in from_circuit.iter().zip(&oracle) {
            spectrum_err = spectrum_err.max((a - b).abs());
        }

        let energies = all_eigen_energies(p)?;
        let dag = c.dagger();
        for idx in (0..1usize << n).step_by(if n > 4 { 7 } else { 1 }) {
            let psi = dag.apply_to(&StateVector::basis(&index_to_bitstring(idx, n))?)?;
            let hpsi = h.apply(&psi)?;
            let mut scaled = psi.clone();
            scaled.scale(num_complex::Complex64::new(energies[idx], 0.0));
            let r: f64 = hpsi
                .amplitudes()
                .iter()
                .zip(scaled.amplitudes())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            resid = resid.max(r);
        }
    }
    results.push(check("disentangler unitarity", n, unit, 1e-10));
    results.push(check("diagonalization", n, offdiag, 1e-8));
    results.push(check("spectrum equivalence", n, spectrum_err, 1e-8));
    results.push(check("eigenstate residuals", n, resid, 1e-8));

    let p = ModelParams::new(n, 1.0, 1.0, 0.5)?;
    let ut = u_time(&p, 0.4)?;
    let psi = StateVector::random(n, 17)?;
    let twice = ut.apply_to(&ut.apply_to(&psi)?)?;
    let once = u_time(&p, 0.8)?.apply_to(&psi)?;
    results.push(check(
        "time evolution composition",
        n,
        twice.max_abs_diff(&once),
        1e-12,
    ));

    Ok(results)
}

/// Plain-text table of results.
pub fn render_table(results: &[CheckResult]) -> String {
    let width = results
        .iter()
        .map(|r| r.name.len())
        .max()
        .unwrap_or(5)
        .max(5);
    let mut s = format!("{:<width$}  {:>2}  {:<4}  detail\n", "check", "n", "ok");
    for r in results {
        s.push_str(&format!(
            "{:<width$}  {:>2}  {:<4}  {}\n",
            r.name,
            r.n,
            if r.passed { "PASS" } else { "FAIL" },
            r.detail
        ));
    }
    s
}
