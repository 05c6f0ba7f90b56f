//! Statevector engine for the embedding circuit
//! `U(G) = (U_mix U_ent)^r U_enc` applied to `|0…0⟩`.
//!
//! Gate conventions:
//!
//! - `R_X(φ) = [[cos φ/2, −i sin φ/2], [−i sin φ/2, cos φ/2]]`;
//! - `R_ZZ(θ)` multiplies equal-bit basis states by `e^{−iθ/2}` and unequal-bit
//!   states by `e^{+iθ/2}`.
//!
//! Because every `R_ZZ` is diagonal, the entangling layer is applied as a
//! single pass multiplying the amplitude of basis state `s` by
//! `exp(iθ·cut(s)) · exp(−iθ|E|/2)`. The global phase is kept so intermediate
//! states are exact, not just equal up to phase.
//!
//! Qubit `i` is bit `i` of the amplitude index.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::tolerance;

/// Default simulator ceiling: 2^26 amplitudes is 1 GiB of `Complex64`.
pub const DEFAULT_MAX_QUBITS: usize = 26;

/// Below this many qubits the kernels run single-threaded.
const PARALLEL_QUBITS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    pub theta_enc: f64,
    pub theta_ent: f64,
    pub theta_mix: f64,
    pub reps: usize,
}

impl CircuitParams {
    /// The operating point selected by the parameter sweeps.
    pub const CANONICAL: CircuitParams = CircuitParams {
        theta_enc: 2.875,
        theta_ent: 2.0,
        theta_mix: 0.1,
        reps: 2,
    };

    pub fn with_reps(self, reps: usize) -> Self {
        CircuitParams { reps, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("theta_enc", self.theta_enc),
            ("theta_ent", self.theta_ent),
            ("theta_mix", self.theta_mix),
        ] {
            if !v.is_finite() {
                return Err(invalid(field, "angle must be finite"));
            }
        }
        if self.reps == 0 {
            return Err(invalid("reps", "at least one repetition required"));
        }
        Ok(())
    }
}

impl Default for CircuitParams {
    fn default() -> Self {
        Self::CANONICAL
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Statevector { n, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = qubits_for_len(amps.len())?;
        Ok(Statevector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn parallel(&self) -> bool {
        self.n >= PARALLEL_QUBITS
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(invalid("amplitudes", format!("length {len} is not a power of two")));
    }
    Ok(len.trailing_zeros() as usize)
}

/// Per-qubit encoding angles `θ_enc · d_i / d_max`; all zero when the graph
/// has no edges.
pub fn encoding_angles(g: &Graph, theta_enc: f64) -> Vec<f64> {
    let dmax = g.max_degree();
    g.degrees()
        .into_iter()
        .map(|d| {
            if dmax == 0 {
                0.0
            } else {
                theta_enc * d as f64 / dmax as f64
            }
        })
        .collect()
}

/// Apply `R_X(angle)` to `qubit`.
pub fn apply_rx(sv: &mut Statevector, qubit: usize, angle: f64) {
    let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    let ms = Complex64::new(0.0, -s);
    let stride = 1usize << qubit;
    let kernel = |block: &mut [Complex64]| {
        let (lo, hi) = block.split_at_mut(stride);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = x * c + y * ms;
            *b = x * ms + y * c;
        }
    };
    if sv.parallel() {
        sv.amps.par_chunks_mut(2 * stride).for_each(kernel);
    } else {
        sv.amps.chunks_mut(2 * stride).for_each(kernel);
    }
}

/// Apply one `R_ZZ(angle)` gate on qubits `a` and `b`.
pub fn apply_rzz(sv: &mut Statevector, a: usize, b: usize, angle: f64) {
    let same = Complex64::from_polar(1.0, -angle / 2.0);
    let diff = Complex64::from_polar(1.0, angle / 2.0);
    let kernel = |(x, amp): (usize, &mut Complex64)| {
        *amp *= if (x >> a ^ x >> b) & 1 == 1 { diff } else { same };
    };
    if sv.parallel() {
        sv.amps.par_iter_mut().enumerate().for_each(kernel);
    } else {
        sv.amps.iter_mut().enumerate().for_each(kernel);
    }
}

/// Single-qubit Pauli, for error insertion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

pub fn apply_pauli(sv: &mut Statevector, qubit: usize, p: Pauli) {
    let bit = 1usize << qubit;
    match p {
        Pauli::Z => sv.amps.iter_mut().enumerate().for_each(|(x, a)| {
            if x & bit != 0 {
                *a = -*a;
            }
        }),
        Pauli::X | Pauli::Y => {
            let i = Complex64::new(0.0, 1.0);
            for block in sv.amps.chunks_mut(2 * bit) {
                let (lo, hi) = block.split_at_mut(bit);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    std::mem::swap(a, b);
                    if p == Pauli::Y {
                        // Y = [[0, −i], [i, 0]]
                        *a *= -i;
                        *b *= i;
                    }
                }
            }
        }
    }
}

/// `cut(x)` for every basis index `x`, by the recurrence
/// `cut(x) = cut(x − 2^h) + deg(h) − 2·|N(h) ∩ (x − 2^h)|` with `h` the top bit.
pub fn cut_table(g: &Graph) -> Vec<u16> {
    let n = g.n();
    assert!(n <= 32, "cut table is only built for simulable sizes");
    let masks: Vec<u64> = (0..n).map(|v| g.neighbor_mask(v)).collect();
    let degs: Vec<u16> = g.degrees().into_iter().map(|d| d as u16).collect();
    let mut cut = vec![0u16; 1 << n];
    for h in 0..n {
        let top = 1usize << h;
        let (lo, hi) = cut.split_at_mut(top);
        for (y, c) in hi[..top].iter_mut().enumerate() {
            let shared = (masks[h] & y as u64).count_ones() as u16;
            *c = lo[y] + degs[h] - 2 * shared;
        }
    }
    cut
}

/// The whole entangling layer as one diagonal pass over a precomputed cut
/// table.
pub fn apply_entangler(sv: &mut Statevector, cut: &[u16], edge_count: usize, theta_ent: f64) {
    debug_assert_eq!(cut.len(), sv.amps.len());
    let phase: Vec<Complex64> = (0..=edge_count)
        .map(|c| Complex64::from_polar(1.0, theta_ent * (c as f64 - edge_count as f64 / 2.0)))
        .collect();
    let kernel = |(a, &c): (&mut Complex64, &u16)| *a *= phase[c as usize];
    if sv.parallel() {
        sv.amps.par_iter_mut().zip(cut.par_iter()).for_each(kernel);
    } else {
        sv.amps.iter_mut().zip(cut.iter()).for_each(kernel);
    }
}

/// The encoding layer applied to `|0…0⟩`.
pub fn encode(g: &Graph, theta_enc: f64) -> Statevector {
    let mut sv = Statevector::zero(g.n());
    for (q, phi) in encoding_angles(g, theta_enc).into_iter().enumerate() {
        apply_rx(&mut sv, q, phi);
    }
    sv
}

fn check_size(n: usize, max_qubits: usize) -> Result<()> {
    if n > max_qubits {
        return Err(Error::SizeCeiling { n, ceiling: max_qubits });
    }
    Ok(())
}

/// `U(G)|0…0⟩` with the default size ceiling.
pub fn run_circuit(g: &Graph, params: &CircuitParams) -> Result<Statevector> {
    run_circuit_capped(g, params, DEFAULT_MAX_QUBITS)
}

pub fn run_circuit_capped(g: &Graph, params: &CircuitParams, max_qubits: usize) -> Result<Statevector> {
    params.validate()?;
    check_size(g.n(), max_qubits)?;
    let mut sv = encode(g, params.theta_enc);
    let cut = cut_table(g);
    for _ in 0..params.reps {
        apply_entangler(&mut sv, &cut, g.edge_count(), params.theta_ent);
        for q in 0..g.n() {
            apply_rx(&mut sv, q, params.theta_mix);
        }
    }
    Ok(sv)
}

/// One logical gate of the circuit, in execution order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    Rx { qubit: usize, angle: f64 },
    Rzz { a: usize, b: usize, angle: f64 },
}

impl Gate {
    pub fn apply(&self, sv: &mut Statevector) {
        match *self {
            Gate::Rx { qubit, angle } => apply_rx(sv, qubit, angle),
            Gate::Rzz { a, b, angle } => apply_rzz(sv, a, b, angle),
        }
    }
}

/// Gate list: encoding rotations, then per repetition one `R_ZZ` per edge (in
/// sorted edge order) followed by the mixer rotations.
pub fn circuit_gates(g: &Graph, params: &CircuitParams) -> Vec<Gate> {
    let mut gates: Vec<Gate> = encoding_angles(g, params.theta_enc)
        .into_iter()
        .enumerate()
        .map(|(qubit, angle)| Gate::Rx { qubit, angle })
        .collect();
    for _ in 0..params.reps {
        gates.extend(g.edges().iter().map(|&(a, b)| Gate::Rzz {
            a,
            b,
            angle: params.theta_ent,
        }));
        gates.extend((0..g.n()).map(|qubit| Gate::Rx {
            qubit,
            angle: params.theta_mix,
        }));
    }
    gates
}

/// Born probabilities `|a_x|²`.
pub fn output_distribution(sv: &Statevector) -> Vec<f64> {
    sv.amps.iter().map(|a| a.norm_sqr()).collect()
}

/// Marginal over the qubits in `keep`. Kept qubits are packed in ascending
/// order: the smallest kept qubit becomes bit 0 of the result.
pub fn marginalize(p: &[f64], keep: &[usize]) -> Result<Vec<f64>> {
    let n = qubits_for_len(p.len())?;
    let keep = sorted_keep(keep, n)?;
    let mut out = vec![0.0; 1 << keep.len()];
    for (x, &px) in p.iter().enumerate() {
        out[gather_bits(x as u64, &keep) as usize] += px;
    }
    Ok(out)
}

pub(crate) fn sorted_keep(keep: &[usize], n: usize) -> Result<Vec<usize>> {
    if let Some(&index) = keep.iter().find(|&&q| q >= n) {
        return Err(Error::OutOfRange { index, n });
    }
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    Ok(keep)
}

#[inline]
pub(crate) fn gather_bits(x: u64, keep: &[usize]) -> u64 {
    keep.iter().enumerate().fold(0, |acc, (j, &q)| acc | (x >> q & 1) << j)
}

/// Closed-form `|⟨s|U_enc|0…0⟩| = Π_{s_i=0} |cos α_i| · Π_{s_i=1} |sin α_i|`
/// with `α_i = φ_i / 2`.
pub fn encoder_amplitude(g: &Graph, theta_enc: f64, s: &[bool]) -> Result<f64> {
    if s.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: s.len(),
        });
    }
    Ok(encoding_angles(g, theta_enc)
        .into_iter()
        .zip(s)
        .map(|(phi, &bit)| {
            let alpha = phi / 2.0;
            if bit {
                alpha.sin().abs()
            } else {
                alpha.cos().abs()
            }
        })
        .product())
}

/// Whether `p` is a probability vector to within the mass tolerance.
pub fn is_normalized(p: &[f64]) -> bool {
    (p.iter().sum::<f64>() - 1.0).abs() <= tolerance::PROBABILITY_MASS && p.iter().all(|&x| x >= 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, FamilySpec};
    use std::f64::consts::PI;

    const EPS: f64 = tolerance::EXACT;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < EPS
    }

    #[test]
    fn encoding_angles_follow_degree_ratio() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]).unwrap();
        let a = encoding_angles(&g, 1.0);
        for (x, want) in a.iter().zip([1.0, 2.0 / 3.0, 1.0, 2.0 / 3.0]) {
            assert!((x - want).abs() < EPS);
        }
        assert_eq!(encoding_angles(&Graph::empty(3), 2.875), vec![0.0; 3]);
        let k4 = generate(&FamilySpec::Complete { n: 4 }).unwrap();
        assert_eq!(encoding_angles(&k4, 2.875), vec![2.875; 4]);
    }

    #[test]
    fn single_vertex_only_sees_mixer() {
        let g = Graph::empty(1);
        let params = CircuitParams {
            theta_enc: 2.875,
            theta_ent: 2.0,
            theta_mix: 0.3,
            reps: 1,
        };
        let sv = run_circuit(&g, &params).unwrap();
        let a = sv.amplitudes();
        assert!(close(a[0], Complex64::new((0.15f64).cos(), 0.0)));
        assert!(close(a[1], Complex64::new(0.0, -(0.15f64).sin())));
    }

    #[test]
    fn two_qubit_hand_computed() {
        // K2 with θ_enc = π/2, θ_ent = θ, no mixer: each qubit (|0⟩ − i|1⟩)/√2,
        // then phase e^{iθ(cut − 1/2)}.
        let theta = 0.7;
        let g = generate(&FamilySpec::Complete { n: 2 }).unwrap();
        let params = CircuitParams {
            theta_enc: PI / 2.0,
            theta_ent: theta,
            theta_mix: 0.0,
            reps: 1,
        };
        let sv = run_circuit(&g, &params).unwrap();
        let mi = Complex64::new(0.0, -1.0);
        let product = [Complex64::new(1.0, 0.0), mi, mi, mi * mi];
        for (x, prod) in product.into_iter().enumerate() {
            let cut = if x == 1 || x == 2 { 1.0 } else { 0.0 };
            let want = prod * 0.5 * Complex64::from_polar(1.0, theta * (cut - 0.5));
            assert!(close(sv.amplitudes()[x], want), "x={x}");
            assert!((sv.amplitudes()[x].norm() - 0.5).abs() < EPS);
        }
    }

    #[test]
    fn cut_table_matches_direct() {
        let g = generate(&FamilySpec::Er { n: 9, p: 0.5, seed: 2 }).unwrap();
        let t = cut_table(&g);
        for x in 0..1u64 << 9 {
            assert_eq!(t[x as usize] as usize, crate::graph::cut_index(&g, x));
        }
    }

    #[test]
    fn diagonal_pass_equals_per_edge_gates() {
        let g = generate(&FamilySpec::Er { n: 7, p: 0.5, seed: 4 }).unwrap();
        let mut a = encode(&g, 2.875);
        let mut b = a.clone();
        apply_entangler(&mut a, &cut_table(&g), g.edge_count(), 2.0);
        for &(u, v) in g.edges() {
            apply_rzz(&mut b, u, v, 2.0);
        }
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!(close(*x, *y));
        }
    }

    #[test]
    fn gate_list_reproduces_run_circuit() {
        let g = generate(&FamilySpec::Er { n: 6, p: 0.5, seed: 8 }).unwrap();
        let p = CircuitParams::CANONICAL;
        let mut sv = Statevector::zero(6);
        for gate in circuit_gates(&g, &p) {
            gate.apply(&mut sv);
        }
        let fast = run_circuit(&g, &p).unwrap();
        for (x, y) in sv.amplitudes().iter().zip(fast.amplitudes()) {
            assert!((x - y).norm() < tolerance::CROSS_PATH);
        }
    }

    #[test]
    fn paulis() {
        let mut sv = encode(&Graph::empty(1), 0.0);
        apply_pauli(&mut sv, 0, Pauli::X);
        assert!(close(sv.amplitudes()[1], Complex64::new(1.0, 0.0)));
        apply_pauli(&mut sv, 0, Pauli::Y);
        // Y|1⟩ = −i|0⟩
        assert!(close(sv.amplitudes()[0], Complex64::new(0.0, -1.0)));
        apply_pauli(&mut sv, 0, Pauli::Z);
        assert!(close(sv.amplitudes()[0], Complex64::new(0.0, -1.0)));
    }

    #[test]
    fn output_distribution_examples() {
        let h = Complex64::new(0.5, 0.0);
        let uni = Statevector::from_amplitudes(vec![h; 4]).unwrap();
        assert_eq!(output_distribution(&uni), vec![0.25; 4]);
        let mut basis = vec![Complex64::new(0.0, 0.0); 4];
        basis[2] = Complex64::new(1.0, 0.0); // |10⟩: qubit 1 set
        let sv = Statevector::from_amplitudes(basis).unwrap();
        assert_eq!(output_distribution(&sv), vec![0.0, 0.0, 1.0, 0.0]);
        assert!(Statevector::from_amplitudes(vec![h; 3]).is_err());
    }

    #[test]
    fn marginalize_examples() {
        let p = vec![0.125; 8];
        assert_eq!(marginalize(&p, &[0, 1, 2]).unwrap(), p);
        assert_eq!(marginalize(&p, &[]).unwrap(), vec![1.0]);
        assert_eq!(marginalize(&p, &[0]).unwrap(), vec![0.5, 0.5]);
        let q = vec![0.1, 0.2, 0.3, 0.4];
        let m = marginalize(&q, &[1]).unwrap();
        assert!((m[0] - 0.3).abs() < EPS && (m[1] - 0.7).abs() < EPS);
        assert!(matches!(
            marginalize(&q, &[2]),
            Err(Error::OutOfRange { index: 2, n: 2 })
        ));
    }

    #[test]
    fn encoder_amplitude_examples() {
        let e = Graph::empty(3);
        assert_eq!(encoder_amplitude(&e, 2.875, &[false; 3]).unwrap(), 1.0);
        assert!(encoder_amplitude(&e, 2.875, &[false; 2]).is_err());
    }

    #[test]
    fn size_ceiling_and_params() {
        let g = generate(&FamilySpec::Path { n: 5 }).unwrap();
        assert!(matches!(
            run_circuit_capped(&g, &CircuitParams::CANONICAL, 4),
            Err(Error::SizeCeiling { n: 5, ceiling: 4 })
        ));
        let bad = CircuitParams {
            reps: 0,
            ..CircuitParams::CANONICAL
        };
        assert!(run_circuit(&g, &bad).is_err());
        let nan = CircuitParams {
            theta_mix: f64::NAN,
            ..CircuitParams::CANONICAL
        };
        assert!(run_circuit(&g, &nan).is_err());
    }
}
