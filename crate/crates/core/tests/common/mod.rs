//! Test-side oracles, written against textbook gate definitions with no
//! code shared with the library kernels.

#![allow(dead_code)]

use num_complex::Complex64 as C;
use quic::qsim::CircuitParams;
use quic::Graph;

pub type Mat2 = [[C; 2]; 2];
pub type Mat4 = [[C; 4]; 4];

pub fn rx(angle: f64) -> Mat2 {
    let c = C::new((angle / 2.0).cos(), 0.0);
    let s = C::new(0.0, -(angle / 2.0).sin());
    [[c, s], [s, c]]
}

/// `R_ZZ(θ) = exp(−iθ Z⊗Z / 2)`, basis order |b a⟩ = 00, 01, 10, 11.
pub fn rzz(theta: f64) -> Mat4 {
    let same = C::from_polar(1.0, -theta / 2.0);
    let diff = C::from_polar(1.0, theta / 2.0);
    let z = C::new(0.0, 0.0);
    [[same, z, z, z], [z, diff, z, z], [z, z, diff, z], [z, z, z, same]]
}

pub fn apply_1q(state: &mut [C], q: usize, m: &Mat2) {
    let bit = 1 << q;
    for x in 0..state.len() {
        if x & bit == 0 {
            let (a, b) = (state[x], state[x | bit]);
            state[x] = m[0][0] * a + m[0][1] * b;
            state[x | bit] = m[1][0] * a + m[1][1] * b;
        }
    }
}

/// General two-qubit gate; local index is `2·bit_b + bit_a`.
pub fn apply_2q(state: &mut [C], a: usize, b: usize, m: &Mat4) {
    let (ba, bb) = (1 << a, 1 << b);
    for x in 0..state.len() {
        if x & ba == 0 && x & bb == 0 {
            let idx = [x, x | ba, x | bb, x | ba | bb];
            let v = idx.map(|i| state[i]);
            for (r, &i) in idx.iter().enumerate() {
                state[i] = (0..4).map(|c| m[r][c] * v[c]).sum();
            }
        }
    }
}

pub fn degree_angles(g: &Graph, theta_enc: f64) -> Vec<f64> {
    let deg: Vec<usize> = (0..g.n())
        .map(|v| g.edges().iter().filter(|&&(a, b)| a == v || b == v).count())
        .collect();
    let dmax = deg.iter().copied().max().unwrap_or(0);
    deg.iter()
        .map(|&d| {
            if dmax == 0 {
                0.0
            } else {
                theta_enc * d as f64 / dmax as f64
            }
        })
        .collect()
}

/// Gate-by-gate statevector with the entangler applied one `R_ZZ` at a time
/// in `edge_order`.
pub fn reference_state_ordered(g: &Graph, params: &CircuitParams, edge_order: &[(usize, usize)]) -> Vec<C> {
    let mut s = vec![C::new(0.0, 0.0); 1 << g.n()];
    s[0] = C::new(1.0, 0.0);
    for (q, phi) in degree_angles(g, params.theta_enc).into_iter().enumerate() {
        apply_1q(&mut s, q, &rx(phi));
    }
    for _ in 0..params.reps {
        for &(a, b) in edge_order {
            apply_2q(&mut s, a, b, &rzz(params.theta_ent));
        }
        for q in 0..g.n() {
            apply_1q(&mut s, q, &rx(params.theta_mix));
        }
    }
    s
}

pub fn reference_state(g: &Graph, params: &CircuitParams) -> Vec<C> {
    reference_state_ordered(g, params, g.edges())
}

pub fn probabilities(s: &[C]) -> Vec<f64> {
    s.iter().map(|a| a.norm_sqr()).collect()
}

/// Dense density-matrix oracle for the noisy circuit (small `n` only):
/// after each gate, with probability `p` a uniformly random non-identity
/// Pauli on the touched qubits; readout flips on the final diagonal.
pub fn density_matrix_distribution(g: &Graph, params: &CircuitParams, p1: f64, p2: f64, p_ro: f64) -> Vec<f64> {
    let n = g.n();
    let dim = 1usize << n;
    let mut rho = vec![vec![C::new(0.0, 0.0); dim]; dim];
    rho[0][0] = C::new(1.0, 0.0);
    let paulis: [Mat2; 4] = {
        let o = C::new(0.0, 0.0);
        let l = C::new(1.0, 0.0);
        let i = C::new(0.0, 1.0);
        [[[l, o], [o, l]], [[o, l], [l, o]], [[o, -i], [i, o]], [[l, o], [o, -l]]]
    };
    // conjugate every column then every row: rho -> U rho U^dagger
    let conj_1q = |rho: &Vec<Vec<C>>, q: usize, m: &Mat2| -> Vec<Vec<C>> {
        let mut out = rho.clone();
        for row in out.iter_mut() {
            let mut r: Vec<C> = row.iter().map(|z| z.conj()).collect();
            apply_1q(&mut r, q, m);
            *row = r.iter().map(|z| z.conj()).collect();
        }
        for c in 0..dim {
            let mut col: Vec<C> = out.iter().map(|r| r[c]).collect();
            apply_1q(&mut col, q, m);
            for (r, v) in out.iter_mut().zip(col) {
                r[c] = v;
            }
        }
        out
    };
    let conj_2q = |rho: &Vec<Vec<C>>, a: usize, b: usize, m: &Mat4| -> Vec<Vec<C>> {
        let mut out = rho.clone();
        for row in out.iter_mut() {
            let mut r: Vec<C> = row.iter().map(|z| z.conj()).collect();
            apply_2q(&mut r, a, b, m);
            *row = r.iter().map(|z| z.conj()).collect();
        }
        for c in 0..dim {
            let mut col: Vec<C> = out.iter().map(|r| r[c]).collect();
            apply_2q(&mut col, a, b, m);
            for (r, v) in out.iter_mut().zip(col) {
                r[c] = v;
            }
        }
        out
    };
    let mix = |a: Vec<Vec<C>>, terms: Vec<Vec<Vec<C>>>, p: f64| -> Vec<Vec<C>> {
        let w = p / terms.len() as f64;
        let mut out = a;
        for row in out.iter_mut() {
            for z in row.iter_mut() {
                *z *= 1.0 - p;
            }
        }
        for t in terms {
            for (ro, rt) in out.iter_mut().zip(t) {
                for (z, zt) in ro.iter_mut().zip(rt) {
                    *z += zt * w;
                }
            }
        }
        out
    };
    let noisy_1q = |rho: Vec<Vec<C>>, q: usize, m: &Mat2| {
        let r = conj_1q(&rho, q, m);
        let terms = (1..4).map(|k| conj_1q(&r, q, &paulis[k])).collect();
        mix(r, terms, p1)
    };
    let noisy_2q = |rho: Vec<Vec<C>>, a: usize, b: usize, m: &Mat4| {
        let r = conj_2q(&rho, a, b, m);
        let mut terms = Vec::new();
        for pa in 0..4 {
            for pb in 0..4 {
                if pa + pb == 0 {
                    continue;
                }
                let mut t = conj_1q(&r, a, &paulis[pa]);
                t = conj_1q(&t, b, &paulis[pb]);
                terms.push(t);
            }
        }
        mix(r, terms, p2)
    };
    for (q, phi) in degree_angles(g, params.theta_enc).into_iter().enumerate() {
        rho = noisy_1q(rho, q, &rx(phi));
    }
    for _ in 0..params.reps {
        for &(a, b) in g.edges() {
            rho = noisy_2q(rho, a, b, &rzz(params.theta_ent));
        }
        for q in 0..n {
            rho = noisy_1q(rho, q, &rx(params.theta_mix));
        }
    }
    let mut p: Vec<f64> = (0..dim).map(|x| rho[x][x].re).collect();
    for q in 0..n {
        let bit = 1 << q;
        let old = p.clone();
        for x in 0..dim {
            p[x] = (1.0 - p_ro) * old[x] + p_ro * old[x ^ bit];
        }
    }
    p
}
