//! Reference computations that share no code with the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C;

/// Two photons scattered by a mode matrix, computed by expanding the
/// product of creation operators. `u[out][in]`; returns amplitudes keyed by
/// occupation tuple.
pub fn scatter_two_photons(u: &[[C; 4]; 4], inputs: [usize; 2]) -> BTreeMap<[u8; 4], C> {
    let mut poly: BTreeMap<[u8; 4], C> = BTreeMap::new();
    for i in 0..4 {
        for j in 0..4 {
            let mut key = [0u8; 4];
            key[i] += 1;
            key[j] += 1;
            *poly.entry(key).or_default() += u[i][inputs[0]] * u[j][inputs[1]];
        }
    }
    // a†^n |0⟩ = √(n!) |n⟩
    poly.into_iter()
        .map(|(k, c)| {
            let norm: f64 = k
                .iter()
                .map(|&n| if n == 2 { 2f64.sqrt() } else { 1.0 })
                .product();
            (k, c * norm)
        })
        .filter(|(_, c)| c.norm() > 1e-15)
        .collect()
}

pub fn real4(m: [[f64; 4]; 4]) -> [[C; 4]; 4] {
    m.map(|row| row.map(|x| C::new(x, 0.0)))
}

pub fn matmul4(a: &[[C; 4]; 4], b: &[[C; 4]; 4]) -> [[C; 4]; 4] {
    let mut out = [[C::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// Local label of a party holding `(h, v)` photons.
pub fn label(h: u8, v: u8) -> u8 {
    match (h, v) {
        (0, 0) => 0,
        (1, 0) => 1,
        (0, 1) => 2,
        (2, 0) => 3,
        (1, 1) => 4,
        (0, 2) => 5,
        _ => panic!("outside cutoff"),
    }
}

/// W(n) amplitudes, qubit 0 most significant.
pub fn w_amplitudes(n: usize) -> Vec<f64> {
    let mut v = vec![0.0; 1 << n];
    for q in 0..n {
        v[1 << (n - 1 - q)] = 1.0 / (n as f64).sqrt();
    }
    v
}

/// Probability of each ±1 pattern when every qubit of a real state is
/// measured along the axis tilted by `theta` from z toward x. Patterns are
/// bitmasks, bit `n-1-q` set when qubit `q` reads −1.
pub fn tilted_readout(state: &[f64], n: usize, theta: f64) -> Vec<f64> {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let plus = [c, s];
    let minus = [s, -c];
    (0..1usize << n)
        .map(|pattern| {
            let mut amp = 0.0;
            for (basis, &a) in state.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let mut term = a;
                for q in 0..n {
                    let bit = (basis >> (n - 1 - q)) & 1;
                    let e = if (pattern >> (n - 1 - q)) & 1 == 1 {
                        minus
                    } else {
                        plus
                    };
                    term *= e[bit];
                }
                amp += term;
            }
            amp * amp
        })
        .collect()
}

/// Random unitary from the QR decomposition of a complex matrix.
pub fn unitary_from_entries(dim: usize, entries: &[(f64, f64)]) -> DMatrix<C> {
    let m = DMatrix::from_fn(dim, dim, |r, c| {
        let (re, im) = entries[r * dim + c];
        C::new(re, im)
    });
    let qr = m.qr();
    let (q, r) = (qr.q(), qr.r());
    // fix column phases so the distribution is Haar-like and Q is exact
    let mut q = q;
    for j in 0..dim {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..dim {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

pub fn max_abs(m: &DMatrix<C>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
