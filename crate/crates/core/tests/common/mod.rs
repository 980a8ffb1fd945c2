//! Kronecker-product reference simulator for integration tests.
//!
//! Everything here is built from explicit 2x2 matrices and `kron`, with no
//! use of the crate's bitmask arithmetic or its dense simulator.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;
use spinflux::{Letter, PauliString, PauliSum};

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn pauli(letter: Letter) -> DMatrix<C> {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match letter {
        Letter::I => DMatrix::from_row_slice(2, 2, &[l, o, o, l]),
        Letter::X => DMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        Letter::Y => DMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        Letter::Z => DMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
    }
}

/// Site 1 is the leftmost factor.
pub fn kron_all(factors: &[DMatrix<C>]) -> DMatrix<C> {
    factors.iter().fold(DMatrix::from_element(1, 1, c(1.0, 0.0)), |acc, f| acc.kronecker(f))
}

pub fn string_matrix(p: &PauliString) -> DMatrix<C> {
    kron_all(&p.letters().map(pauli).collect::<Vec<_>>())
}

pub fn sum_matrix(h: &PauliSum) -> DMatrix<C> {
    let d = 1usize << h.num_qubits();
    h.iter().fold(DMatrix::zeros(d, d), |acc, (p, w)| acc + string_matrix(p) * c(w, 0.0))
}

/// Tr(P M) / 2^N.
pub fn coefficient(m: &DMatrix<C>, p: &PauliString) -> C {
    let pm = string_matrix(p);
    let d = m.nrows();
    let mut acc = c(0.0, 0.0);
    for r in 0..d {
        for k in 0..d {
            acc += pm[(r, k)] * m[(k, r)];
        }
    }
    acc / d as f64
}

pub struct Reference {
    vectors: DMatrix<C>,
    energies: DVector<f64>,
}

impl Reference {
    pub fn new(h: &PauliSum) -> Self {
        let eig = sum_matrix(h).symmetric_eigen();
        Reference { vectors: eig.eigenvectors, energies: eig.eigenvalues }
    }

    /// exp(-i H t)
    pub fn unitary(&self, t: f64) -> DMatrix<C> {
        let phases = DMatrix::from_diagonal(&self.energies.map(|e| C::from_polar(1.0, -e * t)));
        &self.vectors * phases * self.vectors.adjoint()
    }

    /// U^dagger M U
    pub fn heisenberg(&self, m: &DMatrix<C>, t: f64) -> DMatrix<C> {
        let u = self.unitary(t);
        u.adjoint() * m * u
    }
}

pub fn ket(bits: &[u8]) -> DVector<C> {
    let zero = DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]);
    let one = DVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]);
    bits.iter().fold(DVector::from_element(1, c(1.0, 0.0)), |acc, &b| acc.kronecker(if b == 0 { &zero } else { &one }))
}

/// 1/2 <psi0| Tr_1[(sigma x I) M] |psi0> for a computational-basis register on sites 2..N.
pub fn flux(m: &DMatrix<C>, input: Letter, register: &[u8]) -> f64 {
    let sigma = pauli(input);
    let mut acc = c(0.0, 0.0);
    for a in 0..2u8 {
        for b in 0..2u8 {
            if sigma[(a as usize, b as usize)] == c(0.0, 0.0) {
                continue;
            }
            let mut left = vec![b];
            left.extend_from_slice(register);
            let mut right = vec![a];
            right.extend_from_slice(register);
            let elem = (ket(&left).adjoint() * m * ket(&right))[(0, 0)];
            acc += sigma[(a as usize, b as usize)] * elem;
        }
    }
    acc.re / 2.0
}

/// Population of |1> on site N after sending |1> from site 1 into |0...0>.
pub fn fidelity(r: &Reference, n: usize, t: f64) -> f64 {
    let mut bits = vec![0u8; n];
    bits[0] = 1;
    let psi = r.unitary(t) * ket(&bits);
    (0..psi.len()).filter(|k| k % 2 == 1).map(|k| psi[k].norm_sqr()).sum()
}

/// Receiver correction diag(1, e^{i pi (N-1)/2}) on site N, as a full register operator.
pub fn receiver_gate(n: usize) -> DMatrix<C> {
    let phi = std::f64::consts::PI * (n as f64 - 1.0) / 2.0;
    let mut gate = DMatrix::identity(2, 2);
    gate[(1, 1)] = C::from_polar(1.0, phi);
    let mut factors = vec![DMatrix::identity(2, 2); n - 1];
    factors.push(gate);
    kron_all(&factors)
}

pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![start];
    }
    (0..points).map(|k| start + (stop - start) * k as f64 / (points - 1) as f64).collect()
}

pub fn first_argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (k, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = k;
        }
    }
    best
}
