//! Dense brute-force reference simulator.
//!
//! Operators are full `2^N x 2^N` complex matrices. Site 1 is the most
//! significant bit of a basis index, so `|b_1 b_2 ... b_N>` has index
//! `sum_j b_j 2^(N - j)`. Everything here is independent of the closure
//! machinery and is used to validate it.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::flux::{ProductState, SiteState};
use crate::pauli::{Letter, PauliString, PauliSum};

pub const DEFAULT_QUBIT_CAP: usize = 12;
/// Cap for decompositions that scan all `4^N` strings.
pub const FULL_DECOMPOSITION_CAP: usize = 8;
/// Magnitude below which decomposition coefficients are dropped.
pub const DECOMPOSITION_CUTOFF: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_cap(what: &'static str, num_qubits: usize, cap: usize) -> Result<()> {
    if num_qubits > cap {
        Err(Error::QubitCap { what, num_qubits, cap })
    } else {
        Ok(())
    }
}

/// `(x mask, z mask, number of Y letters)` with site 1 as the top bit.
fn masks(p: &PauliString) -> (usize, usize, u32) {
    let n = p.num_qubits();
    let (mut xm, mut zm, mut ny) = (0usize, 0usize, 0u32);
    for (k, letter) in p.letters().enumerate() {
        let bit = 1usize << (n - 1 - k);
        match letter {
            Letter::I => {}
            Letter::X => xm |= bit,
            Letter::Y => {
                xm |= bit;
                zm |= bit;
                ny += 1;
            }
            Letter::Z => zm |= bit,
        }
    }
    (xm, zm, ny)
}

fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => ONE,
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `P |c> = i^{#Y} (-1)^{|c & z|} |c ^ x>`.
fn action(p: &PauliString) -> impl Fn(usize) -> (usize, Complex64) {
    let (xm, zm, ny) = masks(p);
    let base = i_pow(ny);
    move |c| {
        let sign = if (c & zm).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        (c ^ xm, base * sign)
    }
}

/// Dense operator on `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    num_qubits: usize,
    matrix: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn from_matrix(num_qubits: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: matrix.nrows() });
        }
        Ok(DenseOperator { num_qubits, matrix })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `max |M - M^dagger|`.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |M^dagger M - 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.matrix.adjoint() * &self.matrix - DMatrix::identity(self.dimension(), self.dimension());
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }
}

/// Dense form of a single Pauli string.
pub fn realize_string(p: &PauliString) -> Result<DenseOperator> {
    realize(&PauliSum::from_terms(p.num_qubits(), [(p.clone(), 1.0)])?)
}

/// Dense form of a Pauli sum.
pub fn realize(h: &PauliSum) -> Result<DenseOperator> {
    let n = h.num_qubits();
    check_cap("dense realization", n, DEFAULT_QUBIT_CAP)?;
    let dim = 1usize << n;
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for (p, w) in h.iter() {
        let act = action(p);
        for c in 0..dim {
            let (r, v) = act(c);
            m[(r, c)] += v * w;
        }
    }
    Ok(DenseOperator { num_qubits: n, matrix: m })
}

/// Eigendecomposition of a Hermitian operator, reused for many propagation times.
#[derive(Clone, Debug)]
pub struct Spectrum {
    num_qubits: usize,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl Spectrum {
    pub fn new(h: &DenseOperator) -> Self {
        let eig = SymmetricEigen::new(h.matrix.clone());
        Spectrum { num_qubits: h.num_qubits, eigenvalues: eig.eigenvalues, eigenvectors: eig.eigenvectors }
    }

    pub fn of(h: &PauliSum) -> Result<Self> {
        Ok(Spectrum::new(&realize(h)?))
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// `U(t) = exp(-i H t)`.
    pub fn propagator(&self, t: f64) -> DenseOperator {
        if t == 0.0 {
            let d = self.eigenvectors.nrows();
            return DenseOperator { num_qubits: self.num_qubits, matrix: DMatrix::identity(d, d) };
        }
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= Complex64::from_polar(1.0, -self.eigenvalues[k] * t);
        }
        DenseOperator { num_qubits: self.num_qubits, matrix: scaled * v.adjoint() }
    }

    /// `U(t) |psi>`.
    pub fn evolve_state(&self, psi: &DVector<Complex64>, t: f64) -> DVector<Complex64> {
        if t == 0.0 {
            return psi.clone();
        }
        let mut w = self.eigenvectors.adjoint() * psi;
        for (k, z) in w.iter_mut().enumerate() {
            *z *= Complex64::from_polar(1.0, -self.eigenvalues[k] * t);
        }
        &self.eigenvectors * w
    }

    /// `U^dagger(t) sigma U(t)`.
    pub fn heisenberg(&self, sigma: &DenseOperator, t: f64) -> DenseOperator {
        if t == 0.0 {
            return sigma.clone();
        }
        let u = self.propagator(t);
        DenseOperator { num_qubits: self.num_qubits, matrix: u.matrix.adjoint() * &sigma.matrix * &u.matrix }
    }
}

/// `exp(-i H t)` for a Hermitian dense `H`.
pub fn propagator(h: &DenseOperator, t: f64) -> DenseOperator {
    Spectrum::new(h).propagator(t)
}

/// Heisenberg-picture operator `U^dagger(t) sigma U(t)`.
pub fn heisenberg_operator(h: &PauliSum, sigma: &PauliString, t: f64) -> Result<DenseOperator> {
    Ok(Spectrum::of(h)?.heisenberg(&realize_string(sigma)?, t))
}

/// `Tr(P M) / 2^N`.
pub fn pauli_coefficient(m: &DenseOperator, p: &PauliString) -> Result<Complex64> {
    if p.num_qubits() != m.num_qubits {
        return Err(Error::DimensionMismatch { left: m.num_qubits, right: p.num_qubits() });
    }
    let dim = m.dimension();
    let act = action(p);
    // Tr(P M) = sum_c P[c^x, c] M[c, c^x]
    let mut acc = ZERO;
    for c in 0..dim {
        let (r, v) = act(c);
        acc += v * m.matrix[(c, r)];
    }
    Ok(acc / dim as f64)
}

/// Coefficients of `m` on the given strings only.
pub fn decompose_on(m: &DenseOperator, strings: &[PauliString]) -> Result<Vec<Complex64>> {
    strings.iter().map(|p| pauli_coefficient(m, p)).collect()
}

/// All nonzero Pauli coefficients `Tr(P M) / 2^N` (magnitude above [`DECOMPOSITION_CUTOFF`]).
pub fn pauli_decompose(m: &DenseOperator) -> Result<BTreeMap<PauliString, Complex64>> {
    let n = m.num_qubits;
    check_cap("full Pauli decomposition", n, FULL_DECOMPOSITION_CAP)?;
    const LETTERS: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];
    let mut out = BTreeMap::new();
    let mut letters = vec![Letter::I; n];
    for code in 0..(1usize << (2 * n)) {
        for (k, l) in letters.iter_mut().enumerate() {
            *l = LETTERS[(code >> (2 * k)) & 3];
        }
        let p = PauliString::from_letters(&letters);
        let c = pauli_coefficient(m, &p)?;
        if c.norm() > DECOMPOSITION_CUTOFF {
            out.insert(p, c);
        }
    }
    Ok(out)
}

/// Normalized state vector of a full register.
#[derive(Clone, Debug, PartialEq)]
pub struct RegisterState {
    num_qubits: usize,
    amplitudes: DVector<Complex64>,
}

pub const STATE_NORM_TOL: f64 = 1e-12;

impl RegisterState {
    pub fn new(num_qubits: usize, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1usize << num_qubits {
            return Err(Error::DimensionMismatch { left: 1 << num_qubits, right: amplitudes.len() });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::InvalidState(format!("state norm {norm}, expected 1")));
        }
        Ok(RegisterState { num_qubits, amplitudes })
    }

    /// Basis state from bits, site 1 first.
    pub fn basis(bits: &[u8]) -> Result<Self> {
        let n = bits.len();
        let mut index = 0usize;
        for &b in bits {
            if b > 1 {
                return Err(Error::InvalidState("basis bits must be 0 or 1".into()));
            }
            index = index << 1 | b as usize;
        }
        let mut amp = DVector::from_element(1 << n, ZERO);
        amp[index] = ONE;
        Ok(RegisterState { num_qubits: n, amplitudes: amp })
    }

    /// `(|00> + |11>) / sqrt(2)`.
    pub fn bell() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let amp = DVector::from_vec(vec![Complex64::new(s, 0.0), ZERO, ZERO, Complex64::new(s, 0.0)]);
        RegisterState { num_qubits: 2, amplitudes: amp }
    }

    /// Tensor product of single-qubit pure states.
    pub fn from_product(state: &ProductState) -> Self {
        let mut amp = DVector::from_element(1, ONE);
        for s in state.sites() {
            let q = match *s {
                SiteState::Bit(0) => [ONE, ZERO],
                SiteState::Bit(_) => [ZERO, ONE],
                SiteState::Bloch([x, y, z]) => {
                    let theta = z.clamp(-1.0, 1.0).acos();
                    let phi = y.atan2(x);
                    [Complex64::new((theta / 2.0).cos(), 0.0), Complex64::from_polar((theta / 2.0).sin(), phi)]
                }
            };
            amp = DVector::from_iterator(amp.len() * 2, amp.iter().flat_map(|a| [a * q[0], a * q[1]]));
        }
        RegisterState { num_qubits: state.sites().len(), amplitudes: amp }
    }

    /// `|self> (x) |other>`.
    pub fn tensor(&self, other: &RegisterState) -> RegisterState {
        let amp = DVector::from_iterator(
            self.amplitudes.len() * other.amplitudes.len(),
            self.amplitudes.iter().flat_map(|a| other.amplitudes.iter().map(move |b| a * b)),
        );
        RegisterState { num_qubits: self.num_qubits + other.num_qubits, amplitudes: amp }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn expectation(&self, m: &DenseOperator) -> Result<Complex64> {
        if m.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch { left: m.num_qubits, right: self.num_qubits });
        }
        Ok(self.amplitudes.dotc(&(&m.matrix * &self.amplitudes)))
    }
}

/// `Tr_1[(sigma (x) 1) M] / 2` as an operator on sites `2..N`.
///
/// This collects exactly the decomposition terms of `M` whose site-1 letter is
/// `letter`, with the site-1 factor removed.
pub fn site_one_component(m: &DenseOperator, letter: Letter) -> Result<DenseOperator> {
    let n = m.num_qubits;
    if n < 2 {
        return Err(Error::InvalidChain("flux needs at least two qubits".into()));
    }
    let half = 1usize << (n - 1);
    let sigma = realize_string(&PauliString::single(1, 1, letter)?)?;
    let mut out = DMatrix::from_element(half, half, ZERO);
    for r in 0..half {
        for s in 0..half {
            let mut acc = ZERO;
            for a in 0..2 {
                for c in 0..2 {
                    let sv = sigma.matrix[(a, c)];
                    if sv != ZERO {
                        acc += sv * m.matrix[(c * half + r, a * half + s)];
                    }
                }
            }
            out[(r, s)] = acc / 2.0;
        }
    }
    Ok(DenseOperator { num_qubits: n - 1, matrix: out })
}

/// Flux from `input_letter` on site 1 into the evolved output observable,
/// for an arbitrary (possibly entangled) register state on sites `2..N`.
pub fn flux_via_oracle(
    h: &PauliSum,
    output_site: usize,
    output_letter: Letter,
    input_letter: Letter,
    register: &RegisterState,
    t: f64,
) -> Result<f64> {
    let spectrum = Spectrum::of(h)?;
    flux_with_spectrum(&spectrum, output_site, output_letter, input_letter, register, t)
}

/// [`flux_via_oracle`] with a precomputed spectrum.
pub fn flux_with_spectrum(
    spectrum: &Spectrum,
    output_site: usize,
    output_letter: Letter,
    input_letter: Letter,
    register: &RegisterState,
    t: f64,
) -> Result<f64> {
    let n = spectrum.num_qubits;
    if register.num_qubits + 1 != n {
        return Err(Error::DimensionMismatch { left: n - 1, right: register.num_qubits });
    }
    let sigma = realize_string(&PauliString::single(n, output_site, output_letter)?)?;
    let evolved = spectrum.heisenberg(&sigma, t);
    let part = site_one_component(&evolved, input_letter)?;
    Ok(register.expectation(&part)?.re)
}

/// Population of `|1>` on site `N` after evolving `|1>|0...0>` for time `t`.
pub fn worst_case_fidelity(h: &PauliSum, t: f64) -> Result<f64> {
    Ok(fidelity_with_spectrum(&Spectrum::of(h)?, t))
}

/// [`worst_case_fidelity`] with a precomputed spectrum.
pub fn fidelity_with_spectrum(spectrum: &Spectrum, t: f64) -> f64 {
    let n = spectrum.num_qubits;
    let dim = 1usize << n;
    let mut psi = DVector::from_element(dim, ZERO);
    psi[dim >> 1] = ONE;
    let out = spectrum.evolve_state(&psi, t);
    // partial trace onto site N: sum populations with the last bit set
    out.iter().enumerate().filter(|(k, _)| k & 1 == 1).map(|(_, z)| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{build_heisenberg_chain, build_xx_chain};
    use std::f64::consts::PI;

    fn ps(s: &str, n: usize) -> PauliString {
        PauliString::parse(s, n).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_qubit_matrices() {
        let x = realize_string(&ps("X1", 1)).unwrap();
        assert_eq!(x.matrix(), &DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]));
        let y = realize_string(&ps("Y1", 1)).unwrap();
        assert_eq!(y.matrix(), &DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]));
        let z = realize_string(&ps("Z1", 1)).unwrap();
        assert_eq!(z.matrix(), &DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]));
    }

    #[test]
    fn site_one_is_the_top_bit() {
        // X1 on |00> gives |10>, index 2
        let x1 = realize_string(&ps("X1", 2)).unwrap();
        assert_eq!(x1.matrix()[(2, 0)], ONE);
    }

    #[test]
    fn chain_realization() {
        let h = realize(&build_xx_chain(3, &[1.0, 1.0]).unwrap()).unwrap();
        assert!(h.trace().norm() < 1e-15);
        assert!(h.hermiticity_defect() < 1e-15);
        let s = Spectrum::of(&build_xx_chain(2, &[1.0]).unwrap()).unwrap();
        let mut ev: Vec<f64> = s.eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        for (g, w) in ev.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
            assert!((g - w).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn propagator_properties() {
        let s = Spectrum::of(&build_heisenberg_chain(3, &[0.4, 1.2]).unwrap()).unwrap();
        let id = s.propagator(0.0);
        assert!((id.matrix() - DMatrix::<Complex64>::identity(8, 8)).iter().all(|z| z.norm() < 1e-12));
        let (t1, t2) = (0.37, 1.91);
        let prod = s.propagator(t1).matrix() * s.propagator(t2).matrix();
        let diff = prod - s.propagator(t1 + t2).matrix();
        assert!(diff.iter().all(|z| z.norm() < 1e-9));
        assert!(s.propagator(2.5).unitarity_defect() < 1e-10);
    }

    #[test]
    fn three_site_transfer_amplitude() {
        let s = Spectrum::of(&build_xx_chain(3, &[1.0, 1.0]).unwrap()).unwrap();
        let u = s.propagator(PI / (2.0 * 2f64.sqrt()));
        // |100> is index 4, |001> is index 1
        assert!((u.matrix()[(1, 4)].norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn heisenberg_operator_support() {
        let h = build_xx_chain(3, &[1.0, 1.0]).unwrap();
        let x3 = ps("X3", 3);
        let m0 = heisenberg_operator(&h, &x3, 0.0).unwrap();
        assert!((m0.matrix() - realize_string(&x3).unwrap().matrix()).iter().all(|z| z.norm() < 1e-12));
        let m = heisenberg_operator(&h, &x3, 0.43).unwrap();
        let d = pauli_decompose(&m).unwrap();
        let support: Vec<String> = d.keys().map(|p| p.to_string()).collect();
        assert_eq!(support, ["X3", "Y2 Z3", "X1 Z2 Z3"]);
        let w = 2f64.sqrt() * 0.43;
        assert!((d[&ps("X1 Z2 Z3", 3)].re + w.sin().powi(2)).abs() < 1e-12);
        // a conserved seed stays put
        let parity = ps("Z1 Z2 Z3", 3);
        let m = heisenberg_operator(&h, &parity, 1.7).unwrap();
        assert!((m.matrix() - realize_string(&parity).unwrap().matrix()).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn identity_decomposes_to_identity() {
        let id = DenseOperator::from_matrix(2, DMatrix::identity(4, 4)).unwrap();
        let d = pauli_decompose(&id).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[&PauliString::identity(2)], ONE);
    }

    #[test]
    fn full_decomposition_is_capped() {
        let m = DenseOperator::from_matrix(9, DMatrix::identity(512, 512)).unwrap();
        assert!(matches!(pauli_decompose(&m), Err(Error::QubitCap { .. })));
        assert!(realize(&PauliSum::new(13)).is_err());
    }

    #[test]
    fn fidelity_endpoints() {
        let h = build_xx_chain(3, &[1.0, 1.0]).unwrap();
        assert!(worst_case_fidelity(&h, 0.0).unwrap().abs() < 1e-15);
        assert!((worst_case_fidelity(&h, PI / (2.0 * 2f64.sqrt())).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn oracle_flux_at_transfer_time() {
        let h = build_xx_chain(3, &[1.0, 1.0]).unwrap();
        let reg = RegisterState::basis(&[0, 0]).unwrap();
        let t = PI / (2.0 * 2f64.sqrt());
        let f = flux_via_oracle(&h, 3, Letter::X, Letter::X, &reg, t).unwrap();
        assert!((f + 1.0).abs() < 1e-9);
        let bell = flux_via_oracle(&h, 3, Letter::X, Letter::X, &RegisterState::bell(), 0.7).unwrap();
        assert!(bell.is_finite() && bell.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn product_register_from_bloch_vectors() {
        let st = ProductState::new(vec![SiteState::Bloch([1.0, 0.0, 0.0]), SiteState::Bit(1)]).unwrap();
        let reg = RegisterState::from_product(&st);
        let x = realize_string(&ps("X1", 2)).unwrap();
        let z = realize_string(&ps("Z2", 2)).unwrap();
        assert!((reg.expectation(&x).unwrap().re - 1.0).abs() < 1e-15);
        assert!((reg.expectation(&z).unwrap().re + 1.0).abs() < 1e-15);
    }
}
