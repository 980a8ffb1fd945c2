//! Coefficient evolution on a closure and information flux.
//!
//! The flux from input letter `S'` on site 1 to the evolved output observable is
//! the sum, over closure nodes whose site-1 letter is `S'`, of the node coefficient
//! times the expectation of the rest of the string (sites `2..N`) in the known
//! register state. Only product register states are handled here; entangled
//! registers go through [`crate::oracle::flux_via_oracle`].

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::chain::apply_phase_correction_string;
use crate::error::{Error, Result};
use crate::graph::{build_closure, generator_matrix, ClosureGraph, GeneratorMatrix, DEFAULT_MAX_NODES};
use crate::pauli::{Letter, PauliString, PauliSum};

pub const DEFAULT_CUTOFF: usize = 60;

/// Coefficients `gamma_j(t)` aligned with the closure node order.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientVector {
    pub time: f64,
    pub values: Vec<f64>,
}

impl CoefficientVector {
    /// Value 1 on the seed (node 0), 0 elsewhere.
    pub fn seed(dimension: usize) -> Self {
        let mut values = vec![0.0; dimension];
        if let Some(v) = values.first_mut() {
            *v = 1.0;
        }
        CoefficientVector { time: 0.0, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm_squared(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

/// Truncated series `sum_{l=0}^{M} t^l / l! A^l gamma(0)`.
///
/// The `l = 0` term is included, so `cutoff = 0` returns the seed indicator.
/// A warning is logged when `t * |A| > M / e`, where the truncation is still far
/// from converged.
pub fn evolve_taylor(a: &GeneratorMatrix, t: f64, cutoff: usize) -> CoefficientVector {
    let n = a.dimension();
    let scale = t.abs() * a.norm_inf();
    if scale > cutoff as f64 / std::f64::consts::E {
        log::warn!("taylor cutoff {cutoff} is short for t*|A| = {scale:.3}; results may not have converged");
    }
    let mut term = DVector::from_vec(CoefficientVector::seed(n).values);
    let mut sum = term.clone();
    for l in 1..=cutoff {
        term = a.matrix() * term * (t / l as f64);
        sum += &term;
    }
    CoefficientVector { time: t, values: sum.iter().copied().collect() }
}

/// Recurrence coefficients in the half-rate convention.
///
/// Returns `gamma^(l) = (A / 2)^l gamma(0)` for `l = 0..=order`, so that
/// `gamma(t) = sum_l (2t)^l / l! gamma^(l)`. For XX chains these are the
/// integer-linear recurrences in the couplings.
pub fn recurrence_terms(a: &GeneratorMatrix, order: usize) -> Vec<Vec<f64>> {
    let half = a.matrix() * 0.5;
    let mut out = Vec::with_capacity(order + 1);
    let mut cur = DVector::from_vec(CoefficientVector::seed(a.dimension()).values);
    out.push(cur.iter().copied().collect());
    for _ in 0..order {
        cur = &half * cur;
        out.push(cur.iter().copied().collect());
    }
    out
}

/// Exact propagation `exp(tA) gamma(0)` with a one-off decomposition of `A`.
///
/// For antisymmetric `A` (every real-coefficient Hamiltonian) the Hermitian
/// matrix `iA` is diagonalized once and each time costs `O(n^2)`. Other
/// generators fall back to a dense matrix exponential per time.
#[derive(Clone, Debug)]
pub struct ExactEvolver {
    kind: EvolverKind,
}

#[derive(Clone, Debug)]
enum EvolverKind {
    Spectral { eigenvalues: DVector<f64>, eigenvectors: DMatrix<Complex64>, seed_weights: DVector<Complex64> },
    Dense(DMatrix<f64>),
}

impl ExactEvolver {
    pub fn dimension(&self) -> usize {
        match &self.kind {
            EvolverKind::Spectral { eigenvalues, .. } => eigenvalues.len(),
            EvolverKind::Dense(a) => a.nrows(),
        }
    }

    pub fn new(a: &GeneratorMatrix) -> Self {
        let n = a.dimension();
        let tol = 1e-13 * a.matrix().amax().max(1.0);
        let kind = if n > 0 && a.is_antisymmetric(tol) {
            let h = a.matrix().map(|v| Complex64::new(0.0, v));
            let eig = SymmetricEigen::new(h);
            let seed_weights = eig.eigenvectors.row(0).transpose().map(|z| z.conj());
            EvolverKind::Spectral { eigenvalues: eig.eigenvalues, eigenvectors: eig.eigenvectors, seed_weights }
        } else {
            EvolverKind::Dense(a.matrix().clone())
        };
        ExactEvolver { kind }
    }

    pub fn evolve(&self, t: f64) -> CoefficientVector {
        if t == 0.0 {
            return CoefficientVector::seed(self.dimension());
        }
        let values = match &self.kind {
            EvolverKind::Spectral { eigenvalues, eigenvectors, seed_weights } => {
                // A = -i H, exp(tA) = V diag(exp(-i lambda t)) V^dagger
                let phased = DVector::from_iterator(
                    eigenvalues.len(),
                    eigenvalues.iter().zip(seed_weights.iter()).map(|(l, w)| Complex64::from_polar(1.0, -l * t) * w),
                );
                (eigenvectors * phased).iter().map(|z| z.re).collect()
            }
            EvolverKind::Dense(a) => {
                let e = (a * t).exp();
                e.column(0).iter().copied().collect()
            }
        };
        CoefficientVector { time: t, values }
    }
}

/// `exp(tA) gamma(0)`; prefer [`ExactEvolver`] when evaluating many times.
pub fn evolve_exact(a: &GeneratorMatrix, t: f64) -> CoefficientVector {
    ExactEvolver::new(a).evolve(t)
}

/// Hard-coded closed-form coefficient sets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosedFormModel {
    /// Three-site XX chain with uniform coupling `j`, seed `X3` (the alpha set).
    Xx3Uniform { j: f64 },
    /// Same chain, seed `Y3` (the beta set).
    Xx3UniformY { j: f64 },
    /// Five-site perfect-transfer chain `J_k = j sqrt(k (5 - k))`, seed `X5`.
    Christandl5 { j: f64 },
}

impl ClosedFormModel {
    pub fn from_name(name: &str, j: f64) -> Result<Self> {
        match name {
            "xx3_uniform" => Ok(ClosedFormModel::Xx3Uniform { j }),
            "xx3_uniform_y" => Ok(ClosedFormModel::Xx3UniformY { j }),
            "christandl5" => Ok(ClosedFormModel::Christandl5 { j }),
            other => Err(Error::UnknownModel(other.to_string())),
        }
    }

    pub fn num_qubits(&self) -> usize {
        match self {
            ClosedFormModel::Xx3Uniform { .. } | ClosedFormModel::Xx3UniformY { .. } => 3,
            ClosedFormModel::Christandl5 { .. } => 5,
        }
    }
}

/// Closed-form coefficients, listed from the site-1-bearing string towards the seed.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm {
    pub time: f64,
    pub strings: Vec<PauliString>,
    pub values: Vec<f64>,
}

impl ClosedForm {
    pub fn value_of(&self, p: &PauliString) -> Option<f64> {
        self.strings.iter().position(|q| q == p).map(|k| self.values[k])
    }
}

pub fn closed_form_coefficients(model: ClosedFormModel, t: f64) -> ClosedForm {
    let n = model.num_qubits();
    let parse = |s: &str| PauliString::parse(s, n).expect("static string");
    let (labels, values): (&[&str], Vec<f64>) = match model {
        ClosedFormModel::Xx3Uniform { j } => {
            let w = 2f64.sqrt() * j * t;
            (&["X1 Z2 Z3", "Y2 Z3", "X3"], vec![-w.sin().powi(2), (2.0 * w).sin() / 2f64.sqrt(), w.cos().powi(2)])
        }
        ClosedFormModel::Xx3UniformY { j } => {
            let w = 2f64.sqrt() * j * t;
            (&["Y1 Z2 Z3", "X2 Z3", "Y3"], vec![-w.sin().powi(2), -(2.0 * w).sin() / 2f64.sqrt(), w.cos().powi(2)])
        }
        ClosedFormModel::Christandl5 { j } => {
            let (s, c) = (2.0 * j * t).sin_cos();
            (
                &["X1 Z2 Z3 Z4 Z5", "Y2 Z3 Z4 Z5", "X3 Z4 Z5", "Y4 Z5", "X5"],
                vec![
                    s.powi(4),
                    -2.0 * c * s.powi(3),
                    -(3.0f64 / 8.0).sqrt() * (4.0 * j * t).sin().powi(2),
                    2.0 * c.powi(3) * s,
                    c.powi(4),
                ],
            )
        }
    };
    ClosedForm { time: t, strings: labels.iter().map(|s| parse(s)).collect(), values }
}

/// State of one register qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SiteState {
    /// Computational basis state `|0>` or `|1>`.
    Bit(u8),
    /// Pure state given by its unit Bloch vector `(x, y, z)`.
    Bloch([f64; 3]),
}

impl SiteState {
    fn expectation(&self, letter: Letter) -> f64 {
        match (self, letter) {
            (_, Letter::I) => 1.0,
            (SiteState::Bit(_), Letter::X | Letter::Y) => 0.0,
            (SiteState::Bit(b), Letter::Z) => {
                if *b == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
            (SiteState::Bloch(n), Letter::X) => n[0],
            (SiteState::Bloch(n), Letter::Y) => n[1],
            (SiteState::Bloch(n), Letter::Z) => n[2],
        }
    }
}

pub const BLOCH_NORM_TOL: f64 = 1e-12;

/// Product state of register sites `2..N` (entry `k` is site `k + 2`).
#[derive(Clone, Debug, PartialEq)]
pub struct ProductState {
    sites: Vec<SiteState>,
}

impl ProductState {
    pub fn new(sites: Vec<SiteState>) -> Result<Self> {
        for (k, s) in sites.iter().enumerate() {
            match s {
                SiteState::Bit(b) if *b > 1 => {
                    return Err(Error::InvalidState(format!("site {}: basis bit must be 0 or 1", k + 2)))
                }
                SiteState::Bloch(v) => {
                    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if (norm - 1.0).abs() > BLOCH_NORM_TOL {
                        return Err(Error::InvalidState(format!(
                            "site {}: Bloch vector has norm {norm}, expected 1",
                            k + 2
                        )));
                    }
                }
                _ => {}
            }
        }
        Ok(ProductState { sites })
    }

    /// `|0...0>` on sites `2..N`.
    pub fn all_zero(num_qubits: usize) -> Self {
        ProductState { sites: vec![SiteState::Bit(0); num_qubits.saturating_sub(1)] }
    }

    /// Parses a bit string for sites `2..N`, e.g. `"00"`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let sites = bits
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(SiteState::Bit(0)),
                '1' => Ok(SiteState::Bit(1)),
                other => Err(Error::Parse(format!("register bit must be 0 or 1, got `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        ProductState::new(sites)
    }

    pub fn sites(&self) -> &[SiteState] {
        &self.sites
    }

    /// Number of qubits of the full chain (register plus input site).
    pub fn chain_len(&self) -> usize {
        self.sites.len() + 1
    }
}

/// Expectation of the sites `2..N` part of `p` in `state`; the site-1 letter is ignored.
pub fn product_expectation(p: &PauliString, state: &ProductState) -> Result<f64> {
    if state.chain_len() != p.num_qubits() {
        return Err(Error::DimensionMismatch { left: p.num_qubits(), right: state.chain_len() });
    }
    Ok(p.letters().skip(1).zip(state.sites()).map(|(l, s)| s.expectation(l)).product())
}

/// Flux from input letter `input` on site 1 into the evolved seed of `g`.
pub fn information_flux(
    g: &ClosureGraph,
    coeffs: &CoefficientVector,
    input: Letter,
    state: &ProductState,
) -> Result<f64> {
    if coeffs.len() != g.len() {
        return Err(Error::DimensionMismatch { left: g.len(), right: coeffs.len() });
    }
    let mut flux = 0.0;
    for (p, &c) in g.nodes().iter().zip(&coeffs.values) {
        if p.site_letter(1)? == input {
            flux += c * product_expectation(p, state)?;
        }
    }
    Ok(flux)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum Method {
    #[default]
    Exact,
    Taylor {
        cutoff: usize,
    },
}

/// Evolution on one closure by the chosen method.
#[derive(Clone, Debug)]
pub struct Evolution {
    graph: ClosureGraph,
    generator: GeneratorMatrix,
    method: Method,
    exact: Option<ExactEvolver>,
}

impl Evolution {
    pub fn new(graph: ClosureGraph, method: Method) -> Self {
        let generator = generator_matrix(&graph);
        let exact = matches!(method, Method::Exact).then(|| ExactEvolver::new(&generator));
        Evolution { graph, generator, method, exact }
    }

    pub fn graph(&self) -> &ClosureGraph {
        &self.graph
    }

    pub fn generator(&self) -> &GeneratorMatrix {
        &self.generator
    }

    pub fn coefficients(&self, t: f64) -> CoefficientVector {
        match (self.method, &self.exact) {
            (Method::Exact, Some(e)) => e.evolve(t),
            (Method::Taylor { cutoff }, _) => evolve_taylor(&self.generator, t, cutoff),
            (Method::Exact, None) => evolve_exact(&self.generator, t),
        }
    }
}

/// Flux time series with its metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct FluxSeries {
    pub times: Vec<f64>,
    pub flux: Vec<f64>,
    pub input_letter: Letter,
    pub output_letter: Letter,
    pub output_site: usize,
    pub phase_corrected: bool,
}

impl FluxSeries {
    /// `t,flux` with shortest round-trip float formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,flux\n");
        for (t, f) in self.times.iter().zip(&self.flux) {
            let _ = writeln!(out, "{t:?},{f:?}");
        }
        out
    }

    /// Index of the first maximum of `flux`.
    pub fn argmax(&self) -> Option<usize> {
        argmax(&self.flux)
    }
}

/// Index of the first maximum; `None` for an empty slice.
pub fn argmax(values: &[f64]) -> Option<usize> {
    values
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (k, &v)| match best {
            Some((_, b)) if b >= v => best,
            _ => Some((k, v)),
        })
        .map(|(k, _)| k)
}

/// Full description of a flux evaluation.
#[derive(Clone, Debug)]
pub struct FluxProblem {
    pub hamiltonian: PauliSum,
    pub output_site: usize,
    pub output_letter: Letter,
    pub input_letter: Letter,
    pub state: ProductState,
    pub method: Method,
    pub max_nodes: usize,
    /// Conjugate the output observable by the receiver gate `R(N)` first.
    pub phase_corrected: bool,
}

impl FluxProblem {
    pub fn new(hamiltonian: PauliSum, output_site: usize, output_letter: Letter, input_letter: Letter) -> Self {
        let n = hamiltonian.num_qubits();
        FluxProblem {
            hamiltonian,
            output_site,
            output_letter,
            input_letter,
            state: ProductState::all_zero(n),
            method: Method::Exact,
            max_nodes: DEFAULT_MAX_NODES,
            phase_corrected: false,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.hamiltonian.num_qubits()
    }

    /// Output observable, after the optional receiver correction.
    pub fn observable(&self) -> Result<PauliSum> {
        let n = self.num_qubits();
        let seed = PauliString::single(n, self.output_site, self.output_letter)?;
        if self.phase_corrected {
            apply_phase_correction_string(&seed, n)
        } else {
            PauliSum::from_terms(n, [(seed, 1.0)])
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_qubits();
        if self.output_site == 0 || self.output_site > n {
            return Err(Error::SiteOutOfRange { site: self.output_site, num_qubits: n });
        }
        if self.state.chain_len() != n {
            return Err(Error::InvalidState(format!(
                "register state covers {} sites, chain has {} (expected N - 1 = {})",
                self.state.sites().len(),
                n,
                n - 1
            )));
        }
        if self.max_nodes == 0 {
            return Err(Error::Config("max_nodes must be at least 1".into()));
        }
        Ok(())
    }

    /// One weighted evolution per string of the output observable.
    pub fn evolutions(&self) -> Result<Vec<(f64, Evolution)>> {
        self.validate()?;
        self.observable()?
            .iter()
            .map(|(p, w)| {
                let g = build_closure(&self.hamiltonian, p, self.max_nodes)?;
                Ok((w, Evolution::new(g, self.method)))
            })
            .collect()
    }

    pub fn series(&self, times: &[f64]) -> Result<FluxSeries> {
        let evolutions = self.evolutions()?;
        let mut flux = Vec::with_capacity(times.len());
        for &t in times {
            let mut total = 0.0;
            for (w, ev) in &evolutions {
                total += w * information_flux(ev.graph(), &ev.coefficients(t), self.input_letter, &self.state)?;
            }
            flux.push(total);
        }
        Ok(FluxSeries {
            times: times.to_vec(),
            flux,
            input_letter: self.input_letter,
            output_letter: self.output_letter,
            output_site: self.output_site,
            phase_corrected: self.phase_corrected,
        })
    }
}

/// Raw flux series; builds the closure once and evolves it per grid point.
#[allow(clippy::too_many_arguments)]
pub fn flux_series(
    h: &PauliSum,
    output_site: usize,
    output_letter: Letter,
    input_letter: Letter,
    state: &ProductState,
    times: &[f64],
    method: Method,
) -> Result<FluxSeries> {
    let mut problem = FluxProblem::new(h.clone(), output_site, output_letter, input_letter);
    problem.state = state.clone();
    problem.method = method;
    problem.series(times)
}

/// `t,gamma_1,...,gamma_k` rows, columns in closure node order.
pub fn coefficients_csv(rows: &[CoefficientVector]) -> String {
    let k = rows.first().map_or(0, |r| r.len());
    let mut out = String::from("t");
    for j in 1..=k {
        let _ = write!(out, ",gamma_{j}");
    }
    out.push('\n');
    for r in rows {
        let _ = write!(out, "{:?}", r.time);
        for v in &r.values {
            let _ = write!(out, ",{v:?}");
        }
        out.push('\n');
    }
    out
}
