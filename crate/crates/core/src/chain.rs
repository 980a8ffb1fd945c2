//! Spin-chain Hamiltonians and the receiver phase correction.
//!
//! Sites and bond indices are 1-based; bond `k` couples sites `k` and `k + 1`.
//! Energies are in units where `hbar = 1`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString, PauliSum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// `sum_k J_k (X_k X_{k+1} + Y_k Y_{k+1})`
    Xx,
    /// `sum_k J_k (X_k X_{k+1} + Y_k Y_{k+1} + Z_k Z_{k+1})`
    Heisenberg,
    /// Explicit term list.
    Generic,
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "xx" => Ok(Model::Xx),
            "heisenberg" => Ok(Model::Heisenberg),
            "generic" => Ok(Model::Generic),
            other => Err(Error::Parse(format!("unknown model `{other}` (expected xx, heisenberg or generic)"))),
        }
    }
}

/// One explicit Hamiltonian term, optionally carrying a symbolic name for graph labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub string: PauliString,
    pub label: Option<String>,
}

/// Description of a chain Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainSpec {
    pub num_qubits: usize,
    pub model: Model,
    /// `J_1 .. J_{N-1}` for the xx and heisenberg models.
    pub couplings: Vec<f64>,
    pub terms: Vec<Term>,
    /// Optional per-site Z-field strengths `B_1 .. B_N`, added as `B_j Z_j`.
    pub fields: Vec<f64>,
}

impl ChainSpec {
    pub fn xx(num_qubits: usize, couplings: Vec<f64>) -> Self {
        ChainSpec { num_qubits, model: Model::Xx, couplings, terms: Vec::new(), fields: Vec::new() }
    }

    pub fn heisenberg(num_qubits: usize, couplings: Vec<f64>) -> Self {
        ChainSpec { num_qubits, model: Model::Heisenberg, couplings, terms: Vec::new(), fields: Vec::new() }
    }

    pub fn generic(num_qubits: usize, terms: Vec<Term>) -> Self {
        ChainSpec { num_qubits, model: Model::Generic, couplings: Vec::new(), terms, fields: Vec::new() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_qubits == 0 {
            return Err(Error::InvalidChain("chain needs at least one qubit".into()));
        }
        match self.model {
            Model::Xx | Model::Heisenberg => {
                if self.num_qubits < 2 {
                    return Err(Error::InvalidChain(format!("{:?} chain needs n >= 2", self.model)));
                }
                if self.couplings.len() != self.num_qubits - 1 {
                    return Err(Error::InvalidChain(format!(
                        "expected {} couplings for n = {}, got {}",
                        self.num_qubits - 1,
                        self.num_qubits,
                        self.couplings.len()
                    )));
                }
                if !self.terms.is_empty() {
                    return Err(Error::InvalidChain("explicit terms are only allowed with model = generic".into()));
                }
            }
            Model::Generic => {
                if let Some(t) = self.terms.iter().find(|t| t.string.num_qubits() != self.num_qubits) {
                    return Err(Error::DimensionMismatch { left: self.num_qubits, right: t.string.num_qubits() });
                }
            }
        }
        if !self.fields.is_empty() && self.fields.len() != self.num_qubits {
            return Err(Error::InvalidChain(format!(
                "expected {} field strengths, got {}",
                self.num_qubits,
                self.fields.len()
            )));
        }
        let finite = self.couplings.iter().chain(&self.fields).chain(self.terms.iter().map(|t| &t.coeff));
        if finite.clone().any(|v| !v.is_finite()) {
            return Err(Error::InvalidChain("non-finite coefficient".into()));
        }
        Ok(())
    }

    /// Symbolic names of the Hamiltonian strings: `J<k>` for bond `k`, `B<j>` for fields,
    /// and the explicit labels of generic terms.
    pub fn term_symbols(&self) -> BTreeMap<PauliString, String> {
        let mut out = BTreeMap::new();
        let n = self.num_qubits;
        if matches!(self.model, Model::Xx | Model::Heisenberg) {
            for k in 1..n.min(self.couplings.len() + 1) {
                for letter in bond_letters(self.model) {
                    if let Ok(p) = PauliString::from_sites(n, &[(k, *letter), (k + 1, *letter)]) {
                        out.insert(p, format!("J{k}"));
                    }
                }
            }
        }
        for t in &self.terms {
            if let Some(label) = &t.label {
                out.insert(t.string.clone(), label.clone());
            }
        }
        for j in 1..=self.fields.len().min(n) {
            if let Ok(p) = PauliString::single(n, j, Letter::Z) {
                out.entry(p).or_insert_with(|| format!("B{j}"));
            }
        }
        out
    }
}

fn bond_letters(model: Model) -> &'static [Letter] {
    match model {
        Model::Xx => &[Letter::X, Letter::Y],
        Model::Heisenberg => &[Letter::X, Letter::Y, Letter::Z],
        Model::Generic => &[],
    }
}

fn nearest_neighbour(n: usize, couplings: &[f64], letters: &[Letter]) -> Result<PauliSum> {
    if n < 2 {
        return Err(Error::InvalidChain(format!("chain needs n >= 2, got {n}")));
    }
    if couplings.len() != n - 1 {
        return Err(Error::InvalidChain(format!("expected {} couplings for n = {n}, got {}", n - 1, couplings.len())));
    }
    let mut sum = PauliSum::new(n);
    for (k, &j) in (1..n).zip(couplings) {
        for &l in letters {
            sum.add_term(PauliString::from_sites(n, &[(k, l), (k + 1, l)])?, j)?;
        }
    }
    Ok(sum)
}

/// `sum_k J_k (X_k X_{k+1} + Y_k Y_{k+1})`.
pub fn build_xx_chain(n: usize, couplings: &[f64]) -> Result<PauliSum> {
    nearest_neighbour(n, couplings, bond_letters(Model::Xx))
}

/// `sum_k J_k (X_k X_{k+1} + Y_k Y_{k+1} + Z_k Z_{k+1})`.
pub fn build_heisenberg_chain(n: usize, couplings: &[f64]) -> Result<PauliSum> {
    nearest_neighbour(n, couplings, bond_letters(Model::Heisenberg))
}

/// Perfect-transfer couplings `J_k = J sqrt(k (N - k))`, `k = 1 .. N-1`.
pub fn christandl_couplings(n: usize, j: f64) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidChain(format!("chain needs n >= 2, got {n}")));
    }
    Ok((1..n).map(|k| j * ((k * (n - k)) as f64).sqrt()).collect())
}

/// Assembles any [`ChainSpec`] into a Pauli sum; duplicate strings are merged.
pub fn build_generic(spec: &ChainSpec) -> Result<PauliSum> {
    spec.validate()?;
    let n = spec.num_qubits;
    let mut sum = match spec.model {
        Model::Xx => build_xx_chain(n, &spec.couplings)?,
        Model::Heisenberg => build_heisenberg_chain(n, &spec.couplings)?,
        Model::Generic => {
            let mut sum = PauliSum::new(n);
            for t in &spec.terms {
                sum.add_term(t.string.clone(), t.coeff)?;
            }
            sum
        }
    };
    for (j, &b) in spec.fields.iter().enumerate() {
        sum.add_term(PauliString::single(n, j + 1, Letter::Z)?, b)?;
    }
    Ok(sum)
}

/// `(cos phi, sin phi)` for `phi = pi (N - 1) / 2`, exact.
fn correction_angle(n: usize) -> (f64, f64) {
    match n.saturating_sub(1) % 4 {
        0 => (1.0, 0.0),
        1 => (0.0, 1.0),
        2 => (-1.0, 0.0),
        _ => (0.0, -1.0),
    }
}

/// Conjugates an observable by the receiver gate `R(N) = diag(1, e^{i pi (N-1)/2})` on site `N`.
///
/// `X_N -> cos(phi) X_N - sin(phi) Y_N`, `Y_N -> sin(phi) X_N + cos(phi) Y_N`, `Z_N` and `I_N`
/// unchanged. For `N = 3` this flips the sign of `X_3` and `Y_3`; for `N = 5` it is the identity.
pub fn apply_phase_correction(sum: &PauliSum, n: usize) -> Result<PauliSum> {
    if sum.num_qubits() != n {
        return Err(Error::DimensionMismatch { left: n, right: sum.num_qubits() });
    }
    let (c, s) = correction_angle(n);
    let mut out = PauliSum::new(n);
    for (p, w) in sum.iter() {
        match p.site_letter(n)? {
            Letter::I | Letter::Z => out.add_term(p.clone(), w)?,
            Letter::X => {
                out.add_term(p.clone(), c * w)?;
                out.add_term(p.with_letter(n, Letter::Y)?, -s * w)?;
            }
            Letter::Y => {
                out.add_term(p.with_letter(n, Letter::X)?, s * w)?;
                out.add_term(p.clone(), c * w)?;
            }
        }
    }
    Ok(out)
}

/// [`apply_phase_correction`] for a single string with unit weight.
pub fn apply_phase_correction_string(p: &PauliString, n: usize) -> Result<PauliSum> {
    apply_phase_correction(&PauliSum::from_terms(n, [(p.clone(), 1.0)])?, n)
}
