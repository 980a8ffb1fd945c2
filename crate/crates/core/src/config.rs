//! TOML chain configuration.
//!
//! ```toml
//! n = 5
//! model = "xx"              # xx | heisenberg | generic
//! couplings = [2.0, 2.449489742783178, 2.449489742783178, 2.0]
//! # christandl = 1.0        # instead of couplings: J_k = J sqrt(k (n - k))
//! fields = []               # optional Z fields B_1 .. B_n
//!
//! [[terms]]                 # generic model only
//! coeff = 1.0
//! string = "X1 X2"
//! label = "J1"              # optional, used for graph edge labels
//! ```
//!
//! The canonical form written by [`ChainConfig::canonical`] is always the
//! generic term list; `xx` and `heisenberg` are expanded when loaded.

use serde::{Deserialize, Serialize};

use crate::chain::{build_generic, christandl_couplings, ChainSpec, Model, Term};
use crate::error::{Error, Result};
use crate::pauli::PauliString;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub coeff: f64,
    pub string: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub n: usize,
    pub model: Model,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub couplings: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub christandl: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<TermConfig>,
}

impl ChainConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("chain config serializes")
    }

    /// Validated chain description.
    pub fn to_spec(&self) -> Result<ChainSpec> {
        let couplings = match (self.christandl, self.couplings.is_empty()) {
            (Some(_), false) => {
                return Err(Error::Config("give either `couplings` or `christandl`, not both".into()));
            }
            (Some(j), true) => christandl_couplings(self.n, j)?,
            (None, _) => self.couplings.clone(),
        };
        if self.model != Model::Generic && !self.terms.is_empty() {
            return Err(Error::Config("`terms` is only allowed with model = \"generic\"".into()));
        }
        if self.model == Model::Generic && !couplings.is_empty() {
            return Err(Error::Config("`couplings` is not used with model = \"generic\"; list `terms`".into()));
        }
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let string = PauliString::parse(&t.string, self.n)
                    .map_err(|e| Error::Config(format!("terms[{k}].string: {e}")))?;
                Ok(Term { coeff: t.coeff, string, label: t.label.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = ChainSpec { num_qubits: self.n, model: self.model, couplings, terms, fields: self.fields.clone() };
        spec.validate()?;
        Ok(spec)
    }

    /// Canonical generic term list of any spec, keeping bond and field symbols as labels.
    pub fn canonical(spec: &ChainSpec) -> Result<Self> {
        let h = build_generic(spec)?;
        let symbols = spec.term_symbols();
        Ok(ChainConfig {
            n: spec.num_qubits,
            model: Model::Generic,
            couplings: Vec::new(),
            christandl: None,
            fields: Vec::new(),
            terms: h
                .iter()
                .map(|(p, c)| TermConfig { coeff: c, string: p.to_string(), label: symbols.get(p).cloned() })
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::build_xx_chain;

    #[test]
    fn xx_sugar_and_christandl() {
        let cfg = ChainConfig::from_toml("n = 5\nmodel = \"xx\"\nchristandl = 1.0\n").unwrap();
        let spec = cfg.to_spec().unwrap();
        assert_eq!(spec.couplings, christandl_couplings(5, 1.0).unwrap());
        let h = build_generic(&spec).unwrap();
        assert_eq!(h, build_xx_chain(5, &spec.couplings).unwrap());
    }

    #[test]
    fn canonical_form_round_trips() {
        let spec = ChainSpec::heisenberg(3, vec![1.0, 0.5]);
        let canon = ChainConfig::canonical(&spec).unwrap();
        assert_eq!(canon.model, Model::Generic);
        let text = canon.to_toml();
        let back = ChainConfig::from_toml(&text).unwrap().to_spec().unwrap();
        assert_eq!(build_generic(&back).unwrap(), build_generic(&spec).unwrap());
        assert_eq!(back.term_symbols(), spec.term_symbols());
    }

    #[test]
    fn generic_terms() {
        let text = r#"
n = 3
model = "generic"
fields = [0.1, 0.2, 0.3]

[[terms]]
coeff = 1.0
string = "X1 X2"

[[terms]]
coeff = 1.0
string = "X2 X3"
"#;
        let spec = ChainConfig::from_toml(text).unwrap().to_spec().unwrap();
        assert_eq!(build_generic(&spec).unwrap().len(), 5);
    }

    #[test]
    fn errors_carry_locations() {
        let err = ChainConfig::from_toml("n = 3\nmodel = \"ising\"\n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        let err = ChainConfig::from_toml("n = 3\nmodel = \"xx\"\ncouplings = [1.0]\n").unwrap().to_spec();
        assert!(err.is_err());
        let bad = "n = 2\nmodel = \"generic\"\n[[terms]]\ncoeff = 1.0\nstring = \"X3\"\n";
        let err = ChainConfig::from_toml(bad).unwrap().to_spec().unwrap_err().to_string();
        assert!(err.contains("terms[0]"), "{err}");
        let both = "n = 3\nmodel = \"xx\"\ncouplings = [1.0, 1.0]\nchristandl = 1.0\n";
        assert!(ChainConfig::from_toml(both).unwrap().to_spec().is_err());
    }
}
