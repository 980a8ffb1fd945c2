//! Pauli strings, exact phases and real-weighted Pauli sums.
//!
//! A [`PauliString`] is stored as a pair of bitmasks (X part and Z part) with
//! site `j` (1-based) at bit `j - 1`. A letter is encoded as
//!
//! | letter | x | z |
//! |--------|---|---|
//! | I      | 0 | 0 |
//! | X      | 1 | 0 |
//! | Y      | 1 | 1 |
//! | Z      | 0 | 1 |
//!
//! so that `Y = i X Z` sitewise. Strings carry no phase; products return a
//! [`PhasedPauli`] whose phase is an exact fourth root of unity.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Mul, Neg};

use num_complex::Complex64;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// Single-site Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl std::str::FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Letter::from_char(c).ok_or_else(|| Error::Parse(format!("unknown Pauli letter `{s}`"))),
            _ => Err(Error::Parse(format!("expected a single Pauli letter, got `{s}`"))),
        }
    }
}

/// Exact phase `i^k`, `k in 0..4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u32) -> Self {
        Phase((k % 4) as u8)
    }

    /// Exponent `k` of `i^k`.
    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl Neg for Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        self * Phase::MINUS_ONE
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        })
    }
}

/// Phase-free tensor product of Pauli letters over `num_qubits` sites.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    num_qubits: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

impl PauliString {
    pub fn identity(num_qubits: usize) -> Self {
        let words = num_qubits.div_ceil(WORD).max(1);
        PauliString { num_qubits, x: vec![0; words], z: vec![0; words] }
    }

    /// Builds a string from its letters, site 1 first.
    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut p = PauliString::identity(letters.len());
        for (k, &l) in letters.iter().enumerate() {
            p.put(k, l);
        }
        p
    }

    /// Single-site operator `letter` acting on `site` (1-based).
    pub fn single(num_qubits: usize, site: usize, letter: Letter) -> Result<Self> {
        Self::from_sites(num_qubits, &[(site, letter)])
    }

    /// Builds a string from `(site, letter)` pairs, sites 1-based; unlisted sites are identity.
    pub fn from_sites(num_qubits: usize, sites: &[(usize, Letter)]) -> Result<Self> {
        let mut p = PauliString::identity(num_qubits);
        for &(site, letter) in sites {
            p.check_site(site)?;
            p.put(site - 1, letter);
        }
        Ok(p)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).map(|(x, z)| (x | z).count_ones() as usize).sum()
    }

    /// Letter at `site` (1-based).
    pub fn site_letter(&self, site: usize) -> Result<Letter> {
        self.check_site(site)?;
        Ok(self.letter_at(site - 1))
    }

    /// Returns a copy with the letter at `site` (1-based) replaced.
    pub fn with_letter(&self, site: usize, letter: Letter) -> Result<Self> {
        self.check_site(site)?;
        let mut p = self.clone();
        p.put(site - 1, letter);
        Ok(p)
    }

    /// Letters, site 1 first.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.num_qubits).map(move |k| self.letter_at(k))
    }

    /// Non-identity `(site, letter)` pairs, sites 1-based.
    pub fn support(&self) -> impl Iterator<Item = (usize, Letter)> + '_ {
        self.letters().enumerate().filter(|(_, l)| *l != Letter::I).map(|(k, l)| (k + 1, l))
    }

    /// Parses the site-indexed rendering, e.g. `"X1 Z2 Z3"` or `"I"`.
    ///
    /// Letters and indices may also be written without spaces (`"X1Z2Z3"`).
    pub fn parse(text: &str, num_qubits: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty Pauli string".into()));
        }
        if text.eq_ignore_ascii_case("I") {
            return Ok(PauliString::identity(num_qubits));
        }
        let mut p = PauliString::identity(num_qubits);
        let mut seen = vec![false; num_qubits];
        let mut chars = text.chars().filter(|c| !c.is_whitespace() && *c != '*').peekable();
        while let Some(c) = chars.next() {
            let letter =
                Letter::from_char(c).ok_or_else(|| Error::Parse(format!("unexpected character `{c}` in `{text}`")))?;
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let site: usize =
                digits.parse().map_err(|_| Error::Parse(format!("letter `{c}` without a site index in `{text}`")))?;
            if site == 0 || site > num_qubits {
                return Err(Error::Parse(format!("site {site} out of range 1..={num_qubits} in `{text}`")));
            }
            if std::mem::replace(&mut seen[site - 1], true) {
                return Err(Error::Parse(format!("site {site} given twice in `{text}`")));
            }
            p.put(site - 1, letter);
        }
        Ok(p)
    }

    /// Exact product `self * rhs`.
    pub fn multiply(&self, rhs: &PauliString) -> Result<PhasedPauli> {
        self.check_same_size(rhs)?;
        // P = i^{|x&z|} X^x Z^z; moving Z^{z1} past X^{x2} costs (-1)^{|z1&x2|}.
        let mut exp: u32 = 0;
        let mut out = PauliString::identity(self.num_qubits);
        for w in 0..self.x.len() {
            let (x1, z1, x2, z2) = (self.x[w], self.z[w], rhs.x[w], rhs.z[w]);
            let (x3, z3) = (x1 ^ x2, z1 ^ z2);
            exp += (x1 & z1).count_ones() + (x2 & z2).count_ones() + 2 * (z1 & x2).count_ones();
            exp += 3 * (x3 & z3).count_ones();
            out.x[w] = x3;
            out.z[w] = z3;
        }
        Ok(PhasedPauli { phase: Phase::from_exponent(exp), string: out })
    }

    /// True when the two strings commute.
    pub fn commutes_with(&self, rhs: &PauliString) -> Result<bool> {
        self.check_same_size(rhs)?;
        let odd = self
            .x
            .iter()
            .zip(&self.z)
            .zip(rhs.x.iter().zip(&rhs.z))
            .map(|((x1, z1), (x2, z2))| ((x1 & z2) ^ (z1 & x2)).count_ones())
            .sum::<u32>()
            % 2;
        Ok(odd == 0)
    }

    /// `[self, rhs]`; `None` when the strings commute, otherwise `2 * self * rhs`.
    pub fn commutator(&self, rhs: &PauliString) -> Result<Option<ScaledPauli>> {
        if self.commutes_with(rhs)? {
            return Ok(None);
        }
        let product = self.multiply(rhs)?;
        Ok(Some(ScaledPauli { factor: 2, phased: product }))
    }

    fn letter_at(&self, k: usize) -> Letter {
        let (w, b) = (k / WORD, k % WORD);
        Letter::from_bits(self.x[w] >> b & 1 == 1, self.z[w] >> b & 1 == 1)
    }

    fn put(&mut self, k: usize, letter: Letter) {
        let (w, b) = (k / WORD, k % WORD);
        let (x, z) = letter.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | ((x as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((z as u64) << b);
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site == 0 || site > self.num_qubits {
            Err(Error::SiteOutOfRange { site, num_qubits: self.num_qubits })
        } else {
            Ok(())
        }
    }

    fn check_same_size(&self, rhs: &PauliString) -> Result<()> {
        if self.num_qubits != rhs.num_qubits {
            Err(Error::DimensionMismatch { left: self.num_qubits, right: rhs.num_qubits })
        } else {
            Ok(())
        }
    }
}

/// Lexicographic on the letter sequence (site 1 most significant), `I < X < Y < Z`.
impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.num_qubits.cmp(&other.num_qubits).then_with(|| self.letters().cmp(other.letters()))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("I");
        }
        let mut first = true;
        for (site, letter) in self.support() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{letter}{site}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self}; n={})", self.num_qubits)
    }
}

/// Pauli string with an exact phase from `{+1, +i, -1, -i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhasedPauli {
    pub phase: Phase,
    pub string: PauliString,
}

impl PhasedPauli {
    pub fn new(phase: Phase, string: PauliString) -> Self {
        PhasedPauli { phase, string }
    }

    pub fn multiply(&self, rhs: &PhasedPauli) -> Result<PhasedPauli> {
        let p = self.string.multiply(&rhs.string)?;
        Ok(PhasedPauli { phase: self.phase * rhs.phase * p.phase, string: p.string })
    }
}

impl fmt::Display for PhasedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.phase, self.string)
    }
}

/// Exact result of a string commutator: `factor * phase * string`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledPauli {
    pub factor: u8,
    pub phased: PhasedPauli,
}

impl ScaledPauli {
    pub fn coefficient(&self) -> Complex64 {
        self.phased.phase.to_complex() * f64::from(self.factor)
    }
}

/// Real-weighted sum of Pauli strings sharing `num_qubits`.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    num_qubits: usize,
    terms: BTreeMap<PauliString, f64>,
}

impl PauliSum {
    pub fn new(num_qubits: usize) -> Self {
        PauliSum { num_qubits, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(num_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, f64)>,
    {
        let mut sum = PauliSum::new(num_qubits);
        for (p, c) in terms {
            sum.add_term(p, c)?;
        }
        Ok(sum)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Adds `coeff * p`, merging with an existing entry; zero results are dropped.
    pub fn add_term(&mut self, p: PauliString, coeff: f64) -> Result<()> {
        if p.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch { left: self.num_qubits, right: p.num_qubits() });
        }
        let entry = self.terms.entry(p).or_insert(0.0);
        *entry += coeff;
        if *entry == 0.0 {
            self.terms.retain(|_, c| *c != 0.0);
        }
        Ok(())
    }

    pub fn coefficient(&self, p: &PauliString) -> f64 {
        self.terms.get(p).copied().unwrap_or(0.0)
    }

    /// Terms in lexicographic string order.
    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, f64)> {
        self.terms.iter().map(|(p, c)| (p, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `[self, p]` as a map from strings to exact complex coefficients.
    pub fn commutator_with(&self, p: &PauliString) -> Result<BTreeMap<PauliString, Complex64>> {
        if p.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch { left: self.num_qubits, right: p.num_qubits() });
        }
        let mut out = BTreeMap::new();
        for (h, w) in self.iter() {
            if let Some(c) = h.commutator(p)? {
                *out.entry(c.phased.string.clone()).or_insert(Complex64::new(0.0, 0.0)) += c.coefficient() * w;
            }
        }
        out.retain(|_, c: &mut Complex64| c.norm() != 0.0);
        Ok(out)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (p, c)) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c} [{p}]")?;
        }
        Ok(())
    }
}

/// `[h, p]` for a Pauli sum `h`, see [`PauliSum::commutator_with`].
pub fn commutator_with_sum(h: &PauliSum, p: &PauliString) -> Result<BTreeMap<PauliString, Complex64>> {
    h.commutator_with(p)
}
