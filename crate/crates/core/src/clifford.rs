//! Clifford arithmetic for the two Pin models.
//!
//! Basis blades are bit sets over the generators `e_1..e_n`. A blade product
//! is reordered to canonical (increasing) order, picking up one sign per
//! transposition, and repeated generators collapse by `e_i^2 = +1` (Pin+) or
//! `e_i^2 = -1` (Pin-).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Mul, Neg};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Bit, Error, Rational, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PinModel {
    /// `e_i^2 = +1`
    PinPlus,
    /// `e_i^2 = -1`
    PinMinus,
}

impl PinModel {
    /// Value of `e_i * e_i` as an integer.
    pub fn generator_square(self) -> i64 {
        match self {
            PinModel::PinPlus => 1,
            PinModel::PinMinus => -1,
        }
    }
}

impl fmt::Display for PinModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PinModel::PinPlus => f.write_str("Pin+"),
            PinModel::PinMinus => f.write_str("Pin-"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CliffordModel {
    pub sign_model: PinModel,
    n: usize,
}

impl CliffordModel {
    pub const MAX_DIM: usize = 63;

    pub fn new(sign_model: PinModel, n: usize) -> Result<Self> {
        if n == 0 || n > Self::MAX_DIM {
            return Err(Error::Dimension(format!(
                "Clifford dimension must lie in 1..={}, got {n}",
                Self::MAX_DIM
            )));
        }
        Ok(Self { sign_model, n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn scalar(&self, c: Rational) -> CliffordElement {
        CliffordElement::from_terms(*self, [(Blade::SCALAR, c)])
    }

    pub fn one(&self) -> CliffordElement {
        self.scalar(Rational::one())
    }

    /// Generator `e_i`, 1-based.
    pub fn generator(&self, i: usize) -> Result<CliffordElement> {
        let b = Blade::from_indices(self.n, &[i])?;
        Ok(CliffordElement::from_terms(*self, [(b, Rational::one())]))
    }

    /// The blade `e_{i_1} ... e_{i_k}` multiplied out in the given order.
    pub fn word(&self, indices: &[usize]) -> Result<CliffordElement> {
        let mut acc = self.one();
        for &i in indices {
            acc = acc.mul(&self.generator(i)?)?;
        }
        Ok(acc)
    }

    /// All `2^n` canonical blades.
    pub fn blades(&self) -> impl Iterator<Item = Blade> {
        (0u64..(1u64 << self.n)).map(Blade)
    }
}

/// A subset of `{1..n}`, bit `i - 1` set when `e_i` is present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Blade(pub u64);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &i in indices {
            if i == 0 || i > n {
                return Err(Error::Dimension(format!("generator e{i} outside 1..={n}")));
            }
            let mask = 1u64 << (i - 1);
            if bits & mask != 0 {
                return Err(Error::Precondition(format!(
                    "repeated generator e{i} in canonical blade"
                )));
            }
            bits |= mask;
        }
        Ok(Blade(bits))
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    /// 1-based generator indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|i| self.0 >> i & 1 == 1).map(|i| i + 1).collect()
    }

    pub fn contains(self, i: usize) -> bool {
        i >= 1 && i <= 64 && self.0 >> (i - 1) & 1 == 1
    }

    /// Product of two canonical blades: resulting blade and integer sign.
    pub fn product(self, rhs: Blade, model: PinModel) -> (Blade, i64) {
        // Each generator of `rhs` must move left past every larger generator
        // of `self`.
        let mut swaps = 0u32;
        let mut b = rhs.0;
        while b != 0 {
            let j = b.trailing_zeros();
            swaps += (self.0 >> (j + 1)).count_ones();
            b &= b - 1;
        }
        let mut sign = if swaps % 2 == 0 { 1 } else { -1 };
        if model == PinModel::PinMinus && (self.0 & rhs.0).count_ones() % 2 == 1 {
            sign = -sign;
        }
        (Blade(self.0 ^ rhs.0), sign)
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("1");
        }
        for i in self.indices() {
            write!(f, "e{i}")?;
        }
        Ok(())
    }
}

/// Finite rational combination of blades. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordElement {
    model: CliffordModel,
    terms: BTreeMap<Blade, Rational>,
}

impl CliffordElement {
    pub fn zero(model: CliffordModel) -> Self {
        Self {
            model,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(model: CliffordModel, terms: impl IntoIterator<Item = (Blade, Rational)>) -> Self {
        let mut out = Self::zero(model);
        for (b, c) in terms {
            debug_assert!(b.0 >> model.n == 0, "blade outside model dimension");
            out.add_term(b, c);
        }
        out
    }

    fn add_term(&mut self, b: Blade, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(b).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn model(&self) -> CliffordModel {
        self.model
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, b: Blade) -> Rational {
        self.terms.get(&b).cloned().unwrap_or_else(Rational::zero)
    }

    /// The single `(blade, coefficient)` pair if this is a nonzero blade multiple.
    pub fn as_blade_multiple(&self) -> Option<(Blade, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(b, c)| (*b, c))
        } else {
            None
        }
    }

    fn require_blade(&self) -> Result<(Blade, &Rational)> {
        self.as_blade_multiple()
            .ok_or_else(|| Error::NotABlade(self.to_string()))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_model(rhs)?;
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.add_term(*b, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_terms(self.model, self.terms.iter().map(|(b, c)| (*b, c * k)))
    }

    fn check_model(&self, rhs: &Self) -> Result<()> {
        if self.model != rhs.model {
            return Err(Error::ModelMismatch(format!(
                "{} on R^{} vs {} on R^{}",
                self.model.sign_model, self.model.n, rhs.model.sign_model, rhs.model.n
            )));
        }
        Ok(())
    }

    /// Clifford product, bilinear over blades.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_model(rhs)?;
        let mut out = Self::zero(self.model);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let (blade, sign) = a.product(*b, self.model.sign_model);
                let c = ca * cb;
                out.add_term(blade, if sign < 0 { -c } else { c });
            }
        }
        Ok(out)
    }
}

impl Neg for &CliffordElement {
    type Output = CliffordElement;

    fn neg(self) -> CliffordElement {
        CliffordElement::from_terms(self.model, self.terms.iter().map(|(b, c)| (*b, -c)))
    }
}

impl Mul for &CliffordElement {
    type Output = CliffordElement;

    /// Panics on model mismatch; use [`CliffordElement::mul`] for the checked form.
    fn mul(self, rhs: Self) -> CliffordElement {
        CliffordElement::mul(self, rhs).expect("Clifford model mismatch")
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if b.0 == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{b}")?;
            } else {
                write!(f, "{abs}*{b}")?;
            }
        }
        Ok(())
    }
}

/// Product of sign and permutation matrices: row `i` has its nonzero entry
/// `signs[i]` in column `perm[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    /// Coordinate reflection `r_i`, 1-based.
    pub fn reflection(n: usize, i: usize) -> Self {
        let mut out = Self::identity(n);
        out.signs[i - 1] = -1;
        out
    }

    pub fn from_rows(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        if signs.len() != n {
            return Err(Error::Dimension("sign vector length".into()));
        }
        for (&p, &s) in perm.iter().zip(&signs) {
            if p >= n || seen[p] || !(s == 1 || s == -1) {
                return Err(Error::Inconsistent("not a signed permutation".into()));
            }
            seen[p] = true;
        }
        Ok(Self { perm, signs })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// `self ∘ rhs` as matrices.
    pub fn compose(&self, rhs: &Self) -> Self {
        // (AB)[i][j] = A[i][perm_a(i)] * B[perm_a(i)][j]
        let perm = self.perm.iter().map(|&k| rhs.perm[k]).collect();
        let signs = self
            .perm
            .iter()
            .zip(&self.signs)
            .map(|(&k, &s)| s * rhs.signs[k])
            .collect();
        Self { perm, signs }
    }

    pub fn to_matrix(&self) -> Vec<Vec<i8>> {
        let n = self.dim();
        let mut m = vec![vec![0i8; n]; n];
        for (i, (&p, &s)) in self.perm.iter().zip(&self.signs).enumerate() {
            m[i][p] = s;
        }
        m
    }

    pub fn determinant(&self) -> i8 {
        let mut sign: i8 = self.signs.iter().product();
        let mut visited = vec![false; self.dim()];
        for start in 0..self.dim() {
            let mut len = 0;
            let mut i = start;
            while !visited[i] {
                visited[i] = true;
                i = self.perm[i];
                len += 1;
            }
            if len > 0 && len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let diagonal = self.perm.iter().enumerate().all(|(i, &p)| i == p);
        if diagonal {
            let entries: Vec<String> = self
                .signs
                .iter()
                .map(|s| if *s > 0 { "+1".into() } else { "-1".into() })
                .collect();
            write!(f, "diag({})", entries.join(","))
        } else {
            write!(f, "{:?}", self.to_matrix())
        }
    }
}

/// Image of a blade multiple under the twisted adjoint: `e_{i_1}..e_{i_k}`
/// maps to `r_{i_1} ∘ .. ∘ r_{i_k}`. The scalar is discarded.
pub fn covering_map(a: &CliffordElement) -> Result<SignedPermutation> {
    let (blade, _) = a.require_blade()?;
    let n = a.model.n;
    Ok(blade
        .indices()
        .into_iter()
        .fold(SignedPermutation::identity(n), |acc, i| {
            acc.compose(&SignedPermutation::reflection(n, i))
        }))
}

/// `p+ = w2`, `p- = w2 + w1^2`. Zero means a Pin structure exists.
pub fn pin_obstruction(w1_squared: Bit, w2: Bit, model: PinModel) -> Bit {
    match model {
        PinModel::PinPlus => w2 & 1,
        PinModel::PinMinus => (w2 ^ w1_squared) & 1,
    }
}

/// Constant-path lifting condition `e_1 · a = a · e_1`.
pub fn check_constant_lift(a: &CliffordElement) -> Result<bool> {
    a.require_blade()?;
    let e1 = a.model.generator(1)?;
    Ok(e1.mul(a)? == a.mul(&e1)?)
}

/// Conjugation lifting condition `a = e_1 · a · e_1` for a lift of `r_1 r_2`.
pub fn check_conjugation_lift(a: &CliffordElement) -> Result<bool> {
    let n = a.model.n;
    if n < 2 {
        return Err(Error::Dimension("conjugation lift needs n >= 2".into()));
    }
    let found = covering_map(a)?;
    let expected = SignedPermutation::reflection(n, 1).compose(&SignedPermutation::reflection(n, 2));
    if found != expected {
        return Err(Error::CoveringMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        });
    }
    let e1 = a.model.generator(1)?;
    Ok(e1.mul(a)?.mul(&e1)? == *a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(m: PinModel, n: usize) -> CliffordModel {
        CliffordModel::new(m, n).unwrap()
    }

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn anticommuting_generators() {
        for m in [PinModel::PinPlus, PinModel::PinMinus] {
            let cm = model(m, 3);
            let e12 = cm.word(&[1, 2]).unwrap();
            let e21 = cm.word(&[2, 1]).unwrap();
            assert_eq!(e12.to_string(), "e1e2");
            assert_eq!(e21, -&e12);
        }
    }

    #[test]
    fn generator_squares() {
        let minus = model(PinModel::PinMinus, 2);
        assert_eq!(minus.word(&[1, 1]).unwrap(), minus.scalar(r(-1)));
        let plus = model(PinModel::PinPlus, 2);
        assert_eq!(plus.word(&[1, 1]).unwrap(), plus.one());
    }

    #[test]
    fn model_mismatch_is_an_error() {
        let a = model(PinModel::PinPlus, 2).one();
        let b = model(PinModel::PinMinus, 2).one();
        assert!(matches!(a.mul(&b), Err(Error::ModelMismatch(_))));
        let c = model(PinModel::PinPlus, 3).one();
        assert!(a.mul(&c).is_err());
    }

    #[test]
    fn covering_examples() {
        let cm = model(PinModel::PinMinus, 4);
        let e1 = cm.generator(1).unwrap();
        assert_eq!(covering_map(&e1).unwrap().to_string(), "diag(-1,+1,+1,+1)");
        assert_eq!(covering_map(&cm.one()).unwrap(), SignedPermutation::identity(4));
        let e12 = cm.word(&[1, 2]).unwrap();
        let r1r2 = SignedPermutation::reflection(4, 1).compose(&SignedPermutation::reflection(4, 2));
        assert_eq!(covering_map(&e12).unwrap(), r1r2);
        assert_eq!(r1r2.to_string(), "diag(-1,-1,+1,+1)");
        let sum = e1.add(&cm.one()).unwrap();
        assert!(matches!(covering_map(&sum), Err(Error::NotABlade(_))));
        assert!(matches!(covering_map(&CliffordElement::zero(cm)), Err(Error::NotABlade(_))));
    }

    #[test]
    fn obstruction_table() {
        for m in [PinModel::PinPlus, PinModel::PinMinus] {
            assert_eq!(pin_obstruction(0, 0, m), 0);
        }
        assert_eq!(pin_obstruction(1, 1, PinModel::PinMinus), 0);
        assert_eq!(pin_obstruction(1, 0, PinModel::PinMinus), 1);
        assert_eq!(pin_obstruction(1, 0, PinModel::PinPlus), 0);
        assert_eq!(pin_obstruction(0, 1, PinModel::PinPlus), 1);
    }

    #[test]
    fn constant_lift_examples() {
        for m in [PinModel::PinPlus, PinModel::PinMinus] {
            let cm = model(m, 3);
            assert!(check_constant_lift(&cm.one()).unwrap());
            assert!(check_constant_lift(&cm.generator(1).unwrap()).unwrap());
            assert!(!check_constant_lift(&cm.generator(2).unwrap()).unwrap());
            let mixed = cm.one().add(&cm.generator(2).unwrap()).unwrap();
            assert!(check_constant_lift(&mixed).is_err());
        }
    }

    #[test]
    fn conjugation_lift_examples() {
        let minus = model(PinModel::PinMinus, 3);
        assert!(check_conjugation_lift(&minus.word(&[1, 2]).unwrap()).unwrap());
        let plus = model(PinModel::PinPlus, 3);
        assert!(!check_conjugation_lift(&plus.word(&[1, 2]).unwrap()).unwrap());
        assert!(matches!(
            check_conjugation_lift(&minus.generator(1).unwrap()),
            Err(Error::CoveringMismatch { .. })
        ));
    }

    #[test]
    fn display_and_determinant() {
        let cm = model(PinModel::PinPlus, 3);
        let x = cm
            .word(&[2, 1])
            .unwrap()
            .scale(&Rational::new(3.into(), 2.into()))
            .add(&cm.one())
            .unwrap();
        assert_eq!(x.to_string(), "1 - 3/2*e1e2");
        let swap = SignedPermutation::from_rows(vec![1, 0, 2], vec![1, 1, -1]).unwrap();
        assert_eq!(swap.determinant(), 1);
        assert_eq!(SignedPermutation::reflection(3, 2).determinant(), -1);
    }
}
