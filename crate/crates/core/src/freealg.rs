//! Words and polynomials in a free associative algebra.
//!
//! A polynomial is a finite sum of coefficient-word terms over a fixed
//! generator set.  Generators are addressed by index; each carries a positive
//! weight, and the degree of a word is the sum of the weights of its letters.
//! Nothing here knows about relations: quotients live in
//! [`presentations`](crate::presentations).

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact field of coefficients.
///
/// Implemented by [`BigRational`] and by the prime residue field [`Fp`].
/// Elements carry their own field context (for `Fp`, the modulus), so the
/// trait exposes `*_like` constructors that build constants in the field of
/// an existing element.
pub trait Coeff: Clone + Eq + std::hash::Hash + fmt::Debug + fmt::Display {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplicative inverse.  Panics on zero.
    fn inverted(&self) -> Self;
    /// Whether two elements live in the same field (same modulus for `Fp`).
    fn same_field(&self, rhs: &Self) -> bool;
    /// Rank of the row span of sparse vectors, by elimination suited to the
    /// field: fraction-free integer elimination over the rationals, modular
    /// elimination over a residue field.
    fn rank_of_rows(rows: Vec<Vec<(usize, Self)>>) -> usize;
}

impl Coeff for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverted(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
    fn same_field(&self, _rhs: &Self) -> bool {
        true
    }
    fn rank_of_rows(rows: Vec<Vec<(usize, Self)>>) -> usize {
        crate::linalg::rank_rational(rows)
    }
}

/// Element of the residue field of integers modulo a prime `p < 2^31`.
///
/// The value is kept in canonical range `0..p`.  The modulus travels with the
/// element; mixing moduli in arithmetic is a bug and panics.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    /// Bound guaranteeing that products fit in `u64` before reduction.
    pub const MAX_MODULUS: u64 = 1 << 31;

    pub fn new(value: u64, modulus: u64) -> Self {
        assert!(
            modulus >= 2 && modulus < Self::MAX_MODULUS,
            "modulus out of range"
        );
        Fp {
            value: value % modulus,
            modulus,
        }
    }

    pub fn from_i64(value: i64, modulus: u64) -> Self {
        let m = modulus as i64;
        assert!(modulus >= 2 && modulus < Self::MAX_MODULUS);
        Fp {
            value: value.rem_euclid(m) as u64,
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn check_same(&self, rhs: &Self) {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli: Fp arithmetic");
    }

    /// Inverse by Fermat: `x^(p-2) mod p`.  Panics on zero.
    fn inverse(&self) -> Self {
        assert!(self.value != 0, "inverse of zero in Fp");
        let mut base = self.value;
        let mut exp = self.modulus - 2;
        let mut acc: u64 = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.modulus;
            }
            base = base * base % self.modulus;
            exp >>= 1;
        }
        Fp {
            value: acc,
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Coeff for Fp {
    fn zero_like(&self) -> Self {
        Fp {
            value: 0,
            modulus: self.modulus,
        }
    }
    fn one_like(&self) -> Self {
        Fp {
            value: 1,
            modulus: self.modulus,
        }
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Fp::from_i64(n, self.modulus)
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn is_one(&self) -> bool {
        self.value == 1
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.check_same(rhs);
        Fp {
            value: (self.value + rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.check_same(rhs);
        Fp {
            value: (self.value + self.modulus - rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
    fn times(&self, rhs: &Self) -> Self {
        self.check_same(rhs);
        Fp {
            value: self.value * rhs.value % self.modulus,
            modulus: self.modulus,
        }
    }
    fn negated(&self) -> Self {
        Fp {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
    fn inverted(&self) -> Self {
        self.inverse()
    }
    fn same_field(&self, rhs: &Self) -> bool {
        self.modulus == rhs.modulus
    }
    fn rank_of_rows(rows: Vec<Vec<(usize, Self)>>) -> usize {
        crate::linalg::rank_fp(rows)
    }
}

/// A word in the free monoid on the generators: a sequence of letter indices.
///
/// The derived `Ord` is plain lexicographic on the letter sequence; it is a
/// deterministic total order used for term storage.  Rank computations index
/// basis words degree by degree, which yields the degree-lexicographic order
/// overall.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Word(Vec<u32>);

impl Word {
    /// The empty word (multiplicative identity).
    pub fn one() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Self {
        Word(vec![i as u32])
    }

    pub fn from_letters(letters: &[u32]) -> Self {
        Word(letters.to_vec())
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, rhs: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + rhs.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&rhs.0);
        Word(v)
    }

    /// Sum of the weights of the letters.
    pub fn degree(&self, weights: &[usize]) -> usize {
        self.0.iter().map(|&l| weights[l as usize]).sum()
    }

    pub fn max_letter(&self) -> Option<u32> {
        self.0.iter().copied().max()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FreeAlgError {
    #[error("generator sets differ ({0} vs {1} generators or unequal weights)")]
    GeneratorMismatch(usize, usize),
    #[error("coefficient fields differ")]
    FieldMismatch,
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
}

/// Value substituted for a generator by [`NcPolynomial::specialize`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpecValue {
    Zero,
    One,
}

/// Polynomial in the free associative algebra: a canonical term map from
/// words to nonzero coefficients, together with the generator count and the
/// per-generator weights.
///
/// Two polynomials are equal exactly when their term maps, generator counts
/// and weights agree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NcPolynomial<K: Coeff> {
    nvars: usize,
    weights: Vec<usize>,
    terms: BTreeMap<Word, K>,
}

impl<K: Coeff> NcPolynomial<K> {
    pub fn zero(weights: &[usize]) -> Self {
        assert!(weights.iter().all(|&w| w >= 1), "weights must be positive");
        NcPolynomial {
            nvars: weights.len(),
            weights: weights.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    /// Builds a polynomial from term pairs, merging repeated words and
    /// dropping zero coefficients.
    pub fn from_terms(weights: &[usize], terms: Vec<(Word, K)>) -> Self {
        let mut poly = Self::zero(weights);
        for (word, coeff) in terms {
            poly.add_term(word, coeff);
        }
        poly
    }

    pub fn term(weights: &[usize], word: Word, coeff: K) -> Self {
        Self::from_terms(weights, vec![(word, coeff)])
    }

    fn add_term(&mut self, word: Word, coeff: K) {
        if coeff.is_zero() {
            return;
        }
        assert!(
            word.max_letter().map_or(0, |l| l as usize + 1) <= self.nvars,
            "letter out of range"
        );
        match self.terms.remove(&word) {
            None => {
                self.terms.insert(word, coeff);
            }
            Some(old) => {
                let sum = old.plus(&coeff);
                if !sum.is_zero() {
                    self.terms.insert(word, sum);
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &K)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &Word) -> Option<&K> {
        self.terms.get(word)
    }

    /// Some coefficient of the polynomial; the field witness for building
    /// constants in the same field.  `None` on the zero polynomial.
    pub fn any_coeff(&self) -> Option<&K> {
        self.terms.values().next()
    }

    /// Total degree: the maximum weighted degree of a word with nonzero
    /// coefficient.  `None` on the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.degree(&self.weights)).max()
    }

    fn check_compatible(&self, rhs: &Self) -> Result<(), FreeAlgError> {
        if self.nvars != rhs.nvars || self.weights != rhs.weights {
            return Err(FreeAlgError::GeneratorMismatch(self.nvars, rhs.nvars));
        }
        if let (Some(a), Some(b)) = (self.any_coeff(), rhs.any_coeff()) {
            if !a.same_field(b) {
                return Err(FreeAlgError::FieldMismatch);
            }
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, FreeAlgError> {
        self.check_compatible(rhs)?;
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, FreeAlgError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.negated();
        }
        out
    }

    pub fn scale(&self, k: &K) -> Self {
        if k.is_zero() {
            return Self::zero(&self.weights);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.times(k);
        }
        out
    }

    /// Product by term-wise word concatenation.
    pub fn multiply(&self, rhs: &Self) -> Result<Self, FreeAlgError> {
        self.check_compatible(rhs)?;
        let mut out = Self::zero(&self.weights);
        for (u, a) in &self.terms {
            for (w, b) in &rhs.terms {
                out.add_term(u.concat(w), a.times(b));
            }
        }
        Ok(out)
    }

    /// The sum of the terms of weighted degree exactly `n`.
    pub fn homogeneous_part(&self, n: usize) -> Self {
        let mut out = Self::zero(&self.weights);
        for (w, c) in &self.terms {
            if w.degree(&self.weights) == n {
                out.terms.insert(w.clone(), c.clone());
            }
        }
        out
    }

    /// The homogeneous part of top degree.  Errors on zero.
    pub fn leading_part(&self) -> Result<Self, FreeAlgError> {
        let d = self.degree().ok_or(FreeAlgError::ZeroPolynomial)?;
        Ok(self.homogeneous_part(d))
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|w| w.degree(&self.weights));
        match degrees.next() {
            None => true,
            Some(first) => degrees.all(|d| d == first),
        }
    }

    /// Homogenization by a fresh weight-one generator appended at index
    /// `nvars`: every term of degree `m` is multiplied on the right by the
    /// new letter to the power `d - m`, where `d` is the total degree.
    /// Errors on zero.
    pub fn homogenize(&self) -> Result<NcPolynomial<K>, FreeAlgError> {
        let d = self.degree().ok_or(FreeAlgError::ZeroPolynomial)?;
        let t = self.nvars as u32;
        let mut weights = self.weights.clone();
        weights.push(1);
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            let pad = d - w.degree(&self.weights);
            let mut letters = w.letters().to_vec();
            letters.extend(std::iter::repeat(t).take(pad));
            terms.insert(Word(letters), c.clone());
        }
        Ok(NcPolynomial {
            nvars: self.nvars + 1,
            weights,
            terms,
        })
    }

    /// Substitutes 0 or 1 for generator `var` and removes it from the
    /// generator set, shifting the indices above it down by one.
    ///
    /// With [`SpecValue::One`] the letter is deleted from every word; with
    /// [`SpecValue::Zero`] every term containing the letter is dropped.
    pub fn specialize(&self, var: usize, value: SpecValue) -> NcPolynomial<K> {
        assert!(var < self.nvars, "no such generator");
        let mut weights = self.weights.clone();
        weights.remove(var);
        let mut out = NcPolynomial::zero(&weights);
        let v = var as u32;
        'terms: for (w, c) in &self.terms {
            let mut letters = Vec::with_capacity(w.len());
            for &l in w.letters() {
                if l == v {
                    match value {
                        SpecValue::Zero => continue 'terms,
                        SpecValue::One => continue,
                    }
                }
                letters.push(if l > v { l - 1 } else { l });
            }
            out.add_term(Word(letters), c.clone());
        }
        out
    }

    /// Applies `f` to every coefficient, dropping terms that map to zero.
    pub fn map_coeffs<L: Coeff, E>(
        &self,
        mut f: impl FnMut(&K) -> Result<L, E>,
    ) -> Result<NcPolynomial<L>, E> {
        let mut out = NcPolynomial::zero(&self.weights);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Renders the polynomial with the given generator names: highest degree
    /// first, alphabetical within a degree.
    pub fn display_with_names(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut sorted: Vec<(&Word, &K)> = self.terms.iter().collect();
        sorted.sort_by(|(u, _), (w, _)| {
            let (du, dw) = (u.degree(&self.weights), w.degree(&self.weights));
            dw.cmp(&du).then_with(|| u.cmp(w))
        });
        let mut s = String::new();
        for (i, (w, c)) in sorted.iter().enumerate() {
            let coeff = c.to_string();
            let (sign, coeff_abs) = match coeff.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", coeff),
            };
            if i == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(if sign == "-" { " - " } else { " + " });
            }
            let word_str = w
                .letters()
                .iter()
                .map(|&l| names[l as usize].as_str())
                .collect::<Vec<_>>()
                .join("*");
            if w.is_empty() {
                s.push_str(&coeff_abs);
            } else if coeff_abs == "1" {
                s.push_str(&word_str);
            } else {
                s.push_str(&coeff_abs);
                s.push('*');
                s.push_str(&word_str);
            }
        }
        s
    }
}

impl<K: Coeff> fmt::Display for NcPolynomial<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("g{i}")).collect();
        write!(f, "{}", self.display_with_names(&names))
    }
}

/// Rationals with denominator coprime to every prime of interest embed into
/// any residue field; this helper is the plain integer embedding.
pub fn rational_int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// True when `q` has positive sign; used by display code.
pub fn rational_is_negative(q: &BigRational) -> bool {
    q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        rational_int(n)
    }

    fn xy_poly(pairs: &[(&[u32], i64)]) -> NcPolynomial<BigRational> {
        NcPolynomial::from_terms(
            &[1, 1],
            pairs
                .iter()
                .map(|(ls, c)| (Word::from_letters(ls), q(*c)))
                .collect(),
        )
    }

    #[test]
    fn fp_arithmetic_and_inverse() {
        let a = Fp::new(3, 5);
        let b = Fp::new(4, 5);
        assert_eq!(a.plus(&b), Fp::new(2, 5));
        assert_eq!(a.times(&b), Fp::new(2, 5));
        assert_eq!(a.minus(&b), Fp::new(4, 5));
        assert_eq!(a.negated(), Fp::new(2, 5));
        assert_eq!(a.inverted(), Fp::new(2, 5));
        assert_eq!(Fp::from_i64(-1, 7), Fp::new(6, 7));
        for v in 1..7 {
            let x = Fp::new(v, 7);
            assert_eq!(x.times(&x.inverted()), Fp::new(1, 7));
        }
    }

    #[test]
    #[should_panic(expected = "mixed moduli")]
    fn fp_mixed_moduli_panics() {
        let _ = Fp::new(1, 5).plus(&Fp::new(1, 7));
    }

    #[test]
    fn word_concat_and_degree() {
        let xy = Word::letter(0).concat(&Word::letter(1));
        assert_eq!(xy.letters(), &[0, 1]);
        assert_eq!(xy.degree(&[1, 1]), 2);
        assert_eq!(xy.degree(&[1, 2]), 3);
        assert_eq!(Word::one().degree(&[1, 1]), 0);
        assert!(Word::one() < Word::letter(0));
        assert!(Word::letter(0) < Word::letter(1));
    }

    #[test]
    fn multiply_expands_products() {
        // (x + y)^2 = xx + xy + yx + yy
        let s = xy_poly(&[(&[0], 1), (&[1], 1)]);
        let sq = s.multiply(&s).unwrap();
        let expected = xy_poly(&[(&[0, 0], 1), (&[0, 1], 1), (&[1, 0], 1), (&[1, 1], 1)]);
        assert_eq!(sq, expected);
    }

    #[test]
    fn multiply_checks_generator_sets() {
        let f = xy_poly(&[(&[0], 1)]);
        let g = NcPolynomial::term(&[1], Word::letter(0), q(1));
        assert_eq!(
            f.multiply(&g).unwrap_err(),
            FreeAlgError::GeneratorMismatch(2, 1)
        );
        let h = NcPolynomial::term(&[1, 2], Word::letter(0), q(1));
        assert!(f.multiply(&h).is_err());
    }

    #[test]
    fn multiply_checks_fields() {
        let f = NcPolynomial::term(&[1], Word::letter(0), Fp::new(1, 5));
        let g = NcPolynomial::term(&[1], Word::letter(0), Fp::new(1, 7));
        assert_eq!(f.multiply(&g).unwrap_err(), FreeAlgError::FieldMismatch);
    }

    #[test]
    fn cancellation_drops_terms() {
        let f = xy_poly(&[(&[0, 1], 1)]);
        let g = xy_poly(&[(&[0, 1], -1), (&[1, 0], 2)]);
        let sum = f.add(&g).unwrap();
        assert_eq!(sum, xy_poly(&[(&[1, 0], 2)]));
        assert!(f.sub(&f).unwrap().is_zero());
    }

    #[test]
    fn degree_and_parts() {
        // xy - yx - 1, unit weights
        let r = xy_poly(&[(&[0, 1], 1), (&[1, 0], -1), (&[], -1)]);
        assert_eq!(r.degree(), Some(2));
        assert!(!r.is_homogeneous());
        assert_eq!(
            r.leading_part().unwrap(),
            xy_poly(&[(&[0, 1], 1), (&[1, 0], -1)])
        );
        assert_eq!(r.homogeneous_part(0), xy_poly(&[(&[], -1)]));
        assert!(r.homogeneous_part(1).is_zero());
        let zero = NcPolynomial::<BigRational>::zero(&[1, 1]);
        assert_eq!(zero.degree(), None);
        assert_eq!(zero.leading_part().unwrap_err(), FreeAlgError::ZeroPolynomial);
    }

    #[test]
    fn weighted_degrees() {
        // weights x:1, h:2 — the word xh has degree 3
        let f = NcPolynomial::term(&[1, 2], Word::from_letters(&[0, 1]), q(1));
        assert_eq!(f.degree(), Some(3));
        assert!(f.is_homogeneous());
    }

    #[test]
    fn homogenize_weyl_relation() {
        let r = xy_poly(&[(&[0, 1], 1), (&[1, 0], -1), (&[], -1)]);
        let h = r.homogenize().unwrap();
        assert_eq!(h.nvars(), 3);
        assert!(h.is_homogeneous());
        assert_eq!(h.degree(), Some(2));
        // xy - yx - T^2
        assert_eq!(h.coeff(&Word::from_letters(&[2, 2])), Some(&q(-1)));
        assert_eq!(h.coeff(&Word::from_letters(&[0, 1])), Some(&q(1)));
        // round trip at T := 1, leading part at T := 0
        assert_eq!(h.specialize(2, SpecValue::One), r);
        assert_eq!(h.specialize(2, SpecValue::Zero), r.leading_part().unwrap());
    }

    #[test]
    fn homogenize_homogeneous_is_identity_embedding() {
        let r = xy_poly(&[(&[0, 1], 1), (&[1, 0], -3)]);
        let h = r.homogenize().unwrap();
        assert_eq!(h.num_terms(), 2);
        assert_eq!(h.specialize(2, SpecValue::One), r);
        assert_eq!(h.specialize(2, SpecValue::Zero), r);
    }

    #[test]
    fn specialize_middle_generator_shifts_indices() {
        // three generators; drop the middle one at value 1
        let f = NcPolynomial::term(&[1, 1, 1], Word::from_letters(&[0, 1, 2]), q(5));
        let g = f.specialize(1, SpecValue::One);
        assert_eq!(g.nvars(), 2);
        assert_eq!(g.coeff(&Word::from_letters(&[0, 1])), Some(&q(5)));
    }

    #[test]
    fn display_orders_leading_terms_first() {
        let r = xy_poly(&[(&[], -1), (&[0, 1], 1), (&[1, 0], -1)]);
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(r.display_with_names(&names), "x*y - y*x - 1");
        let s = xy_poly(&[(&[0], 2)]);
        assert_eq!(s.display_with_names(&names), "2*x");
        assert_eq!(
            NcPolynomial::<BigRational>::zero(&[1, 1]).display_with_names(&names),
            "0"
        );
    }
}
