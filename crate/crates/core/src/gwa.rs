//! Degree-one generalized Weyl algebras over a univariate base: the base
//! ring k[h], an affine automorphism σ(h) = αh + β, and a central datum
//! a(h) define the algebra generated by k[h], X and Y subject to
//! Xf = σ(f)X, Yf = σ⁻¹(f)Y, YX = a and XY = σ(a).  Elements carry the
//! normal form Σ dᵢ(h)·vᵢ with vᵢ = X^i for i > 0 and Y^(-i) for i < 0.

use std::cmp::min;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::dvr::ValuationSpec;
use crate::freealg::{Coeff, Fp, NcPolynomial, Word};
use crate::presentations::{Generator, Mode, Presentation, PresentationError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GwaError {
    #[error("sigma is not invertible: alpha = 0")]
    ZeroAlpha,
    #[error("unknown model {0:?}")]
    UnknownModel(String),
    #[error("model {model} requires parameter {name}")]
    MissingParameter { model: String, name: String },
    #[error("model {model} takes no parameter {name}")]
    UnknownParameter { model: String, name: String },
    #[error("parameter {name} = {value} rejected: {reason}")]
    InvalidParameter {
        name: String,
        value: BigRational,
        reason: String,
    },
    #[error("p = {prime} is a bad prime ({n} coefficient obstruction(s))", n = .bad.len())]
    BadPrime {
        prime: u64,
        bad: Vec<BadCoefficient>,
    },
}

/// Dense univariate polynomial over the coefficient field: coefficients in
/// ascending degree with no trailing zeros, so the zero polynomial is the
/// empty list and the last entry of anything else is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly<K: Coeff> {
    coeffs: Vec<K>,
}

impl<K: Coeff> UniPoly<K> {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(c: K) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// c·h^k.
    pub fn monomial(c: K, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![c.zero_like(); k + 1];
        coeffs[k] = c;
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = long.coeffs.clone();
        for (i, c) in short.coeffs.iter().enumerate() {
            out[i] = out[i].plus(c);
        }
        Self::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| c.negated()).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &K) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|v| v.times(c)).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Self::from_coeffs(out)
    }

    /// p(αh + β), by Horner evaluation in the polynomial ring.
    fn compose_linear(&self, alpha: &K, beta: &K) -> Self {
        let lin = Self::from_coeffs(vec![beta.clone(), alpha.clone()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(c.clone()));
        }
        acc
    }
}

impl<K: Coeff> fmt::Display for UniPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let rendered = c.to_string();
            let (sign, abs) = match rendered.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", rendered),
            };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
                first = false;
            } else {
                f.write_str(if sign == "-" { " - " } else { " + " })?;
            }
            let power = match k {
                0 => String::new(),
                1 => "h".to_string(),
                _ => format!("h^{k}"),
            };
            if power.is_empty() {
                f.write_str(&abs)?;
            } else if abs == "1" {
                f.write_str(&power)?;
            } else {
                write!(f, "{abs}*{power}")?;
            }
        }
        Ok(())
    }
}

/// The automorphism h ↦ αh + β of the base ring; invertible exactly when
/// α is a unit, so α = 0 is rejected at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineAuto<K: Coeff> {
    alpha: K,
    beta: K,
}

impl<K: Coeff> AffineAuto<K> {
    pub fn new(alpha: K, beta: K) -> Result<Self, GwaError> {
        if alpha.is_zero() {
            return Err(GwaError::ZeroAlpha);
        }
        debug_assert!(alpha.same_field(&beta));
        Ok(AffineAuto { alpha, beta })
    }

    pub fn alpha(&self) -> &K {
        &self.alpha
    }

    pub fn beta(&self) -> &K {
        &self.beta
    }
}

/// σ^k applied to f, for any integer k; negative powers substitute
/// h ↦ (h − β)/α.
pub fn sigma_apply<K: Coeff>(sigma: &AffineAuto<K>, f: &UniPoly<K>, k: i64) -> UniPoly<K> {
    let mut out = f.clone();
    if k >= 0 {
        for _ in 0..k {
            out = out.compose_linear(&sigma.alpha, &sigma.beta);
        }
    } else {
        let inv_alpha = sigma.alpha.inverted();
        let neg_shift = sigma.beta.times(&inv_alpha).negated();
        for _ in 0..(-k) {
            out = out.compose_linear(&inv_alpha, &neg_shift);
        }
    }
    out
}

/// Defining data of the algebra: the automorphism and the element a(h) with
/// YX = a, XY = σ(a).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GwaData<K: Coeff> {
    sigma: AffineAuto<K>,
    a: UniPoly<K>,
}

impl<K: Coeff> GwaData<K> {
    pub fn new(sigma: AffineAuto<K>, a: UniPoly<K>) -> Self {
        debug_assert!(a.coeffs().iter().all(|c| c.same_field(&sigma.alpha)));
        GwaData { sigma, a }
    }

    pub fn sigma(&self) -> &AffineAuto<K> {
        &self.sigma
    }

    pub fn a(&self) -> &UniPoly<K> {
        &self.a
    }
}

/// Element in normal form: finitely many indices i with nonzero coefficient
/// polynomial dᵢ(h), standing for Σ dᵢ(h)·vᵢ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GwaElement<K: Coeff> {
    terms: BTreeMap<i64, UniPoly<K>>,
}

impl<K: Coeff> GwaElement<K> {
    pub fn zero() -> Self {
        GwaElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn term(i: i64, d: UniPoly<K>) -> Self {
        let mut terms = BTreeMap::new();
        if !d.is_zero() {
            terms.insert(i, d);
        }
        GwaElement { terms }
    }

    pub fn from_terms(parts: Vec<(i64, UniPoly<K>)>) -> Self {
        let mut out = Self::zero();
        for (i, d) in parts {
            out.merge_term(i, d);
        }
        out
    }

    pub fn gen_x(one: &K) -> Self {
        Self::term(1, UniPoly::constant(one.one_like()))
    }

    pub fn gen_y(one: &K) -> Self {
        Self::term(-1, UniPoly::constant(one.one_like()))
    }

    pub fn gen_h(one: &K) -> Self {
        Self::term(0, UniPoly::monomial(one.one_like(), 1))
    }

    pub fn constant(c: K) -> Self {
        Self::term(0, UniPoly::constant(c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<i64, UniPoly<K>> {
        &self.terms
    }

    pub fn coeff(&self, i: i64) -> Option<&UniPoly<K>> {
        self.terms.get(&i)
    }

    fn merge_term(&mut self, i: i64, d: UniPoly<K>) {
        if d.is_zero() {
            return;
        }
        match self.terms.remove(&i) {
            None => {
                self.terms.insert(i, d);
            }
            Some(old) => {
                let sum = old.add(&d);
                if !sum.is_zero() {
                    self.terms.insert(i, sum);
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (i, d) in &rhs.terms {
            out.merge_term(*i, d.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        GwaElement {
            terms: self.terms.iter().map(|(i, d)| (*i, d.neg())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
}

impl<K: Coeff> fmt::Display for GwaElement<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, d) in self.terms.iter().rev() {
            if first {
                first = false;
            } else {
                f.write_str(" + ")?;
            }
            let v_part = match *i {
                0 => String::new(),
                1 => "X".to_string(),
                -1 => "Y".to_string(),
                i if i > 1 => format!("X^{i}"),
                i => format!("Y^{}", -i),
            };
            let d_str = d.to_string();
            if v_part.is_empty() {
                f.write_str(&d_str)?;
            } else if d_str == "1" {
                f.write_str(&v_part)?;
            } else if d.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                write!(f, "({d_str})*{v_part}")?;
            } else if d_str.starts_with('-') {
                write!(f, "-{}*{v_part}", &d_str[1..])?;
            } else {
                write!(f, "{d_str}*{v_part}")?;
            }
        }
        Ok(())
    }
}

/// The crossing factor picked up when vᵢ passes vⱼ: trivial on matching
/// signs, a product of σ-shifts of a when X powers meet Y powers.
fn cross_factor<K: Coeff>(data: &GwaData<K>, i: i64, j: i64) -> Option<UniPoly<K>> {
    if (i >= 0) == (j >= 0) || i == 0 || j == 0 {
        return None;
    }
    let one = data.sigma.alpha.one_like();
    let mut prod = UniPoly::constant(one);
    if i > 0 {
        let m = -j;
        for t in 1..=min(i, m) {
            prod = prod.mul(&sigma_apply(&data.sigma, &data.a, i - t + 1));
        }
    } else {
        let m = -i;
        for t in 1..=min(m, j) {
            prod = prod.mul(&sigma_apply(&data.sigma, &data.a, -(m - t)));
        }
    }
    Some(prod)
}

/// Product in normal form: (d·vᵢ)(e·vⱼ) = d·σ^i(e)·c(i,j)·v_{i+j} with the
/// crossing factor c from `cross_factor`.
pub fn gwa_multiply<K: Coeff>(
    data: &GwaData<K>,
    lhs: &GwaElement<K>,
    rhs: &GwaElement<K>,
) -> GwaElement<K> {
    let mut out = GwaElement::zero();
    for (i, d) in &lhs.terms {
        for (j, e) in &rhs.terms {
            let mut poly = d.mul(&sigma_apply(&data.sigma, e, *i));
            if let Some(c) = cross_factor(data, *i, *j) {
                poly = poly.mul(&c);
            }
            out.merge_term(i + j, poly);
        }
    }
    out
}

/// XY − YX, computed through the product routine.  The result lives in the
/// base ring and must equal σ(a) − a.
pub fn gwa_commutator_check<K: Coeff>(data: &GwaData<K>) -> UniPoly<K> {
    let one = data.sigma.alpha.one_like();
    let x = GwaElement::gen_x(&one);
    let y = GwaElement::gen_y(&one);
    let diff = gwa_multiply(data, &x, &y).sub(&gwa_multiply(data, &y, &x));
    debug_assert!(diff.terms.keys().all(|i| *i == 0));
    diff.coeff(0).cloned().unwrap_or_else(UniPoly::zero)
}

/// Where a defining coefficient obstructs reduction mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BadLocation {
    SigmaAlpha,
    SigmaBeta,
    ACoeff(usize),
}

impl fmt::Display for BadLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BadLocation::SigmaAlpha => write!(f, "alpha"),
            BadLocation::SigmaBeta => write!(f, "beta"),
            BadLocation::ACoeff(i) => write!(f, "coefficient of h^{i} in a"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadCoefficient {
    pub location: BadLocation,
    pub value: BigRational,
    pub valuation: i64,
}

/// Verdict of `bad_prime_detect`: the prime is good when β and the
/// coefficients of a are p-integral and α is a p-unit, so that σ reduces to
/// an automorphism and a to an honest element.  Whether a vanishes mod p is
/// reported separately; that degeneration keeps the reduction defined but
/// costs the domain property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GwaPrimeReport {
    pub good: bool,
    pub bad: Vec<BadCoefficient>,
    pub a_reduces_to_zero: bool,
}

pub fn bad_prime_detect(data: &GwaData<BigRational>, v: &ValuationSpec) -> GwaPrimeReport {
    let mut bad = Vec::new();
    let alpha = data.sigma.alpha();
    let va = v.vp(alpha).expect("alpha is nonzero");
    if va != 0 {
        bad.push(BadCoefficient {
            location: BadLocation::SigmaAlpha,
            value: alpha.clone(),
            valuation: va,
        });
    }
    if let Some(vb) = v.vp(data.sigma.beta()) {
        if vb < 0 {
            bad.push(BadCoefficient {
                location: BadLocation::SigmaBeta,
                value: data.sigma.beta().clone(),
                valuation: vb,
            });
        }
    }
    let mut a_reduces_to_zero = true;
    for (i, c) in data.a.coeffs().iter().enumerate() {
        if let Some(vc) = v.vp(c) {
            if vc < 0 {
                bad.push(BadCoefficient {
                    location: BadLocation::ACoeff(i),
                    value: c.clone(),
                    valuation: vc,
                });
            }
            if vc <= 0 {
                a_reduces_to_zero = false;
            }
        }
    }
    GwaPrimeReport {
        good: bad.is_empty(),
        bad,
        a_reduces_to_zero,
    }
}

/// Coefficientwise reduction of the defining data; refuses bad primes with
/// the full list of obstructions.
pub fn gwa_reduce(data: &GwaData<BigRational>, v: &ValuationSpec) -> Result<GwaData<Fp>, GwaError> {
    let report = bad_prime_detect(data, v);
    if !report.good {
        return Err(GwaError::BadPrime {
            prime: v.prime(),
            bad: report.bad,
        });
    }
    let red = |q: &BigRational| v.reduce_scalar(q).expect("coefficient is p-integral");
    let sigma = AffineAuto::new(red(data.sigma.alpha()), red(data.sigma.beta()))
        .expect("alpha reduces to a unit");
    let a = UniPoly::from_coeffs(data.a.coeffs().iter().map(red).collect());
    Ok(GwaData::new(sigma, a))
}

/// One catalog model: parameter names with their defaults (`None` means the
/// parameter is required).
pub struct CatalogEntry {
    pub name: &'static str,
    pub params: &'static [(&'static str, Option<i64>)],
    pub description: &'static str,
}

pub const GWA_CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "weyl",
        params: &[],
        description: "sigma(h) = h + 1, a = h; the first Weyl algebra",
    },
    CatalogEntry {
        name: "quantum_weyl",
        params: &[("q", None)],
        description: "sigma(h) = (h - 1)/q, a = h; the quantum Weyl algebra",
    },
    CatalogEntry {
        name: "quantum_plane",
        params: &[("q", None)],
        description: "sigma(h) = q*h, a = h; XY = q*YX",
    },
    CatalogEntry {
        name: "usl2",
        params: &[("c", Some(0))],
        description: "sigma(h) = h - 1, a = c - h^2; U(sl2) at central value c",
    },
    CatalogEntry {
        name: "uq_sl2",
        params: &[("q", None), ("c", Some(0))],
        description: "sigma(h) = h/q^2 - 1, a = c - h^2; a quantized sl2 variant",
    },
    CatalogEntry {
        name: "quantum_heisenberg",
        params: &[("q", None)],
        description: "sigma(h) = q*h, a = h/(q - 1); [X, Y] = h",
    },
];

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Builds a catalog model from its name and parameter assignment.  Unknown
/// names, unknown or missing parameters and degenerate parameter values are
/// rejected.
pub fn gwa_catalog(
    name: &str,
    params: &BTreeMap<String, BigRational>,
) -> Result<GwaData<BigRational>, GwaError> {
    let entry = GWA_CATALOG
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| GwaError::UnknownModel(name.to_string()))?;
    for key in params.keys() {
        if !entry.params.iter().any(|(p, _)| p == key) {
            return Err(GwaError::UnknownParameter {
                model: name.to_string(),
                name: key.clone(),
            });
        }
    }
    let mut values = BTreeMap::new();
    for (p, default) in entry.params {
        match (params.get(*p), default) {
            (Some(v), _) => values.insert(*p, v.clone()),
            (None, Some(d)) => values.insert(*p, rat(*d)),
            (None, None) => {
                return Err(GwaError::MissingParameter {
                    model: name.to_string(),
                    name: (*p).to_string(),
                })
            }
        };
    }
    let nonzero = |key: &str| -> Result<BigRational, GwaError> {
        let v = values[key].clone();
        if v == rat(0) {
            return Err(GwaError::InvalidParameter {
                name: key.to_string(),
                value: v,
                reason: "must be nonzero".to_string(),
            });
        }
        Ok(v)
    };
    let h = UniPoly::monomial(rat(1), 1);
    let data = match name {
        "weyl" => GwaData::new(AffineAuto::new(rat(1), rat(1))?, h),
        "quantum_weyl" => {
            let q_inv = nonzero("q")?.recip();
            GwaData::new(AffineAuto::new(q_inv.clone(), -q_inv)?, h)
        }
        "quantum_plane" => GwaData::new(AffineAuto::new(nonzero("q")?, rat(0))?, h),
        "usl2" => {
            let a = UniPoly::from_coeffs(vec![values["c"].clone(), rat(0), rat(-1)]);
            GwaData::new(AffineAuto::new(rat(1), rat(-1))?, a)
        }
        "uq_sl2" => {
            let q = nonzero("q")?;
            let a = UniPoly::from_coeffs(vec![values["c"].clone(), rat(0), rat(-1)]);
            GwaData::new(AffineAuto::new((&q * &q).recip(), rat(-1))?, a)
        }
        "quantum_heisenberg" => {
            let q = nonzero("q")?;
            let denom = &q - rat(1);
            if denom == rat(0) {
                return Err(GwaError::InvalidParameter {
                    name: "q".to_string(),
                    value: q,
                    reason: "must differ from 1".to_string(),
                });
            }
            let a = UniPoly::monomial(denom.recip(), 1);
            GwaData::new(AffineAuto::new(q, rat(0))?, a)
        }
        _ => unreachable!("matched against the catalog"),
    };
    Ok(data)
}

/// The finite presentation on X, Y, h that rewrites every word into the
/// normal form: commutation of X and Y past h and the two product rules.
/// Filtered, with X and Y in degree one and h in degree `degree_of_h`.
pub fn gwa_to_presentation<K: Coeff>(
    data: &GwaData<K>,
    degree_of_h: usize,
) -> Result<Presentation<K>, PresentationError> {
    let one = data.sigma.alpha.one_like();
    let weights = [1, 1, degree_of_h];
    let x = Word::letter(0);
    let y = Word::letter(1);
    let h = Word::letter(2);
    let h_pow = |k: usize| Word::from_letters(&vec![2u32; k]);
    let in_h = |p: &UniPoly<K>| -> Vec<(Word, K)> {
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| (h_pow(k), c.negated()))
            .collect()
    };
    let sigma_h = sigma_apply(data.sigma(), &UniPoly::monomial(one.clone(), 1), 1);
    let sigma_inv_h = sigma_apply(data.sigma(), &UniPoly::monomial(one.clone(), 1), -1);
    let mut rel_x = vec![(x.concat(&h), one.clone())];
    rel_x.extend(
        in_h(&sigma_h)
            .into_iter()
            .map(|(w, c)| (w.concat(&x), c)),
    );
    let mut rel_y = vec![(y.concat(&h), one.clone())];
    rel_y.extend(
        in_h(&sigma_inv_h)
            .into_iter()
            .map(|(w, c)| (w.concat(&y), c)),
    );
    let mut rel_yx = vec![(y.concat(&x), one.clone())];
    rel_yx.extend(in_h(data.a()));
    let mut rel_xy = vec![(x.concat(&y), one.clone())];
    rel_xy.extend(in_h(&sigma_apply(data.sigma(), data.a(), 1)));
    let relations = vec![
        NcPolynomial::from_terms(&weights, rel_x),
        NcPolynomial::from_terms(&weights, rel_y),
        NcPolynomial::from_terms(&weights, rel_yx),
        NcPolynomial::from_terms(&weights, rel_xy),
    ];
    Presentation::new(
        vec![
            Generator::new("X", 1),
            Generator::new("Y", 1),
            Generator::new("h", degree_of_h),
        ],
        relations,
        Mode::Filtered,
        one,
    )
}

/// Filtered dimension table of the normal-form basis h^j·vᵢ under the
/// weighting deg X = deg Y = 1, deg h = degree_of_h: entry m counts the
/// pairs (j, i) with j·degree_of_h + |i| ≤ m.
pub fn gwa_dims(max_degree: usize, degree_of_h: usize) -> crate::presentations::HilbertTable {
    assert!(degree_of_h >= 1, "h needs positive degree");
    let dims = (0..=max_degree)
        .map(|m| {
            (0..=m / degree_of_h)
                .map(|j| 2 * (m - j * degree_of_h) + 1)
                .sum()
        })
        .collect();
    crate::presentations::HilbertTable {
        max_degree,
        dims,
    }
}
