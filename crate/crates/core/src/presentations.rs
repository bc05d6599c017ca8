//! Finitely presented graded and filtered algebras.
//!
//! A presentation is a list of named generators with positive degrees and a
//! list of nonzero relation polynomials.  Dimensions of the quotient are
//! computed degree by degree: the degree-n piece of the relation ideal is
//! exactly the span of the products u·p_i·w landing in degree n, so a rank
//! computation on that span is complete at each truncation level, with no
//! need for noncommutative Groebner bases.
//!
//! The word basis of the free algebra is enumerated degree by degree and
//! lexicographically inside each degree, which fixes the column order of
//! every matrix built here.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::freealg::{Coeff, NcPolynomial, SpecValue, Word};
use crate::linalg::{left_kernel, Echelon, SRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Graded,
    Filtered,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Graded => write!(f, "graded"),
            Mode::Filtered => write!(f, "filtered"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: usize) -> Self {
        Generator {
            name: name.into(),
            degree,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("generator names may not be empty")]
    EmptyGeneratorName,
    #[error("duplicate generator name {0:?}")]
    DuplicateGeneratorName(String),
    #[error("generator {0:?} must have positive degree")]
    ZeroDegreeGenerator(String),
    #[error("relation is written in {found} generators, the presentation has {expected}")]
    GeneratorCountMismatch { expected: usize, found: usize },
    #[error("relation degree assignment disagrees with the generator degrees")]
    DegreeAssignmentMismatch,
    #[error("zero relation")]
    ZeroRelation,
    #[error("unit relation: the quotient algebra collapses")]
    UnitRelation,
    #[error("graded presentations require homogeneous relations")]
    InhomogeneousRelation,
    #[error("relation coefficients live in different fields")]
    FieldMismatch,
    #[error("this operation requires a {required} presentation")]
    WrongMode { required: Mode },
}

/// A finitely presented algebra: the free algebra on the generators modulo
/// the two-sided ideal generated by the relations.
///
/// `one` is the unit of the coefficient field; it travels with the
/// presentation so that constructions like Rees commutators can synthesize
/// coefficients even when the relation list is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation<K: Coeff> {
    generators: Vec<Generator>,
    relations: Vec<NcPolynomial<K>>,
    mode: Mode,
    one: K,
}

impl<K: Coeff> Presentation<K> {
    pub fn new(
        generators: Vec<Generator>,
        relations: Vec<NcPolynomial<K>>,
        mode: Mode,
        one: K,
    ) -> Result<Self, PresentationError> {
        debug_assert!(one.is_one());
        let mut seen = std::collections::BTreeSet::new();
        for g in &generators {
            if g.name.is_empty() {
                return Err(PresentationError::EmptyGeneratorName);
            }
            if g.degree == 0 {
                return Err(PresentationError::ZeroDegreeGenerator(g.name.clone()));
            }
            if !seen.insert(&g.name) {
                return Err(PresentationError::DuplicateGeneratorName(g.name.clone()));
            }
        }
        let weights: Vec<usize> = generators.iter().map(|g| g.degree).collect();
        let mut kept: Vec<NcPolynomial<K>> = Vec::new();
        for rel in relations {
            if rel.nvars() != generators.len() {
                return Err(PresentationError::GeneratorCountMismatch {
                    expected: generators.len(),
                    found: rel.nvars(),
                });
            }
            if rel.weights() != weights {
                return Err(PresentationError::DegreeAssignmentMismatch);
            }
            let degree = rel.degree().ok_or(PresentationError::ZeroRelation)?;
            if !rel.terms().all(|(_, c)| c.same_field(&one)) {
                return Err(PresentationError::FieldMismatch);
            }
            // a constant relation, or a degree-1 relation with a constant
            // part, forces a unit into the ideal at low degree
            if degree == 0 || (degree == 1 && !rel.homogeneous_part(0).is_zero()) {
                return Err(PresentationError::UnitRelation);
            }
            if mode == Mode::Graded && !rel.is_homogeneous() {
                return Err(PresentationError::InhomogeneousRelation);
            }
            if !kept.contains(&rel) {
                kept.push(rel);
            }
        }
        Ok(Presentation {
            generators,
            relations: kept,
            mode,
            one,
        })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[NcPolynomial<K>] {
        &self.relations
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn one(&self) -> &K {
        &self.one
    }

    pub fn nvars(&self) -> usize {
        self.generators.len()
    }

    pub fn weights(&self) -> Vec<usize> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    /// The same data with the mode relaxed to filtered.  Always valid:
    /// homogeneous relations satisfy every filtered-mode constraint.
    pub fn viewed_filtered(&self) -> Self {
        Presentation {
            generators: self.generators.clone(),
            relations: self.relations.clone(),
            mode: Mode::Filtered,
            one: self.one.clone(),
        }
    }
}

impl<K: Coeff> fmt::Display for Presentation<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.generator_names();
        write!(f, "<{}", names.join(", "))?;
        if !self.relations.is_empty() {
            write!(f, " | ")?;
            let rendered: Vec<String> = self
                .relations
                .iter()
                .map(|r| r.display_with_names(&names))
                .collect();
            write!(f, "{}", rendered.join(", "))?;
        }
        write!(f, ">")
    }
}

/// Per-degree dimension table of a quotient algebra, entry n for graded
/// degree n or for the filtered piece F_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertTable {
    pub max_degree: usize,
    pub dims: Vec<usize>,
}

impl HilbertTable {
    pub fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }
}

/// All words of the given weighted degree, in lexicographic order of their
/// letter sequences.
pub(crate) fn words_of_degree(weights: &[usize], n: usize) -> Vec<Word> {
    fn go(weights: &[usize], n: usize, prefix: &mut Vec<u32>, out: &mut Vec<Word>) {
        if n == 0 {
            out.push(Word::from_letters(prefix));
            return;
        }
        for (i, w) in weights.iter().enumerate() {
            if *w <= n {
                prefix.push(i as u32);
                go(weights, n - w, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(weights, n, &mut Vec::new(), &mut out);
    out
}

/// All words of weighted degree at most n, degree by degree (deglex order).
pub(crate) fn words_up_to(weights: &[usize], n: usize) -> Vec<Word> {
    (0..=n).flat_map(|d| words_of_degree(weights, d)).collect()
}

fn word_index(words: &[Word]) -> BTreeMap<Word, usize> {
    words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect()
}

fn product_row<K: Coeff>(
    u: &Word,
    rel: &NcPolynomial<K>,
    w: &Word,
    index: &BTreeMap<Word, usize>,
) -> SRow<K> {
    let mut row: SRow<K> = rel
        .terms()
        .map(|(t, c)| (index[&u.concat(t).concat(w)], c.clone()))
        .collect();
    row.sort_by_key(|(c, _)| *c);
    row
}

/// The degree-n slice of the relation ideal: the words of degree n (the
/// column basis) and one row per product u·p_i·w of degree exactly n.
pub(crate) fn graded_relation_rows<K: Coeff>(
    pres: &Presentation<K>,
    n: usize,
) -> (Vec<Word>, Vec<SRow<K>>) {
    let weights = pres.weights();
    let words = words_of_degree(&weights, n);
    let index = word_index(&words);
    let by_degree: Vec<Vec<Word>> = (0..=n).map(|d| words_of_degree(&weights, d)).collect();
    let mut rows = Vec::new();
    for rel in pres.relations() {
        let d = rel.degree().expect("relations are nonzero");
        if d > n {
            continue;
        }
        for a in 0..=(n - d) {
            let b = n - d - a;
            for u in &by_degree[a] {
                for w in &by_degree[b] {
                    rows.push(product_row(u, rel, w, &index));
                }
            }
        }
    }
    (words, rows)
}

/// The degree-≤n slice of the relation ideal: words of degree at most n and
/// one row per product u·p_i·w of total degree at most n, where each
/// relation contributes its leading degree.  Lower-degree terms of the
/// relations land inside the column space, so the span is exactly the
/// degree-≤n piece of the ideal.
pub(crate) fn filtered_relation_rows<K: Coeff>(
    pres: &Presentation<K>,
    n: usize,
) -> (Vec<Word>, Vec<SRow<K>>) {
    let weights = pres.weights();
    let words = words_up_to(&weights, n);
    let index = word_index(&words);
    let by_degree: Vec<Vec<Word>> = (0..=n).map(|d| words_of_degree(&weights, d)).collect();
    let mut rows = Vec::new();
    for rel in pres.relations() {
        let d = rel.degree().expect("relations are nonzero");
        if d > n {
            continue;
        }
        for a in 0..=(n - d) {
            for b in 0..=(n - d - a) {
                for u in &by_degree[a] {
                    for w in &by_degree[b] {
                        rows.push(product_row(u, rel, w, &index));
                    }
                }
            }
        }
    }
    (words, rows)
}

/// Graded dimensions dim A_n for n = 0..=max_degree.
pub fn hilbert_dims<K: Coeff>(
    pres: &Presentation<K>,
    max_degree: usize,
) -> Result<HilbertTable, PresentationError> {
    if pres.mode() != Mode::Graded {
        return Err(PresentationError::WrongMode {
            required: Mode::Graded,
        });
    }
    let mut dims = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let (words, rows) = graded_relation_rows(pres, n);
        let rank = K::rank_of_rows(rows);
        dims.push(words.len() - rank);
    }
    debug_assert_eq!(dims[0], 1);
    Ok(HilbertTable { max_degree, dims })
}

/// Filtered dimensions dim F_nA for n = 0..=max_degree.
pub fn filtered_dims<K: Coeff>(
    pres: &Presentation<K>,
    max_degree: usize,
) -> Result<HilbertTable, PresentationError> {
    if pres.mode() != Mode::Filtered {
        return Err(PresentationError::WrongMode {
            required: Mode::Filtered,
        });
    }
    // Truncated ranks: consequences of the relations that only surface at
    // higher instance degree can shrink later entries, so the sequence is
    // not forced to be monotone for degenerate inputs.
    let mut dims: Vec<usize> = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let (words, rows) = filtered_relation_rows(pres, n);
        let rank = K::rank_of_rows(rows);
        dims.push(words.len() - rank);
    }
    Ok(HilbertTable { max_degree, dims })
}

/// The graded presentation on the leading homogeneous parts of the
/// relations.  Its quotient surjects onto the associated graded algebra;
/// `check_gr_presentation` decides degreewise whether the surjection is an
/// isomorphism.
pub fn leading_ideal_presentation<K: Coeff>(
    pres: &Presentation<K>,
) -> Result<Presentation<K>, PresentationError> {
    if pres.mode() != Mode::Filtered {
        return Err(PresentationError::WrongMode {
            required: Mode::Filtered,
        });
    }
    let relations = pres
        .relations()
        .iter()
        .map(|r| r.leading_part().expect("relations are nonzero"))
        .collect();
    Presentation::new(
        pres.generators().to_vec(),
        relations,
        Mode::Graded,
        pres.one().clone(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrCheck {
    pub holds: bool,
    pub first_failing_degree: Option<usize>,
}

/// Compares the graded dimensions of the leading-part presentation with the
/// first differences of the filtered dimensions, up to `max_degree`.  They
/// agree exactly when the leading parts present the associated graded
/// algebra at these degrees.
pub fn check_gr_presentation<K: Coeff>(
    pres: &Presentation<K>,
    max_degree: usize,
) -> Result<GrCheck, PresentationError> {
    let graded = hilbert_dims(&leading_ideal_presentation(pres)?, max_degree)?;
    let filtered = filtered_dims(pres, max_degree)?;
    for n in 0..=max_degree {
        // Signed: truncated filtered dims can dip for degenerate inputs.
        let prev = if n == 0 { 0 } else { filtered.dims[n - 1] as i64 };
        let diff = filtered.dims[n] as i64 - prev;
        if graded.dims[n] as i64 != diff {
            return Ok(GrCheck {
                holds: false,
                first_failing_degree: Some(n),
            });
        }
    }
    Ok(GrCheck {
        holds: true,
        first_failing_degree: None,
    })
}

/// The Rees presentation: each relation homogenized by a fresh central
/// degree-1 generator T, plus the commutators making T central.  A filtered
/// input yields the Rees algebra of its filtration; a graded input yields
/// the polynomial extension by T.
pub fn rees_presentation<K: Coeff>(
    pres: &Presentation<K>,
) -> Result<Presentation<K>, PresentationError> {
    let mut t_name = String::from("T");
    let mut counter = 0usize;
    while pres.generators().iter().any(|g| g.name == t_name) {
        t_name = format!("T{counter}");
        counter += 1;
    }
    let mut generators = pres.generators().to_vec();
    generators.push(Generator::new(t_name, 1));
    let mut ext_weights = pres.weights();
    ext_weights.push(1);
    let t = pres.nvars() as u32;
    let one = pres.one().clone();
    let mut relations: Vec<NcPolynomial<K>> = pres
        .relations()
        .iter()
        .map(|r| r.homogenize().expect("relations are nonzero"))
        .collect();
    for j in 0..t {
        let tx = NcPolynomial::term(&ext_weights, Word::from_letters(&[t, j]), one.clone());
        let xt = NcPolynomial::term(&ext_weights, Word::from_letters(&[j, t]), one.clone());
        relations.push(tx.sub(&xt).expect("same generator context"));
    }
    Presentation::new(generators, relations, Mode::Graded, one)
}

/// Removes the generator at `var` by sending it to 0 or 1 in every relation;
/// relations that collapse to zero are dropped.  The result is validated
/// under the requested mode.
pub fn specialize_presentation<K: Coeff>(
    pres: &Presentation<K>,
    var: usize,
    value: SpecValue,
    mode: Mode,
) -> Result<Presentation<K>, PresentationError> {
    assert!(var < pres.nvars(), "generator index out of range");
    let generators: Vec<Generator> = pres
        .generators()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != var)
        .map(|(_, g)| g.clone())
        .collect();
    let relations: Vec<NcPolynomial<K>> = pres
        .relations()
        .iter()
        .map(|r| r.specialize(var, value))
        .filter(|r| !r.is_zero())
        .collect();
    Presentation::new(generators, relations, mode, pres.one().clone())
}

/// A verified pair of nonzero homogeneous classes whose product vanishes in
/// the quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroDivisorWitness<K: Coeff> {
    pub left: NcPolynomial<K>,
    pub right: NcPolynomial<K>,
    pub bidegree: (usize, usize),
}

struct DegreeData<K: Coeff> {
    index: BTreeMap<Word, usize>,
    echelon: Echelon<K>,
    basis: Vec<Word>,
}

/// Bounded search for homogeneous zero divisors: for every bidegree (i, j)
/// with i + j ≤ max_degree it multiplies each quotient basis class of
/// degree i against the whole degree-j basis (and symmetrically) and reports
/// a kernel vector if one exists, at most one witness per bidegree, in
/// increasing (i + j, i) order.  Finding a witness proves the quotient has
/// zero divisors; an empty result only certifies their absence within the
/// scanned slices up to the bound.
pub fn zero_divisor_scan<K: Coeff>(
    pres: &Presentation<K>,
    max_degree: usize,
) -> Result<Vec<ZeroDivisorWitness<K>>, PresentationError> {
    if pres.mode() != Mode::Graded {
        return Err(PresentationError::WrongMode {
            required: Mode::Graded,
        });
    }
    let weights = pres.weights();
    let one = pres.one().clone();
    let mut degrees: Vec<DegreeData<K>> = Vec::with_capacity(max_degree + 1);
    for d in 0..=max_degree {
        let (words, rows) = graded_relation_rows(pres, d);
        let index = word_index(&words);
        let mut echelon = Echelon::new();
        for row in rows {
            echelon.insert(row);
        }
        let basis = echelon
            .non_pivot_cols(words.len())
            .into_iter()
            .map(|c| words[c].clone())
            .collect();
        degrees.push(DegreeData {
            index,
            echelon,
            basis,
        });
    }
    let mut witnesses = Vec::new();
    for total in 2..=max_degree {
        for i in 1..total {
            let j = total - i;
            if let Some(w) = scan_bidegree(&weights, &one, &degrees, i, j) {
                witnesses.push(w);
            }
        }
    }
    Ok(witnesses)
}

fn scan_bidegree<K: Coeff>(
    weights: &[usize],
    one: &K,
    degrees: &[DegreeData<K>],
    i: usize,
    j: usize,
) -> Option<ZeroDivisorWitness<K>> {
    let (di, dj, dt) = (&degrees[i], &degrees[j], &degrees[i + j]);
    // left slices: u fixed, right factor unknown
    for u in &di.basis {
        let rows: Vec<SRow<K>> = dj
            .basis
            .iter()
            .map(|b| dt.echelon.reduce(vec![(dt.index[&u.concat(b)], one.clone())]))
            .collect();
        if let Some(comb) = left_kernel(&rows, one).into_iter().next() {
            let left = NcPolynomial::term(weights, u.clone(), one.clone());
            let right = NcPolynomial::from_terms(
                weights,
                comb.into_iter()
                    .map(|(idx, c)| (dj.basis[idx].clone(), c))
                    .collect(),
            );
            return Some(verified_witness(left, right, (i, j), dt));
        }
    }
    // right slices: v fixed, left factor unknown
    for v in &dj.basis {
        let rows: Vec<SRow<K>> = di
            .basis
            .iter()
            .map(|b| dt.echelon.reduce(vec![(dt.index[&b.concat(v)], one.clone())]))
            .collect();
        if let Some(comb) = left_kernel(&rows, one).into_iter().next() {
            let left = NcPolynomial::from_terms(
                weights,
                comb.into_iter()
                    .map(|(idx, c)| (di.basis[idx].clone(), c))
                    .collect(),
            );
            let right = NcPolynomial::term(weights, v.clone(), one.clone());
            return Some(verified_witness(left, right, (i, j), dt));
        }
    }
    None
}

fn verified_witness<K: Coeff>(
    left: NcPolynomial<K>,
    right: NcPolynomial<K>,
    bidegree: (usize, usize),
    dt: &DegreeData<K>,
) -> ZeroDivisorWitness<K> {
    let product = left.multiply(&right).expect("same generator context");
    let mut row: SRow<K> = product
        .terms()
        .map(|(w, c)| (dt.index[w], c.clone()))
        .collect();
    row.sort_by_key(|(c, _)| *c);
    assert!(
        dt.echelon.reduce(row).is_empty(),
        "zero-divisor witness does not vanish"
    );
    assert!(!left.is_zero() && !right.is_zero());
    ZeroDivisorWitness {
        left,
        right,
        bidegree,
    }
}
