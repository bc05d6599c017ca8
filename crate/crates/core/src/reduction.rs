//! Reduction of rational presentations modulo a prime, and the lattice
//! diagnostics that decide how faithful the reduction is.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::dvr::{DvrError, PLocalSmithForm, ValuationSpec};
use crate::freealg::{Coeff, Fp, NcPolynomial};
use crate::linalg::{
    left_kernel, saturate_rows_at, srow_add_scaled, srow_scale, zrow_primitive_from_rational,
    Echelon, PUnitEchelon, SRow,
};
use crate::presentations::{
    filtered_dims, filtered_relation_rows, graded_relation_rows, hilbert_dims, zero_divisor_scan,
    HilbertTable, Mode, Presentation, PresentationError, ZeroDivisorWitness,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error(transparent)]
    Scalar(#[from] DvrError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// The presentation over F_p obtained by dividing each relation by its
/// p-power content and reducing the coefficients.
///
/// Content normalization makes every relation p-integral with at least one
/// unit coefficient, so no relation collapses to zero.  A filtered relation
/// can still lose its leading terms and reduce to a unit relation; that
/// degenerate quotient is reported as a presentation error.
pub fn reduce_presentation(
    pres: &Presentation<BigRational>,
    v: &ValuationSpec,
) -> Result<Presentation<Fp>, ReductionError> {
    let mut relations = Vec::with_capacity(pres.relations().len());
    for rel in pres.relations() {
        let normalized = v.normalize_content(rel)?;
        let reduced = v.reduce_poly(&normalized)?;
        debug_assert!(!reduced.is_zero());
        relations.push(reduced);
    }
    Ok(Presentation::new(
        pres.generators().to_vec(),
        relations,
        pres.mode(),
        Fp::new(1, v.prime()),
    )?)
}

/// Degreewise comparison of a graded quotient with its reduction mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub prime: u64,
    pub max_degree: usize,
    /// Graded dimensions over the rationals.
    pub dims_rational: HilbertTable,
    /// Graded dimensions of the reduced quotient over F_p.
    pub dims_residue: HilbertTable,
    /// dims_residue - dims_rational, entry per degree; never negative.
    pub defect: Vec<usize>,
    /// True when the defect vanishes through max_degree.
    pub reduces_well: bool,
    /// True when the zero-divisor scan of the reduction comes back empty.
    pub domain_up_to_degree: bool,
    /// First witness found by the scan, if any.
    pub zero_divisor: Option<ZeroDivisorWitness<Fp>>,
    /// Smallest degree with positive defect.
    pub first_bad_degree: Option<usize>,
}

/// Reduces a graded presentation mod p and tabulates both Hilbert series
/// side by side, together with a zero-divisor scan of the reduction.
///
/// Rank over F_p can only drop against the rational rank, so the residue
/// dimensions dominate the rational ones degree by degree; a violation is a
/// bug in the elimination and panics.
pub fn good_reduction_report(
    pres: &Presentation<BigRational>,
    v: &ValuationSpec,
    max_degree: usize,
) -> Result<ReductionReport, ReductionError> {
    let dims_rational = hilbert_dims(pres, max_degree)?;
    let reduced = reduce_presentation(pres, v)?;
    let dims_residue = hilbert_dims(&reduced, max_degree)?;
    let mut defect = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let k = dims_rational.dims[n];
        let kv = dims_residue.dims[n];
        assert!(
            kv >= k,
            "residue dimension {kv} fell below rational dimension {k} in degree {n}"
        );
        defect.push(kv - k);
    }
    let first_bad_degree = defect.iter().position(|d| *d > 0);
    let zero_divisor = zero_divisor_scan(&reduced, max_degree)?.into_iter().next();
    Ok(ReductionReport {
        prime: v.prime(),
        max_degree,
        dims_rational,
        dims_residue,
        defect,
        reduces_well: first_bad_degree.is_none(),
        domain_up_to_degree: zero_divisor.is_none(),
        zero_divisor,
        first_bad_degree,
    })
}

/// Rank drop of the degree-n relation slice under reduction mod p: the rank
/// over the rationals of the content-normalized relation multiples minus the
/// rank of the same rows with coefficients reduced.
///
/// Deliberately computed on rows rather than on the reduced presentation, so
/// it cross-checks `good_reduction_report`: the value equals the report's
/// defect in degree n.
pub fn saturation_defect(
    pres: &Presentation<BigRational>,
    v: &ValuationSpec,
    n: usize,
) -> Result<usize, ReductionError> {
    if pres.mode() != Mode::Graded {
        return Err(PresentationError::WrongMode {
            required: Mode::Graded,
        }
        .into());
    }
    let normalized: Vec<NcPolynomial<BigRational>> = pres
        .relations()
        .iter()
        .map(|r| v.normalize_content(r))
        .collect::<Result<_, DvrError>>()?;
    let normalized = Presentation::new(
        pres.generators().to_vec(),
        normalized,
        Mode::Graded,
        pres.one().clone(),
    )?;
    let (_, rows) = graded_relation_rows(&normalized, n);
    let mut residue_rows = Vec::with_capacity(rows.len());
    for row in &rows {
        let mut out: SRow<Fp> = Vec::with_capacity(row.len());
        for (c, q) in row {
            let f = v.reduce_scalar(q)?;
            if !f.is_zero() {
                out.push((*c, f));
            }
        }
        residue_rows.push(out);
    }
    let rational_rank = BigRational::rank_of_rows(rows);
    let residue_rank = Fp::rank_of_rows(residue_rows);
    debug_assert!(rational_rank >= residue_rank);
    Ok(rational_rank - residue_rank)
}

/// Images of the words of degree at most `bound` in p-integral coordinates
/// on the quotient piece F_bound, built from one unit-pivot echelon of the
/// relation rows.  Returned images are grouped with the count of words of
/// degree at most `cutoff`; word order puts those first.
fn word_images(
    pres: &Presentation<BigRational>,
    v: &ValuationSpec,
    bound: usize,
    cutoff: usize,
) -> (Vec<SRow<BigRational>>, usize) {
    let viewed = match pres.mode() {
        Mode::Filtered => pres.clone(),
        Mode::Graded => pres.viewed_filtered(),
    };
    let weights = viewed.weights();
    let (words, rows) = filtered_relation_rows(&viewed, bound);
    let mut ech = PUnitEchelon::new(v.prime());
    for row in rows {
        ech.insert_span_row(row);
    }
    let images = (0..words.len())
        .map(|c| ech.reduce(vec![(c, BigRational::one())]))
        .collect();
    let low_count = words
        .iter()
        .take_while(|w| w.degree(&weights) <= cutoff)
        .count();
    (images, low_count)
}

/// True when the p-local Smith rank of the lattice spanned by the word
/// images of degree at most n equals dim F_n.
///
/// The images span F_n over the rationals, so this always holds; the value
/// of the check is that the two sides travel through independent code paths
/// (unit-pivot echelon plus Smith form against fraction-free rank), and a
/// false answer convicts one of them.
pub fn lattice_rank_check(
    pres: &Presentation<BigRational>,
    v: &ValuationSpec,
    n: usize,
) -> Result<bool, ReductionError> {
    let (images, low_count) = word_images(pres, v, n, n);
    debug_assert_eq!(images.len(), low_count);
    let form = v.p_local_smith(&images)?;
    let viewed = match pres.mode() {
        Mode::Filtered => pres.clone(),
        Mode::Graded => pres.viewed_filtered(),
    };
    let dims = filtered_dims(&viewed, n)?;
    Ok(form.rank == dims.dim(n))
}

/// Shared data for the scaling checks at one cutoff: the degree-≤n word
/// image lattice, saturated generators of the intersection of the full
/// window lattice with the degree-≤n subspace, and the Smith form of the
/// unscaled low lattice.
struct LatticeWindow {
    gens_low: Vec<SRow<BigRational>>,
    intersection: Vec<SRow<BigRational>>,
    base_form: PLocalSmithForm,
}

fn lattice_window(
    pres: &Presentation<BigRational>,
    v: &ValuationSpec,
    n: usize,
) -> Result<LatticeWindow, ReductionError> {
    // two degrees of headroom let combinations of higher words fall into F_n
    let (images, low_count) = word_images(pres, v, n + 2, n);
    let gens_low: Vec<SRow<BigRational>> = images[..low_count].to_vec();
    let mut low_span: Echelon<BigRational> = Echelon::new();
    for g in &gens_low {
        low_span.insert(g.clone());
    }
    // integral combinations of all window images that land in the low
    // subspace: the kernel of the residues modulo the low span, saturated
    // at p so the combinations generate the full intersection lattice
    let residues: Vec<SRow<BigRational>> =
        images.iter().map(|g| low_span.reduce(g.clone())).collect();
    let rational_kernel = left_kernel(&residues, &BigRational::one());
    let integral = rational_kernel
        .iter()
        .map(zrow_primitive_from_rational)
        .collect();
    let saturated = saturate_rows_at(integral, v.prime());
    let mut intersection = Vec::with_capacity(saturated.len());
    for comb in &saturated {
        let mut acc: SRow<BigRational> = Vec::new();
        for (i, c) in comb {
            acc = srow_add_scaled(&acc, &images[*i], &BigRational::from(c.clone()));
        }
        if !acc.is_empty() {
            intersection.push(acc);
        }
    }
    let base_form = v.p_local_smith(&gens_low)?;
    Ok(LatticeWindow {
        gens_low,
        intersection,
        base_form,
    })
}

fn scaling_commutes_at(
    window: &LatticeWindow,
    v: &ValuationSpec,
    a: u32,
) -> Result<bool, ReductionError> {
    let scale = BigRational::from_integer(BigInt::from(v.prime()).pow(a));
    let scaled = |rows: &[SRow<BigRational>]| -> Vec<SRow<BigRational>> {
        rows.iter()
            .map(|r| {
                let mut r = r.clone();
                srow_scale(&mut r, &scale);
                r
            })
            .collect()
    };
    let low_form = v.p_local_smith(&scaled(&window.gens_low))?;
    let intersection_form = v.p_local_smith(&scaled(&window.intersection))?;
    let shifted: Vec<u32> = window
        .base_form
        .invariant_exponents
        .iter()
        .map(|e| e + a)
        .collect();
    Ok(low_form == intersection_form
        && low_form.rank == window.base_form.rank
        && low_form.invariant_exponents == shifted)
}

/// Scaling the word-image lattice by p^a commutes with cutting to degree n:
/// p^a times the degree-≤n lattice must equal the intersection of the scaled
/// window lattice with the degree-≤n subspace, and its Smith invariants must
/// be the unscaled ones shifted by exactly a.
///
/// Both sides are full-rank lattices in the same subspace with one
/// containing the other, so equal invariant multisets decide equality.  The
/// window truncates the lattice two degrees above the cutoff.
pub fn lattice_scaling_commutes(
    pres: &Presentation<BigRational>,
    v: &ValuationSpec,
    n: usize,
    a: u32,
) -> Result<bool, ReductionError> {
    let window = lattice_window(pres, v, n)?;
    scaling_commutes_at(&window, v, a)
}

/// `lattice_scaling_commutes` for every a in 0..=max_a, computing the window
/// once.
pub fn lattice_scaling_sweep(
    pres: &Presentation<BigRational>,
    v: &ValuationSpec,
    n: usize,
    max_a: u32,
) -> Result<Vec<bool>, ReductionError> {
    let window = lattice_window(pres, v, n)?;
    (0..=max_a)
        .map(|a| scaling_commutes_at(&window, v, a))
        .collect()
}
