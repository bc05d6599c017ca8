//! Exact linear-algebra computations with finitely presented graded and
//! filtered associative algebras over the rationals.
//!
//! The crate is organised around a pipeline:
//!
//! * [`freealg`] — words and polynomials in a free associative algebra over
//!   an exact coefficient field (arbitrary-precision rationals or a prime
//!   residue field),
//! * [`dvr`] — the p-adic valuation on rationals, content normalization,
//!   coefficient reduction modulo p, and p-local Smith normal forms,
//! * [`presentations`] — finitely presented algebras, degreewise dimension
//!   counts by exact rank computations, leading-term and Rees constructions,
//!   and a bounded zero-divisor search,
//! * [`reduction`] — comparing an algebra over the rationals with its
//!   reduction modulo p: dimension defects, saturation defects and lattice
//!   coherence checks,
//! * [`gwa`] — generalized Weyl algebras over a univariate polynomial ring
//!   with an affine twist, including a small catalog of standard examples.

pub mod dvr;
pub mod freealg;
pub mod gwa;
mod linalg;
pub mod presentations;
pub mod reduction;

pub use dvr::{scaled_degree, DvrError, PLocalSmithForm, ValuationSpec};
pub use freealg::{Coeff, Fp, NcPolynomial, SpecValue, Word};
pub use gwa::{
    bad_prime_detect, gwa_catalog, gwa_commutator_check, gwa_dims, gwa_multiply, gwa_reduce,
    gwa_to_presentation, sigma_apply, AffineAuto, BadCoefficient, BadLocation, CatalogEntry,
    GwaData, GwaElement, GwaError, GwaPrimeReport, UniPoly, GWA_CATALOG,
};
pub use presentations::{
    check_gr_presentation, filtered_dims, hilbert_dims, leading_ideal_presentation,
    rees_presentation, specialize_presentation, zero_divisor_scan, Generator, GrCheck,
    HilbertTable, Mode, Presentation, PresentationError, ZeroDivisorWitness,
};
pub use reduction::{
    good_reduction_report, lattice_rank_check, lattice_scaling_commutes, lattice_scaling_sweep,
    reduce_presentation, saturation_defect, ReductionError, ReductionReport,
};

pub type Rational = num_rational::BigRational;
