//! Shared fixtures for the benchmark targets.

use num_bigint::BigInt;

use algred::{Generator, Mode, NcPolynomial, Presentation, Rational, Word};

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// x*y - q*y*x on two degree-1 generators, graded.
pub fn quantum_plane(q: i64) -> Presentation<Rational> {
    let weights = [1usize, 1];
    let rel = NcPolynomial::from_terms(
        &weights,
        vec![
            (Word::from_letters(&[0, 1]), rat(1)),
            (Word::from_letters(&[1, 0]), rat(-q)),
        ],
    );
    Presentation::new(
        vec![Generator::new("x", 1), Generator::new("y", 1)],
        vec![rel],
        Mode::Graded,
        rat(1),
    )
    .expect("valid presentation")
}

/// x*y - y*x - 1 on two degree-1 generators, filtered.
pub fn weyl() -> Presentation<Rational> {
    let weights = [1usize, 1];
    let rel = NcPolynomial::from_terms(
        &weights,
        vec![
            (Word::from_letters(&[0, 1]), rat(1)),
            (Word::from_letters(&[1, 0]), rat(-1)),
            (Word::from_letters(&[]), rat(-1)),
        ],
    );
    Presentation::new(
        vec![Generator::new("x", 1), Generator::new("y", 1)],
        vec![rel],
        Mode::Filtered,
        rat(1),
    )
    .expect("valid presentation")
}
