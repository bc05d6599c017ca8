//! Shared fixtures and independent oracles for the integration suites.
//!
//! The dimension oracles use dense Gaussian elimination with their own word
//! enumeration and, over F_p, their own u64 modular arithmetic; the Weyl
//! oracle models the algebra as differential operators on Q[t].  None of
//! them touch the library's sparse elimination or word machinery.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::Rng;

use algred::{Generator, GwaElement, Mode, NcPolynomial, Presentation, UniPoly, Word};

pub type OracleRelation = Vec<(Vec<u32>, BigRational)>;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// x*y - q*y*x.
pub fn qplane_relations(q: i64) -> Vec<OracleRelation> {
    vec![vec![(vec![0, 1], rat(1)), (vec![1, 0], rat(-q))]]
}

/// x*y - y*x - 1.
pub fn weyl_relations() -> Vec<OracleRelation> {
    vec![vec![
        (vec![0, 1], rat(1)),
        (vec![1, 0], rat(-1)),
        (vec![], rat(-1)),
    ]]
}

/// Builds a presentation from the same literal data the oracles consume.
pub fn presentation(
    gens: &[(&str, usize)],
    relations: &[OracleRelation],
    mode: Mode,
) -> Presentation<BigRational> {
    let weights: Vec<usize> = gens.iter().map(|(_, d)| *d).collect();
    let rels = relations
        .iter()
        .map(|r| {
            NcPolynomial::from_terms(
                &weights,
                r.iter()
                    .map(|(w, c)| (Word::from_letters(w), c.clone()))
                    .collect(),
            )
        })
        .collect();
    Presentation::new(
        gens.iter().map(|(n, d)| Generator::new(*n, *d)).collect(),
        rels,
        mode,
        rat(1),
    )
    .expect("valid presentation")
}

pub fn quantum_plane(q: i64) -> Presentation<BigRational> {
    presentation(&[("x", 1), ("y", 1)], &qplane_relations(q), Mode::Graded)
}

pub fn weyl() -> Presentation<BigRational> {
    presentation(&[("x", 1), ("y", 1)], &weyl_relations(), Mode::Filtered)
}

/// All words over the generators with the given exact weighted degree, in
/// lexicographic order of the letter sequences.
pub fn words_of_weight(weights: &[usize], degree: usize) -> Vec<Vec<u32>> {
    fn go(weights: &[usize], remaining: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for (i, w) in weights.iter().enumerate() {
            if *w <= remaining {
                prefix.push(i as u32);
                go(weights, remaining - w, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(weights, degree, &mut Vec::new(), &mut out);
    out
}

fn word_weight(weights: &[usize], word: &[u32]) -> usize {
    word.iter().map(|l| weights[*l as usize]).sum()
}

fn relation_degree(weights: &[usize], rel: &OracleRelation) -> usize {
    rel.iter()
        .map(|(w, _)| word_weight(weights, w))
        .max()
        .expect("nonzero relation")
}

/// Row-echelon rank of dense rational rows, reducing each new row against
/// the pivots found so far.
fn dense_rank(rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map(Vec::len).unwrap_or(0);
    let mut pivots: Vec<(usize, Vec<BigRational>)> = Vec::new();
    for mut row in rows {
        for (pc, pr) in &pivots {
            if !row[*pc].is_zero() {
                let factor = row[*pc].clone();
                for j in *pc..ncols {
                    if !pr[j].is_zero() {
                        row[j] = &row[j] - &(&factor * &pr[j]);
                    }
                }
            }
        }
        if let Some(c) = (0..ncols).find(|j| !row[*j].is_zero()) {
            let lead = row[c].clone();
            for item in row.iter_mut().skip(c) {
                *item = &*item / &lead;
            }
            pivots.push((c, row));
        }
    }
    pivots.len()
}

fn graded_rows(
    weights: &[usize],
    relations: &[OracleRelation],
    degree: usize,
) -> (usize, Vec<Vec<BigRational>>) {
    let words = words_of_weight(weights, degree);
    let index: BTreeMap<Vec<u32>, usize> = words
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    let mut rows = Vec::new();
    for rel in relations {
        let rel_deg = relation_degree(weights, rel);
        if rel_deg > degree {
            continue;
        }
        for du in 0..=(degree - rel_deg) {
            let dv = degree - rel_deg - du;
            for u in words_of_weight(weights, du) {
                for v in words_of_weight(weights, dv) {
                    let mut row = vec![BigRational::zero(); words.len()];
                    for (w, c) in rel {
                        let mut full = u.clone();
                        full.extend_from_slice(w);
                        full.extend_from_slice(&v);
                        let col = index[&full];
                        row[col] = &row[col] + c;
                    }
                    rows.push(row);
                }
            }
        }
    }
    (words.len(), rows)
}

/// Dimension of the degree-`degree` slice of the graded quotient.
pub fn dense_graded_dim(weights: &[usize], relations: &[OracleRelation], degree: usize) -> usize {
    let (ncols, rows) = graded_rows(weights, relations, degree);
    ncols - dense_rank(rows)
}

/// Dimension of the filtration piece F_n of the filtered quotient: words of
/// weight at most n modulo every relation multiple of degree at most n.
pub fn dense_filtered_dim(weights: &[usize], relations: &[OracleRelation], n: usize) -> usize {
    let mut words = Vec::new();
    for d in 0..=n {
        words.extend(words_of_weight(weights, d));
    }
    let index: BTreeMap<Vec<u32>, usize> = words
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    let mut rows = Vec::new();
    for rel in relations {
        let rel_deg = relation_degree(weights, rel);
        if rel_deg > n {
            continue;
        }
        for du in 0..=(n - rel_deg) {
            for dv in 0..=(n - rel_deg - du) {
                for u in words_of_weight(weights, du) {
                    for v in words_of_weight(weights, dv) {
                        let mut row = vec![BigRational::zero(); words.len()];
                        for (w, c) in rel {
                            let mut full = u.clone();
                            full.extend_from_slice(w);
                            full.extend_from_slice(&v);
                            let col = index[&full];
                            row[col] = &row[col] + c;
                        }
                        rows.push(row);
                    }
                }
            }
        }
    }
    words.len() - dense_rank(rows)
}

fn fp_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn fp_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = fp_mul(acc, base, p);
        }
        base = fp_mul(base, base, p);
        exp >>= 1;
    }
    acc
}

fn fp_inv(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverting zero mod {p}");
    fp_pow(a, p - 2, p)
}

fn int_vp(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero());
    let big_p = BigInt::from(p);
    let mut k = 0;
    let mut rem = n.clone();
    while (&rem % &big_p).is_zero() {
        rem /= &big_p;
        k += 1;
    }
    k
}

fn rational_vp(q: &BigRational, p: u64) -> i64 {
    int_vp(q.numer(), p) as i64 - int_vp(q.denom(), p) as i64
}

fn to_fp(q: &BigRational, p: u64) -> u64 {
    let big_p = BigInt::from(p);
    let num = ((q.numer() % &big_p) + &big_p) % &big_p;
    let den = ((q.denom() % &big_p) + &big_p) % &big_p;
    let num: u64 = num.try_into().expect("residue fits");
    let den: u64 = den.try_into().expect("residue fits");
    fp_mul(num, fp_inv(den, p), p)
}

/// Divides each relation by the power of p carried by all its coefficients,
/// then reduces the coefficients mod p.  Relations whose residue vanishes
/// cannot occur after that normalization.
fn reduce_relation(rel: &OracleRelation, p: u64) -> Vec<(Vec<u32>, u64)> {
    let min_v = rel
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(_, c)| rational_vp(c, p))
        .min()
        .expect("nonzero relation");
    let scale = if min_v >= 0 {
        BigRational::new(BigInt::one(), BigInt::from(p).pow(min_v as u32))
    } else {
        BigRational::from_integer(BigInt::from(p).pow((-min_v) as u32))
    };
    rel.iter()
        .map(|(w, c)| (w.clone(), to_fp(&(c * &scale), p)))
        .filter(|(_, c)| *c != 0)
        .collect()
}

fn dense_rank_fp(rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map(Vec::len).unwrap_or(0);
    let mut pivots: Vec<(usize, Vec<u64>)> = Vec::new();
    for mut row in rows {
        for (pc, pr) in &pivots {
            if row[*pc] != 0 {
                let factor = row[*pc];
                for j in *pc..ncols {
                    if pr[j] != 0 {
                        let sub = fp_mul(factor, pr[j], p);
                        row[j] = (row[j] + p - sub) % p;
                    }
                }
            }
        }
        if let Some(c) = (0..ncols).find(|j| row[*j] != 0) {
            let inv = fp_inv(row[c], p);
            for item in row.iter_mut().skip(c) {
                *item = fp_mul(*item, inv, p);
            }
            pivots.push((c, row));
        }
    }
    pivots.len()
}

/// Dimension of the degree-`degree` slice of the quotient after reducing
/// the content-normalized relations mod p.
pub fn dense_graded_dim_fp(
    weights: &[usize],
    relations: &[OracleRelation],
    p: u64,
    degree: usize,
) -> usize {
    let reduced: Vec<Vec<(Vec<u32>, u64)>> =
        relations.iter().map(|r| reduce_relation(r, p)).collect();
    let words = words_of_weight(weights, degree);
    let index: BTreeMap<Vec<u32>, usize> = words
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    let mut rows = Vec::new();
    for rel in &reduced {
        let rel_deg = rel
            .iter()
            .map(|(w, _)| word_weight(weights, w))
            .max()
            .expect("residue relation is nonzero");
        if rel_deg > degree {
            continue;
        }
        for du in 0..=(degree - rel_deg) {
            let dv = degree - rel_deg - du;
            for u in words_of_weight(weights, du) {
                for v in words_of_weight(weights, dv) {
                    let mut row = vec![0u64; words.len()];
                    for (w, c) in rel {
                        let mut full = u.clone();
                        full.extend_from_slice(w);
                        full.extend_from_slice(&v);
                        let col = index[&full];
                        row[col] = (row[col] + c) % p;
                    }
                    rows.push(row);
                }
            }
        }
    }
    words.len() - dense_rank_fp(rows, p)
}

/// Polynomials in Q[t] as ascending coefficient vectors without trailing
/// zeros.
pub fn trim(mut poly: Vec<BigRational>) -> Vec<BigRational> {
    while poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
    }
    poly
}

fn diff(poly: &[BigRational]) -> Vec<BigRational> {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
        .collect()
}

fn mul_t(poly: &[BigRational]) -> Vec<BigRational> {
    if poly.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero()];
    out.extend_from_slice(poly);
    out
}

fn apply_h(poly: &[BigRational]) -> Vec<BigRational> {
    poly.iter()
        .enumerate()
        .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
        .collect()
}

fn apply_base(d: &UniPoly<BigRational>, poly: &[BigRational]) -> Vec<BigRational> {
    let mut total = vec![BigRational::zero(); poly.len()];
    let mut power = poly.to_vec();
    for c in d.coeffs() {
        if !c.is_zero() {
            for (t, v) in total.iter_mut().zip(&power) {
                *t = &*t + &(c * v);
            }
        }
        power = apply_h(&power);
    }
    total
}

/// The Weyl algebra acting on Q[t]: X differentiates, Y multiplies by t,
/// and h = YX is the Euler operator t d/dt.  A nonzero element with index
/// range within [-2, 2] and base degree at most 4 cannot kill all of
/// t^0..t^8, so agreement on those inputs certifies equality at the sizes
/// the tests use.
pub fn weyl_apply(elem: &GwaElement<BigRational>, poly: &[BigRational]) -> Vec<BigRational> {
    let mut total: Vec<BigRational> = Vec::new();
    for (i, d) in elem.terms() {
        let mut part = poly.to_vec();
        if *i >= 0 {
            for _ in 0..*i {
                part = diff(&part);
            }
        } else {
            for _ in 0..(-*i) {
                part = mul_t(&part);
            }
        }
        part = apply_base(d, &part);
        if total.len() < part.len() {
            total.resize(part.len(), BigRational::zero());
        }
        for (t, v) in total.iter_mut().zip(&part) {
            *t = &*t + v;
        }
    }
    trim(total)
}

/// Counts the normal-form monomials h^k X^i and h^k Y^j of filtration
/// degree at most m by brute enumeration.
pub fn count_normal_form_monomials(max_degree: usize, degree_of_h: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(max_degree + 1);
    for m in 0..=max_degree {
        let mut count = 0usize;
        for k in 0..=m {
            for i in 0..=m {
                if k * degree_of_h + i <= m {
                    count += 1;
                }
            }
            for j in 1..=m {
                if k * degree_of_h + j <= m {
                    count += 1;
                }
            }
        }
        out.push(count);
    }
    out
}

/// True when every relation coefficient is p-integral, i.e. the
/// presentation admits reduction at p at all.
pub fn relations_p_integral(pres: &Presentation<BigRational>, p: u64) -> bool {
    pres.relations().iter().all(|rel| {
        rel.terms()
            .all(|(_, c)| c.is_zero() || rational_vp(c, p) >= 0)
    })
}

/// Element with index range [-2, 2] and base polynomials of degree at most
/// 4: the sizes the operator-model separation argument covers.
pub fn random_element(rng: &mut StdRng) -> GwaElement<BigRational> {
    let mut parts = Vec::new();
    for i in -2..=2i64 {
        if rng.random_range(0..3) == 0 {
            continue;
        }
        let deg = rng.random_range(0..=4usize);
        let coeffs: Vec<BigRational> = (0..=deg).map(|_| rat(rng.random_range(-5..=5))).collect();
        parts.push((i, UniPoly::from_coeffs(coeffs)));
    }
    GwaElement::from_terms(parts)
}

pub fn random_base_poly(rng: &mut StdRng) -> UniPoly<BigRational> {
    let deg = rng.random_range(0..=4usize);
    UniPoly::from_coeffs((0..=deg).map(|_| rat(rng.random_range(-5..=5))).collect())
}

pub fn abs_le(q: &BigRational, bound: i64) -> bool {
    q.abs() <= BigRational::from_integer(BigInt::from(bound))
}
