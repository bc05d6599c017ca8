//! The discrete valuation layer at a rational prime p.
//!
//! `ValuationSpec` fixes the prime and provides the valuation `vp` on exact
//! rationals, reduction of integral scalars and polynomials to the residue
//! field, content normalization by powers of p, and a p-local Smith normal
//! form used by the lattice checks.  `scaled_degree` is the index arithmetic
//! for filtrations sampled in steps of e.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::freealg::{Coeff, Fp, NcPolynomial};
use crate::linalg;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DvrError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported modulus bound")]
    PrimeTooLarge(u64),
    #[error("{value} is not p-integral at p = {prime} (valuation {valuation})")]
    NotIntegral {
        value: BigRational,
        prime: u64,
        valuation: i64,
    },
    #[error("the zero polynomial has no content")]
    ZeroPolynomial,
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        base %= n;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A rational prime p together with the valuation and reduction maps of the
/// localization of the integers at p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValuationSpec {
    p: u64,
}

impl ValuationSpec {
    pub fn new(p: u64) -> Result<Self, DvrError> {
        if p >= Fp::MAX_MODULUS {
            return Err(DvrError::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(DvrError::NotPrime(p));
        }
        Ok(ValuationSpec { p })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// p-adic valuation; `None` stands for +infinity at 0.
    pub fn vp(&self, q: &BigRational) -> Option<i64> {
        linalg::vp_rational(q, &BigInt::from(self.p))
    }

    /// Image of a p-integral rational in the residue field.
    pub fn reduce_scalar(&self, q: &BigRational) -> Result<Fp, DvrError> {
        let p = BigInt::from(self.p);
        if q.denom().mod_floor(&p).is_zero() {
            return Err(DvrError::NotIntegral {
                value: q.clone(),
                prime: self.p,
                valuation: self.vp(q).expect("nonzero: p divides the denominator"),
            });
        }
        let num = q.numer().mod_floor(&p).to_u64().expect("residue fits");
        let den = q.denom().mod_floor(&p).to_u64().expect("residue fits");
        Ok(Fp::new(num, self.p).times(&Fp::new(den, self.p).inverted()))
    }

    /// Divides by the p-power content, so the minimum coefficient valuation
    /// of the result is exactly 0.  Content outside p is left alone.
    pub fn normalize_content(
        &self,
        f: &NcPolynomial<BigRational>,
    ) -> Result<NcPolynomial<BigRational>, DvrError> {
        let m = f
            .terms()
            .filter_map(|(_, c)| self.vp(c))
            .min()
            .ok_or(DvrError::ZeroPolynomial)?;
        if m == 0 {
            return Ok(f.clone());
        }
        let scale = BigRational::from_integer(BigInt::from(self.p)).pow((-m) as i32);
        Ok(f.scale(&scale))
    }

    /// Termwise reduction to the residue field; terms vanishing mod p drop.
    pub fn reduce_poly(&self, f: &NcPolynomial<BigRational>) -> Result<NcPolynomial<Fp>, DvrError> {
        f.map_coeffs(|c| self.reduce_scalar(c))
    }

    /// Rank and sorted p-exponents of the elementary divisors of the row
    /// lattice, by fraction-free elimination with valuation-minimal pivoting.
    /// All entries must be p-integral.
    pub fn p_local_smith(
        &self,
        rows: &[Vec<(usize, BigRational)>],
    ) -> Result<PLocalSmithForm, DvrError> {
        let p = BigInt::from(self.p);
        for row in rows {
            for (_, entry) in row {
                if let Some(v) = linalg::vp_rational(entry, &p) {
                    if v < 0 {
                        return Err(DvrError::NotIntegral {
                            value: entry.clone(),
                            prime: self.p,
                            valuation: v,
                        });
                    }
                }
            }
        }
        let ncols = rows
            .iter()
            .flat_map(|r| r.iter().map(|(c, _)| c + 1))
            .max()
            .unwrap_or(0);
        // Each row times the p-coprime part of its denominator lcm is an
        // integer row; such unit scalings do not change elementary divisors.
        let mut m: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|row| {
                let mut denom_lcm = BigInt::from(1);
                for (_, entry) in row {
                    denom_lcm = denom_lcm.lcm(entry.denom());
                }
                let unit = coprime_part(&denom_lcm, &p);
                let mut dense = vec![BigInt::zero(); ncols];
                for (c, entry) in row {
                    // p-integral entry times the p-coprime denominator lcm
                    // is an integer
                    let scaled = entry * BigRational::from_integer(unit.clone());
                    debug_assert!(scaled.denom().is_one());
                    dense[*c] = scaled.to_integer();
                }
                dense
            })
            .collect();
        let mut row_live: Vec<usize> = (0..m.len()).collect();
        let mut col_live: Vec<usize> = (0..ncols).collect();
        let mut exponents: Vec<u32> = Vec::new();
        loop {
            let mut best: Option<(i64, usize, usize)> = None;
            for &i in &row_live {
                for &j in &col_live {
                    if m[i][j].is_zero() {
                        continue;
                    }
                    let v = vp_int(&m[i][j], &p);
                    if best.map_or(true, |(bv, bi, bj)| (v, i, j) < (bv, bi, bj)) {
                        best = Some((v, i, j));
                    }
                }
            }
            let Some((e, pi, pj)) = best else { break };
            let pe = p.pow(e as u32);
            let unit = &m[pi][pj] / &pe;
            for &i in &row_live {
                if i == pi || m[i][pj].is_zero() {
                    continue;
                }
                let factor = &m[i][pj] / &pe;
                for &j in &col_live {
                    m[i][j] = &unit * &m[i][j] - &factor * &m[pi][j];
                }
                debug_assert!(m[i][pj].is_zero());
            }
            for &j in &col_live {
                if j == pj || m[pi][j].is_zero() {
                    continue;
                }
                let factor = &m[pi][j] / &pe;
                for &i in &row_live {
                    m[i][j] = &unit * &m[i][j] - &factor * &m[i][pj];
                }
            }
            row_live.retain(|&i| i != pi);
            col_live.retain(|&j| j != pj);
            // strip p-coprime content to keep entries small; a unit scaling
            // per row is invariant-preserving
            for &i in &row_live {
                let mut g = BigInt::zero();
                for &j in &col_live {
                    g = g.gcd(&m[i][j]);
                }
                let g = coprime_part(&g, &p);
                if !g.is_one() && !g.is_zero() {
                    for &j in &col_live {
                        m[i][j] = &m[i][j] / &g;
                    }
                }
            }
            let e = u32::try_from(e).expect("entries are p-integral");
            debug_assert!(exponents.last().map_or(true, |last| *last <= e));
            exponents.push(e);
        }
        Ok(PLocalSmithForm {
            rank: exponents.len(),
            invariant_exponents: exponents,
        })
    }
}

/// Largest divisor of `n` coprime to `p` (for n ≠ 0).
fn coprime_part(n: &BigInt, p: &BigInt) -> BigInt {
    let mut n = n.abs();
    if n.is_zero() {
        return n;
    }
    loop {
        let (d, r) = n.div_rem(p);
        if r.is_zero() {
            n = d;
        } else {
            return n;
        }
    }
}

fn vp_int(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (d, r) = n.div_rem(p);
        if r.is_zero() {
            v += 1;
            n = d;
        } else {
            return v;
        }
    }
}

/// Elementary-divisor data of a p-local lattice: the rank and the
/// nondecreasing p-exponents of the invariant factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLocalSmithForm {
    pub rank: usize,
    pub invariant_exponents: Vec<u32>,
}

/// ⌈m/e⌉, the degree index induced on a filtration sampled in steps of e.
///
/// Panics if `e < 1`.
pub fn scaled_degree(m: i64, e: i64) -> i64 {
    assert!(e >= 1, "filtration step must be positive, got {e}");
    m.div_euclid(e) + i64::from(m.rem_euclid(e) != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::rational_int;
    use crate::freealg::Word;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn v(p: u64) -> ValuationSpec {
        ValuationSpec::new(p).unwrap()
    }

    #[test]
    fn primality_check_is_exact_on_small_inputs() {
        let primes: Vec<u64> = (2..200).filter(|&n| (2..n).all(|d| n % d != 0)).collect();
        for n in 2..200 {
            assert_eq!(is_prime(n), primes.contains(&n), "n = {n}");
        }
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        // strong pseudoprimes to small bases
        assert!(!is_prime(2047));
        assert!(!is_prime(1373653));
        assert!(!is_prime(3215031751));
        assert!(is_prime(2147483647));
    }

    #[test]
    fn construction_rejects_bad_moduli() {
        assert_eq!(ValuationSpec::new(4), Err(DvrError::NotPrime(4)));
        assert_eq!(ValuationSpec::new(1), Err(DvrError::NotPrime(1)));
        assert_eq!(
            ValuationSpec::new(1 << 31),
            Err(DvrError::PrimeTooLarge(1 << 31))
        );
        assert_eq!(v(2147483629).prime(), 2147483629);
    }

    #[test]
    fn vp_matches_hand_values() {
        assert_eq!(v(2).vp(&q(12, 1)), Some(2));
        assert_eq!(v(2).vp(&q(3, 4)), Some(-2));
        assert_eq!(v(5).vp(&q(0, 1)), None);
        assert_eq!(v(5).vp(&q(25, 2)), Some(2));
        assert_eq!(v(2).vp(&q(25, 2)), Some(-1));
        assert_eq!(v(3).vp(&q(-18, 5)), Some(2));
    }

    #[test]
    fn reduce_scalar_matches_hand_values() {
        assert_eq!(v(5).reduce_scalar(&q(3, 4)).unwrap(), Fp::new(2, 5));
        assert_eq!(v(5).reduce_scalar(&q(10, 1)).unwrap(), Fp::new(0, 5));
        assert_eq!(v(5).reduce_scalar(&q(7, 3)).unwrap(), Fp::new(4, 5));
        assert_eq!(v(5).reduce_scalar(&q(-1, 1)).unwrap(), Fp::new(4, 5));
        assert!(matches!(
            v(2).reduce_scalar(&q(1, 2)),
            Err(DvrError::NotIntegral { valuation: -1, .. })
        ));
    }

    fn two_var(terms: &[(&[u32], i64, i64)]) -> NcPolynomial<BigRational> {
        NcPolynomial::from_terms(
            &[1, 1],
            terms
                .iter()
                .map(|(w, n, d)| (Word::from_letters(w), q(*n, *d)))
                .collect(),
        )
    }

    #[test]
    fn normalize_content_strips_p_powers_only() {
        // 6xy - 3yx at p = 3 -> 2xy - yx
        let f = two_var(&[(&[0, 1], 6, 1), (&[1, 0], -3, 1)]);
        assert_eq!(
            v(3).normalize_content(&f).unwrap(),
            two_var(&[(&[0, 1], 2, 1), (&[1, 0], -1, 1)])
        );
        // already content-0
        let g = two_var(&[(&[0, 1], 1, 1), (&[1, 0], -2, 1)]);
        assert_eq!(v(3).normalize_content(&g).unwrap(), g);
        // (1/5)x^2 at p = 5 -> x^2
        let h = two_var(&[(&[0, 0], 1, 5)]);
        assert_eq!(v(5).normalize_content(&h).unwrap(), two_var(&[(&[0, 0], 1, 1)]));
        assert_eq!(
            v(5).normalize_content(&NcPolynomial::zero(&[1, 1])),
            Err(DvrError::ZeroPolynomial)
        );
    }

    #[test]
    fn reduce_poly_drops_vanishing_terms() {
        let f = two_var(&[(&[0, 1], 1, 1), (&[1, 0], -3, 1)]);
        let r = v(3).reduce_poly(&f).unwrap();
        assert_eq!(r.num_terms(), 1);
        assert_eq!(r.coeff(&Word::from_letters(&[0, 1])), Some(&Fp::new(1, 3)));

        let g = two_var(&[(&[0, 1], 1, 1), (&[1, 0], -2, 1)]);
        let r = v(5).reduce_poly(&g).unwrap();
        assert_eq!(r.coeff(&Word::from_letters(&[1, 0])), Some(&Fp::new(3, 5)));

        let h = two_var(&[(&[0, 0], 5, 1), (&[1, 1], -10, 1)]);
        assert!(v(5).reduce_poly(&h).unwrap().is_zero());

        assert!(v(2).reduce_poly(&two_var(&[(&[0], 1, 2)])).is_err());
    }

    #[test]
    fn scaled_degree_is_ceiling_division() {
        assert_eq!(scaled_degree(3, 2), 2);
        assert_eq!(scaled_degree(5, 1), 5);
        assert_eq!(scaled_degree(-3, 2), -1);
        assert_eq!(scaled_degree(7, 2), 4);
        assert_eq!(scaled_degree(0, 3), 0);
        assert_eq!(scaled_degree(-6, 3), -2);
        for m in -20..20 {
            for e in 1..6 {
                assert!(scaled_degree(m, e) <= scaled_degree(m + 1, e));
                assert_eq!(scaled_degree(m + e, e), scaled_degree(m, e) + 1);
            }
        }
    }

    #[test]
    #[should_panic(expected = "step must be positive")]
    fn scaled_degree_rejects_nonpositive_step() {
        scaled_degree(3, 0);
    }

    fn smith(p: u64, rows: &[&[i64]]) -> PLocalSmithForm {
        let rows: Vec<Vec<(usize, BigRational)>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, x)| **x != 0)
                    .map(|(j, x)| (j, q(*x, 1)))
                    .collect()
            })
            .collect();
        v(p).p_local_smith(&rows).unwrap()
    }

    #[test]
    fn smith_form_matches_hand_values() {
        assert_eq!(
            smith(3, &[&[3, 0], &[0, 1]]),
            PLocalSmithForm {
                rank: 2,
                invariant_exponents: vec![0, 1]
            }
        );
        assert_eq!(
            smith(3, &[&[1, 0], &[2, 0]]),
            PLocalSmithForm {
                rank: 1,
                invariant_exponents: vec![0]
            }
        );
        // [[1,1],[1,1+p^2]] at p = 3: determinant 9
        assert_eq!(
            smith(3, &[&[1, 1], &[1, 10]]),
            PLocalSmithForm {
                rank: 2,
                invariant_exponents: vec![0, 2]
            }
        );
        assert_eq!(smith(5, &[&[0, 0]]).rank, 0);
        // p-coprime denominators are fine
        let form = v(3)
            .p_local_smith(&[vec![(0, q(1, 2)), (1, q(1, 1))], vec![(0, q(1, 1)), (1, q(3, 1))]])
            .unwrap();
        assert_eq!(form.rank, 2);
        // p in a denominator is rejected
        assert!(v(3).p_local_smith(&[vec![(0, q(1, 3))]]).is_err());
    }

    /// Sum of the first k exponents must equal the minimal valuation over
    /// all k-by-k minors (the determinantal-divisor description).
    fn minor_oracle(p: u64, dense: &[Vec<i64>]) {
        let spec = v(p);
        let rows: Vec<Vec<(usize, BigRational)>> = dense
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, x)| **x != 0)
                    .map(|(j, x)| (j, q(*x, 1)))
                    .collect()
            })
            .collect();
        let form = spec.p_local_smith(&rows).unwrap();
        let nrows = dense.len();
        let ncols = dense[0].len();
        for k in 1..=nrows.min(ncols) {
            let mut min_v: Option<i64> = None;
            for rs in subsets(nrows, k) {
                for cs in subsets(ncols, k) {
                    let d = det(&rs, &cs, dense);
                    if d != 0 {
                        let val = vp_int(&BigInt::from(d), &BigInt::from(p));
                        min_v = Some(min_v.map_or(val, |m: i64| m.min(val)));
                    }
                }
            }
            match min_v {
                None => assert!(form.rank < k),
                Some(val) => {
                    assert!(form.rank >= k);
                    let sum: i64 = form.invariant_exponents[..k]
                        .iter()
                        .map(|e| *e as i64)
                        .sum();
                    assert_eq!(sum, val, "k = {k}");
                }
            }
        }
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }

    fn det(rows: &[usize], cols: &[usize], m: &[Vec<i64>]) -> i64 {
        if rows.len() == 1 {
            return m[rows[0]][cols[0]];
        }
        let mut acc = 0;
        for (i, &r) in rows.iter().enumerate() {
            let rest: Vec<usize> = rows.iter().filter(|x| **x != r).copied().collect();
            let term = m[r][cols[0]] * det(&rest, &cols[1..], m);
            acc += if i % 2 == 0 { term } else { -term };
        }
        acc
    }

    #[test]
    fn smith_form_agrees_with_minor_oracle() {
        minor_oracle(2, &[vec![2, 4], vec![6, 8]]);
        minor_oracle(3, &[vec![3, 1, 0], vec![9, 0, 3], vec![0, 1, 27]]);
        minor_oracle(5, &[vec![5, 10, 0], vec![0, 25, 5]]);
        minor_oracle(2, &[vec![1, 1, 1], vec![1, 3, 5], vec![2, 4, 6]]);
        minor_oracle(7, &[vec![49, 7], vec![7, 1], vec![14, 3]]);
    }

    mod proptest_tests {
        use super::*;

        fn small_rational() -> impl Strategy<Value = BigRational> {
            (-60i64..60, 1i64..40).prop_map(|(n, d)| q(n, d))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]

            #[test]
            fn vp_is_a_valuation(a in small_rational(), b in small_rational()) {
                let spec = v(3);
                if let (Some(va), Some(vb)) = (spec.vp(&a), spec.vp(&b)) {
                    prop_assert_eq!(spec.vp(&(&a * &b)), Some(va + vb));
                    let s = &a + &b;
                    if let Some(vs) = spec.vp(&s) {
                        prop_assert!(vs >= va.min(vb));
                    }
                }
            }

            #[test]
            fn reduce_scalar_is_a_ring_map(a in small_rational(), b in small_rational()) {
                let spec = v(7);
                let ra = spec.reduce_scalar(&a);
                let rb = spec.reduce_scalar(&b);
                if let (Ok(ra), Ok(rb)) = (ra, rb) {
                    prop_assert_eq!(spec.reduce_scalar(&(&a + &b)).unwrap(), ra.plus(&rb));
                    prop_assert_eq!(spec.reduce_scalar(&(&a * &b)).unwrap(), ra.times(&rb));
                }
            }

            #[test]
            fn smith_rank_splits_by_field(
                entries in proptest::collection::vec(-12i64..12, 9)
            ) {
                let spec = v(2);
                let rows: Vec<Vec<(usize, BigRational)>> = entries
                    .chunks(3)
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(_, x)| **x != 0)
                            .map(|(j, x)| (j, q(*x, 1)))
                            .collect()
                    })
                    .collect();
                let form = spec.p_local_smith(&rows).unwrap();
                let rank_q = crate::linalg::rank_rational(rows.clone());
                let zero_exponents =
                    form.invariant_exponents.iter().filter(|e| **e == 0).count();
                let fp_rows: Vec<Vec<(usize, Fp)>> = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .filter_map(|(c, x)| {
                                let rx = spec.reduce_scalar(x).unwrap();
                                (!rx.is_zero()).then_some((*c, rx))
                            })
                            .collect()
                    })
                    .collect();
                let rank_p = crate::linalg::rank_fp(fp_rows);
                prop_assert_eq!(form.rank, rank_q);
                prop_assert_eq!(zero_exponents, rank_p);
            }
        }
    }

    #[test]
    fn rational_int_helper_is_exact() {
        assert_eq!(rational_int(3), q(3, 1));
    }
}
