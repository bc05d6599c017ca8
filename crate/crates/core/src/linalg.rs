//! Exact sparse linear algebra over the coefficient fields.
//!
//! Rows are sparse vectors `Vec<(column, coefficient)>`, sorted by column,
//! without zero coefficients.  Rank-only queries use field-specific fast
//! paths: fraction-free integer elimination with content stripping over the
//! rationals, modular elimination over a residue field.  Coordinate work
//! (normal forms, kernels, quotient bases) goes through a generic reduced
//! row echelon.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::freealg::{Coeff, Fp};

pub(crate) type SRow<K> = Vec<(usize, K)>;
pub(crate) type ZRow = Vec<(usize, BigInt)>;

/// `a + c*b` for sorted sparse rows, dropping zero entries.
pub(crate) fn srow_add_scaled<K: Coeff>(a: &SRow<K>, b: &SRow<K>, c: &K) -> SRow<K> {
    if c.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                let v = c.times(&b[j].1);
                if !v.is_zero() {
                    out.push((b[j].0, v));
                }
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = a[i].1.plus(&c.times(&b[j].1));
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for (col, v) in &b[j..] {
        let v = c.times(v);
        if !v.is_zero() {
            out.push((*col, v));
        }
    }
    out
}

pub(crate) fn srow_scale<K: Coeff>(row: &mut SRow<K>, c: &K) {
    for (_, v) in row.iter_mut() {
        *v = v.times(c);
    }
}

/// Clears denominators and divides by the integer content; the zero row maps
/// to the empty row.
pub(crate) fn zrow_primitive_from_rational(row: &SRow<BigRational>) -> ZRow {
    if row.is_empty() {
        return Vec::new();
    }
    let mut denom_lcm = BigInt::one();
    for (_, v) in row {
        denom_lcm = denom_lcm.lcm(v.denom());
    }
    let mut ints: ZRow = row
        .iter()
        .map(|(c, v)| (*c, v.numer() * (&denom_lcm / v.denom())))
        .collect();
    let mut content = BigInt::zero();
    for (_, v) in &ints {
        content = content.gcd(v);
    }
    if !content.is_one() {
        for (_, v) in ints.iter_mut() {
            *v = &*v / &content;
        }
    }
    ints
}

fn zrow_strip_content(row: &mut ZRow) {
    let mut content = BigInt::zero();
    for (_, v) in row.iter() {
        content = content.gcd(v);
        if content.is_one() {
            return;
        }
    }
    if content.is_zero() || content.is_one() {
        return;
    }
    for (_, v) in row.iter_mut() {
        *v = &*v / &content;
    }
}

/// `lead(b)*a - lead(a)*b` where both rows share the same leading column;
/// the leading column cancels exactly.
fn zrow_cross_eliminate(a: &ZRow, b: &ZRow) -> ZRow {
    debug_assert_eq!(a[0].0, b[0].0);
    let (ca, cb) = (&a[0].1, &b[0].1);
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push((a[i].0, cb * &a[i].1));
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0, -(ca * &b[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = cb * &a[i].1 - ca * &b[j].1;
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    for (c, v) in &a[i..] {
        out.push((*c, cb * v));
    }
    for (c, v) in &b[j..] {
        out.push((*c, -(ca * v)));
    }
    out
}

/// Rank of the row span over the rationals by fraction-free elimination on
/// primitive integer rows.
pub(crate) fn rank_rational(rows: Vec<SRow<BigRational>>) -> usize {
    let mut echelon: Vec<ZRow> = Vec::new();
    let mut pivot_of: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    for row in rows {
        let mut r = zrow_primitive_from_rational(&row);
        loop {
            if r.is_empty() {
                break;
            }
            match pivot_of.get(&r[0].0) {
                None => {
                    pivot_of.insert(r[0].0, echelon.len());
                    echelon.push(r);
                    break;
                }
                Some(&idx) => {
                    r = zrow_cross_eliminate(&r, &echelon[idx]);
                    zrow_strip_content(&mut r);
                }
            }
        }
    }
    echelon.len()
}

/// Rank of the row span over a prime residue field by modular elimination.
pub(crate) fn rank_fp(rows: Vec<SRow<Fp>>) -> usize {
    let mut echelon: Vec<SRow<Fp>> = Vec::new();
    let mut pivot_of: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    for mut r in rows {
        loop {
            if r.is_empty() {
                break;
            }
            match pivot_of.get(&r[0].0) {
                None => {
                    let inv = r[0].1.inverted();
                    srow_scale(&mut r, &inv);
                    pivot_of.insert(r[0].0, echelon.len());
                    echelon.push(r);
                    break;
                }
                Some(&idx) => {
                    let c = r[0].1.negated();
                    r = srow_add_scaled(&r, &echelon[idx], &c);
                }
            }
        }
    }
    echelon.len()
}

/// Reduced row echelon over an arbitrary coefficient field.
///
/// Stored rows have pivot coefficient one and are inter-reduced: no row meets
/// another row's pivot column.  `reduce` is then a single pass and gives the
/// canonical normal form modulo the row span, linear in its argument.
pub(crate) struct Echelon<K: Coeff> {
    rows: Vec<SRow<K>>,
    pivots: Vec<usize>,
    pivot_of_col: std::collections::BTreeMap<usize, usize>,
}

impl<K: Coeff> Echelon<K> {
    pub(crate) fn new() -> Self {
        Echelon {
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_of_col: std::collections::BTreeMap::new(),
        }
    }

    #[cfg(test)]
    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    #[cfg(test)]
    pub(crate) fn pivot_cols(&self) -> &[usize] {
        &self.pivots
    }

    fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of_col.contains_key(&col)
    }

    /// Columns in `0..ncols` that carry no pivot, in increasing order.
    pub(crate) fn non_pivot_cols(&self, ncols: usize) -> Vec<usize> {
        (0..ncols).filter(|c| !self.is_pivot(*c)).collect()
    }

    pub(crate) fn reduce(&self, v: SRow<K>) -> SRow<K> {
        let mut v = v;
        loop {
            let hit = v
                .iter()
                .find_map(|(c, a)| self.pivot_of_col.get(c).map(|&i| (i, a.clone())));
            match hit {
                None => return v,
                Some((idx, a)) => {
                    v = srow_add_scaled(&v, &self.rows[idx], &a.negated());
                }
            }
        }
    }

    /// Reduces `v` and, if nonzero, installs it as a new pivot row.  Returns
    /// the pivot column of the inserted row.
    pub(crate) fn insert(&mut self, v: SRow<K>) -> Option<usize> {
        let mut v = self.reduce(v);
        if v.is_empty() {
            return None;
        }
        let pivot = v[0].0;
        let inv = v[0].1.inverted();
        srow_scale(&mut v, &inv);
        for row in self.rows.iter_mut() {
            if let Some(pos) = row.iter().position(|(c, _)| *c == pivot) {
                let a = row[pos].1.negated();
                *row = srow_add_scaled(row, &v, &a);
            }
        }
        self.pivot_of_col.insert(pivot, self.rows.len());
        self.pivots.push(pivot);
        self.rows.push(v);
        Some(pivot)
    }
}

/// Basis of the left kernel of the listed rows: all sparse combinations
/// `c` with `sum_i c_i * rows_i = 0`.  `one` is a field witness.
pub(crate) fn left_kernel<K: Coeff>(rows: &[SRow<K>], one: &K) -> Vec<SRow<K>> {
    let mut main = Echelon::<K>::new();
    // augments of stored pivot rows, parallel to the echelon rows
    let mut augments: Vec<SRow<K>> = Vec::new();
    let mut kernel = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut v = row.clone();
        let mut aug: SRow<K> = vec![(i, one.clone())];
        loop {
            let hit = v
                .iter()
                .find_map(|(c, a)| main.pivot_of_col.get(c).map(|&k| (k, a.clone())));
            match hit {
                None => break,
                Some((k, a)) => {
                    let neg = a.negated();
                    v = srow_add_scaled(&v, &main.rows[k], &neg);
                    aug = srow_add_scaled(&aug, &augments[k], &neg);
                }
            }
        }
        if v.is_empty() {
            kernel.push(aug);
        } else {
            let inv = v[0].1.inverted();
            srow_scale(&mut v, &inv);
            srow_scale(&mut aug, &inv);
            main.pivot_of_col.insert(v[0].0, main.rows.len());
            main.pivots.push(v[0].0);
            main.rows.push(v);
            augments.push(aug);
        }
    }
    kernel
}

/// Reduced row echelon over the rationals whose pivots are p-adic units.
///
/// Every stored row is p-integral with pivot coefficient one, and the pivot
/// column is chosen as the smallest column whose entry has valuation zero
/// (after dividing the row by its p-power content).  Reducing a p-integral
/// vector against such rows keeps it p-integral, so quotient coordinates of
/// integral vectors stay integral and lattice computations remain exact.
pub(crate) struct PUnitEchelon {
    p: BigInt,
    rows: Vec<SRow<BigRational>>,
    pivots: Vec<usize>,
    pivot_of_col: std::collections::BTreeMap<usize, usize>,
}

/// p-adic valuation of a nonzero rational, given p as a `BigInt`.
pub(crate) fn vp_rational(q: &BigRational, p: &BigInt) -> Option<i64> {
    if Zero::is_zero(q) {
        return None;
    }
    let count = |mut n: BigInt| -> i64 {
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
    };
    Some(count(q.numer().abs()) - count(q.denom().abs()))
}

impl PUnitEchelon {
    pub(crate) fn new(p: u64) -> Self {
        PUnitEchelon {
            p: BigInt::from(p),
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_of_col: std::collections::BTreeMap::new(),
        }
    }

    pub(crate) fn reduce(&self, v: SRow<BigRational>) -> SRow<BigRational> {
        let mut v = v;
        loop {
            let hit = v
                .iter()
                .find_map(|(c, a)| self.pivot_of_col.get(c).map(|&i| (i, a.clone())));
            match hit {
                None => return v,
                Some((idx, a)) => {
                    v = srow_add_scaled(&v, &self.rows[idx], &a.negated());
                }
            }
        }
    }

    /// Adds a row to the spanned subspace.  The row may be rescaled freely,
    /// so this is only meaningful for span (not lattice) data.
    pub(crate) fn insert_span_row(&mut self, v: SRow<BigRational>) -> Option<usize> {
        let mut v = self.reduce(v);
        if v.is_empty() {
            return None;
        }
        // strip the p-power content so a unit entry exists
        let min_vp = v
            .iter()
            .filter_map(|(_, a)| vp_rational(a, &self.p))
            .min()
            .expect("nonzero row");
        if min_vp != 0 {
            let scale = BigRational::from_integer(self.p.clone()).pow((-min_vp) as i32);
            srow_scale(&mut v, &scale);
        }
        let pivot = v
            .iter()
            .find(|(_, a)| vp_rational(a, &self.p) == Some(0))
            .map(|(c, _)| *c)
            .expect("unit entry after content stripping");
        let pos = v.iter().position(|(c, _)| *c == pivot).unwrap();
        let inv = v[pos].1.inverted();
        srow_scale(&mut v, &inv);
        for row in self.rows.iter_mut() {
            if let Some(pos) = row.iter().position(|(c, _)| *c == pivot) {
                let a = row[pos].1.negated();
                *row = srow_add_scaled(row, &v, &a);
            }
        }
        self.pivot_of_col.insert(pivot, self.rows.len());
        self.pivots.push(pivot);
        self.rows.push(v);
        Some(pivot)
    }
}

/// One modular dependency among integer rows: coefficients `c` (mod p), not
/// all zero, with `sum_i c_i * rows_i = 0 (mod p)`, or `None` if the rows are
/// independent mod p.
pub(crate) fn fp_left_dependency(rows: &[ZRow], p: u64) -> Option<Vec<(usize, u64)>> {
    let one = Fp::new(1, p);
    let to_fp = |row: &ZRow| -> SRow<Fp> {
        row.iter()
            .filter_map(|(c, v)| {
                let m = v.mod_floor(&BigInt::from(p));
                let m = u64::try_from(m).expect("mod_floor in range");
                (m != 0).then(|| (*c, Fp::new(m, p)))
            })
            .collect()
    };
    let fp_rows: Vec<SRow<Fp>> = rows.iter().map(to_fp).collect();
    let kernel = left_kernel(&fp_rows, &one);
    kernel
        .into_iter()
        .next()
        .map(|comb| comb.into_iter().map(|(i, c)| (i, c.value())).collect())
}

/// `a + c*b` for sorted sparse integer rows.
fn zrow_add_scaled(a: &ZRow, b: &ZRow, c: &BigInt) -> ZRow {
    if c.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0, c * &b[j].1));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = &a[i].1 + c * &b[j].1;
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for (col, v) in &b[j..] {
        out.push((*col, c * v));
    }
    out
}

/// Generators of the p-saturation of the span of rationally independent
/// integer rows: the p-integral vectors of their rational span.
///
/// Each pass lifts one modular dependency to an integer combination, which is
/// then divisible by p; dividing out the full p-power content and swapping the
/// result for a row that contributed a unit coefficient keeps the rational
/// span and strictly shrinks the lattice index, so the loop terminates once
/// the rows are independent mod p, which is exactly saturation.
pub(crate) fn saturate_rows_at(mut rows: Vec<ZRow>, p: u64) -> Vec<ZRow> {
    rows.retain(|r| !r.is_empty());
    let big_p = BigInt::from(p);
    while let Some(dep) = fp_left_dependency(&rows, p) {
        let mut combo: ZRow = Vec::new();
        for (i, c) in &dep {
            combo = zrow_add_scaled(&combo, &rows[*i], &BigInt::from(*c));
        }
        debug_assert!(!combo.is_empty());
        let mut min_v = u32::MAX;
        for (_, v) in &combo {
            let mut k = 0;
            let mut rem = v.clone();
            while k < min_v && rem.mod_floor(&big_p).is_zero() {
                rem /= &big_p;
                k += 1;
            }
            min_v = min_v.min(k);
        }
        debug_assert!(min_v >= 1);
        let divisor = big_p.pow(min_v);
        for (_, v) in combo.iter_mut() {
            *v = &*v / &divisor;
        }
        zrow_strip_content(&mut combo);
        rows[dep[0].0] = combo;
    }
    rows
}
