//! Exact linear algebra: sparse fraction-free row echelon forms over ℤ and a
//! small dense rational toolkit.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalars_params::Scalar;

pub type SparseRow = Vec<(usize, Scalar)>;

fn to_integer_row(row: &[(usize, Scalar)]) -> BTreeMap<usize, BigInt> {
    let mut l = BigInt::one();
    for (_, x) in row {
        l = l.lcm(x.denom());
    }
    let mut out = BTreeMap::new();
    for (c, x) in row {
        if !x.is_zero() {
            let v = x.numer() * (&l / x.denom());
            *out.entry(*c).or_insert_with(BigInt::zero) += v;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn primitive(row: &mut BTreeMap<usize, BigInt>) {
    let mut g = BigInt::zero();
    for v in row.values() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in row.values_mut() {
        *v /= &g;
    }
}

/// Incremental echelon form; each stored row starts at its pivot column.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, BTreeMap<usize, BigInt>>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    fn reduce_int(&self, mut row: BTreeMap<usize, BigInt>) -> BTreeMap<usize, BigInt> {
        let mut cursor = 0usize;
        loop {
            let next = row.range(cursor..).map(|(c, _)| *c).find(|c| self.pivots.contains_key(c));
            let Some(p) = next else { break };
            let prow = &self.pivots[&p];
            let pv = prow[&p].clone();
            let rc = row[&p].clone();
            let g = pv.gcd(&rc);
            let mul_row = &pv / &g;
            let mul_piv = &rc / &g;
            if !mul_row.is_one() {
                for v in row.values_mut() {
                    *v *= &mul_row;
                }
            }
            for (c, v) in prow {
                let e = row.entry(*c).or_insert_with(BigInt::zero);
                *e -= v * &mul_piv;
            }
            row.retain(|_, v| !v.is_zero());
            primitive(&mut row);
            cursor = p + 1;
        }
        row
    }

    /// Reduces `row` against the stored pivots; empty result means it lies in the span.
    pub fn residual(&self, row: &[(usize, Scalar)]) -> Vec<(usize, BigInt)> {
        self.reduce_int(to_integer_row(row)).into_iter().collect()
    }

    pub fn contains(&self, row: &[(usize, Scalar)]) -> bool {
        self.residual(row).is_empty()
    }

    /// Inserts a row; returns true when the rank grew.
    pub fn insert(&mut self, row: &[(usize, Scalar)]) -> bool {
        let mut r = self.reduce_int(to_integer_row(row));
        if r.is_empty() {
            return false;
        }
        primitive(&mut r);
        let p = *r.keys().next().unwrap();
        if r[&p].is_negative() {
            for v in r.values_mut() {
                *v = -v.clone();
            }
        }
        self.pivots.insert(p, r);
        true
    }
}

impl Echelon {
    /// Stored rows whose pivot is at column `col` or later, as rational rows.
    pub fn rows_from(&self, col: usize) -> Vec<SparseRow> {
        self.pivots
            .range(col..)
            .map(|(_, r)| r.iter().map(|(c, v)| (*c, BigRational::from_integer(v.clone()))).collect())
            .collect()
    }
}

/// Echelon form over ℚ with unit pivots; `reduce` returns the unique
/// representative supported on non-pivot columns.
#[derive(Debug, Clone, Default)]
pub struct Reducer {
    rows: BTreeMap<usize, BTreeMap<usize, Scalar>>,
}

impl Reducer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn reduce(&self, mut row: BTreeMap<usize, Scalar>) -> BTreeMap<usize, Scalar> {
        row.retain(|_, v| !v.is_zero());
        let mut cursor = 0usize;
        loop {
            let next = row.range(cursor..).map(|(c, _)| *c).find(|c| self.rows.contains_key(c));
            let Some(p) = next else { break };
            let f = row[&p].clone();
            for (c, v) in &self.rows[&p] {
                let e = row.entry(*c).or_insert_with(Scalar::zero);
                *e -= &f * v;
            }
            row.retain(|_, v| !v.is_zero());
            cursor = p + 1;
        }
        row
    }

    pub fn insert(&mut self, row: BTreeMap<usize, Scalar>) -> bool {
        let r = self.reduce(row);
        let Some((&p, pv)) = r.iter().next() else { return false };
        let inv = pv.recip();
        let r = r.into_iter().map(|(c, v)| (c, v * &inv)).collect();
        self.rows.insert(p, r);
        true
    }
}

pub fn rank_of_rows(rows: &[SparseRow]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

pub type Mat = Vec<Vec<Scalar>>;

pub fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![Scalar::zero(); c]; r]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Scalar::one();
    }
    m
}

pub fn dense_to_sparse(m: &Mat) -> Vec<SparseRow> {
    m.iter()
        .map(|r| r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (c, x.clone())).collect())
        .collect()
}

pub fn rank(m: &Mat) -> usize {
    rank_of_rows(&dense_to_sparse(m))
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = zeros(n, m);
    for i in 0..n {
        for (l, bl) in b.iter().enumerate() {
            let x = &a[i][l];
            if x.is_zero() {
                continue;
            }
            for j in 0..m {
                if !bl[j].is_zero() {
                    out[i][j] += x * &bl[j];
                }
            }
        }
    }
    out
}

pub fn mat_pow(a: &Mat, k: usize) -> Mat {
    let mut out = identity(a.len());
    for _ in 0..k {
        out = matmul(&out, a);
    }
    out
}

/// a − c·I
pub fn shift_diag(a: &Mat, c: &Scalar) -> Mat {
    let mut out = a.clone();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] -= c;
    }
    out
}

/// Inverse by Gauss–Jordan; None when singular.
pub fn inverse(a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut m: Vec<Vec<Scalar>> = a.iter().cloned().collect();
    let mut inv = identity(n);
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let pv = m[col][col].clone();
        for j in 0..n {
            m[col][j] /= &pv;
            inv[col][j] /= &pv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..n {
                    let a1 = &m[col][j] * &f;
                    m[r][j] -= a1;
                    let b1 = &inv[col][j] * &f;
                    inv[r][j] -= b1;
                }
            }
        }
    }
    Some(inv)
}

pub fn mat_vec(a: &Mat, v: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Scalar::zero(), |acc, (x, y)| if x.is_zero() { acc } else { acc + x * y }))
        .collect()
}

/// Kernel basis of a dense matrix (columns are unknowns).
pub fn kernel(a: &Mat, ncols: usize) -> Vec<Vec<Scalar>> {
    let mut m: Vec<Vec<Scalar>> = a.to_vec();
    let rows = m.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pv = m[r][c].clone();
        for j in 0..ncols {
            m[r][j] /= &pv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![Scalar::zero(); ncols];
        v[free] = Scalar::one();
        for (k, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[k][free].clone();
        }
        out.push(v);
    }
    out
}

/// Arithmetic modulo the Mersenne prime 2^61 − 1.
pub mod modp {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{Signed, ToPrimitive, Zero};

    use crate::scalars_params::Scalar;

    pub const P: u64 = (1u64 << 61) - 1;

    pub fn add(a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= P {
            s - P
        } else {
            s
        }
    }

    pub fn sub(a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + P - b
        }
    }

    pub fn mul(a: u64, b: u64) -> u64 {
        let t = (a as u128) * (b as u128);
        let lo = (t as u64) & P;
        let hi = (t >> 61) as u64;
        let mut r = lo + hi;
        while r >= P {
            r -= P;
        }
        r
    }

    pub fn pow(mut a: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(a: u64) -> Option<u64> {
        if a == 0 {
            None
        } else {
            Some(pow(a, P - 2))
        }
    }

    fn reduce_int(x: &BigInt) -> u64 {
        let p = BigInt::from(P);
        let r = x.mod_floor(&p);
        r.to_u64().unwrap()
    }

    /// Image of a rational; None when the denominator vanishes mod P.
    pub fn from_scalar(x: &Scalar) -> Option<u64> {
        let n = reduce_int(x.numer());
        let d = inv(reduce_int(x.denom()))?;
        Some(mul(n, d))
    }

    /// Smallest-height rational r/s ≡ a with |r|, s below sqrt(P/2).
    pub fn reconstruct(a: u64) -> Option<Scalar> {
        let bound = BigInt::from(1u64 << 30);
        let (mut r0, mut r1) = (BigInt::from(P), BigInt::from(a));
        let (mut t0, mut t1) = (BigInt::zero(), BigInt::from(1));
        while r1 >= bound {
            let q = &r0 / &r1;
            let r2 = &r0 - &q * &r1;
            let t2 = &t0 - &q * &t1;
            r0 = std::mem::replace(&mut r1, r2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if t1.is_zero() || t1.abs() >= bound {
            return None;
        }
        Some(Scalar::new(r1, t1))
    }

    /// Incremental row echelon form mod P.
    #[derive(Debug, Clone, Default)]
    pub struct ModEchelon {
        rows: Vec<(usize, Vec<u64>)>,
    }

    impl ModEchelon {
        pub fn new() -> Self {
            Self::default()
        }

        pub fn rank(&self) -> usize {
            self.rows.len()
        }

        /// Returns true when `row` is independent of the rows inserted so far.
        pub fn insert(&mut self, row: &[u64]) -> bool {
            let mut r = row.to_vec();
            for (p, pr) in &self.rows {
                let c = r[*p];
                if c != 0 {
                    for (x, y) in r.iter_mut().zip(pr) {
                        if *y != 0 {
                            *x = sub(*x, mul(c, *y));
                        }
                    }
                }
            }
            let Some(p) = r.iter().position(|&x| x != 0) else { return false };
            let iv = inv(r[p]).unwrap();
            for x in r.iter_mut() {
                *x = mul(*x, iv);
            }
            for (_, pr) in self.rows.iter_mut() {
                let c = pr[p];
                if c != 0 {
                    for (x, y) in pr.iter_mut().zip(&r) {
                        if *y != 0 {
                            *x = sub(*x, mul(c, *y));
                        }
                    }
                }
            }
            self.rows.push((p, r));
            true
        }
    }

    /// Inverse of a square matrix mod P.
    pub fn inverse(a: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
        let n = a.len();
        let mut m: Vec<Vec<u64>> = a.to_vec();
        let mut out: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| m[r][col] != 0)?;
            m.swap(col, piv);
            out.swap(col, piv);
            let iv = inv(m[col][col])?;
            for j in 0..n {
                m[col][j] = mul(m[col][j], iv);
                out[col][j] = mul(out[col][j], iv);
            }
            for r in 0..n {
                let f = m[r][col];
                if r != col && f != 0 {
                    for j in 0..n {
                        let (a1, b1) = (m[col][j], out[col][j]);
                        if a1 != 0 {
                            m[r][j] = sub(m[r][j], mul(f, a1));
                        }
                        if b1 != 0 {
                            out[r][j] = sub(out[r][j], mul(f, b1));
                        }
                    }
                }
            }
        }
        Some(out)
    }

    pub fn mat_vec(a: &[Vec<u64>], v: &[u64]) -> Vec<u64> {
        a.iter()
            .map(|row| row.iter().zip(v).fold(0u64, |acc, (x, y)| if *x == 0 || *y == 0 { acc } else { add(acc, mul(*x, *y)) }))
            .collect()
    }
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(v: &[&[i64]]) -> Mat {
        v.iter().map(|r| r.iter().map(|&x| rational(x)).collect()).collect()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])), 3);
        let inv = inverse(&m(&[&[2, 1], &[1, 1]])).unwrap();
        assert_eq!(inv, m(&[&[1, -1], &[-1, 2]]));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(-3i64..=3, 20)) {
            let a: Mat = entries.chunks(5).map(|r| r.iter().map(|&x| rational(x)).collect()).collect();
            let r = rank(&a);
            let k = kernel(&a, 5);
            prop_assert_eq!(r + k.len(), 5);
            for v in &k {
                prop_assert!(mat_vec(&a, v).iter().all(|x| x.is_zero()));
            }
            let t: Mat = (0..5).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect();
            prop_assert_eq!(rank(&t), r);
        }

        #[test]
        fn modular_round_trip(n in -100000i64..100000, d in 1i64..5000) {
            let x = Scalar::new(n.into(), d.into());
            let m = modp::from_scalar(&x).unwrap();
            prop_assert_eq!(modp::reconstruct(m), Some(x));
        }
    }

    #[test]
    fn modular_inverse() {
        let a = vec![vec![2u64, 1], vec![1, 1]];
        let inv = modp::inverse(&a).unwrap();
        assert_eq!(modp::mat_vec(&inv, &[3, 2]), vec![1, 1]);
        let mut e = modp::ModEchelon::new();
        assert!(e.insert(&[1, 2, 3]));
        assert!(!e.insert(&[2, 4, 6]));
        assert!(e.insert(&[0, 1, 1]));
        assert_eq!(e.rank(), 2);
    }
}
