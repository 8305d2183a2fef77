//! Exact scalar fields and the dense linear algebra the oracle needs.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub trait Field: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Panics on zero.
    fn inv(&self) -> Self;
    fn from_rational(q: &Rational64) -> Self;
}

pub const PRIME: u64 = 2_147_483_647;

/// Integers modulo the Mersenne prime 2^31 - 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp(pub u64);

impl Fp {
    fn from_i64(x: i64) -> Self {
        Fp(x.rem_euclid(PRIME as i64) as u64)
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % PRIME;
            }
            base = base * base % PRIME;
            e >>= 1;
        }
        Fp(acc)
    }
}

impl Field for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        Fp((self.0 + o.0) % PRIME)
    }
    fn sub(&self, o: &Self) -> Self {
        Fp((self.0 + PRIME - o.0) % PRIME)
    }
    fn mul(&self, o: &Self) -> Self {
        Fp(self.0 * o.0 % PRIME)
    }
    fn neg(&self) -> Self {
        Fp((PRIME - self.0) % PRIME)
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        self.pow(PRIME - 2)
    }
    fn from_rational(q: &Rational64) -> Self {
        let d = Fp::from_i64(*q.denom());
        Fp::from_i64(*q.numer()).mul(&d.inv())
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn from_rational(q: &Rational64) -> Self {
        BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
    }
}

pub fn big_to_rational64(q: &BigRational) -> Option<Rational64> {
    let g = q.numer().gcd(q.denom());
    let (n, d) = (q.numer() / &g, q.denom() / &g);
    let (n, d) = if d.is_negative() { (-n, -d) } else { (n, d) };
    Some(Rational64::new(n.to_i64()?, d.to_i64()?))
}

/// Which field the oracle computes ranks over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldChoice {
    #[default]
    Prime,
    Rational,
}

/// Sparse matrix given by columns of `(row, value)` pairs.
#[derive(Debug, Clone, Default)]
pub struct SparseColumns {
    pub rows: usize,
    pub cols: Vec<Vec<(usize, Rational64)>>,
}

impl SparseColumns {
    pub fn new(rows: usize) -> Self {
        SparseColumns {
            rows,
            cols: Vec::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn dense<F: Field>(&self) -> Vec<Vec<F>> {
        let mut m = vec![vec![F::zero(); self.cols.len()]; self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                m[*i][j] = m[*i][j].add(&F::from_rational(v));
            }
        }
        m
    }
}

/// Row echelon form in place; returns pivot columns.
pub fn row_reduce<F: Field>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = m[r][j].mul(&f);
                    m[i][j] = m[i][j].sub(&v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &[Vec<F>]) -> usize {
    let mut work = m.to_vec();
    row_reduce(&mut work).len()
}

/// Basis of the null space of `m` (as column vectors of length `cols`).
pub fn nullspace<F: Field>(m: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let mut work = m.to_vec();
    let pivots = row_reduce(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = work[r][f].neg();
            }
            v
        })
        .collect()
}

/// One solution of `m x = b` with free variables set to zero.
pub fn solve<F: Field>(m: &[Vec<F>], b: &[F], cols: usize) -> Option<Vec<F>> {
    let mut aug: Vec<Vec<F>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols].clone();
    }
    Some(x)
}

/// Incremental span membership over a fixed ambient dimension.
#[derive(Debug, Clone)]
pub struct SpanBuilder<F: Field> {
    dim: usize,
    /// Reduced rows keyed by pivot.
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> SpanBuilder<F> {
    pub fn new(dim: usize) -> Self {
        SpanBuilder {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if !w[*p].is_zero() {
                let f = w[*p].clone();
                for (x, y) in w.iter_mut().zip(row) {
                    *x = x.sub(&y.mul(&f));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inv();
        for x in w.iter_mut() {
            *x = x.mul(&inv);
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&w) {
                    *x = x.sub(&y.mul(&f));
                }
            }
        }
        self.rows.push((p, w));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(v: &[i64]) -> Vec<Fp> {
        v.iter().map(|&x| Fp::from_i64(x)).collect()
    }

    #[test]
    fn prime_field_inverse() {
        for x in [1i64, 2, 3, 12345, -7] {
            let a = Fp::from_i64(x);
            assert_eq!(a.mul(&a.inv()), Fp::one());
        }
        let half = Fp::from_rational(&Rational64::new(1, 2));
        assert_eq!(half.add(&half), Fp::one());
    }

    #[test]
    fn rank_and_nullspace_agree() {
        let m = vec![fp(&[1, 2, 3]), fp(&[2, 4, 6]), fp(&[0, 1, 1])];
        assert_eq!(rank(&m), 2);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        for row in &m {
            let dot = row
                .iter()
                .zip(&ns[0])
                .fold(Fp::zero(), |acc, (a, b)| acc.add(&a.mul(b)));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn rational_solve() {
        let q = |n| BigRational::from_integer(BigInt::from(n));
        let m = vec![vec![q(2), q(1)], vec![q(1), q(-1)]];
        let x = solve(&m, &[q(3), q(0)], 2).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        let singular = vec![vec![q(1), q(1)], vec![q(1), q(1)]];
        assert!(solve(&singular, &[q(1), q(2)], 2).is_none());
    }

    #[test]
    fn span_builder_tracks_rank() {
        let mut s = SpanBuilder::<Fp>::new(3);
        assert!(s.insert(&fp(&[1, 1, 0])));
        assert!(s.insert(&fp(&[0, 1, 1])));
        assert!(!s.insert(&fp(&[1, 2, 1])));
        assert!(s.contains(&fp(&[1, 0, -1])));
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn big_to_small_roundtrip() {
        let q = BigRational::new(BigInt::from(-6), BigInt::from(4));
        assert_eq!(big_to_rational64(&q), Some(Rational64::new(-3, 2)));
    }
}
