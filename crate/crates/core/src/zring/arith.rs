//! Residues, vectors and matrices over `Z_m`.
//!
//! Residues are always stored in canonical form `[0, m)`; the signed
//! representatives `{1-k, ..., k}` of `Z_2k` only appear through [`rho`].

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// The modulus `m >= 2` of the ring `Z_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u32);

impl Modulus {
    pub fn new(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModulus(m));
        }
        Ok(Self(m))
    }

    #[inline]
    pub fn m(self) -> u32 {
        self.0
    }

    /// `k` with `m = 2k`, or `None` for odd moduli.
    #[inline]
    pub fn half(self) -> Option<u32> {
        (self.0 % 2 == 0).then_some(self.0 / 2)
    }

    pub(crate) fn require_even(self, op: &'static str) -> Result<u32> {
        self.half().ok_or(Error::OddModulus { op, m: self.0 })
    }

    #[inline]
    pub fn reduce(self, value: i64) -> u32 {
        value.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    /// `-a`, i.e. `m - a` for nonzero `a`.
    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    /// Sum of `a_i b_i` reduced mod `m`.
    pub fn dot(self, a: &[u32], b: &[u32]) -> u32 {
        debug_assert_eq!(a.len(), b.len());
        let m = self.0 as u64;
        let s = a.iter().zip(b).fold(0u64, |acc, (&x, &y)| (acc + (x as u64 * y as u64) % m) % m);
        s as u32
    }

    fn check(self, value: u32) -> Result<u32> {
        if value < self.0 {
            Ok(value)
        } else {
            Err(Error::ResidueOutOfRange { value, m: self.0 })
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}", self.0)
    }
}

/// `rho : Z_2k -> Z`, folding `k+1..2k-1` onto `1-k..-1`.
pub fn rho(i: u32, modulus: Modulus) -> Result<i64> {
    let k = modulus.require_even("rho")?;
    modulus.check(i)?;
    Ok(rho_unchecked(i, k))
}

#[inline]
pub(crate) fn rho_unchecked(i: u32, k: u32) -> i64 {
    if i <= k {
        i as i64
    } else {
        i as i64 - 2 * k as i64
    }
}

/// A vector of residues over `Z_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingVector {
    modulus: Modulus,
    coords: Vec<u32>,
}

impl RingVector {
    pub fn new(modulus: Modulus, coords: Vec<u32>) -> Result<Self> {
        for &c in &coords {
            modulus.check(c)?;
        }
        Ok(Self { modulus, coords })
    }

    /// Reduces arbitrary integers into `[0, m)`.
    pub fn from_signed(modulus: Modulus, values: &[i64]) -> Self {
        Self { modulus, coords: values.iter().map(|&v| modulus.reduce(v)).collect() }
    }

    pub fn zeros(modulus: Modulus, len: usize) -> Self {
        Self { modulus, coords: vec![0; len] }
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.coords
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch { left: self.modulus.m(), right: other.modulus.m() });
        }
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { expected: self.len(), found: other.len() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let m = self.modulus;
        let coords = self.coords.iter().zip(&other.coords).map(|(&a, &b)| m.add(a, b)).collect();
        Ok(Self { modulus: m, coords })
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus;
        Self { modulus: m, coords: self.coords.iter().map(|&a| m.neg(a)).collect() }
    }

    pub fn scale(&self, s: u32) -> Self {
        let m = self.modulus;
        let s = s % m.m();
        Self { modulus: m, coords: self.coords.iter().map(|&a| m.mul(a, s)).collect() }
    }

    /// The image under `rho`, coordinatewise.
    pub fn rho(&self) -> Result<Vec<i64>> {
        let k = self.modulus.require_even("rho")?;
        Ok(self.coords.iter().map(|&c| rho_unchecked(c, k)).collect())
    }
}

impl fmt::Display for RingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// `<x,y> = sum x_i y_i mod m`.
pub fn inner_product(x: &RingVector, y: &RingVector) -> Result<u32> {
    x.compatible(y)?;
    Ok(x.modulus.dot(&x.coords, &y.coords))
}

/// Row-major matrix over `Z_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingMatrix {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl RingMatrix {
    pub fn new(modulus: Modulus, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch { expected: rows * cols, found: data.len() });
        }
        for &c in &data {
            modulus.check(c)?;
        }
        Ok(Self { modulus, rows, cols, data })
    }

    pub fn from_rows(modulus: Modulus, rows: &[RingVector]) -> Result<Self> {
        let cols = rows.first().map_or(0, RingVector::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.modulus != modulus {
                return Err(Error::ModulusMismatch { left: modulus.m(), right: r.modulus.m() });
            }
            if r.len() != cols {
                return Err(Error::LengthMismatch { expected: cols, found: r.len() });
            }
            data.extend_from_slice(&r.coords);
        }
        Ok(Self { modulus, rows: rows.len(), cols, data })
    }

    pub fn zeros(modulus: Modulus, rows: usize, cols: usize) -> Self {
        Self { modulus, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(modulus: Modulus, n: usize) -> Self {
        let mut out = Self::zeros(modulus, n, n);
        for i in 0..n {
            out.data[i * n + i] = 1;
        }
        out
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> RingVector {
        RingVector { modulus: self.modulus, coords: self.row(i).to_vec() }
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.modulus, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus;
        Self { data: self.data.iter().map(|&a| m.neg(a)).collect(), ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let m = self.modulus;
        Ok(Self { data: self.data.iter().zip(&other.data).map(|(&a, &b)| m.add(a, b)).collect(), ..self.clone() })
    }

    /// `self * other^T`, i.e. the matrix of row inner products.
    pub fn mul_transpose(&self, other: &Self) -> Result<Self> {
        self.same_modulus(other)?;
        if self.cols != other.cols {
            return Err(Error::LengthMismatch { expected: self.cols, found: other.cols });
        }
        let m = self.modulus;
        let mut out = Self::zeros(m, self.rows, other.rows);
        for i in 0..self.rows {
            for j in 0..other.rows {
                out.data[i * other.rows + j] = m.dot(self.row(i), other.row(j));
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_transpose(&other.transpose())
    }

    /// True iff this is `-I` over `Z_m`.
    pub fn is_neg_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let minus_one = self.modulus.m() - 1;
        (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == if i == j { minus_one } else { 0 }))
    }

    fn same_modulus(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch { left: self.modulus.m(), right: other.modulus.m() });
        }
        Ok(())
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        self.same_modulus(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::LengthMismatch { expected: self.rows * self.cols, found: other.rows * other.cols });
        }
        Ok(())
    }
}

/// Residue-class counts of a vector over `Z_2k` with its Euclidean weight and
/// the unfolded square sum `v*v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EuclideanProfile {
    pub counts: Vec<usize>,
    pub weight: u64,
    pub star: u64,
}

impl EuclideanProfile {
    pub fn of(v: &RingVector) -> Result<Self> {
        let k = v.modulus.require_even("euclidean profile")? as u64;
        let m = 2 * k;
        let mut counts = vec![0usize; m as usize];
        for &c in &v.coords {
            counts[c as usize] += 1;
        }
        let mut weight = 0u64;
        let mut star = 0u64;
        for (i, &n_i) in counts.iter().enumerate() {
            let i = i as u64;
            let folded = if i <= k { i } else { m - i };
            weight += folded * folded * n_i as u64;
            star += i * i * n_i as u64;
        }
        debug_assert_eq!(weight % (2 * m), star % (2 * m));
        Ok(Self { counts, weight, star })
    }
}

/// Euclidean weight `sum rho(v_j)^2`.
pub fn euclidean_weight(v: &RingVector) -> Result<u64> {
    let k = v.modulus.require_even("euclidean_weight")?;
    Ok(euclidean_weight_raw(v.coords(), k))
}

#[inline]
pub(crate) fn euclidean_weight_raw(coords: &[u32], k: u32) -> u64 {
    coords
        .iter()
        .map(|&c| {
            let r = rho_unchecked(c, k);
            (r * r) as u64
        })
        .sum()
}

/// `v*v = sum_{i=1}^{2k-1} i^2 n_i(v)`, congruent to `wt_E(v)` mod `4k`.
pub fn star_norm(v: &RingVector) -> Result<u64> {
    v.modulus.require_even("star_norm")?;
    Ok(v.coords.iter().map(|&c| c as u64 * c as u64).sum())
}
