//! LLL reduction driven by an exact integer Gram matrix. Only the
//! Gram–Schmidt data is floating point; every basis change is applied
//! exactly to the Gram matrix and to a unimodular transform.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LllParams {
    pub delta: f64,
    pub deep_insertion: bool,
}

impl Default for LllParams {
    fn default() -> Self {
        Self { delta: 0.99, deep_insertion: false }
    }
}

/// A reduced Gram matrix `g = u * g0 * u^T` with `u` unimodular.
#[derive(Debug, Clone)]
pub struct ReducedGram {
    pub gram: IntMatrix,
    pub transform: IntMatrix,
}

/// Reduces the rows of `basis`, returning a basis of the same lattice.
pub fn lll_reduce(basis: &IntMatrix, delta: f64) -> Result<IntMatrix> {
    let red = lll_reduce_gram(&basis.gram()?, LllParams { delta, deep_insertion: false })?;
    red.transform.mul(basis)
}

/// Deep-insertion variant of [`lll_reduce`].
pub fn deep_lll_reduce(basis: &IntMatrix, delta: f64) -> Result<IntMatrix> {
    let red = lll_reduce_gram(&basis.gram()?, LllParams { delta, deep_insertion: true })?;
    red.transform.mul(basis)
}

pub fn lll_reduce_gram(gram: &IntMatrix, params: LllParams) -> Result<ReducedGram> {
    if gram.rows() != gram.cols() {
        return Err(Error::NotSquare { rows: gram.rows(), cols: gram.cols() });
    }
    if !(params.delta > 0.25 && params.delta < 1.0) {
        return Err(Error::OutOfRegime {
            check: "lll_reduce",
            detail: alloc::format!("delta {} outside (1/4, 1)", params.delta),
        });
    }
    let mut st = State::new(gram.clone());
    st.run(params)?;
    Ok(ReducedGram { gram: st.g, transform: st.u })
}

/// Applies a random unimodular change of basis: a shuffle, random signs
/// and a few rounds of `b_i += b_j`.
pub fn random_unimodular<R: Rng + ?Sized>(n: usize, rng: &mut R) -> IntMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut u = IntMatrix::zeros(n, n);
    for (i, &p) in perm.iter().enumerate() {
        u.set(i, p, if rng.random::<bool>() { 1 } else { -1 });
    }
    if n < 2 {
        return u;
    }
    for _ in 0..2 * n {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let s = if rng.random::<bool>() { 1 } else { -1 };
        for c in 0..n {
            let v = u.get(i, c) + s * u.get(j, c);
            u.set(i, c, v);
        }
    }
    u
}

/// `u * g * u^T`, exactly.
pub(crate) fn congruent(g: &IntMatrix, u: &IntMatrix) -> Result<IntMatrix> {
    u.mul(g)?.mul(&u.transpose())
}

struct State {
    n: usize,
    g: IntMatrix,
    u: IntMatrix,
    r: Vec<f64>,
    mu: Vec<f64>,
}

const MAX_SIZE_REDUCE_PASSES: usize = 64;

impl State {
    fn new(g: IntMatrix) -> Self {
        let n = g.rows();
        Self { n, g, u: IntMatrix::identity(n), r: vec![0.0; n * n], mu: vec![0.0; n * n] }
    }

    fn bstar(&self, i: usize) -> f64 {
        self.r[i * self.n + i]
    }

    fn compute_row(&mut self, i: usize) -> Result<()> {
        let n = self.n;
        for j in 0..=i {
            let mut v = self.g.get(i, j) as f64;
            for t in 0..j {
                v -= self.mu[j * n + t] * self.r[i * n + t];
            }
            self.r[i * n + j] = v;
            if j < i {
                self.mu[i * n + j] = v / self.r[j * n + j];
            }
        }
        let diag = self.g.get(i, i) as f64;
        let b = self.bstar(i);
        if b.is_nan() || b <= 1e-12 * diag.max(1.0) {
            return Err(Error::DependentRows);
        }
        Ok(())
    }

    /// Row `k` minus `q` times row `j`.
    fn sub_row(&mut self, k: usize, j: usize, q: i64) -> Result<()> {
        let n = self.n;
        let g = &mut self.g;
        let ovf = || Error::Overflow("lll gram update");
        let gkk = g.get(k, k);
        let gkj = g.get(k, j);
        let gjj = g.get(j, j);
        let new_kk = (gkk as i128 - 2 * q as i128 * gkj as i128 + (q as i128).pow(2) * gjj as i128)
            .try_into()
            .map_err(|_| ovf())?;
        for t in 0..n {
            if t == k {
                continue;
            }
            let v = g.get(k, t).checked_sub(q.checked_mul(g.get(j, t)).ok_or_else(ovf)?).ok_or_else(ovf)?;
            g.set(k, t, v);
            g.set(t, k, v);
        }
        g.set(k, k, new_kk);
        for t in 0..n {
            let v = self.u.get(k, t).checked_sub(q.checked_mul(self.u.get(j, t)).ok_or_else(ovf)?).ok_or_else(ovf)?;
            self.u.set(k, t, v);
        }
        Ok(())
    }

    fn size_reduce(&mut self, k: usize) -> Result<()> {
        let n = self.n;
        for _ in 0..MAX_SIZE_REDUCE_PASSES {
            self.compute_row(k)?;
            let mut changed = false;
            for j in (0..k).rev() {
                let m = self.mu[k * n + j];
                if m.abs() <= 0.5 {
                    continue;
                }
                let q = libm::round(m);
                if q.abs() > 1e15 {
                    return Err(Error::Overflow("lll size reduction"));
                }
                self.sub_row(k, j, q as i64)?;
                for t in 0..j {
                    self.mu[k * n + t] -= q * self.mu[j * n + t];
                }
                self.mu[k * n + j] -= q;
                changed = true;
            }
            if !changed {
                return Ok(());
            }
        }
        self.compute_row(k)
    }

    /// Moves row `from` to position `to < from`, shifting the rows between.
    fn move_row(&mut self, from: usize, to: usize) {
        let n = self.n;
        let mut order: Vec<usize> = (0..n).collect();
        order[to..=from].rotate_right(1);
        let old_g = self.g.clone();
        let old_u = self.u.clone();
        for a in 0..n {
            for b in 0..n {
                self.g.set(a, b, old_g.get(order[a], order[b]));
            }
            self.u.row_mut(a).copy_from_slice(old_u.row(order[a]));
        }
    }

    fn run(&mut self, params: LllParams) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Ok(());
        }
        self.compute_row(0)?;
        let mut k = 1;
        while k < n {
            self.size_reduce(k)?;
            if params.deep_insertion {
                let mut c = self.g.get(k, k) as f64;
                let mut insert_at = None;
                for i in 0..k {
                    let bi = self.bstar(i);
                    if c >= params.delta * bi {
                        let m = self.mu[k * n + i];
                        c -= m * m * bi;
                    } else {
                        insert_at = Some(i);
                        break;
                    }
                }
                match insert_at {
                    None => k += 1,
                    Some(i) => {
                        self.move_row(k, i);
                        if i == 0 {
                            self.compute_row(0)?;
                        }
                        k = i.max(1);
                    }
                }
            } else {
                let m = self.mu[k * n + k - 1];
                if self.bstar(k) >= (params.delta - m * m) * self.bstar(k - 1) {
                    k += 1;
                } else {
                    self.move_row(k, k - 1);
                    if k == 1 {
                        self.compute_row(0)?;
                    }
                    k = (k - 1).max(1);
                }
            }
        }
        Ok(())
    }
}
