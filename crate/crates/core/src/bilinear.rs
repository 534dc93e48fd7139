//! Executing decompositions as bilinear matrix multiplication algorithms.
//!
//! A rank-r decomposition of `mm_tensor(n)` is a recipe for multiplying
//! n-by-n matrices with r scalar multiplications: form the r products
//! `m_r = <X_r, A> <Y_r, B>` and scatter them as `C = sum_r m_r Z_r^T`.
//! Applied blockwise to matrices of side `n^k` the recipe recurses, costing
//! `r^k` multiplications instead of the naive `n^(3k)`. Only bilinear
//! products are counted; multiplying by the fixed coefficients of the
//! decomposition is bookkeeping, not data-dependent work.

use alloc::string::String;
use alloc::vec::Vec;

use crate::decomp::{Decomposition, RankOneTerm};
use crate::design::Embedding;
use crate::error::Error;
use crate::scalar::Scalar;
use crate::tensor::Matrix;

/// Tally of data-dependent scalar multiplications.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MultCounter {
    pub scalar_mults: u64,
}

impl MultCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, count: u64) {
        self.scalar_mults += count;
    }

    pub fn total(&self) -> u64 {
        self.scalar_mults
    }
}

/// Schoolbook matrix product, counting one multiplication per entry triple
/// (`rows * inner * cols` in total).
pub fn naive_multiply<S: Scalar>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    counter: &mut MultCounter,
) -> Result<Matrix<S>, Error> {
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            found: b.rows(),
        });
    }
    counter.record((a.rows() * a.cols() * b.cols()) as u64);
    Ok(a.mul(b))
}

/// A verified decomposition packaged for execution.
///
/// Construction re-verifies the decomposition and refuses anything that does
/// not reproduce its target tensor, so an algorithm in hand is always a
/// correct multiplication recipe. Ambient sum-to-zero decompositions are
/// compressed to standard coordinates first.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearAlgorithm<S> {
    terms: Vec<RankOneTerm<S>>,
    n: usize,
    label: String,
}

impl<S: Scalar> BilinearAlgorithm<S> {
    /// Packages `decomposition` for execution, compressing ambient
    /// coordinates if needed and verifying the result at tolerance `tol`
    /// (ignored by exact scalars). Fails with
    /// [`Error::DecompositionNotVerified`] if the term sum does not match
    /// the matrix multiplication tensor.
    pub fn from_decomposition(
        decomposition: &Decomposition<S>,
        tol: f64,
    ) -> Result<Self, Error> {
        let standard = match decomposition.embedding() {
            Embedding::Full => decomposition.clone(),
            Embedding::SumZero => decomposition.compress()?,
        };
        if !standard.verify(tol).ok {
            return Err(Error::DecompositionNotVerified);
        }
        Ok(BilinearAlgorithm {
            n: standard.side(),
            label: String::from(standard.label()),
            terms: standard.terms().to_vec(),
        })
    }

    /// Side length of the base-case multiplication.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Scalar multiplications per base-case application.
    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// One application of the recipe to n-by-n matrices: exactly
    /// [`BilinearAlgorithm::rank`] scalar multiplications.
    pub fn multiply(
        &self,
        a: &Matrix<S>,
        b: &Matrix<S>,
        counter: &mut MultCounter,
    ) -> Result<Matrix<S>, Error> {
        self.check_square(a)?;
        self.check_square(b)?;
        let n = self.n;
        let mut c: Matrix<S> = Matrix::zeros(n, n);
        for term in &self.terms {
            let left = weighted_entry_sum(&term.x, a);
            let right = weighted_entry_sum(&term.y, b);
            counter.record(1);
            let m = left * right;
            for p in 0..n {
                for q in 0..n {
                    let zc = &term.z[(q, p)];
                    if !zc.is_zero() {
                        c[(p, q)] = c[(p, q)].clone() + zc.clone() * m.clone();
                    }
                }
            }
        }
        Ok(c)
    }

    /// Multiplies square matrices of any side by zero-padding to the next
    /// power of n and recursing on n-by-n block structure all the way down
    /// to scalars, for `rank^k` multiplications at side `n^k`.
    pub fn multiply_recursive(
        &self,
        a: &Matrix<S>,
        b: &Matrix<S>,
        counter: &mut MultCounter,
    ) -> Result<Matrix<S>, Error> {
        self.multiply_recursive_with_cutoff(a, b, 1, counter)
    }

    /// Like [`BilinearAlgorithm::multiply_recursive`], but switches to the
    /// schoolbook product once blocks are at most `cutoff` wide, which is
    /// how the crossover behavior of the recursion is measured.
    pub fn multiply_recursive_with_cutoff(
        &self,
        a: &Matrix<S>,
        b: &Matrix<S>,
        cutoff: usize,
        counter: &mut MultCounter,
    ) -> Result<Matrix<S>, Error> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(
                "blockwise recursion needs a base case of side at least 2".into(),
            ));
        }
        if cutoff == 0 {
            return Err(Error::InvalidParameter("cutoff must be at least 1".into()));
        }
        for m in [a, b] {
            if !m.is_square() || m.rows() != a.rows() {
                return Err(Error::DimensionMismatch {
                    expected: a.rows(),
                    found: if m.is_square() { m.rows() } else { m.cols() },
                });
            }
        }
        let size = a.rows();
        if size == 0 {
            return Ok(Matrix::zeros(0, 0));
        }
        // Pad to the smallest power of n that fits.
        let mut padded = 1;
        while padded < size {
            padded *= self.n;
        }
        let (pa, pb);
        let (a, b) = if padded == size {
            (a, b)
        } else {
            let mut xa = Matrix::zeros(padded, padded);
            xa.set_block(0, 0, a);
            let mut xb = Matrix::zeros(padded, padded);
            xb.set_block(0, 0, b);
            (pa, pb) = (xa, xb);
            (&pa, &pb)
        };
        let c = self.recurse(a, b, cutoff, counter)?;
        Ok(if padded == size {
            c
        } else {
            c.block(0, 0, size, size)
        })
    }

    /// Core recursion; `a` and `b` have side `n^k`.
    fn recurse(
        &self,
        a: &Matrix<S>,
        b: &Matrix<S>,
        cutoff: usize,
        counter: &mut MultCounter,
    ) -> Result<Matrix<S>, Error> {
        let size = a.rows();
        if size <= cutoff {
            return naive_multiply(a, b, counter);
        }
        let n = self.n;
        let sub = size / n;
        let mut c = Matrix::zeros(size, size);
        let mut c_blocks: Vec<Vec<Matrix<S>>> =
            (0..n).map(|_| (0..n).map(|_| Matrix::zeros(sub, sub)).collect()).collect();
        for term in &self.terms {
            let left = weighted_block_sum(&term.x, a, sub);
            let right = weighted_block_sum(&term.y, b, sub);
            let m = self.recurse(&left, &right, cutoff, counter)?;
            for p in 0..n {
                for q in 0..n {
                    let zc = &term.z[(q, p)];
                    if zc.is_zero() {
                        continue;
                    }
                    let add = if zc.is_one() {
                        m.clone()
                    } else {
                        m.scale(zc)
                    };
                    c_blocks[p][q] = c_blocks[p][q].add(&add);
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                c.set_block(p * sub, q * sub, &c_blocks[p][q]);
            }
        }
        Ok(c)
    }

    fn check_square(&self, m: &Matrix<S>) -> Result<(), Error> {
        if m.rows() == self.n && m.cols() == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                found: m.rows().max(m.cols()),
            })
        }
    }
}

/// `sum_ij W[i,j] * M[i,j]` — the linear form a coefficient pattern applies
/// to a scalar matrix.
fn weighted_entry_sum<S: Scalar>(w: &Matrix<S>, m: &Matrix<S>) -> S {
    let mut acc = S::zero();
    for i in 0..w.rows() {
        for j in 0..w.cols() {
            let c = &w[(i, j)];
            if !c.is_zero() {
                acc = acc + c.clone() * m[(i, j)].clone();
            }
        }
    }
    acc
}

/// The same linear form applied blockwise: `sum_ij W[i,j] * Block(i,j)` for
/// the `sub`-sided block grid of `m`. Coefficient scalings are free, so unit
/// coefficients turn into plain block additions.
fn weighted_block_sum<S: Scalar>(w: &Matrix<S>, m: &Matrix<S>, sub: usize) -> Matrix<S> {
    let mut acc = Matrix::zeros(sub, sub);
    let minus_one = S::zero() - S::one();
    for i in 0..w.rows() {
        for j in 0..w.cols() {
            let c = &w[(i, j)];
            if c.is_zero() {
                continue;
            }
            let block = m.block(i * sub, j * sub, sub, sub);
            acc = if c.is_one() {
                acc.add(&block)
            } else if *c == minus_one {
                acc.sub(&block)
            } else {
                acc.add(&block.scale(c))
            };
        }
    }
    acc
}
