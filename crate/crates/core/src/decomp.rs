//! Rank-one decompositions of the matrix multiplication tensor.
//!
//! Given a verified design of s >= 3 unit vectors spanning an n-dimensional
//! space, [`design_decomposition`] produces the identity
//!
//! ```text
//! MM_n = E (x) E (x) E
//!      + (n^3/s^3) * sum over distinct ordered triples (i, j, k) of
//!        |w_i><w_j - w_i| (x) |w_j><w_k - w_j| (x) |w_k><w_i - w_k|
//! ```
//!
//! with `E` the identity element of the design's matrix algebra, for a total
//! of `1 + s(s-1)(s-2)` rank-one terms. For exact scalars the identity is
//! checked literally, entry by entry.
//!
//! The identity rests on two averaging facts checked independently by
//! [`cyclic_sum_check`] and [`diagonal_sum_check`], plus six cancellation
//! patterns ([`mixed_cancellation_checks`]) where one index occurs in a
//! single ket or bra and the zero-sum condition wipes the whole sum out.
//!
//! Decompositions in sum-to-zero coordinates target the twisted tensor of
//! the projected algebra; [`Decomposition::compress`] changes basis back to
//! standard n-by-n coordinates, after which simplex-frame decompositions
//! become purely rational.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::design::{Design, Embedding};
use crate::error::Error;
use crate::scalar::{QuadExt, Rational, Scalar, ScalarError};
use crate::tensor::{mm_tensor, mm_tensor_twisted, outer, Matrix, Tensor3};

/// One term `vec(X) (x) vec(Y) (x) vec(Z)` of a decomposition. Scalar
/// coefficients are folded into `X`, so the terms sum to the target tensor
/// with no extra weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneTerm<S> {
    pub x: Matrix<S>,
    pub y: Matrix<S>,
    pub z: Matrix<S>,
}

/// A claimed rank-one decomposition of a matrix multiplication tensor.
///
/// `side` is the side length of the factor matrices. With a
/// [`Embedding::Full`] embedding the target is `mm_tensor(side)`; with
/// [`Embedding::SumZero`] the factors are ambient and the target is the
/// twisted tensor of the projected algebra. Nothing is trusted at
/// construction: [`Decomposition::verify`] recomputes the sum of all terms
/// and compares it to the target.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition<S> {
    terms: Vec<RankOneTerm<S>>,
    side: usize,
    embedding: Embedding,
    label: String,
}

/// Outcome of [`Decomposition::verify`].
#[derive(Debug, Clone, PartialEq)]
pub struct DecompReport {
    pub ok: bool,
    /// Largest entry magnitude of (sum of terms) - target.
    pub residual: f64,
    /// Number of rank-one terms.
    pub rank: usize,
    /// Whether the verdict came from exact arithmetic.
    pub exact: bool,
}

impl<S: Scalar> Decomposition<S> {
    pub fn new(
        terms: Vec<RankOneTerm<S>>,
        side: usize,
        embedding: Embedding,
        label: impl Into<String>,
    ) -> Result<Self, Error> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter("no rank-one terms".into()));
        }
        if side == 0 || (embedding == Embedding::SumZero && side < 2) {
            return Err(Error::InvalidParameter(format!(
                "factor side {side} too small for this embedding"
            )));
        }
        for t in &terms {
            for m in [&t.x, &t.y, &t.z] {
                if !(m.rows() == side && m.cols() == side) {
                    return Err(Error::DimensionMismatch {
                        expected: side,
                        found: m.rows().max(m.cols()),
                    });
                }
            }
        }
        Ok(Decomposition {
            terms,
            side,
            embedding,
            label: label.into(),
        })
    }

    pub fn terms(&self) -> &[RankOneTerm<S>] {
        &self.terms
    }

    /// Number of rank-one terms, i.e. the multiplication count of the
    /// induced bilinear algorithm.
    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    /// Side length of the factor matrices.
    pub fn side(&self) -> usize {
        self.side
    }

    /// Size of the matrices the induced algorithm multiplies: `side` in
    /// standard coordinates, `side - 1` for ambient sum-to-zero factors.
    pub fn n(&self) -> usize {
        match self.embedding {
            Embedding::Full => self.side,
            Embedding::SumZero => self.side - 1,
        }
    }

    pub fn embedding(&self) -> Embedding {
        self.embedding
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The tensor this decomposition claims to equal.
    pub fn target_tensor(&self) -> Tensor3<S> {
        match self.embedding {
            Embedding::Full => mm_tensor(self.side),
            Embedding::SumZero => mm_tensor_twisted(&sum_zero_projection(self.side)),
        }
    }

    /// Sum of all rank-one terms as a dense tensor.
    pub fn tensor(&self) -> Tensor3<S> {
        let d = self.side * self.side;
        let mut t = Tensor3::zeros([d; 3]);
        let one = S::one();
        for term in &self.terms {
            t.add_scaled_rank_one(&one, &term.x, &term.y, &term.z);
        }
        t
    }

    /// Recomputes the term sum and compares it against the target: literal
    /// equality for exact scalars, largest entry difference at most `tol`
    /// for floats.
    pub fn verify(&self, tol: f64) -> DecompReport {
        let diff = self.tensor().sub(&self.target_tensor());
        let residual = diff.max_mag();
        let ok = if S::EXACT {
            diff.is_zero()
        } else {
            residual <= tol
        };
        DecompReport {
            ok,
            residual,
            rank: self.terms.len(),
            exact: S::EXACT,
        }
    }

    /// Rewrites an ambient sum-to-zero decomposition in standard n-by-n
    /// coordinates, where its target is plain `mm_tensor(n)`.
    ///
    /// The change of basis uses the integer matrix `B` with columns
    /// `e_k - e_(k+1)` (a basis of the sum-to-zero hyperplane): each factor
    /// `X` becomes `B^T X (B^+)^T` with `B^+` the pseudoinverse `(B^T B)^-1
    /// B^T`. Conjugating by `B` is an algebra isomorphism between n-by-n
    /// matrices and the projected ambient algebra, so the rewritten terms
    /// decompose `mm_tensor(n)` with the same rank. The identity element
    /// maps to the identity matrix. Decompositions already in standard
    /// coordinates are returned unchanged.
    pub fn compress(&self) -> Result<Self, Error> {
        if self.embedding == Embedding::Full {
            return Ok(self.clone());
        }
        let m = self.side;
        let n = m - 1;
        let mut basis = Matrix::zeros(m, n);
        for k in 0..n {
            basis[(k, k)] = S::one();
            basis[(k + 1, k)] = S::zero() - S::one();
        }
        let basis_t = basis.transpose();
        let gram_inv = basis_t.mul(&basis).inverse()?;
        // (B^+)^T = B (B^T B)^-1, using that the Gram matrix is symmetric.
        let right = basis.mul(&gram_inv);
        let terms = self
            .terms
            .iter()
            .map(|t| RankOneTerm {
                x: basis_t.mul(&t.x).mul(&right),
                y: basis_t.mul(&t.y).mul(&right),
                z: basis_t.mul(&t.z).mul(&right),
            })
            .collect();
        Decomposition::new(
            terms,
            n,
            Embedding::Full,
            format!("{} (standard coordinates)", self.label),
        )
    }

    /// Float image of the decomposition.
    pub fn to_float(&self) -> Decomposition<crate::scalar::ComplexFloat> {
        Decomposition {
            terms: self
                .terms
                .iter()
                .map(|t| RankOneTerm {
                    x: t.x.map(Scalar::to_float),
                    y: t.y.map(Scalar::to_float),
                    z: t.z.map(Scalar::to_float),
                })
                .collect(),
            side: self.side,
            embedding: self.embedding,
            label: self.label.clone(),
        }
    }
}

impl Decomposition<QuadExt> {
    /// Exact demotion to rational scalars; errors if any entry retains a
    /// radical part. Compressed simplex-frame decompositions always pass:
    /// every factor entry is a product of two single-radical coordinates.
    pub fn to_rational(&self) -> Result<Decomposition<Rational>, ScalarError> {
        let demote = |m: &Matrix<QuadExt>| -> Result<Matrix<Rational>, ScalarError> {
            let mut out = Matrix::zeros(m.rows(), m.cols());
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    out[(i, j)] = m[(i, j)].to_rational()?;
                }
            }
            Ok(out)
        };
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            terms.push(RankOneTerm {
                x: demote(&t.x)?,
                y: demote(&t.y)?,
                z: demote(&t.z)?,
            });
        }
        Ok(Decomposition {
            terms,
            side: self.side,
            embedding: self.embedding,
            label: self.label.clone(),
        })
    }
}

/// Orthogonal projection `P = I - J/m` onto the sum-to-zero hyperplane.
fn sum_zero_projection<S: Scalar>(m: usize) -> Matrix<S> {
    let mm = m as i64;
    let mut p = Matrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            p[(i, j)] = if i == j {
                S::from_ratio(mm - 1, mm)
            } else {
                S::from_ratio(-1, mm)
            };
        }
    }
    p
}

/// Builds the rank-one decomposition induced by a design.
///
/// The design must pass [`Design::verify`] at tolerance `tol` and contain at
/// least 3 vectors (distinct ordered triples must exist). The first term is
/// the cube of the design's identity element; the remaining `s(s-1)(s-2)`
/// follow in lexicographic order of the index triple `(i, j, k)`, with the
/// overall coefficient `n^3/s^3` folded into each X factor.
pub fn design_decomposition<S: Scalar>(
    design: &Design<S>,
    tol: f64,
) -> Result<Decomposition<S>, Error> {
    if !design.verify(tol).ok {
        return Err(Error::DesignNotVerified);
    }
    let s = design.size();
    if s < 3 {
        return Err(Error::InvalidParameter(format!(
            "decomposition needs at least 3 vectors, design has {s}"
        )));
    }
    let n = design.rank() as i64;
    let coeff = S::from_ratio(n * n * n, (s * s * s) as i64);
    let w = design.vectors();

    let e = design.identity_element();
    let mut terms = Vec::with_capacity(1 + s * (s - 1) * (s - 2));
    terms.push(RankOneTerm {
        x: e.clone(),
        y: e.clone(),
        z: e,
    });
    for i in 0..s {
        for j in 0..s {
            if j == i {
                continue;
            }
            let x = outer(&w[i], &w[j].sub(&w[i])).scale(&coeff);
            for k in 0..s {
                if k == i || k == j {
                    continue;
                }
                terms.push(RankOneTerm {
                    x: x.clone(),
                    y: outer(&w[j], &w[k].sub(&w[j])),
                    z: outer(&w[k], &w[i].sub(&w[k])),
                });
            }
        }
    }
    Decomposition::new(
        terms,
        design.dim(),
        design.embedding(),
        format!("design decomposition (s={s}, n={})", design.rank()),
    )
}

/// Verifies a decomposition against its target tensor; see
/// [`Decomposition::verify`].
pub fn verify_decomposition<S: Scalar>(d: &Decomposition<S>, tol: f64) -> DecompReport {
    d.verify(tol)
}

/// The classical seven-multiplication algorithm for 2-by-2 matrices as a
/// rank-one decomposition of `mm_tensor(2)`. Term r contributes the product
/// `m_r = <X_r, A> <Y_r, B>` and scatters it into `C` as `m_r * Z_r^T`.
pub fn strassen_reference() -> Decomposition<Rational> {
    let m = |rows: [[i64; 2]; 2]| Matrix::<Rational>::from_int_rows(&[&rows[0], &rows[1]]);
    let term = |x, y, z| RankOneTerm {
        x: m(x),
        y: m(y),
        z: m(z),
    };
    let terms = alloc::vec![
        // (A11 + A22)(B11 + B22) -> C11, C22
        term([[1, 0], [0, 1]], [[1, 0], [0, 1]], [[1, 0], [0, 1]]),
        // (A21 + A22) B11 -> C21, -C22
        term([[0, 0], [1, 1]], [[1, 0], [0, 0]], [[0, 1], [0, -1]]),
        // A11 (B12 - B22) -> C12, C22
        term([[1, 0], [0, 0]], [[0, 1], [0, -1]], [[0, 0], [1, 1]]),
        // A22 (B21 - B11) -> C11, C21
        term([[0, 0], [0, 1]], [[-1, 0], [1, 0]], [[1, 1], [0, 0]]),
        // (A11 + A12) B22 -> -C11, C12
        term([[1, 1], [0, 0]], [[0, 0], [0, 1]], [[-1, 0], [1, 0]]),
        // (A21 - A11)(B11 + B12) -> C22
        term([[-1, 0], [1, 0]], [[1, 1], [0, 0]], [[0, 0], [0, 1]]),
        // (A12 - A22)(B21 + B22) -> C11
        term([[0, 1], [0, -1]], [[0, 0], [1, 1]], [[1, 0], [0, 0]]),
    ];
    Decomposition::new(terms, 2, Embedding::Full, "strassen-2x2")
        .expect("reference terms are well-formed")
}

/// Outcome of one of the averaging or cancellation identity checks.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub ok: bool,
    /// Largest entry magnitude of (computed sum) - (expected tensor).
    pub residual: f64,
    pub exact: bool,
}

fn outcome_from_diff<S: Scalar>(diff: &Tensor3<S>, tol: f64) -> CheckOutcome {
    let residual = diff.max_mag();
    CheckOutcome {
        ok: if S::EXACT { diff.is_zero() } else { residual <= tol },
        residual,
        exact: S::EXACT,
    }
}

/// Checks that summing `|w_i><w_j| (x) |w_j><w_k| (x) |w_k><w_i|` over all
/// s^3 ordered triples (repeats included), scaled by `n^3/s^3`, reproduces
/// the design's target tensor. This is the outer-product averaging identity
/// applied once per tensor slot.
pub fn cyclic_sum_check<S: Scalar>(design: &Design<S>, tol: f64) -> CheckOutcome {
    let sum = triple_sum(design, [(0, 1), (1, 2), (2, 0)]);
    let target = match design.embedding() {
        Embedding::Full => mm_tensor(design.dim()),
        Embedding::SumZero => mm_tensor_twisted(&design.identity_element()),
    };
    outcome_from_diff(&sum.sub(&target), tol)
}

/// Checks that summing `|w_i><w_i| (x) |w_j><w_j| (x) |w_k><w_k|` over all
/// s^3 ordered triples, scaled by `n^3/s^3`, reproduces the cube of the
/// design's identity element.
pub fn diagonal_sum_check<S: Scalar>(design: &Design<S>, tol: f64) -> CheckOutcome {
    let sum = triple_sum(design, [(0, 0), (1, 1), (2, 2)]);
    let e = design.identity_element();
    let target = crate::tensor::rank_one_tensor(&e, &e, &e);
    outcome_from_diff(&sum.sub(&target), tol)
}

/// The six index patterns whose triple sums vanish because one index occurs
/// in exactly one ket or bra, letting the zero-sum condition collapse the
/// whole sum. Each slot is a `(ket, bra)` pair over indices 0 = i, 1 = j,
/// 2 = k.
pub const MIXED_PATTERNS: [[(usize, usize); 3]; 6] = [
    [(0, 0), (1, 2), (2, 0)], // j only as a ket
    [(0, 1), (1, 1), (2, 0)], // k only as a ket
    [(0, 1), (1, 2), (2, 2)], // i only as a bra
    [(0, 1), (1, 1), (2, 2)], // i only as a bra, k only as a ket
    [(0, 0), (1, 2), (2, 2)], // j only as a ket
    [(0, 0), (1, 1), (2, 0)], // k only as a ket
];

/// Runs the six cancellation checks of [`MIXED_PATTERNS`]: each triple sum
/// over all s^3 index combinations must be the zero tensor. These are the
/// cross terms that disappear when the all-triples sums are reduced to the
/// distinct-triples decomposition.
pub fn mixed_cancellation_checks<S: Scalar>(design: &Design<S>, tol: f64) -> [CheckOutcome; 6] {
    MIXED_PATTERNS.map(|pattern| {
        let sum = triple_sum_pattern(design, pattern, &S::one());
        outcome_from_diff(&sum, tol)
    })
}

/// Scaled sum over all ordered triples with a cyclic-style slot pattern and
/// the design's `n^3/s^3` coefficient.
fn triple_sum<S: Scalar>(design: &Design<S>, pattern: [(usize, usize); 3]) -> Tensor3<S> {
    let s = design.size() as i64;
    let n = design.rank() as i64;
    let coeff = S::from_ratio(n * n * n, s * s * s);
    triple_sum_pattern(design, pattern, &coeff)
}

fn triple_sum_pattern<S: Scalar>(
    design: &Design<S>,
    pattern: [(usize, usize); 3],
    coeff: &S,
) -> Tensor3<S> {
    let s = design.size();
    let w = design.vectors();
    // Precompute all s^2 outer products once.
    let outers: Vec<Vec<Matrix<S>>> = (0..s)
        .map(|a| (0..s).map(|b| outer(&w[a], &w[b])).collect())
        .collect();
    let d = design.dim() * design.dim();
    let mut t = Tensor3::zeros([d; 3]);
    let one = S::one();
    for i in 0..s {
        for j in 0..s {
            for k in 0..s {
                let idx = [i, j, k];
                let pick = |slot: usize| {
                    let (ket, bra) = pattern[slot];
                    &outers[idx[ket]][idx[bra]]
                };
                let x = pick(0).scale(coeff);
                t.add_scaled_rank_one(&one, &x, pick(1), pick(2));
            }
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{polygon_design, simplex_design, triangle_design};
    use crate::scalar::rat;
    use crate::tensor::{pairing, Vector};

    #[test]
    fn strassen_reference_verifies_exactly() {
        let d = strassen_reference();
        assert_eq!(d.rank(), 7);
        let report = d.verify(0.0);
        assert!(report.ok);
        assert!(report.exact);
        assert_eq!(report.residual, 0.0);
    }

    #[test]
    fn triangle_decomposition_has_seven_terms_and_verifies() {
        let design = triangle_design();
        let d = design_decomposition(&design, 0.0).unwrap();
        assert_eq!(d.rank(), 7);
        assert_eq!(d.n(), 2);
        assert_eq!(d.embedding(), Embedding::Full);
        let report = d.verify(0.0);
        assert!(report.ok, "residual {}", report.residual);
        assert_eq!(report.residual, 0.0);
    }

    #[test]
    fn triangle_first_term_is_identity_cube() {
        let d = design_decomposition(&triangle_design(), 0.0).unwrap();
        let first = &d.terms()[0];
        let id = Matrix::identity(2);
        assert_eq!(first.x, id);
        assert_eq!(first.y, id);
        assert_eq!(first.z, id);
    }

    #[test]
    fn triangle_term_coefficient_is_folded_into_x() {
        // Second term: (i, j, k) = (0, 1, 2) with coefficient 8/27. Its Y
        // factor is a plain outer product, so w_1 (x) (w_2 - w_1) shows up
        // unscaled; spot-check the (0, 0) entry: (-1/2) * ((-1/2) - (-1/2))
        // = 0 and the (1, 0) entry of X: 0 * (-1/2 - 1) * 8/27 = 0,
        // while X(0, 0) = 1 * (-1/2 - 1) * 8/27 = -4/9.
        let d = design_decomposition(&triangle_design(), 0.0).unwrap();
        let t = &d.terms()[1];
        assert_eq!(t.x[(0, 0)], QuadExt::from_ratio(-4, 9));
        assert_eq!(t.y[(0, 0)], QuadExt::from_int(0));
    }

    #[test]
    fn simplex_decompositions_verify_in_ambient_coordinates() {
        for n in 2..=3 {
            let design = simplex_design(n).unwrap();
            let d = design_decomposition(&design, 0.0).unwrap();
            assert_eq!(d.rank(), 1 + (n + 1) * n * (n - 1));
            assert_eq!(d.embedding(), Embedding::SumZero);
            assert_eq!(d.n(), n);
            let report = d.verify(0.0);
            assert!(report.ok, "n={n}: residual {}", report.residual);
        }
    }

    #[test]
    fn simplex_decomposition_entries_are_rational() {
        // Products of two single-radical coordinates lose the radical.
        let d = design_decomposition(&simplex_design(2).unwrap(), 0.0).unwrap();
        let rational = d.to_rational().unwrap();
        assert_eq!(rational.rank(), 7);
        assert!(rational.verify(0.0).ok);
    }

    #[test]
    fn compressed_simplex_decomposition_hits_standard_tensor() {
        let design = simplex_design(2).unwrap();
        let ambient = design_decomposition(&design, 0.0).unwrap();
        let standard = ambient.compress().unwrap().to_rational().unwrap();
        assert_eq!(standard.side(), 2);
        assert_eq!(standard.embedding(), Embedding::Full);
        assert_eq!(standard.rank(), 7);
        assert!(standard.verify(0.0).ok);
        assert_eq!(standard.tensor(), mm_tensor(2));
        // The ambient identity element compresses to the identity matrix.
        let first = &standard.terms()[0];
        assert_eq!(first.x, Matrix::<Rational>::identity(2));
    }

    #[test]
    fn compress_is_a_no_op_in_standard_coordinates() {
        let d = strassen_reference();
        assert_eq!(d.compress().unwrap(), d);
    }

    #[test]
    fn polygon_decomposition_verifies_in_floats() {
        let design = polygon_design(5).unwrap();
        let d = design_decomposition(&design, 1e-12).unwrap();
        assert_eq!(d.rank(), 1 + 5 * 4 * 3);
        let report = d.verify(1e-9);
        assert!(report.ok, "residual {}", report.residual);
        assert!(!report.exact);
        assert!(report.residual <= 1e-12);
    }

    #[test]
    fn unverified_design_is_rejected() {
        let e0 = Vector::from_vec(vec![
            Rational::from_ratio(1, 1),
            Rational::from_ratio(0, 1),
        ]);
        let e1 = Vector::from_vec(vec![
            Rational::from_ratio(0, 1),
            Rational::from_ratio(1, 1),
        ]);
        let bogus = Design::new(alloc::vec![e0, e1], Embedding::Full).unwrap();
        assert_eq!(
            design_decomposition(&bogus, 0.0).unwrap_err(),
            Error::DesignNotVerified
        );
    }

    #[test]
    fn two_vector_design_is_too_small() {
        // The 1-simplex frame verifies but has no distinct triples.
        let design = simplex_design(1).unwrap();
        assert!(design.verify(0.0).ok);
        assert!(matches!(
            design_decomposition(&design, 0.0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn averaging_checks_pass_on_triangle() {
        let design = triangle_design();
        let cyclic = cyclic_sum_check(&design, 0.0);
        assert!(cyclic.ok && cyclic.exact && cyclic.residual == 0.0);
        let diagonal = diagonal_sum_check(&design, 0.0);
        assert!(diagonal.ok && diagonal.residual == 0.0);
    }

    #[test]
    fn mixed_cancellations_vanish_on_triangle() {
        for (idx, outcome) in mixed_cancellation_checks(&triangle_design(), 0.0)
            .iter()
            .enumerate()
        {
            assert!(outcome.ok, "pattern {idx}: residual {}", outcome.residual);
            assert_eq!(outcome.residual, 0.0);
        }
    }

    #[test]
    fn averaging_checks_pass_on_simplex_frames() {
        for n in 2..=3 {
            let design = simplex_design(n).unwrap();
            assert!(cyclic_sum_check(&design, 0.0).ok, "cyclic n={n}");
            assert!(diagonal_sum_check(&design, 0.0).ok, "diagonal n={n}");
        }
    }

    #[test]
    fn pairing_through_strassen_matches_trace() {
        let d = strassen_reference();
        let t = d.tensor();
        let a = Matrix::<Rational>::from_int_rows(&[&[1, 2], &[3, 4]]);
        let b = Matrix::<Rational>::from_int_rows(&[&[5, -6], &[7, 8]]);
        let c = Matrix::<Rational>::from_int_rows(&[&[9, 10], &[-11, 12]]);
        assert_eq!(pairing(&t, &a, &b, &c), a.mul(&b).mul(&c).trace());
        let _ = rat(0, 1);
    }
}
