//! Finite vector designs: sets of unit vectors that sum to zero and whose
//! averaged outer products reproduce `1/n` times the identity on the space
//! they span.
//!
//! Those two identities are exactly what the decomposition construction in
//! [`crate::decomp`] consumes. Built-in families: the unit triangle in the
//! plane, the regular simplex frame in any dimension, regular polygons, and
//! closures of a seed vector under a finite group of unitary generators.
//!
//! Simplex frames are kept in sum-to-zero coordinates: the n+1 vectors live
//! in `R^(n+1)` inside the hyperplane orthogonal to the all-ones vector.
//! There every coordinate is a rational multiple of one square root, so a
//! single quadratic extension represents the frame exactly, which a
//! dimension-n orthonormal basis would not allow. The averaging identity is
//! then checked against `1/n` times the hyperplane projection rather than the
//! full identity matrix.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::Error;
use crate::scalar::{fmath, ComplexFloat, QuadExt, Rational, Scalar};
use crate::tensor::{outer, Matrix, Vector};

/// How a design's coordinates relate to the space its vectors span.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Embedding {
    /// Vectors span all of `R^dim`; the averaging target is `I/dim`.
    Full,
    /// Vectors live in the sum-to-zero hyperplane of `R^dim` and span it;
    /// the averaging target is `P/(dim-1)` with `P` the orthogonal projection
    /// onto that hyperplane.
    SumZero,
}

/// A finite set of equal-dimension vectors together with its [`Embedding`].
///
/// Construction only checks shape consistency; whether the set actually
/// satisfies the design identities is the job of [`Design::verify`], which
/// reports rather than panics, so candidate sets can be inspected freely.
#[derive(Debug, Clone, PartialEq)]
pub struct Design<S> {
    vectors: Vec<Vector<S>>,
    dim: usize,
    embedding: Embedding,
}

/// Outcome of [`Design::verify`]: the residual of each identity, measured as
/// the largest entry magnitude, and the combined verdict.
///
/// With exact scalars the residuals are exactly `0.0` whenever `ok` holds;
/// with float scalars `ok` means both residuals are at most the tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignReport {
    pub ok: bool,
    /// Largest entry magnitude of `sum_i v_i`.
    pub sum_residual: f64,
    /// Largest entry magnitude of `(1/s) sum_i |v_i><v_i|  -  target`.
    pub outer_residual: f64,
    /// Whether the verdict came from exact arithmetic.
    pub exact: bool,
}

impl<S: Scalar> Design<S> {
    pub fn new(vectors: Vec<Vector<S>>, embedding: Embedding) -> Result<Self, Error> {
        let dim = match vectors.first() {
            Some(v) => v.dim(),
            None => return Err(Error::InvalidParameter("empty vector set".into())),
        };
        if dim == 0 || (embedding == Embedding::SumZero && dim < 2) {
            return Err(Error::InvalidParameter(format!(
                "coordinate dimension {dim} too small for this embedding"
            )));
        }
        for v in &vectors {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
        }
        Ok(Design {
            vectors,
            dim,
            embedding,
        })
    }

    /// Number of vectors `s`.
    pub fn size(&self) -> usize {
        self.vectors.len()
    }

    /// Coordinate dimension of the stored vectors.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension `n` of the space the vectors are supposed to span: `dim`
    /// for a full embedding, `dim - 1` in sum-to-zero coordinates.
    pub fn rank(&self) -> usize {
        match self.embedding {
            Embedding::Full => self.dim,
            Embedding::SumZero => self.dim - 1,
        }
    }

    pub fn embedding(&self) -> Embedding {
        self.embedding
    }

    pub fn vectors(&self) -> &[Vector<S>] {
        &self.vectors
    }

    /// The unit of the matrix algebra the design acts on: the identity for a
    /// full embedding, the hyperplane projection `P = I - J/dim` in
    /// sum-to-zero coordinates.
    pub fn identity_element(&self) -> Matrix<S> {
        match self.embedding {
            Embedding::Full => Matrix::identity(self.dim),
            Embedding::SumZero => {
                let d = self.dim as i64;
                let mut p = Matrix::zeros(self.dim, self.dim);
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        p[(i, j)] = if i == j {
                            S::from_ratio(d - 1, d)
                        } else {
                            S::from_ratio(-1, d)
                        };
                    }
                }
                p
            }
        }
    }

    /// Target of the outer-product averaging identity:
    /// `identity_element() / rank()`.
    pub fn averaging_target(&self) -> Matrix<S> {
        self.identity_element()
            .scale(&S::from_ratio(1, self.rank() as i64))
    }

    /// Checks the two design identities: the vectors sum to zero and their
    /// averaged outer products equal [`Design::averaging_target`]. Exact
    /// scalars ignore `tol`; float residuals must stay within it.
    pub fn verify(&self, tol: f64) -> DesignReport {
        let mut sum = Vector::zeros(self.dim);
        let mut outer_sum = Matrix::zeros(self.dim, self.dim);
        for v in &self.vectors {
            sum = sum.add(v);
            outer_sum = outer_sum.add(&outer(v, v));
        }
        let s = self.vectors.len() as i64;
        let outer_avg = outer_sum.scale(&S::from_ratio(1, s));
        let outer_diff = outer_avg.sub(&self.averaging_target());

        let sum_residual = sum.iter().map(Scalar::mag).fold(0.0, f64::max);
        let outer_residual = outer_diff.max_mag();
        let ok = if S::EXACT {
            sum.iter().all(Zero::is_zero) && outer_diff.max_mag() == 0.0
        } else {
            sum_residual <= tol && outer_residual <= tol
        };
        DesignReport {
            ok,
            sum_residual,
            outer_residual,
            exact: S::EXACT,
        }
    }

    /// Same design with every coordinate mapped to its float image.
    pub fn to_float(&self) -> Design<ComplexFloat> {
        Design {
            vectors: self
                .vectors
                .iter()
                .map(|v| v.map(Scalar::to_float))
                .collect(),
            dim: self.dim,
            embedding: self.embedding,
        }
    }
}

/// The three unit vectors at angles 0, 120, and 240 degrees in the plane,
/// exactly represented in `Q(sqrt(3))`. The smallest design this crate can
/// turn into a decomposition.
pub fn triangle_design() -> Design<QuadExt> {
    let zero = QuadExt::from_int(0);
    let one = QuadExt::from_int(1);
    let minus_half = QuadExt::from_ratio(-1, 2);
    let half_sqrt3 = QuadExt::new(Rational::zero(), crate::scalar::rat(1, 2), 3)
        .expect("3 is square-free");
    let vectors = vec![
        Vector::from_vec(vec![one, zero.clone()]),
        Vector::from_vec(vec![minus_half.clone(), half_sqrt3.clone()]),
        Vector::from_vec(vec![minus_half, -half_sqrt3]),
    ];
    Design::new(vectors, Embedding::Full).expect("triangle vectors are well-formed")
}

/// The regular n-simplex frame: the n+1 permutations of
/// `(n, -1, ..., -1) / sqrt(n(n+1))`, stored in sum-to-zero coordinates so
/// every entry lives in the single quadratic field `Q(sqrt(d))`, where `d` is
/// the square-free part of `n(n+1)`.
pub fn simplex_design(n: usize) -> Result<Design<QuadExt>, Error> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "simplex frame needs dimension at least 1".into(),
        ));
    }
    let m = (n * (n + 1)) as u64;
    let (d, e) = crate::scalar::square_free_split(m);
    // 1/sqrt(n(n+1)) = 1/(e*sqrt(d)) = sqrt(d)/(e*d), so a coordinate with
    // integer numerator c is c/(e*d) * sqrt(d).
    let coord = |c: i64| -> QuadExt {
        QuadExt::new(
            Rational::zero(),
            crate::scalar::rat(c, (e * d) as i64),
            d,
        )
        .expect("square-free by construction")
    };
    let vectors = (0..=n)
        .map(|peak| {
            Vector::from_vec(
                (0..=n)
                    .map(|k| coord(if k == peak { n as i64 } else { -1 }))
                    .collect(),
            )
        })
        .collect();
    Design::new(vectors, Embedding::SumZero)
}

/// The m vertices of the regular m-gon on the unit circle, in floats.
/// Needs `m >= 3`; smaller sets cannot satisfy the averaging identity in the
/// plane.
pub fn polygon_design(m: usize) -> Result<Design<ComplexFloat>, Error> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!(
            "polygon needs at least 3 vertices, got {m}"
        )));
    }
    let vectors = (0..m)
        .map(|k| {
            let theta = 2.0 * core::f64::consts::PI * k as f64 / m as f64;
            Vector::from_vec(vec![
                ComplexFloat::real(fmath::cos(theta)),
                ComplexFloat::real(fmath::sin(theta)),
            ])
        })
        .collect();
    Design::new(vectors, Embedding::Full)
}

/// Exact regular m-gon for the three vertex counts whose coordinates lie in
/// a single quadratic field: `m = 3` and `m = 6` in `Q(sqrt(3))`, `m = 4`
/// with rational coordinates. Other m are rejected.
pub fn polygon_design_exact(m: usize) -> Result<Design<QuadExt>, Error> {
    let zero = || QuadExt::from_int(0);
    let vectors: Vec<Vector<QuadExt>> = match m {
        3 => return Ok(triangle_design()),
        4 => vec![
            Vector::from_vec(vec![QuadExt::from_int(1), zero()]),
            Vector::from_vec(vec![zero(), QuadExt::from_int(1)]),
            Vector::from_vec(vec![QuadExt::from_int(-1), zero()]),
            Vector::from_vec(vec![zero(), QuadExt::from_int(-1)]),
        ],
        6 => {
            let half = |sign: i64| QuadExt::from_ratio(sign, 2);
            let half_sqrt3 = |sign: i64| {
                QuadExt::new(Rational::zero(), crate::scalar::rat(sign, 2), 3)
                    .expect("3 is square-free")
            };
            vec![
                Vector::from_vec(vec![QuadExt::from_int(1), zero()]),
                Vector::from_vec(vec![half(1), half_sqrt3(1)]),
                Vector::from_vec(vec![half(-1), half_sqrt3(1)]),
                Vector::from_vec(vec![QuadExt::from_int(-1), zero()]),
                Vector::from_vec(vec![half(-1), half_sqrt3(-1)]),
                Vector::from_vec(vec![half(1), half_sqrt3(-1)]),
            ]
        }
        _ => {
            return Err(Error::InvalidParameter(format!(
                "no exact quadratic-field coordinates for a {m}-gon; use polygon_design"
            )))
        }
    };
    Design::new(vectors, Embedding::Full)
}

/// A finite set of square generator matrices, all of one dimension, used to
/// grow vector orbits.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet<S> {
    matrices: Vec<Matrix<S>>,
    dim: usize,
}

impl<S: Scalar> GeneratorSet<S> {
    pub fn new(matrices: Vec<Matrix<S>>) -> Result<Self, Error> {
        let dim = match matrices.first() {
            Some(m) => m.rows(),
            None => return Err(Error::InvalidParameter("empty generator set".into())),
        };
        for m in &matrices {
            if !m.is_square() || m.rows() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.rows().max(m.cols()),
                });
            }
        }
        Ok(GeneratorSet { matrices, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[Matrix<S>] {
        &self.matrices
    }

    /// Largest entry magnitude of `G^H G - I` over all generators.
    pub fn unitarity_residual(&self) -> f64 {
        let id = Matrix::identity(self.dim);
        self.matrices
            .iter()
            .map(|g| g.conj_transpose().mul(g).sub(&id).max_mag())
            .fold(0.0, f64::max)
    }

    /// Whether every generator is unitary: exactly for exact scalars, within
    /// `tol` for floats. Orbits of non-unitary generators would not preserve
    /// vector norms, so this is checked before orbit construction.
    pub fn is_unitary(&self, tol: f64) -> bool {
        if S::EXACT {
            let id = Matrix::identity(self.dim);
            self.matrices
                .iter()
                .all(|g| g.conj_transpose().mul(g) == id)
        } else {
            self.unitarity_residual() <= tol
        }
    }
}

/// Generators of the symmetric group on m letters as permutation matrices:
/// the transposition of the first two coordinates and the full m-cycle.
/// Orbits under this set realize all coordinate permutations of a seed.
pub fn symmetric_group_generators<S: Scalar>(m: usize) -> Result<GeneratorSet<S>, Error> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "permutation degree must be at least 1".into(),
        ));
    }
    let mut matrices = Vec::new();
    if m >= 2 {
        let mut swap = Matrix::identity(m);
        swap[(0, 0)] = S::zero();
        swap[(1, 1)] = S::zero();
        swap[(0, 1)] = S::one();
        swap[(1, 0)] = S::one();
        matrices.push(swap);
    }
    if m >= 3 {
        // Cycle sending coordinate k to k+1 (mod m).
        let mut cycle = Matrix::zeros(m, m);
        for k in 0..m {
            cycle[((k + 1) % m, k)] = S::one();
        }
        matrices.push(cycle);
    }
    if matrices.is_empty() {
        matrices.push(Matrix::identity(m));
    }
    GeneratorSet::new(matrices)
}

/// The plane rotation by `2*pi/m` as a single float generator; its orbit of
/// `(1, 0)` is the regular m-gon.
pub fn rotation_generator(m: usize) -> Result<GeneratorSet<ComplexFloat>, Error> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "rotation order must be at least 1".into(),
        ));
    }
    let theta = 2.0 * core::f64::consts::PI / m as f64;
    let (c, s) = (fmath::cos(theta), fmath::sin(theta));
    let g = Matrix::from_rows(vec![
        vec![ComplexFloat::real(c), ComplexFloat::real(-s)],
        vec![ComplexFloat::real(s), ComplexFloat::real(c)],
    ]);
    GeneratorSet::new(vec![g])
}

/// Limits for orbit closure: a hard size bound and the tolerance below which
/// two float vectors count as the same orbit point (ignored by exact
/// scalars, which deduplicate by literal equality).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitOptions {
    pub max_size: usize,
    pub dedup_tol: f64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            max_size: 10_000,
            dedup_tol: 1e-9,
        }
    }
}

fn vectors_match<S: Scalar>(u: &Vector<S>, v: &Vector<S>, tol: f64) -> bool {
    if S::EXACT {
        u == v
    } else {
        u.iter()
            .zip(v.iter())
            .all(|(x, y)| (x.clone() - y.clone()).mag() <= tol)
    }
}

/// Closes `seed` under repeated application of the generators and packages
/// the orbit as a design with the given embedding.
///
/// The seed must be a unit vector and the generators unitary (tolerance
/// `opts.dedup_tol` for floats), so the whole orbit stays on the unit
/// sphere.
/// The resulting vector list is sorted by the float image of the
/// coordinates, so it does not depend on generator order or traversal order.
/// Errors with [`Error::OrbitTooLarge`] once the closure exceeds
/// `opts.max_size`.
pub fn orbit_design<S: Scalar>(
    seed: &Vector<S>,
    generators: &GeneratorSet<S>,
    embedding: Embedding,
    opts: OrbitOptions,
) -> Result<Design<S>, Error> {
    if seed.dim() != generators.dim() {
        return Err(Error::DimensionMismatch {
            expected: generators.dim(),
            found: seed.dim(),
        });
    }
    if !generators.is_unitary(opts.dedup_tol) {
        return Err(Error::InvalidParameter(
            "orbit generators must be unitary".into(),
        ));
    }
    let norm = seed.dot(seed);
    let unit = if S::EXACT {
        norm == S::one()
    } else {
        (norm - S::one()).mag() <= opts.dedup_tol
    };
    if !unit {
        return Err(Error::InvalidParameter(
            "orbit seed must be a unit vector".into(),
        ));
    }
    let mut orbit: Vec<Vector<S>> = vec![seed.clone()];
    let mut frontier: Vec<usize> = vec![0];
    while let Some(at) = frontier.pop() {
        for g in generators.matrices() {
            let image = g.mul_vec(&orbit[at]);
            if orbit
                .iter()
                .all(|known| !vectors_match(known, &image, opts.dedup_tol))
            {
                if orbit.len() >= opts.max_size {
                    return Err(Error::OrbitTooLarge {
                        bound: opts.max_size,
                    });
                }
                orbit.push(image);
                frontier.push(orbit.len() - 1);
            }
        }
    }
    // Canonical order: lexicographic over the float images of the
    // coordinates. Distinct orbit points of the designs built here are far
    // apart, so float keys separate them reliably.
    orbit.sort_by(|u, v| {
        for (x, y) in u.iter().zip(v.iter()) {
            let (fx, fy) = (x.to_float(), y.to_float());
            let ord = fx
                .re
                .total_cmp(&fy.re)
                .then_with(|| fx.im.total_cmp(&fy.im));
            if ord != core::cmp::Ordering::Equal {
                return ord;
            }
        }
        core::cmp::Ordering::Equal
    });
    Design::new(orbit, embedding)
}
