//! Scalar-kind-erased wrappers for designs and decompositions, and their
//! JSON interchange format.
//!
//! Scalar encodings: rationals are strings `"p/q"`, quadratic-field elements
//! are objects `{"a":"p/q","b":"p/q","d":3}` (`d = 0` marks a purely
//! rational value), complex floats are `{"re":x,"im":y}`. Round-trips are
//! bit-exact for the exact kinds.
//!
//! A design is `{"n":2,"scalar":"quad(3)","vectors":[[..],[..]]}`; a
//! decomposition is `{"n":2,"provenance":"triangle","scalar":"quad(3)",
//! "terms":[{"X":[[..]],"Y":[[..]],"Z":[[..]]}]}`. `n` is the size of the
//! matrices being multiplied; coordinates of length `n + 1` (or factor
//! matrices of side `n + 1`) mark the sum-to-zero ambient representation.
//!
//! Quadratic-field artifacts whose entries are all rational (a compressed
//! simplex decomposition, the exact square design) are serialized with
//! scalar kind `"rational"`, so files always carry the smallest field that
//! holds their values.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Value};

use orbitmul_core::{
    design_decomposition, ComplexFloat, DecompReport, Decomposition, Design, DesignReport,
    Embedding, Error, Matrix, QuadExt, RankOneTerm, Rational, Scalar, Vector, Zero,
};

/// Malformed or inconsistent JSON artifact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtifactError(pub String);

impl fmt::Display for ArtifactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ArtifactError {}

fn bad(msg: impl Into<String>) -> ArtifactError {
    ArtifactError(msg.into())
}

/// The scalar field an artifact is expressed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarKind {
    Rational,
    Quad(u64),
    Float,
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarKind::Rational => write!(f, "rational"),
            ScalarKind::Quad(d) => write!(f, "quad({d})"),
            ScalarKind::Float => write!(f, "float"),
        }
    }
}

impl FromStr for ScalarKind {
    type Err = ArtifactError;

    fn from_str(s: &str) -> Result<Self, ArtifactError> {
        match s {
            "rational" => Ok(ScalarKind::Rational),
            "float" => Ok(ScalarKind::Float),
            _ => {
                let d = s
                    .strip_prefix("quad(")
                    .and_then(|rest| rest.strip_suffix(')'))
                    .and_then(|d| d.parse::<u64>().ok())
                    .ok_or_else(|| bad(format!("unknown scalar kind {s:?}")))?;
                Ok(ScalarKind::Quad(d))
            }
        }
    }
}

// ---- scalar encodings ----

fn rational_to_value(x: &Rational) -> Value {
    Value::String(format!("{}/{}", x.numer(), x.denom()))
}

fn rational_from_value(v: &Value) -> Result<Rational, ArtifactError> {
    let s = v
        .as_str()
        .ok_or_else(|| bad(format!("expected \"p/q\" string, got {v}")))?;
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let numer = BigInt::from_str(p.trim()).map_err(|_| bad(format!("bad numerator in {s:?}")))?;
    let denom = BigInt::from_str(q.trim()).map_err(|_| bad(format!("bad denominator in {s:?}")))?;
    if denom.is_zero() {
        return Err(bad(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(numer, denom))
}

fn quad_to_value(x: &QuadExt) -> Value {
    json!({
        "a": rational_to_value(x.rational_part()),
        "b": rational_to_value(x.radical_part()),
        "d": x.radicand(),
    })
}

fn quad_from_value(v: &Value) -> Result<QuadExt, ArtifactError> {
    let obj = v
        .as_object()
        .ok_or_else(|| bad(format!("expected {{a, b, d}} object, got {v}")))?;
    let field = |name: &str| {
        obj.get(name)
            .ok_or_else(|| bad(format!("missing field {name:?} in {v}")))
    };
    let a = rational_from_value(field("a")?)?;
    let b = rational_from_value(field("b")?)?;
    let d = field("d")?
        .as_u64()
        .ok_or_else(|| bad(format!("field \"d\" must be a nonnegative integer in {v}")))?;
    if d == 0 && !b.is_zero() {
        return Err(bad(format!("radical part with no radicand in {v}")));
    }
    if d == 0 {
        Ok(QuadExt::from_rational(a))
    } else {
        QuadExt::new(a, b, d).map_err(|e| bad(format!("{e}")))
    }
}

fn complex_to_value(x: &ComplexFloat) -> Value {
    json!({ "re": x.re, "im": x.im })
}

fn complex_from_value(v: &Value) -> Result<ComplexFloat, ArtifactError> {
    let obj = v
        .as_object()
        .ok_or_else(|| bad(format!("expected {{re, im}} object, got {v}")))?;
    let part = |name: &str| {
        obj.get(name)
            .and_then(Value::as_f64)
            .ok_or_else(|| bad(format!("missing float field {name:?} in {v}")))
    };
    Ok(ComplexFloat::new(part("re")?, part("im")?))
}

fn matrix_to_value<S: Scalar>(m: &Matrix<S>, enc: impl Fn(&S) -> Value) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| enc(&m[(i, j)])).collect()))
            .collect(),
    )
}

fn matrix_from_value<S: Scalar>(
    v: &Value,
    dec: &impl Fn(&Value) -> Result<S, ArtifactError>,
) -> Result<Matrix<S>, ArtifactError> {
    let rows = v
        .as_array()
        .ok_or_else(|| bad(format!("expected matrix rows, got {v}")))?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let cells = row
            .as_array()
            .ok_or_else(|| bad(format!("expected matrix row, got {row}")))?;
        out.push(cells.iter().map(dec).collect::<Result<Vec<_>, _>>()?);
    }
    let cols = out.first().map(Vec::len).unwrap_or(0);
    if out.is_empty() || cols == 0 || out.iter().any(|r| r.len() != cols) {
        return Err(bad("matrix must be rectangular and nonempty"));
    }
    Ok(Matrix::from_rows(out))
}

/// The radicand actually used by a set of quadratic-field values: the first
/// nonzero one, or 0 if every value is rational.
fn used_radicand<'a>(values: impl Iterator<Item = &'a QuadExt>) -> u64 {
    values.map(QuadExt::radicand).find(|&d| d != 0).unwrap_or(0)
}

// ---- designs ----

/// A design over any of the three scalar kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyDesign {
    Rational(Design<Rational>),
    Quad(Design<QuadExt>),
    Float(Design<ComplexFloat>),
}

impl AnyDesign {
    pub fn size(&self) -> usize {
        match self {
            AnyDesign::Rational(d) => d.size(),
            AnyDesign::Quad(d) => d.size(),
            AnyDesign::Float(d) => d.size(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            AnyDesign::Rational(d) => d.rank(),
            AnyDesign::Quad(d) => d.rank(),
            AnyDesign::Float(d) => d.rank(),
        }
    }

    pub fn verify(&self, tol: f64) -> DesignReport {
        match self {
            AnyDesign::Rational(d) => d.verify(tol),
            AnyDesign::Quad(d) => d.verify(tol),
            AnyDesign::Float(d) => d.verify(tol),
        }
    }

    pub fn decompose(&self, tol: f64) -> Result<AnyDecomposition, Error> {
        Ok(match self {
            AnyDesign::Rational(d) => {
                AnyDecomposition::Rational(design_decomposition(d, tol)?)
            }
            AnyDesign::Quad(d) => AnyDecomposition::Quad(design_decomposition(d, tol)?),
            AnyDesign::Float(d) => AnyDecomposition::Float(design_decomposition(d, tol)?),
        })
    }

    /// Scalar kind as serialized: quadratic designs with no radical left
    /// demote to rational.
    pub fn scalar_kind(&self) -> ScalarKind {
        match self {
            AnyDesign::Rational(_) => ScalarKind::Rational,
            AnyDesign::Quad(d) => {
                match used_radicand(d.vectors().iter().flat_map(Vector::iter)) {
                    0 => ScalarKind::Rational,
                    d => ScalarKind::Quad(d),
                }
            }
            AnyDesign::Float(_) => ScalarKind::Float,
        }
    }

    pub fn to_value(&self) -> Value {
        let normalized = self.clone().normalize();
        let vectors: Value = match &normalized {
            AnyDesign::Rational(d) => encode_vectors(d.vectors(), rational_to_value),
            AnyDesign::Quad(d) => encode_vectors(d.vectors(), quad_to_value),
            AnyDesign::Float(d) => encode_vectors(d.vectors(), complex_to_value),
        };
        json!({
            "n": normalized.rank(),
            "scalar": normalized.scalar_kind().to_string(),
            "vectors": vectors,
        })
    }

    pub fn from_value(v: &Value) -> Result<Self, ArtifactError> {
        let obj = v
            .as_object()
            .ok_or_else(|| bad("design must be a JSON object"))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("design needs a positive integer field \"n\""))?
            as usize;
        let kind: ScalarKind = obj
            .get("scalar")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("design needs a string field \"scalar\""))?
            .parse()?;
        let rows = obj
            .get("vectors")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("design needs an array field \"vectors\""))?;
        let dim = rows
            .first()
            .and_then(Value::as_array)
            .map(Vec::len)
            .ok_or_else(|| bad("design needs at least one vector"))?;
        let embedding = embedding_for(n, dim)?;
        let design = match kind {
            ScalarKind::Rational => AnyDesign::Rational(
                Design::new(decode_vectors(rows, &rational_from_value)?, embedding)
                    .map_err(|e| bad(format!("{e}")))?,
            ),
            ScalarKind::Quad(_) => AnyDesign::Quad(
                Design::new(decode_vectors(rows, &quad_from_value)?, embedding)
                    .map_err(|e| bad(format!("{e}")))?,
            ),
            ScalarKind::Float => AnyDesign::Float(
                Design::new(decode_vectors(rows, &complex_from_value)?, embedding)
                    .map_err(|e| bad(format!("{e}")))?,
            ),
        };
        Ok(design)
    }

    /// Demotes a quadratic design with no radical parts to the rational
    /// kind; other designs pass through.
    pub fn normalize(self) -> Self {
        if let AnyDesign::Quad(d) = &self {
            if self.scalar_kind() == ScalarKind::Rational {
                let vectors = d
                    .vectors()
                    .iter()
                    .map(|v| v.map(|x| x.to_rational().expect("no radical part")))
                    .collect();
                return AnyDesign::Rational(
                    Design::new(vectors, d.embedding()).expect("shape is preserved"),
                );
            }
        }
        self
    }
}

fn embedding_for(n: usize, dim: usize) -> Result<Embedding, ArtifactError> {
    if dim == n {
        Ok(Embedding::Full)
    } else if dim == n + 1 {
        Ok(Embedding::SumZero)
    } else {
        Err(bad(format!(
            "coordinate length {dim} fits neither n = {n} nor the sum-to-zero length {}",
            n + 1
        )))
    }
}

fn encode_vectors<S: Scalar>(vectors: &[Vector<S>], enc: impl Fn(&S) -> Value) -> Value {
    Value::Array(
        vectors
            .iter()
            .map(|v| Value::Array(v.iter().map(&enc).collect()))
            .collect(),
    )
}

fn decode_vectors<S: Scalar>(
    rows: &[Value],
    dec: &impl Fn(&Value) -> Result<S, ArtifactError>,
) -> Result<Vec<Vector<S>>, ArtifactError> {
    rows.iter()
        .map(|row| {
            let cells = row
                .as_array()
                .ok_or_else(|| bad(format!("expected coordinate array, got {row}")))?;
            Ok(Vector::from_vec(
                cells.iter().map(dec).collect::<Result<Vec<_>, _>>()?,
            ))
        })
        .collect()
}

// ---- decompositions ----

/// A decomposition over any of the three scalar kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyDecomposition {
    Rational(Decomposition<Rational>),
    Quad(Decomposition<QuadExt>),
    Float(Decomposition<ComplexFloat>),
}

impl AnyDecomposition {
    pub fn rank(&self) -> usize {
        match self {
            AnyDecomposition::Rational(d) => d.rank(),
            AnyDecomposition::Quad(d) => d.rank(),
            AnyDecomposition::Float(d) => d.rank(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyDecomposition::Rational(d) => d.n(),
            AnyDecomposition::Quad(d) => d.n(),
            AnyDecomposition::Float(d) => d.n(),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            AnyDecomposition::Rational(d) => d.label(),
            AnyDecomposition::Quad(d) => d.label(),
            AnyDecomposition::Float(d) => d.label(),
        }
    }

    pub fn verify(&self, tol: f64) -> DecompReport {
        match self {
            AnyDecomposition::Rational(d) => d.verify(tol),
            AnyDecomposition::Quad(d) => d.verify(tol),
            AnyDecomposition::Float(d) => d.verify(tol),
        }
    }

    /// Standard-coordinates form: compresses sum-to-zero factors and demotes
    /// quadratic decompositions whose entries end up rational.
    pub fn normalize(&self) -> Result<Self, Error> {
        let compressed = match self {
            AnyDecomposition::Rational(d) => AnyDecomposition::Rational(d.compress()?),
            AnyDecomposition::Quad(d) => {
                let c = d.compress()?;
                match c.to_rational() {
                    Ok(r) => AnyDecomposition::Rational(r),
                    Err(_) => AnyDecomposition::Quad(c),
                }
            }
            AnyDecomposition::Float(d) => AnyDecomposition::Float(d.compress()?),
        };
        Ok(compressed)
    }

    pub fn to_float_decomposition(&self) -> Decomposition<ComplexFloat> {
        match self {
            AnyDecomposition::Rational(d) => d.to_float(),
            AnyDecomposition::Quad(d) => d.to_float(),
            AnyDecomposition::Float(d) => d.clone(),
        }
    }

    pub fn scalar_kind(&self) -> ScalarKind {
        match self {
            AnyDecomposition::Rational(_) => ScalarKind::Rational,
            AnyDecomposition::Quad(d) => {
                let entries = d.terms().iter().flat_map(|t| {
                    [&t.x, &t.y, &t.z].into_iter().flat_map(|m| {
                        (0..m.rows()).flat_map(move |i| (0..m.cols()).map(move |j| &m[(i, j)]))
                    })
                });
                match used_radicand(entries) {
                    0 => ScalarKind::Rational,
                    d => ScalarKind::Quad(d),
                }
            }
            AnyDecomposition::Float(_) => ScalarKind::Float,
        }
    }

    pub fn to_value(&self) -> Value {
        let terms: Value = match self {
            AnyDecomposition::Rational(d) => encode_terms(d.terms(), rational_to_value),
            AnyDecomposition::Quad(d) => {
                if self.scalar_kind() == ScalarKind::Rational {
                    let demoted = d.to_rational().expect("no radical part");
                    encode_terms(demoted.terms(), rational_to_value)
                } else {
                    encode_terms(d.terms(), quad_to_value)
                }
            }
            AnyDecomposition::Float(d) => encode_terms(d.terms(), complex_to_value),
        };
        json!({
            "n": self.n(),
            "provenance": self.label(),
            "scalar": self.scalar_kind().to_string(),
            "terms": terms,
        })
    }

    pub fn from_value(v: &Value) -> Result<Self, ArtifactError> {
        let obj = v
            .as_object()
            .ok_or_else(|| bad("decomposition must be a JSON object"))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("decomposition needs a positive integer field \"n\""))?
            as usize;
        let kind: ScalarKind = obj
            .get("scalar")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("decomposition needs a string field \"scalar\""))?
            .parse()?;
        let label = obj
            .get("provenance")
            .and_then(Value::as_str)
            .unwrap_or("imported")
            .to_string();
        let terms = obj
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("decomposition needs an array field \"terms\""))?;
        let side = terms
            .first()
            .and_then(|t| t.get("X"))
            .and_then(Value::as_array)
            .map(Vec::len)
            .ok_or_else(|| bad("decomposition needs at least one term with an X factor"))?;
        let embedding = embedding_for(n, side)?;
        Ok(match kind {
            ScalarKind::Rational => AnyDecomposition::Rational(
                build_decomposition(terms, side, embedding, label, &rational_from_value)?,
            ),
            ScalarKind::Quad(_) => AnyDecomposition::Quad(build_decomposition(
                terms,
                side,
                embedding,
                label,
                &quad_from_value,
            )?),
            ScalarKind::Float => AnyDecomposition::Float(build_decomposition(
                terms,
                side,
                embedding,
                label,
                &complex_from_value,
            )?),
        })
    }
}

fn encode_terms<S: Scalar>(terms: &[RankOneTerm<S>], enc: impl Fn(&S) -> Value) -> Value {
    Value::Array(
        terms
            .iter()
            .map(|t| {
                json!({
                    "X": matrix_to_value(&t.x, &enc),
                    "Y": matrix_to_value(&t.y, &enc),
                    "Z": matrix_to_value(&t.z, &enc),
                })
            })
            .collect(),
    )
}

fn build_decomposition<S: Scalar>(
    terms: &[Value],
    side: usize,
    embedding: Embedding,
    label: String,
    dec: &impl Fn(&Value) -> Result<S, ArtifactError>,
) -> Result<Decomposition<S>, ArtifactError> {
    let mut out = Vec::with_capacity(terms.len());
    for term in terms {
        let factor = |name: &str| {
            term.get(name)
                .ok_or_else(|| bad(format!("term missing factor {name:?}")))
                .and_then(|m| matrix_from_value(m, dec))
        };
        out.push(RankOneTerm {
            x: factor("X")?,
            y: factor("Y")?,
            z: factor("Z")?,
        });
    }
    Decomposition::new(out, side, embedding, label).map_err(|e| bad(format!("{e}")))
}

/// Serializes an artifact value in the canonical on-disk form.
pub fn to_file_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("artifact values are finite");
    s.push('\n');
    s
}
