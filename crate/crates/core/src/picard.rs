//! Divisor-class lattices with a pushforward action.

use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::linalg;
use crate::poly::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PicardError {
    #[error("classes belong to different lattices")]
    LatticeMismatch,
    #[error("matrix must be square of size {expected}, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("unknown basis label {0:?}")]
    UnknownLabel(String),
    #[error("cannot parse class expression {0:?}")]
    Parse(String),
    #[error("integer overflow in matrix power")]
    Overflow,
    #[error("column {column} ({label}) is {found}, transcription says {expected}")]
    Transcription {
        column: usize,
        label: String,
        expected: String,
        found: String,
    },
}

/// An integer vector over an ordered basis `{H, F_1, ..., F_k}`.
#[derive(Clone, PartialEq, Eq)]
pub struct DivisorClass {
    labels: Arc<Vec<String>>,
    coords: Vec<i64>,
}

impl DivisorClass {
    pub fn new(labels: Arc<Vec<String>>, coords: Vec<i64>) -> Result<Self, PicardError> {
        if coords.len() != labels.len() {
            return Err(PicardError::Shape {
                expected: labels.len(),
                got: coords.len(),
            });
        }
        Ok(DivisorClass { labels, coords })
    }

    pub fn zero(labels: Arc<Vec<String>>) -> Self {
        let n = labels.len();
        DivisorClass {
            labels,
            coords: vec![0; n],
        }
    }

    pub fn basis(labels: Arc<Vec<String>>, i: usize) -> Self {
        let mut c = Self::zero(labels);
        c.coords[i] = 1;
        c
    }

    /// Parses expressions like `2H - F1 - F3` or `F9 + F11`.
    pub fn parse(labels: Arc<Vec<String>>, src: &str) -> Result<Self, PicardError> {
        let mut coords = vec![0i64; labels.len()];
        let cleaned: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(PicardError::Parse(src.into()));
        }
        if cleaned == "0" {
            return Ok(DivisorClass { labels, coords });
        }
        let mut pieces = Vec::new();
        let mut current = String::new();
        for (i, ch) in cleaned.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 {
                pieces.push(std::mem::take(&mut current));
            }
            current.push(ch);
        }
        pieces.push(current);
        for piece in pieces {
            let (sign, body) = match piece.strip_prefix('-') {
                Some(b) => (-1, b),
                None => (1, piece.strip_prefix('+').unwrap_or(&piece)),
            };
            let split = body
                .find(|c: char| !c.is_ascii_digit())
                .ok_or_else(|| PicardError::Parse(src.into()))?;
            let (digits, label) = body.split_at(split);
            let label = label.strip_prefix('*').unwrap_or(label);
            let k: i64 = if digits.is_empty() {
                1
            } else {
                digits.parse().map_err(|_| PicardError::Parse(src.into()))?
            };
            let idx = labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| PicardError::UnknownLabel(label.into()))?;
            coords[idx] += sign * k;
        }
        Ok(DivisorClass { labels, coords })
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn labels(&self) -> &Arc<Vec<String>> {
        &self.labels
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: i64, other: &DivisorClass, b: i64) -> Result<DivisorClass, PicardError> {
        if self.labels != other.labels {
            return Err(PicardError::LatticeMismatch);
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(x, y)| {
                x.checked_mul(a)
                    .and_then(|p| y.checked_mul(b).and_then(|q| p.checked_add(q)))
                    .ok_or(PicardError::Overflow)
            })
            .collect::<Result<_, _>>()?;
        Ok(DivisorClass {
            labels: self.labels.clone(),
            coords,
        })
    }

    pub fn add(&self, other: &DivisorClass) -> Result<DivisorClass, PicardError> {
        self.combine(1, other, 1)
    }

    pub fn sub(&self, other: &DivisorClass) -> Result<DivisorClass, PicardError> {
        self.combine(1, other, -1)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, l) in self.coords.iter().zip(self.labels.iter()) {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { "-" } else { "+" };
            if first {
                if *c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            f.write_str(l)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DivisorClass({self})")
    }
}

/// Square integer matrix whose columns are the images of the basis classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushforwardMatrix {
    labels: Arc<Vec<String>>,
    matrix: Vec<Vec<i64>>,
}

impl PushforwardMatrix {
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<i64>>) -> Result<Self, PicardError> {
        let n = labels.len();
        if matrix.len() != n {
            return Err(PicardError::Shape {
                expected: n,
                got: matrix.len(),
            });
        }
        if let Some(r) = matrix.iter().find(|r| r.len() != n) {
            return Err(PicardError::Shape {
                expected: n,
                got: r.len(),
            });
        }
        Ok(PushforwardMatrix {
            labels: Arc::new(labels),
            matrix,
        })
    }

    /// Builds the matrix from the image of every basis class, in basis order.
    pub fn from_images(labels: Vec<String>, images: &[String]) -> Result<Self, PicardError> {
        let n = labels.len();
        if images.len() != n {
            return Err(PicardError::Shape {
                expected: n,
                got: images.len(),
            });
        }
        let labels = Arc::new(labels);
        let mut matrix = vec![vec![0i64; n]; n];
        for (j, img) in images.iter().enumerate() {
            let c = DivisorClass::parse(labels.clone(), img)?;
            for i in 0..n {
                matrix[i][j] = c.coords[i];
            }
        }
        Ok(PushforwardMatrix { labels, matrix })
    }

    pub fn identity(labels: Vec<String>) -> Self {
        let n = labels.len();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        PushforwardMatrix {
            labels: Arc::new(labels),
            matrix,
        }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &Arc<Vec<String>> {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn apply(&self, c: &DivisorClass) -> Result<DivisorClass, PicardError> {
        if c.labels != self.labels {
            return Err(PicardError::LatticeMismatch);
        }
        let coords = mat_vec_checked(&self.matrix, &c.coords)?;
        Ok(DivisorClass {
            labels: self.labels.clone(),
            coords,
        })
    }

    /// Image of basis class `i`.
    pub fn image(&self, i: usize) -> DivisorClass {
        DivisorClass {
            labels: self.labels.clone(),
            coords: self.matrix.iter().map(|r| r[i]).collect(),
        }
    }

    /// Checks every column against a transcribed image expression.
    pub fn check_transcription(&self, images: &[String]) -> Result<(), PicardError> {
        for (j, img) in images.iter().enumerate() {
            let expected = DivisorClass::parse(self.labels.clone(), img)?;
            let found = self.apply(&DivisorClass::basis(self.labels.clone(), j))?;
            if found != expected {
                return Err(PicardError::Transcription {
                    column: j,
                    label: self.labels[j].clone(),
                    expected: expected.to_string(),
                    found: found.to_string(),
                });
            }
        }
        Ok(())
    }

    /// `M^n` by repeated multiplication.
    pub fn power_naive(&self, n: u32) -> Result<Vec<Vec<i64>>, PicardError> {
        let mut acc = identity_i64(self.size());
        for _ in 0..n {
            acc = mat_mul_checked(&acc, &self.matrix)?;
        }
        Ok(acc)
    }

    /// `M^n` by binary exponentiation.
    pub fn power_binary(&self, mut n: u32) -> Result<Vec<Vec<i64>>, PicardError> {
        let mut acc = identity_i64(self.size());
        let mut base = self.matrix.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = mat_mul_checked(&acc, &base)?;
            }
            n >>= 1;
            if n > 0 {
                base = mat_mul_checked(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Basis of the rational kernel of `M - I`, scaled to primitive integer
    /// vectors.
    pub fn invariant_classes(&self) -> Vec<DivisorClass> {
        let n = self.size();
        let rows: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Rational::from_integer((self.matrix[i][j] - i64::from(i == j)).into()))
                    .collect()
            })
            .collect();
        linalg::kernel(&rows, n)
            .into_iter()
            .map(|v| DivisorClass {
                labels: self.labels.clone(),
                coords: v
                    .iter()
                    .map(|c| c.to_integer().to_i64().expect("small kernel entries"))
                    .collect(),
            })
            .collect()
    }

    /// Whether `c` is a rational combination of `basis`.
    pub fn in_span(basis: &[DivisorClass], c: &DivisorClass) -> bool {
        let n = c.coords.len();
        let to_rows = |v: &[DivisorClass]| -> Vec<Vec<Rational>> {
            v.iter()
                .map(|b| {
                    b.coords
                        .iter()
                        .map(|&x| Rational::from_integer(x.into()))
                        .collect()
                })
                .collect()
        };
        let mut with = basis.to_vec();
        with.push(c.clone());
        linalg::rank(&to_rows(basis), n) == linalg::rank(&to_rows(&with), n)
    }
}

/// Entry `(0, 0)` of `M^n` for `n = 0..=nmax`.
pub fn degrees_from_picard(m: &PushforwardMatrix, nmax: u32) -> Result<Vec<i64>, PicardError> {
    let mut out = Vec::with_capacity(nmax as usize + 1);
    let mut acc = identity_i64(m.size());
    for n in 0..=nmax {
        out.push(acc[0][0]);
        if n < nmax {
            acc = mat_mul_checked(&acc, &m.matrix)?;
        }
    }
    Ok(out)
}

fn identity_i64(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn mat_mul_checked(a: &[Vec<i64>], b: &[Vec<i64>]) -> Result<Vec<Vec<i64>>, PicardError> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                let t = aik.checked_mul(b[k][j]).ok_or(PicardError::Overflow)?;
                out[i][j] = out[i][j].checked_add(t).ok_or(PicardError::Overflow)?;
            }
        }
    }
    Ok(out)
}

fn mat_vec_checked(a: &[Vec<i64>], v: &[i64]) -> Result<Vec<i64>, PicardError> {
    a.iter()
        .map(|row| {
            row.iter().zip(v).try_fold(0i64, |acc, (x, y)| {
                x.checked_mul(*y)
                    .and_then(|t| acc.checked_add(t))
                    .ok_or(PicardError::Overflow)
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels() -> Vec<String> {
        ["H", "F1", "F2"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_and_display() {
        let l = Arc::new(labels());
        let c = DivisorClass::parse(l.clone(), "2H - F1 -F2").unwrap();
        assert_eq!(c.coords(), &[2, -1, -1]);
        assert_eq!(c.to_string(), "2H - F1 - F2");
        assert_eq!(
            DivisorClass::parse(l.clone(), "0").unwrap(),
            DivisorClass::zero(l.clone())
        );
        assert!(DivisorClass::parse(l, "H + G").is_err());
    }

    #[test]
    fn identity_matrix() {
        let m = PushforwardMatrix::identity(labels());
        assert_eq!(degrees_from_picard(&m, 4).unwrap(), vec![1; 5]);
        assert_eq!(m.invariant_classes().len(), 3);
    }

    #[test]
    fn lattice_mismatch() {
        let a = DivisorClass::zero(Arc::new(labels()));
        let b = DivisorClass::zero(Arc::new(vec!["H".into()]));
        assert_eq!(a.add(&b), Err(PicardError::LatticeMismatch));
        assert_eq!(a.add(&DivisorClass::zero(a.labels().clone())).unwrap(), a);
    }
}
