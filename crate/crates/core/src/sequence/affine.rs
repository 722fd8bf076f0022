use num_traits::{One, Zero};

use crate::linalg::{self, Matrix};
use crate::poly::Rational;

use super::recurrence::LinearRecurrence;
use super::SequenceError;

/// `state(n+1) = matrix * state(n) + offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSystem {
    labels: Vec<String>,
    matrix: Matrix,
    offset: Vec<Rational>,
}

impl AffineSystem {
    pub fn new(labels: Vec<String>, matrix: Matrix, offset: Vec<Rational>) -> Result<Self, SequenceError> {
        let n = labels.len();
        let dim = |got: usize| SequenceError::Dimension { expected: n, got };
        if matrix.len() != n {
            return Err(dim(matrix.len()));
        }
        if let Some(r) = matrix.iter().find(|r| r.len() != n) {
            return Err(dim(r.len()));
        }
        if offset.len() != n {
            return Err(dim(offset.len()));
        }
        Ok(AffineSystem {
            labels,
            matrix,
            offset,
        })
    }

    pub fn from_ints(
        labels: Vec<String>,
        matrix: &[Vec<i64>],
        offset: &[i64],
    ) -> Result<Self, SequenceError> {
        let q = |x: &i64| Rational::from_integer((*x).into());
        Self::new(
            labels,
            matrix.iter().map(|r| r.iter().map(q).collect()).collect(),
            offset.iter().map(q).collect(),
        )
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn offset(&self) -> &[Rational] {
        &self.offset
    }

    pub fn dimension(&self) -> usize {
        self.labels.len()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn step(&self, state: &[Rational]) -> Result<Vec<Rational>, SequenceError> {
        if state.len() != self.dimension() {
            return Err(SequenceError::Dimension {
                expected: self.dimension(),
                got: state.len(),
            });
        }
        Ok(linalg::mat_vec(&self.matrix, state)
            .into_iter()
            .zip(&self.offset)
            .map(|(a, b)| a + b)
            .collect())
    }

    /// States `0..=nmax` starting from `initial`.
    pub fn run(&self, initial: &[Rational], nmax: usize) -> Result<Vec<Vec<Rational>>, SequenceError> {
        let mut out = Vec::with_capacity(nmax + 1);
        out.push(self.step(initial).map(|_| initial.to_vec())?);
        for _ in 0..nmax {
            let next = self.step(out.last().expect("nonempty"))?;
            out.push(next);
        }
        Ok(out)
    }

    /// Shortest recurrence satisfied by coordinate `component` for every
    /// initial state: the minimal annihilator of the row functional under the
    /// system augmented with a constant coordinate.
    pub fn universal_recurrence(&self, component: usize) -> Result<LinearRecurrence, SequenceError> {
        let n = self.dimension();
        if component >= n {
            return Err(SequenceError::Dimension {
                expected: n,
                got: component,
            });
        }
        let mut aug = vec![vec![Rational::zero(); n + 1]; n + 1];
        for i in 0..n {
            aug[i][..n].clone_from_slice(&self.matrix[i]);
            aug[i][n] = self.offset[i].clone();
        }
        aug[n][n] = Rational::one();
        let mut krylov: Vec<Vec<Rational>> = Vec::new();
        let mut row = vec![Rational::zero(); n + 1];
        row[component] = Rational::one();
        loop {
            if !krylov.is_empty() {
                // is the new row a combination of the earlier ones
                let cols: Matrix = (0..=n)
                    .map(|c| krylov.iter().map(|r| r[c].clone()).collect())
                    .collect();
                if let Some(a) = linalg::solve_any(&cols, &row, krylov.len()) {
                    let m = krylov.len();
                    let coefficients = (1..=m).map(|i| a[m - i].clone()).collect();
                    return Ok(LinearRecurrence::new(coefficients, m));
                }
            }
            let next: Vec<Rational> = (0..=n)
                .map(|c| (0..=n).fold(Rational::zero(), |acc, k| acc + &row[k] * &aug[k][c]))
                .collect();
            krylov.push(std::mem::replace(&mut row, next));
            if krylov.len() > n + 1 {
                unreachable!("Cayley-Hamilton bounds the Krylov length");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> Rational {
        Rational::from_integer(x.into())
    }

    #[test]
    fn zero_system() {
        let sys = AffineSystem::from_ints(vec!["a".into(), "b".into()], &[vec![0, 0], vec![0, 0]], &[0, 0])
            .unwrap();
        let run = sys.run(&[q(0), q(0)], 3).unwrap();
        assert!(run.iter().flatten().all(Zero::is_zero));
        assert!(sys.run(&[q(1)], 2).is_err());
    }

    #[test]
    fn counter_recurrence() {
        // d' = d + 1
        let sys = AffineSystem::from_ints(vec!["d".into()], &[vec![1]], &[1]).unwrap();
        let r = sys.universal_recurrence(0).unwrap();
        assert_eq!(r.integer_coefficients().unwrap(), vec![2, -1]);
        let run = sys.run(&[q(5)], 4).unwrap();
        assert_eq!(run[4], vec![q(9)]);
        assert!(AffineSystem::from_ints(vec!["d".into()], &[vec![1, 2]], &[0]).is_err());
    }
}
