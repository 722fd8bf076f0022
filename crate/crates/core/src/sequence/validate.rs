use crate::poly::Rational;

use super::affine::AffineSystem;
use super::orbit::OrbitTable;
use super::SequenceError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub n: usize,
    pub label: String,
    pub exact: Rational,
    pub affine: Rational,
}

#[derive(Debug, Clone)]
pub struct CrossReport {
    pub labels: Vec<String>,
    /// Rows computed by the exact engine.
    pub exact_rows: usize,
    /// Affine states `0..=n_fast`, started from the exact row 0.
    pub affine: Vec<Vec<Rational>>,
    /// Disagreements on the overlap of both runs.
    pub mismatches: Vec<Mismatch>,
    /// Rows `n` where the system applied to exact row `n` misses exact row `n + 1`.
    pub step_failures: Vec<usize>,
    /// `d(n) - nu(n)` along the affine run for the chosen chart.
    pub alpha: Option<Vec<Rational>>,
}

impl CrossReport {
    pub fn agree(&self) -> bool {
        self.mismatches.is_empty() && self.step_failures.is_empty()
    }

    pub fn column(&self, label: &str) -> Option<Vec<Rational>> {
        let i = self.labels.iter().position(|l| l == label)?;
        Some(self.affine.iter().map(|s| s[i].clone()).collect())
    }

    /// Whether `alpha` takes a single value from row `from` on.
    pub fn alpha_constant_from(&self, from: usize) -> Option<Rational> {
        let a = self.alpha.as_ref()?;
        let first = a.get(from)?;
        a[from..].iter().all(|x| x == first).then(|| first.clone())
    }
}

/// Compares an exact orbit table against the affine engine run to `n_fast`.
pub fn cross_validate(
    table: &OrbitTable,
    sys: &AffineSystem,
    n_fast: usize,
    alpha_chart: Option<&str>,
) -> Result<CrossReport, SequenceError> {
    let n_exact = table.rows.len();
    if n_exact == 0 {
        return Err(SequenceError::MissingRow(0));
    }
    if n_exact - 1 > n_fast {
        return Err(SequenceError::Horizon {
            exact: n_exact - 1,
            fast: n_fast,
        });
    }
    let labels = sys.labels().to_vec();
    let initial = table.state(0, &labels)?;
    let affine = sys.run(&initial, n_fast)?;
    let mut mismatches = Vec::new();
    let mut step_failures = Vec::new();
    for n in 0..n_exact {
        let exact = table.state(n, &labels)?;
        for (i, l) in labels.iter().enumerate() {
            if exact[i] != affine[n][i] {
                mismatches.push(Mismatch {
                    n,
                    label: l.clone(),
                    exact: exact[i].clone(),
                    affine: affine[n][i].clone(),
                });
            }
        }
        if n + 1 < n_exact && sys.step(&exact)? != table.state(n + 1, &labels)? {
            step_failures.push(n);
        }
    }
    let alpha = match alpha_chart {
        Some(c) => {
            let d = sys
                .position("d")
                .ok_or_else(|| SequenceError::UnknownLabel("d".into()))?;
            let k = sys
                .position(c)
                .ok_or_else(|| SequenceError::UnknownLabel(c.into()))?;
            Some(affine.iter().map(|s| &s[d] - &s[k]).collect())
        }
        None => None,
    };
    Ok(CrossReport {
        labels,
        exact_rows: n_exact,
        affine,
        mismatches,
        step_failures,
        alpha,
    })
}
