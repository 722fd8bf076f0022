use std::fmt;

use num_traits::{One, Zero};

use crate::linalg;
use crate::poly::{Monomial, Polynomial, Rational};

/// `s(n) = p(n) + (-1)^n r(n)` for `n >= valid_from`; `r` is absent for a
/// plain polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedForm {
    pub polynomial: Polynomial,
    pub alternating: Option<Polynomial>,
    pub valid_from: usize,
    /// Number of terms checked beyond those that determine the fit.
    pub extra_terms: usize,
}

impl ClosedForm {
    pub fn value(&self, n: usize) -> Rational {
        let x = [Rational::from_integer(n.into())];
        let mut v = self.polynomial.evaluate(&x).expect("one variable");
        if let Some(r) = &self.alternating {
            let a = r.evaluate(&x).expect("one variable");
            if n.is_multiple_of(2) {
                v += a;
            } else {
                v -= a;
            }
        }
        v
    }

    pub fn is_quasi(&self) -> bool {
        self.alternating.is_some()
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["n".to_string()];
        write!(f, "{}", self.polynomial.display_with(&names))?;
        if let Some(r) = &self.alternating {
            write!(f, " + (-1)^n*({})", r.display_with(&names))?;
        }
        Ok(())
    }
}

const MAX_OFFSET: usize = 2;

/// Smallest polynomial, then period-2 quasi-polynomial, in `n` that matches
/// `seq` from some index `<= 2` on, with at least two terms to spare.
pub fn fit_closed_form(seq: &[Rational]) -> Option<ClosedForm> {
    if seq.len() < 6 {
        return None;
    }
    for unknowns in 1..=seq.len() {
        for offset in 0..=MAX_OFFSET {
            if let Some(cf) = try_fit(seq, offset, unknowns, 0) {
                return Some(cf);
            }
        }
        for alt in 1..unknowns {
            for offset in 0..=MAX_OFFSET {
                if let Some(cf) = try_fit(seq, offset, unknowns - alt, alt) {
                    return Some(cf);
                }
            }
        }
    }
    None
}

fn try_fit(seq: &[Rational], offset: usize, plain: usize, alt: usize) -> Option<ClosedForm> {
    let unknowns = plain + alt;
    if seq.len() < offset + unknowns + 2 {
        return None;
    }
    let rows: Vec<Vec<Rational>> = (offset..seq.len())
        .map(|n| {
            let x = Rational::from_integer(n.into());
            let sign = if n % 2 == 0 {
                Rational::one()
            } else {
                -Rational::one()
            };
            let mut row = Vec::with_capacity(unknowns);
            let mut p = Rational::one();
            for _ in 0..plain {
                row.push(p.clone());
                p *= &x;
            }
            let mut p = sign;
            for _ in 0..alt {
                row.push(p.clone());
                p *= &x;
            }
            row
        })
        .collect();
    let sol = linalg::solve(&rows, &seq[offset..])?;
    let poly = |cs: &[Rational]| {
        Polynomial::from_terms(
            1,
            cs.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (Monomial::new(&[k as u32]).expect("one variable"), c.clone())),
        )
    };
    let alternating = (alt > 0).then(|| poly(&sol[plain..]));
    if alternating.as_ref().is_some_and(Polynomial::is_zero) {
        return None;
    }
    Some(ClosedForm {
        polynomial: poly(&sol[..plain]),
        alternating,
        valid_from: offset,
        extra_terms: seq.len() - offset - unknowns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: impl IntoIterator<Item = i64>) -> Vec<Rational> {
        v.into_iter().map(|x| Rational::from_integer(x.into())).collect()
    }

    #[test]
    fn polynomial_fits() {
        let cf = fit_closed_form(&ints((0..8).map(|n| 2 * n * n + 1))).unwrap();
        assert_eq!(cf.to_string(), "2*n^2 + 1");
        assert_eq!(cf.valid_from, 0);
        let cf = fit_closed_form(&ints([7; 6])).unwrap();
        assert_eq!(cf.to_string(), "7");
    }

    #[test]
    fn late_start() {
        let mut v: Vec<i64> = (0..9).map(|n| n * n - n + 2).collect();
        v[0] = 1;
        let cf = fit_closed_form(&ints(v)).unwrap();
        assert_eq!(cf.to_string(), "n^2 - n + 2");
        assert_eq!(cf.valid_from, 1);
    }

    #[test]
    fn quasi_polynomial() {
        let v: Vec<i64> = (0..10).map(|n| n * n + if n % 2 == 0 { 3 } else { -3 }).collect();
        let cf = fit_closed_form(&ints(v.clone())).unwrap();
        assert!(cf.is_quasi());
        for (n, x) in v.iter().enumerate() {
            assert_eq!(cf.value(n), Rational::from_integer((*x).into()));
        }
        assert!(fit_closed_form(&ints([1, 2, 4, 8, 16, 32, 64, 128])).is_none());
    }
}
