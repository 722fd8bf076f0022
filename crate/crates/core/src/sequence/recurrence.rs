use num_traits::{One, Zero};

use crate::linalg;
use crate::poly::{Polynomial, Rational};

use super::SequenceError;

/// `s(n) = c_1 s(n-1) + ... + c_k s(n-k)` for every `n >= valid_from`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRecurrence {
    pub coefficients: Vec<Rational>,
    pub valid_from: usize,
}

/// Multiplicities of the roots `0`, `1` and `-1` of a characteristic
/// polynomial, and the cofactor left after removing them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootProfile {
    pub zero: u32,
    pub one: u32,
    pub minus_one: u32,
    pub rest: Polynomial,
}

impl LinearRecurrence {
    pub fn new(coefficients: Vec<Rational>, valid_from: usize) -> Self {
        LinearRecurrence {
            coefficients,
            valid_from,
        }
    }

    pub fn from_ints(coefficients: &[i64], valid_from: usize) -> Self {
        Self::new(
            coefficients
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
            valid_from,
        )
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    /// Drops trailing zero coefficients; the order falls, the starting index stays.
    pub fn trimmed(&self) -> LinearRecurrence {
        let mut c = self.coefficients.clone();
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        LinearRecurrence::new(c, self.valid_from)
    }

    /// Coefficients as integers, when they all are.
    pub fn integer_coefficients(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.coefficients
            .iter()
            .map(|c| {
                if c.is_integer() {
                    c.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect()
    }

    /// `x^k - c_1 x^(k-1) - ... - c_k` in one variable.
    pub fn characteristic_polynomial(&self) -> Polynomial {
        let k = self.order();
        let x = Polynomial::variable(1, 0).expect("one variable");
        let mut p = x.pow(k as u32);
        for (j, c) in self.coefficients.iter().enumerate() {
            p = &p - &x.pow((k - 1 - j) as u32).scale(c);
        }
        p
    }

    pub fn root_profile(&self) -> RootProfile {
        let mut rest = self.characteristic_polynomial();
        let x = Polynomial::variable(1, 0).expect("one variable");
        let one = Polynomial::one(1);
        let mut strip = |d: &Polynomial| {
            let mut m = 0;
            while !rest.is_constant() {
                match rest.exact_div(d).expect("nonzero divisor") {
                    Some(q) => {
                        rest = q;
                        m += 1;
                    }
                    None => break,
                }
            }
            m
        };
        let zero = strip(&x);
        let one_m = strip(&(&x - &one));
        let minus_one = strip(&(&x + &one));
        RootProfile {
            zero,
            one: one_m,
            minus_one,
            rest,
        }
    }

    /// Whether the recurrence reproduces every term of `seq` from `valid_from` on.
    pub fn check(&self, seq: &[Rational]) -> bool {
        self.first_failure(seq).is_none()
    }

    pub fn first_failure(&self, seq: &[Rational]) -> Option<usize> {
        let k = self.order();
        (self.valid_from.max(k)..seq.len()).find(|&n| self.predict(seq, n) != seq[n])
    }

    fn predict(&self, seq: &[Rational], n: usize) -> Rational {
        self.coefficients
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (j, c)| acc + c * &seq[n - 1 - j])
    }

    /// Continues `seq` to `len` terms.
    pub fn extend(&self, seq: &[Rational], len: usize) -> Vec<Rational> {
        let mut out = seq.to_vec();
        while out.len() < len {
            let n = out.len();
            let next = self.predict(&out, n);
            out.push(next);
        }
        out
    }

    pub fn coefficient_strings(&self) -> Vec<String> {
        self.coefficients.iter().map(ToString::to_string).collect()
    }
}

/// Minimal linear recurrence of `seq` by Berlekamp-Massey over Q, valid from
/// index `order`. Requires `len >= 2 * max_order + 2` so that at least two
/// terms past the determining ones confirm the fit.
pub fn fit_recurrence(seq: &[Rational], max_order: usize) -> Result<LinearRecurrence, SequenceError> {
    let need = 2 * max_order + 2;
    if seq.len() < need {
        return Err(SequenceError::TooShort { need, got: seq.len() });
    }
    let rec = berlekamp_massey(seq);
    if rec.order() > max_order {
        return Err(SequenceError::NoRecurrence { max_order });
    }
    debug_assert!(rec.check(seq));
    Ok(rec)
}

pub fn berlekamp_massey(seq: &[Rational]) -> LinearRecurrence {
    let mut c = vec![Rational::one()];
    let mut b = vec![Rational::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = Rational::one();
    for n in 0..seq.len() {
        let mut d = seq[n].clone();
        for i in 1..=l.min(c.len() - 1) {
            d += &c[i] * &seq[n - i];
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = &d / &bd;
        let prev = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, Rational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + m] -= &coef * bi;
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            bd = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.resize(l + 1, Rational::zero());
    LinearRecurrence::new(c[1..].iter().map(|x| -x).collect(), l)
}

/// True when no recurrence of order `k`, valid from index `k`, fits `seq`.
pub fn order_contradicted(seq: &[Rational], k: usize) -> bool {
    if seq.len() <= k {
        return false;
    }
    let rows: Vec<Vec<Rational>> = (k..seq.len())
        .map(|n| (1..=k).map(|j| seq[n - j].clone()).collect())
        .collect();
    let rhs: Vec<Rational> = seq[k..].to_vec();
    if k == 0 {
        return rhs.iter().any(|x| !x.is_zero());
    }
    linalg::solve_any(&rows, &rhs, k).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(x.into())).collect()
    }

    #[test]
    fn fibonacci() {
        let s = ints(&[0, 1, 1, 2, 3, 5, 8, 13, 21, 34]);
        let r = fit_recurrence(&s, 3).unwrap();
        assert_eq!(r.integer_coefficients().unwrap(), vec![1, 1]);
        assert!(order_contradicted(&s, 1));
        assert!(!order_contradicted(&s, 2));
    }

    #[test]
    fn quadratic_from_the_start() {
        let s: Vec<Rational> = ints(&(0..10).map(|n| 2 * n * n + 1).collect::<Vec<_>>());
        let r = fit_recurrence(&s, 4).unwrap();
        assert_eq!(r.integer_coefficients().unwrap(), vec![3, -3, 1]);
        let p = r.root_profile();
        assert_eq!((p.zero, p.one, p.minus_one), (0, 3, 0));
        assert!(p.rest.is_one());
    }

    #[test]
    fn transient_first_term() {
        let mut v: Vec<i64> = (0..12).map(|n| n * n - n + 2).collect();
        v[0] = 1;
        let r = fit_recurrence(&ints(&v), 5).unwrap();
        assert_eq!(r.order(), 4);
        assert_eq!(r.integer_coefficients().unwrap(), vec![3, -3, 1, 0]);
        assert_eq!(r.trimmed().order(), 3);
        assert_eq!(r.root_profile().zero, 1);
    }

    #[test]
    fn errors() {
        let s = ints(&[1, 2, 3]);
        assert!(matches!(
            fit_recurrence(&s, 3),
            Err(SequenceError::TooShort { .. })
        ));
        let s = ints(&[1, 0, 0, 5, 0, 0, 0, 9, 1, 1, 2, 7]);
        assert!(matches!(
            fit_recurrence(&s, 2),
            Err(SequenceError::NoRecurrence { .. })
        ));
        let zero = ints(&[0; 6]);
        assert_eq!(fit_recurrence(&zero, 2).unwrap().order(), 0);
    }
}
