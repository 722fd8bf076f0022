use num_bigint::BigInt;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use super::{Monomial, PolyError, Polynomial, Rational};

/// Elementary substitutions; a linear change of variables factors into these.
#[derive(Debug, Clone)]
enum Elementary {
    Swap(usize, usize),
    /// `x_i -> r x_i`
    Scale(usize, Rational),
    /// `x_i -> x_i + r x_j`
    Shear(usize, usize, Rational),
}

/// Writes `m` as a product `E_1 E_2 ... E_t` of elementary matrices, or `None`
/// when it is singular.
fn factor(m: &[Vec<Rational>]) -> Option<Vec<Elementary>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    // row operations R_k with R_t ... R_1 m = I; the factors are their inverses
    let mut ops = Vec::new();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        if piv != col {
            a.swap(piv, col);
            ops.push(Elementary::Swap(piv, col));
        }
        let lead = a[col][col].clone();
        if !lead.is_one() {
            for x in a[col].iter_mut() {
                *x = &*x / &lead;
            }
            ops.push(Elementary::Scale(col, lead));
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let c = a[r][col].clone();
            for k in 0..n {
                let sub = &c * &a[col][k];
                a[r][k] -= sub;
            }
            // row_r -= c row_col, inverted: x_r -> x_r + c x_col
            ops.push(Elementary::Shear(r, col, c));
        }
    }
    Some(ops)
}

fn apply(p: &Polynomial, op: &Elementary) -> Result<Polynomial, PolyError> {
    match op {
        Elementary::Swap(i, j) => {
            let terms = p
                .terms
                .iter()
                .map(|(m, c)| {
                    let (ei, ej) = (m.exponent(*i), m.exponent(*j));
                    Ok((m.with_exponent(*i, ej)?.with_exponent(*j, ei)?, c.clone()))
                })
                .collect::<Result<_, PolyError>>()?;
            Ok(Polynomial::from_raw(p.nvars, p.den.clone(), terms))
        }
        Elementary::Scale(i, r) => {
            let top = p.degree_in(*i) as usize;
            let (num, den) = (r.numer(), r.denom());
            let np = powers(num, top);
            let dp = powers(den, top);
            let terms = p
                .terms
                .iter()
                .map(|(m, c)| {
                    let e = m.exponent(*i) as usize;
                    (*m, c * &np[e] * &dp[top - e])
                })
                .collect();
            Ok(Polynomial::from_raw(p.nvars, &p.den * &dp[top], terms))
        }
        Elementary::Shear(i, j, r) => {
            let top = p.degree_in(*i) as usize;
            let (num, den) = (r.numer(), r.denom());
            let np = powers(num, top);
            let dp = powers(den, top);
            let binom = binomials(top);
            let mut out: FxHashMap<Monomial, BigInt> = FxHashMap::default();
            out.reserve(p.terms.len() * 2);
            for (m, c) in &p.terms {
                let e = m.exponent(*i) as usize;
                let ej = m.exponent(*j);
                for k in 0..=e {
                    let mk = m
                        .with_exponent(*i, (e - k) as u32)?
                        .with_exponent(*j, ej + k as u32)?;
                    let coef = c * &binom[e][k] * &np[k] * &dp[top - k];
                    *out.entry(mk).or_insert_with(BigInt::zero) += coef;
                }
            }
            Ok(Polynomial::from_raw(
                p.nvars,
                &p.den * &dp[top],
                out.into_iter().collect(),
            ))
        }
    }
}

fn powers(b: &BigInt, top: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(top + 1);
    out.push(BigInt::one());
    for k in 0..top {
        let next = &out[k] * b;
        out.push(next);
    }
    out
}

fn binomials(top: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for n in 1..=top {
        let prev = &rows[n - 1];
        let mut row = vec![BigInt::one(); n + 1];
        for k in 1..n {
            row[k] = &prev[k - 1] + &prev[k];
        }
        rows.push(row);
    }
    rows
}

impl Polynomial {
    /// `self(M x)`, i.e. `x_i -> sum_j M[i][j] x_j`, for an invertible square `M`.
    /// Runs as a chain of shears, which is far cheaper than expanding powers of
    /// dense linear forms. Singular matrices go through general substitution.
    pub fn linear_substitute(&self, m: &[Vec<Rational>]) -> Result<Polynomial, PolyError> {
        let n = self.nvars;
        if m.len() != n {
            return Err(PolyError::LengthMismatch {
                expected: n,
                got: m.len(),
            });
        }
        if let Some(row) = m.iter().find(|r| r.len() != n) {
            return Err(PolyError::VariableCountMismatch {
                left: n,
                right: row.len(),
            });
        }
        match factor(m) {
            Some(ops) => ops.iter().try_fold(self.clone(), |acc, op| apply(&acc, op)),
            None => {
                let images: Vec<Polynomial> = m.iter().map(|r| linear_form(n, r)).collect();
                self.substitute_horner(&images, None, None)
            }
        }
    }
}

/// The linear form `sum_j row[j] x_j`.
pub(crate) fn linear_form(n: usize, row: &[Rational]) -> Polynomial {
    Polynomial::from_terms(
        n,
        row.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (Monomial::var_power(j, 1).expect("few variables"), c.clone())),
    )
}

/// Matrix of `images` when they are linear forms in as many variables as there are images.
pub(crate) fn as_linear(images: &[Polynomial]) -> Option<Vec<Vec<Rational>>> {
    let n = images.len();
    if images.iter().any(|p| p.nvars != n) {
        return None;
    }
    let mut rows = Vec::with_capacity(n);
    for p in images {
        if p.terms.iter().any(|(m, _)| m.total_degree() != 1) {
            return None;
        }
        let mut row = vec![Rational::zero(); n];
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = p.coefficient(&Monomial::var_power(j, 1).ok()?);
        }
        rows.push(row);
    }
    Some(rows)
}

#[cfg(test)]
mod tests {
    use super::super::{parse_polynomial, ParseContext};
    use super::*;

    fn names() -> Vec<String> {
        ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect()
    }

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, &ParseContext::new(&names())).unwrap()
    }

    fn q(s: &str) -> Rational {
        super::super::rational(s).unwrap()
    }

    #[test]
    fn shears_match_horner() {
        let m = vec![
            vec![q("-1"), q("2"), q("1"), q("2")],
            vec![q("2"), q("-1"), q("2"), q("1")],
            vec![q("1"), q("2"), q("-1"), q("2")],
            vec![q("2"), q("1"), q("2"), q("-1")],
        ];
        let f = p("a^3*b - 7*c*d^2 + 3/5*a*b*c*d + d^4 - 2*b^2");
        let images: Vec<Polynomial> = m.iter().map(|r| linear_form(4, r)).collect();
        let slow = f.substitute_horner(&images, None, None).unwrap();
        assert_eq!(f.linear_substitute(&m).unwrap(), slow);
        assert_eq!(as_linear(&images), Some(m));
    }

    #[test]
    fn needs_pivoting_and_fractions() {
        let m = vec![
            vec![q("0"), q("1/2"), q("0"), q("0")],
            vec![q("3"), q("0"), q("0"), q("1")],
            vec![q("0"), q("0"), q("0"), q("-2/3")],
            vec![q("0"), q("0"), q("5"), q("1")],
        ];
        let f = p("a^2*b*c + b*d^3 - c^4 + a*b*c*d");
        let images: Vec<Polynomial> = m.iter().map(|r| linear_form(4, r)).collect();
        let slow = f.substitute_horner(&images, None, None).unwrap();
        assert_eq!(f.linear_substitute(&m).unwrap(), slow);
    }

    #[test]
    fn singular_falls_back() {
        let m = vec![
            vec![q("1"), q("1"), q("0"), q("0")],
            vec![q("1"), q("1"), q("0"), q("0")],
            vec![q("0"), q("0"), q("1"), q("0")],
            vec![q("0"), q("0"), q("0"), q("1")],
        ];
        let f = p("a*b - c*d");
        assert_eq!(f.linear_substitute(&m).unwrap(), p("a^2 + 2*a*b + b^2 - c*d"));
    }
}
