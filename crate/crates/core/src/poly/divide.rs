use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;

use super::{Monomial, PolyError, Polynomial, Rational};

type IntTerms = Vec<(Monomial, BigInt)>;

/// A primitive integer divisor prepared for repeated exact division.
struct Divisor {
    terms: IntTerms,
    /// `Some((v, c, rest))` when the divisor is `c*x_v + rest` with `rest` free of `x_v`.
    linear: Option<(usize, BigInt, IntTerms)>,
    degree: u32,
}

impl Divisor {
    fn new(d: &Polynomial) -> Self {
        let prim = d.primitive();
        let terms: IntTerms = prim.terms.clone();
        let degree = prim.total_degree().unwrap_or(0);
        let mut linear = None;
        for v in 0..d.nvars {
            let mut lead = None;
            let mut ok = true;
            let mut rest = Vec::new();
            for (m, c) in &terms {
                match m.exponent(v) {
                    0 => rest.push((*m, c.clone())),
                    1 if m.total_degree() == 1 && lead.is_none() => lead = Some(c.clone()),
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if let (true, Some(c)) = (ok, lead) {
                // prefer a unit leading coefficient
                let unit = c.abs().is_one();
                linear = Some((v, c, rest));
                if unit {
                    break;
                }
            }
        }
        Divisor {
            terms,
            linear,
            degree,
        }
    }

    fn divide(&self, p: &[(Monomial, BigInt)]) -> Option<IntTerms> {
        if p.is_empty() {
            return Some(Vec::new());
        }
        if self.terms.len() == 1 {
            let m = self.terms[0].0;
            return p
                .iter()
                .map(|(t, c)| t.checked_div(&m).map(|q| (q, c.clone())))
                .collect();
        }
        let top = p.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0);
        if top < self.degree {
            return None;
        }
        match &self.linear {
            Some((v, c, rest)) => synthetic_divide(p, *v, c, rest),
            None => generic_divide(p, &self.terms),
        }
    }
}

/// Divides by `c*x_v + rest` treating everything else as coefficients.
fn synthetic_divide(
    p: &[(Monomial, BigInt)],
    v: usize,
    c: &BigInt,
    rest: &[(Monomial, BigInt)],
) -> Option<IntTerms> {
    let mut by_power: BTreeMap<u32, FxHashMap<Monomial, BigInt>> = BTreeMap::new();
    for (m, coef) in p {
        by_power
            .entry(m.exponent(v))
            .or_default()
            .insert(m.without(v), coef.clone());
    }
    let top = *by_power.keys().next_back()?;
    if top == 0 {
        return None;
    }
    let unit = c.abs().is_one();
    let negate = c.is_negative();
    let mut out: IntTerms = Vec::new();
    let mut current = by_power.remove(&top).unwrap_or_default();
    for k in (1..=top).rev() {
        // q_{k-1} = current / c
        let mut q: Vec<(Monomial, BigInt)> = Vec::with_capacity(current.len());
        for (m, coef) in current {
            if coef.is_zero() {
                continue;
            }
            let val = if unit {
                if negate {
                    -coef
                } else {
                    coef
                }
            } else {
                let (quo, rem) = coef.div_rem(c);
                if !rem.is_zero() {
                    return None;
                }
                quo
            };
            q.push((m, val));
        }
        let mut next = by_power.remove(&(k - 1)).unwrap_or_default();
        next.reserve(q.len() * rest.len());
        for (m, coef) in &q {
            for (rm, rc) in rest {
                *next.entry(m.mul(rm)).or_insert_with(BigInt::zero) -= coef * rc;
            }
        }
        let vk = Monomial::var_power(v, k - 1).ok()?;
        out.extend(q.into_iter().map(|(m, coef)| (m.mul(&vk), coef)));
        current = next;
    }
    if current.values().any(|c| !c.is_zero()) {
        return None;
    }
    Some(out)
}

/// Leading-term division by an arbitrary primitive integer divisor.
fn generic_divide(p: &[(Monomial, BigInt)], d: &[(Monomial, BigInt)]) -> Option<IntTerms> {
    let (lm, lc) = d.iter().max_by(|a, b| a.0.cmp(&b.0))?;
    let mut rem: BTreeMap<Monomial, BigInt> = p.iter().cloned().collect();
    let mut out = Vec::new();
    while let Some((m, c)) = rem.pop_last() {
        if c.is_zero() {
            continue;
        }
        let qm = m.checked_div(lm)?;
        let (qc, r) = c.div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        for (dm, dc) in d {
            if dm == lm {
                continue;
            }
            let t = qm.mul(dm);
            let e = rem.entry(t).or_insert_with(BigInt::zero);
            *e -= &qc * dc;
            if e.is_zero() {
                rem.remove(&t);
            }
        }
        out.push((qm, qc));
    }
    Some(out)
}

impl Polynomial {
    fn check_divisor(&self, d: &Polynomial) -> Result<(), PolyError> {
        self.check_nvars(d)?;
        if d.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
        if d.is_constant() {
            return Err(PolyError::ConstantDivisor);
        }
        Ok(())
    }

    /// `self / d` when the division is exact, `None` otherwise.
    pub fn exact_div(&self, d: &Polynomial) -> Result<Option<Polynomial>, PolyError> {
        self.check_nvars(d)?;
        if d.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
        if d.is_constant() {
            let c = d.constant_term();
            return Ok(Some(self.scale(&(Rational::one() / c))));
        }
        let div = Divisor::new(d);
        let scale = prim_scale(d, &div);
        Ok(div
            .divide(&self.terms)
            .map(|q| Polynomial::from_raw(self.nvars, self.den.clone(), q).scale(&scale)))
    }

    /// Largest `k` with `d^k | self`, together with `self / d^k`.
    pub fn trial_divide(&self, d: &Polynomial) -> Result<(Polynomial, u32), PolyError> {
        self.check_divisor(d)?;
        if self.is_zero() {
            // every power divides zero; report no extractable factor
            return Ok((self.clone(), 0));
        }
        let div = Divisor::new(d);
        let mut current = self.terms.clone();
        let mut k = 0u32;
        while let Some(q) = div.divide(&current) {
            current = q;
            k += 1;
        }
        let scale = num_traits::pow(prim_scale(d, &div), k as usize);
        let q = Polynomial::from_raw(self.nvars, self.den.clone(), current).scale(&scale);
        Ok((q, k))
    }

    /// Divides out exactly `k` copies of `d`, failing if they are not there.
    pub fn divide_power(&self, d: &Polynomial, k: u32) -> Result<Option<Polynomial>, PolyError> {
        self.check_divisor(d)?;
        let div = Divisor::new(d);
        let mut current = self.terms.clone();
        for _ in 0..k {
            match div.divide(&current) {
                Some(q) => current = q,
                None => return Ok(None),
            }
        }
        let scale = num_traits::pow(prim_scale(d, &div), k as usize);
        Ok(Some(
            Polynomial::from_raw(self.nvars, self.den.clone(), current).scale(&scale),
        ))
    }

    /// Multiplicity of `d` in `self`.
    pub fn multiplicity(&self, d: &Polynomial) -> Result<u32, PolyError> {
        Ok(self.trial_divide(d)?.1)
    }
}

/// The rational `s` with `primitive(d) = s * d`.
fn prim_scale(d: &Polynomial, div: &Divisor) -> Rational {
    let lead = d.terms[0].1.clone();
    Rational::new(div.terms[0].1.clone() * &d.den, lead)
}

#[cfg(test)]
mod tests {
    use super::super::{parse_polynomial, ParseContext};
    use super::*;

    fn p(s: &str) -> Polynomial {
        let names: Vec<String> = ["x", "y", "z", "w"].iter().map(|s| s.to_string()).collect();
        parse_polynomial(s, &ParseContext::new(&names)).unwrap()
    }

    #[test]
    fn constructed_power() {
        let k = p("y + z - w");
        let (q, e) = (&k.pow(2) * &p("x")).trial_divide(&k).unwrap();
        assert_eq!((q, e), (p("x"), 2));
    }

    #[test]
    fn not_divisible() {
        let (q, e) = p("x^2 + y^2").trial_divide(&p("x + y")).unwrap();
        assert_eq!((q, e), (p("x^2 + y^2"), 0));
    }

    #[test]
    fn non_monic_and_rational_divisors() {
        let d = p("3*x - 2*y + z");
        let q0 = p("1/5*x^2*w - y*z + 4");
        let prod = &(&d * &d) * &q0;
        assert_eq!(prod.trial_divide(&d).unwrap(), (q0.clone(), 2));
        let half = d.scale(&Rational::new(1.into(), 2.into()));
        let (q, e) = prod.trial_divide(&half).unwrap();
        assert_eq!(e, 2);
        assert_eq!(&(&half * &half) * &q, prod);
    }

    #[test]
    fn generic_path() {
        let d = p("x^2 + y*z + w^2");
        let q0 = p("x*y - 3*z^2 + w");
        let prod = &d.pow(3) * &q0;
        assert_eq!(prod.trial_divide(&d).unwrap(), (q0, 3));
        assert_eq!(p("x^2 + y*z").trial_divide(&d).unwrap().1, 0);
    }

    #[test]
    fn monomial_divisor() {
        let (q, e) = p("x^3*y + 2*x^2*z").trial_divide(&p("2*x")).unwrap();
        assert_eq!(e, 2);
        assert_eq!(&p("4*x^2") * &q, p("x^3*y + 2*x^2*z"));
    }

    #[test]
    fn bad_divisors() {
        assert_eq!(
            p("x").trial_divide(&Polynomial::zero(4)),
            Err(PolyError::ZeroDivisor)
        );
        assert_eq!(p("x").trial_divide(&p("3")), Err(PolyError::ConstantDivisor));
    }
}
