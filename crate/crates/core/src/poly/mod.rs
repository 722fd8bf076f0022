//! Exact sparse multivariate polynomials over the rationals.
//!
//! A polynomial is stored as integer numerators over one shared positive
//! denominator, with `gcd(denominator, numerators) = 1` and terms sorted in
//! descending graded-lex order. That makes the representation canonical, so
//! structural equality is polynomial equality, while the hot loops
//! (products, substitution, division) run on plain big integers.

mod divide;
mod jacobian;
mod linear;
mod monomial;
mod parse;
mod subst;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;

pub use jacobian::jacobian_determinant;
pub use monomial::{Monomial, MAX_VARS};
pub use parse::{parse_polynomial, ParseContext};

/// Coefficient field.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },
    #[error("expected {expected} substitution images, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("trial division by a constant is meaningless")]
    ConstantDivisor,
    #[error("valuation of the zero polynomial is undefined")]
    ZeroValuation,
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("at most {MAX_VARS} variables are supported, got {0}")]
    TooManyVariables(usize),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("homogeneous polynomial has degree {actual}, declared {declared}")]
    DegreeMismatch { declared: u32, actual: u32 },
    #[error("jacobian needs a square system, got {rows} polynomials in {cols} variables")]
    NotSquare { rows: usize, cols: usize },
    #[error("term limit exceeded: {terms} > {limit}")]
    TermLimit { terms: usize, limit: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Sparse polynomial in `nvars` variables with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    den: BigInt,
    terms: Vec<(Monomial, BigInt)>,
}

/// Integer numerators over a denominator, not necessarily sorted or reduced.
/// Used by the arithmetic kernels before canonicalization.
#[derive(Clone, Debug)]
pub(crate) struct Raw {
    pub den: BigInt,
    pub terms: Vec<(Monomial, BigInt)>,
}

impl Raw {
    pub fn zero() -> Self {
        Raw {
            den: BigInt::one(),
            terms: Vec::new(),
        }
    }

    pub fn constant(c: BigInt) -> Self {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(Monomial::ONE, c)]
        };
        Raw {
            den: BigInt::one(),
            terms,
        }
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == Monomial::ONE && self.terms[0].1 == self.den
    }

    /// `self * other + addend`, dropping every monomial whose exponent of
    /// `trunc.0` reaches `trunc.1`.
    pub fn mul_add(&self, other: &Raw, addend: Raw, trunc: Option<(usize, u32)>) -> Raw {
        let den_prod = &self.den * &other.den;
        let den = den_prod.lcm(&addend.den);
        let prod_scale = &den / &den_prod;
        let add_scale = &den / &addend.den;
        let mut map: FxHashMap<Monomial, BigInt> = FxHashMap::default();
        map.reserve(self.terms.len() * other.terms.len().min(8) + addend.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((var, bound)) = trunc {
                    if ma.exponent(var) + mb.exponent(var) >= bound {
                        continue;
                    }
                }
                let m = ma.mul(mb);
                let c = ca * cb;
                match map.entry(m) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += c,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        if !prod_scale.is_one() {
            for c in map.values_mut() {
                *c *= &prod_scale;
            }
        }
        for (m, c) in addend.terms {
            if let Some((var, bound)) = trunc {
                if m.exponent(var) >= bound {
                    continue;
                }
            }
            let c = if add_scale.is_one() { c } else { c * &add_scale };
            *map.entry(m).or_insert_with(BigInt::zero) += c;
        }
        Raw {
            den,
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn mul(&self, other: &Raw, trunc: Option<(usize, u32)>) -> Raw {
        self.mul_add(other, Raw::zero(), trunc)
    }

    pub fn pow(&self, mut k: u32, trunc: Option<(usize, u32)>) -> Raw {
        let mut base = self.clone();
        let mut acc = Raw::constant(BigInt::one());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, trunc);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, trunc);
            }
        }
        acc
    }

    pub fn into_poly(self, nvars: usize) -> Polynomial {
        Polynomial::from_raw(nvars, self.den, self.terms)
    }
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            den: BigInt::one(),
            terms: Vec::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, Monomial::ONE, c)
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(BigInt::from(c)))
    }

    /// The coordinate function `x_index`.
    pub fn variable(nvars: usize, index: usize) -> Result<Self, PolyError> {
        if index >= nvars {
            return Err(PolyError::VariableOutOfRange { index, nvars });
        }
        Ok(Self::monomial(
            nvars,
            Monomial::var_power(index, 1)?,
            Rational::one(),
        ))
    }

    /// All coordinate functions `x_0, ..., x_{nvars-1}`.
    pub fn variables(nvars: usize) -> Vec<Self> {
        (0..nvars)
            .map(|i| Self::variable(nvars, i).expect("index in range"))
            .collect()
    }

    pub fn monomial(nvars: usize, m: Monomial, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero(nvars);
        }
        let (num, den) = c.into_raw();
        Polynomial {
            nvars,
            den,
            terms: vec![(m, num)],
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let terms: Vec<(Monomial, Rational)> = terms.into_iter().collect();
        let den = terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut map: FxHashMap<Monomial, BigInt> = FxHashMap::default();
        for (m, c) in terms {
            let scaled = c.numer() * (&den / c.denom());
            *map.entry(m).or_insert_with(BigInt::zero) += scaled;
        }
        Self::from_raw(nvars, den, map.into_iter().collect())
    }

    /// Canonicalizes integer numerators over `den`.
    pub(crate) fn from_raw(nvars: usize, mut den: BigInt, mut terms: Vec<(Monomial, BigInt)>) -> Self {
        terms.retain(|(_, c)| !c.is_zero());
        if terms.is_empty() {
            return Self::zero(nvars);
        }
        if den.is_negative() {
            den = -den;
            for (_, c) in terms.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        if !den.is_one() {
            let mut g = den.clone();
            for (_, c) in &terms {
                if g.is_one() {
                    break;
                }
                g = g.gcd(c);
            }
            if !g.is_one() {
                den /= &g;
                for (_, c) in terms.iter_mut() {
                    *c /= &g;
                }
            }
        }
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        Polynomial { nvars, den, terms }
    }

    pub(crate) fn to_raw(&self) -> Raw {
        Raw {
            den: self.den.clone(),
            terms: self.terms.clone(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.total_degree() == 0)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == Monomial::ONE && self.terms[0].1 == self.den
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Rational)> + '_ {
        self.terms
            .iter()
            .map(move |(m, c)| (*m, Rational::new(c.clone(), self.den.clone())))
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.terms.iter().map(|(m, _)| m)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map(|i| Rational::new(self.terms[i].1.clone(), self.den.clone()))
            .unwrap_or_else(|_| Rational::zero())
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::ONE)
    }

    pub fn leading_term(&self) -> Option<(Monomial, Rational)> {
        self.terms().next()
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.total_degree())
    }

    /// The common degree of all terms, if there is one. Zero yields `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.total_degree()?;
        self.terms.iter().all(|(m, _)| m.total_degree() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Largest exponent of `var` over all terms.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max().unwrap_or(0)
    }

    fn check_nvars(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VariableCountMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    fn check_var(&self, var: usize) -> Result<(), PolyError> {
        if var >= self.nvars {
            return Err(PolyError::VariableOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        Ok(())
    }

    fn linear_combination(&self, other: &Polynomial, sign: i32) -> Polynomial {
        let den = self.den.lcm(&other.den);
        let sa = &den / &self.den;
        let sb = &den / &other.den;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let scale_b = |c: &BigInt| if sign < 0 { -(c * &sb) } else { c * &sb };
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => y.0.cmp(&x.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push((a[i].0, &a[i].1 * &sa));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b[j].0, scale_b(&b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &a[i].1 * &sa + scale_b(&b[j].1);
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Self::from_raw(self.nvars, den, out)
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_nvars(other)?;
        Ok(self.linear_combination(other, 1))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_nvars(other)?;
        Ok(self.linear_combination(other, -1))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_nvars(other)?;
        Ok(self.to_raw().mul(&other.to_raw(), None).into_poly(self.nvars))
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(m, v)| (*m, v * c.numer())).collect();
        Self::from_raw(self.nvars, &self.den * c.denom(), terms)
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        self.to_raw().pow(k, None).into_poly(self.nvars)
    }

    /// Minimum exponent of `var` across all terms.
    pub fn u_valuation(&self, var: usize) -> Result<u32, PolyError> {
        self.check_var(var)?;
        self.terms
            .iter()
            .map(|(m, _)| m.exponent(var))
            .min()
            .ok_or(PolyError::ZeroValuation)
    }

    /// Splits `self = var^k * rest` with `k` the valuation and returns
    /// `(k, rest restricted to var = 0)`, the lowest-order coefficient in `var`.
    pub fn lowest_coefficient(&self, var: usize) -> Result<(u32, Polynomial), PolyError> {
        let k = self.u_valuation(var)?;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(var) == k)
            .map(|(m, c)| (m.without(var), c.clone()))
            .collect();
        Ok((k, Self::from_raw(self.nvars, self.den.clone(), terms)))
    }

    /// Greatest monomial dividing every term (the monomial content).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter().map(|(m, _)| *m);
        match it.next() {
            None => Monomial::ONE,
            Some(first) => it.fold(first, |g, m| g.gcd(&m)),
        }
    }

    /// Divides by a monomial that divides every term.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|(t, c)| t.checked_div(m).map(|q| (q, c.clone())))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::from_raw(self.nvars, self.den.clone(), terms))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        let terms = self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect();
        Self::from_raw(self.nvars, self.den.clone(), terms)
    }

    pub fn derivative(&self, var: usize) -> Result<Polynomial, PolyError> {
        self.check_var(var)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e > 0 {
                terms.push((m.with_exponent(var, e - 1)?, c * BigInt::from(e)));
            }
        }
        Ok(Self::from_raw(self.nvars, self.den.clone(), terms))
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::LengthMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (m, c) in self.terms() {
            let mut v = c;
            for (i, x) in point.iter().enumerate() {
                let e = m.exponent(i);
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Sets variable `var` to the constant `value`, keeping the variable count.
    pub fn specialize(&self, var: usize, value: &Rational) -> Result<Polynomial, PolyError> {
        self.check_var(var)?;
        let mut images = Self::variables(self.nvars);
        images[var] = Self::constant(self.nvars, value.clone());
        self.substitute(&images)
    }

    /// The same polynomial viewed in a ring with `nvars` variables. Fails if a
    /// dropped variable actually occurs.
    pub fn with_nvars(&self, nvars: usize) -> Result<Polynomial, PolyError> {
        if nvars > MAX_VARS {
            return Err(PolyError::TooManyVariables(nvars));
        }
        for (m, _) in &self.terms {
            if (nvars..self.nvars).any(|i| m.exponent(i) > 0) {
                return Err(PolyError::VariableOutOfRange { index: nvars, nvars });
            }
        }
        Ok(Polynomial {
            nvars,
            den: self.den.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Multiplies by the smallest positive rational making all coefficients
    /// coprime integers with a positive leading coefficient.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.terms.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c));
        let sign = if self.terms[0].1.is_negative() { -1 } else { 1 };
        let terms = self.terms.iter().map(|(m, c)| (*m, c / &g * sign)).collect();
        Polynomial {
            nvars: self.nvars,
            den: BigInt::one(),
            terms,
        }
    }

    /// Renders with the given variable names.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }

    /// Canonical text form with the given variable names.
    pub fn to_string_with(&self, names: &[String]) -> String {
        self.display_with(names).to_string()
    }
}

/// Default variable names `x0, x1, ...`.
pub fn default_names(nvars: usize) -> Vec<String> {
    (0..nvars).map(|i| format!("x{i}")).collect()
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.poly.terms().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.total_degree() == 0 {
                factors.push(abs.to_string());
            }
            for v in 0..self.poly.nvars {
                let e = m.exponent(v);
                let name = self.names.get(v).cloned().unwrap_or_else(|| format!("x{v}"));
                match e {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars);
        write!(f, "{}", self.display_with(&names))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.nvars, self)
    }
}

// Operator sugar. These panic on a variable-count mismatch; the `try_*`
// methods report it instead.
impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            den: self.den.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// A polynomial all of whose terms share one declared total degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomogeneousPolynomial {
    inner: Polynomial,
    degree: u32,
}

impl HomogeneousPolynomial {
    /// Checks homogeneity; the degree is read off the terms.
    pub fn new(inner: Polynomial) -> Result<Self, PolyError> {
        if inner.is_zero() {
            return Ok(HomogeneousPolynomial { inner, degree: 0 });
        }
        let degree = inner.homogeneous_degree().ok_or(PolyError::NotHomogeneous)?;
        Ok(HomogeneousPolynomial { inner, degree })
    }

    /// Checks homogeneity against a declared degree (zero may carry any degree).
    pub fn with_degree(inner: Polynomial, degree: u32) -> Result<Self, PolyError> {
        if !inner.is_zero() {
            let actual = inner.homogeneous_degree().ok_or(PolyError::NotHomogeneous)?;
            if actual != degree {
                return Err(PolyError::DegreeMismatch {
                    declared: degree,
                    actual,
                });
            }
        }
        Ok(HomogeneousPolynomial { inner, degree })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &Polynomial {
        &self.inner
    }

    pub fn into_poly(self) -> Polynomial {
        self.inner
    }

    pub fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }
}

impl std::ops::Deref for HomogeneousPolynomial {
    type Target = Polynomial;
    fn deref(&self) -> &Polynomial {
        &self.inner
    }
}

impl fmt::Debug for HomogeneousPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Homogeneous[deg {}]({})", self.degree, self.inner)
    }
}

impl fmt::Display for HomogeneousPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.inner, f)
    }
}

/// Parses a rational literal such as `-3`, `7/2`.
pub fn rational(s: &str) -> Result<Rational, PolyError> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim().parse::<BigInt>().map_err(|e| PolyError::Parse {
            pos: 0,
            msg: format!("bad rational {s:?}: {e}"),
        })
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(PolyError::Parse {
                    pos: 0,
                    msg: "zero denominator".into(),
                });
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        ["x", "y", "z", "w"].iter().map(|s| s.to_string()).collect()
    }

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, &ParseContext::new(&names())).unwrap()
    }

    #[test]
    fn addition_examples() {
        assert_eq!(&p("x + y") + &p("x - y"), p("2*x"));
        assert_eq!(&p("x^2 + 3*z") + &Polynomial::zero(4), p("x^2 + 3*z"));
        assert_eq!((&p("x^2") + &p("x*y")).to_string_with(&names()), "x^2 + x*y");
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(&p("x + y") * &p("x - y"), p("x^2 - y^2"));
        assert_eq!(&p("3/2*x*z - w") * &Polynomial::one(4), p("3/2*x*z - w"));
        assert_eq!(
            p("y + z - w").pow(2).to_string_with(&names()),
            "y^2 + 2*y*z - 2*y*w + z^2 - 2*z*w + w^2"
        );
    }

    #[test]
    fn mismatched_variable_counts_are_errors() {
        let a = Polynomial::variable(3, 0).unwrap();
        let b = Polynomial::variable(4, 0).unwrap();
        assert!(matches!(
            a.try_add(&b),
            Err(PolyError::VariableCountMismatch { .. })
        ));
        assert!(matches!(
            a.try_mul(&b),
            Err(PolyError::VariableCountMismatch { .. })
        ));
    }

    #[test]
    fn canonical_form_with_fractions() {
        let a = p("1/2*x + 1/3*y");
        let b = p("1/6*x");
        let s = &a + &b;
        assert_eq!(s, p("2/3*x + 1/3*y"));
        assert_eq!(&s - &s, Polynomial::zero(4));
        assert_eq!(p("2/4*x").to_string_with(&names()), "1/2*x");
    }

    #[test]
    fn valuation_and_zero() {
        let names3: Vec<String> = ["u", "v", "w"].iter().map(|s| s.to_string()).collect();
        let ctx = ParseContext::new(&names3);
        let q = parse_polynomial("u^2*v + u^3", &ctx).unwrap();
        assert_eq!(q.u_valuation(0).unwrap(), 2);
        assert_eq!(
            parse_polynomial("v + w", &ctx).unwrap().u_valuation(0).unwrap(),
            0
        );
        assert_eq!(Polynomial::zero(3).u_valuation(0), Err(PolyError::ZeroValuation));
    }

    #[test]
    fn homogeneous_checks() {
        assert!(HomogeneousPolynomial::new(p("x*y + z^2")).is_ok());
        assert_eq!(
            HomogeneousPolynomial::new(p("x*y + z")),
            Err(PolyError::NotHomogeneous)
        );
        let z = HomogeneousPolynomial::with_degree(Polynomial::zero(4), 5).unwrap();
        assert_eq!(z.degree(), 5);
    }

    #[test]
    fn derivative_and_evaluation() {
        let q = p("x^3*y - 2*y*w + 5");
        assert_eq!(q.derivative(0).unwrap(), p("3*x^2*y"));
        assert_eq!(q.derivative(1).unwrap(), p("x^3 - 2*w"));
        let pt: Vec<Rational> = [1, 2, 3, 4]
            .iter()
            .map(|&v| Rational::from_integer(v.into()))
            .collect();
        assert_eq!(
            q.evaluate(&pt).unwrap(),
            Rational::from_integer((2 - 16 + 5).into())
        );
    }

    #[test]
    fn primitive_part() {
        assert_eq!(p("-4/3*x + 2/3*y").primitive(), p("2*x - y"));
    }
}
