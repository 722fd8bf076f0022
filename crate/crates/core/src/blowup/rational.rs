use std::fmt;

use crate::poly::{PolyError, Polynomial, Rational};

/// Quotient of two polynomials, kept without gcd reduction. Equality is
/// decided by cross-multiplication.
#[derive(Clone)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Self {
        let mut r = RationalFunction { num, den };
        r.tidy();
        r
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let n = p.nvars();
        RationalFunction {
            num: p,
            den: Polynomial::one(n),
        }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(Polynomial::zero(nvars))
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(nvars, c))
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn has_zero_denominator(&self) -> bool {
        self.den.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Cancels monomial content and moves constant denominators into the numerator.
    fn tidy(&mut self) {
        if self.den.is_zero() {
            return;
        }
        if self.num.is_zero() {
            self.den = Polynomial::one(self.den.nvars());
            return;
        }
        let g = self.num.monomial_content().gcd(&self.den.monomial_content());
        if g.total_degree() > 0 {
            self.num = self.num.div_monomial(&g).expect("content divides");
            self.den = self.den.div_monomial(&g).expect("content divides");
        }
        if self.den.is_constant() {
            let c = self.den.constant_term();
            self.num = self.num.scale(&(Rational::from_integer(1.into()) / c));
            self.den = Polynomial::one(self.den.nvars());
        } else if let Some((_, lc)) = self.den.leading_term() {
            // monic denominators make printed forms stable
            let inv = Rational::from_integer(1.into()) / lc;
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(&self.num + &o.num, self.den.clone());
        }
        Self::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.num, &self.den * &o.den)
    }

    /// Division; a zero divisor yields a function with zero denominator.
    pub fn div(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.num.scale(c), self.den.clone())
    }

    /// `p(args)` as a single fraction.
    pub fn evaluate(p: &Polynomial, args: &[RationalFunction]) -> Result<Self, PolyError> {
        if args.len() != p.nvars() {
            return Err(PolyError::LengthMismatch {
                expected: p.nvars(),
                got: args.len(),
            });
        }
        let nv = args.first().map_or(0, Self::nvars);
        let degs: Vec<u32> = (0..p.nvars()).map(|i| p.degree_in(i)).collect();
        let mut num = Polynomial::zero(nv);
        for (m, c) in p.terms() {
            let mut t = Polynomial::constant(nv, c);
            for (i, a) in args.iter().enumerate() {
                let e = m.exponent(i);
                if degs[i] == 0 {
                    continue;
                }
                t = &t * &(&a.num.pow(e) * &a.den.pow(degs[i] - e));
            }
            num = &num + &t;
        }
        let den = args
            .iter()
            .zip(&degs)
            .fold(Polynomial::one(nv), |acc, (a, &d)| &acc * &a.den.pow(d));
        Ok(Self::new(num, den))
    }

    /// Substitutes polynomials for the variables of numerator and denominator.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Self, PolyError> {
        Ok(Self::new(
            self.num.substitute(images)?,
            self.den.substitute(images)?,
        ))
    }

    pub fn equals(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }

    /// Valuation in `var`: numerator minus denominator order.
    pub fn valuation(&self, var: usize) -> Result<i64, PolyError> {
        Ok(i64::from(self.num.u_valuation(var)?) - i64::from(self.den.u_valuation(var)?))
    }

    /// Restriction to `var = 0`, or `None` when the function has a pole there.
    pub fn limit_at_zero(&self, var: usize) -> Result<Option<Self>, PolyError> {
        if self.num.is_zero() {
            return Ok(Some(self.clone()));
        }
        let (kn, ln) = self.num.lowest_coefficient(var)?;
        let (kd, ld) = self.den.lowest_coefficient(var)?;
        Ok(match kn.cmp(&kd) {
            std::cmp::Ordering::Less => None,
            std::cmp::Ordering::Greater => Some(Self::zero(self.nvars())),
            std::cmp::Ordering::Equal => Some(Self::new(ln, ld)),
        })
    }

    pub fn derivative(&self, var: usize) -> Result<Self, PolyError> {
        let dn = self.num.derivative(var)?;
        let dd = self.den.derivative(var)?;
        Ok(Self::new(
            &(&dn * &self.den) - &(&self.num * &dd),
            &self.den * &self.den,
        ))
    }

    pub fn is_constant(&self) -> bool {
        (0..self.nvars()).all(|v| self.derivative(v).map(|d| d.is_zero()).unwrap_or(false))
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        RfDisplay { rf: self, names }
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        self.display_with(names).to_string()
    }
}

struct RfDisplay<'a> {
    rf: &'a RationalFunction,
    names: &'a [String],
}

impl fmt::Display for RfDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.rf.num.to_string_with(self.names);
        if self.rf.den.is_one() {
            return f.write_str(&num);
        }
        let den = self.rf.den.to_string_with(self.names);
        let wrap = |s: String, p: &Polynomial| if p.len() > 1 { format!("({s})") } else { s };
        write!(f, "{}/{}", wrap(num, &self.rf.num), wrap(den, &self.rf.den))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, ParseContext};

    fn p(s: &str) -> Polynomial {
        let names: Vec<String> = ["u", "v", "w"].iter().map(|s| s.to_string()).collect();
        parse_polynomial(s, &ParseContext::new(&names)).unwrap()
    }

    #[test]
    fn arithmetic_and_limits() {
        let a = RationalFunction::new(p("u*v + u^2"), p("u*w"));
        assert!(a.equals(&RationalFunction::new(p("v + u"), p("w"))));
        let lim = a.limit_at_zero(0).unwrap().unwrap();
        assert!(lim.equals(&RationalFunction::new(p("v"), p("w"))));
        let pole = RationalFunction::new(p("v"), p("u"));
        assert!(pole.limit_at_zero(0).unwrap().is_none());
        let s = a.add(&pole).sub(&pole);
        assert!(s.equals(&a));
        assert!(RationalFunction::constant(3, Rational::from_integer(4.into())).is_constant());
        assert!(!lim.is_constant());
    }

    #[test]
    fn evaluate_polynomial() {
        let x = RationalFunction::new(p("v"), p("w"));
        let y = RationalFunction::from_poly(p("u"));
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let q = parse_polynomial("a^2 + a*b", &ParseContext::new(&names)).unwrap();
        let r = RationalFunction::evaluate(&q, &[x.clone(), y.clone(), RationalFunction::zero(3)]).unwrap();
        assert!(r.equals(&x.mul(&x).add(&x.mul(&y))));
    }
}
