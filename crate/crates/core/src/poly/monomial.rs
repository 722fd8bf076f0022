use std::cmp::Ordering;
use std::fmt;

use super::PolyError;

/// Largest number of variables a polynomial may carry.
pub const MAX_VARS: usize = 8;

/// A power product `x0^e0 * x1^e1 * ...`.
///
/// Exponents beyond the owning polynomial's variable count are always zero, so
/// equality and hashing do not need to know the variable count.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    degree: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        exps: [0; MAX_VARS],
        degree: 0,
    };

    pub fn new(exponents: &[u32]) -> Result<Self, PolyError> {
        if exponents.len() > MAX_VARS {
            return Err(PolyError::TooManyVariables(exponents.len()));
        }
        let mut exps = [0u16; MAX_VARS];
        let mut degree = 0u32;
        for (slot, &e) in exps.iter_mut().zip(exponents) {
            *slot = u16::try_from(e).map_err(|_| PolyError::ExponentOverflow)?;
            degree += e;
        }
        Ok(Monomial { exps, degree })
    }

    /// The monomial `x_var^power`.
    pub fn var_power(var: usize, power: u32) -> Result<Self, PolyError> {
        if var >= MAX_VARS {
            return Err(PolyError::TooManyVariables(var + 1));
        }
        let mut exps = [0u16; MAX_VARS];
        exps[var] = u16::try_from(power).map_err(|_| PolyError::ExponentOverflow)?;
        Ok(Monomial { exps, degree: power })
    }

    #[inline]
    pub fn exponent(&self, var: usize) -> u32 {
        u32::from(self.exps[var])
    }

    #[inline]
    pub fn total_degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        self.exps[..nvars].iter().map(|&e| u32::from(e)).collect()
    }

    /// Product of two monomials. Panics on exponent overflow past `u16::MAX`.
    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other).expect("monomial exponent overflow")
    }

    #[inline]
    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = [0u16; MAX_VARS];
        for i in 0..MAX_VARS {
            exps[i] = self.exps[i].checked_add(other.exps[i])?;
        }
        Some(Monomial {
            exps,
            degree: self.degree + other.degree,
        })
    }

    /// `self / other` when `other` divides `self`.
    #[inline]
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = [0u16; MAX_VARS];
        for i in 0..MAX_VARS {
            exps[i] = self.exps[i].checked_sub(other.exps[i])?;
        }
        Some(Monomial {
            exps,
            degree: self.degree - other.degree,
        })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u16; MAX_VARS];
        let mut degree = 0;
        for i in 0..MAX_VARS {
            exps[i] = self.exps[i].min(other.exps[i]);
            degree += u32::from(exps[i]);
        }
        Monomial { exps, degree }
    }

    /// Same monomial with the exponent of `var` set to zero.
    #[inline]
    pub fn without(&self, var: usize) -> Monomial {
        let mut out = *self;
        out.degree -= u32::from(out.exps[var]);
        out.exps[var] = 0;
        out
    }

    pub fn with_exponent(&self, var: usize, power: u32) -> Result<Monomial, PolyError> {
        let mut out = self.without(var);
        out.exps[var] = u16::try_from(power).map_err(|_| PolyError::ExponentOverflow)?;
        out.degree += power;
        Ok(out)
    }

    /// Pure lexicographic comparison, `x0` most significant.
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        self.exps.cmp(&other.exps)
    }
}

/// Graded lexicographic order: total degree first, then lex with `x0 > x1 > ...`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1);
        write!(f, "Monomial({:?})", &self.exps[..last])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let x2 = Monomial::new(&[2, 0, 0]).unwrap();
        let xy = Monomial::new(&[1, 1, 0]).unwrap();
        let y2 = Monomial::new(&[0, 2, 0]).unwrap();
        let x = Monomial::new(&[1, 0, 0]).unwrap();
        assert!(x2 > xy && xy > y2 && y2 > x);
    }

    #[test]
    fn division_and_gcd() {
        let a = Monomial::new(&[3, 1, 0, 2]).unwrap();
        let b = Monomial::new(&[1, 1, 0, 0]).unwrap();
        assert_eq!(a.checked_div(&b).unwrap(), Monomial::new(&[2, 0, 0, 2]).unwrap());
        assert!(b.checked_div(&a).is_none());
        assert_eq!(
            a.gcd(&Monomial::new(&[0, 4, 1, 1]).unwrap()),
            Monomial::new(&[0, 1, 0, 1]).unwrap()
        );
        assert_eq!(a.total_degree(), 6);
    }

    #[test]
    fn overflow_is_reported() {
        assert!(Monomial::new(&[70000]).is_err());
        assert!(Monomial::new(&[0; 9]).is_err());
    }
}
