use num_bigint::BigInt;
use num_traits::One;
use rustc_hash::FxHashMap;

use super::{Monomial, PolyError, Polynomial, Raw};

/// Lazily filled table of image powers for one substitution.
struct PowerCache {
    images: Vec<Raw>,
    trivial: Vec<bool>,
    cache: Vec<FxHashMap<u32, Raw>>,
    trunc: Option<(usize, u32)>,
}

impl PowerCache {
    fn power(&mut self, var: usize, k: u32) -> &Raw {
        if !self.cache[var].contains_key(&k) {
            let value = if k == 1 {
                self.images[var].clone()
            } else {
                // reuse the largest cached power below k
                let below = self.cache[var].keys().copied().filter(|&e| e < k).max();
                match below {
                    Some(e) => {
                        let base = self.cache[var][&e].clone();
                        let rest = self.images[var].pow(k - e, self.trunc);
                        base.mul(&rest, self.trunc)
                    }
                    None => self.images[var].pow(k, self.trunc),
                }
            };
            self.cache[var].insert(k, value);
        }
        &self.cache[var][&k]
    }

    fn mul_power(&mut self, acc: Raw, var: usize, k: u32) -> Raw {
        if k == 0 || self.trivial[var] {
            return acc;
        }
        let trunc = self.trunc;
        let pw = self.power(var, k);
        acc.mul(pw, trunc)
    }
}

impl Polynomial {
    /// Composition `self(images[0], ..., images[k-1])`.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        self.substitute_impl(images, None, None)
    }

    /// Composition with every term whose exponent of `var` is at least `bound`
    /// discarded. The result agrees with the full composition modulo
    /// `var^bound`, which is all that is needed to read off small valuations.
    pub fn substitute_truncated(
        &self,
        images: &[Polynomial],
        var: usize,
        bound: u32,
    ) -> Result<Polynomial, PolyError> {
        self.substitute_impl(images, Some((var, bound)), None)
    }

    /// Composition that fails once any intermediate exceeds `limit` terms.
    pub fn substitute_limited(&self, images: &[Polynomial], limit: usize) -> Result<Polynomial, PolyError> {
        self.substitute_impl(images, None, Some(limit))
    }

    fn substitute_impl(
        &self,
        images: &[Polynomial],
        trunc: Option<(usize, u32)>,
        limit: Option<usize>,
    ) -> Result<Polynomial, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::LengthMismatch {
                expected: self.nvars,
                got: images.len(),
            });
        }
        let target = match images.first() {
            Some(img) => img.nvars,
            None => return Ok(self.clone()),
        };
        for img in images {
            if img.nvars != target {
                return Err(PolyError::VariableCountMismatch {
                    left: target,
                    right: img.nvars,
                });
            }
        }
        if let Some((var, bound)) = trunc {
            if bound == 0 {
                return Ok(Polynomial::zero(target));
            }
            if var >= target {
                return Err(PolyError::VariableOutOfRange {
                    index: var,
                    nvars: target,
                });
            }
        }
        if self.is_zero() {
            return Ok(Polynomial::zero(target));
        }
        if trunc.is_none() {
            if let Some(m) = super::linear::as_linear(images) {
                let out = self.linear_substitute(&m)?;
                if let Some(lim) = limit {
                    if out.len() > lim {
                        return Err(PolyError::TermLimit {
                            terms: out.len(),
                            limit: lim,
                        });
                    }
                }
                return Ok(out);
            }
        }
        self.substitute_horner(images, trunc, limit)
    }

    /// Horner evaluation without the linear fast path; arguments already checked.
    pub(crate) fn substitute_horner(
        &self,
        images: &[Polynomial],
        trunc: Option<(usize, u32)>,
        limit: Option<usize>,
    ) -> Result<Polynomial, PolyError> {
        let target = images[0].nvars;
        if self.is_zero() {
            return Ok(Polynomial::zero(target));
        }
        let raws: Vec<Raw> = images.iter().map(Polynomial::to_raw).collect();
        let trivial = raws.iter().map(Raw::is_one).collect();
        let mut cache = PowerCache {
            images: raws,
            trivial,
            cache: vec![FxHashMap::default(); self.nvars],
            trunc,
        };
        let mut terms: Vec<&(Monomial, BigInt)> = self.terms.iter().collect();
        terms.sort_unstable_by(|a, b| b.0.lex_cmp(&a.0));
        let mut out = horner(&terms, 0, self.nvars, &mut cache, limit)?;
        out.den *= &self.den;
        Ok(out.into_poly(target))
    }
}

/// Evaluates the lex-sorted `terms` (which agree in all variables before `var`)
/// by Horner's rule in `var`.
fn horner(
    terms: &[&(Monomial, BigInt)],
    var: usize,
    nvars: usize,
    cache: &mut PowerCache,
    limit: Option<usize>,
) -> Result<Raw, PolyError> {
    if var == nvars {
        debug_assert_eq!(terms.len(), 1);
        return Ok(Raw::constant(terms[0].1.clone()));
    }
    let mut acc: Option<Raw> = None;
    let mut prev = 0u32;
    let mut start = 0;
    while start < terms.len() {
        let e = terms[start].0.exponent(var);
        let mut end = start + 1;
        while end < terms.len() && terms[end].0.exponent(var) == e {
            end += 1;
        }
        let inner = horner(&terms[start..end], var + 1, nvars, cache, limit)?;
        acc = Some(match acc {
            None => inner,
            Some(a) => {
                let shifted = cache.mul_power(a, var, prev - e);
                add_raw(shifted, inner)
            }
        });
        if let (Some(lim), Some(a)) = (limit, acc.as_ref()) {
            if a.terms.len() > lim {
                return Err(PolyError::TermLimit {
                    terms: a.terms.len(),
                    limit: lim,
                });
            }
        }
        prev = e;
        start = end;
    }
    let acc = acc.unwrap_or_else(Raw::zero);
    Ok(cache.mul_power(acc, var, prev))
}

fn add_raw(a: Raw, b: Raw) -> Raw {
    if b.terms.is_empty() {
        return a;
    }
    if a.terms.is_empty() {
        return b;
    }
    let one = Raw::constant(BigInt::one());
    a.mul_add(&one, b, None)
}

#[cfg(test)]
mod tests {
    use super::super::{parse_polynomial, ParseContext};
    use super::*;

    fn ctx(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn identity_substitution() {
        let names = ctx(&["x", "y", "z", "w"]);
        let c = ParseContext::new(&names);
        let p = parse_polynomial("3*x^2*y - 1/2*z*w^3 + 7 + y", &c).unwrap();
        let ids = Polynomial::variables(4);
        assert_eq!(p.substitute(&ids).unwrap(), p);
    }

    #[test]
    fn composition_matches_expansion() {
        let names = ctx(&["x", "y"]);
        let c = ParseContext::new(&names);
        let p = parse_polynomial("x^3 + 2*x*y - y^2 + 5", &c).unwrap();
        let imgs = vec![
            parse_polynomial("x + y", &c).unwrap(),
            parse_polynomial("x - 1/3*y", &c).unwrap(),
        ];
        let direct = {
            let a = &imgs[0];
            let b = &imgs[1];
            &(&(&a.pow(3) + &(&Polynomial::from_int(2, 2) * &(a * b))) - &b.pow(2))
                + &Polynomial::from_int(2, 5)
        };
        assert_eq!(p.substitute(&imgs).unwrap(), direct);
    }

    #[test]
    fn truncation_agrees_modulo_power() {
        let names = ctx(&["u", "v", "w"]);
        let c = ParseContext::new(&names);
        let p = parse_polynomial("u^2*v + 3*u*w^2 - v^3 + 1", &c).unwrap();
        let imgs = vec![
            parse_polynomial("u + v", &c).unwrap(),
            parse_polynomial("u*v - 2*w", &c).unwrap(),
            parse_polynomial("u^2 + w", &c).unwrap(),
        ];
        let full = p.substitute(&imgs).unwrap();
        for bound in 0..6 {
            let t = p.substitute_truncated(&imgs, 0, bound).unwrap();
            let expect = Polynomial::from_terms(3, full.terms().filter(|(m, _)| m.exponent(0) < bound));
            assert_eq!(t, expect, "bound {bound}");
        }
    }

    #[test]
    fn length_mismatch() {
        let p = Polynomial::variable(2, 0).unwrap();
        assert!(matches!(
            p.substitute(&Polynomial::variables(3)),
            Err(PolyError::LengthMismatch { .. })
        ));
    }
}
