//! Birational maps of projective space given by homogeneous lifts.

use num_traits::Zero;
use serde::Serialize;

use crate::poly::{jacobian_determinant, HomogeneousPolynomial, PolyError, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("map needs {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("components have different degrees ({0} and {1})")]
    ComponentDegrees(u32, u32),
    #[error("all components vanish identically")]
    AllComponentsZero,
    #[error("critical factor {0} divides every component")]
    FactorDividesAll(usize),
    #[error("critical factor {0} is constant")]
    ConstantFactor(usize),
    #[error("polynomial has {got} variables, the map acts on {expected}")]
    VariableCount { expected: usize, got: usize },
    #[error("proper pull-back of the zero polynomial")]
    ZeroInput,
    #[error("lift stages do not compose to the components")]
    StageMismatch,
    #[error("iterate keeps a common factor of degree {0} after removing critical factors")]
    LeftoverCommonFactor(usize),
}

/// A birational map of P^N through a homogeneous lift.
#[derive(Debug, Clone)]
pub struct BirationalMap {
    name: String,
    variables: Vec<String>,
    components: Vec<HomogeneousPolynomial>,
    critical_factors: Vec<HomogeneousPolynomial>,
    inverse: Option<Vec<HomogeneousPolynomial>>,
    /// Optional factorization `f = s_k o ... o s_1`, listed first to last.
    /// Pull-backs then run stage by stage, which is much cheaper when the
    /// stages are monomial or linear.
    stages: Option<Vec<Vec<Polynomial>>>,
    degree: u32,
}

/// Result of a proper pull-back: `f^*P = prod K_i^indices[i] * proper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackResult {
    pub proper: HomogeneousPolynomial,
    pub indices: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorCheck {
    pub factor: String,
    pub multiplicity: u32,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalFactorReport {
    pub jacobian_degree: Option<u32>,
    pub factors: Vec<FactorCheck>,
    pub ok: bool,
}

impl BirationalMap {
    pub fn new(
        name: impl Into<String>,
        variables: Vec<String>,
        components: Vec<Polynomial>,
        critical_factors: Vec<Polynomial>,
    ) -> Result<Self, MapError> {
        let n = variables.len();
        if components.len() != n {
            return Err(MapError::ComponentCount {
                expected: n,
                got: components.len(),
            });
        }
        let mut degree = None;
        let mut comps = Vec::with_capacity(n);
        for c in components {
            check_vars(&c, n)?;
            if c.is_zero() {
                comps.push(HomogeneousPolynomial::with_degree(c, degree.unwrap_or(0))?);
                continue;
            }
            let h = HomogeneousPolynomial::new(c)?;
            match degree {
                None => degree = Some(h.degree()),
                Some(d) if d != h.degree() => return Err(MapError::ComponentDegrees(d, h.degree())),
                _ => {}
            }
            comps.push(h);
        }
        let degree = degree.ok_or(MapError::AllComponentsZero)?;
        let comps = comps
            .into_iter()
            .map(|c| {
                if c.is_zero() {
                    HomogeneousPolynomial::with_degree(c.into_poly(), degree)
                } else {
                    Ok(c)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut factors = Vec::with_capacity(critical_factors.len());
        for (i, k) in critical_factors.into_iter().enumerate() {
            check_vars(&k, n)?;
            if k.is_constant() {
                return Err(MapError::ConstantFactor(i));
            }
            let k = HomogeneousPolynomial::new(k)?;
            let divides_all = comps
                .iter()
                .all(|c| c.exact_div(&k).map(|q| q.is_some()).unwrap_or(false));
            if divides_all {
                return Err(MapError::FactorDividesAll(i));
            }
            factors.push(k);
        }
        Ok(BirationalMap {
            name: name.into(),
            variables,
            components: comps,
            critical_factors: factors,
            inverse: None,
            stages: None,
            degree,
        })
    }

    /// Attaches the inverse lift.
    pub fn with_inverse(mut self, inverse: Vec<Polynomial>) -> Result<Self, MapError> {
        let n = self.nvars();
        if inverse.len() != n {
            return Err(MapError::ComponentCount {
                expected: n,
                got: inverse.len(),
            });
        }
        let inv = inverse
            .into_iter()
            .map(|c| {
                check_vars(&c, n)?;
                Ok(HomogeneousPolynomial::new(c)?)
            })
            .collect::<Result<Vec<_>, MapError>>()?;
        self.inverse = Some(inv);
        Ok(self)
    }

    /// Attaches a factorization into stages; it must compose to the components.
    pub fn with_stages(mut self, stages: Vec<Vec<Polynomial>>) -> Result<Self, MapError> {
        let n = self.nvars();
        let mut composed = Polynomial::variables(n);
        for stage in &stages {
            if stage.len() != n {
                return Err(MapError::StageMismatch);
            }
            for s in stage {
                check_vars(s, n)?;
            }
            composed = stage
                .iter()
                .map(|s| s.substitute(&composed))
                .collect::<Result<Vec<_>, _>>()?;
        }
        let matches = composed.iter().zip(&self.components).all(|(a, b)| a == b.poly());
        if !matches {
            return Err(MapError::StageMismatch);
        }
        self.stages = Some(stages);
        Ok(self)
    }

    /// The identity map of P^{n-1}.
    pub fn identity(variables: Vec<String>) -> Self {
        let n = variables.len();
        Self::new("identity", variables, Polynomial::variables(n), Vec::new()).expect("identity map is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    /// Dimension N of the projective space.
    pub fn dimension(&self) -> usize {
        self.nvars() - 1
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn components(&self) -> &[HomogeneousPolynomial] {
        &self.components
    }

    pub fn component_polys(&self) -> Vec<Polynomial> {
        self.components.iter().map(|c| c.poly().clone()).collect()
    }

    pub fn critical_factors(&self) -> &[HomogeneousPolynomial] {
        &self.critical_factors
    }

    pub fn inverse(&self) -> Option<&[HomogeneousPolynomial]> {
        self.inverse.as_deref()
    }

    pub fn stages(&self) -> Option<&[Vec<Polynomial>]> {
        self.stages.as_deref()
    }

    /// `f^*P = P o f`.
    pub fn pullback(&self, p: &HomogeneousPolynomial) -> Result<HomogeneousPolynomial, MapError> {
        self.pullback_limited(p, None)
    }

    /// Pull-back that fails with a term-limit error past `limit` terms.
    pub fn pullback_limited(
        &self,
        p: &HomogeneousPolynomial,
        limit: Option<usize>,
    ) -> Result<HomogeneousPolynomial, MapError> {
        check_vars(p, self.nvars())?;
        let subst = |q: &Polynomial, imgs: &[Polynomial]| match limit {
            Some(l) => q.substitute_limited(imgs, l),
            None => q.substitute(imgs),
        };
        let out = match &self.stages {
            Some(stages) => {
                let mut q = p.poly().clone();
                for stage in stages.iter().rev() {
                    q = subst(&q, stage)?;
                }
                q
            }
            None => subst(p.poly(), &self.component_polys())?,
        };
        Ok(HomogeneousPolynomial::with_degree(out, p.degree() * self.degree)?)
    }

    /// Divides every critical factor out of `f^*P` to its exact multiplicity.
    pub fn proper_pullback(&self, p: &HomogeneousPolynomial) -> Result<PullbackResult, MapError> {
        self.proper_pullback_limited(p, None)
    }

    pub fn proper_pullback_limited(
        &self,
        p: &HomogeneousPolynomial,
        limit: Option<usize>,
    ) -> Result<PullbackResult, MapError> {
        if p.is_zero() {
            return Err(MapError::ZeroInput);
        }
        let raw = self.pullback_limited(p, limit)?;
        let (proper, indices) = self.strip_factors(raw.into_poly())?;
        let lowered: u32 = indices
            .iter()
            .zip(&self.critical_factors)
            .map(|(nu, k)| nu * k.degree())
            .sum();
        let proper = HomogeneousPolynomial::with_degree(proper, p.degree() * self.degree - lowered)?;
        Ok(PullbackResult { proper, indices })
    }

    fn strip_factors(&self, mut q: Polynomial) -> Result<(Polynomial, Vec<u32>), MapError> {
        let mut indices = Vec::with_capacity(self.critical_factors.len());
        for k in &self.critical_factors {
            let (rest, e) = q.trial_divide(k.poly())?;
            q = rest;
            indices.push(e);
        }
        Ok((q, indices))
    }

    /// Lift of `f^n` by direct composition, dividing out the common critical
    /// factors and monomial content at every step.
    pub fn iterate_normalized(&self, n: u32) -> Result<BirationalMap, MapError> {
        assert!(n >= 1, "iterate_normalized needs n >= 1");
        let base = self.component_polys();
        let mut comps = base.clone();
        for _ in 1..n {
            let next: Vec<Polynomial> = comps
                .iter()
                .map(|c| c.substitute(&base))
                .collect::<Result<_, _>>()?;
            comps = self.remove_common_factors(next)?;
        }
        let leftover = common_factor_degree(&comps);
        if leftover > 0 {
            return Err(MapError::LeftoverCommonFactor(leftover));
        }
        BirationalMap::new(
            format!("{}^{}", self.name, n),
            self.variables.clone(),
            comps,
            Vec::new(),
        )
    }

    fn remove_common_factors(&self, mut comps: Vec<Polynomial>) -> Result<Vec<Polynomial>, MapError> {
        for k in &self.critical_factors {
            let mut min = u32::MAX;
            for c in comps.iter().filter(|c| !c.is_zero()) {
                min = min.min(c.trial_divide(k.poly())?.1);
                if min == 0 {
                    break;
                }
            }
            if min > 0 && min != u32::MAX {
                comps = comps
                    .iter()
                    .map(|c| {
                        if c.is_zero() {
                            Ok(c.clone())
                        } else {
                            Ok(c.divide_power(k.poly(), min)?.expect("multiplicity checked"))
                        }
                    })
                    .collect::<Result<_, MapError>>()?;
            }
        }
        let content = comps
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.monomial_content())
            .reduce(|a, b| a.gcd(&b));
        if let Some(m) = content {
            if m.total_degree() > 0 {
                comps = comps
                    .iter()
                    .map(|c| c.div_monomial(&m).unwrap_or_else(|| c.clone()))
                    .collect();
            }
        }
        Ok(comps)
    }

    /// Multiplicity of each declared factor in the Jacobian determinant.
    pub fn validate_critical_factors(&self) -> Result<CriticalFactorReport, MapError> {
        let det = jacobian_determinant(&self.component_polys())?;
        let mut factors = Vec::new();
        for k in &self.critical_factors {
            let multiplicity = if det.is_zero() {
                0
            } else {
                det.multiplicity(k.poly())?
            };
            factors.push(FactorCheck {
                factor: k.to_string_with(&self.variables),
                multiplicity,
                ok: multiplicity > 0,
            });
        }
        let ok = !det.is_zero() && factors.iter().all(|f| f.ok);
        Ok(CriticalFactorReport {
            jacobian_degree: det.total_degree(),
            factors,
            ok,
        })
    }

    /// Checks `f^{-1} o f = G * id` for a single polynomial `G`. `None` when no
    /// inverse is attached.
    pub fn check_inverse(&self) -> Result<Option<bool>, MapError> {
        let inv = match &self.inverse {
            Some(inv) => inv,
            None => return Ok(None),
        };
        let comps = self.component_polys();
        let composed: Vec<Polynomial> = inv
            .iter()
            .map(|c| c.substitute(&comps))
            .collect::<Result<_, _>>()?;
        Ok(Some(is_multiple_of_identity(&composed)))
    }
}

fn check_vars(p: &Polynomial, n: usize) -> Result<(), MapError> {
    if p.nvars() != n {
        return Err(MapError::VariableCount {
            expected: n,
            got: p.nvars(),
        });
    }
    Ok(())
}

/// Whether `comps[i] = x_i * G` for one nonzero `G`.
pub fn is_multiple_of_identity(comps: &[Polynomial]) -> bool {
    let n = comps.len();
    let vars = Polynomial::variables(n);
    let g = match comps[0].exact_div(&vars[0]) {
        Ok(Some(g)) if !g.is_zero() => g,
        _ => return false,
    };
    comps.iter().zip(&vars).all(|(c, x)| *c == x * &g)
}

/// Degree of a common factor of `comps`, detected by restricting them to a
/// few fixed lines in general position and taking univariate gcds.
pub fn common_factor_degree(comps: &[Polynomial]) -> usize {
    let nonzero: Vec<&Polynomial> = comps.iter().filter(|c| !c.is_zero()).collect();
    if nonzero.len() < 2 {
        return 0;
    }
    let n = nonzero[0].nvars();
    let mut best = usize::MAX;
    for trial in 0..2i64 {
        // line t -> a + t*b with small coprime-looking coordinates
        let images: Vec<Polynomial> = (0..n as i64)
            .map(|i| {
                let a = Rational::from_integer((2 * i + 3 + 5 * trial).into());
                let b = Rational::from_integer((i * i + 7 * trial + 1).into());
                let t = Polynomial::variable(1, 0).expect("one variable");
                &Polynomial::constant(1, a) + &t.scale(&b)
            })
            .collect();
        let mut g: Option<Vec<Rational>> = None;
        for c in &nonzero {
            let r = match c.substitute(&images) {
                Ok(r) => r,
                Err(_) => return 0,
            };
            let coeffs = univariate_coeffs(&r);
            g = Some(match g {
                None => coeffs,
                Some(prev) => univariate_gcd(prev, coeffs),
            });
        }
        let deg = g.map_or(0, |v| v.len().saturating_sub(1));
        best = best.min(deg);
    }
    best
}

fn univariate_coeffs(p: &Polynomial) -> Vec<Rational> {
    let deg = p.total_degree().unwrap_or(0) as usize;
    let mut out = vec![Rational::zero(); deg + 1];
    for (m, c) in p.terms() {
        out[m.exponent(0) as usize] = c;
    }
    out
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn univariate_gcd(a: Vec<Rational>, b: Vec<Rational>) -> Vec<Rational> {
    let (mut a, mut b) = (trim(a), trim(b));
    let is_zero = |v: &Vec<Rational>| v.iter().all(|c| c.is_zero());
    while !is_zero(&b) {
        let r = univariate_rem(&a, &b);
        a = b;
        b = r;
        // keep coefficients small
        if let Some(lc) = b.last().cloned().filter(|c| !c.is_zero()) {
            b = b.into_iter().map(|c| c / &lc).collect();
        }
    }
    if is_zero(&a) {
        return vec![Rational::zero()];
    }
    a
}

fn univariate_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let lr = r.last().cloned().unwrap_or_else(Rational::zero);
        if !lr.is_zero() {
            let q = lr / &lb;
            let shift = r.len() - 1 - db;
            for (i, bc) in b.iter().enumerate() {
                r[shift + i] -= &q * bc;
            }
        }
        r.pop();
        if r.is_empty() {
            break;
        }
    }
    if r.is_empty() {
        r.push(Rational::zero());
    }
    trim(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, ParseContext};

    fn names() -> Vec<String> {
        ["x", "y", "z", "w"].iter().map(|s| s.to_string()).collect()
    }

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, &ParseContext::new(&names())).unwrap()
    }

    fn ex2() -> BirationalMap {
        BirationalMap::new(
            "ex2",
            names(),
            vec![p("y*(y+z-w)"), p("x*w + 2*z^2"), p("z*(y+z-w)"), p("(y+z-w)^2")],
            vec![p("y + z - w"), p("w")],
        )
        .unwrap()
        .with_inverse(vec![
            p("y*w - 2*z^2"),
            p("x*(x+z-w)"),
            p("z*(x+z-w)"),
            p("(x+z-w)^2"),
        ])
        .unwrap()
    }

    #[test]
    fn pullback_of_w() {
        let f = ex2();
        let w = HomogeneousPolynomial::new(p("w")).unwrap();
        assert_eq!(f.pullback(&w).unwrap().poly(), &p("(y+z-w)^2"));
        let r = f.proper_pullback(&w).unwrap();
        assert_eq!(r.indices, vec![2, 0]);
        assert!(r.proper.poly().is_one());
        assert_eq!(r.proper.degree(), 0);
    }

    #[test]
    fn inverse_and_iterates() {
        let f = ex2();
        assert_eq!(f.check_inverse().unwrap(), Some(true));
        assert_eq!(f.iterate_normalized(1).unwrap().degree(), 2);
        assert_eq!(f.iterate_normalized(2).unwrap().degree(), 4);
        assert_eq!(f.iterate_normalized(3).unwrap().degree(), 8);
    }

    #[test]
    fn critical_factors_in_jacobian() {
        let rep = ex2().validate_critical_factors().unwrap();
        assert!(rep.ok);
        let id = BirationalMap::identity(names());
        assert!(id.validate_critical_factors().unwrap().ok);
    }

    #[test]
    fn factor_dividing_everything_is_rejected() {
        let err = BirationalMap::new(
            "bad",
            names(),
            vec![p("x*w"), p("y*w"), p("z*w"), p("w^2")],
            vec![p("w")],
        )
        .unwrap_err();
        assert_eq!(err, MapError::FactorDividesAll(0));
    }

    #[test]
    fn leftover_factor_detection() {
        assert_eq!(
            common_factor_degree(&[p("x*(y+z)"), p("y*(y+z)"), p("w*(y+z)")]),
            1
        );
        assert_eq!(common_factor_degree(&[p("x^2"), p("y*z"), p("w^2 + x*y")]), 0);
    }
}
