//! Generalized Darboux polynomials: homogeneous polynomials of a fixed degree
//! with prescribed minimum chart indices, and how the proper pull-back acts on them.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::birmap::{BirationalMap, MapError};
use crate::blowup::{ChartError, ChartSet};
use crate::instance::{BoundDoc, Instance};
use crate::linalg;
use crate::poly::{HomogeneousPolynomial, Monomial, PolyError, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DarbouxError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("unknown chart {0}")]
    UnknownChart(String),
    #[error("bound {0:?} is neither a number nor \"degree\"")]
    BadBound(String),
    #[error("identities need four variables, got {0}")]
    NotFourVariables(usize),
}

/// Degree and per-chart minimum indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexConstraintQuery {
    pub degree: u32,
    pub bounds: Vec<(String, u32)>,
}

impl IndexConstraintQuery {
    pub fn new(degree: u32, bounds: Vec<(String, u32)>) -> Self {
        IndexConstraintQuery { degree, bounds }
    }

    pub fn unconstrained(degree: u32) -> Self {
        Self::new(degree, Vec::new())
    }

    /// The bound profile stored with an instance, or none.
    pub fn for_instance(inst: &Instance, degree: u32) -> Result<Self, DarbouxError> {
        let Some(doc) = &inst.darboux else {
            return Ok(Self::unconstrained(degree));
        };
        let k = match &doc.bound {
            BoundDoc::Fixed(k) => *k,
            BoundDoc::Named(s) if s == "degree" => degree,
            BoundDoc::Named(s) => return Err(DarbouxError::BadBound(s.clone())),
        };
        Ok(Self::new(
            degree,
            doc.charts.iter().map(|c| (c.clone(), k)).collect(),
        ))
    }
}

/// Basis of a constrained space, in reduced echelon form over the monomials
/// of the given degree in decreasing grlex order.
#[derive(Debug, Clone)]
pub struct DarbouxBasis {
    pub degree: u32,
    pub monomials: Vec<Monomial>,
    pub basis: Vec<HomogeneousPolynomial>,
    coords: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

/// Monomials of degree `d` in `n` variables, largest first.
pub fn monomials_of_degree(n: usize, d: u32) -> Result<Vec<Monomial>, PolyError> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut exps = Vec::new();
    rec(n, d, &mut Vec::new(), &mut exps);
    let mut out: Vec<Monomial> = exps.iter().map(|e| Monomial::new(e)).collect::<Result<_, _>>()?;
    out.sort_by(|a, b| b.cmp(a));
    Ok(out)
}

/// Solves the linear index conditions of `q` for the generic degree-`q.degree` polynomial.
pub fn constrained_space(
    charts: &ChartSet,
    nvars: usize,
    q: &IndexConstraintQuery,
) -> Result<DarbouxBasis, DarbouxError> {
    if q.degree == 0 {
        return Err(DarbouxError::ZeroDegree);
    }
    let monomials = monomials_of_degree(nvars, q.degree)?;
    let ncols = monomials.len();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (name, k) in &q.bounds {
        let chart = charts
            .get(name)
            .ok_or_else(|| DarbouxError::UnknownChart(name.clone()))?;
        if *k == 0 {
            continue;
        }
        // one row per local monomial u^j * (...) with j < k
        let mut conds: BTreeMap<Monomial, Vec<Rational>> = BTreeMap::new();
        for (col, m) in monomials.iter().enumerate() {
            let mono = Polynomial::monomial(nvars, *m, Rational::one());
            let t = mono.substitute_truncated(chart.parametrization(), 0, *k)?;
            for (lm, c) in t.terms() {
                conds.entry(lm).or_insert_with(|| vec![Rational::zero(); ncols])[col] = c;
            }
        }
        rows.extend(conds.into_values());
    }
    let kernel = linalg::kernel(&rows, ncols);
    let (reduced, pivots) = linalg::rref(&kernel, ncols);
    let coords: Vec<Vec<Rational>> = reduced.iter().map(|r| linalg::primitive_vector(r)).collect();
    let basis = coords
        .iter()
        .map(|v| {
            let p = Polynomial::from_terms(nvars, monomials.iter().cloned().zip(v.iter().cloned()));
            HomogeneousPolynomial::with_degree(p, q.degree)
        })
        .collect::<Result<_, _>>()?;
    Ok(DarbouxBasis {
        degree: q.degree,
        monomials,
        basis,
        coords,
        pivots,
    })
}

impl DarbouxBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Coefficient vector of `p` over the monomials of the basis degree.
    fn monomial_vector(&self, p: &Polynomial) -> Option<Vec<Rational>> {
        if !p.is_zero() && p.homogeneous_degree() != Some(self.degree) {
            return None;
        }
        Some(self.monomials.iter().map(|m| p.coefficient(m)).collect())
    }

    /// Coordinates of `p` in the basis, if it lies in the span.
    pub fn coordinates(&self, p: &Polynomial) -> Option<Vec<Rational>> {
        let v = self.monomial_vector(p)?;
        // the basis is echelon: read coordinates at the pivots, then confirm
        let c: Vec<Rational> = self
            .pivots
            .iter()
            .zip(&self.coords)
            .map(|(&pc, row)| &v[pc] / &row[pc])
            .collect();
        let mut rebuilt = vec![Rational::zero(); v.len()];
        for (ci, row) in c.iter().zip(&self.coords) {
            for (r, x) in rebuilt.iter_mut().zip(row) {
                *r += ci * x;
            }
        }
        (rebuilt == v).then_some(c)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.coordinates(p).is_some()
    }

    pub fn strings(&self, names: &[String]) -> Vec<String> {
        self.basis
            .iter()
            .map(|b| b.poly().to_string_with(names))
            .collect()
    }
}

/// What the proper pull-back does to one basis element.
#[derive(Debug, Clone, Serialize)]
pub struct ElementReport {
    pub polynomial: String,
    pub indices: Vec<u32>,
    /// Exponents of the critical factors removed from the raw pull-back.
    pub removed: Vec<u32>,
    pub proper: String,
    pub proper_degree: u32,
    pub proper_indices: Vec<u32>,
    pub degree_preserved: bool,
    pub indices_preserved: bool,
    /// `prod K^removed * proper` equals the raw pull-back.
    pub reconstruction: bool,
    /// Coordinates of the proper pull-back in the basis, when it stays in the span.
    pub image: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DarbouxReport {
    pub degree: u32,
    pub bounds: Vec<(String, u32)>,
    pub charts: Vec<String>,
    pub dimension: usize,
    pub basis: Vec<String>,
    pub elements: Vec<ElementReport>,
    /// Columns are images of the basis elements; present when every image stays in the span.
    pub action: Option<Vec<Vec<String>>>,
    /// Elements whose proper pull-back keeps degree and all indices.
    pub preserved: usize,
    /// Elements the strict condition would discard.
    pub discarded: Vec<usize>,
}

impl DarbouxReport {
    /// Every reconstruction holds and every image stays in the span.
    pub fn ok(&self) -> bool {
        self.elements.iter().all(|e| e.reconstruction) && self.action.is_some()
    }

    /// The action matrix as rationals, columns as images.
    pub fn action_matrix(&self) -> Option<Vec<Vec<Rational>>> {
        self.action.as_ref().map(|m| {
            m.iter()
                .map(|r| {
                    r.iter()
                        .map(|s| crate::poly::rational(s).expect("printed rational"))
                        .collect()
                })
                .collect()
        })
    }
}

/// Proper pull-back of every basis element, checked against the basis and the charts.
pub fn verify_darboux(
    b: &DarbouxBasis,
    q: &IndexConstraintQuery,
    map: &BirationalMap,
    charts: &ChartSet,
) -> Result<DarbouxReport, DarbouxError> {
    let names = map.variables().to_vec();
    let mut elements = Vec::with_capacity(b.dimension());
    let mut columns: Vec<Option<Vec<Rational>>> = Vec::with_capacity(b.dimension());
    for p in &b.basis {
        let indices = charts.indices(p.poly())?;
        let raw = map.pullback(p)?;
        let res = map.proper_pullback(p)?;
        let mut rebuilt = res.proper.poly().clone();
        for (k, &e) in map.critical_factors().iter().zip(&res.indices) {
            rebuilt = &rebuilt * &k.poly().pow(e);
        }
        let proper_indices = charts.indices(res.proper.poly())?;
        let image = b.coordinates(res.proper.poly());
        elements.push(ElementReport {
            polynomial: p.poly().to_string_with(&names),
            indices: indices.clone(),
            removed: res.indices.clone(),
            proper: res.proper.poly().to_string_with(&names),
            proper_degree: res.proper.degree(),
            degree_preserved: res.proper.degree() == p.degree(),
            indices_preserved: proper_indices == indices,
            proper_indices,
            reconstruction: &rebuilt == raw.poly(),
            image: image.as_ref().map(|v| v.iter().map(|c| c.to_string()).collect()),
        });
        columns.push(image);
    }
    let action = if columns.iter().all(Option::is_some) {
        let cols: Vec<Vec<Rational>> = columns.into_iter().flatten().collect();
        let n = cols.len();
        Some(
            (0..n)
                .map(|i| (0..n).map(|j| cols[j][i].to_string()).collect())
                .collect(),
        )
    } else {
        None
    };
    let discarded: Vec<usize> = elements
        .iter()
        .enumerate()
        .filter(|(_, e)| !(e.degree_preserved && e.indices_preserved))
        .map(|(i, _)| i)
        .collect();
    Ok(DarbouxReport {
        degree: b.degree,
        bounds: q.bounds.clone(),
        charts: charts.names(),
        dimension: b.dimension(),
        basis: b.strings(&names),
        preserved: elements.len() - discarded.len(),
        elements,
        action,
        discarded,
    })
}

/// Constrained space and pull-back report for an instance in one call.
pub fn darboux_for_instance(
    inst: &Instance,
    q: &IndexConstraintQuery,
) -> Result<(DarbouxBasis, DarbouxReport), DarbouxError> {
    let b = constrained_space(&inst.charts, inst.map.nvars(), q)?;
    let r = verify_darboux(&b, q, &inst.map, &inst.charts)?;
    Ok((b, r))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub holds: bool,
}

/// The four plane identities of the 3D Euler top discretization with components
/// `X~` and parameter `gamma`, e.g. `X~1 - X~3 = 2 X2 X4 (X1 - X3)`.
pub fn plane_identities(
    components: &[Polynomial],
    gamma: &Rational,
) -> Result<Vec<IdentityCheck>, DarbouxError> {
    if components.len() != 4 {
        return Err(DarbouxError::NotFourVariables(components.len()));
    }
    let n = components[0].nvars();
    if n != 4 {
        return Err(DarbouxError::NotFourVariables(n));
    }
    let x = Polynomial::variables(4);
    let f = components;
    let two = Polynomial::from_int(4, 2);
    let two_g = Polynomial::constant(4, gamma * Rational::from_integer(2.into()));
    let cases = [
        (
            "X~1 - X~3 = 2 X2 X4 (X1 - X3)",
            &f[0] - &f[2],
            &two * &(&(&x[1] * &x[3]) * &(&x[0] - &x[2])),
        ),
        (
            "X~2 - X~4 = 2 X1 X3 (X2 - X4)",
            &f[1] - &f[3],
            &two * &(&(&x[0] * &x[2]) * &(&x[1] - &x[3])),
        ),
        (
            "X~1 + X~3 = 2 gamma X1 X3 (X2 + X4)",
            &f[0] + &f[2],
            &two_g * &(&(&x[0] * &x[2]) * &(&x[1] + &x[3])),
        ),
        (
            "X~2 + X~4 = 2 gamma X2 X4 (X1 + X3)",
            &f[1] + &f[3],
            &two_g * &(&(&x[1] * &x[3]) * &(&x[0] + &x[2])),
        ),
    ];
    Ok(cases
        .into_iter()
        .map(|(name, lhs, rhs)| IdentityCheck {
            identity: name.to_string(),
            holds: lhs == rhs,
        })
        .collect())
}

/// Checks `f^* Q_l = (y + z - w)^2 Q_{l + gamma}` with `Q_l = w(x + y + z - w) + l z^2`
/// on the map of a four-variable instance.
pub fn pencil_identity(
    map: &BirationalMap,
    lambda: &Rational,
    gamma: &Rational,
) -> Result<bool, DarbouxError> {
    if map.nvars() != 4 {
        return Err(DarbouxError::NotFourVariables(map.nvars()));
    }
    let v = Polynomial::variables(4);
    let (x, y, z, w) = (&v[0], &v[1], &v[2], &v[3]);
    let q = |l: &Rational| -> Polynomial {
        let base = w * &(&(&(x + y) + z) - w);
        &base + &(z * z).scale(l)
    };
    let p = HomogeneousPolynomial::with_degree(q(lambda), 2)?;
    let lhs = map.pullback(&p)?;
    let k = &(y + z) - w;
    let rhs = &(&k * &k) * &q(&(lambda + gamma));
    Ok(lhs.poly() == &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_enumeration() {
        let m = monomials_of_degree(4, 2).unwrap();
        assert_eq!(m.len(), 10);
        assert_eq!(m[0], Monomial::new(&[2, 0, 0, 0]).unwrap());
        assert_eq!(m[9], Monomial::new(&[0, 0, 0, 2]).unwrap());
        assert_eq!(monomials_of_degree(4, 3).unwrap().len(), 20);
    }

    #[test]
    fn unconstrained_space_is_everything() {
        let inst = Instance::builtin("dp1-ercolani").unwrap();
        let b = constrained_space(&inst.charts, 4, &IndexConstraintQuery::unconstrained(1)).unwrap();
        assert_eq!(b.dimension(), 4);
        assert_eq!(b.strings(inst.variables()), ["x", "y", "z", "w"]);
    }

    #[test]
    fn coordinates_in_basis() {
        let inst = Instance::builtin("dp1-ercolani").unwrap();
        let q = IndexConstraintQuery::for_instance(&inst, 2).unwrap();
        let b = constrained_space(&inst.charts, 4, &q).unwrap();
        let p = inst.parse("w*(x + y + z - w) + 3*z^2").unwrap();
        let c = b.coordinates(&p).unwrap();
        assert_eq!(c, vec![Rational::one(), Rational::from_integer(3.into())]);
        assert!(!b.contains(&inst.parse("x^2").unwrap()));
        assert!(!b.contains(&inst.parse("x").unwrap()));
    }
}
