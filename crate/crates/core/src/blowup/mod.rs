//! Local blow-up charts and indices of polynomials along exceptional divisors.

mod compose;
mod image;
mod rational;

use serde::Serialize;

use crate::poly::{PolyError, Polynomial, Rational};

use compose::compose_factored;
pub use compose::{compose_elementary, ElementaryStep};
pub use image::{exceptional_image_check, hypersurface_chart, ImageReport, ImageSource};
pub use rational::RationalFunction;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChartError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("chart needs at least one blow-up step")]
    NoSteps,
    #[error("step {0}: a chart must start with a point blow-up in the ambient space")]
    FirstStepNotPoint(usize),
    #[error("step {0}: only the first step may be a point blow-up in the ambient space")]
    SecondAmbientPoint(usize),
    #[error("step {step}: expected {expected} entries, got {got}")]
    Dimension {
        step: usize,
        expected: usize,
        got: usize,
    },
    #[error("step {0}: the affine chart coordinate vanishes at the center")]
    ZeroUnit(usize),
    #[error("step {0}: coordinate order must list every coordinate but the unit one exactly once")]
    BadOrder(usize),
    #[error("step {0}: center is not contained in the previous exceptional divisor")]
    CenterOffDivisor(usize),
    #[error("step {0}: local coordinate index out of range")]
    BadCoordinate(usize),
    #[error("step {0}: linear transform is singular")]
    SingularLinear(usize),
    #[error("chart {0}: parametrization vanishes identically")]
    Degenerate(String),
    #[error("chart {0}: closed form differs from the composed steps")]
    ClosedFormMismatch(String),
    #[error("duplicate chart name {0}")]
    DuplicateName(String),
    #[error("chart {name}: parametrization has {got} coordinates, expected {expected}")]
    AmbientMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("only linear hypersurfaces can serve as a source, got degree {0}")]
    NonlinearHypersurface(u32),
    #[error("source and target live in different spaces")]
    SpaceMismatch,
}

/// Descriptive data about a chart's tower of blow-ups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChartCenter {
    /// "point" or "curve", the kind of the last blow-up center.
    pub kind: String,
    /// Number of elementary blow-ups in the tower.
    pub depth: usize,
    /// Homogeneous coordinates of the chart at `u = 0`, when that is a point.
    pub base_point: Option<Vec<String>>,
}

/// A polynomial parametrization `(u, v, w, ...) -> [X_0 : ... : X_N]` with
/// the exceptional divisor at `u = 0`.
#[derive(Debug, Clone)]
pub struct Chart {
    name: String,
    local_variables: Vec<String>,
    parametrization: Vec<Polynomial>,
    steps: Option<Vec<ElementaryStep>>,
    center: ChartCenter,
    /// `parametrization = linear * inner` when the steps end in linear changes
    /// of ambient coordinates; indices are then taken through `inner`.
    factored: Option<(Vec<Vec<Rational>>, Vec<Polynomial>)>,
}

impl Chart {
    /// A chart from an explicit parametrization. The first local variable is `u`.
    pub fn new(
        name: impl Into<String>,
        local_variables: Vec<String>,
        parametrization: Vec<Polynomial>,
    ) -> Result<Self, ChartError> {
        let name = name.into();
        let nloc = local_variables.len();
        for p in &parametrization {
            if p.nvars() != nloc {
                return Err(PolyError::VariableCountMismatch {
                    left: nloc,
                    right: p.nvars(),
                }
                .into());
            }
        }
        if parametrization.iter().all(Polynomial::is_zero) {
            return Err(ChartError::Degenerate(name));
        }
        let base_point = base_point(&parametrization)?;
        Ok(Chart {
            name,
            local_variables,
            parametrization,
            steps: None,
            center: ChartCenter {
                kind: "point".into(),
                depth: 1,
                base_point: base_point.map(|v| v.iter().map(|c| c.to_string()).collect()),
            },
            factored: None,
        })
    }

    /// A chart composed from elementary steps. When `closed_form` is given it
    /// must agree with the composition exactly.
    pub fn from_steps(
        name: impl Into<String>,
        local_variables: Vec<String>,
        ambient: usize,
        steps: Vec<ElementaryStep>,
        closed_form: Option<Vec<Polynomial>>,
    ) -> Result<Self, ChartError> {
        let name = name.into();
        let (linear, inner) = compose_factored(&steps, ambient, local_variables.len())?;
        let composed = compose_elementary(&steps, ambient, local_variables.len())?;
        if let Some(cf) = closed_form {
            if cf != composed {
                return Err(ChartError::ClosedFormMismatch(name));
            }
        }
        let mut chart = Chart::new(name, local_variables, composed)?;
        chart.center.depth = steps
            .iter()
            .filter(|s| !matches!(s, ElementaryStep::Linear { .. }))
            .count();
        chart.center.kind = match steps
            .iter()
            .rev()
            .find(|s| !matches!(s, ElementaryStep::Linear { .. }))
        {
            Some(ElementaryStep::Curve { .. }) => "curve".into(),
            _ => "point".into(),
        };
        chart.steps = Some(steps);
        if linear != crate::linalg::identity(ambient) {
            chart.factored = Some((linear, inner));
        }
        Ok(chart)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn local_variables(&self) -> &[String] {
        &self.local_variables
    }

    pub fn parametrization(&self) -> &[Polynomial] {
        &self.parametrization
    }

    pub fn steps(&self) -> Option<&[ElementaryStep]> {
        self.steps.as_deref()
    }

    pub fn center(&self) -> &ChartCenter {
        &self.center
    }

    /// Number of ambient homogeneous coordinates.
    pub fn ambient(&self) -> usize {
        self.parametrization.len()
    }

    /// `u`-adic valuation of `p` composed with the chart.
    pub fn index(&self, p: &Polynomial) -> Result<u32, ChartError> {
        if p.nvars() != self.ambient() {
            return Err(PolyError::LengthMismatch {
                expected: p.nvars(),
                got: self.ambient(),
            }
            .into());
        }
        if p.is_zero() {
            return Err(PolyError::ZeroValuation.into());
        }
        let owned;
        let (p, param) = match &self.factored {
            Some((linear, inner)) => {
                owned = p.linear_substitute(linear)?;
                (&owned, inner.as_slice())
            }
            None => (p, self.parametrization.as_slice()),
        };
        let deg = p.total_degree().unwrap_or(0);
        // past this bound truncation drops nothing
        let max_u = param.iter().map(|q| q.degree_in(0)).max().unwrap_or(0);
        let full = deg.saturating_mul(max_u).saturating_add(1);
        let mut bound = 8u32.min(full);
        loop {
            let t = p.substitute_truncated(param, 0, bound)?;
            if !t.is_zero() {
                return Ok(t.u_valuation(0)?);
            }
            if bound >= full {
                return Err(PolyError::ZeroValuation.into());
            }
            bound = bound.saturating_mul(2).min(full);
        }
    }

    /// Full composition `p o chart`.
    pub fn pull(&self, p: &Polynomial) -> Result<Polynomial, ChartError> {
        Ok(p.substitute(&self.parametrization)?)
    }

    /// Text of each parametrization coordinate in the local variable names.
    pub fn parametrization_strings(&self) -> Vec<String> {
        self.parametrization
            .iter()
            .map(|p| p.to_string_with(&self.local_variables))
            .collect()
    }
}

/// Value of the parametrization at `u = 0` when it does not depend on the
/// other local variables there.
fn base_point(param: &[Polynomial]) -> Result<Option<Vec<Rational>>, PolyError> {
    let mut out = Vec::with_capacity(param.len());
    for p in param {
        let at0 = p.specialize(0, &Rational::from_integer(0.into()))?;
        if !at0.is_constant() {
            return Ok(None);
        }
        out.push(at0.constant_term());
    }
    Ok(Some(out))
}

/// Ordered charts of one instance; the order fixes the index-vector layout.
#[derive(Debug, Clone, Default)]
pub struct ChartSet {
    charts: Vec<Chart>,
}

impl ChartSet {
    pub fn new(charts: Vec<Chart>) -> Result<Self, ChartError> {
        let mut seen = std::collections::HashSet::new();
        let ambient = charts.first().map(Chart::ambient);
        for c in &charts {
            if !seen.insert(c.name.clone()) {
                return Err(ChartError::DuplicateName(c.name.clone()));
            }
            if Some(c.ambient()) != ambient {
                return Err(ChartError::AmbientMismatch {
                    name: c.name.clone(),
                    expected: ambient.unwrap_or(0),
                    got: c.ambient(),
                });
            }
        }
        Ok(ChartSet { charts })
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn len(&self) -> usize {
        self.charts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.charts.iter().map(|c| c.name.clone()).collect()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.charts.iter().position(|c| c.name == name)
    }

    pub fn get(&self, name: &str) -> Option<&Chart> {
        self.charts.iter().find(|c| c.name == name)
    }

    /// Index of `p` at every chart, evaluated in parallel.
    pub fn indices(&self, p: &Polynomial) -> Result<Vec<u32>, ChartError> {
        use rayon::prelude::*;
        self.charts.par_iter().map(|c| c.index(p)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, ParseContext};

    fn local() -> Vec<String> {
        ["u", "v", "w"].iter().map(|s| s.to_string()).collect()
    }

    fn lp(s: &str) -> Polynomial {
        parse_polynomial(s, &ParseContext::new(&local())).unwrap()
    }

    fn ap(s: &str) -> Polynomial {
        let names: Vec<String> = ["x", "y", "z", "w"].iter().map(|s| s.to_string()).collect();
        parse_polynomial(s, &ParseContext::new(&names)).unwrap()
    }

    #[test]
    fn index_at_closed_form_charts() {
        let phi10 = Chart::new("phi10", local(), vec![lp("1"), lp("u*v"), lp("u"), lp("u^2*w")]).unwrap();
        let phi8 = Chart::new(
            "phi8",
            local(),
            vec![lp("-2*u^2 + u^3*v"), lp("1 - u + u^2*w"), lp("u"), lp("1")],
        )
        .unwrap();
        let k = ap("y + z - w");
        assert_eq!(phi10.index(&k).unwrap(), 1);
        assert_eq!(phi8.index(&k).unwrap(), 2);
        assert_eq!(phi10.index(&ap("x + 3*y + 5*z + 7*w")).unwrap(), 0);
        assert_eq!(phi10.index(&k.pow(40)).unwrap(), 40);
        assert!(phi10.index(&Polynomial::zero(4)).is_err());
    }

    #[test]
    fn duplicate_names_rejected() {
        let c = Chart::new("a", local(), vec![lp("1"), lp("u"), lp("u*v"), lp("u*w")]).unwrap();
        assert!(matches!(
            ChartSet::new(vec![c.clone(), c]),
            Err(ChartError::DuplicateName(_))
        ));
    }
}
