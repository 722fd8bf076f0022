use num_traits::Zero;
use serde::Serialize;

use super::compose::local_coordinates;
use super::{Chart, ChartError, RationalFunction};
use crate::birmap::BirationalMap;
use crate::poly::{Polynomial, Rational};

/// Where the points fed through the map come from.
#[derive(Debug, Clone, Copy)]
pub enum ImageSource<'a> {
    /// The exceptional divisor `u = 0` of a chart.
    Chart(&'a Chart),
    /// A linear hypersurface, given by its equation.
    Hypersurface(&'a Polynomial, &'a [String]),
}

/// What happens to `u = 0` of the source under the map, read in the target chart.
#[derive(Debug, Clone, Serialize)]
pub struct ImageReport {
    pub source: String,
    pub target: String,
    /// Order of vanishing of the target's `u` along the source's `u = 0`.
    pub u_power: i64,
    pub lands_in_exceptional: bool,
    /// All remaining target coordinates have a finite limit at `u = 0`.
    pub defined: bool,
    /// Some limit coordinate depends on the source coordinates.
    pub nonconstant: bool,
    /// The limit map has full rank, so it is generically finite onto the divisor.
    pub dominant: bool,
    /// Limits of the remaining target coordinates in the source variables.
    pub limits: Vec<Option<String>>,
    pub source_variables: Vec<String>,
    #[serde(skip)]
    pub limit_functions: Vec<Option<RationalFunction>>,
}

/// Chart whose `u` is the equation of a linear hypersurface.
pub fn hypersurface_chart(k: &Polynomial, names: &[String]) -> Result<Chart, ChartError> {
    let deg = k.homogeneous_degree().unwrap_or(0);
    if deg != 1 {
        return Err(ChartError::NonlinearHypersurface(deg));
    }
    let n = k.nvars();
    let coef = |i: usize| {
        let mut e = vec![0u32; n];
        e[i] = 1;
        k.coefficient(&crate::poly::Monomial::new(&e).expect("few variables"))
    };
    let j = (0..n)
        .rev()
        .find(|&i| !coef(i).is_zero())
        .expect("nonzero linear form");
    let h = (0..n).find(|&i| i != j).expect("at least two coordinates");
    let others: Vec<usize> = (0..n).filter(|&i| i != j && i != h).collect();
    let nloc = n - 1;
    let loc = Polynomial::variables(nloc);
    let mut coords = vec![Polynomial::zero(nloc); n];
    coords[h] = Polynomial::one(nloc);
    for (slot, &i) in others.iter().enumerate() {
        coords[i] = loc[slot + 1].clone();
    }
    // solve K = u for X_j
    let mut rest = loc[0].clone();
    for i in (0..n).filter(|&i| i != j) {
        rest = &rest - &coords[i].scale(&coef(i));
    }
    coords[j] = rest.scale(&(Rational::from_integer(1.into()) / coef(j)));
    let mut local_names = vec!["u".to_string()];
    local_names.extend(others.iter().map(|&i| names[i].clone()));
    Chart::new(format!("{{{}=0}}", k.to_string_with(names)), local_names, coords)
}

/// Pushes the source's `u = 0` through `f` and reads it in `target`'s coordinates.
pub fn exceptional_image_check(
    f: &BirationalMap,
    source: ImageSource<'_>,
    target: &Chart,
) -> Result<ImageReport, ChartError> {
    let owned;
    let src: &Chart = match source {
        ImageSource::Chart(c) => c,
        ImageSource::Hypersurface(k, names) => {
            owned = hypersurface_chart(k, names)?;
            &owned
        }
    };
    if src.ambient() != f.nvars() || target.ambient() != f.nvars() {
        return Err(ChartError::SpaceMismatch);
    }
    let steps = target.steps().ok_or(ChartError::NoSteps)?;
    let image: Vec<RationalFunction> = f
        .components()
        .iter()
        .map(|c| Ok(RationalFunction::from_poly(c.substitute(src.parametrization())?)))
        .collect::<Result<_, ChartError>>()?;
    let local = local_coordinates(steps, &image)?;
    let u_power = if local[0].is_zero() {
        i64::MAX
    } else {
        local[0].valuation(0)?
    };
    let limit_functions: Vec<Option<RationalFunction>> = local[1..]
        .iter()
        .map(|t| t.limit_at_zero(0))
        .collect::<Result<_, _>>()?;
    let defined = limit_functions.iter().all(Option::is_some);
    let nonconstant = limit_functions
        .iter()
        .any(|l| l.as_ref().is_some_and(|l| !l.is_constant()));
    let dominant = defined && {
        let fns: Vec<&RationalFunction> = limit_functions.iter().flatten().collect();
        let jac: Vec<Vec<RationalFunction>> = fns
            .iter()
            .map(|l| {
                (1..src.local_variables().len())
                    .map(|v| l.derivative(v))
                    .collect::<Result<_, _>>()
            })
            .collect::<Result<_, _>>()?;
        !rf_determinant(&jac).is_zero()
    };
    let names = src.local_variables().to_vec();
    Ok(ImageReport {
        source: src.name().to_string(),
        target: target.name().to_string(),
        u_power,
        lands_in_exceptional: u_power > 0,
        defined,
        nonconstant,
        dominant,
        limits: limit_functions
            .iter()
            .map(|l| l.as_ref().map(|l| l.to_string_with(&names)))
            .collect(),
        source_variables: names,
        limit_functions,
    })
}

fn rf_determinant(m: &[Vec<RationalFunction>]) -> RationalFunction {
    let n = m.len();
    let nv = m
        .first()
        .and_then(|r| r.first())
        .map_or(0, RationalFunction::nvars);
    match n {
        0 => RationalFunction::constant(nv, Rational::from_integer(1.into())),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = RationalFunction::zero(nv);
            for j in 0..n {
                let minor: Vec<Vec<RationalFunction>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][j].mul(&rf_determinant(&minor));
                acc = if j % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            acc
        }
    }
}
