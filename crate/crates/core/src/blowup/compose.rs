use num_traits::Zero;
use serde::Serialize;

use super::{ChartError, RationalFunction};
use crate::linalg;
use crate::poly::{Polynomial, Rational};

/// One elementary blow-up in a tower, in the chart the index is read in.
///
/// Local coordinates are `(u, t_1, ..., t_{N-1})`; the exceptional divisor
/// of every step is `u = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementaryStep {
    /// Blow-up of an ambient point, affine chart `X_unit = 1`:
    /// `X_order[0] = c + u`, `X_order[k] = c + u*t_k`.
    Point {
        center: Vec<String>,
        #[serde(skip)]
        center_values: Vec<Rational>,
        unit: usize,
        order: Vec<usize>,
    },
    /// Blow-up of the point `t = c` of the previous exceptional divisor:
    /// `t_k = c_k + u*t_k`.
    PointInExceptional {
        center: Vec<String>,
        #[serde(skip)]
        center_values: Vec<Rational>,
    },
    /// Blow-up of the curve `{u = 0, t_j = g}` inside the previous
    /// exceptional divisor: `t_j = g + u*t_j`.
    Curve {
        coordinate: usize,
        graph: String,
        #[serde(skip)]
        graph_poly: Polynomial,
    },
    /// Projective linear change of ambient coordinates applied to the result.
    Linear {
        matrix: Vec<Vec<String>>,
        #[serde(skip)]
        values: Vec<Vec<Rational>>,
    },
}

impl ElementaryStep {
    pub fn point(center: Vec<Rational>, unit: usize, order: Vec<usize>) -> Self {
        ElementaryStep::Point {
            center: center.iter().map(|c| c.to_string()).collect(),
            center_values: center,
            unit,
            order,
        }
    }

    pub fn point_in_exceptional(center: Vec<Rational>) -> Self {
        ElementaryStep::PointInExceptional {
            center: center.iter().map(|c| c.to_string()).collect(),
            center_values: center,
        }
    }

    /// `graph` is a polynomial in the local variables; `names` renders it.
    pub fn curve(coordinate: usize, graph: Polynomial, names: &[String]) -> Self {
        ElementaryStep::Curve {
            coordinate,
            graph: graph.to_string_with(names),
            graph_poly: graph,
        }
    }

    pub fn linear(values: Vec<Vec<Rational>>) -> Self {
        ElementaryStep::Linear {
            matrix: values
                .iter()
                .map(|r| r.iter().map(|c| c.to_string()).collect())
                .collect(),
            values,
        }
    }
}

fn local_identity(nloc: usize) -> Vec<Polynomial> {
    Polynomial::variables(nloc)
}

/// Composes a tower of elementary blow-ups into one parametrization of the
/// `ambient` homogeneous coordinates by `ambient - 1` local variables.
pub fn compose_elementary(
    steps: &[ElementaryStep],
    ambient: usize,
    nloc: usize,
) -> Result<Vec<Polynomial>, ChartError> {
    let (linear, coords) = compose_factored(steps, ambient, nloc)?;
    Ok(apply_linear(&linear, &coords))
}

/// The composition split as `linear * coords`, with all linear steps gathered
/// into one ambient matrix.
pub(crate) fn compose_factored(
    steps: &[ElementaryStep],
    ambient: usize,
    nloc: usize,
) -> Result<(linalg::Matrix, Vec<Polynomial>), ChartError> {
    if steps.is_empty() {
        return Err(ChartError::NoSteps);
    }
    if nloc + 1 != ambient {
        return Err(ChartError::Dimension {
            step: 0,
            expected: ambient - 1,
            got: nloc,
        });
    }
    let mut coords: Option<Vec<Polynomial>> = None;
    let mut linear = linalg::identity(ambient);
    for (i, step) in steps.iter().enumerate() {
        match step {
            ElementaryStep::Point {
                center_values,
                unit,
                order,
                ..
            } => {
                if coords.is_some() {
                    return Err(ChartError::SecondAmbientPoint(i));
                }
                coords = Some(point_chart(i, center_values, *unit, order, ambient)?);
            }
            ElementaryStep::PointInExceptional { center_values, .. } => {
                let c = coords.as_ref().ok_or(ChartError::FirstStepNotPoint(i))?;
                if center_values.len() != nloc - 1 {
                    return Err(ChartError::Dimension {
                        step: i,
                        expected: nloc - 1,
                        got: center_values.len(),
                    });
                }
                let mut sub = local_identity(nloc);
                let u = sub[0].clone();
                for (k, ck) in center_values.iter().enumerate() {
                    let t = sub[k + 1].clone();
                    sub[k + 1] = &Polynomial::constant(nloc, ck.clone()) + &(&u * &t);
                }
                coords = Some(substitute_all(c, &sub)?);
            }
            ElementaryStep::Curve {
                coordinate,
                graph_poly,
                ..
            } => {
                let c = coords.as_ref().ok_or(ChartError::FirstStepNotPoint(i))?;
                let j = *coordinate;
                if j == 0 || j >= nloc {
                    return Err(ChartError::BadCoordinate(i));
                }
                if graph_poly.nvars() != nloc {
                    return Err(ChartError::Dimension {
                        step: i,
                        expected: nloc,
                        got: graph_poly.nvars(),
                    });
                }
                if graph_poly.degree_in(0) > 0 || graph_poly.degree_in(j) > 0 {
                    return Err(ChartError::CenterOffDivisor(i));
                }
                let mut sub = local_identity(nloc);
                let ut = &sub[0] * &sub[j];
                sub[j] = graph_poly + &ut;
                coords = Some(substitute_all(c, &sub)?);
            }
            ElementaryStep::Linear { values, .. } => {
                if coords.is_none() {
                    return Err(ChartError::FirstStepNotPoint(i));
                }
                if values.len() != ambient || values.iter().any(|r| r.len() != ambient) {
                    return Err(ChartError::Dimension {
                        step: i,
                        expected: ambient,
                        got: values.len(),
                    });
                }
                if linalg::inverse(values).is_none() {
                    return Err(ChartError::SingularLinear(i));
                }
                linear = linalg::mat_mul(values, &linear);
            }
        }
    }
    let coords = coords.ok_or(ChartError::FirstStepNotPoint(0))?;
    Ok((linear, coords))
}

fn point_chart(
    step: usize,
    center: &[Rational],
    unit: usize,
    order: &[usize],
    ambient: usize,
) -> Result<Vec<Polynomial>, ChartError> {
    let nloc = ambient - 1;
    if center.len() != ambient {
        return Err(ChartError::Dimension {
            step,
            expected: ambient,
            got: center.len(),
        });
    }
    if unit >= ambient || center[unit].is_zero() {
        return Err(ChartError::ZeroUnit(step));
    }
    let mut sorted: Vec<usize> = order.to_vec();
    sorted.sort_unstable();
    let expected: Vec<usize> = (0..ambient).filter(|&k| k != unit).collect();
    if sorted != expected {
        return Err(ChartError::BadOrder(step));
    }
    let scale = center[unit].clone();
    let locals = Polynomial::variables(nloc);
    let mut coords = vec![Polynomial::zero(nloc); ambient];
    coords[unit] = Polynomial::one(nloc);
    for (k, &axis) in order.iter().enumerate() {
        let c = Polynomial::constant(nloc, &center[axis] / &scale);
        let offset = if k == 0 {
            locals[0].clone()
        } else {
            &locals[0] * &locals[k]
        };
        coords[axis] = &c + &offset;
    }
    Ok(coords)
}

fn substitute_all(coords: &[Polynomial], sub: &[Polynomial]) -> Result<Vec<Polynomial>, ChartError> {
    Ok(coords
        .iter()
        .map(|c| c.substitute(sub))
        .collect::<Result<Vec<_>, _>>()?)
}

fn apply_linear(m: &linalg::Matrix, coords: &[Polynomial]) -> Vec<Polynomial> {
    let nloc = coords[0].nvars();
    m.iter()
        .map(|row| {
            row.iter()
                .zip(coords)
                .filter(|(a, _)| !a.is_zero())
                .fold(Polynomial::zero(nloc), |acc, (a, c)| &acc + &c.scale(a))
        })
        .collect()
}

/// Local chart coordinates of a point given by homogeneous coordinates,
/// following the steps backwards. Entries are rational functions in whatever
/// variables `point` uses.
pub(crate) fn local_coordinates(
    steps: &[ElementaryStep],
    point: &[RationalFunction],
) -> Result<Vec<RationalFunction>, ChartError> {
    let ambient = point.len();
    let nvars = point[0].nvars();
    let mut linear = linalg::identity(ambient);
    for (i, s) in steps.iter().enumerate() {
        if let ElementaryStep::Linear { values, .. } = s {
            if linalg::inverse(values).is_none() {
                return Err(ChartError::SingularLinear(i));
            }
            linear = linalg::mat_mul(values, &linear);
        }
    }
    let inv = linalg::inverse(&linear).expect("product of invertible matrices");
    let pre: Vec<RationalFunction> = inv
        .iter()
        .map(|row| {
            row.iter()
                .zip(point)
                .fold(RationalFunction::zero(nvars), |acc, (a, x)| {
                    if a.is_zero() {
                        acc
                    } else {
                        acc.add(&x.scale(a))
                    }
                })
        })
        .collect();
    let mut local: Vec<RationalFunction> = Vec::new();
    for (i, s) in steps.iter().enumerate() {
        match s {
            ElementaryStep::Point {
                center_values,
                unit,
                order,
                ..
            } => {
                let scale = &center_values[*unit];
                let affine = |axis: usize| {
                    pre[axis]
                        .div(&pre[*unit])
                        .sub(&RationalFunction::constant(nvars, &center_values[axis] / scale))
                };
                let u = affine(order[0]);
                local = vec![u.clone()];
                for &axis in &order[1..] {
                    local.push(affine(axis).div(&u));
                }
            }
            ElementaryStep::PointInExceptional { center_values, .. } => {
                let u = local[0].clone();
                for (k, ck) in center_values.iter().enumerate() {
                    local[k + 1] = local[k + 1]
                        .sub(&RationalFunction::constant(nvars, ck.clone()))
                        .div(&u);
                }
            }
            ElementaryStep::Curve {
                coordinate,
                graph_poly,
                ..
            } => {
                let g = RationalFunction::evaluate(graph_poly, &local)?;
                local[*coordinate] = local[*coordinate].sub(&g).div(&local[0]);
            }
            ElementaryStep::Linear { .. } => {}
        }
        if local.iter().any(RationalFunction::has_zero_denominator) {
            return Err(ChartError::CenterOffDivisor(i));
        }
    }
    Ok(local)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, ParseContext};

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn local() -> Vec<String> {
        ["u", "v", "w"].iter().map(|s| s.to_string()).collect()
    }

    fn lp(s: &str) -> Polynomial {
        parse_polynomial(s, &ParseContext::new(&local())).unwrap()
    }

    #[test]
    fn single_point_blowup() {
        let steps = vec![ElementaryStep::point(
            vec![q(1), q(0), q(0), q(0)],
            0,
            vec![1, 2, 3],
        )];
        let c = compose_elementary(&steps, 4, 3).unwrap();
        assert_eq!(c, vec![lp("1"), lp("u"), lp("u*v"), lp("u*w")]);
    }

    #[test]
    fn tower_with_point_and_curve() {
        let steps = vec![
            ElementaryStep::point(vec![q(1), q(0), q(0), q(1)], 0, vec![2, 1, 3]),
            ElementaryStep::point_in_exceptional(vec![q(0), q(1)]),
            ElementaryStep::curve(1, lp("2"), &local()),
        ];
        let c = compose_elementary(&steps, 4, 3).unwrap();
        assert_eq!(
            c,
            vec![lp("1"), lp("2*u^2 + u^3*v"), lp("u"), lp("1 + u + u^2*w")]
        );
    }

    #[test]
    fn malformed_steps() {
        let pt = ElementaryStep::point(vec![q(1), q(0), q(0), q(0)], 0, vec![1, 2, 3]);
        assert_eq!(compose_elementary(&[], 4, 3), Err(ChartError::NoSteps));
        assert_eq!(
            compose_elementary(&[ElementaryStep::point_in_exceptional(vec![q(0), q(0)])], 4, 3),
            Err(ChartError::FirstStepNotPoint(0))
        );
        assert_eq!(
            compose_elementary(
                &[ElementaryStep::point(
                    vec![q(0), q(1), q(0), q(0)],
                    0,
                    vec![1, 2, 3]
                )],
                4,
                3
            ),
            Err(ChartError::ZeroUnit(0))
        );
        assert_eq!(
            compose_elementary(
                &[ElementaryStep::point(
                    vec![q(1), q(0), q(0), q(0)],
                    0,
                    vec![1, 1, 3]
                )],
                4,
                3
            ),
            Err(ChartError::BadOrder(0))
        );
        assert_eq!(
            compose_elementary(&[pt.clone(), ElementaryStep::curve(1, lp("u"), &local())], 4, 3),
            Err(ChartError::CenterOffDivisor(1))
        );
        assert_eq!(
            compose_elementary(&[pt, ElementaryStep::curve(2, lp("w + 1"), &local())], 4, 3),
            Err(ChartError::CenterOffDivisor(1))
        );
    }
}
