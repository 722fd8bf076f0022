//! Instance documents: a map with its charts, recursion data and defaults.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::birmap::{BirationalMap, MapError};
use crate::blowup::{Chart, ChartError, ChartSet, ElementaryStep};
use crate::picard::{PicardError, PushforwardMatrix};
use crate::poly::{self, HomogeneousPolynomial, ParseContext, PolyError, Polynomial, Rational};
use crate::sequence::{AffineSystem, SequenceError};

pub const BUILTIN_NAMES: [&str; 3] = ["khk-euler", "dp1-ercolani", "inflated-qrt"];

const KHK_EULER: &str = include_str!("../instances/khk-euler.json");
const DP1_ERCOLANI: &str = include_str!("../instances/dp1-ercolani.json");
const INFLATED_QRT: &str = include_str!("../instances/inflated-qrt.json");

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("unknown instance {0:?}")]
    Unknown(String),
    #[error("malformed instance document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{context}: {source}")]
    Poly { context: String, source: PolyError },
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("chart {name}: {source}")]
    Chart { name: String, source: ChartError },
    #[error(transparent)]
    Charts(#[from] ChartError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Picard(#[from] PicardError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub variables: Vec<String>,
    #[serde(default)]
    pub parameters: BTreeMap<String, String>,
    pub components: Vec<String>,
    #[serde(default)]
    pub critical_factors: Vec<FactorDoc>,
    #[serde(default)]
    pub inverse: Option<Vec<String>>,
    /// Optional factorization of the map, first stage first.
    #[serde(default)]
    pub stages: Option<Vec<Vec<String>>>,
    pub charts: ChartsDoc,
    #[serde(default)]
    pub affine: Option<AffineDoc>,
    #[serde(default)]
    pub picard: Option<PicardDoc>,
    #[serde(default)]
    pub seed: Option<String>,
    #[serde(default)]
    pub nmax: Option<usize>,
    #[serde(default)]
    pub alpha_chart: Option<String>,
    #[serde(default)]
    pub darboux: Option<DarbouxDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorDoc {
    pub polynomial: String,
    /// Chart whose index equals the exponent of this factor in proper pull-backs.
    #[serde(default)]
    pub chart: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartsDoc {
    pub local_variables: Vec<String>,
    pub list: Vec<ChartDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDoc {
    pub name: String,
    #[serde(default)]
    pub steps: Option<Vec<StepDoc>>,
    /// Closed form; checked against the steps when both are present.
    #[serde(default)]
    pub parametrization: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StepDoc {
    Point {
        center: Vec<String>,
        unit: String,
        order: Vec<String>,
    },
    PointInExceptional {
        center: Vec<String>,
    },
    Curve {
        coordinate: String,
        graph: String,
    },
    Linear {
        matrix: Vec<Vec<String>>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineDoc {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
    pub offset: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardDoc {
    pub labels: Vec<String>,
    /// Rows of the matrix; column `j` is the image of basis class `j`.
    #[serde(default)]
    pub matrix: Option<Vec<Vec<i64>>>,
    /// Image of every basis class as an expression like `H - F1`.
    #[serde(default)]
    pub images: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DarbouxDoc {
    pub charts: Vec<String>,
    pub bound: BoundDoc,
}

/// Minimum index: a fixed number, or `"degree"` for the polynomial degree.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum BoundDoc {
    Fixed(u32),
    Named(String),
}

/// Everything needed to run the engines on one map.
#[derive(Debug, Clone)]
pub struct Instance {
    pub key: String,
    pub description: String,
    pub map: BirationalMap,
    pub charts: ChartSet,
    /// For every critical factor, the chart whose index it tracks.
    pub factor_charts: Vec<Option<String>>,
    pub affine: Option<AffineSystem>,
    pub picard: Option<PushforwardMatrix>,
    pub picard_images: Option<Vec<String>>,
    pub seed: HomogeneousPolynomial,
    pub nmax: usize,
    pub alpha_chart: Option<String>,
    pub darboux: Option<DarbouxDoc>,
    pub parameters: BTreeMap<String, Rational>,
    pub local_variables: Vec<String>,
}

impl Instance {
    pub fn builtin(key: &str) -> Result<Self, InstanceError> {
        Self::builtin_with(key, &[])
    }

    /// Built-in instance with parameter overrides such as `("gamma", "1")`.
    pub fn builtin_with(key: &str, overrides: &[(&str, &str)]) -> Result<Self, InstanceError> {
        let src = builtin_source(key).ok_or_else(|| InstanceError::Unknown(key.into()))?;
        Self::from_json_with(src, overrides)
    }

    pub fn from_json(src: &str) -> Result<Self, InstanceError> {
        Self::from_json_with(src, &[])
    }

    /// A JSON document with parameter overrides; every override must name a
    /// parameter the document declares.
    pub fn from_json_with(src: &str, overrides: &[(&str, &str)]) -> Result<Self, InstanceError> {
        let mut doc: InstanceDoc = serde_json::from_str(src)?;
        for (k, v) in overrides {
            if !doc.parameters.contains_key(*k) {
                return Err(InstanceError::Invalid(format!(
                    "instance {} has no parameter {k:?}",
                    doc.name
                )));
            }
            doc.parameters.insert((*k).to_string(), (*v).to_string());
        }
        Self::from_doc(doc)
    }

    /// A built-in key or a path to a JSON document.
    pub fn load(spec: &str) -> Result<Self, InstanceError> {
        Self::load_with(spec, &[])
    }

    pub fn load_with(spec: &str, overrides: &[(&str, &str)]) -> Result<Self, InstanceError> {
        if let Some(src) = builtin_source(spec) {
            return Self::from_json_with(src, overrides);
        }
        let src = std::fs::read_to_string(spec).map_err(|e| InstanceError::Io {
            path: spec.into(),
            msg: e.to_string(),
        })?;
        Self::from_json_with(&src, overrides)
    }

    pub fn from_doc(doc: InstanceDoc) -> Result<Self, InstanceError> {
        let mut params = HashMap::new();
        let mut parameters = BTreeMap::new();
        for (k, v) in &doc.parameters {
            let q = poly::rational(v).map_err(|e| InstanceError::Poly {
                context: format!("parameter {k}"),
                source: e,
            })?;
            params.insert(k.clone(), q.clone());
            parameters.insert(k.clone(), q);
        }
        let amb = ParseContext::with_parameters(&doc.variables, params.clone());
        let loc = ParseContext::with_parameters(&doc.charts.local_variables, params);
        let parse = |ctx: &ParseContext, s: &str, what: &str| {
            poly::parse_polynomial(s, ctx).map_err(|e| InstanceError::Poly {
                context: format!("{what} {s:?}"),
                source: e,
            })
        };
        let parse_all =
            |ctx: &ParseContext, v: &[String], what: &str| -> Result<Vec<Polynomial>, InstanceError> {
                v.iter().map(|s| parse(ctx, s, what)).collect()
            };
        let constant = |s: &str| -> Result<Rational, InstanceError> {
            let p = parse(&loc, s, "constant")?;
            if !p.is_constant() {
                return Err(InstanceError::Invalid(format!("{s:?} is not a constant")));
            }
            Ok(p.constant_term())
        };

        let comps = parse_all(&amb, &doc.components, "component")?;
        let factors: Vec<Polynomial> = doc
            .critical_factors
            .iter()
            .map(|f| parse(&amb, &f.polynomial, "critical factor"))
            .collect::<Result<_, _>>()?;
        let mut map = BirationalMap::new(doc.name.clone(), doc.variables.clone(), comps, factors)?;
        if let Some(stages) = &doc.stages {
            let st = stages
                .iter()
                .map(|s| parse_all(&amb, s, "stage"))
                .collect::<Result<Vec<_>, _>>()?;
            map = map.with_stages(st)?;
        }
        if let Some(inv) = &doc.inverse {
            map = map.with_inverse(parse_all(&amb, inv, "inverse component")?)?;
        }
        let report = map.validate_critical_factors()?;
        if !report.ok {
            return Err(InstanceError::Invalid(format!(
                "declared critical factors do not all divide the Jacobian: {:?}",
                report.factors
            )));
        }

        let n = doc.variables.len();
        let locals = &doc.charts.local_variables;
        if locals.len() + 1 != n {
            return Err(InstanceError::Invalid(format!(
                "{} local variables for {} homogeneous coordinates",
                locals.len(),
                n
            )));
        }
        let var_index = |name: &str, list: &[String]| {
            list.iter()
                .position(|v| v == name)
                .ok_or_else(|| InstanceError::Invalid(format!("unknown variable {name:?}")))
        };
        let mut charts = Vec::with_capacity(doc.charts.list.len());
        for c in &doc.charts.list {
            let closed = match &c.parametrization {
                Some(p) => Some(parse_all(&loc, p, "parametrization")?),
                None => None,
            };
            let chart_err = |source| InstanceError::Chart {
                name: c.name.clone(),
                source,
            };
            let chart = match (&c.steps, closed) {
                (Some(steps), closed) => {
                    let mut es = Vec::with_capacity(steps.len());
                    for s in steps {
                        es.push(match s {
                            StepDoc::Point { center, unit, order } => ElementaryStep::point(
                                center.iter().map(|x| constant(x)).collect::<Result<_, _>>()?,
                                var_index(unit, &doc.variables)?,
                                order
                                    .iter()
                                    .map(|o| var_index(o, &doc.variables))
                                    .collect::<Result<_, _>>()?,
                            ),
                            StepDoc::PointInExceptional { center } => ElementaryStep::point_in_exceptional(
                                center.iter().map(|x| constant(x)).collect::<Result<_, _>>()?,
                            ),
                            StepDoc::Curve { coordinate, graph } => ElementaryStep::curve(
                                var_index(coordinate, locals)?,
                                parse(&loc, graph, "curve graph")?,
                                locals,
                            ),
                            StepDoc::Linear { matrix } => ElementaryStep::linear(
                                matrix
                                    .iter()
                                    .map(|r| r.iter().map(|x| constant(x)).collect::<Result<_, _>>())
                                    .collect::<Result<_, _>>()?,
                            ),
                        });
                    }
                    Chart::from_steps(c.name.clone(), locals.clone(), n, es, closed).map_err(chart_err)?
                }
                (None, Some(p)) => Chart::new(c.name.clone(), locals.clone(), p).map_err(chart_err)?,
                (None, None) => {
                    return Err(InstanceError::Invalid(format!(
                        "chart {} needs steps or a parametrization",
                        c.name
                    )))
                }
            };
            if chart.ambient() != n {
                return Err(InstanceError::Invalid(format!(
                    "chart {} has the wrong ambient size",
                    c.name
                )));
            }
            charts.push(chart);
        }
        let charts = ChartSet::new(charts)?;
        let known = |name: &str| -> Result<(), InstanceError> {
            charts
                .position(name)
                .map(|_| ())
                .ok_or_else(|| InstanceError::Invalid(format!("unknown chart {name:?}")))
        };
        let factor_charts: Vec<Option<String>> =
            doc.critical_factors.iter().map(|f| f.chart.clone()).collect();
        for c in factor_charts.iter().flatten() {
            known(c)?;
        }

        let affine = match &doc.affine {
            Some(a) => {
                for l in a.labels.iter().filter(|l| *l != "d") {
                    known(l)?;
                }
                Some(AffineSystem::from_ints(a.labels.clone(), &a.matrix, &a.offset)?)
            }
            None => None,
        };
        let (picard, picard_images) = match &doc.picard {
            Some(p) => {
                let m = match (&p.matrix, &p.images) {
                    (Some(rows), images) => {
                        let m = PushforwardMatrix::new(p.labels.clone(), rows.clone())?;
                        if let Some(img) = images {
                            m.check_transcription(img)?;
                        }
                        m
                    }
                    (None, Some(img)) => PushforwardMatrix::from_images(p.labels.clone(), img)?,
                    (None, None) => {
                        return Err(InstanceError::Invalid(
                            "picard block needs a matrix or images".into(),
                        ))
                    }
                };
                if p.labels.first().map(String::as_str) != Some("H") {
                    return Err(InstanceError::Invalid("first lattice label must be H".into()));
                }
                (Some(m), p.images.clone())
            }
            None => (None, None),
        };
        if let Some(a) = &doc.alpha_chart {
            known(a)?;
        }
        if let Some(d) = &doc.darboux {
            for c in &d.charts {
                known(c)?;
            }
            if let BoundDoc::Named(s) = &d.bound {
                if s != "degree" {
                    return Err(InstanceError::Invalid(format!("unknown bound {s:?}")));
                }
            }
        }

        let seed_src = doc.seed.clone().unwrap_or_else(|| default_seed(&doc.variables));
        let seed =
            HomogeneousPolynomial::new(parse(&amb, &seed_src, "seed")?).map_err(|e| InstanceError::Poly {
                context: "seed".into(),
                source: e,
            })?;
        let seed = crate::sequence::preflight_seed(&seed, &charts)?;

        Ok(Instance {
            key: doc.name.clone(),
            description: doc.description.clone(),
            map,
            charts,
            factor_charts,
            affine,
            picard,
            picard_images,
            seed,
            nmax: doc.nmax.unwrap_or(8),
            alpha_chart: doc.alpha_chart.clone(),
            darboux: doc.darboux.clone(),
            parameters,
            local_variables: doc.charts.local_variables.clone(),
        })
    }

    pub fn variables(&self) -> &[String] {
        self.map.variables()
    }

    /// Parses a polynomial in the ambient variables with this instance's parameters.
    pub fn parse(&self, src: &str) -> Result<Polynomial, PolyError> {
        let ctx =
            ParseContext::with_parameters(self.variables(), self.parameters.clone().into_iter().collect());
        poly::parse_polynomial(src, &ctx)
    }

    pub fn parameter(&self, name: &str) -> Option<&Rational> {
        self.parameters.get(name)
    }
}

fn default_seed(vars: &[String]) -> String {
    const COEFFS: [u32; 8] = [1, 3, 5, 7, 11, 13, 17, 19];
    vars.iter()
        .zip(COEFFS)
        .map(|(v, c)| if c == 1 { v.clone() } else { format!("{c}*{v}") })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn builtin_source(key: &str) -> Option<&'static str> {
    match key {
        "khk-euler" => Some(KHK_EULER),
        "dp1-ercolani" => Some(DP1_ERCOLANI),
        "inflated-qrt" => Some(INFLATED_QRT),
        _ => None,
    }
}
