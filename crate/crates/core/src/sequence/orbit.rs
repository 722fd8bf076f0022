use serde::Serialize;

use crate::birmap::{BirationalMap, MapError};
use crate::blowup::ChartSet;
use crate::poly::{HomogeneousPolynomial, Monomial, PolyError, Polynomial, Rational};

use super::SequenceError;

/// Environment variable overriding the default term ceiling.
pub const MAX_TERMS_ENV: &str = "BIRAT_MAX_TERMS";
pub const DEFAULT_MAX_TERMS: usize = 2_000_000;

pub fn default_max_terms() -> usize {
    std::env::var(MAX_TERMS_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_TERMS)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitRow {
    pub n: usize,
    pub degree: u32,
    /// Index of `P_n` at every chart, in chart-set order.
    pub indices: Vec<u32>,
    /// Exponent of every critical factor removed to get `P_n` from `f^*P_{n-1}`;
    /// all zero in row 0.
    pub removed: Vec<u32>,
    pub terms: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitTable {
    pub map: String,
    pub charts: Vec<String>,
    pub rows: Vec<OrbitRow>,
    /// Why the run stopped before `nmax`, if it did.
    pub truncated: Option<String>,
}

impl OrbitTable {
    pub fn is_complete(&self) -> bool {
        self.truncated.is_none()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r.degree).collect()
    }

    pub fn degrees_rational(&self) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|r| Rational::from_integer(r.degree.into()))
            .collect()
    }

    pub fn column(&self, chart: &str) -> Option<Vec<u32>> {
        let i = self.charts.iter().position(|c| c == chart)?;
        Some(self.rows.iter().map(|r| r.indices[i]).collect())
    }

    /// Values of `labels` in row `n`; `d` is the degree, anything else a chart.
    pub fn state(&self, n: usize, labels: &[String]) -> Result<Vec<Rational>, SequenceError> {
        let row = self.rows.get(n).ok_or(SequenceError::MissingRow(n))?;
        labels
            .iter()
            .map(|l| {
                let v = if l == "d" {
                    row.degree
                } else {
                    let i = self
                        .charts
                        .iter()
                        .position(|c| c == l)
                        .ok_or_else(|| SequenceError::UnknownLabel(l.clone()))?;
                    row.indices[i]
                };
                Ok(Rational::from_integer(v.into()))
            })
            .collect()
    }

    /// First row `n + 1` breaking `deg P_{n+1} = deg f * deg P_n - sum nu_i deg K_i`.
    pub fn degree_law_violation(&self, f: &BirationalMap) -> Option<usize> {
        self.rows.windows(2).find_map(|w| {
            let lowered: u32 = w[1]
                .removed
                .iter()
                .zip(f.critical_factors())
                .map(|(nu, k)| nu * k.degree())
                .sum();
            (f.degree() * w[0].degree != w[1].degree + lowered).then_some(w[1].n)
        })
    }
}

/// Iterated proper pull-backs of `seed` with chart indices at every step.
/// Hitting the term ceiling ends the run early and is recorded in the table.
pub fn run_orbit(
    f: &BirationalMap,
    seed: &HomogeneousPolynomial,
    charts: &ChartSet,
    nmax: usize,
    max_terms: Option<usize>,
) -> Result<OrbitTable, SequenceError> {
    if seed.is_zero() {
        return Err(MapError::ZeroInput.into());
    }
    let mut table = OrbitTable {
        map: f.name().to_string(),
        charts: charts.names(),
        rows: Vec::with_capacity(nmax + 1),
        truncated: None,
    };
    let mut p = seed.clone();
    let mut removed = vec![0; f.critical_factors().len()];
    for n in 0..=nmax {
        let indices = charts.indices(p.poly())?;
        table.rows.push(OrbitRow {
            n,
            degree: p.degree(),
            indices,
            removed: removed.clone(),
            terms: p.len(),
        });
        if n == nmax {
            break;
        }
        match f.proper_pullback_limited(&p, max_terms) {
            Ok(r) => {
                p = r.proper;
                removed = r.indices;
            }
            Err(MapError::Poly(e @ PolyError::TermLimit { .. })) => {
                table.truncated = Some(format!("stopped after n = {n}: {e}"));
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(table)
}

/// Charts at which `seed` has a positive index.
pub fn seed_conflicts(seed: &Polynomial, charts: &ChartSet) -> Result<Vec<String>, SequenceError> {
    let idx = charts.indices(seed)?;
    Ok(charts
        .names()
        .into_iter()
        .zip(idx)
        .filter(|(_, i)| *i > 0)
        .map(|(n, _)| n)
        .collect())
}

/// `seed` when it avoids every chart center, otherwise the first linear form
/// with prime coefficients that does.
pub fn preflight_seed(
    seed: &HomogeneousPolynomial,
    charts: &ChartSet,
) -> Result<HomogeneousPolynomial, SequenceError> {
    if seed_conflicts(seed.poly(), charts)?.is_empty() {
        return Ok(seed.clone());
    }
    const PRIMES: [i64; 16] = [1, 2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
    let n = seed.nvars();
    for shift in 0..=PRIMES.len() - n {
        let terms = (0..n).map(|i| {
            let mut e = vec![0u32; n];
            e[i] = 1;
            (
                Monomial::new(&e).expect("few variables"),
                Rational::from_integer(PRIMES[shift + i].into()),
            )
        });
        let cand = Polynomial::from_terms(n, terms);
        if seed_conflicts(&cand, charts)?.is_empty() {
            return Ok(HomogeneousPolynomial::with_degree(cand, 1)?);
        }
    }
    Err(SequenceError::NoGenericSeed)
}
