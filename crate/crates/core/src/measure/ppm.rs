use serde::{Deserialize, Serialize};

use super::outcome::{OutcomeSpace, ProbabilityMeasure};
use super::param::{Family, ParamDomain, ParamGrid, ParamPoint};
use crate::error::{Error, Result};

/// Parametrized probability measure: a map from parameter points to
/// probability measures on one outcome space.
#[derive(Clone, Debug)]
pub struct Ppm {
    space: OutcomeSpace,
    family: Family<ProbabilityMeasure>,
}

impl Ppm {
    /// Closed-form PPM from a weight function. Every evaluation is validated
    /// as a probability measure.
    pub fn closed_form<F>(name: impl Into<String>, domain: ParamDomain, space: OutcomeSpace, weights: F) -> Self
    where
        F: Fn(&ParamPoint) -> Result<Vec<f64>> + Send + Sync + 'static,
    {
        let sp = space.clone();
        let family = Family::closed_form(name, domain, move |k| ProbabilityMeasure::new(sp.clone(), weights(k)?));
        Ppm { space, family }
    }

    pub fn tabulated(domain: ParamDomain, space: OutcomeSpace, entries: Vec<(ParamPoint, ProbabilityMeasure)>) -> Result<Self> {
        for (k, m) in &entries {
            m.space()
                .ensure_same(&space, &format!("tabulated PPM entry at {k}"))?;
        }
        Ok(Ppm {
            space,
            family: Family::tabulated(domain, entries)?,
        })
    }

    pub fn constant(domain: ParamDomain, mu: ProbabilityMeasure) -> Self {
        Ppm {
            space: mu.space().clone(),
            family: Family::constant("constant", domain, mu),
        }
    }

    pub fn domain(&self) -> &ParamDomain {
        self.family.domain()
    }

    pub fn space(&self) -> &OutcomeSpace {
        &self.space
    }

    pub fn name(&self) -> Option<&str> {
        self.family.name()
    }

    pub fn is_tabulated(&self) -> bool {
        self.family.is_tabulated()
    }

    pub fn table(&self) -> Option<&[(ParamPoint, ProbabilityMeasure)]> {
        self.family.table()
    }

    pub fn eval(&self, k: &ParamPoint) -> Result<ProbabilityMeasure> {
        self.family.eval(k)
    }

    pub fn tabulate(&self, grid: &ParamGrid) -> Result<Ppm> {
        Ok(Ppm {
            space: self.space.clone(),
            family: self.family.tabulate(grid)?,
        })
    }

    /// Grid of the table points of a tabulated PPM.
    pub fn table_grid(&self) -> Result<ParamGrid> {
        let table = self
            .table()
            .ok_or_else(|| Error::domain("PPM is not tabulated"))?;
        ParamGrid::new(self.domain().clone(), table.iter().map(|(k, _)| k.clone()).collect())
    }

    /// JSON-friendly tabulation.
    pub fn to_table_file(&self) -> Result<PpmTable> {
        let table = self
            .table()
            .ok_or_else(|| Error::domain("only tabulated PPMs serialize"))?;
        Ok(PpmTable {
            domain: self.domain().clone(),
            outcomes: self.space.labels().to_vec(),
            points: table.iter().map(|(k, _)| k.clone()).collect(),
            weights: table.iter().map(|(_, m)| m.weights().to_vec()).collect(),
        })
    }
}

/// Serialized form of a tabulated PPM:
/// `{"domain":..., "outcomes":[...], "points":[[...]], "weights":[[...]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PpmTable {
    pub domain: ParamDomain,
    pub outcomes: Vec<String>,
    pub points: Vec<ParamPoint>,
    pub weights: Vec<Vec<f64>>,
}

impl TryFrom<PpmTable> for Ppm {
    type Error = Error;
    fn try_from(t: PpmTable) -> Result<Ppm> {
        if t.points.len() != t.weights.len() {
            return Err(Error::domain(format!(
                "{} points but {} weight rows",
                t.points.len(),
                t.weights.len()
            )));
        }
        let space = OutcomeSpace::new(t.outcomes)?;
        let entries = t
            .points
            .into_iter()
            .zip(t.weights)
            .map(|(k, w)| Ok((k, ProbabilityMeasure::new(space.clone(), w)?)))
            .collect::<Result<Vec<_>>>()?;
        Ppm::tabulated(t.domain, space, entries)
    }
}
