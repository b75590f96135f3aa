use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// Ordered, finite set of distinct outcome labels.
///
/// Every subset is an event; singleton outcomes are addressed by index.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "OutcomeSpaceRepr", into = "OutcomeSpaceRepr")]
pub struct OutcomeSpace {
    labels: Arc<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct OutcomeSpaceRepr {
    outcomes: Vec<String>,
}

impl TryFrom<OutcomeSpaceRepr> for OutcomeSpace {
    type Error = Error;
    fn try_from(r: OutcomeSpaceRepr) -> Result<Self> {
        OutcomeSpace::new(r.outcomes)
    }
}

impl From<OutcomeSpace> for OutcomeSpaceRepr {
    fn from(s: OutcomeSpace) -> Self {
        OutcomeSpaceRepr {
            outcomes: s.labels.as_ref().clone(),
        }
    }
}

impl OutcomeSpace {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::domain("outcome space must contain at least one outcome"));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::domain(format!("duplicate outcome label {l:?}")));
            }
        }
        Ok(OutcomeSpace {
            labels: Arc::new(labels),
        })
    }

    /// Outcomes labelled `"1"`, `"2"`, ..., `"n"`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| i.to_string()))
    }

    /// Cartesian product `self x other`, with `other` varying fastest and
    /// labels concatenated (`"1A"` and `"2B"` give `"1A2B"`).
    pub fn product(&self, other: &OutcomeSpace) -> Result<Self> {
        let mut labels = Vec::with_capacity(self.len() * other.len());
        for a in self.labels.iter() {
            for b in other.labels.iter() {
                labels.push(format!("{a}{b}"));
            }
        }
        Self::new(labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.get(i).map(String::as_str)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub(crate) fn ensure_same(&self, other: &OutcomeSpace, ctx: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{ctx}: outcome spaces differ ({:?} vs {:?})",
                self.labels, other.labels
            )))
        }
    }
}

impl PartialEq for OutcomeSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }
}

impl Eq for OutcomeSpace {}

impl fmt::Debug for OutcomeSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}

/// A subset of an outcome space, stored as sorted distinct indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    members: Vec<usize>,
}

impl Event {
    pub fn new(space: &OutcomeSpace, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        if let Some(&bad) = members.iter().find(|&&i| i >= space.len()) {
            return Err(Error::domain(format!(
                "event index {bad} outside outcome space of size {}",
                space.len()
            )));
        }
        let n = members.len();
        members.dedup();
        if members.len() != n {
            return Err(Error::domain("event indices must be distinct"));
        }
        Ok(Event { members })
    }

    pub fn from_labels(space: &OutcomeSpace, labels: &[&str]) -> Result<Self> {
        let idx = labels
            .iter()
            .map(|l| {
                space
                    .index_of(l)
                    .ok_or_else(|| Error::domain(format!("unknown outcome label {l:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, idx)
    }

    pub fn full(space: &OutcomeSpace) -> Self {
        Event {
            members: (0..space.len()).collect(),
        }
    }

    pub fn empty() -> Self {
        Event { members: Vec::new() }
    }

    pub fn singleton(space: &OutcomeSpace, i: usize) -> Result<Self> {
        Self::new(space, [i])
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }
}

/// Nonnegative weights over a finite outcome space, summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr", into = "MeasureRepr")]
pub struct ProbabilityMeasure {
    space: OutcomeSpace,
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MeasureRepr {
    outcomes: Vec<String>,
    weights: Vec<f64>,
}

impl TryFrom<MeasureRepr> for ProbabilityMeasure {
    type Error = Error;
    fn try_from(r: MeasureRepr) -> Result<Self> {
        ProbabilityMeasure::new(OutcomeSpace::new(r.outcomes)?, r.weights)
    }
}

impl From<ProbabilityMeasure> for MeasureRepr {
    fn from(m: ProbabilityMeasure) -> Self {
        MeasureRepr {
            outcomes: m.space.labels().to_vec(),
            weights: m.weights,
        }
    }
}

impl ProbabilityMeasure {
    /// Validates each weight in `[0, 1]` and the total within
    /// [`tol::MEASURE_SUM`]. Weights within that tolerance outside `[0, 1]`
    /// are clamped.
    pub fn new(space: OutcomeSpace, weights: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(space, weights, tol::MEASURE_SUM)
    }

    pub(crate) fn with_tolerance(space: OutcomeSpace, mut weights: Vec<f64>, tol: f64) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(Error::domain(format!(
                "{} weights for an outcome space of size {}",
                weights.len(),
                space.len()
            )));
        }
        for w in weights.iter_mut() {
            if !w.is_finite() {
                return Err(Error::invariant("probability weight (non-finite)", f64::INFINITY, tol));
            }
            if *w < -tol || *w > 1.0 + tol {
                let residual = if *w < 0.0 { -*w } else { *w - 1.0 };
                return Err(Error::invariant("probability weight outside [0, 1]", residual, tol));
            }
            *w = w.clamp(0.0, 1.0);
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol {
            return Err(Error::invariant("probability measure total", (total - 1.0).abs(), tol));
        }
        Ok(ProbabilityMeasure { space, weights })
    }

    pub fn uniform(space: OutcomeSpace) -> Self {
        let n = space.len();
        ProbabilityMeasure {
            space,
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn point_mass(space: OutcomeSpace, i: usize) -> Result<Self> {
        if i >= space.len() {
            return Err(Error::domain(format!("point mass index {i} out of range")));
        }
        let mut weights = vec![0.0; space.len()];
        weights[i] = 1.0;
        Ok(ProbabilityMeasure { space, weights })
    }

    pub fn space(&self) -> &OutcomeSpace {
        &self.space
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// Prior-weighted mixture of measures on a shared space.
    pub fn mixture(components: &[(f64, &ProbabilityMeasure)]) -> Result<Self> {
        let (_, first) = components
            .first()
            .ok_or_else(|| Error::domain("mixture of zero measures"))?;
        let mut weights = vec![0.0; first.space.len()];
        for (p, m) in components {
            m.space.ensure_same(&first.space, "mixture")?;
            for (w, x) in weights.iter_mut().zip(&m.weights) {
                *w += p * x;
            }
        }
        Self::new(first.space.clone(), weights)
    }
}

/// Onto map from a finer outcome space to a coarser one.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeSurjection {
    from: OutcomeSpace,
    to: OutcomeSpace,
    map: Vec<usize>,
}

impl OutcomeSurjection {
    pub fn new(from: OutcomeSpace, to: OutcomeSpace, map: Vec<usize>) -> Result<Self> {
        if map.len() != from.len() {
            return Err(Error::domain(format!(
                "surjection has {} images for {} source outcomes",
                map.len(),
                from.len()
            )));
        }
        let mut hit = vec![false; to.len()];
        for &t in &map {
            *hit.get_mut(t)
                .ok_or_else(|| Error::domain(format!("surjection image {t} out of range")))? = true;
        }
        if let Some(missed) = hit.iter().position(|h| !h) {
            return Err(Error::domain(format!(
                "surjection is not onto: outcome {:?} has no preimage",
                to.labels()[missed]
            )));
        }
        Ok(OutcomeSurjection { from, to, map })
    }

    /// Build from the target label of each source outcome, in source order.
    pub fn from_labels(from: OutcomeSpace, to: OutcomeSpace, targets: &[&str]) -> Result<Self> {
        let map = targets
            .iter()
            .map(|t| {
                to.index_of(t)
                    .ok_or_else(|| Error::domain(format!("unknown target outcome {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(from, to, map)
    }

    pub fn identity(space: OutcomeSpace) -> Self {
        OutcomeSurjection {
            map: (0..space.len()).collect(),
            from: space.clone(),
            to: space,
        }
    }

    pub fn from_space(&self) -> &OutcomeSpace {
        &self.from
    }

    pub fn to_space(&self) -> &OutcomeSpace {
        &self.to
    }

    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    /// Preimage of a coarse outcome as an event on the fine space.
    pub fn preimage(&self, target: usize) -> Event {
        Event {
            members: (0..self.map.len()).filter(|&i| self.map[i] == target).collect(),
        }
    }

    /// Push a fine measure forward to the coarse space.
    pub fn push_forward(&self, mu: &ProbabilityMeasure) -> Result<ProbabilityMeasure> {
        mu.space.ensure_same(&self.from, "push_forward")?;
        let mut weights = vec![0.0; self.to.len()];
        for (i, w) in mu.weights.iter().enumerate() {
            weights[self.map[i]] += w;
        }
        ProbabilityMeasure::new(self.to.clone(), weights)
    }
}
