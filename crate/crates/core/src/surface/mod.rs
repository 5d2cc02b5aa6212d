//! Sampled immersions into `S^4 ⊂ R^5` and their local invariants.
//!
//! The pipeline is [`tangent_frame`] → [`normal_frame`] →
//! [`second_fundamental_form`], which fills a [`ShapeReport`]. The
//! [`ConnectionData`] gathered along the way (coframe, `ω₁₂`, `ω₃₄`, `H_α`)
//! is what the associated-family integrator consumes.

mod connection;
mod frames;
mod shape;

pub use connection::{connection_data, ConnectionData, IntrinsicCurvatures, PointConnection};
pub use frames::{normal_frame, tangent_frame, NormalFrame, NormalHolonomy, Orientation, TangentFrame};
pub use shape::{gauge_invariance_check, minimality_residual, second_fundamental_form, GaugeDiscrepancy, ShapeReport};

use crate::grid::{partial_derivatives, Field, GridPatch, Order};
use crate::linalg::Vec5;
use crate::{Error, Result, UNIT_NORM_TOL};

/// Where first and second derivatives of the position came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetSource {
    Analytic,
    FiniteDifference,
}

impl JetSource {
    pub fn as_str(self) -> &'static str {
        match self {
            JetSource::Analytic => "analytic",
            JetSource::FiniteDifference => "fd",
        }
    }
}

/// Parameter derivatives of the position up to second order.
#[derive(Debug, Clone)]
pub struct Jets {
    pub fu: Field<Vec5>,
    pub fv: Field<Vec5>,
    pub fuu: Field<Vec5>,
    pub fuv: Field<Vec5>,
    pub fvv: Field<Vec5>,
    pub source: JetSource,
}

impl Jets {
    /// Finite-difference jets of a position field.
    pub fn finite_difference(position: &Field<Vec5>) -> Result<Self> {
        let d = partial_derivatives(position, Order::Second)?;
        let s = d.second.expect("second order requested");
        Ok(Self { fu: d.du, fv: d.dv, fuu: s.duu, fuv: s.duv, fvv: s.dvv, source: JetSource::FiniteDifference })
    }

    fn check(&self, patch: &GridPatch) -> Result<()> {
        for f in [&self.fu, &self.fv, &self.fuu, &self.fuv, &self.fvv] {
            if f.patch() != patch {
                return Err(Error::ShapeMismatch { expected: patch.len(), got: f.values().len() });
            }
            f.check_finite()?;
        }
        Ok(())
    }
}

/// A sampled map into the unit sphere of `R^5`, with optional exact jets.
#[derive(Debug, Clone)]
pub struct Immersion {
    position: Field<Vec5>,
    analytic: Option<Jets>,
}

impl Immersion {
    /// Checks finiteness and `| |f| − 1 | ≤ 1e-12` at every node.
    pub fn new(position: Field<Vec5>, analytic: Option<Jets>) -> Result<Self> {
        position.check_finite()?;
        for (k, p) in position.values().iter().enumerate() {
            let drift = (p.norm() - 1.0).abs();
            if drift > UNIT_NORM_TOL {
                return Err(Error::OffSphere { index: position.patch().ij(k), drift });
            }
        }
        if let Some(j) = &analytic {
            j.check(position.patch())?;
        }
        Ok(Self { position, analytic })
    }

    pub fn patch(&self) -> &GridPatch {
        self.position.patch()
    }

    pub fn position(&self) -> &Field<Vec5> {
        &self.position
    }

    pub fn analytic_jets(&self) -> Option<&Jets> {
        self.analytic.as_ref()
    }

    /// Drops analytic jets so every consumer falls back to finite differences.
    pub fn without_jets(&self) -> Self {
        Self { position: self.position.clone(), analytic: None }
    }

    /// Analytic jets when present, otherwise finite differences.
    pub fn jets(&self) -> Result<Jets> {
        match &self.analytic {
            Some(j) => Ok(j.clone()),
            None => Jets::finite_difference(&self.position),
        }
    }

    pub fn jet_source(&self) -> JetSource {
        if self.analytic.is_some() {
            JetSource::Analytic
        } else {
            JetSource::FiniteDifference
        }
    }
}

/// Tangent frame, normal frame, invariants and connection of one immersion,
/// computed in the default gauges.
#[derive(Debug, Clone)]
pub struct SurfaceAnalysis {
    pub jets: Jets,
    pub tangent: TangentFrame,
    pub normal: NormalFrame,
    pub shape: ShapeReport,
    pub connection: ConnectionData,
}

/// Runs the full local pipeline with positive orientation.
pub fn analyze(imm: &Immersion) -> Result<SurfaceAnalysis> {
    let jets = imm.jets()?;
    let tangent = tangent_frame(imm, &jets, Orientation::Positive)?;
    let normal = normal_frame(imm, &tangent)?;
    let shape = second_fundamental_form(&jets, &tangent, &normal)?;
    let connection = connection_data(&tangent, &normal, &shape)?;
    Ok(SurfaceAnalysis { jets, tangent, normal, shape, connection })
}
