//! Decomposition of a spatial interval into two orthogonal components.
//!
//! Three events at equal time are quantified by three frames: `D` sees the
//! interval (e2, e3), `X` sees (e1, e3) and `Y` sees (e1, e2). When e1 sits at
//! the foot of the perpendicular, the interval scalars add, which for equal
//! time pairs `(Δ, -Δ)` reads `Δd² = Δx² + Δy²`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::oracle::{EmbeddedCauset, OracleError};
use crate::poset::{CausalSet, EventId};
use crate::quantify::{interval_pair, interval_scalar, quantify_event, Frame, PairQuant};

/// Equal-time tolerance for discrete quantification, in ticks.
pub const DISCRETE_EQUAL_TIME_TOLERANCE: f64 = 1.0;
/// Equal-time tolerance for continuum quantification.
pub const CONTINUUM_EQUAL_TIME_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrameRole {
    D,
    X,
    Y,
}

impl fmt::Display for FrameRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::D => "D",
            Self::X => "X",
            Self::Y => "Y",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PythagorasError {
    #[error("events are not at equal time in frame {frame}: Δt = {dt}")]
    NotEqualTime { frame: FrameRole, dt: f64 },
    #[error("event {event} cannot be quantified in frame {frame}")]
    Unquantifiable { event: EventId, frame: FrameRole },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalConfig {
    pub d_frame: Frame,
    pub x_frame: Frame,
    pub y_frame: Frame,
    /// `[e1, e2, e3]`; e1 is the perpendicular foot.
    pub events: [EventId; 3],
    pub equal_time_tolerance: f64,
}

impl OrthogonalConfig {
    pub fn new(d_frame: Frame, x_frame: Frame, y_frame: Frame, events: [EventId; 3]) -> Self {
        Self {
            d_frame,
            x_frame,
            y_frame,
            events,
            equal_time_tolerance: DISCRETE_EQUAL_TIME_TOLERANCE,
        }
    }

    pub fn with_equal_time_tolerance(mut self, tolerance: f64) -> Self {
        self.equal_time_tolerance = tolerance;
        self
    }

    /// The same configuration with the X and Y legs interchanged, which also
    /// swaps e2 and e3 so that each leg keeps its pair of events.
    pub fn legs_swapped(&self) -> Self {
        let [e1, e2, e3] = self.events;
        Self {
            d_frame: self.d_frame.clone(),
            x_frame: self.y_frame.clone(),
            y_frame: self.x_frame.clone(),
            events: [e1, e3, e2],
            equal_time_tolerance: self.equal_time_tolerance,
        }
    }

    /// `(role, frame, from, to)` for the three legs.
    fn legs(&self) -> [(FrameRole, &Frame, EventId, EventId); 3] {
        let [e1, e2, e3] = self.events;
        [
            (FrameRole::D, &self.d_frame, e2, e3),
            (FrameRole::X, &self.x_frame, e1, e3),
            (FrameRole::Y, &self.y_frame, e1, e2),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PythagorasReport {
    pub dd2: f64,
    pub dx2: f64,
    pub dy2: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub ok: bool,
}

impl PythagorasReport {
    /// Rescales every squared quantity by `factor²`, for converting ticks to
    /// lengths.
    pub fn scaled(&self, factor: f64) -> Self {
        let k = factor * factor;
        Self {
            dd2: self.dd2 * k,
            dx2: self.dx2 * k,
            dy2: self.dy2 * k,
            residual: self.residual * k,
            tolerance: self.tolerance * k,
            ok: self.ok,
        }
    }
}

/// Coordinates `(x1, y1)` that event 1 needs for the interval scalars to add,
/// given `d2, d3` from the D frame, `x3` from X and `y2` from Y.
pub fn orthogonal_event_constraint(d2: f64, d3: f64, x3: f64, y2: f64) -> (f64, f64) {
    (d3 - x3, d2 - y2)
}

/// Checks the decomposition from the three interval pairs `(D, X, Y)`.
pub fn pythagoras_from_pairs(
    pairs: [PairQuant; 3],
    equal_time_tolerance: f64,
    tolerance: f64,
) -> Result<PythagorasReport, PythagorasError> {
    let roles = [FrameRole::D, FrameRole::X, FrameRole::Y];
    for (pair, frame) in pairs.iter().zip(roles) {
        let dt = (pair.p + pair.q) / 2.0;
        if dt.is_nan() || dt.abs() > equal_time_tolerance {
            return Err(PythagorasError::NotEqualTime { frame, dt });
        }
    }
    let [dd2, dx2, dy2] = pairs.map(|pair| -interval_scalar(pair));
    let residual = (dd2 - dx2 - dy2).abs();
    Ok(PythagorasReport {
        dd2,
        dx2,
        dy2,
        residual,
        tolerance,
        ok: residual <= tolerance,
    })
}

/// Quantifies the three legs by projection and checks the decomposition.
pub fn verify_pythagoras(
    cs: &CausalSet,
    cfg: &OrthogonalConfig,
    tolerance: f64,
) -> Result<PythagorasReport, PythagorasError> {
    let mut pairs = [PairQuant::default(); 3];
    for (slot, (frame, chains, from, to)) in pairs.iter_mut().zip(cfg.legs()) {
        let quantify = |event: EventId| {
            quantify_event(cs, event, chains)
                .ok_or(PythagorasError::Unquantifiable { event, frame })
        };
        *slot = interval_pair(quantify(from)?, quantify(to)?);
    }
    pythagoras_from_pairs(pairs, cfg.equal_time_tolerance, tolerance)
}

/// The same check with radar-formula quantification from the embedding.
pub fn verify_pythagoras_continuum(
    ec: &EmbeddedCauset,
    cfg: &OrthogonalConfig,
    tolerance: f64,
) -> Result<PythagorasReport, PythagorasError> {
    let mut pairs = [PairQuant::default(); 3];
    for (slot, (_, chains, from, to)) in pairs.iter_mut().zip(cfg.legs()) {
        let a = ec.radar_quantify(from, chains)?.continuum;
        let b = ec.radar_quantify(to, chains)?.continuum;
        *slot = interval_pair(a, b);
    }
    pythagoras_from_pairs(pairs, cfg.equal_time_tolerance, tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constraint_examples() {
        assert_eq!(orthogonal_event_constraint(1.0, 7.0, 7.0, 2.0).0, 0.0);
        assert_eq!(orthogonal_event_constraint(3.0, 4.0, 4.0, 3.0), (0.0, 0.0));
        let (x1, y1) = orthogonal_event_constraint(3.0, 9.0, 2.0, 1.0);
        let (x1s, y1s) = orthogonal_event_constraint(3.0, 9.0 + 5.5, 2.0 + 5.5, 1.0);
        assert_eq!((x1, y1), (x1s, y1s));
    }

    #[test]
    fn right_triangle_pairs() {
        let pairs = [
            PairQuant::new(5.0, -5.0),
            PairQuant::new(4.0, -4.0),
            PairQuant::new(3.0, -3.0),
        ];
        let r = pythagoras_from_pairs(pairs, 0.0, 1e-12).unwrap();
        assert_eq!((r.dd2, r.dx2, r.dy2, r.residual), (25.0, 16.0, 9.0, 0.0));
        assert!(r.ok);
    }

    #[test]
    fn collapsed_leg() {
        let pairs = [
            PairQuant::new(4.0, -4.0),
            PairQuant::new(4.0, -4.0),
            PairQuant::new(0.0, 0.0),
        ];
        let r = pythagoras_from_pairs(pairs, 0.0, 0.0).unwrap();
        assert_eq!(r.dd2, r.dx2);
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn unequal_time_is_rejected() {
        let pairs = [
            PairQuant::new(5.0, -3.0),
            PairQuant::new(4.0, -4.0),
            PairQuant::new(3.0, -3.0),
        ];
        assert_eq!(
            pythagoras_from_pairs(pairs, 0.5, 1.0).unwrap_err(),
            PythagorasError::NotEqualTime {
                frame: FrameRole::D,
                dt: 1.0
            }
        );
        assert!(pythagoras_from_pairs(pairs, 1.0, 1.0).is_ok());
    }

    #[test]
    fn scaling() {
        let r = pythagoras_from_pairs([PairQuant::new(2.0, -2.0); 3], 0.0, 1.0).unwrap();
        let s = r.scaled(0.5);
        assert_eq!((s.dd2, s.residual, s.tolerance), (1.0, 1.0, 0.25));
    }
}
