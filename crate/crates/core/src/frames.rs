//! Relations between frames: the projections `(m, n)` of one frame's ticks
//! onto another, the ratio `ρ = √(m/n)`, the speed `β = (m−n)/(m+n)` and the
//! transformations they induce on pairs and coordinates.
//!
//! Conventions: a pair quantified in frame 1 maps to frame 2 as
//! `(p/ρ, q·ρ)`, so the ticks of frame 2 themselves, seen as `(m, n)` in
//! frame 1, map to the symmetric pair `(√(mn), √(mn))`. The positive branch
//! of every sign ambiguity is taken, which keeps `ρ = 1` the identity.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::CausalSet;
use crate::quantify::{
    coordinates, interval_scalar, project, Coordinates, Frame, ObserverChain, PairQuant,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    #[error("projections must be positive and finite (m = {m}, n = {n})")]
    NonPositiveProjection { m: f64, n: f64 },
    #[error("rho must be positive and finite, got {0}")]
    NonPositiveRho(f64),
    #[error("sigma must be positive and finite, got {0}")]
    NonPositiveSigma(f64),
    #[error("speed {0} is outside (-1, 1)")]
    SpeedOutOfRange(f64),
    #[error(
        "frames are not coordinated: relative spread of tick projections is \
         {m_spread:.4} (m) and {n_spread:.4} (n), tolerance {tolerance}"
    )]
    NotCoordinated {
        m_spread: f64,
        n_spread: f64,
        tolerance: f64,
    },
    #[error("no two successive ticks of the second frame project onto both chains of the first")]
    NoProjection,
}

/// Default bound on the relative standard deviation of per-tick projections.
pub const COORDINATION_TOLERANCE: f64 = 1e-1;

/// Relative tolerance for the interval-scalar invariance check.
pub const INVARIANCE_TOLERANCE: f64 = 1e-12;

fn positive(v: f64) -> bool {
    v.is_finite() && v > 0.0
}

pub fn rho_from_mn(m: f64, n: f64) -> Result<f64, FrameError> {
    if !positive(m) || !positive(n) {
        return Err(FrameError::NonPositiveProjection { m, n });
    }
    Ok((m / n).sqrt())
}

pub fn beta_from_mn(m: f64, n: f64) -> Result<f64, FrameError> {
    if !positive(m) || !positive(n) {
        return Err(FrameError::NonPositiveProjection { m, n });
    }
    Ok((m - n) / (m + n))
}

/// `(ρ² − 1)/(ρ² + 1)`.
pub fn beta_from_rho(rho: f64) -> Result<f64, FrameError> {
    if !positive(rho) {
        return Err(FrameError::NonPositiveRho(rho));
    }
    let r2 = rho * rho;
    Ok((r2 - 1.0) / (r2 + 1.0))
}

/// Relativistic velocity addition.
pub fn compose_speeds(b1: f64, b2: f64) -> f64 {
    (b1 + b2) / (1.0 + b1 * b2)
}

/// `(p/ρ, q·ρ)`.
pub fn transform_pair(pair: PairQuant, rho: f64) -> Result<PairQuant, FrameError> {
    if !positive(rho) {
        return Err(FrameError::NonPositiveRho(rho));
    }
    Ok(PairQuant::new(pair.p / rho, pair.q * rho))
}

/// A boost of speed `beta`, with `gamma = 1/√(1−β²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Boost {
    beta: f64,
    gamma: f64,
}

impl Boost {
    pub fn new(beta: f64) -> Result<Self, FrameError> {
        if !(beta.is_finite() && beta.abs() < 1.0) {
            return Err(FrameError::SpeedOutOfRange(beta));
        }
        Ok(Self {
            beta,
            gamma: 1.0 / (1.0 - beta * beta).sqrt(),
        })
    }

    /// The boost induced by the pair transformation with ratio `rho`.
    pub fn from_rho(rho: f64) -> Result<Self, FrameError> {
        let beta = beta_from_rho(rho)?;
        Ok(Self {
            beta,
            gamma: (rho + rho.recip()) / 2.0,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `√((1+β)/(1−β))`, the Doppler factor.
    pub fn rho(&self) -> f64 {
        ((1.0 + self.beta) / (1.0 - self.beta)).sqrt()
    }
}

/// `t' = γ(t − βx)`, `x' = γ(x − βt)`.
pub fn lorentz_transform(c: Coordinates, boost: Boost) -> Coordinates {
    let Boost { beta, gamma } = boost;
    Coordinates::new(gamma * (c.t - beta * c.x), gamma * (c.x - beta * c.t))
}

/// The same change of frame applied through the pair form.
pub fn lorentz_via_pair(c: Coordinates, rho: f64) -> Result<Coordinates, FrameError> {
    transform_pair(c.to_pair(), rho).map(coordinates)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    /// Interval scalar in the original frame.
    pub s1: f64,
    /// Interval scalar of the transformed, rescaled pair.
    pub s2: f64,
    /// `s2 = σ²·s1` within [`INVARIANCE_TOLERANCE`].
    pub ok: bool,
}

pub fn invariance_check(
    pair: PairQuant,
    rho: f64,
    sigma: f64,
) -> Result<InvarianceReport, FrameError> {
    invariance_check_with(pair, rho, sigma, transform_pair)
}

/// [`invariance_check`] with the pair transformation supplied by the caller,
/// so a faulty transformation can be put through the same check.
pub fn invariance_check_with<T>(
    pair: PairQuant,
    rho: f64,
    sigma: f64,
    transform: T,
) -> Result<InvarianceReport, FrameError>
where
    T: Fn(PairQuant, f64) -> Result<PairQuant, FrameError>,
{
    if !positive(sigma) {
        return Err(FrameError::NonPositiveSigma(sigma));
    }
    let moved = transform(pair, rho)?;
    let scaled = PairQuant::new(sigma * moved.p, sigma * moved.q);
    let s1 = interval_scalar(pair);
    let s2 = interval_scalar(scaled);
    let expected = sigma * sigma * s1;
    let ok = s2 == expected || (s2 - expected).abs() <= INVARIANCE_TOLERANCE * expected.abs();
    Ok(InvarianceReport { s1, s2, ok })
}

/// How a second frame's ticks appear in a first frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameRelation {
    /// Mean projection of successive ticks onto the first chain.
    pub m: f64,
    /// Mean projection of successive ticks onto the second chain.
    pub n: f64,
    pub rho: f64,
    pub beta: f64,
    /// Observer-selected scale between the two frames' labels.
    pub sigma: f64,
    pub m_variance: f64,
    pub n_variance: f64,
}

impl FrameRelation {
    pub fn from_projections(m: f64, n: f64) -> Result<Self, FrameError> {
        Ok(Self {
            m,
            n,
            rho: rho_from_mn(m, n)?,
            beta: beta_from_mn(m, n)?,
            sigma: 1.0,
            m_variance: 0.0,
            n_variance: 0.0,
        })
    }

    /// Frames at rest with respect to each other, `m = n = 1`.
    pub fn rest() -> Self {
        Self::from_projections(1.0, 1.0).expect("unit projections are valid")
    }

    pub fn with_sigma(mut self, sigma: f64) -> Result<Self, FrameError> {
        if !positive(sigma) {
            return Err(FrameError::NonPositiveSigma(sigma));
        }
        self.sigma = sigma;
        Ok(self)
    }

    pub fn gamma(&self) -> f64 {
        (self.rho + self.rho.recip()) / 2.0
    }

    pub fn boost(&self) -> Boost {
        Boost::from_rho(self.rho).expect("relation holds a positive rho")
    }

    /// The first frame as seen from the second.
    pub fn inverse(&self) -> Self {
        let m = self.m.recip();
        let n = self.n.recip();
        Self {
            m,
            n,
            rho: self.rho.recip(),
            beta: -self.beta,
            sigma: self.sigma.recip(),
            m_variance: self.m_variance * m.powi(4),
            n_variance: self.n_variance * n.powi(4),
        }
    }

    pub fn report(&self) -> RelationReport {
        RelationReport {
            m: self.m,
            n: self.n,
            rho: self.rho,
            beta: self.beta,
            gamma: self.gamma(),
            sigma: self.sigma,
            m_variance: self.m_variance,
            n_variance: self.n_variance,
        }
    }
}

/// Serialized form of a [`FrameRelation`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub m: f64,
    pub n: f64,
    pub rho: f64,
    pub beta: f64,
    pub gamma: f64,
    pub sigma: f64,
    pub m_variance: f64,
    pub n_variance: f64,
}

/// Frame 3 relative to frame 1, given frame 2 relative to 1 and 3 relative to 2.
pub fn compose_relations(r12: &FrameRelation, r23: &FrameRelation) -> FrameRelation {
    let m = r12.m * r23.m;
    let n = r12.n * r23.n;
    FrameRelation {
        m,
        n,
        rho: r12.rho * r23.rho,
        beta: compose_speeds(r12.beta, r23.beta),
        sigma: r12.sigma * r23.sigma,
        m_variance: r23.m * r23.m * r12.m_variance + r12.m * r12.m * r23.m_variance,
        n_variance: r23.n * r23.n * r12.n_variance + r12.n * r12.n * r23.n_variance,
    }
}

#[derive(Default)]
struct Moments {
    count: usize,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.count += 1;
        self.sum += v;
        self.sum_sq += v * v;
    }

    fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }

    fn variance(&self) -> f64 {
        let mean = self.mean();
        (self.sum_sq / self.count as f64 - mean * mean).max(0.0)
    }

    /// Standard deviation over mean; infinite for a non-positive mean.
    fn relative_spread(&self) -> f64 {
        let mean = self.mean();
        if mean > 0.0 {
            self.variance().sqrt() / mean
        } else {
            f64::INFINITY
        }
    }
}

/// Measures `frame2` against `frame1` by projecting successive ticks of both
/// of `frame2`'s chains onto both chains of `frame1`.
///
/// `m` and `n` are the mean tick-to-tick projection differences onto
/// `frame1.p()` and `frame1.q()`. The frames count as coordinated when the
/// relative standard deviation of each set of differences is at most
/// `tolerance` (see [`COORDINATION_TOLERANCE`]). The measurement is only
/// meaningful when `frame2`'s chains lie between `frame1`'s.
pub fn measure_frame_relation(
    cs: &CausalSet,
    frame1: &Frame,
    frame2: &Frame,
    tolerance: f64,
) -> Result<FrameRelation, FrameError> {
    let mut m_steps = Moments::default();
    let mut n_steps = Moments::default();
    for chain in [frame2.p(), frame2.q()] {
        accumulate_steps(cs, chain, frame1, &mut m_steps, &mut n_steps);
    }
    if m_steps.count == 0 {
        return Err(FrameError::NoProjection);
    }
    let (m_spread, n_spread) = (m_steps.relative_spread(), n_steps.relative_spread());
    if !(m_spread <= tolerance && n_spread <= tolerance) {
        return Err(FrameError::NotCoordinated {
            m_spread,
            n_spread,
            tolerance,
        });
    }
    let mut relation = FrameRelation::from_projections(m_steps.mean(), n_steps.mean())?;
    relation.m_variance = m_steps.variance();
    relation.n_variance = n_steps.variance();
    Ok(relation)
}

fn accumulate_steps(
    cs: &CausalSet,
    chain: &ObserverChain,
    onto: &Frame,
    m_steps: &mut Moments,
    n_steps: &mut Moments,
) {
    let mut previous: Option<(i64, i64)> = None;
    for &tick in chain.events() {
        let current = project(cs, tick, onto.p()).zip(project(cs, tick, onto.q()));
        if let (Some((p0, q0)), Some((p1, q1))) = (previous, current) {
            m_steps.push((p1 - p0) as f64);
            n_steps.push((q1 - q0) as f64);
        }
        previous = current;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho_from_mn(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(rho_from_mn(4.0, 1.0).unwrap(), 2.0);
        let (m, n) = (3.7, 0.45);
        assert!(close(
            rho_from_mn(m, n).unwrap() * rho_from_mn(n, m).unwrap(),
            1.0,
            1e-15
        ));
        assert!(rho_from_mn(0.0, 1.0).is_err());
        assert!(rho_from_mn(1.0, -2.0).is_err());
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta_from_mn(1.0, 1.0).unwrap(), 0.0);
        assert_eq!(beta_from_mn(4.0, 1.0).unwrap(), 0.6);
        assert!(beta_from_mn(1e-12, 1.0).unwrap() < -0.999_999);
        assert!(beta_from_mn(1.0, 1e-12).unwrap() > 0.999_999);
        assert!(beta_from_mn(f64::NAN, 1.0).is_err());
        assert_eq!(
            beta_from_mn(2.0, 5.0).unwrap(),
            -beta_from_mn(5.0, 2.0).unwrap()
        );
    }

    #[test]
    fn beta_from_rho_matches_projection_form() {
        for (m, n) in [(4.0, 1.0), (0.3, 2.2), (1.0, 1.0), (17.0, 0.01)] {
            let rho = rho_from_mn(m, n).unwrap();
            assert!(close(
                beta_from_rho(rho).unwrap(),
                beta_from_mn(m, n).unwrap(),
                1e-14
            ));
        }
    }

    #[test]
    fn transform_pair_examples() {
        let x = PairQuant::new(3.0, -7.5);
        assert_eq!(transform_pair(x, 1.0).unwrap(), x);
        let back = transform_pair(transform_pair(x, 2.5).unwrap(), 1.0 / 2.5).unwrap();
        assert!(close(back.p, x.p, 1e-15) && close(back.q, x.q, 1e-15));
        let (m, n) = (8.0, 2.0);
        let ticks = transform_pair(PairQuant::new(m, n), rho_from_mn(m, n).unwrap()).unwrap();
        assert_eq!(ticks, PairQuant::new(4.0, 4.0));
        assert!(transform_pair(x, 0.0).is_err());
    }

    #[test]
    fn lorentz_examples() {
        let c = Coordinates::new(1.7, -0.4);
        assert_eq!(lorentz_transform(c, Boost::new(0.0).unwrap()), c);
        let out = lorentz_transform(Coordinates::new(1.0, 0.0), Boost::new(0.6).unwrap());
        assert!(close(out.t, 1.25, 1e-15) && close(out.x, -0.75, 1e-15));
        for beta in [-0.9, -0.3, 0.5, 0.99] {
            let out = lorentz_transform(Coordinates::new(1.0, 1.0), Boost::new(beta).unwrap());
            assert!((out.t * out.t - out.x * out.x).abs() < 1e-12);
        }
        assert_eq!(
            Boost::new(1.0).unwrap_err(),
            FrameError::SpeedOutOfRange(1.0)
        );
        assert!(Boost::new(-1.5).is_err());
    }

    #[test]
    fn boost_from_rho_agrees_with_speed_form() {
        let b = Boost::from_rho(2.0).unwrap();
        let direct = Boost::new(0.6).unwrap();
        assert!(close(b.beta(), direct.beta(), 1e-15));
        assert!(close(b.gamma(), direct.gamma(), 1e-15));
        assert!(close(direct.rho(), 2.0, 1e-15));
    }

    #[test]
    fn invariance_examples() {
        let pair = PairQuant::new(3.0, 5.0);
        let r = invariance_check(pair, 1.7, 1.0).unwrap();
        assert!(r.ok);
        assert!(close(r.s1, r.s2, 1e-15));
        let r = invariance_check(pair, 0.4, 2.0).unwrap();
        assert!(r.ok && close(r.s2, 4.0 * r.s1, 1e-15));
        for rho in [0.1, 1.0, 9.0] {
            for sigma in [0.5, 3.0] {
                let r = invariance_check(PairQuant::new(0.0, 4.0), rho, sigma).unwrap();
                assert_eq!((r.s1, r.s2), (0.0, 0.0));
            }
        }
        assert!(invariance_check(pair, 1.0, 0.0).is_err());
    }

    #[test]
    fn flipped_transform_fails_invariance() {
        let flipped =
            |p: PairQuant, rho: f64| transform_pair(p, rho).map(|t| PairQuant::new(-t.p, t.q));
        let r = invariance_check_with(PairQuant::new(3.0, 5.0), 1.3, 1.0, flipped).unwrap();
        assert!(!r.ok);
    }

    #[test]
    fn compose_examples() {
        let r = FrameRelation::from_projections(9.0, 1.0)
            .unwrap()
            .with_sigma(2.0)
            .unwrap();
        let same = compose_relations(&FrameRelation::rest(), &r);
        assert!(close(same.rho, r.rho, 1e-15) && close(same.beta, r.beta, 1e-15));
        assert_eq!(same.sigma, 2.0);

        let half = FrameRelation::from_projections(3.0, 1.0).unwrap();
        assert!(close(half.beta, 0.5, 1e-15));
        let both = compose_relations(&half, &half);
        assert!(close(both.beta, 0.8, 1e-15));
        assert!(close(beta_from_rho(both.rho).unwrap(), 0.8, 1e-15));

        let back = compose_relations(&r, &r.inverse());
        assert!(close(back.rho, 1.0, 1e-15));
        assert!(back.beta.abs() < 1e-15);
        assert!(close(back.sigma, 1.0, 1e-15));
    }

    #[test]
    fn report_carries_gamma() {
        let r = FrameRelation::from_projections(4.0, 1.0).unwrap().report();
        assert!(close(r.gamma, 1.25, 1e-15));
        let json = serde_json::to_value(r).unwrap();
        for key in [
            "m",
            "n",
            "rho",
            "beta",
            "gamma",
            "sigma",
            "m_variance",
            "n_variance",
        ] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }
}
