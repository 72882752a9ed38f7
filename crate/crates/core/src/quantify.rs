//! Quantification of events by projection onto observer chains.
//!
//! An [`ObserverChain`] is a chain of quantifying events labelled with
//! successive integers. Projecting an event onto a chain picks the earliest
//! quantifying event that the event can influence; projecting onto both
//! chains of a synchronized [`Frame`] gives the event a [`PairQuant`].
//! Differences of pairs are interval pairs, which decompose into a symmetric
//! (time-like) and an antisymmetric (space-like) part and carry the interval
//! scalar `Δp·Δq`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::{CausalSet, CausetError, EventId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantifyError {
    #[error(transparent)]
    Causet(#[from] CausetError),
    #[error("chain has {events} events but {valuations} valuations")]
    LengthMismatch { events: usize, valuations: usize },
    #[error("chain events {index} and {next} are not ordered", next = index + 1)]
    NotAChain { index: usize },
    #[error("valuation step {step} between chain events {index} and {next}; steps must be exactly 1", next = index + 1)]
    ValuationStep { index: usize, step: i64 },
    #[error("chain has no quantifying events")]
    EmptyChain,
    #[error("chains are not synchronized: {0}")]
    NotSynchronized(SyncReport),
    #[error("no frames supplied")]
    NoFrames,
    #[error("scalar audit samples must be finite with a, b, a+b and a-b all non-zero (sample {index} is not)")]
    DegenerateSamples { index: usize },
}

/// A chain of quantifying events with valuations increasing by exactly 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObserverChain {
    events: Vec<EventId>,
    valuations: Vec<i64>,
}

impl ObserverChain {
    /// Checks that `events` is ordered as a chain in `cs` (each event strictly
    /// below the next) and that successive valuations differ by 1.
    pub fn new(
        cs: &CausalSet,
        events: Vec<EventId>,
        valuations: Vec<i64>,
    ) -> Result<Self, QuantifyError> {
        if events.len() != valuations.len() {
            return Err(QuantifyError::LengthMismatch {
                events: events.len(),
                valuations: valuations.len(),
            });
        }
        for &e in &events {
            cs.check_id(e)?;
        }
        for (index, w) in events.windows(2).enumerate() {
            if !cs.precedes(w[0], w[1]) {
                return Err(QuantifyError::NotAChain { index });
            }
        }
        for (index, w) in valuations.windows(2).enumerate() {
            let step = w[1].wrapping_sub(w[0]);
            if step != 1 {
                return Err(QuantifyError::ValuationStep { index, step });
            }
        }
        Ok(Self { events, valuations })
    }

    /// Labels `events` with `first_label, first_label + 1, ...`.
    pub fn labelled_from(
        cs: &CausalSet,
        events: Vec<EventId>,
        first_label: i64,
    ) -> Result<Self, QuantifyError> {
        let valuations = (0..events.len() as i64).map(|k| first_label + k).collect();
        Self::new(cs, events, valuations)
    }

    pub fn events(&self) -> &[EventId] {
        &self.events
    }

    pub fn valuations(&self) -> &[i64] {
        &self.valuations
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Position in the chain of the least quantifying event `p` with `x ≤ p`.
    pub fn projection_index(&self, cs: &CausalSet, x: EventId) -> Option<usize> {
        // x ≤ events[i] is monotone in i along a chain.
        let i = self.events.partition_point(|&e| !cs.precedes_or_eq(x, e));
        (i < self.events.len()).then_some(i)
    }
}

/// Valuation of the least quantifying event on `chain` that `x` can influence.
///
/// `None` when no quantifying event includes `x`.
pub fn project(cs: &CausalSet, x: EventId, chain: &ObserverChain) -> Option<i64> {
    chain.projection_index(cs, x).map(|i| chain.valuations[i])
}

/// Which projection of a synchronization check failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyncDirection {
    /// Events of Q projected onto P.
    QOntoP,
    /// Events of P projected onto Q.
    POntoQ,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyncReport {
    pub ok: bool,
    /// Index of the first quantifying event whose projection does not follow
    /// its predecessor's by exactly 1.
    pub first_violation: Option<usize>,
    pub direction: Option<SyncDirection>,
}

impl fmt::Display for SyncReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.first_violation, self.direction) {
            (Some(i), Some(SyncDirection::QOntoP)) => {
                write!(
                    f,
                    "event {i} of Q does not project to the successor of event {} on P",
                    i - 1
                )
            }
            (Some(i), Some(SyncDirection::POntoQ)) => {
                write!(
                    f,
                    "event {i} of P does not project to the successor of event {} on Q",
                    i - 1
                )
            }
            _ => f.write_str("synchronized"),
        }
    }
}

/// Checks that successive quantifying events of each chain project to
/// successive quantifying events of the other.
///
/// Only differences are constrained, so the two label sequences may be offset
/// by a constant. Events that do not project are skipped; along a chain they
/// always form a suffix.
pub fn check_synchronized(
    cs: &CausalSet,
    p: &ObserverChain,
    q: &ObserverChain,
) -> Result<SyncReport, QuantifyError> {
    if p.is_empty() || q.is_empty() {
        return Err(QuantifyError::EmptyChain);
    }
    for (source, target, direction) in
        [(q, p, SyncDirection::QOntoP), (p, q, SyncDirection::POntoQ)]
    {
        if let Some(index) = first_step_violation(cs, source, target) {
            return Ok(SyncReport {
                ok: false,
                first_violation: Some(index),
                direction: Some(direction),
            });
        }
    }
    Ok(SyncReport {
        ok: true,
        first_violation: None,
        direction: None,
    })
}

fn first_step_violation(
    cs: &CausalSet,
    source: &ObserverChain,
    target: &ObserverChain,
) -> Option<usize> {
    let mut previous: Option<i64> = None;
    for (i, &e) in source.events.iter().enumerate() {
        let Some(label) = project(cs, e, target) else {
            break;
        };
        if let Some(prev) = previous {
            if label - prev != 1 {
                return Some(i);
            }
        }
        previous = Some(label);
    }
    None
}

/// A synchronized pair of observer chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    p: ObserverChain,
    q: ObserverChain,
}

impl Frame {
    pub fn new(cs: &CausalSet, p: ObserverChain, q: ObserverChain) -> Result<Self, QuantifyError> {
        let report = check_synchronized(cs, &p, &q)?;
        if !report.ok {
            return Err(QuantifyError::NotSynchronized(report));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> &ObserverChain {
        &self.p
    }

    pub fn q(&self) -> &ObserverChain {
        &self.q
    }

    /// The same chains in the other order, which inverts the frame's ratio.
    pub fn swapped(&self) -> Self {
        Self {
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }
}

/// A pair of projections `(p, q)`, or a difference of two such pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PairQuant {
    pub p: f64,
    pub q: f64,
}

impl PairQuant {
    pub const fn new(p: f64, q: f64) -> Self {
        Self { p, q }
    }
}

impl Add for PairQuant {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.p + rhs.p, self.q + rhs.q)
    }
}

impl Sub for PairQuant {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.p - rhs.p, self.q - rhs.q)
    }
}

impl Neg for PairQuant {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.p, -self.q)
    }
}

impl fmt::Display for PairQuant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// Projections of `x` onto both chains of `frame`.
pub fn quantify_event(cs: &CausalSet, x: EventId, frame: &Frame) -> Option<PairQuant> {
    let p = project(cs, x, &frame.p)?;
    let q = project(cs, x, &frame.q)?;
    Some(PairQuant::new(p as f64, q as f64))
}

/// The interval pair from `from` to `to`.
pub fn interval_pair(from: PairQuant, to: PairQuant) -> PairQuant {
    to - from
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    /// `((p+q)/2, (p+q)/2)`, the chain-like part.
    pub symmetric: PairQuant,
    /// `((p-q)/2, (q-p)/2)`, the antichain-like part.
    pub antisymmetric: PairQuant,
}

pub fn decompose(pair: PairQuant) -> Decomposition {
    let s = (pair.p + pair.q) / 2.0;
    let a = (pair.p - pair.q) / 2.0;
    Decomposition {
        symmetric: PairQuant::new(s, s),
        antisymmetric: PairQuant::new(a, -a),
    }
}

/// `Δp·Δq`, which equals `Δt² − Δx²`.
pub fn interval_scalar(pair: PairQuant) -> f64 {
    pair.p * pair.q
}

/// `Δp + Δq`, twice the time coordinate.
pub fn symmetric_scalar(pair: PairQuant) -> f64 {
    pair.p + pair.q
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Coordinates {
    pub t: f64,
    pub x: f64,
}

impl Coordinates {
    pub const fn new(t: f64, x: f64) -> Self {
        Self { t, x }
    }

    /// `(t + x, t − x)`.
    pub fn to_pair(self) -> PairQuant {
        PairQuant::new(self.t + self.x, self.t - self.x)
    }
}

pub fn coordinates(pair: PairQuant) -> Coordinates {
    Coordinates {
        t: (pair.p + pair.q) / 2.0,
        x: (pair.p - pair.q) / 2.0,
    }
}

/// Coordinates of the componentwise power `(p^k, q^k)`; their squares
/// difference is `(pq)^k`.
pub fn power_coordinates(pair: PairQuant, k: i32) -> Coordinates {
    coordinates(PairQuant::new(pair.p.powi(k), pair.q.powi(k)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalClass {
    Timelike,
    Lightlike,
    Spacelike,
}

impl fmt::Display for IntervalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Timelike => "timelike",
            Self::Lightlike => "lightlike",
            Self::Spacelike => "spacelike",
        })
    }
}

/// Classifies by the sign of the interval scalar.
pub fn classify(pair: PairQuant) -> IntervalClass {
    let s = interval_scalar(pair);
    if s > 0.0 {
        IntervalClass::Timelike
    } else if s < 0.0 {
        IntervalClass::Spacelike
    } else {
        IntervalClass::Lightlike
    }
}

/// Relative agreement, exact when `tolerance` is 0.
fn scalars_agree(a: f64, b: f64, tolerance: f64) -> bool {
    a == b || (a - b).abs() <= tolerance * a.abs().max(b.abs())
}

/// Relative tolerance for comparing interval scalars across frames.
pub struct ConsensusTolerance;

impl ConsensusTolerance {
    /// Integer valuations give exact scalars.
    pub const DISCRETE: f64 = 0.0;
    /// Real-valued (continuum) quantifications.
    pub const CONTINUUM: f64 = 1e-9;
}

/// Which chain of a frame an event failed to project onto.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainSide {
    P,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("event {event} does not project onto chain {side:?}")]
pub struct Unquantifiable {
    pub event: EventId,
    pub side: ChainSide,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameQuantification {
    pub pair: PairQuant,
    pub scalar: f64,
    pub coordinates: Coordinates,
}

impl FrameQuantification {
    pub fn from_pair(pair: PairQuant) -> Self {
        Self {
            pair,
            scalar: interval_scalar(pair),
            coordinates: coordinates(pair),
        }
    }

    /// Both chains are informed of the two events in the same order.
    pub fn chains_agree_on_order(&self) -> bool {
        self.pair.p * self.pair.q > 0.0
    }

    /// The pair with the interval taken from the event this frame sees first
    /// (non-negative time component).
    pub fn oriented_pair(&self) -> PairQuant {
        if symmetric_scalar(self.pair) < 0.0 {
            -self.pair
        } else {
            self.pair
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameReport {
    pub frame: usize,
    pub outcome: Result<FrameQuantification, Unquantifiable>,
    /// False when the frame's scalar disagrees with frames that bound the
    /// interval; `None` when there is nothing to compare against.
    pub bounding: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossValidation {
    pub frames: Vec<FrameReport>,
    /// All quantifying frames agree on the interval scalar.
    pub consensus: bool,
    /// Scalar of the frames whose pair components have opposite signs.
    pub reference_scalar: Option<f64>,
    pub non_bounding: Vec<usize>,
}

fn quantify_interval(
    cs: &CausalSet,
    a: EventId,
    b: EventId,
    frame: &Frame,
) -> Result<FrameQuantification, Unquantifiable> {
    let mut pairs = [PairQuant::default(); 2];
    for (slot, event) in pairs.iter_mut().zip([a, b]) {
        let p = project(cs, event, &frame.p).ok_or(Unquantifiable {
            event,
            side: ChainSide::P,
        })?;
        let q = project(cs, event, &frame.q).ok_or(Unquantifiable {
            event,
            side: ChainSide::Q,
        })?;
        *slot = PairQuant::new(p as f64, q as f64);
    }
    Ok(FrameQuantification::from_pair(interval_pair(
        pairs[0], pairs[1],
    )))
}

/// Quantifies the interval `(a, b)` in every frame and compares the scalars.
///
/// A frame whose pair has components of opposite sign sees the events in
/// opposite orders on its two chains, so the interval lies between them. The
/// first such frame sets the reference scalar; quantified frames that
/// disagree with it are reported as non-bounding.
pub fn cross_validate(
    cs: &CausalSet,
    a: EventId,
    b: EventId,
    frames: &[Frame],
    tolerance: f64,
) -> Result<CrossValidation, QuantifyError> {
    cs.check_id(a)?;
    cs.check_id(b)?;
    if frames.is_empty() {
        return Err(QuantifyError::NoFrames);
    }
    let outcomes: Vec<_> = frames
        .iter()
        .map(|f| quantify_interval(cs, a, b, f))
        .collect();

    let quantified: Vec<f64> = outcomes
        .iter()
        .filter_map(|o| o.as_ref().ok().map(|q| q.scalar))
        .collect();
    let consensus = quantified
        .first()
        .is_none_or(|&s0| quantified.iter().all(|&s| scalars_agree(s, s0, tolerance)));

    let reference_scalar = outcomes
        .iter()
        .filter_map(|o| o.as_ref().ok())
        .find(|q| q.pair.p * q.pair.q < 0.0)
        .map(|q| q.scalar);

    let mut non_bounding = Vec::new();
    let reports = outcomes
        .into_iter()
        .enumerate()
        .map(|(i, outcome)| {
            let bounding = match (&outcome, reference_scalar) {
                (Ok(q), Some(reference)) => Some(scalars_agree(q.scalar, reference, tolerance)),
                _ => None,
            };
            if bounding == Some(false) {
                non_bounding.push(i);
            }
            FrameReport {
                frame: i,
                outcome,
                bounding,
            }
        })
        .collect();

    Ok(CrossValidation {
        frames: reports,
        consensus,
        reference_scalar,
        non_bounding,
    })
}

/// The solutions of the decomposition functional equation considered as
/// candidate scalar measures of a pair `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarCandidate {
    /// `a` (F1)
    FirstComponent,
    /// `b` (F2)
    SecondComponent,
    /// `ab` (F3)
    Product,
    /// `(a + b)^n`, `n` odd (F4)
    OddPowerOfSum(u32),
    /// `a² + b²` (F5)
    SumOfSquares,
}

impl ScalarCandidate {
    /// F1–F5 with F4 at `n ∈ {1, 3, 5}`.
    pub const STANDARD: [ScalarCandidate; 7] = [
        Self::FirstComponent,
        Self::SecondComponent,
        Self::Product,
        Self::OddPowerOfSum(1),
        Self::OddPowerOfSum(3),
        Self::OddPowerOfSum(5),
        Self::SumOfSquares,
    ];

    pub fn evaluate(self, a: f64, b: f64) -> f64 {
        match self {
            Self::FirstComponent => a,
            Self::SecondComponent => b,
            Self::Product => a * b,
            Self::OddPowerOfSum(n) => (a + b).powi(n as i32),
            Self::SumOfSquares => a * a + b * b,
        }
    }

    pub fn tag(self) -> String {
        match self {
            Self::FirstComponent => "F1".into(),
            Self::SecondComponent => "F2".into(),
            Self::Product => "F3".into(),
            Self::OddPowerOfSum(n) => format!("F4(n={n})"),
            Self::SumOfSquares => "F5".into(),
        }
    }
}

impl fmt::Display for ScalarCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// Family of maps `g` tried in `g(f(a, b)) = g(a) + g(b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdditiveMap {
    Identity,
    LogAbs,
}

impl AdditiveMap {
    pub const ALL: [AdditiveMap; 2] = [Self::Identity, Self::LogAbs];

    pub fn apply(self, v: f64) -> f64 {
        match self {
            Self::Identity => v,
            Self::LogAbs => v.abs().ln(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    /// `f(f(a, b), c) ≠ f(a, f(b, c))`.
    Triple {
        a: f64,
        b: f64,
        c: f64,
        left: f64,
        right: f64,
    },
    /// `g(f(a, b)) ≠ g(a) + g(b)` for every map in the family.
    Additive { a: f64, b: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CandidateAudit {
    pub candidate: ScalarCandidate,
    pub passes_decomposition: bool,
    /// Largest relative residual of the decomposition equation over the samples.
    pub decomposition_residual: f64,
    pub passes_associativity: bool,
    /// The map that makes the candidate additive, when one exists.
    pub additive_map: Option<AdditiveMap>,
    pub counterexample: Option<Counterexample>,
}

/// Relative tolerance of the candidate audit.
pub const AUDIT_TOLERANCE: f64 = 1e-9;

fn relative_gap(lhs: f64, rhs: f64, scale: f64) -> f64 {
    let denom = lhs.abs().max(rhs.abs()).max(scale).max(f64::MIN_POSITIVE);
    (lhs - rhs).abs() / denom
}

/// Tests each of [`ScalarCandidate::STANDARD`] against the decomposition
/// equation `f(a,b) = f(s,s) + f(d,−d)` (with `s = (a+b)/2`, `d = (a−b)/2`)
/// and against associativity `g(f(a,b)) = g(a) + g(b)` for `g` in
/// [`AdditiveMap::ALL`].
pub fn audit_scalar_candidates(
    samples: &[(f64, f64)],
) -> Result<Vec<CandidateAudit>, QuantifyError> {
    if samples.is_empty() {
        return Err(QuantifyError::DegenerateSamples { index: 0 });
    }
    for (index, &(a, b)) in samples.iter().enumerate() {
        let ok = [a, b, a + b, a - b]
            .iter()
            .all(|v| v.is_finite() && *v != 0.0);
        if !ok {
            return Err(QuantifyError::DegenerateSamples { index });
        }
    }
    Ok(ScalarCandidate::STANDARD
        .iter()
        .map(|&c| audit_candidate(c, samples))
        .collect())
}

fn audit_candidate(candidate: ScalarCandidate, samples: &[(f64, f64)]) -> CandidateAudit {
    let f = |a, b| candidate.evaluate(a, b);

    let decomposition_residual = samples
        .iter()
        .map(|&(a, b)| {
            let s = (a + b) / 2.0;
            let d = (a - b) / 2.0;
            let (sym, anti) = (f(s, s), f(d, -d));
            relative_gap(f(a, b), sym + anti, sym.abs().max(anti.abs()))
        })
        .fold(0.0, f64::max);

    let additive_map = AdditiveMap::ALL.into_iter().find(|&g| {
        samples.iter().all(|&(a, b)| {
            let (lhs, ga, gb) = (g.apply(f(a, b)), g.apply(a), g.apply(b));
            relative_gap(lhs, ga + gb, ga.abs().max(gb.abs()).max(1.0)) <= AUDIT_TOLERANCE
        })
    });

    let counterexample = if additive_map.is_some() {
        None
    } else {
        triple_counterexample(candidate, samples).or_else(|| {
            samples
                .iter()
                .find(|&&(a, b)| {
                    AdditiveMap::ALL.iter().all(|g| {
                        let (lhs, ga, gb) = (g.apply(f(a, b)), g.apply(a), g.apply(b));
                        relative_gap(lhs, ga + gb, ga.abs().max(gb.abs()).max(1.0))
                            > AUDIT_TOLERANCE
                    })
                })
                .map(|&(a, b)| Counterexample::Additive { a, b })
        })
    };

    CandidateAudit {
        candidate,
        passes_decomposition: decomposition_residual <= AUDIT_TOLERANCE,
        decomposition_residual,
        passes_associativity: additive_map.is_some(),
        additive_map,
        counterexample,
    }
}

/// Searches triples `(a_i, b_i, b_{i+1})` for a failure of `f(f(a,b),c) = f(a,f(b,c))`.
fn triple_counterexample(
    candidate: ScalarCandidate,
    samples: &[(f64, f64)],
) -> Option<Counterexample> {
    let f = |a, b| candidate.evaluate(a, b);
    let n = samples.len();
    (0..n).find_map(|i| {
        let (a, b) = samples[i];
        let c = samples[(i + 1) % n].1;
        let left = f(f(a, b), c);
        let right = f(a, f(b, c));
        (left.is_finite() && right.is_finite() && relative_gap(left, right, 0.0) > AUDIT_TOLERANCE)
            .then_some(Counterexample::Triple {
                a,
                b,
                c,
                left,
                right,
            })
    })
}
