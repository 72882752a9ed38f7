//! Ground truth for the quantification code: causal sets embedded in flat
//! 1+1 or 2+1 dimensional spacetime.
//!
//! Events come from Poisson sprinkling into an axis-aligned box, from
//! explicitly placed markers, and from the ticks of ideal clocks moving on
//! straight worldlines. The order is read off the light cones (light speed 1).
//! Continuum radar formulas give the exact arrival of a light signal at a
//! worldline, which is what a projection approximates to within one tick.
//!
//! Sprinkling is reproducible from the seed alone: the generator is ChaCha8
//! seeded through `SeedableRng::seed_from_u64`, the event count is drawn
//! first and then each event's coordinates in the order `t, x[, y]`.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use thiserror::Error;

use crate::poset::{CausalSet, CausetError, EventId, MAX_EVENTS};
use crate::quantify::{Frame, ObserverChain, PairQuant, QuantifyError};

/// Slack on the light-cone test so that signals arriving exactly on a tick
/// (up to rounding) reach it.
pub const LIGHT_CONE_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("region has no volume or non-finite bounds")]
    RegionEmpty,
    #[error("box needs 4 values (t0,x0,t1,x1) or 6 values (t0,x0,y0,t1,x1,y1), got {0}")]
    BoxArity(usize),
    #[error("density must be positive and finite, got {0}")]
    InvalidDensity(f64),
    #[error("spacetime dimension must be 2 or 3, got {0}")]
    InvalidDimension(usize),
    #[error("configuration is {found:?} but the builder is {expected:?}")]
    DimensionMismatch {
        expected: Dimension,
        found: Dimension,
    },
    #[error("worldline speed {0} is not below light speed")]
    Superluminal(f64),
    #[error("tick interval must be positive and finite, got {0}")]
    InvalidTickInterval(f64),
    #[error("tick {tick} of worldline {name} lies outside the region")]
    WorldlineOutsideRegion { name: String, tick: i64 },
    #[error("worldline {0} has no ticks inside the region")]
    NoTicks(String),
    #[error("sprinkling would create {requested} events, more than the supported {max}")]
    TooManyEvents { requested: usize, max: usize },
    #[error("name {0} is already in use")]
    DuplicateName(String),
    #[error("no chain named {0}")]
    UnknownChain(String),
    #[error("no event named {0}")]
    UnknownEvent(String),
    #[error("chain is not an embedded worldline")]
    NotEmbedded,
    #[error("event {0} lies above every tick of a chain")]
    OutsideCoverage(EventId),
    #[error(transparent)]
    Causet(#[from] CausetError),
    #[error(transparent)]
    Quantify(#[from] QuantifyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dimension {
    OnePlusOne,
    TwoPlusOne,
}

impl Dimension {
    pub fn from_spacetime_dim(dim: usize) -> Result<Self, OracleError> {
        match dim {
            2 => Ok(Self::OnePlusOne),
            3 => Ok(Self::TwoPlusOne),
            other => Err(OracleError::InvalidDimension(other)),
        }
    }

    pub fn spacetime_dim(self) -> usize {
        match self {
            Self::OnePlusOne => 2,
            Self::TwoPlusOne => 3,
        }
    }

    pub fn spatial_dim(self) -> usize {
        self.spacetime_dim() - 1
    }
}

/// A point in flat spacetime. `y` is zero in 1+1 dimensions.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MinkowskiPoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

impl MinkowskiPoint {
    pub const fn new(t: f64, x: f64) -> Self {
        Self { t, x, y: 0.0 }
    }

    pub const fn new_2d(t: f64, x: f64, y: f64) -> Self {
        Self { t, x, y }
    }

    pub fn spatial_distance(&self, other: &Self) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Components in `[t, x]` or `[t, x, y]` order.
    pub fn components(&self, dimension: Dimension) -> Vec<f64> {
        match dimension {
            Dimension::OnePlusOne => vec![self.t, self.x],
            Dimension::TwoPlusOne => vec![self.t, self.x, self.y],
        }
    }
}

/// `a ≤ b` in the light-cone order.
pub fn light_cone_precedes(a: &MinkowskiPoint, b: &MinkowskiPoint) -> bool {
    let dt = b.t - a.t;
    if dt < 0.0 {
        return false;
    }
    let reach = dt + LIGHT_CONE_SLACK;
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    reach * reach >= dx * dx + dy * dy
}

/// An axis-aligned spacetime box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Region {
    dimension: Dimension,
    lower: MinkowskiPoint,
    upper: MinkowskiPoint,
}

impl Region {
    pub fn new(
        dimension: Dimension,
        lower: MinkowskiPoint,
        upper: MinkowskiPoint,
    ) -> Result<Self, OracleError> {
        let (lower, upper) = match dimension {
            Dimension::OnePlusOne => (
                MinkowskiPoint::new(lower.t, lower.x),
                MinkowskiPoint::new(upper.t, upper.x),
            ),
            Dimension::TwoPlusOne => (lower, upper),
        };
        let region = Self {
            dimension,
            lower,
            upper,
        };
        let extents = region.extents();
        if extents[..dimension.spacetime_dim()]
            .iter()
            .all(|e| e.is_finite() && *e > 0.0)
        {
            Ok(region)
        } else {
            Err(OracleError::RegionEmpty)
        }
    }

    pub fn new_1d(t: (f64, f64), x: (f64, f64)) -> Result<Self, OracleError> {
        Self::new(
            Dimension::OnePlusOne,
            MinkowskiPoint::new(t.0, x.0),
            MinkowskiPoint::new(t.1, x.1),
        )
    }

    pub fn new_2d(t: (f64, f64), x: (f64, f64), y: (f64, f64)) -> Result<Self, OracleError> {
        Self::new(
            Dimension::TwoPlusOne,
            MinkowskiPoint::new_2d(t.0, x.0, y.0),
            MinkowskiPoint::new_2d(t.1, x.1, y.1),
        )
    }

    /// `[t0, x0, t1, x1]` or `[t0, x0, y0, t1, x1, y1]`.
    pub fn from_box(values: &[f64]) -> Result<Self, OracleError> {
        match *values {
            [t0, x0, t1, x1] => Self::new_1d((t0, t1), (x0, x1)),
            [t0, x0, y0, t1, x1, y1] => Self::new_2d((t0, t1), (x0, x1), (y0, y1)),
            _ => Err(OracleError::BoxArity(values.len())),
        }
    }

    fn extents(&self) -> [f64; 3] {
        [
            self.upper.t - self.lower.t,
            self.upper.x - self.lower.x,
            self.upper.y - self.lower.y,
        ]
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn lower(&self) -> MinkowskiPoint {
        self.lower
    }

    pub fn upper(&self) -> MinkowskiPoint {
        self.upper
    }

    pub fn volume(&self) -> f64 {
        self.extents()[..self.dimension.spacetime_dim()]
            .iter()
            .product()
    }

    pub fn contains(&self, p: &MinkowskiPoint) -> bool {
        self.contains_time(p.t) && self.contains_space(p)
    }

    pub fn contains_time(&self, t: f64) -> bool {
        (self.lower.t..=self.upper.t).contains(&t)
    }

    pub fn contains_space(&self, p: &MinkowskiPoint) -> bool {
        let x_ok = (self.lower.x..=self.upper.x).contains(&p.x);
        match self.dimension {
            Dimension::OnePlusOne => x_ok,
            Dimension::TwoPlusOne => x_ok && (self.lower.y..=self.upper.y).contains(&p.y),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SprinkleConfig {
    pub region: Region,
    /// Expected events per unit spacetime volume.
    pub density: f64,
    pub seed: u64,
}

impl SprinkleConfig {
    pub fn new(region: Region, density: f64, seed: u64) -> Result<Self, OracleError> {
        if !(density.is_finite() && density > 0.0) {
            return Err(OracleError::InvalidDensity(density));
        }
        Ok(Self {
            region,
            density,
            seed,
        })
    }

    pub fn expected_count(&self) -> f64 {
        self.density * self.region.volume()
    }

    /// Poisson-distributed count of uniform points in the region.
    pub fn sample_points(&self) -> Result<Vec<MinkowskiPoint>, OracleError> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let poisson = Poisson::new(self.expected_count())
            .map_err(|_| OracleError::InvalidDensity(self.density))?;
        let count = poisson.sample(&mut rng);
        if count > MAX_EVENTS as f64 {
            return Err(OracleError::TooManyEvents {
                requested: count as usize,
                max: MAX_EVENTS,
            });
        }
        let (lo, hi) = (self.region.lower, self.region.upper);
        let mut uniform = |a: f64, b: f64| a + (b - a) * rng.random::<f64>();
        Ok((0..count as usize)
            .map(|_| {
                let t = uniform(lo.t, hi.t);
                let x = uniform(lo.x, hi.x);
                let y = match self.region.dimension {
                    Dimension::OnePlusOne => 0.0,
                    Dimension::TwoPlusOne => uniform(lo.y, hi.y),
                };
                MinkowskiPoint { t, x, y }
            })
            .collect())
    }
}

/// An ideal clock on a straight worldline.
#[derive(Clone, Debug, PartialEq)]
pub struct WorldlineSpec {
    /// Spatial position at the start of the builder's region.
    pub position0: [f64; 2],
    pub velocity: [f64; 2],
    /// Proper time between ticks.
    pub tick_interval: f64,
    /// Proper time of tick 0, counted from lab time 0 along the worldline.
    pub phase: f64,
    /// Restricts the emitted ticks to these labels; by default every tick
    /// inside the region's time range is emitted.
    pub labels: Option<RangeInclusive<i64>>,
}

impl WorldlineSpec {
    /// At rest at `x` with the given tick interval and phase.
    pub fn at_rest(x: f64, tick_interval: f64, phase: f64) -> Self {
        Self {
            position0: [x, 0.0],
            velocity: [0.0, 0.0],
            tick_interval,
            phase,
            labels: None,
        }
    }

    pub fn at_rest_2d(x: f64, y: f64, tick_interval: f64, phase: f64) -> Self {
        Self {
            position0: [x, y],
            ..Self::at_rest(0.0, tick_interval, phase)
        }
    }

    pub fn moving(x: f64, velocity: f64, tick_interval: f64, phase: f64) -> Self {
        Self {
            position0: [x, 0.0],
            velocity: [velocity, 0.0],
            tick_interval,
            phase,
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: RangeInclusive<i64>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn speed(&self) -> f64 {
        self.velocity[0].hypot(self.velocity[1])
    }

    /// A clock co-moving with this one at distance `rest_separation` ahead
    /// along the direction of motion (`+x` when at rest), with its ticks
    /// simultaneous to this one's in the common rest frame.
    pub fn comoving_partner(&self, rest_separation: f64) -> Self {
        let speed = self.speed();
        let direction = if speed > 0.0 {
            [self.velocity[0] / speed, self.velocity[1] / speed]
        } else {
            [1.0, 0.0]
        };
        let gamma = 1.0 / (1.0 - speed * speed).sqrt();
        let offset = rest_separation / gamma;
        Self {
            position0: [
                self.position0[0] + offset * direction[0],
                self.position0[1] + offset * direction[1],
            ],
            phase: self.phase + speed * rest_separation,
            ..self.clone()
        }
    }

    /// The worldline in lab coordinates, with `position0` taken at `t_start`.
    pub fn worldline(&self, t_start: f64) -> Result<Worldline, OracleError> {
        Worldline::from_spec(self, t_start)
    }

    fn validate(&self) -> Result<(), OracleError> {
        let speed = self.speed();
        if speed.is_nan() || speed >= 1.0 {
            return Err(OracleError::Superluminal(speed));
        }
        if !(self.tick_interval.is_finite() && self.tick_interval > 0.0) {
            return Err(OracleError::InvalidTickInterval(self.tick_interval));
        }
        Ok(())
    }
}

/// A validated worldline in lab coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Worldline {
    /// Spatial position at lab time 0.
    origin: [f64; 2],
    velocity: [f64; 2],
    gamma: f64,
    tick_interval: f64,
    phase: f64,
}

impl Worldline {
    fn from_spec(spec: &WorldlineSpec, t_start: f64) -> Result<Self, OracleError> {
        spec.validate()?;
        let speed = spec.speed();
        Ok(Self {
            origin: [
                spec.position0[0] - spec.velocity[0] * t_start,
                spec.position0[1] - spec.velocity[1] * t_start,
            ],
            velocity: spec.velocity,
            gamma: 1.0 / (1.0 - speed * speed).sqrt(),
            tick_interval: spec.tick_interval,
            phase: spec.phase,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn velocity(&self) -> [f64; 2] {
        self.velocity
    }

    pub fn tick_interval(&self) -> f64 {
        self.tick_interval
    }

    pub fn position(&self, t: f64) -> [f64; 2] {
        [
            self.origin[0] + self.velocity[0] * t,
            self.origin[1] + self.velocity[1] * t,
        ]
    }

    pub fn tick_time(&self, label: i64) -> f64 {
        self.gamma * (self.phase + label as f64 * self.tick_interval)
    }

    pub fn tick_point(&self, label: i64) -> MinkowskiPoint {
        let t = self.tick_time(label);
        let [x, y] = self.position(t);
        MinkowskiPoint { t, x, y }
    }

    /// Lab time at which a light signal from `e` reaches the worldline.
    pub fn arrival_time(&self, e: &MinkowskiPoint) -> f64 {
        let [x, y] = self.position(e.t);
        let u = [x - e.x, y - e.y];
        let v = self.velocity;
        let uv = u[0] * v[0] + u[1] * v[1];
        let uu = u[0] * u[0] + u[1] * u[1];
        let vv = v[0] * v[0] + v[1] * v[1];
        // Positive root of (1 - v²)τ² - 2(u·v)τ - u² = 0.
        let delay = (uv + (uv * uv + (1.0 - vv) * uu).sqrt()) / (1.0 - vv);
        e.t + delay
    }

    /// Continuum label of the signal arrival from `e`: the tick at or after
    /// it is the ceiling of this value.
    pub fn arrival_label(&self, e: &MinkowskiPoint) -> f64 {
        (self.arrival_time(e) / self.gamma - self.phase) / self.tick_interval
    }

    fn label_span(&self, t_lo: f64, t_hi: f64) -> RangeInclusive<i64> {
        let first = ((t_lo / self.gamma - self.phase) / self.tick_interval).ceil() as i64;
        let last = ((t_hi / self.gamma - self.phase) / self.tick_interval).floor() as i64;
        first..=last
    }
}

/// What an event in an [`EmbeddedCauset`] is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Sprinkled,
    Tick,
    Marker,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedChain {
    pub chain: ObserverChain,
    pub worldline: Worldline,
}

struct PendingChain {
    name: String,
    worldline: Worldline,
    points: Vec<usize>,
    labels: Vec<i64>,
}

/// Collects events in a region and builds their light-cone causal set.
pub struct SpacetimeBuilder {
    region: Region,
    points: Vec<MinkowskiPoint>,
    kinds: Vec<EventKind>,
    chains: Vec<PendingChain>,
    markers: Vec<(String, usize)>,
}

impl SpacetimeBuilder {
    pub fn new(region: Region) -> Self {
        Self {
            region,
            points: Vec::new(),
            kinds: Vec::new(),
            chains: Vec::new(),
            markers: Vec::new(),
        }
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn event_count(&self) -> usize {
        self.points.len()
    }

    fn push(&mut self, point: MinkowskiPoint, kind: EventKind) -> usize {
        self.points.push(point);
        self.kinds.push(kind);
        self.points.len() - 1
    }

    fn check_name(&self, name: &str) -> Result<(), OracleError> {
        let taken = self.chains.iter().any(|c| c.name == name)
            || self.markers.iter().any(|(n, _)| n == name);
        if taken {
            Err(OracleError::DuplicateName(name.to_owned()))
        } else {
            Ok(())
        }
    }

    /// Adds a Poisson sprinkling of `config.region`, which may differ from the
    /// builder's region. Returns the number of events added.
    pub fn sprinkle(&mut self, config: &SprinkleConfig) -> Result<usize, OracleError> {
        if config.region.dimension != self.region.dimension {
            return Err(OracleError::DimensionMismatch {
                expected: self.region.dimension,
                found: config.region.dimension,
            });
        }
        let points = config.sample_points()?;
        let added = points.len();
        for p in points {
            self.push(p, EventKind::Sprinkled);
        }
        Ok(added)
    }

    /// Adds a single named event.
    pub fn add_event(&mut self, name: &str, point: MinkowskiPoint) -> Result<(), OracleError> {
        self.check_name(name)?;
        let index = self.push(point, EventKind::Marker);
        self.markers.push((name.to_owned(), index));
        Ok(())
    }

    /// Inserts the ticks of an ideal clock as new events. Returns the number
    /// of ticks.
    pub fn embed_observer(
        &mut self,
        name: &str,
        spec: &WorldlineSpec,
    ) -> Result<usize, OracleError> {
        self.check_name(name)?;
        let worldline = Worldline::from_spec(spec, self.region.lower.t)?;
        let labels = match &spec.labels {
            Some(range) => range.clone(),
            None => worldline.label_span(self.region.lower.t, self.region.upper.t),
        };
        if labels.is_empty() {
            return Err(OracleError::NoTicks(name.to_owned()));
        }
        let mut pending = PendingChain {
            name: name.to_owned(),
            worldline,
            points: Vec::new(),
            labels: Vec::new(),
        };
        for label in labels {
            let point = worldline.tick_point(label);
            if !self.region.contains(&point) {
                return Err(OracleError::WorldlineOutsideRegion {
                    name: name.to_owned(),
                    tick: label,
                });
            }
            pending.points.push(self.points.len());
            pending.labels.push(label);
            self.push(point, EventKind::Tick);
        }
        let count = pending.points.len();
        self.chains.push(pending);
        Ok(count)
    }

    /// Orders the events by time, numbers them in that order and relates
    /// every pair by the light-cone test.
    pub fn build(self) -> Result<EmbeddedCauset, OracleError> {
        let n = self.points.len();
        if n > MAX_EVENTS {
            return Err(CausetError::TooManyEvents {
                requested: n,
                max: MAX_EVENTS,
            }
            .into());
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            self.points[a]
                .t
                .total_cmp(&self.points[b].t)
                .then(a.cmp(&b))
        });
        let mut new_id = vec![0usize; n];
        for (id, &old) in order.iter().enumerate() {
            new_id[old] = id;
        }
        let points: Vec<MinkowskiPoint> = order.iter().map(|&i| self.points[i]).collect();
        let kinds: Vec<EventKind> = order.iter().map(|&i| self.kinds[i]).collect();

        let rows: Vec<FixedBitSet> = (0..n)
            .into_par_iter()
            .map(|b| {
                let mut row = FixedBitSet::with_capacity(n);
                let pb = &points[b];
                for (a, pa) in points[..b].iter().enumerate() {
                    if light_cone_precedes(pa, pb) {
                        row.insert(a);
                    }
                }
                row
            })
            .collect();
        let causet = CausalSet::from_direct_past((0..n).map(EventId::new).collect(), rows);

        let mut chains = BTreeMap::new();
        for pending in self.chains {
            let events = pending
                .points
                .iter()
                .map(|&i| EventId::new(new_id[i]))
                .collect();
            let chain = ObserverChain::new(&causet, events, pending.labels)?;
            chains.insert(
                pending.name,
                EmbeddedChain {
                    chain,
                    worldline: pending.worldline,
                },
            );
        }
        let markers = self
            .markers
            .into_iter()
            .map(|(name, i)| (name, EventId::new(new_id[i])))
            .collect();
        Ok(EmbeddedCauset {
            causet,
            region: self.region,
            points,
            kinds,
            chains,
            markers,
        })
    }
}

/// Sprinkles `config.region` and builds the resulting causal set.
pub fn sprinkle(config: &SprinkleConfig) -> Result<EmbeddedCauset, OracleError> {
    let mut builder = SpacetimeBuilder::new(config.region);
    builder.sprinkle(config)?;
    builder.build()
}

/// Continuum and actual projections of one event onto a frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadarQuant {
    /// Arrival labels from the radar formula (real-valued).
    pub continuum: PairQuant,
    /// Labels of the projected ticks.
    pub discrete: PairQuant,
}

/// A causal set together with the spacetime it was built from.
#[derive(Clone, Debug)]
pub struct EmbeddedCauset {
    causet: CausalSet,
    region: Region,
    points: Vec<MinkowskiPoint>,
    kinds: Vec<EventKind>,
    chains: BTreeMap<String, EmbeddedChain>,
    markers: BTreeMap<String, EventId>,
}

impl EmbeddedCauset {
    pub fn causet(&self) -> &CausalSet {
        &self.causet
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn dimension(&self) -> Dimension {
        self.region.dimension
    }

    pub fn point(&self, e: EventId) -> &MinkowskiPoint {
        &self.points[e.index()]
    }

    pub fn points(&self) -> &[MinkowskiPoint] {
        &self.points
    }

    pub fn kind(&self, e: EventId) -> EventKind {
        self.kinds[e.index()]
    }

    pub fn events_of_kind(&self, kind: EventKind) -> impl Iterator<Item = EventId> + '_ {
        self.causet.events().filter(move |&e| self.kind(e) == kind)
    }

    pub fn chain_names(&self) -> impl Iterator<Item = &str> {
        self.chains.keys().map(String::as_str)
    }

    pub fn embedded_chain(&self, name: &str) -> Result<&EmbeddedChain, OracleError> {
        self.chains
            .get(name)
            .ok_or_else(|| OracleError::UnknownChain(name.to_owned()))
    }

    pub fn chain(&self, name: &str) -> Result<&ObserverChain, OracleError> {
        self.embedded_chain(name).map(|c| &c.chain)
    }

    /// The named event markers.
    pub fn markers(&self) -> &BTreeMap<String, EventId> {
        &self.markers
    }

    pub fn event(&self, name: &str) -> Result<EventId, OracleError> {
        self.markers
            .get(name)
            .copied()
            .ok_or_else(|| OracleError::UnknownEvent(name.to_owned()))
    }

    /// The frame made of two named chains; fails if they are not synchronized.
    pub fn frame(&self, p: &str, q: &str) -> Result<Frame, OracleError> {
        Ok(Frame::new(
            &self.causet,
            self.chain(p)?.clone(),
            self.chain(q)?.clone(),
        )?)
    }

    /// The worldline whose ticks make up `chain`.
    pub fn worldline_of(&self, chain: &ObserverChain) -> Option<&Worldline> {
        self.chains
            .values()
            .find(|c| c.chain.events() == chain.events())
            .map(|c| &c.worldline)
    }

    /// Radar formula and actual projection of `e` onto both chains of `frame`.
    pub fn radar_quantify(&self, e: EventId, frame: &Frame) -> Result<RadarQuant, OracleError> {
        self.causet.check_id(e)?;
        let point = self.point(e);
        let mut continuum = [0.0; 2];
        let mut discrete = [0.0; 2];
        for (i, chain) in [frame.p(), frame.q()].into_iter().enumerate() {
            let worldline = self.worldline_of(chain).ok_or(OracleError::NotEmbedded)?;
            continuum[i] = worldline.arrival_label(point);
            discrete[i] = crate::quantify::project(&self.causet, e, chain)
                .ok_or(OracleError::OutsideCoverage(e))? as f64;
        }
        Ok(RadarQuant {
            continuum: PairQuant::new(continuum[0], continuum[1]),
            discrete: PairQuant::new(discrete[0], discrete[1]),
        })
    }
}

/// Free-function form of [`EmbeddedCauset::radar_quantify`].
pub fn radar_quantify(
    ec: &EmbeddedCauset,
    e: EventId,
    frame: &Frame,
) -> Result<RadarQuant, OracleError> {
    ec.radar_quantify(e, frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantify::{check_synchronized, project};

    fn strip(t_end: f64, x_end: f64) -> Region {
        Region::new_1d((0.0, t_end), (0.0, x_end)).unwrap()
    }

    #[test]
    fn region_validation() {
        assert_eq!(
            Region::new_1d((0.0, 0.0), (0.0, 1.0)).unwrap_err(),
            OracleError::RegionEmpty
        );
        assert!(Region::new_2d((0.0, 1.0), (0.0, 1.0), (2.0, 1.0)).is_err());
        assert!(Region::from_box(&[0.0, 0.0, 64.0, 64.0]).is_ok());
        assert_eq!(
            Region::from_box(&[1.0, 2.0, 3.0]).unwrap_err(),
            OracleError::BoxArity(3)
        );
        let r = Region::from_box(&[0.0, 0.0, 0.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(r.volume(), 24.0);
        assert_eq!(r.dimension(), Dimension::TwoPlusOne);
    }

    #[test]
    fn density_validation() {
        let r = strip(1.0, 1.0);
        assert_eq!(
            SprinkleConfig::new(r, 0.0, 1).unwrap_err(),
            OracleError::InvalidDensity(0.0)
        );
        assert!(SprinkleConfig::new(r, -3.0, 1).is_err());
        assert!(SprinkleConfig::new(r, f64::INFINITY, 1).is_err());
    }

    #[test]
    fn tiny_density_gives_near_empty_set() {
        let config = SprinkleConfig::new(strip(10.0, 10.0), 1e-6, 3).unwrap();
        assert!(sprinkle(&config).unwrap().causet().event_count() <= 1);
    }

    #[test]
    fn sprinkling_is_deterministic() {
        let config = SprinkleConfig::new(strip(12.0, 12.0), 3.0, 99).unwrap();
        let a = sprinkle(&config).unwrap();
        let b = sprinkle(&config).unwrap();
        assert_eq!(a.points(), b.points());
        assert_eq!(a.causet(), b.causet());
        let other = sprinkle(&SprinkleConfig {
            seed: 100,
            ..config
        })
        .unwrap();
        assert_ne!(a.points(), other.points());
    }

    #[test]
    fn events_are_numbered_in_time_order() {
        let ec = sprinkle(&SprinkleConfig::new(strip(8.0, 8.0), 4.0, 5).unwrap()).unwrap();
        assert!(ec.points().windows(2).all(|w| w[0].t <= w[1].t));
        assert!(ec.points().iter().all(|p| ec.region().contains(p)));
    }

    #[test]
    fn light_cone_relation() {
        let mut b = SpacetimeBuilder::new(strip(10.0, 10.0));
        b.add_event("a", MinkowskiPoint::new(1.0, 5.0)).unwrap();
        b.add_event("b", MinkowskiPoint::new(3.0, 6.5)).unwrap();
        b.add_event("c", MinkowskiPoint::new(2.0, 8.0)).unwrap();
        let ec = b.build().unwrap();
        let cs = ec.causet();
        let (a, bb, c) = (
            ec.event("a").unwrap(),
            ec.event("b").unwrap(),
            ec.event("c").unwrap(),
        );
        assert!(cs.precedes(a, bb));
        assert!(!cs.precedes(a, c) && !cs.precedes(c, a));
        assert!(cs.precedes(c, bb) == light_cone_precedes(ec.point(c), ec.point(bb)));
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let mut b = SpacetimeBuilder::new(strip(10.0, 10.0));
        b.add_event("a", MinkowskiPoint::new(1.0, 5.0)).unwrap();
        assert!(matches!(
            b.embed_observer("a", &WorldlineSpec::at_rest(1.0, 1.0, 0.0)),
            Err(OracleError::DuplicateName(_))
        ));
    }

    #[test]
    fn rest_ticks_follow_phase_and_interval() {
        let mut b = SpacetimeBuilder::new(strip(10.0, 10.0));
        b.embed_observer("P", &WorldlineSpec::at_rest(2.0, 2.0, 0.5))
            .unwrap();
        let ec = b.build().unwrap();
        let chain = ec.chain("P").unwrap();
        let times: Vec<f64> = chain.events().iter().map(|&e| ec.point(e).t).collect();
        assert_eq!(times, vec![0.5, 2.5, 4.5, 6.5, 8.5]);
        assert_eq!(chain.valuations(), &[0, 1, 2, 3, 4]);
        assert!(ec.causet().is_chain(chain.events()).unwrap());
    }

    #[test]
    fn moving_ticks_are_dilated() {
        let mut b = SpacetimeBuilder::new(strip(30.0, 30.0));
        b.embed_observer("M", &WorldlineSpec::moving(1.0, 0.6, 2.0, 0.0))
            .unwrap();
        let ec = b.build().unwrap();
        let chain = ec.chain("M").unwrap();
        assert!(ec.causet().is_chain(chain.events()).unwrap());
        for w in chain.events().windows(2) {
            let dt = ec.point(w[1]).t - ec.point(w[0]).t;
            assert!((dt - 2.5).abs() < 1e-12, "spacing {dt}");
        }
    }

    #[test]
    fn worldline_must_stay_in_region() {
        let mut b = SpacetimeBuilder::new(strip(30.0, 10.0));
        let err = b
            .embed_observer("M", &WorldlineSpec::moving(1.0, 0.6, 1.0, 0.0))
            .unwrap_err();
        assert!(matches!(err, OracleError::WorldlineOutsideRegion { .. }));
        assert!(matches!(
            b.embed_observer("F", &WorldlineSpec::moving(1.0, 1.0, 1.0, 0.0)),
            Err(OracleError::Superluminal(_))
        ));
        assert!(matches!(
            b.embed_observer("Z", &WorldlineSpec::at_rest(1.0, 0.0, 0.0)),
            Err(OracleError::InvalidTickInterval(_))
        ));
    }

    #[test]
    fn radar_midpoint_example() {
        let mut b = SpacetimeBuilder::new(strip(20.0, 8.0));
        b.embed_observer("P", &WorldlineSpec::at_rest(0.0, 1.0, 0.0))
            .unwrap();
        b.embed_observer("Q", &WorldlineSpec::at_rest(8.0, 1.0, 0.0))
            .unwrap();
        b.add_event("mid", MinkowskiPoint::new(0.0, 4.0)).unwrap();
        b.add_event("odd", MinkowskiPoint::new(2.3, 1.7)).unwrap();
        let ec = b.build().unwrap();
        let frame = ec.frame("P", "Q").unwrap();
        let r = ec.radar_quantify(ec.event("mid").unwrap(), &frame).unwrap();
        assert_eq!(r.continuum, PairQuant::new(4.0, 4.0));
        assert_eq!(r.discrete, PairQuant::new(4.0, 4.0));
        let r = ec.radar_quantify(ec.event("odd").unwrap(), &frame).unwrap();
        assert!((r.continuum.p - 4.0).abs() < 1e-12 && (r.continuum.q - 8.6).abs() < 1e-12);
        assert_eq!(r.discrete, PairQuant::new(4.0, 9.0));
    }

    #[test]
    fn radar_on_chain_event_is_its_label() {
        let mut b = SpacetimeBuilder::new(strip(20.0, 8.0));
        b.embed_observer("P", &WorldlineSpec::at_rest(0.0, 1.0, 0.0))
            .unwrap();
        b.embed_observer("Q", &WorldlineSpec::at_rest(8.0, 1.0, 0.0))
            .unwrap();
        let ec = b.build().unwrap();
        let frame = ec.frame("P", "Q").unwrap();
        let tick = frame.p().events()[5];
        let r = ec.radar_quantify(tick, &frame).unwrap();
        assert_eq!(r.continuum.p, 5.0);
        assert_eq!(r.discrete.p, 5.0);
        let top = *frame.q().events().last().unwrap();
        assert_eq!(
            ec.radar_quantify(top, &frame).unwrap_err(),
            OracleError::OutsideCoverage(top)
        );
    }

    #[test]
    fn moving_arrival_matches_doppler_factor() {
        // A clock receding from the origin at 0.6: successive ticks reach x = 0
        // spaced by k = 2 in its proper units.
        let mut b = SpacetimeBuilder::new(strip(40.0, 40.0));
        b.embed_observer(
            "M",
            &WorldlineSpec::moving(0.0, 0.6, 1.0, 0.0).with_labels(0..=5),
        )
        .unwrap();
        let ec = b.build().unwrap();
        let at_origin = Worldline::from_spec(&WorldlineSpec::at_rest(0.0, 1.0, 0.0), 0.0).unwrap();
        let chain = ec.chain("M").unwrap();
        let arrivals: Vec<f64> = chain
            .events()
            .iter()
            .map(|&e| at_origin.arrival_label(ec.point(e)))
            .collect();
        for w in arrivals.windows(2) {
            assert!((w[1] - w[0] - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn comoving_partner_is_synchronized() {
        let tick = 4.0;
        let p = WorldlineSpec::moving(2.0, 0.5, tick, 0.0);
        let q = p.comoving_partner(2.5 * tick);
        let mut b = SpacetimeBuilder::new(strip(200.0, 200.0));
        b.embed_observer("P", &p.clone().with_labels(0..=30))
            .unwrap();
        b.embed_observer("Q", &q.with_labels(0..=30)).unwrap();
        let ec = b.build().unwrap();
        let (pc, qc) = (ec.chain("P").unwrap(), ec.chain("Q").unwrap());
        assert!(check_synchronized(ec.causet(), pc, qc).unwrap().ok);
        assert_eq!(project(ec.causet(), pc.events()[0], qc), Some(3));
    }
}
