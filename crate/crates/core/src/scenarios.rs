//! Fixed constructions used by the acceptance tests and the `scenario`
//! command.
//!
//! | name    | contents |
//! |---------|----------|
//! | `fig2b` | sprinkled 1+1D box with a synchronized rest frame |
//! | `fig3`  | an origin event and five events in each interval class |
//! | `fig5`  | two events seen by three neighbouring chain pairs |
//! | `fig6`  | a rest frame and a frame moving inside it |
//! | `fig7`  | a 3-4-5 right triangle at equal time in 2+1D |

use crate::frames::compose_speeds;
use crate::oracle::{
    EmbeddedCauset, MinkowskiPoint, OracleError, Region, SpacetimeBuilder, SprinkleConfig,
    WorldlineSpec,
};
use crate::poset::EventId;
use crate::quantify::Frame;

pub const SCENARIO_NAMES: [&str; 5] = ["fig2b", "fig3", "fig5", "fig6", "fig7"];

/// A causal set with the frames and events that a construction is about.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub universe: EmbeddedCauset,
    /// Named frames in a fixed order.
    pub frames: Vec<(String, Frame)>,
    /// Reference event for interval pairs, when there is one.
    pub origin: Option<EventId>,
    /// Named events in a fixed order.
    pub selections: Vec<(String, EventId)>,
    /// Length of one tick of the scenario's reference frame.
    pub tick_scale: f64,
}

impl Scenario {
    pub fn frame(&self, name: &str) -> Result<&Frame, OracleError> {
        self.frames
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, f)| f)
            .ok_or_else(|| OracleError::UnknownChain(name.to_owned()))
    }

    pub fn selection(&self, name: &str) -> Result<EventId, OracleError> {
        self.selections
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, e)| e)
            .ok_or_else(|| OracleError::UnknownEvent(name.to_owned()))
    }
}

/// Knobs shared by the named constructions. `None` picks each scenario's
/// default.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ScenarioOptions {
    pub seed: Option<u64>,
    pub density: Option<f64>,
    pub velocity: Option<f64>,
}

pub fn build_scenario(name: &str, options: &ScenarioOptions) -> Result<Scenario, OracleError> {
    match name {
        "fig2b" => {
            let defaults = RestFrameConfig::default();
            rest_frame_scenario(&RestFrameConfig {
                density: options.density.unwrap_or(defaults.density),
                seed: options.seed.unwrap_or(defaults.seed),
                ..defaults
            })
        }
        "fig3" => fig3_scenario(),
        "fig5" => fig5_scenario(),
        "fig6" => fig6_scenario(options.velocity.unwrap_or(FIG6_VELOCITY), FIG6_TICKS),
        "fig7" => fig7_scenario(&Fig7Config {
            density: options.density,
            seed: options.seed.unwrap_or(0),
        }),
        other => Err(OracleError::UnknownChain(other.to_owned())),
    }
}

/// Every named scenario with default options.
pub fn build_standard_scenarios() -> Result<Vec<Scenario>, OracleError> {
    SCENARIO_NAMES
        .iter()
        .map(|name| build_scenario(name, &ScenarioOptions::default()))
        .collect()
}

fn named_frames(
    ec: &EmbeddedCauset,
    specs: &[(&str, &str, &str)],
) -> Result<Vec<(String, Frame)>, OracleError> {
    specs
        .iter()
        .map(|&(name, p, q)| Ok((name.to_owned(), ec.frame(p, q)?)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RestFrameConfig {
    /// Side of the sprinkled square.
    pub size: f64,
    pub density: f64,
    pub seed: u64,
    pub p_position: f64,
    /// Integer distance between the two chains, in ticks.
    pub separation: u32,
}

impl Default for RestFrameConfig {
    fn default() -> Self {
        Self {
            size: 64.0,
            density: 4.0,
            seed: 7,
            p_position: 28.0,
            separation: 8,
        }
    }
}

/// A sprinkled square with chains `P` and `Q` at rest inside it, unit ticks
/// in phase. The ticks continue past the top of the square so that every
/// sprinkled event between the chains projects onto both.
pub fn rest_frame_scenario(config: &RestFrameConfig) -> Result<Scenario, OracleError> {
    let sep = f64::from(config.separation);
    let sprinkled = Region::new_1d((0.0, config.size), (0.0, config.size))?;
    let region = Region::new_1d((0.0, config.size + sep + 1.0), (0.0, config.size))?;
    let mut builder = SpacetimeBuilder::new(region);
    builder.sprinkle(&SprinkleConfig::new(
        sprinkled,
        config.density,
        config.seed,
    )?)?;
    builder.embed_observer("P", &WorldlineSpec::at_rest(config.p_position, 1.0, 0.0))?;
    builder.embed_observer(
        "Q",
        &WorldlineSpec::at_rest(config.p_position + sep, 1.0, 0.0),
    )?;
    let universe = builder.build()?;
    Ok(Scenario {
        name: "fig2b".into(),
        frames: named_frames(&universe, &[("PQ", "P", "Q")])?,
        universe,
        origin: None,
        selections: Vec::new(),
        tick_scale: 1.0,
    })
}

/// Panel names of the interval-class figure, in reading order.
pub const FIG3_PANELS: [&str; 5] = [
    "top-left",
    "top-right",
    "bottom-left",
    "bottom-center",
    "bottom-right",
];

/// Chains at `x = 0` and `x = 8`, origin `(t, x) = (10, 4)` and one event per
/// panel.
pub fn fig3_scenario() -> Result<Scenario, OracleError> {
    let region = Region::new_1d((0.0, 32.0), (0.0, 8.0))?;
    let mut builder = SpacetimeBuilder::new(region);
    builder.embed_observer("P", &WorldlineSpec::at_rest(0.0, 1.0, 0.0))?;
    builder.embed_observer("Q", &WorldlineSpec::at_rest(8.0, 1.0, 0.0))?;
    builder.add_event("origin", MinkowskiPoint::new(10.0, 4.0))?;
    let placements = [
        (10.0, 6.0),
        (14.0, 4.0),
        (15.0, 5.0),
        (13.0, 7.0),
        (11.0, 7.0),
    ];
    for (name, (t, x)) in FIG3_PANELS.iter().zip(placements) {
        builder.add_event(name, MinkowskiPoint::new(t, x))?;
    }
    let universe = builder.build()?;
    let selections = FIG3_PANELS
        .iter()
        .map(|&n| Ok((n.to_owned(), universe.event(n)?)))
        .collect::<Result<_, OracleError>>()?;
    Ok(Scenario {
        name: "fig3".into(),
        frames: named_frames(&universe, &[("PQ", "P", "Q")])?,
        origin: Some(universe.event("origin")?),
        universe,
        selections,
        tick_scale: 1.0,
    })
}

/// Chains `P, Q, R, S` at `x = 0, 8, 16, 24` and two simultaneous events
/// `a, b` between `Q` and `R`. Frames are listed in the order `QR, PQ, RS`,
/// so the bounding pair comes first.
pub fn fig5_scenario() -> Result<Scenario, OracleError> {
    let region = Region::new_1d((0.0, 56.0), (0.0, 24.0))?;
    let mut builder = SpacetimeBuilder::new(region);
    for (name, x) in [("P", 0.0), ("Q", 8.0), ("R", 16.0), ("S", 24.0)] {
        builder.embed_observer(name, &WorldlineSpec::at_rest(x, 1.0, 0.0))?;
    }
    builder.add_event("a", MinkowskiPoint::new(20.0, 10.0))?;
    builder.add_event("b", MinkowskiPoint::new(20.0, 14.0))?;
    let universe = builder.build()?;
    Ok(Scenario {
        name: "fig5".into(),
        frames: named_frames(
            &universe,
            &[("QR", "Q", "R"), ("PQ", "P", "Q"), ("RS", "R", "S")],
        )?,
        origin: None,
        selections: vec![
            ("a".into(), universe.event("a")?),
            ("b".into(), universe.event("b")?),
        ],
        universe,
        tick_scale: 1.0,
    })
}

/// One inertial frame in a nested construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameLevel {
    /// Lab velocity along `x`.
    pub velocity: f64,
    /// Proper time between ticks.
    pub tick_interval: f64,
}

/// Builds frames `F0, F1, ...` (chains `P0, Q0, P1, Q1, ...`) where each
/// frame's chains enclose every tick of the frames after it. The last frame
/// emits `innermost_ticks` ticks per chain; the others emit only the ticks
/// needed to receive those signals. Chains of a frame sit a half-integer
/// number of ticks apart in their rest frame, so that signals between them
/// arrive mid-interval.
pub fn nested_frames(
    levels: &[FrameLevel],
    innermost_ticks: u32,
) -> Result<NestedFrames, OracleError> {
    let (inner, outer) = match levels.split_last() {
        Some(split) if innermost_ticks > 0 => split,
        _ => return Err(OracleError::NoTicks("F0".into())),
    };
    let mut specs: Vec<(WorldlineSpec, WorldlineSpec)> = Vec::with_capacity(levels.len());
    let last_label = i64::from(innermost_ticks) - 1;
    let p = WorldlineSpec::moving(0.0, inner.velocity, inner.tick_interval, 0.0)
        .with_labels(0..=last_label);
    let q = p.comoving_partner(2.5 * inner.tick_interval);
    let mut enclosed: Vec<MinkowskiPoint> = Vec::new();
    for spec in [&p, &q] {
        let worldline = spec.worldline(0.0)?;
        enclosed.extend((0..=last_label).map(|k| worldline.tick_point(k)));
    }
    specs.push((p, q));

    for level in outer.iter().rev() {
        let (w, tau) = (level.velocity, level.tick_interval);
        let gamma = 1.0 / (1.0 - w * w).sqrt();
        let margin = 2.0 * tau + 1.0;
        let intercepts = enclosed.iter().map(|s| s.x - w * s.t);
        let left = intercepts.clone().fold(f64::INFINITY, f64::min) - margin;
        let right = intercepts.fold(f64::NEG_INFINITY, f64::max) + margin;
        let rest_width = gamma * (right - left);
        let separation = ((rest_width / tau - 0.5).ceil() + 0.5) * tau;
        let p = WorldlineSpec::moving(left, w, tau, 0.0);
        let q = p.comoving_partner(separation);
        let mut ticks = Vec::new();
        let mut pair = Vec::with_capacity(2);
        for spec in [p, q] {
            let worldline = spec.worldline(0.0)?;
            let labels = enclosed.iter().map(|s| worldline.arrival_label(s));
            let lo = labels.clone().fold(f64::INFINITY, f64::min).floor() as i64 - 1;
            let hi = labels.fold(f64::NEG_INFINITY, f64::max).ceil() as i64 + 1;
            let lo = lo.max(0);
            ticks.extend((lo..=hi).map(|k| worldline.tick_point(k)));
            pair.push(spec.with_labels(lo..=hi));
        }
        enclosed.extend(ticks);
        let q = pair.pop().expect("two chains");
        let p = pair.pop().expect("two chains");
        specs.push((p, q));
    }
    specs.reverse();

    let t_hi = enclosed.iter().map(|s| s.t).fold(0.0, f64::max) + 1.0;
    let x_lo = enclosed.iter().map(|s| s.x).fold(f64::INFINITY, f64::min) - 1.0;
    let x_hi = enclosed
        .iter()
        .map(|s| s.x)
        .fold(f64::NEG_INFINITY, f64::max)
        + 1.0;
    let region = Region::new_1d((0.0, t_hi), (x_lo, x_hi))?;
    let mut builder = SpacetimeBuilder::new(region);
    for (i, (p, q)) in specs.iter().enumerate() {
        builder.embed_observer(&format!("P{i}"), p)?;
        builder.embed_observer(&format!("Q{i}"), q)?;
    }
    let universe = builder.build()?;
    let frames = (0..levels.len())
        .map(|i| universe.frame(&format!("P{i}"), &format!("Q{i}")))
        .collect::<Result<_, _>>()?;
    Ok(NestedFrames { universe, frames })
}

#[derive(Clone, Debug)]
pub struct NestedFrames {
    pub universe: EmbeddedCauset,
    /// Outermost first.
    pub frames: Vec<Frame>,
}

pub const FIG6_VELOCITY: f64 = 0.6;
pub const FIG6_TICKS: u32 = 100;
pub const FIG6_TICK_INTERVAL: f64 = 16.0;

/// A unit-tick rest frame (`rest`: chains `P0, Q0`) enclosing a frame moving
/// at `velocity` (`moving`: chains `P1, Q1`) with tick interval 16.
pub fn fig6_scenario(velocity: f64, ticks: u32) -> Result<Scenario, OracleError> {
    let nested = nested_frames(
        &[
            FrameLevel {
                velocity: 0.0,
                tick_interval: 1.0,
            },
            FrameLevel {
                velocity,
                tick_interval: FIG6_TICK_INTERVAL,
            },
        ],
        ticks,
    )?;
    let mut frames = nested.frames.into_iter();
    let rest = frames.next().expect("outer frame");
    let moving = frames.next().expect("inner frame");
    Ok(Scenario {
        name: "fig6".into(),
        universe: nested.universe,
        frames: vec![("rest".into(), rest), ("moving".into(), moving)],
        origin: None,
        selections: Vec::new(),
        tick_scale: 1.0,
    })
}

/// Rest frame, a frame at `v`, and a frame at `v` relative to the second.
/// Tick intervals 1, 8 and 64.
pub fn three_frame_chain(v: f64, innermost_ticks: u32) -> Result<NestedFrames, OracleError> {
    nested_frames(
        &[
            FrameLevel {
                velocity: 0.0,
                tick_interval: 1.0,
            },
            FrameLevel {
                velocity: v,
                tick_interval: 8.0,
            },
            FrameLevel {
                velocity: compose_speeds(v, v),
                tick_interval: 64.0,
            },
        ],
        innermost_ticks,
    )
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Fig7Config {
    /// When set, tick intervals shrink to `density^(-1/3)` and three
    /// sprinkled events near the triangle's vertices are selected as
    /// `s1, s2, s3`.
    pub density: Option<f64>,
    pub seed: u64,
}

/// Vertices of the right triangle, `e1` at the right angle.
pub const FIG7_VERTICES: [(f64, f64); 3] = [(10.0, 10.0), (10.0, 13.0), (14.0, 10.0)];
pub const FIG7_TIME: f64 = 2.0;

/// Three chain pairs at rest in 2+1D: `D` along the hypotenuse, `X` along the
/// leg e1–e3 and `Y` along the leg e1–e2, with the triangle's vertices placed
/// as `e1, e2, e3`. The spatial lengths of the sides are 5, 4 and 3.
pub fn fig7_scenario(config: &Fig7Config) -> Result<Scenario, OracleError> {
    let tick = match config.density {
        Some(d) if d.is_finite() && d > 0.0 => d.powf(-1.0 / 3.0),
        Some(d) => return Err(OracleError::InvalidDensity(d)),
        None => 1.0,
    };
    let region = Region::new_2d((0.0, FIG7_TIME + 22.0), (0.0, 24.0), (0.0, 24.0))?;
    let mut builder = SpacetimeBuilder::new(region);
    let chains = [
        ("D1", (6.0, 16.0)),
        ("D2", (18.0, 7.0)),
        ("X1", (4.0, 10.0)),
        ("X2", (20.0, 10.0)),
        ("Y1", (10.0, 4.0)),
        ("Y2", (10.0, 19.0)),
    ];
    for (name, (x, y)) in chains {
        builder.embed_observer(name, &WorldlineSpec::at_rest_2d(x, y, tick, 0.0))?;
    }
    let vertex_names = ["e1", "e2", "e3"];
    for (name, (x, y)) in vertex_names.iter().zip(FIG7_VERTICES) {
        builder.add_event(name, MinkowskiPoint::new_2d(FIG7_TIME, x, y))?;
    }
    let sprinkled = match config.density {
        Some(density) => {
            // A slab a quarter tick either side of the triangle's time, wide
            // enough to hold about thirty events near each vertex.
            let half_width = (30.0 / (density * tick / 2.0)).sqrt() / 2.0;
            let slab = Region::new_2d(
                (FIG7_TIME - tick / 4.0, FIG7_TIME + tick / 4.0),
                (10.0 - half_width, 14.0 + half_width),
                (10.0 - half_width, 13.0 + half_width),
            )?;
            builder.sprinkle(&SprinkleConfig::new(slab, density, config.seed)?)?;
            true
        }
        None => false,
    };
    let universe = builder.build()?;
    let mut selections: Vec<(String, EventId)> = vertex_names
        .iter()
        .map(|&n| Ok((n.to_owned(), universe.event(n)?)))
        .collect::<Result<_, OracleError>>()?;
    if sprinkled {
        let candidates: Vec<EventId> = universe
            .events_of_kind(crate::oracle::EventKind::Sprinkled)
            .collect();
        for (i, (x, y)) in FIG7_VERTICES.iter().enumerate() {
            let target = MinkowskiPoint::new_2d(FIG7_TIME, *x, *y);
            let nearest = candidates
                .iter()
                .copied()
                .min_by(|&a, &b| {
                    let da = universe.point(a).spatial_distance(&target);
                    let db = universe.point(b).spatial_distance(&target);
                    da.total_cmp(&db)
                })
                .ok_or(OracleError::RegionEmpty)?;
            selections.push((format!("s{}", i + 1), nearest));
        }
    }
    Ok(Scenario {
        name: "fig7".into(),
        frames: named_frames(
            &universe,
            &[("D", "D1", "D2"), ("X", "X1", "X2"), ("Y", "Y1", "Y2")],
        )?,
        universe,
        origin: None,
        selections,
        tick_scale: tick,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantify::{classify, interval_pair, quantify_event, IntervalClass};

    #[test]
    fn fig3_classes() {
        let s = fig3_scenario().unwrap();
        let frame = s.frame("PQ").unwrap();
        let cs = s.universe.causet();
        let origin = quantify_event(cs, s.origin.unwrap(), frame).unwrap();
        let classes: Vec<IntervalClass> = s
            .selections
            .iter()
            .map(|&(_, e)| classify(interval_pair(origin, quantify_event(cs, e, frame).unwrap())))
            .collect();
        use IntervalClass::*;
        assert_eq!(
            classes,
            vec![Spacelike, Timelike, Timelike, Lightlike, Spacelike]
        );
    }

    #[test]
    fn standard_scenarios_build() {
        let all = build_standard_scenarios().unwrap();
        let names: Vec<&str> = all.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, SCENARIO_NAMES);
    }

    #[test]
    fn unknown_scenario() {
        assert!(build_scenario("fig4", &ScenarioOptions::default()).is_err());
    }

    #[test]
    fn fig7_sprinkled_selection() {
        let s = fig7_scenario(&Fig7Config {
            density: Some(4.0),
            seed: 1,
        })
        .unwrap();
        for name in ["s1", "s2", "s3"] {
            let e = s.selection(name).unwrap();
            assert!((s.universe.point(e).t - FIG7_TIME).abs() <= s.tick_scale / 4.0);
        }
    }
}
