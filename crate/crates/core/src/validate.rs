//! Desk-scale self checks, grouped into named suites.
//!
//! Each suite builds its own inputs from the seed, so a run needs no files.
//! [`ValidationHooks`] lets a caller swap in a different pair transformation
//! to confirm that the suites notice when it is wrong.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::frames::{
    beta_from_rho, compose_speeds, lorentz_transform, measure_frame_relation, transform_pair,
    Boost, FrameError, COORDINATION_TOLERANCE, INVARIANCE_TOLERANCE,
};
use crate::oracle::{light_cone_precedes, sprinkle, EventKind, Region, SprinkleConfig};
use crate::poset::{CausalSet, EventId};
use crate::pythagoras::{
    verify_pythagoras, verify_pythagoras_continuum, OrthogonalConfig,
    CONTINUUM_EQUAL_TIME_TOLERANCE,
};
use crate::quantify::{
    audit_scalar_candidates, classify, coordinates, cross_validate, decompose, interval_scalar,
    power_coordinates, ConsensusTolerance, Coordinates, IntervalClass, PairQuant, ScalarCandidate,
};
use crate::scenarios::{
    fig5_scenario, fig6_scenario, fig7_scenario, rest_frame_scenario, Fig7Config, RestFrameConfig,
    Scenario,
};

pub const SUITE_NAMES: [&str; 9] = [
    "decomposition",
    "audit",
    "invariance",
    "lorentz",
    "oracle",
    "frames",
    "pythagoras",
    "consistency",
    "poset",
];

pub type PairTransform = fn(PairQuant, f64) -> Result<PairQuant, FrameError>;

#[derive(Clone, Copy, Debug)]
pub struct ValidationHooks {
    pub transform_pair: PairTransform,
}

impl Default for ValidationHooks {
    fn default() -> Self {
        Self { transform_pair }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ValidationOptions {
    pub seed: u64,
    /// Suites to run; all of them when empty.
    pub only: Vec<String>,
    pub hooks: ValidationHooks,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
#[error("unknown suite {0}; expected one of {SUITE_NAMES:?}")]
pub struct UnknownSuite(pub String);

struct Suite {
    checks: Vec<CheckResult>,
}

impl Suite {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.to_owned(),
            passed,
            detail: detail.into(),
        });
    }

    fn finish(self, name: &str) -> SuiteResult {
        SuiteResult {
            name: name.to_owned(),
            passed: self.checks.iter().all(|c| c.passed),
            checks: self.checks,
        }
    }
}

pub fn run_validation(options: &ValidationOptions) -> Result<ValidationReport, UnknownSuite> {
    if let Some(bad) = options
        .only
        .iter()
        .find(|s| !SUITE_NAMES.contains(&s.as_str()))
    {
        return Err(UnknownSuite(bad.clone()));
    }
    let selected = |name: &str| options.only.is_empty() || options.only.iter().any(|s| s == name);
    let suites: Vec<SuiteResult> = SUITE_NAMES
        .iter()
        .filter(|name| selected(name))
        .map(|&name| {
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
            let mut suite = Suite::new();
            match name {
                "decomposition" => decomposition(&mut suite, &mut rng),
                "audit" => audit(&mut suite, &mut rng),
                "invariance" => invariance(&mut suite, &mut rng, options.hooks),
                "lorentz" => lorentz(&mut suite, &mut rng, options.hooks),
                "oracle" => oracle(&mut suite, options.seed),
                "frames" => frames(&mut suite, &mut rng),
                "pythagoras" => pythagoras(&mut suite),
                "consistency" => consistency(&mut suite),
                "poset" => poset(&mut suite, &mut rng),
                _ => unreachable!("suite names are checked above"),
            }
            suite.finish(name)
        })
        .collect();
    Ok(ValidationReport {
        seed: options.seed,
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}

fn within(actual: f64, expected: f64, relative: f64) -> bool {
    actual == expected
        || (actual - expected).abs() <= relative * expected.abs().max(f64::MIN_POSITIVE)
}

fn decomposition(suite: &mut Suite, rng: &mut ChaCha8Rng) {
    let pairs: Vec<PairQuant> = (0..1000)
        .map(|_| {
            PairQuant::new(
                rng.random_range(-1000..=1000) as f64,
                rng.random_range(-1000..=1000) as f64,
            )
        })
        .collect();
    let bad = pairs
        .iter()
        .filter(|&&p| {
            let d = decompose(p);
            d.symmetric + d.antisymmetric != p
        })
        .count();
    suite.check("reconstruction", bad == 0, format!("{bad} mismatches"));
    let bad = pairs
        .iter()
        .filter(|&&p| {
            let c = coordinates(p);
            interval_scalar(p) != c.t * c.t - c.x * c.x
        })
        .count();
    suite.check("scalar identity", bad == 0, format!("{bad} mismatches"));
    let bad = pairs
        .iter()
        .filter(|&&p| {
            (1..=3).any(|k| {
                let c = power_coordinates(p, k);
                let lhs = (p.p * p.q).powi(k);
                (c.t * c.t - c.x * c.x - lhs).abs() > 1e-12 * (c.t * c.t + c.x * c.x)
            })
        })
        .count();
    suite.check("power identity", bad == 0, format!("{bad} mismatches"));
    let bad = pairs
        .iter()
        .filter(|&&p| {
            let s = interval_scalar(p);
            let expected = if s > 0.0 {
                IntervalClass::Timelike
            } else if s < 0.0 {
                IntervalClass::Spacelike
            } else {
                IntervalClass::Lightlike
            };
            classify(p) != expected
        })
        .count();
    suite.check("classification", bad == 0, format!("{bad} mismatches"));
}

fn audit(suite: &mut Suite, rng: &mut ChaCha8Rng) {
    let samples: Vec<(f64, f64)> = (0..200)
        .map(|_| {
            let a: f64 = rng.random_range(0.5..3.0);
            let b: f64 = -rng.random_range(0.5..3.0) - a - 0.01;
            if rng.random() {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    match audit_scalar_candidates(&samples) {
        Ok(audits) => {
            let survivors: Vec<ScalarCandidate> = audits
                .iter()
                .filter(|a| a.passes_associativity)
                .map(|a| a.candidate)
                .collect();
            suite.check(
                "decomposition additivity",
                audits.iter().all(|a| a.passes_decomposition),
                "every candidate",
            );
            let expected = [ScalarCandidate::Product, ScalarCandidate::OddPowerOfSum(1)];
            suite.check(
                "associativity survivors",
                survivors.len() == 2 && expected.iter().all(|c| survivors.contains(c)),
                format!(
                    "{:?}",
                    survivors.iter().map(|c| c.tag()).collect::<Vec<_>>()
                ),
            );
        }
        Err(e) => suite.check("audit", false, e.to_string()),
    }
}

fn invariance(suite: &mut Suite, rng: &mut ChaCha8Rng, hooks: ValidationHooks) {
    let mut failures = 0;
    let mut light_failures = 0;
    for i in 0..1000 {
        let rho = 10f64.powf(rng.random_range(-1.0..=1.0));
        let sigma = if i % 2 == 0 { 1.0 } else { 2.0 };
        let pair = PairQuant::new(
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
        );
        let ok = (hooks.transform_pair)(pair, rho).is_ok_and(|moved| {
            let scaled = PairQuant::new(sigma * moved.p, sigma * moved.q);
            within(
                interval_scalar(scaled),
                sigma * sigma * interval_scalar(pair),
                INVARIANCE_TOLERANCE,
            )
        });
        if !ok {
            failures += 1;
        }
        let light = PairQuant::new(pair.p, 0.0);
        if !(hooks.transform_pair)(light, rho)
            .is_ok_and(|t| classify(t) == IntervalClass::Lightlike)
        {
            light_failures += 1;
        }
    }
    suite.check(
        "scalar scales by sigma squared",
        failures == 0,
        format!("{failures}/1000 failures"),
    );
    suite.check(
        "lightlike preserved",
        light_failures == 0,
        format!("{light_failures}/1000 failures"),
    );
}

fn lorentz(suite: &mut Suite, rng: &mut ChaCha8Rng, hooks: ValidationHooks) {
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let rho = 10f64.powf(rng.random_range(-1.0..=1.0));
        let c = Coordinates::new(
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
        );
        let boost = Boost::from_rho(rho).expect("positive rho");
        let direct = lorentz_transform(c, boost);
        let error = match (hooks.transform_pair)(c.to_pair(), rho) {
            Ok(pair) => {
                let via = coordinates(pair);
                ((via.t - direct.t).abs() + (via.x - direct.x).abs())
                    / (boost.gamma() * (c.t.abs() + c.x.abs()))
            }
            Err(_) => f64::INFINITY,
        };
        worst = worst.max(error);
    }
    suite.check(
        "pair form matches boost",
        worst <= 1e-12,
        format!("worst relative difference {worst:.2e}"),
    );
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let b1: f64 = rng.random_range(-0.99..0.99);
        let b2: f64 = rng.random_range(-0.99..0.99);
        let rho = Boost::new(b1).unwrap().rho() * Boost::new(b2).unwrap().rho();
        worst = worst.max((beta_from_rho(rho).unwrap() - compose_speeds(b1, b2)).abs());
    }
    suite.check(
        "rho products add velocities",
        worst <= 1e-12,
        format!("worst difference {worst:.2e}"),
    );
}

fn oracle(suite: &mut Suite, seed: u64) {
    let config = RestFrameConfig {
        size: 32.0,
        density: 2.0,
        seed,
        p_position: 12.0,
        separation: 8,
    };
    match rest_frame_scenario(&config) {
        Ok(s) => {
            let frame = s.frame("PQ").expect("scenario frame");
            let (lo, hi) = (
                config.p_position,
                config.p_position + f64::from(config.separation),
            );
            let mut max = 0.0f64;
            let mut total = 0.0;
            let mut count = 0usize;
            let mut missing = 0usize;
            for e in s.universe.events_of_kind(EventKind::Sprinkled) {
                let x = s.universe.point(e).x;
                if !(lo < x && x < hi) {
                    continue;
                }
                match s.universe.radar_quantify(e, frame) {
                    Ok(r) => {
                        let (c, d) = (coordinates(r.continuum), coordinates(r.discrete));
                        let (et, ex) = ((d.t - c.t).abs(), (d.x - c.x).abs());
                        max = max.max(et).max(ex);
                        total += et + ex;
                        count += 1;
                    }
                    Err(_) => missing += 1,
                }
            }
            let mean = total / (2.0 * count.max(1) as f64);
            suite.check(
                "coordinates within one tick",
                missing == 0 && count > 0 && max < 1.0 && mean <= 0.5,
                format!("{count} events, {missing} unquantified, max {max:.3}, mean {mean:.3}"),
            );
        }
        Err(e) => suite.check("coordinates within one tick", false, e.to_string()),
    }

    let region = Region::new_1d((0.0, 12.0), (0.0, 12.0)).expect("valid region");
    let config = SprinkleConfig::new(region, 4.0, seed).expect("valid density");
    match (sprinkle(&config), sprinkle(&config)) {
        (Ok(a), Ok(b)) => {
            suite.check(
                "sprinkling deterministic",
                a.points() == b.points() && a.causet() == b.causet(),
                format!("{} events", a.causet().event_count()),
            );
            let cs = a.causet();
            let bad = cs
                .events()
                .flat_map(|x| cs.events().map(move |y| (x, y)))
                .filter(|&(x, y)| {
                    x != y && cs.precedes(x, y) != light_cone_precedes(a.point(x), a.point(y))
                })
                .count();
            suite.check(
                "order matches light cones",
                bad == 0,
                format!("{bad} disagreements"),
            );
        }
        (Err(e), _) | (_, Err(e)) => suite.check("sprinkling deterministic", false, e.to_string()),
    }
}

fn frames(suite: &mut Suite, rng: &mut ChaCha8Rng) {
    let v = 0.5;
    let measured = fig6_scenario(v, 40)
        .map_err(|e| e.to_string())
        .and_then(|s: Scenario| {
            let (rest, moving) = (s.frame("rest").unwrap(), s.frame("moving").unwrap());
            let cs = s.universe.causet();
            let forward = measure_frame_relation(cs, rest, moving, COORDINATION_TOLERANCE)
                .map_err(|e| e.to_string())?;
            let swapped =
                measure_frame_relation(cs, &rest.swapped(), moving, COORDINATION_TOLERANCE)
                    .map_err(|e| e.to_string())?;
            let same = measure_frame_relation(cs, rest, rest, COORDINATION_TOLERANCE)
                .map_err(|e| e.to_string())?;
            Ok((forward.beta, swapped.beta, same.beta))
        });
    match measured {
        Ok((beta, swapped, same)) => {
            suite.check(
                "measured speed",
                (beta - v).abs() <= 0.05,
                format!("β = {beta:.4} for v = {v}"),
            );
            suite.check(
                "swapped chains negate β",
                swapped == -beta,
                format!("{swapped:.4}"),
            );
            suite.check("frame against itself", same == 0.0, format!("β = {same}"));
        }
        Err(e) => suite.check("measured speed", false, e),
    }
    let b: f64 = rng.random_range(-0.9..0.9);
    let boost = Boost::new(b).unwrap();
    suite.check(
        "inverse boost",
        (compose_speeds(b, -b)).abs() <= 1e-15
            && (Boost::from_rho(boost.rho().recip()).unwrap().beta() + b).abs() <= 1e-12,
        format!("β = {b:.4}"),
    );
}

fn pythagoras(suite: &mut Suite) {
    let s = match fig7_scenario(&Fig7Config::default()) {
        Ok(s) => s,
        Err(e) => return suite.check("scenario", false, e.to_string()),
    };
    let events = ["e1", "e2", "e3"].map(|n| s.selection(n).expect("vertex"));
    let cfg = OrthogonalConfig::new(
        s.frame("D").unwrap().clone(),
        s.frame("X").unwrap().clone(),
        s.frame("Y").unwrap().clone(),
        events,
    );
    match verify_pythagoras_continuum(
        &s.universe,
        &cfg.clone()
            .with_equal_time_tolerance(CONTINUUM_EQUAL_TIME_TOLERANCE),
        1e-9,
    ) {
        Ok(r) => suite.check(
            "continuum 3-4-5",
            r.ok && (r.dd2 - 25.0).abs() <= 1e-9
                && (r.dx2 - 16.0).abs() <= 1e-9
                && (r.dy2 - 9.0).abs() <= 1e-9,
            format!("({}, {}, {})", r.dd2, r.dx2, r.dy2),
        ),
        Err(e) => suite.check("continuum 3-4-5", false, e.to_string()),
    }
    let discrete = verify_pythagoras(s.universe.causet(), &cfg, 0.0);
    let swapped = verify_pythagoras(s.universe.causet(), &cfg.legs_swapped(), 0.0);
    match (discrete, swapped) {
        (Ok(r), Ok(sw)) => {
            suite.check(
                "discrete residual",
                r.ok,
                format!("residual {}", r.residual),
            );
            suite.check(
                "legs interchangeable",
                r.residual == sw.residual,
                format!("residual {}", sw.residual),
            );
        }
        (Err(e), _) | (_, Err(e)) => suite.check("discrete residual", false, e.to_string()),
    }
}

fn consistency(suite: &mut Suite) {
    let s = match fig5_scenario() {
        Ok(s) => s,
        Err(e) => return suite.check("scenario", false, e.to_string()),
    };
    let frames: Vec<_> = s.frames.iter().map(|(_, f)| f.clone()).collect();
    let (a, b) = (s.selection("a").unwrap(), s.selection("b").unwrap());
    match cross_validate(
        s.universe.causet(),
        a,
        b,
        &frames,
        ConsensusTolerance::DISCRETE,
    ) {
        Ok(cv) => {
            suite.check(
                "bounding frame",
                cv.reference_scalar.is_some_and(|r| r < 0.0),
                format!("reference scalar {:?}", cv.reference_scalar),
            );
            suite.check(
                "non-bounding frames flagged",
                cv.non_bounding == vec![1, 2] && !cv.consensus,
                format!("{:?}", cv.non_bounding),
            );
        }
        Err(e) => suite.check("cross validation", false, e.to_string()),
    }
}

fn poset(suite: &mut Suite, rng: &mut ChaCha8Rng) {
    let mut mismatches = 0;
    for _ in 0..20 {
        let n = rng.random_range(1..=60);
        let mut edges = Vec::new();
        let mut succ = vec![Vec::new(); n];
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(0.05) {
                    edges.push((i, j));
                    succ[i].push(j);
                }
            }
        }
        let cs = match CausalSet::from_relations(n, edges) {
            Ok(cs) => cs,
            Err(e) => return suite.check("closure", false, e.to_string()),
        };
        for a in 0..n {
            let mut seen = vec![false; n];
            let mut stack = vec![a];
            while let Some(v) = stack.pop() {
                for &w in &succ[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            mismatches += (0..n)
                .filter(|&b| cs.precedes(EventId::new(a), EventId::new(b)) != seen[b])
                .count();
        }
    }
    suite.check(
        "closure matches search",
        mismatches == 0,
        format!("{mismatches} mismatches"),
    );
}
