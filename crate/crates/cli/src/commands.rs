use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use causet::frames::{self, Boost, FrameRelation, RelationReport};
use causet::io::{self, CausetDocument, FrameDocument, LoadedCauset, QuantRow};
use causet::oracle::{self, Region, SprinkleConfig};
use causet::pythagoras;
use causet::quantify::{classify, coordinates, interval_scalar, Coordinates, IntervalClass};
use causet::scenarios::{self, ScenarioOptions};
use causet::validate::{self, ValidationOptions};
use causet::{EventId, Frame, PairQuant};
use serde::Serialize;

use crate::failure::Failure;
use crate::{
    FrameSource, FramesArgs, GenArgs, PythagorasArgs, QuantifyArgs, ScenarioArgs, TransformArgs,
    ValidateArgs,
};

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::io(path, e))
}

fn write(path: &Path, contents: &[u8]) -> Outcome {
    fs::write(path, contents).map_err(|e| Failure::io(path, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Writes to `output`, or standard output when there is none.
fn emit(output: Option<&Path>, contents: &str) -> Outcome {
    match output {
        Some(path) => write(path, contents.as_bytes()),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<LoadedCauset, Failure> {
    Ok(io::parse_causet(&read(path)?)?)
}

fn resolve_frame(
    loaded: &LoadedCauset,
    file: Option<&Path>,
    chains: &[String],
    flag: &str,
) -> Result<Frame, Failure> {
    match (file, chains) {
        (Some(path), _) => Ok(io::parse_frame(&read(path)?, &loaded.causet)?),
        (None, [p, q]) => Ok(loaded.frame(p, q)?),
        (None, []) => Err(Failure::Invalid(format!(
            "a frame is required: pass --{flag} or --chains{}",
            flag.trim_start_matches("frame")
        ))),
        (None, _) => Err(Failure::Invalid(
            "chains are given as two names, P,Q".into(),
        )),
    }
}

fn source_frame(loaded: &LoadedCauset, source: &FrameSource) -> Result<Frame, Failure> {
    resolve_frame(loaded, source.frame.as_deref(), &source.chains, "frame")
}

/// A marker name, or a numeric event id.
fn resolve_event(loaded: &LoadedCauset, name: &str) -> Result<EventId, Failure> {
    if let Some(&id) = loaded.markers.get(name) {
        return Ok(id);
    }
    let id = name
        .parse::<usize>()
        .map(EventId::new)
        .map_err(|_| Failure::Invalid(format!("`{name}` is neither a marker nor an event id")))?;
    loaded
        .causet
        .check_id(id)
        .map_err(|e| Failure::Invalid(e.to_string()))?;
    Ok(id)
}

pub fn gen(args: GenArgs) -> Outcome {
    let region = Region::from_box(&args.bounds)?;
    if region.dimension().spacetime_dim() != args.dim {
        return Err(Failure::Invalid(format!(
            "--box has {} values, which describes a {}-dimensional box, but --dim is {}",
            args.bounds.len(),
            region.dimension().spacetime_dim(),
            args.dim
        )));
    }
    let config = SprinkleConfig::new(region, args.density, args.seed)?;
    let universe = oracle::sprinkle(&config)?;
    write(
        &args.output,
        CausetDocument::from_embedded(&universe)
            .to_json()
            .as_bytes(),
    )?;
    println!(
        "{} events, volume {}, density {}",
        universe.causet().event_count(),
        config.region.volume(),
        config.density
    );
    Ok(())
}

fn unquantified_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".unquantified.json");
    name.into()
}

pub fn quantify(args: QuantifyArgs) -> Outcome {
    let loaded = load(&args.input)?;
    let frame = source_frame(&loaded, &args.frame)?;
    let origin = args
        .origin
        .as_deref()
        .map(|o| resolve_event(&loaded, o))
        .transpose()?;
    let events: Vec<EventId> = if args.events.is_empty() {
        loaded.causet.events().collect()
    } else {
        args.events
            .iter()
            .map(|e| resolve_event(&loaded, e))
            .collect::<Result<_, _>>()?
    };
    let table = io::quantify_table(&loaded.causet, &frame, events, origin)?;
    let mut csv = Vec::new();
    io::write_quant_csv(&table.rows, &mut csv)?;
    write(&args.output, &csv)?;
    write(
        &unquantified_path(&args.output),
        to_json(&table.unquantified).as_bytes(),
    )?;
    println!(
        "{} quantified, {} unquantified",
        table.rows.len(),
        table.unquantified.len()
    );
    Ok(())
}

pub fn frames(args: FramesArgs) -> Outcome {
    let loaded = load(&args.input)?;
    let frame1 = source_frame(&loaded, &args.frame)?;
    let frame2 = resolve_frame(&loaded, args.frame2.as_deref(), &args.chains2, "frame2")?;
    let relation =
        frames::measure_frame_relation(&loaded.causet, &frame1, &frame2, args.tolerance)?;
    emit(args.output.as_deref(), &to_json(&relation.report()))
}

#[derive(Serialize)]
struct TransformedPair {
    p: f64,
    q: f64,
    t: f64,
    x: f64,
    scalar: f64,
    class: IntervalClass,
}

impl TransformedPair {
    fn new(pair: PairQuant) -> Self {
        let c = coordinates(pair);
        Self {
            p: pair.p,
            q: pair.q,
            t: c.t,
            x: c.x,
            scalar: interval_scalar(pair) + 0.0,
            class: classify(pair),
        }
    }
}

fn two_values(values: &[f64], flag: &str) -> Result<(f64, f64), Failure> {
    match values {
        [a, b] => Ok((*a, *b)),
        _ => Err(Failure::Invalid(format!("--{flag} takes two values"))),
    }
}

fn change_of_frame(args: &TransformArgs) -> Result<FrameRelation, Failure> {
    let relation = match (args.rho, args.beta, &args.relation) {
        (Some(rho), _, _) => FrameRelation::from_projections(rho * rho, 1.0)?,
        (_, Some(beta), _) => {
            let rho = Boost::new(beta)?.rho();
            FrameRelation::from_projections(rho * rho, 1.0)?
        }
        (_, _, Some(path)) => {
            let report: RelationReport = serde_json::from_slice(&read(path)?)
                .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
            FrameRelation::from_projections(report.m, report.n)?.with_sigma(report.sigma)?
        }
        _ => {
            return Err(Failure::Invalid(
                "pass one of --rho, --beta or --relation".into(),
            ))
        }
    };
    match args.sigma {
        Some(sigma) => Ok(relation.with_sigma(sigma)?),
        None => Ok(relation),
    }
}

pub fn transform(args: TransformArgs) -> Outcome {
    let relation = change_of_frame(&args)?;
    let apply = |pair: PairQuant| -> Result<PairQuant, Failure> {
        let moved = frames::transform_pair(pair, relation.rho)?;
        Ok(PairQuant::new(
            relation.sigma * moved.p,
            relation.sigma * moved.q,
        ))
    };
    let single = if !args.pair.is_empty() {
        let (p, q) = two_values(&args.pair, "pair")?;
        Some(PairQuant::new(p, q))
    } else if !args.coords.is_empty() {
        let (t, x) = two_values(&args.coords, "coords")?;
        Some(Coordinates::new(t, x).to_pair())
    } else {
        None
    };
    if let Some(pair) = single {
        return emit(
            args.output.as_deref(),
            &to_json(&TransformedPair::new(apply(pair)?)),
        );
    }
    let Some(input) = &args.input else {
        return Err(Failure::Invalid("pass --pair, --coords or --input".into()));
    };
    let rows = io::read_quant_csv(&read(input)?)?;
    let moved = rows
        .iter()
        .map(|row| {
            let t = TransformedPair::new(apply(PairQuant::new(row.p, row.q))?);
            Ok(QuantRow {
                event_id: row.event_id,
                p: t.p,
                q: t.q,
                t: t.t,
                x: t.x,
                scalar: t.scalar,
                class: t.class,
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let mut csv = Vec::new();
    io::write_quant_csv(&moved, &mut csv)?;
    let output = args
        .output
        .as_deref()
        .expect("clap requires --output with --input");
    write(output, &csv)
}

pub fn pythagoras(args: PythagorasArgs) -> Outcome {
    let loaded = load(&args.input)?;
    let config = io::parse_pythagoras_config(&read(&args.config)?)?.resolve(&loaded)?;
    let report = pythagoras::verify_pythagoras(&loaded.causet, &config, args.tolerance)?;
    emit(args.output.as_deref(), &to_json(&report))?;
    if report.ok {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "residual {} exceeds tolerance {}",
            report.residual, report.tolerance
        )))
    }
}

pub fn validate(args: ValidateArgs) -> Outcome {
    let options = ValidationOptions {
        seed: args.seed,
        only: args.only,
        ..ValidationOptions::default()
    };
    let report = validate::run_validation(&options).map_err(|e| Failure::Invalid(e.to_string()))?;
    emit(args.output.as_deref(), &to_json(&report))?;
    for suite in &report.suites {
        eprintln!(
            "{}: {}",
            suite.name,
            if suite.passed { "pass" } else { "FAIL" }
        );
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Check("validation failed".into()))
    }
}

#[derive(Serialize)]
struct ScenarioSummary {
    name: String,
    event_count: usize,
    origin: Option<EventId>,
    selections: BTreeMap<String, EventId>,
    /// Length of one tick, for converting tick counts to lengths.
    tick_scale: f64,
    /// Frame name to the file holding it.
    frames: BTreeMap<String, String>,
}

pub fn scenario(args: ScenarioArgs) -> Outcome {
    let options = ScenarioOptions {
        seed: args.seed,
        density: args.density,
        velocity: args.velocity,
    };
    let scenario = scenarios::build_scenario(&args.scenario, &options)?;
    fs::create_dir_all(&args.output).map_err(|e| Failure::io(&args.output, e))?;
    let dir = &args.output;
    write(
        &dir.join("causet.json"),
        CausetDocument::from_embedded(&scenario.universe)
            .to_json()
            .as_bytes(),
    )?;
    let mut frame_files = BTreeMap::new();
    for (name, frame) in &scenario.frames {
        let file = format!("frame_{name}.json");
        write(
            &dir.join(&file),
            to_json(&FrameDocument::from_frame(frame)).as_bytes(),
        )?;
        frame_files.insert(name.clone(), file);
    }
    let summary = ScenarioSummary {
        name: scenario.name.clone(),
        event_count: scenario.universe.causet().event_count(),
        origin: scenario.origin,
        selections: scenario.selections.iter().cloned().collect(),
        tick_scale: scenario.tick_scale,
        frames: frame_files,
    };
    write(&dir.join("scenario.json"), to_json(&summary).as_bytes())?;
    println!(
        "{}: {} events, {} frames",
        summary.name,
        summary.event_count,
        summary.frames.len()
    );
    Ok(())
}
