//! File formats.
//!
//! Causal set JSON:
//!
//! ```json
//! {"event_count": 3, "relations": [[0, 1], [1, 2]],
//!  "embedding": [[0.0, 1.0], [1.0, 1.0], [2.0, 1.5]],
//!  "chains": {"P": {"events": [0, 1], "valuations": [0, 1]}},
//!  "markers": {"origin": 2}}
//! ```
//!
//! Only `event_count` and `relations` are required. Written files list the
//! covering relations; any relation list whose closure is the intended order
//! is accepted on input. Chain JSON is `{"events": [...], "valuations": [...]}`
//! and frame JSON is `{"P": chain, "Q": chain}`. Every parser takes raw bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::oracle::{Dimension, EmbeddedCauset, MinkowskiPoint};
use crate::poset::{CausalSet, CausetError, EventId};
use crate::pythagoras::{OrthogonalConfig, DISCRETE_EQUAL_TIME_TOLERANCE};
use crate::quantify::{
    classify, coordinates, interval_pair, interval_scalar, quantify_event, Frame, IntervalClass,
    ObserverChain, PairQuant, QuantifyError,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("CSV error: {0}")]
    Csv(String),
    #[error(transparent)]
    Causet(#[from] CausetError),
    #[error(transparent)]
    Quantify(#[from] QuantifyError),
    #[error("embedding has {found} points for {expected} events")]
    EmbeddingLength { expected: usize, found: usize },
    #[error("embedding point {0} must have 2 or 3 finite components, like the first")]
    EmbeddingPoint(usize),
    #[error("no chain named {0}")]
    UnknownChain(String),
    #[error("origin event {0} cannot be quantified in the frame")]
    OriginUnquantified(EventId),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        Self::Json(e.to_string())
    }
}

impl From<csv::Error> for IoError {
    fn from(e: csv::Error) -> Self {
        Self::Csv(e.to_string())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDocument {
    pub events: Vec<EventId>,
    pub valuations: Vec<i64>,
}

impl ChainDocument {
    pub fn from_chain(chain: &ObserverChain) -> Self {
        Self {
            events: chain.events().to_vec(),
            valuations: chain.valuations().to_vec(),
        }
    }

    pub fn resolve(&self, cs: &CausalSet) -> Result<ObserverChain, IoError> {
        Ok(ObserverChain::new(
            cs,
            self.events.clone(),
            self.valuations.clone(),
        )?)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDocument {
    #[serde(rename = "P")]
    pub p: ChainDocument,
    #[serde(rename = "Q")]
    pub q: ChainDocument,
}

impl FrameDocument {
    pub fn from_frame(frame: &Frame) -> Self {
        Self {
            p: ChainDocument::from_chain(frame.p()),
            q: ChainDocument::from_chain(frame.q()),
        }
    }

    /// Builds the frame, failing with `NotSynchronized` when the chains are
    /// not synchronized.
    pub fn resolve(&self, cs: &CausalSet) -> Result<Frame, IoError> {
        Ok(Frame::new(cs, self.p.resolve(cs)?, self.q.resolve(cs)?)?)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CausetDocument {
    pub event_count: usize,
    pub relations: Vec<(EventId, EventId)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub chains: BTreeMap<String, ChainDocument>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub markers: BTreeMap<String, EventId>,
}

impl CausetDocument {
    pub fn from_causet(cs: &CausalSet) -> Self {
        Self {
            event_count: cs.event_count(),
            relations: cs.cover_pairs().collect(),
            ..Self::default()
        }
    }

    pub fn from_embedded(ec: &EmbeddedCauset) -> Self {
        let dimension = ec.dimension();
        let mut chains = BTreeMap::new();
        for name in ec.chain_names() {
            let chain = ec.chain(name).expect("listed chain exists");
            chains.insert(name.to_owned(), ChainDocument::from_chain(chain));
        }
        Self {
            embedding: Some(
                ec.points()
                    .iter()
                    .map(|p| p.components(dimension))
                    .collect(),
            ),
            chains,
            markers: ec.markers().clone(),
            ..Self::from_causet(ec.causet())
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("document serializes")
    }
}

/// A causal set file after validation.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedCauset {
    pub causet: CausalSet,
    pub embedding: Option<(Dimension, Vec<MinkowskiPoint>)>,
    pub chains: BTreeMap<String, ObserverChain>,
    pub markers: BTreeMap<String, EventId>,
}

impl LoadedCauset {
    pub fn chain(&self, name: &str) -> Result<&ObserverChain, IoError> {
        self.chains
            .get(name)
            .ok_or_else(|| IoError::UnknownChain(name.to_owned()))
    }

    pub fn frame(&self, p: &str, q: &str) -> Result<Frame, IoError> {
        Ok(Frame::new(
            &self.causet,
            self.chain(p)?.clone(),
            self.chain(q)?.clone(),
        )?)
    }
}

fn parse_embedding(
    points: &[Vec<f64>],
    event_count: usize,
) -> Result<(Dimension, Vec<MinkowskiPoint>), IoError> {
    if points.len() != event_count {
        return Err(IoError::EmbeddingLength {
            expected: event_count,
            found: points.len(),
        });
    }
    let width = points.first().map_or(2, Vec::len);
    let dimension = Dimension::from_spacetime_dim(width).map_err(|_| IoError::EmbeddingPoint(0))?;
    let parsed = points
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if c.len() != width || !c.iter().all(|v| v.is_finite()) {
                return Err(IoError::EmbeddingPoint(i));
            }
            Ok(MinkowskiPoint {
                t: c[0],
                x: c[1],
                y: c.get(2).copied().unwrap_or(0.0),
            })
        })
        .collect::<Result<_, _>>()?;
    Ok((dimension, parsed))
}

pub fn parse_causet_document(bytes: &[u8]) -> Result<CausetDocument, IoError> {
    Ok(serde_json::from_slice(bytes)?)
}

pub fn parse_causet(bytes: &[u8]) -> Result<LoadedCauset, IoError> {
    load_causet(&parse_causet_document(bytes)?)
}

pub fn load_causet(doc: &CausetDocument) -> Result<LoadedCauset, IoError> {
    let causet = CausalSet::from_relations(
        doc.event_count,
        doc.relations.iter().map(|&(a, b)| (a.index(), b.index())),
    )?;
    let embedding = doc
        .embedding
        .as_deref()
        .map(|points| parse_embedding(points, doc.event_count))
        .transpose()?;
    let chains = doc
        .chains
        .iter()
        .map(|(name, c)| Ok((name.clone(), c.resolve(&causet)?)))
        .collect::<Result<_, IoError>>()?;
    for &id in doc.markers.values() {
        causet.check_id(id)?;
    }
    Ok(LoadedCauset {
        causet,
        embedding,
        chains,
        markers: doc.markers.clone(),
    })
}

pub fn parse_chain_document(bytes: &[u8]) -> Result<ChainDocument, IoError> {
    Ok(serde_json::from_slice(bytes)?)
}

pub fn parse_frame_document(bytes: &[u8]) -> Result<FrameDocument, IoError> {
    Ok(serde_json::from_slice(bytes)?)
}

pub fn parse_frame(bytes: &[u8], cs: &CausalSet) -> Result<Frame, IoError> {
    parse_frame_document(bytes)?.resolve(cs)
}

/// A frame given inline or as the names of two chains in the causal set file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FrameRef {
    Named([String; 2]),
    Inline(FrameDocument),
}

impl FrameRef {
    pub fn resolve(&self, loaded: &LoadedCauset) -> Result<Frame, IoError> {
        match self {
            Self::Named([p, q]) => loaded.frame(p, q),
            Self::Inline(doc) => doc.resolve(&loaded.causet),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PythagorasDocument {
    pub d_frame: FrameRef,
    pub x_frame: FrameRef,
    pub y_frame: FrameRef,
    /// `[e1, e2, e3]`.
    pub events: [EventId; 3],
    #[serde(default = "default_equal_time_tolerance")]
    pub equal_time_tolerance: f64,
}

fn default_equal_time_tolerance() -> f64 {
    DISCRETE_EQUAL_TIME_TOLERANCE
}

impl PythagorasDocument {
    pub fn resolve(&self, loaded: &LoadedCauset) -> Result<OrthogonalConfig, IoError> {
        for &e in &self.events {
            loaded.causet.check_id(e)?;
        }
        Ok(OrthogonalConfig::new(
            self.d_frame.resolve(loaded)?,
            self.x_frame.resolve(loaded)?,
            self.y_frame.resolve(loaded)?,
            self.events,
        )
        .with_equal_time_tolerance(self.equal_time_tolerance))
    }
}

pub fn parse_pythagoras_config(bytes: &[u8]) -> Result<PythagorasDocument, IoError> {
    Ok(serde_json::from_slice(bytes)?)
}

/// One row of the quantification table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantRow {
    pub event_id: EventId,
    pub p: f64,
    pub q: f64,
    pub t: f64,
    pub x: f64,
    pub scalar: f64,
    pub class: IntervalClass,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QuantTable {
    pub rows: Vec<QuantRow>,
    /// Events with no projection onto at least one chain.
    pub unquantified: Vec<EventId>,
}

/// Quantifies `events` in `frame`. With an origin, each row holds the
/// interval pair from the origin; otherwise the raw projections.
pub fn quantify_table(
    cs: &CausalSet,
    frame: &Frame,
    events: impl IntoIterator<Item = EventId>,
    origin: Option<EventId>,
) -> Result<QuantTable, IoError> {
    let base = match origin {
        Some(o) => {
            cs.check_id(o)?;
            Some(quantify_event(cs, o, frame).ok_or(IoError::OriginUnquantified(o))?)
        }
        None => None,
    };
    let mut table = QuantTable::default();
    for e in events {
        cs.check_id(e)?;
        match quantify_event(cs, e, frame) {
            Some(pair) => {
                let pair: PairQuant = base.map_or(pair, |b| interval_pair(b, pair));
                let c = coordinates(pair);
                table.rows.push(QuantRow {
                    event_id: e,
                    p: pair.p,
                    q: pair.q,
                    t: c.t,
                    x: c.x,
                    // Adding zero turns a negative zero into zero.
                    scalar: interval_scalar(pair) + 0.0,
                    class: classify(pair),
                });
            }
            None => table.unquantified.push(e),
        }
    }
    Ok(table)
}

pub fn write_quant_csv<W: std::io::Write>(rows: &[QuantRow], out: W) -> Result<(), IoError> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(|e| IoError::Csv(e.to_string()))?;
    Ok(())
}

pub fn read_quant_csv(bytes: &[u8]) -> Result<Vec<QuantRow>, IoError> {
    let mut reader = csv::Reader::from_reader(bytes);
    Ok(reader.deserialize().collect::<Result<_, _>>()?)
}
