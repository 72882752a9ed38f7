//! Finite causal sets: events, the covering relation and a dense
//! reachability closure.
//!
//! A [`CausalSet`] is immutable once built. Construction normalizes whatever
//! relation it is given (redundant or transitive pairs are fine) into the
//! transitive reduction, kept as per-event lower covers, plus one bitset row
//! per event holding its strict past. Order queries are then a single bit test.

use std::fmt;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest causal set accepted by the constructors.
///
/// The closure needs `N²` bits, so this caps the closure at 128 MiB.
pub const MAX_EVENTS: usize = 1 << 15;

/// Index of an event, dense in `[0, N)` for a set of `N` events.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EventId(u32);

impl EventId {
    pub fn new(index: usize) -> Self {
        Self(u32::try_from(index).expect("event index exceeds u32"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<EventId> for usize {
    fn from(id: EventId) -> usize {
        id.index()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CausetError {
    #[error("event {id} is out of range for a causal set of {event_count} events")]
    IdOutOfRange { id: usize, event_count: usize },
    #[error("relations contain a directed cycle through event {0}")]
    CycleDetected(EventId),
    #[error("{requested} events exceeds the supported maximum of {max}")]
    TooManyEvents { requested: usize, max: usize },
    #[error("event {0} appears more than once in the subset")]
    DuplicateEvent(EventId),
}

/// How two events are related.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `a ≤ b` and `a ≠ b`.
    Before,
    /// `b ≤ a` and `a ≠ b`.
    After,
    Equal,
    /// Neither event can influence the other.
    Incomparable,
}

#[derive(Clone, Debug)]
pub struct CausalSet {
    /// Bit `a` of `past[b]` is set iff `a ≺ b`.
    past: Vec<FixedBitSet>,
    /// Lower covers of each event, ascending.
    covers: Vec<Vec<EventId>>,
    /// A linear extension of the order.
    topo: Vec<EventId>,
}

/// Equal when the orders are equal; the stored linear extension may differ.
impl PartialEq for CausalSet {
    fn eq(&self, other: &Self) -> bool {
        self.past == other.past
    }
}

impl Eq for CausalSet {}

impl Default for CausalSet {
    fn default() -> Self {
        Self::empty()
    }
}

impl CausalSet {
    pub fn empty() -> Self {
        Self {
            past: Vec::new(),
            covers: Vec::new(),
            topo: Vec::new(),
        }
    }

    /// Builds a causal set from pairs `(a, b)` meaning `a ≤ b`.
    ///
    /// Pairs may be any generating subset of the order, including transitive
    /// and duplicate pairs. Reflexive pairs `(a, a)` carry no information and
    /// are skipped.
    pub fn from_relations<I>(event_count: usize, relations: I) -> Result<Self, CausetError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        check_size(event_count)?;
        let mut direct_past = vec![FixedBitSet::with_capacity(event_count); event_count];
        let mut successors: Vec<Vec<usize>> = vec![Vec::new(); event_count];
        for (a, b) in relations {
            for id in [a, b] {
                if id >= event_count {
                    return Err(CausetError::IdOutOfRange { id, event_count });
                }
            }
            if a == b || direct_past[b].contains(a) {
                continue;
            }
            direct_past[b].insert(a);
            successors[a].push(b);
        }

        // Kahn's algorithm; anything left unvisited lies on or above a cycle.
        let mut indegree: Vec<usize> = direct_past.iter().map(|row| row.count_ones(..)).collect();
        let mut stack: Vec<usize> = (0..event_count)
            .rev()
            .filter(|&v| indegree[v] == 0)
            .collect();
        let mut topo = Vec::with_capacity(event_count);
        while let Some(v) = stack.pop() {
            topo.push(EventId::new(v));
            for &w in successors[v].iter().rev() {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    stack.push(w);
                }
            }
        }
        if topo.len() < event_count {
            let stuck = (0..event_count).find(|&v| indegree[v] > 0).unwrap_or(0);
            return Err(CausetError::CycleDetected(EventId::new(stuck)));
        }
        Ok(Self::from_direct_past(topo, direct_past))
    }

    /// Builds the order generated by `direct_past`, where bit `a` of row `b`
    /// asserts `a ≺ b`. Every asserted predecessor must come earlier than its
    /// successor in `topo`, which makes the generated relation acyclic.
    ///
    /// The rows need not be transitive.
    pub(crate) fn from_direct_past(topo: Vec<EventId>, direct_past: Vec<FixedBitSet>) -> Self {
        let n = topo.len();
        debug_assert_eq!(direct_past.len(), n);
        let mut position = vec![0usize; n];
        for (i, id) in topo.iter().enumerate() {
            position[id.index()] = i;
        }

        // Reducing the raw rows yields a generating subset of the order even
        // when the rows are not transitive; the closure over it is exact.
        let generators = maximal_predecessors(&topo, &position, &direct_past);
        drop(direct_past);

        let mut past = vec![FixedBitSet::with_capacity(n); n];
        for &b in &topo {
            let mut row = FixedBitSet::with_capacity(n);
            for &c in &generators[b.index()] {
                row.union_with(&past[c.index()]);
                row.insert(c.index());
            }
            past[b.index()] = row;
        }
        let covers = maximal_predecessors(&topo, &position, &past);
        Self { past, covers, topo }
    }

    pub fn event_count(&self) -> usize {
        self.past.len()
    }

    pub fn is_empty(&self) -> bool {
        self.past.is_empty()
    }

    pub fn check_id(&self, id: EventId) -> Result<(), CausetError> {
        if id.index() < self.event_count() {
            Ok(())
        } else {
            Err(CausetError::IdOutOfRange {
                id: id.index(),
                event_count: self.event_count(),
            })
        }
    }

    pub fn events(&self) -> impl ExactSizeIterator<Item = EventId> + '_ {
        (0..self.event_count()).map(EventId::new)
    }

    /// `a ≤ b`. Panics if either id is out of range.
    #[inline]
    pub fn precedes_or_eq(&self, a: EventId, b: EventId) -> bool {
        a == b || self.past[b.index()].contains(a.index())
    }

    /// `a ≺ b`, strictly. Panics if either id is out of range.
    #[inline]
    pub fn precedes(&self, a: EventId, b: EventId) -> bool {
        self.past[b.index()].contains(a.index())
    }

    pub fn relation(&self, a: EventId, b: EventId) -> Result<Relation, CausetError> {
        self.check_id(a)?;
        self.check_id(b)?;
        Ok(if a == b {
            Relation::Equal
        } else if self.precedes(a, b) {
            Relation::Before
        } else if self.precedes(b, a) {
            Relation::After
        } else {
            Relation::Incomparable
        })
    }

    /// True iff every pair of members is comparable.
    pub fn is_chain(&self, subset: &[EventId]) -> Result<bool, CausetError> {
        self.check_subset(subset)?;
        Ok(pairs(subset).all(|(a, b)| self.precedes(a, b) || self.precedes(b, a)))
    }

    /// True iff every pair of distinct members is incomparable.
    pub fn is_antichain(&self, subset: &[EventId]) -> Result<bool, CausetError> {
        self.check_subset(subset)?;
        Ok(pairs(subset).all(|(a, b)| !self.precedes(a, b) && !self.precedes(b, a)))
    }

    fn check_subset(&self, subset: &[EventId]) -> Result<(), CausetError> {
        let mut seen = FixedBitSet::with_capacity(self.event_count());
        for &id in subset {
            self.check_id(id)?;
            if seen.put(id.index()) {
                return Err(CausetError::DuplicateEvent(id));
            }
        }
        Ok(())
    }

    /// Events directly below `b` in the covering relation.
    pub fn lower_covers(&self, b: EventId) -> &[EventId] {
        &self.covers[b.index()]
    }

    /// The covering relation as `(a, b)` pairs with `a ⋖ b`, ordered by `b` then `a`.
    pub fn cover_pairs(&self) -> impl Iterator<Item = (EventId, EventId)> + '_ {
        self.covers
            .iter()
            .enumerate()
            .flat_map(|(b, lower)| lower.iter().map(move |&a| (a, EventId::new(b))))
    }

    pub fn cover_count(&self) -> usize {
        self.covers.iter().map(Vec::len).sum()
    }

    /// The strict past of `b` as a bitset over event indices.
    pub fn past(&self, b: EventId) -> &FixedBitSet {
        &self.past[b.index()]
    }

    /// All pairs `(a, b)` with `a ≺ b`.
    pub fn strict_pairs(&self) -> impl Iterator<Item = (EventId, EventId)> + '_ {
        self.past
            .iter()
            .enumerate()
            .flat_map(|(b, row)| row.ones().map(move |a| (EventId::new(a), EventId::new(b))))
    }

    pub fn relation_count(&self) -> usize {
        self.past.iter().map(|row| row.count_ones(..)).sum()
    }

    /// A linear extension of the order.
    pub fn topological_order(&self) -> &[EventId] {
        &self.topo
    }
}

fn check_size(event_count: usize) -> Result<(), CausetError> {
    if event_count > MAX_EVENTS {
        Err(CausetError::TooManyEvents {
            requested: event_count,
            max: MAX_EVENTS,
        })
    } else {
        Ok(())
    }
}

fn pairs(subset: &[EventId]) -> impl Iterator<Item = (EventId, EventId)> + '_ {
    subset
        .iter()
        .enumerate()
        .flat_map(move |(i, &a)| subset[i + 1..].iter().map(move |&b| (a, b)))
}

/// For every event `b`, the elements of `rows[b]` not below any other element
/// of `rows[b]` (as seen through `rows`). On a transitive `rows` this is the
/// set of lower covers.
///
/// Scanning `b`'s predecessors from latest to earliest in `topo`, an element
/// not yet shadowed by an accepted one is maximal: anything above it would
/// have been visited first and would have shadowed it.
fn maximal_predecessors(
    topo: &[EventId],
    position: &[usize],
    rows: &[FixedBitSet],
) -> Vec<Vec<EventId>> {
    let n = topo.len();
    (0..n)
        .into_par_iter()
        .map_init(
            || FixedBitSet::with_capacity(n),
            |shadowed, b| {
                let row = &rows[b];
                let mut found = Vec::new();
                if row.is_clear() {
                    return found;
                }
                shadowed.clear();
                for &a in topo[..position[b]].iter().rev() {
                    let a = a.index();
                    if row.contains(a) && !shadowed.contains(a) {
                        found.push(EventId::new(a));
                        shadowed.union_with(&rows[a]);
                    }
                }
                found.sort_unstable();
                found
            },
        )
        .collect()
}
