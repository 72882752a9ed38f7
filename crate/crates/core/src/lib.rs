//! Causal sets, observer-chain quantification and the flat-spacetime
//! structure recovered from it.
//!
//! * [`poset`]: finite partial orders with fast reachability.
//! * [`quantify`]: projections onto chains, pair quantification, interval
//!   scalars and the scalar candidate audit.
//! * [`frames`]: relations between frames, boosts and their composition.
//! * [`oracle`]: sprinkled and hand-placed causal sets embedded in Minkowski
//!   space, with continuum radar formulas as ground truth.
//! * [`pythagoras`]: orthogonal decomposition of spatial intervals.
//! * [`scenarios`]: the fixed constructions used in tests and by the CLI.
//! * [`io`]: JSON and CSV formats.
//! * [`validate`]: self-contained check suites behind the `validate` command.

pub mod frames;
pub mod io;
pub mod oracle;
pub mod poset;
pub mod pythagoras;
pub mod quantify;
pub mod scenarios;
pub mod validate;

pub use poset::{CausalSet, CausetError, EventId, Relation};
pub use quantify::{Frame, ObserverChain, PairQuant};
