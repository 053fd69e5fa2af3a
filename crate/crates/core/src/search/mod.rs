//! Serial baselines: A* and IDA* with a transposition table, plus the
//! open/closed store and table they are built on.

pub mod astar;
pub mod idastar;
pub mod store;
pub mod tt;

pub use astar::{astar, SerialOptions};
pub use idastar::{idastar_tt, idastar_tt_from};
pub use store::{Integration, Keyed, LocalSearch, NodeRecord, Popped};
pub use tt::{TranspositionTable, TtEntry, REPLACEMENT_FRACTION};
