use crate::puzzle::{Move, PackedState};

pub type WorkerId = usize;

/// Iteration number and cost threshold of an iterative-deepening search.
/// Parallel A* leaves it at the default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchEpoch {
    pub iteration: u32,
    pub threshold: u32,
}

/// A state routed to its owner by the hash-distributed A* family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HdaItem {
    pub state: PackedState,
    pub g: u32,
    pub h: u32,
    pub via: Option<Move>,
}

/// A node routed to its owner by TDS. It carries its whole path so that the
/// solution survives transposition-table replacement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TdsItem {
    pub state: PackedState,
    pub g: u32,
    pub h: u32,
    pub path: Vec<Move>,
}

/// A batch of states for one destination, stamped with the sender's clock.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkMessage<I> {
    pub sender: WorkerId,
    pub timestamp: u64,
    pub epoch: SearchEpoch,
    pub items: Vec<I>,
}

/// Termination probe travelling the ring 0, 1, …, p−1, 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Probe {
    pub initiator: WorkerId,
    pub probe_epoch: u64,
    /// Initiator's clock when the check started; received work stamped at or
    /// after this time fails the check.
    pub time: u64,
    /// Largest clock seen along the ring so far.
    pub max_clock: u64,
    pub sent: u64,
    pub received: u64,
    pub states_sent: u64,
    pub states_received: u64,
    pub all_quiescent: bool,
    pub min_pruned_f: Option<u32>,
    /// Best goal cost known along the ring.
    pub incumbent: Option<u32>,
    pub search_epoch: SearchEpoch,
    pub hops: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ControlMessage {
    Probe(Probe),
    Incumbent { cost: u32, from: WorkerId },
    Threshold(SearchEpoch),
    Abort { from: WorkerId },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Message<I> {
    Work(WorkMessage<I>),
    Control(ControlMessage),
}

impl<I> Message<I> {
    pub fn is_work(&self) -> bool {
        matches!(self, Message::Work(_))
    }

    /// States carried (0 for control messages).
    pub fn state_count(&self) -> usize {
        match self {
            Message::Work(w) => w.items.len(),
            Message::Control(_) => 0,
        }
    }
}
