use crate::error::TransportError;

use super::message::{Message, SearchEpoch, WorkMessage, WorkerId};
use super::Endpoint;

/// Per-destination batches awaiting a full pack.
#[derive(Debug, Clone)]
pub struct PackingBuffer<I> {
    pending: Vec<Vec<I>>,
    pack_size: usize,
}

/// Stamp applied to every work message a worker emits.
#[derive(Debug, Clone, Copy)]
pub struct Stamp {
    pub sender: WorkerId,
    pub timestamp: u64,
    pub epoch: SearchEpoch,
}

/// What a send or flush put on the wire.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Emitted {
    pub messages: u64,
    pub states: u64,
}

impl Emitted {
    fn add(&mut self, states: usize) {
        self.messages += 1;
        self.states += states as u64;
    }
}

impl<I> PackingBuffer<I> {
    pub fn new(workers: usize, pack_size: usize) -> Self {
        PackingBuffer { pending: (0..workers).map(|_| Vec::new()).collect(), pack_size: pack_size.max(1) }
    }

    pub fn pack_size(&self) -> usize {
        self.pack_size
    }

    pub fn buffered(&self) -> usize {
        self.pending.iter().map(Vec::len).sum()
    }

    pub fn buffered_for(&self, dest: WorkerId) -> usize {
        self.pending[dest].len()
    }

    pub fn is_empty(&self) -> bool {
        self.pending.iter().all(Vec::is_empty)
    }

    /// Append a state for `dest`; a message goes out as soon as the batch
    /// reaches the pack size.
    pub fn send_state(&mut self, dest: WorkerId, item: I, stamp: Stamp, ep: &mut dyn Endpoint<I>) -> Result<Emitted, TransportError> {
        self.pending[dest].push(item);
        let mut out = Emitted::default();
        if self.pending[dest].len() >= self.pack_size {
            let items = std::mem::take(&mut self.pending[dest]);
            out.add(items.len());
            ep.send(dest, Message::Work(WorkMessage { sender: stamp.sender, timestamp: stamp.timestamp, epoch: stamp.epoch, items }))?;
        }
        Ok(out)
    }

    /// Emit every non-empty batch.
    pub fn flush_all(&mut self, stamp: Stamp, ep: &mut dyn Endpoint<I>) -> Result<Emitted, TransportError> {
        let mut out = Emitted::default();
        for dest in 0..self.pending.len() {
            if self.pending[dest].is_empty() {
                continue;
            }
            let items = std::mem::take(&mut self.pending[dest]);
            out.add(items.len());
            ep.send(dest, Message::Work(WorkMessage { sender: stamp.sender, timestamp: stamp.timestamp, epoch: stamp.epoch, items }))?;
        }
        Ok(out)
    }
}
