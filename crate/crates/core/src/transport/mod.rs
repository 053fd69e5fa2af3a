//! In-process message passing between search workers.
//!
//! Three behaviours sit behind one [`Endpoint`] trait: an asynchronous
//! channel mesh (non-blocking send, polled receive), a rendezvous mesh whose
//! work sends block until the receiver dequeues, and a seeded delay network
//! driven by a single-threaded round-robin scheduler. All of them keep
//! per-pair FIFO order and never drop messages.

pub mod channel;
pub mod delay;
pub mod message;
pub mod packing;

use std::time::Duration;

use crate::error::TransportError;

pub use channel::{async_mesh, sync_mesh, ChannelEndpoint, RendezvousEndpoint};
pub use delay::{DelayNetwork, Delivery, SimEndpoint};
pub use message::{ControlMessage, HdaItem, Message, Probe, SearchEpoch, TdsItem, WorkMessage, WorkerId};
pub use packing::{Emitted, PackingBuffer, Stamp};

/// One worker's view of the network.
pub trait Endpoint<I> {
    fn id(&self) -> WorkerId;
    fn workers(&self) -> usize;
    fn send(&mut self, to: WorkerId, msg: Message<I>) -> Result<(), TransportError>;
    /// Oldest available message, without blocking.
    fn poll(&mut self) -> Option<Message<I>>;
    /// Block until mail may be available or `timeout` passes. Simulated
    /// endpoints return at once.
    fn wait(&mut self, _timeout: Duration) {}
}
