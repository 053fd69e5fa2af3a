//! Thread transports over crossbeam channels: a non-blocking mesh and a
//! rendezvous mesh in which a work send returns only once the receiver has
//! dequeued the message.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crossbeam_channel::{bounded, select, unbounded, Receiver, RecvTimeoutError, Sender};

use crate::error::TransportError;

use super::message::{Message, WorkerId};
use super::Endpoint;

/// Endpoint of the asynchronous mesh. Sends never block.
pub struct ChannelEndpoint<I> {
    id: WorkerId,
    rx: Receiver<Message<I>>,
    txs: Arc<Vec<Sender<Message<I>>>>,
    lookahead: Option<Message<I>>,
}

pub fn async_mesh<I>(workers: usize) -> Vec<ChannelEndpoint<I>> {
    let (txs, rxs): (Vec<_>, Vec<_>) = (0..workers).map(|_| unbounded()).unzip();
    let txs = Arc::new(txs);
    rxs.into_iter()
        .enumerate()
        .map(|(id, rx)| ChannelEndpoint { id, rx, txs: Arc::clone(&txs), lookahead: None })
        .collect()
}

impl<I> Endpoint<I> for ChannelEndpoint<I> {
    fn id(&self) -> WorkerId {
        self.id
    }

    fn workers(&self) -> usize {
        self.txs.len()
    }

    fn send(&mut self, to: WorkerId, msg: Message<I>) -> Result<(), TransportError> {
        self.txs[to].send(msg).map_err(|_| TransportError::Disconnected { to })
    }

    fn poll(&mut self) -> Option<Message<I>> {
        self.lookahead.take().or_else(|| self.rx.try_recv().ok())
    }

    fn wait(&mut self, timeout: Duration) {
        if self.lookahead.is_none() {
            if let Ok(m) = self.rx.recv_timeout(timeout) {
                self.lookahead = Some(m);
            }
        }
    }
}

struct Envelope<I> {
    msg: Message<I>,
    ack: Option<Sender<()>>,
}

/// Endpoint of the rendezvous mesh. Control messages are still delivered
/// without waiting.
pub struct RendezvousEndpoint<I> {
    id: WorkerId,
    rx: Receiver<Envelope<I>>,
    txs: Arc<Vec<Sender<Envelope<I>>>>,
    stash: VecDeque<Message<I>>,
    watchdog: Duration,
    stop: Arc<AtomicBool>,
}

/// `stop` releases blocked senders when the run is being torn down.
pub fn sync_mesh<I>(workers: usize, watchdog: Duration, stop: Arc<AtomicBool>) -> Vec<RendezvousEndpoint<I>> {
    let (txs, rxs): (Vec<_>, Vec<_>) = (0..workers).map(|_| unbounded()).unzip();
    let txs = Arc::new(txs);
    rxs.into_iter()
        .enumerate()
        .map(|(id, rx)| RendezvousEndpoint {
            id,
            rx,
            txs: Arc::clone(&txs),
            stash: VecDeque::new(),
            watchdog,
            stop: Arc::clone(&stop),
        })
        .collect()
}

impl<I> RendezvousEndpoint<I> {
    fn accept(&mut self, env: Envelope<I>) {
        if let Some(ack) = env.ack {
            let _ = ack.send(());
        }
        self.stash.push_back(env.msg);
    }

    /// Block until `dest` has dequeued the message. While waiting, this
    /// worker keeps dequeuing its own mail into a local stash so that two
    /// workers sending to each other cannot deadlock.
    pub fn send_sync(&mut self, to: WorkerId, msg: Message<I>) -> Result<(), TransportError> {
        if to == self.id {
            self.stash.push_back(msg);
            return Ok(());
        }
        let (ack_tx, ack_rx) = bounded(1);
        self.txs[to]
            .send(Envelope { msg, ack: Some(ack_tx) })
            .map_err(|_| TransportError::Disconnected { to })?;
        let began = Instant::now();
        loop {
            select! {
                recv(ack_rx) -> _ => return Ok(()),
                recv(self.rx) -> env => {
                    if let Ok(env) = env {
                        self.accept(env);
                    }
                }
                default(Duration::from_millis(2)) => {
                    if self.stop.load(Ordering::Acquire) {
                        return Ok(());
                    }
                    if began.elapsed() > self.watchdog {
                        return Err(TransportError::Watchdog { to, waited_ms: began.elapsed().as_millis() as u64 });
                    }
                }
            }
        }
    }
}

impl<I> Endpoint<I> for RendezvousEndpoint<I> {
    fn id(&self) -> WorkerId {
        self.id
    }

    fn workers(&self) -> usize {
        self.txs.len()
    }

    fn send(&mut self, to: WorkerId, msg: Message<I>) -> Result<(), TransportError> {
        if msg.is_work() {
            self.send_sync(to, msg)
        } else {
            self.txs[to].send(Envelope { msg, ack: None }).map_err(|_| TransportError::Disconnected { to })
        }
    }

    fn poll(&mut self) -> Option<Message<I>> {
        if let Some(m) = self.stash.pop_front() {
            return Some(m);
        }
        let env = self.rx.try_recv().ok()?;
        self.accept(env);
        self.stash.pop_front()
    }

    fn wait(&mut self, timeout: Duration) {
        if self.stash.is_empty() {
            match self.rx.recv_timeout(timeout) {
                Ok(env) => self.accept(env),
                Err(RecvTimeoutError::Timeout) | Err(RecvTimeoutError::Disconnected) => {}
            }
        }
    }
}
