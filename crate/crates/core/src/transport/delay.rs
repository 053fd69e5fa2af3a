use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::TransportError;

use super::message::{Message, WorkerId};
use super::Endpoint;

/// One scheduled delivery, for replay comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Delivery {
    pub sent_at: u64,
    pub deliver_at: u64,
    pub from: WorkerId,
    pub to: WorkerId,
    pub states: usize,
}

struct Queued<I> {
    deliver_at: u64,
    seq: u64,
    msg: Message<I>,
}

impl<I> PartialEq for Queued<I> {
    fn eq(&self, other: &Self) -> bool {
        (self.deliver_at, self.seq) == (other.deliver_at, other.seq)
    }
}
impl<I> Eq for Queued<I> {}
impl<I> PartialOrd for Queued<I> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<I> Ord for Queued<I> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.deliver_at, self.seq).cmp(&(other.deliver_at, other.seq))
    }
}

/// Single-threaded network whose messages become visible after a seeded
/// delay counted in scheduler rounds. Deliveries between one pair of workers
/// never overtake each other.
pub struct DelayNetwork<I> {
    now: u64,
    rng: ChaCha8Rng,
    max_delay: u64,
    inboxes: Vec<BinaryHeap<Reverse<Queued<I>>>>,
    last_delivery: HashMap<(WorkerId, WorkerId), u64>,
    seq: u64,
    log: Vec<Delivery>,
}

impl<I> DelayNetwork<I> {
    /// Delays are drawn uniformly from `1..=max_delay` rounds.
    pub fn new(workers: usize, seed: u64, max_delay: u64) -> Self {
        DelayNetwork {
            now: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_delay: max_delay.max(1),
            inboxes: (0..workers).map(|_| BinaryHeap::new()).collect(),
            last_delivery: HashMap::new(),
            seq: 0,
            log: Vec::new(),
        }
    }

    pub fn workers(&self) -> usize {
        self.inboxes.len()
    }

    pub fn now(&self) -> u64 {
        self.now
    }

    /// Move to the next scheduler round.
    pub fn advance(&mut self) {
        self.now += 1;
    }

    pub fn endpoint(&mut self, id: WorkerId) -> SimEndpoint<'_, I> {
        SimEndpoint { id, net: self }
    }

    pub fn deliver(&mut self, from: WorkerId, to: WorkerId, msg: Message<I>) {
        let delay = self.rng.gen_range(1..=self.max_delay);
        let last = self.last_delivery.entry((from, to)).or_insert(0);
        let deliver_at = (self.now + delay).max(*last);
        *last = deliver_at;
        self.seq += 1;
        self.log.push(Delivery { sent_at: self.now, deliver_at, from, to, states: msg.state_count() });
        self.inboxes[to].push(Reverse(Queued { deliver_at, seq: self.seq, msg }));
    }

    pub fn poll(&mut self, id: WorkerId) -> Option<Message<I>> {
        let inbox = &mut self.inboxes[id];
        if inbox.peek().is_some_and(|q| q.0.deliver_at <= self.now) {
            inbox.pop().map(|q| q.0.msg)
        } else {
            None
        }
    }

    /// Everything queued for `id`, visible or not, in delivery order.
    pub fn drain_all(&mut self, id: WorkerId) -> Vec<Message<I>> {
        let mut out = Vec::new();
        while let Some(q) = self.inboxes[id].pop() {
            out.push(q.0.msg);
        }
        out
    }

    pub fn in_flight_messages(&self) -> usize {
        self.inboxes.iter().map(BinaryHeap::len).sum()
    }

    pub fn in_flight_work_states(&self) -> u64 {
        self.inboxes
            .iter()
            .flat_map(|q| q.iter())
            .map(|q| q.0.msg.state_count() as u64)
            .sum()
    }

    pub fn in_flight_work_messages(&self) -> usize {
        self.inboxes.iter().flat_map(|q| q.iter()).filter(|q| q.0.msg.is_work()).count()
    }

    pub fn schedule(&self) -> &[Delivery] {
        &self.log
    }
}

pub struct SimEndpoint<'a, I> {
    id: WorkerId,
    net: &'a mut DelayNetwork<I>,
}

impl<I> Endpoint<I> for SimEndpoint<'_, I> {
    fn id(&self) -> WorkerId {
        self.id
    }

    fn workers(&self) -> usize {
        self.net.workers()
    }

    fn send(&mut self, to: WorkerId, msg: Message<I>) -> Result<(), TransportError> {
        self.net.deliver(self.id, to, msg);
        Ok(())
    }

    fn poll(&mut self) -> Option<Message<I>> {
        self.net.poll(self.id)
    }
}
