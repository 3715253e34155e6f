//! Asynchronous, buffered, fire-and-forget RPC over simulated ranks.
//!
//! The engine models `num_ranks` logical ranks inside one process. Messages
//! are serialized into per-destination buffers and flushed in batches once a
//! byte threshold is crossed or a barrier begins. Handlers run serially per
//! rank; delivery between a fixed (source, destination) pair preserves send
//! order. [`Engine::barrier`] is a quiescence barrier: it returns only after
//! every buffered envelope, including envelopes spawned by other handlers, has
//! been delivered and processed.

use std::collections::VecDeque;
use std::fmt;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::wire::{to_bytes, Encode};

pub const DEFAULT_FLUSH_THRESHOLD: usize = 64 * 1024;

/// Identity of one simulated rank, in `[0, num_ranks)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RankId(pub usize);

impl fmt::Display for RankId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Stable id of a registered handler. Ids are assigned in registration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HandlerId(u32);

/// Engine configuration knobs.
#[derive(Debug, Clone)]
pub struct CommConfig {
    pub num_ranks: usize,
    pub flush_threshold: usize,
}

impl CommConfig {
    pub fn new(num_ranks: usize) -> Self {
        CommConfig {
            num_ranks,
            flush_threshold: DEFAULT_FLUSH_THRESHOLD,
        }
    }

    pub fn flush_threshold(mut self, bytes: usize) -> Self {
        self.flush_threshold = bytes;
        self
    }
}

/// Per-rank traffic counters. All counters are monotone nondecreasing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CommStats {
    pub messages_sent: u64,
    pub payload_bytes_sent: u64,
    pub flushes: u64,
    pub messages_delivered: u64,
}

impl CommStats {
    pub fn add(&mut self, other: &CommStats) {
        self.messages_sent += other.messages_sent;
        self.payload_bytes_sent += other.payload_bytes_sent;
        self.flushes += other.flushes;
        self.messages_delivered += other.messages_delivered;
    }

    /// Counter increments accumulated since `earlier`. All counters are
    /// monotone, so plain saturating subtraction is exact.
    pub fn delta_since(&self, earlier: &CommStats) -> CommStats {
        CommStats {
            messages_sent: self.messages_sent - earlier.messages_sent,
            payload_bytes_sent: self.payload_bytes_sent - earlier.payload_bytes_sent,
            flushes: self.flushes - earlier.flushes,
            messages_delivered: self.messages_delivered - earlier.messages_delivered,
        }
    }
}

struct Envelope {
    src: RankId,
    handler: HandlerId,
    payload: Vec<u8>,
}

#[derive(Default)]
struct SendBuffer {
    envelopes: Vec<Envelope>,
    bytes: usize,
}

type HandlerFn = Rc<dyn Fn(&mut Ctx<'_>, RankId, &[u8]) -> Result<()>>;

struct Core {
    num_ranks: usize,
    flush_threshold: usize,
    delivering: bool,
    /// send_bufs[src][dest]
    send_bufs: Vec<Vec<SendBuffer>>,
    /// inboxes[dest], fed in flush order so per-(src, dest) FIFO is preserved
    inboxes: Vec<VecDeque<Envelope>>,
    stats: Vec<CommStats>,
}

impl Core {
    fn send(&mut self, src: RankId, dest: RankId, handler: HandlerId, payload: Vec<u8>) -> Result<()> {
        if dest.0 >= self.num_ranks {
            return Err(Error::Config(format!(
                "destination rank {dest} out of range (num_ranks {})",
                self.num_ranks
            )));
        }
        let stats = &mut self.stats[src.0];
        stats.messages_sent += 1;
        stats.payload_bytes_sent += payload.len() as u64;
        let buf = &mut self.send_bufs[src.0][dest.0];
        buf.bytes += payload.len();
        buf.envelopes.push(Envelope {
            src,
            handler,
            payload,
        });
        if buf.bytes >= self.flush_threshold {
            self.flush_one(src, dest);
        }
        Ok(())
    }

    fn flush_one(&mut self, src: RankId, dest: RankId) {
        let buf = &mut self.send_bufs[src.0][dest.0];
        if buf.envelopes.is_empty() {
            return;
        }
        buf.bytes = 0;
        self.inboxes[dest.0].extend(buf.envelopes.drain(..));
        self.stats[src.0].flushes += 1;
    }

    fn flush_all(&mut self) {
        for src in 0..self.num_ranks {
            for dest in 0..self.num_ranks {
                self.flush_one(RankId(src), RankId(dest));
            }
        }
    }

    fn pending(&self) -> bool {
        self.inboxes.iter().any(|q| !q.is_empty())
            || self
                .send_bufs
                .iter()
                .flatten()
                .any(|b| !b.envelopes.is_empty())
    }
}

/// The message-passing engine over all simulated ranks.
pub struct Engine {
    handlers: Vec<HandlerFn>,
    core: Core,
}

/// Per-rank execution context handed to handlers and to SPMD sections run via
/// [`Engine::for_each_rank`]. Sending is available; barriers are not, which
/// keeps handlers from blocking on their own delivery.
pub struct Ctx<'a> {
    rank: RankId,
    core: &'a mut Core,
}

impl Ctx<'_> {
    pub fn rank(&self) -> RankId {
        self.rank
    }

    pub fn num_ranks(&self) -> usize {
        self.core.num_ranks
    }

    /// Serialize `args` and queue them for delivery to `handler` on `dest`.
    /// Fire-and-forget: no reply is generated. Sending to the own rank takes
    /// the same buffered path and is counted in the stats like any other send.
    pub fn async_send<T: Encode + ?Sized>(
        &mut self,
        dest: RankId,
        handler: HandlerId,
        args: &T,
    ) -> Result<()> {
        self.core.send(self.rank, dest, handler, to_bytes(args))
    }
}

impl Engine {
    pub fn new(config: CommConfig) -> Result<Engine> {
        if config.num_ranks == 0 {
            return Err(Error::Config("num_ranks must be at least 1".into()));
        }
        let n = config.num_ranks;
        Ok(Engine {
            handlers: Vec::new(),
            core: Core {
                num_ranks: n,
                flush_threshold: config.flush_threshold.max(1),
                delivering: false,
                send_bufs: (0..n)
                    .map(|_| (0..n).map(|_| SendBuffer::default()).collect())
                    .collect(),
                inboxes: (0..n).map(|_| VecDeque::new()).collect(),
                stats: vec![CommStats::default(); n],
            },
        })
    }

    pub fn num_ranks(&self) -> usize {
        self.core.num_ranks
    }

    /// Register a message handler on every rank. The returned id is assigned
    /// by registration order, so the same sequence of registrations yields the
    /// same ids everywhere. Registration is only legal while the engine is
    /// quiescent; a handler attempting to register mid-delivery is a
    /// configuration error.
    pub fn register_handler<F>(&mut self, f: F) -> Result<HandlerId>
    where
        F: Fn(&mut Ctx<'_>, RankId, &[u8]) -> Result<()> + 'static,
    {
        if self.core.delivering {
            return Err(Error::Config(
                "handler registration while the engine is delivering".into(),
            ));
        }
        let id = HandlerId(self.handlers.len() as u32);
        self.handlers.push(Rc::new(f));
        Ok(id)
    }

    /// Run `f` once per rank, in rank order, with that rank's context.
    /// Models the SPMD sections of top-level control flow between barriers.
    pub fn for_each_rank<F>(&mut self, mut f: F) -> Result<()>
    where
        F: FnMut(&mut Ctx<'_>) -> Result<()>,
    {
        if self.core.delivering {
            return Err(Error::Config("for_each_rank called from a handler".into()));
        }
        for r in 0..self.core.num_ranks {
            let mut ctx = Ctx {
                rank: RankId(r),
                core: &mut self.core,
            };
            f(&mut ctx)?;
        }
        Ok(())
    }

    /// Quiescence barrier: flush every buffer, deliver every envelope, and
    /// keep going until handlers stop producing new messages. On return the
    /// global delivered count equals the global sent count.
    pub fn barrier(&mut self) -> Result<()> {
        if self.core.delivering {
            return Err(Error::Config(
                "barrier called from inside a handler (would deadlock)".into(),
            ));
        }
        self.core.delivering = true;
        let outcome = self.deliver_until_quiescent();
        self.core.delivering = false;
        outcome?;
        debug_assert_eq!(
            self.global_stats().messages_sent,
            self.global_stats().messages_delivered
        );
        Ok(())
    }

    fn deliver_until_quiescent(&mut self) -> Result<()> {
        self.core.flush_all();
        loop {
            let mut delivered_any = false;
            for dest in 0..self.core.num_ranks {
                while let Some(env) = self.core.inboxes[dest].pop_front() {
                    let handler = self
                        .handlers
                        .get(env.handler.0 as usize)
                        .cloned()
                        .ok_or_else(|| {
                            Error::Config(format!("unregistered handler id {}", env.handler.0))
                        })?;
                    let mut ctx = Ctx {
                        rank: RankId(dest),
                        core: &mut self.core,
                    };
                    handler(&mut ctx, env.src, &env.payload)?;
                    self.core.stats[dest].messages_delivered += 1;
                    delivered_any = true;
                }
            }
            self.core.flush_all();
            if !self.core.pending() {
                return Ok(());
            }
            debug_assert!(delivered_any, "pending messages but no progress");
        }
    }

    /// Exact global sum of one contribution per rank; in a real deployment
    /// every rank would receive the same value.
    pub fn all_reduce_sum<T>(&mut self, locals: &[T]) -> Result<T>
    where
        T: Copy + std::iter::Sum<T>,
    {
        if locals.len() != self.core.num_ranks {
            return Err(Error::Config(format!(
                "all_reduce_sum expects one contribution per rank ({} != {})",
                locals.len(),
                self.core.num_ranks
            )));
        }
        self.barrier()?;
        Ok(locals.iter().copied().sum())
    }

    pub fn stats(&self, rank: RankId) -> CommStats {
        self.core.stats[rank.0]
    }

    /// Aggregate of all per-rank counters.
    pub fn global_stats(&self) -> CommStats {
        let mut total = CommStats::default();
        for s in &self.core.stats {
            total.add(s);
        }
        total
    }

    /// True when no envelope is buffered or awaiting delivery.
    pub fn is_quiescent(&self) -> bool {
        !self.core.pending()
    }
}
