//! Distributed containers composed over the comm engine: a key-partitioned
//! map and a cached counting set.

use std::cell::RefCell;
use std::collections::HashMap;
use std::hash::Hash;
use std::io::{self, Write};
use std::marker::PhantomData;
use std::rc::Rc;

use crate::comm::{Ctx, Engine, HandlerId, RankId};
use crate::error::{Error, Result};
use crate::meta::MetaValue;
use crate::wire::{from_bytes, stable_hash, Decode, Encode};

/// Key requirements for distributed containers, plus CSV field rendering for
/// snapshot export.
pub trait Key: Encode + Decode + Clone + Ord + Eq + Hash + 'static {
    fn csv_fields(&self, out: &mut Vec<String>);
}

macro_rules! impl_scalar_key {
    ($($t:ty),*) => {$(
        impl Key for $t {
            fn csv_fields(&self, out: &mut Vec<String>) {
                out.push(self.to_string());
            }
        }
    )*};
}

impl_scalar_key!(u32, u64, i32, i64, String);

impl Key for MetaValue {
    fn csv_fields(&self, out: &mut Vec<String>) {
        out.push(self.to_string());
    }
}

impl<A: Key, B: Key> Key for (A, B) {
    fn csv_fields(&self, out: &mut Vec<String>) {
        self.0.csv_fields(out);
        self.1.csv_fields(out);
    }
}

impl<A: Key, B: Key, C: Key> Key for (A, B, C) {
    fn csv_fields(&self, out: &mut Vec<String>) {
        self.0.csv_fields(out);
        self.1.csv_fields(out);
        self.2.csv_fields(out);
    }
}

struct MapShared<K, V> {
    stores: Vec<HashMap<K, V>>,
    missing_visits: u64,
}

/// Key-partitioned map: each key lives on exactly one owner rank, chosen by a
/// deterministic hash of the key's encoded bytes.
pub struct DistMap<K, V> {
    shared: Rc<RefCell<MapShared<K, V>>>,
    insert_handler: HandlerId,
    num_ranks: usize,
}

impl<K, V> Clone for DistMap<K, V> {
    fn clone(&self) -> Self {
        DistMap {
            shared: self.shared.clone(),
            insert_handler: self.insert_handler,
            num_ranks: self.num_ranks,
        }
    }
}

/// Handle to a visitor routine registered on a [`DistMap`].
pub struct Visitor<K, V, A> {
    handler: HandlerId,
    _marker: PhantomData<fn(K, V, A)>,
}

impl<K, V, A> Clone for Visitor<K, V, A> {
    fn clone(&self) -> Self {
        Visitor {
            handler: self.handler,
            _marker: PhantomData,
        }
    }
}

impl<K, V> DistMap<K, V>
where
    K: Key,
    V: Encode + Decode + Clone + 'static,
{
    pub fn new(engine: &mut Engine) -> Result<Self> {
        let shared = Rc::new(RefCell::new(MapShared {
            stores: (0..engine.num_ranks()).map(|_| HashMap::new()).collect(),
            missing_visits: 0,
        }));
        let shared2 = shared.clone();
        let insert_handler = engine.register_handler(move |ctx, _, payload| {
            let (key, value): (K, V) = from_bytes(payload)?;
            shared2.borrow_mut().stores[ctx.rank().0].insert(key, value);
            Ok(())
        })?;
        Ok(DistMap {
            shared,
            insert_handler,
            num_ranks: engine.num_ranks(),
        })
    }

    /// Owner rank for `key`; identical on every rank and across runs.
    pub fn owner(&self, key: &K) -> RankId {
        RankId((stable_hash(key) % self.num_ranks as u64) as usize)
    }

    /// Store (or overwrite) the pair on the owner rank.
    pub fn insert(&self, ctx: &mut Ctx<'_>, key: &K, value: &V) -> Result<()> {
        let dest = self.owner(key);
        ctx.async_send(dest, self.insert_handler, &(key, value))
    }

    /// Register a routine that runs on the owner rank with mutable access to
    /// the stored value. Must be registered identically on all ranks (one
    /// registration covers all simulated ranks here).
    pub fn register_visitor<A, F>(&self, engine: &mut Engine, f: F) -> Result<Visitor<K, V, A>>
    where
        A: Encode + Decode + 'static,
        F: Fn(&mut Ctx<'_>, &K, &mut V, A) -> Result<()> + 'static,
    {
        let shared = self.shared.clone();
        let handler = engine.register_handler(move |ctx, _, payload| {
            let (key, default, args): (K, Option<V>, A) = from_bytes(payload)?;
            let mut shared = shared.borrow_mut();
            let rank = ctx.rank().0;
            if !shared.stores[rank].contains_key(&key) {
                match default {
                    Some(d) => {
                        shared.stores[rank].insert(key.clone(), d);
                    }
                    None => {
                        // visiting an absent key without default-create is a no-op
                        shared.missing_visits += 1;
                        return Ok(());
                    }
                }
            }
            let value = shared.stores[rank].get_mut(&key).unwrap();
            f(ctx, &key, value, args)
        })?;
        Ok(Visitor {
            handler,
            _marker: PhantomData,
        })
    }

    /// Run a registered visitor on `key`'s owner rank. `default` controls
    /// whether an absent key is created before the visit.
    pub fn visit<A: Encode>(
        &self,
        ctx: &mut Ctx<'_>,
        visitor: &Visitor<K, V, A>,
        key: &K,
        default: Option<&V>,
        args: &A,
    ) -> Result<()> {
        let dest = self.owner(key);
        ctx.async_send(dest, visitor.handler, &(key, default, args))
    }

    /// Count of visits that found no key and had no default to create.
    pub fn missing_visits(&self) -> u64 {
        self.shared.borrow().missing_visits
    }

    /// Iterate every stored pair across all ranks (single-process shortcut,
    /// valid only at quiescence).
    pub fn for_each<F: FnMut(RankId, &K, &V)>(&self, mut f: F) {
        let shared = self.shared.borrow();
        for (rank, store) in shared.stores.iter().enumerate() {
            for (k, v) in store {
                f(RankId(rank), k, v);
            }
        }
    }
}

pub const DEFAULT_CACHE_CAPACITY: usize = 1 << 16;

/// Distributed multiset with a per-rank write-back cache. Increments
/// aggregate locally and ship as deltas to each key's owner rank when the
/// cache fills or is flushed.
pub struct CountingSet<K: Key> {
    map: DistMap<K, u64>,
    add: Visitor<K, u64, u64>,
    caches: Rc<RefCell<Vec<HashMap<K, u64>>>>,
    capacity: usize,
}

impl<K: Key> Clone for CountingSet<K> {
    fn clone(&self) -> Self {
        CountingSet {
            map: self.map.clone(),
            add: self.add.clone(),
            caches: self.caches.clone(),
            capacity: self.capacity,
        }
    }
}

impl<K: Key> CountingSet<K> {
    pub fn new(engine: &mut Engine, cache_capacity: usize) -> Result<Self> {
        let map = DistMap::new(engine)?;
        let add = map.register_visitor(engine, |_, _, count: &mut u64, delta: u64| {
            *count += delta;
            Ok(())
        })?;
        Ok(CountingSet {
            map,
            add,
            caches: Rc::new(RefCell::new(
                (0..engine.num_ranks()).map(|_| HashMap::new()).collect(),
            )),
            capacity: cache_capacity.max(1),
        })
    }

    pub fn increment(&self, ctx: &mut Ctx<'_>, key: K) -> Result<()> {
        self.increment_by(ctx, key, 1)
    }

    pub fn increment_by(&self, ctx: &mut Ctx<'_>, key: K, delta: u64) -> Result<()> {
        let rank = ctx.rank().0;
        let evicted = {
            let mut caches = self.caches.borrow_mut();
            let cache = &mut caches[rank];
            let evicted = if !cache.contains_key(&key) && cache.len() >= self.capacity {
                // evict the entry with the smallest pending delta; ties break
                // on the smallest key so eviction order is deterministic
                let victim = cache
                    .iter()
                    .min_by(|(ka, va), (kb, vb)| va.cmp(vb).then_with(|| ka.cmp(kb)))
                    .map(|(k, _)| k.clone())
                    .expect("capacity >= 1");
                let delta = cache.remove(&victim).unwrap();
                Some((victim, delta))
            } else {
                None
            };
            *cache.entry(key).or_insert(0) += delta;
            evicted
        };
        if let Some((k, d)) = evicted {
            self.send_delta(ctx, &k, d)?;
        }
        Ok(())
    }

    fn send_delta(&self, ctx: &mut Ctx<'_>, key: &K, delta: u64) -> Result<()> {
        self.map.visit(ctx, &self.add, key, Some(&0), &delta)
    }

    /// Drain this rank's cache, shipping every pending delta to its owner.
    pub fn flush(&self, ctx: &mut Ctx<'_>) -> Result<()> {
        let mut pending: Vec<(K, u64)> = self.caches.borrow_mut()[ctx.rank().0].drain().collect();
        pending.sort();
        for (k, d) in pending {
            self.send_delta(ctx, &k, d)?;
        }
        Ok(())
    }

    /// Deterministic global listing of all nonzero counts, sorted by key.
    /// Requires flush + barrier first.
    pub fn snapshot(&self, engine: &Engine) -> Result<Vec<(K, u64)>> {
        if !engine.is_quiescent() {
            return Err(Error::Snapshot("engine has undelivered messages".into()));
        }
        if self.caches.borrow().iter().any(|c| !c.is_empty()) {
            return Err(Error::Snapshot("counting-set cache not flushed".into()));
        }
        let mut out = Vec::new();
        self.map.for_each(|_, k, v| {
            if *v > 0 {
                out.push((k.clone(), *v));
            }
        });
        out.sort();
        Ok(out)
    }
}

/// Write a snapshot as CSV lines `key_field_1[,key_field_2[,key_field_3]],count`.
pub fn write_snapshot_csv<K: Key, W: Write>(w: &mut W, snapshot: &[(K, u64)]) -> io::Result<()> {
    let mut fields = Vec::new();
    for (key, count) in snapshot {
        fields.clear();
        key.csv_fields(&mut fields);
        writeln!(w, "{},{}", fields.join(","), count)?;
    }
    Ok(())
}

pub fn snapshot_csv_string<K: Key>(snapshot: &[(K, u64)]) -> String {
    let mut buf = Vec::new();
    write_snapshot_csv(&mut buf, snapshot).expect("write to Vec cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}
