use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex};

use lru::LruCache;

use crate::summarize::Summary;

/// Identity of a summary: topic, sorted selection, backend and input budget.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SummaryKey {
    pub topic_id: String,
    pub selection: Vec<String>,
    pub backend: String,
    pub token_budget: usize,
}

/// Bounded LRU cache of summaries. Concurrent misses on one key wait for a
/// single computation instead of each calling the backend.
pub struct SummaryCache {
    entries: Mutex<LruCache<SummaryKey, Summary>>,
    inflight: Mutex<HashMap<SummaryKey, Arc<Mutex<()>>>>,
}

impl SummaryCache {
    pub fn new(capacity: usize) -> Self {
        let capacity = NonZeroUsize::new(capacity).unwrap_or(NonZeroUsize::MIN);
        Self {
            entries: Mutex::new(LruCache::new(capacity)),
            inflight: Mutex::new(HashMap::new()),
        }
    }

    pub fn get(&self, key: &SummaryKey) -> Option<Summary> {
        self.entries.lock().expect("cache poisoned").get(key).cloned()
    }

    pub fn put(&self, key: SummaryKey, summary: Summary) {
        self.entries.lock().expect("cache poisoned").put(key, summary);
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, key: &SummaryKey) -> bool {
        self.entries.lock().expect("cache poisoned").contains(key)
    }

    /// Returns the cached summary or runs `compute`, which also says whether
    /// its result may be stored.
    pub fn get_or_compute<F>(&self, key: SummaryKey, compute: F) -> Summary
    where
        F: FnOnce() -> (Summary, bool),
    {
        if let Some(hit) = self.get(&key) {
            return hit;
        }
        let slot = self
            .inflight
            .lock()
            .expect("cache poisoned")
            .entry(key.clone())
            .or_default()
            .clone();
        let guard = slot.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(hit) = self.get(&key) {
            return hit;
        }
        let (summary, cacheable) = compute();
        if cacheable {
            self.put(key.clone(), summary.clone());
        }
        drop(guard);
        let mut inflight = self.inflight.lock().expect("cache poisoned");
        if inflight.get(&key).is_some_and(|s| Arc::ptr_eq(s, &slot)) {
            inflight.remove(&key);
        }
        summary
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    fn key(i: usize) -> SummaryKey {
        SummaryKey {
            topic_id: "t".into(),
            selection: vec![format!("C{i}")],
            backend: "fallback".into(),
            token_budget: 1024,
        }
    }

    #[test]
    fn lru_eviction_at_capacity() {
        let cache = SummaryCache::new(1024);
        for i in 0..1024 {
            cache.put(key(i), Summary::empty_result());
        }
        // Touch entry 0 so entry 1 becomes the least recently used.
        assert!(cache.get(&key(0)).is_some());
        cache.put(key(1024), Summary::empty_result());
        assert_eq!(cache.len(), 1024);
        assert!(cache.contains(&key(0)));
        assert!(!cache.contains(&key(1)));
        assert!(cache.contains(&key(1024)));
    }

    #[test]
    fn concurrent_misses_compute_once() {
        let cache = Arc::new(SummaryCache::new(8));
        let calls = Arc::new(AtomicUsize::new(0));
        let handles: Vec<_> = (0..8)
            .map(|_| {
                let cache = cache.clone();
                let calls = calls.clone();
                std::thread::spawn(move || {
                    cache.get_or_compute(key(0), || {
                        calls.fetch_add(1, Ordering::SeqCst);
                        std::thread::sleep(std::time::Duration::from_millis(50));
                        (Summary::empty_result(), true)
                    })
                })
            })
            .collect();
        for h in handles {
            h.join().unwrap();
        }
        assert_eq!(calls.load(Ordering::SeqCst), 1);
    }

    #[test]
    fn uncacheable_results_are_not_stored() {
        let cache = SummaryCache::new(8);
        cache.get_or_compute(key(0), || (Summary::empty_result(), false));
        assert!(cache.is_empty());
    }
}
