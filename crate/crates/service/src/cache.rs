use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex};

/// A finished response body with its content type and strong ETag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cached {
    pub content_type: &'static str,
    pub etag: String,
    pub body: Arc<Vec<u8>>,
}

/// Bounded first-in-first-out map from canonical request keys to
/// responses. Every handler is a pure function of its key, so a hit and a
/// recomputation are indistinguishable to clients.
#[derive(Debug)]
pub struct ResponseCache {
    capacity: usize,
    inner: Mutex<(HashMap<String, Cached>, VecDeque<String>)>,
}

impl ResponseCache {
    pub fn new(capacity: usize) -> Self {
        ResponseCache {
            capacity,
            inner: Mutex::new((HashMap::new(), VecDeque::new())),
        }
    }

    pub fn get(&self, key: &str) -> Option<Cached> {
        self.inner.lock().expect("cache poisoned").0.get(key).cloned()
    }

    pub fn insert(&self, key: String, value: Cached) {
        if self.capacity == 0 {
            return;
        }
        let mut guard = self.inner.lock().expect("cache poisoned");
        let (map, order) = &mut *guard;
        if map.insert(key.clone(), value).is_none() {
            order.push_back(key);
        }
        while order.len() > self.capacity {
            if let Some(old) = order.pop_front() {
                map.remove(&old);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.inner.lock().expect("cache poisoned").0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
