use std::collections::HashMap;
use std::hash::Hash;
use std::sync::RwLock;

/// Append-only memo table shared between threads.
///
/// A value is published once per key and never changes afterwards. Two threads
/// may race to compute the same key; both produce the same value and the first
/// insertion wins.
#[derive(Debug)]
pub struct Memo<K, V> {
    map: RwLock<HashMap<K, V>>,
}

impl<K, V> Default for Memo<K, V> {
    fn default() -> Self {
        Self { map: RwLock::new(HashMap::new()) }
    }
}

impl<K: Eq + Hash + Clone, V: Clone> Memo<K, V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &K) -> Option<V> {
        self.map.read().expect("memo lock poisoned").get(key).cloned()
    }

    pub fn insert(&self, key: K, value: V) -> V {
        self.map.write().expect("memo lock poisoned").entry(key).or_insert(value).clone()
    }

    /// The lock is not held while `compute` runs, so `compute` may recurse
    /// into this same memo.
    pub fn get_or_try_insert<E>(&self, key: &K, compute: impl FnOnce() -> Result<V, E>) -> Result<V, E> {
        if let Some(v) = self.get(key) {
            return Ok(v);
        }
        let v = compute()?;
        Ok(self.insert(key.clone(), v))
    }

    /// Overwrites an entry; used only to widen cached expansions.
    pub fn replace(&self, key: K, value: V) {
        self.map.write().expect("memo lock poisoned").insert(key, value);
    }
}
