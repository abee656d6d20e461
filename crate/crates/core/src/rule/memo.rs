use std::collections::HashMap;
use std::sync::RwLock;

use super::CanonicalDisk;
use crate::graph::Graph;

/// Outputs cached by canonical disk, dropped wholesale once `limit`
/// entries accumulate so that long runs stay within memory.
pub(crate) struct Memo {
    map: RwLock<HashMap<CanonicalDisk, Graph>>,
    limit: usize,
}

pub(crate) const MEMO_LIMIT: usize = 50_000;

impl Memo {
    pub(crate) fn new() -> Self {
        Memo {
            map: RwLock::new(HashMap::new()),
            limit: MEMO_LIMIT,
        }
    }

    pub(crate) fn get(&self, key: &CanonicalDisk) -> Option<Graph> {
        self.map.read().expect("memo lock").get(key).cloned()
    }

    pub(crate) fn insert(&self, key: CanonicalDisk, out: Graph) {
        let mut map = self.map.write().expect("memo lock");
        if map.len() >= self.limit {
            map.clear();
        }
        map.insert(key, out);
    }
}
