use std::collections::BTreeMap;
use std::sync::{Mutex, MutexGuard};

use serde_json::Value;

use crate::sim::Counts;

/// A named qubit register and the measurement counts accumulated on it.
///
/// Buffers are shared as `Arc<AcceleratorBuffer>`; metadata and counts sit
/// behind their own mutexes so concurrent kernels can merge into the same
/// buffer.
#[derive(Debug)]
pub struct AcceleratorBuffer {
    name: String,
    size: usize,
    information: Mutex<BTreeMap<String, Value>>,
    measurements: Mutex<Counts>,
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|e| e.into_inner())
}

impl AcceleratorBuffer {
    pub(crate) fn new(name: String, size: usize) -> Self {
        AcceleratorBuffer {
            name,
            size,
            information: Mutex::new(BTreeMap::new()),
            measurements: Mutex::new(Counts::new()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Snapshot of the accumulated counts.
    pub fn measurements(&self) -> Counts {
        lock(&self.measurements).clone()
    }

    pub fn merge_measurements(&self, counts: &Counts) {
        lock(&self.measurements).merge(counts);
    }

    pub fn information(&self) -> BTreeMap<String, Value> {
        lock(&self.information).clone()
    }

    pub fn add_information(&self, key: impl Into<String>, value: impl Into<Value>) {
        lock(&self.information).insert(key.into(), value.into());
    }

    pub fn print(&self) {
        println!("{}", super::buffer_to_json(self));
    }
}
