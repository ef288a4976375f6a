use std::collections::HashMap;
use std::sync::{Arc, RwLock};
use std::thread::{self, ThreadId};

use super::Accelerator;

/// Opaque identity of an executing worker (the current OS thread).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WorkerId(ThreadId);

impl WorkerId {
    pub fn current() -> Self {
        WorkerId(thread::current().id())
    }
}

/// Maps each worker to its private accelerator.
///
/// Entries live until the worker re-initializes or they are removed
/// explicitly; the auto-initializing spawn helpers remove their own entry
/// on exit.
#[derive(Debug, Default)]
pub struct QpuManager {
    qpus: RwLock<HashMap<WorkerId, Arc<Accelerator>>>,
}

impl QpuManager {
    pub fn new() -> Self {
        QpuManager::default()
    }

    /// Binds `qpu` to the calling worker, replacing any previous binding.
    pub fn set_qpu(&self, qpu: Arc<Accelerator>) {
        self.set_for(WorkerId::current(), qpu);
    }

    pub fn get_qpu(&self) -> Option<Arc<Accelerator>> {
        self.get_for(WorkerId::current())
    }

    pub fn set_for(&self, worker: WorkerId, qpu: Arc<Accelerator>) {
        self.qpus
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .insert(worker, qpu);
    }

    pub fn get_for(&self, worker: WorkerId) -> Option<Arc<Accelerator>> {
        self.qpus
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .get(&worker)
            .cloned()
    }

    pub fn remove(&self, worker: WorkerId) -> Option<Arc<Accelerator>> {
        self.qpus
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .remove(&worker)
    }

    pub fn len(&self) -> usize {
        self.qpus.read().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runtime::{get_accelerator, AcceleratorConfig};

    #[test]
    fn get_after_set_returns_same_instance() {
        let m = QpuManager::new();
        assert!(m.get_qpu().is_none());
        let acc = Arc::new(get_accelerator("statevector", &AcceleratorConfig::default()).unwrap());
        m.set_qpu(Arc::clone(&acc));
        assert!(Arc::ptr_eq(&m.get_qpu().unwrap(), &acc));
        let other = thread::spawn(WorkerId::current).join().unwrap();
        assert!(m.get_for(other).is_none());
    }
}
