use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::distr::{Alphanumeric, SampleString};

use super::{AcceleratorBuffer, Result, RuntimeError};

const NAME_PREFIX: &str = "qrg_";
const NAME_LEN: usize = 6;

/// Name-to-buffer map. Insertion happens under one mutex; the lock is held
/// only for the collision check and the insert.
#[derive(Debug, Default)]
pub struct BufferRegistry {
    buffers: Mutex<HashMap<String, Arc<AcceleratorBuffer>>>,
}

impl BufferRegistry {
    pub fn new() -> Self {
        BufferRegistry::default()
    }

    /// Allocates an `n`-qubit buffer under a fresh `qrg_XXXXXX` name.
    pub fn qalloc(&self, n: usize) -> Result<Arc<AcceleratorBuffer>> {
        if n == 0 {
            return Err(RuntimeError::ZeroQubits);
        }
        let mut rng = rand::rng();
        let mut buffers = self.buffers.lock().unwrap_or_else(|e| e.into_inner());
        let name = loop {
            let candidate = format!(
                "{NAME_PREFIX}{}",
                Alphanumeric.sample_string(&mut rng, NAME_LEN)
            );
            if !buffers.contains_key(&candidate) {
                break candidate;
            }
        };
        let buffer = Arc::new(AcceleratorBuffer::new(name.clone(), n));
        buffers.insert(name, Arc::clone(&buffer));
        Ok(buffer)
    }

    pub fn get(&self, name: &str) -> Option<Arc<AcceleratorBuffer>> {
        self.buffers
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .get(name)
            .cloned()
    }

    pub fn len(&self) -> usize {
        self.buffers.lock().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn names(&self) -> Vec<String> {
        self.buffers
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .keys()
            .cloned()
            .collect()
    }
}
