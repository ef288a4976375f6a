//! Thread-safe classical runtime.
//!
//! A [`Runtime`] bundles a [`BufferRegistry`] with a [`QpuManager`]. The
//! free functions ([`qalloc`], [`initialize_worker`], [`execute`]) act on the
//! process-wide instance; tests and embedders can build private ones.
//!
//! Every worker (thread) that runs kernels must first call
//! [`initialize_worker`], which clones a fresh [`Accelerator`] from the
//! factory and files it under the worker's id. Kernels then run on that
//! private instance, outside any runtime lock.
//!
//! ```
//! use qcrt_core::algorithms::bell_kernel;
//! use qcrt_core::runtime::{self, AcceleratorConfig};
//!
//! let mut task = runtime::spawn(|| {
//!     runtime::initialize_worker("statevector", &AcceleratorConfig::default().with_seed(1))?;
//!     let q = runtime::qalloc(2)?;
//!     runtime::execute(&bell_kernel(), &q, 1024)?;
//!     Ok::<_, runtime::RuntimeError>(q.measurements().total())
//! });
//! assert_eq!(task.join().unwrap().unwrap(), 1024);
//! ```

mod accelerator;
mod buffer;
mod json;
mod manager;
mod registry;
mod task;

use std::sync::{Arc, LazyLock};

pub use accelerator::{get_accelerator, Accelerator, AcceleratorConfig, BACKENDS, WORKERS_ENV};
pub use buffer::AcceleratorBuffer;
pub use json::{buffer_from_json, buffer_to_json, BufferSnapshot};
pub use manager::{QpuManager, WorkerId};
pub use registry::BufferRegistry;
pub use task::{spawn, TaskHandle};

use crate::sim::{Circuit, SimError};

#[derive(Debug, thiserror::Error)]
pub enum RuntimeError {
    #[error("qalloc requires at least one qubit")]
    ZeroQubits,
    #[error("unknown accelerator backend '{0}'")]
    UnknownBackend(String),
    #[error("invalid accelerator config: {0}")]
    InvalidConfig(String),
    #[error("worker not initialized: call initialize_worker on this thread first")]
    WorkerNotInitialized,
    #[error("kernel '{kernel}' needs {needed} qubits but buffer '{buffer}' has {available}")]
    QubitMismatch {
        kernel: String,
        buffer: String,
        needed: usize,
        available: usize,
    },
    #[error("task handle already joined")]
    AlreadyJoined,
    #[error("task panicked: {0}")]
    TaskPanicked(String),
    #[error("malformed buffer JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Sim(#[from] SimError),
}

pub type Result<T, E = RuntimeError> = std::result::Result<T, E>;

/// Buffer registry plus per-worker accelerator map.
#[derive(Clone, Default)]
pub struct Runtime {
    registry: Arc<BufferRegistry>,
    qpus: Arc<QpuManager>,
}

static GLOBAL: LazyLock<Runtime> = LazyLock::new(Runtime::new);

impl Runtime {
    pub fn new() -> Self {
        Runtime::default()
    }

    /// The process-wide runtime used by the free functions.
    pub fn global() -> &'static Runtime {
        &GLOBAL
    }

    pub fn registry(&self) -> &BufferRegistry {
        &self.registry
    }

    pub fn qpus(&self) -> &QpuManager {
        &self.qpus
    }

    pub fn qalloc(&self, n: usize) -> Result<Arc<AcceleratorBuffer>> {
        self.registry.qalloc(n)
    }

    /// Creates a fresh accelerator and binds it to the calling worker,
    /// replacing any previous binding.
    pub fn initialize_worker(&self, backend: &str, config: &AcceleratorConfig) -> Result<()> {
        let acc = get_accelerator(backend, config)?;
        self.qpus.set_qpu(Arc::new(acc));
        Ok(())
    }

    /// The calling worker's accelerator.
    pub fn current_accelerator(&self) -> Result<Arc<Accelerator>> {
        self.qpus
            .get_qpu()
            .ok_or(RuntimeError::WorkerNotInitialized)
    }

    /// Runs `kernel` for `shots` shots on the caller's accelerator and adds
    /// the resulting counts into `buffer`.
    pub fn execute(&self, kernel: &Circuit, buffer: &AcceleratorBuffer, shots: u64) -> Result<()> {
        let acc = self.current_accelerator()?;
        if kernel.n_qubits() > buffer.size() {
            return Err(RuntimeError::QubitMismatch {
                kernel: kernel.name().to_owned(),
                buffer: buffer.name().to_owned(),
                needed: kernel.n_qubits(),
                available: buffer.size(),
            });
        }
        let counts = acc.run(kernel, shots)?;
        buffer.merge_measurements(&counts);
        Ok(())
    }

    /// Spawns a task that initializes its own worker with `backend`/`config`
    /// before running `f`, and drops the binding when `f` returns.
    pub fn spawn_initialized<F, T>(
        &self,
        backend: &str,
        config: AcceleratorConfig,
        f: F,
    ) -> TaskHandle<Result<T>>
    where
        F: FnOnce() -> Result<T> + Send + 'static,
        T: Send + 'static,
    {
        let rt = self.clone();
        let backend = backend.to_owned();
        spawn(move || {
            rt.initialize_worker(&backend, &config)?;
            let out = f();
            rt.qpus.remove(WorkerId::current());
            out
        })
    }

    /// Like [`Runtime::spawn_initialized`], inheriting the caller's backend
    /// and configuration. The child gets a seed derived from the parent's
    /// accelerator so sibling tasks sample independently.
    pub fn spawn_inheriting<F, T>(&self, f: F) -> Result<TaskHandle<Result<T>>>
    where
        F: FnOnce() -> Result<T> + Send + 'static,
        T: Send + 'static,
    {
        let parent = self.current_accelerator()?;
        let config = parent.child_config();
        Ok(self.spawn_initialized(parent.backend_name(), config, f))
    }
}

/// [`Runtime::qalloc`] on the global runtime.
pub fn qalloc(n: usize) -> Result<Arc<AcceleratorBuffer>> {
    Runtime::global().qalloc(n)
}

/// [`Runtime::initialize_worker`] on the global runtime.
pub fn initialize_worker(backend: &str, config: &AcceleratorConfig) -> Result<()> {
    Runtime::global().initialize_worker(backend, config)
}

/// [`Runtime::execute`] on the global runtime.
pub fn execute(kernel: &Circuit, buffer: &AcceleratorBuffer, shots: u64) -> Result<()> {
    Runtime::global().execute(kernel, buffer, shots)
}

/// Blocks on `handle` and returns the task's value.
pub fn join<T>(handle: &mut TaskHandle<T>) -> Result<T> {
    handle.join()
}
