use std::any::Any;
use std::sync::atomic::{AtomicU64, Ordering};
use std::thread::JoinHandle;

use super::{Result, RuntimeError};

static TASK_COUNTER: AtomicU64 = AtomicU64::new(0);

/// Handle to a spawned task. The value can be taken exactly once.
#[derive(Debug)]
pub struct TaskHandle<T> {
    handle: Option<JoinHandle<T>>,
}

impl<T> TaskHandle<T> {
    /// Blocks until the task finishes and returns its value. A second call
    /// returns [`RuntimeError::AlreadyJoined`]; a panic inside the task
    /// becomes [`RuntimeError::TaskPanicked`].
    pub fn join(&mut self) -> Result<T> {
        let handle = self.handle.take().ok_or(RuntimeError::AlreadyJoined)?;
        handle
            .join()
            .map_err(|payload| RuntimeError::TaskPanicked(panic_message(payload.as_ref())))
    }

    /// Future-style alias for [`TaskHandle::join`].
    pub fn get(&mut self) -> Result<T> {
        self.join()
    }

    pub fn is_finished(&self) -> bool {
        self.handle.as_ref().is_none_or(JoinHandle::is_finished)
    }

    pub fn is_joined(&self) -> bool {
        self.handle.is_none()
    }
}

fn panic_message(payload: &(dyn Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_owned()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "non-string panic payload".to_owned()
    }
}

/// Runs `task` on a new thread. The task may call any runtime function; it
/// must initialize its own worker before executing kernels.
pub fn spawn<F, T>(task: F) -> TaskHandle<T>
where
    F: FnOnce() -> T + Send + 'static,
    T: Send + 'static,
{
    let id = TASK_COUNTER.fetch_add(1, Ordering::Relaxed);
    let handle = std::thread::Builder::new()
        .name(format!("qcrt-task-{id}"))
        .spawn(task)
        .expect("failed to spawn task thread");
    TaskHandle {
        handle: Some(handle),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn join_returns_value_once() {
        let mut h = spawn(|| 1);
        assert_eq!(h.join().unwrap(), 1);
        assert!(h.is_joined());
        assert!(matches!(h.join(), Err(RuntimeError::AlreadyJoined)));
    }

    #[test]
    fn panic_surfaces_on_join() {
        let mut h = spawn(|| -> i32 { panic!("boom") });
        match h.get() {
            Err(RuntimeError::TaskPanicked(msg)) => assert_eq!(msg, "boom"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
