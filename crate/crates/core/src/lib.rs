//! Numerical laboratory for Euler elements, causal symmetric spaces,
//! modular theory of standard subspaces and explicit Hardy-space models.

pub mod causal;
pub mod error;
pub mod hardy;
pub mod lie;
pub mod linalg;
pub mod modular;

pub use error::{Error, Result};

/// Environment variable that caps the worker threads used for sampling.
pub const THREADS_ENV: &str = "WEDGELAB_THREADS";

/// Runs `f` inside a rayon pool sized by `WEDGELAB_THREADS` when it is set.
///
/// Results never depend on the thread count: parallel work is seeded per index.
pub fn with_thread_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    match threads.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}
