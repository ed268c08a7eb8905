//! Run configuration and the process-wide memory accounting used to honor
//! the memory cap.

use std::alloc::{GlobalAlloc, Layout, System};
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::{CliError, CliResult};

/// Environment variable mirroring the memory cap flag.
pub const MEMORY_CAP_ENV: &str = "GHL_MEMORY_CAP_MB";

/// Execution knobs shared by every command. Identical configuration and
/// inputs must give byte-identical artifacts, so nothing here may influence
/// the mathematics — only scheduling and resource limits.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub workers: usize,
    pub memory_cap_mb: usize,
    pub output_format: OutputFormat,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            workers: 1,
            memory_cap_mb: 16 * 1024,
            output_format: OutputFormat::Text,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.workers < 1 {
            return Err(CliError::BadInput("workers must be at least 1".into()));
        }
        if self.memory_cap_mb < 1 {
            return Err(CliError::BadInput(
                "memory cap must be at least 1 MiB".into(),
            ));
        }
        Ok(())
    }

    /// A dedicated rayon pool with the configured worker count.
    pub fn pool(&self) -> rayon::ThreadPool {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .expect("thread pool")
    }
}

/// System allocator wrapper that tracks live bytes; installed as the global
/// allocator by the binary.
pub struct CountingAlloc;

static LIVE_BYTES: AtomicUsize = AtomicUsize::new(0);
static CAP_BYTES: AtomicUsize = AtomicUsize::new(usize::MAX);

unsafe impl GlobalAlloc for CountingAlloc {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            LIVE_BYTES.fetch_add(layout.size(), Ordering::Relaxed);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        LIVE_BYTES.fetch_sub(layout.size(), Ordering::Relaxed);
    }
}

/// Arms the cap checked by [`check_memory_cap`].
pub fn set_memory_cap_mb(cap_mb: usize) {
    CAP_BYTES.store(cap_mb.saturating_mul(1024 * 1024), Ordering::Relaxed);
}

pub fn live_mb() -> usize {
    LIVE_BYTES.load(Ordering::Relaxed) / (1024 * 1024)
}

/// Long-running drivers call this between work items.
pub fn check_memory_cap() -> CliResult<()> {
    let cap = CAP_BYTES.load(Ordering::Relaxed);
    let live = LIVE_BYTES.load(Ordering::Relaxed);
    if live > cap {
        return Err(CliError::ResourceCap {
            cap_mb: cap / (1024 * 1024),
            used_mb: live / (1024 * 1024),
        });
    }
    Ok(())
}
