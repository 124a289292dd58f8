//! Exact combinatorics on finite projective planes and their Levi graphs.
//!
//! Builds `PG(2, q)` over any prime-power field, counts cycles and quasi-polygons
//! exactly, and checks counting polynomials and bounds against exact data.

pub mod bitset;
pub mod cycles;
pub mod gf;
pub mod levi;
pub mod plane;
pub mod poly;
pub mod quasigon;

/// Runs `f` inside a rayon pool of `threads` workers; `0` uses the global pool.
pub(crate) fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    if threads == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}
