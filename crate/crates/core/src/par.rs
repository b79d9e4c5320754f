//! Frame-level data parallelism. With the `parallel` feature the work runs
//! on a rayon pool; without it everything is sequential. Results always come
//! back in index order.

use crate::error::Result;
use crate::frame::{encode_and_send, recv_and_decode, FrameEnvelope, ReceiveReport, Session};
use crate::ring::RingElement;

/// Thread cap from `PFEC_THREADS`; unset, empty or zero means no cap.
pub fn thread_cap() -> Option<usize> {
    std::env::var("PFEC_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

/// `f(0), ..., f(n-1)` honouring `PFEC_THREADS`.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_indexed_with(thread_cap(), n, f)
}

#[cfg(feature = "parallel")]
pub fn map_indexed_with<T, F>(threads: Option<usize>, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    match threads {
        Some(1) => (0..n).map(f).collect(),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| (0..n).into_par_iter().map(&f).collect()),
            Err(_) => (0..n).map(f).collect(),
        },
        None => (0..n).into_par_iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed_with<T, F>(_threads: Option<usize>, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Frame `i` of the batch gets frame index `first_index + i`.
pub fn encode_batch(session: &Session, messages: &[RingElement], first_index: u64, threads: Option<usize>) -> Result<Vec<FrameEnvelope>> {
    map_indexed_with(threads, messages.len(), |i| {
        encode_and_send(&messages[i], session, first_index + i as u64)
    })
    .into_iter()
    .collect()
}

pub fn decode_batch(session: &Session, frames: &[FrameEnvelope], threads: Option<usize>) -> Vec<Result<ReceiveReport>> {
    map_indexed_with(threads, frames.len(), |i| recv_and_decode(&frames[i], session))
}
