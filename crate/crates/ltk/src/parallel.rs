//! Fan-out of independent transfer evaluations over scoped threads.

use std::num::NonZeroUsize;
use std::thread;

use ltk_core::transfer::Psi;
use ltk_core::{GammaElement, LambdaElement};

/// Worker count: `LTK_THREADS` when set to a positive number, otherwise the
/// available parallelism.
pub fn thread_count() -> usize {
    let available = thread::available_parallelism().map_or(1, NonZeroUsize::get);
    match std::env::var("LTK_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        Some(n) if n > 0 => n,
        _ => available,
    }
}

/// `ψ` of every element, in input order. Each worker keeps its own memo.
pub fn psi_all(elements: &[GammaElement], threads: usize) -> Vec<LambdaElement> {
    let threads = threads.clamp(1, elements.len().max(1));
    if threads == 1 {
        let mut p = Psi::new();
        return elements.iter().map(|e| p.psi(e)).collect();
    }
    let chunk = elements.len().div_ceil(threads);
    thread::scope(|scope| {
        let workers: Vec<_> = elements
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    let mut p = Psi::new();
                    part.iter().map(|e| p.psi(e)).collect::<Vec<_>>()
                })
            })
            .collect();
        workers
            .into_iter()
            .flat_map(|w| w.join().expect("worker panicked"))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ltk_core::gamma::primitive_basis;

    #[test]
    fn parallel_matches_serial() {
        let prims = primitive_basis(4, 11);
        assert!(!prims.is_empty());
        assert_eq!(psi_all(&prims, 4), psi_all(&prims, 1));
        assert!(psi_all(&[], 3).is_empty());
    }
}
