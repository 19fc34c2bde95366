//! Thread-parallel execution with the same results as the serial path.

use rayon::prelude::*;
use stochastic_relaxation::estimators::{BlockExecutor, Moments};
use stochastic_relaxation::Result;

/// Runs sample blocks on the rayon pool. Block results are collected in block
/// order, so reductions match [`stochastic_relaxation::estimators::Serial`]
/// bit for bit.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rayon;

impl BlockExecutor for Rayon {
    fn map_blocks(&self, blocks: usize, job: &(dyn Fn(usize) -> Result<Moments> + Sync)) -> Vec<Result<Moments>> {
        (0..blocks).into_par_iter().map(job).collect()
    }
}

/// Applies `run` to every start concurrently; results keep the input order.
pub fn multistart<S, T, F>(starts: &[S], run: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(usize, &S) -> T + Sync,
{
    starts.par_iter().enumerate().map(|(i, s)| run(i, s)).collect()
}
