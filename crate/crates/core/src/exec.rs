//! Data-parallel driver with a sequential fallback.
//!
//! With the `parallel` feature (default) the work runs on rayon; without it
//! everything is sequential. `ExecMode::Sequential` forces the fallback even
//! when the feature is enabled, which is how the bench suite compares the
//! two paths. Results are collected in index order, so outputs are identical
//! regardless of scheduling.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExecMode {
    /// Rayon when the `parallel` feature is on, sequential otherwise.
    #[default]
    Parallel,
    Sequential,
}

#[cfg(feature = "parallel")]
pub fn run_indexed<R, F>(n: usize, mode: ExecMode, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    use rayon::prelude::*;
    match mode {
        ExecMode::Parallel => (0..n).into_par_iter().map(f).collect(),
        ExecMode::Sequential => (0..n).map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn run_indexed<R, F>(n: usize, _mode: ExecMode, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree_and_preserve_order() {
        let par = run_indexed(100, ExecMode::Parallel, |i| i * i);
        let seq = run_indexed(100, ExecMode::Sequential, |i| i * i);
        assert_eq!(par, seq);
        assert_eq!(par[7], 49);
    }
}
