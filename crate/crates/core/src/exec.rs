//! Execution policy for the data-parallel kernels.
//!
//! With the `parallel` feature (default) [`Exec::Parallel`] fans row-level
//! work out over rayon; without it every policy runs sequentially. Rows are
//! always computed independently and assembled in index order, so results do
//! not depend on the policy or the thread count.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// `f(i)` for `i in 0..n`, collected in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    /// Maximum of `f(i)` over `0..n`; NaN propagates.
    pub fn max<F>(self, n: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        self.map(n, f).into_iter().fold(0.0, nan_max)
    }
}

pub(crate) fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_agree() {
        let f = |i: usize| (i as f64).sin();
        assert_eq!(Exec::Sequential.map(100, f), Exec::Parallel.map(100, f));
        assert_eq!(Exec::Sequential.max(100, f), Exec::Parallel.max(100, f));
    }

    #[test]
    fn max_propagates_nan() {
        assert!(Exec::Sequential.max(3, |i| if i == 1 { f64::NAN } else { 1.0 }).is_nan());
    }
}
