//! Execution strategy for the data-parallel fan-outs (path enumeration,
//! permutation sums, state sums, identity checks).
//!
//! With the `parallel` feature the work is spread over rayon's pool; without
//! it, or with [`Exec::Sequential`], the same closures run in order. Both
//! paths reduce in input order, so results are identical.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
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
    /// Whether this strategy actually fans out in the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Size rayon's global pool; `0` keeps rayon's default. Has no effect in a
/// sequential build. Must run before any parallel work.
pub fn configure_threads(threads: usize) -> Result<(), String> {
    #[cfg(feature = "parallel")]
    if threads > 0 {
        return rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| e.to_string());
    }
    let _ = threads;
    Ok(())
}

/// Map preserving order.
pub fn map<T, U, F>(exec: Exec, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Map then fold with an associative `combine`; chunks are combined left to
/// right so non-commutative reductions stay deterministic.
pub fn map_reduce<T, U, F, I, C>(exec: Exec, items: &[T], identity: I, f: F, combine: C) -> U
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
    I: Fn() -> U + Sync + Send,
    C: Fn(U, U) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).reduce(&identity, &combine);
    }
    let _ = exec;
    items.iter().map(f).fold(identity(), combine)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = map(Exec::Sequential, &xs, |x| x * x);
        let b = map(Exec::Parallel, &xs, |x| x * x);
        assert_eq!(a, b);
        // string concatenation is associative but not commutative
        let s1 = map_reduce(Exec::Sequential, &xs, String::new, |x| x.to_string(), |a, b| a + &b);
        let s2 = map_reduce(Exec::Parallel, &xs, String::new, |x| x.to_string(), |a, b| a + &b);
        assert_eq!(s1, s2);
    }
}
