//! Sequential and data-parallel execution of independent work items.
//!
//! Results are always returned in index order, so reports and frozen values
//! do not depend on the strategy or the thread count.

/// How independent items are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    Sequential,
    /// Rayon work-stealing; identical to `Sequential` without the `parallel`
    /// feature.
    #[default]
    Parallel,
}

impl Strategy {
    /// Map `f` over `0..n`, preserving order.
    pub fn map_range<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Strategy::Sequential => (0..n).map(f).collect(),
            Strategy::Parallel => par_map_range(n, f),
        }
    }

    /// Map `f` over a slice, preserving order.
    pub fn map_slice<'a, S, T, F>(self, items: &'a [S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&'a S) -> T + Sync + Send,
    {
        self.map_range(items.len(), |i| f(&items[i]))
    }

    /// First index (in order) for which `f` yields `Some`, with its payload.
    pub fn find_first<T, F>(self, n: usize, f: F) -> Option<(usize, T)>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        match self {
            Strategy::Sequential => (0..n).find_map(|i| f(i).map(|t| (i, t))),
            Strategy::Parallel => par_find_first(n, f),
        }
    }
}

#[cfg(feature = "parallel")]
fn par_map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
fn par_find_first<T, F>(n: usize, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().find_map_first(|i| f(i).map(|t| (i, t)))
}

#[cfg(not(feature = "parallel"))]
fn par_find_first<T, F>(n: usize, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    (0..n).find_map(|i| f(i).map(|t| (i, t)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_and_preserve_order() {
        let f = |i: usize| i * i + 1;
        let a = Strategy::Sequential.map_range(1000, f);
        let b = Strategy::Parallel.map_range(1000, f);
        assert_eq!(a, b);
        assert_eq!(a[10], 101);
    }

    #[test]
    fn find_first_is_lowest_index() {
        let f = |i: usize| if i % 97 == 13 { Some(i) } else { None };
        assert_eq!(Strategy::Parallel.find_first(10_000, f), Some((13, 13)));
        assert_eq!(Strategy::Sequential.find_first(10_000, f), Some((13, 13)));
        assert_eq!(Strategy::Parallel.find_first(10, |_| None::<()>), None);
    }
}
