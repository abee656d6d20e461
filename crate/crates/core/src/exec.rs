//! Execution strategy for the data-parallel parts of the library.
//!
//! Per-vertex rule evaluation, sub-disk enumeration and corpus sweeps are
//! embarrassingly parallel. With the `parallel` feature (on by default) they
//! run on the rayon pool; [`Strategy::Sequential`] forces a plain loop,
//! which the benches use as the baseline. Results never depend on the
//! strategy: every reduction is order-independent or re-sorted.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Strategy {
    /// `items.map(f)`, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Strategy::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Strategy::Parallel => items.par_iter().map(f).collect(),
        }
    }

    /// Like [`Strategy::map`] but stops at an error. When several items
    /// fail, the one with the smallest index is reported.
    pub fn try_map<T, R, E, F>(self, items: &[T], f: F) -> Result<Vec<R>, E>
    where
        T: Sync,
        R: Send,
        E: Send,
        F: Fn(&T) -> Result<R, E> + Sync + Send,
    {
        match self {
            Strategy::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Strategy::Parallel => {
                let results: Vec<Result<R, E>> = items.par_iter().map(f).collect();
                results.into_iter().collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = Strategy::Sequential.map(&xs, |x| x * x);
        let def = Strategy::default().map(&xs, |x| x * x);
        assert_eq!(seq, def);
        let err =
            Strategy::default().try_map(&xs, |&x| if x % 300 == 299 { Err(x) } else { Ok(x) });
        assert_eq!(err, Err(299));
    }
}
