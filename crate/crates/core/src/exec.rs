//! Execution policy for the data-parallel loops (operator assembly, field
//! grids, far-field sweeps).
//!
//! Every parallel loop writes into disjoint output slots and never reduces
//! across threads, so results are bit-identical under both policies.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Uses the rayon thread pool. Without the `parallel` feature this runs
    /// sequentially.
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
    /// Calls `f(index, chunk)` for every `chunk_len`-sized chunk of `data`.
    pub fn for_each_chunk<T, F>(self, data: &mut [T], chunk_len: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                data.par_chunks_mut(chunk_len)
                    .enumerate()
                    .for_each(|(i, c)| f(i, c));
            }
            _ => data
                .chunks_mut(chunk_len)
                .enumerate()
                .for_each(|(i, c)| f(i, c)),
        }
    }

    /// Collects `f(0), f(1), ..., f(len - 1)` in order.
    pub fn map<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..len).into_par_iter().map(f).collect()
            }
            _ => (0..len).map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_agree() {
        let f = |i: usize| (i as f64).sqrt().sin();
        assert_eq!(Exec::Sequential.map(1000, f), Exec::Parallel.map(1000, f));

        let mut a = vec![0.0; 120];
        let mut b = vec![0.0; 120];
        let g = |i: usize, c: &mut [f64]| {
            for (k, v) in c.iter_mut().enumerate() {
                *v = (i * 7 + k) as f64;
            }
        };
        Exec::Sequential.for_each_chunk(&mut a, 12, g);
        Exec::Parallel.for_each_chunk(&mut b, 12, g);
        assert_eq!(a, b);
    }
}
