//! Index-ordered map that runs on rayon when the `parallel` feature is on.
//!
//! Work items must be pure functions of their index; results come back in
//! index order either way, so output does not depend on scheduling.

#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(range: std::ops::Range<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    range.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(range: std::ops::Range<usize>, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    range.map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_index_order() {
        let out = map_indexed(3..103, |i| i * i);
        assert_eq!(out.len(), 100);
        assert!(out.iter().enumerate().all(|(k, &v)| v == (k + 3) * (k + 3)));
    }
}
