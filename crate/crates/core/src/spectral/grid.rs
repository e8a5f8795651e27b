use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform `n × n` discretization of the periodic square `[0, 2π)²`.
///
/// Cloning is cheap: FFT plans are shared behind an `Arc`. Two grids compare
/// equal when they have the same number of points per axis.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

struct GridInner {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch_len: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGridSize(n));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Ok(Grid {
            inner: Arc::new(GridInner {
                n,
                forward,
                inverse,
                scratch_len,
            }),
        })
    }

    /// Points per axis.
    #[inline]
    pub fn n(&self) -> usize {
        self.inner.n
    }

    /// Total number of nodes, `n²`.
    #[inline]
    pub fn len(&self) -> usize {
        self.inner.n * self.inner.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn period(&self) -> f64 {
        2.0 * PI
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.inner.n as f64
    }

    /// Quadrature weight of one node.
    pub fn cell_area(&self) -> f64 {
        let h = self.spacing();
        h * h
    }

    /// Coordinate of node index `i` along either axis.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    /// Integer wavenumber stored at FFT index `idx`, in `-n/2+1..=n/2`.
    #[inline]
    pub fn wavenumber(&self, idx: usize) -> i64 {
        let n = self.inner.n;
        if idx <= n / 2 {
            idx as i64
        } else {
            idx as i64 - n as i64
        }
    }

    /// FFT index holding wavenumber `k`, if representable.
    #[inline]
    pub fn index_of(&self, k: i64) -> Option<usize> {
        let n = self.inner.n as i64;
        if k <= -n / 2 || k > n / 2 {
            return None;
        }
        Some(k.rem_euclid(n) as usize)
    }

    /// Inclusive wavenumber range `(-n/2 + 1, n/2)`.
    pub fn k_range(&self) -> (i64, i64) {
        let half = (self.inner.n / 2) as i64;
        (-half + 1, half)
    }

    /// Largest wavenumber kept by the 2/3 rule.
    pub fn dealias_cutoff(&self) -> i64 {
        (self.inner.n / 3) as i64
    }

    pub fn nyquist(&self) -> i64 {
        (self.inner.n / 2) as i64
    }

    /// Unnormalized 2D FFT in place; rows are contiguous along `x₁`.
    pub(crate) fn fft2(&self, buf: &mut [Complex64], forward: bool) {
        let n = self.inner.n;
        debug_assert_eq!(buf.len(), n * n);
        let plan = if forward {
            &self.inner.forward
        } else {
            &self.inner.inverse
        };
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.inner.scratch_len];
        plan.process_with_scratch(buf, &mut scratch);
        transpose_square(buf, n);
        plan.process_with_scratch(buf, &mut scratch);
        transpose_square(buf, n);
    }
}

fn transpose_square(buf: &mut [Complex64], n: usize) {
    for r in 0..n {
        for c in (r + 1)..n {
            buf.swap(r * n + c, c * n + r);
        }
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.inner.n == other.inner.n
    }
}

impl Eq for Grid {}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("n", &self.inner.n).finish()
    }
}

/// Builds the `n × n` periodic grid.
pub fn make_grid(n: usize) -> Result<Grid> {
    Grid::new(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n8_has_64_nodes_and_expected_range() {
        let g = make_grid(8).unwrap();
        assert_eq!(g.len(), 64);
        assert_eq!(g.k_range(), (-3, 4));
        let ks: Vec<i64> = (0..8).map(|i| g.wavenumber(i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, 4, -3, -2, -1]);
    }

    #[test]
    fn n256_nodes() {
        assert_eq!(make_grid(256).unwrap().len(), 65536);
    }

    #[test]
    fn rejects_bad_sizes() {
        for n in [0, 1, 4, 12, 100] {
            assert!(matches!(make_grid(n), Err(Error::InvalidGridSize(_))));
        }
    }

    #[test]
    fn index_roundtrip() {
        let g = make_grid(16).unwrap();
        for k in -7..=8 {
            assert_eq!(g.wavenumber(g.index_of(k).unwrap()), k);
        }
        assert!(g.index_of(-8).is_none());
        assert!(g.index_of(9).is_none());
    }
}
