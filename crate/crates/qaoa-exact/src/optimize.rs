//! Angle search over analytic evaluators: dense grid scans for landscape
//! export and a derivative-free coordinate pattern search for refinement.
//! Maximization convention throughout.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// One scan axis: a named parameter swept over an inclusive linear range.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisSpec<T> {
    pub name: String,
    pub start: T,
    pub stop: T,
    pub count: usize,
}

impl<T: Real> AxisSpec<T> {
    pub fn value_at(&self, i: usize) -> T {
        let steps = T::from_usize(self.count - 1).unwrap();
        let t = T::from_usize(i).unwrap() / steps;
        self.start + (self.stop - self.start) * t
    }
}

/// Dense scan result: row-major values over the axis grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Landscape<T> {
    pub axes: Vec<AxisSpec<T>>,
    pub values: Vec<T>,
}

impl<T: Real> Landscape<T> {
    /// Grid point (indices and parameter values) of the maximum value; the
    /// first occurrence in row-major order wins ties.
    pub fn argmax(&self) -> (Vec<usize>, Vec<T>, T) {
        let mut best = 0usize;
        for (i, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = i;
            }
        }
        let indices = self.unravel(best);
        let point = indices
            .iter()
            .zip(&self.axes)
            .map(|(&i, ax)| ax.value_at(i))
            .collect();
        (indices, point, self.values[best])
    }

    fn unravel(&self, flat: usize) -> Vec<usize> {
        let mut rem = flat;
        let mut out = vec![0; self.axes.len()];
        for (k, ax) in self.axes.iter().enumerate().rev() {
            out[k] = rem % ax.count;
            rem /= ax.count;
        }
        out
    }
}

/// Default cap on the total number of grid evaluations.
pub const DEFAULT_GRID_CAP: usize = 1 << 20;

/// Exhaustively evaluates `f` over the grid, row-major in axis declaration
/// order. Each axis binds one scalar of the parameter point.
pub fn grid_scan<T: Real>(
    axes: Vec<AxisSpec<T>>,
    cap: usize,
    mut f: impl FnMut(&[T]) -> Result<T>,
) -> Result<Landscape<T>> {
    if axes.is_empty() || axes.len() > 3 {
        return Err(Error::AxisCount { got: axes.len() });
    }
    for ax in &axes {
        if ax.count < 2 {
            return Err(Error::DegenerateAxis);
        }
    }
    let points: usize = axes.iter().map(|a| a.count).product();
    if points > cap {
        return Err(Error::TooManyPoints { points, cap });
    }
    let mut values = Vec::with_capacity(points);
    let mut idx = vec![0usize; axes.len()];
    let mut point = vec![T::zero(); axes.len()];
    loop {
        for (k, ax) in axes.iter().enumerate() {
            point[k] = ax.value_at(idx[k]);
        }
        values.push(f(&point)?);
        // row-major increment: last axis fastest
        let mut k = axes.len();
        loop {
            if k == 0 {
                return Ok(Landscape { axes, values });
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < axes[k].count {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Result of a pattern-search refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct Refined<T> {
    pub point: Vec<T>,
    pub value: T,
    pub evaluations: usize,
}

/// Coordinate-wise pattern search maximization: probe +/- step on each
/// coordinate, accept strict improvements, halve all steps when a full sweep
/// fails, halt when every step is below `tol`. Deterministic, and the
/// returned value never falls below the start value.
pub fn refine<T: Real>(
    start: &[T],
    initial_step: T,
    tol: T,
    mut f: impl FnMut(&[T]) -> Result<T>,
) -> Result<Refined<T>> {
    let mut point = start.to_vec();
    let mut value = f(&point)?;
    let mut evaluations = 1usize;
    let mut steps = vec![initial_step; point.len()];
    let half = lit::<T>(0.5);
    loop {
        let mut improved = false;
        for k in 0..point.len() {
            for dir in [T::one(), -T::one()] {
                let mut probe = point.clone();
                probe[k] += dir * steps[k];
                let v = f(&probe)?;
                evaluations += 1;
                if v > value {
                    point = probe;
                    value = v;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            for s in &mut steps {
                *s *= half;
            }
            if steps.iter().all(|s| *s < tol) {
                return Ok(Refined {
                    point,
                    value,
                    evaluations,
                });
            }
        }
    }
}
