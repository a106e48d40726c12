//! Front-quality indicators: hypervolume, IGD and set coverage.

use crate::error::{Error, Result};
use crate::pareto::dominates;
use crate::routing::ObjectivePoint;
use crate::scalar::Scalar;

/// Mutually nondominated, deduplicated objective points sorted by
/// descending `lambda_c`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Front<T> {
    points: Vec<ObjectivePoint<T>>,
}

fn same_point<T: Scalar>(a: &ObjectivePoint<T>, b: &ObjectivePoint<T>) -> bool {
    T::tie_eq(a.lambda_c, b.lambda_c) && T::tie_eq(a.h_avg, b.h_avg)
}

impl<T: Scalar> Front<T> {
    /// Keeps the nondominated points of `points`, merging near-duplicates.
    pub fn new(points: impl IntoIterator<Item = ObjectivePoint<T>>) -> Self {
        let all: Vec<_> = points.into_iter().collect();
        let mut kept: Vec<ObjectivePoint<T>> = Vec::new();
        for p in all.iter().filter(|p| !all.iter().any(|q| dominates(q, p))) {
            if !kept.iter().any(|k| same_point(k, p)) {
                kept.push(*p);
            }
        }
        kept.sort_by(|a, b| {
            b.lambda_c
                .partial_cmp(&a.lambda_c)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.h_avg.partial_cmp(&b.h_avg).unwrap_or(std::cmp::Ordering::Equal))
        });
        Self { points: kept }
    }

    pub fn points(&self) -> &[ObjectivePoint<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Worst corner of the compared fronts: lowest capacity, highest hop count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferencePoint<T> {
    pub lambda_c_floor: T,
    pub h_avg_ceiling: T,
}

impl<T: Scalar> ReferencePoint<T> {
    pub fn new(lambda_c_floor: T, h_avg_ceiling: T) -> Self {
        Self { lambda_c_floor, h_avg_ceiling }
    }

    /// `(min lambda_c, max h_avg)` over every point of every front.
    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a ObjectivePoint<T>>) -> Result<Self> {
        let mut it = points.into_iter().peekable();
        if it.peek().is_none() {
            return Err(Error::Empty("no points to derive a reference point from"));
        }
        let (lo, hi) = it.fold((T::infinity(), T::neg_infinity()), |(lo, hi), p| {
            (lo.min(p.lambda_c), hi.max(p.h_avg))
        });
        Ok(Self::new(lo, hi))
    }

    pub fn from_fronts(fronts: &[&Front<T>]) -> Result<Self> {
        Self::from_points(fronts.iter().flat_map(|f| f.points.iter()))
    }
}

/// Area dominated by `front` inside the box bounded by `reference`.
///
/// Points are swept in descending `lambda_c`; each adds the slab between its
/// capacity and the next lower one, as tall as the best hop count seen so far.
pub fn hypervolume<T: Scalar>(front: &Front<T>, reference: &ReferencePoint<T>) -> Result<T> {
    for p in &front.points {
        if p.lambda_c < reference.lambda_c_floor || p.h_avg > reference.h_avg_ceiling {
            return Err(Error::OutsideReference { lambda_c: p.lambda_c.as_f64(), h_avg: p.h_avg.as_f64() });
        }
    }
    let pts = &front.points;
    let mut area = T::zero();
    let mut best_h = T::infinity();
    for (i, p) in pts.iter().enumerate() {
        best_h = best_h.min(p.h_avg);
        let next = pts.get(i + 1).map_or(reference.lambda_c_floor, |q| q.lambda_c);
        area = area + (p.lambda_c - next) * (reference.h_avg_ceiling - best_h);
    }
    Ok(area)
}

fn distance<T: Scalar>(a: &ObjectivePoint<T>, b: &ObjectivePoint<T>) -> T {
    (a.lambda_c - b.lambda_c).hypot(a.h_avg - b.h_avg)
}

/// Mean over `truth` of the Euclidean distance to the nearest point of `approx`.
pub fn igd<T: Scalar>(approx: &Front<T>, truth: &Front<T>) -> Result<T> {
    if approx.is_empty() {
        return Err(Error::Empty("approximation front"));
    }
    if truth.is_empty() {
        return Err(Error::Empty("reference front"));
    }
    let total: T = truth
        .points
        .iter()
        .map(|t| approx.points.iter().map(|a| distance(a, t)).fold(T::infinity(), T::min))
        .sum();
    Ok(total / T::of(truth.len() as f64))
}

/// Fraction of `q` dominated by at least one point of `p`.
pub fn c_metric<T: Scalar>(p: &Front<T>, q: &Front<T>) -> Result<T> {
    if q.is_empty() {
        return Err(Error::Empty("covered front"));
    }
    let covered = q.points.iter().filter(|b| p.points.iter().any(|a| dominates(a, b))).count();
    Ok(T::of(covered as f64) / T::of(q.len() as f64))
}

/// Nondominated union of several fronts.
pub fn reference_front<T: Scalar>(fronts: &[&Front<T>]) -> Result<Front<T>> {
    if fronts.iter().all(|f| f.is_empty()) {
        return Err(Error::Empty("all fronts are empty"));
    }
    Ok(Front::new(fronts.iter().flat_map(|f| f.points.iter().copied())))
}
