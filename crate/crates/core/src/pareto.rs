//! Pareto dominance, crowding distance and the bounded external archive.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::WeightVector;
use crate::routing::ObjectivePoint;
use crate::scalar::Scalar;

/// Fraction of the archive, ranked by crowding distance, eligible as a global guide.
pub const GBEST_TOP_FRACTION: f64 = 0.1;

/// `a` is no worse than `b` on both objectives and strictly better on one.
pub fn dominates<T: Scalar>(a: &ObjectivePoint<T>, b: &ObjectivePoint<T>) -> bool {
    a.lambda_c >= b.lambda_c && a.h_avg <= b.h_avg && (a.lambda_c > b.lambda_c || a.h_avg < b.h_avg)
}

/// A weighting together with its objective values.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution<T> {
    pub weights: WeightVector<T>,
    pub objectives: ObjectivePoint<T>,
}

impl<T: Scalar> Solution<T> {
    pub fn new(weights: WeightVector<T>, objectives: ObjectivePoint<T>) -> Self {
        Self { weights, objectives }
    }
}

/// Crowding distance of each point.
///
/// For each objective the points are sorted; the two extremes get `+inf`
/// and every interior point adds `(next - prev) / (2 * range)`. A zero range
/// contributes nothing. For two objectives this is the mean normalized side
/// length of the cuboid spanned by a point's neighbours.
pub fn crowding_distances<T: Scalar>(points: &[ObjectivePoint<T>]) -> Vec<T> {
    let n = points.len();
    let mut dist = vec![T::zero(); n];
    if n <= 2 {
        return vec![T::infinity(); n];
    }
    let two = T::of(2.0);
    let mut idx: Vec<usize> = (0..n).collect();
    let keys: [fn(&ObjectivePoint<T>) -> T; 2] = [|p| p.lambda_c, |p| p.h_avg];
    for key in keys {
        idx.sort_by(|&a, &b| {
            key(&points[a])
                .partial_cmp(&key(&points[b]))
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        let lo = key(&points[idx[0]]);
        let hi = key(&points[idx[n - 1]]);
        dist[idx[0]] = T::infinity();
        dist[idx[n - 1]] = T::infinity();
        let range = hi - lo;
        if range <= T::zero() || !range.is_finite() {
            continue;
        }
        for w in idx.windows(3) {
            let gap = key(&points[w[2]]) - key(&points[w[0]]);
            dist[w[1]] = dist[w[1]] + gap / (two * range);
        }
    }
    dist
}

/// Indices of the points not dominated by any other point, in input order.
/// Points with identical objectives are all kept.
pub fn nondominated_indices<T: Scalar>(points: &[ObjectivePoint<T>]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| !points.iter().any(|q| dominates(q, &points[i])))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveEntry<T> {
    pub solution: Solution<T>,
    pub crowding: T,
}

/// Bounded set of mutually nondominated solutions.
///
/// Candidates whose objectives exactly match an incumbent are rejected so
/// that equivalent weightings do not crowd out distinct trade-offs.
#[derive(Debug, Clone, PartialEq)]
pub struct Archive<T> {
    entries: Vec<ArchiveEntry<T>>,
    capacity: usize,
}

impl<T: Scalar> Archive<T> {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1, "archive capacity must be positive");
        Self { entries: Vec::new(), capacity }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ArchiveEntry<T>] {
        &self.entries
    }

    pub fn objectives(&self) -> Vec<ObjectivePoint<T>> {
        self.entries.iter().map(|e| e.solution.objectives).collect()
    }

    pub fn solutions(&self) -> impl Iterator<Item = &Solution<T>> {
        self.entries.iter().map(|e| &e.solution)
    }

    pub fn into_solutions(self) -> Vec<Solution<T>> {
        self.entries.into_iter().map(|e| e.solution).collect()
    }

    /// Inserts nondominated candidates, evicts dominated incumbents, then
    /// truncates to capacity by repeatedly dropping the least crowded entry.
    /// Returns the number of candidates accepted.
    pub fn update(&mut self, candidates: impl IntoIterator<Item = Solution<T>>) -> usize {
        let mut accepted = 0;
        for cand in candidates {
            let c = &cand.objectives;
            if self
                .entries
                .iter()
                .any(|e| dominates(&e.solution.objectives, c) || e.solution.objectives == *c)
            {
                continue;
            }
            self.entries.retain(|e| !dominates(c, &e.solution.objectives));
            self.entries.push(ArchiveEntry { solution: cand, crowding: T::zero() });
            accepted += 1;
        }
        self.refresh_crowding();
        while self.entries.len() > self.capacity {
            let worst = self
                .entries
                .iter()
                .enumerate()
                .fold(0, |best, (i, e)| if e.crowding < self.entries[best].crowding { i } else { best });
            self.entries.remove(worst);
            self.refresh_crowding();
        }
        accepted
    }

    fn refresh_crowding(&mut self) {
        let d = crowding_distances(&self.objectives());
        for (e, c) in self.entries.iter_mut().zip(d) {
            e.crowding = c;
        }
    }

    /// Uniform pick among the top [`GBEST_TOP_FRACTION`] of entries by
    /// crowding distance (at least one). Equal distances are ordered at
    /// random so that both extremes of the front get used as guides.
    pub fn select_gbest<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<&WeightVector<T>> {
        if self.entries.is_empty() {
            return Err(Error::Empty("archive"));
        }
        let mut order: Vec<usize> = (0..self.entries.len()).collect();
        order.shuffle(rng);
        order.sort_by(|&a, &b| {
            self.entries[b]
                .crowding
                .partial_cmp(&self.entries[a].crowding)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let top = ((self.entries.len() as f64 * GBEST_TOP_FRACTION).ceil() as usize).max(1);
        let pick = order[rng.gen_range(0..top)];
        Ok(&self.entries[pick].solution.weights)
    }

    /// Every pair of entries is mutually nondominated.
    pub fn is_mutually_nondominated(&self) -> bool {
        let pts = self.objectives();
        pts.iter().all(|a| !pts.iter().any(|b| dominates(b, a)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pt(l: f64, h: f64) -> ObjectivePoint<f64> {
        ObjectivePoint::new(l, h)
    }

    fn sol(l: f64, h: f64, tag: f64) -> Solution<f64> {
        Solution::new(WeightVector::new(vec![tag]).unwrap(), pt(l, h))
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&pt(2.0, 1.0), &pt(1.0, 2.0)));
        assert!(!dominates(&pt(2.0, 1.0), &pt(2.0, 1.0)));
        assert!(!dominates(&pt(2.0, 2.0), &pt(1.0, 1.0)));
        assert!(!dominates(&pt(1.0, 1.0), &pt(2.0, 2.0)));
        assert!(dominates(&pt(2.0, 1.0), &pt(2.0, 1.5)));
    }

    #[test]
    fn crowding_examples() {
        assert_eq!(crowding_distances(&[pt(1.0, 1.0)]), vec![f64::INFINITY]);
        let d = crowding_distances(&[pt(0.0, 2.0), pt(1.0, 1.0), pt(2.0, 0.0)]);
        assert_eq!(d, vec![f64::INFINITY, 1.0, f64::INFINITY]);
        let d = crowding_distances(&[pt(0.0, 2.0), pt(1.0, 1.0), pt(1.0, 1.0), pt(2.0, 0.0)]);
        assert!(d[0].is_infinite() && d[3].is_infinite());
        assert_eq!((d[1], d[2]), (0.5, 0.5));
        let dup = crowding_distances(&[pt(1.0, 1.0), pt(1.0, 1.0), pt(1.0, 1.0)]);
        assert_eq!(dup[1], 0.0);
    }

    #[test]
    fn archive_insertion_rules() {
        let mut a = Archive::new(10);
        assert_eq!(a.update([sol(2.0, 1.0, 0.1)]), 1);
        assert_eq!(a.len(), 1);
        assert_eq!(a.update([sol(1.0, 2.0, 0.2)]), 0);
        assert_eq!(a.len(), 1);
        assert_eq!(a.update([sol(2.0, 1.0, 0.3)]), 0, "objective duplicates are rejected");
        assert_eq!(a.update([sol(3.0, 0.5, 0.4)]), 1);
        assert_eq!(a.len(), 1);
        assert_eq!(a.entries()[0].solution.objectives, pt(3.0, 0.5));
    }

    #[test]
    fn truncation_keeps_extremes() {
        let mut a = Archive::new(2);
        a.update([sol(0.0, 0.0, 0.1), sol(1.0, 1.0, 0.2), sol(2.0, 2.0, 0.3)]);
        let kept: Vec<_> = a.objectives().iter().map(|p| p.lambda_c).collect();
        assert_eq!(kept, vec![0.0, 2.0]);
        assert!(a.is_mutually_nondominated());
    }

    #[test]
    fn gbest_selection() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let empty = Archive::<f64>::new(3);
        assert!(empty.select_gbest(&mut rng).is_err());

        let mut a = Archive::new(30);
        a.update([sol(1.0, 1.0, 0.5)]);
        assert_eq!(a.select_gbest(&mut rng).unwrap()[0], 0.5);

        // 25 points on a line: extremes are infinite, the 23 interior points tie,
        // so the top 3 are both extremes plus one interior point.
        let mut a = Archive::new(30);
        a.update((0..25).map(|i| sol(i as f64, i as f64, (i + 1) as f64 / 25.0)));
        assert_eq!(a.len(), 25);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..400 {
            let w = a.select_gbest(&mut rng).unwrap()[0];
            seen.insert((w * 25.0).round() as i64);
        }
        assert!(seen.contains(&1) && seen.contains(&25));

        let pick = |seed| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            a.select_gbest(&mut r).unwrap().clone()
        };
        assert_eq!(pick(7), pick(7));
    }

    #[test]
    fn gbest_top_one_of_ten() {
        // Non-uniform spacing so one interior point is strictly most crowded-free.
        let mut a = Archive::new(10);
        let xs = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 5.0, 10.0];
        a.update(xs.iter().enumerate().map(|(i, &x)| sol(x, x, (i + 1) as f64 / 10.0)));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let w = a.select_gbest(&mut rng).unwrap()[0];
            assert!(w == 0.1 || w == 1.0, "only the two infinite-crowding extremes lead, got {w}");
        }
    }
}
