use thiserror::Error;

use super::{PlaneMap, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistortionError {
    #[error("relation misses point {index} of the {side} space")]
    NotACorrespondence { side: &'static str, index: usize },
    #[error("relation mentions point {index} outside the {side} space")]
    OutOfRange { side: &'static str, index: usize },
}

/// A finite metric space whose distance rows can be produced in batches.
pub trait MultiSourceBfs {
    fn point_count(&self) -> usize;

    /// Row-major `sources.len() x point_count()` distance table.
    /// At most 64 sources per call.
    fn distance_rows(&self, sources: &[usize]) -> Vec<u32>;
}

impl MultiSourceBfs for PlaneMap {
    fn point_count(&self) -> usize {
        self.vertex_count()
    }

    /// Breadth-first search from up to 64 sources at once, one bit per
    /// source.
    fn distance_rows(&self, sources: &[usize]) -> Vec<u32> {
        assert!(sources.len() <= 64);
        let n = self.vertex_count();
        let mut rows = vec![u32::MAX; sources.len() * n];
        let mut seen = vec![0u64; n];
        let mut frontier = vec![0u64; n];
        let mut next = vec![0u64; n];
        for (i, &s) in sources.iter().enumerate() {
            seen[s] |= 1 << i;
            frontier[s] |= 1 << i;
            rows[i * n + s] = 0;
        }
        let mut level = 0;
        loop {
            level += 1;
            let mut any = false;
            for v in 0..n {
                let mut acc = 0u64;
                for &w in self.neighbors(v) {
                    acc |= frontier[w as usize];
                }
                let fresh = acc & !seen[v];
                next[v] = fresh;
                if fresh != 0 {
                    any = true;
                    seen[v] |= fresh;
                    let mut bits = fresh;
                    while bits != 0 {
                        let i = bits.trailing_zeros() as usize;
                        rows[i * n + v] = level;
                        bits &= bits - 1;
                    }
                }
            }
            if !any {
                break;
            }
            std::mem::swap(&mut frontier, &mut next);
        }
        rows
    }
}

/// Explicit distance matrix; used for spaces that are not maps.
#[derive(Debug, Clone)]
pub struct FiniteMetric {
    n: usize,
    d: Vec<u32>,
}

impl FiniteMetric {
    pub fn new(n: usize, d: Vec<u32>) -> Self {
        assert_eq!(d.len(), n * n);
        FiniteMetric { n, d }
    }

    pub fn single_point() -> Self {
        FiniteMetric::new(1, vec![0])
    }
}

impl MultiSourceBfs for FiniteMetric {
    fn point_count(&self) -> usize {
        self.n
    }

    fn distance_rows(&self, sources: &[usize]) -> Vec<u32> {
        sources.iter().flat_map(|&s| self.d[s * self.n..(s + 1) * self.n].iter().copied()).collect()
    }
}

/// Distortion `max |d_A(x, x') - d_B(y, y')|` of a correspondence given as
/// a list of pairs `(x, y)`.
pub fn correspondence_distortion<A, B>(a: &A, b: &B, pairs: &[(Vertex, Vertex)]) -> Result<u32, DistortionError>
where
    A: MultiSourceBfs + ?Sized,
    B: MultiSourceBfs + ?Sized,
{
    let (na, nb) = (a.point_count(), b.point_count());
    let mut cover_a = vec![false; na];
    let mut cover_b = vec![false; nb];
    for &(x, y) in pairs {
        if x >= na {
            return Err(DistortionError::OutOfRange { side: "first", index: x });
        }
        if y >= nb {
            return Err(DistortionError::OutOfRange { side: "second", index: y });
        }
        cover_a[x] = true;
        cover_b[y] = true;
    }
    if let Some(index) = cover_a.iter().position(|c| !c) {
        return Err(DistortionError::NotACorrespondence { side: "first", index });
    }
    if let Some(index) = cover_b.iter().position(|c| !c) {
        return Err(DistortionError::NotACorrespondence { side: "second", index });
    }

    let mut pairs = pairs.to_vec();
    pairs.sort_unstable();
    pairs.dedup();
    let xs: Vec<u32> = pairs.iter().map(|p| p.0 as u32).collect();
    let ys: Vec<u32> = pairs.iter().map(|p| p.1 as u32).collect();

    let mut worst = 0u32;
    for batch in pairs.chunks(64) {
        let mut src_a: Vec<usize> = batch.iter().map(|p| p.0).collect();
        src_a.dedup();
        let mut src_b: Vec<usize> = batch.iter().map(|p| p.1).collect();
        src_b.sort_unstable();
        src_b.dedup();
        let rows_a = a.distance_rows(&src_a);
        let rows_b = b.distance_rows(&src_b);
        for &(x, y) in batch {
            let ia = src_a.binary_search(&x).expect("source present");
            let ib = src_b.binary_search(&y).expect("source present");
            let ra = &rows_a[ia * na..(ia + 1) * na];
            let rb = &rows_b[ib * nb..(ib + 1) * nb];
            let m = xs.iter().zip(&ys).map(|(&x2, &y2)| ra[x2 as usize].abs_diff(rb[y2 as usize])).max().unwrap_or(0);
            worst = worst.max(m);
        }
    }
    Ok(worst)
}
