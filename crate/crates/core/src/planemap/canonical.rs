use std::collections::VecDeque;
use std::fmt;

use super::{PlaneMap, Vertex};

/// Isomorphism invariant of a rooted (optionally pointed and marked) map.
///
/// Half-edges are ranked by a breadth-first search from the root that
/// visits `next_at_vertex(h)` before `twin(h)`. The code lists the half-edge
/// count, then `(rank of twin, rank of next)` for each rank, then the rank of
/// the point and of each marked vertex. A vertex is named by the smallest
/// rank among its half-edges.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Box<[u32]>);

impl CanonicalCode {
    pub fn of(map: &PlaneMap) -> Self {
        Self::with_marks(map, &[])
    }

    pub fn with_marks(map: &PlaneMap, marks: &[Vertex]) -> Self {
        let len = map.half_edge_count();
        let mut rank = vec![u32::MAX; len];
        let mut order = Vec::with_capacity(len);
        let mut queue = VecDeque::new();
        rank[map.root()] = 0;
        order.push(map.root());
        queue.push_back(map.root());
        while let Some(h) = queue.pop_front() {
            for g in [map.next_at_vertex(h), map.twin(h)] {
                if rank[g] == u32::MAX {
                    rank[g] = order.len() as u32;
                    order.push(g);
                    queue.push_back(g);
                }
            }
        }
        debug_assert_eq!(order.len(), len);

        let vertex_rank =
            |v: Vertex| map.vertex_half_edges(v).iter().map(|&h| rank[h]).min().expect("vertices have half-edges");

        let mut code = Vec::with_capacity(2 * len + 2 + marks.len());
        code.push(len as u32);
        for &h in &order {
            code.push(rank[map.twin(h)]);
            code.push(rank[map.next_at_vertex(h)]);
        }
        match map.point() {
            Some(v) => code.push(vertex_rank(v)),
            None => code.push(u32::MAX),
        }
        code.extend(marks.iter().map(|&v| vertex_rank(v)));
        CanonicalCode(code.into_boxed_slice())
    }

    /// Code of the same rooted map with the point forgotten.
    pub fn unpointed(&self) -> Self {
        let len = self.0[0] as usize;
        let mut v = self.0[..1 + 2 * len].to_vec();
        v.push(u32::MAX);
        CanonicalCode(v.into_boxed_slice())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|x| x.to_le_bytes()).collect()
    }

    pub fn from_bytes(bytes: &[u8]) -> Option<Self> {
        if bytes.len() % 4 != 0 {
            return None;
        }
        let v: Vec<u32> = bytes.chunks_exact(4).map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]])).collect();
        Some(CanonicalCode(v.into_boxed_slice()))
    }

    /// Compact text form used by on-disk caches.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            if *x == u32::MAX {
                s.push('-');
            } else {
                s.push_str(&x.to_string());
            }
        }
        s
    }

    pub fn from_text(s: &str) -> Option<Self> {
        s.split(',')
            .map(|t| if t == "-" { Some(u32::MAX) } else { t.parse().ok() })
            .collect::<Option<Vec<u32>>>()
            .map(|v| CanonicalCode(v.into_boxed_slice()))
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({})", self.to_text())
    }
}
