//! Rooted plane maps stored as half-edge permutations.
//!
//! A map is given by two permutations on half-edge ids: `twin`, a
//! fixed-point-free involution pairing the two halves of each edge, and
//! `next_at_vertex`, the counterclockwise rotation around the origin of each
//! half-edge. Faces are the orbits of `h -> next_at_vertex(twin(h))`, which
//! walks a face keeping it on the right-hand side. The root of a map with a
//! boundary therefore has the external face on its right.

mod canonical;
mod io;
mod metric;
mod submap;

pub use canonical::CanonicalCode;
pub use metric::{correspondence_distortion, DistortionError, FiniteMetric, MultiSourceBfs};
pub use submap::{one_edge_map, SubMap};

use std::collections::VecDeque;

use thiserror::Error;

pub type HalfEdge = usize;
pub type Vertex = usize;
pub type Face = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),
    #[error("map is disconnected")]
    Disconnected,
    #[error("not a plane map: V - E + F = {0}")]
    NonPlanar(i64),
    #[error("inner face {face} has degree {degree}")]
    NotQuadrangular { face: Face, degree: usize },
    #[error("map has no distinguished vertex")]
    Unpointed,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(Vertex),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone)]
pub struct PlaneMap {
    twin: Vec<HalfEdge>,
    next: Vec<HalfEdge>,
    root: HalfEdge,
    point: Option<Vertex>,
    vertex_of: Vec<Vertex>,
    face_of: Vec<Face>,
    vertex_start: Vec<usize>,
    vertex_half_edges: Vec<HalfEdge>,
    neighbors: Vec<u32>,
    face_start: Vec<usize>,
    face_half_edges: Vec<HalfEdge>,
}

/// Groups the orbits of `perm` into a CSR table. Orbit `k` is the one whose
/// smallest element is the `k`-th smallest among orbit minima, listed from
/// that minimum along `perm`.
fn orbits(perm: impl Fn(usize) -> usize, len: usize) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut id = vec![usize::MAX; len];
    let mut start = vec![0];
    let mut members = Vec::with_capacity(len);
    for h in 0..len {
        if id[h] != usize::MAX {
            continue;
        }
        let k = start.len() - 1;
        let mut x = h;
        loop {
            id[x] = k;
            members.push(x);
            x = perm(x);
            if x == h {
                break;
            }
        }
        start.push(members.len());
    }
    (id, start, members)
}

fn check_permutation(p: &[usize], what: &str) -> Result<(), MapError> {
    let mut seen = vec![false; p.len()];
    for (i, &x) in p.iter().enumerate() {
        if x >= p.len() {
            return Err(MapError::MalformedPermutation(format!("{what}[{i}] = {x} out of range")));
        }
        if std::mem::replace(&mut seen[x], true) {
            return Err(MapError::MalformedPermutation(format!("{what} hits {x} twice")));
        }
    }
    Ok(())
}

impl PlaneMap {
    pub fn new(twin: Vec<HalfEdge>, next: Vec<HalfEdge>, root: HalfEdge) -> Result<Self, MapError> {
        let len = twin.len();
        if len == 0 || len % 2 != 0 || next.len() != len {
            return Err(MapError::MalformedPermutation(format!("array lengths {} and {}", len, next.len())));
        }
        if root >= len {
            return Err(MapError::MalformedPermutation(format!("root {root} out of range")));
        }
        check_permutation(&twin, "twin")?;
        check_permutation(&next, "next_at_vertex")?;
        for (h, &t) in twin.iter().enumerate() {
            if t == h || twin[t] != h {
                return Err(MapError::MalformedPermutation(format!(
                    "twin is not a fixed-point-free involution at {h}"
                )));
            }
        }

        let (vertex_of, vertex_start, vertex_half_edges) = orbits(|h| next[h], len);
        let (face_of, face_start, face_half_edges) = orbits(|h| next[twin[h]], len);
        let neighbors = vertex_half_edges.iter().map(|&h| vertex_of[twin[h]] as u32).collect();
        let map = PlaneMap {
            twin,
            next,
            root,
            point: None,
            vertex_of,
            face_of,
            vertex_start,
            vertex_half_edges,
            neighbors,
            face_start,
            face_half_edges,
        };

        let dist = map.graph_distances(0);
        if dist.iter().any(|&d| d == u32::MAX) {
            return Err(MapError::Disconnected);
        }
        let chi = map.euler_characteristic();
        if chi != 2 {
            return Err(MapError::NonPlanar(chi));
        }
        Ok(map)
    }

    /// Builds a map from counterclockwise neighbour lists of a simple graph,
    /// rooted at the half-edge `root.0 -> root.1`.
    pub fn from_rotation_lists(rotations: &[Vec<Vertex>], root: (Vertex, Vertex)) -> Result<Self, MapError> {
        let mut start = Vec::with_capacity(rotations.len() + 1);
        start.push(0);
        for r in rotations {
            start.push(start.last().unwrap() + r.len());
        }
        let len = *start.last().unwrap();
        let find = |v: Vertex, w: Vertex| -> Result<HalfEdge, MapError> {
            rotations
                .get(v)
                .and_then(|r| r.iter().position(|&x| x == w))
                .map(|i| start[v] + i)
                .ok_or_else(|| MapError::MalformedPermutation(format!("no half-edge {v} -> {w}")))
        };
        let mut twin = vec![0; len];
        let mut next = vec![0; len];
        for (v, r) in rotations.iter().enumerate() {
            for (i, &w) in r.iter().enumerate() {
                twin[start[v] + i] = find(w, v)?;
                next[start[v] + i] = start[v] + (i + 1) % r.len();
            }
        }
        PlaneMap::new(twin, next, find(root.0, root.1)?)
    }

    pub fn with_point(mut self, v: Vertex) -> Result<Self, MapError> {
        if v >= self.vertex_count() {
            return Err(MapError::VertexOutOfRange(v));
        }
        self.point = Some(v);
        Ok(self)
    }

    pub fn without_point(mut self) -> Self {
        self.point = None;
        self
    }

    /// Same map and point, different root.
    pub fn rerooted(&self, root: HalfEdge) -> Self {
        assert!(root < self.half_edge_count());
        let mut m = self.clone();
        m.root = root;
        m
    }

    pub fn half_edge_count(&self) -> usize {
        self.twin.len()
    }

    pub fn edge_count(&self) -> usize {
        self.twin.len() / 2
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_start.len() - 1
    }

    pub fn face_count(&self) -> usize {
        self.face_start.len() - 1
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    pub fn root(&self) -> HalfEdge {
        self.root
    }

    pub fn point(&self) -> Option<Vertex> {
        self.point
    }

    pub fn twin(&self, h: HalfEdge) -> HalfEdge {
        self.twin[h]
    }

    pub fn next_at_vertex(&self, h: HalfEdge) -> HalfEdge {
        self.next[h]
    }

    /// Next half-edge along the face lying on the right of `h`.
    pub fn face_next(&self, h: HalfEdge) -> HalfEdge {
        self.next[self.twin[h]]
    }

    pub fn origin(&self, h: HalfEdge) -> Vertex {
        self.vertex_of[h]
    }

    pub fn target(&self, h: HalfEdge) -> Vertex {
        self.vertex_of[self.twin[h]]
    }

    /// Face on the right of `h`.
    pub fn face_of(&self, h: HalfEdge) -> Face {
        self.face_of[h]
    }

    pub fn twins(&self) -> &[HalfEdge] {
        &self.twin
    }

    pub fn rotation(&self) -> &[HalfEdge] {
        &self.next
    }

    /// Half-edges leaving `v`, in counterclockwise order.
    pub fn vertex_half_edges(&self, v: Vertex) -> &[HalfEdge] {
        &self.vertex_half_edges[self.vertex_start[v]..self.vertex_start[v + 1]]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.vertex_start[v + 1] - self.vertex_start[v]
    }

    pub fn neighbors(&self, v: Vertex) -> &[u32] {
        &self.neighbors[self.vertex_start[v]..self.vertex_start[v + 1]]
    }

    /// Half-edges having `f` on their right, in walking order.
    pub fn face_half_edges(&self, f: Face) -> &[HalfEdge] {
        &self.face_half_edges[self.face_start[f]..self.face_start[f + 1]]
    }

    pub fn face_degree(&self, f: Face) -> usize {
        self.face_start[f + 1] - self.face_start[f]
    }

    /// Vertices incident to face `f`, with repetition, in walking order.
    pub fn face_vertices(&self, f: Face) -> impl Iterator<Item = Vertex> + '_ {
        self.face_half_edges(f).iter().map(|&h| self.vertex_of[h])
    }

    pub fn graph_distances(&self, source: Vertex) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            for &w in self.neighbors(u) {
                let w = w as usize;
                if dist[w] == u32::MAX {
                    dist[w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Boundary walk along the face on the right of the root.
    pub fn boundary_walk(&self) -> BoundaryWalk {
        let mut corners = Vec::new();
        let mut h = self.root;
        loop {
            corners.push(BoundaryCorner { vertex: self.vertex_of[h], half_edge: h });
            h = self.face_next(h);
            if h == self.root {
                break;
            }
        }
        let mut seen = vec![false; self.vertex_count()];
        let simple = corners.iter().all(|c| !std::mem::replace(&mut seen[c.vertex], true));
        BoundaryWalk { corners, simple }
    }

    pub fn external_face(&self) -> Face {
        self.face_of[self.root]
    }

    /// Checks that every face other than the external one is a quadrangle
    /// and returns `(area, perimeter)`.
    pub fn quadrangulation_shape(&self) -> Result<(usize, usize), MapError> {
        let ext = self.external_face();
        for f in 0..self.face_count() {
            if f != ext && self.face_degree(f) != 4 {
                return Err(MapError::NotQuadrangular { face: f, degree: self.face_degree(f) });
            }
        }
        Ok((self.face_count() - 1, self.face_degree(ext)))
    }

    /// Orientation-reversed copy rooted so that the boundary numbering from
    /// the root tail is reversed: vertex `i` of the boundary becomes `p - i`.
    pub fn mirror(&self) -> PlaneMap {
        let mut prev = vec![0; self.next.len()];
        for (h, &n) in self.next.iter().enumerate() {
            prev[n] = h;
        }
        let mut last = self.root;
        while self.face_next(last) != self.root {
            last = self.face_next(last);
        }
        let root = self.twin[last];
        let m = PlaneMap::new(self.twin.clone(), prev, root).expect("mirror of a valid map");
        match self.point {
            Some(v) => m.with_point(v).expect("vertex ids are preserved"),
            None => m,
        }
    }

    /// Relabels half-edges by `perm` (old id -> new id).
    pub fn relabeled(&self, perm: &[HalfEdge]) -> PlaneMap {
        let len = self.half_edge_count();
        let mut twin = vec![0; len];
        let mut next = vec![0; len];
        for h in 0..len {
            twin[perm[h]] = perm[self.twin[h]];
            next[perm[h]] = perm[self.next[h]];
        }
        let m = PlaneMap::new(twin, next, perm[self.root]).expect("relabeling a valid map");
        match self.point {
            Some(v) => {
                let h = self.vertex_half_edges(v)[0];
                let w = m.origin(perm[h]);
                m.with_point(w).expect("vertex in range")
            }
            None => m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryCorner {
    pub vertex: Vertex,
    pub half_edge: HalfEdge,
}

#[derive(Debug, Clone)]
pub struct BoundaryWalk {
    pub corners: Vec<BoundaryCorner>,
    pub simple: bool,
}

impl BoundaryWalk {
    pub fn len(&self) -> usize {
        self.corners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corners.is_empty()
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.corners.iter().map(|c| c.vertex).collect()
    }
}

/// A plane map whose inner faces are quadrangles, rooted on the external
/// face and pointed at `rho`.
#[derive(Debug, Clone)]
pub struct PointedBoundaryQuad {
    map: PlaneMap,
    area: usize,
    perimeter: usize,
}

impl PointedBoundaryQuad {
    pub fn new(map: PlaneMap) -> Result<Self, MapError> {
        if map.point().is_none() {
            return Err(MapError::Unpointed);
        }
        let (area, perimeter) = map.quadrangulation_shape()?;
        Ok(PointedBoundaryQuad { map, area, perimeter })
    }

    pub fn map(&self) -> &PlaneMap {
        &self.map
    }

    pub fn into_map(self) -> PlaneMap {
        self.map
    }

    pub fn rho(&self) -> Vertex {
        self.map.point().expect("checked at construction")
    }

    pub fn area(&self) -> usize {
        self.area
    }

    pub fn perimeter(&self) -> usize {
        self.perimeter
    }

    pub fn external_face(&self) -> Face {
        self.map.external_face()
    }

    pub fn boundary_walk(&self) -> BoundaryWalk {
        self.map.boundary_walk()
    }

    pub fn canonical_code(&self) -> CanonicalCode {
        CanonicalCode::of(&self.map)
    }

    pub fn distances_from_rho(&self) -> Vec<u32> {
        self.map.graph_distances(self.rho())
    }
}
