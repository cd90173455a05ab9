//! From labeled treed bridges to pointed quadrangulations with a boundary.
//!
//! The trees are read in contour order around the bounded face of the
//! bridge cycle, ignoring the corners of cycle vertices that carry no tree.
//! Every corner is joined by an arc to its successor, the next corner whose
//! label is one less; corners of minimal label are joined to a new vertex
//! `rho`. The arcs, and nothing else, form the quadrangulation.

use thiserror::Error;

use crate::encoder::LabeledTreedBridge;
use crate::planemap::{HalfEdge, MapError, PlaneMap, PointedBoundaryQuad, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BijectionError {
    #[error("internal error in the bijection: {0}")]
    BijectionInternal(String),
    #[error("invalid treed bridge: {0}")]
    InvalidInput(String),
}

impl From<MapError> for BijectionError {
    fn from(e: MapError) -> Self {
        BijectionError::BijectionInternal(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corner {
    /// Index into `LabeledTreedBridge::trees`.
    pub tree: usize,
    /// Global tree-vertex id: trees in order, vertices in preorder.
    pub vertex: usize,
    pub slot: usize,
}

#[derive(Debug, Clone)]
pub struct CornerSequence {
    pub corners: Vec<Corner>,
    pub labels: Vec<i64>,
    pub lambda_star: i64,
    /// `None` stands for the corner of `rho`.
    pub successor: Vec<Option<usize>>,
    /// Corner range `first..=last` of each tree.
    pub tree_first: Vec<usize>,
    pub tree_last: Vec<usize>,
}

impl CornerSequence {
    pub fn new(ltb: &LabeledTreedBridge) -> Self {
        let mut corners = Vec::with_capacity(2 * ltb.edge_count() + ltb.perimeter() / 2);
        let mut labels = Vec::with_capacity(corners.capacity());
        let mut tree_first = Vec::new();
        let mut tree_last = Vec::new();
        let mut offset = 0;
        for (t, at) in ltb.trees().iter().enumerate() {
            tree_first.push(corners.len());
            for (v, slot) in at.tree.shape().contour() {
                corners.push(Corner { tree: t, vertex: offset + v, slot });
                labels.push(at.tree.labels()[v]);
            }
            tree_last.push(corners.len() - 1);
            offset += at.tree.shape().vertex_count();
        }
        let min = *labels.iter().min().expect("at least one tree");
        let max = *labels.iter().max().unwrap();
        let n = labels.len();

        // Nearest corner to the right with each label, over two periods.
        let mut nearest = vec![usize::MAX; (max - min + 1) as usize];
        let mut successor = vec![None; n];
        for k in (0..2 * n).rev() {
            let l = labels[k % n];
            if k < n && l > min {
                let s = nearest[(l - 1 - min) as usize];
                debug_assert!(s != usize::MAX);
                successor[k] = Some(s % n);
            }
            nearest[(l - min) as usize] = k;
        }
        CornerSequence { corners, labels, lambda_star: min - 1, successor, tree_first, tree_last }
    }

    pub fn len(&self) -> usize {
        self.corners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corners.is_empty()
    }
}

/// Output of the bijection together with the back-references into the
/// encoding object.
#[derive(Debug, Clone)]
pub struct EncodedQuad {
    pub quad: PointedBoundaryQuad,
    pub corners: CornerSequence,
    /// Label of each map vertex; `rho` carries `lambda_star`.
    pub vertex_label: Vec<i64>,
    /// Global tree-vertex id of each map vertex (`None` for `rho`).
    pub tree_vertex: Vec<Option<usize>>,
    /// Map vertex of each global tree vertex.
    pub map_vertex: Vec<Vertex>,
    /// Tree index of each global tree vertex.
    pub tree_of: Vec<usize>,
    /// Parent of each global tree vertex.
    pub parent: Vec<Option<usize>>,
    /// First corner index at each map vertex; the corner count for `rho`.
    pub first_corner: Vec<usize>,
    /// Boundary half-edge `j` runs from boundary corner `j` to `j + 1`.
    /// Half-edges `2k` and `2k + 1` are the two sides of the arc leaving
    /// corner `k`.
    pub boundary_half_edges: Vec<HalfEdge>,
}

impl EncodedQuad {
    pub fn lambda_star(&self) -> i64 {
        self.corners.lambda_star
    }

    pub fn shifted_label(&self, v: Vertex) -> i64 {
        self.vertex_label[v] - self.corners.lambda_star
    }

    /// Map vertex at the end of the arc leaving corner `k`.
    pub fn corner_vertex(&self, k: usize) -> Vertex {
        self.map_vertex[self.corners.corners[k].vertex]
    }

    /// `T(j)`: first corner at the vertex of boundary corner `j`, and
    /// `T(p)` = number of corners. A boundary corner at `rho` gets the
    /// number of corners as well.
    pub fn time_change_t(&self) -> Vec<usize> {
        let map = self.quad.map();
        let mut t: Vec<usize> = self.boundary_half_edges.iter().map(|&h| self.first_corner[map.origin(h)]).collect();
        t.push(self.corners.len());
        t
    }

    /// Leftmost geodesic from the vertex of corner `k` to `rho`, following
    /// successors.
    pub fn successor_path(&self, k: usize) -> Vec<Vertex> {
        let mut path = vec![self.corner_vertex(k)];
        let mut c = k;
        while let Some(s) = self.corners.successor[c] {
            path.push(self.corner_vertex(s));
            c = s;
        }
        path.push(self.quad.rho());
        path
    }
}

pub fn build_quadrangulation(ltb: &LabeledTreedBridge) -> Result<EncodedQuad, BijectionError> {
    let v = ltb.validate();
    if !v.is_ok() {
        return Err(BijectionError::InvalidInput(v.reasons.join("; ")));
    }
    let cs = CornerSequence::new(ltb);
    let n = cs.len();
    let total_vertices = ltb.vertex_count();

    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, s) in cs.successor.iter().enumerate() {
        if let Some(j) = *s {
            incoming[j].push(i);
        }
    }
    for (j, inc) in incoming.iter_mut().enumerate() {
        inc.sort_by_key(|&i| (j + n - i) % n);
    }

    // Clockwise order at each tree vertex: corner by corner, the incoming
    // arcs from the innermost out, then the outgoing arc.
    let mut clockwise: Vec<Vec<HalfEdge>> = vec![Vec::new(); total_vertices];
    let mut at_rho: Vec<HalfEdge> = Vec::new();
    for k in 0..n {
        let list = &mut clockwise[cs.corners[k].vertex];
        list.extend(incoming[k].iter().map(|&i| 2 * i + 1));
        list.push(2 * k);
        if cs.successor[k].is_none() {
            at_rho.push(2 * k + 1);
        }
    }

    let len = 2 * n;
    let twin: Vec<HalfEdge> = (0..len).map(|h| h ^ 1).collect();
    let mut next = vec![usize::MAX; len];
    for list in &clockwise {
        let d = list.len();
        for i in 0..d {
            next[list[i]] = list[(i + d - 1) % d];
        }
    }
    for i in 0..at_rho.len() {
        next[at_rho[i]] = at_rho[(i + 1) % at_rho.len()];
    }
    if next.contains(&usize::MAX) {
        return Err(BijectionError::BijectionInternal("unassigned rotation".into()));
    }

    // Boundary half-edges, cycle edge by cycle edge.
    let p = ltb.perimeter();
    let trees = ltb.trees();
    let mut boundary = vec![usize::MAX; p];
    for t in 0..trees.len() {
        let i = trees[t].at;
        let t2 = (t + 1) % trees.len();
        let k = if trees.len() == 1 { p } else { (trees[t2].at + p - i) % p };
        boundary[i] = 2 * cs.tree_last[t];
        let mut c = Some(cs.tree_first[t2]);
        for j in (1..k).rev() {
            let ci = c.ok_or_else(|| BijectionError::BijectionInternal("successor chain reached rho early".into()))?;
            boundary[(i + j) % p] = 2 * ci + 1;
            c = cs.successor[ci];
        }
    }

    let root = boundary[0];
    let map = PlaneMap::new(twin, next, root)?;
    for j in 0..p {
        if boundary[j] == usize::MAX || map.face_next(boundary[j]) != boundary[(j + 1) % p] {
            return Err(BijectionError::BijectionInternal(format!("cycle edge {j} does not follow the external face")));
        }
    }
    let rho = at_rho
        .first()
        .map(|&h| map.origin(h))
        .ok_or_else(|| BijectionError::BijectionInternal("no arc reaches rho".into()))?;
    let map = map.with_point(rho)?;
    let quad = PointedBoundaryQuad::new(map)?;
    let map = quad.map();
    if quad.perimeter() != p || quad.area() != ltb.edge_count() {
        return Err(BijectionError::BijectionInternal(format!(
            "built area {} perimeter {}, expected {} and {p}",
            quad.area(),
            quad.perimeter(),
            ltb.edge_count()
        )));
    }

    let vcount = map.vertex_count();
    let mut map_vertex = vec![usize::MAX; total_vertices];
    let mut first_corner = vec![n; vcount];
    for k in (0..n).rev() {
        let v = map.origin(2 * k);
        map_vertex[cs.corners[k].vertex] = v;
        first_corner[v] = k;
    }
    let mut tree_vertex = vec![None; vcount];
    let mut vertex_label = vec![cs.lambda_star; vcount];
    let mut tree_of = Vec::with_capacity(total_vertices);
    let mut parent = Vec::with_capacity(total_vertices);
    let mut g = 0;
    for (t, at) in trees.iter().enumerate() {
        let base = g;
        for (v, par) in at.tree.shape().parents().into_iter().enumerate() {
            let mv = map_vertex[g];
            tree_vertex[mv] = Some(g);
            vertex_label[mv] = at.tree.labels()[v];
            tree_of.push(t);
            parent.push(par.map(|x| base + x));
            g += 1;
        }
    }
    if vcount != total_vertices + 1 || tree_vertex[rho].is_some() {
        return Err(BijectionError::BijectionInternal("vertex correspondence broken".into()));
    }

    Ok(EncodedQuad {
        quad,
        corners: cs,
        vertex_label,
        tree_vertex,
        map_vertex,
        tree_of,
        parent,
        first_corner,
        boundary_half_edges: boundary,
    })
}

/// True iff every vertex lies at distance `label - lambda_star` from the
/// point.
pub fn labels_match_distances(quad: &PointedBoundaryQuad, labels: &[i64], lambda_star: i64) -> bool {
    let d = quad.distances_from_rho();
    labels.len() == d.len() && d.iter().zip(labels).all(|(&d, &l)| d as i64 == l - lambda_star)
}

pub fn verify_label_distance(enc: &EncodedQuad) -> bool {
    labels_match_distances(&enc.quad, &enc.vertex_label, enc.lambda_star())
}

/// Bridge and contour label processes on the grid `k / (points - 1)`.
pub fn label_processes(ltb: &LabeledTreedBridge, points: usize) -> (Vec<i64>, Vec<i64>) {
    assert!(points >= 2);
    let cs = CornerSequence::new(ltb);
    let p = ltb.perimeter();
    let bl = ltb.bridge().labels();
    let n = cs.len();
    let grid = |k: usize, scale: usize| (k * scale) / (points - 1);
    let b = (0..points).map(|k| bl[grid(k, p)]).collect();
    let l = (0..points).map(|k| cs.labels[grid(k, n - 1)]).collect();
    (b, l)
}
