//! Cutting a quadrangulation at the pinch vertices of its boundary, and the
//! core: the unique largest simple-boundary piece, provided it holds the
//! point.

use crate::planemap::{BoundaryWalk, Face, HalfEdge, MapError, PlaneMap, PointedBoundaryQuad, SubMap, Vertex};

#[derive(Debug, Clone)]
pub struct Component {
    /// Rooted at the first boundary edge met along the walk from the root.
    pub sub: SubMap,
    /// Positions in the boundary walk of `q` of the component's boundary
    /// edges, increasing.
    pub walk_positions: Vec<usize>,
    pub area: usize,
    pub perimeter: usize,
    pub contains_rho: bool,
}

#[derive(Debug, Clone)]
pub struct BoundaryDecomposition {
    /// Ordered by first walk position.
    pub components: Vec<Component>,
}

impl BoundaryDecomposition {
    pub fn total_area(&self) -> usize {
        self.components.iter().map(|c| c.area).sum()
    }

    pub fn total_perimeter(&self) -> usize {
        self.components.iter().map(|c| c.perimeter).sum()
    }
}

#[derive(Debug, Clone)]
pub struct Core {
    pub quad: PointedBoundaryQuad,
    /// Vertex of `q` for each core vertex.
    pub vertex_origin: Vec<Vertex>,
    /// Half-edge of `q` for each core half-edge.
    pub half_edge_origin: Vec<HalfEdge>,
    pub walk_positions: Vec<usize>,
}

impl Core {
    /// `J(i)`: first position in the boundary walk of `q` at the vertex of
    /// core boundary corner `i`.
    pub fn j_table(&self, q_walk: &BoundaryWalk) -> Vec<usize> {
        let mut first = std::collections::HashMap::new();
        for (j, c) in q_walk.corners.iter().enumerate() {
            first.entry(c.vertex).or_insert(j);
        }
        self.quad.boundary_walk().corners.iter().map(|c| first[&self.vertex_origin[c.vertex]]).collect()
    }
}

#[derive(Debug, Clone)]
pub enum CoreResult {
    Core(Box<Core>),
    Cemetery,
}

impl CoreResult {
    pub fn area(&self) -> usize {
        match self {
            CoreResult::Core(c) => c.quad.area(),
            CoreResult::Cemetery => 0,
        }
    }

    pub fn perimeter(&self) -> usize {
        match self {
            CoreResult::Core(c) => c.quad.perimeter(),
            CoreResult::Cemetery => 0,
        }
    }

    pub fn core(&self) -> Option<&Core> {
        match self {
            CoreResult::Core(c) => Some(c),
            CoreResult::Cemetery => None,
        }
    }
}

pub(crate) struct UnionFind(Vec<usize>);

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Splits the boundary walk into simple cycles with a stack of the vertices
/// on the current path.
fn boundary_cycles(walk: &BoundaryWalk) -> Vec<Vec<usize>> {
    let p = walk.len();
    let mut depth: std::collections::HashMap<Vertex, usize> = Default::default();
    let mut vertices = vec![walk.corners[0].vertex];
    let mut edges: Vec<usize> = Vec::new();
    depth.insert(walk.corners[0].vertex, 0);
    let mut cycles = Vec::new();
    for j in 0..p {
        let v = walk.corners[(j + 1) % p].vertex;
        edges.push(j);
        if let Some(&d) = depth.get(&v) {
            let mut cycle = edges.split_off(d);
            cycle.sort_unstable();
            for u in vertices.drain(d + 1..) {
                depth.remove(&u);
            }
            cycles.push(cycle);
        } else {
            depth.insert(v, vertices.len());
            vertices.push(v);
        }
    }
    debug_assert!(edges.is_empty() && vertices.len() == 1);
    cycles.sort_by_key(|c| c[0]);
    cycles
}

/// Classes of inner faces under adjacency through edges.
pub(crate) fn inner_face_classes(map: &PlaneMap, is_inner: impl Fn(Face) -> bool) -> UnionFind {
    let mut uf = UnionFind::new(map.face_count());
    for h in 0..map.half_edge_count() {
        let (f, g) = (map.face_of(h), map.face_of(map.twin(h)));
        if is_inner(f) && is_inner(g) {
            uf.union(f, g);
        }
    }
    uf
}

pub fn decompose(q: &PointedBoundaryQuad) -> Result<BoundaryDecomposition, MapError> {
    let map = q.map();
    let ext = q.external_face();
    let walk = q.boundary_walk();
    let rho = q.rho();
    let mut uf = inner_face_classes(map, |f| f != ext);
    let mut components = Vec::new();
    for cycle in boundary_cycles(&walk) {
        let hs: Vec<HalfEdge> = cycle.iter().map(|&j| walk.corners[j].half_edge).collect();
        let root = hs[0];
        let is_bridge = hs.len() == 2 && map.twin(hs[0]) == hs[1];
        let point_in = |verts: &[Vertex]| verts.contains(&rho);
        let (sub, area) = if is_bridge {
            let ends = [map.origin(root), map.target(root)];
            let pt = point_in(&ends).then_some(rho);
            let t = map.twin(root);
            (SubMap::extract(map, |h| h == root || h == t, root, pt)?, 0)
        } else {
            let class = uf.find(map.face_of(map.twin(root)));
            for &h in &hs {
                if uf.find(map.face_of(map.twin(h))) != class {
                    return Err(MapError::MalformedPermutation("boundary cycle touches two face classes".into()));
                }
            }
            let in_class: Vec<bool> = (0..map.face_count()).map(|f| f != ext && uf.find(f) == class).collect();
            let area = in_class.iter().filter(|&&b| b).count();
            let keep = |h: HalfEdge| in_class[map.face_of(h)] || in_class[map.face_of(map.twin(h))];
            let has_rho = map.vertex_half_edges(rho).iter().any(|&h| keep(h));
            (SubMap::extract(map, keep, root, has_rho.then_some(rho))?, area)
        };
        let w = sub.map.boundary_walk();
        if w.len() != hs.len() || !w.simple {
            return Err(MapError::MalformedPermutation("component boundary is not simple".into()));
        }
        components.push(Component {
            contains_rho: sub.map.point().is_some(),
            sub,
            walk_positions: cycle,
            area,
            perimeter: hs.len(),
        });
    }
    let d = BoundaryDecomposition { components };
    if d.total_area() != q.area() || d.total_perimeter() != q.perimeter() {
        return Err(MapError::MalformedPermutation("decomposition loses faces".into()));
    }
    Ok(d)
}

pub fn core(q: &PointedBoundaryQuad) -> Result<CoreResult, MapError> {
    let d = decompose(q)?;
    let max = d.components.iter().map(|c| c.area).max().unwrap_or(0);
    let mut largest = d.components.into_iter().filter(|c| c.area == max);
    let (Some(c), None) = (largest.next(), largest.next()) else {
        return Ok(CoreResult::Cemetery);
    };
    if !c.contains_rho {
        return Ok(CoreResult::Cemetery);
    }
    Ok(CoreResult::Core(Box::new(Core {
        quad: PointedBoundaryQuad::new(c.sub.map)?,
        vertex_origin: c.sub.vertex_origin,
        half_edge_origin: c.sub.half_edge_origin,
        walk_positions: c.walk_positions,
    })))
}

#[cfg(test)]
mod tests;
