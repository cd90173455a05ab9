use super::{HalfEdge, MapError, PlaneMap, Vertex};

/// A map extracted from a parent map, with back-references.
#[derive(Debug, Clone)]
pub struct SubMap {
    pub map: PlaneMap,
    /// Parent half-edge of each half-edge of `map`.
    pub half_edge_origin: Vec<HalfEdge>,
    /// Parent vertex of each vertex of `map`.
    pub vertex_origin: Vec<Vertex>,
}

impl SubMap {
    /// Keeps the half-edges selected by `keep` (closed under `twin`) with
    /// the induced rotation. `root` must be kept; `point` must be a parent
    /// vertex incident to a kept half-edge.
    pub fn extract(
        parent: &PlaneMap,
        keep: impl Fn(HalfEdge) -> bool,
        root: HalfEdge,
        point: Option<Vertex>,
    ) -> Result<SubMap, MapError> {
        let len = parent.half_edge_count();
        let mut new_id = vec![usize::MAX; len];
        let mut half_edge_origin = Vec::new();
        for h in 0..len {
            if keep(h) {
                new_id[h] = half_edge_origin.len();
                half_edge_origin.push(h);
            }
        }
        if new_id[root] == usize::MAX {
            return Err(MapError::MalformedPermutation("root not kept".into()));
        }
        let mut twin = Vec::with_capacity(half_edge_origin.len());
        let mut next = Vec::with_capacity(half_edge_origin.len());
        for &h in &half_edge_origin {
            let t = new_id[parent.twin(h)];
            if t == usize::MAX {
                return Err(MapError::MalformedPermutation("kept set not twin-closed".into()));
            }
            twin.push(t);
            let mut g = parent.next_at_vertex(h);
            while new_id[g] == usize::MAX {
                g = parent.next_at_vertex(g);
            }
            next.push(new_id[g]);
        }
        let map = PlaneMap::new(twin, next, new_id[root])?;
        let vertex_origin: Vec<Vertex> =
            (0..map.vertex_count()).map(|v| parent.origin(half_edge_origin[map.vertex_half_edges(v)[0]])).collect();
        let map = match point {
            Some(p) => {
                let v = vertex_origin.iter().position(|&w| w == p).ok_or(MapError::VertexOutOfRange(p))?;
                map.with_point(v)?
            }
            None => map,
        };
        Ok(SubMap { map, half_edge_origin, vertex_origin })
    }

    /// Position of parent vertex `v` in this submap.
    pub fn local_vertex(&self, v: Vertex) -> Option<Vertex> {
        self.vertex_origin.iter().position(|&w| w == v)
    }

    /// Table from parent vertices to local vertices.
    pub fn local_vertex_table(&self, parent_vertices: usize) -> Vec<Option<Vertex>> {
        let mut t = vec![None; parent_vertices];
        for (i, &w) in self.vertex_origin.iter().enumerate() {
            t[w] = Some(i);
        }
        t
    }
}

/// The map with one edge and two vertices, rooted at half-edge 0.
pub fn one_edge_map() -> PlaneMap {
    PlaneMap::new(vec![1, 0], vec![0, 1], 0).expect("one-edge map is valid")
}
