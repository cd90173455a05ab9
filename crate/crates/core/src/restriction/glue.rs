use rand::Rng;

use super::{Restriction, RestrictionError};
use crate::planemap::{one_edge_map, HalfEdge, PlaneMap, PointedBoundaryQuad, Vertex};

#[derive(Debug, Clone)]
pub struct Glued {
    pub map: PlaneMap,
    /// New vertex of each vertex of the base map.
    pub base_vertex: Vec<Vertex>,
    /// New vertex of each vertex of the filler.
    pub filler_vertex: Vec<Vertex>,
}

/// Identifies the boundary edges `s..s + k` of `base` with the last `k`
/// boundary edges of `filler`, traversed backwards. Both boundaries must be
/// simple and the root of `base` must stay on the boundary.
pub fn glue_along(base: &PlaneMap, s: usize, k: usize, filler: &PlaneMap) -> Result<Glued, RestrictionError> {
    let bw = base.boundary_walk();
    let fw = filler.boundary_walk();
    let (p, pf) = (bw.len(), fw.len());
    if !bw.simple || !fw.simple {
        return Err(RestrictionError::NonSimpleBoundary);
    }
    if k == 0 || k >= p || k >= pf || s == 0 || s + k > p {
        return Err(RestrictionError::PreconditionViolated(format!(
            "cannot glue {k} edges at {s} on perimeters {p} and {pf}"
        )));
    }
    let hb = base.half_edge_count();
    let total = hb + filler.half_edge_count();
    let l = pf - k;

    let mut removed = vec![false; total];
    let mut twin: Vec<HalfEdge> =
        (0..hb).map(|h| base.twin(h)).chain((0..filler.half_edge_count()).map(|h| hb + filler.twin(h))).collect();
    for j in 0..k {
        let g = bw.corners[s + j].half_edge;
        let e = hb + fw.corners[l + k - 1 - j].half_edge;
        removed[g] = true;
        removed[e] = true;
        let (tg, te) = (twin[g], twin[e]);
        twin[tg] = te;
        twin[te] = tg;
    }

    let mut next: Vec<HalfEdge> = (0..hb)
        .map(|h| base.next_at_vertex(h))
        .chain((0..filler.half_edge_count()).map(|h| hb + filler.next_at_vertex(h)))
        .collect();
    let mut merged_base = vec![None; base.vertex_count()];
    let mut merged_filler = vec![None; filler.vertex_count()];
    for j in 0..=k {
        let b0 = bw.corners[(s + j) % p].half_edge;
        let f0 = fw.corners[(l + k - j) % pf].half_edge;
        let mut cycle = Vec::new();
        let mut h = b0;
        loop {
            cycle.push(h);
            h = base.next_at_vertex(h);
            if h == b0 {
                break;
            }
        }
        let mut h = f0;
        loop {
            cycle.push(hb + h);
            h = filler.next_at_vertex(h);
            if h == f0 {
                break;
            }
        }
        cycle.retain(|&h| !removed[h]);
        let rep = *cycle.first().ok_or_else(|| RestrictionError::Internal("empty vertex after gluing".into()))?;
        merged_base[base.origin(b0)] = Some(rep);
        merged_filler[filler.origin(f0)] = Some(rep);
        for i in 0..cycle.len() {
            next[cycle[i]] = cycle[(i + 1) % cycle.len()];
        }
    }

    let mut new_id = vec![usize::MAX; total];
    let mut kept = Vec::with_capacity(total - 2 * k);
    for h in 0..total {
        if !removed[h] {
            new_id[h] = kept.len();
            kept.push(h);
        }
    }
    let map = PlaneMap::new(
        kept.iter().map(|&h| new_id[twin[h]]).collect(),
        kept.iter().map(|&h| new_id[next[h]]).collect(),
        new_id[base.root()],
    )?;
    let vertex_of = |hs: &[HalfEdge], offset: usize, merged: Option<HalfEdge>| {
        merged
            .or_else(|| hs.iter().map(|&h| offset + h).find(|&h| !removed[h]))
            .map(|h| map.origin(new_id[h]))
            .ok_or_else(|| RestrictionError::Internal("vertex lost in gluing".into()))
    };
    let base_vertex = (0..base.vertex_count())
        .map(|v| vertex_of(base.vertex_half_edges(v), 0, merged_base[v]))
        .collect::<Result<Vec<_>, _>>()?;
    let filler_vertex = (0..filler.vertex_count())
        .map(|v| vertex_of(filler.vertex_half_edges(v), hb, merged_filler[v]))
        .collect::<Result<Vec<_>, _>>()?;
    let map = match base.point() {
        Some(v) => map.with_point(base_vertex[v])?,
        None => map,
    };
    Ok(Glued { map, base_vertex, filler_vertex })
}

/// Glues `filler` on the common boundary of the restriction with its
/// complement. The filler is read from its root like the complement: first
/// the outer part, then the `p_in` edges of the common boundary.
pub fn complement_reglue(r: &Restriction, filler: &PlaneMap) -> Result<PointedBoundaryQuad, RestrictionError> {
    let found = filler.boundary_walk().len();
    if found <= r.p_in {
        return Err(RestrictionError::PerimeterMismatch { expected: r.p_in + 1, found });
    }
    let g = glue_along(r.map.map(), r.glue_start, r.p_in, filler)?;
    Ok(PointedBoundaryQuad::new(g.map)?)
}

/// Random quadrangulation with a simple boundary of the given perimeter and
/// area, grown from the one-edge map by gluing quadrangles along one, two or
/// three boundary edges, or a quadrangle folded around a pendant edge along
/// one boundary edge. Not uniform.
pub fn grow_simple_quad<R: Rng + ?Sized>(
    perimeter: usize,
    area: usize,
    rng: &mut R,
) -> Result<PlaneMap, RestrictionError> {
    if perimeter < 2 || perimeter % 2 == 1 || (area == 0 && perimeter != 2) || 2 * area + 2 < perimeter {
        return Err(RestrictionError::PreconditionViolated(format!(
            "no simple quadrangulation with perimeter {perimeter} and area {area}"
        )));
    }
    let square = PlaneMap::from_rotation_lists(&[vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]], (0, 1))?;
    let folded = PlaneMap::new(vec![1, 0, 3, 2, 5, 4], vec![4, 3, 0, 1, 2, 5], 0)?;
    // (edges glued, piece, perimeter change + 2)
    let moves = [(1, &square, 4), (2, &square, 2), (3, &square, 0), (1, &folded, 2)];
    let mut cur = one_edge_map();
    let (mut p, mut a) = (2usize, 0usize);
    while a < area {
        let left = area - a - 1;
        let options: Vec<_> = moves
            .iter()
            .filter(|&&(k, _, up)| {
                let np = p + up - 2;
                k < p && np >= 2 && np.abs_diff(perimeter) <= 2 * left
            })
            .collect();
        let &(k, piece, up) = options[rng.random_range(0..options.len())];
        let s = rng.random_range(1..=p - k);
        cur = glue_along(&cur, s, k, piece)?.map;
        p = p + up - 2;
        a += 1;
    }
    Ok(cur)
}
