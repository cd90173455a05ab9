use std::collections::HashSet;

use super::{Restriction, RestrictionError};
use crate::bijection::EncodedQuad;
use crate::coredec::Core;
use crate::encoder::LabeledTreedBridge;
use crate::planemap::{correspondence_distortion, Vertex};

/// Tree vertices read off the encoding around the complement of a
/// restriction of the core. Vertex sets are in the vertex ids of the
/// encoded map.
#[derive(Debug, Clone)]
pub struct CertificateSets {
    pub s: Vec<Vertex>,
    pub s_ge: Vec<Vertex>,
    pub s_eq: Vec<Vertex>,
    /// Smallest and largest shifted label over `s`, `None` when `s` is empty.
    pub m_low: Option<u32>,
    pub m_high: Option<u32>,
    /// `J(i-)` and `J(i+)`.
    pub j_range: (usize, usize),
    /// First common vertex of the successor geodesics from `v-` and `v+`.
    pub v_merge: Vertex,
    /// Smallest shifted label over the boundary corners spanning `I`.
    pub h: u32,
}

pub fn certificate_sets(
    enc: &EncodedQuad,
    ltb: &LabeledTreedBridge,
    core: &Core,
    r: &Restriction,
) -> Result<CertificateSets, RestrictionError> {
    if r.reversed {
        return Err(RestrictionError::PreconditionViolated("certificates are read in the direct numbering".into()));
    }
    let q = &enc.quad;
    if enc.tree_of.len() + 1 != q.map().vertex_count() || ltb.perimeter() != q.perimeter() {
        return Err(RestrictionError::MissingBackReferences("encoding does not match the map".into()));
    }
    let qwalk = q.boundary_walk();
    let j = core.j_table(&qwalk);
    let (jm, jp) = (j[r.i_minus], j[r.i_plus]);
    let rr = r.r;
    let lam = |g: usize| enc.shifted_label(enc.map_vertex[g]) as u32;

    let trees = ltb.trees();
    let mut anc_min = vec![u32::MAX; enc.tree_of.len()];
    let (mut s, mut s_ge, mut s_eq) = (Vec::new(), Vec::new(), Vec::new());
    let (mut m_low, mut m_high) = (None::<u32>, None::<u32>);
    for g in 0..enc.tree_of.len() {
        let l = lam(g);
        let above = enc.parent[g].map_or(u32::MAX, |p| anc_min[p]);
        anc_min[g] = l.min(above);
        let at = trees[enc.tree_of[g]].at;
        if at < jm || at >= jp {
            continue;
        }
        let v = enc.map_vertex[g];
        s.push(v);
        if anc_min[g] >= rr + 3 {
            s_ge.push(v);
        }
        if l == rr && above >= rr + 1 {
            s_eq.push(v);
        }
        m_low = Some(m_low.map_or(l, |m| m.min(l)));
        m_high = Some(m_high.map_or(l, |m| m.max(l)));
    }

    let t = enc.time_change_t();
    let geodesic = |k: usize| {
        if k >= enc.corners.len() {
            vec![q.rho()]
        } else {
            enc.successor_path(k)
        }
    };
    let gamma_plus: HashSet<Vertex> = geodesic(t[jp]).into_iter().collect();
    let v_merge =
        geodesic(t[jm]).into_iter().find(|v| gamma_plus.contains(v)).expect("both geodesics end at the point");

    let (a, b) = (r.scale.lower_cut(), r.scale.upper_cut());
    let h = (j[a]..=j[b]).map(|k| enc.shifted_label(qwalk.corners[k].vertex) as u32).min().expect("nonempty range");

    Ok(CertificateSets { s, s_ge, s_eq, m_low, m_high, j_range: (jm, jp), v_merge, h })
}

impl CertificateSets {
    /// Adds the tree rooted at `J(i+)` to `s`. The complement can contain
    /// part of that tree when two parallel edges leave `v+` towards the
    /// second vertex of its geodesic.
    pub fn with_tree_at_v_plus(&self, enc: &EncodedQuad, ltb: &LabeledTreedBridge) -> CertificateSets {
        let mut out = self.clone();
        let trees = ltb.trees();
        for g in 0..enc.tree_of.len() {
            if trees[enc.tree_of[g]].at != self.j_range.1 {
                continue;
            }
            let v = enc.map_vertex[g];
            let l = enc.shifted_label(v) as u32;
            out.s.push(v);
            out.m_low = Some(out.m_low.map_or(l, |m| m.min(l)));
            out.m_high = Some(out.m_high.map_or(l, |m| m.max(l)));
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BoundsReport {
    pub volume_lower: bool,
    pub volume_upper: bool,
    pub pin_bound: bool,
    pub s_ge_disjoint: bool,
    pub all_but_two_in_s: bool,
    pub h_identity: bool,
    pub alternation: bool,
    pub merge_in_restriction: bool,
    pub distortion: Option<u32>,
    pub gh_bound: bool,
}

impl BoundsReport {
    pub fn volume_sandwich(&self) -> bool {
        self.volume_lower && self.volume_upper
    }

    pub fn all_ok(&self) -> bool {
        self.volume_sandwich()
            && self.pin_bound
            && self.s_ge_disjoint
            && self.all_but_two_in_s
            && self.h_identity
            && self.alternation
            && self.merge_in_restriction
            && self.gh_bound
    }
}

/// Checks the volume, inner perimeter and distortion bounds. The distortion
/// of the correspondence is only computed when `with_distortion` is set;
/// otherwise `gh_bound` is reported as true.
pub fn check_bounds(
    enc: &EncodedQuad,
    core: &Core,
    r: &Restriction,
    certs: &CertificateSets,
    with_distortion: bool,
) -> BoundsReport {
    let q = &enc.quad;
    let nq = q.map().vertex_count();
    let mut in_s = vec![false; nq];
    for &v in &certs.s {
        in_s[v] = true;
    }
    let mut in_s_ge = vec![false; nq];
    for &v in &certs.s_ge {
        in_s_ge[v] = true;
    }
    let core_to_q = |v: Vertex| core.vertex_origin[v];
    let r_vertices: Vec<Vertex> = r.vertex_origin.iter().map(|&v| core_to_q(v)).collect();
    let c_vertices: Vec<Vertex> = r.complement_origin.iter().map(|&v| core_to_q(v)).collect();

    let area_core = core.quad.area() as i64;
    let area_r = r.area() as i64;
    let vr = r.map.map().vertex_count() as i64;
    let bound = (q.area() + q.perimeter() / 2 + 1) as i64 - certs.s_ge.len() as i64;
    let volume_lower = area_core - certs.s.len() as i64 <= area_r;
    let volume_upper = area_r <= vr && vr <= bound;
    let pin_bound = r.p_in <= 2 * (1 + certs.s_eq.len()) + 1;
    let s_ge_disjoint = r_vertices.iter().all(|&v| !in_s_ge[v]);
    let all_but_two_in_s = c_vertices.iter().filter(|&&v| !in_s[v]).count() <= 2;

    let lam = |v: Vertex| enc.shifted_label(v) as u32;
    let cwalk = core.quad.boundary_walk();
    let (a, b) = (r.scale.lower_cut(), r.scale.upper_cut());
    let min_i = (a..=b).map(|i| lam(core_to_q(cwalk.corners[i].vertex))).min().unwrap_or(0);
    let h_identity = (certs.h == r.r || certs.h == r.r + 1) && certs.h == min_i;

    let rwalk = r.map.boundary_walk();
    let pr = rwalk.len();
    let alternation = r.complete
        || (0..=r.p_in).all(|k| {
            let v = r_vertices[rwalk.corners[(r.glue_start + k) % pr].vertex];
            lam(v) == r.r || lam(v) == r.r + 1
        });

    let mut r_local = vec![None; nq];
    for (i, &v) in r_vertices.iter().enumerate() {
        r_local[v] = Some(i);
    }
    let merge_local = r_local[certs.v_merge];
    let merge_in_restriction = merge_local.is_some();

    let (distortion, gh_bound) = match (with_distortion, merge_local) {
        (true, Some(m)) => {
            let mut pairs: Vec<(Vertex, Vertex)> = r.vertex_origin.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            pairs.extend(r.complement_origin.iter().map(|&c| (c, m)));
            let d = correspondence_distortion(core.quad.map(), r.map.map(), &pairs).ok();
            let spread = match (certs.m_low, certs.m_high) {
                (Some(lo), Some(hi)) => hi - lo + 1,
                _ => 1,
            };
            (d, d.is_some_and(|d| d <= 2 * spread))
        }
        (true, None) => (None, false),
        (false, _) => (None, true),
    };

    BoundsReport {
        volume_lower,
        volume_upper,
        pin_bound,
        s_ge_disjoint,
        all_but_two_in_s,
        h_identity,
        alternation,
        merge_in_restriction,
        distortion,
        gh_bound,
    }
}
