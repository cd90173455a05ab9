//! Balls around the point, the restriction of a simple-boundary
//! quadrangulation to the hull of the first ball reaching a third of the
//! way around the boundary, and its complement.

mod certificates;
mod glue;

pub use certificates::{certificate_sets, check_bounds, BoundsReport, CertificateSets};
pub use glue::{complement_reglue, glue_along, grow_simple_quad, Glued};

use thiserror::Error;

use crate::coredec::inner_face_classes;
use crate::counting::perimeter_sequence;
use crate::planemap::{
    one_edge_map, CanonicalCode, Face, HalfEdge, MapError, PlaneMap, PointedBoundaryQuad, SubMap, Vertex,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RestrictionError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("boundary is not simple")]
    NonSimpleBoundary,
    #[error("filler perimeter {found}, expected {expected}")]
    PerimeterMismatch { expected: usize, found: usize },
    #[error("input is the cemetery")]
    CemeteryInput,
    #[error("missing back-references: {0}")]
    MissingBackReferences(String),
    #[error("internal error in the restriction: {0}")]
    Internal(String),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Scale of the construction: `n`, the perimeter `p_n` and `eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scale {
    pub n: usize,
    pub p_n: usize,
    pub eps: f64,
}

impl Scale {
    pub fn new(n: usize, alpha: f64, eps: f64) -> Self {
        Scale { n, p_n: perimeter_sequence(n as u64, alpha) as usize, eps }
    }

    pub fn with_perimeter(n: usize, p_n: usize, eps: f64) -> Self {
        Scale { n, p_n, eps }
    }

    /// `floor((1/3 - eps) p_n)`.
    pub fn lower_cut(&self) -> usize {
        ((1.0 / 3.0 - self.eps) * self.p_n as f64 + 1e-9).floor().max(0.0) as usize
    }

    /// `floor(p_n / 3)`.
    pub fn upper_cut(&self) -> usize {
        self.p_n / 3
    }
}

#[derive(Debug, Clone)]
pub struct Restriction {
    /// Rooted at the root of `q` and pointed at its point.
    pub map: PointedBoundaryQuad,
    /// Vertex of `q` for each vertex of `map`.
    pub vertex_origin: Vec<Vertex>,
    /// `v-` and `v+` in `map`.
    pub marks: [Vertex; 2],
    /// Rooted at the first edge of the boundary of `q` that it keeps, in
    /// the orientation of `q`.
    pub complement: PlaneMap,
    pub complement_origin: Vec<Vertex>,
    pub complement_marks: [Vertex; 2],
    pub r: u32,
    /// Boundary numbers of `v-` and `v+` in `q`.
    pub i_minus: usize,
    pub i_plus: usize,
    pub p_right: usize,
    pub p_in: usize,
    pub p_left: usize,
    /// The complement is the one-edge map.
    pub complete: bool,
    pub reversed: bool,
    /// Position in the boundary walk of `map` where the common boundary
    /// with the complement starts.
    pub glue_start: usize,
    pub scale: Scale,
}

impl Restriction {
    pub fn area(&self) -> usize {
        self.map.area()
    }

    pub fn perimeter(&self) -> usize {
        self.map.perimeter()
    }

    /// Code of the rooted, pointed map with `v-` and `v+` marked.
    pub fn key(&self) -> CanonicalCode {
        CanonicalCode::with_marks(self.map.map(), &self.marks)
    }

    /// Every filler glued on the common boundary gives back this
    /// restriction. Fails only for a complete restriction with a mark
    /// closer than `r` to the point.
    pub fn accepts_any_filler(&self) -> bool {
        let d = self.map.distances_from_rho();
        !self.complete || self.marks.iter().all(|&m| d[m] >= self.r)
    }

    pub fn shape(&self) -> crate::counting::RestrictionShape {
        crate::counting::RestrictionShape {
            area: self.area() as i64,
            perimeter: self.perimeter() as i64,
            p_in: self.p_in as i64,
            p_left: self.p_left as i64,
        }
    }
}

#[derive(Debug, Clone)]
pub enum RestrictionOutcome {
    Restricted(Box<Restriction>),
    Cemetery,
}

impl RestrictionOutcome {
    pub fn restriction(&self) -> Option<&Restriction> {
        match self {
            RestrictionOutcome::Restricted(r) => Some(r),
            RestrictionOutcome::Cemetery => None,
        }
    }

    pub fn is_cemetery(&self) -> bool {
        matches!(self, RestrictionOutcome::Cemetery)
    }
}

/// Smallest distance to the point over the vertices of each face, `MAX`
/// on the external face.
fn face_min_distance(q: &PointedBoundaryQuad, d: &[u32]) -> Vec<u32> {
    let map = q.map();
    let ext = q.external_face();
    (0..map.face_count())
        .map(|f| if f == ext { u32::MAX } else { map.face_vertices(f).map(|v| d[v]).min().unwrap_or(u32::MAX) })
        .collect()
}

/// Smallest radius `l` such that the ball of radius `l` contains the vertex,
/// minus one; `MAX` for vertices without inner faces.
fn vertex_entry(map: &PlaneMap, fmin: &[u32]) -> Vec<u32> {
    (0..map.vertex_count())
        .map(|v| map.vertex_half_edges(v).iter().map(|&h| fmin[map.face_of(h)]).min().unwrap_or(u32::MAX))
        .collect()
}

/// Inner faces incident to a vertex within distance `ell - 1` of the point.
pub fn ball(q: &PointedBoundaryQuad, ell: u32) -> Vec<bool> {
    let d = q.distances_from_rho();
    face_min_distance(q, &d).into_iter().map(|m| m != u32::MAX && ell > 0 && m < ell).collect()
}

pub fn restrict(q: &PointedBoundaryQuad, scale: Scale) -> Result<RestrictionOutcome, RestrictionError> {
    restrict_with(q, scale, false)
}

/// Same construction with the boundary numbered the other way round from
/// the root tail.
pub fn restrict_reversed(q: &PointedBoundaryQuad, scale: Scale) -> Result<RestrictionOutcome, RestrictionError> {
    restrict_with(q, scale, true)
}

fn restrict_with(
    q: &PointedBoundaryQuad,
    scale: Scale,
    reversed: bool,
) -> Result<RestrictionOutcome, RestrictionError> {
    let p = q.perimeter();
    if 2 * p < scale.p_n {
        return Err(RestrictionError::PreconditionViolated(format!(
            "perimeter {p} below p_n / 2 = {}",
            scale.p_n as f64 / 2.0
        )));
    }
    if !(scale.eps > 0.0 && scale.eps < 1.0 / 3.0) {
        return Err(RestrictionError::PreconditionViolated(format!("eps = {} outside (0, 1/3)", scale.eps)));
    }
    let walk = q.boundary_walk();
    if !walk.simple {
        return Err(RestrictionError::NonSimpleBoundary);
    }
    let map = q.map();
    let number = |k: usize| {
        let j = if reversed { (p - k) % p } else { k };
        walk.corners[j].vertex
    };
    // Boundary half-edge joining numbers `k` and `k + 1`, in the
    // orientation of `q`.
    let edge_between = |k: usize| {
        let j = if reversed { p - k - 1 } else { k };
        walk.corners[j].half_edge
    };

    let (a, b) = (scale.lower_cut(), scale.upper_cut());
    if b + 1 >= p {
        return Ok(RestrictionOutcome::Cemetery);
    }
    let d = q.distances_from_rho();
    let fmin = face_min_distance(q, &d);
    let entry = vertex_entry(map, &fmin);
    let first = (a..=b).map(|k| entry[number(k)]).min().unwrap_or(u32::MAX);
    if first == u32::MAX {
        return Ok(RestrictionOutcome::Cemetery);
    }
    let r = first + 1;
    let in_ball = |v: Vertex| entry[v] < r;
    let i_minus = (a..=b).rev().find(|&k| in_ball(number(k))).expect("radius is attained");
    let Some(i_plus) = (b + 1..p).find(|&k| in_ball(number(k))) else {
        return Ok(RestrictionOutcome::Cemetery);
    };
    if !reversed && i_minus == 0 {
        return Ok(RestrictionOutcome::Cemetery);
    }

    let ext = q.external_face();
    let ball_face = |f: Face| f != ext && fmin[f] < r;
    let path_faces: Vec<Face> = (i_minus..i_plus).map(|k| map.face_of(map.twin(edge_between(k)))).collect();
    let (v_minus, v_plus) = (number(i_minus), number(i_plus));
    let complete = path_faces.iter().all(|&f| ball_face(f));

    let (restriction, complement) = if complete {
        let all = SubMap::extract(map, |_| true, map.root(), Some(q.rho()))?;
        let complement =
            SubMap { map: one_edge_map(), half_edge_origin: Vec::new(), vertex_origin: vec![v_minus, v_plus] };
        (all, complement)
    } else {
        let mut uf = inner_face_classes(map, |f| f != ext && !ball_face(f));
        let classes: Vec<usize> = path_faces.iter().filter(|&&f| !ball_face(f)).map(|&f| uf.find(f)).collect();
        let c = classes[0];
        if classes.iter().any(|&x| x != c) {
            return Err(RestrictionError::Internal("boundary path meets two components outside the ball".into()));
        }
        let in_c: Vec<bool> = (0..map.face_count()).map(|f| f != ext && !ball_face(f) && uf.find(f) == c).collect();
        let kept = |f: Face| f != ext && !in_c[f];
        let keep_r = |h: HalfEdge| kept(map.face_of(h)) || kept(map.face_of(map.twin(h)));
        if !keep_r(map.root()) {
            return Ok(RestrictionOutcome::Cemetery);
        }
        let rest = SubMap::extract(map, keep_r, map.root(), Some(q.rho()))?;
        let keep_c = |h: HalfEdge| in_c[map.face_of(h)] || in_c[map.face_of(map.twin(h))];
        let start = edge_between(if reversed { i_plus - 1 } else { i_minus });
        let comp = SubMap::extract(map, keep_c, start, None)?;
        (rest, comp)
    };

    let rmap = PointedBoundaryQuad::new(restriction.map)?;
    let rwalk = rmap.boundary_walk();
    if !rwalk.simple {
        return Err(RestrictionError::Internal("restriction boundary is not simple".into()));
    }
    let local = |sub_origin: &[Vertex], v: Vertex| {
        sub_origin.iter().position(|&w| w == v).ok_or_else(|| RestrictionError::Internal(format!("vertex {v} lost")))
    };
    let marks = [local(&restriction.vertex_origin, v_minus)?, local(&restriction.vertex_origin, v_plus)?];
    let complement_marks = [local(&complement.vertex_origin, v_minus)?, local(&complement.vertex_origin, v_plus)?];
    let start_vertex = marks[if reversed { 1 } else { 0 }];
    let glue_start = rwalk
        .corners
        .iter()
        .position(|c| c.vertex == start_vertex)
        .ok_or_else(|| RestrictionError::Internal("mark off the boundary".into()))?;

    let p_right = i_minus;
    let p_left = p - i_plus;
    let per = rmap.perimeter();
    if per < p_right + p_left + 1 {
        return Err(RestrictionError::Internal("perimeter split is negative".into()));
    }
    Ok(RestrictionOutcome::Restricted(Box::new(Restriction {
        map: rmap,
        vertex_origin: restriction.vertex_origin,
        marks,
        complement: complement.map,
        complement_origin: complement.vertex_origin,
        complement_marks,
        r,
        i_minus,
        i_plus,
        p_right,
        p_in: per - p_right - p_left,
        p_left,
        complete,
        reversed,
        glue_start,
        scale,
    })))
}

/// The four inequalities of an `(n, delta)`-good restriction, closed.
pub fn is_good(outcome: &RestrictionOutcome, delta: f64) -> Result<bool, RestrictionError> {
    let r = outcome.restriction().ok_or(RestrictionError::CemeteryInput)?;
    Ok(good_values(r.p_right, r.p_in, r.p_left, r.area(), r.scale, delta))
}

pub fn good_values(p_right: usize, p_in: usize, p_left: usize, area: usize, scale: Scale, delta: f64) -> bool {
    let (n, p_n) = (scale.n as f64, scale.p_n as f64);
    let le = |x: f64, y: f64| x <= y + 1e-9 * y.abs().max(1.0);
    let (pr, pi, pl, area_f) = (p_right as f64, p_in as f64, p_left as f64, area as f64);
    p_right >= scale.lower_cut()
        && le(pr, (1.0 / 3.0 - delta) * p_n)
        && le(p_n / 2.0, pl)
        && le(pl, (2.0 / 3.0 - delta) * p_n)
        && le(n / 2.0, area_f)
        && le(area_f, (1.0 - delta) * n)
        && le(pi, n.sqrt() / delta)
}
