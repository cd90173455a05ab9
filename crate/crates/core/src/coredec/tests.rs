use super::*;
use crate::bijection::build_quadrangulation;
use crate::encoder::sample_treed_bridge;
use crate::planemap::{one_edge_map, CanonicalCode};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sample(p: usize, m: usize, seed: u64) -> PointedBoundaryQuad {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    build_quadrangulation(&sample_treed_bridge(p, m, &mut rng).unwrap()).unwrap().quad
}

fn find(p: usize, m: usize, pred: impl Fn(&PointedBoundaryQuad) -> bool) -> PointedBoundaryQuad {
    (0..100_000u64).map(|s| sample(p, m, s)).find(|q| pred(q)).expect("instance found")
}

#[test]
fn one_edge_map_is_its_own_core() {
    let q = PointedBoundaryQuad::new(one_edge_map().with_point(0).unwrap()).unwrap();
    let d = decompose(&q).unwrap();
    assert_eq!(d.components.len(), 1);
    assert_eq!((d.components[0].area, d.components[0].perimeter), (0, 2));
    let c = core(&q).unwrap();
    assert_eq!(c.core().unwrap().quad.canonical_code(), q.canonical_code());
}

#[test]
fn simple_boundary_is_a_single_component() {
    let q = find(6, 12, |q| q.boundary_walk().simple);
    let d = decompose(&q).unwrap();
    assert_eq!(d.components.len(), 1);
    let c = core(&q).unwrap();
    let c = c.core().unwrap();
    assert_eq!(c.quad.canonical_code(), q.canonical_code());
    let j = c.j_table(&q.boundary_walk());
    assert_eq!(j, (0..6).collect::<Vec<_>>());
}

#[test]
fn two_equal_components_give_the_cemetery() {
    let q = find(4, 2, |q| {
        let d = decompose(q).unwrap();
        d.components.len() == 2 && d.components.iter().all(|c| c.area == 1)
    });
    assert!(!q.boundary_walk().simple);
    assert!(matches!(core(&q).unwrap(), CoreResult::Cemetery));
    assert_eq!((core(&q).unwrap().area(), core(&q).unwrap().perimeter()), (0, 0));
}

#[test]
fn point_outside_the_largest_component() {
    let q = find(8, 6, |q| {
        let d = decompose(q).unwrap();
        let max = d.components.iter().map(|c| c.area).max().unwrap();
        let big: Vec<_> = d.components.iter().filter(|c| c.area == max).collect();
        big.len() == 1 && !big[0].contains_rho
    });
    assert!(matches!(core(&q).unwrap(), CoreResult::Cemetery));
}

#[test]
fn pinched_core_skips_excursions() {
    let q = find(10, 12, |q| {
        let w = q.boundary_walk();
        !w.simple && core(q).unwrap().core().is_some_and(|c| c.quad.perimeter() < w.len())
    });
    let w = q.boundary_walk();
    let c = core(&q).unwrap();
    let c = c.core().unwrap();
    let j = c.j_table(&w);
    assert!(j.windows(2).all(|x| x[0] < x[1]), "{j:?}");
    for (i, &ji) in j.iter().enumerate() {
        assert_eq!(w.corners[ji].vertex, c.vertex_origin[c.quad.boundary_walk().corners[i].vertex]);
    }
    assert!(c.quad.area() < q.area() || c.quad.perimeter() < q.perimeter());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]
    #[test]
    fn decomposition_conserves_area_and_perimeter(p in 1usize..12, m in 0usize..40, seed in any::<u64>()) {
        let q = sample(2 * p, m, seed);
        let d = decompose(&q).unwrap();
        prop_assert_eq!(d.total_area(), q.area());
        prop_assert_eq!(d.total_perimeter(), q.perimeter());
        for c in &d.components {
            let w = c.sub.map.boundary_walk();
            prop_assert!(w.simple);
            prop_assert_eq!(w.len(), c.perimeter);
            prop_assert_eq!(c.sub.map.quadrangulation_shape().unwrap(), (c.area, c.perimeter));
            if c.area > 0 {
                prop_assert_eq!(c.sub.map.vertex_count(), c.area + c.perimeter / 2 + 1);
            }
        }
        prop_assert!(d.components.iter().any(|c| c.contains_rho));
        if let CoreResult::Core(c) = core(&q).unwrap() {
            prop_assert!(c.quad.boundary_walk().simple);
            prop_assert!(c.quad.area() <= q.area());
            let others = d.total_area() - c.quad.area();
            prop_assert_eq!(c.quad.area() == q.area(), others == 0);
            if q.boundary_walk().simple {
                prop_assert_eq!(c.quad.area(), q.area());
            }
            let dq = q.distances_from_rho();
            let dc = c.quad.distances_from_rho();
            for (v, &o) in c.vertex_origin.iter().enumerate() {
                prop_assert_eq!(dc[v], dq[o]);
            }
            prop_assert_eq!(CanonicalCode::of(c.quad.map()).as_slice()[0] as usize, c.quad.map().half_edge_count());
        }
    }
}
