use super::*;
use crate::counting::count_simple;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn catalan(k: u64) -> u64 {
    (0..k).fold(1u64, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

#[test]
fn bridge_forest_and_label_counts() {
    for p in [2, 4, 6, 8] {
        let b = enumerate_bridges(p).unwrap();
        assert_eq!(b.len() as u64, binomial(p, p / 2).try_into().unwrap());
        assert!(b.windows(2).all(|w| w[0].labels() < w[1].labels()));
    }
    for (f, m) in [(1, 0), (1, 3), (2, 2), (3, 3), (2, 5)] {
        let forests = enumerate_forests(f, m);
        assert_eq!(forests.len() as u64, count_plane_forests(f, m).to_u64().unwrap());
        assert!(forests.iter().all(|x| x.len() == f && x.iter().map(|t| t.edge_count()).sum::<usize>() == m));
        let words: Vec<Vec<u32>> =
            forests.iter().map(|x| x.iter().flat_map(|t| t.degrees().to_vec()).collect()).collect();
        assert!(words.windows(2).all(|w| w[0] < w[1]));
    }
    let forest = &enumerate_forests(2, 2)[0];
    let labelings = enumerate_labelings(forest, &[0, -1]);
    assert_eq!(labelings.len(), 9);
    assert!(labelings.iter().all(|ts| ts.iter().all(|t| t.check().is_ok())));
}

#[test]
fn treed_bridges_are_valid_and_distinct() {
    let all = enumerate_treed_bridges(4, 2).unwrap();
    assert_eq!(all.len() as u64, u64::try_from(&universe_size(4, 2)).unwrap());
    assert!(all.iter().all(|t| t.validate().is_ok()));
    let set: std::collections::HashSet<_> = all.iter().collect();
    assert_eq!(set.len(), all.len());
}

#[test]
fn smallest_universes() {
    let t = enumerate_boundary_quads(0, 2, false).unwrap();
    assert_eq!((t.universe, t.rooted_count(), t.pointed_count()), (2, 1, 2));
    assert_eq!(enumerate_boundary_quads(1, 2, true).unwrap().rooted_count(), 2);
    assert_eq!(enumerate_boundary_quads(1, 4, true).unwrap().rooted_count(), 1);
}

/// Without inner faces the maps are plane trees with `p/2` edges.
#[test]
fn trees_are_counted_by_catalan_numbers() {
    for k in 1..=5u64 {
        let t = enumerate_boundary_quads(0, 2 * k as usize, false).unwrap();
        assert_eq!(t.rooted_count() as u64, catalan(k));
        assert_eq!(t.pointed_count(), t.universe);
    }
}

#[test]
fn simple_counts_match_the_formula() {
    for n in 0..=2usize {
        for p in [2usize, 4, 6] {
            let t = enumerate_boundary_quads(n, p, true).unwrap();
            let c = count_simple(n as i64, p as i64).unwrap().to_u64().unwrap();
            assert_eq!(t.rooted_count() as u64, c, "(n, p) = ({n}, {p})");
            assert_eq!(t.pointed_count(), (n as u64 + p as u64 / 2 + 1) * c);
        }
    }
}

#[test]
fn full_universe_is_hit_injectively() {
    for (n, p) in [(1, 2), (2, 2), (1, 4), (0, 6), (2, 4)] {
        let t = enumerate_boundary_quads(n, p, false).unwrap();
        assert_eq!(t.pointed.len() as u64, t.universe, "(n, p) = ({n}, {p})");
        assert!(t.codes.windows(2).all(|w| w[0] < w[1]));
        assert!(t.pointed.iter().all(|c| t.contains(c) && t.contains(&c.unpointed())));
    }
}

#[test]
fn oversized_universes_are_refused() {
    assert!(matches!(enumerate_boundary_quads(12, 8, false), Err(OracleError::UniverseTooLarge { .. })));
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let t = enumerate_boundary_quads_cached(1, 4, false, dir.path()).unwrap();
    let path = dir.path().join(UniverseTable::cache_name(1, 4, false));
    assert!(fs::read_to_string(&path).unwrap().starts_with("UNIVERSE v1\n"));
    assert_eq!(UniverseTable::load(&path).unwrap(), t);
    assert_eq!(enumerate_boundary_quads_cached(1, 4, false, dir.path()).unwrap(), t);
    fs::write(&path, "garbage").unwrap();
    assert!(UniverseTable::load(&path).is_err());
    assert_eq!(enumerate_boundary_quads_cached(1, 4, false, dir.path()).unwrap(), t);
}

#[test]
fn chi_square_basics() {
    let support = vec![0u8, 1, 2, 3];
    let even: Vec<u8> = (0..400).map(|i| (i % 4) as u8).collect();
    let c = chi_square(&even, &support, None).unwrap();
    assert_eq!((c.statistic, c.dof), (0.0, 3));
    assert!((c.p_value - 1.0).abs() < 1e-12);
    let skewed: Vec<u8> = (0..400).map(|i| if i % 5 == 0 { 0 } else { (i % 4) as u8 }).collect();
    assert!(chi_square(&skewed, &support, Some(&[1.0, 1.0, 1.0, 1.0])).unwrap().statistic > 0.0);
    assert!(matches!(chi_square(&[9u8], &support, None), Err(OracleError::UnknownCode(_))));
    assert!(matches!(chi_square::<u8>(&[], &support, None), Err(OracleError::EmptySample)));
    let w = chi_square(&[0u8, 0, 1], &[0u8, 1], Some(&[2.0, 1.0])).unwrap();
    assert!(w.statistic.abs() < 1e-12);
}

#[test]
fn bijection_images_are_uniform_and_bias_is_detected() {
    let t = enumerate_boundary_quads(1, 2, false).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let samples: Vec<CanonicalCode> = (0..6000)
        .map(|_| {
            let ltb = sample_treed_bridge(2, 1, &mut rng).unwrap();
            build_quadrangulation(&ltb).unwrap().quad.canonical_code()
        })
        .collect();
    assert!(chi_square_uniformity(&samples, &t).unwrap().p_value > 1e-3);
    let rooted: Vec<CanonicalCode> = samples.iter().map(|c| c.unpointed()).collect();
    let weights: Vec<f64> = t.multiplicities.iter().map(|&m| m as f64).collect();
    assert!(chi_square(&rooted, &t.codes, Some(&weights)).unwrap().p_value > 1e-3);

    let biased: Vec<CanonicalCode> = (0..6000)
        .map(|_| {
            let i = rng.random_range(0..t.pointed.len() + 1);
            t.pointed[i.min(t.pointed.len() - 1)].clone()
        })
        .collect();
    assert!(chi_square_uniformity(&biased, &t).unwrap().p_value < 1e-3);
}

#[test]
fn rejection_sampler_is_uniform_on_simple_maps() {
    let t = enumerate_boundary_quads(2, 4, true).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let samples: Vec<CanonicalCode> = (0..100 * t.pointed.len())
        .map(|_| sample_uniform_simple(2, 4, 1000, &mut rng).unwrap().canonical_code())
        .collect();
    assert!(chi_square_uniformity(&samples, &t).unwrap().p_value > 1e-3);
    let rooted: Vec<CanonicalCode> = samples.iter().map(|c| c.unpointed()).collect();
    assert!(chi_square_uniformity(&rooted, &t).unwrap().p_value > 1e-3);
}

#[test]
fn tv_is_a_metric_on_empirical_laws() {
    let a = vec![1, 1, 2, 3];
    let b = vec![4, 5];
    let c = vec![1, 2, 2, 5];
    assert_eq!(empirical_tv(&a, &a).unwrap(), 0.0);
    assert_eq!(empirical_tv(&a, &b).unwrap(), 1.0);
    assert_eq!(empirical_tv(&a, &c).unwrap(), empirical_tv(&c, &a).unwrap());
    assert!((empirical_tv(&a, &c).unwrap() - 0.5).abs() < 1e-12);
    assert!(empirical_tv(&a, &b).unwrap() <= empirical_tv(&a, &c).unwrap() + empirical_tv(&c, &b).unwrap() + 1e-12);
    assert!(matches!(empirical_tv::<i32>(&[], &a), Err(OracleError::EmptySample)));
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let e = tv_with_bootstrap(&a, &c, 200, 0.95, &mut rng).unwrap();
    assert!(e.lo <= e.hi && (e.estimate - 0.5).abs() < 1e-12);
    let same = tv_with_bootstrap(&a, &a, 0, 0.95, &mut rng).unwrap();
    assert_eq!((same.lo, same.hi), (0.0, 0.0));
}
