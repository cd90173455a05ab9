//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero when a criterion fails that is not a known gap.

use std::collections::HashMap;
use std::hash::Hash;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use quadbound::bijection::{build_quadrangulation, verify_label_distance};
use quadbound::counting::{
    count_simple, gw_derivative_at_one, gw_first_passage_counts, gw_first_passage_simulation, gw_generating_function,
    perimeter_sequence, ratio_bound_check, restriction_probability, RestrictionShape,
};
use quadbound::encoder::{count_plane_forests, sample_bridge, sample_plane_forest, sample_treed_bridge};
use quadbound::experiments::{
    asymptotic_rows, core_statistics, reglue_experiment, restrict_statistics, sqrt_scaling_points, tv_experiment,
    ReglueConfig, ReglueSummary, RestrictConfig, TvConfig,
};
use quadbound::oracle::{
    chi_square, chi_square_uniformity, enumerate_boundary_quads, enumerate_bridges, enumerate_forests,
    enumerate_treed_bridges, sample_uniform_simple, universe_size,
};
use quadbound::restriction::{restrict, RestrictionError, Scale};
use quadbound::rng::replicate_rng;
use quadbound::{core, CanonicalCode};

/// Criteria whose failure is analysed in the decisions ledger.
const KNOWN_GAPS: &[(u32, &str)] = &[
    (6, "the complement holds vertices of trees rooted at or after J(i+), outside S"),
    (8, "complete restrictions with a mark closer than r change under fillers with faces"),
    (9, "first-passage counts have infinite variance, so the 3 SE band is not calibrated"),
    (11, "non-core area decays slowly; the area band at n = 1e5 is out of reach"),
];

struct Outcome {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into(), notes: Vec::new() }
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }
}

fn say(s: &str) {
    let mut e = std::io::stderr().lock();
    let _ = writeln!(e, "{s}");
}

fn uniform_check<K: Hash + Eq + Clone + std::fmt::Debug>(
    support: &[K],
    mut draw: impl FnMut(u64) -> K,
) -> (f64, usize) {
    let samples: Vec<K> = (0..100 * support.len() as u64).map(&mut draw).collect();
    let c = chi_square(&samples, support, None).expect("samples lie in the support");
    (c.p_value, samples.len())
}

fn exact_counts() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for n in 0..=3usize {
        for p in [2usize, 4, 6] {
            let t = enumerate_boundary_quads(n, p, true).unwrap();
            let c = count_simple(n as i64, p as i64).unwrap().to_u64().unwrap();
            checked += 1;
            if t.rooted_count() as u64 != c {
                bad.push(format!("({n},{p}): oracle {} formula {c}", t.rooted_count()));
            }
        }
    }
    let named = [(0, 2, 1u64), (1, 2, 2), (1, 4, 1)];
    for (n, p, want) in named {
        if count_simple(n, p).unwrap().to_u64() != Some(want) {
            bad.push(format!("q({n},{p}) != {want}"));
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!("{checked} sizes with n <= 3, p <= 6 agree; q(0,2)=1 q(1,2)=2 q(1,4)=1 {bad:?}"),
    )
}

fn bijectivity() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, m) in [(2usize, 0usize), (2, 1), (4, 0), (4, 1), (2, 2)] {
        let all = enumerate_treed_bridges(p, m).unwrap();
        let mut codes: Vec<CanonicalCode> =
            all.iter().map(|t| build_quadrangulation(t).unwrap().quad.canonical_code()).collect();
        codes.sort();
        let before = codes.len();
        codes.dedup();
        let rooted = enumerate_boundary_quads(m, p, false).unwrap().rooted_count();
        let pointed = (m + p / 2 + 1) * rooted;
        let good = codes.len() == before && codes.len() == pointed;
        ok &= good;
        parts.push(format!("({p},{m}):{}/{}", codes.len(), pointed));
    }
    Outcome::new(ok, format!("images/pointed counts {}", parts.join(" ")))
}

fn sampled_maps() -> (Outcome, Outcome) {
    let (mut label_fail, mut shape_fail, mut maps) = (0, 0, 0);
    for i in 0..10_000u64 {
        let p = 2 + 2 * (i % 10) as usize;
        let m = ((i / 10) % 51) as usize;
        let mut rng = replicate_rng(3, i);
        let enc = build_quadrangulation(&sample_treed_bridge(p, m, &mut rng).unwrap()).unwrap();
        maps += 1;
        if !verify_label_distance(&enc) {
            label_fail += 1;
        }
        let q = enc.quad.map();
        if q.quadrangulation_shape().ok() != Some((m, p)) || q.euler_characteristic() != 2 {
            shape_fail += 1;
        }
        if let Some(c) = core(&enc.quad).unwrap().core() {
            maps += 1;
            let cq = c.quad.map();
            if cq.quadrangulation_shape().ok() != Some((c.quad.area(), c.quad.perimeter()))
                || cq.euler_characteristic() != 2
                || !c.quad.boundary_walk().simple
            {
                shape_fail += 1;
            }
        }
    }
    (
        Outcome::new(label_fail == 0, format!("{label_fail} failures over 10000 maps, p in 2..=20, m in 0..=50")),
        Outcome::new(shape_fail == 0, format!("{shape_fail} failures over {maps} maps and cores")),
    )
}

fn uniformity() -> Outcome {
    let level = 1e-3;
    let mut fails = Vec::new();
    let mut tests = 0;
    let mut record = |name: String, p_value: f64| {
        tests += 1;
        if p_value < level {
            fails.push(format!("{name}: p = {p_value:.2e}"));
        }
    };

    for p in (2..=14).step_by(2) {
        let support = enumerate_bridges(p).unwrap();
        let (pv, _) = uniform_check(&support, |i| sample_bridge(p, &mut replicate_rng(51, i)).unwrap());
        record(format!("bridge {p}"), pv);
    }
    for f in 1..=5usize {
        for m in 1..=7usize {
            let size = count_plane_forests(f, m).to_u64().unwrap();
            if !(2..=10_000).contains(&size) {
                continue;
            }
            let support = enumerate_forests(f, m);
            let mut rng = replicate_rng(52, (f * 100 + m) as u64);
            let (pv, _) = uniform_check(&support, |_| sample_plane_forest(f, m, &mut rng));
            record(format!("forest ({f},{m})"), pv);
        }
    }
    let mut pairs = Vec::new();
    for p in (2..=14).step_by(2) {
        for m in 0..=6usize {
            let size = universe_size(p, m).to_u64().unwrap_or(u64::MAX);
            if (2..=10_000).contains(&size) {
                pairs.push((p, m));
            }
        }
    }
    for &(p, m) in &pairs {
        let support = enumerate_treed_bridges(p, m).unwrap();
        let mut rng = replicate_rng(53, (p * 100 + m) as u64);
        let (pv, _) = uniform_check(&support, |_| sample_treed_bridge(p, m, &mut rng).unwrap());
        record(format!("treed bridge ({p},{m})"), pv);

        let t = enumerate_boundary_quads(m, p, false).unwrap();
        let mut rng = replicate_rng(54, (p * 100 + m) as u64);
        let samples: Vec<CanonicalCode> = (0..100 * t.pointed.len())
            .map(|_| {
                build_quadrangulation(&sample_treed_bridge(p, m, &mut rng).unwrap()).unwrap().quad.canonical_code()
            })
            .collect();
        record(format!("image ({p},{m})"), chi_square_uniformity(&samples, &t).unwrap().p_value);
    }

    let support = enumerate_bridges(10).unwrap();
    let trials = 200u64;
    let mut null_rejections = 0;
    for s in 0..trials {
        let mut rng = replicate_rng(55, s);
        let (pv, _) = uniform_check(&support, |_| support[rng.random_range(0..support.len())].clone());
        if pv < level {
            null_rejections += 1;
        }
    }
    let calibrated = null_rejections <= 2;
    Outcome::new(
        fails.is_empty() && calibrated,
        format!(
            "{} of {tests} universes rejected at 1e-3; null rejections {null_rejections}/{trials} (limit 2) {fails:?}",
            fails.len()
        ),
    )
}

fn restriction_bounds() -> Outcome {
    let mut lines = Vec::new();
    let mut total = [0usize; 6];
    let mut widened = [0usize; 5];
    for n in [1_000usize, 10_000] {
        let cfg = RestrictConfig { n, alpha: 1.0, eps: 0.1, delta: 0.05, replicates: 1000, seed: 6, distortion: true };
        let rows = restrict_statistics(&cfg).unwrap();
        let mut v = [0usize; 6];
        for row in &rows {
            let Some(rep) = &row.report else { continue };
            v[0] += 1;
            v[1] += !rep.volume_sandwich() as usize;
            v[2] += !rep.pin_bound as usize;
            v[3] += !rep.s_ge_disjoint as usize;
            v[4] += !rep.all_but_two_in_s as usize;
            v[5] += !rep.gh_bound as usize;
            if let Some(w) = &row.widened {
                widened[0] += !w.volume_sandwich() as usize;
                widened[1] += !w.pin_bound as usize;
                widened[2] += !w.s_ge_disjoint as usize;
                widened[3] += !w.all_but_two_in_s as usize;
                widened[4] += !w.gh_bound as usize;
            }
        }
        lines.push(format!(
            "n={n}: {} sampled, {} restricted, violations vol {} pin {} sge {} s {} gh {}",
            rows.len(),
            v[0],
            v[1],
            v[2],
            v[3],
            v[4],
            v[5]
        ));
        for k in 0..6 {
            total[k] += v[k];
        }
    }
    let violations: usize = total[1..].iter().sum();
    Outcome::new(violations == 0, format!("{violations} violations; {}", lines.join("; "))).note(format!(
        "with the tree at v+ added to S: violations vol {} pin {} sge {} s {} gh {}",
        widened[0], widened[1], widened[2], widened[3], widened[4]
    ))
}

fn restriction_law() -> Outcome {
    let (m, p, p_n) = (4usize, 8usize, 8usize);
    let scale = Scale::with_perimeter(m, p_n, 0.1);
    let key_of = |q: &quadbound::PointedBoundaryQuad| match restrict(q, scale) {
        Ok(o) => o.restriction().map(|r| (r.key(), r.shape())),
        Err(RestrictionError::PreconditionViolated(_)) => None,
        Err(e) => panic!("{e}"),
    };

    let mut exact: HashMap<CanonicalCode, (u64, RestrictionShape)> = HashMap::new();
    let mut simple = 0u64;
    for ltb in enumerate_treed_bridges(p, m).unwrap() {
        let q = build_quadrangulation(&ltb).unwrap().quad;
        if !q.boundary_walk().simple {
            continue;
        }
        simple += 1;
        if let Some((k, s)) = key_of(&q) {
            exact.entry(k).or_insert((0, s)).0 += 1;
        }
    }
    let mut mismatches = 0;
    for (c, shape) in exact.values() {
        let f = restriction_probability(*shape, m as i64, p as i64, p_n as i64).unwrap();
        if f != BigRational::new((*c).into(), simple.into()) {
            mismatches += 1;
        }
    }
    let (target, (count, shape)) = exact.iter().max_by(|a, b| a.1 .0.cmp(&b.1 .0).then(b.0.cmp(a.0))).unwrap();
    let prob = restriction_probability(*shape, m as i64, p as i64, p_n as i64).unwrap();
    let pi = prob.to_f64().unwrap();

    let samples = 100_000u64;
    let mut rng = replicate_rng(7, 0);
    let hits = (0..samples)
        .filter(|_| {
            let q = sample_uniform_simple(m, p, 100_000, &mut rng).unwrap();
            key_of(&q).is_some_and(|(k, _)| &k == target)
        })
        .count() as f64;
    let freq = hits / samples as f64;
    let se = (pi * (1.0 - pi) / samples as f64).sqrt();
    let z = (freq - pi) / se;
    Outcome::new(
        z.abs() <= 3.0 && mismatches == 0 && !prob.is_zero(),
        format!("(n',p',p_n)=({m},{p},{p_n}): frequency {freq:.5} vs {pi:.5} = {prob}, z = {z:.2} over {samples}"),
    )
    .note(format!(
        "exact enumeration of {simple} pointed simple maps: {} restrictions, {mismatches} disagree with the formula (target seen {count} times)",
        exact.len()
    ))
}

fn regluing() -> Outcome {
    let mut rows = Vec::new();
    let mut batch = 0u64;
    while ReglueSummary::from_rows(&rows).trials < 1000 {
        let cfg = ReglueConfig { n: 1000, alpha: 1.0, eps: 0.1, replicates: 1000, seed: 8 + 1000 * batch };
        rows.extend(reglue_experiment(&cfg).unwrap());
        batch += 1;
    }
    let s = ReglueSummary::from_rows(&rows);
    Outcome::new(
        s.all_ok(),
        format!(
            "{} trials: {} reconstruct, {} keep the restriction after a random filler",
            s.trials, s.reconstructed, s.same_restriction
        ),
    )
    .note(format!(
        "{} fragile complete restrictions, {} of them change; all other failures: {}",
        s.fragile,
        s.fragile_failures,
        s.trials - s.same_restriction - s.fragile_failures
    ))
}

fn gw_identity() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut notes = Vec::new();
    for gap in [0i64, 1, 10] {
        let s = gw_first_passage_simulation(gap, 100_000, 7, 10_000_000);
        let good = (s.mean - 1.0).abs() <= 3.0 * s.se && s.discard_rate() < 1e-4;
        ok &= good;
        parts.push(format!(
            "gap {gap}: {:.4} +- {:.4} ({:.1} SE, discards {:.0e})",
            s.mean,
            s.se,
            (s.mean - 1.0) / s.se.max(f64::MIN_POSITIVE),
            s.discard_rate()
        ));
        let counts: Vec<u64> = gw_first_passage_counts(gap, 100_000, 7, 10_000_000).into_iter().flatten().collect();
        for x in [0.5f64, 0.9] {
            let v: Vec<f64> = counts.iter().map(|&c| x.powi(c as i32)).collect();
            let k = v.len() as f64;
            let mean = v.iter().sum::<f64>() / k;
            let se = (v.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (k - 1.0) / k).sqrt();
            let f = gw_generating_function(gap, x).unwrap();
            notes.push(format!(
                "gap {gap} x {x}: E[x^Z] {mean:.5} vs f(x) {f:.5} ({:.1} SE)",
                (mean - f) / se.max(1e-300)
            ));
        }
    }
    for gap in [0i64, 1, 5, 50] {
        let d = gw_derivative_at_one(gap, 1e-4, 1e-7).unwrap();
        let good = (d - 1.0).abs() <= 1e-3;
        ok &= good;
        parts.push(format!("f'(1) gap {gap} = {d:.6}"));
    }
    let mut o = Outcome::new(ok, parts.join("; "));
    o.notes = notes;
    o
}

fn stirling() -> Outcome {
    let rows = asymptotic_rows(&[(10_000, 100), (1_000_000, 1000)]).unwrap();
    let line = asymptotic_rows(&sqrt_scaling_points(&[100, 1_000, 10_000, 100_000, 1_000_000])).unwrap();
    let monotone = line.windows(2).all(|w| w[1].ratio_minus_one.abs() < w[0].ratio_minus_one.abs());
    let ok = rows[0].ratio_minus_one.abs() <= 0.02 && rows[1].ratio_minus_one.abs() <= 0.005 && monotone;
    Outcome::new(
        ok,
        format!(
            "|ratio-1| = {:.3e} at (1e4,100), {:.3e} at (1e6,1000); monotone along sqrt: {monotone}",
            rows[0].ratio_minus_one.abs(),
            rows[1].ratio_minus_one.abs()
        ),
    )
}

fn core_concentration() -> Outcome {
    let small = core_statistics(10_000, 1.0, 200, 11).unwrap();
    let large = core_statistics(100_000, 1.0, 200, 11).unwrap();
    let dec = |a: f64, b: f64| b < a;
    let cem = dec(small.frac_cemetery, large.frac_cemetery);
    let area = dec((small.mean_area_ratio - 1.0).abs(), (large.mean_area_ratio - 1.0).abs());
    let perim = dec((small.mean_perim_ratio - 1.0).abs(), (large.mean_perim_ratio - 1.0).abs());
    let band = (0.85..=1.0).contains(&large.mean_area_ratio);
    let n = 10_000i64;
    let p_n = perimeter_sequence(n as u64, 1.0) as i64;
    let shape = RestrictionShape { area: 100, perimeter: 20, p_in: 2, p_left: 6 };
    let identity = ratio_bound_check(shape, n, p_n, n, p_n).unwrap() == 1.0;
    Outcome::new(
        cem && area && perim && band && identity,
        format!(
            "cemetery {:.3} -> {:.3} ({cem}), area {:.3} -> {:.3} ({area}), perimeter {:.3} -> {:.3} ({perim}), area band at 1e5: {band}, ratio identity: {identity}",
            small.frac_cemetery,
            large.frac_cemetery,
            small.mean_area_ratio,
            large.mean_area_ratio,
            small.mean_perim_ratio,
            large.mean_perim_ratio
        ),
    )
}

fn tv_trend() -> Outcome {
    let cfg = TvConfig {
        sizes: vec![10, 20, 40],
        alpha: 1.0,
        eps: 0.1,
        replicates: 2000,
        seed: 12,
        bootstrap: 200,
        max_tries: 10_000_000,
    };
    let rows = tv_experiment(&cfg).unwrap();
    let (a, b) = (&rows[0], &rows[2]);
    let ok = b.tv < a.tv && rows.iter().all(|r| r.ci_low <= r.tv && r.tv <= r.ci_high);
    let mut o = Outcome::new(
        ok,
        format!(
            "TV {:.3} [{:.3}, {:.3}] at n=10 -> {:.3} [{:.3}, {:.3}] at n=40",
            a.tv, a.ci_low, a.ci_high, b.tv, b.ci_low, b.ci_high
        ),
    );
    for r in &rows {
        o = o.note(format!(
            "n={}: TV {:.3}, cemetery {:.3} vs {:.3}, distinct keys {} vs {}",
            r.n, r.tv, r.cemetery_uniform, r.cemetery_core, r.distinct_uniform, r.distinct_core
        ));
    }
    o
}

fn main() -> ExitCode {
    let (c3, c4) = {
        let t = Instant::now();
        let r = sampled_maps();
        say(&format!("(label and shape checks took {:.0?})", t.elapsed()));
        r
    };
    let mut c3 = Some(c3);
    let mut c4 = Some(c4);
    let names: [(u32, &str); 12] = [
        (1, "exact counting"),
        (2, "bijectivity"),
        (3, "label-distance identity"),
        (4, "face degrees and Euler"),
        (5, "sampler uniformity"),
        (6, "restriction bounds"),
        (7, "restriction law"),
        (8, "regluing"),
        (9, "GW identity"),
        (10, "Stirling asymptotic"),
        (11, "core concentration"),
        (12, "TV trend"),
    ];
    let mut unexpected = Vec::new();
    for (id, name) in names {
        let t = Instant::now();
        let o = match id {
            1 => exact_counts(),
            2 => bijectivity(),
            3 => c3.take().unwrap(),
            4 => c4.take().unwrap(),
            5 => uniformity(),
            6 => restriction_bounds(),
            7 => restriction_law(),
            8 => regluing(),
            9 => gw_identity(),
            10 => stirling(),
            11 => core_concentration(),
            _ => tv_trend(),
        };
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        say(&format!("{verdict} {id:>2} {name}: {} [{:.0?}]", o.detail, t.elapsed()));
        for n in &o.notes {
            say(&format!("        {n}"));
        }
        if !o.pass {
            match KNOWN_GAPS.iter().find(|g| g.0 == id) {
                Some((_, why)) => say(&format!("        known gap: {why}")),
                None => unexpected.push(id),
            }
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        say(&format!("unexpected failures: {unexpected:?}"));
        ExitCode::FAILURE
    }
}
