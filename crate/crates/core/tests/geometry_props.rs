use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use touching_lines::geometry::{
    self, chirality, chirality_graph, check_realization, line_distance, lower_bound_config, t_matrix, unit_simplex,
    Chirality, DirectedLine, GeometryError, LineConfig,
};
use touching_lines::{Graph, Signature};

fn line(b: [f64; 3], d: [f64; 3]) -> DirectedLine {
    DirectedLine::new(b.to_vec(), d.to_vec()).unwrap()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn gaussian_vec(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Random rotation in SO(3) from Gram-Schmidt on random rows.
fn random_rotation(rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    while rows.len() < 2 {
        let mut v = gaussian_vec(rng, 3);
        for r in &rows {
            let c = dot(&v, r);
            v.iter_mut().zip(r).for_each(|(x, y)| *x -= c * y);
        }
        let n = dot(&v, &v).sqrt();
        if n > 1e-3 {
            rows.push(v.iter().map(|x| x / n).collect());
        }
    }
    rows.push(cross(&rows[0], &rows[1]).to_vec());
    rows
}

fn random_config(rng: &mut impl Rng, n: usize) -> LineConfig {
    let lines = (0..n)
        .map(|_| DirectedLine::new(gaussian_vec(rng, 3), gaussian_vec(rng, 3)).unwrap())
        .collect();
    LineConfig::new(3, lines).unwrap()
}

/// Two skew lines at distance exactly 1 (up to rounding).
fn random_unit_pair(rng: &mut impl Rng) -> LineConfig {
    let a = DirectedLine::new(gaussian_vec(rng, 3), gaussian_vec(rng, 3)).unwrap();
    let bdir = gaussian_vec(rng, 3);
    let c = cross(a.dir(), &bdir);
    let len = dot(&c, &c).sqrt();
    let s = rng.random_range(-2.0..2.0);
    let t = rng.random_range(-2.0..2.0);
    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let base: Vec<f64> = (0..3)
        .map(|k| a.base()[k] + sign * c[k] / len + s * a.dir()[k] + t * bdir[k])
        .collect();
    LineConfig::new(3, vec![a, DirectedLine::new(base, bdir).unwrap()]).unwrap()
}

fn graph_of(cfg: &LineConfig) -> Option<Graph> {
    let report = chirality_graph(cfg);
    report.pairs.iter().all(|p| p.chirality.is_some()).then(|| report.graph().unwrap())
}

#[test]
fn distance_examples() {
    let x_axis = line([0.0; 3], [1.0, 0.0, 0.0]);
    let skew = line([0.0, 0.0, 1.0], [0.0, 1.0, 0.0]);
    assert!((line_distance(&x_axis, &skew) - 1.0).abs() < 1e-15);
    let offset = line([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]);
    assert!((line_distance(&x_axis, &offset) - 1.0).abs() < 1e-15);
    assert_eq!(line_distance(&x_axis, &x_axis), 0.0);
}

#[test]
fn general_dimension_distance_matches_cross_product_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let cfg = random_config(&mut rng, 2);
        let (a, b) = (&cfg.lines[0], &cfg.lines[1]);
        let c = cross(a.dir(), b.dir());
        let delta: Vec<f64> = a.base().iter().zip(b.base()).map(|(x, y)| x - y).collect();
        let want = dot(&c, &delta).abs() / dot(&c, &c).sqrt();
        assert!((line_distance(a, b) - want).abs() < 1e-9 * (1.0 + want));
    }
    // lines in R^4 that only separate along the fourth axis
    let a = DirectedLine::new(vec![0.0; 4], vec![1.0, 0.0, 0.0, 0.0]).unwrap();
    let b = DirectedLine::new(vec![0.0, 0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0, 0.0]).unwrap();
    assert!((line_distance(&a, &b) - 1.0).abs() < 1e-15);
}

#[test]
fn chirality_examples() {
    let a = line([0.0; 3], [1.0, 0.0, 0.0]);
    let b = line([0.0, 0.0, 1.0], [0.0, 1.0, 0.0]);
    assert_eq!(chirality(&a, &b).unwrap(), Chirality::Minus);
    let a4 = DirectedLine::new(vec![0.0; 4], vec![1.0, 0.0, 0.0, 0.0]).unwrap();
    assert_eq!(chirality(&a4, &a4.reversed()), Err(GeometryError::ChiralityUndefined(4)));
}

#[test]
fn chirality_is_symmetric_and_odd_under_reversal() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..2000 {
        let cfg = random_config(&mut rng, 2);
        let (a, b) = (&cfg.lines[0], &cfg.lines[1]);
        let ab = chirality(a, b).unwrap();
        assert_eq!(chirality(b, a).unwrap(), ab);
        assert_eq!(chirality(&a.reversed(), b).unwrap().sign(), -ab.sign());
        assert_eq!(chirality(a, &b.reversed()).unwrap().sign(), -ab.sign());
    }
}

#[test]
fn three_line_example() {
    let cfg = LineConfig::from_json_str(&std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/three_lines.json")).unwrap()).unwrap();
    assert_eq!(cfg, LineConfig::three_line_example());
    let report = chirality_graph(&cfg);
    assert!(report.valid);
    assert!(report.pairs.iter().all(|p| (p.distance - 1.0).abs() < 1e-12));
    let g = report.graph().unwrap();
    // <x_a × x_b, y_a - y_b>: (0,1) -> -1, (0,2) -> +1, (1,2) -> -1
    assert_eq!(g.edges(), vec![(0, 2)]);
    let real = check_realization(&cfg, 1e-9).unwrap();
    assert!(real.all_passed(), "{real:#?}");
    assert_eq!(real.abs_signature, Signature::new(1, 0, 2));
    assert!(real.max_distance_error < 1e-9);
}

#[test]
fn reversing_a_line_switches_its_vertex() {
    let cfg = LineConfig::three_line_example();
    let g = graph_of(&cfg).unwrap();
    for w in 0..3 {
        let rev = cfg.reversing(w);
        let report = chirality_graph(&rev);
        assert!(report.valid);
        assert_eq!(report.graph().unwrap(), g.switch(w));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let n = rng.random_range(2..=10);
        let cfg = random_config(&mut rng, n);
        let w = rng.random_range(0..n);
        if let (Some(g), Some(h)) = (graph_of(&cfg), graph_of(&cfg.reversing(w))) {
            assert_eq!(h, g.switch(w));
        }
    }
}

#[test]
fn parallel_pairs_are_flagged() {
    let mut cfg = LineConfig::three_line_example();
    cfg.lines.push(line([0.0, 2.0, 0.0], [-1.0, 0.0, 0.0]));
    let report = chirality_graph(&cfg);
    assert!(!report.valid);
    assert_eq!(report.parallel_pairs, vec![[0, 3]]);
    let pair = report.pairs.iter().find(|p| p.i == 0 && p.j == 3).unwrap();
    assert!(pair.chirality.is_none() && pair.problem.is_some());
    assert!(matches!(t_matrix(&cfg), Err(GeometryError::Parallel(0, 3))));
    assert!(check_realization(&cfg, 1e-9).is_err());
}

#[test]
fn t_matrix_identities() {
    let cfg = LineConfig::three_line_example();
    let t = t_matrix(&cfg).unwrap();
    let gram = t.gram();
    for v in 0..3 {
        assert_eq!(*t.matrix.get(v, v), 0.0);
        for w in 0..3 {
            assert!((t.matrix.get(v, w) - gram.get(v, w)).abs() < 1e-12);
            assert_eq!(t.matrix.get(v, w), t.matrix.get(w, v));
            if v != w {
                let c = cross(&t.x[v], &t.x[w]);
                assert!((t.matrix.get(v, w).abs() - dot(&c, &c).sqrt()).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn gram_identity_on_random_configs() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..300 {
        let n = rng.random_range(2..=12);
        let cfg = random_config(&mut rng, n);
        let t = t_matrix(&cfg).unwrap();
        let gram = t.gram();
        for (a, b) in t.matrix.data().iter().zip(gram.data()) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        let report = chirality_graph(&cfg);
        for p in &report.pairs {
            if let Some(s) = p.chirality {
                assert_eq!(s as f64, t.matrix.get(p.i, p.j).signum());
            }
        }
    }
}

#[test]
fn two_line_configs_realize() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let cfg = random_unit_pair(&mut rng);
        let r = check_realization(&cfg, 1e-9).unwrap();
        assert!(r.all_passed(), "{r:#?}");
        assert_eq!(r.abs_signature, Signature::new(1, 0, 1));
    }
}

#[test]
fn far_pairs_are_invalid() {
    let cfg = LineConfig::new(3, vec![line([0.0; 3], [1.0, 0.0, 0.0]), line([0.0, 0.0, 2.0], [0.0, 1.0, 0.0])]).unwrap();
    assert!(matches!(check_realization(&cfg, 1e-9), Err(GeometryError::InvalidConfig(_))));
    assert!(!chirality_graph(&cfg).valid);
}

#[test]
fn rigid_motions_preserve_distances_and_chirality() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..300 {
        let n = rng.random_range(2..=8);
        let cfg = random_config(&mut rng, n);
        let rot = random_rotation(&mut rng);
        let shift: Vec<f64> = gaussian_vec(&mut rng, 3).iter().map(|x| 10.0 * x).collect();
        let moved = LineConfig::new(3, cfg.lines.iter().map(|l| l.transformed(&rot, &shift)).collect()).unwrap();
        let before = chirality_graph(&cfg);
        let after = chirality_graph(&moved);
        for (p, q) in before.pairs.iter().zip(&after.pairs) {
            assert!((p.distance - q.distance).abs() < 1e-9);
            assert_eq!(p.chirality, q.chirality);
        }
    }
    let cfg = LineConfig::three_line_example();
    let rot = random_rotation(&mut rng);
    let moved = LineConfig::new(3, cfg.lines.iter().map(|l| l.transformed(&rot, &[3.0, -1.0, 2.0])).collect()).unwrap();
    assert!(check_realization(&moved, 1e-9).unwrap().all_passed());
    assert_eq!(graph_of(&moved), graph_of(&cfg));
}

#[test]
fn reflections_complement_the_chirality_graph() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mirror = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, -1.0]];
    for _ in 0..300 {
        let n = rng.random_range(2..=10);
        let cfg = random_config(&mut rng, n);
        let rot = random_rotation(&mut rng);
        // reflect across a random plane: R^T M R
        let reflected = LineConfig::new(
            3,
            cfg.lines
                .iter()
                .map(|l| l.transformed(&rot, &[0.0; 3]).transformed(&mirror, &[0.0; 3]))
                .collect(),
        )
        .unwrap();
        if let (Some(g), Some(h)) = (graph_of(&cfg), graph_of(&reflected)) {
            assert_eq!(h, g.complement());
        }
    }
    let cfg = LineConfig::three_line_example();
    let reflected = LineConfig::new(3, cfg.lines.iter().map(|l| l.transformed(&mirror, &[0.0; 3])).collect()).unwrap();
    assert_eq!(graph_of(&reflected).unwrap(), graph_of(&cfg).unwrap().complement());
    assert!(check_realization(&reflected, 1e-9).unwrap().all_passed());
}

#[test]
fn lower_bound_configs() {
    for n in 3..=8 {
        let cfg = lower_bound_config(n).unwrap();
        assert_eq!(cfg.dim, n);
        assert_eq!(cfg.len(), 2 * n - 2);
        let report = chirality_graph(&cfg);
        assert!(report.distances_ok);
        for p in &report.pairs {
            assert!((p.distance - 1.0).abs() < 1e-12, "n={n} {p:?}");
            // lines 2i and 2i+1 share a direction
            assert_eq!(p.parallel, p.i / 2 == p.j / 2, "n={n} {p:?}");
        }
    }
    assert!(matches!(lower_bound_config(2), Err(GeometryError::LowerBoundTooSmall(2))));
    let json = lower_bound_config(4).unwrap().to_json();
    assert_eq!(LineConfig::from_json_str(&json).unwrap(), lower_bound_config(4).unwrap());
}

#[test]
fn simplex_has_unit_edges() {
    for k in 1..=9 {
        let pts = unit_simplex(k);
        assert_eq!(pts.len(), k);
        for i in 0..k {
            for j in i + 1..k {
                let d: f64 = pts[i].iter().zip(&pts[j]).map(|(a, b)| (a - b) * (a - b)).sum();
                assert!((d.sqrt() - 1.0).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn config_parsing() {
    let ok = r#"{"dim": 3, "lines": [{"base": [0,0,0], "dir": [0,0,5]}]}"#;
    let cfg = LineConfig::from_json_str(ok).unwrap();
    assert_eq!(cfg.tolerance, geometry::DEFAULT_TOLERANCE);
    assert_eq!(cfg.lines[0].dir(), &[0.0, 0.0, 1.0]);
    for bad in [
        r#"{"dim": 3, "lines": [{"base": [0,0], "dir": [0,0,1]}]}"#,
        r#"{"dim": 3, "lines": [{"base": [0,0,0], "dir": [0,0,0]}]}"#,
        r#"{"dim": 4, "lines": [{"base": [0,0,0], "dir": [0,0,1]}]}"#,
        r#"{"dim": 3, "tolerance": -1, "lines": []}"#,
        r#"{"lines": []}"#,
        "not json",
    ] {
        assert!(LineConfig::from_json_str(bad).is_err(), "{bad}");
    }
}
