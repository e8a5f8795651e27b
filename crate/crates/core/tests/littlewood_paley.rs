//! Dyadic blocks, partial sums and Besov-type norms.

use std::f64::consts::PI;

use bsqlab::littlewood_paley::*;
use bsqlab::random::{band_limited_field, BandLimited, FieldRng};
use bsqlab::spectral::*;

fn max_diff(a: &ScalarField, b: &ScalarField) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn cos_mode(n: usize, m: f64) -> ScalarField {
    ScalarField::from_fn(&make_grid(n).unwrap(), move |x, _| (m * x).cos())
}

#[test]
fn partition_shape() {
    for (n, j_max) in [(8, 1), (16, 2), (64, 4), (256, 6)] {
        let p = make_partition(&make_grid(n).unwrap());
        assert_eq!(p.j_max(), j_max, "n={n}");
    }
    let p = make_partition(&make_grid(64).unwrap());
    let radius = p.coverage_radius();
    let mut worst: f64 = 0.0;
    for k2 in -32..32i64 {
        for k1 in -32..32i64 {
            let r = ((k1 * k1 + k2 * k2) as f64).sqrt();
            if r > radius {
                continue;
            }
            let total: f64 = p.block_indices().map(|j| p.symbol(j).unwrap().get(k1, k2).unwrap().re).sum();
            worst = worst.max((total - 1.0).abs());
        }
    }
    assert!(worst < 1e-12, "{worst}");
    for r in [0.0, 1.0, 1.9, 8.1, 12.0, 30.0] {
        assert_eq!(band_profile(2, r), 0.0, "r={r}");
    }
    assert!(band_profile(2, 4.0) > 0.99);
    // Dilation structure.
    for r in [0.6, 1.0, 1.3, 1.7] {
        assert!((band_profile(3, 8.0 * r) - band_profile(0, r)).abs() < 1e-15);
    }
}

#[test]
fn blocks_of_simple_fields() {
    let grid = make_grid(64).unwrap();
    let p = make_partition(&grid);
    let c = ScalarField::constant(&grid, 2.5);
    assert!(max_diff(&p.block(&c, -1).unwrap(), &c) < 1e-14);
    for j in 0..=p.j_max() {
        assert!(p.block(&c, j).unwrap().max_abs() < 1e-14);
    }
    let f = cos_mode(64, 1.0);
    let blocks = p.blocks(&f).unwrap();
    for (idx, b) in blocks.iter().enumerate().skip(2) {
        assert!(b.max_abs() < 1e-14, "block {}", idx as i32 - 1);
    }
    assert!(max_diff(&blocks[0].add(&blocks[1]).unwrap(), &f) < 1e-12);

    let f8 = cos_mode(64, 8.0);
    for j in p.block_indices() {
        if j != 2 && j != 3 {
            assert!(p.block(&f8, j).unwrap().max_abs() < 1e-14, "j={j}");
        }
    }
    assert!(p.block(&f8, 5).is_err());
}

#[test]
fn partial_sums() {
    let grid = make_grid(64).unwrap();
    let p = make_partition(&grid);
    let f = band_limited_field(&grid, BandLimited { k_max: 15, slope: 0.0, rms: 1.0 }, &mut FieldRng::new(4)).unwrap();
    assert!(max_diff(&p.partial_sum(&f, p.j_max() + 1).unwrap(), &f) < 1e-11);
    assert!(p.partial_sum(&cos_mode(64, 8.0), 0).unwrap().max_abs() < 1e-12);
    let c = ScalarField::constant(&grid, -1.5);
    assert!(max_diff(&p.partial_sum(&c, 1).unwrap(), &c) < 1e-14);
    let sum = p.blocks(&f).unwrap().into_iter().reduce(|a, b| a.add(&b).unwrap()).unwrap();
    assert!(max_diff(&sum, &f) < 1e-11);
}

#[test]
fn besov_examples() {
    let grid = make_grid(64).unwrap();
    let p = make_partition(&grid);
    let zero = ScalarField::zeros(&grid);
    for spec in [BesovSpec::plain(0.0, 2.0, 1.0), BesovSpec::new(-1.0, 1.0, f64::INFINITY, 2.0, true).unwrap()] {
        assert_eq!(p.besov_norm(&zero, &spec).unwrap(), 0.0);
    }
    // Direct two-block evaluation.
    let f = cos_mode(64, 1.0);
    let spec = BesovSpec::plain(0.0, 2.0, 1.0);
    let direct = l2_norm(&p.block(&f, -1).unwrap()) + l2_norm(&p.block(&f, 0).unwrap());
    let norm = p.besov_norm(&f, &spec).unwrap();
    assert!((norm - direct).abs() < 1e-13);
    assert!((norm - PI * 2f64.sqrt()).abs() < 1e-12);
    let g = band_limited_field(&grid, BandLimited { k_max: 20, slope: 1.0, rms: 1.0 }, &mut FieldRng::new(8)).unwrap();
    let spec = BesovSpec::new(0.5, 1.0, 3.0, 2.0, false).unwrap();
    let a = p.besov_norm(&g, &spec).unwrap();
    let b = p.besov_norm(&g.scaled(2.0), &spec).unwrap();
    assert!((b - 2.0 * a).abs() < 1e-12 * a);
    assert!(BesovSpec::new(0.0, 0.0, 0.5, 1.0, false).is_err());
}

#[test]
fn spacetime_examples() {
    let grid = make_grid(32).unwrap();
    let p = make_partition(&grid);
    let f = cos_mode(32, 1.0);
    let besov = BesovSpec::plain(0.0, 2.0, 1.0);
    let steady: Vec<_> = (0..5).map(|i| (i as f64 * 0.25, f.clone())).collect();
    let inf = SpaceTimeBesovSpec { besov, r: f64::INFINITY };
    let v = p.spacetime_besov_norm(&steady, &inf).unwrap();
    assert!((v - p.besov_norm(&f, &besov).unwrap()).abs() < 1e-13);

    let samples: Vec<_> = (0..=1000)
        .map(|i| {
            let t = i as f64 / 1000.0;
            (t, f.scaled((-t).exp()))
        })
        .collect();
    let one = SpaceTimeBesovSpec { besov, r: 1.0 };
    let v = p.spacetime_besov_norm(&samples, &one).unwrap();
    let want = (1.0 - (-1f64).exp()) * p.besov_norm(&f, &besov).unwrap();
    assert!((v - want).abs() < 1e-3 * want, "{v} vs {want}");

    let zeros: Vec<_> = (0..3).map(|i| (i as f64, ScalarField::zeros(&grid))).collect();
    assert_eq!(p.spacetime_besov_norm(&zeros, &one).unwrap(), 0.0);
    assert!(p.spacetime_besov_norm(&samples[..1], &one).is_err());
    let backwards = vec![(1.0, f.clone()), (0.5, f.clone())];
    assert!(p.spacetime_besov_norm(&backwards, &one).is_err());
}

#[test]
fn bernstein_examples() {
    let f = cos_mode(64, 2.0);
    let r = bernstein_ratio(&f, 1, 0.5, 2.0, 2.0).unwrap();
    assert!((r - 1.0).abs() < 1e-12);
    let r5 = bernstein_ratio(&f.scaled(5.0), 1, 0.5, 2.0, 2.0).unwrap();
    assert!((r5 - r).abs() < 1e-12);
    let zero = ScalarField::zeros(f.grid());
    assert!(bernstein_ratio(&zero, 1, 0.5, 2.0, 2.0).is_err());
}

#[test]
fn log_weight_is_monotone_and_l2_equivalence_is_bounded() {
    let grid = make_grid(64).unwrap();
    let p = make_partition(&grid);
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for seed in 0..20 {
        let f = band_limited_field(&grid, BandLimited { k_max: 20, slope: 0.5, rms: 1.0 }, &mut FieldRng::new(seed)).unwrap();
        for (pp, q) in [(2.0, 2.0), (f64::INFINITY, 1.0), (4.0, f64::INFINITY)] {
            let a = p.besov_norm(&f, &BesovSpec::new(0.0, 0.0, pp, q, false).unwrap()).unwrap();
            let b = p.besov_norm(&f, &BesovSpec::new(0.0, 1.0, pp, q, false).unwrap()).unwrap();
            assert!(b >= a);
        }
        let ratio = p.besov_norm(&f, &BesovSpec::plain(0.0, 2.0, 2.0)).unwrap() / l2_norm(&f);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    // Squares of a partition of unity sum to between 1/2 and 1.
    assert!(lo >= 0.5f64.sqrt() - 1e-12 && hi <= 1.0 + 1e-12, "[{lo}, {hi}]");
}
