use danzer::epsnet::{build_net, fit_constant, validate_net, NetSource};
use danzer::lattice::{build_basis, danzer_constant_estimate, flow_grid, preset_field, Preset};
use danzer::verifier::largest_empty_box;
use danzer::{Point, Window};

#[test]
fn vdc_sizes_follow_one_over_eps() {
    let a = build_net(&NetSource::Vdc, 0.2).unwrap();
    let b = build_net(&NetSource::Vdc, 0.1).unwrap();
    let (na, nb) = (a.points.len() as f64, b.points.len() as f64);
    assert!((na - 160.0).abs() <= 0.15 * 160.0, "{na}");
    assert!((nb - 320.0).abs() <= 0.15 * 320.0, "{nb}");
    assert!((nb / na - 2.0).abs() < 0.1);
    assert!((b.side - 640f64.sqrt()).abs() < 1e-3);
}

#[test]
fn lattice_nets_are_valid() {
    let basis = build_basis(&preset_field(Preset::Quadratic), false);
    let s = danzer_constant_estimate(&basis, &flow_grid(2, 3.0, 0.25).unwrap(), 20_000, 2).unwrap();
    let source = NetSource::Lattice { basis, threshold: s };
    let mut nets = Vec::new();
    for eps in [0.2, 0.1, 0.05] {
        let net = build_net(&source, eps).unwrap();
        assert_eq!(net.offset.len(), 2);
        assert!(net.points.iter().all(|p| p.coords().iter().all(|&c| (0.0..=1.0).contains(&c))));
        let v = validate_net(&net).unwrap();
        assert!(v.valid, "eps {eps}: {v:?}");
        assert!(v.paths_agree);
        nets.push(net);
    }
    let c = fit_constant(&nets);
    assert!(nets.iter().all(|n| n.points.len() as f64 <= c / n.eps + 1e-9));
}

#[test]
fn removing_points_near_the_largest_gap_breaks_validity() {
    let net = build_net(&NetSource::Vdc, 0.1).unwrap();
    let v = validate_net(&net).unwrap();
    let (lo, hi) = (v.empty_lower.clone(), v.empty_upper.clone());
    // drop every point within a wide margin of the reported box
    let margin = 0.25;
    let kept: Vec<Point<f64>> = net
        .points
        .iter()
        .filter(|p| !(0..2).all(|i| p[i] >= lo[i] - margin && p[i] <= hi[i] + margin))
        .cloned()
        .collect();
    assert!(kept.len() < net.points.len());
    let r = largest_empty_box(&kept, &Window::cube(2, 0.0, 1.0).unwrap()).unwrap();
    assert!(r.volume >= v.max_empty_volume);
    assert!(r.volume > net.eps);
}
