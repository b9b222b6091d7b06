//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero on any failure.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use danzer::lattice::{
    build_basis, danzer_constant_estimate, enumerate_lattice, flow_grid, norm_product, preset_field,
    shortest_vector_under_flow, DiagonalFlowVector, LatticeBasis, Preset,
};
use danzer::epsnet::{build_net, fit_constant, validate_net, NetSource};
use danzer::vdc::{asymmetry_gap, decode, encode, enumerate, enumerate_positive, growth_map_g, hit_box};
use danzer::verifier::{empty_box_bruteforce, growth_count, largest_empty_box, largest_empty_box_exact};
use danzer::{AlignedBox, DyadicRational as D, Point, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn d(v: i64) -> D {
    D::from_int(v)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn positive_window(t: i64) -> Window<D> {
    Window::cube(2, d(0), d(t)).unwrap()
}

/// Random dyadic in `[lo, hi]` with resolution `2^-8`.
fn random_dyadic(rng: &mut ChaCha8Rng, lo: &D, hi: &D) -> D {
    let steps = (&(hi - lo)).shl(8).to_bigint().expect("integral span");
    let steps: i64 = steps.try_into().expect("small span");
    lo + &D::new(rng.gen_range(0..=steps), -8)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let w = positive_window(128);
    let pts: Vec<Point<D>> = enumerate_positive(&w).map_err(|e| e.to_string())?.into_iter().map(|(_, p)| p).collect();
    let report = largest_empty_box_exact(&pts, &w).map_err(|e| e.to_string())?;
    check(report.volume <= d(64), || format!("empty box of volume {} in [0,128]^2", report.volume))?;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let (lo, hi) = (d(-100), d(100));
    let mut boxes = Vec::new();
    // exact volume 64: power-of-two widths
    for _ in 0..1000 {
        let j = rng.gen_range(-1i64..=7);
        let width = D::pow2(j);
        let height = D::pow2(6 - j);
        let x = random_dyadic(&mut rng, &lo, &(&hi - &width));
        let y = random_dyadic(&mut rng, &lo, &(&hi - &height));
        boxes.push(AlignedBox::from_bounds(vec![x.clone(), y.clone()], vec![&x + &width, &y + &height]).unwrap());
    }
    // arbitrary dyadic widths with the least 2^-20-grid height reaching 64
    for _ in 0..200 {
        let width = D::new(rng.gen_range(96i64..=(150 << 8)), -8);
        let mut m = (64.0 / width.to_f64() * (1u64 << 20) as f64).floor() as i64;
        while &width * &D::new(m, -20) < d(64) {
            m += 1;
        }
        let height = D::new(m, -20);
        let x = random_dyadic(&mut rng, &lo, &(&hi - &width).max(lo.clone()));
        let y_hi = &hi - &height;
        let y = if y_hi > lo { random_dyadic(&mut rng, &lo, &d(y_hi.to_f64().floor() as i64)) } else { lo.clone() };
        boxes.push(AlignedBox::from_bounds(vec![x.clone(), y.clone()], vec![&x + &width, &y + &height]).unwrap());
    }
    for r in &boxes {
        let hit = hit_box(r).map_err(|e| format!("{r:?}: {e}"))?;
        check(r.contains(&hit.point).unwrap(), || format!("{:?} not in {r:?}", hit.point))?;
        let (signs, seq) = decode(&hit.point).ok_or_else(|| format!("{:?} is not in D", hit.point))?;
        check(encode(&seq).reflect(&signs).unwrap() == hit.point, || "re-encoding mismatch".into())?;
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < 120.0, || format!("took {secs:.1}s"))?;
    Ok(format!(
        "max empty box in [0,128]^2 = {} over {} points; {} boxes hit; {secs:.2}s",
        report.volume,
        pts.len(),
        boxes.len()
    ))
}

fn criterion_2() -> Outcome {
    let ts = [64.0, 128.0, 256.0, 512.0];
    let pos = growth_count(2, &ts, |t| Ok(enumerate_positive(&positive_window(t as i64))?.len()))
        .map_err(|e| e.to_string())?;
    let full = growth_count(2, &ts, |t| {
        let t = t as i64;
        Ok(enumerate(&Window::cube(2, d(-t), d(t))?)?.len())
    })
    .map_err(|e| e.to_string())?;
    for (p, f) in pos.iter().zip(&full) {
        check((0.4..=0.6).contains(&p.ratio), || format!("D+ ratio {} at T={}", p.ratio, p.t))?;
        check(f.ratio <= 2.5, || format!("D ratio {} at T={}", f.ratio, f.t))?;
        check(f.count == 4 * (p.count - 1) + 1, || format!("symmetric count mismatch at T={}", p.t))?;
    }
    let fmt = |rows: &[danzer::verifier::GrowthRow]| {
        rows.iter().map(|r| format!("{:.4}", r.ratio)).collect::<Vec<_>>().join(", ")
    };
    Ok(format!("D+ ratios [{}]; D ratios [{}]", fmt(&pos), fmt(&full)))
}

fn criterion_3() -> Outcome {
    let pts = enumerate_positive(&positive_window(512)).map_err(|e| e.to_string())?;
    let mut images = BTreeSet::new();
    let mut worst = d(0);
    for (seq, p) in &pts {
        let g = growth_map_g(seq);
        let dist = p.squared_distance(&g).unwrap();
        check(dist <= d(5), || format!("|p - g(p)|^2 = {dist} at {p:?}"))?;
        worst = worst.max(dist);
        check(images.insert((g[0].clone(), g[1].clone())), || format!("g not injective at {p:?}"))?;
    }
    Ok(format!("{} points, max |p - g(p)|^2 = {worst}, g injective", pts.len()))
}

fn criterion_4() -> Outcome {
    let pts = enumerate(&Window::cube(2, d(-256), d(256)).unwrap()).map_err(|e| e.to_string())?;
    let quarter = D::pow2(-2);
    let mut min_offset: Option<D> = None;
    for vp in &pts {
        let p = &vp.point;
        let gap = asymmetry_gap(p);
        check(gap.is_zero() || gap > d(1), || format!("|x - y| = {gap} at {p:?}"))?;
        // |y - x - 1/4| >= 1/4 is distance >= sqrt(2)/8 from y = x + 1/4
        let off = (&(&p[1] - &p[0]) - &quarter).abs();
        check(off >= quarter, || format!("{p:?} within sqrt(2)/8 of y = x + 1/4"))?;
        min_offset = Some(min_offset.map_or(off.clone(), |m| m.min(off)));
    }
    let dist = min_offset.map_or(f64::INFINITY, |m| m.to_f64() / 2f64.sqrt());
    Ok(format!("{} points, min distance to y = x + 1/4 = {dist:.5}", pts.len()))
}

fn random_flow(rng: &mut ChaCha8Rng, dim: usize, bound: f64) -> DiagonalFlowVector {
    loop {
        let free: Vec<f64> = (0..dim - 1).map(|_| rng.gen_range(-bound..=bound)).collect();
        let last: f64 = -free.iter().sum::<f64>();
        if last.abs() <= bound {
            return DiagonalFlowVector::from_free(&free).unwrap();
        }
    }
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut summary = Vec::new();
    for (preset, half, trials) in [(Preset::Quadratic, 20.0, 100), (Preset::Cubic, 6.0, 100), (Preset::Quartic, 4.0, 25)] {
        let b = build_basis(&preset_field(preset), false);
        let dim = b.dim();
        let pts = enumerate_lattice(&b, &Window::cube(dim, -half, half).unwrap()).map_err(|e| e.to_string())?;
        let mut nonzero = 0;
        for lp in &pts {
            if lp.coeffs.iter().all(|&c| c == 0) {
                continue;
            }
            nonzero += 1;
            let n = f64::from(norm_product(&lp.point));
            let nearest = n.round();
            check(nearest >= 1.0 && (n - nearest).abs() <= 1e-9, || {
                format!("norm product {n} at coefficients {:?}", lp.coeffs)
            })?;
        }
        let mut min_len = f64::INFINITY;
        for _ in 0..trials {
            let t = random_flow(&mut rng, dim, 3.0);
            let len = shortest_vector_under_flow(&b, &t).map_err(|e| e.to_string())?;
            check(len >= 1.0 - 1e-6, || format!("shortest vector {len} under flow {:?}", t.t()))?;
            min_len = min_len.min(len);
        }
        summary.push(format!("d={dim}: {nonzero} norms integral, min shortest {min_len:.4} over {trials} flows"));
    }
    let id = LatticeBasis::identity(2).unwrap();
    let t = DiagonalFlowVector::new(vec![1.5, -1.5]).unwrap();
    let len = shortest_vector_under_flow(&id, &t).map_err(|e| e.to_string())?;
    check(len < 1.0, || format!("identity basis passed the probe with {len}"))?;
    summary.push(format!("Z^2 at t=(1.5,-1.5): {len:.4} < 1"));
    Ok(summary.join("; "))
}

fn criterion_6() -> Outcome {
    let b = build_basis(&preset_field(Preset::Quadratic), false);
    let samples = 100_000;
    let s_small = danzer_constant_estimate(&b, &flow_grid(2, 2.5, 0.25).unwrap(), samples, 6)
        .map_err(|e| e.to_string())?;
    let s_large = danzer_constant_estimate(&b, &flow_grid(2, 3.0, 0.25).unwrap(), samples, 6)
        .map_err(|e| e.to_string())?;
    let change = (s_large - s_small).abs() / s_small;
    check(change < 0.10, || format!("threshold moved {s_small} -> {s_large}"))?;
    let w = Window::cube(2, -50.0, 50.0).unwrap();
    let pts: Vec<Point<f64>> = enumerate_lattice(&b, &w)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|lp| lp.point.to_f64())
        .collect();
    let report = largest_empty_box(&pts, &w).map_err(|e| e.to_string())?;
    check(report.volume <= s_large, || format!("empty box {} exceeds threshold {s_large}", report.volume))?;
    Ok(format!(
        "threshold {s_small:.4} (bound 2.5) -> {s_large:.4} (bound 3.0), change {:.2}%; max empty box {:.4} over {} points",
        100.0 * change,
        report.volume,
        pts.len()
    ))
}

fn criterion_7() -> Outcome {
    let mut nets = Vec::new();
    let mut lines = Vec::new();
    for eps in [0.2, 0.1, 0.05] {
        let net = build_net(&NetSource::Vdc, eps).map_err(|e| e.to_string())?;
        let v = validate_net(&net).map_err(|e| e.to_string())?;
        check(v.valid, || format!("eps {eps}: empty box {} in the unit square", v.max_empty_volume))?;
        check(v.paths_agree, || format!("eps {eps}: scaled and unscaled checks disagree"))?;
        lines.push(format!("eps {eps}: |net| {} max empty {:.4}", net.points.len(), v.max_empty_volume));
        nets.push(net);
    }
    let c = fit_constant(&nets);
    for net in &nets {
        check(net.points.len() as f64 <= c / net.eps + 1e-9, || "size law violated".into())?;
    }
    Ok(format!("{}; fitted C = {c:.2}", lines.join("; ")))
}

fn random_points(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Point<f64>> {
    // half the instances on a coarse grid to exercise ties
    let coarse = rng.gen_bool(0.5);
    (0..n)
        .map(|_| {
            Point::new(
                (0..dim)
                    .map(|_| {
                        if coarse {
                            rng.gen_range(0..=16) as f64 / 16.0
                        } else {
                            rng.gen::<f64>()
                        }
                    })
                    .collect(),
            )
        })
        .collect()
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let unit2 = Window::cube(2, 0.0, 1.0).unwrap();
    let unit3 = Window::cube(3, 0.0, 1.0).unwrap();
    for i in 0..100 {
        let n = rng.gen_range(0..=200);
        let pts = random_points(&mut rng, n, 2);
        let fast = largest_empty_box(&pts, &unit2).map_err(|e| e.to_string())?;
        let slow = empty_box_bruteforce(&pts, &unit2).map_err(|e| e.to_string())?;
        check(fast == slow, || format!("2-D instance {i} ({n} points): {fast:?} vs {slow:?}"))?;
    }
    for i in 0..20 {
        let n = rng.gen_range(0..=40);
        let pts = random_points(&mut rng, n, 3);
        let fast = largest_empty_box(&pts, &unit3).map_err(|e| e.to_string())?;
        let slow = empty_box_bruteforce(&pts, &unit3).map_err(|e| e.to_string())?;
        check(fast == slow, || format!("3-D instance {i} ({n} points): {fast:?} vs {slow:?}"))?;
    }
    let mut pts = random_points(&mut rng, 10, 2);
    let mut last = largest_empty_box(&pts, &unit2).map_err(|e| e.to_string())?.volume;
    for k in 0..100 {
        pts.extend(random_points(&mut rng, 1, 2));
        let v = largest_empty_box(&pts, &unit2).map_err(|e| e.to_string())?.volume;
        check(v <= last, || format!("insertion {k} raised the volume {last} -> {v}"))?;
        last = v;
    }
    Ok("100 planar and 20 spatial instances match brute force; 100 insertions monotone".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 dyadic set: empty boxes <= 64, volume-64 boxes hit", criterion_1),
        ("2 dyadic set: growth ratios", criterion_2),
        ("3 dyadic set: growth map displacement and injectivity", criterion_3),
        ("4 dyadic set: asymmetry gap", criterion_4),
        ("5 lattices: norm integrality and flow probe", criterion_5),
        ("6 lattices: threshold stability", criterion_6),
        ("7 eps-nets: validity and size law", criterion_7),
        ("8 verifier: brute-force agreement and monotonicity", criterion_8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS ({secs:.2}s) {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({secs:.2}s) {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
