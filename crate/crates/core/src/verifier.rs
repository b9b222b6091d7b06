//! Largest empty aligned box and growth counting.
//!
//! A box is empty when its open interior misses every input point; points on
//! its boundary do not block it. Every maximal empty box has each face on the
//! window boundary or touching an input point, so only coordinates drawn from
//! the window bounds and the points need to be considered.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::dyadic::DyadicRational;
use crate::error::{Error, Result};
use crate::geometry::{check_dim, AlignedBox, Point, Scalar, Window};

/// Largest dimension accepted by the search.
pub const MAX_DIM: usize = 4;

/// Cap on `(grid size)^(2(d-1))` for the d >= 3 search.
const GRID_CAP: f64 = 1e12;

#[derive(Clone, Debug, PartialEq)]
pub struct EmptyBoxReport<T> {
    /// Open box whose interior misses every point.
    pub empty_box: AlignedBox<T>,
    pub volume: T,
    /// Distinct candidate coordinates per axis.
    pub witness_grid_size: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Candidate<T> {
    lower: Vec<T>,
    upper: Vec<T>,
    volume: T,
}

impl<T: Scalar> Candidate<T> {
    fn new(lower: Vec<T>, upper: Vec<T>) -> Self {
        let volume = lower
            .iter()
            .zip(&upper)
            .fold(T::one(), |acc, (lo, hi)| acc.mul(&hi.sub(lo)));
        Self {
            lower,
            upper,
            volume,
        }
    }

    /// `Less` means `self` wins: larger volume, then lexicographically
    /// smaller lower corner, then smaller upper corner.
    fn rank(&self, other: &Self) -> Ordering {
        match other.volume.partial_cmp(&self.volume) {
            Some(Ordering::Equal) | None => {}
            Some(o) => return o,
        }
        lex(&self.lower, &other.lower).then_with(|| lex(&self.upper, &other.upper))
    }
}

fn lex<T: PartialOrd>(a: &[T], b: &[T]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    Ordering::Equal
}

fn better<T: Scalar>(a: Option<Candidate<T>>, b: Option<Candidate<T>>) -> Option<Candidate<T>> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(if b.rank(&a) == Ordering::Less { b } else { a }),
    }
}

fn sorted_unique<T: Scalar>(mut v: Vec<T>) -> Vec<T> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    v.dedup_by(|a, b| a == b);
    v
}

/// Points inside the closed window; the rest cannot reach any box interior.
fn inside<T: Scalar>(points: &[Point<T>], w: &Window<T>) -> Result<Vec<Vec<T>>> {
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        check_dim(w.dim(), p.dim())?;
        if w.contains(p)? {
            out.push(p.coords().to_vec());
        }
    }
    Ok(out)
}

fn grid_sizes<T: Scalar>(pts: &[Vec<T>], w: &Window<T>) -> Vec<usize> {
    (0..w.dim())
        .map(|a| {
            let mut v: Vec<T> = pts.iter().map(|p| p[a].clone()).collect();
            v.push(w.lower()[a].clone());
            v.push(w.upper()[a].clone());
            sorted_unique(v).len()
        })
        .collect()
}

fn into_report<T: Scalar>(best: Candidate<T>, grid: Vec<usize>) -> Result<EmptyBoxReport<T>> {
    Ok(EmptyBoxReport {
        empty_box: AlignedBox::open(Point::new(best.lower), Point::new(best.upper))?,
        volume: best.volume,
        witness_grid_size: grid,
    })
}

/// Maximal-volume open aligned box inside `w` that contains no point.
///
/// `d = 2` uses an O(n²) sweep; `d = 3, 4` use a pruned search over the
/// candidate grid. Ties are broken by the lexicographically smallest lower
/// corner, then upper corner.
pub fn largest_empty_box<T: Scalar>(points: &[Point<T>], w: &Window<T>) -> Result<EmptyBoxReport<T>> {
    let d = w.dim();
    if d > MAX_DIM {
        return Err(Error::InvalidArgument(format!("dimension {d} exceeds {MAX_DIM}")));
    }
    let pts = inside(points, w)?;
    let grid = grid_sizes(&pts, w);
    let best = match d {
        1 => slab_search(&pts, w),
        2 => sweep_2d(&pts, w),
        _ => {
            let size = grid.iter().map(|&g| g as f64).fold(1.0, f64::max);
            if size.powi(2 * (d as i32 - 1)) > GRID_CAP {
                return Err(Error::TooManyPoints {
                    count: pts.len(),
                    cap: GRID_CAP.powf(1.0 / (2.0 * (d as f64 - 1.0))) as usize,
                });
            }
            let mut best = None;
            let all: Vec<usize> = (0..pts.len()).collect();
            let mut lower = Vec::with_capacity(d);
            let mut upper = Vec::with_capacity(d);
            grid_search(&pts, w, 0, &all, T::one(), &mut lower, &mut upper, &mut best);
            best
        }
    };
    into_report(best.expect("a window always has an empty sub-box"), grid)
}

/// Exact search for dyadic data on a fixed-width integer grid.
///
/// Coordinates are scaled by a common power of two; the search itself is the
/// same as [`largest_empty_box`]. Falls back to big-integer arithmetic when
/// the scaled values would overflow.
pub fn largest_empty_box_exact(
    points: &[Point<DyadicRational>],
    w: &Window<DyadicRational>,
) -> Result<EmptyBoxReport<DyadicRational>> {
    match to_integer_grid(points, w) {
        Some((ipts, iw, e)) => {
            let r = largest_empty_box(&ipts, &iw)?;
            let d = w.dim() as i64;
            let back = |p: &Point<i128>| {
                Point::new(p.coords().iter().map(|&c| DyadicRational::new(c, e)).collect())
            };
            Ok(EmptyBoxReport {
                empty_box: AlignedBox::open(back(r.empty_box.lower()), back(r.empty_box.upper()))?,
                volume: DyadicRational::new(r.volume, e * d),
                witness_grid_size: r.witness_grid_size,
            })
        }
        None => largest_empty_box(points, w),
    }
}

#[allow(clippy::type_complexity)]
fn to_integer_grid(
    points: &[Point<DyadicRational>],
    w: &Window<DyadicRational>,
) -> Option<(Vec<Point<i128>>, Window<i128>, i64)> {
    let d = w.dim();
    let all = || {
        points
            .iter()
            .flat_map(|p| p.coords().iter())
            .chain(w.lower().coords())
            .chain(w.upper().coords())
    };
    let e = all().filter(|c| !c.is_zero()).map(|c| c.exponent()).min().unwrap_or(0);
    let max_bits = 126 / d as u64 - 1;
    let conv = |c: &DyadicRational| -> Option<i128> {
        if c.is_zero() {
            return Some(0);
        }
        let shift = (c.exponent() - e) as u64;
        if c.mantissa().bits() + shift > max_bits {
            return None;
        }
        let m: i128 = c.mantissa().try_into().ok()?;
        Some(m << shift)
    };
    let conv_point = |p: &Point<DyadicRational>| -> Option<Point<i128>> {
        Some(Point::new(p.coords().iter().map(conv).collect::<Option<Vec<_>>>()?))
    };
    let ipts = points.iter().map(conv_point).collect::<Option<Vec<_>>>()?;
    let lo = conv_point(w.lower())?;
    let hi = conv_point(w.upper())?;
    let iw = Window::new(lo.into_coords(), hi.into_coords()).ok()?;
    Some((ipts, iw, e))
}

fn slab_search<T: Scalar>(pts: &[Vec<T>], w: &Window<T>) -> Option<Candidate<T>> {
    let last = w.dim() - 1;
    let mut ys: Vec<T> = pts.iter().map(|p| p[last].clone()).collect();
    ys.push(w.lower()[last].clone());
    ys.push(w.upper()[last].clone());
    let ys = sorted_unique(ys);
    let mut best = None;
    for pair in ys.windows(2) {
        let mut lower: Vec<T> = w.lower().coords()[..last].to_vec();
        let mut upper: Vec<T> = w.upper().coords()[..last].to_vec();
        lower.push(pair[0].clone());
        upper.push(pair[1].clone());
        best = better(best, Some(Candidate::new(lower, upper)));
    }
    best
}

fn sweep_2d<T: Scalar>(pts: &[Vec<T>], w: &Window<T>) -> Option<Candidate<T>> {
    let mut sorted: Vec<&Vec<T>> = pts.iter().collect();
    sorted.sort_by(|a, b| lex(a, b));
    let (x_min, x_max) = (&w.lower()[0], &w.upper()[0]);
    let (y_min, y_max) = (&w.lower()[1], &w.upper()[1]);

    let from_point = |i: usize, rightwards: bool| -> Option<Candidate<T>> {
        let p = sorted[i];
        let (px, py) = (&p[0], &p[1]);
        let mut best = None;
        let mut top = y_max.clone();
        let mut bot = y_min.clone();
        let emit = |best: Option<Candidate<T>>, other_x: &T, bot: &T, top: &T| {
            let (lo, hi) = if rightwards { (px, other_x) } else { (other_x, px) };
            if lo < hi {
                better(best, Some(Candidate::new(vec![lo.clone(), bot.clone()], vec![hi.clone(), top.clone()])))
            } else {
                best
            }
        };
        // indices in sweep order, skipping points on p's own vertical line
        let order: Box<dyn Iterator<Item = usize>> = if rightwards {
            Box::new(i + 1..sorted.len())
        } else {
            Box::new((0..i).rev())
        };
        let mut order = order.filter(|&j| sorted[j][0] != *px).peekable();
        while let Some(&j) = order.peek() {
            let gx = sorted[j][0].clone();
            best = emit(best, &gx, &bot, &top);
            let mut pinned = false;
            while let Some(&j) = order.peek() {
                if sorted[j][0] != gx {
                    break;
                }
                let qy = &sorted[j][1];
                if qy > py {
                    if *qy < top {
                        top = qy.clone();
                    }
                } else if qy < py {
                    if *qy > bot {
                        bot = qy.clone();
                    }
                } else {
                    pinned = true;
                }
                order.next();
            }
            if pinned {
                return best;
            }
        }
        let edge = if rightwards { x_max } else { x_min };
        emit(best, edge, &bot, &top)
    };

    let swept = (0..sorted.len())
        .into_par_iter()
        .map(|i| better(from_point(i, true), from_point(i, false)))
        .reduce(|| None, better);
    better(swept, slab_search(pts, w))
}

#[allow(clippy::too_many_arguments)]
fn grid_search<T: Scalar>(
    pts: &[Vec<T>],
    w: &Window<T>,
    axis: usize,
    active: &[usize],
    partial: T,
    lower: &mut Vec<T>,
    upper: &mut Vec<T>,
    best: &mut Option<Candidate<T>>,
) {
    let d = w.dim();
    let remaining = |from: usize| {
        (from..d).fold(T::one(), |acc, a| acc.mul(&w.upper()[a].sub(&w.lower()[a])))
    };
    // a tie with the incumbent may still win on corners, so prune only below it
    let beaten = |bound: &T, best: &Option<Candidate<T>>| {
        best.as_ref().is_some_and(|b| *bound < b.volume)
    };

    let mut coords: Vec<T> = active.iter().map(|&i| pts[i][axis].clone()).collect();
    coords.push(w.lower()[axis].clone());
    coords.push(w.upper()[axis].clone());
    let coords = sorted_unique(coords);

    if axis == d - 1 {
        for pair in coords.windows(2) {
            let vol = partial.mul(&pair[1].sub(&pair[0]));
            if beaten(&vol, best) {
                continue;
            }
            lower.push(pair[0].clone());
            upper.push(pair[1].clone());
            let cand = Candidate::new(lower.clone(), upper.clone());
            lower.pop();
            upper.pop();
            *best = better(best.take(), Some(cand));
        }
        return;
    }

    let rest = remaining(axis + 1);
    for (li, lo) in coords.iter().enumerate() {
        for hi in coords[li + 1..].iter().rev() {
            let slab = partial.mul(&hi.sub(lo));
            if beaten(&slab.mul(&rest), best) {
                // shorter intervals from the same `lo` are bounded even lower
                break;
            }
            let next: Vec<usize> = active
                .iter()
                .copied()
                .filter(|&i| pts[i][axis] > *lo && pts[i][axis] < *hi)
                .collect();
            lower.push(lo.clone());
            upper.push(hi.clone());
            grid_search(pts, w, axis + 1, &next, slab, lower, upper, best);
            lower.pop();
            upper.pop();
        }
    }
}

/// Exhaustive reference search, independent of the sweep.
///
/// Tries every pair of candidate coordinates on all axes but the last, finds
/// the points blocking that prism by direct test, and takes each gap between
/// consecutive blocker coordinates on the last axis.
pub fn empty_box_bruteforce<T: Scalar>(points: &[Point<T>], w: &Window<T>) -> Result<EmptyBoxReport<T>> {
    let d = w.dim();
    if d > 3 {
        return Err(Error::InvalidArgument("brute force supports d <= 3".into()));
    }
    if points.len() > 200 {
        return Err(Error::TooManyPoints {
            count: points.len(),
            cap: 200,
        });
    }
    let pts = inside(points, w)?;
    let grid = grid_sizes(&pts, w);
    let axis_coords: Vec<Vec<T>> = (0..d)
        .map(|a| {
            let mut v: Vec<T> = pts.iter().map(|p| p[a].clone()).collect();
            v.push(w.lower()[a].clone());
            v.push(w.upper()[a].clone());
            sorted_unique(v)
        })
        .collect();
    let pairs: Vec<Vec<(T, T)>> = axis_coords
        .iter()
        .take(d - 1)
        .map(|c| {
            let mut out = Vec::new();
            for i in 0..c.len() {
                for j in i + 1..c.len() {
                    out.push((c[i].clone(), c[j].clone()));
                }
            }
            out
        })
        .collect();

    let last = d - 1;
    let mut best = None;
    let mut idx = vec![0usize; d - 1];
    loop {
        let prism: Vec<&(T, T)> = idx.iter().zip(&pairs).map(|(&i, p)| &p[i]).collect();
        let mut levels = vec![w.lower()[last].clone(), w.upper()[last].clone()];
        for p in &pts {
            let blocks = prism
                .iter()
                .enumerate()
                .all(|(a, (lo, hi))| p[a] > *lo && p[a] < *hi);
            if blocks {
                levels.push(p[last].clone());
            }
        }
        let levels = sorted_unique(levels);
        for gap in levels.windows(2) {
            let mut lower: Vec<T> = prism.iter().map(|(lo, _)| lo.clone()).collect();
            let mut upper: Vec<T> = prism.iter().map(|(_, hi)| hi.clone()).collect();
            lower.push(gap[0].clone());
            upper.push(gap[1].clone());
            best = better(best, Some(Candidate::new(lower, upper)));
        }

        let mut k = d - 1;
        loop {
            if k == 0 {
                return into_report(best.expect("nonempty search"), grid);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < pairs[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRow {
    pub t: f64,
    pub count: usize,
    /// `count / t^d`.
    pub ratio: f64,
}

/// Exact point counts for each `t`, from a counting source.
pub fn growth_count<F>(dim: usize, ts: &[f64], mut count_at: F) -> Result<Vec<GrowthRow>>
where
    F: FnMut(f64) -> Result<usize>,
{
    ts.iter()
        .map(|&t| {
            let count = count_at(t)?;
            Ok(GrowthRow {
                t,
                count,
                ratio: count as f64 / t.powi(dim as i32),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit(d: usize) -> Window<f64> {
        Window::cube(d, 0.0, 1.0).unwrap()
    }

    fn pts(v: &[[f64; 2]]) -> Vec<Point<f64>> {
        v.iter().map(|p| Point::new(p.to_vec())).collect()
    }

    #[test]
    fn empty_input_gives_window() {
        let r = largest_empty_box(&[], &unit(2)).unwrap();
        assert_eq!(r.volume, 1.0);
        assert_eq!(r.empty_box.lower().coords(), &[0.0, 0.0]);
        assert_eq!(empty_box_bruteforce(&[], &unit(2)).unwrap(), r);
    }

    #[test]
    fn single_center_point() {
        let r = largest_empty_box(&pts(&[[0.5, 0.5]]), &unit(2)).unwrap();
        assert_eq!(r.volume, 0.5);
        // tie-break: lowest lower corner, then lowest upper corner
        assert_eq!(r.empty_box.lower().coords(), &[0.0, 0.0]);
        assert_eq!(r.empty_box.upper().coords(), &[0.5, 1.0]);
        assert_eq!(r.witness_grid_size, vec![3, 3]);
    }

    #[test]
    fn two_by_two_grid() {
        let third = 1.0 / 3.0;
        let two = 2.0 / 3.0;
        let p = pts(&[[third, third], [third, two], [two, third], [two, two]]);
        let r = largest_empty_box(&p, &unit(2)).unwrap();
        let b = empty_box_bruteforce(&p, &unit(2)).unwrap();
        assert!((r.volume - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r, b);
    }

    #[test]
    fn boundary_points_do_not_block() {
        let p = pts(&[[0.0, 0.5], [1.0, 0.5], [0.5, 0.0]]);
        let r = largest_empty_box(&p, &unit(2)).unwrap();
        assert_eq!(r.volume, 1.0);
    }

    #[test]
    fn matches_bruteforce_random_2d() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let n = rng.gen_range(0..25);
            // coarse grid forces coordinate ties
            let p: Vec<Point<f64>> = (0..n)
                .map(|_| Point::new(vec![rng.gen_range(0..8) as f64 / 8.0, rng.gen_range(0..8) as f64 / 8.0]))
                .collect();
            assert_eq!(largest_empty_box(&p, &unit(2)).unwrap(), empty_box_bruteforce(&p, &unit(2)).unwrap());
        }
    }

    #[test]
    fn matches_bruteforce_random_3d() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let n = rng.gen_range(0..10);
            let p: Vec<Point<f64>> = (0..n)
                .map(|_| Point::new((0..3).map(|_| rng.gen_range(0..6) as f64 / 6.0).collect()))
                .collect();
            assert_eq!(largest_empty_box(&p, &unit(3)).unwrap(), empty_box_bruteforce(&p, &unit(3)).unwrap());
        }
    }

    #[test]
    fn four_dimensional_search_runs() {
        let p = vec![Point::new(vec![0.5; 4])];
        let r = largest_empty_box(&p, &unit(4)).unwrap();
        assert_eq!(r.volume, 0.5);
    }

    #[test]
    fn exact_grid_path_matches_generic() {
        let p: Vec<Point<DyadicRational>> = [[3, 1], [1, 3], [2, 2]]
            .iter()
            .map(|c| Point::new(c.iter().map(|&v| DyadicRational::new(v, -2)).collect()))
            .collect();
        let w = Window::cube(2, DyadicRational::zero(), DyadicRational::one()).unwrap();
        assert_eq!(largest_empty_box_exact(&p, &w).unwrap(), largest_empty_box(&p, &w).unwrap());
    }

    #[test]
    fn rejects_high_dimension_and_large_bruteforce() {
        assert!(largest_empty_box::<f64>(&[], &unit(5)).is_err());
        let many: Vec<Point<f64>> = (0..201).map(|i| Point::new(vec![i as f64 / 201.0, 0.5])).collect();
        assert!(matches!(empty_box_bruteforce(&many, &unit(2)), Err(Error::TooManyPoints { .. })));
    }

    #[test]
    fn growth_of_n_times_2n() {
        // N x 2N on [0, 100]^2 has 101 * 51 points
        let rows = growth_count(2, &[100.0], |t| {
            let t = t as i64;
            Ok(((0..=t).count()) * ((0..=t).step_by(2).count()))
        })
        .unwrap();
        assert_eq!(rows[0].count, 5151);
        assert!((rows[0].ratio - 0.5151).abs() < 1e-12);
    }
}
