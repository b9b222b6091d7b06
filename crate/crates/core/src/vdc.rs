//! The dyadic bit-reversal set
//!
//! `D = { (±Σ a_n 2^n, ±Σ a_n 2^-n) : (a_n) a finitely supported 0/1 sequence }`
//!
//! and its positive part `D+`. Every aligned box of volume 16 in the closed
//! positive quadrant meets `D+`, hence every aligned box of volume 64 meets
//! `D`. [`hit_box`] finds such a point constructively.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::dyadic::DyadicRational;
use crate::error::{Error, Result};
use crate::geometry::{check_dim, AlignedBox, Point, Sign, Window};

type D = DyadicRational;

/// Volume that every aligned box must reach to be guaranteed a point of `D`.
pub const GUARANTEED_VOLUME: i64 = 64;
/// Same guarantee for `D+` and boxes inside the closed positive quadrant.
pub const POSITIVE_QUADRANT_VOLUME: i64 = 16;

/// Finitely supported 0/1 sequence indexed by the integers, stored as the set
/// of indices carrying a one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteBitSequence {
    ones: BTreeSet<i64>,
}

impl FiniteBitSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_indices<I: IntoIterator<Item = i64>>(indices: I) -> Self {
        Self {
            ones: indices.into_iter().collect(),
        }
    }

    pub fn set(&mut self, n: i64) {
        self.ones.insert(n);
    }

    pub fn get(&self, n: i64) -> bool {
        self.ones.contains(&n)
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.ones.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.ones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ones.is_empty()
    }

    /// Indices from `offset` upward given by the binary digits of `m >= 0`.
    fn set_binary_digits(&mut self, m: &BigInt, offset: i64, step: i64) {
        let bits = m.bits();
        for i in 0..bits {
            if m.bit(i) {
                self.ones.insert(offset + step * i as i64);
            }
        }
    }
}

/// `Σ_{n in S} 2^(sign * n)` computed exactly.
fn power_sum<I: Iterator<Item = i64>>(indices: I, sign: i64) -> D {
    let exps: Vec<i64> = indices.map(|n| sign * n).collect();
    let Some(&min) = exps.iter().min() else {
        return D::zero();
    };
    let mut m = BigInt::zero();
    for e in exps {
        m.set_bit((e - min) as u64, true);
    }
    D::new(m, min)
}

/// `(Σ a_n 2^n, Σ a_n 2^-n)`, the point of `D+` carried by `seq`.
pub fn encode(seq: &FiniteBitSequence) -> Point<D> {
    Point::new(vec![power_sum(seq.support(), 1), power_sum(seq.support(), -1)])
}

/// Inverse of [`encode`] on `D+`: reads the sequence off the binary digits of
/// `x` and checks that `y` matches. `None` when `p` is not in `D+`.
pub fn decode_positive(p: &Point<D>) -> Option<FiniteBitSequence> {
    if p.dim() != 2 || p[0].is_negative() || p[1].is_negative() {
        return None;
    }
    let mut seq = FiniteBitSequence::new();
    if !p[0].is_zero() {
        seq.set_binary_digits(p[0].mantissa(), p[0].exponent(), 1);
    }
    (encode(&seq) == *p).then_some(seq)
}

/// Membership in `D`: sign pattern plus the sequence of the reflected point.
pub fn decode(p: &Point<D>) -> Option<(Vec<Sign>, FiniteBitSequence)> {
    if p.dim() != 2 {
        return None;
    }
    let signs: Vec<Sign> = p
        .coords()
        .iter()
        .map(|c| if c.is_negative() { Sign::Minus } else { Sign::Plus })
        .collect();
    let q = p.reflect(&signs).ok()?;
    decode_positive(&q).map(|s| (signs, s))
}

/// The bounded-distance bijection onto `N × 2N` used for counting:
/// `(Σ_{n>=0} a_n 2^n, Σ_{n<0} a_n 2^-n)`.
pub fn growth_map_g(seq: &FiniteBitSequence) -> Point<D> {
    Point::new(vec![
        power_sum(seq.support().filter(|&n| n >= 0), 1),
        power_sum(seq.support().filter(|&n| n < 0), -1),
    ])
}

/// `|x - y|`. Zero on the diagonal, otherwise greater than one for points of `D+`.
pub fn asymmetry_gap(p: &Point<D>) -> D {
    (&p[0] - &p[1]).abs()
}

/// Result of a constructive hit.
#[derive(Clone, Debug, PartialEq)]
pub struct VdcHit {
    pub point: Point<D>,
    pub signs: Vec<Sign>,
    pub sequence: FiniteBitSequence,
    /// The split index `k` the digit selection used.
    pub split: i64,
}

/// Split index for a box of width `t`: the `k` with `2^k <= t/2 < 2^(k+1)`.
///
/// The least multiple of `2^k` above `x` lies in `(x, x + 2^k]`, and the low
/// bits add strictly less than `2^k`, so the result stays below `x + t` even
/// when `t/2 = 2^k`.
pub fn split_index(t: &D) -> i64 {
    t.floor_log2().expect("positive width") - 1
}

/// A sequence whose point lies in `r`, for `r` inside the closed positive
/// quadrant with volume at least 16.
///
/// High bits (`n >= k`) pick the least multiple of `2^k` above the left edge,
/// low bits (`n < k`) pick the least multiple of `2^(1-k)` above the bottom
/// edge. Each half perturbs the other coordinate by less than the remaining
/// slack.
pub fn hit_box_positive(r: &AlignedBox<D>) -> Result<FiniteBitSequence> {
    check_dim(2, r.dim())?;
    if r.lower().coords().iter().any(|c| c.is_negative()) {
        return Err(Error::OutOfOrthant);
    }
    let volume = r.volume();
    let required = D::from_int(POSITIVE_QUADRANT_VOLUME);
    if volume < required {
        return Err(Error::VolumeTooSmall {
            volume: volume.to_f64(),
            required: required.to_f64(),
        });
    }
    let (x, y) = (&r.lower()[0], &r.lower()[1]);
    let t = r.side(0);
    let k = split_index(&t);

    let mut seq = FiniteBitSequence::new();
    let high = x.next_multiple_of_pow2(k).floor_div_pow2(k);
    seq.set_binary_digits(&high, k, 1);
    let low = y.next_multiple_of_pow2(1 - k).floor_div_pow2(1 - k);
    seq.set_binary_digits(&low, k - 1, -1);

    debug_assert!(r.interior_contains(&encode(&seq)).unwrap_or(false));
    Ok(seq)
}

/// A point of `D` inside `r`, for any aligned box of volume at least 64.
///
/// Works on the quadrant piece of largest volume (ties go to the first piece
/// in orthant order), reflected into the positive quadrant.
pub fn hit_box(r: &AlignedBox<D>) -> Result<VdcHit> {
    check_dim(2, r.dim())?;
    let volume = r.volume();
    let required = D::from_int(GUARANTEED_VOLUME);
    if volume < required {
        return Err(Error::VolumeTooSmall {
            volume: volume.to_f64(),
            required: required.to_f64(),
        });
    }
    let pieces = r.quadrant_pieces();
    let mut best = 0;
    for (i, (_, piece)) in pieces.iter().enumerate() {
        if piece.volume() > pieces[best].1.volume() {
            best = i;
        }
    }
    let (signs, piece) = &pieces[best];
    let positive = piece.reflect(signs)?;
    let sequence = hit_box_positive(&positive)?;
    let split = split_index(&positive.side(0));
    let point = encode(&sequence).reflect(signs)?;
    debug_assert!(r.contains(&point).unwrap_or(false));
    Ok(VdcHit {
        point,
        signs: signs.clone(),
        sequence,
        split,
    })
}

/// All points of `D+` in a window inside the closed positive quadrant.
///
/// Depth-first over bit positions from the largest index down; the bound on
/// the support (`2^n <= x_max`, `2^-n <= y_max`) keeps the search finite and
/// partial sums above the window prune whole subtrees. Output order is the
/// search order and is deterministic.
pub fn enumerate_positive(w: &Window<D>) -> Result<Vec<(FiniteBitSequence, Point<D>)>> {
    check_dim(2, w.dim())?;
    if w.lower().coords().iter().any(|c| c.is_negative()) {
        return Err(Error::OutOfOrthant);
    }
    let estimate = w.volume().to_f64() / 2.0 + 2.0 * (w.upper()[0].to_f64() + w.upper()[1].to_f64());
    let cap = crate::point_cap();
    if estimate > cap as f64 {
        return Err(Error::WindowTooLarge { estimate, cap });
    }

    let (xmax, ymax) = (&w.upper()[0], &w.upper()[1]);
    let mut out = Vec::new();
    let origin = Point::new(vec![D::zero(), D::zero()]);
    let (Some(n_hi), Some(y_log)) = (xmax.floor_log2(), ymax.floor_log2()) else {
        // one of the upper bounds is zero: only the origin can qualify
        if w.contains(&origin)? {
            out.push((FiniteBitSequence::new(), origin));
        }
        return Ok(out);
    };
    let n_lo = -y_log;
    if n_lo > n_hi {
        if w.contains(&origin)? {
            out.push((FiniteBitSequence::new(), origin));
        }
        return Ok(out);
    }
    if n_hi - n_lo > 120 {
        return Err(Error::Overflow);
    }

    // x scaled by 2^-n_lo and y scaled by 2^n_hi are integers
    let to_u128 = |v: BigInt| v.to_u128().unwrap_or(u128::MAX);
    let scale_floor = |v: &D, k: i64| to_u128(v.floor_div_pow2(k));
    let scale_ceil = |v: &D, k: i64| {
        let f = v.floor_div_pow2(k);
        let exact = v.is_multiple_of_pow2(k);
        to_u128(if exact { f } else { f + 1 })
    };
    let bounds = ScaledBounds {
        x_lo: scale_ceil(&w.lower()[0], n_lo),
        x_hi: scale_floor(xmax, n_lo),
        y_lo: scale_ceil(&w.lower()[1], -n_hi),
        y_hi: scale_floor(ymax, -n_hi),
    };

    let mut stack = Vec::new();
    let mut raw = Vec::new();
    dfs(n_hi, n_lo, n_hi, 0, 0, &bounds, &mut stack, &mut raw);
    for (ones, xs, ys) in raw {
        let p = Point::new(vec![D::new(xs, n_lo), D::new(ys, -n_hi)]);
        out.push((FiniteBitSequence::from_indices(ones), p));
    }
    Ok(out)
}

struct ScaledBounds {
    x_lo: u128,
    x_hi: u128,
    y_lo: u128,
    y_hi: u128,
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    n: i64,
    n_lo: i64,
    n_hi: i64,
    xs: u128,
    ys: u128,
    b: &ScaledBounds,
    stack: &mut Vec<i64>,
    out: &mut Vec<(Vec<i64>, u128, u128)>,
) {
    if n < n_lo {
        if xs >= b.x_lo && ys >= b.y_lo {
            out.push((stack.clone(), xs, ys));
        }
        return;
    }
    // remaining indices n_lo..=n can add at most these amounts
    let x_room = (1u128 << (n - n_lo + 1)) - 1;
    let y_room = ((1u128 << (n - n_lo + 1)) - 1) << (n_hi - n);
    if xs + x_room < b.x_lo || ys + y_room < b.y_lo {
        return;
    }
    let dx = 1u128 << (n - n_lo);
    let dy = 1u128 << (n_hi - n);
    if xs + dx <= b.x_hi && ys + dy <= b.y_hi {
        stack.push(n);
        dfs(n - 1, n_lo, n_hi, xs + dx, ys + dy, b, stack, out);
        stack.pop();
    }
    dfs(n - 1, n_lo, n_hi, xs, ys, b, stack, out);
}

/// A point of `D` with its sign pattern and sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct VdcPoint {
    pub point: Point<D>,
    pub signs: Vec<Sign>,
    pub sequence: FiniteBitSequence,
}

/// All points of `D` in an arbitrary window, each listed once.
///
/// The origin is the only point shared by several sign patterns; it is kept
/// with the first pattern in orthant order.
pub fn enumerate(w: &Window<D>) -> Result<Vec<VdcPoint>> {
    check_dim(2, w.dim())?;
    let mut seen: HashSet<Vec<D>> = HashSet::new();
    let mut out = Vec::new();
    for (signs, piece) in w.bounds().quadrant_pieces() {
        let positive = piece.reflect(&signs)?;
        // degenerate pieces can only hold points on an axis, which means the origin
        let Ok(pw) = Window::from_box(&positive) else {
            let origin = Point::new(vec![D::zero(), D::zero()]);
            if positive.contains(&origin)? && seen.insert(origin.coords().to_vec()) {
                out.push(VdcPoint {
                    point: origin,
                    signs: signs.clone(),
                    sequence: FiniteBitSequence::new(),
                });
            }
            continue;
        };
        for (sequence, p) in enumerate_positive(&pw)? {
            let point = p.reflect(&signs)?;
            if seen.insert(point.coords().to_vec()) {
                out.push(VdcPoint {
                    point,
                    signs: signs.clone(),
                    sequence,
                });
            }
        }
    }
    Ok(out)
}
