//! Nets for aligned boxes in the unit cube, cut out of the dyadic set or a
//! lattice and rescaled.

use num_bigint::BigInt;

use crate::dyadic::DyadicRational;
use crate::error::{Error, Result};
use crate::geometry::{Point, Window};
use crate::lattice::{enumerate_lattice, LatticeBasis};
use crate::vdc::{self, GUARANTEED_VOLUME};
use crate::verifier::{largest_empty_box, largest_empty_box_exact};
use crate::TOLERANCE;

/// Fixed offset of the lattice window, chosen away from rational values.
pub const LATTICE_OFFSET: [f64; 4] = [
    std::f64::consts::FRAC_1_PI,
    0.577_215_664_901_532_9,
    0.267_949_192_431_122_7,
    std::f64::consts::LN_2,
];

/// Resolution of the dyadic side length.
const SIDE_EXPONENT: i64 = -16;

#[derive(Clone, Debug)]
pub enum NetSource {
    Vdc,
    /// A lattice with its volume threshold, usually a sampled estimate.
    Lattice { basis: LatticeBasis, threshold: f64 },
}

impl NetSource {
    pub fn name(&self) -> &'static str {
        match self {
            NetSource::Vdc => "vdc",
            NetSource::Lattice { .. } => "lattice",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            NetSource::Vdc => 2,
            NetSource::Lattice { basis, .. } => basis.dim(),
        }
    }

    pub fn threshold(&self) -> f64 {
        match self {
            NetSource::Vdc => GUARANTEED_VOLUME as f64,
            NetSource::Lattice { threshold, .. } => *threshold,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EpsNet {
    pub eps: f64,
    pub source: &'static str,
    /// Net points in `[0,1]^d`.
    pub points: Vec<Point<f64>>,
    /// Source points in `[0,L]^d` before rescaling; dyadic source only.
    pub unscaled: Option<Vec<Point<DyadicRational>>>,
    /// Side `L` of the cube the source was cut from.
    pub side: f64,
    pub side_exact: Option<DyadicRational>,
    pub threshold: f64,
    /// Translation of the lattice window; all zero for the dyadic source.
    pub offset: Vec<f64>,
}

impl EpsNet {
    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    /// `|net| * eps`, the smallest `C` with `|net| <= C / eps`.
    pub fn claimed_constant(&self) -> f64 {
        self.points.len() as f64 * self.eps
    }
}

/// Smallest multiple of `2^SIDE_EXPONENT` whose square times `eps` reaches `s`.
fn dyadic_side(eps: &DyadicRational, s: &DyadicRational) -> DyadicRational {
    let approx = (s.to_f64() / eps.to_f64()).sqrt();
    let unit = (approx * 2f64.powi(-SIDE_EXPONENT as i32)).floor() as i64;
    let mut m = BigInt::from((unit - 2).max(1));
    loop {
        let l = DyadicRational::new(m.clone(), SIDE_EXPONENT);
        if &(&l * &l) * eps >= *s {
            return l;
        }
        m += 1;
    }
}

pub fn build_net(source: &NetSource, eps: f64) -> Result<EpsNet> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("eps = {eps} must lie in (0, 1)")));
    }
    let d = source.dim();
    let s = source.threshold();
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidArgument(format!("threshold {s} must be positive")));
    }
    let cap = crate::point_cap();
    match source {
        NetSource::Vdc => {
            let eps_d = DyadicRational::from_f64(eps).expect("finite");
            let side = dyadic_side(&eps_d, &DyadicRational::from_int(GUARANTEED_VOLUME));
            let w = Window::cube(2, DyadicRational::zero(), side.clone())?;
            let pts = match vdc::enumerate_positive(&w) {
                Ok(p) => p,
                Err(Error::WindowTooLarge { .. }) | Err(Error::Overflow) => {
                    return Err(Error::EpsTooSmall { eps })
                }
                Err(e) => return Err(e),
            };
            let l = side.to_f64();
            let unscaled: Vec<Point<DyadicRational>> = pts.into_iter().map(|(_, p)| p).collect();
            let points = unscaled
                .iter()
                .map(|p| Point::new(p.coords().iter().map(|c| (c.to_f64() / l).clamp(0.0, 1.0)).collect()))
                .collect();
            Ok(EpsNet {
                eps,
                source: source.name(),
                points,
                unscaled: Some(unscaled),
                side: l,
                side_exact: Some(side),
                threshold: s,
                offset: vec![0.0; 2],
            })
        }
        NetSource::Lattice { basis, .. } => {
            if d > LATTICE_OFFSET.len() {
                return Err(Error::InvalidArgument(format!("dimension {d} exceeds 4")));
            }
            let l = (s / eps).powf(1.0 / d as f64);
            let offset = LATTICE_OFFSET[..d].to_vec();
            let expected = l.powi(d as i32) / f64::from(basis.covolume());
            if expected > cap as f64 {
                return Err(Error::EpsTooSmall { eps });
            }
            let w = Window::new(offset.clone(), offset.iter().map(|o| o + l).collect())?;
            let pts = match enumerate_lattice(basis, &w) {
                Ok(p) => p,
                Err(Error::WindowTooLarge { .. }) => return Err(Error::EpsTooSmall { eps }),
                Err(e) => return Err(e),
            };
            let points = pts
                .iter()
                .map(|lp| {
                    Point::new(
                        lp.point
                            .coords()
                            .iter()
                            .zip(&offset)
                            .map(|(&x, o)| ((f64::from(x) - o) / l).clamp(0.0, 1.0))
                            .collect(),
                    )
                })
                .collect();
            Ok(EpsNet {
                eps,
                source: source.name(),
                points,
                unscaled: None,
                side: l,
                side_exact: None,
                threshold: s,
                offset,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetValidation {
    pub eps: f64,
    pub valid: bool,
    /// Largest empty box volume in `[0,1]^d`.
    pub max_empty_volume: f64,
    pub empty_lower: Vec<f64>,
    pub empty_upper: Vec<f64>,
    /// `eps - max_empty_volume`.
    pub margin: f64,
    /// Largest empty box volume of the unscaled points in `[0,L]^d`, exact
    /// for the dyadic source.
    pub unscaled_volume: f64,
    /// Whether the check in `[0,L]^d` against `eps * L^d` agrees with the
    /// check in the unit cube.
    pub paths_agree: bool,
}

pub fn validate_net(net: &EpsNet) -> Result<NetValidation> {
    let d = net.dim();
    let unit = Window::cube(d, 0.0, 1.0)?;
    let r = largest_empty_box(&net.points, &unit)?;
    let scaled_ok = r.volume <= net.eps + TOLERANCE;
    let (unscaled_volume, unscaled_ok) = match (&net.unscaled, &net.side_exact) {
        (Some(pts), Some(side)) => {
            let w = Window::cube(d, DyadicRational::zero(), side.clone())?;
            let e = largest_empty_box_exact(pts, &w)?;
            let eps_d = DyadicRational::from_f64(net.eps).expect("finite");
            let mut bound = eps_d;
            for _ in 0..d {
                bound = &bound * side;
            }
            (e.volume.to_f64(), e.volume <= bound)
        }
        _ => {
            let w = Window::cube(d, 0.0, net.side)?;
            let pts: Vec<Point<f64>> = net.points.iter().map(|p| Point::new(p.coords().iter().map(|c| c * net.side).collect())).collect();
            let e = largest_empty_box(&pts, &w)?;
            let bound = net.eps * net.side.powi(d as i32);
            (e.volume, e.volume <= bound * (1.0 + TOLERANCE))
        }
    };
    let valid = if net.unscaled.is_some() { unscaled_ok } else { scaled_ok };
    Ok(NetValidation {
        eps: net.eps,
        valid,
        max_empty_volume: r.volume,
        empty_lower: r.empty_box.lower().coords().to_vec(),
        empty_upper: r.empty_box.upper().coords().to_vec(),
        margin: net.eps - r.volume,
        unscaled_volume,
        paths_agree: scaled_ok == unscaled_ok,
    })
}

/// Smallest `C` with `|net| <= C / eps` for every net.
pub fn fit_constant(nets: &[EpsNet]) -> f64 {
    nets.iter().map(EpsNet::claimed_constant).fold(0.0, f64::max)
}
