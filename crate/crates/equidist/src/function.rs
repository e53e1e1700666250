//! Test functions on the quotient.

use crate::{labels, EquidistError, Result};
use horolab_lattice::{frame_distance, LatticeCache, OrbitFrames, QuotientPoint};
use horolab_lie::{exp_lie, AmbientGroup, GroupElement, LieVector};
use horolab_mc::{par_mean, Rng};

/// The support is the `d_X`-ball of radius `SUPPORT_FRACTION * radius`.
pub const SUPPORT_FRACTION: f64 = 0.1;
/// Chart mass normalization needs the support inside `exp` of the cube of this half-width.
pub const CHART_LIMIT: f64 = 0.5;
pub const GAUGE_SAMPLES: usize = 1 << 16;
const GAUGE_SEED: u64 = 0x6761_7567;
const GAUGE_SURFACE: usize = 4096;

/// `exp(1 - 1 / (1 - u^2))` on `|u| < 1`, zero outside; equals 1 at 0.
pub fn bump_profile(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Normalization {
    /// `f(center) = 1`.
    Peak,
    /// Unit mass against Lebesgue measure on the max-norm coordinates of the `exp` chart.
    ChartMass,
}

#[derive(Clone)]
enum Kind {
    Constant,
    Bump { center: QuotientPoint, support: f64, orbit: OrbitFrames },
}

/// `scale * bump_profile(d_X(x, center) / support)`, or a constant.
#[derive(Clone)]
pub struct TestFunction {
    kind: Kind,
    pub scale: f64,
    pub radius: f64,
}

impl std::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestFunction").field("scale", &self.scale).field("radius", &self.radius).finish()
    }
}

impl TestFunction {
    pub fn constant(c: f64) -> Self {
        TestFunction { kind: Kind::Constant, scale: c, radius: 0.0 }
    }

    pub fn bump(center: &QuotientPoint, radius: f64, norm: Normalization, cache: &LatticeCache) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(EquidistError::InvalidParameter(format!("radius {radius}")));
        }
        let support = SUPPORT_FRACTION * radius;
        let scale = match norm {
            Normalization::Peak => 1.0,
            Normalization::ChartMass => 1.0 / chart_mass(center.rep.group(), support)?,
        };
        let orbit = OrbitFrames::new(center, cache);
        Ok(TestFunction { kind: Kind::Bump { center: *center, support, orbit }, scale, radius })
    }

    pub fn center(&self) -> Option<&QuotientPoint> {
        match &self.kind {
            Kind::Constant => None,
            Kind::Bump { center, .. } => Some(center),
        }
    }

    pub fn support_radius(&self) -> f64 {
        match &self.kind {
            Kind::Constant => f64::INFINITY,
            Kind::Bump { support, .. } => *support,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, Kind::Constant)
    }

    pub fn sup(&self) -> f64 {
        self.scale.abs()
    }

    pub fn scaled(&self, c: f64) -> Self {
        TestFunction { scale: self.scale * c, ..self.clone() }
    }

    pub fn eval(&self, x: &QuotientPoint) -> f64 {
        match &self.kind {
            Kind::Constant => self.scale,
            Kind::Bump { support, orbit, .. } => match orbit.distance_within(x, *support) {
                Some(d) => self.scale * bump_profile(d / support),
                None => 0.0,
            },
        }
    }
}

fn chart_point(grp: AmbientGroup, w: &[f64; 6]) -> GroupElement {
    exp_lie(grp, &LieVector::from_array(w))
}

/// `int bump_profile(D(exp w, e) / support) dw` over the max-norm coordinates.
pub fn chart_mass(grp: AmbientGroup, support: f64) -> Result<f64> {
    let id = GroupElement::identity(grp);
    // grow the cube until its surface clears the support
    let mut half = support / 8.0;
    let clears = |half: f64| {
        let mut rng = horolab_mc::rng_for(GAUGE_SEED, labels::GAUGE, 0);
        (0..GAUGE_SURFACE).all(|_| {
            let mut w: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-half..half));
            let face = rng.gen_range(0..6);
            w[face] = if rng.gen::<bool>() { half } else { -half };
            frame_distance(&chart_point(grp, &w), &id) >= support
        })
    };
    while !clears(half) {
        half *= 1.25;
        if half > CHART_LIMIT {
            return Err(EquidistError::ChartTooSmall { support, limit: CHART_LIMIT });
        }
    }
    let est = par_mean(GAUGE_SEED, labels::GAUGE + 1, GAUGE_SAMPLES, |rng| {
        let w: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-half..half));
        bump_profile(frame_distance(&chart_point(grp, &w), &id) / support)
    });
    Ok(est.mean * (2.0 * half).powi(6))
}
