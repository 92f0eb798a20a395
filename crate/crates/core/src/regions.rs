//! Safe regions for the Lasso dual: spheres, half-spaces and domes.
//!
//! A dome is the intersection `B(c, r) ∩ H(g, δ)` of a ball with the
//! half-space `{u : ⟨g, u⟩ ≤ δ}`. Three regions are built from a primal
//! point `x` and a dual feasible point `u`:
//!
//! * the GAP sphere `B(u, √(2·gap))`,
//! * the GAP dome, whose half-space is derived from the duality gap,
//! * the Hölder dome, which keeps the GAP dome's ball but cuts it with
//!   `H(Ax, λ‖x‖₁)`, a half-space containing the whole dual feasible set.
//!
//! The Hölder dome is always contained in the GAP dome, which is itself
//! contained in the GAP sphere.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::linalg::{dot, norm1, norm2};
use crate::problem::LassoProblem;

/// Relative rounding slack tolerated before a dome is declared empty.
const CUT_SLACK: f64 = 1e-12;

/// Screening requires `sup |⟨a, u⟩| < λ − SCREEN_RTOL·‖a‖(‖c‖ + r)`.
/// Without the margin, an atom whose constraint is active at the optimum
/// can be removed when the region touches that constraint face and the
/// support function rounds a few ulps below `λ`.
pub const SCREEN_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Sphere {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Sphere {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "sphere radius must be finite and nonnegative, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    /// `max_{u ∈ B} |⟨a, u⟩| = |⟨a, c⟩| + r‖a‖₂`.
    pub fn sup_abs_inner(&self, a: &[f64]) -> f64 {
        dot(a, &self.center).abs() + self.radius * norm2(a)
    }

    /// `max_{u ∈ B} ⟨a, u⟩ = ⟨a, c⟩ + r‖a‖₂`.
    pub fn sup_inner(&self, a: &[f64]) -> f64 {
        dot(a, &self.center) + self.radius * norm2(a)
    }

    pub fn contains(&self, u: &[f64], tol: f64) -> bool {
        distance(u, &self.center) <= self.radius + tol
    }
}

/// The half-space `{u : ⟨g, u⟩ ≤ δ}`. With `g = 0` it is the whole space
/// when `δ ≥ 0` and empty otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl HalfSpace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Self {
        Self { normal, offset }
    }

    pub fn contains(&self, u: &[f64], tol: f64) -> bool {
        dot(&self.normal, u) <= self.offset + tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dome {
    pub sphere: Sphere,
    pub halfspace: HalfSpace,
}

/// How a dome intersects its ball, precomputed once for many directions.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Cut {
    /// The half-space contains the whole ball (or the ball is a point
    /// inside it).
    Ball,
    /// Proper cut; `psi2 ∈ [−1, 1)` is the signed cut distance over `r`.
    Proper { psi2: f64, g_norm: f64 },
}

/// A dome prepared for repeated support-function evaluations.
#[derive(Debug, Clone)]
pub struct DomeKernel<'a> {
    dome: &'a Dome,
    cut: Cut,
}

impl Dome {
    pub fn new(sphere: Sphere, halfspace: HalfSpace) -> Result<Self> {
        check_len(
            "half-space normal",
            sphere.center.len(),
            halfspace.normal.len(),
        )?;
        Ok(Self { sphere, halfspace })
    }

    pub fn center(&self) -> &[f64] {
        &self.sphere.center
    }

    pub fn radius_of_ball(&self) -> f64 {
        self.sphere.radius
    }

    /// Signed distance from the ball center to the cutting hyperplane,
    /// positive when the center lies inside the half-space. Infinite when
    /// `g = 0`.
    pub fn signed_cut_distance(&self) -> f64 {
        let g_norm = norm2(&self.halfspace.normal);
        let slack = self.halfspace.offset - dot(&self.halfspace.normal, &self.sphere.center);
        if g_norm == 0.0 {
            if self.halfspace.offset >= 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        } else {
            slack / g_norm
        }
    }

    fn classify(&self) -> Result<Cut> {
        let g = &self.halfspace.normal;
        let delta = self.halfspace.offset;
        let r = self.sphere.radius;
        let g_norm = norm2(g);
        if g_norm == 0.0 {
            return if delta >= 0.0 {
                Ok(Cut::Ball)
            } else {
                Err(Error::EmptyRegion)
            };
        }
        let gc = dot(g, &self.sphere.center);
        let slack = delta - gc;
        let rounding = CUT_SLACK * (delta.abs() + gc.abs());
        if slack < -(r * g_norm) - rounding {
            return Err(Error::EmptyRegion);
        }
        if r == 0.0 {
            // single point, inside the half-space up to rounding
            return Ok(Cut::Ball);
        }
        let psi2 = (slack / (r * g_norm)).clamp(-1.0, 1.0);
        if psi2 >= 1.0 {
            Ok(Cut::Ball)
        } else {
            Ok(Cut::Proper { psi2, g_norm })
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.classify(), Err(Error::EmptyRegion))
    }

    pub fn kernel(&self) -> Result<DomeKernel<'_>> {
        Ok(DomeKernel {
            dome: self,
            cut: self.classify()?,
        })
    }

    /// `max_{u ∈ D} ⟨a, u⟩`.
    pub fn sup_inner(&self, a: &[f64]) -> Result<f64> {
        self.kernel()?.sup_inner(a)
    }

    /// `max_{u ∈ D} |⟨a, u⟩|`.
    pub fn sup_abs_inner(&self, a: &[f64]) -> Result<f64> {
        self.kernel()?.sup_abs_inner(a)
    }

    pub fn contains(&self, u: &[f64], tol: f64) -> bool {
        self.sphere.contains(u, tol) && self.halfspace.contains(u, tol)
    }

    /// Half the diameter of the dome. A dome keeping the ball center has
    /// the ball's radius; a smaller cap has the radius of its base disk.
    /// Requires ambient dimension at least 2.
    pub fn radius(&self) -> Result<f64> {
        if self.sphere.center.len() < 2 {
            return Err(Error::InvalidArgument(
                "dome radius requires ambient dimension >= 2".into(),
            ));
        }
        let r = self.sphere.radius;
        match self.classify()? {
            Cut::Ball => Ok(r),
            Cut::Proper { psi2, .. } => {
                if psi2 >= 0.0 {
                    Ok(r)
                } else {
                    let d = psi2 * r;
                    Ok((r * r - d * d).max(0.0).sqrt())
                }
            }
        }
    }
}

impl DomeKernel<'_> {
    pub fn sup_inner(&self, a: &[f64]) -> Result<f64> {
        let a_norm = nonzero_norm(a)?;
        Ok(self.sup_inner_with(a, a_norm, dot(a, self.dome.center())))
    }

    pub fn sup_abs_inner(&self, a: &[f64]) -> Result<f64> {
        Ok(self.sup_abs_inner_with_norm(a, nonzero_norm(a)?))
    }

    /// `sup_abs_inner` with a precomputed, nonzero `‖a‖₂`.
    pub fn sup_abs_inner_with_norm(&self, a: &[f64], a_norm: f64) -> f64 {
        let ac = dot(a, self.dome.center());
        let r = self.dome.sphere.radius;
        match self.cut {
            Cut::Ball => ac.abs() + r * a_norm,
            Cut::Proper { psi2, g_norm } => {
                let ag = dot(a, &self.dome.halfspace.normal);
                let psi1 = (ag / (a_norm * g_norm)).clamp(-1.0, 1.0);
                let plus = ac + r * a_norm * dome_shape_factor(psi1, psi2);
                let minus = -ac + r * a_norm * dome_shape_factor(-psi1, psi2);
                plus.max(minus)
            }
        }
    }

    fn sup_inner_with(&self, a: &[f64], a_norm: f64, ac: f64) -> f64 {
        let r = self.dome.sphere.radius;
        match self.cut {
            Cut::Ball => ac + r * a_norm,
            Cut::Proper { psi2, g_norm } => {
                let ag = dot(a, &self.dome.halfspace.normal);
                let psi1 = (ag / (a_norm * g_norm)).clamp(-1.0, 1.0);
                ac + r * a_norm * dome_shape_factor(psi1, psi2)
            }
        }
    }
}

fn nonzero_norm(a: &[f64]) -> Result<f64> {
    let a_norm = norm2(a);
    if a_norm == 0.0 {
        return Err(Error::InvalidArgument(
            "support function direction must be nonzero".into(),
        ));
    }
    Ok(a_norm)
}

/// `f(ψ₁, ψ₂)`: 1 when the ball's extreme point in direction `a` survives
/// the cut, otherwise the cosine of the angle to the nearest rim point.
#[inline]
pub(crate) fn dome_shape_factor(psi1: f64, psi2: f64) -> f64 {
    if psi1 <= psi2 {
        1.0
    } else {
        psi1 * psi2 + (1.0 - psi1 * psi1).max(0.0).sqrt() * (1.0 - psi2 * psi2).max(0.0).sqrt()
    }
}

/// A safe region of either geometry.
#[derive(Debug, Clone, PartialEq)]
pub enum SafeRegion {
    Sphere(Sphere),
    Dome(Dome),
}

/// A region prepared for screening many atoms.
#[derive(Debug, Clone)]
pub struct RegionTester<'a> {
    geometry: Geometry<'a>,
    margin_scale: f64,
}

#[derive(Debug, Clone)]
enum Geometry<'a> {
    Sphere(&'a Sphere),
    Dome(DomeKernel<'a>),
}

impl RegionTester<'_> {
    pub fn sup_abs_inner(&self, a: &[f64]) -> Result<f64> {
        match &self.geometry {
            Geometry::Sphere(s) => Ok(s.sup_abs_inner(a)),
            Geometry::Dome(k) => k.sup_abs_inner(a),
        }
    }

    /// `sup_abs_inner` with a precomputed `‖a‖₂`.
    pub fn sup_abs_inner_with_norm(&self, a: &[f64], a_norm: f64) -> f64 {
        match &self.geometry {
            Geometry::Sphere(s) => dot(a, &s.center).abs() + s.radius * a_norm,
            Geometry::Dome(k) => k.sup_abs_inner_with_norm(a, a_norm),
        }
    }

    /// True when the atom is provably inactive: its support value is below
    /// `λ` by more than the rounding margin.
    pub fn screens(&self, a: &[f64], a_norm: f64, lambda: f64) -> bool {
        if a_norm == 0.0 {
            // a zero atom never enters the solution
            return 0.0 < lambda;
        }
        self.sup_abs_inner_with_norm(a, a_norm) < lambda - SCREEN_RTOL * a_norm * self.margin_scale
    }
}

impl SafeRegion {
    pub fn tester(&self) -> Result<RegionTester<'_>> {
        let (geometry, ball) = match self {
            SafeRegion::Sphere(s) => (Geometry::Sphere(s), s),
            SafeRegion::Dome(d) => (Geometry::Dome(d.kernel()?), &d.sphere),
        };
        Ok(RegionTester {
            geometry,
            margin_scale: norm2(&ball.center) + ball.radius,
        })
    }

    pub fn sup_abs_inner(&self, a: &[f64]) -> Result<f64> {
        self.tester()?.sup_abs_inner(a)
    }

    /// Membership with slack `tol` on both the ball and half-space tests.
    pub fn contains(&self, u: &[f64], tol: f64) -> bool {
        match self {
            SafeRegion::Sphere(s) => s.contains(u, tol),
            SafeRegion::Dome(d) => d.contains(u, tol),
        }
    }

    /// `max_{u, u' ∈ S} ½‖u − u'‖₂`.
    pub fn radius(&self) -> Result<f64> {
        match self {
            SafeRegion::Sphere(s) => Ok(s.radius),
            SafeRegion::Dome(d) => d.radius(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SafeRegion::Sphere(s) => s.center.len(),
            SafeRegion::Dome(d) => d.sphere.center.len(),
        }
    }
}

impl From<Sphere> for SafeRegion {
    fn from(s: Sphere) -> Self {
        SafeRegion::Sphere(s)
    }
}

impl From<Dome> for SafeRegion {
    fn from(d: Dome) -> Self {
        SafeRegion::Dome(d)
    }
}

/// Which safe region a screening solver builds at each iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    None,
    GapSphere,
    GapDome,
    HolderDome,
}

impl RegionKind {
    pub const SCREENING: [RegionKind; 3] = [
        RegionKind::GapSphere,
        RegionKind::GapDome,
        RegionKind::HolderDome,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RegionKind::None => "none",
            RegionKind::GapSphere => "gap_sphere",
            RegionKind::GapDome => "gap_dome",
            RegionKind::HolderDome => "holder_dome",
        }
    }

    pub fn is_dome(self) -> bool {
        matches!(self, RegionKind::GapDome | RegionKind::HolderDome)
    }

    /// Builds the region from a primal point and a dual feasible point.
    /// Returns `None` for [`RegionKind::None`].
    pub fn build(self, p: &LassoProblem, x: &[f64], u: &[f64]) -> Result<Option<SafeRegion>> {
        Ok(match self {
            RegionKind::None => None,
            RegionKind::GapSphere => Some(gap_sphere(p, x, u)?.into()),
            RegionKind::GapDome => Some(gap_dome(p, x, u)?.into()),
            RegionKind::HolderDome => Some(holder_dome(p, x, u)?.into()),
        })
    }
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RegionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(RegionKind::None),
            "gap_sphere" => Ok(RegionKind::GapSphere),
            "gap_dome" => Ok(RegionKind::GapDome),
            "holder_dome" => Ok(RegionKind::HolderDome),
            other => Err(Error::InvalidArgument(format!(
                "unknown region kind '{other}'"
            ))),
        }
    }
}

/// GAP sphere `B(u, √(2·gap(x, u)))`.
pub fn gap_sphere(p: &LassoProblem, x: &[f64], u: &[f64]) -> Result<Sphere> {
    let gap = p.duality_gap(x, u)?;
    Ok(gap_sphere_from_gap(u, gap))
}

/// GAP dome: ball `B((y+u)/2, ‖y−u‖/2)` cut by
/// `H(y − c, ⟨y − c, c⟩ + gap − r²)`.
pub fn gap_dome(p: &LassoProblem, x: &[f64], u: &[f64]) -> Result<Dome> {
    let gap = p.duality_gap(x, u)?;
    Ok(gap_dome_from_gap(p.observation(), u, gap))
}

/// Cutting half-space `H(Ax, λ‖x‖₁)`, which contains every dual feasible
/// point.
pub fn cutting_halfspace(p: &LassoProblem, x: &[f64]) -> Result<HalfSpace> {
    p.check_primal(x)?;
    Ok(HalfSpace::new(
        p.dictionary().matvec(x),
        p.lambda() * norm1(x),
    ))
}

/// Hölder dome: the GAP dome's ball cut by `H(Ax, λ‖x‖₁)`.
pub fn holder_dome(p: &LassoProblem, x: &[f64], u: &[f64]) -> Result<Dome> {
    p.ensure_dual_feasible(u)?;
    let halfspace = cutting_halfspace(p, x)?;
    Ok(holder_dome_from_parts(p.observation(), u, halfspace))
}

/// A point of the GAP dome outside the Hölder dome, available whenever
/// `P(x) < P(0)` and `(x, u)` is not optimal:
/// `u₀ = c + (P(x) − D(u) − r²)/r² · (y − c)`.
pub fn strict_inclusion_witness(p: &LassoProblem, x: &[f64], u: &[f64]) -> Result<Vec<f64>> {
    p.ensure_dual_feasible(u)?;
    let y = p.observation();
    let (c, r) = gap_ball(y, u);
    if r == 0.0 {
        return Err(Error::InvalidArgument(
            "witness undefined when u = y (zero ball radius)".into(),
        ));
    }
    let coeff = (p.primal_objective(x)? - p.dual_objective(u)? - r * r) / (r * r);
    Ok(c.iter()
        .zip(y)
        .map(|(ci, yi)| ci + coeff * (yi - ci))
        .collect())
}

pub(crate) fn gap_sphere_from_gap(u: &[f64], gap: f64) -> Sphere {
    Sphere {
        center: u.to_vec(),
        radius: (2.0 * gap.max(0.0)).sqrt(),
    }
}

/// Center `(y+u)/2` and radius `‖y−u‖/2` shared by both domes.
pub(crate) fn gap_ball(y: &[f64], u: &[f64]) -> (Vec<f64>, f64) {
    let center: Vec<f64> = y.iter().zip(u).map(|(a, b)| 0.5 * (a + b)).collect();
    let diff_sq: f64 = y.iter().zip(u).map(|(a, b)| (a - b) * (a - b)).sum();
    (center, 0.5 * diff_sq.sqrt())
}

pub(crate) fn gap_dome_from_gap(y: &[f64], u: &[f64], gap: f64) -> Dome {
    let (center, radius) = gap_ball(y, u);
    let normal: Vec<f64> = y.iter().zip(&center).map(|(a, b)| a - b).collect();
    let offset = dot(&normal, &center) + gap - radius * radius;
    Dome {
        sphere: Sphere { center, radius },
        halfspace: HalfSpace { normal, offset },
    }
}

pub(crate) fn holder_dome_from_parts(y: &[f64], u: &[f64], halfspace: HalfSpace) -> Dome {
    let (center, radius) = gap_ball(y, u);
    Dome {
        sphere: Sphere { center, radius },
        halfspace,
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    acc.sqrt()
}
