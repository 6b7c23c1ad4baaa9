//! The Cheeger-deformed metric, horizontal lifts and the zero-curvature certificate.
//!
//! A horizontal plane at `g` has zero curvature in the doubled metric exactly
//! when `[X,Y]`, `[X_k,Y_k]`, `[X_p,Y_p]` and `[(Ad_{g^-1}X)_p, (Ad_{g^-1}Y)_p]`
//! all vanish. [`certificate`] reports the four squared norms.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::algebra::{
    ad_conj, bracket, h_defect, h_perp_k_embed, inner0, p_coords, p_embed, project_k, project_p, AlgebraVector,
    HPerpKVector, PVector,
};
use crate::canonical::canonical_family;
use crate::error::{Error, Result};
use crate::g2::G2Element;

/// Horizontality tolerance for [`PlanePair`].
pub const HORIZONTAL_TOL: f64 = 1e-10;
/// Tolerance on the horizontality precondition of [`horizontal_lift`].
pub const LIFT_TOL: f64 = 1e-9;
/// Normalized Gram determinant below which a pair is considered dependent.
pub const INDEPENDENCE_TOL: f64 = 1e-12;
/// Certificate totals below this are zero planes.
pub const ZERO_TOL: f64 = 1e-10;
/// Scan minima above this are positive.
pub const POSITIVE_TOL: f64 = 1e-6;

/// The reduced bracket formula equals `REDUCED_BRACKET_SCALE` times the direct
/// computation. Calibrated by [`calibrate_closed_forms`].
pub const REDUCED_BRACKET_SCALE: f64 = 1.0;
/// Same for both adjoint closed forms.
pub const AD_CLOSED_SCALE: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CheegerParam(f64);

impl CheegerParam {
    pub fn new(t: f64) -> Result<Self> {
        if t.is_finite() && t > 0.0 {
            Ok(Self(t))
        } else {
            Err(Error::InvalidParameter(format!("t must be positive, got {t}")))
        }
    }

    pub fn t(&self) -> f64 {
        self.0
    }

    /// Factor applied to the k-part by [`phi`].
    pub fn k_scale(&self) -> f64 {
        self.0 / (self.0 + 1.0)
    }
}

impl Default for CheegerParam {
    fn default() -> Self {
        Self(1.0)
    }
}

pub fn phi(x: &AlgebraVector, t: CheegerParam) -> AlgebraVector {
    project_k(x) * t.k_scale() + project_p(x)
}

pub fn phi_inv(x: &AlgebraVector, t: CheegerParam) -> AlgebraVector {
    project_k(x) * (1.0 / t.k_scale()) + project_p(x)
}

pub fn metric1(x: &AlgebraVector, y: &AlgebraVector, t: CheegerParam) -> f64 {
    inner0(x, &phi(y, t))
}

/// `Ad_{g^-1} X = g^T X g`.
pub fn ad_inv(g: &G2Element, x: &AlgebraVector) -> AlgebraVector {
    ad_conj(&g.inverse(), x)
}

/// Lift of a horizontal vector at `g` to the doubled metric.
pub fn horizontal_lift(g: &G2Element, x: &AlgebraVector, t: CheegerParam) -> Result<(AlgebraVector, AlgebraVector)> {
    let defect = h_defect(x);
    if defect > LIFT_TOL {
        return Err(Error::NotHorizontal(defect));
    }
    Ok((phi_inv(&-ad_inv(g, x), t), phi_inv(x, t)))
}

/// Normalized Gram determinant of `(x, y)` under `ip`.
fn gram_det(x: &AlgebraVector, y: &AlgebraVector, ip: impl Fn(&AlgebraVector, &AlgebraVector) -> f64) -> f64 {
    let (xx, yy, xy) = (ip(x, x), ip(y, y), ip(x, y));
    if xx <= 0.0 || yy <= 0.0 {
        return 0.0;
    }
    1.0 - xy * xy / (xx * yy)
}

/// Gram-Schmidt under `ip`. Assumes independence.
fn orthonormalize(
    x: &AlgebraVector,
    y: &AlgebraVector,
    ip: impl Fn(&AlgebraVector, &AlgebraVector) -> f64,
) -> (AlgebraVector, AlgebraVector) {
    let u = x.scale(1.0 / ip(x, x).sqrt());
    let w = *y - u * ip(&u, y);
    let v = w.scale(1.0 / ip(&w, &w).sqrt());
    (u, v)
}

/// Zero-curvature test for the Cheeger metric itself: `[phi X, phi Y] = 0` and
/// `[X_k, Y_k] = 0`.
pub fn cheeger_zero_plane(x: &AlgebraVector, y: &AlgebraVector, t: CheegerParam) -> Result<bool> {
    let det = gram_det(x, y, inner0);
    if det < INDEPENDENCE_TOL {
        return Err(Error::DegeneratePlane(det));
    }
    let (u, v) = orthonormalize(x, y, inner0);
    let a = bracket(&phi(&u, t), &phi(&v, t)).norm0();
    let b = bracket(&project_k(&u), &project_k(&v)).norm0();
    Ok(a < ZERO_TOL && b < ZERO_TOL)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanePair {
    x: AlgebraVector,
    y: AlgebraVector,
}

impl PlanePair {
    pub fn new(x: AlgebraVector, y: AlgebraVector) -> Result<Self> {
        let defect = h_defect(&x).max(h_defect(&y));
        if defect > HORIZONTAL_TOL {
            return Err(Error::NotHorizontal(defect));
        }
        let det = gram_det(&x, &y, inner0);
        if det < INDEPENDENCE_TOL {
            return Err(Error::DegeneratePlane(det));
        }
        Ok(Self { x, y })
    }

    /// Skips validation; for vectors built from a horizontal frame.
    pub(crate) fn new_unchecked(x: AlgebraVector, y: AlgebraVector) -> Self {
        Self { x, y }
    }

    /// Builds the pair `(X_k + X_p, Y_k + Y_p)` from reduced coordinates.
    pub fn from_reduced(xk: HPerpKVector, xp: PVector, yk: HPerpKVector, yp: PVector) -> Result<Self> {
        Self::new(
            h_perp_k_embed(&xk) + xp.to_algebra(),
            h_perp_k_embed(&yk) + yp.to_algebra(),
        )
    }

    pub fn x(&self) -> &AlgebraVector {
        &self.x
    }

    pub fn y(&self) -> &AlgebraVector {
        &self.y
    }

    /// The same plane with a `metric1`-orthonormal basis.
    pub fn orthonormalized(&self, t: CheegerParam) -> Self {
        let (x, y) = orthonormalize(&self.x, &self.y, |a, b| metric1(a, b, t));
        Self { x, y }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct CertificateParts {
    pub bracket_full: f64,
    pub bracket_k: f64,
    pub bracket_p: f64,
    pub bracket_ad_p: f64,
}

impl CertificateParts {
    pub fn total(&self) -> f64 {
        self.bracket_full + self.bracket_k + self.bracket_p + self.bracket_ad_p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureCertificate {
    pub total: f64,
    pub parts: CertificateParts,
}

impl CurvatureCertificate {
    pub fn is_zero(&self) -> bool {
        self.total < ZERO_TOL
    }
}

/// Certificate parts for the given vectors, without normalization.
pub fn raw_certificate_parts(g: &G2Element, x: &AlgebraVector, y: &AlgebraVector) -> CertificateParts {
    let sq = |v: AlgebraVector| inner0(&v, &v);
    let ax = project_p(&ad_inv(g, x));
    let ay = project_p(&ad_inv(g, y));
    CertificateParts {
        bracket_full: sq(bracket(x, y)),
        bracket_k: sq(bracket(&project_k(x), &project_k(y))),
        bracket_p: sq(bracket(&project_p(x), &project_p(y))),
        bracket_ad_p: sq(bracket(&ax, &ay)),
    }
}

/// Certificate of the plane spanned by `pair` at `g`, evaluated on a
/// `metric1`-orthonormal basis of the plane.
pub fn certificate(g: &G2Element, pair: &PlanePair, t: CheegerParam) -> CurvatureCertificate {
    let on = pair.orthonormalized(t);
    let parts = raw_certificate_parts(g, &on.x, &on.y);
    CurvatureCertificate {
        total: parts.total(),
        parts,
    }
}

/// The reduced bracket of an h-perp element of k with an element of p.
pub fn reduced_bracket(x: &HPerpKVector, y: &PVector) -> PVector {
    let [x1, x2, x3, x4] = x.0;
    let [y1, y2, y3, y4, y5, y6] = y.0;
    PVector([
        x1 * y3 - x2 * y4 + x3 * y5 - x4 * y6,
        x1 * y4 + x2 * y3 - x3 * y6 - x4 * y5,
        -x1 * y1 - x2 * y2,
        -x1 * y2 + x2 * y1,
        -x3 * y1 + x4 * y2,
        x3 * y2 + x4 * y1,
    ])
}

/// `(Ad_{g^-1} X)_p` at `g = F(theta, phi)` for `X` in the h-perp part of k,
/// scaled by [`AD_CLOSED_SCALE`].
pub fn ad_x_p_closed(theta: f64, phi_angle: f64, x: &HPerpKVector) -> PVector {
    let [x1, x2, x3, x4] = x.0;
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi_angle.sin_cos();
    PVector([
        0.0,
        2.0 * x2 * sp * cp * st,
        -x1 * st,
        x2 * (2.0 * cp * cp - 1.0) * st * ct + x3 * cp * st * st,
        x2 * (2.0 * cp * cp - 1.0) * st * st - x3 * cp * st * ct,
        x4 * cp * st,
    ])
}

/// `(Ad_{g^-1} Y)_p` at `g = F(theta, phi)` for `Y` in p with `y1 = y2 = 0`
/// (the two leading coordinates are ignored), scaled by [`AD_CLOSED_SCALE`].
pub fn ad_y_p_closed(theta: f64, phi_angle: f64, y: &PVector) -> PVector {
    let [_, _, y3, y4, y5, y6] = y.0;
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi_angle.sin_cos();
    let c2 = 3.0 * ct * ct - 1.0;
    PVector([
        2.0 * y3 * sp,
        2.0 * y4 * sp * ct,
        2.0 * y3 * cp * ct + y6 * st,
        y4 * cp * c2 - 3.0 * y5 * st * ct,
        3.0 * y4 * cp * st * ct + y5 * c2,
        -y3 * cp * st + 2.0 * y6 * ct,
    ])
}

/// Direct evaluation of the reduced bracket from 7x7 matrices.
pub fn reduced_bracket_direct(x: &HPerpKVector, y: &PVector) -> PVector {
    let b = bracket(&h_perp_k_embed(x), &y.to_algebra());
    p_coords(&b)
}

pub fn ad_p_direct(theta: f64, phi_angle: f64, v: &AlgebraVector) -> PVector {
    p_coords(&ad_inv(&canonical_family(theta, phi_angle), v))
}

/// Least-squares ratio of a closed form to the direct computation, and its
/// relative spread across components and points.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ScaleFit {
    pub scale: f64,
    pub spread: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Calibration {
    pub reduced_bracket: ScaleFit,
    pub ad_x: ScaleFit,
    pub ad_y: ScaleFit,
}

fn fit_scale(pairs: &[(PVector, PVector)]) -> ScaleFit {
    let (mut num, mut den) = (0.0, 0.0);
    for (closed, direct) in pairs {
        for i in 0..6 {
            num += closed.0[i] * direct.0[i];
            den += direct.0[i] * direct.0[i];
        }
    }
    let scale = num / den;
    let mut spread: f64 = 0.0;
    for (closed, direct) in pairs {
        for i in 0..6 {
            if direct.0[i].abs() > 1e-3 {
                spread = spread.max((closed.0[i] / direct.0[i] - scale).abs() / scale.abs());
            }
        }
    }
    ScaleFit { scale, spread }
}

/// Fits the closed-form scalars at `points` random inputs.
pub fn calibrate_closed_forms<R: Rng + ?Sized>(rng: &mut R, points: usize) -> Calibration {
    let mut rb = Vec::new();
    let mut ax = Vec::new();
    let mut ay = Vec::new();
    for _ in 0..points {
        let x = HPerpKVector(std::array::from_fn(|_| rng.sample(StandardNormal)));
        let mut y = PVector(std::array::from_fn(|_| rng.sample(StandardNormal)));
        rb.push((reduced_bracket(&x, &y), reduced_bracket_direct(&x, &y)));
        let theta = rng.random_range(0.1..1.4);
        let phi_angle = rng.random_range(0.1..1.4);
        ax.push((
            ad_x_p_closed(theta, phi_angle, &x),
            ad_p_direct(theta, phi_angle, &h_perp_k_embed(&x)),
        ));
        y.0[0] = 0.0;
        y.0[1] = 0.0;
        ay.push((
            ad_y_p_closed(theta, phi_angle, &y),
            ad_p_direct(theta, phi_angle, &y.to_algebra()),
        ));
    }
    Calibration {
        reduced_bracket: fit_scale(&rb),
        ad_x: fit_scale(&ax),
        ad_y: fit_scale(&ay),
    }
}

/// `|metric1(Ad_n X, Ad_n Y) - metric1(X, Y)|`.
pub fn nk_invariance_check(n: &G2Element, x: &AlgebraVector, y: &AlgebraVector, t: CheegerParam) -> f64 {
    (metric1(&ad_conj(n, x), &ad_conj(n, y), t) - metric1(x, y, t)).abs()
}

/// `p_embed` of a closed-form output, undoing its scalar.
pub fn closed_form_matrix(v: &PVector) -> crate::g2::Matrix7 {
    p_embed(&PVector(v.0.map(|c| c / AD_CLOSED_SCALE)))
}
