//! The loci `Z1`, `Z2`, the closed-form classification of the canonical family,
//! and the grid scan comparing it with the numerical minimizer.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::Serialize;

use crate::algebra::{HPerpKVector, PVector};
use crate::canonical::{canonical_family, theta_phi, CanonicalPoint};
use crate::error::{Error, Result};
use crate::g2::G2Element;
use crate::metric::{certificate, CheegerParam, PlanePair, POSITIVE_TOL, ZERO_TOL};
use crate::par::{map_indexed, Execution};
use crate::solver::{min_certificate_with_starts, SolverOptions};

/// Tolerance on the matrix entries defining `Z1` and `Z2`.
pub const ENTRY_TOL: f64 = 1e-10;
/// Default angular width of the band around the edges of the parameter square.
pub const DEFAULT_EDGE_TOL: f64 = 0.02;
/// Edge tolerance when comparing the entry test with the angle classification.
pub const COSET_EDGE_TOL: f64 = 1e-9;
/// Largest certificate accepted for an attached witness.
pub const WITNESS_TOL: f64 = 1e-10;

/// `g12 = g13 = 0`.
pub fn in_z1(g: &G2Element) -> bool {
    g.entry(0, 1).abs() < ENTRY_TOL && g.entry(0, 2).abs() < ENTRY_TOL
}

/// `g11 = 0`.
pub fn in_z2(g: &G2Element) -> bool {
    g.entry(0, 0).abs() < ENTRY_TOL
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Label {
    ZeroPlane,
    Positive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Reason {
    ThetaZero,
    ThetaHalfPi,
    PhiHalfPi,
    Interior,
}

/// Outcome of thresholding a minimized certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SolverLabel {
    ZeroPlane,
    Positive,
    Indeterminate,
}

impl SolverLabel {
    /// Below [`ZERO_TOL`] is a zero plane, above [`POSITIVE_TOL`] positive.
    pub fn from_value(v: f64) -> Self {
        if v < ZERO_TOL {
            Self::ZeroPlane
        } else if v > POSITIVE_TOL {
            Self::Positive
        } else {
            Self::Indeterminate
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for SolverLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LocusClassification {
    pub label: Label,
    pub reason: Reason,
    /// Certificate of the witness at the edge point; `None` in the interior,
    /// where no closed-form value is available.
    pub min_certificate: Option<f64>,
    pub witness: Option<PlanePair>,
}

/// Distance from `p` to the nearest edge `θ = 0`, `θ = π/2` or `φ = π/2`,
/// together with that edge.
pub fn edge_margin(p: &CanonicalPoint) -> (f64, Reason) {
    let candidates = [
        (p.theta(), Reason::ThetaZero),
        (FRAC_PI_2 - p.theta(), Reason::ThetaHalfPi),
        (FRAC_PI_2 - p.phi(), Reason::PhiHalfPi),
    ];
    candidates
        .into_iter()
        .fold(candidates[0], |best, c| if c.0 < best.0 { c } else { best })
}

/// The explicit zero-curvature plane along an edge.
///
/// For `θ = π/2` it is `X = (1, 0, 1, 0)` in `h^⊥ ∩ k`, `Y = (0, 0, 0, −1, 0, −1)`
/// in `p`; for `θ = 0` and for `φ = π/2` it is `X = (0, 0, 1, 1)`,
/// `Y = (0, 0, 1, 1, 0, 0)`.
pub fn edge_witness(reason: Reason) -> Option<PlanePair> {
    let (xk, yp) = match reason {
        Reason::ThetaHalfPi => ([1.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, -1.0, 0.0, -1.0]),
        Reason::ThetaZero | Reason::PhiHalfPi => ([0.0, 0.0, 1.0, 1.0], [0.0, 0.0, 1.0, 1.0, 0.0, 0.0]),
        Reason::Interior => return None,
    };
    let pair = PlanePair::from_reduced(HPerpKVector(xk), PVector::zero(), HPerpKVector::zero(), PVector(yp));
    Some(pair.expect("edge witnesses are horizontal and independent"))
}

/// `p` moved onto the edge named by `reason`.
fn snap(p: &CanonicalPoint, reason: Reason) -> (f64, f64) {
    match reason {
        Reason::ThetaZero => (0.0, p.phi()),
        Reason::ThetaHalfPi => (FRAC_PI_2, p.phi()),
        Reason::PhiHalfPi => (p.theta(), FRAC_PI_2),
        Reason::Interior => (p.theta(), p.phi()),
    }
}

/// Closed-form classification: a zero plane exactly on the edges of the
/// parameter square, with points within `edge_tol` of an edge counted as on it.
///
/// For zero-plane points the witness of the nearest edge is attached and its
/// certificate, evaluated at the edge point, is checked against [`WITNESS_TOL`].
pub fn classify_f(p: &CanonicalPoint, edge_tol: f64, t: CheegerParam) -> LocusClassification {
    let (margin, edge) = edge_margin(p);
    if margin > edge_tol {
        return LocusClassification {
            label: Label::Positive,
            reason: Reason::Interior,
            min_certificate: None,
            witness: None,
        };
    }
    let witness = edge_witness(edge).expect("edge reason");
    let (theta, phi) = snap(p, edge);
    let value = certificate(&canonical_family(theta, phi), &witness, t).total;
    assert!(
        value < WITNESS_TOL,
        "edge witness certificate {value:e} at ({theta}, {phi})"
    );
    LocusClassification {
        label: Label::ZeroPlane,
        reason: edge,
        min_certificate: Some(value),
        witness: Some(witness),
    }
}

fn open_angle(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::AngleOutOfRange(format!("{name} = {v} must lie in (0, pi/2)")))
    }
}

/// The obstruction for `θ, φ ∈ (0, π/2)`:
/// `(−4(y5² sin²φ + y6²) − 4 y5² cos²φ) / (cos φ cos θ sin θ)`.
pub fn obstruction_value(p: &CanonicalPoint, y5: f64, y6: f64) -> Result<f64> {
    open_angle("theta", p.theta())?;
    open_angle("phi", p.phi())?;
    let (sp, cp) = p.phi().sin_cos();
    let (st, ct) = p.theta().sin_cos();
    let num = -4.0 * (y5 * y5 * sp * sp + y6 * y6) - 4.0 * y5 * y5 * cp * cp;
    Ok(num / (cp * ct * st))
}

/// The obstruction along `φ = 0`: `−4 cos θ (y3² + y4² + y5² + y6²) / sin θ`.
pub fn phi_zero_obstruction(theta: f64, y: &PVector) -> Result<f64> {
    open_angle("theta", theta)?;
    let tail: f64 = y.0[2..].iter().map(|v| v * v).sum();
    Ok(-4.0 * theta.cos() * tail / theta.sin())
}

/// Entry form of the zero-plane condition for the coset through `g`:
/// `g ∈ Z1 ∪ Z2`.
pub fn coset_zero_plane_condition(g: &G2Element) -> bool {
    in_z1(g) || in_z2(g)
}

/// The same condition through the angles of `g^T = g^{-1}` and [`classify_f`].
pub fn coset_zero_plane_by_angles(g: &G2Element, t: CheegerParam) -> LocusClassification {
    classify_f(&theta_phi(&g.inverse()), COSET_EDGE_TOL, t)
}

/// Result of `locus-check`: the entry conditions and whether they agree with
/// the classification through the angles.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LocusCheck {
    #[serde(rename = "in_Z1")]
    pub in_z1: bool,
    #[serde(rename = "in_Z2")]
    pub in_z2: bool,
    pub zero_plane: bool,
    pub consistent: bool,
}

pub fn locus_check(g: &G2Element, t: CheegerParam) -> LocusCheck {
    let zero_plane = coset_zero_plane_condition(g);
    let by_angles = coset_zero_plane_by_angles(g, t).label == Label::ZeroPlane;
    LocusCheck {
        in_z1: in_z1(g),
        in_z2: in_z2(g),
        zero_plane,
        consistent: zero_plane == by_angles,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ScanConfig {
    pub grid_n: usize,
    pub t: CheegerParam,
    pub restarts: usize,
    pub seed: u64,
    pub edge_tol: f64,
    pub exec: Execution,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            grid_n: 101,
            t: CheegerParam::default(),
            restarts: 200,
            seed: 0,
            edge_tol: DEFAULT_EDGE_TOL,
            exec: Execution::Parallel,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ScanRow {
    pub theta: f64,
    pub phi: f64,
    pub min_certificate: f64,
    pub solver_label: SolverLabel,
    pub theorem_label: Label,
    pub agree: bool,
}

/// Grid angle `k (π/2)/(n−1)`, exact at both ends.
pub fn grid_angle(k: usize, n: usize) -> f64 {
    if k + 1 == n {
        FRAC_PI_2
    } else {
        k as f64 * FRAC_PI_2 / (n - 1) as f64
    }
}

/// Whether the solver outcome is compatible with the closed form.
///
/// On an edge the solver must find a zero plane; off the edges but inside the
/// band any outcome is accepted; in the interior it must not find one.
pub fn labels_agree(solver: SolverLabel, closed: Label, margin: f64) -> bool {
    match closed {
        Label::ZeroPlane if margin == 0.0 => solver == SolverLabel::ZeroPlane,
        Label::ZeroPlane => true,
        Label::Positive => solver != SolverLabel::ZeroPlane,
    }
}

/// One cell of the scan; `cell` seeds the restarts.
pub fn scan_cell(theta: f64, phi: f64, cell: u64, cfg: &ScanConfig) -> Result<ScanRow> {
    let p = CanonicalPoint::new(theta, phi)?;
    let closed = classify_f(&p, cfg.edge_tol, cfg.t);
    let (margin, edge) = edge_margin(&p);
    let starts: Vec<PlanePair> = if margin == 0.0 {
        edge_witness(edge).into_iter().collect()
    } else {
        Vec::new()
    };
    let opts = SolverOptions {
        restarts: cfg.restarts,
        seed: cfg.seed,
        stream: cell,
        exec: Execution::Sequential,
        ..Default::default()
    };
    let found = min_certificate_with_starts(&canonical_family(theta, phi), cfg.t, &starts, &opts);
    let solver_label = SolverLabel::from_value(found.value);
    Ok(ScanRow {
        theta,
        phi,
        min_certificate: found.value,
        solver_label,
        theorem_label: closed.label,
        agree: labels_agree(solver_label, closed.label, margin),
    })
}

/// Scans the `grid_n × grid_n` grid on `[0, π/2]²`, θ-major.
pub fn scan(cfg: &ScanConfig) -> Result<Vec<ScanRow>> {
    let n = cfg.grid_n;
    if n < 2 {
        return Err(Error::InvalidParameter(format!("grid size {n} must be at least 2")));
    }
    if cfg.restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be at least 1".into()));
    }
    map_indexed(cfg.exec, n * n, |c| {
        scan_cell(grid_angle(c / n, n), grid_angle(c % n, n), c as u64, cfg)
    })
    .into_iter()
    .collect()
}
