//! Orbit invariants of the `H' × K` action `g ↦ h g k^{-1}` and reduction of an
//! arbitrary G2 element to the two-parameter canonical family.

use std::f64::consts::FRAC_PI_2;

use nalgebra::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::g2::{
    h_from_params, k_from_su3, max_abs, sigma, su3_with_first_column, to_c3, Complex64, G2Element, Matrix7,
};
use crate::octonion::Quaternion;

/// Below this `sin θ` the point is identified with `θ = 0` and `φ := 0`.
pub const DEGENERATE_SIN: f64 = 1e-9;
/// Branch threshold for the reduction steps.
pub const BRANCH_TOL: f64 = 1e-12;
/// Tolerance on the rebuilt canonical matrix.
pub const REDUCTION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CanonicalPoint {
    theta: f64,
    phi: f64,
}

impl CanonicalPoint {
    /// Validates the range and applies the `θ = 0 ⟹ φ = 0` convention.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        for (name, v) in [("theta", theta), ("phi", phi)] {
            if !(0.0..=FRAC_PI_2).contains(&v) {
                return Err(Error::AngleOutOfRange(format!("{name} = {v} not in [0, pi/2]")));
            }
        }
        let phi = if theta.sin() < DEGENERATE_SIN { 0.0 } else { phi };
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrbitInvariants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl OrbitInvariants {
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        (self.a - o.a).abs().max((self.b - o.b).abs()).max((self.c - o.c).abs())
    }
}

pub fn orbit_invariants(g: &G2Element) -> OrbitInvariants {
    let m = g.matrix();
    OrbitInvariants {
        a: m[(0, 0)].abs(),
        b: m[(1, 0)].hypot(m[(2, 0)]),
        c: (m[(3, 0)].powi(2) + m[(4, 0)].powi(2) + m[(5, 0)].powi(2) + m[(6, 0)].powi(2)).sqrt(),
    }
}

/// Angles of the orbit through `g`.
///
/// Uses `atan2` on the invariants, which equals `arccos` of `|g11|` and of
/// `b / sin θ` but stays accurate near the endpoints.
pub fn theta_phi(g: &G2Element) -> CanonicalPoint {
    let inv = orbit_invariants(g);
    let s = inv.b.hypot(inv.c);
    let theta = s.atan2(inv.a);
    let phi = if s < DEGENERATE_SIN { 0.0 } else { inv.c.atan2(inv.b) };
    CanonicalPoint {
        theta: theta.clamp(0.0, FRAC_PI_2),
        phi: phi.clamp(0.0, FRAC_PI_2),
    }
}

/// The canonical matrix at arbitrary angles (no range check or convention).
pub fn canonical_family(theta: f64, phi: f64) -> G2Element {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    #[rustfmt::skip]
    let m = Matrix7::from_row_slice(&[
        ct,       st,       0.0, 0.0, 0.0,       0.0,       0.0,
        -cp * st, cp * ct,  0.0, -sp, 0.0,       0.0,       0.0,
        0.0,      0.0,      cp,  0.0, -sp * ct,  -sp * st,  0.0,
        -sp * st, sp * ct,  0.0, cp,  0.0,       0.0,       0.0,
        0.0,      0.0,      sp,  0.0, cp * ct,   cp * st,   0.0,
        0.0,      0.0,      0.0, 0.0, -st,       ct,        0.0,
        0.0,      0.0,      0.0, 0.0, 0.0,       0.0,       1.0,
    ]);
    G2Element::from_matrix_unchecked(m)
}

pub fn canonical_matrix(p: &CanonicalPoint) -> G2Element {
    canonical_family(p.theta, p.phi)
}

#[derive(Clone, Debug, Serialize)]
pub struct Reduction {
    #[serde(skip)]
    pub h: G2Element,
    #[serde(skip)]
    pub k: G2Element,
    pub point: CanonicalPoint,
    /// `‖h g k^{-1} − F(θ, φ)‖∞`.
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Branch {
    Auto,
    Take,
    Skip,
}

const DECISIONS: usize = 6;

struct Path<'a> {
    choices: &'a [Branch; DECISIONS],
    in_band: [bool; DECISIONS],
}

impl Path<'_> {
    /// Decides a branch taken when `value < BRANCH_TOL`, recording whether the
    /// value sat in the guard band.
    fn small(&mut self, idx: usize, value: f64) -> bool {
        if (BRANCH_TOL..=DEGENERATE_SIN).contains(&value) {
            self.in_band[idx] = true;
        }
        match self.choices[idx] {
            Branch::Take => true,
            Branch::Skip => false,
            Branch::Auto => value < BRANCH_TOL,
        }
    }
}

fn quaternion_at(m: &Matrix7, rows: bool, fixed: usize) -> Quaternion {
    let e = |i: usize| if rows { m[(fixed, 3 + i)] } else { m[(3 + i, fixed)] };
    Quaternion([e(0), e(1), e(2), e(3)])
}

fn run_path(g: &G2Element, point: &CanonicalPoint, path: &mut Path) -> (Matrix7, Matrix7, f64) {
    let target = canonical_matrix(point);
    let mut h = Matrix7::identity();
    let mut k = Matrix7::identity();
    let mut m = *g.matrix();
    if m[(0, 0)] < 0.0 {
        h = *sigma().matrix();
        m = h * m;
    }
    let s = m[(1, 0)].hypot(m[(2, 0)]).hypot(quaternion_at(&m, false, 0).norm());
    if path.small(0, s) {
        // m fixes i, so it is itself in K
        let residual = max_abs(&(m * m.transpose() - target.matrix()));
        return (h, m, residual);
    }

    // rotate (g21, g31) to (-|.|, 0)
    let w = Complex::new(m[(1, 0)], m[(2, 0)]);
    if !path.small(1, w.norm()) {
        let z = (Complex64::new(-w.norm(), 0.0) / w).sqrt();
        let step = *h_from_params(z, Quaternion::ONE).matrix();
        h = step * h;
        m = step * m;
    }

    // rows 4..7 of column 1 to (-|.|, 0, 0, 0)
    let b = quaternion_at(&m, false, 0);
    if !path.small(2, b.norm()) {
        let q = b.conj().scale(-1.0 / b.norm());
        let step = *h_from_params(Complex64::new(1.0, 0.0), q).matrix();
        h = step * h;
        m = step * m;
    }

    // first row to (cos θ, sin θ, 0, ..., 0)
    let r = m.row(0).transpose();
    let w = to_c3(&r);
    if !path.small(3, w.norm()) {
        let v = su3_with_first_column(&(w / Complex64::new(w.norm(), 0.0)));
        let step = *k_from_su3(&v.adjoint())
            .expect("Gram-Schmidt completion is special unitary")
            .matrix();
        k = step * k;
        m *= step.transpose();
    }

    // (g24..g27) to (-|.|, 0, 0, 0) by the SU(2) common to H and K
    let r2 = quaternion_at(&m, true, 1);
    if !path.small(4, r2.norm()) {
        let q = r2.conj().scale(-1.0 / r2.norm());
        let step = *h_from_params(Complex64::new(1.0, 0.0), q).matrix();
        k = step * k;
        m *= step.transpose();
    }

    // column 4 is only forced when sin φ ≠ 0
    if path.small(5, point.phi().sin()) {
        let b = quaternion_at(&m, false, 3);
        if b.norm() > BRANCH_TOL {
            let q = b.conj().scale(1.0 / b.norm());
            let step = *h_from_params(Complex64::new(1.0, 0.0), q).matrix();
            h = step * h;
            m = step * m;
        }
    }

    let residual = max_abs(&(m - target.matrix()));
    (h, k, residual)
}

/// Finds `h ∈ H'`, `k ∈ K` with `h g k^{-1} = F(θ, φ)`.
///
/// Branch points whose deciding quantity falls in `[1e-12, 1e-9]` are resolved
/// by trying both sides and keeping the smaller residual.
pub fn reduce(g: &G2Element) -> Result<Reduction> {
    let point = theta_phi(g);
    let auto = [Branch::Auto; DECISIONS];
    let mut path = Path {
        choices: &auto,
        in_band: [false; DECISIONS],
    };
    let mut best = run_path(g, &point, &mut path);
    let band: Vec<usize> = (0..DECISIONS).filter(|&i| path.in_band[i]).collect();
    if !band.is_empty() {
        for mask in 0..(1u32 << band.len()) {
            let mut choices = auto;
            for (bit, &idx) in band.iter().enumerate() {
                choices[idx] = if mask >> bit & 1 == 1 {
                    Branch::Take
                } else {
                    Branch::Skip
                };
            }
            let mut p = Path {
                choices: &choices,
                in_band: [false; DECISIONS],
            };
            let candidate = run_path(g, &point, &mut p);
            if candidate.2 < best.2 {
                best = candidate;
            }
        }
    }
    let (h, k, residual) = best;
    if residual > REDUCTION_TOL {
        return Err(Error::ReductionFailed(residual));
    }
    Ok(Reduction {
        h: G2Element::from_matrix_unchecked(h),
        k: G2Element::from_matrix_unchecked(k),
        point,
        residual,
    })
}
