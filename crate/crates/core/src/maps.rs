//! The maps `ψ_H: G → Gr₂⁺(R⁷)`, `ψ_K: G → S⁶`, the bundle projection between
//! them, and the correspondence between `Z1 ∩ Z2` and `SU(3)/SO(2)`.

use std::f64::consts::TAU;

use nalgebra::Complex;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::g2::{
    conj_cross, from_c3, from_generating_columns, random_g2, random_in_h, random_su3, special_unitary_residual, to_c3,
    CMatrix3, Complex64, G2Element, MEMBERSHIP_TOL,
};
use crate::locus::{in_z1, in_z2};
use crate::octonion::{ImVector7, Vector7};

/// Tolerance on the orthonormality of an oriented plane basis.
pub const PLANE_TOL: f64 = 1e-12;
/// Two planes are equal when their cross-Gram determinant exceeds `1 − PLANE_EQ_TOL`.
pub const PLANE_EQ_TOL: f64 = 1e-10;
/// Tolerance on special unitarity of coset representatives.
pub const SU3_TOL: f64 = 1e-12;
/// Tolerance on Hermitian orthonormality of the decoded columns.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Step of the coarse search over the stabilizer angle.
pub const ALPHA_STEP: f64 = 1e-3;

/// A 2-plane in `Im 𝕆` with an ordered orthonormal basis.
#[derive(Clone, Copy, Debug)]
pub struct OrientedPlane {
    u: ImVector7,
    v: ImVector7,
}

impl OrientedPlane {
    pub fn new(u: ImVector7, v: ImVector7) -> Result<Self> {
        let defect = (u.norm() - 1.0).abs().max((v.norm() - 1.0).abs()).max(u.dot(&v).abs());
        if defect > PLANE_TOL {
            return Err(Error::InvalidParameter(format!(
                "plane basis not orthonormal (defect {defect:.3e})"
            )));
        }
        Ok(Self { u, v })
    }

    pub fn u(&self) -> &ImVector7 {
        &self.u
    }

    pub fn v(&self) -> &ImVector7 {
        &self.v
    }

    /// Determinant of the 2×2 matrix of inner products with `other`'s basis:
    /// `1` exactly when the planes agree with orientation.
    pub fn cross_gram_det(&self, other: &Self) -> f64 {
        let (a, b) = (&self.u, &self.v);
        let (c, d) = (&other.u, &other.v);
        a.dot(c) * b.dot(d) - a.dot(d) * b.dot(c)
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.cross_gram_det(other) > 1.0 - PLANE_EQ_TOL
    }
}

/// The plane spanned by columns 2 and 3 of `g`, the images of `j` and `k`.
pub fn psi_h(g: &G2Element) -> OrientedPlane {
    OrientedPlane {
        u: g.column(1),
        v: g.column(2),
    }
}

/// Column 1 of `g`, the image of `i`.
pub fn psi_k(g: &G2Element) -> ImVector7 {
    g.column(0)
}

/// `uv` for the oriented basis `(u, v)`.
pub fn bundle_pi(p: &OrientedPlane) -> ImVector7 {
    p.u.im_mul(&p.v)
}

/// A point of `SU(3)` modulo right multiplication by `diag(R(α), 1)`.
#[derive(Clone, Copy, Debug)]
pub struct SU3Coset {
    rep: CMatrix3,
}

/// `diag(R(α), 1)` with `R(α) = [[cos α, −sin α], [sin α, cos α]]`.
pub fn stabilizer(alpha: f64) -> CMatrix3 {
    let (s, c) = alpha.sin_cos();
    let r = |x: f64| Complex::new(x, 0.0);
    CMatrix3::new(r(c), r(-s), r(0.0), r(s), r(c), r(0.0), r(0.0), r(0.0), r(1.0))
}

impl SU3Coset {
    pub fn new(rep: CMatrix3) -> Result<Self> {
        let r = special_unitary_residual(&rep);
        if r > SU3_TOL {
            return Err(Error::NotSpecialUnitary(r));
        }
        Ok(Self { rep })
    }

    pub fn rep(&self) -> &CMatrix3 {
        &self.rep
    }

    fn offset(&self, other: &Self, alpha: f64) -> f64 {
        (self.rep * stabilizer(alpha) - other.rep).norm()
    }

    /// `min_α ‖A₁ diag(R(α), 1) − A₂‖_F` with the minimizing `α`: a scan at
    /// [`ALPHA_STEP`] followed by golden-section refinement.
    pub fn distance(&self, other: &Self) -> (f64, f64) {
        let steps = (TAU / ALPHA_STEP).ceil() as usize;
        let (mut best, mut best_d) = (0.0, f64::INFINITY);
        for k in 0..steps {
            let a = k as f64 * ALPHA_STEP;
            let d = self.offset(other, a);
            if d < best_d {
                best = a;
                best_d = d;
            }
        }
        let (mut lo, mut hi) = (best - ALPHA_STEP, best + ALPHA_STEP);
        let ratio = (5f64.sqrt() - 1.0) / 2.0;
        while hi - lo > 1e-13 {
            let m1 = hi - ratio * (hi - lo);
            let m2 = lo + ratio * (hi - lo);
            if self.offset(other, m1) < self.offset(other, m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let alpha = 0.5 * (lo + hi);
        let d = self.offset(other, alpha);
        if d < best_d {
            (d, alpha.rem_euclid(TAU))
        } else {
            (best_d, best)
        }
    }
}

/// The correspondence `Z1 ∩ Z2 → SU(3)/SO(2)`: columns 2 and 3 read in `ℂ³`,
/// completed by their conjugate cross product.
pub fn aloff_wallach_f(g: &G2Element) -> Result<SU3Coset> {
    if !(in_z1(g) && in_z2(g)) {
        return Err(Error::NotInZ1Z2(
            g.entry(0, 0).abs(),
            g.entry(0, 1).abs(),
            g.entry(0, 2).abs(),
        ));
    }
    let a = to_c3(&g.column(1).0);
    let b = to_c3(&g.column(2).0);
    let one = Complex64::new(1.0, 0.0);
    let defect = [(a.dotc(&a) - one).norm(), (b.dotc(&b) - one).norm(), a.dotc(&b).norm()]
        .into_iter()
        .fold(0.0, f64::max);
    if defect > HERMITIAN_TOL {
        return Err(Error::NotSpecialUnitary(defect));
    }
    let c = conj_cross(&a, &b);
    SU3Coset::new(CMatrix3::from_columns(&[a, b, c]))
}

/// The element of `Z1 ∩ Z2` with columns 2, 3 decoded from the first two
/// columns of the representative and column 4 equal to `i`.
pub fn f_inverse(a: &SU3Coset) -> Result<G2Element> {
    let q2 = from_c3(&a.rep.column(0).into_owned());
    let q3 = from_c3(&a.rep.column(1).into_owned());
    let i = Vector7::ith(0, 1.0);
    let c1 = ImVector7(q2).im_mul(&ImVector7(q3)).0;
    G2Element::try_new(from_generating_columns(&c1, &q2, &i), MEMBERSHIP_TOL)
}

/// `f⁻¹` of a random special unitary matrix.
pub fn random_in_z1z2<R: Rng + ?Sized>(rng: &mut R) -> G2Element {
    f_inverse(&SU3Coset { rep: random_su3(rng) }).expect("special unitary input")
}

/// Largest deviation of the identities of the maps, over random samples.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct MapsReport {
    pub samples: usize,
    /// `‖π(ψ_H(g)) − ψ_K(g)‖∞`.
    pub commuting_square: f64,
    /// `1 − det` of the cross-Gram matrix of `ψ_H(g)` and `ψ_H(gh)`.
    pub psi_h_coset: f64,
    /// `|⟨g•2, i⟩|, |⟨g•3, i⟩|` on `Z1`.
    pub z1_columns_perp_i: f64,
    /// `|⟨g•2, g•3⟩|, |⟨g•2, i g•3⟩|` on `Z1 ∩ Z2`.
    pub z1z2_complex_orthogonality: f64,
    /// Distance of `f⁻¹(A)` from `Z1 ∩ Z2` in the defining entries.
    pub f_inverse_membership: f64,
    /// Coset distance between `f(g)` and `f(gh)`.
    pub f_h_invariance: f64,
    /// Coset distance between `f(f⁻¹(A))` and `A`.
    pub f_roundtrip: f64,
    /// `1 − det` of the cross-Gram matrix of `ψ_H` at `f⁻¹(A)` and at `f⁻¹(A diag(R(α), 1))`.
    pub f_inverse_coset: f64,
}

impl MapsReport {
    pub fn max(&self) -> f64 {
        [
            self.commuting_square,
            self.psi_h_coset,
            self.z1_columns_perp_i,
            self.z1z2_complex_orthogonality,
            self.f_inverse_membership,
            self.f_h_invariance,
            self.f_roundtrip,
            self.f_inverse_coset,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn raise(slot: &mut f64, v: f64) {
    *slot = slot.max(v);
}

/// Evaluates every identity on `samples` random inputs.
pub fn check_maps<R: Rng + ?Sized>(rng: &mut R, samples: usize) -> Result<MapsReport> {
    let mut rep = MapsReport {
        samples,
        ..Default::default()
    };
    let i = ImVector7::unit(0);
    for _ in 0..samples {
        let g = random_g2(rng);
        let h = random_in_h(rng);
        let d = bundle_pi(&psi_h(&g)).0 - psi_k(&g).0;
        raise(&mut rep.commuting_square, d.amax());
        raise(&mut rep.psi_h_coset, 1.0 - psi_h(&g).cross_gram_det(&psi_h(&(g * h))));

        let a = SU3Coset::new(random_su3(rng))?;
        let z = f_inverse(&a)?;
        raise(
            &mut rep.f_inverse_membership,
            z.entry(0, 0).abs().max(z.entry(0, 1).abs()).max(z.entry(0, 2).abs()),
        );
        let (c2, c3) = (z.column(1), z.column(2));
        raise(&mut rep.z1_columns_perp_i, c2.dot(&i).abs().max(c3.dot(&i).abs()));
        raise(
            &mut rep.z1z2_complex_orthogonality,
            c2.dot(&c3).abs().max(c2.dot(&i.im_mul(&c3)).abs()),
        );
        let fz = aloff_wallach_f(&z)?;
        raise(&mut rep.f_roundtrip, fz.distance(&a).0);
        raise(&mut rep.f_h_invariance, aloff_wallach_f(&(z * h))?.distance(&fz).0);
        let alpha: f64 = rng.random_range(0.0..TAU);
        let moved = SU3Coset::new(a.rep * stabilizer(alpha))?;
        raise(
            &mut rep.f_inverse_coset,
            1.0 - psi_h(&z).cross_gram_det(&psi_h(&f_inverse(&moved)?)),
        );
    }
    Ok(rep)
}
