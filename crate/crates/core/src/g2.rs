//! The group G2 ⊂ SO(7) acting on `Im 𝕆`, and its subgroups
//! K ≅ SU(3) (fixing `i`), H ≅ U(2) (preserving the oriented `jk`-plane)
//! and H′ = H ∪ σH.
//!
//! Matrices are written over the imaginary basis `(i, j, k, ℓ, iℓ, jℓ, kℓ)`.
//! An element is the matrix of an automorphism, so its columns are the images
//! of the basis vectors.

use std::ops::Mul;

use nalgebra::{Complex, Matrix3, SMatrix, Vector3};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::octonion::{im_mul, ImVector7, Quaternion, Vector7};

pub type Matrix7 = SMatrix<f64, 7, 7>;
pub type Complex64 = Complex<f64>;
pub type CMatrix3 = Matrix3<Complex64>;
pub type CVector3 = Vector3<Complex64>;

/// Membership tolerance used by the subgroup predicates.
pub const MEMBERSHIP_TOL: f64 = 1e-10;
/// Admissibility tolerance for triples handed to [`from_triple`].
pub const TRIPLE_TOL: f64 = 1e-9;

/// Max-abs entry of a matrix.
pub fn max_abs(m: &Matrix7) -> f64 {
    m.iter().fold(0.0, |acc, x| f64::max(acc, x.abs()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct G2Element(Matrix7);

impl G2Element {
    pub fn identity() -> Self {
        G2Element(Matrix7::identity())
    }

    /// Wraps a matrix after checking it against [`is_g2`] at `tol`.
    pub fn try_new(m: Matrix7, tol: f64) -> Result<Self> {
        let r = residuals(&m);
        if r.max() < tol {
            Ok(G2Element(m))
        } else {
            Err(r.into_error())
        }
    }

    /// Wraps a matrix that is a G2 element by construction.
    pub fn from_matrix_unchecked(m: Matrix7) -> Self {
        G2Element(m)
    }

    pub fn matrix(&self) -> &Matrix7 {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix7 {
        self.0
    }

    /// The inverse, which is the transpose.
    pub fn inverse(&self) -> Self {
        G2Element(self.0.transpose())
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.0[(row, col)]
    }

    pub fn column(&self, col: usize) -> ImVector7 {
        ImVector7(self.0.column(col).into_owned())
    }

    pub fn apply(&self, v: &ImVector7) -> ImVector7 {
        ImVector7(self.0 * v.0)
    }

    pub fn residuals(&self) -> G2Residuals {
        residuals(&self.0)
    }
}

impl Mul for G2Element {
    type Output = G2Element;
    fn mul(self, rhs: G2Element) -> G2Element {
        G2Element(self.0 * rhs.0)
    }
}

impl Mul for &G2Element {
    type Output = G2Element;
    fn mul(self, rhs: &G2Element) -> G2Element {
        G2Element(self.0 * rhs.0)
    }
}

/// Graded distance of a matrix from G2.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize)]
pub struct G2Residuals {
    /// `‖MᵀM − I‖∞`
    pub orthogonality: f64,
    /// Worst `‖M(uv) − (Mu)(Mv)‖` over the 21 unordered basis pairs.
    pub automorphism: f64,
    /// Worst deviation of columns 3, 5, 6, 7 from the products they must equal.
    pub columns: f64,
}

impl G2Residuals {
    pub fn max(&self) -> f64 {
        self.orthogonality.max(self.automorphism).max(self.columns)
    }

    fn into_error(self) -> Error {
        Error::NotG2 {
            orthogonality: self.orthogonality,
            automorphism: self.automorphism,
            columns: self.columns,
        }
    }
}

pub fn residuals(m: &Matrix7) -> G2Residuals {
    let orthogonality = max_abs(&(m.transpose() * m - Matrix7::identity()));

    let mut automorphism: f64 = 0.0;
    for a in 0..7 {
        for b in (a + 1)..7 {
            let (u, v) = (ImVector7::unit(a), ImVector7::unit(b));
            let prod = u.mul_full(&v);
            let lhs = ImVector7(m * prod.im().0).embed() + crate::octonion::Octonion::ONE.scale(prod.re());
            let mu = ImVector7(m.column(a).into_owned());
            let mv = ImVector7(m.column(b).into_owned());
            let rhs = mu.mul_full(&mv);
            automorphism = automorphism.max((lhs - rhs).norm());
        }
    }

    let col = |c: usize| -> Vector7 { m.column(c).into_owned() };
    let c12 = im_mul(&col(0), &col(1));
    let checks = [
        (col(2), c12),
        (col(4), im_mul(&col(0), &col(3))),
        (col(5), im_mul(&col(1), &col(3))),
        (col(6), im_mul(&c12, &col(3))),
    ];
    let columns = checks
        .iter()
        .fold(0.0_f64, |acc, (have, want)| acc.max((have - want).norm()));

    G2Residuals {
        orthogonality,
        automorphism,
        columns,
    }
}

/// True iff every residual is below `tol`. Returns the residuals alongside.
pub fn is_g2(m: &Matrix7, tol: f64) -> (bool, G2Residuals) {
    let r = residuals(m);
    (r.max() < tol, r)
}

/// Orthonormal `e1, e2, e3` with `e3 ⊥ e1e2`.
#[derive(Clone, Copy, Debug)]
pub struct AdmissibleTriple {
    pub e1: ImVector7,
    pub e2: ImVector7,
    pub e3: ImVector7,
}

impl AdmissibleTriple {
    pub fn new(e1: ImVector7, e2: ImVector7, e3: ImVector7) -> Result<Self> {
        let t = AdmissibleTriple { e1, e2, e3 };
        let r = t.defect();
        if r > TRIPLE_TOL {
            return Err(Error::InadmissibleTriple(format!("defect {r:.3e}")));
        }
        Ok(t)
    }

    /// Largest violation of unit length, pairwise orthogonality and `e3 ⊥ e1e2`.
    pub fn defect(&self) -> f64 {
        let (a, b, c) = (&self.e1, &self.e2, &self.e3);
        let e12 = a.im_mul(b);
        [
            (a.norm() - 1.0).abs(),
            (b.norm() - 1.0).abs(),
            (c.norm() - 1.0).abs(),
            a.dot(b).abs(),
            a.dot(c).abs(),
            b.dot(c).abs(),
            c.dot(&e12).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// The matrix with columns `[c1, c2, c1c2, c4, c1c4, c2c4, (c1c2)c4]`: the
/// automorphism sending `i ↦ c1`, `j ↦ c2`, `ℓ ↦ c4`.
pub fn from_generating_columns(c1: &Vector7, c2: &Vector7, c4: &Vector7) -> Matrix7 {
    let c12 = im_mul(c1, c2);
    let cols = [*c1, *c2, c12, *c4, im_mul(c1, c4), im_mul(c2, c4), im_mul(&c12, c4)];
    Matrix7::from_columns(&cols)
}

/// The unique `g ∈ G2` with `g(e1) = i`, `g(e2) = j`, `g(e3) = ℓ`.
pub fn from_triple(t: &AdmissibleTriple) -> G2Element {
    G2Element(from_generating_columns(&t.e1.0, &t.e2.0, &t.e3.0).transpose())
}

/// `σ = diag(−1, 1, −1, 1, −1, 1, −1)`.
pub fn sigma() -> G2Element {
    G2Element(Matrix7::from_diagonal(&Vector7::from([
        -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0,
    ])))
}

/// Distance of `g` from K: `‖g e₁ − e₁‖∞`.
pub fn k_residual(g: &G2Element) -> f64 {
    let c = g.matrix().column(0);
    (0..7).fold(0.0, |acc, r| {
        let want = if r == 0 { 1.0 } else { 0.0 };
        f64::max(acc, (c[r] - want).abs())
    })
}

pub fn in_k(g: &G2Element) -> bool {
    k_residual(g) < MEMBERSHIP_TOL
}

/// Distance of `g` from the block form `diag(1, R(α), A)` with `R(α)` a rotation.
pub fn h_residual(g: &G2Element) -> f64 {
    let m = g.matrix();
    let mut r: f64 = (m[(0, 0)] - 1.0).abs();
    for c in 1..7 {
        r = r.max(m[(0, c)].abs()).max(m[(c, 0)].abs());
    }
    for a in 1..3 {
        for b in 3..7 {
            r = r.max(m[(a, b)].abs()).max(m[(b, a)].abs());
        }
    }
    // [[c, s], [−s, c]]
    r = r.max((m[(1, 1)] - m[(2, 2)]).abs());
    r = r.max((m[(1, 2)] + m[(2, 1)]).abs());
    r
}

pub fn in_h(g: &G2Element) -> bool {
    h_residual(g) < MEMBERSHIP_TOL
}

/// Distance from H′ = H ∪ σH.
pub fn hprime_residual(g: &G2Element) -> f64 {
    h_residual(g).min(h_residual(&(sigma() * *g)))
}

pub fn in_hprime(g: &G2Element) -> bool {
    hprime_residual(g) < MEMBERSHIP_TOL
}

/// The H-element of `(z, q) ∈ S¹ × Sp(1)`, acting on `Im ℍ ⊕ ℍℓ` by
/// `a + bℓ ↦ z a z̄ + (q b z̄)ℓ`.
///
/// `z` and `q` are expected to have unit length.
pub fn h_from_params(z: Complex64, q: Quaternion) -> G2Element {
    let zq = Quaternion::from_complex(z.re, z.im);
    let zc = zq.conj();
    let mut m = Matrix7::zeros();
    for col in 0..7 {
        let e = ImVector7::unit(col).embed().0;
        let a = Quaternion([e[0], e[1], e[2], e[3]]);
        let b = Quaternion([e[4], e[5], e[6], e[7]]);
        let na = zq.mul(&a).mul(&zc);
        let nb = q.mul(&b).mul(&zc);
        let out = [na.0[1], na.0[2], na.0[3], nb.0[0], nb.0[1], nb.0[2], nb.0[3]];
        for (row, v) in out.into_iter().enumerate() {
            m[(row, col)] = v;
        }
    }
    G2Element(m)
}

/// Reads coordinates 4..7 of a 7-vector as the quaternion `b` of `bℓ`.
pub fn ell_block_quaternion(v: &Vector7) -> Quaternion {
    Quaternion([v[3], v[4], v[5], v[6]])
}

// ℂ³ ≅ i^⊥ pairs (j, k), (ℓ, iℓ), (jℓ, kℓ) with complex structure given by
// left multiplication by i, which maps jℓ ↦ −kℓ. The third coordinate is
// therefore a_jℓ − i·a_kℓ.
const PAIR_SIGNS: [f64; 3] = [1.0, 1.0, -1.0];

/// Complex coordinates of the `i^⊥` part (entries 2..7) of a 7-vector.
pub fn to_c3(v: &Vector7) -> CVector3 {
    CVector3::from_fn(|a, _| Complex64::new(v[1 + 2 * a], PAIR_SIGNS[a] * v[2 + 2 * a]))
}

/// Inverse of [`to_c3`]; the `i` coordinate is zero.
pub fn from_c3(z: &CVector3) -> Vector7 {
    let mut v = Vector7::zeros();
    for a in 0..3 {
        v[1 + 2 * a] = z[a].re;
        v[2 + 2 * a] = PAIR_SIGNS[a] * z[a].im;
    }
    v
}

/// `max(‖U*U − I‖∞, |det U − 1|)`.
pub fn special_unitary_residual(u: &CMatrix3) -> f64 {
    let d = u.adjoint() * u - CMatrix3::identity();
    let unit = d.iter().fold(0.0, |acc, z| f64::max(acc, z.norm()));
    unit.max((u.determinant() - Complex64::new(1.0, 0.0)).norm())
}

/// The real 7×7 matrix of `U` acting on `i^⊥ ≅ ℂ³`, fixing `i`. No checks.
pub fn realify_su3(u: &CMatrix3) -> Matrix7 {
    let mut m = Matrix7::zeros();
    m[(0, 0)] = 1.0;
    for col in 1..7 {
        let mut e = Vector7::zeros();
        e[col] = 1.0;
        let image = from_c3(&(u * to_c3(&e)));
        for row in 1..7 {
            m[(row, col)] = image[row];
        }
    }
    m
}

/// The element of K acting on `i^⊥ ≅ ℂ³` by `U`.
pub fn k_from_su3(u: &CMatrix3) -> Result<G2Element> {
    let r = special_unitary_residual(u);
    if r > MEMBERSHIP_TOL {
        return Err(Error::NotSpecialUnitary(r));
    }
    Ok(G2Element(realify_su3(u)))
}

/// Completes a unit vector to a special unitary matrix with it as first column.
///
/// Hermitian Gram–Schmidt against the standard basis, then the last column is
/// divided by the determinant.
pub fn su3_with_first_column(w: &CVector3) -> CMatrix3 {
    let mut cols: Vec<CVector3> = vec![w.normalize()];
    for idx in 0..3 {
        if cols.len() == 3 {
            break;
        }
        let mut v = CVector3::zeros();
        v[idx] = Complex64::new(1.0, 0.0);
        for c in &cols {
            let proj = c.dotc(&v);
            v -= c * proj;
        }
        // the best-conditioned direction is always above this: at most one
        // standard vector can be nearly parallel to the span so far
        if v.norm() > 0.5 {
            cols.push(v.normalize());
        }
    }
    if cols.len() < 3 {
        // fall back to the largest residual direction
        let mut best = CVector3::zeros();
        for idx in 0..3 {
            let mut v = CVector3::zeros();
            v[idx] = Complex64::new(1.0, 0.0);
            for c in &cols {
                let proj = c.dotc(&v);
                v -= c * proj;
            }
            if v.norm() > best.norm() {
                best = v;
            }
        }
        cols.push(best.normalize());
    }
    let mut m = CMatrix3::from_columns(&cols);
    let det = m.determinant();
    let mut last = m.column_mut(2);
    last /= det;
    m
}

/// `conj(u × v)`: the third column making `[u v w]` special unitary when
/// `u, v` are Hermitian orthonormal.
pub fn conj_cross(u: &CVector3, v: &CVector3) -> CVector3 {
    CVector3::new(
        (u[1] * v[2] - u[2] * v[1]).conj(),
        (u[2] * v[0] - u[0] * v[2]).conj(),
        (u[0] * v[1] - u[1] * v[0]).conj(),
    )
}

fn gaussian7<R: Rng + ?Sized>(rng: &mut R) -> Vector7 {
    Vector7::from_fn(|_, _| rng.sample(StandardNormal))
}

/// A Gaussian vector with the components along `basis` removed and rescaled
/// to unit length. Resamples when the remainder is shorter than `1e-6`.
fn unit_orthogonal_to<R: Rng + ?Sized>(rng: &mut R, basis: &[Vector7]) -> Vector7 {
    loop {
        let mut v = gaussian7(rng);
        for b in basis {
            v -= b * b.dot(&v);
        }
        let n = v.norm();
        if n >= 1e-6 {
            return v / n;
        }
    }
}

/// A random admissible triple: `e1` on S⁶, `e2 ⊥ e1`, `e3 ⊥ {e1, e2, e1e2}`.
pub fn random_triple<R: Rng + ?Sized>(rng: &mut R) -> AdmissibleTriple {
    let e1 = unit_orthogonal_to(rng, &[]);
    random_triple_from(rng, e1)
}

fn random_triple_from<R: Rng + ?Sized>(rng: &mut R, e1: Vector7) -> AdmissibleTriple {
    let e2 = unit_orthogonal_to(rng, &[e1]);
    let e12 = im_mul(&e1, &e2);
    let e3 = unit_orthogonal_to(rng, &[e1, e2, e12]);
    AdmissibleTriple {
        e1: ImVector7(e1),
        e2: ImVector7(e2),
        e3: ImVector7(e3),
    }
}

pub fn random_g2<R: Rng + ?Sized>(rng: &mut R) -> G2Element {
    from_triple(&random_triple(rng))
}

/// Random element of K: a triple starting at `e1 = i`.
pub fn random_in_k<R: Rng + ?Sized>(rng: &mut R) -> G2Element {
    let t = random_triple_from(rng, ImVector7::unit(0).0);
    from_triple(&t)
}

pub fn random_unit_quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    let q = Quaternion(std::array::from_fn(|_| rng.sample(StandardNormal)));
    q.scale(1.0 / q.norm())
}

pub fn random_in_h<R: Rng + ?Sized>(rng: &mut R) -> G2Element {
    let alpha: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    h_from_params(Complex64::from_polar(1.0, alpha), random_unit_quaternion(rng))
}

/// Random element of H′: an H-element, premultiplied by σ half the time.
pub fn random_in_hprime<R: Rng + ?Sized>(rng: &mut R) -> G2Element {
    let h = random_in_h(rng);
    if rng.random_bool(0.5) {
        sigma() * h
    } else {
        h
    }
}

/// Random special unitary matrix from the QR factor of a complex Gaussian.
pub fn random_su3<R: Rng + ?Sized>(rng: &mut R) -> CMatrix3 {
    let mut cols: Vec<CVector3> = Vec::with_capacity(3);
    while cols.len() < 2 {
        let mut v = CVector3::from_fn(|_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        for c in &cols {
            let proj = c.dotc(&v);
            v -= c * proj;
        }
        if v.norm() > 1e-6 {
            cols.push(v.normalize());
        }
    }
    let third = conj_cross(&cols[0], &cols[1]);
    cols.push(third);
    CMatrix3::from_columns(&cols)
}
