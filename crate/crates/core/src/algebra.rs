//! The Lie algebra g2 in explicit 14-coordinate form.
//!
//! Coordinates are `(x1..x6, y1..y6, z1, z2)`. The subalgebra `k = su(3)` is the
//! set with vanishing first row; its complement `p` is 6-dimensional and carries
//! its own coordinates `(y1..y6)` via [`PVector`]. All inner products are
//! `<X, Y>_0 = -Tr(XY)`.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use nalgebra::SVector;

use crate::error::{Error, Result};
use crate::g2::{max_abs, G2Element, Matrix7};

pub type Coords14 = SVector<f64, 14>;

/// Pattern tolerance for [`AlgebraVector::from_matrix`] and [`p_extract`].
pub const PATTERN_TOL: f64 = 1e-9;

const X: usize = 0;
const Y: usize = 6;
const Z: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgebraVector(pub Coords14);

impl AlgebraVector {
    pub fn zero() -> Self {
        Self(Coords14::zeros())
    }

    pub fn from_parts(x: [f64; 6], y: [f64; 6], z: [f64; 2]) -> Self {
        let mut c = Coords14::zeros();
        for i in 0..6 {
            c[X + i] = x[i];
            c[Y + i] = y[i];
        }
        c[Z] = z[0];
        c[Z + 1] = z[1];
        Self(c)
    }

    /// Unit vector along coordinate `idx` (0..14 in the order x, y, z).
    pub fn unit(idx: usize) -> Self {
        let mut c = Coords14::zeros();
        c[idx] = 1.0;
        Self(c)
    }

    /// `x_n` for n in 1..=6.
    pub fn x(&self, n: usize) -> f64 {
        self.0[X + n - 1]
    }

    pub fn y(&self, n: usize) -> f64 {
        self.0[Y + n - 1]
    }

    pub fn z(&self, n: usize) -> f64 {
        self.0[Z + n - 1]
    }

    pub fn coords(&self) -> &Coords14 {
        &self.0
    }

    pub fn to_matrix(&self) -> Matrix7 {
        let x = |n: usize| self.x(n);
        let y = |n: usize| self.y(n);
        let z = |n: usize| self.z(n);
        let upper: [(usize, usize, f64); 21] = [
            (0, 1, x(1) + x(2)),
            (0, 2, y(1) + y(2)),
            (0, 3, x(3) + x(4)),
            (0, 4, y(3) + y(4)),
            (0, 5, x(5) + x(6)),
            (0, 6, y(5) + y(6)),
            (1, 2, z(1)),
            (1, 3, -y(5)),
            (1, 4, x(5)),
            (1, 5, -y(3)),
            (1, 6, x(3)),
            (2, 3, x(6)),
            (2, 4, y(6)),
            (2, 5, -x(4)),
            (2, 6, -y(4)),
            (3, 4, z(2)),
            (3, 5, y(1)),
            (3, 6, -x(1)),
            (4, 5, x(2)),
            (4, 6, y(2)),
            (5, 6, z(1) + z(2)),
        ];
        let mut m = Matrix7::zeros();
        for (r, c, v) in upper {
            m[(r, c)] = v;
            m[(c, r)] = -v;
        }
        m
    }

    /// Pulls a matrix back to coordinates, rejecting anything farther than
    /// [`PATTERN_TOL`] from g2.
    pub fn from_matrix(m: &Matrix7) -> Result<Self> {
        let (v, residual) = Self::from_matrix_projected(m);
        if residual > PATTERN_TOL {
            return Err(Error::Pattern {
                pattern: "g2",
                residual,
            });
        }
        Ok(v)
    }

    /// Orthogonal projection of `m` onto g2, with the entrywise distance to it.
    pub fn from_matrix_projected(m: &Matrix7) -> (Self, f64) {
        let b = basis();
        let mut c = Coords14::zeros();
        for (bm, bc) in b.ortho_matrices.iter().zip(&b.ortho_coords) {
            c += bc * frobenius(m, bm);
        }
        let v = Self(c);
        let residual = max_abs(&(m - v.to_matrix()));
        (v, residual)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0 * s)
    }

    pub fn norm0(&self) -> f64 {
        inner0(self, self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }
}

impl Add for AlgebraVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self(self.0 + o.0)
    }
}

impl Sub for AlgebraVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self(self.0 - o.0)
    }
}

impl Neg for AlgebraVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Mul<f64> for AlgebraVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self(self.0 * s)
    }
}

/// Coordinates on p: the first row of the embedded matrix is `(0, 2y1, ..., 2y6)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PVector(pub [f64; 6]);

impl PVector {
    pub fn zero() -> Self {
        Self([0.0; 6])
    }

    /// Each p coordinate sets one (x, x) or (y, y) pair of g2 coordinates.
    pub fn to_algebra(&self) -> AlgebraVector {
        let y = self.0;
        AlgebraVector::from_parts(
            [y[0], y[0], y[2], y[2], y[4], y[4]],
            [y[1], y[1], y[3], y[3], y[5], y[5]],
            [0.0, 0.0],
        )
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.0.iter().zip(&o.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

pub fn p_embed(y: &PVector) -> Matrix7 {
    y.to_algebra().to_matrix()
}

pub fn p_extract(m: &Matrix7) -> Result<PVector> {
    let mut y = [0.0; 6];
    for (i, v) in y.iter_mut().enumerate() {
        *v = m[(0, i + 1)] / 2.0;
    }
    let y = PVector(y);
    let residual = max_abs(&(m - p_embed(&y)));
    if residual > PATTERN_TOL {
        return Err(Error::Pattern { pattern: "p", residual });
    }
    Ok(y)
}

/// Coordinates on the orthogonal complement of h inside k.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPerpKVector(pub [f64; 4]);

impl HPerpKVector {
    pub fn zero() -> Self {
        Self([0.0; 4])
    }

    pub fn to_algebra(&self) -> AlgebraVector {
        let [a, b, c, d] = self.0;
        AlgebraVector::from_parts([0.0, 0.0, -d, d, -b, b], [0.0, 0.0, -c, c, -a, a], [0.0, 0.0])
    }
}

pub fn h_perp_k_embed(x: &HPerpKVector) -> AlgebraVector {
    x.to_algebra()
}

/// `<A, B>_0` for matrices, `-Tr(AB)`.
pub fn inner0_matrix(a: &Matrix7, b: &Matrix7) -> f64 {
    -(a * b).trace()
}

pub fn inner0(a: &AlgebraVector, b: &AlgebraVector) -> f64 {
    (a.0.transpose() * basis().gram0 * b.0)[0]
}

fn frobenius(a: &Matrix7, b: &Matrix7) -> f64 {
    a.component_mul(b).sum()
}

pub fn commutator(a: &Matrix7, b: &Matrix7) -> Matrix7 {
    a * b - b * a
}

pub fn bracket(a: &AlgebraVector, b: &AlgebraVector) -> AlgebraVector {
    let (v, residual) = AlgebraVector::from_matrix_projected(&commutator(&a.to_matrix(), &b.to_matrix()));
    debug_assert!(residual < PATTERN_TOL, "bracket left g2: {residual:e}");
    v
}

/// `g X g^{-1}`.
pub fn ad_conj(g: &G2Element, x: &AlgebraVector) -> AlgebraVector {
    let m = g.matrix();
    let (v, residual) = AlgebraVector::from_matrix_projected(&(m * x.to_matrix() * m.transpose()));
    debug_assert!(residual < 1e-8, "conjugate left g2: {residual:e}");
    v
}

/// Projection to k: each (x, x) and (y, y) pair keeps its antisymmetric half,
/// z is unchanged.
pub fn project_k(v: &AlgebraVector) -> AlgebraVector {
    let mut c = v.0;
    for pair in 0..6 {
        let i = 2 * pair;
        let d = (c[i] - c[i + 1]) / 2.0;
        c[i] = d;
        c[i + 1] = -d;
    }
    AlgebraVector(c)
}

pub fn project_p(v: &AlgebraVector) -> AlgebraVector {
    *v - project_k(v)
}

/// p-coordinates of `project_p(v)`.
pub fn p_coords(v: &AlgebraVector) -> PVector {
    let c = &v.0;
    let s = |i: usize| (c[i] + c[i + 1]) / 2.0;
    PVector([s(X), s(Y), s(X + 2), s(Y + 2), s(X + 4), s(Y + 4)])
}

/// Precomputed bases of g2.
pub struct Basis {
    /// Gram matrix of the coordinate directions under `<,>_0`.
    pub gram0: nalgebra::SMatrix<f64, 14, 14>,
    /// `<,>_0`-orthonormal basis: 8 elements spanning k, then 6 spanning p.
    pub ortho_coords: [Coords14; 14],
    pub ortho_matrices: [Matrix7; 14],
    /// Basis of h (not normalized).
    pub h: [AlgebraVector; 4],
}

pub const K_DIM: usize = 8;

pub fn basis() -> &'static Basis {
    static BASIS: OnceLock<Basis> = OnceLock::new();
    BASIS.get_or_init(build_basis)
}

fn pair_basis(i: usize, sign: f64) -> Coords14 {
    let mut c = Coords14::zeros();
    c[i] = 1.0;
    c[i + 1] = sign;
    c
}

fn build_basis() -> Basis {
    let mats: Vec<Matrix7> = (0..14).map(|i| AlgebraVector::unit(i).to_matrix()).collect();
    let mut gram0 = nalgebra::SMatrix::<f64, 14, 14>::zeros();
    for i in 0..14 {
        for j in 0..14 {
            gram0[(i, j)] = inner0_matrix(&mats[i], &mats[j]);
        }
    }
    let ip = |a: &Coords14, b: &Coords14| (a.transpose() * gram0 * b)[0];

    let mut gens: Vec<Coords14> = Vec::with_capacity(14);
    for pair in 0..6 {
        gens.push(pair_basis(2 * pair, -1.0));
    }
    gens.push(AlgebraVector::unit(Z).0);
    gens.push(AlgebraVector::unit(Z + 1).0);
    for pair in 0..6 {
        gens.push(pair_basis(2 * pair, 1.0));
    }

    let mut ortho: Vec<Coords14> = Vec::with_capacity(14);
    for g in gens {
        let mut v = g;
        for _ in 0..2 {
            for o in &ortho {
                v -= o * ip(o, &v);
            }
        }
        let n = ip(&v, &v).sqrt();
        ortho.push(v / n);
    }
    let ortho_coords: [Coords14; 14] = ortho.try_into().expect("14 basis vectors");
    let ortho_matrices = ortho_coords.map(|c| AlgebraVector(c).to_matrix());

    let h = [
        AlgebraVector(pair_basis(X, -1.0)),
        AlgebraVector(pair_basis(Y, -1.0)),
        AlgebraVector::unit(Z),
        AlgebraVector::unit(Z + 1),
    ];
    Basis {
        gram0,
        ortho_coords,
        ortho_matrices,
        h,
    }
}

/// Largest `|<v, h>_0|` over the unit-normalized h basis.
pub fn h_defect(v: &AlgebraVector) -> f64 {
    basis()
        .h
        .iter()
        .map(|h| (inner0(v, h) / h.norm0()).abs())
        .fold(0.0, f64::max)
}

/// Orthogonal projection onto k computed from the orthonormal basis.
pub fn project_k_orthonormal(v: &AlgebraVector) -> AlgebraVector {
    let b = basis();
    let mut c = Coords14::zeros();
    for o in &b.ortho_coords[..K_DIM] {
        c += o * inner0(v, &AlgebraVector(*o));
    }
    AlgebraVector(c)
}
