//! Octonion arithmetic over the ordered basis `{1, i, j, k, ℓ, iℓ, jℓ, kℓ}`.
//!
//! Multiplication is table driven. The table stores each basis product as a
//! signed basis index, so products of basis elements are exact. A second,
//! independent route through the Cayley–Dickson doubling of the quaternions
//! is kept for cross-checking the table.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use nalgebra::SVector;

/// Real 7-vector in the imaginary basis order `(i, j, k, ℓ, iℓ, jℓ, kℓ)`.
pub type Vector7 = SVector<f64, 7>;

/// Short labels for the eight basis elements, in storage order.
pub const BASIS_LABELS: [&str; 8] = ["1", "i", "j", "k", "l", "il", "jl", "kl"];

/// Products of imaginary basis elements, `(row)(column)`.
///
/// An entry `s` encodes `sign(s) * e_{|s|-1}` where `e_0 = 1`, `e_1 = i`, ...,
/// `e_7 = kℓ`. Row and column index the imaginary units `i..kℓ`.
pub type MulTable = [[i8; 7]; 7];

pub const CAYLEY_TABLE: MulTable = [
    // i     j   k   ℓ   iℓ  jℓ  kℓ
    [-1, 4, -3, 6, -5, -8, 7], // i
    [-4, -1, 2, 7, 8, -5, -6], // j
    [3, -2, -1, 8, -7, 6, -5], // k
    [-6, -7, -8, -1, 2, 3, 4], // ℓ
    [5, -8, 7, -2, -1, -4, 3], // iℓ
    [8, 5, -6, -3, 4, -1, -2], // jℓ
    [-7, 6, 5, -4, -3, 2, -1], // kℓ
];

/// Basis product `e_a * e_b` for `a, b` in `0..8` as `(index, sign)`.
#[inline]
pub fn basis_product(table: &MulTable, a: usize, b: usize) -> (usize, f64) {
    match (a, b) {
        (0, b) => (b, 1.0),
        (a, 0) => (a, 1.0),
        (a, b) => {
            let s = table[a - 1][b - 1];
            ((s.unsigned_abs() - 1) as usize, f64::from(s.signum()))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Octonion(pub [f64; 8]);

impl Octonion {
    pub const ZERO: Octonion = Octonion([0.0; 8]);
    pub const ONE: Octonion = Octonion([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);

    pub fn new(coeffs: [f64; 8]) -> Self {
        Octonion(coeffs)
    }

    /// The basis element with storage index `idx` (`0` is the unit).
    pub fn basis(idx: usize) -> Self {
        let mut c = [0.0; 8];
        c[idx] = 1.0;
        Octonion(c)
    }

    pub fn re(&self) -> f64 {
        self.0[0]
    }

    pub fn im(&self) -> ImVector7 {
        ImVector7(Vector7::from_fn(|r, _| self.0[r + 1]))
    }

    pub fn conj(&self) -> Self {
        let mut c = self.0.map(|x| -x);
        c[0] = self.0[0];
        Octonion(c)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Octonion(self.0.map(|x| x * s))
    }

    /// Product through the canonical multiplication table.
    pub fn mul_table(&self, other: &Self) -> Self {
        mul_with_table(&CAYLEY_TABLE, self, other)
    }

    /// Product through `(a + bℓ)(c + dℓ) = (ac − d̄b) + (da + bc̄)ℓ` on quaternion pairs.
    pub fn mul_cayley_dickson(&self, other: &Self) -> Self {
        let (a, b) = self.split();
        let (c, d) = other.split();
        let lo = a.mul(&c).sub(&d.conj().mul(&b));
        let hi = d.mul(&a).add(&b.mul(&c.conj()));
        Octonion::join(lo, hi)
    }

    fn split(&self) -> (Quaternion, Quaternion) {
        let c = &self.0;
        (
            Quaternion([c[0], c[1], c[2], c[3]]),
            Quaternion([c[4], c[5], c[6], c[7]]),
        )
    }

    fn join(lo: Quaternion, hi: Quaternion) -> Self {
        let (a, b) = (lo.0, hi.0);
        Octonion([a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]])
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0, |m, (a, b)| f64::max(m, (a - b).abs()))
    }
}

/// Bilinear extension of a basis multiplication table.
pub fn mul_with_table(table: &MulTable, a: &Octonion, b: &Octonion) -> Octonion {
    let mut out = [0.0; 8];
    for (p, &x) in a.0.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (q, &y) in b.0.iter().enumerate() {
            if y == 0.0 {
                continue;
            }
            let (idx, sign) = basis_product(table, p, q);
            out[idx] += sign * x * y;
        }
    }
    Octonion(out)
}

/// `(a·b)·c − a·(b·c)`.
pub fn associator(a: &Octonion, b: &Octonion, c: &Octonion) -> Octonion {
    (*a * *b) * *c - *a * (*b * *c)
}

impl Mul for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: Octonion) -> Octonion {
        self.mul_table(&rhs)
    }
}

impl Add for Octonion {
    type Output = Octonion;
    fn add(self, rhs: Octonion) -> Octonion {
        let mut c = self.0;
        for (x, y) in c.iter_mut().zip(rhs.0) {
            *x += y;
        }
        Octonion(c)
    }
}

impl Sub for Octonion {
    type Output = Octonion;
    fn sub(self, rhs: Octonion) -> Octonion {
        self + (-rhs)
    }
}

impl Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        Octonion(self.0.map(|x| -x))
    }
}

impl fmt::Display for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, label) in self.0.iter().zip(BASIS_LABELS) {
            if *c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if label == "1" {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}{label}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Quaternion `w + x i + y j + z k`, stored `[w, x, y, z]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quaternion(pub [f64; 4]);

impl Quaternion {
    pub const ONE: Quaternion = Quaternion([1.0, 0.0, 0.0, 0.0]);

    pub fn mul(&self, o: &Self) -> Self {
        let [a0, a1, a2, a3] = self.0;
        let [b0, b1, b2, b3] = o.0;
        Quaternion([
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ])
    }

    pub fn conj(&self) -> Self {
        let [w, x, y, z] = self.0;
        Quaternion([w, -x, -y, -z])
    }

    pub fn add(&self, o: &Self) -> Self {
        Quaternion(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Quaternion(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }

    pub fn scale(&self, s: f64) -> Self {
        Quaternion(self.0.map(|x| x * s))
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// The unit complex number `re + im·i` viewed as a quaternion.
    pub fn from_complex(re: f64, im: f64) -> Self {
        Quaternion([re, im, 0.0, 0.0])
    }
}

/// An imaginary octonion, coordinates over `(i, j, k, ℓ, iℓ, jℓ, kℓ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImVector7(pub Vector7);

impl ImVector7 {
    pub fn new(coords: [f64; 7]) -> Self {
        ImVector7(Vector7::from(coords))
    }

    pub fn zeros() -> Self {
        ImVector7(Vector7::zeros())
    }

    /// Unit vector along imaginary basis element `idx` (`0 = i`, ..., `6 = kℓ`).
    pub fn unit(idx: usize) -> Self {
        let mut v = Vector7::zeros();
        v[idx] = 1.0;
        ImVector7(v)
    }

    pub fn embed(&self) -> Octonion {
        let mut c = [0.0; 8];
        c[1..].copy_from_slice(self.0.as_slice());
        Octonion(c)
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// The full octonion product of the embedded vectors.
    pub fn mul_full(&self, other: &Self) -> Octonion {
        self.embed() * other.embed()
    }

    /// Imaginary part of the product. For orthogonal inputs this is the
    /// whole product; the real part is `-dot(u, v)` in general.
    pub fn im_mul(&self, other: &Self) -> ImVector7 {
        self.mul_full(other).im()
    }

    pub fn scale(&self, s: f64) -> Self {
        ImVector7(self.0 * s)
    }

    pub fn normalized(&self) -> Self {
        ImVector7(self.0 / self.0.norm())
    }
}

impl From<Vector7> for ImVector7 {
    fn from(v: Vector7) -> Self {
        ImVector7(v)
    }
}

impl From<ImVector7> for Vector7 {
    fn from(v: ImVector7) -> Self {
        v.0
    }
}

impl Index<usize> for ImVector7 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for ImVector7 {
    type Output = ImVector7;
    fn add(self, rhs: Self) -> Self {
        ImVector7(self.0 + rhs.0)
    }
}

impl AddAssign for ImVector7 {
    fn add_assign(&mut self, rhs: Self) {
        self.0 += rhs.0;
    }
}

impl Sub for ImVector7 {
    type Output = ImVector7;
    fn sub(self, rhs: Self) -> Self {
        ImVector7(self.0 - rhs.0)
    }
}

impl Neg for ImVector7 {
    type Output = ImVector7;
    fn neg(self) -> Self {
        ImVector7(-self.0)
    }
}

/// Product of imaginary units as plain 7-vectors; the real part is dropped.
pub fn im_mul(u: &Vector7, v: &Vector7) -> Vector7 {
    ImVector7(*u).im_mul(&ImVector7(*v)).0
}

/// Largest deviation of a table's bilinear extension from the Cayley–Dickson
/// product over all 64 basis pairs. Zero for a correct table.
pub fn table_vs_cayley_dickson(table: &MulTable) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 0..8 {
        for b in 0..8 {
            let x = Octonion::basis(a);
            let y = Octonion::basis(b);
            let d = mul_with_table(table, &x, &y).max_abs_diff(&x.mul_cayley_dickson(&y));
            worst = worst.max(d);
        }
    }
    worst
}
