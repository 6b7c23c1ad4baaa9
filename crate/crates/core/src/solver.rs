//! Minimum of the curvature certificate over horizontal planes at a point.
//!
//! Planes are parametrized by `(ξ, η) ∈ R^10 × R^10`, coordinates in a
//! `metric1`-orthonormal basis of the horizontal space (4 directions from the
//! h-complement in k, 6 from p). The certificate is then a sum of squares of
//! bilinear forms in `(ξ, η)`. Its Hessian is cheap to form exactly, so each
//! restart runs a damped Newton iteration on the Grassmannian of planes.

use nalgebra::{SMatrix, SVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::algebra::{basis, commutator, h_perp_k_embed, AlgebraVector, HPerpKVector, PVector};
use crate::g2::G2Element;
use crate::metric::{ad_inv, metric1, CertificateParts, CheegerParam, PlanePair};
use crate::par::{map_indexed, Execution};
use crate::sampling::{rng_for, stream_id};

pub const HDIM: usize = 10;
const KDIM: usize = 4;
const CODIM: usize = HDIM - 2;
const VARS: usize = 2 * HDIM;

pub type HVec = SVector<f64, HDIM>;
pub type PlaneVars = SVector<f64, VARS>;
type Coeffs = [f64; 14];

/// Penalty weight on `|ξ|² = |η|² = 1`, `ξ·η = 0`.
pub const PENALTY_WEIGHT: f64 = 1e3;

/// `metric1`-orthonormal basis of the horizontal space.
#[derive(Clone, Debug)]
pub struct HorizontalFrame {
    t: CheegerParam,
    basis: [AlgebraVector; HDIM],
}

impl HorizontalFrame {
    pub fn new(t: CheegerParam) -> Self {
        let basis = std::array::from_fn(|i| {
            let v = if i < KDIM {
                let mut x = [0.0; 4];
                x[i] = 1.0;
                h_perp_k_embed(&HPerpKVector(x))
            } else {
                let mut y = [0.0; 6];
                y[i - KDIM] = 1.0;
                PVector(y).to_algebra()
            };
            v.scale(1.0 / metric1(&v, &v, t).sqrt())
        });
        Self { t, basis }
    }

    pub fn vector(&self, i: usize) -> &AlgebraVector {
        &self.basis[i]
    }

    pub fn to_algebra(&self, xi: &HVec) -> AlgebraVector {
        let mut v = AlgebraVector::zero();
        for (c, b) in xi.iter().zip(&self.basis) {
            v = v + *b * *c;
        }
        v
    }

    /// Coordinates of the horizontal part of `v`.
    pub fn coords(&self, v: &AlgebraVector) -> HVec {
        HVec::from_fn(|i, _| metric1(v, &self.basis[i], self.t))
    }
}

fn orth_coeffs(m: &crate::g2::Matrix7) -> Coeffs {
    let b = basis();
    std::array::from_fn(|i| m.component_mul(&b.ortho_matrices[i]).sum())
}

#[inline]
fn axpy(acc: &mut Coeffs, a: f64, x: &Coeffs) {
    for (o, v) in acc.iter_mut().zip(x) {
        *o += a * v;
    }
}

/// The certificate at a fixed `g` as a quadratic map of `(ξ, η)`.
#[derive(Clone, Debug)]
pub struct CertificateModel {
    frame: HorizontalFrame,
    /// `<,>_0`-orthonormal coordinates of `[e_i, e_j]`.
    table: [[Coeffs; HDIM]; HDIM],
    /// p-coordinates of `Ad_{g^-1} e_i` in the orthonormal p-frame.
    ad: SMatrix<f64, 6, HDIM>,
}

/// Residual blocks: full bracket, its k part, its p part, and the p part of
/// the bracket of the `Ad_{g^-1}` images.
type Blocks = [Coeffs; 4];

/// Jacobian of [`Blocks`] with one 14-vector per variable and block. `split[u]`
/// is the k-block column for variables in the k class and the p-block column
/// otherwise; the other block does not depend on that variable.
struct Columns {
    full: [Coeffs; VARS],
    split: [Coeffs; VARS],
    ad: [Coeffs; VARS],
}

type Hessian = SMatrix<f64, VARS, VARS>;

#[inline]
fn dot(a: &Coeffs, b: &Coeffs) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn same_class(i: usize, j: usize) -> bool {
    (i % HDIM < KDIM) == (j % HDIM < KDIM)
}

#[inline]
fn class_block(i: usize) -> usize {
    if i % HDIM < KDIM {
        1
    } else {
        2
    }
}

fn halves(z: &PlaneVars) -> (HVec, HVec) {
    (z.fixed_rows::<HDIM>(0).into(), z.fixed_rows::<HDIM>(HDIM).into())
}

impl CertificateModel {
    pub fn new(g: &G2Element, t: CheegerParam) -> Self {
        let frame = HorizontalFrame::new(t);
        let mats: Vec<_> = frame.basis.iter().map(|b| b.to_matrix()).collect();
        let mut table = [[[0.0; 14]; HDIM]; HDIM];
        for i in 0..HDIM {
            for j in 0..HDIM {
                table[i][j] = orth_coeffs(&commutator(&mats[i], &mats[j]));
            }
        }
        let mut ad = SMatrix::<f64, 6, HDIM>::zeros();
        for i in 0..HDIM {
            let v = ad_inv(g, &frame.basis[i]);
            for a in 0..6 {
                // p-frame vectors are e_{4+a}; their metric1 and <,>_0 agree
                ad[(a, i)] = metric1(&v, &frame.basis[KDIM + a], t);
            }
        }
        Self { frame, table, ad }
    }

    pub fn frame(&self) -> &HorizontalFrame {
        &self.frame
    }

    fn p_table(&self, a: usize, b: usize) -> &Coeffs {
        &self.table[KDIM + a][KDIM + b]
    }

    fn blocks(&self, xi: &HVec, eta: &HVec) -> Blocks {
        let mut r = [[0.0; 14]; 4];
        for i in 0..HDIM {
            for j in i + 1..HDIM {
                let w = xi[i] * eta[j] - xi[j] * eta[i];
                let t = &self.table[i][j];
                axpy(&mut r[0], w, t);
                if same_class(i, j) {
                    axpy(&mut r[class_block(i)], w, t);
                }
            }
        }
        let c = self.ad * xi;
        let d = self.ad * eta;
        for a in 0..6 {
            for b in a + 1..6 {
                axpy(&mut r[3], c[a] * d[b] - c[b] * d[a], self.p_table(a, b));
            }
        }
        r
    }

    fn columns(&self, xi: &HVec, eta: &HVec) -> Columns {
        let mut split = [[0.0; 14]; VARS];
        let mut cross = [[0.0; 14]; VARS];
        for i in 0..HDIM {
            for j in i + 1..HDIM {
                let t = &self.table[i][j];
                let acc = if same_class(i, j) { &mut split } else { &mut cross };
                axpy(&mut acc[i], eta[j], t);
                axpy(&mut acc[j], -eta[i], t);
                axpy(&mut acc[HDIM + j], xi[i], t);
                axpy(&mut acc[HDIM + i], -xi[j], t);
            }
        }
        let full = std::array::from_fn(|u| std::array::from_fn(|q| split[u][q] + cross[u][q]));

        let c = self.ad * xi;
        let d = self.ad * eta;
        let mut dc = [[0.0; 14]; 6];
        let mut dd = [[0.0; 14]; 6];
        for a in 0..6 {
            for b in a + 1..6 {
                let t = self.p_table(a, b);
                axpy(&mut dc[a], d[b], t);
                axpy(&mut dc[b], -d[a], t);
                axpy(&mut dd[b], c[a], t);
                axpy(&mut dd[a], -c[b], t);
            }
        }
        let mut ad = [[0.0; 14]; VARS];
        for i in 0..HDIM {
            for a in 0..6 {
                axpy(&mut ad[i], self.ad[(a, i)], &dc[a]);
                axpy(&mut ad[HDIM + i], self.ad[(a, i)], &dd[a]);
            }
        }
        Columns { full, split, ad }
    }

    fn bracket_gradient(r: &Blocks, cols: &Columns) -> PlaneVars {
        PlaneVars::from_fn(|u, _| {
            2.0 * (dot(&cols.full[u], &r[0]) + dot(&cols.split[u], &r[class_block(u)]) + dot(&cols.ad[u], &r[3]))
        })
    }

    fn penalty(xi: &HVec, eta: &HVec) -> (f64, PlaneVars) {
        let (xx, yy, xy) = (xi.norm_squared(), eta.norm_squared(), xi.dot(eta));
        let value = PENALTY_WEIGHT * ((xx - 1.0).powi(2) + (yy - 1.0).powi(2) + xy * xy);
        let mut grad = PlaneVars::zeros();
        grad.fixed_rows_mut::<HDIM>(0)
            .copy_from(&((xi * (4.0 * (xx - 1.0)) + eta * (2.0 * xy)) * PENALTY_WEIGHT));
        grad.fixed_rows_mut::<HDIM>(HDIM)
            .copy_from(&((eta * (4.0 * (yy - 1.0)) + xi * (2.0 * xy)) * PENALTY_WEIGHT));
        (value, grad)
    }

    /// Bracket sum plus the penalty `w((|ξ|² − 1)² + (|η|² − 1)² + (ξ·η)²)`.
    pub fn objective(&self, z: &PlaneVars) -> f64 {
        let (xi, eta) = halves(z);
        let s: f64 = self.blocks(&xi, &eta).iter().map(|b| dot(b, b)).sum();
        s + Self::penalty(&xi, &eta).0
    }

    pub fn objective_gradient(&self, z: &PlaneVars) -> PlaneVars {
        let (xi, eta) = halves(z);
        let r = self.blocks(&xi, &eta);
        Self::bracket_gradient(&r, &self.columns(&xi, &eta)) + Self::penalty(&xi, &eta).1
    }

    /// Value, gradient and exact Hessian of the unnormalized bracket sum.
    pub fn bracket_derivatives(&self, z: &PlaneVars) -> (f64, PlaneVars, Hessian) {
        let (xi, eta) = halves(z);
        let r = self.blocks(&xi, &eta);
        let cols = self.columns(&xi, &eta);
        let s = r.iter().map(|b| dot(b, b)).sum();
        let grad = Self::bracket_gradient(&r, &cols);

        let mut h = Hessian::zeros();
        for u in 0..VARS {
            for v in u..VARS {
                let mut x = dot(&cols.full[u], &cols.full[v]) + dot(&cols.ad[u], &cols.ad[v]);
                if same_class(u, v) {
                    x += dot(&cols.split[u], &cols.split[v]);
                }
                h[(u, v)] = x;
                h[(v, u)] = x;
            }
        }

        // each residual is bilinear, so second derivatives are the ξ-η cross terms
        let mut pm = SMatrix::<f64, 6, 6>::zeros();
        for a in 0..6 {
            for b in a + 1..6 {
                let v = dot(&r[3], self.p_table(a, b));
                pm[(a, b)] = v;
                pm[(b, a)] = -v;
            }
        }
        let cross_ad = self.ad.transpose() * pm * self.ad;
        for i in 0..HDIM {
            for j in 0..HDIM {
                let t = &self.table[i][j];
                let mut c = cross_ad[(i, j)] + dot(&r[0], t);
                if same_class(i, j) {
                    c += dot(&r[class_block(i)], t);
                }
                h[(i, HDIM + j)] += c;
                h[(HDIM + j, i)] += c;
            }
        }
        (s, grad, h * 2.0)
    }

    /// Certificate parts at `(ξ, η)` before normalization.
    pub fn raw_parts(&self, z: &PlaneVars) -> CertificateParts {
        let (xi, eta) = halves(z);
        let r = self.blocks(&xi, &eta);
        CertificateParts {
            bracket_full: dot(&r[0], &r[0]),
            bracket_k: dot(&r[1], &r[1]),
            bracket_p: dot(&r[2], &r[2]),
            bracket_ad_p: dot(&r[3], &r[3]),
        }
    }

    fn gram(xi: &HVec, eta: &HVec) -> f64 {
        xi.norm_squared() * eta.norm_squared() - xi.dot(eta).powi(2)
    }

    /// Certificate of the plane spanned by `(ξ, η)`: bracket sum over the Gram
    /// determinant, which equals its value on an orthonormal basis.
    pub fn certificate(&self, z: &PlaneVars) -> f64 {
        let (xi, eta) = halves(z);
        let s: f64 = self.blocks(&xi, &eta).iter().map(|b| dot(b, b)).sum();
        s / Self::gram(&xi, &eta)
    }

    pub fn certificate_gradient(&self, z: &PlaneVars) -> PlaneVars {
        let (xi, eta) = halves(z);
        let r = self.blocks(&xi, &eta);
        let s: f64 = r.iter().map(|b| dot(b, b)).sum();
        let ds = Self::bracket_gradient(&r, &self.columns(&xi, &eta));
        let (xx, yy, xy) = (xi.norm_squared(), eta.norm_squared(), xi.dot(&eta));
        let d = xx * yy - xy * xy;
        let mut dd = PlaneVars::zeros();
        dd.fixed_rows_mut::<HDIM>(0)
            .copy_from(&(xi * (2.0 * yy) - eta * (2.0 * xy)));
        dd.fixed_rows_mut::<HDIM>(HDIM)
            .copy_from(&(eta * (2.0 * xx) - xi * (2.0 * xy)));
        (ds * d - dd * s) / (d * d)
    }

    pub fn plane_vars(&self, pair: &PlanePair) -> PlaneVars {
        let mut z = PlaneVars::zeros();
        z.fixed_rows_mut::<HDIM>(0).copy_from(&self.frame.coords(pair.x()));
        z.fixed_rows_mut::<HDIM>(HDIM).copy_from(&self.frame.coords(pair.y()));
        normalize_pair(&z)
    }

    pub fn plane_pair(&self, z: &PlaneVars) -> PlaneVectors {
        let (xi, eta) = halves(z);
        PlaneVectors {
            x: self.frame.to_algebra(&xi),
            y: self.frame.to_algebra(&eta),
        }
    }
}

/// The two algebra vectors of a plane in solver coordinates.
#[derive(Clone, Copy, Debug)]
pub struct PlaneVectors {
    pub x: AlgebraVector,
    pub y: AlgebraVector,
}

/// Gram-Schmidt in solver coordinates.
pub fn normalize_pair(z: &PlaneVars) -> PlaneVars {
    let mut xi: HVec = z.fixed_rows::<HDIM>(0).into();
    let mut eta: HVec = z.fixed_rows::<HDIM>(HDIM).into();
    xi /= xi.norm();
    eta -= xi * xi.dot(&eta);
    eta /= eta.norm();
    let mut out = PlaneVars::zeros();
    out.fixed_rows_mut::<HDIM>(0).copy_from(&xi);
    out.fixed_rows_mut::<HDIM>(HDIM).copy_from(&eta);
    out
}

pub fn random_plane_vars<R: Rng + ?Sized>(rng: &mut R) -> PlaneVars {
    normalize_pair(&PlaneVars::from_fn(|_, _| rng.sample(StandardNormal)))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Method {
    /// Damped Newton on the Grassmannian of planes.
    #[default]
    Newton,
    /// Armijo steepest descent on the sphere-penalized objective.
    SteepestDescent,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Outer stream id; restart `r` draws from `stream_id(stream, r)`.
    pub stream: u64,
    pub max_iter: usize,
    pub method: Method,
    pub exec: Execution,
    /// If a supplied start already reaches this value the random restarts are skipped.
    pub stop_below: f64,
    /// Random restarts are first run to [`SCREEN_GAIN`]; this many of the best
    /// are then continued to [`STALL_GAIN`].
    pub polish: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            restarts: 200,
            seed: 0,
            stream: 0,
            max_iter: 200,
            method: Method::Newton,
            exec: Execution::Parallel,
            stop_below: 1e-24,
            polish: 4,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LocalMin {
    pub z: PlaneVars,
    pub value: f64,
    pub iterations: usize,
}

/// Unit `v` whose reflection `I − 2vv^T` maps `e_k` into the span of the unit
/// vector `x`.
fn reflector(x: &HVec, k: usize) -> HVec {
    let mut v = *x;
    v[k] += if x[k] >= 0.0 { 1.0 } else { -1.0 };
    v.normalize()
}

fn reflect(v: &HVec, y: &mut HVec) {
    let s = 2.0 * v.dot(y);
    *y -= v * s;
}

/// Orthonormal basis of the complement of `span(ξ, η)` in `R^10`, for an
/// orthonormal pair: columns 3..10 of a product of two reflections sending
/// `e_1, e_2` into the plane.
fn complement(xi: &HVec, eta: &HVec) -> SMatrix<f64, HDIM, CODIM> {
    let v1 = reflector(xi, 0);
    let mut e = *eta;
    reflect(&v1, &mut e);
    e[0] = 0.0;
    let v2 = reflector(&e.normalize(), 1);
    let mut u = SMatrix::<f64, HDIM, CODIM>::zeros();
    for c in 0..CODIM {
        let mut col = HVec::ith(c + 2, 1.0);
        reflect(&v2, &mut col);
        reflect(&v1, &mut col);
        u.set_column(c, &col);
    }
    u
}

const TANGENT: usize = 2 * CODIM;

/// Relative decrease below which a Newton step counts as converged.
pub const STALL_GAIN: f64 = 1e-9;

/// Looser stall threshold for screening random restarts.
pub const SCREEN_GAIN: f64 = 1e-3;

/// Iteration cap used when polishing.
pub const POLISH_ITER: usize = 2000;

/// Newton iteration on the Grassmannian of planes in the horizontal space.
///
/// At an orthonormal pair the normalized certificate has gradient `Q^T ∇S`
/// and Hessian `Q^T ∇²S Q − 2S`, where `S` is the bracket sum and `Q` spans the
/// pairs orthogonal to the plane. Steps are Levenberg-damped and retracted by
/// Gram-Schmidt. Stops at `S < 1e-30`, after an accepted step gaining less
/// than a `stall_gain` fraction, or when no damping decreases `S`.
pub fn grassmann_newton(model: &CertificateModel, start: &PlaneVars, max_iter: usize, stall_gain: f64) -> LocalMin {
    let mut z = normalize_pair(start);
    let mut lambda = 1e-6;
    let mut stalled = false;
    let mut iterations = 0;
    let (mut s, mut grad, mut hess) = model.bracket_derivatives(&z);
    while iterations < max_iter && s > 1e-30 {
        iterations += 1;
        let (xi, eta) = halves(&z);
        let u = complement(&xi, &eta);
        let mut g = SVector::<f64, TANGENT>::zeros();
        g.fixed_rows_mut::<CODIM>(0)
            .copy_from(&u.tr_mul(&grad.fixed_rows::<HDIM>(0)));
        g.fixed_rows_mut::<CODIM>(CODIM)
            .copy_from(&u.tr_mul(&grad.fixed_rows::<HDIM>(HDIM)));
        let mut h = SMatrix::<f64, TANGENT, TANGENT>::zeros();
        for (r, c) in [(0, 0), (0, 1), (1, 1)] {
            let block = u.tr_mul(&(hess.fixed_view::<HDIM, HDIM>(r * HDIM, c * HDIM) * u));
            h.fixed_view_mut::<CODIM, CODIM>(r * CODIM, c * CODIM).copy_from(&block);
            if r != c {
                h.fixed_view_mut::<CODIM, CODIM>(c * CODIM, r * CODIM)
                    .copy_from(&block.transpose());
            }
        }
        for i in 0..TANGENT {
            h[(i, i)] -= 2.0 * s;
        }
        let scale = h.diagonal().amax().max(1e-300);
        let mut accepted = false;
        while lambda < 1e10 {
            let mut m = h;
            for i in 0..TANGENT {
                m[(i, i)] += lambda * scale;
            }
            let Some(chol) = m.cholesky() else {
                lambda *= 8.0;
                continue;
            };
            let step = chol.solve(&g);
            let mut dz = PlaneVars::zeros();
            dz.fixed_rows_mut::<HDIM>(0)
                .copy_from(&(u * step.fixed_rows::<CODIM>(0)));
            dz.fixed_rows_mut::<HDIM>(HDIM)
                .copy_from(&(u * step.fixed_rows::<CODIM>(CODIM)));
            let trial = normalize_pair(&(z - dz));
            let st = model.certificate(&trial);
            if st < s {
                stalled = s - st < stall_gain * s;
                z = trial;
                lambda = (lambda / 8.0).max(1e-15);
                accepted = true;
                break;
            }
            lambda *= 8.0;
        }
        if !accepted || stalled {
            break;
        }
        (s, grad, hess) = model.bracket_derivatives(&z);
    }
    LocalMin {
        z,
        value: model.certificate(&z),
        iterations,
    }
}

/// Steepest descent with Armijo backtracking on the penalized objective.
pub fn steepest_descent(model: &CertificateModel, start: &PlaneVars, max_iter: usize) -> LocalMin {
    let mut z = *start;
    let mut f = model.objective(&z);
    let mut step = 1e-2;
    let mut iterations = 0;
    while iterations < max_iter && f > 1e-30 {
        iterations += 1;
        let g = model.objective_gradient(&z);
        let gg = g.norm_squared();
        if gg < 1e-40 {
            break;
        }
        let mut moved = false;
        while step > 1e-16 {
            let trial = z - g * step;
            let ft = model.objective(&trial);
            if ft <= f - 1e-4 * step * gg {
                z = trial;
                f = ft;
                step *= 2.0;
                moved = true;
                break;
            }
            step /= 2.0;
        }
        if !moved {
            break;
        }
    }
    let z = normalize_pair(&z);
    LocalMin {
        z,
        value: model.certificate(&z),
        iterations,
    }
}

fn screen(model: &CertificateModel, start: &PlaneVars, opts: &SolverOptions) -> LocalMin {
    match opts.method {
        Method::Newton => grassmann_newton(model, start, opts.max_iter, SCREEN_GAIN),
        Method::SteepestDescent => steepest_descent(model, start, opts.max_iter),
    }
}

fn polish(model: &CertificateModel, start: &PlaneVars, opts: &SolverOptions) -> LocalMin {
    match opts.method {
        Method::Newton => grassmann_newton(model, start, opts.max_iter.max(POLISH_ITER), STALL_GAIN),
        Method::SteepestDescent => steepest_descent(model, start, opts.max_iter),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MinCertificate {
    pub value: f64,
    pub witness: PlanePair,
    /// Index of the winning start: supplied starts first, then random restarts.
    pub start_index: usize,
}

/// Smallest certificate found from random starts.
pub fn min_certificate(g: &G2Element, t: CheegerParam, opts: &SolverOptions) -> MinCertificate {
    min_certificate_with_starts(g, t, &[], opts)
}

type Best = Option<(f64, usize, PlaneVars)>;

fn consider(best: &mut Best, value: f64, idx: usize, z: PlaneVars) {
    let better = best.is_none_or(|(v, i, _)| value < v || (value == v && idx < i));
    if better {
        *best = Some((value, idx, z));
    }
}

/// Like [`min_certificate`], trying `starts` before the random restarts.
///
/// Supplied starts are run to full convergence. Random restarts are screened
/// and the best `opts.polish` of them refined; ties break on the lower index.
pub fn min_certificate_with_starts(
    g: &G2Element,
    t: CheegerParam,
    starts: &[PlanePair],
    opts: &SolverOptions,
) -> MinCertificate {
    let model = CertificateModel::new(g, t);
    let mut best: Best = None;
    for (idx, s) in starts.iter().enumerate() {
        let m = polish(&model, &screen(&model, &model.plane_vars(s), opts).z, opts);
        consider(&mut best, m.value, idx, m.z);
    }
    let done = matches!(best, Some((v, _, _)) if v < opts.stop_below);
    if !done {
        let mut screened: Vec<(usize, LocalMin)> = map_indexed(opts.exec, opts.restarts, |r| {
            let mut rng = rng_for(opts.seed, stream_id(opts.stream, r as u64));
            let start = random_plane_vars(&mut rng);
            screen(&model, &start, opts)
        })
        .into_iter()
        .enumerate()
        .collect();
        screened.sort_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)));
        screened.truncate(opts.polish.max(1));
        let polished = map_indexed(opts.exec, screened.len(), |k| polish(&model, &screened[k].1.z, opts));
        for ((r, s), p) in screened.iter().zip(polished) {
            let m = if p.value <= s.value { p } else { *s };
            consider(&mut best, m.value, starts.len() + r, m.z);
        }
    }
    let (value, start_index, z) = best.expect("at least one start");
    let p = model.plane_pair(&z);
    MinCertificate {
        value,
        witness: PlanePair::new_unchecked(p.x, p.y),
        start_index,
    }
}
