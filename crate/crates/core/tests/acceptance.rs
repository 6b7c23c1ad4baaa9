//! Acceptance suite: one line per criterion, exit status 1 if any fails.
//!
//! Runs without the libtest harness so the report is always printed.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{SMatrix, SVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use g2_curvature::algebra::{
    bracket, h_perp_k_embed, inner0, inner0_matrix, p_embed, project_k, project_p, AlgebraVector, Coords14,
    HPerpKVector, PVector,
};
use g2_curvature::canonical::{canonical_family, orbit_invariants, reduce, CanonicalPoint};
use g2_curvature::g2::{
    from_triple, is_g2, random_g2, random_in_h, random_in_k, random_su3, random_triple, sigma, CMatrix3, G2Element,
    Matrix7,
};
use g2_curvature::locus::{
    classify_f, in_z1, in_z2, obstruction_value, phi_zero_obstruction, scan, Label, ScanConfig, ScanRow,
};
use g2_curvature::maps::{aloff_wallach_f, f_inverse, psi_h, stabilizer, SU3Coset};
use g2_curvature::metric::{certificate, metric1, CheegerParam};
use g2_curvature::octonion::Octonion;
use g2_curvature::sampling::{rng_for, TaskRng};
use g2_curvature::solver::{random_plane_vars, CertificateModel, PlaneVars};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn gauss(rng: &mut TaskRng) -> f64 {
    rng.sample(StandardNormal)
}

fn gaussian_algebra(rng: &mut TaskRng) -> AlgebraVector {
    AlgebraVector(Coords14::from_fn(|_, _| gauss(rng)))
}

fn within(elapsed: Duration, limit: f64) -> bool {
    elapsed.as_secs_f64() < limit
}

// ---------------------------------------------------------------- octonions

const LABELS: [&str; 8] = ["1", "i", "j", "k", "l", "il", "jl", "kl"];

/// The products `(row)(column)` of the imaginary units, written out by hand.
const PRODUCTS: [[&str; 7]; 7] = [
    ["-1", "k", "-j", "il", "-l", "-kl", "jl"],
    ["-k", "-1", "i", "jl", "kl", "-l", "-il"],
    ["j", "-i", "-1", "kl", "-jl", "il", "-l"],
    ["-il", "-jl", "-kl", "-1", "i", "j", "k"],
    ["l", "-kl", "jl", "-i", "-1", "-k", "j"],
    ["kl", "l", "-il", "-j", "k", "-1", "-i"],
    ["-jl", "il", "l", "-k", "-j", "i", "-1"],
];

fn parse_unit(s: &str) -> Octonion {
    let (sign, label) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s),
    };
    let idx = LABELS.iter().position(|l| *l == label).expect("known label");
    Octonion::basis(idx).scale(sign)
}

fn octonion_table() -> Outcome {
    let start = Instant::now();
    let mut mismatches = 0;
    for (a, row) in PRODUCTS.iter().enumerate() {
        for (b, entry) in row.iter().enumerate() {
            let got = Octonion::basis(a + 1).mul_table(&Octonion::basis(b + 1));
            if got.0 != parse_unit(entry).0 {
                mismatches += 1;
            }
        }
    }
    let mut rng = rng_for(1001, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let x = Octonion::new(std::array::from_fn(|_| gauss(&mut rng)));
        let y = Octonion::new(std::array::from_fn(|_| gauss(&mut rng)));
        worst = worst.max(x.mul_table(&y).max_abs_diff(&x.mul_cayley_dickson(&y)));
    }
    let el = start.elapsed();
    outcome(
        mismatches == 0 && worst < 1e-14 && within(el, 1.0),
        format!(
            "{mismatches} table mismatches, Cayley-Dickson max diff {worst:.2e}, {:.3}s",
            el.as_secs_f64()
        ),
    )
}

// ----------------------------------------------------------------------- G2

/// `1 ⊕ g` applied to an octonion.
fn act(g: &G2Element, o: &Octonion) -> Octonion {
    let mut out = g.apply(&o.im()).embed();
    out.0[0] = o.re();
    out
}

fn g2_construction() -> Outcome {
    let start = Instant::now();
    let mut rng = rng_for(1002, 0);
    let (mut orth, mut auto, mut cols, mut hom): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..1000 {
        let g = from_triple(&random_triple(&mut rng));
        let r = g.residuals();
        orth = orth.max(r.orthogonality);
        auto = auto.max(r.automorphism);
        cols = cols.max(r.columns);
        let x = Octonion::new(std::array::from_fn(|_| gauss(&mut rng)));
        let y = Octonion::new(std::array::from_fn(|_| gauss(&mut rng)));
        let lhs = act(&g, &x.mul_cayley_dickson(&y));
        let rhs = act(&g, &x).mul_cayley_dickson(&act(&g, &y));
        hom = hom.max(lhs.max_abs_diff(&rhs));
    }
    let el = start.elapsed();
    outcome(
        auto < 1e-10 && hom < 1e-10 && cols < 1e-10 && orth < 1e-11 && within(el, 10.0),
        format!(
            "automorphism {auto:.2e} (direct {hom:.2e}), columns {cols:.2e}, orthogonality {orth:.2e}, {:.3}s",
            el.as_secs_f64()
        ),
    )
}

// --------------------------------------------------------------- projection

/// Orthogonal projection onto the elements with vanishing first row, built
/// from a null space and a Gram matrix.
struct KOracle {
    basis: Vec<Matrix7>,
    gram_inv: SMatrix<f64, 8, 8>,
}

impl KOracle {
    fn new() -> Self {
        let units: Vec<Matrix7> = (0..14).map(|n| AlgebraVector::unit(n).to_matrix()).collect();
        let a = SMatrix::<f64, 7, 14>::from_fn(|r, c| units[c][(0, r)]);
        let eig = SymmetricEigen::new(a.transpose() * a);
        let basis: Vec<Matrix7> = (0..14)
            .filter(|&n| eig.eigenvalues[n].abs() < 1e-9)
            .map(|n| {
                let v = eig.eigenvectors.column(n);
                (0..14).fold(Matrix7::zeros(), |acc, c| acc + units[c] * v[c])
            })
            .collect();
        assert_eq!(basis.len(), 8);
        let gram = SMatrix::<f64, 8, 8>::from_fn(|i, j| inner0_matrix(&basis[i], &basis[j]));
        Self {
            gram_inv: gram.try_inverse().expect("gram matrix invertible"),
            basis,
        }
    }

    fn project(&self, m: &Matrix7) -> Matrix7 {
        let rhs = SVector::<f64, 8>::from_fn(|i, _| inner0_matrix(&self.basis[i], m));
        let c = self.gram_inv * rhs;
        (0..8).fold(Matrix7::zeros(), |acc, i| acc + self.basis[i] * c[i])
    }
}

fn max_abs(m: &Matrix7) -> f64 {
    m.amax()
}

fn projection() -> Outcome {
    let oracle = KOracle::new();
    let mut rng = rng_for(1003, 0);
    let (mut idem, mut orth, mut equi, mut vs_oracle): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..1000 {
        let (v, w) = (gaussian_algebra(&mut rng), gaussian_algebra(&mut rng));
        let pk = project_k(&v);
        let pp = project_p(&v);
        idem = idem
            .max((project_k(&pk) - pk).max_abs())
            .max((project_p(&pp) - pp).max_abs());
        orth = orth.max(inner0(&pk, &project_p(&w)).abs());
        vs_oracle = vs_oracle.max(max_abs(&(pk.to_matrix() - oracle.project(&v.to_matrix()))));
        let k = random_in_k(&mut rng);
        let km = k.matrix();
        let moved = km * v.to_matrix() * km.transpose();
        let lhs = project_k(&AlgebraVector::from_matrix(&moved).expect("Ad preserves the algebra")).to_matrix();
        equi = equi.max(max_abs(&(lhs - km * pk.to_matrix() * km.transpose())));
    }
    outcome(
        idem < 1e-11 && orth < 1e-11 && equi < 1e-11 && vs_oracle < 1e-11,
        format!("idempotence {idem:.2e}, orthogonality {orth:.2e}, K-equivariance {equi:.2e}, vs null-space oracle {vs_oracle:.2e}"),
    )
}

// ------------------------------------------------------------- closed forms

/// p-coordinates read off the first row, which the k part leaves untouched.
fn p_from_first_row(m: &Matrix7) -> [f64; 6] {
    std::array::from_fn(|n| m[(0, n + 1)] / 2.0)
}

#[derive(Default)]
struct Fit {
    pairs: Vec<([f64; 6], [f64; 6])>,
}

impl Fit {
    fn push(&mut self, closed: [f64; 6], direct: [f64; 6]) {
        self.pairs.push((closed, direct));
    }

    /// Least-squares scalar, its relative spread, and the residual after scaling.
    fn evaluate(&self) -> (f64, f64, f64) {
        let (mut num, mut den) = (0.0, 0.0);
        for (c, d) in &self.pairs {
            for i in 0..6 {
                num += c[i] * d[i];
                den += d[i] * d[i];
            }
        }
        let s = num / den;
        let (mut spread, mut resid): (f64, f64) = (0.0, 0.0);
        for (c, d) in &self.pairs {
            for i in 0..6 {
                if d[i].abs() > 1e-3 {
                    spread = spread.max((c[i] / d[i] - s).abs() / s.abs());
                }
                resid = resid.max((c[i] - s * d[i]).abs());
            }
        }
        (s, spread, resid)
    }
}

fn closed_forms() -> Outcome {
    use g2_curvature::metric::{ad_x_p_closed, ad_y_p_closed, reduced_bracket};
    let mut rng = rng_for(1004, 0);
    let angles: Vec<(f64, f64)> = (0..100)
        .map(|_| (rng.random_range(0.0..FRAC_PI_2), rng.random_range(0.0..FRAC_PI_2)))
        .collect();
    let frames: Vec<Matrix7> = angles.iter().map(|&(t, p)| *canonical_family(t, p).matrix()).collect();
    let (mut rb, mut ax, mut ay) = (Fit::default(), Fit::default(), Fit::default());
    for _ in 0..1000 {
        let x = HPerpKVector(std::array::from_fn(|_| gauss(&mut rng)));
        let mut y = PVector(std::array::from_fn(|_| gauss(&mut rng)));
        let xm = h_perp_k_embed(&x).to_matrix();
        let ym = p_embed(&y);
        rb.push(reduced_bracket(&x, &y).0, p_from_first_row(&(xm * ym - ym * xm)));
        y.0[0] = 0.0;
        y.0[1] = 0.0;
        let ym = p_embed(&y);
        for (&(theta, phi), f) in angles.iter().zip(&frames) {
            ax.push(
                ad_x_p_closed(theta, phi, &x).0,
                p_from_first_row(&(f.transpose() * xm * f)),
            );
            ay.push(
                ad_y_p_closed(theta, phi, &y).0,
                p_from_first_row(&(f.transpose() * ym * f)),
            );
        }
    }
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, fit) in [("reduced_bracket", &rb), ("ad_x_p", &ax), ("ad_y_p", &ay)] {
        let (s, spread, resid) = fit.evaluate();
        ok &= spread < 1e-9 && resid < 1e-11;
        parts.push(format!("{name} scale {s:.12} spread {spread:.1e} residual {resid:.1e}"));
    }
    outcome(ok, parts.join("; "))
}

fn k_bracket_row() -> Outcome {
    let oracle = KOracle::new();
    let mut rng = rng_for(1005, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let x1 = gauss(&mut rng);
        let y: [f64; 6] = std::array::from_fn(|n| if n == 0 { 0.0 } else { gauss(&mut rng) });
        let xv = PVector([x1, 0.0, 0.0, 0.0, 0.0, 0.0]).to_algebra();
        let yv = PVector(y).to_algebra();
        let expect = [
            0.0,
            0.0,
            -4.0 * x1 * y[1],
            -3.0 * x1 * y[2],
            -3.0 * x1 * y[3],
            -3.0 * x1 * y[4],
            -3.0 * x1 * y[5],
        ];
        let lib = project_k(&bracket(&xv, &yv)).to_matrix();
        let xm = xv.to_matrix();
        let ym = yv.to_matrix();
        let orc = oracle.project(&(xm * ym - ym * xm));
        for c in 0..7 {
            worst = worst
                .max((lib[(1, c)] - expect[c]).abs())
                .max((orc[(1, c)] - expect[c]).abs());
        }
    }
    outcome(
        worst < 1e-12,
        format!("second row max deviation {worst:.2e} over 1000 samples"),
    )
}

// ---------------------------------------------------------------- reduction

/// Distance from `{g ∈ G2 : g(±i) = i, g(span{j, k}) = span{j, k}}` with the
/// block orientation tied to the sign of `g11`.
fn hprime_distance(h: &G2Element) -> f64 {
    let m = h.matrix();
    let mut r = is_g2(m, f64::INFINITY).1.max();
    r = r.max((m[(0, 0)].abs() - 1.0).abs());
    for c in 1..7 {
        r = r.max(m[(0, c)].abs()).max(m[(c, 0)].abs());
    }
    for a in 1..3 {
        for b in 3..7 {
            r = r.max(m[(a, b)].abs()).max(m[(b, a)].abs());
        }
    }
    let det = m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)];
    r.max((det - m[(0, 0)]).abs())
}

fn k_distance(k: &G2Element) -> f64 {
    let m = k.matrix();
    let col = (0..7).fold(0.0f64, |acc, r| {
        acc.max((m[(r, 0)] - if r == 0 { 1.0 } else { 0.0 }).abs())
    });
    col.max(is_g2(m, f64::INFINITY).1.max())
}

fn reduction() -> Outcome {
    let start = Instant::now();
    let mut rng = rng_for(1006, 0);
    let (mut member, mut fit, mut inv): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut errors = 0;
    for _ in 0..1000 {
        let g = random_g2(&mut rng);
        let Ok(r) = reduce(&g) else {
            errors += 1;
            continue;
        };
        member = member.max(hprime_distance(&r.h)).max(k_distance(&r.k));
        let f = canonical_family(r.point.theta(), r.point.phi());
        let moved = r.h.matrix() * g.matrix() * r.k.matrix().transpose();
        fit = fit.max(max_abs(&(moved - f.matrix())));
        inv = inv.max(orbit_invariants(&g).max_abs_diff(&orbit_invariants(&f)));
    }
    let el = start.elapsed();
    outcome(
        errors == 0 && member < 1e-10 && fit < 1e-9 && inv < 1e-11 && within(el, 30.0),
        format!(
            "{errors} failures, membership {member:.2e}, fit {fit:.2e}, invariants {inv:.2e}, {:.3}s",
            el.as_secs_f64()
        ),
    )
}

// --------------------------------------------------------------- zero locus

fn is_edge(r: &ScanRow) -> bool {
    r.theta == 0.0 || r.theta == FRAC_PI_2 || r.phi == FRAC_PI_2
}

fn is_deep_interior(r: &ScanRow) -> bool {
    r.theta.min(FRAC_PI_2 - r.theta).min(FRAC_PI_2 - r.phi) > 0.05
}

/// Checks one scan; returns (passed, summary).
fn judge_scan(rows: &[ScanRow], t: CheegerParam) -> (bool, String) {
    let mut interior_min = f64::INFINITY;
    let mut interior_bad = 0;
    let mut edge_worst: f64 = 0.0;
    let mut edge_bad = 0;
    let mut disagree = 0;
    let mut edges = 0;
    for r in rows {
        if !r.agree {
            disagree += 1;
        }
        if is_deep_interior(r) {
            interior_min = interior_min.min(r.min_certificate);
            if r.min_certificate.is_nan() || r.min_certificate <= 1e-6 {
                interior_bad += 1;
            }
        }
        if is_edge(r) {
            edges += 1;
            let p = CanonicalPoint::new(r.theta, r.phi).expect("grid point in range");
            let c = classify_f(&p, 0.0, t);
            let witness = c
                .witness
                .map(|w| certificate(&canonical_family(r.theta, r.phi), &w, t).total);
            let w = witness.unwrap_or(f64::INFINITY).max(r.min_certificate);
            edge_worst = edge_worst.max(w);
            if !(c.label == Label::ZeroPlane && w < 1e-12) {
                edge_bad += 1;
            }
        }
    }
    let passed = interior_bad == 0 && edge_bad == 0 && disagree == 0;
    (
        passed,
        format!(
            "{} cells, interior min {interior_min:.3e} ({interior_bad} bad), {edges} edge cells max certificate {edge_worst:.1e} ({edge_bad} bad), {disagree} disagreements",
            rows.len()
        ),
    )
}

fn zero_locus() -> Outcome {
    let t = CheegerParam::default();
    let start = Instant::now();
    let smoke = scan(&ScanConfig {
        grid_n: 21,
        ..Default::default()
    })
    .expect("smoke scan runs");
    let smoke_time = start.elapsed();
    let (smoke_ok, smoke_summary) = judge_scan(&smoke, t);

    let start = Instant::now();
    let full = scan(&ScanConfig::default()).expect("full scan runs");
    let full_time = start.elapsed();
    let (full_ok, full_summary) = judge_scan(&full, t);
    let corners_ok = [(0.0, 0.0), (0.0, FRAC_PI_2), (FRAC_PI_2, 0.0), (FRAC_PI_2, FRAC_PI_2)]
        .iter()
        .all(|&(a, b)| {
            full.iter()
                .any(|r| r.theta == a && r.phi == b && r.theorem_label == Label::ZeroPlane)
        });
    outcome(
        smoke_ok && full_ok && corners_ok && within(smoke_time, 30.0) && within(full_time, 900.0),
        format!(
            "101x101: {full_summary}, {:.1}s; 21x21 smoke: {smoke_summary}, {:.1}s",
            full_time.as_secs_f64(),
            smoke_time.as_secs_f64()
        ),
    )
}

fn obstruction() -> Outcome {
    let mut rng = rng_for(1008, 0);
    let mut worst_rel: f64 = 0.0;
    let mut sign_bad = 0;
    for n in 0..10_000 {
        let theta = rng.random_range(1e-3..FRAC_PI_2 - 1e-3);
        let phi = rng.random_range(1e-3..FRAC_PI_2 - 1e-3);
        let p = CanonicalPoint::new(theta, phi).expect("open angles");
        let (mut y5, mut y6) = (gauss(&mut rng), gauss(&mut rng));
        match n % 4 {
            1 => y5 = 0.0,
            2 => y6 = 0.0,
            3 if n % 8 == 3 => (y5, y6) = (0.0, 0.0),
            _ => {}
        }
        let v = obstruction_value(&p, y5, y6).expect("open angles");
        let (sp, cp) = phi.sin_cos();
        let (st, ct) = theta.sin_cos();
        let oracle = (-4.0 * (y5 * y5 * sp * sp + y6 * y6) - 4.0 * y5 * y5 * cp * cp) / (cp * ct * st);
        worst_rel = worst_rel.max((v - oracle).abs() / oracle.abs().max(1e-300));
        let zero = y5 == 0.0 && y6 == 0.0;
        if v > 0.0 || (v == 0.0) != zero {
            sign_bad += 1;
        }
    }
    let mut tail_bad = 0;
    for _ in 0..10_000 {
        let theta = rng.random_range(1e-3..FRAC_PI_2 - 1e-3);
        let y = PVector(std::array::from_fn(|_| gauss(&mut rng)));
        let v = phi_zero_obstruction(theta, &y).expect("open angle");
        if v.is_nan() || v >= 0.0 {
            tail_bad += 1;
        }
    }
    outcome(
        sign_bad == 0 && tail_bad == 0 && worst_rel < 1e-12,
        format!("{sign_bad} sign violations, {tail_bad} nonnegative tails, max relative deviation {worst_rel:.1e}"),
    )
}

// --------------------------------------------------------------------- maps

/// `min_α ‖A diag(R(α), 1) − B‖_F` at the angle maximizing
/// `cos α (m11 + m22) + sin α (m21 − m12)`, `M = Re([a1 a2]^H [b1 b2])`.
fn coset_distance(a: &CMatrix3, b: &CMatrix3) -> f64 {
    let m = |i: usize, j: usize| a.column(i).dotc(&b.column(j)).re;
    let alpha = (m(1, 0) - m(0, 1)).atan2(m(0, 0) + m(1, 1));
    (a * stabilizer(alpha) - b).norm()
}

fn maps() -> Outcome {
    let mut rng = rng_for(1009, 0);
    let (mut square, mut coset): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let g = random_g2(&mut rng);
        let prod = g.column(1).embed().mul_cayley_dickson(&g.column(2).embed());
        square = square.max((prod.im().0 - g.column(0).0).amax()).max(prod.re().abs());
        let h = random_in_h(&mut rng);
        coset = coset.max(1.0 - psi_h(&g).cross_gram_det(&psi_h(&(g * h))));
    }
    let (mut well_defined, mut roundtrip, mut fiber, mut locus): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let mut errors = 0;
    for _ in 0..100 {
        let a = SU3Coset::new(random_su3(&mut rng)).expect("special unitary");
        let Ok(z) = f_inverse(&a) else {
            errors += 1;
            continue;
        };
        if !(in_z1(&z) && in_z2(&z)) {
            errors += 1;
        }
        locus = locus
            .max(z.entry(0, 0).abs())
            .max(z.entry(0, 1).abs())
            .max(z.entry(0, 2).abs());
        let (Ok(fz), Ok(fzh)) = (aloff_wallach_f(&z), aloff_wallach_f(&(z * random_in_h(&mut rng)))) else {
            errors += 1;
            continue;
        };
        roundtrip = roundtrip.max(coset_distance(fz.rep(), a.rep()));
        well_defined = well_defined.max(coset_distance(fzh.rep(), fz.rep()));
        let moved = SU3Coset::new(a.rep() * stabilizer(rng.random_range(0.0..TAU))).expect("special unitary");
        let Ok(z2) = f_inverse(&moved) else {
            errors += 1;
            continue;
        };
        fiber = fiber.max(1.0 - psi_h(&z).cross_gram_det(&psi_h(&z2)));
    }
    outcome(
        errors == 0
            && square < 1e-12
            && coset < 1e-12
            && well_defined < 1e-10
            && roundtrip < 1e-10
            && fiber < 1e-10
            && locus < 1e-10,
        format!(
            "pi*psi_H vs psi_K {square:.1e}, psi_H on cosets {coset:.1e}, f on H-cosets {well_defined:.1e}, f(f^-1) {roundtrip:.1e}, f^-1 on stabilizer {fiber:.1e}, {errors} errors"
        ),
    )
}

fn metric_invariance() -> Outcome {
    let t = CheegerParam::default();
    let mut rng = rng_for(1010, 0);
    let conj = |g: &G2Element, v: &AlgebraVector| {
        let m = g.matrix();
        AlgebraVector::from_matrix(&(m * v.to_matrix() * m.transpose())).expect("Ad preserves the algebra")
    };
    let s = sigma();
    let (mut by_sigma, mut by_k): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let (x, y) = (gaussian_algebra(&mut rng), gaussian_algebra(&mut rng));
        let base = metric1(&x, &y, t);
        by_sigma = by_sigma.max((metric1(&conj(&s, &x), &conj(&s, &y), t) - base).abs());
        let k = random_in_k(&mut rng);
        by_k = by_k.max((metric1(&conj(&k, &x), &conj(&k, &y), t) - base).abs());
    }
    outcome(
        by_sigma < 1e-12 && by_k < 1e-12,
        format!("sigma {by_sigma:.2e}, K {by_k:.2e} over 100 samples"),
    )
}

fn central_difference(f: impl Fn(&PlaneVars) -> f64, z: &PlaneVars, h: f64) -> PlaneVars {
    PlaneVars::from_fn(|k, _| {
        let (mut zp, mut zm) = (*z, *z);
        zp[k] += h;
        zm[k] -= h;
        (f(&zp) - f(&zm)) / (2.0 * h)
    })
}

fn gradient_check() -> Outcome {
    let mut rng = rng_for(1011, 0);
    let (mut cert, mut obj): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let t = CheegerParam::new(rng.random_range(0.25..4.0)).expect("positive");
        let model = CertificateModel::new(&random_g2(&mut rng), t);
        let z = random_plane_vars(&mut rng);
        let a = model.certificate_gradient(&z);
        let fd = central_difference(|v| model.certificate(v), &z, 1e-6);
        cert = cert.max((a - fd).amax() / a.amax().max(1e-300));
        let a = model.objective_gradient(&z);
        let fd = central_difference(|v| model.objective(v), &z, 1e-6);
        obj = obj.max((a - fd).amax() / a.amax().max(1e-300));
    }
    outcome(
        cert < 1e-5 && obj < 1e-5,
        format!("relative error: certificate {cert:.2e}, penalized objective {obj:.2e} over 100 points"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("octonion multiplication table", octonion_table),
        ("G2 construction from triples", g2_construction),
        ("k/p projection", projection),
        ("closed-form brackets", closed_forms),
        ("second row of the k bracket", k_bracket_row),
        ("canonical reduction", reduction),
        ("zero-locus dichotomy scan", zero_locus),
        ("obstruction expressions", obstruction),
        ("maps to the sphere and SU(3)", maps),
        ("metric invariance", metric_invariance),
        ("solver gradient check", gradient_check),
    ];
    // optional criterion numbers select a subset; flags from the test runner are ignored
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        if !selected.is_empty() && !selected.contains(&(n + 1)) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {} [{:.2}s]",
            n + 1,
            if result.passed { "PASS" } else { "FAIL" },
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
