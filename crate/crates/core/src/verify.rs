//! Self-checks run by `g2lab verify`. Each suite reports its largest residual
//! per check against a fixed tolerance.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::algebra::{ad_conj, inner0, project_k, project_p, AlgebraVector, HPerpKVector, PVector};
use crate::canonical::{canonical_matrix, orbit_invariants, reduce};
use crate::error::Result;
use crate::g2::{from_triple, hprime_residual, k_residual, max_abs, random_g2, random_in_k, random_triple, sigma};
use crate::maps::check_maps;
use crate::metric::{
    ad_p_direct, ad_x_p_closed, ad_y_p_closed, calibrate_closed_forms, metric1, reduced_bracket,
    reduced_bracket_direct, CheegerParam, AD_CLOSED_SCALE, REDUCED_BRACKET_SCALE,
};
use crate::octonion::{mul_with_table, MulTable, Octonion, CAYLEY_TABLE};
use crate::sampling::{rng_for, TaskRng};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub samples: usize,
    pub max_residual: f64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(name: &'static str, samples: usize, checks: Vec<Check>) -> Self {
        let max_residual = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
        let passed = checks.iter().all(Check::passed);
        Self {
            name,
            samples,
            max_residual,
            passed,
            checks,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: bool,
    pub first_failure: Option<&'static str>,
    pub suites: Vec<SuiteReport>,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub samples: usize,
    /// Flip the sign of the product `ij` in the table under test.
    pub corrupt_table: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 1000,
            corrupt_table: false,
        }
    }
}

fn check(name: &'static str, residual: f64, tolerance: f64) -> Check {
    // NaN compares false everywhere; report it as an infinite residual
    let residual = if residual.is_nan() { f64::INFINITY } else { residual };
    Check {
        name,
        residual,
        tolerance,
    }
}

fn gaussian_octonion(rng: &mut TaskRng) -> Octonion {
    Octonion(std::array::from_fn(|_| rng.sample(StandardNormal)))
}

fn gaussian_algebra(rng: &mut TaskRng) -> AlgebraVector {
    AlgebraVector(crate::algebra::Coords14::from_fn(|_, _| rng.sample(StandardNormal)))
}

pub fn octonion_suite(table: &MulTable, rng: &mut TaskRng, samples: usize) -> SuiteReport {
    let mut basis: f64 = 0.0;
    for a in 1..8 {
        for b in 1..8 {
            let (x, y) = (Octonion::basis(a), Octonion::basis(b));
            basis = basis.max(mul_with_table(table, &x, &y).max_abs_diff(&x.mul_cayley_dickson(&y)));
        }
    }
    let mut random: f64 = 0.0;
    for _ in 0..samples * 10 {
        let (x, y) = (gaussian_octonion(rng), gaussian_octonion(rng));
        random = random.max(mul_with_table(table, &x, &y).max_abs_diff(&x.mul_cayley_dickson(&y)));
    }
    SuiteReport::new(
        "octonion",
        samples * 10,
        vec![
            check("basis_products", basis, 0.0),
            check("random_products", random, 1e-13),
        ],
    )
}

pub fn g2_suite(rng: &mut TaskRng, samples: usize) -> SuiteReport {
    let (mut orth, mut auto, mut cols): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..samples {
        let r = from_triple(&random_triple(rng)).residuals();
        orth = orth.max(r.orthogonality);
        auto = auto.max(r.automorphism);
        cols = cols.max(r.columns);
    }
    SuiteReport::new(
        "g2",
        samples,
        vec![
            check("orthogonality", orth, 1e-11),
            check("automorphism", auto, 1e-10),
            check("column_structure", cols, 1e-10),
        ],
    )
}

pub fn projection_suite(rng: &mut TaskRng, samples: usize) -> SuiteReport {
    let (mut idem, mut orth, mut equi, mut sum): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..samples {
        let (v, w) = (gaussian_algebra(rng), gaussian_algebra(rng));
        let pk = project_k(&v);
        idem = idem.max((project_k(&pk) - pk).max_abs());
        idem = idem.max((project_p(&project_p(&v)) - project_p(&v)).max_abs());
        orth = orth.max(inner0(&pk, &project_p(&w)).abs());
        sum = sum.max((pk + project_p(&v) - v).max_abs());
        let k = random_in_k(rng);
        equi = equi.max((project_k(&ad_conj(&k, &v)) - ad_conj(&k, &pk)).max_abs());
    }
    SuiteReport::new(
        "projection",
        samples,
        vec![
            check("idempotence", idem, 1e-11),
            check("orthogonality", orth, 1e-11),
            check("k_equivariance", equi, 1e-11),
            check("decomposition", sum, 1e-11),
        ],
    )
}

pub fn closed_form_suite(rng: &mut TaskRng, samples: usize) -> SuiteReport {
    let cal = calibrate_closed_forms(rng, 50);
    let scale_dev = (cal.reduced_bracket.scale - REDUCED_BRACKET_SCALE)
        .abs()
        .max((cal.ad_x.scale - AD_CLOSED_SCALE).abs())
        .max((cal.ad_y.scale - AD_CLOSED_SCALE).abs());
    let spread = cal.reduced_bracket.spread.max(cal.ad_x.spread).max(cal.ad_y.spread);
    let (mut rb, mut ax, mut ay): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..samples {
        let x = HPerpKVector(std::array::from_fn(|_| rng.sample(StandardNormal)));
        let mut y = PVector(std::array::from_fn(|_| rng.sample(StandardNormal)));
        let direct = reduced_bracket_direct(&x, &y);
        rb = rb.max(reduced_bracket(&x, &y).max_abs_diff(&PVector(direct.0.map(|c| c * REDUCED_BRACKET_SCALE))));
        let theta = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
        let phi = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
        let direct = ad_p_direct(theta, phi, &x.to_algebra());
        ax = ax.max(ad_x_p_closed(theta, phi, &x).max_abs_diff(&PVector(direct.0.map(|c| c * AD_CLOSED_SCALE))));
        y.0[0] = 0.0;
        y.0[1] = 0.0;
        let direct = ad_p_direct(theta, phi, &y.to_algebra());
        ay = ay.max(ad_y_p_closed(theta, phi, &y).max_abs_diff(&PVector(direct.0.map(|c| c * AD_CLOSED_SCALE))));
    }
    SuiteReport::new(
        "closed_forms",
        samples,
        vec![
            check("scale_constants", scale_dev, 1e-9),
            check("scale_spread", spread, 1e-9),
            check("reduced_bracket", rb, 1e-11),
            check("ad_x_p", ax, 1e-11),
            check("ad_y_p", ay, 1e-11),
        ],
    )
}

pub fn reduction_suite(rng: &mut TaskRng, samples: usize) -> Result<SuiteReport> {
    let (mut fit, mut member, mut inv): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..samples {
        let g = random_g2(rng);
        let r = reduce(&g)?;
        let f = canonical_matrix(&r.point);
        fit = fit.max(max_abs(&((r.h * g * r.k.inverse()).into_matrix() - f.matrix())));
        member = member.max(hprime_residual(&r.h)).max(k_residual(&r.k));
        inv = inv.max(orbit_invariants(&g).max_abs_diff(&orbit_invariants(&f)));
    }
    Ok(SuiteReport::new(
        "reduction",
        samples,
        vec![
            check("canonical_fit", fit, 1e-9),
            check("membership", member, 1e-10),
            check("invariants", inv, 1e-11),
        ],
    ))
}

pub fn metric_suite(rng: &mut TaskRng, samples: usize) -> SuiteReport {
    let t = CheegerParam::default();
    let (mut by_sigma, mut by_k): (f64, f64) = (0.0, 0.0);
    for _ in 0..samples {
        let (x, y) = (gaussian_algebra(rng), gaussian_algebra(rng));
        let base = metric1(&x, &y, t);
        let s = sigma();
        by_sigma = by_sigma.max((metric1(&ad_conj(&s, &x), &ad_conj(&s, &y), t) - base).abs());
        let k = random_in_k(rng);
        by_k = by_k.max((metric1(&ad_conj(&k, &x), &ad_conj(&k, &y), t) - base).abs());
    }
    SuiteReport::new(
        "metric",
        samples,
        vec![
            check("sigma_invariance", by_sigma, 1e-12),
            check("k_invariance", by_k, 1e-12),
        ],
    )
}

pub fn maps_suite(rng: &mut TaskRng, samples: usize) -> Result<SuiteReport> {
    let maps = check_maps(rng, samples)?;
    Ok(SuiteReport::new(
        "maps",
        maps.samples,
        vec![
            check("commuting_square", maps.commuting_square, 1e-12),
            check("psi_h_coset", maps.psi_h_coset, 1e-10),
            check("z1_columns_perp_i", maps.z1_columns_perp_i, 1e-12),
            check("z1z2_complex_orthogonality", maps.z1z2_complex_orthogonality, 1e-12),
            check("f_inverse_membership", maps.f_inverse_membership, 1e-10),
            check("f_h_invariance", maps.f_h_invariance, 1e-10),
            check("f_roundtrip", maps.f_roundtrip, 1e-10),
            check("f_inverse_coset", maps.f_inverse_coset, 1e-10),
        ],
    ))
}

/// Runs every suite with its own random stream derived from `opts.seed`.
pub fn run(opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut table = CAYLEY_TABLE;
    if opts.corrupt_table {
        table[0][1] = -table[0][1];
    }
    let n = opts.samples.max(1);
    let rng = |k: u64| rng_for(opts.seed, k);
    let suites = vec![
        octonion_suite(&table, &mut rng(1), n),
        g2_suite(&mut rng(2), n),
        projection_suite(&mut rng(3), n),
        closed_form_suite(&mut rng(4), n),
        reduction_suite(&mut rng(5), n)?,
        metric_suite(&mut rng(6), n.min(100)),
        maps_suite(&mut rng(7), n.min(100))?,
    ];
    let first_failure = suites.iter().find(|s| !s.passed).map(|s| s.name);
    Ok(VerifyReport {
        seed: opts.seed,
        passed: first_failure.is_none(),
        first_failure,
        suites,
    })
}
