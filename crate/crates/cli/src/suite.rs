//! The acceptance battery behind `nctorus suite`.
//!
//! Each criterion returns its measured residuals and a pass flag; reports
//! carry no timings so that the serialized output depends only on the seed.

use std::f64::consts::{PI, TAU};

use nalgebra::DVector;
use nctorus::gns::{
    gns_build, intertwiner, is_positive, schwarz_check, AlgebraKind, FiniteAlgebra, GnsOptions, PositiveForm,
    DEFAULT_TOLERANCE as GNS_TOL,
};
use nctorus::grid::{GridFunction1D, GridFunction2D};
use nctorus::heisenberg::{
    apply_p, apply_q, calibrate_q, default_probe, rep_lattice_measure, solve_inner_generator, weyl_p, weyl_q,
    DerivationData, InnerSolverOptions,
};
use nctorus::matrep::{
    circle_check_relations, circle_eval, clock_shift, eval_section, fiber_check, fiber_grid, unit_samples, CircleElement,
    CircleSpec, CircleTerm, MatrixN,
};
use nctorus::torus::{
    adjoint, check_derivation_relation, q_mul, trace, DerivationSpec, RelationCheck, TorusElement,
    DEFAULT_TOLERANCE as TORUS_TOL,
};
use nctorus::twisted::{
    conv, fourier_bridge_error, gauge_iso, heisenberg_group_conv, moyal_star, other_twisted_conv, plain_conv,
    poisson_bracket, rescaled_conv, series_star, hbar_smoothness_probe, twisted_conv, ComplexRational, ConvKind,
    GaugeDirection, HbarSeries, PolySymbol,
};
use nctorus::{CoeffLattice2, Complex64, Error, Exec, PhaseQ};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

/// `(id, title, runtime limit in seconds)`.
pub const CRITERIA: [(u32, &str, u64); 13] = [
    (1, "q-relation", 1),
    (2, "algebra laws", 10),
    (3, "derivation classification", 5),
    (4, "matrix realization", 30),
    (5, "noncommutative circle", 5),
    (6, "Weyl relations on the grid", 10),
    (7, "lattice-measure representation", 20),
    (8, "twisted convolutions", 60),
    (9, "Moyal product", 60),
    (10, "inner derivations of the Heisenberg plane", 30),
    (11, "GNS construction", 20),
    (12, "hbar-smoothness probe", 20),
    (13, "determinism", 300),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: Value,
    pub expected: String,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &str, measured: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            measured: json!(measured),
            expected: format!("<= {bound:e}"),
            passed: measured <= bound,
        }
    }

    fn within(name: &str, measured: f64, lo: f64, hi: f64) -> Self {
        Check {
            name: name.into(),
            measured: json!(measured),
            expected: format!("in [{lo}, {hi}]"),
            passed: (lo..=hi).contains(&measured),
        }
    }

    fn holds(name: &str, ok: bool) -> Self {
        Check {
            name: name.into(),
            measured: json!(ok),
            expected: "true".into(),
            passed: ok,
        }
    }

    fn equals(name: &str, measured: usize, expected: usize) -> Self {
        Check {
            name: name.into(),
            measured: json!(measured),
            expected: format!("== {expected}"),
            passed: measured == expected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Measurements recorded for reference and not judged.
    pub data: Map<String, Value>,
}

impl CriterionReport {
    /// The failing checks, or an execution error.
    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub criteria: Vec<CriterionReport>,
}

struct Builder {
    checks: Vec<Check>,
    data: Map<String, Value>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            checks: Vec::new(),
            data: Map::new(),
        }
    }

    fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    fn data(&mut self, key: &str, v: impl Serialize) {
        self.data.insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }

    fn finish(self, id: u32) -> CriterionReport {
        let title = CRITERIA[(id - 1) as usize].1;
        CriterionReport {
            id,
            title,
            passed: !self.checks.is_empty() && self.checks.iter().all(|c| c.passed),
            checks: self.checks,
            data: self.data,
        }
    }
}

type Outcome = Result<Builder, Error>;

/// Relative rise of the bridge error treated as round-off on its floor.
const BRIDGE_ROUNDOFF: f64 = 1e-6;

/// Runs criterion `id` (1 to 12) with its own random stream.
pub fn criterion(id: u32, seed: u64) -> CriterionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(id));
    let outcome = match id {
        1 => q_relation(),
        2 => algebra_laws(&mut rng),
        3 => derivations(&mut rng),
        4 => matrix_realization(&mut rng),
        5 => circle(&mut rng),
        6 => weyl(&mut rng),
        7 => lattice_measure(&mut rng),
        8 => convolutions(&mut rng),
        9 => moyal(&mut rng),
        10 => inner_generator(&mut rng),
        11 => gns(&mut rng),
        12 => hbar_probe(&mut rng),
        _ => panic!("criterion {id} is not a battery item"),
    };
    match outcome {
        Ok(b) => b.finish(id),
        Err(e) => {
            let mut b = Builder::new();
            b.check(Check {
                name: "execution".into(),
                measured: json!(e.to_string()),
                expected: "no error".into(),
                passed: false,
            });
            b.finish(id)
        }
    }
}

/// Criteria 1 to 12 in parallel, assembled in index order; criterion 13
/// repeats them on a pool of a different size and compares the bytes.
pub fn run_suite(seed: u64, only: &[u32]) -> SuiteReport {
    let selected = |id: u32| only.is_empty() || only.contains(&id);
    let items: Vec<u32> = (1..=12).filter(|&id| selected(id)).collect();
    let run_items = || items.par_iter().map(|&id| criterion(id, seed)).collect::<Vec<_>>();
    let mut criteria = run_items();
    if selected(13) {
        let threads = if rayon::current_num_threads() == 1 { 3 } else { 1 };
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build();
        let mut b = Builder::new();
        match pool {
            Ok(pool) => {
                let again = pool.install(run_items);
                let first = serde_json::to_vec(&criteria).expect("serializable");
                let second = serde_json::to_vec(&again).expect("serializable");
                b.check(Check::holds("items 1-12 byte-identical on a second pool", first == second));
                b.data("compared_bytes", first.len());
            }
            Err(e) => b.check(Check {
                name: "second pool".into(),
                measured: json!(e.to_string()),
                expected: "built".into(),
                passed: false,
            }),
        }
        criteria.push(b.finish(13));
    }
    let passed = criteria.iter().filter(|c| c.passed).count();
    SuiteReport {
        seed,
        passed,
        failed: criteria.len() - passed,
        criteria,
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_lattice(rng: &mut ChaCha8Rng, rk: usize, rl: usize) -> CoeffLattice2 {
    CoeffLattice2::from_fn(rk, rl, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn random_element(rng: &mut ChaCha8Rng, max_radius: usize, q: PhaseQ) -> TorusElement {
    let (rk, rl) = (rng.gen_range(0..=max_radius), rng.gen_range(0..=max_radius));
    TorusElement::new(random_lattice(rng, rk, rl), q)
}

fn random_q(rng: &mut ChaCha8Rng, rational: bool) -> Result<PhaseQ, Error> {
    if rational {
        let n = rng.gen_range(2u64..=12);
        let p = rng.gen_range(1..n as i64);
        PhaseQ::rational(p, n)
    } else {
        PhaseQ::irrational(rng.gen_range(0.1..TAU - 0.1))
    }
}

fn gauss1(l: f64, n: usize, center: f64, width: f64, k: f64) -> Result<GridFunction1D, Error> {
    GridFunction1D::from_fn(l, n, |u| {
        let x = (u - center) / width;
        c((-x * x / 2.0).exp(), 0.0) * Complex64::cis(k * u)
    })
}

fn gauss2(l: f64, n: usize, center: (f64, f64), width: f64, k: (f64, f64)) -> Result<GridFunction2D, Error> {
    GridFunction2D::square(l, n, |t, s| {
        let r2 = ((t - center.0).powi(2) + (s - center.1).powi(2)) / (width * width);
        c((-r2 / 2.0).exp(), 0.0) * Complex64::cis(k.0 * t + k.1 * s)
    })
}

fn random_gauss2(rng: &mut ChaCha8Rng, l: f64, n: usize) -> Result<GridFunction2D, Error> {
    let center = (rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6));
    let width = rng.gen_range(0.8..1.2);
    let k = (rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3));
    gauss2(l, n, center, width, k)
}

fn rel_max(a: &GridFunction2D, b: &GridFunction2D) -> Result<f64, Error> {
    Ok(a.sub(b)?.max_abs() / b.max_abs())
}

fn q_relation() -> Outcome {
    let mut b = Builder::new();
    let q = PhaseQ::rational(1, 4)?;
    let (u, v) = (TorusElement::u(q), TorusElement::v(q));
    let uv = q_mul(&u, &v)?;
    let vu = q_mul(&v, &u)?;
    b.check(Check::at_most("UV - q VU", uv.max_abs_diff(&vu.scale(q.value())), 1e-14));
    b.check(Check::at_most("(UV)_{1,1} - 1", (uv.get(1, 1) - 1.0).norm(), 1e-14));
    b.check(Check::at_most("(VU)_{1,1} - e^{-i pi/2}", (vu.get(1, 1) - c(0.0, -1.0)).norm(), 1e-14));
    Ok(b)
}

fn algebra_laws(rng: &mut ChaCha8Rng) -> Outcome {
    let mut b = Builder::new();
    let (mut assoc, mut star, mut tr) = (0.0f64, 0.0f64, 0.0f64);
    let mut scale = 0.0f64;
    for i in 0..200 {
        let q = random_q(rng, i % 2 == 0)?;
        let f = random_element(rng, 4, q);
        let g = random_element(rng, 4, q);
        let h = random_element(rng, 4, q);
        let fg = q_mul(&f, &g)?;
        let left = q_mul(&fg, &h)?;
        let right = q_mul(&f, &q_mul(&g, &h)?)?;
        assoc = assoc.max(left.max_abs_diff(&right));
        scale = scale.max(left.coeffs.seminorm(0));
        star = star.max(adjoint(&fg).max_abs_diff(&q_mul(&adjoint(&g), &adjoint(&f))?));
        tr = tr.max((trace(&fg) - trace(&q_mul(&g, &f)?)).norm());
    }
    b.check(Check::at_most("associativity", assoc, 1e-12));
    b.check(Check::at_most("involution anti-homomorphism", star, 1e-12));
    b.check(Check::at_most("trace property", tr, 1e-12));
    b.data("triples", 200);
    b.data("largest triple-product coefficient", scale);
    Ok(b)
}

fn derivations(rng: &mut ChaCha8Rng) -> Outcome {
    let mut b = Builder::new();
    let mut outer_ok = true;
    let mut outer_res = 0.0f64;
    for i in 0..4 {
        let q = random_q(rng, i % 2 == 0)?;
        for d in [DerivationSpec::d_u(q), DerivationSpec::d_v(q)] {
            let r = check_derivation_relation(&d, TORUS_TOL);
            outer_ok &= r.is_ok();
            outer_res = outer_res.max(r.max_residual());
        }
    }
    b.check(Check::holds("(D_U, 0) and (0, D_V) accepted", outer_ok));
    b.data("outer residual", outer_res);

    let (mut inner_ok, mut inner_res) = (0usize, 0.0f64);
    for i in 0..50 {
        let q = random_q(rng, i % 2 == 0)?;
        let a = random_element(rng, 3, q);
        let r = check_derivation_relation(&DerivationSpec::inner(&a), TORUS_TOL);
        inner_ok += usize::from(r.is_ok());
        inner_res = inner_res.max(r.max_residual());
    }
    b.check(Check::equals("ad(a) accepted for random a", inner_ok, 50));
    b.data("ad(a) residual", inner_res);

    let mut rejected = true;
    let mut gap = 0.0f64;
    for q in [PhaseQ::rational(1, 3)?, PhaseQ::rational(2, 7)?, PhaseQ::rational(1, 2)?, PhaseQ::irrational(0.7)?] {
        let d = DerivationSpec::new(CoeffLattice2::delta(0, 1), CoeffLattice2::zeros(0, 0), q);
        match check_derivation_relation(&d, TORUS_TOL) {
            RelationCheck::Violation { residual, .. } => gap = gap.max((residual - (1.0 - q.value()).norm()).abs()),
            RelationCheck::Ok { .. } => rejected = false,
        }
    }
    b.check(Check::holds("(D(U) = V, 0) rejected for q != 1", rejected));
    b.check(Check::at_most("rejection residual - |1 - q|", gap, 1e-12));
    Ok(b)
}

fn matrix_realization(rng: &mut ChaCha8Rng) -> Outcome {
    let mut b = Builder::new();
    let (mut rel, mut mult, mut star, mut center) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let grid = fiber_grid();
    for n in [1u64, 2, 3, 4, 5, 7] {
        let q = PhaseQ::rational(1, n)?;
        let (u0, v0) = clock_shift(q)?;
        let id = MatrixN::identity(n as usize);
        rel = rel
            .max(u0.mul(&v0).sub(&v0.mul(&u0).scale(q.value())).op_norm())
            .max(u0.unitary_pow(n as i64).sub(&id).op_norm())
            .max(v0.unitary_pow(n as i64).sub(&id).op_norm());
        let f = TorusElement::new(random_lattice(rng, 3, 3), q);
        let g = TorusElement::new(random_lattice(rng, 3, 3), q);
        let r = fiber_check(Exec::default(), &f, &g, &grid)?;
        mult = mult.max(r.multiplicative);
        star = star.max(r.star);
        let ni = n as i64;
        let central = TorusElement::new(
            CoeffLattice2::from_fn(2 * n as usize, 2 * n as usize, |k, l| {
                let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                if k % ni == 0 && l % ni == 0 {
                    z
                } else {
                    c(0.0, 0.0)
                }
            }),
            q,
        );
        for &(u, v) in &grid {
            center = center.max(eval_section(&central, u, v)?.scalar_defect());
        }
    }
    b.check(Check::at_most("clock-shift relations", rel, 1e-13));
    b.check(Check::at_most("eval_section multiplicative", mult, 1e-10));
    b.check(Check::at_most("eval_section *-preserving", star, 1e-10));
    b.check(Check::at_most("center evaluates to scalars", center, 1e-10));
    b.data("fiber grid points", grid.len());
    Ok(b)
}

fn circle(rng: &mut ChaCha8Rng) -> Outcome {
    let mut b = Builder::new();
    let samples = unit_samples(64, 0.618_033_988_749_894_8);
    let mut worst = 0.0f64;
    for (n, a, bb) in [(2u64, 1i64, 1i64), (3, 1, 2), (5, 2, 3)] {
        let spec = CircleSpec::new(a, bb, PhaseQ::rational(1, n)?)?;
        let r = circle_check_relations(Exec::default(), &spec, &samples)?;
        b.data(&format!("residual (N, a, b) = ({n}, {a}, {bb})"), r);
        worst = worst.max(r);
    }
    b.check(Check::at_most("circle relations", worst, 1e-12));

    let spec = CircleSpec::new(2, 3, PhaseQ::rational(0, 1)?)?;
    let element = |rng: &mut ChaCha8Rng| CircleElement {
        spec,
        coeffs: (-2..=2)
            .map(|j| CircleTerm {
                j,
                s: 0,
                t: 0,
                re: rng.gen_range(-1.0..1.0),
                im: rng.gen_range(-1.0..1.0),
            })
            .collect(),
    };
    let (f, g) = (element(rng), element(rng));
    let mut scalar = spec.order() == 1;
    let mut comm = 0.0f64;
    for &z in &samples {
        let (ef, eg) = (circle_eval(&f, z)?, circle_eval(&g, z)?);
        scalar &= ef.n() == 1;
        comm = comm.max(ef.mul(&eg).sub(&eg.mul(&ef)).op_norm());
    }
    b.check(Check::holds("N = 1 gives 1x1 values", scalar));
    b.check(Check::at_most("N = 1 commutator", comm, 0.0));
    b.check(Check::at_most("N = 1 relations", circle_check_relations(Exec::default(), &spec, &samples)?, 1e-12));
    Ok(b)
}

fn weyl(rng: &mut ChaCha8Rng) -> Outcome {
    let mut b = Builder::new();
    let (l, n) = (16.0, 512);
    let (mut comm, mut relation, mut composite, mut group_p, mut group_q) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for hbar in [0.3, 1.0, 2.5] {
        let (x0, w, k) = (rng.gen_range(-1.0..1.0), rng.gen_range(0.8..1.5), rng.gen_range(-0.5..0.5));
        let f = gauss1(l, n, x0, w, k)?;
        let lhs = apply_q(&apply_p(&f, hbar)).sub(&apply_p(&apply_q(&f), hbar))?;
        let rhs = f.scale(c(0.0, hbar));
        comm = comm.max(lhs.sub(&rhs)?.l2_norm() / rhs.l2_norm());
        for _ in 0..3 {
            let (t, s) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let qp = weyl_q(t, &weyl_p(s, &f, hbar));
            let pq = weyl_p(s, &weyl_q(t, &f), hbar);
            relation = relation.max(qp.sub(&pq.scale(Complex64::cis(-t * s * hbar)))?.max_abs());
            let exact = GridFunction1D::from_fn(l, n, |u| {
                let x = (u + s * hbar - x0) / w;
                Complex64::cis(s * t * hbar + t * u) * c((-x * x / 2.0).exp(), 0.0) * Complex64::cis(k * (u + s * hbar))
            })?;
            composite = composite.max(pq.sub(&exact)?.max_abs());
            let (s1, s2) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            group_p = group_p.max(weyl_p(s1, &weyl_p(s2, &f, hbar), hbar).sub(&weyl_p(s1 + s2, &f, hbar))?.max_abs());
            group_q = group_q.max(weyl_q(s1, &weyl_q(s2, &f)).sub(&weyl_q(s1 + s2, &f))?.max_abs());
        }
    }
    b.check(Check::at_most("[Q, P] f = i hbar f (relative)", comm, 1e-8));
    b.check(Check::at_most("e^{itQ} e^{isP} = e^{-its hbar} e^{isP} e^{itQ} (pointwise)", relation, 1e-8));
    b.check(Check::at_most("e^{isP} e^{itQ} f against the closed form", composite, 1e-8));
    b.check(Check::at_most("group law of e^{isP}", group_p, 1e-9));
    b.check(Check::at_most("group law of e^{itQ}", group_q, 1e-9));
    b.data("grid", json!({"half_extent": l, "n": n}));
    Ok(b)
}

fn lattice_measure(rng: &mut ChaCha8Rng) -> Outcome {
    let mut b = Builder::new();
    let probe = default_probe();
    let sigma = 1.0;
    let (mut literal, mut measured, mut cal_res, mut hom) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for step in 1..=10 {
        let hbar = 0.1 * step as f64;
        let cal = calibrate_q(sigma, hbar, &probe)?;
        let q = cal.q.value();
        literal = literal.max((q - Complex64::cis(sigma * sigma * hbar)).norm());
        measured = measured.max((q - Complex64::cis(-sigma * sigma * hbar)).norm());
        cal_res = cal_res.max(cal.residual);
        let cq = TorusElement::new(random_lattice(rng, 1, 1), cal.q);
        let dq = TorusElement::new(random_lattice(rng, 1, 1), cal.q);
        let f = gauss1(16.0, 512, rng.gen_range(-1.0..1.0), rng.gen_range(0.8..1.2), 0.2)?;
        let lhs = rep_lattice_measure(&q_mul(&cq, &dq)?.coeffs, sigma, hbar, &f)?;
        let rhs = rep_lattice_measure(&cq.coeffs, sigma, hbar, &rep_lattice_measure(&dq.coeffs, sigma, hbar, &f)?)?;
        hom = hom.max(lhs.sub(&rhs)?.l2_norm() / rhs.l2_norm());
    }
    b.check(Check::at_most("rep homomorphism with calibrated q", hom, 1e-7));
    b.check(Check::at_most("calibrate_q - e^{+i sigma^2 hbar}", literal, 1e-8));
    b.data("calibrate_q - e^{-i sigma^2 hbar}", measured);
    b.data("calibration residual", cal_res);
    let lattice = calibrate_q(TAU, 0.1, &probe)?;
    b.data(
        "sigma = 2 pi, hbar = 0.1",
        json!({
            "measured_theta": lattice.q.theta(),
            "-sigma^2 hbar reduced": (PI - TAU * TAU * 0.1).rem_euclid(TAU) - PI,
            "unit_lattice_gap_to_e^{i hbar}": (lattice.q.value() - Complex64::cis(0.1)).norm(),
        }),
    );
    Ok(b)
}

fn convolutions(rng: &mut ChaCha8Rng) -> Outcome {
    let mut b = Builder::new();

    let (a, bb) = (random_gauss2(rng, 8.0, 64)?, random_gauss2(rng, 8.0, 64)?);
    let p = plain_conv(&a, &bb)?;
    let zero = twisted_conv(&a, &bb, 0.0)?.sub(&p)?.max_abs().max(other_twisted_conv(&a, &bb, 0.0)?.sub(&p)?.max_abs());
    b.check(Check::at_most("hbar = 0 is plain convolution", zero, 1e-10));

    let (a, bb, cc) = (random_gauss2(rng, 10.0, 128)?, random_gauss2(rng, 10.0, 128)?, random_gauss2(rng, 10.0, 128)?);
    let mut assoc = 0.0f64;
    for kind in [ConvKind::Twisted, ConvKind::Symplectic] {
        let left = conv(kind, &conv(kind, &a, &bb, 0.5)?, &cc, 0.5)?;
        let right = conv(kind, &a, &conv(kind, &bb, &cc, 0.5)?, 0.5)?;
        assoc = assoc.max(left.rel_l2_diff(&right)?);
    }
    b.check(Check::at_most("associativity on Gaussians", assoc, 1e-6));

    let (a, bb) = (random_gauss2(rng, 8.0, 64)?, random_gauss2(rng, 8.0, 64)?);
    let hbar = 0.6;
    let g = |x: &GridFunction2D| gauge_iso(x, hbar, GaugeDirection::Forward);
    let gauge = g(&twisted_conv(&a, &bb, hbar)?).rel_l2_diff(&other_twisted_conv(&g(&a), &g(&bb), hbar)?)?;
    b.check(Check::at_most("G(a * b) = G(a) *^ G(b)", gauge, 1e-6));
    let literal = gauge_iso(&twisted_conv(&g(&a), &g(&bb), hbar)?, hbar, GaugeDirection::Inverse)
        .rel_l2_diff(&other_twisted_conv(&a, &bb, hbar)?)?;
    b.data("G^{-1}(G(a) * G(b)) vs a *^ b", literal);

    let (a, bb) = (random_gauss2(rng, 5.0, 32)?, random_gauss2(rng, 5.0, 32)?);
    let mut group = 0.0f64;
    for hbar in [0.3, 1.0] {
        group = group.max(rel_max(&heisenberg_group_conv(&a, &bb, hbar)?, &other_twisted_conv(&a, &bb, hbar)?)?);
    }
    b.check(Check::at_most("group convolution = *^ (relative max)", group, 1e-10));

    let (a, bb) = (random_gauss2(rng, 6.0, 64)?, random_gauss2(rng, 6.0, 64)?);
    let (mut rescale, mut both_axes) = (0.0f64, 0.0f64);
    for hbar in [0.3, 1.7] {
        let direct = other_twisted_conv(&a, &bb, hbar)?;
        rescale = rescale.max(rescaled_conv(&a, &bb, hbar)?.rel_l2_diff(&direct)?);
        both_axes = both_axes.max(rescaled_both_axes(&a, &bb, hbar)?.rel_l2_diff(&direct)?);
    }
    b.check(Check::at_most("rescaling (x1, x2) -> (hbar x1, x2)", rescale, 1e-6));
    b.data("rescaling (x1, x2) -> (hbar x1, hbar x2)", both_axes);
    Ok(b)
}

/// `a *^_ħ b` through `(x₁, x₂) ↦ (ħx₁, ħx₂)`, recorded for comparison.
fn rescaled_both_axes(a: &GridFunction2D, b: &GridFunction2D, hbar: f64) -> Result<GridFunction2D, Error> {
    let t = |x: &GridFunction2D| {
        let v = x.values().iter().map(|&z| z / (hbar * hbar)).collect();
        GridFunction2D::new(x.half_extent_t() * hbar, x.half_extent_s() * hbar, x.n_t(), x.n_s(), v)
    };
    let unit = other_twisted_conv(&t(a)?, &t(b)?, 1.0)?;
    GridFunction2D::new(
        a.half_extent_t(),
        a.half_extent_s(),
        a.n_t(),
        a.n_s(),
        unit.values().iter().map(|&z| z * hbar * hbar).collect(),
    )
}

fn random_poly(rng: &mut ChaCha8Rng) -> PolySymbol {
    let mut p = PolySymbol::zero(2);
    for _ in 0..rng.gen_range(1..6) {
        let (e1, e2) = (rng.gen_range(0u32..=4), rng.gen_range(0u32..=4));
        if e1 + e2 <= 4 {
            let z = ComplexRational::new(
                ComplexRational::integer(rng.gen_range(-3..=3)).re,
                ComplexRational::integer(rng.gen_range(-3..=3)).re,
            );
            p = p.add(&PolySymbol::monomial(2, vec![e1, e2], z));
        }
    }
    p
}

fn moyal(rng: &mut ChaCha8Rng) -> Outcome {
    let mut b = Builder::new();
    let x = |i| PolySymbol::var(2, i);
    let order = 4;
    let comm = moyal_star(&x(1), &x(2), order)?.sub(&moyal_star(&x(2), &x(1), order)?);
    let mut expect = HbarSeries::constant(PolySymbol::zero(2), order);
    expect.coeffs[1] = PolySymbol::one(2).scale(&ComplexRational::i());
    b.check(Check::holds("x1 * x2 - x2 * x1 = i hbar", comm == expect));

    let mut assoc = true;
    let mut poisson = true;
    let triples = 16;
    for _ in 0..triples {
        let (f, g, h) = (random_poly(rng), random_poly(rng), random_poly(rng));
        let fg = moyal_star(&f, &g, order)?;
        let gh = moyal_star(&g, &h, order)?;
        let left = series_star(&fg, &HbarSeries::constant(h.clone(), order), order)?;
        let right = series_star(&HbarSeries::constant(f.clone(), order), &gh, order)?;
        assoc &= left.sub(&right).is_zero();
        let first = fg.sub(&moyal_star(&g, &f, order)?).coeffs[1].clone();
        poisson &= first == poisson_bracket(&f, &g)?.scale(&-ComplexRational::i());
    }
    b.check(Check::holds("formal associativity through order 4", assoc));
    b.check(Check::holds("hbar^1 commutator = -i {f, g}", poisson));
    b.data("random triples", triples);

    let f = gauss2(12.0, 64, (0.5, 0.0), 1.0, (0.0, 0.0))?;
    let g = gauss2(12.0, 64, (0.0, -0.5), 1.2, (0.0, 0.0))?;
    let errors = (0..=10).map(|k| fourier_bridge_error(&f, &g, 0.05, k)).collect::<Result<Vec<_>, _>>()?;
    b.check(Check::at_most("fourier_bridge_error at hbar = 0.05, K = 8", errors[8], 1e-3));
    let rise = |k: usize, j: usize| (errors[j] - errors[k]) / errors[k];
    let step = (0..10).map(|k| rise(k, k + 1)).fold(f64::NEG_INFINITY, f64::max);
    let two_step = (0..9).map(|k| rise(k, k + 2)).fold(f64::NEG_INFINITY, f64::max);
    b.check(Check::at_most("monotone in K: max relative rise of error(K + 1) over error(K)", step, BRIDGE_ROUNDOFF));
    b.check(Check::at_most("max relative rise of error(K + 2) over error(K)", two_step, BRIDGE_ROUNDOFF));
    b.data("strictly non-increasing in K", (0..10).all(|k| errors[k + 1] <= errors[k]));
    b.data("bridge errors K = 0..10", errors);
    Ok(b)
}

fn inner_generator(rng: &mut ChaCha8Rng) -> Outcome {
    let mut b = Builder::new();
    let hbar = rng.gen_range(0.4..1.0);
    let (t0, s0) = (rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3));
    let (kt, ks) = (rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
    let b0 = |t: f64, s: f64| c((-((t - t0).powi(2) + (s - s0).powi(2))).exp(), 0.0) * Complex64::cis(kt * t + ks * s);
    let grid = |f: &dyn Fn(f64, f64) -> Complex64| GridFunction2D::square(6.0, 64, f);
    let d = DerivationData {
        a_q: grid(&|t, s| b0(t, s) * s * hbar)?,
        a_p: grid(&|t, s| -b0(t, s) * t * hbar)?,
        hbar,
    };
    let sol = solve_inner_generator(&d, &InnerSolverOptions::default())?;
    let expect = grid(&b0)?;
    let (ct, cs) = (expect.n_t() / 2, expect.n_s() / 2);
    let mut away = 0.0f64;
    for i in 0..expect.n_t() {
        for j in 0..expect.n_s() {
            if i.abs_diff(ct) >= 2 && j.abs_diff(cs) >= 2 {
                away = away.max((sol.b.get(i, j) - expect.get(i, j)).norm());
            }
        }
    }
    b.check(Check::at_most("round trip away from the axes (relative max)", away / expect.max_abs(), 1e-8));
    b.data("round trip on the whole grid (relative max)", rel_max(&sol.b, &expect)?);
    b.data("branch disagreement", sol.branch_disagreement);

    let wrong = DerivationData {
        a_q: grid(&|t, s| b0(t, s) * s * hbar)?,
        a_p: grid(&|t, s| b0(t, s) * t * hbar)?,
        hbar,
    };
    let rejected = matches!(solve_inner_generator(&wrong, &InnerSolverOptions::default()), Err(Error::Compatibility { .. }));
    b.check(Check::holds("compatibility violation rejected", rejected));
    Ok(b)
}

fn random_unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let w: Vec<Complex64> = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    w.into_iter().map(|z| z / norm).collect()
}

fn gns(rng: &mut ChaCha8Rng) -> Outcome {
    let mut b = Builder::new();
    let (mut recon, mut schwarz, mut unitary) = (0.0f64, 0.0f64, 0.0f64);
    let mut dims_ok = true;
    let mut dims = Vec::new();
    for n in 1..=5usize {
        let alg = FiniteAlgebra::new(AlgebraKind::TorusQuotient {
            q: PhaseQ::rational(1, n as u64)?,
        })?;
        let w1 = random_unit_vector(rng, n);
        let vector = PositiveForm::vector_state(&alg, &w1)?;
        let mut forms = vec![(PositiveForm::trace(&alg), n * n, true), (vector, n, true)];
        forms.push((PositiveForm::new(vec![c(0.0, 0.0); alg.dim()]), 0, false));
        if n >= 2 {
            // An orthogonal partner for a rank-two mixture.
            let mut w2 = random_unit_vector(rng, n);
            let overlap: Complex64 = w1.iter().zip(&w2).map(|(a, z)| a.conj() * z).sum();
            for (z, a) in w2.iter_mut().zip(&w1) {
                *z -= overlap * a;
            }
            let norm = w2.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let w2: Vec<Complex64> = w2.into_iter().map(|z| z / norm).collect();
            let second = PositiveForm::vector_state(&alg, &w2)?;
            let mixed = PositiveForm::new(
                forms[1].0.values.iter().zip(&second.values).map(|(x, y)| (x + y) * 0.5).collect(),
            );
            forms.push((mixed, 2 * n, true));
        }
        for (phi, expected_dim, judged) in &forms {
            if !is_positive(phi, &alg, GNS_TOL)?.is_yes() {
                dims_ok = false;
                continue;
            }
            let t = gns_build(phi, &alg, &GnsOptions::default())?;
            dims_ok &= t.quotient_dim == *expected_dim;
            dims.push(json!([n, t.quotient_dim, expected_dim]));
            recon = recon.max(t.residuals.reconstruction);
            if *judged {
                for _ in 0..8 {
                    let f = DVector::from_fn(alg.dim(), |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                    schwarz = schwarz.max(schwarz_check(phi, &f, &alg)?);
                }
                let reversed = GnsOptions {
                    order: Some((0..alg.dim()).rev().collect()),
                    ..GnsOptions::default()
                };
                let t2 = gns_build(phi, &alg, &reversed)?;
                unitary = unitary.max(intertwiner(&t, &t2)?.residual);
            }
        }
    }
    b.check(Check::at_most("reconstruction phi(f) = <Omega, pi(f) Omega>", recon, 1e-10));
    b.check(Check::holds("quotient dimensions match the constructed null spaces", dims_ok));
    b.check(Check::at_most("Schwarz residual", schwarz, 1e-10));
    b.check(Check::at_most("uniqueness up to unitary", unitary, 1e-8));
    b.data("(N, quotient_dim, expected)", dims);
    Ok(b)
}

fn hbar_probe(rng: &mut ChaCha8Rng) -> Outcome {
    let mut b = Builder::new();
    let (a, bb) = (random_gauss2(rng, 8.0, 64)?, random_gauss2(rng, 8.0, 64)?);
    for hbar0 in [0.1, 0.5, 1.0] {
        let p = hbar_smoothness_probe(&a, &bb, hbar0, 1e-2)?;
        b.check(Check::within(&format!("Richardson ratio at hbar0 = {hbar0}"), p.ratio, 3.5, 4.5));
    }
    b.data("delta", 1e-2);
    Ok(b)
}
