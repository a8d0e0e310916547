//! Positive forms and the GNS construction on finite-dimensional algebras.
//!
//! For a positive form `φ` the Gram matrix `G_ij = φ(e_i* e_j)` defines the
//! semi-inner product `⟨x, y⟩ = x† G y`; its kernel `I_φ` is a left ideal
//! and `A/I_φ` carries `π(f)[g] = [fg]` with cyclic vector `Ω = [1]`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::PhaseQ;
use crate::matrep::MatrixN;
use crate::torus::{adjoint, q_mul, TorusElement};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Default tolerance for positivity and the GNS invariants.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Relative cutoff deciding the null space of the Gram matrix.
pub const RANK_CUTOFF: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraKind {
    /// `U^N = V^N = 1`, `UV = qVU` with `q` of order `N`; isomorphic to `Mat_N`.
    TorusQuotient { q: PhaseQ },
    /// Monomials `U^k V^l` with `|k| ≤ radius_k`, `|l| ≤ radius_l`; products
    /// leaving the box are dropped, so the product is not associative.
    TruncatedBox { radius_k: usize, radius_l: usize, q: PhaseQ },
}

/// A finite-dimensional algebra with a monomial basis.
///
/// Basis products are single monomials up to a phase, or dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteAlgebra {
    kind: AlgebraKind,
    basis: Vec<(i64, i64)>,
    table: Vec<Option<(usize, Complex64)>>,
    star: Vec<(usize, Complex64)>,
    unit: usize,
}

/// Truncation data of a [`FiniteAlgebra`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationReport {
    pub dropped_products: usize,
    pub total_products: usize,
    /// `max |(e_i e_j) e_k − e_i (e_j e_k)|` over basis triples.
    pub associativity_defect: f64,
}

impl FiniteAlgebra {
    pub fn new(kind: AlgebraKind) -> Result<Self> {
        let (basis, q) = match kind {
            AlgebraKind::TorusQuotient { q } => {
                let n = q.require_rational()? as i64;
                ((0..n).flat_map(|k| (0..n).map(move |l| (k, l))).collect::<Vec<_>>(), q)
            }
            AlgebraKind::TruncatedBox { radius_k, radius_l, q } => {
                let (rk, rl) = (radius_k as i64, radius_l as i64);
                ((-rk..=rk).flat_map(|k| (-rl..=rl).map(move |l| (k, l))).collect::<Vec<_>>(), q)
            }
        };
        let mut alg = FiniteAlgebra {
            kind,
            basis,
            table: Vec::new(),
            star: Vec::new(),
            unit: 0,
        };
        alg.unit = alg.locate(0, 0).expect("unit in basis");
        let d = alg.dim();
        let monomial = |i: usize| TorusElement::monomial(alg.basis[i].0, alg.basis[i].1, q);
        let mut table = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                table.push(alg.single(&q_mul(&monomial(i), &monomial(j))?));
            }
        }
        let star = (0..d)
            .map(|i| alg.single(&adjoint(&monomial(i))).expect("adjoint stays in the basis"))
            .collect();
        alg.table = table;
        alg.star = star;
        Ok(alg)
    }

    /// The basis index of `U^k V^l` after reduction, if present.
    fn locate(&self, k: i64, l: i64) -> Option<usize> {
        match self.kind {
            AlgebraKind::TorusQuotient { .. } => {
                let n = self.side() as i64;
                let (k, l) = (k.rem_euclid(n), l.rem_euclid(n));
                Some((k * n + l) as usize)
            }
            AlgebraKind::TruncatedBox { radius_k, radius_l, .. } => {
                let (rk, rl) = (radius_k as i64, radius_l as i64);
                ((-rk..=rk).contains(&k) && (-rl..=rl).contains(&l))
                    .then(|| ((k + rk) * (2 * rl + 1) + l + rl) as usize)
            }
        }
    }

    fn side(&self) -> usize {
        match self.kind {
            AlgebraKind::TorusQuotient { q } => q.order().expect("validated") as usize,
            AlgebraKind::TruncatedBox { radius_l, .. } => 2 * radius_l + 1,
        }
    }

    /// A torus monomial `c U^k V^l` as a basis index and coefficient.
    fn single(&self, m: &TorusElement) -> Option<(usize, Complex64)> {
        let (k, l, c) = m.coeffs.support().next()?;
        self.locate(k, l).map(|i| (i, c))
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn q(&self) -> PhaseQ {
        match self.kind {
            AlgebraKind::TorusQuotient { q } | AlgebraKind::TruncatedBox { q, .. } => q,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Exponents `(k, l)` of the basis monomials, in basis order.
    pub fn basis(&self) -> &[(i64, i64)] {
        &self.basis
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn index_of(&self, k: i64, l: i64) -> Option<usize> {
        self.locate(k, l)
    }

    pub fn basis_element(&self, i: usize) -> DVector<Complex64> {
        let mut v = DVector::from_element(self.dim(), ZERO);
        v[i] = ONE;
        v
    }

    pub fn unit(&self) -> DVector<Complex64> {
        self.basis_element(self.unit)
    }

    pub fn monomial(&self, k: i64, l: i64) -> Result<DVector<Complex64>> {
        let i = self
            .locate(k, l)
            .ok_or_else(|| Error::invalid("monomial", format!("U^{k} V^{l} is outside the basis")))?;
        Ok(self.basis_element(i))
    }

    pub fn mul(&self, x: &DVector<Complex64>, y: &DVector<Complex64>) -> DVector<Complex64> {
        self.mul_with_tail(x, y).0
    }

    /// `xy` together with the ℓ¹ mass of the dropped products.
    pub fn mul_with_tail(&self, x: &DVector<Complex64>, y: &DVector<Complex64>) -> (DVector<Complex64>, f64) {
        let d = self.dim();
        let mut out = DVector::from_element(d, ZERO);
        let mut tail = 0.0;
        for i in 0..d {
            if x[i] == ZERO {
                continue;
            }
            for j in 0..d {
                if y[j] == ZERO {
                    continue;
                }
                match self.table[i * d + j] {
                    Some((k, c)) => out[k] += x[i] * y[j] * c,
                    None => tail += (x[i] * y[j]).norm(),
                }
            }
        }
        (out, tail)
    }

    pub fn adjoint(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::from_element(self.dim(), ZERO);
        for (i, &(k, c)) in self.star.iter().enumerate() {
            out[k] += x[i].conj() * c;
        }
        out
    }

    /// The matrix of `g ↦ xg` in the basis.
    pub fn left_mult(&self, x: &DVector<Complex64>) -> DMatrix<Complex64> {
        let d = self.dim();
        let mut m = DMatrix::from_element(d, d, ZERO);
        for i in 0..d {
            if x[i] == ZERO {
                continue;
            }
            for j in 0..d {
                if let Some((k, c)) = self.table[i * d + j] {
                    m[(k, j)] += x[i] * c;
                }
            }
        }
        m
    }

    pub fn truncation_report(&self) -> TruncationReport {
        let d = self.dim();
        let dropped_products = self.table.iter().filter(|e| e.is_none()).count();
        let mut defect = 0.0f64;
        if dropped_products > 0 {
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        let left = self.table[i * d + j].and_then(|(ij, a)| self.table[ij * d + k].map(|(r, b)| (r, a * b)));
                        let right = self.table[j * d + k].and_then(|(jk, a)| self.table[i * d + jk].map(|(r, b)| (r, a * b)));
                        let diff = match (left, right) {
                            (Some((r1, a)), Some((r2, b))) if r1 == r2 => (a - b).norm(),
                            (None, None) => 0.0,
                            _ => 1.0,
                        };
                        defect = defect.max(diff);
                    }
                }
            }
        }
        TruncationReport {
            dropped_products,
            total_products: d * d,
            associativity_defect: defect,
        }
    }
}

/// A linear form given by its values `φ(e_i)` on the basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositiveForm {
    pub values: Vec<Complex64>,
}

impl PositiveForm {
    pub fn new(values: Vec<Complex64>) -> Self {
        PositiveForm { values }
    }

    /// `φ(U^k V^l) = δ_{k,0} δ_{l,0}`.
    pub fn trace(alg: &FiniteAlgebra) -> Self {
        let mut values = vec![ZERO; alg.dim()];
        values[alg.unit_index()] = ONE;
        PositiveForm { values }
    }

    /// `φ(f) = ⟨w, π₀(f) w⟩` for the clock–shift realization `π₀` of a
    /// torus quotient.
    pub fn vector_state(alg: &FiniteAlgebra, w: &[Complex64]) -> Result<Self> {
        let AlgebraKind::TorusQuotient { q } = alg.kind() else {
            return Err(Error::invalid("kind", "vector states need a torus_quotient algebra"));
        };
        let n = alg.side();
        if w.len() != n {
            return Err(Error::Arity {
                field: "w".into(),
                expected: n,
                found: w.len(),
            });
        }
        let w = DVector::from_column_slice(w);
        let values = alg
            .basis()
            .iter()
            .map(|&(k, l)| {
                let m = crate::matrep::clock_shift_monomial(q, n, k, l);
                w.dotc(&(&m.0 * &w))
            })
            .collect();
        Ok(PositiveForm { values })
    }

    fn check(&self, alg: &FiniteAlgebra) -> Result<()> {
        if self.values.len() != alg.dim() {
            return Err(Error::Arity {
                field: "values".into(),
                expected: alg.dim(),
                found: self.values.len(),
            });
        }
        if let Some(i) = self.values.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite {
                field: "values".into(),
                index: i,
            });
        }
        Ok(())
    }

    pub fn eval(&self, x: &DVector<Complex64>) -> Complex64 {
        self.values.iter().zip(x.iter()).map(|(p, c)| p * c).sum()
    }

    fn scale_of(&self) -> f64 {
        self.values.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0)
    }
}

/// `G_ij = φ(e_i* e_j)`.
pub fn gram(phi: &PositiveForm, alg: &FiniteAlgebra) -> Result<DMatrix<Complex64>> {
    phi.check(alg)?;
    let d = alg.dim();
    let mut g = DMatrix::from_element(d, d, ZERO);
    for i in 0..d {
        let (si, ci) = alg.star[i];
        for j in 0..d {
            if let Some((k, c)) = alg.table[si * d + j] {
                g[(i, j)] = phi.values[k] * ci * c;
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Positivity {
    Yes { min_eigenvalue: f64 },
    /// `φ(f* f)` is negative or not real at `witness`.
    No { witness: Vec<Complex64>, value: Complex64 },
}

impl Positivity {
    pub fn is_yes(&self) -> bool {
        matches!(self, Positivity::Yes { .. })
    }
}

/// Decides `φ(f* f) ≥ 0` for all `f` up to `tol`.
pub fn is_positive(phi: &PositiveForm, alg: &FiniteAlgebra, tol: f64) -> Result<Positivity> {
    let g = gram(phi, alg)?;
    let d = alg.dim();
    let value_at = |f: &DVector<Complex64>| f.dotc(&(&g * f));
    for i in 0..d {
        let gi = g[(i, i)];
        if gi.re < -tol || gi.im.abs() > tol {
            let f = alg.basis_element(i);
            return Ok(Positivity::No {
                value: value_at(&f),
                witness: f.iter().copied().collect(),
            });
        }
    }
    for i in 0..d {
        for j in i + 1..d {
            let skew = g[(i, j)] - g[(j, i)].conj();
            if skew.norm() > tol {
                // φ(f* f) has imaginary part Im(c̄ skew) at f = e_i + c e_j.
                let mut f = alg.basis_element(i);
                f[j] = Complex64::i() * skew / skew.norm();
                return Ok(Positivity::No {
                    value: value_at(&f),
                    witness: f.iter().copied().collect(),
                });
            }
        }
    }
    let h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let (imin, &min_eigenvalue) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap_or((0, &0.0));
    if min_eigenvalue < -tol {
        let f = eig.eigenvectors.column(imin).into_owned();
        return Ok(Positivity::No {
            value: value_at(&f),
            witness: f.iter().copied().collect(),
        });
    }
    Ok(Positivity::Yes { min_eigenvalue })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GnsResiduals {
    /// `max |φ(e_i) − ⟨Ω, π(e_i)Ω⟩|`.
    pub reconstruction: f64,
    /// `max ‖π(e_i e_j) − π(e_i)π(e_j)‖`.
    pub homomorphism: f64,
    /// `max ‖π(e_i*) − π(e_i)†‖`.
    pub adjoint: f64,
    /// `‖π(1) − 𝕀‖`.
    pub unit: f64,
    /// `max ‖G L_{e_i} n‖` over unit null vectors `n`.
    pub left_ideal: f64,
    /// Rank of `{π(e_i)Ω}`; equals the quotient dimension.
    pub cyclic_rank: usize,
    /// ℓ¹ mass dropped by truncation while forming `π(e_i)` on the quotient basis.
    pub tail: f64,
    /// Tolerance the residuals were checked against.
    pub tolerance: f64,
}

/// `(π_φ, H_φ, Ω_φ)` in an orthonormal basis of `A/I_φ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GnsTriplet {
    pub quotient_dim: usize,
    /// Representatives `w_a` with `w_a† G w_b = δ_ab`, as coefficient vectors.
    pub basis: Vec<Vec<Complex64>>,
    pub pi_u: MatrixN,
    pub pi_v: MatrixN,
    pub omega: Vec<Complex64>,
    pub residuals: GnsResiduals,
    #[serde(skip)]
    coords: DMatrix<Complex64>,
}

impl GnsTriplet {
    /// The quotient coordinates of the class of `x`.
    pub fn class_of(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        &self.coords * x
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GnsOptions {
    pub tol: f64,
    /// Gram–Schmidt visiting order of the basis; basis order if `None`.
    pub order: Option<Vec<usize>>,
}

impl Default for GnsOptions {
    fn default() -> Self {
        GnsOptions {
            tol: DEFAULT_TOLERANCE,
            order: None,
        }
    }
}

fn rank(m: &DMatrix<Complex64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > RANK_CUTOFF * max && max > 0.0).count()
}

/// The GNS triplet of a positive form.
pub fn gns_build(phi: &PositiveForm, alg: &FiniteAlgebra, opts: &GnsOptions) -> Result<GnsTriplet> {
    if let Positivity::No { value, .. } = is_positive(phi, alg, opts.tol * phi.scale_of())? {
        return Err(Error::NotPositive { value: value.to_string() });
    }
    let g = gram(phi, alg)?;
    let d = alg.dim();
    let order: Vec<usize> = match &opts.order {
        Some(o) => {
            let mut sorted = o.clone();
            sorted.sort_unstable();
            if sorted != (0..d).collect::<Vec<_>>() {
                return Err(Error::invalid("order", format!("must be a permutation of 0..{d}")));
            }
            o.clone()
        }
        None => (0..d).collect(),
    };

    let h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let lmax = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let cutoff = RANK_CUTOFF * lmax;

    // Modified Gram–Schmidt in the semi-inner product x† G y.
    let mut reps: Vec<DVector<Complex64>> = Vec::new();
    let mut g_reps: Vec<DVector<Complex64>> = Vec::new();
    for &i in &order {
        let mut x = alg.basis_element(i);
        for (w, gw) in reps.iter().zip(&g_reps) {
            let c = gw.dotc(&x);
            x -= w * c;
        }
        let gx = &g * &x;
        let norm2 = x.dotc(&gx).re;
        if lmax > 0.0 && norm2 > cutoff {
            let s = Complex64::new(1.0 / norm2.sqrt(), 0.0);
            reps.push(x * s);
            g_reps.push(gx * s);
        }
    }
    let r = reps.len();
    // Row a of `coords` is w_a† G.
    let coords = DMatrix::from_fn(r, d, |a, j| g_reps[a][j].conj());
    let compress = |x: &DVector<Complex64>| -> (MatrixN, f64) {
        let mut tail = 0.0f64;
        let mut m = DMatrix::from_element(r, r, ZERO);
        for b in 0..r {
            let (y, t) = alg.mul_with_tail(x, &reps[b]);
            tail = tail.max(t);
            let col = &coords * y;
            m.set_column(b, &col);
        }
        (MatrixN(m), tail)
    };

    let mut tail = 0.0f64;
    let mut pis = Vec::with_capacity(d);
    for i in 0..d {
        let (p, t) = compress(&alg.basis_element(i));
        tail = tail.max(t);
        pis.push(p);
    }
    let scale = phi.scale_of();
    let tolerance = match alg.kind() {
        AlgebraKind::TorusQuotient { .. } => opts.tol * scale,
        AlgebraKind::TruncatedBox { .. } => (opts.tol * scale).max(10.0 * tail * scale),
    };

    let null: Vec<DVector<Complex64>> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l <= cutoff)
        .map(|(k, _)| eig.eigenvectors.column(k).into_owned())
        .collect();
    let mut left_ideal = 0.0f64;
    for i in 0..d {
        let l = alg.left_mult(&alg.basis_element(i));
        for n in &null {
            left_ideal = left_ideal.max((&g * (&l * n)).norm());
        }
    }
    if left_ideal > tolerance {
        return Err(Error::NotLeftIdeal { residual: left_ideal });
    }

    let omega = &coords * alg.unit();
    let mut reconstruction = 0.0f64;
    let mut homomorphism = 0.0f64;
    let mut adj = 0.0f64;
    for i in 0..d {
        let e = alg.basis_element(i);
        let pe = &pis[i].0 * &omega;
        reconstruction = reconstruction.max((phi.values[i] - omega.dotc(&pe)).norm());
        let (si, ci) = alg.star[i];
        adj = adj.max(pis[si].scale(ci).sub(&pis[i].adjoint()).op_norm());
        for j in 0..d {
            let prod = alg.mul(&e, &alg.basis_element(j));
            let mut lhs = MatrixN::zeros(r);
            for (k, c) in prod.iter().enumerate() {
                if *c != ZERO {
                    lhs = lhs.add(&pis[k].scale(*c));
                }
            }
            homomorphism = homomorphism.max(lhs.sub(&pis[i].mul(&pis[j])).op_norm());
        }
    }
    let unit = pis[alg.unit_index()].sub(&MatrixN::identity(r)).op_norm();
    let cyclic_rank = rank(&coords);
    let residuals = GnsResiduals {
        reconstruction,
        homomorphism,
        adjoint: adj,
        unit,
        left_ideal,
        cyclic_rank,
        tail,
        tolerance,
    };
    for (name, value) in [
        ("reconstruction", reconstruction),
        ("homomorphism", homomorphism),
        ("adjoint", adj),
        ("unit", unit),
    ] {
        if !(value <= tolerance) {
            return Err(Error::InvariantViolation { name, residual: value });
        }
    }
    if cyclic_rank != r {
        return Err(Error::InvariantViolation {
            name: "cyclic_rank",
            residual: (r - cyclic_rank) as f64,
        });
    }

    let generator = |k: i64, l: i64| alg.index_of(k, l).map(|i| pis[i].clone()).unwrap_or_else(|| MatrixN::identity(r));
    Ok(GnsTriplet {
        quotient_dim: r,
        basis: reps.iter().map(|w| w.iter().copied().collect()).collect(),
        pi_u: generator(1, 0),
        pi_v: generator(0, 1),
        omega: omega.iter().copied().collect(),
        residuals,
        coords,
    })
}

/// `φ_f(g) = φ(f* g f)`.
pub fn state_action(phi: &PositiveForm, f: &DVector<Complex64>, alg: &FiniteAlgebra) -> Result<PositiveForm> {
    phi.check(alg)?;
    let fs = alg.adjoint(f);
    let values = (0..alg.dim())
        .map(|k| phi.eval(&alg.mul(&fs, &alg.mul(&alg.basis_element(k), f))))
        .collect();
    Ok(PositiveForm { values })
}

/// `max(0, |φ(f)| − φ(1)^{1/2} φ(f* f)^{1/2})`.
pub fn schwarz_check(phi: &PositiveForm, f: &DVector<Complex64>, alg: &FiniteAlgebra) -> Result<f64> {
    phi.check(alg)?;
    let lhs = phi.eval(f).norm();
    let one = phi.eval(&alg.unit()).re.max(0.0);
    let ff = phi.eval(&alg.mul(&alg.adjoint(f), f)).re.max(0.0);
    Ok((lhs - one.sqrt() * ff.sqrt()).max(0.0))
}

/// A unitary `W` with `W π₁(x) Ω₁ = π₂(x) Ω₂`, fitted by least squares.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Intertwiner {
    pub unitary: MatrixN,
    /// Largest of the fit, unitarity and intertwining residuals on `π(U)`, `π(V)`.
    pub residual: f64,
}

pub fn intertwiner(t1: &GnsTriplet, t2: &GnsTriplet) -> Result<Intertwiner> {
    if t1.quotient_dim != t2.quotient_dim || t1.coords.ncols() != t2.coords.ncols() {
        return Err(Error::invalid("triplets", "dimensions differ"));
    }
    let r = t1.quotient_dim;
    let (x1, x2) = (&t1.coords, &t2.coords);
    let w = if r == 0 {
        DMatrix::from_element(0, 0, ZERO)
    } else {
        let pinv = x1
            .clone()
            .pseudo_inverse(RANK_CUTOFF)
            .map_err(|e| Error::invalid("triplets", e.to_string()))?;
        x2 * pinv
    };
    let w = MatrixN(w);
    let fit = (&w.0 * x1 - x2).norm();
    let unitarity = w.adjoint().mul(&w).sub(&MatrixN::identity(r)).op_norm();
    let on_u = w.mul(&t1.pi_u).sub(&t2.pi_u.mul(&w)).op_norm();
    let on_v = w.mul(&t1.pi_v).sub(&t2.pi_v.mul(&w)).op_norm();
    Ok(Intertwiner {
        residual: [fit, unitarity, on_u, on_v].into_iter().fold(0.0, f64::max),
        unitary: w,
    })
}

/// Rank of `f ↦ ⊕_φ π_φ(f)` against the algebra dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectSumReport {
    pub rank: usize,
    pub dim: usize,
    pub injective: bool,
}

pub fn direct_sum_injectivity(forms: &[PositiveForm], alg: &FiniteAlgebra, tol: f64) -> Result<DirectSumReport> {
    let d = alg.dim();
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for phi in forms {
        let t = gns_build(phi, alg, &GnsOptions { tol, order: None })?;
        let r = t.quotient_dim;
        let reps: Vec<DVector<Complex64>> = t.basis.iter().map(|w| DVector::from_column_slice(w)).collect();
        // Entry (a, b) of π(e_i) for every i.
        let mut block = vec![vec![ZERO; d]; r * r];
        for i in 0..d {
            let e = alg.basis_element(i);
            for (b, w) in reps.iter().enumerate() {
                let col = t.class_of(&alg.mul(&e, w));
                for a in 0..r {
                    block[a * r + b][i] = col[a];
                }
            }
        }
        rows.extend(block);
    }
    let m = DMatrix::from_fn(rows.len(), d, |i, j| rows[i][j]);
    let rank = rank(&m);
    Ok(DirectSumReport {
        rank,
        dim: d,
        injective: rank == d,
    })
}
