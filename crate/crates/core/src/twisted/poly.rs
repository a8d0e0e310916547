//! Polynomial symbols with exact Gaussian-rational coefficients, and the
//! Moyal and half-Moyal products as formal series in `ħ`.
//!
//! Every finite `f64` is a dyadic rational, so inputs convert exactly and
//! all series arithmetic is exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `re + i·im` with rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ComplexRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl ComplexRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ComplexRational { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn integer(n: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(BigRational::new(BigInt::from(num), BigInt::from(den)), BigRational::zero())
    }

    /// Exact conversion; fails on non-finite parts.
    pub fn from_f64(re: f64, im: f64) -> Result<Self> {
        let conv = |x: f64, field: &'static str| {
            BigRational::from_float(x).ok_or_else(|| Error::invalid(field, format!("non-finite coefficient {x}")))
        };
        Ok(Self::new(conv(re, "re")?, conv(im, "im")?))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `(-i)^k / (d^k k!)`.
    pub fn series_weight(k: u32, d: i64) -> Self {
        let mut w = Self::one();
        let minus_i = -Self::i();
        let mut den = BigInt::one();
        for j in 1..=k {
            w = w * minus_i.clone();
            den *= BigInt::from(d) * BigInt::from(j);
        }
        let inv = BigRational::new(BigInt::one(), den);
        Self::new(w.re * inv.clone(), w.im * inv)
    }
}

impl Add for ComplexRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for ComplexRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for ComplexRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        Self::new(re, im)
    }
}

impl Neg for ComplexRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl fmt::Display for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re, self.im)
    }
}

/// A polynomial in `nvars` commuting variables `x_1, …, x_nvars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySymbol {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, ComplexRational>,
}

impl PolySymbol {
    pub fn zero(nvars: usize) -> Self {
        PolySymbol {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: ComplexRational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, ComplexRational::one())
    }

    /// `x_var` (1-based).
    pub fn var(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var - 1] = 1;
        Self::monomial(nvars, e, ComplexRational::one())
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: ComplexRational) -> Self {
        assert_eq!(exps.len(), nvars, "exponent arity");
        let mut p = Self::zero(nvars);
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, ComplexRational)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Arity {
                    field: "exps".into(),
                    expected: nvars,
                    found: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: ComplexRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_default();
        *entry = std::mem::take(entry) + c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &ComplexRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> ComplexRational {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// Highest power of `x_var` present.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var - 1]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "symbols in different variable counts");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-ComplexRational::one()))
    }

    pub fn scale(&self, c: &ComplexRational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    /// `∂^order / ∂x_var^order`.
    pub fn derivative(&self, var: usize, order: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let p = e[var - 1];
            if p < order {
                continue;
            }
            let falling: i64 = (0..order).map(|j| (p - j) as i64).product();
            let mut ne = e.clone();
            ne[var - 1] = p - order;
            out.add_term(ne, c.clone() * ComplexRational::integer(falling));
        }
        out
    }

    /// `f(y) g(z)` as a polynomial in `(y, z)`.
    fn tensor(&self, other: &Self) -> Self {
        self.check(other);
        let mut out = Self::zero(2 * self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().chain(e2).copied().collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    /// Restriction of a polynomial in `(y, z)` to `y = z = x`.
    fn diagonal(&self) -> Self {
        let n = self.nvars / 2;
        let mut out = Self::zero(n);
        for (e, c) in &self.terms {
            let d: Vec<u32> = (0..n).map(|i| e[i] + e[n + i]).collect();
            out.add_term(d, c.clone());
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| c.to_c64() * e.iter().zip(x).map(|(&p, &xi)| xi.powi(p as i32)).product::<f64>())
            .sum()
    }
}

impl fmt::Display for PolySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0)
                    .map(|(i, &p)| if p == 1 { format!("x{}", i + 1) } else { format!("x{}^{p}", i + 1) })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{c}·{}", mono.join("·"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Σ_{k ≤ K} ħ^k c_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HbarSeries {
    pub coeffs: Vec<PolySymbol>,
}

impl HbarSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn constant(p: PolySymbol, order: usize) -> Self {
        let n = p.nvars();
        let mut coeffs = vec![PolySymbol::zero(n); order + 1];
        coeffs[0] = p;
        HbarSeries { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let k = self.order().max(other.order());
        let n = self.coeffs[0].nvars();
        let get = |s: &Self, i: usize| s.coeffs.get(i).cloned().unwrap_or_else(|| PolySymbol::zero(n));
        HbarSeries {
            coeffs: (0..=k).map(|i| get(self, i).sub(&get(other, i))).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(PolySymbol::is_zero)
    }

    /// `Σ ħ^k c_k` at a numeric point and `ħ`.
    pub fn eval(&self, x: &[f64], hbar: f64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * hbar + c.eval(x))
    }
}

/// Which bidifferential operator drives the series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Bidiff {
    /// `Σ_i (∂_{y_{2i}} ∂_{z_{2i-1}} - ∂_{y_{2i-1}} ∂_{z_{2i}})`, weight `(-i)^k / (2^k k!)`.
    Moyal,
    /// `Σ_i ∂_{y_{2i}} ∂_{z_{2i-1}}`, weight `(-i)^k / k!`.
    Half,
}

fn apply_bidiff(p: &PolySymbol, kind: Bidiff) -> PolySymbol {
    let n = p.nvars() / 2;
    let mut out = PolySymbol::zero(p.nvars());
    for i in 1..=n / 2 {
        let (odd, even) = (2 * i - 1, 2 * i);
        // y_j is variable j, z_j is variable n + j.
        let plus = p.derivative(even, 1).derivative(n + odd, 1);
        out = out.add(&plus);
        if kind == Bidiff::Moyal {
            let minus = p.derivative(odd, 1).derivative(n + even, 1);
            out = out.sub(&minus);
        }
    }
    out
}

fn check_phase_space(f: &PolySymbol, g: &PolySymbol) -> Result<()> {
    if f.nvars() != g.nvars() {
        return Err(Error::invalid(
            "nvars",
            format!("operands in {} and {} variables", f.nvars(), g.nvars()),
        ));
    }
    if f.nvars() == 0 || f.nvars() % 2 != 0 {
        return Err(Error::invalid("nvars", format!("phase space needs an even positive count, got {}", f.nvars())));
    }
    Ok(())
}

fn bidiff_series(f: &PolySymbol, g: &PolySymbol, order: usize, kind: Bidiff) -> Result<HbarSeries> {
    check_phase_space(f, g)?;
    let d = match kind {
        Bidiff::Moyal => 2,
        Bidiff::Half => 1,
    };
    let mut current = f.tensor(g);
    let mut coeffs = Vec::with_capacity(order + 1);
    for k in 0..=order {
        if k > 0 {
            current = apply_bidiff(&current, kind);
        }
        coeffs.push(current.diagonal().scale(&ComplexRational::series_weight(k as u32, d)));
    }
    Ok(HbarSeries { coeffs })
}

/// `f ⋆ g` through order `K`: the `ħ^k` coefficient is
/// `(-i)^k / (2^k k!)` times the diagonal of the `k`-th power of the
/// symplectic bidifferential applied to `f(y) g(z)`.
pub fn moyal_star(f: &PolySymbol, g: &PolySymbol, order: usize) -> Result<HbarSeries> {
    bidiff_series(f, g, order, Bidiff::Moyal)
}

/// `Σ_k ħ^k (-i)^k / k! ∂₂^k f ∂₁^k g` through order `K`.
pub fn half_moyal(f: &PolySymbol, g: &PolySymbol, order: usize) -> Result<HbarSeries> {
    bidiff_series(f, g, order, Bidiff::Half)
}

/// `F ⋆ G` of two series, truncated at order `K`.
pub fn series_star(f: &HbarSeries, g: &HbarSeries, order: usize) -> Result<HbarSeries> {
    let n = f.coeffs[0].nvars();
    let mut coeffs = vec![PolySymbol::zero(n); order + 1];
    for (i, fi) in f.coeffs.iter().enumerate().take(order + 1) {
        for (j, gj) in g.coeffs.iter().enumerate().take(order + 1 - i) {
            if fi.is_zero() || gj.is_zero() {
                continue;
            }
            let s = moyal_star(fi, gj, order - i - j)?;
            for (k, c) in s.coeffs.into_iter().enumerate() {
                coeffs[i + j + k] = coeffs[i + j + k].add(&c);
            }
        }
    }
    Ok(HbarSeries { coeffs })
}

/// `{f, g} = ∂₂f ∂₁g - ∂₁f ∂₂g` summed over conjugate pairs.
pub fn poisson_bracket(f: &PolySymbol, g: &PolySymbol) -> Result<PolySymbol> {
    check_phase_space(f, g)?;
    let mut out = PolySymbol::zero(f.nvars());
    for i in 1..=f.nvars() / 2 {
        let (odd, even) = (2 * i - 1, 2 * i);
        out = out
            .add(&f.derivative(even, 1).mul(&g.derivative(odd, 1)))
            .sub(&f.derivative(odd, 1).mul(&g.derivative(even, 1)));
    }
    Ok(out)
}

/// Per-order comparison of the half and full expansions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalfFullComparison {
    /// `half_k == full_k`.
    pub equal: Vec<bool>,
    /// `half_k == 2^k full_k`, i.e. agreement after `ħ ↦ 2ħ` in the full product.
    pub equal_after_doubling: Vec<bool>,
}

pub fn compare_half_full(f: &PolySymbol, g: &PolySymbol, order: usize) -> Result<HalfFullComparison> {
    let half = half_moyal(f, g, order)?;
    let full = moyal_star(f, g, order)?;
    let mut equal = Vec::new();
    let mut doubled = Vec::new();
    for k in 0..=order {
        equal.push(half.coeffs[k] == full.coeffs[k]);
        let two_k = ComplexRational::integer(1i64 << k);
        doubled.push(half.coeffs[k] == full.coeffs[k].scale(&two_k));
    }
    Ok(HalfFullComparison {
        equal,
        equal_after_doubling: doubled,
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRepr {
    exps: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyRepr {
    nvars: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for PolySymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let z = c.to_c64();
                    TermRepr {
                        exps: e.clone(),
                        re: z.re,
                        im: z.im,
                    }
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolySymbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = PolyRepr::deserialize(d)?;
        let terms = r
            .terms
            .into_iter()
            .map(|t| ComplexRational::from_f64(t.re, t.im).map(|c| (t.exps, c)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        PolySymbol::from_terms(r.nvars, terms).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesRepr {
    order: usize,
    coeffs: Vec<PolySymbol>,
}

impl Serialize for HbarSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr {
            order: self.order(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HbarSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = SeriesRepr::deserialize(d)?;
        if r.coeffs.len() != r.order + 1 {
            return Err(D::Error::custom(format!(
                "coeffs: expected {} entries, found {}",
                r.order + 1,
                r.coeffs.len()
            )));
        }
        Ok(HbarSeries { coeffs: r.coeffs })
    }
}
