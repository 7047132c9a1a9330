//! Floating-point layer: `K_{ir}(y)`, the EMOT integral identity, the
//! Grassmannian model of hyperbolic space with its integral isometries, and
//! evaluation of the lift's Fourier expansion.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use core::fmt;

use libm::{acosh, asin, atan2, cos, cosh, exp, fabs, log, pow, sin, sinh, sqrt};

use crate::arith::divisors;
use crate::coeffs::{CoeffError, NumericMaassData};
use crate::lattice::{content_of, GramLattice, LatticeError};

#[derive(Clone, Debug, PartialEq)]
pub enum AnalyticError {
    OutOfRange { what: &'static str, value: f64 },
    Coeff(CoeffError),
    Lattice(LatticeError),
    NotOrthogonal,
    DimensionMismatch { expected: usize, got: usize },
    NonPositiveLine,
    NotEvenUnimodular,
    NoConvergence { estimate: f64 },
}

impl fmt::Display for AnalyticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyticError::OutOfRange { what, value } => write!(f, "{what} = {value} outside the supported range"),
            AnalyticError::Coeff(e) => write!(f, "{e}"),
            AnalyticError::Lattice(e) => write!(f, "{e}"),
            AnalyticError::NotOrthogonal => f.write_str("matrix does not preserve Q"),
            AnalyticError::DimensionMismatch { expected, got } => write!(f, "expected dimension {expected}, got {got}"),
            AnalyticError::NonPositiveLine => f.write_str("vector does not span a positive line"),
            AnalyticError::NotEvenUnimodular => f.write_str("lattice must be even unimodular of rank 8n"),
            AnalyticError::NoConvergence { estimate } => write!(f, "quadrature did not converge (error {estimate:e})"),
        }
    }
}

impl core::error::Error for AnalyticError {}

impl From<CoeffError> for AnalyticError {
    fn from(e: CoeffError) -> Self {
        AnalyticError::Coeff(e)
    }
}

impl From<LatticeError> for AnalyticError {
    fn from(e: LatticeError) -> Self {
        AnalyticError::Lattice(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

const DE_TMAX: f64 = 4.0;
const DE_MAX_LEVEL: u32 = 10;

/// Tanh-sinh quadrature of `f` over `[a, b]`, halving the step until two
/// successive levels agree to `tol` relative to `∫|f|`.
pub fn de_quad<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> QuadResult {
    if b <= a {
        return QuadResult { value: 0.0, error: 0.0 };
    }
    let hw = (b - a) / 2.0;
    let mut node = |t: f64| -> (f64, f64) {
        let u = FRAC_PI_2 * sinh(t);
        let e = exp(-2.0 * fabs(u));
        // distance from the nearer endpoint, without cancellation
        let delta = hw * 2.0 * e / (1.0 + e);
        let ch = cosh(u);
        let w = FRAC_PI_2 * cosh(t) / (ch * ch);
        if delta <= 0.0 || !w.is_finite() || w * hw < 1e-300 {
            return (0.0, 0.0);
        }
        let x = if t > 0.0 { b - delta } else if t < 0.0 { a + delta } else { a + hw };
        let v = w * f(x);
        (v, fabs(v))
    };
    let mut h = 1.0;
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let n0 = DE_TMAX as i64;
    for i in -n0..=n0 {
        let (v, m) = node(i as f64);
        sum += v;
        abs_sum += m;
    }
    let mut prev = sum * h * hw;
    let mut error = f64::INFINITY;
    for level in 1..=DE_MAX_LEVEL {
        h /= 2.0;
        let n = (DE_TMAX / h) as i64;
        let mut i = -n + if n % 2 == 0 { 1 } else { 0 };
        while i <= n {
            let (v, m) = node(i as f64 * h);
            sum += v;
            abs_sum += m;
            i += 2;
        }
        let cur = sum * h * hw;
        error = fabs(cur - prev);
        let scale = abs_sum * h * hw;
        if level >= 3 && error <= tol * scale.max(1e-300) {
            return QuadResult { value: cur, error };
        }
        prev = cur;
    }
    QuadResult { value: prev, error }
}

fn panels<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, count: usize, tol: f64) -> QuadResult {
    let mut out = QuadResult { value: 0.0, error: 0.0 };
    for i in 0..count {
        let lo = a + (b - a) * i as f64 / count as f64;
        let hi = a + (b - a) * (i + 1) as f64 / count as f64;
        let q = de_quad(&mut f, lo, hi, tol);
        out.value += q.value;
        out.error += q.error;
    }
    out
}

fn unit_panels(a: f64, b: f64) -> usize {
    (libm::ceil(b - a) as usize).max(1)
}

fn sinh_minus_id(h: f64) -> f64 {
    if fabs(h) < 0.1 {
        let h2 = h * h;
        h * h2 / 6.0 * (1.0 + h2 / 20.0 * (1.0 + h2 / 42.0 * (1.0 + h2 / 72.0)))
    } else {
        sinh(h) - h
    }
}

const PANEL_TOL: f64 = 1e-14;

/// `K_{ir}(x)` without range checks, integrated along a path on which the
/// integrand does not oscillate (when `|r| ≤ x`) or along a short segment
/// plus a steepest-descent tail (when `|r| > x`).
fn k_im_raw(r: f64, x: f64) -> f64 {
    let a = fabs(r);
    if a <= x {
        let g = |u: f64| {
            let (s, omc) = if u == 0.0 {
                (a / x, (x - a) / x)
            } else {
                let sh = sinh(u);
                (a * u / (x * sh), (x * sinh_minus_id(u) + (x - a) * u) / (x * sh))
            };
            let cv = sqrt(omc * (1.0 + s));
            let v = atan2(s, cv);
            exp(-(x * cosh(u) * cv + a * v))
        };
        let upper = acosh(1.0 + 60.0 / x + a * PI / (2.0 * x)) + 1.0;
        let knee = acosh((1.0 / x).max(1.0));
        let mut cuts = vec![0.0];
        if knee > 0.0 && knee < upper {
            cuts.push(knee);
        }
        cuts.push(upper);
        return cuts.windows(2).map(|c| panels(g, c[0], c[1], unit_panels(c[0], c[1]), PANEL_TOL).value).sum();
    }
    let u0 = acosh(a / x);
    let sh0 = sinh(u0);
    let phase = x * sh0 - a * u0;
    let seg_panels = (a * u0 / PI) as usize + 2;
    let seg = panels(|u| cos(x * sinh(u) - a * u), 0.0, u0, seg_panels, PANEL_TOL).value * exp(-a * PI / 2.0);
    let g = |u: f64| {
        let h = u - u0;
        let sh = sinh(u);
        let sh_half = sinh(h / 2.0);
        let omc = (2.0 * x * sh0 * sh_half * sh_half + a * sinh_minus_id(h)) / (x * sh);
        let w = 2.0 * asin(sqrt(omc.max(0.0) / 2.0));
        let v = FRAC_PI_2 - w;
        let rho = x * cosh(u) * sin(w) + a * v;
        let vp = if h < 1e-9 {
            -1.0
        } else {
            let sw2 = sin(w / 2.0);
            let num = x * 2.0 * sinh((u + u0) / 2.0) * sh_half - 2.0 * x * cosh(u) * sw2 * sw2;
            -num / (x * sh * sin(w))
        };
        exp(-rho) * (cos(phase) + vp * sin(phase))
    };
    let mut upper = u0 + 1.0;
    while x * cosh(upper) * 0.5 <= a * PI / 2.0 + 60.0 + x {
        upper += 1.0;
    }
    let near = panels(g, u0, u0 + 0.5, 1, PANEL_TOL).value;
    let far = panels(g, u0 + 0.5, upper, unit_panels(u0 + 0.5, upper), PANEL_TOL).value;
    seg + near + far
}

pub const BESSEL_MAX_ORDER: f64 = 50.0;
pub const BESSEL_MIN_ARG: f64 = 1e-3;
pub const BESSEL_MAX_ARG: f64 = 500.0;

/// `K_{ir}(y) = ∫₀^∞ e^{−y cosh t} cos(rt) dt` for `|r| ≤ 50`, `y ∈ [1e−3, 500]`.
pub fn bessel_k_im(r: f64, y: f64) -> Result<f64, AnalyticError> {
    if !(fabs(r) <= BESSEL_MAX_ORDER) {
        return Err(AnalyticError::OutOfRange { what: "order", value: r });
    }
    if !(BESSEL_MIN_ARG..=BESSEL_MAX_ARG).contains(&y) {
        return Err(AnalyticError::OutOfRange { what: "argument", value: y });
    }
    Ok(k_im_raw(r, y))
}

/// `W_{0,ir}(2y) = √(2y/π)·K_{ir}(y)`.
pub fn whittaker_w0(r: f64, y: f64) -> Result<f64, AnalyticError> {
    Ok(sqrt(2.0 * y / PI) * bessel_k_im(r, y)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmotReport {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
    /// Difference between the step-`h` and step-`2h` trapezoid sums.
    pub quad_error: f64,
}

const EMOT_STEP: f64 = 0.05;
const EMOT_HALF_WIDTH: i64 = 400;

/// Both sides of `∫₀^∞ e^{−pt − a/(2t)}·W_{0,ir/2}(a/t) dt = 2√(a/p)·K_{ir}(2√(ap))`.
pub fn emot_check(a: f64, p: f64, r: f64) -> Result<EmotReport, AnalyticError> {
    if !(a > 0.0 && p > 0.0) {
        return Err(AnalyticError::OutOfRange { what: "a or p", value: a.min(p) });
    }
    let rhs = 2.0 * sqrt(a / p) * bessel_k_im(r, 2.0 * sqrt(a * p))?;
    // t = e^s; the Gaussian factor peaks near t = √(a/p)
    let s0 = 0.5 * log(a / p);
    let g = |s: f64| {
        let t = exp(s);
        let z = a / (2.0 * t);
        if !(BESSEL_MIN_ARG..=700.0).contains(&z) || p * t > 750.0 {
            return 0.0;
        }
        exp(-p * t - z) * sqrt(a / (PI * t)) * k_im_raw(r / 2.0, z) * t
    };
    let mut even = 0.0;
    let mut odd = 0.0;
    for i in -EMOT_HALF_WIDTH..=EMOT_HALF_WIDTH {
        let v = g(s0 + i as f64 * EMOT_STEP);
        if i % 2 == 0 {
            even += v;
        } else {
            odd += v;
        }
    }
    let lhs = (even + odd) * EMOT_STEP;
    let coarse = even * 2.0 * EMOT_STEP;
    let quad_error = fabs(lhs - coarse);
    if quad_error > 1e-6 * fabs(lhs).max(1e-300) {
        return Err(AnalyticError::NoConvergence { estimate: quad_error });
    }
    Ok(EmotReport { lhs, rhs, rel_error: fabs(lhs - rhs) / fabs(rhs), quad_error })
}

/// Pairwise (tree) sum.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n if n <= 8 => xs.iter().sum(),
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyperbolicPoint {
    pub x: Vec<f64>,
    pub y: f64,
}

impl HyperbolicPoint {
    pub fn new(x: Vec<f64>, y: f64) -> Result<Self, AnalyticError> {
        if !(y > 0.0) || !y.is_finite() {
            return Err(AnalyticError::OutOfRange { what: "y", value: y });
        }
        Ok(Self { x, y })
    }

    pub fn distance_to(&self, other: &Self) -> f64 {
        let dx = self.x.iter().zip(&other.x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        sqrt(dx + (self.y - other.y) * (self.y - other.y))
    }
}

/// A unit positive line in `L ⊕ U` with positive last coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct GrassLine {
    pub w: Vec<f64>,
}

fn quad_form_f64(gram: &[Vec<i64>], x: &[f64]) -> f64 {
    let mut s = 0.0;
    for (i, row) in gram.iter().enumerate() {
        for (j, &g) in row.iter().enumerate() {
            s += x[i] * g as f64 * x[j];
        }
    }
    s / 2.0
}

fn s_times(gram: &[Vec<i64>], x: &[f64]) -> Vec<f64> {
    gram.iter().map(|row| row.iter().zip(x).map(|(&g, v)| g as f64 * v).sum()).collect()
}

/// `B_Q(w, w) = 2·w_first·w_last − w_midᵀ S w_mid`.
pub fn bq_norm(lattice: &GramLattice, w: &[f64]) -> f64 {
    let n = w.len();
    2.0 * w[0] * w[n - 1] - 2.0 * quad_form_f64(lattice.gram(), &w[1..n - 1])
}

/// `ν(x, y) = (1/√2)·(y + q(x)/y, −x/y, 1/y)`.
pub fn nu(lattice: &GramLattice, pt: &HyperbolicPoint) -> Result<GrassLine, AnalyticError> {
    let rank = lattice.rank();
    if pt.x.len() != rank {
        return Err(AnalyticError::DimensionMismatch { expected: rank, got: pt.x.len() });
    }
    let q = quad_form_f64(lattice.gram(), &pt.x);
    let y = pt.y;
    let mut w = Vec::with_capacity(rank + 2);
    w.push((y + q / y) / SQRT_2);
    w.extend(pt.x.iter().map(|xi| -xi / (y * SQRT_2)));
    w.push(1.0 / (y * SQRT_2));
    Ok(GrassLine { w })
}

/// Inverse of [`nu`] on any positive multiple of a unit line.
pub fn point_from_line(lattice: &GramLattice, w: &[f64]) -> Result<HyperbolicPoint, AnalyticError> {
    let rank = lattice.rank();
    if w.len() != rank + 2 {
        return Err(AnalyticError::DimensionMismatch { expected: rank + 2, got: w.len() });
    }
    let b = bq_norm(lattice, w);
    let last = w[rank + 1];
    if !(b > 0.0) || !(last > 0.0) {
        return Err(AnalyticError::NonPositiveLine);
    }
    let scale = sqrt(b);
    let y = scale / (SQRT_2 * last);
    let x = w[1..=rank].iter().map(|m| -SQRT_2 * y * m / scale).collect();
    HyperbolicPoint::new(x, y)
}

/// `Q = antidiag(1, −S, 1)` in block form.
pub fn q_matrix(lattice: &GramLattice) -> Vec<Vec<i64>> {
    let rank = lattice.rank();
    let d = rank + 2;
    let mut q = vec![vec![0i64; d]; d];
    q[0][d - 1] = 1;
    q[d - 1][0] = 1;
    for (i, row) in lattice.gram().iter().enumerate() {
        for (j, &g) in row.iter().enumerate() {
            q[i + 1][j + 1] = -g;
        }
    }
    q
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let d = b[0].len();
    a.iter()
        .map(|row| (0..d).map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum()).collect())
        .collect()
}

fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn mat_product(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    mat_mul(a, b)
}

/// `γᵀQγ = Q`, exactly.
pub fn preserves_q(lattice: &GramLattice, gamma: &[Vec<i64>]) -> bool {
    let d = lattice.rank() + 2;
    if gamma.len() != d || gamma.iter().any(|r| r.len() != d) {
        return false;
    }
    let q = q_matrix(lattice);
    mat_mul(&mat_mul(&transpose(gamma), &q), gamma) == q
}

pub fn gamma_action(lattice: &GramLattice, gamma: &[Vec<i64>], pt: &HyperbolicPoint) -> Result<HyperbolicPoint, AnalyticError> {
    if !preserves_q(lattice, gamma) {
        return Err(AnalyticError::NotOrthogonal);
    }
    let line = nu(lattice, pt)?;
    let mut w: Vec<f64> = gamma.iter().map(|row| row.iter().zip(&line.w).map(|(&g, v)| g as f64 * v).sum()).collect();
    if w[w.len() - 1] < 0.0 {
        w.iter_mut().for_each(|v| *v = -*v);
    }
    point_from_line(lattice, &w)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaElement {
    pub label: String,
    pub matrix: Vec<Vec<i64>>,
}

/// Swap of the first and last coordinates.
pub fn swap_element(rank: usize) -> Vec<Vec<i64>> {
    let d = rank + 2;
    let mut m = vec![vec![0i64; d]; d];
    m[0][d - 1] = 1;
    m[d - 1][0] = 1;
    for i in 1..d - 1 {
        m[i][i] = 1;
    }
    m
}

/// `n(λ) = [[1, λᵀS, ½λᵀSλ], [0, 1, λ], [0, 0, 1]]`.
pub fn translation_element(lattice: &GramLattice, lambda: &[i64]) -> Vec<Vec<i64>> {
    let rank = lattice.rank();
    let d = rank + 2;
    let mut m = vec![vec![0i64; d]; d];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    for j in 0..rank {
        m[0][j + 1] = lattice.inner(lambda, &unit(rank, j));
        m[j + 1][d - 1] = lambda[j];
    }
    m[0][d - 1] = lattice.double_norm(lambda) / 2;
    m
}

/// `diag(1, h, 1)` with `h` the reflection in a norm-one vector.
pub fn reflection_element(lattice: &GramLattice, root: &[i64]) -> Vec<Vec<i64>> {
    let rank = lattice.rank();
    let d = rank + 2;
    let mut m = vec![vec![0i64; d]; d];
    m[0][0] = 1;
    m[d - 1][d - 1] = 1;
    for j in 0..rank {
        let col = crate::lattice::root_reflection(lattice, root, &unit(rank, j));
        for i in 0..rank {
            m[i + 1][j + 1] = col[i];
        }
    }
    m
}

fn unit(rank: usize, j: usize) -> Vec<i64> {
    let mut e = vec![0i64; rank];
    e[j] = 1;
    e
}

/// A test set of integral isometries: the swap, translations by basis
/// vectors, and reflections in the simple roots.
pub fn gamma_s_elements(lattice: &GramLattice) -> Vec<GammaElement> {
    let rank = lattice.rank();
    let mut out = vec![GammaElement { label: "swap".into(), matrix: swap_element(rank) }];
    for j in 0..rank {
        out.push(GammaElement {
            label: alloc::format!("translation e{}", j + 1),
            matrix: translation_element(lattice, &unit(rank, j)),
        });
    }
    for (i, root) in crate::lattice::simple_roots(lattice).iter().enumerate() {
        out.push(GammaElement { label: alloc::format!("reflection r{}", i + 1), matrix: reflection_element(lattice, root) });
    }
    out
}

/// Numeric Maass data attached to an even unimodular lattice of rank `8n`.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericLift {
    lattice: GramLattice,
    n: u32,
    data: NumericMaassData,
}

impl NumericLift {
    pub fn new(lattice: GramLattice, data: NumericMaassData) -> Result<Self, AnalyticError> {
        if !lattice.is_even() || !lattice.is_unimodular() || !lattice.rank().is_multiple_of(8) {
            return Err(AnalyticError::NotEvenUnimodular);
        }
        let n = (lattice.rank() / 8) as u32;
        Ok(Self { lattice, n, data })
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    pub fn data(&self) -> &NumericMaassData {
        &self.data
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `A(λ) = |λ|·Σ_{d | content} d^{4n−2}·c(−q(λ)/d²)`.
    pub fn coefficient(&self, norm: u64, content: u64) -> Result<f64, AnalyticError> {
        let mut s = 0.0;
        for d in divisors(content) {
            let m = norm / (d * d);
            s += pow(d as f64, 4.0 * self.n as f64 - 2.0) * self.data.signed_c(-(m as i64))?;
        }
        Ok(sqrt(norm as f64) * s)
    }
}

struct Term {
    s_lambda: Vec<f64>,
    norm: u64,
    content: u64,
}

/// The vectors of `q(λ) ≤ bound`, one from each `±λ` pair.
pub struct LiftSeries<'a> {
    lift: &'a NumericLift,
    bound: u64,
    terms: Vec<Term>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LiftValue {
    pub value: f64,
    /// Largest absolute term, pairs combined.
    pub max_term: f64,
    /// Bound on the omitted shells, when the theta series is known.
    pub tail_bound: Option<f64>,
}

impl<'a> LiftSeries<'a> {
    pub fn new(lift: &'a NumericLift, bound: u64) -> Result<Self, AnalyticError> {
        if bound > lift.data.max_index() {
            return Err(CoeffError::SupportExceeded { index: bound, bound: lift.data.max_index() }.into());
        }
        let gram = lift.lattice.gram();
        let mut terms = Vec::new();
        lift.lattice.for_each_up_to_norm(bound, |v, norm| {
            if v.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0) {
                let vf: Vec<f64> = v.iter().map(|&c| c as f64).collect();
                terms.push(Term { s_lambda: s_times(gram, &vf), norm, content: content_of(v) });
            }
        });
        Ok(Self { lift, bound, terms })
    }

    pub fn pair_count(&self) -> usize {
        self.terms.len()
    }

    fn bessel_cache(&self, y: f64, effective_norms: impl Iterator<Item = u64>) -> Result<BTreeMap<u64, f64>, AnalyticError> {
        let r = self.lift.data.r;
        let mut cache = BTreeMap::new();
        for m in effective_norms {
            if let alloc::collections::btree_map::Entry::Vacant(e) = cache.entry(m) {
                e.insert(bessel_k_im(r, 4.0 * PI * sqrt(m as f64) * y)?);
            }
        }
        Ok(cache)
    }

    /// `Σ_λ A(λ)·y^{4n}·K_{ir}(4π|λ|y)·cos(2π·λᵀSx)`.
    pub fn evaluate(&self, pt: &HyperbolicPoint) -> Result<LiftValue, AnalyticError> {
        self.check_point(pt)?;
        let cache = self.bessel_cache(pt.y, self.terms.iter().map(|t| t.norm))?;
        let mut coeff_cache = BTreeMap::new();
        let yw = pow(pt.y, 4.0 * self.lift.n as f64);
        let mut vals = Vec::with_capacity(self.terms.len());
        let mut max_term = 0.0f64;
        for t in &self.terms {
            let a = match coeff_cache.get(&(t.norm, t.content)) {
                Some(&a) => a,
                None => {
                    let a = self.lift.coefficient(t.norm, t.content)?;
                    coeff_cache.insert((t.norm, t.content), a);
                    a
                }
            };
            let amp = 2.0 * a * yw * cache[&t.norm];
            max_term = max_term.max(fabs(amp));
            vals.push(amp * cos(2.0 * PI * dot(&t.s_lambda, &pt.x)));
        }
        Ok(LiftValue { value: pairwise_sum(&vals), max_term, tail_bound: self.tail_bound(pt.y) })
    }

    /// `y^{4n}·Σ_λ Σ_{m ≥ 1, m²q(λ) ≤ bound} c(−q(λ))·m^{4n−1}·|λ|·K_{ir}(4πm|λ|y)·cos(2πm·λᵀSx)`.
    pub fn resummed(&self, pt: &HyperbolicPoint) -> Result<f64, AnalyticError> {
        self.check_point(pt)?;
        let cache = self.bessel_cache(pt.y, self.terms.iter().map(|t| t.norm))?;
        let n4 = 4.0 * self.lift.n as f64;
        let yw = pow(pt.y, n4);
        let mut vals = Vec::new();
        for t in &self.terms {
            let c = self.lift.data.signed_c(-(t.norm as i64))?;
            let phase = dot(&t.s_lambda, &pt.x);
            let mut m = 1u64;
            while m * m * t.norm <= self.bound {
                let k = cache[&(m * m * t.norm)];
                vals.push(2.0 * c * pow(m as f64, n4 - 1.0) * sqrt(t.norm as f64) * k * cos(2.0 * PI * m as f64 * phase));
                m += 1;
            }
        }
        Ok(yw * pairwise_sum(&vals))
    }

    fn check_point(&self, pt: &HyperbolicPoint) -> Result<(), AnalyticError> {
        let rank = self.lift.lattice.rank();
        if pt.x.len() != rank {
            return Err(AnalyticError::DimensionMismatch { expected: rank, got: pt.x.len() });
        }
        Ok(())
    }

    /// `Σ_{m > bound} r(m)·Â(m)·y^{4n}·K₀(4π√m·y)` over forty further shells,
    /// with `|K_{ir}| ≤ K₀`, `r(m)` from the theta series `E₄ⁿ` (known for
    /// ranks 8 and 16) and `Â(m) = √m·σ_{4n−2}(⌊√m⌋)·max|c|`.
    fn tail_bound(&self, y: f64) -> Option<f64> {
        let n = self.lift.n;
        if n > 2 {
            return None;
        }
        let top = self.bound + 40;
        let theta = e4_power(n, top);
        let cmax = self.lift.data.coeffs.values().fold(0.0f64, |a, &c| a.max(fabs(c)));
        let n4 = 4.0 * n as f64;
        let mut tail = 0.0;
        for m in self.bound + 1..=top {
            let arg = 4.0 * PI * sqrt(m as f64) * y;
            if arg > BESSEL_MAX_ARG {
                break;
            }
            let dsum: f64 = (1..=(sqrt(m as f64) as u64)).map(|d| pow(d as f64, n4 - 2.0)).sum();
            tail += theta[m as usize] * sqrt(m as f64) * dsum * cmax * k_im_raw(0.0, arg.max(BESSEL_MIN_ARG));
        }
        Some(pow(y, n4) * tail)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Coefficients of `E₄ⁿ = (1 + 240·Σσ₃(m)qᵐ)ⁿ` up to `q^top`.
pub fn e4_power(n: u32, top: u64) -> Vec<f64> {
    let len = top as usize + 1;
    let mut e4 = vec![0.0; len];
    e4[0] = 1.0;
    for (m, v) in e4.iter_mut().enumerate().skip(1) {
        *v = 240.0 * crate::arith::sigma(m as u64, 3) as f64;
    }
    let mut out = vec![0.0; len];
    out[0] = 1.0;
    for _ in 0..n {
        let mut next = vec![0.0; len];
        for i in 0..len {
            for j in 0..len - i {
                next[i + j] += out[i] * e4[j];
            }
        }
        out = next;
    }
    out
}

pub fn evaluate_lift(lift: &NumericLift, pt: &HyperbolicPoint, bound: u64) -> Result<LiftValue, AnalyticError> {
    LiftSeries::new(lift, bound)?.evaluate(pt)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvarianceReport {
    pub value: f64,
    pub moved_value: f64,
    pub residual: f64,
}

/// `|F(pt) − F(γ·pt)|` over the largest included term.
pub fn invariance_residual(
    series: &LiftSeries<'_>,
    gamma: &[Vec<i64>],
    pt: &HyperbolicPoint,
) -> Result<InvarianceReport, AnalyticError> {
    let moved = gamma_action(&series.lift.lattice, gamma, pt)?;
    let a = series.evaluate(pt)?;
    let b = series.evaluate(&moved)?;
    let scale = a.max_term.max(b.max_term).max(f64::MIN_POSITIVE);
    Ok(InvarianceReport { value: a.value, moved_value: b.value, residual: fabs(a.value - b.value) / scale })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResummationReport {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
}

pub fn borcherds_resummation_check(
    lift: &NumericLift,
    pt: &HyperbolicPoint,
    bound: u64,
) -> Result<ResummationReport, AnalyticError> {
    let series = LiftSeries::new(lift, bound)?;
    let lhs = series.resummed(pt)?;
    let rhs = series.evaluate(pt)?;
    let rel_error = fabs(lhs - rhs.value) / fabs(rhs.value).max(rhs.max_term * 1e-300).max(f64::MIN_POSITIVE);
    Ok(ResummationReport { lhs, rhs: rhs.value, rel_error })
}
