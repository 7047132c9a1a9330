//! Exact arithmetic: big rationals, polynomials in a formal eigenvalue `Λ`,
//! and rational functions in `t` whose coefficients are such polynomials.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `base^exp` for a possibly negative exponent.
pub fn pow_rat(base: &Rat, exp: i64) -> Rat {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

/// `p^exp` as a rational, `exp` of either sign.
pub fn ppow(p: u64, exp: i64) -> Rat {
    pow_rat(&Rat::from_integer(BigInt::from(p)), exp)
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Shift both parts down to a representable range.
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let shift_n = (nb - 900).max(0) as usize;
    let shift_d = (db - 900).max(0) as usize;
    let n = (x.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (x.denom() >> shift_d).to_f64().unwrap_or(1.0);
    n / d * libm::exp2((shift_n as i64 - shift_d as i64) as f64)
}

/// Parse "a", "-a" or "a/b".
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}

/// Always "num/den", so that every serialized coefficient has the same shape.
pub fn rat_string(x: &Rat) -> String {
    let mut s = x.numer().to_string();
    s.push('/');
    s.push_str(&x.denom().to_string());
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactError {
    DivisionByZero,
    MalformedCoefficient,
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactError::DivisionByZero => f.write_str("division by the zero function"),
            ExactError::MalformedCoefficient => f.write_str("malformed rational coefficient"),
        }
    }
}

impl core::error::Error for ExactError {}

/// Polynomial in `Λ` with rational coefficients, lowest degree first.
/// The coefficient list never ends in a zero; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HeckeScalar {
    coeffs: Vec<Rat>,
}

impl HeckeScalar {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    /// The formal symbol `Λ`.
    pub fn lambda() -> Self {
        Self { coeffs: vec![Rat::zero(), Rat::one()] }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::constant(Rat::from_integer(n))
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// `c·Λ^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn as_rational(&self) -> Option<Rat> {
        match self.coeffs.len() {
            0 => Some(Rat::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + rat_to_f64(c))
    }

    /// Substitute `Λ ↦ g(Λ)`.
    pub fn compose(&self, g: &HeckeScalar) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * g) + &Self::constant(c.clone()))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Euclidean division over `Q`. Panics on a zero divisor.
    pub fn div_rem(&self, d: &HeckeScalar) -> (HeckeScalar, HeckeScalar) {
        let dl = d.leading().expect("division by zero polynomial").recip();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &dl;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &HeckeScalar) -> Option<HeckeScalar> {
        if d.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd over `Q`; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &HeckeScalar) -> HeckeScalar {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Coefficients as "num/den" strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rat_string).collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<Self, ExactError> {
        items
            .iter()
            .map(|s| parse_rat(s.as_ref()).ok_or(ExactError::MalformedCoefficient))
            .collect::<Result<Vec<_>, _>>()
            .map(Self::from_coeffs)
    }
}

impl fmt::Debug for HeckeScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for HeckeScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = a.is_one();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !unit {
                        write!(f, "{a}")?;
                    }
                    f.write_str("Λ")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl From<Rat> for HeckeScalar {
    fn from(c: Rat) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for HeckeScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a HeckeScalar> for &'a HeckeScalar {
    type Output = HeckeScalar;
    fn add(self, rhs: &HeckeScalar) -> HeckeScalar {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = long.coeffs.clone();
        for (o, s) in out.iter_mut().zip(&short.coeffs) {
            *o += s;
        }
        HeckeScalar::from_coeffs(out)
    }
}

impl<'a> Sub<&'a HeckeScalar> for &'a HeckeScalar {
    type Output = HeckeScalar;
    fn sub(self, rhs: &HeckeScalar) -> HeckeScalar {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = self.coeffs.clone();
        out.resize(n, Rat::zero());
        for (o, s) in out.iter_mut().zip(&rhs.coeffs) {
            *o -= s;
        }
        HeckeScalar::from_coeffs(out)
    }
}

impl<'a> Mul<&'a HeckeScalar> for &'a HeckeScalar {
    type Output = HeckeScalar;
    fn mul(self, rhs: &HeckeScalar) -> HeckeScalar {
        if self.is_zero() || rhs.is_zero() {
            return HeckeScalar::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        HeckeScalar::from_coeffs(out)
    }
}

impl Neg for &HeckeScalar {
    type Output = HeckeScalar;
    fn neg(self) -> HeckeScalar {
        HeckeScalar { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for HeckeScalar {
    type Output = HeckeScalar;
    fn neg(self) -> HeckeScalar {
        -&self
    }
}

macro_rules! owned_binops {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, rhs: &'a $t) -> $t { (&self).$m(rhs) }
        }
    )*};
}
owned_binops!(HeckeScalar, Add add, Sub sub, Mul mul);

impl AddAssign<&HeckeScalar> for HeckeScalar {
    fn add_assign(&mut self, rhs: &HeckeScalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&HeckeScalar> for HeckeScalar {
    fn sub_assign(&mut self, rhs: &HeckeScalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&HeckeScalar> for HeckeScalar {
    fn mul_assign(&mut self, rhs: &HeckeScalar) {
        *self = &*self * rhs;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(a: &HeckeScalar, b: &HeckeScalar, op: PolyOp) -> HeckeScalar {
    match op {
        PolyOp::Add => a + b,
        PolyOp::Sub => a - b,
        PolyOp::Mul => a * b,
    }
}

/// Polynomial in `t` with [`HeckeScalar`] coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TPoly {
    coeffs: Vec<HeckeScalar>,
}

impl TPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(HeckeScalar::one())
    }

    pub fn constant(c: HeckeScalar) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn t() -> Self {
        Self::from_coeffs(vec![HeckeScalar::zero(), HeckeScalar::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<HeckeScalar>) -> Self {
        while coeffs.last().is_some_and(HeckeScalar::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// `1 - a·t`.
    pub fn one_minus(a: HeckeScalar) -> Self {
        Self::from_coeffs(vec![HeckeScalar::one(), -a])
    }

    pub fn coeffs(&self) -> &[HeckeScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> HeckeScalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn leading(&self) -> &HeckeScalar {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn scale(&self, c: &HeckeScalar) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    fn shifted(&self, k: usize) -> Self {
        let mut coeffs = vec![HeckeScalar::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::from_coeffs(coeffs)
    }

    /// Monic gcd of all coefficients in `Q[Λ]`.
    pub fn content(&self) -> HeckeScalar {
        self.coeffs.iter().fold(HeckeScalar::zero(), |g, c| g.gcd(c))
    }

    fn exact_div_scalar(&self, c: &HeckeScalar) -> Option<Self> {
        self.coeffs
            .iter()
            .map(|a| a.exact_div(c))
            .collect::<Option<Vec<_>>>()
            .map(Self::from_coeffs)
    }

    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.exact_div_scalar(&self.content()).expect("content divides every coefficient")
    }

    /// `lc(d)^k · self` reduced modulo `d`, for some `k ≥ 0`.
    fn pseudo_rem(&self, d: &TPoly) -> TPoly {
        let dd = d.coeffs.len() - 1;
        let lc = d.leading().clone();
        let mut r = self.clone();
        while !r.is_zero() && r.coeffs.len() > dd {
            let shift = r.coeffs.len() - 1 - dd;
            let c = r.leading().clone();
            r = &r.scale(&lc) - &d.scale(&c).shifted(shift);
        }
        r
    }

    /// Gcd in `Q[Λ][t]`, unique up to a rational unit.
    pub fn gcd(&self, other: &TPoly) -> TPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let c = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.coeffs.len() < b.coeffs.len() {
            core::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.scale(&c)
    }

    /// Quotient when `d` divides `self` exactly in `Q[Λ][t]`.
    pub fn exact_div(&self, d: &TPoly) -> Option<TPoly> {
        if d.is_zero() {
            return None;
        }
        let dd = d.coeffs.len() - 1;
        let lc = d.leading();
        let mut r = self.clone();
        if r.coeffs.len() <= dd {
            return r.is_zero().then(TPoly::zero);
        }
        let mut q = vec![HeckeScalar::zero(); r.coeffs.len() - dd];
        while !r.is_zero() && r.coeffs.len() > dd {
            let shift = r.coeffs.len() - 1 - dd;
            let c = r.leading().exact_div(lc)?;
            r = &r - &d.scale(&c).shifted(shift);
            q[shift] = c;
        }
        r.is_zero().then(|| TPoly::from_coeffs(q))
    }

    /// Substitute a rational value for `Λ`.
    pub fn specialize(&self, x: &Rat) -> Vec<Rat> {
        self.coeffs.iter().map(|c| c.eval(x)).collect()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.coeffs.iter().map(HeckeScalar::to_strings).collect()
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{k}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a TPoly> for &'a TPoly {
    type Output = TPoly;
    fn add(self, rhs: &TPoly) -> TPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        TPoly::from_coeffs((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a TPoly> for &'a TPoly {
    type Output = TPoly;
    fn sub(self, rhs: &TPoly) -> TPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        TPoly::from_coeffs((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a TPoly> for &'a TPoly {
    type Output = TPoly;
    fn mul(self, rhs: &TPoly) -> TPoly {
        if self.is_zero() || rhs.is_zero() {
            return TPoly::zero();
        }
        let mut out = vec![HeckeScalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        TPoly::from_coeffs(out)
    }
}

impl Neg for &TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        TPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

owned_binops!(TPoly, Add add, Sub sub, Mul mul);

/// Quotient of two [`TPoly`]s kept in canonical form: coprime, with the
/// lowest nonzero coefficient of the denominator monic in `Λ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: TPoly,
    den: TPoly,
}

impl RationalFunction {
    pub fn new(num: TPoly, den: TPoly) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    pub fn from_poly(num: TPoly) -> Self {
        Self::canonical(num, TPoly::one())
    }

    pub fn zero() -> Self {
        Self { num: TPoly::zero(), den: TPoly::one() }
    }

    pub fn one() -> Self {
        Self { num: TPoly::one(), den: TPoly::one() }
    }

    /// `1 / den`.
    pub fn reciprocal_of(den: TPoly) -> Result<Self, ExactError> {
        Self::new(TPoly::one(), den)
    }

    pub fn numerator(&self) -> &TPoly {
        &self.num
    }

    pub fn denominator(&self) -> &TPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn canonical(num: TPoly, den: TPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g).expect("gcd divides numerator");
        let den = den.exact_div(&g).expect("gcd divides denominator");
        let low = den.coeffs.iter().find(|c| !c.is_zero()).expect("nonzero denominator");
        let s = HeckeScalar::constant(low.leading().expect("nonzero").recip());
        Self { num: num.scale(&s), den: den.scale(&s) }
    }

    /// Re-run canonicalization; a no-op on values built through the API.
    pub fn canonicalize(&self) -> Self {
        Self::canonical(self.num.clone(), self.den.clone())
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &RationalFunction) -> Result<Self, ExactError> {
        if rhs.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::canonical(&self.num * &rhs.den, &self.den * &rhs.num))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::canonical(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::canonical(&(&self.num * &rhs.den) - &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

owned_binops!(RationalFunction, Add add, Sub sub, Mul mul);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatFuncOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn ratfunc_arith(
    a: &RationalFunction,
    b: &RationalFunction,
    op: RatFuncOp,
) -> Result<RationalFunction, ExactError> {
    match op {
        RatFuncOp::Add => Ok(a + b),
        RatFuncOp::Sub => Ok(a - b),
        RatFuncOp::Mul => Ok(a * b),
        RatFuncOp::Div => a.div(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l() -> HeckeScalar {
        HeckeScalar::lambda()
    }

    fn c(n: i64) -> HeckeScalar {
        HeckeScalar::from_int(n)
    }

    #[test]
    fn symbol_square() {
        assert_eq!(poly_arith(&l(), &l(), PolyOp::Mul), HeckeScalar::monomial(int(1), 2));
    }

    #[test]
    fn add_constant_to_shifted_square() {
        let a = &(&l() * &l()) - &c(1);
        assert_eq!(poly_arith(&a, &c(1), PolyOp::Add), &l() * &l());
    }

    #[test]
    fn difference_of_squares_cancels() {
        let lhs = &(&l() - &c(1)) * &(&l() + &c(1));
        let rhs = &(&l() * &l()) - &c(1);
        let z = poly_arith(&lhs, &rhs, PolyOp::Sub);
        assert!(z.is_zero());
        assert!(z.coeffs().is_empty());
    }

    #[test]
    fn display_matches_conventional_form() {
        let mu = &HeckeScalar::monomial(int(16), 2) + &c(238);
        assert_eq!(mu.to_string(), "16Λ^2 + 238");
        assert_eq!((-&l()).to_string(), "-Λ");
        assert_eq!(HeckeScalar::constant(rat(-3, 4)).to_string(), "-3/4");
    }

    #[test]
    fn string_round_trip() {
        let p = HeckeScalar::from_coeffs(alloc::vec![rat(-7, 3), int(0), int(5)]);
        let s = p.to_strings();
        assert_eq!(s, ["-7/3", "0/1", "5/1"]);
        assert_eq!(HeckeScalar::from_strings(&s).unwrap(), p);
        assert!(HeckeScalar::from_strings(&["1/0"]).is_err());
    }

    #[test]
    fn scalar_gcd_is_monic() {
        let a = (&l() - &c(1)) * (&l() + &c(2)).scale(&int(3));
        let b = (&l() - &c(1)) * (&l() - &c(5));
        assert_eq!(a.gcd(&b), &l() - &c(1));
    }

    fn one_minus(a: i64) -> TPoly {
        TPoly::one_minus(c(a))
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        let a = RationalFunction::reciprocal_of(one_minus(1)).unwrap();
        let b = RationalFunction::from_poly(one_minus(1));
        assert_eq!(ratfunc_arith(&a, &b, RatFuncOp::Mul).unwrap(), RationalFunction::one());
    }

    #[test]
    fn self_difference_is_zero() {
        let a = RationalFunction::reciprocal_of(one_minus(1)).unwrap();
        assert!(ratfunc_arith(&a, &a, RatFuncOp::Sub).unwrap().is_zero());
    }

    #[test]
    fn product_of_geometric_factors() {
        let a = RationalFunction::reciprocal_of(one_minus(2)).unwrap();
        let b = RationalFunction::reciprocal_of(one_minus(3)).unwrap();
        let p = ratfunc_arith(&a, &b, RatFuncOp::Mul).unwrap();
        let expected = TPoly::from_coeffs(alloc::vec![c(1), c(-5), c(6)]);
        assert_eq!(p.numerator(), &TPoly::one());
        assert_eq!(p.denominator(), &expected);
    }

    #[test]
    fn division_by_zero_function() {
        let a = RationalFunction::one();
        assert_eq!(ratfunc_arith(&a, &RationalFunction::zero(), RatFuncOp::Div), Err(ExactError::DivisionByZero));
        assert!(RationalFunction::new(TPoly::one(), TPoly::zero()).is_err());
    }

    #[test]
    fn common_lambda_factor_is_removed() {
        // (Λ t) / (Λ t + Λ^2 t^2) = 1 / (1 + Λ t)
        let num = TPoly::from_coeffs(alloc::vec![c(0), l()]);
        let den = TPoly::from_coeffs(alloc::vec![c(0), l(), &l() * &l()]);
        let f = RationalFunction::new(num, den).unwrap();
        assert_eq!(f.numerator(), &TPoly::one());
        assert_eq!(f.denominator(), &TPoly::from_coeffs(alloc::vec![c(1), l()]));
    }

    #[test]
    fn quadratic_factor_cancels_against_itself() {
        let quad = TPoly::from_coeffs(alloc::vec![c(1), -(&(&l() * &l()) - &c(2)), c(1)]);
        let a = RationalFunction::reciprocal_of(&quad * &one_minus(4)).unwrap();
        let b = RationalFunction::from_poly(quad);
        let p = &a * &b;
        assert_eq!(p, RationalFunction::reciprocal_of(one_minus(4)).unwrap());
    }

    #[test]
    fn large_rational_to_f64() {
        let big = ppow(2, 1500) / ppow(3, 600);
        let expected = libm::exp(1500.0 * core::f64::consts::LN_2 - 600.0 * libm::log(3.0));
        assert!((rat_to_f64(&big) / expected - 1.0).abs() < 1e-12);
    }
}
