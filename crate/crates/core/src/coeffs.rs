//! Hecke-eigen coefficient families.
//!
//! Maass families are stored as `b(n) = √n·c(n)`. In that normalization the
//! one-step relation `c(pn) = p^{-1/2}λ_p c(n) − p^{-1} c(n/p)` becomes
//! `b(pn) = λ_p b(n) − b(n/p)`, so every value is a polynomial in the
//! eigenvalues with rational coefficients. Holomorphic families keep the
//! usual `c(n)` with `c(p^{j+1}) = λ_p c(p^j) − p^{w−1} c(p^{j−1})`.
//!
//! Values are produced on demand from the prime factorization of the index,
//! so indices far beyond any table (e.g. `5^25·2`) cost only a short recursion.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::arith::is_prime;
use crate::exactnum::{ppow, rat_to_f64, HeckeScalar};

#[derive(Clone, Debug, PartialEq)]
pub enum CoeffError {
    MissingEigenvalue(u64),
    SupportExceeded { index: u64, bound: u64 },
    ZeroIndex,
    NotPrime(u64),
    BadParity(i64),
    WrongKind,
    Parse { line: usize, message: String },
    MissingHeader(&'static str),
    MissingFirstCoefficient,
    FirstCoefficient { value: f64, precision: f64 },
}

impl fmt::Display for CoeffError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffError::MissingEigenvalue(p) => write!(f, "no eigenvalue supplied for the prime {p}"),
            CoeffError::SupportExceeded { index, bound } => {
                write!(f, "index {index} exceeds the family support bound {bound}")
            }
            CoeffError::ZeroIndex => f.write_str("coefficient index must be positive"),
            CoeffError::NotPrime(p) => write!(f, "{p} is not prime"),
            CoeffError::BadParity(e) => write!(f, "parity must be +1 or -1, got {e}"),
            CoeffError::WrongKind => f.write_str("operation does not apply to this kind of family"),
            CoeffError::Parse { line, message } => write!(f, "line {line}: {message}"),
            CoeffError::MissingHeader(h) => write!(f, "missing header line '# {h} ...'"),
            CoeffError::MissingFirstCoefficient => f.write_str("coefficient c(1) is missing"),
            CoeffError::FirstCoefficient { value, precision } => {
                write!(f, "c(1) = {value} deviates from 1 by more than the declared precision {precision}")
            }
        }
    }
}

impl core::error::Error for CoeffError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// Maass form in the `b(n) = √n·c(n)` normalization.
    MaassB,
    /// Holomorphic eigenform of the given weight.
    Holomorphic { weight: u32 },
}

#[derive(Clone, Debug)]
pub struct CoefficientFamily {
    kind: FamilyKind,
    parity: i8,
    eigenvalues: BTreeMap<u64, HeckeScalar>,
    support_bound: u64,
    // Values computed directly rather than from eigenvalues; index 0 unused.
    table: Vec<HeckeScalar>,
}

impl CoefficientFamily {
    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    /// `ε` with `c(−n) = ε·c(n)`; always +1 for holomorphic families.
    pub fn parity(&self) -> i8 {
        self.parity
    }

    pub fn support_bound(&self) -> u64 {
        self.support_bound
    }

    pub fn eigenvalues(&self) -> &BTreeMap<u64, HeckeScalar> {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, p: u64) -> Result<&HeckeScalar, CoeffError> {
        self.eigenvalues.get(&p).ok_or(CoeffError::MissingEigenvalue(p))
    }

    pub fn weight(&self) -> Option<u32> {
        match self.kind {
            FamilyKind::MaassB => None,
            FamilyKind::Holomorphic { weight } => Some(weight),
        }
    }

    /// Same data with a different support bound.
    pub fn with_support(&self, bound: u64) -> Self {
        Self { support_bound: bound, ..self.clone() }
    }

    /// `b(n)` or `c(n)` for `n ≥ 1`.
    pub fn value(&self, n: u64) -> Result<HeckeScalar, CoeffError> {
        if n == 0 {
            return Err(CoeffError::ZeroIndex);
        }
        if n > self.support_bound {
            return Err(CoeffError::SupportExceeded { index: n, bound: self.support_bound });
        }
        if let Some(v) = self.table.get(n as usize) {
            return Ok(v.clone());
        }
        let mut rest = n;
        let mut acc = HeckeScalar::one();
        for &p in self.eigenvalues.keys() {
            if rest == 1 {
                break;
            }
            let mut e = 0u32;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            if e > 0 {
                acc = &acc * &self.prime_power(p, e)?;
            }
        }
        if rest > 1 {
            return Err(CoeffError::MissingEigenvalue(smallest_factor(rest)));
        }
        Ok(acc)
    }

    /// Value at a signed index: `c(−n) = ε·c(n)`; zero at index 0.
    pub fn signed_value(&self, n: i64) -> Result<HeckeScalar, CoeffError> {
        let v = self.value(n.unsigned_abs())?;
        Ok(if n < 0 && self.parity < 0 { -v } else { v })
    }

    /// Value at `p^e` from the three-term recursion.
    pub fn prime_power(&self, p: u64, e: u32) -> Result<HeckeScalar, CoeffError> {
        let lam = self.eigenvalue(p)?;
        let shift = match self.kind {
            FamilyKind::MaassB => HeckeScalar::one(),
            FamilyKind::Holomorphic { weight } => HeckeScalar::constant(ppow(p, weight as i64 - 1)),
        };
        let (mut prev, mut cur) = (HeckeScalar::zero(), HeckeScalar::one());
        for _ in 0..e {
            let next = &(lam * &cur) - &(&shift * &prev);
            prev = cur;
            cur = next;
        }
        Ok(cur)
    }
}

fn smallest_factor(n: u64) -> u64 {
    let mut d = 2u64;
    while d <= 1_000_000 && d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    n
}

fn check_parity(parity: i64) -> Result<i8, CoeffError> {
    match parity {
        1 => Ok(1),
        -1 => Ok(-1),
        other => Err(CoeffError::BadParity(other)),
    }
}

/// Maass family with the given Hecke eigenvalues. Values are produced lazily;
/// an index needing a prime without an eigenvalue fails with
/// [`CoeffError::MissingEigenvalue`] when it is read.
pub fn synthetic_family(
    eigenvalues: BTreeMap<u64, HeckeScalar>,
    parity: i64,
    bound: u64,
) -> Result<CoefficientFamily, CoeffError> {
    let parity = check_parity(parity)?;
    if bound == 0 {
        return Err(CoeffError::ZeroIndex);
    }
    if let Some(&p) = eigenvalues.keys().find(|&&p| !is_prime(p)) {
        return Err(CoeffError::NotPrime(p));
    }
    Ok(CoefficientFamily { kind: FamilyKind::MaassB, parity, eigenvalues, support_bound: bound, table: Vec::new() })
}

/// Maass family with the formal eigenvalue `Λ` at `p`, rational elsewhere.
pub fn formal_family(
    p: u64,
    others: &[(u64, HeckeScalar)],
    parity: i64,
    bound: u64,
) -> Result<CoefficientFamily, CoeffError> {
    let mut eig: BTreeMap<u64, HeckeScalar> = others.iter().cloned().collect();
    eig.insert(p, HeckeScalar::lambda());
    synthetic_family(eig, parity, bound)
}

/// Relations between `b(p²n)`, `b(n)`, `b(n/p)` and `b(n/p²)`; true when
/// every relation that applies to `n` holds exactly.
pub fn verify_maass_relations(fam: &CoefficientFamily, p: u64, n: u64) -> Result<bool, CoeffError> {
    if fam.kind != FamilyKind::MaassB {
        return Err(CoeffError::WrongKind);
    }
    let lam = fam.eigenvalue(p)?;
    let lam2 = lam * lam;
    let lhs = fam.value(p * p * n)?;
    let bn = fam.value(n)?;
    let mut first = &(&lam2 - &HeckeScalar::one()) * &bn;
    if n.is_multiple_of(p) {
        first = &first - &(lam * &fam.value(n / p)?);
    }
    let mut ok = lhs == first;
    if n.is_multiple_of(p * p) {
        let second = &(&(&lam2 - &HeckeScalar::from_int(2)) * &bn) - &fam.value(n / (p * p))?;
        ok &= lhs == second;
    }
    Ok(ok)
}

/// Holomorphic analogue of [`verify_maass_relations`] with
/// `P = p^{w−1}` for weight `w`.
pub fn verify_holomorphic_relations(fam: &CoefficientFamily, p: u64, m: u64) -> Result<bool, CoeffError> {
    let FamilyKind::Holomorphic { weight } = fam.kind else {
        return Err(CoeffError::WrongKind);
    };
    let lam = fam.eigenvalue(p)?;
    let lam2 = lam * lam;
    let big_p = HeckeScalar::constant(ppow(p, weight as i64 - 1));
    let lhs = fam.value(p * p * m)?;
    let cm = fam.value(m)?;
    let mut first = &(&lam2 - &big_p) * &cm;
    if m.is_multiple_of(p) {
        first = &first - &(&(&big_p * lam) * &fam.value(m / p)?);
    }
    let mut ok = lhs == first;
    if m.is_multiple_of(p * p) {
        let two_p = &big_p + &big_p;
        let second = &(&(&lam2 - &two_p) * &cm) - &(&(&big_p * &big_p) * &fam.value(m / (p * p))?);
        ok &= lhs == second;
    }
    Ok(ok)
}

/// Largest index whose Ramanujan `τ` is expanded directly from the eta
/// product; larger indices use the Hecke recursion.
pub const TAU_TABLE_CAP: u64 = 2000;

/// `τ(1..=n)` from `q·∏(1−q^m)^24`, using Jacobi's identity
/// `∏(1−q^m)^3 = Σ (−1)^k (2k+1) q^{k(k+1)/2}` and three squarings.
pub fn tau_table(n: usize) -> Vec<BigInt> {
    let len = n;
    let mut cube = vec![0i128; len];
    let mut k = 0usize;
    while k * (k + 1) / 2 < len {
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        cube[k * (k + 1) / 2] = sign * (2 * k as i128 + 1);
        k += 1;
    }
    let mut s = cube;
    for _ in 0..3 {
        s = square_truncated(&s);
    }
    let mut out = vec![BigInt::from(0)];
    out.extend(s.iter().map(|&c| BigInt::from(c)));
    out
}

fn square_truncated(a: &[i128]) -> Vec<i128> {
    let n = a.len();
    let mut out = vec![0i128; n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in a[..n - i].iter().enumerate() {
            if y != 0 {
                let t = x.checked_mul(y).expect("eta product coefficient overflow");
                out[i + j] = out[i + j].checked_add(t).expect("eta product coefficient overflow");
            }
        }
    }
    out
}

/// The discriminant form `Δ` of weight 12.
pub fn delta_fixture(bound: u64) -> CoefficientFamily {
    let cap = bound.clamp(2, TAU_TABLE_CAP) as usize;
    let tau = tau_table(cap);
    let eigenvalues = (2..=cap as u64)
        .filter(|&p| is_prime(p))
        .map(|p| (p, HeckeScalar::from_bigint(tau[p as usize].clone())))
        .collect();
    let table = tau.into_iter().take(bound.min(cap as u64) as usize + 1).map(HeckeScalar::from_bigint).collect();
    CoefficientFamily {
        kind: FamilyKind::Holomorphic { weight: 12 },
        parity: 1,
        eigenvalues,
        support_bound: bound,
        table,
    }
}

/// Real coefficients of a Maass form, as ingested from a file or decimalized
/// from a synthetic family.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericMaassData {
    pub r: f64,
    pub parity: i8,
    pub precision: f64,
    pub coeffs: BTreeMap<u64, f64>,
}

impl NumericMaassData {
    pub fn c(&self, n: u64) -> Result<f64, CoeffError> {
        let bound = self.coeffs.keys().next_back().copied().unwrap_or(0);
        self.coeffs.get(&n).copied().ok_or(CoeffError::SupportExceeded { index: n, bound })
    }

    /// `c(n)` at a signed index, `c(−n) = ε·c(n)`.
    pub fn signed_c(&self, n: i64) -> Result<f64, CoeffError> {
        let v = self.c(n.unsigned_abs())?;
        Ok(if n < 0 { self.parity as f64 * v } else { v })
    }

    pub fn max_index(&self) -> u64 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    /// `c(n) = b(n)/√n` for `n ≤ bound`, with `Λ` replaced by `lambda_value`.
    pub fn from_family(fam: &CoefficientFamily, lambda_value: f64, r: f64, bound: u64) -> Result<Self, CoeffError> {
        if fam.kind != FamilyKind::MaassB {
            return Err(CoeffError::WrongKind);
        }
        let mut coeffs = BTreeMap::new();
        for n in 1..=bound {
            let b = fam.value(n)?.eval_f64(lambda_value);
            coeffs.insert(n, b / libm::sqrt(n as f64));
        }
        Ok(Self { r, parity: fam.parity, precision: 0.0, coeffs })
    }
}

/// Parse the text format
///
/// ```text
/// # r 13.7797513519
/// # parity +1
/// # precision 1e-10
/// 1 1.0
/// 2 1.549304477941
/// ```
///
/// Body lines may appear in any order; other `#` lines are comments.
pub fn parse_numeric_maass(text: &str) -> Result<NumericMaassData, CoeffError> {
    let mut r = None;
    let mut parity = None;
    let mut precision = 1e-8;
    let mut coeffs = BTreeMap::new();
    let err = |line: usize, message: &str| CoeffError::Parse { line, message: message.into() };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(h) = t.strip_prefix('#') {
            let mut parts = h.split_whitespace();
            let key = parts.next();
            let val = parts.next();
            match (key, val) {
                (Some("r"), Some(v)) => r = Some(v.parse::<f64>().map_err(|_| err(line, "bad r value"))?),
                (Some("parity"), Some(v)) => {
                    let p: i64 = v.trim_start_matches('+').parse().map_err(|_| err(line, "bad parity"))?;
                    parity = Some(check_parity(p)?);
                }
                (Some("precision"), Some(v)) => {
                    precision = v.parse::<f64>().map_err(|_| err(line, "bad precision"))?;
                }
                _ => {}
            }
            continue;
        }
        let mut parts = t.split_whitespace();
        let (Some(n), Some(c), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err(line, "expected '<n> <c(n)>'"));
        };
        let n: u64 = n.parse().map_err(|_| err(line, "bad index"))?;
        let c: f64 = c.parse().map_err(|_| err(line, "bad coefficient"))?;
        if n == 0 {
            return Err(err(line, "index must be positive"));
        }
        if coeffs.insert(n, c).is_some() {
            return Err(err(line, "duplicate index"));
        }
    }
    let r = r.ok_or(CoeffError::MissingHeader("r"))?;
    let parity = parity.ok_or(CoeffError::MissingHeader("parity"))?;
    let c1 = *coeffs.get(&1).ok_or(CoeffError::MissingFirstCoefficient)?;
    if (c1 - 1.0).abs() > precision.max(f64::EPSILON) {
        return Err(CoeffError::FirstCoefficient { value: c1, precision });
    }
    Ok(NumericMaassData { r, parity, precision, coeffs })
}

/// Float view of an exact value, for reporting.
pub fn scalar_to_f64(x: &HeckeScalar, lambda_value: f64) -> f64 {
    match x.as_rational() {
        Some(c) => rat_to_f64(&c),
        None => x.eval_f64(lambda_value),
    }
}
