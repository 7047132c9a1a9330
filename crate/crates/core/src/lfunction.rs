//! Satake parameters and standard local L-factors of lifted forms, in the
//! formal variable `t = p^{−s}`.
//!
//! The pair `α^{±2}` coming from the input form is never materialized: it
//! is carried by the quadratic `1 − (λ² − 2)t + t²`.

use alloc::vec::Vec;

use crate::arith::is_prime;
use crate::exactnum::{ppow, rat_to_f64, HeckeScalar, RationalFunction, Rat, TPoly};
use crate::hecke::{HeckeError, LocalMode};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatakeData {
    pub mode: LocalMode,
    pub p: u64,
    /// `1 − (λ'² − 2)t + t²`, with `λ'` the unitarily normalized eigenvalue.
    pub quad: TPoly,
    /// Exponents `e` of the parameters `p^e`, descending.
    pub exponents: Vec<i64>,
    /// `λ'² / λ²`.
    pub lambda_scale: Rat,
}

impl SatakeData {
    pub fn parameter_count(&self) -> usize {
        self.exponents.len() + 2
    }

    pub fn n(&self) -> u32 {
        match self.mode {
            LocalMode::Maass { n } | LocalMode::Ors { n, .. } => n,
        }
    }
}

/// `1 − (λ² − 2)t + t²`.
pub fn sym2_quadratic(lambda_sq: &HeckeScalar) -> TPoly {
    let mid = -(lambda_sq - &HeckeScalar::from_int(2));
    TPoly::from_coeffs(alloc::vec![HeckeScalar::one(), mid, HeckeScalar::one()])
}

pub fn satake(mode: LocalMode, p: u64, lambda: &HeckeScalar) -> Result<SatakeData, HeckeError> {
    if !is_prime(p) {
        return Err(HeckeError::NotPrime(p));
    }
    let (top, scale) = match mode {
        // 4n−1, …, 1, 0, 0, −1, …, −(4n−1)
        LocalMode::Maass { n } => (4 * n as i64 - 1, Rat::from_integer(1.into())),
        LocalMode::Ors { n, kappa } => (4 * n as i64, ppow(p, -(kappa as i64 - 4 * n as i64 - 1))),
    };
    let mut exponents: Vec<i64> = (0..=top).rev().collect();
    exponents.extend((-top..=0).rev());
    let lambda_sq = (lambda * lambda).scale(&scale);
    Ok(SatakeData { mode, p, quad: sym2_quadratic(&lambda_sq), exponents, lambda_scale: scale })
}

/// `∏_e (1 − p^e t) · quad`, the Euler denominator read off the parameters.
pub fn satake_denominator(sd: &SatakeData) -> TPoly {
    sd.exponents
        .iter()
        .fold(sd.quad.clone(), |acc, &e| &acc * &TPoly::one_minus(HeckeScalar::constant(ppow(sd.p, e))))
}

/// `[(1 − t)·quad]^{−1}`.
pub fn sym2_factor(sd: &SatakeData) -> RationalFunction {
    let den = &TPoly::one_minus(HeckeScalar::one()) * &sd.quad;
    RationalFunction::reciprocal_of(den).expect("nonzero denominator")
}

/// The factored form: the symmetric-square factor times shifted zeta factors
/// `∏_j (1 − p^{top−j} t)^{−1}`, `j = 0..=2·top`.
pub fn local_l_factor(mode: LocalMode, p: u64, lambda: &HeckeScalar) -> Result<RationalFunction, HeckeError> {
    let sd = satake(mode, p, lambda)?;
    let top = match mode {
        LocalMode::Maass { n } => 4 * n as i64 - 1,
        LocalMode::Ors { n, .. } => 4 * n as i64,
    };
    let mut l = sym2_factor(&sd);
    for j in 0..=2 * top {
        let zeta = RationalFunction::reciprocal_of(TPoly::one_minus(HeckeScalar::constant(ppow(p, top - j))))
            .expect("nonzero denominator");
        l = &l * &zeta;
    }
    Ok(l)
}

/// Exact comparison of the parameter product with the denominator of `lf`.
pub fn verify_satake_product(sd: &SatakeData, lf: &RationalFunction) -> bool {
    let expected = RationalFunction::reciprocal_of(satake_denominator(sd)).expect("nonzero denominator");
    lf.numerator() == expected.numerator() && lf.denominator() == expected.denominator()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TemperednessReport {
    /// `|α|` for every Satake parameter, in the order of the exponent list
    /// followed by the pair from the quadratic.
    pub abs_values: Vec<f64>,
    pub non_tempered: bool,
}

/// Absolute values of all parameters at a numeric eigenvalue `λ`.
pub fn temperedness_report(sd: &SatakeData, lambda_numeric: f64) -> TemperednessReport {
    let p = sd.p as f64;
    let mut abs_values: Vec<f64> = sd.exponents.iter().map(|&e| libm::pow(p, e as f64)).collect();
    let lam = libm::fabs(lambda_numeric) * libm::sqrt(rat_to_f64(&sd.lambda_scale));
    let alpha_sq = if lam <= 2.0 {
        1.0
    } else {
        let a = (lam + libm::sqrt(lam * lam - 4.0)) / 2.0;
        a * a
    };
    abs_values.push(alpha_sq);
    abs_values.push(1.0 / alpha_sq);
    let non_tempered = abs_values.iter().any(|&x| libm::fabs(x - 1.0) > 1e-12);
    TemperednessReport { abs_values, non_tempered }
}
