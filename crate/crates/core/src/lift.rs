//! Fourier coefficients of the lift attached to lattice vectors.
//!
//! In the `b`-normalization the Maass coefficient of `λ` is
//! `A(λ) = ε·Σ_{d | d_λ} d^{4n−1}·b(q(λ)/d²)`, which equals
//! `|λ|·Σ_{d | d_λ} d^{4n−2}·c(−q(λ)/d²)` because `|λ|·c(m) = d·b(m)` for
//! `m = q(λ)/d²`. The holomorphic analogue is
//! `C(λ) = Σ_{d | d_λ} d^{κ−1}·c(q(λ)/d²)`.

use core::fmt;

use crate::arith::{divisors, gcd, is_prime};
use crate::coeffs::{CoeffError, CoefficientFamily, FamilyKind};
use crate::exactnum::{ppow, HeckeScalar};
use crate::lattice::{GramLattice, LatticeError, LatticeVector};

#[derive(Clone, Debug, PartialEq)]
pub enum LiftError {
    Coeff(CoeffError),
    Lattice(LatticeError),
    RankMismatch { rank: usize, n: u32 },
    NotEvenUnimodular,
    KindMismatch,
    WrongMode,
    KappaOutOfRange { kappa: u32, n: u32 },
    InvalidInvariants { norm: u64, content: u64 },
    NotPrime(u64),
}

impl fmt::Display for LiftError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiftError::Coeff(e) => write!(f, "{e}"),
            LiftError::Lattice(e) => write!(f, "{e}"),
            LiftError::RankMismatch { rank, n } => write!(f, "lattice rank {rank} is not 8n for n = {n}"),
            LiftError::NotEvenUnimodular => f.write_str("lattice must be even unimodular"),
            LiftError::KindMismatch => f.write_str("family kind does not match the lift mode"),
            LiftError::WrongMode => f.write_str("operation does not apply in this lift mode"),
            LiftError::KappaOutOfRange { kappa, n } => {
                write!(f, "weight parameter {kappa} must be even and exceed 8n+4 = {}", 8 * n + 4)
            }
            LiftError::InvalidInvariants { norm, content } => {
                write!(f, "no vector has norm {norm} and content {content}")
            }
            LiftError::NotPrime(p) => write!(f, "{p} is not prime"),
        }
    }
}

impl core::error::Error for LiftError {}

impl From<CoeffError> for LiftError {
    fn from(e: CoeffError) -> Self {
        LiftError::Coeff(e)
    }
}

impl From<LatticeError> for LiftError {
    fn from(e: LatticeError) -> Self {
        LiftError::Lattice(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Lift of a Maass form to `O(1, 8n+1)`.
    Maass,
    /// Holomorphic lift to `O(2, 8n+2)`.
    Ors,
}

#[derive(Clone, Debug)]
pub struct LiftContext {
    n: u32,
    lattice: GramLattice,
    family: CoefficientFamily,
    mode: Mode,
    kappa: Option<u32>,
}

impl LiftContext {
    pub fn maass(n: u32, lattice: GramLattice, family: CoefficientFamily) -> Result<Self, LiftError> {
        check_lattice(n, &lattice)?;
        if family.kind() != FamilyKind::MaassB {
            return Err(LiftError::KindMismatch);
        }
        Ok(Self { n, lattice, family, mode: Mode::Maass, kappa: None })
    }

    /// Holomorphic lift with an explicit weight parameter `κ`.
    pub fn ors(n: u32, lattice: GramLattice, family: CoefficientFamily, kappa: u32) -> Result<Self, LiftError> {
        check_lattice(n, &lattice)?;
        if family.weight().is_none() {
            return Err(LiftError::KindMismatch);
        }
        if !kappa.is_multiple_of(2) || kappa <= 8 * n + 4 {
            return Err(LiftError::KappaOutOfRange { kappa, n });
        }
        Ok(Self { n, lattice, family, mode: Mode::Ors, kappa: Some(kappa) })
    }

    /// Holomorphic lift with `κ = w + 4n` for an input form of weight `w`,
    /// the value for which the local coefficients are Hecke eigenvectors.
    pub fn ors_matched(n: u32, lattice: GramLattice, family: CoefficientFamily) -> Result<Self, LiftError> {
        let w = family.weight().ok_or(LiftError::KindMismatch)?;
        Self::ors(n, lattice, family, matched_kappa(w, n))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    pub fn family(&self) -> &CoefficientFamily {
        &self.family
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn kappa(&self) -> Option<u32> {
        self.kappa
    }

    /// Exponent of `‖β‖` in the scaling rule: `4n` for Maass, `κ` for holomorphic.
    pub fn scaling_exponent(&self) -> i64 {
        match self.mode {
            Mode::Maass => 4 * self.n as i64,
            Mode::Ors => self.kappa.expect("holomorphic context has κ") as i64,
        }
    }

    /// Coefficient from the invariants `(q(λ), d_λ)`, in either mode.
    pub fn coefficient_from_invariants(&self, norm: u64, content: u64) -> Result<HeckeScalar, LiftError> {
        match self.mode {
            Mode::Maass => maass_from_invariants(self, norm, content),
            Mode::Ors => ors_coefficient(self, norm, content),
        }
    }
}

/// `κ = w + 4n`.
pub fn matched_kappa(weight: u32, n: u32) -> u32 {
    weight + 4 * n
}

fn check_lattice(n: u32, lattice: &GramLattice) -> Result<(), LiftError> {
    if n == 0 || lattice.rank() != 8 * n as usize {
        return Err(LiftError::RankMismatch { rank: lattice.rank(), n });
    }
    if !(lattice.is_even() && lattice.is_unimodular()) {
        return Err(LiftError::NotEvenUnimodular);
    }
    Ok(())
}

fn check_invariants(norm: u64, content: u64) -> Result<(), LiftError> {
    if norm == 0 || content == 0 || !norm.is_multiple_of(content * content) {
        return Err(LiftError::InvalidInvariants { norm, content });
    }
    Ok(())
}

fn maass_from_invariants(ctx: &LiftContext, norm: u64, content: u64) -> Result<HeckeScalar, LiftError> {
    check_invariants(norm, content)?;
    let exp = 4 * ctx.n as i64 - 1;
    let mut acc = HeckeScalar::zero();
    for d in divisors(content) {
        let b = ctx.family.value(norm / (d * d))?;
        acc += &b.scale(&ppow(d, exp));
    }
    Ok(if ctx.family.parity() < 0 { -acc } else { acc })
}

/// `A(λ)` in the `b`-normalization.
pub fn lift_coefficient(ctx: &LiftContext, v: &LatticeVector) -> Result<HeckeScalar, LiftError> {
    if ctx.mode != Mode::Maass {
        return Err(LiftError::WrongMode);
    }
    maass_from_invariants(ctx, v.norm(), v.content())
}

/// `C(λ) = Σ_{d | content} d^{κ−1}·c(norm/d²)`; the vector enters only
/// through its invariants.
pub fn ors_coefficient(ctx: &LiftContext, norm: u64, content: u64) -> Result<HeckeScalar, LiftError> {
    let kappa = match (ctx.mode, ctx.kappa) {
        (Mode::Ors, Some(k)) => k as i64,
        _ => return Err(LiftError::WrongMode),
    };
    check_invariants(norm, content)?;
    let mut acc = HeckeScalar::zero();
    for d in divisors(content) {
        let c = ctx.family.value(norm / (d * d))?;
        acc += &c.scale(&ppow(d, kappa - 1));
    }
    Ok(acc)
}

/// `‖β‖^w·A(‖β‖^{−1}λ)` for `‖β‖ = p^{−beta_valuation}` and `w` the mode's
/// scaling exponent. A scaled vector that leaves the lattice gives 0.
pub fn adelic_scale(
    ctx: &LiftContext,
    v: &LatticeVector,
    beta_valuation: i32,
    p: u64,
) -> Result<HeckeScalar, LiftError> {
    if !is_prime(p) {
        return Err(LiftError::NotPrime(p));
    }
    let s = beta_valuation.unsigned_abs();
    let factor = p.checked_pow(s).ok_or(LiftError::InvalidInvariants { norm: v.norm(), content: v.content() })?;
    let (norm, content) = if beta_valuation >= 0 {
        (v.norm() * factor * factor, v.content() * factor)
    } else {
        if gcd(v.content(), factor) != factor {
            return Ok(HeckeScalar::zero());
        }
        (v.norm() / (factor * factor), v.content() / factor)
    };
    let a = ctx.coefficient_from_invariants(norm, content)?;
    Ok(a.scale(&ppow(p, -(beta_valuation as i64) * ctx.scaling_exponent())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{delta_fixture, formal_family};
    use crate::exactnum::int;
    use crate::lattice::{e8_gram, e8_power, norm_and_content};

    fn ctx(n: u32, parity: i64) -> LiftContext {
        LiftContext::maass(n, e8_power(n as usize), formal_family(2, &[], parity, 1 << 20).unwrap()).unwrap()
    }

    fn vec1(n: usize, scale: i64) -> LatticeVector {
        let mut x = alloc::vec![0i64; 8 * n];
        x[0] = scale;
        norm_and_content(&e8_power(n), &x).unwrap()
    }

    #[test]
    fn unit_vector_gives_parity() {
        assert!(lift_coefficient(&ctx(1, 1), &vec1(1, 1)).unwrap().is_one());
        assert_eq!(lift_coefficient(&ctx(1, -1), &vec1(1, 1)).unwrap(), HeckeScalar::from_int(-1));
        assert!(lift_coefficient(&ctx(2, 1), &vec1(2, 1)).unwrap().is_one());
    }

    #[test]
    fn divisor_sum_at_content_two() {
        let l = HeckeScalar::lambda();
        let expected = &(&l * &l) + &HeckeScalar::from_int(7);
        assert_eq!(lift_coefficient(&ctx(1, 1), &vec1(1, 2)).unwrap(), expected);
        assert_eq!(lift_coefficient(&ctx(1, -1), &vec1(1, 2)).unwrap(), -expected);
    }

    #[test]
    fn ors_examples_at_kappa_14() {
        let c = LiftContext::ors(1, e8_gram(), delta_fixture(100), 14).unwrap();
        assert!(ors_coefficient(&c, 1, 1).unwrap().is_one());
        assert_eq!(ors_coefficient(&c, 4, 2).unwrap(), HeckeScalar::from_int(6720));
        assert_eq!(ors_coefficient(&c, 2, 1).unwrap(), HeckeScalar::from_int(-24));
        assert!(matches!(ors_coefficient(&c, 2, 2), Err(LiftError::InvalidInvariants { .. })));
    }

    #[test]
    fn context_validation() {
        let fam = formal_family(2, &[], 1, 100).unwrap();
        assert!(matches!(LiftContext::maass(2, e8_gram(), fam.clone()), Err(LiftError::RankMismatch { .. })));
        assert!(matches!(LiftContext::ors(1, e8_gram(), fam, 14), Err(LiftError::KindMismatch)));
        assert!(matches!(
            LiftContext::ors(1, e8_gram(), delta_fixture(10), 12),
            Err(LiftError::KappaOutOfRange { .. })
        ));
        assert_eq!(LiftContext::ors_matched(1, e8_gram(), delta_fixture(10)).unwrap().kappa(), Some(16));
    }

    #[test]
    fn adelic_scaling_rules() {
        let c = ctx(1, 1);
        let v = vec1(1, 1);
        assert_eq!(adelic_scale(&c, &v, 0, 2).unwrap(), lift_coefficient(&c, &v).unwrap());
        assert!(adelic_scale(&c, &v, -1, 2).unwrap().is_zero());
        let l = HeckeScalar::lambda();
        let expected = (&(&l * &l) + &HeckeScalar::from_int(7)).scale(&crate::exactnum::rat(1, 16));
        assert_eq!(adelic_scale(&c, &v, 1, 2).unwrap(), expected);
        let w = vec1(1, 2);
        assert_eq!(adelic_scale(&c, &w, -1, 2).unwrap(), HeckeScalar::constant(int(16)));
    }
}
