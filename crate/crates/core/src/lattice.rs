//! Positive definite integral lattices given by a Gram matrix, with
//! enumeration by norm and p-local invariants of vectors.
//!
//! `S` is the bilinear matrix, so the norm is `q(v) = ½·vᵀSv`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{gcd, is_prime, valuation};
use crate::exactnum::{rat_to_f64, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeError {
    NotSquare,
    NotSymmetric,
    NotPositiveDefinite,
    NotEven,
    DimensionMismatch { expected: usize, got: usize },
    ZeroVector,
    NotPrime(u64),
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::NotSquare => f.write_str("Gram matrix is not square"),
            LatticeError::NotSymmetric => f.write_str("Gram matrix is not symmetric"),
            LatticeError::NotPositiveDefinite => f.write_str("Gram matrix is not positive definite"),
            LatticeError::NotEven => f.write_str("lattice is not even"),
            LatticeError::DimensionMismatch { expected, got } => {
                write!(f, "vector has length {got}, lattice rank is {expected}")
            }
            LatticeError::ZeroVector => f.write_str("content of the zero vector is undefined"),
            LatticeError::NotPrime(p) => write!(f, "{p} is not prime"),
        }
    }
}

impl core::error::Error for LatticeError {}

#[derive(Clone, Debug)]
pub struct GramLattice {
    rank: usize,
    gram: Vec<Vec<i64>>,
    even: bool,
    unimodular: bool,
    // Reverse-order LDL data: vᵀSv = Σ_i diag[i]·(v_i + Σ_{j<i} upper[j][i]·v_j)².
    diag: Vec<f64>,
    upper: Vec<Vec<f64>>,
}

impl PartialEq for GramLattice {
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram && self.even == other.even && self.unimodular == other.unimodular
    }
}

impl Eq for GramLattice {}

impl GramLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let rank = gram.len();
        if rank == 0 || gram.iter().any(|row| row.len() != rank) {
            return Err(LatticeError::NotSquare);
        }
        for i in 0..rank {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
        }
        let (d, u) = reverse_ldl(&gram).ok_or(LatticeError::NotPositiveDefinite)?;
        let det: Rat = d.iter().product();
        let even = (0..rank).all(|i| gram[i][i] % 2 == 0);
        let unimodular = det.abs().is_one();
        Ok(Self {
            rank,
            even,
            unimodular,
            diag: d.iter().map(rat_to_f64).collect(),
            upper: u.iter().map(|row| row.iter().map(rat_to_f64).collect()).collect(),
            gram,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn is_unimodular(&self) -> bool {
        self.unimodular
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        bareiss_det(&self.gram)
    }

    /// `aᵀSb`.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0i64;
        for (i, row) in self.gram.iter().enumerate() {
            if a[i] == 0 {
                continue;
            }
            let r: i64 = row.iter().zip(b).map(|(g, x)| g * x).sum();
            s += a[i] * r;
        }
        s
    }

    /// `vᵀSv`, twice the norm.
    pub fn double_norm(&self, v: &[i64]) -> i64 {
        self.inner(v, v)
    }

    /// Visit every vector `v` with `vᵀSv ≤ 2·bound`, lexicographically.
    pub fn for_each_up_to_norm<F: FnMut(&[i64], u64)>(&self, bound: u64, mut visit: F) {
        let mut walker = Walker::new(self, 2 * bound as i64);
        walker.run(0, 0.0, &mut |x: &[i64]| {
            let dn = self.double_norm(x);
            if dn <= 2 * bound as i64 {
                visit(x, (dn / 2) as u64);
            }
        }, false);
    }

    /// Visit every vector of norm exactly `m`, lexicographically.
    pub fn for_each_with_norm<F: FnMut(&[i64])>(&self, m: u64, mut visit: F) {
        let target = 2 * m as i64;
        let mut walker = Walker::new(self, target);
        walker.run(0, 0.0, &mut |x: &[i64]| {
            if self.double_norm(x) == target {
                visit(x);
            }
        }, true);
    }
}

fn reverse_ldl(s: &[Vec<i64>]) -> Option<(Vec<Rat>, Vec<Vec<Rat>>)> {
    let n = s.len();
    let mut d = vec![Rat::zero(); n];
    let mut u = vec![vec![Rat::zero(); n]; n];
    for i in (0..n).rev() {
        let mut di = Rat::from_integer(BigInt::from(s[i][i]));
        for k in i + 1..n {
            di -= &u[i][k] * &u[i][k] * &d[k];
        }
        if !di.is_positive() {
            return None;
        }
        for j in 0..i {
            let mut v = Rat::from_integer(BigInt::from(s[j][i]));
            for k in i + 1..n {
                v -= &u[j][k] * &u[i][k] * &d[k];
            }
            u[j][i] = v / &di;
        }
        u[i][i] = Rat::one();
        d[i] = di;
    }
    Some((d, u))
}

fn bareiss_det(s: &[Vec<i64>]) -> BigInt {
    let n = s.len();
    let mut a: Vec<Vec<BigInt>> = s.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

struct Walker<'a> {
    lat: &'a GramLattice,
    bound: f64,
    x: Vec<i64>,
}

const SLACK: f64 = 1e-7;

impl<'a> Walker<'a> {
    fn new(lat: &'a GramLattice, double_bound: i64) -> Self {
        Self { lat, bound: double_bound as f64, x: vec![0; lat.rank] }
    }

    fn run(&mut self, i: usize, partial: f64, leaf: &mut dyn FnMut(&[i64]), exact_last: bool) {
        let n = self.lat.rank;
        let d = self.lat.diag[i];
        let mut c = 0.0;
        for j in 0..i {
            c -= self.lat.upper[j][i] * self.x[j] as f64;
        }
        let rem = self.bound - partial;
        if rem < -SLACK {
            return;
        }
        let r = libm::sqrt(rem.max(0.0) / d);
        if i + 1 == n && exact_last {
            // Only the one or two roots of d·(x − c)² = rem can land on the target.
            let lo = libm::round(c - r) as i64;
            let hi = libm::round(c + r) as i64;
            self.x[i] = lo;
            leaf(&self.x);
            if hi != lo {
                self.x[i] = hi;
                leaf(&self.x);
            }
            return;
        }
        let lo = libm::ceil(c - r - SLACK) as i64;
        let hi = libm::floor(c + r + SLACK) as i64;
        for v in lo..=hi {
            self.x[i] = v;
            let t = v as f64 - c;
            let next = partial + d * t * t;
            if i + 1 == n {
                leaf(&self.x);
            } else {
                self.run(i + 1, next, leaf, exact_last);
            }
        }
        self.x[i] = 0;
    }
}

/// The E8 root lattice in the simple-root basis (Bourbaki numbering):
/// 2 on the diagonal, −1 for each edge of the Dynkin diagram.
pub fn e8_gram() -> GramLattice {
    const EDGES: [(usize, usize); 7] = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
    let mut g = vec![vec![0i64; 8]; 8];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in EDGES {
        g[a][b] = -1;
        g[b][a] = -1;
    }
    GramLattice::new(g).expect("E8 Gram matrix is positive definite")
}

pub fn direct_sum(a: &GramLattice, b: &GramLattice) -> GramLattice {
    let n = a.rank + b.rank;
    let mut g = vec![vec![0i64; n]; n];
    for i in 0..a.rank {
        g[i][..a.rank].copy_from_slice(&a.gram[i]);
    }
    for i in 0..b.rank {
        g[a.rank + i][a.rank..].copy_from_slice(&b.gram[i]);
    }
    let mut out = GramLattice::new(g).expect("block sum of positive definite forms");
    out.even = a.even && b.even;
    out.unimodular = a.unimodular && b.unimodular;
    out
}

/// `E8 ⊕ … ⊕ E8` with `n ≥ 1` summands.
pub fn e8_power(n: usize) -> GramLattice {
    assert!(n >= 1, "need at least one E8 summand");
    let e8 = e8_gram();
    (1..n).fold(e8.clone(), |acc, _| direct_sum(&acc, &e8))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    coords: Vec<i64>,
    norm: u64,
    content: u64,
}

impl LatticeVector {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// `q(v) = ½·vᵀSv`.
    pub fn norm(&self) -> u64 {
        self.norm
    }

    /// Gcd of the nonzero coordinates.
    pub fn content(&self) -> u64 {
        self.content
    }

    pub fn neg(&self) -> Self {
        Self { coords: self.coords.iter().map(|c| -c).collect(), ..*self }
    }
}

pub fn content_of(coords: &[i64]) -> u64 {
    coords.iter().fold(0u64, |g, &c| gcd(g, c.unsigned_abs()))
}

pub fn norm_and_content(lat: &GramLattice, coords: &[i64]) -> Result<LatticeVector, LatticeError> {
    if coords.len() != lat.rank {
        return Err(LatticeError::DimensionMismatch { expected: lat.rank, got: coords.len() });
    }
    if !lat.even {
        return Err(LatticeError::NotEven);
    }
    let content = content_of(coords);
    if content == 0 {
        return Err(LatticeError::ZeroVector);
    }
    Ok(LatticeVector { coords: coords.to_vec(), norm: (lat.double_norm(coords) / 2) as u64, content })
}

/// All vectors of norm `m`, in lexicographic order of coordinates.
pub fn enumerate_by_norm(lat: &GramLattice, m: u64) -> Vec<LatticeVector> {
    assert!(lat.even, "enumeration by norm needs an even lattice");
    let mut out = Vec::new();
    lat.for_each_with_norm(m, |x| {
        out.push(LatticeVector { coords: x.to_vec(), norm: m, content: content_of(x) });
    });
    out
}

/// All nonzero vectors of norm at most `bound`, in lexicographic order.
pub fn enumerate_up_to_norm(lat: &GramLattice, bound: u64) -> Vec<LatticeVector> {
    assert!(lat.even, "enumeration by norm needs an even lattice");
    let mut out = Vec::new();
    lat.for_each_up_to_norm(bound, |x, norm| {
        if norm > 0 {
            out.push(LatticeVector { coords: x.to_vec(), norm, content: content_of(x) });
        }
    });
    out
}

pub fn representation_count(lat: &GramLattice, m: u64) -> u64 {
    let mut count = 0u64;
    lat.for_each_with_norm(m, |_| count += 1);
    count
}

/// Reflection in a vector of norm 1: `x ↦ x − (vᵀSx)·v`.
pub fn root_reflection(lat: &GramLattice, root: &[i64], x: &[i64]) -> Vec<i64> {
    let c = lat.inner(root, x);
    x.iter().zip(root).map(|(xi, vi)| xi - c * vi).collect()
}

/// Basis vectors of norm 1; for E8ⁿ these are the simple roots.
pub fn simple_roots(lat: &GramLattice) -> Vec<Vec<i64>> {
    (0..lat.rank)
        .filter(|&i| lat.gram[i][i] == 2)
        .map(|i| {
            let mut e = vec![0i64; lat.rank];
            e[i] = 1;
            e
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalInvariants {
    pub p: u64,
    pub k: u32,
    pub l: u32,
    pub e: u32,
    /// 0 when the reduced norm is a unit times `p`, −1 when it is a unit.
    pub beta: i8,
}

pub fn local_invariants(v: &LatticeVector, p: u64) -> Result<LocalInvariants, LatticeError> {
    if !is_prime(p) {
        return Err(LatticeError::NotPrime(p));
    }
    if v.content == 0 || v.norm == 0 {
        return Err(LatticeError::ZeroVector);
    }
    let l = valuation(v.content, p);
    let rest = valuation(v.norm, p) - 2 * l;
    let e = rest % 2;
    Ok(LocalInvariants { p, k: (rest - e) / 2, l, e, beta: if e == 1 { 0 } else { -1 } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sigma;

    #[test]
    fn e8_is_even_unimodular_rank_8() {
        let e8 = e8_gram();
        assert_eq!(e8.rank(), 8);
        assert!(e8.is_even() && e8.is_unimodular());
        assert_eq!(e8.determinant(), BigInt::from(1));
    }

    #[test]
    fn basis_vectors_have_norm_one() {
        let e8 = e8_gram();
        let v = norm_and_content(&e8, &[1, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!((v.norm(), v.content()), (1, 1));
        let v = norm_and_content(&e8, &[2, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!((v.norm(), v.content()), (4, 2));
        // Adjacent simple roots (Bourbaki 1 and 3).
        let v = norm_and_content(&e8, &[1, 0, 1, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!((v.norm(), v.content()), (1, 1));
    }

    #[test]
    fn zero_vector_and_bad_length_rejected() {
        let e8 = e8_gram();
        assert_eq!(norm_and_content(&e8, &[0; 8]), Err(LatticeError::ZeroVector));
        assert!(matches!(norm_and_content(&e8, &[1; 3]), Err(LatticeError::DimensionMismatch { .. })));
    }

    #[test]
    fn direct_sum_flags_and_determinant() {
        let e8 = e8_gram();
        let e16 = direct_sum(&e8, &e8);
        assert_eq!(e16.rank(), 16);
        assert!(e16.is_even() && e16.is_unimodular());
        assert_eq!(e16.determinant(), BigInt::from(1));
        assert_eq!(representation_count(&e16, 1), 480);
    }

    #[test]
    fn small_shells_match_theta_series() {
        let e8 = e8_gram();
        for m in 1..=5 {
            assert_eq!(representation_count(&e8, m), 240 * sigma(m, 3));
        }
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let v = enumerate_by_norm(&e8_gram(), 2);
        assert_eq!(v.len(), 2160);
        assert!(v.windows(2).all(|w| w[0].coords() < w[1].coords()));
    }

    #[test]
    fn invalid_gram_matrices() {
        assert_eq!(GramLattice::new(alloc::vec![alloc::vec![1, 2], alloc::vec![0, 1]]), Err(LatticeError::NotSymmetric));
        assert_eq!(
            GramLattice::new(alloc::vec![alloc::vec![1, 2], alloc::vec![2, 1]]),
            Err(LatticeError::NotPositiveDefinite)
        );
    }

    #[test]
    fn local_invariants_examples() {
        let e8 = e8_gram();
        let unit = norm_and_content(&e8, &[1, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        let li = local_invariants(&unit, 2).unwrap();
        assert_eq!((li.k, li.l, li.e, li.beta), (0, 0, 0, -1));
        let twice = norm_and_content(&e8, &[2, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        let li = local_invariants(&twice, 2).unwrap();
        assert_eq!((li.k, li.l, li.e, li.beta), (0, 1, 0, -1));
        let two = enumerate_by_norm(&e8, 2).into_iter().find(|v| v.content() == 1).unwrap();
        let li = local_invariants(&two, 2).unwrap();
        assert_eq!((li.k, li.l, li.e, li.beta), (0, 0, 1, 0));
        assert_eq!(local_invariants(&unit, 4), Err(LatticeError::NotPrime(4)));
    }

    #[test]
    fn reflection_preserves_norm() {
        let e8 = e8_gram();
        for r in simple_roots(&e8) {
            for v in enumerate_by_norm(&e8, 1).iter().take(40) {
                let w = root_reflection(&e8, &r, v.coords());
                assert_eq!(e8.double_norm(&w), 2);
            }
        }
    }
}
