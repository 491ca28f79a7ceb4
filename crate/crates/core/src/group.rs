//! Finite abelian groups in invariant-factor form, their elements, and
//! homomorphisms as constrained integer matrices.
//!
//! A group is `ℤ/d₁ × ⋯ × ℤ/dₙ` with `dₙ | ⋯ | d₁`. The same presentation
//! doubles as the Pontryagin dual: the coefficient vector `y` names the
//! character `x ↦ ζ^t` with `t = Σ xᵢ·yᵢ·(d₁/dᵢ)`, `ζ` a primitive `d₁`-th
//! root of unity (see [`FiniteAbelianGroup::pairing`]).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{big_residue, gcd_u64, mul_mod, residue, smith_normal_form, IntMatrix};
use crate::{Error, Limits, Result};

/// Order bound under which automorphism checks scan every element.
const EXHAUSTIVE_BIJECTION_BOUND: u128 = 4096;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteAbelianGroup {
    factors: Arc<[u64]>,
}

impl FiniteAbelianGroup {
    /// Canonicalizes a list of cyclic orders into invariant-factor form.
    ///
    /// Orders equal to 1 are dropped. A list that is already a divisibility
    /// chain after sorting is kept as is; anything else goes through the Smith
    /// normal form of `diag(orders)`, so `[2, 3]` becomes `(6)`.
    pub fn new(orders: &[u64]) -> Result<Self> {
        if let Some(&z) = orders.iter().find(|&&d| d == 0) {
            return Err(Error::ZeroOrder(z));
        }
        let mut factors: Vec<u64> = orders.iter().copied().filter(|&d| d > 1).collect();
        factors.sort_unstable_by(|a, b| b.cmp(a));
        if !factors.windows(2).all(|w| w[0] % w[1] == 0) {
            let smith = smith_normal_form(&IntMatrix::diagonal(&factors));
            factors = smith
                .diagonal()
                .iter()
                .rev()
                .map(|d| d.to_u64().expect("invariant factor fits in u64"))
                .filter(|&d| d > 1)
                .collect();
        }
        Ok(FiniteAbelianGroup { factors: factors.into() })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { factors: Arc::from(Vec::new()) }
    }

    /// Invariant factors, largest first.
    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Group order, saturating at `u128::MAX`.
    pub fn order(&self) -> u128 {
        self.factors.iter().fold(1u128, |acc, &d| acc.saturating_mul(d as u128))
    }

    /// Largest element order `d₁`, or 1 for the trivial group.
    pub fn exponent(&self) -> u64 {
        self.factors.first().copied().unwrap_or(1)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { group: self.clone(), coeffs: vec![0; self.rank()] }
    }

    /// The `i`-th basis generator `xᵢ`.
    pub fn generator(&self, i: usize) -> Result<GroupElement> {
        if i >= self.rank() {
            return Err(Error::Index { index: i, rank: self.rank() });
        }
        let mut coeffs = vec![0; self.rank()];
        coeffs[i] = 1 % self.factors[i];
        Ok(GroupElement { group: self.clone(), coeffs })
    }

    /// Element with the given coefficients, each reduced mod its factor.
    pub fn element(&self, coeffs: &[i64]) -> Result<GroupElement> {
        if coeffs.len() != self.rank() {
            return Err(Error::Shape { expected: self.rank(), found: coeffs.len() });
        }
        let coeffs = coeffs
            .iter()
            .zip(self.factors.iter())
            .map(|(&c, &d)| residue(c as i128, d))
            .collect();
        Ok(GroupElement { group: self.clone(), coeffs })
    }

    pub(crate) fn element_unchecked(&self, coeffs: Vec<u64>) -> GroupElement {
        debug_assert!(coeffs.len() == self.rank());
        debug_assert!(coeffs.iter().zip(self.factors.iter()).all(|(c, d)| c < d));
        GroupElement { group: self.clone(), coeffs }
    }

    /// Every element exactly once, lexicographic in the coefficients.
    pub fn elements(&self, limits: &Limits) -> Result<Elements> {
        limits.check(self.order())?;
        Ok(Elements { factors: self.factors.clone(), next: Some(vec![0; self.rank()]) })
    }

    /// Exponent `t ∈ [0, d₁)` with `y(x) = ζ^t` for the character named by `y`.
    pub fn pairing(&self, x: &GroupElement, y: &GroupElement) -> Result<u64> {
        self.check_member(x)?;
        self.check_member(y)?;
        Ok(self.pairing_raw(&x.coeffs, &y.coeffs))
    }

    pub(crate) fn pairing_raw(&self, x: &[u64], y: &[u64]) -> u64 {
        let top = self.exponent();
        let mut t = 0u64;
        for ((&a, &b), &d) in x.iter().zip(y).zip(self.factors.iter()) {
            t = (t + mul_mod(mul_mod(a, b, top), top / d, top)) % top;
        }
        t
    }

    /// Position of an element in [`elements`](Self::elements) order.
    pub(crate) fn index_of(&self, coeffs: &[u64]) -> usize {
        coeffs
            .iter()
            .zip(self.factors.iter())
            .fold(0usize, |acc, (&c, &d)| acc * d as usize + c as usize)
    }

    pub(crate) fn add_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(self.factors.iter()).map(|((&x, &y), &d)| (x + y) % d).collect()
    }

    pub(crate) fn neg_raw(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(self.factors.iter()).map(|(&x, &d)| (d - x) % d).collect()
    }

    pub(crate) fn check_member(&self, x: &GroupElement) -> Result<()> {
        if x.group != *self {
            return Err(Error::GroupMismatch { expected: self.to_string(), found: x.group.to_string() });
        }
        Ok(())
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("Z/1");
        }
        for (i, d) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "Z/{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.factors[..])
    }
}

/// Parses `Z/d1 x Z/d2 x ...`; `x` or `*` separate factors, whitespace is
/// free. The orders go through [`FiniteAbelianGroup::new`].
impl FromStr for FiniteAbelianGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |token: &str, reason: &str| Error::GroupLiteral {
            token: token.to_string(),
            reason: reason.to_string(),
        };
        if s.trim().is_empty() {
            return Err(bad(s, "empty literal"));
        }
        let mut orders = Vec::new();
        for part in s.split(['x', '*']) {
            let token = part.trim();
            let compact: String = token.chars().filter(|c| !c.is_whitespace()).collect();
            let digits = compact
                .strip_prefix("Z/")
                .ok_or_else(|| bad(token, "expected a factor of the form Z/<order>"))?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad(token, "order must be a positive integer"));
            }
            let d: u64 = digits.parse().map_err(|_| bad(token, "order out of range"))?;
            if d == 0 {
                return Err(bad(token, "order must be at least 1"));
            }
            orders.push(d);
        }
        FiniteAbelianGroup::new(&orders)
    }
}

/// Lexicographic element stream, see [`FiniteAbelianGroup::elements`].
pub struct Elements {
    factors: Arc<[u64]>,
    next: Option<Vec<u64>>,
}

impl Iterator for Elements {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut carry = true;
        for i in (0..succ.len()).rev() {
            succ[i] += 1;
            if succ[i] < self.factors[i] {
                carry = false;
                break;
            }
            succ[i] = 0;
        }
        if !carry {
            self.next = Some(succ);
        }
        Some(current)
    }
}

/// Group elements as coefficient vectors, stored reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: FiniteAbelianGroup,
    coeffs: Vec<u64>,
}

impl GroupElement {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn checked_add(&self, other: &GroupElement) -> Result<GroupElement> {
        self.group.check_member(other)?;
        Ok(GroupElement { group: self.group.clone(), coeffs: self.group.add_raw(&self.coeffs, &other.coeffs) })
    }

    pub fn negate(&self) -> GroupElement {
        GroupElement { group: self.group.clone(), coeffs: self.group.neg_raw(&self.coeffs) }
    }

    pub fn scale(&self, k: i64) -> GroupElement {
        let coeffs = self
            .coeffs
            .iter()
            .zip(self.group.factors.iter())
            .map(|(&c, &d)| residue(c as i128 * k as i128, d))
            .collect();
        GroupElement { group: self.group.clone(), coeffs }
    }

    /// Additive order of the element.
    pub fn order(&self) -> u64 {
        self.coeffs
            .iter()
            .zip(self.group.factors.iter())
            .fold(1u64, |acc, (&c, &d)| acc.lcm(&(d / gcd_u64(c, d))))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

/// A homomorphism `source → target` as the matrix `(αᵢⱼ)` with
/// `α(Σ aⱼxⱼ) = Σᵢ Σⱼ αᵢⱼ aⱼ yᵢ`.
///
/// Row `i` indexes the target factor `tᵢ`, column `j` the source factor `sⱼ`.
/// Entries are stored mod `tᵢ` and are divisible by `tᵢ / (tᵢ, sⱼ)`, which
/// is exactly the condition for `xⱼ ↦ Σᵢ αᵢⱼ yᵢ` to respect the order of `xⱼ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomMatrix {
    source: FiniteAbelianGroup,
    target: FiniteAbelianGroup,
    entries: Vec<u64>,
}

impl HomMatrix {
    /// Validates and reduces a matrix given by rows (one per target factor).
    pub fn new(source: &FiniteAbelianGroup, target: &FiniteAbelianGroup, rows: &[Vec<i64>]) -> Result<Self> {
        if rows.len() != target.rank() {
            return Err(Error::Shape { expected: target.rank(), found: rows.len() });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != source.rank()) {
            return Err(Error::Shape { expected: source.rank(), found: r.len() });
        }
        Self::from_fn(source, target, |i, j| rows[i][j] as i128)
    }

    pub(crate) fn from_fn(
        source: &FiniteAbelianGroup,
        target: &FiniteAbelianGroup,
        mut f: impl FnMut(usize, usize) -> i128,
    ) -> Result<Self> {
        let (s, t) = (source.factors(), target.factors());
        let mut entries = Vec::with_capacity(s.len() * t.len());
        for (i, &ti) in t.iter().enumerate() {
            for (j, &sj) in s.iter().enumerate() {
                let value = f(i, j);
                let divisor = ti / gcd_u64(ti, sj);
                let r = residue(value, ti);
                if r % divisor != 0 {
                    return Err(Error::Constraint { row: i, col: j, value, divisor });
                }
                entries.push(r);
            }
        }
        Ok(HomMatrix { source: source.clone(), target: target.clone(), entries })
    }

    pub fn identity(group: &FiniteAbelianGroup) -> Self {
        Self::from_fn(group, group, |i, j| (i == j) as i128).expect("identity is admissible")
    }

    pub fn zero(source: &FiniteAbelianGroup, target: &FiniteAbelianGroup) -> Self {
        Self::from_fn(source, target, |_, _| 0).expect("zero is admissible")
    }

    pub fn source(&self) -> &FiniteAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteAbelianGroup {
        &self.target
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.source.rank() + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        let n = self.source.rank();
        (0..self.target.rank()).map(|i| self.entries[i * n..(i + 1) * n].to_vec()).collect()
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        self.source.check_member(x)?;
        Ok(self.target.element_unchecked(self.apply_raw(&x.coeffs)))
    }

    pub(crate) fn apply_raw(&self, x: &[u64]) -> Vec<u64> {
        let n = self.source.rank();
        self.target
            .factors()
            .iter()
            .enumerate()
            .map(|(i, &ti)| {
                let row = &self.entries[i * n..(i + 1) * n];
                row.iter().zip(x).fold(0u64, |acc, (&a, &c)| (acc + mul_mod(a, c, ti)) % ti)
            })
            .collect()
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &HomMatrix) -> Result<HomMatrix> {
        if inner.target != self.source {
            return Err(Error::GroupMismatch {
                expected: self.source.to_string(),
                found: inner.target.to_string(),
            });
        }
        let mid = self.source.rank();
        let out = Self::from_fn(&inner.source, &self.target, |i, k| {
            (0..mid).map(|j| self.entry(i, j) as i128 * inner.entry(j, k) as i128).sum()
        });
        out.map_err(|e| Error::Invariant(format!("composite violates the divisibility constraint: {e}")))
    }

    /// Matrix of the transpose `α*: target^ → source^`, defined by
    /// `pairing(α(x), y) = pairing(x, α*(y))` in the self-dual presentations.
    ///
    /// On generators the two sides are `αᵢⱼ/tᵢ` and `α*ⱼᵢ/sⱼ` as fractions
    /// of a full turn, so `α*ⱼᵢ = αᵢⱼ·sⱼ/tᵢ`; the constraint on `αᵢⱼ` makes the
    /// division exact.
    pub fn transpose(&self) -> HomMatrix {
        let (s, t) = (self.source.factors(), self.target.factors());
        Self::from_fn(&self.target, &self.source, |j, i| {
            let scaled = self.entry(i, j) as u128 * s[j] as u128;
            debug_assert!(scaled % t[i] as u128 == 0);
            (scaled / t[i] as u128) as i128
        })
        .expect("transpose of an admissible matrix is admissible")
    }

    /// True iff the map is a bijection of the group onto itself.
    pub fn is_automorphism(&self) -> bool {
        if self.source != self.target {
            return false;
        }
        if self.source.order() <= EXHAUSTIVE_BIJECTION_BOUND {
            self.is_bijective_exhaustive()
        } else {
            self.inverse().is_some()
        }
    }

    /// Bijectivity by applying the map to every element.
    pub fn is_bijective_exhaustive(&self) -> bool {
        if self.source.order() != self.target.order() {
            return false;
        }
        let order = self.target.order() as usize;
        let mut seen = vec![false; order];
        let all = Elements { factors: self.source.factors.clone(), next: Some(vec![0; self.source.rank()]) };
        for x in all {
            let slot = &mut seen[self.target.index_of(&self.apply_raw(&x))];
            if *slot {
                return false;
            }
            *slot = true;
        }
        true
    }

    /// Two-sided inverse, or `None` when the map is not bijective.
    ///
    /// Solves `α(y) = eⱼ` for every target generator through the Smith normal
    /// form of `[α | diag(t)]`; surjectivity plus equal orders gives
    /// bijectivity.
    pub fn inverse(&self) -> Option<HomMatrix> {
        if self.source.order() != self.target.order() {
            return None;
        }
        let (s, t) = (self.source.rank(), self.target.rank());
        let mut system = IntMatrix::zeros(t, s + t);
        for i in 0..t {
            for j in 0..s {
                system[(i, j)] = BigInt::from(self.entry(i, j));
            }
            system[(i, s + i)] = BigInt::from(self.target.factors[i]);
        }
        let smith = smith_normal_form(&system);
        let diag = smith.diagonal();
        let mut columns = Vec::with_capacity(t);
        for j in 0..t {
            // U·e_j is the j-th column of U
            let rhs: Vec<BigInt> = (0..t).map(|i| smith.u[(i, j)].clone()).collect();
            let mut w = vec![BigInt::zero(); s + t];
            for (i, r) in rhs.iter().enumerate() {
                let d = &diag[i];
                if d.is_zero() {
                    if !r.is_zero() {
                        return None;
                    }
                } else {
                    let (q, rem) = r.div_rem(d);
                    if !rem.is_zero() {
                        return None;
                    }
                    w[i] = q;
                }
            }
            let y: Vec<u64> = (0..s)
                .map(|k| {
                    let v: BigInt = (0..s + t).map(|l| &smith.v[(k, l)] * &w[l]).sum();
                    big_residue(&v, self.source.factors[k])
                })
                .collect();
            debug_assert_eq!(self.apply_raw(&y), {
                let mut e = vec![0; t];
                e[j] = 1 % self.target.factors[j];
                e
            });
            columns.push(y);
        }
        let inv = Self::from_fn(&self.target, &self.source, |k, j| columns[j][k] as i128)
            .expect("preimages of generators of a bijection define a homomorphism");
        Some(inv)
    }

    /// Every admissible matrix `source → target`.
    pub fn all(source: &FiniteAbelianGroup, target: &FiniteAbelianGroup, limits: &Limits) -> Result<AllHoms> {
        let (s, t) = (source.factors(), target.factors());
        let steps: Vec<u64> = t.iter().flat_map(|&ti| s.iter().map(move |&sj| ti / gcd_u64(ti, sj))).collect();
        let counts: Vec<u64> = t.iter().flat_map(|&ti| s.iter().map(move |&sj| gcd_u64(ti, sj))).collect();
        let total = counts.iter().fold(1u128, |acc, &c| acc.saturating_mul(c as u128));
        limits.check(total)?;
        Ok(AllHoms {
            source: source.clone(),
            target: target.clone(),
            steps,
            counts,
            next: Some(vec![0; s.len() * t.len()]),
        })
    }
}

impl fmt::Debug for HomMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?}: {:?}", self.source, self.target, self.to_rows())
    }
}

/// Stream of all admissible matrices, see [`HomMatrix::all`].
pub struct AllHoms {
    source: FiniteAbelianGroup,
    target: FiniteAbelianGroup,
    steps: Vec<u64>,
    counts: Vec<u64>,
    next: Option<Vec<u64>>,
}

impl Iterator for AllHoms {
    type Item = HomMatrix;

    fn next(&mut self) -> Option<HomMatrix> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for k in (0..succ.len()).rev() {
            succ[k] += 1;
            if succ[k] < self.counts[k] {
                self.next = Some(succ);
                break;
            }
            succ[k] = 0;
        }
        let entries = current.iter().zip(&self.steps).map(|(&c, &st)| c * st).collect();
        Some(HomMatrix { source: self.source.clone(), target: self.target.clone(), entries })
    }
}
