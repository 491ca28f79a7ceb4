//! Finite Heisenberg groups as explicit central extensions.
//!
//! A group here is `μ_m × K` with multiplication
//! `(z, k)(w, l) = (z + w + c(k, l), k + l)`, where `z, w` are exponents of a
//! primitive `m`-th root of unity and `c` is a normalized 2-cocycle. The
//! commutator `ghg⁻¹h⁻¹` of lifts of `k, l` is `c(k, l) - c(l, k)`.
//!
//! Every cocycle built by this module takes values in `μ_{d₁}`, `d₁` the
//! exponent of `K`, so `m = d₁` and the extension is finite. Inside `U(1)`
//! it generates the same commutator data as the unitary Heisenberg group.

mod weyl;

pub use weyl::{verify_weyl_relations, weyl_operators, WeylFailure, WeylOperators, WeylReport, DEFAULT_MAX_DIM};

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd_u64, mod_inverse, mul_mod};
use crate::form::{dot_mod, unit, AlternatingForm};
use crate::group::{FiniteAbelianGroup, GroupElement, HomMatrix};
use crate::reduction::{canonical_invariants, doubled, symplectic_reduce};
use crate::{Error, Limits, Result};

/// How a cocycle is stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cocycle {
    /// `c(k, l) = Σ kᵢ lⱼ bᵢⱼ mod m`, `b` row-major.
    Bilinear(Vec<u64>),
    /// `c(k, l)` looked up by element positions, `|K|²` values.
    Table(Arc<[u64]>),
}

/// Which construction produced a group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    /// `c((x,χ),(y,ξ)) = ξ(x)` on `A × Â`.
    Standard,
    /// `c(k, l) = e(k/2, l/2)²`, odd exponent.
    Halving,
    /// standard cocycle pulled back along `φ⁻¹` from a reduction
    Pullback,
    Bilinear,
    Table,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergGroup {
    phase: FiniteAbelianGroup,
    center_order: u64,
    cocycle: Cocycle,
    origin: Origin,
}

/// `(z, k)` with `z` an exponent mod `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeisenbergElement {
    pub z: u64,
    pub k: GroupElement,
}

impl HeisenbergGroup {
    /// The extension of `A × Â` (interleaved) by `μ_{d₁(A)}` with
    /// `c((x,χ),(y,ξ)) = ξ(x)`; its commutator form is `χ'(x)·χ(x')⁻¹`.
    pub fn standard(base: &FiniteAbelianGroup) -> Self {
        let phase = doubled(base);
        let m = base.exponent();
        let n = phase.rank();
        let mut b = vec![0u64; n * n];
        for (k, &a) in base.factors().iter().enumerate() {
            b[(2 * k) * n + 2 * k + 1] = m / a;
        }
        HeisenbergGroup { phase, center_order: m, cocycle: Cocycle::Bilinear(b), origin: Origin::Standard }
    }

    /// An extension whose commutator form is exactly `e`.
    ///
    /// Odd `d₁`: `c(k, l) = 2·e(k/2, l/2)`, i.e. `b = q/2`. Even `d₁`: the
    /// standard cocycle of the reduction's `A`, pulled back along `φ⁻¹`.
    pub fn from_form(e: &AlternatingForm, limits: &Limits) -> Result<Self> {
        if !e.is_nondegenerate() {
            let witness = e.kernel_witness(limits).map(|w| w.coeffs().to_vec()).unwrap_or_default();
            return Err(Error::Degenerate { witness });
        }
        let phase = e.group().clone();
        let m = e.modulus();
        let n = phase.rank();
        let g = if m % 2 == 1 {
            let half = mod_inverse(&2i128, &(m as i128)).expect("2 is a unit mod an odd modulus") as u64;
            let b = (0..n * n).map(|idx| mul_mod(half, e.entry(idx / n, idx % n), m)).collect();
            HeisenbergGroup { phase, center_order: m, cocycle: Cocycle::Bilinear(b), origin: Origin::Halving }
        } else {
            let d = symplectic_reduce(e, limits)?;
            let inv = d.phi_inverse()?;
            let std = HeisenbergGroup::standard(&d.base);
            if std.phase != phase || std.center_order != m {
                return Err(Error::Invariant("standard extension does not match the phase group".into()));
            }
            let images: Vec<Vec<u64>> = (0..n).map(|i| inv.apply_raw(&unit(&phase, i))).collect();
            let b = (0..n * n).map(|idx| std.cocycle_raw(&images[idx / n], &images[idx % n])).collect();
            HeisenbergGroup { phase, center_order: m, cocycle: Cocycle::Bilinear(b), origin: Origin::Pullback }
        };
        if g.commutator_form(limits)? != *e {
            return Err(Error::Invariant("constructed extension has the wrong commutator form".into()));
        }
        Ok(g)
    }

    /// Extension with a bilinear cocycle given by its matrix mod `m`.
    pub fn from_bilinear(phase: &FiniteAbelianGroup, m: u64, rows: &[Vec<i64>]) -> Result<Self> {
        let n = phase.rank();
        if m == 0 {
            return Err(Error::ZeroOrder(0));
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape { expected: n, found: rows.len() });
        }
        let d = phase.factors();
        let mut b = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let value = rows[i][j] as i128;
                let r = value.rem_euclid(m as i128) as u64;
                // d_i·b and d_j·b must vanish mod m
                let divisor = m / gcd_u64(m, gcd_u64(d[i], d[j]));
                if r % divisor != 0 {
                    return Err(Error::Constraint { row: i, col: j, value, divisor });
                }
                b[i * n + j] = r;
            }
        }
        Ok(HeisenbergGroup { phase: phase.clone(), center_order: m, cocycle: Cocycle::Bilinear(b), origin: Origin::Bilinear })
    }

    /// Extension from a full cocycle table, `table[pos(k)·|K| + pos(l)]`.
    /// The table must be normalized and satisfy the cocycle identity, which
    /// is checked over all triples.
    pub fn from_table(phase: &FiniteAbelianGroup, m: u64, table: Vec<u64>, limits: &Limits) -> Result<Self> {
        let order = phase.order();
        limits.check(order.saturating_pow(3))?;
        if m == 0 {
            return Err(Error::ZeroOrder(0));
        }
        let size = (order * order) as usize;
        if table.len() != size {
            return Err(Error::Shape { expected: size, found: table.len() });
        }
        let table: Vec<u64> = table.into_iter().map(|v| v % m).collect();
        let g = HeisenbergGroup { phase: phase.clone(), center_order: m, cocycle: Cocycle::Table(table.into()), origin: Origin::Table };
        let all: Vec<Vec<u64>> = phase.elements(limits)?.collect();
        let zero = phase.zero();
        for k in &all {
            if g.cocycle_raw(zero.coeffs(), k) != 0 || g.cocycle_raw(k, zero.coeffs()) != 0 {
                return Err(Error::Cocycle(format!("not normalized at {k:?}")));
            }
        }
        if let Some((k, l, j)) = g.cocycle_violation(&all) {
            return Err(Error::Cocycle(format!("c(k,l) + c(k+l,j) != c(l,j) + c(k,l+j) at {k:?}, {l:?}, {j:?}")));
        }
        Ok(g)
    }

    pub fn phase(&self) -> &FiniteAbelianGroup {
        &self.phase
    }

    /// `m`, the order of the central `μ_m`.
    pub fn center_order(&self) -> u64 {
        self.center_order
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn order(&self) -> u128 {
        self.phase.order().saturating_mul(self.center_order as u128)
    }

    pub(crate) fn cocycle_raw(&self, k: &[u64], l: &[u64]) -> u64 {
        let m = self.center_order;
        match &self.cocycle {
            Cocycle::Bilinear(b) => {
                let n = self.phase.rank();
                let mut acc = 0u64;
                for (i, &ki) in k.iter().enumerate() {
                    if ki != 0 {
                        acc = (acc + mul_mod(ki, dot_mod(&b[i * n..(i + 1) * n], l, m), m)) % m;
                    }
                }
                acc
            }
            Cocycle::Table(t) => {
                let size = self.phase.order() as usize;
                t[self.phase.index_of(k) * size + self.phase.index_of(l)]
            }
        }
    }

    /// `c(k, l)` as an exponent mod `m`.
    pub fn cocycle_value(&self, k: &GroupElement, l: &GroupElement) -> Result<u64> {
        self.phase.check_member(k)?;
        self.phase.check_member(l)?;
        Ok(self.cocycle_raw(k.coeffs(), l.coeffs()))
    }

    fn cocycle_violation(&self, all: &[Vec<u64>]) -> Option<(Vec<u64>, Vec<u64>, Vec<u64>)> {
        let m = self.center_order;
        for k in all {
            for l in all {
                let kl = self.phase.add_raw(k, l);
                let ckl = self.cocycle_raw(k, l);
                for j in all {
                    let lhs = (ckl + self.cocycle_raw(&kl, j)) % m;
                    let rhs = (self.cocycle_raw(l, j) + self.cocycle_raw(k, &self.phase.add_raw(l, j))) % m;
                    if lhs != rhs {
                        return Some((k.clone(), l.clone(), j.clone()));
                    }
                }
            }
        }
        None
    }

    /// Checks `c(k,l) + c(k+l,j) = c(l,j) + c(k,l+j)` over all triples.
    pub fn cocycle_condition_holds(&self, limits: &Limits) -> Result<bool> {
        limits.check(self.phase.order().saturating_pow(3))?;
        let all: Vec<Vec<u64>> = self.phase.elements(limits)?.collect();
        Ok(self.cocycle_violation(&all).is_none())
    }

    pub fn identity(&self) -> HeisenbergElement {
        HeisenbergElement { z: 0, k: self.phase.zero() }
    }

    pub fn element(&self, z: i64, k: &GroupElement) -> Result<HeisenbergElement> {
        self.phase.check_member(k)?;
        Ok(HeisenbergElement { z: z.rem_euclid(self.center_order as i64) as u64, k: k.clone() })
    }

    pub fn mul(&self, a: &HeisenbergElement, b: &HeisenbergElement) -> Result<HeisenbergElement> {
        self.phase.check_member(&a.k)?;
        self.phase.check_member(&b.k)?;
        let (z, k) = self.mul_raw((a.z, a.k.coeffs()), (b.z, b.k.coeffs()));
        Ok(HeisenbergElement { z, k: self.phase.element_unchecked(k) })
    }

    fn mul_raw(&self, (z, k): (u64, &[u64]), (w, l): (u64, &[u64])) -> (u64, Vec<u64>) {
        let m = self.center_order;
        ((z + w + self.cocycle_raw(k, l)) % m, self.phase.add_raw(k, l))
    }

    /// `(z, k)⁻¹ = (-z - c(k, -k), -k)`.
    pub fn inverse(&self, a: &HeisenbergElement) -> Result<HeisenbergElement> {
        self.phase.check_member(&a.k)?;
        let (z, k) = self.inverse_raw(a.z, a.k.coeffs());
        Ok(HeisenbergElement { z, k: self.phase.element_unchecked(k) })
    }

    fn inverse_raw(&self, z: u64, k: &[u64]) -> (u64, Vec<u64>) {
        let m = self.center_order;
        let neg = self.phase.neg_raw(k);
        let c = self.cocycle_raw(k, &neg);
        ((2 * m - z - c) % m, neg)
    }

    /// `ghg⁻¹h⁻¹` by element arithmetic.
    pub fn commutator(&self, g: &HeisenbergElement, h: &HeisenbergElement) -> Result<HeisenbergElement> {
        let gh = self.mul(g, h)?;
        let gi = self.inverse(g)?;
        let hi = self.inverse(h)?;
        self.mul(&self.mul(&gh, &gi)?, &hi)
    }

    /// All `m·|K|` elements, `z` varying slowest.
    pub fn elements(&self, limits: &Limits) -> Result<impl Iterator<Item = HeisenbergElement> + '_> {
        limits.check(self.order())?;
        let ks: Vec<Vec<u64>> = self.phase.elements(limits)?.collect();
        Ok((0..self.center_order).flat_map(move |z| {
            ks.clone().into_iter().map(move |k| HeisenbergElement { z, k: self.phase.element_unchecked(k) })
        }))
    }

    /// The form `e(k, l) = c(k, l) - c(l, k)`.
    ///
    /// Requires `m = d₁` so exponents carry over unchanged. Table cocycles
    /// are checked for biadditivity of the difference; every group has its
    /// generator commutators cross-checked by element arithmetic.
    pub fn commutator_form(&self, limits: &Limits) -> Result<AlternatingForm> {
        let m = self.center_order;
        let top = self.phase.exponent();
        if m != top {
            return Err(Error::CenterMismatch { center: m, modulus: top });
        }
        let n = self.phase.rank();
        let gens: Vec<Vec<u64>> = (0..n).map(|i| unit(&self.phase, i)).collect();
        let form = AlternatingForm::from_fn(&self.phase, |i, j| {
            (self.cocycle_raw(&gens[i], &gens[j]) as i128 - self.cocycle_raw(&gens[j], &gens[i]) as i128).rem_euclid(m as i128)
        })
        .map_err(|e| Error::Invariant(format!("cocycle difference is not an alternating form: {e}")))?;

        if let Cocycle::Table(_) = self.cocycle {
            let all: Vec<Vec<u64>> = self.phase.elements(limits)?.collect();
            for k in &all {
                for l in &all {
                    let diff = (m + self.cocycle_raw(k, l) - self.cocycle_raw(l, k)) % m;
                    if diff != form.eval_raw(k, l) {
                        return Err(Error::Invariant(format!("cocycle difference is not biadditive at {k:?}, {l:?}")));
                    }
                }
            }
        }

        for i in 0..n {
            for j in 0..n {
                let g = HeisenbergElement { z: 0, k: self.phase.element_unchecked(gens[i].clone()) };
                let h = HeisenbergElement { z: 0, k: self.phase.element_unchecked(gens[j].clone()) };
                let c = self.commutator(&g, &h)?;
                if !c.k.is_zero() || c.z != form.entry(i, j) {
                    return Err(Error::Invariant(format!("commutator of generators {i}, {j} is {c:?}")));
                }
            }
        }
        Ok(form)
    }

    /// Elements commuting with everything, found by testing each element
    /// against the generators `(1, 0)` and `(0, xᵢ)`.
    pub fn center(&self, limits: &Limits) -> Result<Vec<HeisenbergElement>> {
        let gens: Vec<(u64, Vec<u64>)> = std::iter::once((1 % self.center_order, self.phase.zero().coeffs().to_vec()))
            .chain((0..self.phase.rank()).map(|i| (0, unit(&self.phase, i))))
            .collect();
        Ok(self
            .elements(limits)?
            .filter(|g| {
                gens.iter().all(|(z, k)| {
                    self.mul_raw((g.z, g.k.coeffs()), (*z, k)) == self.mul_raw((*z, k), (g.z, g.k.coeffs()))
                })
            })
            .collect())
    }

    pub fn element_order(&self, a: &HeisenbergElement) -> u64 {
        let mut acc = (a.z, a.k.coeffs().to_vec());
        let mut n = 1;
        while acc.0 != 0 || acc.1.iter().any(|&c| c != 0) {
            acc = self.mul_raw((acc.0, &acc.1), (a.z, a.k.coeffs()));
            n += 1;
        }
        n
    }

    /// Number of elements of each order.
    pub fn order_statistics(&self, limits: &Limits) -> Result<BTreeMap<u64, u64>> {
        let mut stats = BTreeMap::new();
        for g in self.elements(limits)? {
            *stats.entry(self.element_order(&g)).or_insert(0) += 1;
        }
        Ok(stats)
    }

    pub fn summary(&self, limits: &Limits) -> Result<Summary> {
        let element_orders = self.order_statistics(limits)?;
        let exponent = element_orders.keys().fold(1u64, |acc, &o| num_integer::lcm(acc, o));
        Ok(Summary {
            phase: self.phase.to_string(),
            origin: self.origin,
            order: self.order() as u64,
            center_order: self.center(limits)?.len() as u64,
            exponent,
            element_orders,
        })
    }
}

/// Multiplication-table facts about a constructed group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub phase: String,
    pub origin: Origin,
    pub order: u64,
    pub center_order: u64,
    pub exponent: u64,
    pub element_orders: BTreeMap<u64, u64>,
}

/// True iff some isomorphism `ψ: K₁ → K₂` pulls `e₂` back to `e₁`.
///
/// Non-degenerate forms on isomorphic groups always are (one orbit), so
/// this compares reductions; degenerate pairs are searched over `Aut(K)`.
pub fn forms_equivalent(e1: &AlternatingForm, e2: &AlternatingForm, limits: &Limits) -> Result<bool> {
    if e1.group() != e2.group() {
        return Ok(false);
    }
    match (e1.is_nondegenerate(), e2.is_nondegenerate()) {
        (true, true) => Ok(canonical_invariants(e1, limits)? == canonical_invariants(e2, limits)?),
        (false, false) => {
            for alpha in HomMatrix::all(e1.group(), e1.group(), limits)? {
                if alpha.is_automorphism() && e2.transform(&alpha)? == *e1 {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        _ => Ok(false),
    }
}

/// Equivalence of central extensions, decided on commutator forms.
pub fn extension_equivalent(g1: &HeisenbergGroup, g2: &HeisenbergGroup, limits: &Limits) -> Result<bool> {
    forms_equivalent(&g1.commutator_form(limits)?, &g2.commutator_form(limits)?, limits)
}
