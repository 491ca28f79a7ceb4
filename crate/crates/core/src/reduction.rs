//! Symplectic reduction of non-degenerate alternating forms.
//!
//! A non-degenerate `e` on `K` is brought to block-diagonal shape by the three
//! elementary moves of [`AlternatingForm`]: pick a first-row entry that is a
//! unit in the local modulus, scale it to 1, move it next to the diagonal,
//! and shear away the rest of the two rows and columns. The two generators
//! then span a hyperbolic pair that splits off, and the same is done on what
//! is left. The composite automorphism is the isomorphism
//! `φ: A × Â → K` with `e(φ(x,χ), φ(x',χ')) = χ'(x)·χ(x')⁻¹`.
//!
//! When `d₁` has several prime factors the first row can be a generating set
//! of `ℤ/d₁` without containing a unit (`(0, 2, 3, 0)` mod 6 on
//! `ℤ/6 × ℤ/6 × ℤ/2 × ℤ/2`); a few shears inside the row first produce one.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, gcd_u64, mod_inverse, mul_mod};
use crate::form::{dot_mod, enumerate_forms, unit, AlternatingForm};
use crate::group::{FiniteAbelianGroup, HomMatrix};
use crate::{Error, Limits, Result};

/// One elementary operation, with 0-based generator indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Step {
    /// `β_{iσ}`
    Scale { i: usize, sigma: i64 },
    /// `π_{ij}`
    Swap { i: usize, j: usize },
    /// `α_{ijσ}`: `xⱼ ↦ xⱼ + σxᵢ`
    Shear { i: usize, j: usize, sigma: i64 },
}

impl Step {
    pub fn apply(&self, e: &AlternatingForm) -> Result<(AlternatingForm, HomMatrix)> {
        match *self {
            Step::Scale { i, sigma } => e.op_scale(i, sigma),
            Step::Swap { i, j } => e.op_swap(i, j),
            Step::Shear { i, j, sigma } => e.op_shear(i, j, sigma),
        }
    }

    /// The step undoing this one on `group`.
    pub fn inverse(&self, group: &FiniteAbelianGroup) -> Result<Step> {
        Ok(match *self {
            Step::Scale { i, sigma } => {
                let d = *group.factors().get(i).ok_or(Error::Index { index: i, rank: group.rank() })?;
                let inv = mod_inverse(&(sigma as i128), &(d as i128)).ok_or(Error::NotUnit { sigma, modulus: d })?;
                Step::Scale { i, sigma: inv as i64 }
            }
            swap @ Step::Swap { .. } => swap,
            Step::Shear { i, j, sigma } => Step::Shear { i, j, sigma: -sigma },
        })
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Scale { i, sigma } => write!(f, "scale({i}, {sigma})"),
            Step::Swap { i, j } => write!(f, "swap({i}, {j})"),
            Step::Shear { i, j, sigma } => write!(f, "shear({i}, {j}, {sigma})"),
        }
    }
}

/// `K ≅ A × Â` carrying `e` to the standard form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// The group `A`.
    pub base: FiniteAbelianGroup,
    /// `φ`, from `A × Â` in interleaved order `a₁, â₁, a₂, â₂, …` to `K`.
    pub phi: HomMatrix,
    /// Operations taking the input form to the standard one, in order.
    pub trace: Vec<Step>,
}

impl Decomposition {
    /// `φ` rebuilt from the trace alone.
    pub fn trace_matrix(&self, group: &FiniteAbelianGroup) -> Result<HomMatrix> {
        let zero = AlternatingForm::zero(group);
        let mut acc = HomMatrix::identity(group);
        for step in &self.trace {
            acc = acc.compose(&step.apply(&zero)?.1)?;
        }
        Ok(acc)
    }

    /// `φ⁻¹`, composed from the inverted steps in reverse order.
    pub fn phi_inverse(&self) -> Result<HomMatrix> {
        let group = self.phi.target().clone();
        let mut acc = HomMatrix::identity(&group);
        let zero = AlternatingForm::zero(&group);
        for step in self.trace.iter().rev() {
            let (_, alpha) = step.inverse(&group)?.apply(&zero)?;
            acc = acc.compose(&alpha)?;
        }
        Ok(acc)
    }

    /// Undoes the trace starting from the standard form of `base`; gives back
    /// the form that was reduced.
    pub fn replay_from_standard(&self) -> Result<AlternatingForm> {
        let group = self.phi.target().clone();
        let mut e = standard_form(&self.base);
        if e.group() != &group {
            return Err(Error::GroupMismatch { expected: group.to_string(), found: e.group().to_string() });
        }
        for step in self.trace.iter().rev() {
            e = step.inverse(&group)?.apply(&e)?.0;
        }
        Ok(e)
    }
}

/// `A × Â` in interleaved presentation: factors `(a₁, a₁, a₂, a₂, …)`.
pub fn doubled(base: &FiniteAbelianGroup) -> FiniteAbelianGroup {
    let f: Vec<u64> = base.factors().iter().flat_map(|&a| [a, a]).collect();
    FiniteAbelianGroup::new(&f).expect("doubling keeps the divisibility chain")
}

/// The `A` with `K ≅ A × Â`, when the invariant factors of `K` pair up.
pub fn half(group: &FiniteAbelianGroup) -> Option<FiniteAbelianGroup> {
    let d = group.factors();
    if d.len() % 2 != 0 || !d.chunks(2).all(|p| p[0] == p[1]) {
        return None;
    }
    let f: Vec<u64> = d.iter().step_by(2).copied().collect();
    Some(FiniteAbelianGroup::new(&f).expect("subchain of a chain"))
}

/// The exponent matrix of `((x,χ),(x',χ')) ↦ χ'(x)·χ(x')⁻¹` on `A × Â`:
/// block `k` is `[[0, d₁/aₖ], [-d₁/aₖ, 0]]`.
pub fn standard_form(base: &FiniteAbelianGroup) -> AlternatingForm {
    let k = doubled(base);
    let top = k.exponent() as i128;
    AlternatingForm::from_fn(&k, |i, j| {
        let a = base.factors()[i / 2] as i128;
        match (i / 2 == j / 2, i % 2, j % 2) {
            (true, 0, 1) => top / a,
            (true, 1, 0) => -(top / a),
            _ => 0,
        }
    })
    .expect("standard form is admissible")
}

/// True iff `K` carries a non-degenerate alternating form, i.e. its invariant
/// factors pair up as `d₁ = d₂, d₃ = d₄, …`.
pub fn exists_nondegenerate(group: &FiniteAbelianGroup) -> bool {
    half(group).is_some()
}

struct Reducer {
    form: AlternatingForm,
    acc: HomMatrix,
    trace: Vec<Step>,
}

impl Reducer {
    fn push(&mut self, step: Step) -> Result<()> {
        let (form, alpha) = step.apply(&self.form)?;
        self.form = form;
        self.acc = self.acc.compose(&alpha)?;
        self.trace.push(step);
        Ok(())
    }

    /// `q_{sj} / (d₁/d_s)` as a residue mod `d_s`.
    fn local(&self, s: usize, j: usize) -> u64 {
        let d = self.form.group().factors();
        let top = self.form.modulus();
        (self.form.entry(s, j) / (top / d[s])) % d[s]
    }

    fn split_pair(&mut self, s: usize) -> Result<()> {
        let group = self.form.group().clone();
        let d = group.factors();
        let n = d.len();
        let ds = d[s];
        let no_pivot = || Error::Invariant(format!("no unit in row {s} of a non-degenerate form"));
        if s + 1 >= n {
            return Err(no_pivot());
        }

        let pivot = match (s + 1..n).find(|&j| gcd_u64(self.local(s, j), ds) == 1) {
            Some(j) => j,
            None => {
                self.make_unit(s, s + 1)?;
                s + 1
            }
        };
        if d[pivot] != ds {
            return Err(Error::Invariant(format!("pivot column {pivot} has order {} != {ds}", d[pivot])));
        }

        let r = self.local(s, pivot);
        let sigma = mod_inverse(&(r as i128), &(ds as i128)).ok_or_else(no_pivot)? as i64;
        if sigma != 1 {
            self.push(Step::Scale { i: s, sigma })?;
        }
        if pivot != s + 1 {
            self.push(Step::Swap { i: s + 1, j: pivot })?;
        }

        let top = self.form.modulus();
        let u = top / ds;
        debug_assert_eq!(self.form.entry(s, s + 1), u % top);
        for j in s + 2..n {
            // q_{s+1,j} + σ·q_{s+1,s} = q_{s+1,j} - σu
            let v = self.form.entry(s + 1, j);
            if v != 0 {
                self.push(Step::Shear { i: s, j, sigma: (v / u) as i64 })?;
            }
            // q_{s,j} + σ·q_{s,s+1} = q_{s,j} + σu
            let w = self.form.entry(s, j);
            if w != 0 {
                self.push(Step::Shear { i: s + 1, j, sigma: ((ds - (w / u) % ds) % ds) as i64 })?;
            }
        }
        for j in s + 2..n {
            for i in [s, s + 1] {
                if self.form.entry(i, j) != 0 || self.form.entry(j, i) != 0 {
                    return Err(Error::Invariant(format!("entry ({i}, {j}) survived clearing")));
                }
            }
        }
        if s + 2 < n && ds % d[s + 2] != 0 {
            return Err(Error::Invariant("residual chain broken".into()));
        }
        Ok(())
    }

    // Shears x_c ↦ x_c + t·x_i inside row s until the local entry in column c
    // is a unit mod d_s. Each round removes a prime of d_s from that entry.
    fn make_unit(&mut self, s: usize, c: usize) -> Result<()> {
        let group = self.form.group().clone();
        let d = group.factors();
        let ds = d[s];
        if d[c] != ds {
            return Err(Error::Invariant(format!("row {s} has no column of order {ds}")));
        }
        let primes: Vec<u64> = factorize(ds).into_iter().map(|(p, _)| p).collect();
        loop {
            let a = self.local(s, c);
            let Some(&p) = primes.iter().find(|&&p| a % p == 0) else {
                return Ok(());
            };
            let i = (s + 1..d.len())
                .find(|&i| i != c && self.local(s, i) % p != 0)
                .ok_or_else(|| Error::Invariant(format!("row {s} is divisible by {p}: the form is degenerate")))?;
            let t: u64 = primes.iter().filter(|&&q| a % q != 0).product();
            self.push(Step::Shear { i, j: c, sigma: t as i64 })?;
        }
    }
}

/// Reduces a non-degenerate form to the standard one.
///
/// Degenerate input is rejected with an element of the kernel of `e♭`.
pub fn symplectic_reduce(e: &AlternatingForm, limits: &Limits) -> Result<Decomposition> {
    if !e.is_nondegenerate() {
        let witness = e.kernel_witness(limits).map(|w| w.coeffs().to_vec()).unwrap_or_default();
        return Err(Error::Degenerate { witness });
    }
    let group = e.group().clone();
    let mut r = Reducer { form: e.clone(), acc: HomMatrix::identity(&group), trace: Vec::new() };
    let mut s = 0;
    while s < group.rank() {
        r.split_pair(s)?;
        s += 2;
    }
    let base = half(&group).ok_or_else(|| Error::Invariant("reduced group does not pair up".into()))?;
    let standard = standard_form(&base);
    if r.form != standard {
        return Err(Error::Invariant(format!("reduction ended at {:?}, not the standard form", r.form)));
    }
    let source = doubled(&base);
    let phi = HomMatrix::from_fn(&source, &group, |i, j| r.acc.entry(i, j) as i128)?;
    Ok(Decomposition { base, phi, trace: r.trace })
}

/// Invariant factors of `A` for a non-degenerate form.
pub fn canonical_invariants(e: &AlternatingForm, limits: &Limits) -> Result<Vec<u64>> {
    Ok(symplectic_reduce(e, limits)?.base.factors().to_vec())
}

/// A tuple `(x, χ, x', χ')` where the defining identity fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub x: Vec<u64>,
    pub chi: Vec<u64>,
    pub x2: Vec<u64>,
    pub chi2: Vec<u64>,
    /// exponent of `e(φ(x,χ), φ(x',χ'))`
    pub lhs: u64,
    /// exponent of `χ'(x)·χ(x')⁻¹`
    pub rhs: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification {
    Valid { exhaustive: bool },
    NotBijective,
    Counterexample(Counterexample),
}

impl Verification {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verification::Valid { .. })
    }
}

/// Checks that `φ` is bijective and `e(φ(x,χ), φ(x',χ')) = χ'(x)·χ(x')⁻¹`.
///
/// Every pair is scanned when `|K|²` is within the limits; otherwise only
/// generator pairs, which suffices because both sides are biadditive.
pub fn verify_decomposition(e: &AlternatingForm, d: &Decomposition, limits: &Limits) -> Result<Verification> {
    let k = e.group();
    let source = doubled(&d.base);
    if d.phi.target() != k {
        return Err(Error::GroupMismatch { expected: k.to_string(), found: d.phi.target().to_string() });
    }
    if d.phi.source() != &source {
        return Err(Error::GroupMismatch { expected: source.to_string(), found: d.phi.source().to_string() });
    }
    let exhaustive = limits.check(source.order().saturating_mul(source.order())).is_ok();
    let points: Vec<Vec<u64>> = if exhaustive {
        source.elements(limits)?.collect()
    } else {
        (0..source.rank()).map(|i| unit(&source, i)).collect()
    };

    let base = &d.base;
    let top = base.exponent();
    let scale: Vec<u64> = base.factors().iter().map(|&a| top / a).collect();
    let m = base.rank();
    let n = source.rank();
    // `e(φa, φb) - S(a, b)` is `⟨left_a, right_b⟩` with
    // `left_a = (e(φa, ·) row, -S(a, ·) row)` and `right_b = (φb, b)`
    let standard_row = |p: &[u64]| -> Vec<u64> {
        let mut row = vec![0u64; n];
        for k in 0..m {
            row[2 * k] = (top - mul_mod(p[2 * k + 1], scale[k], top)) % top;
            row[2 * k + 1] = mul_mod(p[2 * k], scale[k], top);
        }
        row
    };
    let width = 2 * n;
    let mut left = Vec::with_capacity(points.len() * width);
    let mut right = Vec::with_capacity(points.len() * width);
    for p in &points {
        let image = d.phi.apply_raw(p);
        left.extend(e.left_row(&image));
        left.extend(standard_row(p).iter().map(|&v| (top - v) % top));
        right.extend(image);
        right.extend_from_slice(p);
    }
    // the trivial group has width 0 and nothing to check
    let left: Vec<&[u64]> = left.chunks_exact(width.max(1)).collect();
    let right: Vec<&[u64]> = right.chunks_exact(width.max(1)).collect();
    let pair_sum_fits = (width as u128) * (top as u128) * (top as u128) <= u64::MAX as u128;
    for (a, la) in points.iter().zip(&left) {
        for (b, rb) in points.iter().zip(&right) {
            let zero = if pair_sum_fits {
                la.iter().zip(rb.iter()).map(|(&x, &y)| x * y).sum::<u64>() % top == 0
            } else {
                dot_mod(la, rb, top) == 0
            };
            if !zero {
                let lhs = dot_mod(&la[..n], &rb[..n], top);
                let rhs = dot_mod(&standard_row(a), b, top);
                return Ok(Verification::Counterexample(Counterexample {
                    x: (0..m).map(|i| a[2 * i]).collect(),
                    chi: (0..m).map(|i| a[2 * i + 1]).collect(),
                    x2: (0..m).map(|i| b[2 * i]).collect(),
                    chi2: (0..m).map(|i| b[2 * i + 1]).collect(),
                    lhs,
                    rhs,
                }));
            }
        }
    }
    // implied by the identity when the standard form is non-degenerate;
    // source and target are equal presentations at this point
    if !d.phi.is_automorphism() {
        return Ok(Verification::NotBijective);
    }
    Ok(Verification::Valid { exhaustive })
}

/// Automorphism `α` with `e₁^α = e₂`, built from the two reductions:
/// `α = φ₁ ∘ φ₂⁻¹`.
pub fn transport(d1: &Decomposition, d2: &Decomposition) -> Result<HomMatrix> {
    if d1.phi.target() != d2.phi.target() {
        return Err(Error::GroupMismatch {
            expected: d1.phi.target().to_string(),
            found: d2.phi.target().to_string(),
        });
    }
    let k = d1.phi.target().clone();
    let phi1 = HomMatrix::from_fn(&k, &k, |i, j| d1.phi.entry(i, j) as i128)?;
    phi1.compose(&d2.phi_inverse()?)
}

/// Outcome of reducing every non-degenerate form on one group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCensus {
    pub group: FiniteAbelianGroup,
    pub forms: usize,
    pub single_orbit: bool,
}

/// Reduces every non-degenerate form on `group` and checks that each one is
/// reached from the first by the automorphism assembled from the traces.
pub fn orbit_census(group: &FiniteAbelianGroup, limits: &Limits) -> Result<OrbitCensus> {
    let forms = enumerate_forms(group, true, limits)?;
    let mut single_orbit = true;
    if let Some(first) = forms.first() {
        let d_first = symplectic_reduce(first, limits)?;
        for e in &forms {
            let d = symplectic_reduce(e, limits)?;
            let alpha = transport(&d_first, &d)?;
            single_orbit &= alpha.is_automorphism() && first.transform(&alpha)? == *e;
        }
    }
    Ok(OrbitCensus { group: group.clone(), forms: forms.len(), single_orbit })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[u64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(f).unwrap()
    }

    fn form(f: &[u64], rows: &[Vec<i64>]) -> AlternatingForm {
        AlternatingForm::new(&g(f), rows).unwrap()
    }

    #[test]
    fn existence_examples() {
        assert!(exists_nondegenerate(&FiniteAbelianGroup::trivial()));
        assert!(!exists_nondegenerate(&g(&[4, 2])));
        assert!(exists_nondegenerate(&g(&[4, 4, 2, 2])));
        assert!(!exists_nondegenerate(&g(&[2, 2, 2])));
        let block = form(&[4, 4, 2, 2], &[vec![0, 1, 0, 0], vec![3, 0, 0, 0], vec![0, 0, 0, 2], vec![0, 0, 2, 0]]);
        assert!(block.is_nondegenerate());
    }

    #[test]
    fn reduce_examples() {
        let lim = Limits::default();
        let d = symplectic_reduce(&AlternatingForm::zero(&FiniteAbelianGroup::trivial()), &lim).unwrap();
        assert!(d.base.is_trivial() && d.trace.is_empty());

        let e = form(&[2, 2], &[vec![0, 1], vec![1, 0]]);
        let d = symplectic_reduce(&e, &lim).unwrap();
        assert_eq!(d.base.factors(), &[2]);
        assert_eq!(d.phi, HomMatrix::from_fn(&g(&[2, 2]), &g(&[2, 2]), |i, j| (i == j) as i128).unwrap());
        assert_eq!(verify_decomposition(&e, &d, &lim).unwrap(), Verification::Valid { exhaustive: true });

        let e = form(&[3, 3], &[vec![0, 2], vec![1, 0]]);
        let d = symplectic_reduce(&e, &lim).unwrap();
        assert_eq!(d.base.factors(), &[3]);
        assert_eq!(d.trace, vec![Step::Scale { i: 0, sigma: 2 }]);
        assert!(verify_decomposition(&e, &d, &lim).unwrap().is_valid());
    }

    #[test]
    fn reduce_without_unit_in_first_row() {
        // first row (0, 2, 3, 0) mod 6 generates ℤ/6 but has no unit
        let e = form(&[6, 6, 2, 2], &[vec![0, 2, 3, 0], vec![4, 0, 0, 3], vec![3, 0, 0, 0], vec![0, 3, 0, 0]]);
        assert!(e.is_nondegenerate());
        let d = symplectic_reduce(&e, &Limits::default()).unwrap();
        assert_eq!(d.base.factors(), &[6, 2]);
        assert!(matches!(d.trace[0], Step::Shear { j: 1, .. }));
        assert!(verify_decomposition(&e, &d, &Limits::default()).unwrap().is_valid());
        assert_eq!(d.replay_from_standard().unwrap(), e);
    }

    #[test]
    fn degenerate_input_reports_kernel() {
        let e = form(&[4, 2], &[vec![0, 2], vec![2, 0]]);
        match symplectic_reduce(&e, &Limits::default()) {
            Err(Error::Degenerate { witness }) => {
                let w = e.group().element(&witness.iter().map(|&c| c as i64).collect::<Vec<_>>()).unwrap();
                assert!(!w.is_zero());
                assert!(e.flat().apply(&w).unwrap().is_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn canonical_invariant_examples() {
        let lim = Limits::default();
        let e = form(&[2, 2], &[vec![0, 1], vec![1, 0]]);
        assert_eq!(canonical_invariants(&e, &lim).unwrap(), vec![2]);
        let e = standard_form(&g(&[4, 2]));
        assert_eq!(e.group().factors(), &[4, 4, 2, 2]);
        assert_eq!(canonical_invariants(&e, &lim).unwrap(), vec![4, 2]);
        for e in enumerate_forms(&g(&[5, 5]), true, &lim).unwrap() {
            assert_eq!(canonical_invariants(&e, &lim).unwrap(), vec![5]);
        }
    }

    #[test]
    fn tampered_phi_is_caught() {
        let lim = Limits::default();
        let e = standard_form(&g(&[2]));
        let mut d = symplectic_reduce(&e, &lim).unwrap();
        // â is sent to the image of a
        d.phi = HomMatrix::new(d.phi.source(), d.phi.target(), &[vec![1, 1], vec![0, 0]]).unwrap();
        match verify_decomposition(&e, &d, &lim).unwrap() {
            Verification::Counterexample(c) => {
                assert_ne!(c.lhs, c.rhs);
                assert_eq!(c.rhs, e.eval_raw(&[c.x[0], c.chi[0]], &[c.x2[0], c.chi2[0]]));
            }
            other => panic!("{other:?}"),
        }
        // every automorphism of (Z/2)² preserves the form, swaps included
        d.phi = HomMatrix::new(d.phi.source(), d.phi.target(), &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(verify_decomposition(&e, &d, &lim).unwrap().is_valid());
        d.phi = HomMatrix::new(d.phi.source(), d.phi.target(), &[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(verify_decomposition(&e, &d, &lim).unwrap().is_valid());
        let e3 = standard_form(&g(&[3]));
        let mut d3 = symplectic_reduce(&e3, &lim).unwrap();
        d3.phi = HomMatrix::new(d3.phi.source(), d3.phi.target(), &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(matches!(verify_decomposition(&e3, &d3, &lim).unwrap(), Verification::Counterexample(_)));
        d3.phi = HomMatrix::zero(d3.phi.source(), d3.phi.target());
        assert!(matches!(verify_decomposition(&e3, &d3, &lim).unwrap(), Verification::Counterexample(_)));
    }

    #[test]
    fn trivial_verifies() {
        let t = FiniteAbelianGroup::trivial();
        let e = AlternatingForm::zero(&t);
        let d = symplectic_reduce(&e, &Limits::default()).unwrap();
        assert!(verify_decomposition(&e, &d, &Limits::default()).unwrap().is_valid());
    }

    #[test]
    fn step_inverses() {
        let k = g(&[5, 5]);
        let e = standard_form(&g(&[5]));
        for step in [Step::Scale { i: 0, sigma: 3 }, Step::Swap { i: 0, j: 1 }, Step::Shear { i: 1, j: 0, sigma: 4 }] {
            let back = step.inverse(&k).unwrap();
            let there = step.apply(&e).unwrap().0;
            assert_eq!(back.apply(&there).unwrap().0, e);
        }
    }
}
