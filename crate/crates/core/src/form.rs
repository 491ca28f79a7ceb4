//! Alternating bicharacters as exponent matrices.
//!
//! On `K = ℤ/d₁ × ⋯ × ℤ/dₙ` a bicharacter is fixed by `e(xᵢ, xⱼ) = ζ^{qᵢⱼ}`
//! with `ζ` a primitive `d₁`-th root of unity. The matrix `Q(e) = (qᵢⱼ)` is
//! stored mod `d₁`, skew-symmetric with zero diagonal, and `qᵢⱼ` is a multiple
//! of `d₁/(dᵢ, dⱼ)`. An automorphism `α` acts by `Q(e^α) = αᵀ Q(e) α`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{big_residue, gcd_u64, mod_inverse, mul_mod, residue, smith_normal_form, IntMatrix};
use crate::group::{FiniteAbelianGroup, GroupElement, HomMatrix};
use crate::{Error, Limits, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlternatingForm {
    group: FiniteAbelianGroup,
    q: Vec<u64>,
}

impl AlternatingForm {
    /// Validates a full exponent matrix. Entries are reduced mod `d₁`; the
    /// first offending entry is named in the error.
    pub fn new(group: &FiniteAbelianGroup, rows: &[Vec<i64>]) -> Result<Self> {
        let n = group.rank();
        if rows.len() != n {
            return Err(Error::Shape { expected: n, found: rows.len() });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Shape { expected: n, found: r.len() });
        }
        Self::from_fn(group, |i, j| rows[i][j] as i128)
    }

    pub(crate) fn from_fn(group: &FiniteAbelianGroup, mut f: impl FnMut(usize, usize) -> i128) -> Result<Self> {
        let n = group.rank();
        let top = group.exponent();
        let d = group.factors();
        let mut q = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let value = f(i, j);
                let r = residue(value, top);
                let divisor = top / gcd_u64(d[i], d[j]);
                if r % divisor != 0 {
                    return Err(Error::Constraint { row: i, col: j, value, divisor });
                }
                q[i * n + j] = r;
            }
        }
        for i in 0..n {
            if q[i * n + i] != 0 {
                return Err(Error::NonzeroDiagonal(i));
            }
            for j in i + 1..n {
                if (q[i * n + j] + q[j * n + i]) % top != 0 {
                    return Err(Error::NotSkew { row: i, col: j, modulus: top });
                }
            }
        }
        Ok(AlternatingForm { group: group.clone(), q })
    }

    pub fn zero(group: &FiniteAbelianGroup) -> Self {
        AlternatingForm { group: group.clone(), q: vec![0; group.rank() * group.rank()] }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    /// The modulus `d₁` of the exponents.
    pub fn modulus(&self) -> u64 {
        self.group.exponent()
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.q[i * self.group.rank() + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        let n = self.group.rank();
        (0..n).map(|i| self.q[i * n..(i + 1) * n].to_vec()).collect()
    }

    /// Exponent of `e(k, l)`: `Σ kᵢ lⱼ qᵢⱼ mod d₁`.
    pub fn eval(&self, k: &GroupElement, l: &GroupElement) -> Result<u64> {
        self.group.check_member(k)?;
        self.group.check_member(l)?;
        Ok(self.eval_raw(k.coeffs(), l.coeffs()))
    }

    pub(crate) fn eval_raw(&self, k: &[u64], l: &[u64]) -> u64 {
        let row = self.left_row(k);
        dot_mod(&row, l, self.modulus())
    }

    /// `wⱼ = Σᵢ kᵢ qᵢⱼ mod d₁`, so that `e(k, l) = Σⱼ wⱼ lⱼ`.
    pub(crate) fn left_row(&self, k: &[u64]) -> Vec<u64> {
        let n = self.group.rank();
        let top = self.modulus();
        let mut w = vec![0u64; n];
        for (i, &ki) in k.iter().enumerate() {
            if ki == 0 {
                continue;
            }
            for (j, wj) in w.iter_mut().enumerate() {
                *wj = (*wj + mul_mod(ki, self.q[i * n + j], top)) % top;
            }
        }
        w
    }

    /// Matrix of `e♭: K → K̂`, `l ↦ e(·, l)`, in the self-dual presentation:
    /// `pairing(k, e♭(l)) = e(k, l)`, i.e. `hᵢⱼ = qᵢⱼ / (d₁/dᵢ) mod dᵢ`.
    pub fn flat(&self) -> HomMatrix {
        let top = self.modulus();
        let d = self.group.factors();
        HomMatrix::from_fn(&self.group, &self.group, |i, j| (self.entry(i, j) / (top / d[i])) as i128)
            .expect("flat of an admissible form is admissible")
    }

    /// `e♭` is an isomorphism. The empty form on the trivial group counts as
    /// non-degenerate.
    pub fn is_nondegenerate(&self) -> bool {
        self.flat().is_automorphism()
    }

    /// A nonzero `l` with `e(·, l)` trivial, if one exists.
    pub fn kernel_witness(&self, limits: &Limits) -> Option<GroupElement> {
        let flat = self.flat();
        if let Ok(all) = self.group.elements(limits) {
            return all
                .skip(1)
                .find(|l| flat.apply_raw(l).iter().all(|&c| c == 0))
                .map(|l| self.group.element_unchecked(l));
        }
        // kernel of [h | diag(d)] over ℤ, projected to the l-coordinates
        let n = self.group.rank();
        let d = self.group.factors();
        let mut system = IntMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                system[(i, j)] = BigInt::from(flat.entry(i, j));
            }
            system[(i, n + i)] = BigInt::from(d[i]);
        }
        let smith = smith_normal_form(&system);
        let diag = smith.diagonal();
        (0..2 * n)
            .filter(|&c| c >= diag.len() || diag[c].is_zero())
            .map(|c| (0..n).map(|k| big_residue(&smith.v[(k, c)], d[k])).collect::<Vec<_>>())
            .find(|l| l.iter().any(|&x| x != 0))
            .map(|l| self.group.element_unchecked(l))
    }

    /// `e^α(k, l) = e(α(k), α(l))` for an endomorphism `α`, via
    /// `Q(e^α) = αᵀ Q(e) α`, checked pointwise on generators.
    pub fn transform(&self, alpha: &HomMatrix) -> Result<AlternatingForm> {
        if alpha.source() != &self.group || alpha.target() != &self.group {
            return Err(Error::GroupMismatch {
                expected: self.group.to_string(),
                found: format!("{:?}", alpha),
            });
        }
        let n = self.group.rank();
        let top = self.modulus() as i128;
        // Q·α
        let mut qa = vec![0i128; n * n];
        for i in 0..n {
            for j in 0..n {
                qa[i * n + j] = (0..n).map(|k| self.entry(i, k) as i128 * alpha.entry(k, j) as i128).sum::<i128>() % top;
            }
        }
        let out = Self::from_fn(&self.group, |i, j| {
            (0..n).map(|k| alpha.entry(k, i) as i128 * qa[k * n + j]).sum::<i128>() % top
        })
        .map_err(|e| Error::Invariant(format!("transformed matrix is not an alternating form: {e}")))?;

        let images: Vec<Vec<u64>> = (0..n).map(|j| alpha.apply_raw(&unit(&self.group, j))).collect();
        for i in 0..n {
            for j in 0..n {
                if out.entry(i, j) != self.eval_raw(&images[i], &images[j]) {
                    return Err(Error::Invariant(format!(
                        "congruence and pointwise pullback disagree at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(out)
    }

    /// `β_{iσ}`: scale generator `i` by a unit `σ` mod `dᵢ` (row and column `i`
    /// times `σ`).
    pub fn op_scale(&self, i: usize, sigma: i64) -> Result<(AlternatingForm, HomMatrix)> {
        self.check_index(i)?;
        let di = self.group.factors()[i];
        if mod_inverse(&(sigma as i128), &(di as i128)).is_none() {
            return Err(Error::NotUnit { sigma, modulus: di });
        }
        let alpha = HomMatrix::from_fn(&self.group, &self.group, |r, c| match (r == c, r == i) {
            (true, true) => sigma as i128,
            (true, false) => 1,
            _ => 0,
        })?;
        let direct = self.row_col_op(|q, n| {
            for k in 0..n {
                q[i * n + k] *= sigma as i128;
                q[k * n + i] *= sigma as i128;
            }
        })?;
        self.realize(direct, alpha)
    }

    /// `π_{ij}`: interchange generators `i` and `j`, allowed when `dᵢ = dⱼ`.
    pub fn op_swap(&self, i: usize, j: usize) -> Result<(AlternatingForm, HomMatrix)> {
        self.check_index(i)?;
        self.check_index(j)?;
        let d = self.group.factors();
        if d[i] != d[j] {
            return Err(Error::UnequalOrders { i, j, di: d[i], dj: d[j] });
        }
        let perm = |k: usize| if k == i { j } else if k == j { i } else { k };
        let alpha = HomMatrix::from_fn(&self.group, &self.group, |r, c| (r == perm(c)) as i128)?;
        let n = self.group.rank();
        let direct = Self::from_fn(&self.group, |r, c| self.q[perm(r) * n + perm(c)] as i128)?;
        self.realize(direct, alpha)
    }

    /// `α_{ijσ}`: add `σ`·row `i` to row `j` and `σ`·column `i` to column `j`,
    /// realized by `xⱼ ↦ xⱼ + σxᵢ`; needs `dᵢ/(dᵢ, dⱼ) | σ`.
    pub fn op_shear(&self, i: usize, j: usize, sigma: i64) -> Result<(AlternatingForm, HomMatrix)> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::ShearDiagonal(i));
        }
        let d = self.group.factors();
        let divisor = d[i] / gcd_u64(d[i], d[j]);
        if sigma.rem_euclid(divisor as i64) != 0 {
            return Err(Error::ShearDivisibility { i, j, sigma, divisor });
        }
        let alpha = HomMatrix::from_fn(&self.group, &self.group, |r, c| {
            if r == c {
                1
            } else if (r, c) == (i, j) {
                sigma as i128
            } else {
                0
            }
        })?;
        let direct = self.row_col_op(|q, n| {
            for k in 0..n {
                q[j * n + k] += sigma as i128 * q[i * n + k];
            }
            for k in 0..n {
                q[k * n + j] += sigma as i128 * q[k * n + i];
            }
        })?;
        self.realize(direct, alpha)
    }

    fn row_col_op(&self, op: impl FnOnce(&mut [i128], usize)) -> Result<AlternatingForm> {
        let n = self.group.rank();
        let top = self.modulus() as i128;
        let mut q: Vec<i128> = self.q.iter().map(|&x| x as i128).collect();
        op(&mut q, n);
        Self::from_fn(&self.group, |r, c| q[r * n + c] % top)
    }

    // the row/column recipe must agree with the pullback along its automorphism
    fn realize(&self, direct: AlternatingForm, alpha: HomMatrix) -> Result<(AlternatingForm, HomMatrix)> {
        let pulled = self.transform(&alpha)?;
        if pulled != direct {
            return Err(Error::Invariant(format!(
                "row/column operation {:?} disagrees with pullback {:?}",
                direct.to_rows(),
                pulled.to_rows()
            )));
        }
        Ok((direct, alpha))
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.group.rank() {
            return Err(Error::Index { index: i, rank: self.group.rank() });
        }
        Ok(())
    }
}

impl fmt::Debug for AlternatingForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} q={:?}", self.group, self.to_rows())
    }
}

pub(crate) fn unit(group: &FiniteAbelianGroup, i: usize) -> Vec<u64> {
    let mut v = vec![0; group.rank()];
    v[i] = 1 % group.factors()[i];
    v
}

pub(crate) fn dot_mod(a: &[u64], b: &[u64], m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        // residues below 2³² multiply within u64; sum in u64 while it cannot overflow
        if (a.len() as u128) * (m as u128) * (m as u128) <= u64::MAX as u128 {
            return a.iter().zip(b).map(|(&x, &y)| x * y).sum::<u64>() % m;
        }
        let sum = a.iter().zip(b).fold(0u128, |acc, (&x, &y)| acc + (x * y) as u128);
        return (sum % m as u128) as u64;
    }
    a.iter().zip(b).fold(0u64, |acc, (&x, &y)| (acc + mul_mod(x, y, m)) % m)
}

/// All admissible alternating forms on a group, indexed by the free upper
/// triangle: entry `(i, j)`, `i < j`, ranges over the multiples of
/// `d₁/(dᵢ, dⱼ)`, the last pair varying fastest.
#[derive(Clone, Debug)]
pub struct FormSpace {
    group: FiniteAbelianGroup,
    slots: Vec<(usize, usize)>,
    steps: Vec<u64>,
    counts: Vec<u64>,
}

impl FormSpace {
    pub fn new(group: &FiniteAbelianGroup) -> Self {
        let n = group.rank();
        let d = group.factors();
        let top = group.exponent();
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let steps = slots.iter().map(|&(i, j)| top / gcd_u64(d[i], d[j])).collect();
        let counts = slots.iter().map(|&(i, j)| gcd_u64(d[i], d[j])).collect();
        FormSpace { group: group.clone(), slots, steps, counts }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    /// Number of admissible forms (saturating).
    pub fn len(&self) -> u128 {
        self.counts.iter().fold(1u128, |acc, &c| acc.saturating_mul(c as u128))
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The form at position `index` of the enumeration order.
    pub fn form_at(&self, mut index: u128) -> AlternatingForm {
        assert!(index < self.len(), "form index out of range");
        let mut digits = vec![0u64; self.slots.len()];
        for k in (0..self.slots.len()).rev() {
            let c = self.counts[k] as u128;
            digits[k] = (index % c) as u64;
            index /= c;
        }
        self.assemble(&digits)
    }

    fn assemble(&self, digits: &[u64]) -> AlternatingForm {
        let n = self.group.rank();
        let top = self.group.exponent();
        let mut q = vec![0u64; n * n];
        for ((&(i, j), &step), &digit) in self.slots.iter().zip(&self.steps).zip(digits) {
            let v = digit * step;
            q[i * n + j] = v;
            q[j * n + i] = (top - v) % top;
        }
        AlternatingForm { group: self.group.clone(), q }
    }

    /// Every admissible form, in index order.
    pub fn iter(&self, limits: &Limits) -> Result<Forms<'_>> {
        limits.check(self.len())?;
        Ok(Forms { space: self, next: Some(vec![0; self.slots.len()]) })
    }
}

pub struct Forms<'a> {
    space: &'a FormSpace,
    next: Option<Vec<u64>>,
}

impl Iterator for Forms<'_> {
    type Item = AlternatingForm;

    fn next(&mut self) -> Option<AlternatingForm> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for k in (0..succ.len()).rev() {
            succ[k] += 1;
            if succ[k] < self.space.counts[k] {
                self.next = Some(succ);
                break;
            }
            succ[k] = 0;
        }
        Some(self.space.assemble(&current))
    }
}

/// Every admissible form on `group`, optionally only the non-degenerate ones.
pub fn enumerate_forms(
    group: &FiniteAbelianGroup,
    nondegenerate_only: bool,
    limits: &Limits,
) -> Result<Vec<AlternatingForm>> {
    let space = FormSpace::new(group);
    let forms = space.iter(limits)?;
    Ok(forms.filter(|e| !nondegenerate_only || e.is_nondegenerate()).collect())
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
    fn validation_names_offending_entry() {
        let k = g(&[4, 2]);
        assert_eq!(
            AlternatingForm::new(&k, &[vec![0, 1], vec![3, 0]]),
            Err(Error::Constraint { row: 0, col: 1, value: 1, divisor: 2 })
        );
        assert_eq!(AlternatingForm::new(&k, &[vec![0, 2], vec![0, 0]]), Err(Error::NotSkew { row: 0, col: 1, modulus: 4 }));
        assert_eq!(AlternatingForm::new(&g(&[3, 3]), &[vec![1, 1], vec![2, 0]]), Err(Error::NonzeroDiagonal(0)));
        assert!(matches!(AlternatingForm::new(&k, &[vec![0, 2]]), Err(Error::Shape { .. })));
    }

    #[test]
    fn eval_examples() {
        let e = form(&[2, 2], &[vec![0, 1], vec![1, 0]]);
        let k = e.group().clone();
        let (x1, x2) = (k.generator(0).unwrap(), k.generator(1).unwrap());
        assert_eq!(e.eval(&x1, &x2).unwrap(), 1);
        let e = form(&[4, 2], &[vec![0, 2], vec![2, 0]]);
        let k = e.group().clone();
        assert_eq!(e.eval(&k.element(&[1, 0]).unwrap(), &k.element(&[0, 1]).unwrap()).unwrap(), 2);
        for x in k.elements(&Limits::default()).unwrap() {
            assert_eq!(e.eval_raw(&x, &x), 0);
        }
    }

    #[test]
    fn flat_examples() {
        assert_eq!(AlternatingForm::zero(&g(&[4, 2])).flat(), HomMatrix::zero(&g(&[4, 2]), &g(&[4, 2])));
        let e = form(&[2, 2], &[vec![0, 1], vec![1, 0]]);
        assert_eq!(e.flat().to_rows(), vec![vec![0, 1], vec![1, 0]]);
        // row i is divided by d₁/dᵢ
        let e = form(&[4, 2], &[vec![0, 2], vec![2, 0]]);
        assert_eq!(e.flat().to_rows(), vec![vec![0, 2], vec![1, 0]]);
    }

    #[test]
    fn nondegeneracy_examples() {
        assert!(!AlternatingForm::zero(&g(&[2, 2])).is_nondegenerate());
        assert!(form(&[2, 2], &[vec![0, 1], vec![1, 0]]).is_nondegenerate());
        assert!(!form(&[4, 2], &[vec![0, 2], vec![2, 0]]).is_nondegenerate());
        assert!(AlternatingForm::zero(&FiniteAbelianGroup::trivial()).is_nondegenerate());
    }

    #[test]
    fn kernel_witness_both_routes() {
        let e = form(&[4, 2], &[vec![0, 2], vec![2, 0]]);
        let small = e.kernel_witness(&Limits::default()).unwrap();
        let large = e.kernel_witness(&Limits::new(1)).unwrap();
        for w in [small, large] {
            assert!(!w.is_zero());
            assert!(e.flat().apply(&w).unwrap().is_zero());
        }
        assert!(form(&[2, 2], &[vec![0, 1], vec![1, 0]]).kernel_witness(&Limits::new(1)).is_none());
    }

    #[test]
    fn transform_examples() {
        let e = form(&[2, 2], &[vec![0, 1], vec![1, 0]]);
        let k = e.group().clone();
        assert_eq!(e.transform(&HomMatrix::identity(&k)).unwrap(), e);
        let swap = HomMatrix::new(&k, &k, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(e.transform(&swap).unwrap(), e);
        let e = form(&[3, 3], &[vec![0, 1], vec![2, 0]]);
        let k = e.group().clone();
        let a = HomMatrix::new(&k, &k, &[vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(e.transform(&a).unwrap().to_rows(), vec![vec![0, 2], vec![1, 0]]);
    }

    #[test]
    fn scale_examples() {
        let e = form(&[3, 3], &[vec![0, 1], vec![2, 0]]);
        assert_eq!(e.op_scale(0, 1).unwrap().0, e);
        let (e2, a) = e.op_scale(0, 2).unwrap();
        assert_eq!(e2.to_rows(), vec![vec![0, 2], vec![1, 0]]);
        assert!(a.is_automorphism());
        let e = form(&[2, 2], &[vec![0, 1], vec![1, 0]]);
        assert_eq!(e.op_scale(0, 2), Err(Error::NotUnit { sigma: 2, modulus: 2 }));
        assert!(e.op_scale(0, -1).is_ok());
    }

    #[test]
    fn swap_examples() {
        let e = form(&[2, 2], &[vec![0, 1], vec![1, 0]]);
        let (same, a) = e.op_swap(1, 1).unwrap();
        assert_eq!((same, a), (e.clone(), HomMatrix::identity(e.group())));
        assert_eq!(e.op_swap(0, 1).unwrap().0, e);
        let e = form(&[4, 2], &[vec![0, 2], vec![2, 0]]);
        assert!(matches!(e.op_swap(0, 1), Err(Error::UnequalOrders { .. })));
    }

    #[test]
    fn shear_examples() {
        let e = form(&[2, 2], &[vec![0, 1], vec![1, 0]]);
        assert_eq!(e.op_shear(0, 1, 0).unwrap(), (e.clone(), HomMatrix::identity(e.group())));
        let (e2, a) = e.op_shear(0, 1, 1).unwrap();
        assert_eq!(e2, e);
        assert_eq!(a.to_rows(), vec![vec![1, 1], vec![0, 1]]);
        let e = form(&[4, 2], &[vec![0, 2], vec![2, 0]]);
        assert_eq!(e.op_shear(0, 1, 1), Err(Error::ShearDivisibility { i: 0, j: 1, sigma: 1, divisor: 2 }));
        assert!(e.op_shear(1, 0, 1).is_ok());
        assert!(e.op_shear(0, 1, 2).is_ok());
        assert_eq!(e.op_shear(0, 0, 2), Err(Error::ShearDiagonal(0)));
        // x₁ ↦ x₁ + x₃ on (6,6,3,3): row 0 gains row 2
        let e = form(&[6, 6, 3, 3], &[vec![0, 1, 2, 4], vec![5, 0, 0, 2], vec![4, 0, 0, 4], vec![2, 4, 2, 0]]);
        assert!(matches!(e.op_shear(0, 2, 5), Err(Error::ShearDivisibility { divisor: 2, .. })));
        let (e2, _) = e.op_shear(2, 0, 1).unwrap();
        assert_eq!(e2.entry(0, 1), 1);
        assert_eq!(e2.entry(0, 3), 2);
        assert_eq!(e2.entry(3, 0), 4);
    }

    #[test]
    fn enumeration_counts() {
        let lim = Limits::default();
        let t = FiniteAbelianGroup::trivial();
        let all = enumerate_forms(&t, false, &lim).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].is_nondegenerate());
        assert_eq!(enumerate_forms(&g(&[2, 2]), false, &lim).unwrap().len(), 2);
        assert_eq!(enumerate_forms(&g(&[2, 2]), true, &lim).unwrap().len(), 1);
        assert_eq!(enumerate_forms(&g(&[3, 3]), false, &lim).unwrap().len(), 3);
        let nd = enumerate_forms(&g(&[3, 3]), true, &lim).unwrap();
        assert_eq!(nd.iter().map(|e| e.entry(0, 1)).collect::<Vec<_>>(), vec![1, 2]);
        assert!(enumerate_forms(&g(&[4, 2]), true, &lim).unwrap().is_empty());
        assert!(matches!(enumerate_forms(&g(&[3, 3]), false, &Limits::new(2)), Err(Error::BoundExceeded { .. })));

        let space = FormSpace::new(&g(&[4, 4, 2]));
        let listed: Vec<_> = space.iter(&lim).unwrap().collect();
        assert_eq!(listed.len() as u128, space.len());
        for (idx, e) in listed.iter().enumerate() {
            assert_eq!(&space.form_at(idx as u128), e);
        }
    }
}
