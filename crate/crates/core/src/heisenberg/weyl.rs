//! Translation and modulation operators on `L²(A)`.

use std::collections::VecDeque;
use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::form::unit;
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::{Limits, Result};
#[cfg(test)]
use crate::Error;

/// Largest `|A|` for which dense operators are built by default.
pub const DEFAULT_MAX_DIM: usize = 64;

/// Max-entry tolerance for the commutator and unitarity relations.
pub const RELATION_TOL: f64 = 1e-12;

/// Singular values at or below this count toward the commutant.
pub const RANK_TOL: f64 = 1e-8;

/// Above this dimension every pair is too many; generator pairs are checked.
const EXHAUSTIVE_DIM: usize = 16;

/// Dense SVD is used for the commutant up to this dimension.
const SVD_DIM: usize = 16;

/// `T_x f(y) = f(y - x)` and `M_χ f(y) = χ(y) f(y)` as `|A| × |A|` matrices,
/// indexed by the lexicographic element order of `A`.
#[derive(Clone, Debug)]
pub struct WeylOperators {
    group: FiniteAbelianGroup,
    elements: Vec<Vec<u64>>,
    roots: Vec<Complex64>,
    translations: Vec<DMatrix<Complex64>>,
    modulations: Vec<DMatrix<Complex64>>,
}

pub fn weyl_operators(group: &FiniteAbelianGroup, max_dim: usize) -> Result<WeylOperators> {
    let elements: Vec<Vec<u64>> = group.elements(&Limits::new(max_dim as u64))?.collect();
    let n = elements.len();
    let top = group.exponent();
    let roots: Vec<Complex64> = (0..top)
        .map(|t| {
            let (s, c) = (TAU * t as f64 / top as f64).sin_cos();
            Complex64::new(c, s)
        })
        .collect();
    let translations = elements
        .iter()
        .map(|x| {
            let mut t = DMatrix::zeros(n, n);
            for (col, y) in elements.iter().enumerate() {
                // δ_y ↦ δ_{y+x}
                t[(group.index_of(&group.add_raw(y, x)), col)] = Complex64::new(1.0, 0.0);
            }
            t
        })
        .collect();
    let modulations = elements
        .iter()
        .map(|chi| DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, elements.iter().map(|y| roots[group.pairing_raw(y, chi) as usize]))))
        .collect();
    Ok(WeylOperators { group: group.clone(), elements, roots, translations, modulations })
}

impl WeylOperators {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn translation(&self, x: &GroupElement) -> Result<&DMatrix<Complex64>> {
        self.group.check_member(x)?;
        Ok(&self.translations[self.group.index_of(x.coeffs())])
    }

    pub fn modulation(&self, chi: &GroupElement) -> Result<&DMatrix<Complex64>> {
        self.group.check_member(chi)?;
        Ok(&self.modulations[self.group.index_of(chi.coeffs())])
    }

    /// `exp(2πi t / d₁)`.
    fn root(&self, t: u64) -> Complex64 {
        self.roots[(t % self.group.exponent()) as usize]
    }
}

/// One relation that missed tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylFailure {
    pub relation: String,
    /// element coordinates of the operators involved, `x, χ` per operator
    pub operands: Vec<Vec<u64>>,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeylReport {
    pub dim: usize,
    /// largest max-entry distance of a commutator from its expected scalar
    pub max_deviation: f64,
    pub unitarity_deviation: f64,
    pub unitarity_ok: bool,
    pub commutant_dimension: usize,
    pub pairs_checked: u64,
    /// all pairs of `T_x M_χ` rather than generator pairs
    pub exhaustive: bool,
    pub failures: Vec<WeylFailure>,
}

impl WeylReport {
    pub fn is_ok(&self) -> bool {
        self.max_deviation <= RELATION_TOL && self.unitarity_ok && self.commutant_dimension == 1 && self.failures.is_empty()
    }
}

fn max_entry_distance(a: &DMatrix<Complex64>, scalar: Complex64) -> f64 {
    let mut worst = 0.0f64;
    for c in 0..a.ncols() {
        for r in 0..a.nrows() {
            let expected = if r == c { scalar } else { Complex64::new(0.0, 0.0) };
            worst = worst.max((a[(r, c)] - expected).norm());
        }
    }
    worst
}

/// Checks the operator relations of the standard Heisenberg group.
///
/// For `U = T_x M_χ`, `V = T_{x'} M_{χ'}` the group commutator `UVU⁻¹V⁻¹`
/// must be `χ(x')·χ'(x)⁻¹` times the identity, i.e. `exp(2πi·s/d₁)` where
/// `s` is the standard form evaluated at `((x',χ'), (x,χ))`.
pub fn verify_weyl_relations(w: &WeylOperators) -> WeylReport {
    let group = &w.group;
    let n = w.dim();
    let mut failures = Vec::new();

    let mut unitarity_deviation = 0.0f64;
    for (label, ops) in [("unitary translation", &w.translations), ("unitary modulation", &w.modulations)] {
        for (idx, op) in ops.iter().enumerate() {
            let dev = max_entry_distance(&(op * op.adjoint()), Complex64::new(1.0, 0.0));
            unitarity_deviation = unitarity_deviation.max(dev);
            if dev > RELATION_TOL {
                failures.push(WeylFailure { relation: label.into(), operands: vec![w.elements[idx].clone()], deviation: dev });
            }
        }
    }

    let exhaustive = n <= EXHAUSTIVE_DIM;
    let labels: Vec<(usize, usize)> = if exhaustive {
        (0..n).flat_map(|x| (0..n).map(move |c| (x, c))).collect()
    } else {
        let zero = 0;
        (0..group.rank())
            .flat_map(|i| {
                let g = group.index_of(&unit(group, i));
                [(g, zero), (zero, g)]
            })
            .collect()
    };
    let ops: Vec<DMatrix<Complex64>> = labels.iter().map(|&(x, c)| &w.translations[x] * &w.modulations[c]).collect();
    let adjoints: Vec<DMatrix<Complex64>> = ops.iter().map(|u| u.adjoint()).collect();

    let mut max_deviation = 0.0f64;
    let mut pairs_checked = 0u64;
    for (a, &(x, chi)) in labels.iter().enumerate() {
        for (b, &(x2, chi2)) in labels.iter().enumerate() {
            let comm = &ops[a] * &ops[b] * &adjoints[a] * &adjoints[b];
            let (x, chi, x2, chi2) = (&w.elements[x], &w.elements[chi], &w.elements[x2], &w.elements[chi2]);
            let top = group.exponent();
            let exponent = (group.pairing_raw(x2, chi) + top - group.pairing_raw(x, chi2)) % top;
            let dev = max_entry_distance(&comm, w.root(exponent));
            max_deviation = max_deviation.max(dev);
            pairs_checked += 1;
            if dev > RELATION_TOL {
                failures.push(WeylFailure {
                    relation: "commutator".into(),
                    operands: vec![x.clone(), chi.clone(), x2.clone(), chi2.clone()],
                    deviation: dev,
                });
            }
        }
    }

    let commutant_dimension = commutant_dimension(w);
    WeylReport {
        dim: n,
        max_deviation,
        unitarity_deviation,
        unitarity_ok: unitarity_deviation <= RELATION_TOL,
        commutant_dimension,
        pairs_checked,
        exhaustive,
        failures,
    }
}

fn generators(w: &WeylOperators) -> Vec<&DMatrix<Complex64>> {
    let group = &w.group;
    (0..group.rank())
        .flat_map(|i| {
            let g = group.index_of(&unit(group, i));
            [&w.translations[g], &w.modulations[g]]
        })
        .collect()
}

/// Dimension of `{X : XG = GX}` over the generators `T_{xᵢ}`, `M_{xᵢ}`.
pub(crate) fn commutant_dimension(w: &WeylOperators) -> usize {
    if w.dim() <= SVD_DIM {
        commutant_dimension_svd(w)
    } else {
        commutant_dimension_monomial(w)
    }
}

/// Nullity of the stacked `Gᵀ ⊗ I - I ⊗ G`, counted from singular values.
pub(crate) fn commutant_dimension_svd(w: &WeylOperators) -> usize {
    let n = w.dim();
    let gens = generators(w);
    let cols = n * n;
    let identity = DMatrix::<Complex64>::identity(n, n);
    let mut system = DMatrix::<Complex64>::zeros(gens.len() * cols, cols);
    for (idx, g) in gens.iter().enumerate() {
        let block = g.transpose().kronecker(&identity) - identity.kronecker(*g);
        system.view_mut((idx * cols, 0), (cols, cols)).copy_from(&block);
    }
    let missing = cols.saturating_sub(system.nrows());
    if system.nrows() == 0 {
        return cols;
    }
    let values = system.singular_values();
    missing + values.iter().filter(|&&s| s <= RANK_TOL).count()
}

/// Same nullity for monomial generators without dense algebra.
///
/// Writing `G e_b = g_b e_{π(b)}`, each entry of `XG = GX` reads
/// `X[r][π c]·g_c = g_{π⁻¹r}·X[π⁻¹r][c]`, an edge between two unknowns
/// with a unit-modulus ratio. A connected component contributes one free
/// parameter when the ratios around its cycles are consistent, and none
/// otherwise.
pub(crate) fn commutant_dimension_monomial(w: &WeylOperators) -> usize {
    let n = w.dim();
    let cells = n * n;
    let mut edges: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); cells];
    for g in generators(w) {
        let mut pre = vec![0usize; n];
        let mut post = vec![0usize; n];
        let mut gain = vec![Complex64::new(0.0, 0.0); n];
        for b in 0..n {
            let r = (0..n).find(|&r| g[(r, b)].norm() > 0.5).expect("operators are monomial");
            pre[r] = b;
            post[b] = r;
            gain[b] = g[(r, b)];
        }
        for r in 0..n {
            for c in 0..n {
                // X[r][post c] = ratio · X[pre r][c]
                let u = r * n + post[c];
                let v = pre[r] * n + c;
                let ratio = gain[pre[r]] / gain[c];
                edges[u].push((v, ratio));
                edges[v].push((u, ratio.inv()));
            }
        }
    }

    let mut value: Vec<Option<Complex64>> = vec![None; cells];
    let mut free = 0;
    for root in 0..cells {
        if value[root].is_some() {
            continue;
        }
        value[root] = Some(Complex64::new(1.0, 0.0));
        let mut consistent = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let vu = value[u].expect("queued cells are assigned");
            for &(v, ratio) in &edges[u] {
                // X[u] = ratio · X[v]
                let want = vu / ratio;
                match value[v] {
                    Some(vv) => consistent &= (vv - want).norm() <= RANK_TOL,
                    None => {
                        value[v] = Some(want);
                        queue.push_back(v);
                    }
                }
            }
        }
        free += usize::from(consistent);
    }
    free
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ops(f: &[u64]) -> WeylOperators {
        weyl_operators(&FiniteAbelianGroup::new(f).unwrap(), DEFAULT_MAX_DIM).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn z2_matrices() {
        let w = ops(&[2]);
        let one = w.group().element(&[1]).unwrap();
        let t = w.translation(&one).unwrap();
        assert_eq!(*t, DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]));
        let m = w.modulation(&one).unwrap();
        assert!((m[(0, 0)] - c(1.0)).norm() < 1e-15);
        assert!((m[(1, 1)] - c(-1.0)).norm() < 1e-15);
        assert_eq!(m[(0, 1)], c(0.0));
        assert_eq!(*w.translation(&w.group().zero()).unwrap(), DMatrix::identity(2, 2));

        // [T₁, M_χ] = -1
        let comm = t * m * t.adjoint() * m.adjoint();
        assert!(max_entry_distance(&comm, c(-1.0)) < 1e-12);
        let u = t * m;
        assert!(max_entry_distance(&(&u * &u * u.adjoint() * u.adjoint()), c(1.0)) < 1e-12);
    }

    #[test]
    fn translation_shifts_functions() {
        let w = ops(&[3]);
        let one = w.group().element(&[1]).unwrap();
        let t = w.translation(&one).unwrap();
        let f = nalgebra::DVector::from_vec(vec![c(10.0), c(20.0), c(30.0)]);
        // (T₁f)(y) = f(y - 1)
        let g = t * &f;
        assert_eq!(g[1], c(10.0));
        assert_eq!(g[0], c(30.0));
        assert!(max_entry_distance(&(t * t * t), c(1.0)) < 1e-12);
    }

    #[test]
    fn z3_report() {
        let report = verify_weyl_relations(&ops(&[3]));
        assert!(report.is_ok(), "{report:?}");
        assert_eq!(report.commutant_dimension, 1);
        assert_eq!(report.pairs_checked, 81);
    }

    #[test]
    fn commutant_solvers_agree() {
        for f in [&[][..], &[2], &[3], &[4], &[2, 2], &[6], &[4, 2], &[2, 2, 2], &[4, 4]] {
            let w = ops(f);
            assert_eq!(commutant_dimension_svd(&w), commutant_dimension_monomial(&w), "{f:?}");
        }
    }

    #[test]
    fn reducible_system_has_larger_commutant() {
        // translations alone commute with every translation
        let mut w = ops(&[3]);
        w.modulations.iter_mut().for_each(|m| *m = DMatrix::identity(3, 3));
        assert_eq!(commutant_dimension_svd(&w), 3);
        assert_eq!(commutant_dimension_monomial(&w), 3);
    }

    #[test]
    fn large_groups_use_generator_pairs() {
        let report = verify_weyl_relations(&ops(&[6, 6]));
        assert!(!report.exhaustive);
        assert!(report.is_ok(), "{report:?}");
    }

    #[test]
    fn budget() {
        let g = FiniteAbelianGroup::new(&[8, 8, 2]).unwrap();
        assert!(matches!(weyl_operators(&g, DEFAULT_MAX_DIM), Err(Error::BoundExceeded { .. })));
    }
}
