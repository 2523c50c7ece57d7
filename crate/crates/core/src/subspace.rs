//! Subspaces of `Q^n` in canonical form.
//!
//! A [`Subspace`] stores the reduced row echelon basis of its span, so two
//! subspaces are equal exactly when their stored bases are entry-wise equal.

use crate::matrix::{coordinates_in, LinalgError, RatMatrix};
use crate::rational::Rational;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient_dim: usize,
    /// RREF rows, no zero rows.
    basis: RatMatrix,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Self {
            ambient_dim: n,
            basis: RatMatrix::zeros(0, n),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            ambient_dim: n,
            basis: RatMatrix::identity(n),
        }
    }

    pub fn span<V: AsRef<[Rational]>>(n: usize, vectors: impl IntoIterator<Item = V>) -> Self {
        let m = RatMatrix::stack(n, vectors.into_iter().map(|v| v.as_ref().to_vec()));
        Self::from_row_matrix(&m)
    }

    fn from_row_matrix(m: &RatMatrix) -> Self {
        let n = m.cols();
        let r = m.rref();
        let rows = (0..r.rank).map(|i| r.matrix.row(i).to_vec());
        Self {
            ambient_dim: n,
            basis: RatMatrix::stack(n, rows),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> impl Iterator<Item = &[Rational]> + '_ {
        self.basis.row_vectors()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    fn check_ambient(&self, other: &Self) -> Result<(), LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        Ok(())
    }

    /// `self + other`.
    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_ambient(other)?;
        let rows = self.basis_vectors().chain(other.basis_vectors());
        Ok(Self::span(self.ambient_dim, rows))
    }

    /// `self ∩ other`, from the kernel of `[U^T | -W^T]`.
    pub fn intersect(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_ambient(other)?;
        let n = self.ambient_dim;
        let (k, l) = (self.dim(), other.dim());
        if k == 0 || l == 0 {
            return Ok(Self::zero(n));
        }
        let system = RatMatrix::from_fn(n, k + l, |i, j| {
            if j < k {
                self.basis.get(j, i).clone()
            } else {
                -other.basis.get(j - k, i).clone()
            }
        });
        let relations = system.kernel();
        let vectors = relations.basis_vectors().map(|coef| {
            let mut v = vec![Rational::zero(); n];
            for (j, c) in coef[..k].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (vi, u) in v.iter_mut().zip(self.basis.row(j)) {
                    *vi += c * u;
                }
            }
            v
        });
        Ok(Self::span(n, vectors))
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> Result<bool, LinalgError> {
        self.check_ambient(other)?;
        Ok(other.basis_vectors().all(|v| self.contains_vector(v)))
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "vector length mismatch");
        self.coordinates(v).is_some()
    }

    /// Coordinates of `v` with respect to the RREF basis.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let mut residual = v.to_vec();
        let mut coords = Vec::with_capacity(self.dim());
        for row in self.basis_vectors() {
            let p = row
                .iter()
                .position(|x| !x.is_zero())
                .expect("RREF rows are nonzero");
            let c = residual[p].clone();
            if !c.is_zero() {
                for (r, b) in residual.iter_mut().zip(row) {
                    if !b.is_zero() {
                        *r -= &c * b;
                    }
                }
            }
            coords.push(c);
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }

    /// Whether `op` maps the subspace into itself.
    pub fn is_invariant_under(&self, op: &RatMatrix) -> bool {
        self.basis_vectors()
            .all(|v| self.contains_vector(&op.mul_vec(v)))
    }

    /// Matrix of `op` restricted to this subspace, in the RREF basis.
    /// `None` if the subspace is not `op`-invariant.
    pub fn restrict(&self, op: &RatMatrix) -> Option<RatMatrix> {
        let k = self.dim();
        let mut m = RatMatrix::zeros(k, k);
        for (j, v) in self.basis_vectors().enumerate() {
            let c = self.coordinates(&op.mul_vec(v))?;
            for (i, x) in c.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Some(m)
    }

    /// Lifts coordinates (in the RREF basis) back to an ambient vector.
    pub fn lift(&self, coords: &[Rational]) -> Vec<Rational> {
        assert_eq!(coords.len(), self.dim());
        let mut v = vec![Rational::zero(); self.ambient_dim];
        for (c, row) in coords.iter().zip(self.basis_vectors()) {
            if c.is_zero() {
                continue;
            }
            for (vi, b) in v.iter_mut().zip(row) {
                *vi += c * b;
            }
        }
        v
    }

    /// Basis vectors of `self` that complete a basis of `lower` to one of
    /// `self`. Requires `lower ⊆ self`.
    pub fn complement_of(&self, lower: &Self) -> Vec<Vec<Rational>> {
        let mut ech = EchelonBasis::new(self.ambient_dim);
        for v in lower.basis_vectors() {
            ech.insert(v);
        }
        self.basis_vectors()
            .filter(|v| ech.insert(v))
            .map(<[Rational]>::to_vec)
            .collect()
    }

    /// Matrices of `ops` acting on the quotient `self / lower`, using the
    /// basis returned by [`Subspace::complement_of`]. Both subspaces must be
    /// invariant under every operator, otherwise `None`.
    pub fn quotient_action(&self, lower: &Self, ops: &[&RatMatrix]) -> Option<Vec<RatMatrix>> {
        let lower_basis: Vec<Vec<Rational>> =
            lower.basis_vectors().map(<[Rational]>::to_vec).collect();
        let comp = self.complement_of(lower);
        let k = lower_basis.len();
        let q = comp.len();
        let mut full_basis = lower_basis;
        full_basis.extend(comp.iter().cloned());
        ops.iter()
            .map(|op| {
                let images: Vec<Vec<Rational>> = comp.iter().map(|w| op.mul_vec(w)).collect();
                let coords = coordinates_in(self.ambient_dim, &full_basis, &images)?;
                Some(RatMatrix::from_fn(q, q, |i, j| coords[j][k + i].clone()))
            })
            .collect()
    }
}

/// Incrementally built echelon basis, used for spinning and extension.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    ambient: usize,
    /// Rows normalised so the pivot entry is 1.
    rows: Vec<(usize, Vec<Rational>)>,
}

impl EchelonBasis {
    pub fn new(ambient: usize) -> Self {
        Self {
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Residual of `v` after elimination against the current rows.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut r = v.to_vec();
        for (p, row) in &self.rows {
            if r[*p].is_zero() {
                continue;
            }
            let c = r[*p].clone();
            for (x, b) in r.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x -= &c * b;
                }
            }
        }
        r
    }

    /// Adds `v` if it is independent of the current rows; reports whether it was.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        let r: Vec<Rational> = r.into_iter().map(|x| x * &inv).collect();
        debug_assert!(r[p].is_one());
        self.rows.push((p, r));
        true
    }

    pub fn to_subspace(&self) -> Subspace {
        Subspace::span(self.ambient, self.rows.iter().map(|(_, r)| r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn e(n: usize, i: usize) -> Vec<Rational> {
        (0..n)
            .map(|j| if i == j { int(1) } else { int(0) })
            .collect()
    }

    #[test]
    fn sum_of_coordinate_lines() {
        let u = Subspace::span(3, [e(3, 0)]);
        let w = Subspace::span(3, [e(3, 1)]);
        assert_eq!(u.sum(&w).unwrap().dim(), 2);
        assert_eq!(u.sum(&u).unwrap(), u);
    }

    #[test]
    fn intersection_of_planes() {
        let u = Subspace::span(3, [e(3, 0), e(3, 1)]);
        let w = Subspace::span(3, [e(3, 1), e(3, 2)]);
        assert_eq!(u.intersect(&w).unwrap(), Subspace::span(3, [e(3, 1)]));
        assert_eq!(u.intersect(&Subspace::full(3)).unwrap(), u);
    }

    #[test]
    fn containment() {
        let line = Subspace::span(2, [e(2, 0)]);
        let diag = Subspace::span(2, [vec![int(1), int(1)]]);
        assert!(Subspace::full(2).contains(&diag).unwrap());
        assert!(!line.contains(&diag).unwrap());
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let u = Subspace::full(2);
        let w = Subspace::full(3);
        assert!(u.sum(&w).is_err());
        assert!(u.intersect(&w).is_err());
        assert!(u.contains(&w).is_err());
    }

    #[test]
    fn equal_spans_are_equal_values() {
        let a = Subspace::span(2, [vec![int(2), int(4)]]);
        let b = Subspace::span(2, [vec![int(-1), int(-2)]]);
        assert_eq!(a, b);
    }

    #[test]
    fn quotient_action_of_upper_triangular() {
        // op fixes span{e0} and acts by 3 on the quotient.
        let op = RatMatrix::from_i64(&[&[1, 5], &[0, 3]]);
        let lower = Subspace::span(2, [e(2, 0)]);
        let q = Subspace::full(2).quotient_action(&lower, &[&op]).unwrap();
        assert_eq!(q[0], RatMatrix::from_i64(&[&[3]]));
    }
}
