//! `t0`-eigenspaces and spinning.

use std::collections::BTreeMap;

use crate::algebra::{HRep, RacahRep};
use crate::matrix::RatMatrix;
use crate::poly::rational_eigenvalues;
use crate::rational::{format_rational, int, rational_sqrt, Rational};
use crate::subspace::{EchelonBasis, Subspace};

use super::LatticeError;

/// Geometric dimension and algebraic multiplicity of an eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct EigenData {
    pub geo: usize,
    pub alg: usize,
}

/// Nonzero eigenspaces of `t0`, keyed by eigenvalue, with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigenspaces {
    pub spaces: BTreeMap<Rational, Subspace>,
    pub data: BTreeMap<Rational, EigenData>,
}

impl Eigenspaces {
    pub fn is_diagonalizable(&self, dim: usize) -> bool {
        self.data.values().map(|e| e.geo).sum::<usize>() == dim
    }
}

/// Computes the eigenspaces of `t0` from the candidates `±√k0`, where `k0`
/// is the scalar by which `t0²` acts, and cross-checks them against the
/// rational eigenvalues of `t0`. Each eigenspace is checked to be invariant
/// under `A`, `B`, `C` of `r`.
pub fn t0_eigenspaces_with(h: &HRep, r: &RacahRep) -> Result<Eigenspaces, LatticeError> {
    let t0 = h.t0();
    let n = h.dim();
    let k0 = (t0 * t0)
        .as_scalar()
        .ok_or(LatticeError::NonCentralSquare)?;
    let s =
        rational_sqrt(&k0).ok_or_else(|| LatticeError::IrrationalSpectrum(format_rational(&k0)))?;
    let mut candidates = vec![-s.clone(), s];
    candidates.dedup();

    let found = rational_eigenvalues(t0);
    let total: usize = found.iter().map(|(_, m)| m).sum();
    if total != n || found.iter().any(|(x, _)| !candidates.contains(x)) {
        return Err(LatticeError::Internal(format!(
            "t0 spectrum {:?} disagrees with ±√k0 for k0 = {}",
            found
                .iter()
                .map(|(x, m)| (format_rational(x), *m))
                .collect::<Vec<_>>(),
            format_rational(&k0)
        )));
    }

    let mut spaces = BTreeMap::new();
    let mut data = BTreeMap::new();
    for (theta, alg) in found {
        let space = t0.shift(&-theta.clone()).kernel();
        for (name, g) in ["A", "B", "C"].into_iter().zip(r.generators()) {
            if !space.is_invariant_under(g) {
                return Err(LatticeError::Internal(format!(
                    "eigenspace of t0 for {} is not {name}-invariant",
                    format_rational(&theta)
                )));
            }
        }
        data.insert(
            theta.clone(),
            EigenData {
                geo: space.dim(),
                alg,
            },
        );
        spaces.insert(theta, space);
    }
    Ok(Eigenspaces { spaces, data })
}

/// Eigenspaces of `t0` using the pullback of `h`.
pub fn t0_eigenspaces(h: &HRep) -> Result<Eigenspaces, LatticeError> {
    t0_eigenspaces_with(h, &crate::algebra::zeta_pullback(h))
}

/// Smallest subspace containing `seeds` and invariant under every operator.
pub fn spin_under<V: AsRef<[Rational]>>(
    ops: &[&RatMatrix],
    n: usize,
    seeds: impl IntoIterator<Item = V>,
) -> Subspace {
    let mut basis = EchelonBasis::new(n);
    let mut queue: Vec<Vec<Rational>> = Vec::new();
    for v in seeds {
        let v = v.as_ref();
        if basis.insert(v) {
            queue.push(v.to_vec());
        }
    }
    while let Some(v) = queue.pop() {
        if basis.len() == n {
            break;
        }
        for op in ops {
            let w = op.mul_vec(&v);
            if basis.insert(&w) {
                queue.push(w);
            }
        }
    }
    basis.to_subspace()
}

/// Smallest `A, B, C`-invariant subspace containing `seeds`.
pub fn spin<V: AsRef<[Rational]>>(r: &RacahRep, seeds: impl IntoIterator<Item = V>) -> Subspace {
    spin_under(&r.generators(), r.dim(), seeds)
}

/// Smallest subspace containing `seeds` and invariant under the four
/// generators of `h`.
pub fn spin_h<V: AsRef<[Rational]>>(h: &HRep, seeds: impl IntoIterator<Item = V>) -> Subspace {
    let ops: Vec<&RatMatrix> = h.generators().iter().collect();
    spin_under(&ops, h.dim(), seeds)
}

/// Standard basis vectors, plus eigenvectors of `A`, `B`, `C` restricted to
/// each `t0`-eigenspace. Any nonzero submodule meets some `t0`-eigenspace in
/// an `A,B,C`-stable subspace, so with simple restricted spectra it contains
/// one of these vectors.
fn submodule_seeds(h: &HRep) -> Vec<Vec<Rational>> {
    let n = h.dim();
    let mut seeds: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { int(1) } else { int(0) })
                .collect()
        })
        .collect();
    let r = crate::algebra::zeta_pullback(h);
    for (theta, _) in rational_eigenvalues(h.t0()) {
        let space = h.t0().shift(&-theta).kernel();
        for op in r.generators() {
            let Some(local) = space.restrict(op) else {
                continue;
            };
            for (lambda, _) in rational_eigenvalues(&local) {
                for coords in local.shift(&-lambda).kernel().basis_vectors() {
                    seeds.push(space.lift(coords));
                }
            }
        }
    }
    seeds
}

fn proper_spin(h: &HRep) -> Option<Subspace> {
    submodule_seeds(h)
        .into_iter()
        .map(|v| spin_h(h, [v]))
        .find(|w| !w.is_zero() && !w.is_full())
}

/// Looks for a proper nonzero subspace invariant under the four generators.
/// When no seed spins to one, the same search runs on the transposed
/// module and a hit there yields its annihilator. `None` only means the
/// search came up empty.
pub fn find_invariant_subspace(h: &HRep) -> Option<Subspace> {
    if let Some(w) = proper_spin(h) {
        return Some(w);
    }
    let [t0, t1, t0v, t1v] = h.generators().clone().map(|m| m.transpose());
    let transposed = HRep::new(t0, t1, t0v, t1v, None).ok()?;
    proper_spin(&transposed).map(|w| w.basis().kernel())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::zeta_pullback;
    use crate::catalog::{build_e, build_o};
    use crate::rational::{frac, int};

    #[test]
    fn e3_eigenspaces() {
        let h = build_e(3, &int(2), &int(3), &int(7)).unwrap();
        let e = t0_eigenspaces(&h).unwrap();
        let dims: Vec<(Rational, usize)> =
            e.spaces.iter().map(|(k, v)| (k.clone(), v.dim())).collect();
        assert_eq!(dims, vec![(int(-2), 3), (int(2), 1)]);
        assert!(e.is_diagonalizable(4));
    }

    #[test]
    fn o2_sigma_zero_eigenspace() {
        let h = build_o(2, &int(1), &int(1), &frac(-1, 2)).unwrap();
        let e = t0_eigenspaces(&h).unwrap();
        assert_eq!(e.spaces.len(), 1);
        assert_eq!(e.spaces[&int(0)].dim(), 2);
        assert_eq!(e.data[&int(0)], EigenData { geo: 2, alg: 3 });
        assert!(!e.is_diagonalizable(3));
    }

    #[test]
    fn e1_single_eigenvalue() {
        let h = build_e(1, &int(1), &int(1), &int(1)).unwrap();
        let e = t0_eigenspaces(&h).unwrap();
        assert_eq!(e.spaces[&int(-1)].dim(), 2);
    }

    #[test]
    fn spins_in_e3() {
        let h = build_e(3, &int(2), &int(3), &int(7)).unwrap();
        let r = zeta_pullback(&h);
        assert!(spin(&r, [vec![int(0); 4]]).is_zero());
        let v0 = vec![int(1), int(0), int(0), int(0)];
        assert_eq!(spin(&r, [&v0]).dim(), 3);
        let e = t0_eigenspaces(&h).unwrap();
        let top = &e.spaces[&int(2)];
        let v = top.basis_vectors().next().unwrap();
        assert_eq!(&spin(&r, [v]), top);
        assert!(spin_h(&h, [&v0]).is_full());
    }

    #[test]
    fn invariant_subspace_search() {
        let irreducible = build_e(3, &int(2), &int(3), &int(7)).unwrap();
        assert!(find_invariant_subspace(&irreducible).is_none());
        for h in [
            build_e(3, &int(1), &int(1), &int(1)).unwrap(),
            build_o(2, &int(0), &int(0), &frac(-1, 2)).unwrap(),
            build_e(5, &frac(1, 2), &frac(3, 2), &int(0)).unwrap(),
        ] {
            let w = find_invariant_subspace(&h).expect("reducible module");
            assert!(!w.is_zero() && !w.is_full());
            assert!(h.generators().iter().all(|g| w.is_invariant_under(g)));
        }
    }
}
