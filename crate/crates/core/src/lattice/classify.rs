//! Identification of irreducible Racah modules with `R_d(a,b,c)`.
//!
//! Candidates come from the spectra of `A` and `B` and the value of `δ`.
//! A candidate is accepted only when an explicit basis `u_0, …, u_d` is
//! found on which `A` and `B` act by the bidiagonal matrices of
//! `R_d(a,b,c)`; that basis is an isomorphism certificate.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::catalog::{build_r, r_phi, r_theta};
use crate::matrix::RatMatrix;
use crate::poly::rational_eigenvalues;
use crate::rational::{frac, int, serde_str, solve_pronic, Rational};
use crate::subspace::EchelonBasis;

/// Parameters `(d, a, b, c)` of an `R_d(a,b,c)` isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RParams {
    pub d: u32,
    #[serde(with = "serde_str")]
    pub a: Rational,
    #[serde(with = "serde_str")]
    pub b: Rational,
    #[serde(with = "serde_str")]
    pub c: Rational,
}

impl RParams {
    pub fn new(d: u32, a: Rational, b: Rational, c: Rational) -> Self {
        Self { d, a, b, c }
    }

    /// The normal form of the isomorphism class of `R_d(a,b,c)`.
    pub fn normal_form(&self) -> SubquotientTag {
        let r = build_r(self.d, &self.a, &self.b, &self.c);
        let delta = r.delta().cloned().expect("R_d has scalar delta");
        classify_r_subquotient(r.a(), r.b(), &delta)
    }
}

/// Result of classifying one subquotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubquotientTag {
    #[serde(flatten)]
    pub params: RParams,
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SubquotientTag {
    fn unverified(d: u32, note: impl Into<String>) -> Self {
        Self {
            params: RParams::new(d, int(0), int(0), int(0)),
            verified: false,
            note: Some(note.into()),
        }
    }
}

/// Expands a spectrum with multiplicities into a sorted list.
fn spectrum_list(eigs: &[(Rational, usize)]) -> Vec<Rational> {
    let mut v: Vec<Rational> = eigs
        .iter()
        .flat_map(|(x, m)| std::iter::repeat_n(x.clone(), *m))
        .collect();
    v.sort();
    v
}

/// All `p` with `{θ_i(p)}_{i=0..d}` equal to `spectrum` as multisets.
fn ladder_parameters(d: u32, spectrum: &[(Rational, usize)]) -> Vec<Rational> {
    let target = spectrum_list(spectrum);
    let half_d = frac(d as i64, 2);
    let mut out: Vec<Rational> = spectrum
        .iter()
        .flat_map(|(lambda, _)| solve_pronic(lambda))
        .map(|x| x - &half_d)
        .filter(|p| {
            let mut th: Vec<Rational> = (0..=d as usize).map(|i| r_theta(d, p, i)).collect();
            th.sort();
            th == target
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Seeds for `u_0`: the kernel basis, then small integer combinations of it.
fn seed_vectors(kernel: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut seeds: Vec<Vec<Rational>> = kernel.to_vec();
    let k = kernel.len();
    if !(2..=3).contains(&k) {
        return seeds;
    }
    let coeffs = [-2i64, -1, 0, 1, 2];
    let n = kernel[0].len();
    let total = coeffs.len().pow(k as u32);
    for idx in 0..total {
        let mut rest = idx;
        let cs: Vec<i64> = (0..k)
            .map(|_| {
                let c = coeffs[rest % coeffs.len()];
                rest /= coeffs.len();
                c
            })
            .collect();
        if cs.iter().filter(|&&c| c != 0).count() < 2 {
            continue;
        }
        let mut v = vec![Rational::zero(); n];
        for (c, kv) in cs.iter().zip(kernel) {
            for (vi, x) in v.iter_mut().zip(kv) {
                *vi += x * int(*c);
            }
        }
        seeds.push(v);
    }
    seeds
}

/// Tries to build the ladder basis for `R_d(a,b,c)` from `u0`.
fn ladder_from(aq: &RatMatrix, bq: &RatMatrix, p: &RParams, u0: Vec<Rational>) -> bool {
    let n = aq.rows();
    let d = p.d;
    let theta = |i: usize| r_theta(d, &p.a, i);
    let theta_star = |i: usize| r_theta(d, &p.b, i);

    let mut us = vec![u0];
    for i in 0..d as usize {
        let next = aq.shift(&-theta(i)).mul_vec(&us[i]);
        us.push(next);
    }
    if !aq
        .shift(&-theta(d as usize))
        .mul_vec(&us[d as usize])
        .iter()
        .all(Zero::is_zero)
    {
        return false;
    }
    let mut ech = EchelonBasis::new(n);
    if !us.iter().all(|u| ech.insert(u)) {
        return false;
    }
    us.iter().enumerate().all(|(i, u)| {
        let lhs = bq.mul_vec(u);
        let ts = theta_star(i);
        let phi = if i > 0 {
            r_phi(d, &p.a, &p.b, &p.c, i)
        } else {
            Rational::zero()
        };
        lhs.iter().enumerate().all(|(k, x)| {
            let mut rhs = &ts * &u[k];
            if i > 0 {
                rhs += &phi * &us[i - 1][k];
            }
            *x == rhs
        })
    })
}

/// Whether `(aq, bq)` acts as `R_d(a,b,c)` in some basis.
pub fn verify_ladder(aq: &RatMatrix, bq: &RatMatrix, p: &RParams) -> bool {
    if aq.rows() != p.d as usize + 1 {
        return false;
    }
    let kernel = bq.shift(&-r_theta(p.d, &p.b, 0)).kernel();
    let basis: Vec<Vec<Rational>> = kernel.basis_vectors().map(<[Rational]>::to_vec).collect();
    seed_vectors(&basis)
        .into_iter()
        .any(|u0| ladder_from(aq, bq, p, u0))
}

/// Classifies an irreducible Racah module given by the actions `aq`, `bq`
/// of `A`, `B` and the scalar `delta` of `A+B+C`.
///
/// Among all candidate `(a', b', c')` consistent with the spectra and
/// `delta`, the lexicographically smallest one whose ladder verifies is
/// returned. This triple depends only on the isomorphism class, so it serves
/// as a normal form.
pub fn classify_r_subquotient(aq: &RatMatrix, bq: &RatMatrix, delta: &Rational) -> SubquotientTag {
    let n = aq.rows();
    if n == 0 {
        return SubquotientTag::unverified(0, "zero-dimensional module");
    }
    let d = (n - 1) as u32;
    let eig_a = rational_eigenvalues(aq);
    let eig_b = rational_eigenvalues(bq);
    if eig_a.iter().map(|e| e.1).sum::<usize>() != n
        || eig_b.iter().map(|e| e.1).sum::<usize>() != n
    {
        return SubquotientTag::unverified(d, "A or B has irrational eigenvalues");
    }
    let a_cands = ladder_parameters(d, &eig_a);
    let b_cands = ladder_parameters(d, &eig_b);
    let half_d = frac(d as i64, 2);
    let h = &half_d * (&half_d + int(1));
    let mut triples = Vec::new();
    for a in &a_cands {
        for b in &b_cands {
            let rest = delta - &h - a * (a + int(1)) - b * (b + int(1));
            for c in solve_pronic(&rest) {
                triples.push(RParams::new(d, a.clone(), b.clone(), c));
            }
        }
    }
    triples.sort();
    if triples.is_empty() {
        return SubquotientTag::unverified(d, "no parameters match the spectra of A and B");
    }
    for p in &triples {
        if verify_ladder(aq, bq, p) {
            return SubquotientTag {
                params: p.clone(),
                verified: true,
                note: None,
            };
        }
    }
    SubquotientTag {
        params: triples[0].clone(),
        verified: false,
        note: Some(format!(
            "none of {} candidate parameter triples verified",
            triples.len()
        )),
    }
}
