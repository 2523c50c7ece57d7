//! Lattices of Racah submodules of 𝔥-modules.
//!
//! Every submodule of the pullback of an irreducible 𝔥-module that is itself
//! irreducible lies inside a `t0`-eigenspace. The engine therefore seeds the
//! lattice with the eigenspaces and with spins of eigenvectors of `A`, `B`
//! and `C` restricted to them, and closes under sum and intersection. A
//! batch of random spins then checks that nothing was missed.

mod classify;
mod predict;
mod spin;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{zeta_pullback, HRep, RacahRep};
use crate::catalog::CatalogError;
use crate::matrix::RatMatrix;
use crate::poly::rational_eigenvalues;
use crate::rational::{format_rational, int, parse_rational, serde_opt, Rational};
use crate::subspace::Subspace;

pub use classify::{classify_r_subquotient, verify_ladder, RParams, SubquotientTag};
pub use predict::{
    compare_with_prediction, predicted_lattice, Comparison, PredictedEdge, PredictedLattice,
    PredictedNode,
};
pub use spin::{
    find_invariant_subspace, spin, spin_h, spin_under, t0_eigenspaces, EigenData, Eigenspaces,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("t0 squared is not a scalar matrix")]
    NonCentralSquare,
    #[error("irrational spectrum: t0 squared acts as {0}, which is not a rational square")]
    IrrationalSpectrum(String),
    #[error("module {0} is reducible as an H-module")]
    Reducible(String),
    #[error("lattice computations need an E or O module")]
    NotAnHModule,
    #[error("no predicted lattice is available for {0}")]
    NoPrediction(String),
    #[error("unexpected lattice with {nodes} nodes: {detail}")]
    UnexpectedShape { nodes: usize, detail: String },
    #[error("random spin produced a submodule of dimension {dim} missing from the lattice")]
    MissedSubmodule { dim: usize },
    #[error("Jordan-Hölder check failed: {0}")]
    JordanHolder(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Simple,
    Chain3,
    Chain4,
    Diamond,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Simple => "simple",
            Shape::Chain3 => "chain3",
            Shape::Chain4 => "chain4",
            Shape::Diamond => "diamond",
        })
    }
}

/// One submodule: its RREF basis (rows) and, when it is an entire
/// `t0`-eigenspace, the eigenvalue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeNode {
    pub dim: usize,
    pub basis: RatMatrix,
    #[serde(with = "serde_opt", default, skip_serializing_if = "Option::is_none")]
    pub eigenvalue: Option<Rational>,
}

impl LatticeNode {
    pub fn subspace(&self) -> Subspace {
        Subspace::span(self.basis.cols(), self.basis.row_vectors())
    }
}

/// Classification of the factor `nodes[node] / nodes[lower]` for a covering
/// pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubquotientRecord {
    pub node: usize,
    pub lower: usize,
    #[serde(flatten)]
    pub tag: SubquotientTag,
}

mod eigen_map {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<Rational, EigenData>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(k, v)| (format_rational(k), v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<Rational, EigenData>, D::Error> {
        let raw = BTreeMap::<String, EigenData>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                parse_rational(&k)
                    .map(|k| (k, v))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

/// The computed lattice of `A, B, C`-invariant subspaces.
///
/// Nodes are sorted by dimension, so node 0 is `{0}` and the last node is
/// the whole space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "LatticeReportWire")]
pub struct LatticeReport {
    pub shape: Shape,
    pub t0_diagonalizable: bool,
    pub nodes: Vec<LatticeNode>,
    pub hasse_edges: Vec<[usize; 2]>,
    #[serde(with = "eigen_map")]
    pub eigen: BTreeMap<Rational, EigenData>,
    /// Factor dimensions of a composition series, in increasing order.
    pub factors: Vec<usize>,
    /// Every maximal chain of nodes, from `{0}` to the whole space.
    pub chains: Vec<Vec<usize>>,
    pub subquotients: Vec<SubquotientRecord>,
}

/// Deserialization mirror of [`LatticeReport`]. An empty basis carries no
/// column count in JSON, so the zero node's basis is re-widened afterwards.
#[derive(Deserialize)]
struct LatticeReportWire {
    shape: Shape,
    t0_diagonalizable: bool,
    nodes: Vec<LatticeNode>,
    hasse_edges: Vec<[usize; 2]>,
    #[serde(with = "eigen_map")]
    eigen: BTreeMap<Rational, EigenData>,
    factors: Vec<usize>,
    chains: Vec<Vec<usize>>,
    subquotients: Vec<SubquotientRecord>,
}

impl From<LatticeReportWire> for LatticeReport {
    fn from(w: LatticeReportWire) -> Self {
        let n = w.nodes.iter().map(|x| x.dim).max().unwrap_or(0);
        let nodes = w
            .nodes
            .into_iter()
            .map(|mut x| {
                if x.basis.rows() == 0 {
                    x.basis = RatMatrix::zeros(0, n);
                }
                x
            })
            .collect();
        LatticeReport {
            shape: w.shape,
            t0_diagonalizable: w.t0_diagonalizable,
            nodes,
            hasse_edges: w.hasse_edges,
            eigen: w.eigen,
            factors: w.factors,
            chains: w.chains,
            subquotients: w.subquotients,
        }
    }
}

impl LatticeReport {
    pub fn dim(&self) -> usize {
        self.nodes.last().map_or(0, |n| n.dim)
    }

    /// Indices of the minimal nonzero nodes.
    pub fn atoms(&self) -> Vec<usize> {
        self.hasse_edges
            .iter()
            .filter(|e| e[0] == 0)
            .map(|e| e[1])
            .collect()
    }

    /// Whether the minimal nonzero nodes sum to the whole space.
    pub fn atoms_span_everything(&self) -> bool {
        let n = self.dim();
        let total = self.atoms().into_iter().fold(Subspace::zero(n), |acc, i| {
            acc.sum(&self.nodes[i].subspace()).expect("same ambient")
        });
        total.is_full()
    }

    pub fn all_subquotients_verified(&self) -> bool {
        self.subquotients.iter().all(|s| s.tag.verified)
    }
}

/// Number of random vectors spun as a completeness check.
const RANDOM_SPINS: usize = 20;
const SOUNDNESS_SEED: u64 = 0x5241_4341_4821;

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..n).map(|_| int(rng.gen_range(-3..=3))).collect();
        if v.iter().any(|x| *x != int(0)) {
            return v;
        }
    }
}

/// Seeds from eigenvectors of `op` restricted to `space`.
fn eigen_seeds(space: &Subspace, op: &RatMatrix) -> Vec<Vec<Rational>> {
    let Some(local) = space.restrict(op) else {
        return Vec::new();
    };
    let mut seeds = Vec::new();
    for (lambda, _) in rational_eigenvalues(&local) {
        let ker = local.shift(&-lambda).kernel();
        seeds.extend(ker.basis_vectors().map(|c| space.lift(c)));
    }
    seeds
}

fn close_under_sum_and_intersection(nodes: &mut BTreeSet<Subspace>) {
    loop {
        let list: Vec<Subspace> = nodes.iter().cloned().collect();
        let mut added = false;
        for (i, u) in list.iter().enumerate() {
            for w in &list[i + 1..] {
                for x in [
                    u.sum(w).expect("same ambient"),
                    u.intersect(w).expect("same ambient"),
                ] {
                    added |= nodes.insert(x);
                }
            }
        }
        if !added {
            return;
        }
    }
}

fn sorted_nodes(set: BTreeSet<Subspace>) -> Vec<Subspace> {
    let mut v: Vec<Subspace> = set.into_iter().collect();
    v.sort_by(|x, y| x.dim().cmp(&y.dim()).then_with(|| x.cmp(y)));
    v
}

fn strictly_contains(big: &Subspace, small: &Subspace) -> bool {
    big.dim() > small.dim() && big.contains(small).expect("same ambient")
}

fn hasse_edges(nodes: &[Subspace]) -> Vec<[usize; 2]> {
    let k = nodes.len();
    let lt = |i: usize, j: usize| strictly_contains(&nodes[j], &nodes[i]);
    let mut edges = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if lt(i, j) && !(0..k).any(|m| lt(i, m) && lt(m, j)) {
                edges.push([i, j]);
            }
        }
    }
    edges
}

fn classify_shape(nodes: &[Subspace], edges: &[[usize; 2]]) -> Result<Shape, LatticeError> {
    let unexpected = |detail: &str| LatticeError::UnexpectedShape {
        nodes: nodes.len(),
        detail: detail.to_string(),
    };
    match nodes.len() {
        2 => Ok(Shape::Simple),
        3 => Ok(Shape::Chain3),
        4 => {
            if strictly_contains(&nodes[2], &nodes[1]) {
                Ok(Shape::Chain4)
            } else if edges.len() == 4 {
                Ok(Shape::Diamond)
            } else {
                Err(unexpected(
                    "four nodes that are neither a chain nor a diamond",
                ))
            }
        }
        _ => Err(unexpected(
            "only simple, chain3, chain4 and diamond lattices are expected",
        )),
    }
}

/// All maximal chains from node 0 to the last node along Hasse edges.
fn maximal_chains(k: usize, edges: &[[usize; 2]]) -> Vec<Vec<usize>> {
    fn walk(
        at: usize,
        top: usize,
        edges: &[[usize; 2]],
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if at == top {
            out.push(path.clone());
            return;
        }
        for e in edges.iter().filter(|e| e[0] == at) {
            path.push(e[1]);
            walk(e[1], top, edges, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    walk(0, k - 1, edges, &mut vec![0], &mut out);
    out
}

/// Factor dimensions along each maximal chain, checked for Jordan–Hölder
/// agreement. Returns the sorted common multiset.
fn jordan_holder(nodes: &[Subspace], chains: &[Vec<usize>]) -> Result<Vec<usize>, LatticeError> {
    let mut common: Option<Vec<usize>> = None;
    for chain in chains {
        let mut dims: Vec<usize> = chain
            .windows(2)
            .map(|w| nodes[w[1]].dim() - nodes[w[0]].dim())
            .collect();
        dims.sort();
        match &common {
            None => common = Some(dims),
            Some(c) if *c != dims => {
                return Err(LatticeError::JordanHolder(format!(
                    "factor dims {c:?} and {dims:?}"
                )));
            }
            _ => {}
        }
    }
    common.ok_or_else(|| LatticeError::Internal("no maximal chain".into()))
}

fn classify_edge(r: &RacahRep, upper: &Subspace, lower: &Subspace) -> SubquotientTag {
    let Some(q) = upper.quotient_action(lower, &r.generators()) else {
        return classify_fail(upper.dim() - lower.dim(), "quotient is not invariant");
    };
    let sum = &(&q[0] + &q[1]) + &q[2];
    match sum.as_scalar() {
        Some(delta) => classify_r_subquotient(&q[0], &q[1], &delta),
        None => classify_fail(
            upper.dim() - lower.dim(),
            "A+B+C is not scalar on the subquotient",
        ),
    }
}

fn classify_fail(n: usize, note: &str) -> SubquotientTag {
    SubquotientTag {
        params: RParams::new(n.saturating_sub(1) as u32, int(0), int(0), int(0)),
        verified: false,
        note: Some(note.to_string()),
    }
}

/// Computes the lattice of Racah submodules of the pullback of `h`.
///
/// `h` is expected to be an irreducible 𝔥-module; on other inputs the
/// result is whatever the closure finds, or an error if the shape is not
/// one of the four expected ones.
pub fn submodule_lattice(h: &HRep) -> Result<LatticeReport, LatticeError> {
    let n = h.dim();
    let r = zeta_pullback(h);
    let eig = spin::t0_eigenspaces_with(h, &r)?;

    let mut set: BTreeSet<Subspace> = BTreeSet::new();
    set.insert(Subspace::zero(n));
    set.insert(Subspace::full(n));
    for space in eig.spaces.values() {
        set.insert(space.clone());
        for op in r.generators() {
            for v in eigen_seeds(space, op) {
                set.insert(spin(&r, [&v]));
            }
        }
    }
    close_under_sum_and_intersection(&mut set);

    // Completeness check: random spins must land on known nodes.
    let mut rng = ChaCha8Rng::seed_from_u64(SOUNDNESS_SEED);
    let mut probes: Vec<Vec<Rational>> = (0..RANDOM_SPINS)
        .map(|_| random_vector(&mut rng, n))
        .collect();
    for node in set.iter().filter(|s| !s.is_zero()) {
        let coords = random_vector(&mut rng, node.dim());
        probes.push(node.lift(&coords));
    }
    for v in probes {
        let s = spin(&r, [&v]);
        if !set.contains(&s) {
            return Err(LatticeError::MissedSubmodule { dim: s.dim() });
        }
    }

    for s in &set {
        if r.generators().iter().any(|g| !s.is_invariant_under(g)) {
            return Err(LatticeError::Internal(
                "lattice node is not invariant".into(),
            ));
        }
    }

    let nodes = sorted_nodes(set);
    let edges = hasse_edges(&nodes);
    let shape = classify_shape(&nodes, &edges)?;
    let chains = maximal_chains(nodes.len(), &edges);
    let factors = jordan_holder(&nodes, &chains)?;

    let subquotients = edges
        .iter()
        .map(|&[lo, up]| SubquotientRecord {
            node: up,
            lower: lo,
            tag: classify_edge(&r, &nodes[up], &nodes[lo]),
        })
        .collect();

    let label = |s: &Subspace| {
        eig.spaces
            .iter()
            .find(|(_, space)| *space == s)
            .map(|(theta, _)| theta.clone())
    };
    let lattice_nodes = nodes
        .iter()
        .map(|s| LatticeNode {
            dim: s.dim(),
            basis: s.basis().clone(),
            eigenvalue: label(s),
        })
        .collect();

    Ok(LatticeReport {
        shape,
        t0_diagonalizable: eig.is_diagonalizable(n),
        nodes: lattice_nodes,
        hasse_edges: edges,
        eigen: eig.data,
        factors,
        chains,
        subquotients,
    })
}

/// Maximal chains of submodules with their factor dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionSeries {
    pub chains: Vec<Vec<usize>>,
    pub factor_dims: Vec<Vec<usize>>,
}

/// Every composition series of the pullback of `h`, as chains of node
/// indices into [`submodule_lattice`]'s node list.
pub fn composition_series(h: &HRep) -> Result<CompositionSeries, LatticeError> {
    let report = submodule_lattice(h)?;
    let factor_dims = report
        .chains
        .iter()
        .map(|c| {
            c.windows(2)
                .map(|w| report.nodes[w[1]].dim - report.nodes[w[0]].dim)
                .collect()
        })
        .collect();
    Ok(CompositionSeries {
        chains: report.chains,
        factor_dims,
    })
}

/// Whether the pullback of `h` is completely reducible, decided by
/// diagonalizability of `t0` and cross-checked against the lattice.
pub fn is_completely_reducible(h: &HRep) -> Result<bool, LatticeError> {
    let report = submodule_lattice(h)?;
    if report.t0_diagonalizable != report.atoms_span_everything() {
        return Err(LatticeError::Internal(
            "t0-diagonalizability disagrees with the lattice".into(),
        ));
    }
    Ok(report.t0_diagonalizable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_e, build_h, build_o};
    use crate::rational::frac;

    fn dims(r: &LatticeReport) -> Vec<usize> {
        r.nodes.iter().map(|n| n.dim).collect()
    }

    #[test]
    fn e3_diamond() {
        let h = build_e(3, &int(2), &int(3), &int(7)).unwrap();
        let rep = submodule_lattice(&h).unwrap();
        assert_eq!(rep.shape, Shape::Diamond);
        assert_eq!(dims(&rep), vec![0, 1, 3, 4]);
        assert!(rep.t0_diagonalizable);
        assert_eq!(rep.chains.len(), 2);
        assert_eq!(rep.factors, vec![1, 3]);
        assert!(rep.all_subquotients_verified(), "{:?}", rep.subquotients);
        let v_minus = rep
            .subquotients
            .iter()
            .find(|s| s.lower == 0 && s.node == 2)
            .unwrap();
        let expected = RParams::new(2, frac(-3, 2), int(-2), int(-4)).normal_form();
        assert_eq!(v_minus.tag.params, expected.params);
        assert!(is_completely_reducible(&h).unwrap());
    }

    #[test]
    fn twisted_chain3() {
        let h = build_h(&"E:d=3,a=0,b=3,c=1,eps=+-".parse().unwrap()).unwrap();
        let rep = submodule_lattice(&h).unwrap();
        assert_eq!(rep.shape, Shape::Chain3);
        assert_eq!(dims(&rep), vec![0, 2, 4]);
        assert!(!rep.t0_diagonalizable);
    }

    #[test]
    fn o2_chain4() {
        let h = build_o(2, &int(1), &int(1), &frac(-1, 2)).unwrap();
        let rep = submodule_lattice(&h).unwrap();
        assert_eq!(rep.shape, Shape::Chain4);
        assert_eq!(dims(&rep), vec![0, 1, 2, 3]);
        assert_eq!(rep.factors, vec![1, 1, 1]);
        assert!(!is_completely_reducible(&h).unwrap());
        let prime = &rep.subquotients.iter().find(|s| s.lower == 0).unwrap().tag;
        assert!(prime.verified);
        assert_eq!(
            prime.params,
            RParams::new(0, frac(-5, 4), frac(-5, 4), frac(-1, 2))
                .normal_form()
                .params
        );
    }

    #[test]
    fn simple_cases() {
        let e1 = build_e(1, &int(1), &int(1), &int(1)).unwrap();
        let rep = submodule_lattice(&e1).unwrap();
        assert_eq!(rep.shape, Shape::Simple);
        assert_eq!(rep.factors, vec![2]);
        let o0 = build_o(0, &int(1), &int(1), &int(1)).unwrap();
        assert!(is_completely_reducible(&o0).unwrap());
    }

    #[test]
    fn predictions_match() {
        for s in [
            "E:d=3,a=2,b=3,c=7",
            "E:d=1,a=1,b=1,c=1",
            "E:d=5,a=1/2,b=1/3,c=-2/7",
            "E:d=3,a=0,b=3,c=1,eps=+-",
            "E:d=3,a=2/3,b=3,c=1,eps=+-",
            "E:d=5,a=2/3,b=0,c=1/5,eps=-+",
            "E:d=5,a=2/3,b=5/2,c=1/5,eps=-+",
            "E:d=3,a=2/3,b=5/2,c=0,eps=--",
            "E:d=3,a=2/3,b=5/2,c=3,eps=--",
            "O:d=0,a=1,b=1,c=1",
            "O:d=2,a=1,b=1,c=-1/2",
            "O:d=4,a=1,b=1/3,c=7/6",
            "O:d=4,a=1/3,b=2,c=-5/7",
        ] {
            let spec = s.parse().unwrap();
            assert!(crate::catalog::irreducibility_criterion(&spec), "{s}");
            let rep = submodule_lattice(&build_h(&spec).unwrap()).unwrap();
            let pred = predicted_lattice(&spec).unwrap();
            let cmp = compare_with_prediction(&rep, &pred);
            assert!(cmp.matches, "{s}: {:?}", cmp.mismatches);
        }
    }

    #[test]
    fn report_json_round_trip() {
        let h = build_e(3, &int(2), &int(3), &int(7)).unwrap();
        let rep = submodule_lattice(&h).unwrap();
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["shape"], "diamond");
        assert_eq!(json["eigen"]["-2"]["geo"], 3);
        assert!(json["subquotients"][0]["verified"].as_bool().unwrap());
        let back: LatticeReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, rep);
    }
}
