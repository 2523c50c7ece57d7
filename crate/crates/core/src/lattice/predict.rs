//! Predicted submodule lattices of the catalog modules and comparison with
//! computed lattices.

use serde::{Deserialize, Serialize};

use crate::catalog::{irreducibility_criterion, Family, ModuleSpec, Twist};
use crate::rational::{format_rational, frac, int, serde_opt, Rational};

use super::classify::RParams;
use super::{LatticeError, LatticeReport, Shape};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedNode {
    pub dim: usize,
    /// Set when the node is the whole `t0`-eigenspace for this eigenvalue.
    #[serde(with = "serde_opt", default, skip_serializing_if = "Option::is_none")]
    pub eigenvalue: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedEdge {
    pub lower: usize,
    pub upper: usize,
    /// Isomorphism class of `upper / lower`.
    pub factor: RParams,
}

/// Shape, nodes and covering edges with factor classes. Node 0 is the zero
/// submodule and the last node is the whole module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedLattice {
    pub shape: Shape,
    pub nodes: Vec<PredictedNode>,
    pub edges: Vec<PredictedEdge>,
}

fn node(dim: usize, eigenvalue: Option<Rational>) -> PredictedNode {
    PredictedNode { dim, eigenvalue }
}

fn edge(lower: usize, upper: usize, factor: &RParams) -> PredictedEdge {
    PredictedEdge {
        lower,
        upper,
        factor: factor.clone(),
    }
}

/// A diamond `0 < M1, M2 < V` with `V/M1 ≅ M2` and `V/M2 ≅ M1`.
fn diamond(
    n: usize,
    m1: PredictedNode,
    t1: RParams,
    m2: PredictedNode,
    t2: RParams,
) -> PredictedLattice {
    PredictedLattice {
        shape: Shape::Diamond,
        nodes: vec![node(0, None), m1, m2, node(n, None)],
        edges: vec![
            edge(0, 1, &t1),
            edge(0, 2, &t2),
            edge(1, 3, &t2),
            edge(2, 3, &t1),
        ],
    }
}

fn simple(n: usize, eigenvalue: Rational, t: RParams) -> PredictedLattice {
    PredictedLattice {
        shape: Shape::Simple,
        nodes: vec![node(0, None), node(n, Some(eigenvalue))],
        edges: vec![edge(0, 1, &t)],
    }
}

/// The lattice of `A, B, C`-invariant subspaces predicted for an irreducible
/// module of family `E` (any twist) or `O` (untwisted).
pub fn predicted_lattice(spec: &ModuleSpec) -> Result<PredictedLattice, LatticeError> {
    spec.validate()?;
    if spec.family == Family::R {
        return Err(LatticeError::NotAnHModule);
    }
    if !irreducibility_criterion(spec) {
        return Err(LatticeError::Reducible(spec.to_string()));
    }
    let (a, b, c) = (&spec.a, &spec.b, &spec.c);
    let d = spec.d;
    let n = spec.dim();
    let half = frac(1, 2);
    Ok(match (spec.family, spec.epsilon) {
        (Family::E, Twist::PlusPlus) => {
            let p = |x: &Rational| -(x + int(1)) * &half;
            let (pa, pb, pc) = (p(a), p(b), p(c));
            let h = frac(d as i64 + 1, 2);
            if d == 1 {
                simple(n, -h, RParams::new(1, pa, pb, pc))
            } else {
                let big = RParams::new(d.div_ceil(2), pa.clone(), pb.clone(), pc.clone());
                let small = RParams::new((d - 3) / 2, pa, pb, pc);
                diamond(
                    n,
                    node((d as usize + 3) / 2, Some(-h.clone())),
                    big,
                    node((d as usize - 1) / 2, Some(h)),
                    small,
                )
            }
        }
        (Family::E, eps) => {
            // The distinguished parameter s sits in slot k; V(-s) and V(s)
            // differ only in that slot.
            let k = match eps {
                Twist::PlusMinus => 0,
                Twist::MinusPlus => 1,
                _ => 2,
            };
            let params = [a, b, c];
            let s = params[k].clone();
            let tag = |shift: Rational| {
                let mut v: Vec<Rational> = params.iter().map(|x| -(*x + int(1)) * &half).collect();
                v[k] = -&s * &half + shift;
                let [x, y, z]: [Rational; 3] = v.try_into().expect("three parameters");
                RParams::new((d - 1) / 2, x, y, z)
            };
            let low = tag(int(-1));
            let high = tag(int(0));
            let m = (d as usize).div_ceil(2);
            if s == int(0) {
                PredictedLattice {
                    shape: Shape::Chain3,
                    nodes: vec![node(0, None), node(m, Some(int(0))), node(n, None)],
                    edges: vec![edge(0, 1, &low), edge(1, 2, &high)],
                }
            } else {
                diamond(n, node(m, Some(-s.clone())), low, node(m, Some(s)), high)
            }
        }
        (Family::O, Twist::PlusPlus) => {
            let q = |x: &Rational, off: Rational| -x * &half - off;
            let upper =
                |dd: u32| RParams::new(dd, q(a, frac(1, 4)), q(b, frac(1, 4)), q(c, frac(1, 4)));
            let lower =
                |dd: u32| RParams::new(dd, q(a, frac(3, 4)), q(b, frac(3, 4)), q(c, frac(3, 4)));
            let sigma = spec.derived().sigma;
            let half_sigma = &sigma * &half;
            if d == 0 {
                simple(n, half_sigma, upper(0))
            } else if sigma == int(0) {
                let m = d as usize / 2;
                let mid = RParams::new(
                    0,
                    -(b + c + int(1)) * &half,
                    -(c + a + int(1)) * &half,
                    -(a + b + int(1)) * &half,
                );
                let outer = lower(d / 2 - 1);
                PredictedLattice {
                    shape: Shape::Chain4,
                    nodes: vec![
                        node(0, None),
                        node(m, None),
                        node(m + 1, Some(int(0))),
                        node(n, None),
                    ],
                    edges: vec![edge(0, 1, &outer), edge(1, 2, &mid), edge(2, 3, &outer)],
                }
            } else {
                diamond(
                    n,
                    node(d as usize / 2 + 1, Some(half_sigma.clone())),
                    upper(d / 2),
                    node(d as usize / 2, Some(-half_sigma)),
                    lower(d / 2 - 1),
                )
            }
        }
        (Family::O, _) => return Err(LatticeError::NoPrediction(spec.to_string())),
        (Family::R, _) => unreachable!("rejected above"),
    })
}

/// Outcome of comparing a computed lattice with a prediction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub matches: bool,
    /// Predicted node index to computed node index, when a matching exists.
    pub node_map: Option<Vec<usize>>,
    pub mismatches: Vec<String>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Problems with a candidate node map, empty if it is an isomorphism of
/// labelled lattices.
fn check_map(computed: &LatticeReport, predicted: &PredictedLattice, map: &[usize]) -> Vec<String> {
    let mut problems = Vec::new();
    for (i, (pn, &ci)) in predicted.nodes.iter().zip(map).enumerate() {
        let cn = &computed.nodes[ci];
        if pn.dim != cn.dim {
            problems.push(format!(
                "node {i}: predicted dim {}, computed dim {}",
                pn.dim, cn.dim
            ));
        }
        if let Some(theta) = &pn.eigenvalue {
            if cn.eigenvalue.as_ref() != Some(theta) {
                problems.push(format!(
                    "node {i}: predicted to be the t0-eigenspace for {}",
                    format_rational(theta)
                ));
            }
        }
    }
    if !problems.is_empty() {
        return problems;
    }
    let mut mapped: Vec<[usize; 2]> = predicted
        .edges
        .iter()
        .map(|e| [map[e.lower], map[e.upper]])
        .collect();
    mapped.sort();
    let mut actual = computed.hasse_edges.clone();
    actual.sort();
    if mapped != actual {
        problems.push(format!(
            "Hasse edges differ: predicted {mapped:?}, computed {actual:?}"
        ));
        return problems;
    }
    for e in &predicted.edges {
        let (lo, up) = (map[e.lower], map[e.upper]);
        let Some(sq) = computed
            .subquotients
            .iter()
            .find(|s| s.lower == lo && s.node == up)
        else {
            problems.push(format!("no subquotient recorded for edge {lo}->{up}"));
            continue;
        };
        if !sq.tag.verified {
            problems.push(format!("subquotient {lo}->{up} did not verify"));
            continue;
        }
        let expected = e.factor.normal_form();
        if !expected.verified {
            problems.push(format!(
                "predicted factor {:?} has no verified normal form",
                e.factor
            ));
        } else if expected.params != sq.tag.params {
            problems.push(format!(
                "subquotient {lo}->{up}: computed {:?}, predicted {:?} (normal form {:?})",
                sq.tag.params, e.factor, expected.params
            ));
        }
    }
    problems
}

/// Compares shape, node dimensions and eigenvalue labels, Hasse edges and
/// subquotient classes, up to relabelling of the nodes.
pub fn compare_with_prediction(
    computed: &LatticeReport,
    predicted: &PredictedLattice,
) -> Comparison {
    let mut mismatches = Vec::new();
    if computed.shape != predicted.shape {
        mismatches.push(format!(
            "shape: predicted {}, computed {}",
            predicted.shape, computed.shape
        ));
    }
    if computed.nodes.len() != predicted.nodes.len() {
        mismatches.push(format!(
            "node count: predicted {}, computed {}",
            predicted.nodes.len(),
            computed.nodes.len()
        ));
    }
    if !mismatches.is_empty() {
        return Comparison {
            matches: false,
            node_map: None,
            mismatches,
        };
    }
    let mut best: Option<Vec<String>> = None;
    for map in permutations(predicted.nodes.len()) {
        let problems = check_map(computed, predicted, &map);
        if problems.is_empty() {
            return Comparison {
                matches: true,
                node_map: Some(map),
                mismatches: Vec::new(),
            };
        }
        if best.as_ref().is_none_or(|b| problems.len() < b.len()) {
            best = Some(problems);
        }
    }
    Comparison {
        matches: false,
        node_map: None,
        mismatches: best.unwrap_or_default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(p: &PredictedLattice) -> Vec<usize> {
        p.nodes.iter().map(|n| n.dim).collect()
    }

    #[test]
    fn e3_diamond() {
        let p = predicted_lattice(&"E:d=3,a=2,b=3,c=7".parse().unwrap()).unwrap();
        assert_eq!(p.shape, Shape::Diamond);
        assert_eq!(dims(&p), vec![0, 3, 1, 4]);
        assert_eq!(
            p.edges[0].factor,
            RParams::new(2, frac(-3, 2), int(-2), int(-4))
        );
    }

    #[test]
    fn twisted_chain3() {
        let p = predicted_lattice(&"E:d=3,a=0,b=3,c=1,eps=+-".parse().unwrap()).unwrap();
        assert_eq!(p.shape, Shape::Chain3);
        assert_eq!(dims(&p), vec![0, 2, 4]);
    }

    #[test]
    fn o2_chain4() {
        let p = predicted_lattice(&"O:d=2,a=1,b=1,c=-1/2".parse().unwrap()).unwrap();
        assert_eq!(p.shape, Shape::Chain4);
        assert_eq!(dims(&p), vec![0, 1, 2, 3]);
        assert_eq!(
            p.edges[0].factor,
            RParams::new(0, frac(-5, 4), frac(-5, 4), frac(-1, 2))
        );
    }

    #[test]
    fn refusals() {
        assert!(matches!(
            predicted_lattice(&"E:d=3,a=0,b=0,c=1".parse().unwrap()),
            Err(LatticeError::Reducible(_))
        ));
        assert!(matches!(
            predicted_lattice(&"R:d=2,a=1,b=1,c=1".parse().unwrap()),
            Err(LatticeError::NotAnHModule)
        ));
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }
}
