//! Frozen values. The matrices and polynomials below were produced by an
//! independent symbolic implementation of the same action formulas; the
//! remaining values are hand evaluations of closed-form expressions.

use racah_core::algebra::{check_h_relations, check_racah_relations, zeta_pullback};
use racah_core::catalog::{
    build_e, build_h, build_o, build_r, central_scalars, irreducibility_criterion,
};
use racah_core::lattice::{
    composition_series, is_completely_reducible, predicted_lattice, submodule_lattice,
    t0_eigenspaces, RParams, Shape,
};
use racah_core::matrix::RatMatrix;
use racah_core::poly::{characteristic_polynomial, rational_eigenvalues};
use racah_core::rational::{frac, int, parse_rational, Rational};
use racah_core::ModuleSpec;

fn m(rows: &[&[&str]]) -> RatMatrix {
    RatMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|s| parse_rational(s).unwrap()).collect())
            .collect(),
    )
    .unwrap()
}

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn spec(s: &str) -> ModuleSpec {
    s.parse().unwrap()
}

#[test]
fn e3_generators() {
    let h = build_e(3, &int(2), &int(3), &int(7)).unwrap();
    assert_eq!(
        h.t0(),
        &m(&[
            &["-2", "0", "0", "0"],
            &["0", "0", "4", "0"],
            &["0", "1", "0", "0"],
            &["0", "0", "0", "-2"]
        ])
    );
    assert_eq!(
        h.t1(),
        &m(&[
            &["2", "0", "0", "0"],
            &["1", "-2", "-4", "0"],
            &["0", "0", "2", "0"],
            &["0", "0", "1", "-2"]
        ])
    );
    assert_eq!(
        h.t0v(),
        &m(&[
            &["3", "33", "0", "0"],
            &["0", "-3", "0", "0"],
            &["0", "-1", "3", "13"],
            &["0", "0", "0", "-3"]
        ])
    );
    assert_eq!(
        h.t1v(),
        &m(&[
            &["-4", "-33", "0", "0"],
            &["-1", "4", "0", "0"],
            &["0", "0", "-6", "-13"],
            &["0", "0", "-1", "6"]
        ])
    );
}

#[test]
fn e3_pullback() {
    let r = zeta_pullback(&build_e(3, &int(2), &int(3), &int(7)).unwrap());
    assert_eq!(
        r.a(),
        &m(&[
            &["-1/4", "0", "0", "0"],
            &["-1/2", "3/4", "0", "0"],
            &["1/4", "0", "3/4", "0"],
            &["0", "1/4", "-1/2", "15/4"],
        ])
    );
    assert_eq!(
        r.b(),
        &m(&[
            &["0", "-33/2", "33", "0"],
            &["0", "2", "0", "13"],
            &["0", "0", "2", "-13/2"],
            &["0", "0", "0", "6"]
        ])
    );
    let cp = characteristic_polynomial(r.a());
    let expected: Vec<Rational> = ["-135/256", "-9/16", "39/8", "-5", "1"]
        .iter()
        .map(|s| q(s))
        .collect();
    assert_eq!(cp.coeffs(), expected.as_slice());
}

#[test]
fn o2_generators_and_pullback() {
    let h = build_o(2, &int(1), &int(1), &frac(-1, 2)).unwrap();
    assert_eq!(
        h.t0(),
        &m(&[&["0", "0", "0"], &["0", "-2", "-4"], &["0", "1", "2"]])
    );
    assert_eq!(
        h.t1(),
        &m(&[&["-1/2", "0", "0"], &["1", "1/2", "4"], &["0", "0", "-1/2"]])
    );
    assert_eq!(
        h.t0v(),
        &m(&[
            &["-1/2", "4", "0"],
            &["0", "1/2", "0"],
            &["0", "-1", "-1/2"]
        ])
    );
    assert_eq!(
        h.t1v(),
        &m(&[&["0", "-4", "0"], &["-1", "0", "0"], &["0", "0", "-2"]])
    );
    let r = zeta_pullback(&h);
    assert_eq!(
        r.a(),
        &m(&[
            &["-3/16", "0", "0"],
            &["-1/2", "5/16", "0"],
            &["1/4", "0", "5/16"]
        ])
    );
    assert_eq!(
        r.c(),
        &m(&[
            &["3/4", "2", "4"],
            &["1/2", "3/4", "2"],
            &["-1/4", "-1/2", "-5/4"]
        ])
    );
}

#[test]
fn e5_spectra() {
    let r = zeta_pullback(&build_e(5, &frac(1, 2), &frac(1, 3), &frac(-2, 7)).unwrap());
    let cp = characteristic_polynomial(r.b());
    let expected: Vec<Rational> = [
        "6131125/2176782336",
        "86975/10077696",
        "-116515/559872",
        "-2561/11664",
        "1841/432",
        "-25/6",
        "1",
    ]
    .iter()
    .map(|s| q(s))
    .collect();
    assert_eq!(cp.coeffs(), expected.as_slice());
    assert_eq!(
        rational_eigenvalues(r.a()),
        vec![
            (q("-3/16"), 2),
            (q("5/16"), 2),
            (q("21/16"), 1),
            (q("45/16"), 1)
        ]
    );
}

#[test]
fn closed_form_spot_values() {
    assert_eq!(
        central_scalars(&spec("E:d=3,a=2,b=3,c=7")).unwrap(),
        [int(4), int(4), int(9), int(49)]
    );
    assert_eq!(
        central_scalars(&spec("E:d=3,a=2,b=3,c=7,eps=+-")).unwrap(),
        [int(4), int(4), int(49), int(9)]
    );
    assert_eq!(
        central_scalars(&spec("O:d=2,a=1,b=1,c=-1/2")).unwrap()[0],
        int(0)
    );
    let r2 = build_r(2, &int(1), &int(1), &int(1));
    assert_eq!(r2.delta(), Some(&int(8)));
    assert!(check_racah_relations(&r2).ok);
    let o0 = build_o(0, &int(1), &int(1), &int(1)).unwrap();
    assert_eq!(
        check_h_relations(&o0).central_squares.unwrap()[0],
        frac(25, 16)
    );
}

#[test]
fn eigenspace_dimensions() {
    let dims = |s: &str| -> Vec<(Rational, usize)> {
        t0_eigenspaces(&build_h(&spec(s)).unwrap())
            .unwrap()
            .spaces
            .into_iter()
            .map(|(k, v)| (k, v.dim()))
            .collect()
    };
    assert_eq!(dims("E:d=3,a=2,b=3,c=7"), vec![(int(-2), 3), (int(2), 1)]);
    assert_eq!(dims("O:d=2,a=1,b=1,c=-1/2"), vec![(int(0), 2)]);
    assert_eq!(dims("E:d=1,a=1,b=1,c=1"), vec![(int(-1), 2)]);
}

#[test]
fn lattice_examples() {
    let cases = [
        ("E:d=3,a=2,b=3,c=7", Shape::Diamond, vec![0, 1, 3, 4]),
        ("E:d=3,a=0,b=3,c=1,eps=+-", Shape::Chain3, vec![0, 2, 4]),
        ("O:d=2,a=1,b=1,c=-1/2", Shape::Chain4, vec![0, 1, 2, 3]),
        ("E:d=1,a=1,b=1,c=1", Shape::Simple, vec![0, 2]),
    ];
    for (s, shape, dims) in cases {
        let sp = spec(s);
        assert!(irreducibility_criterion(&sp));
        let rep = submodule_lattice(&build_h(&sp).unwrap()).unwrap();
        assert_eq!(rep.shape, shape, "{s}");
        assert_eq!(
            rep.nodes.iter().map(|n| n.dim).collect::<Vec<_>>(),
            dims,
            "{s}"
        );
        let pred = predicted_lattice(&sp).unwrap();
        let mut pdims: Vec<usize> = pred.nodes.iter().map(|n| n.dim).collect();
        pdims.sort();
        assert_eq!(pdims, dims, "{s}");
    }
}

#[test]
fn composition_series_examples() {
    let cs = composition_series(&build_e(3, &int(2), &int(3), &int(7)).unwrap()).unwrap();
    assert_eq!(cs.chains.len(), 2);
    for f in &cs.factor_dims {
        let mut f = f.clone();
        f.sort();
        assert_eq!(f, vec![1, 3]);
    }
    let cs = composition_series(&build_o(2, &int(1), &int(1), &frac(-1, 2)).unwrap()).unwrap();
    assert_eq!(cs.factor_dims, vec![vec![1, 1, 1]]);
    let cs = composition_series(&build_e(1, &int(1), &int(1), &int(1)).unwrap()).unwrap();
    assert_eq!(cs.factor_dims, vec![vec![2]]);
}

#[test]
fn complete_reducibility_examples() {
    assert!(is_completely_reducible(&build_e(3, &int(2), &int(3), &int(7)).unwrap()).unwrap());
    assert!(
        !is_completely_reducible(&build_o(2, &int(1), &int(1), &frac(-1, 2)).unwrap()).unwrap()
    );
    assert!(is_completely_reducible(&build_o(0, &int(1), &int(1), &int(1)).unwrap()).unwrap());
}

#[test]
fn classification_examples() {
    let rep = submodule_lattice(&build_e(3, &int(2), &int(3), &int(7)).unwrap()).unwrap();
    let minus = rep
        .nodes
        .iter()
        .position(|n| n.eigenvalue == Some(int(-2)))
        .unwrap();
    let tag = &rep
        .subquotients
        .iter()
        .find(|s| s.lower == 0 && s.node == minus)
        .unwrap()
        .tag;
    assert!(tag.verified);
    assert_eq!(
        tag.params,
        RParams::new(2, frac(-3, 2), int(-2), int(-4))
            .normal_form()
            .params
    );

    let rep = submodule_lattice(&build_o(2, &int(1), &int(1), &frac(-1, 2)).unwrap()).unwrap();
    let tag = &rep.subquotients.iter().find(|s| s.lower == 0).unwrap().tag;
    assert!(tag.verified);
    assert_eq!(
        tag.params,
        RParams::new(0, frac(-5, 4), frac(-5, 4), frac(-1, 2))
            .normal_form()
            .params
    );

    let round = RParams::new(2, int(1), int(1), int(1)).normal_form();
    assert!(round.verified);
    assert_eq!(round.params.d, 2);
}
