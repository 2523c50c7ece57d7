use proptest::prelude::*;

use racah_core::algebra::{bi_triple, check_h_relations, check_racah_relations, zeta_pullback};
use racah_core::catalog::{
    build_h, build_r, central_scalars, r_delta, twist, Family, ModuleSpec, Twist,
};
use racah_core::lattice::{classify_r_subquotient, spin, submodule_lattice};
use racah_core::matrix::RatMatrix;
use racah_core::poly::rational_eigenvalues;
use racah_core::rational::{frac, int, Rational};
use racah_core::Subspace;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=5).prop_map(|(n, d)| frac(n, d))
}

fn matrix(n: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(-4i64..=4, n * n)
        .prop_map(move |v| RatMatrix::from_fn(n, n, |i, j| int(v[i * n + j])))
}

fn rect(rows: usize, cols: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(-3i64..=3, rows * cols)
        .prop_map(move |v| RatMatrix::from_fn(rows, cols, |i, j| int(v[i * cols + j])))
}

fn subspace(n: usize) -> impl Strategy<Value = Subspace> {
    (0..=n)
        .prop_flat_map(move |k| rect(k, n))
        .prop_map(move |m| Subspace::span(n, m.row_vectors()))
}

fn twist_strategy() -> impl Strategy<Value = Twist> {
    prop::sample::select(Twist::ALL.to_vec())
}

fn h_spec(max_d: u32) -> impl Strategy<Value = ModuleSpec> {
    (
        any::<bool>(),
        0..=max_d,
        rational(),
        rational(),
        rational(),
        twist_strategy(),
    )
        .prop_map(|(e, d, a, b, c, t)| {
            let (family, d) = if e {
                (Family::E, d | 1)
            } else {
                (Family::O, d & !1)
            };
            ModuleSpec::new(family, d, a, b, c, t).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rref_is_idempotent(m in rect(4, 5)) {
        let r = m.rref().matrix;
        prop_assert_eq!(r.rref().matrix, r);
    }

    #[test]
    fn rank_plus_nullity(m in rect(4, 6)) {
        prop_assert_eq!(m.rank() + m.kernel().dim(), 6);
        for v in m.kernel().basis_vectors() {
            prop_assert!(m.mul_vec(v).iter().all(|x| *x == int(0)));
        }
    }

    #[test]
    fn dimension_formula_and_modular_law(u in subspace(5), w in subspace(5), x in subspace(5)) {
        let s = u.sum(&w).unwrap();
        let i = u.intersect(&w).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
        // Modular law: if u ⊆ x then u + (w ∩ x) = (u + w) ∩ x.
        let ux = u.intersect(&x).unwrap();
        let lhs = ux.sum(&w.intersect(&x).unwrap()).unwrap();
        let rhs = ux.sum(&w).unwrap().intersect(&x).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mutual_containment_is_equality(u in subspace(4), w in subspace(4)) {
        let both = u.contains(&w).unwrap() && w.contains(&u).unwrap();
        prop_assert_eq!(both, u == w);
    }

    #[test]
    fn eigenvalues_survive_conjugation(d in prop::collection::vec(-3i64..=3, 4), p in matrix(4)) {
        // Conjugate a triangular matrix with known spectrum by an invertible p.
        prop_assume!(p.rank() == 4);
        let mut t = RatMatrix::from_diagonal(&d.iter().map(|x| int(*x)).collect::<Vec<_>>());
        t.set(0, 1, int(1));
        t.set(1, 3, int(-2));
        let pinv = {
            let n = 4;
            let aug = RatMatrix::from_fn(n, 2 * n, |i, j| if j < n { p.get(i, j).clone() } else if j - n == i { int(1) } else { int(0) });
            let r = aug.rref().matrix;
            RatMatrix::from_fn(n, n, |i, j| r.get(i, n + j).clone())
        };
        let conj = &(&p * &t) * &pinv;
        prop_assert_eq!(rational_eigenvalues(&conj), rational_eigenvalues(&t));
    }

    #[test]
    fn twist_is_a_group_action(s in h_spec(5), e1 in twist_strategy(), e2 in twist_strategy()) {
        let h = build_h(&s).unwrap();
        let lhs = twist(&h, e1 * e2);
        let rhs = twist(&twist(&h, e2), e1);
        prop_assert_eq!(lhs.generators(), rhs.generators());
    }

    #[test]
    fn catalog_modules_satisfy_relations(s in h_spec(7)) {
        let h = build_h(&s).unwrap();
        let rep = check_h_relations(&h);
        prop_assert!(rep.ok);
        prop_assert_eq!(rep.central_squares.unwrap(), central_scalars(&s).unwrap());
        prop_assert!(check_racah_relations(&zeta_pullback(&h)).ok);
        prop_assert!(bi_triple(&h).report.ok);
    }

    #[test]
    fn r_modules_satisfy_relations(d in 0u32..6, a in rational(), b in rational(), c in rational()) {
        let r = build_r(d, &a, &b, &c);
        prop_assert!(check_racah_relations(&r).ok);
        let sum = &(r.a() + r.b()) + r.c();
        prop_assert_eq!(sum.as_scalar(), Some(r_delta(d, &a, &b, &c)));
    }

    #[test]
    fn classification_is_invariant_under_conjugation(d in 0u32..4, a in rational(), b in rational(), c in rational(), p in matrix(4)) {
        let n = d as usize + 1;
        let p = RatMatrix::from_fn(n, n, |i, j| p.get(i, j).clone() + if i == j { int(5) } else { int(0) });
        prop_assume!(p.rank() == n);
        let r = build_r(d, &a, &b, &c);
        let delta = r.delta().unwrap().clone();
        let direct = classify_r_subquotient(r.a(), r.b(), &delta);
        let pinv = {
            let aug = RatMatrix::from_fn(n, 2 * n, |i, j| if j < n { p.get(i, j).clone() } else if j - n == i { int(1) } else { int(0) });
            let rr = aug.rref().matrix;
            RatMatrix::from_fn(n, n, |i, j| rr.get(i, n + j).clone())
        };
        let conj = |x: &RatMatrix| &(&p * x) * &pinv;
        let moved = classify_r_subquotient(&conj(r.a()), &conj(r.b()), &delta);
        prop_assert_eq!(direct, moved);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn lattice_nodes_are_invariant_and_closed(s in h_spec(5)) {
        prop_assume!(s.family == Family::E || s.epsilon == Twist::PlusPlus);
        prop_assume!(racah_core::catalog::irreducibility_criterion(&s));
        let h = build_h(&s).unwrap();
        let r = zeta_pullback(&h);
        let rep = submodule_lattice(&h).unwrap();
        let nodes: Vec<Subspace> = rep.nodes.iter().map(|n| n.subspace()).collect();
        for x in &nodes {
            for g in r.generators() {
                prop_assert!(x.is_invariant_under(g));
            }
            for y in &nodes {
                prop_assert!(nodes.contains(&x.sum(y).unwrap()));
                prop_assert!(nodes.contains(&x.intersect(y).unwrap()));
            }
            // Spin minimality for a basis vector of each node.
            if let Some(v) = x.basis_vectors().next() {
                let sp = spin(&r, [v]);
                prop_assert!(x.contains(&sp).unwrap());
                for y in nodes.iter().filter(|y| y.contains_vector(v)) {
                    prop_assert!(y.contains(&sp).unwrap());
                }
            }
        }
        prop_assert_eq!(rep.t0_diagonalizable, rep.atoms_span_everything());
    }
}
