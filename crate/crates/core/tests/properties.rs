use polpoisson::geometry::{
    contract_theta, differential, hamiltonian_field, is_polarized_hamiltonian, AffineExpr,
};
use polpoisson::lie_algebra::from_maurer_cartan;
use polpoisson::poisson::{
    homomorphism_defect, jacobi_witness, jacobiator, linear_bracket, linear_hamiltonian_field,
    subordinate_bracket, verify_axioms,
};
use polpoisson::sampling::{random_hamiltonian, random_poly, random_transition, rng, SampleRng};
use polpoisson::symbolic::{int, parse_poly, rat, Poly};
use polpoisson::{BracketKind, FoliateField, LieAlgebra, ModelManifold, PolarizedHamiltonian, Rational};
use proptest::prelude::*;
use rand::Rng;

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=2, 1usize..=3)
}

fn poly_of(r: &mut SampleRng, n: usize, deg: u32) -> Poly {
    random_poly(r, n, deg, 4)
}

/// `{H,K}^p` straight from the coordinate formula on full polynomials:
/// `Σ_i (∂H^p/∂y^i ∂K^p/∂x^{pi} - ∂H^p/∂x^{pi} ∂K^p/∂y^i)`.
fn bracket_oracle(m: ModelManifold, h: &PolarizedHamiltonian, k: &PolarizedHamiltonian) -> Vec<Poly> {
    let nx = m.k() * m.n();
    (0..m.k())
        .map(|p| {
            let hp = h.component(p).unwrap().to_poly();
            let kp = k.component(p).unwrap().to_poly();
            let mut acc = Poly::zero(m.dimension());
            for i in 0..m.n() {
                let (x, y) = (m.x_index(p, i), nx + i);
                acc = &acc + &(&hp.partial(y).unwrap() * &kp.partial(x).unwrap());
                acc = &acc - &(&hp.partial(x).unwrap() * &kp.partial(y).unwrap());
            }
            acc
        })
        .collect()
}

/// Components of a foliate field as full polynomials, x-part first.
fn field_polys(x: &FoliateField) -> Vec<Poly> {
    let m = x.manifold();
    let nx = m.k() * m.n();
    let mut out: Vec<Poly> = x.xi_all().iter().map(AffineExpr::to_poly).collect();
    out.extend(x.eta_all().iter().map(|e| e.embed(m.dimension(), nx).unwrap()));
    out
}

/// Coordinate Lie bracket on full polynomial components.
fn lie_oracle(x: &[Poly], y: &[Poly]) -> Vec<Poly> {
    (0..x.len())
        .map(|c| {
            let mut acc = Poly::zero(x[0].nvars());
            for d in 0..x.len() {
                acc = &acc + &(&x[d] * &y[c].partial(d).unwrap());
                acc = &acc - &(&y[d] * &x[c].partial(d).unwrap());
            }
            acc
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_form_matches_pointwise_equality(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let f = poly_of(&mut r, n, 3);
        let g = poly_of(&mut r, n, 3);
        // (f + g)^2 and f^2 + 2fg + g^2 are built differently
        let lhs = (&f + &g).pow(2);
        let rhs = &(&(&f * &f) + &(&f * &g).scale(&int(2))) + &(&g * &g);
        prop_assert_eq!(&lhs, &rhs);
        let h = &f + &Poly::one(n);
        if f != g {
            let differs = (0..20).any(|_| {
                let pt: Vec<Rational> = (0..n).map(|_| polpoisson::sampling::small_rational(&mut r) + rat(1, 7)).collect();
                f.eval(&pt).unwrap() != g.eval(&pt).unwrap()
            });
            prop_assert!(differs);
        }
        prop_assert_ne!(h, f);
    }

    #[test]
    fn leibniz_linearity_mixed_partials(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let f = poly_of(&mut r, n, 3);
        let g = poly_of(&mut r, n, 3);
        for i in 0..n {
            let d = |p: &Poly| p.partial(i).unwrap();
            prop_assert_eq!(d(&(&f * &g)), &(&d(&f) * &g) + &(&f * &d(&g)));
            prop_assert_eq!(d(&(&f + &g)), &d(&f) + &d(&g));
            for j in 0..n {
                prop_assert_eq!(d(&f).partial(j).unwrap(), f.partial(j).unwrap().partial(i).unwrap());
            }
        }
    }

    #[test]
    fn print_parse_round_trip(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let f = poly_of(&mut r, n, 3);
        let names = polpoisson::symbolic::y_names(n);
        let text = f.display_with(&names).to_string();
        let back = parse_poly(&text, &names).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.display_with(&names).to_string(), text);
    }

    #[test]
    fn bracket_vectors_bilinear_antisymmetric(seed in any::<u64>(), which in 0usize..4) {
        let (_, l) = &LieAlgebra::catalog()[which];
        let mut r = rng(seed);
        let n = l.dim();
        let v = |r: &mut SampleRng| -> Vec<Rational> {
            (0..n).map(|_| polpoisson::sampling::small_rational(r)).collect()
        };
        let (u, w, z) = (v(&mut r), v(&mut r), v(&mut r));
        let uw = l.bracket_vectors(&u, &w).unwrap();
        let wu = l.bracket_vectors(&w, &u).unwrap();
        prop_assert!(uw.iter().zip(&wu).all(|(a, b)| a == &-b.clone()));
        let sum: Vec<Rational> = u.iter().zip(&z).map(|(a, b)| a * int(3) + b).collect();
        let lhs = l.bracket_vectors(&sum, &w).unwrap();
        let zw = l.bracket_vectors(&z, &w).unwrap();
        let rhs: Vec<Rational> = uw.iter().zip(&zw).map(|(a, b)| a * int(3) + b).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn subordinate_bracket_matches_coordinate_formula(seed in any::<u64>(), (k, n) in dims()) {
        let m = ModelManifold::new(k, n).unwrap();
        let mut r = rng(seed);
        let h = random_hamiltonian(&mut r, m, 2);
        let g = random_hamiltonian(&mut r, m, 2);
        let out = subordinate_bracket(&h, &g).unwrap();
        let comps: Vec<Poly> = out.components().iter().map(AffineExpr::to_poly).collect();
        prop_assert_eq!(comps, bracket_oracle(m, &h, &g));
    }

    #[test]
    fn field_bracket_matches_coordinate_formula(seed in any::<u64>(), (k, n) in dims()) {
        let m = ModelManifold::new(k, n).unwrap();
        let mut r = rng(seed);
        let x = hamiltonian_field(&random_hamiltonian(&mut r, m, 2)).unwrap();
        let y = hamiltonian_field(&random_hamiltonian(&mut r, m, 2)).unwrap();
        let ours = field_polys(&x.lie_bracket(&y).unwrap());
        prop_assert_eq!(ours, lie_oracle(&field_polys(&x), &field_polys(&y)));
    }

    #[test]
    fn homomorphism_with_the_sign_that_holds(seed in any::<u64>(), (k, n) in dims()) {
        let m = ModelManifold::new(k, n).unwrap();
        let mut r = rng(seed);
        let h = random_hamiltonian(&mut r, m, 2);
        let g = random_hamiltonian(&mut r, m, 2);
        let lhs = lie_oracle(
            &field_polys(&hamiltonian_field(&h).unwrap()),
            &field_polys(&hamiltonian_field(&g).unwrap()),
        );
        let rhs = field_polys(&hamiltonian_field(&subordinate_bracket(&g, &h).unwrap()).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert!(homomorphism_defect(&BracketKind::Subordinate, &h, &g).unwrap().is_zero());
    }

    #[test]
    fn linear_homomorphism_and_field(seed in any::<u64>(), which in 0usize..4, k in 1usize..=2) {
        let (_, l) = LieAlgebra::catalog().swap_remove(which);
        let m = ModelManifold::for_lie_algebra(k, &l).unwrap();
        let mut r = rng(seed);
        let h = random_hamiltonian(&mut r, m, 2);
        let g = random_hamiltonian(&mut r, m, 2);
        let x = linear_hamiltonian_field(&l, &h).unwrap();
        let gh = linear_bracket(&l, &g, &h).unwrap();
        for p in 0..k {
            prop_assert_eq!(x.apply(&g.component(p).unwrap()).unwrap(), gh.component(p).unwrap());
        }
        let kind = BracketKind::linear(l).unwrap();
        prop_assert!(homomorphism_defect(&kind, &h, &g).unwrap().is_zero());
    }

    #[test]
    fn field_lie_bracket_is_a_lie_bracket(seed in any::<u64>(), (k, n) in dims()) {
        let m = ModelManifold::new(k, n).unwrap();
        let mut r = rng(seed);
        let field = |r: &mut SampleRng| {
            let xi = (0..k * n)
                .map(|_| {
                    let linear = (0..k * n).map(|_| random_poly(r, n, 1, 2)).collect();
                    AffineExpr::new(m, random_poly(r, n, 2, 2), linear).unwrap()
                })
                .collect();
            let eta = (0..n).map(|_| random_poly(r, n, 2, 2)).collect();
            FoliateField::new(m, xi, eta).unwrap()
        };
        let (a, b, c) = (field(&mut r), field(&mut r), field(&mut r));
        let br = |x: &FoliateField, y: &FoliateField| x.lie_bracket(y).unwrap();
        prop_assert_eq!(br(&a, &b), br(&b, &a).negated());
        let jac = br(&br(&a, &b), &c)
            .checked_add(&br(&br(&b, &c), &a))
            .unwrap()
            .checked_add(&br(&br(&c, &a), &b))
            .unwrap();
        prop_assert!(jac.is_zero());
    }

    #[test]
    fn hamiltonian_field_is_linear(seed in any::<u64>(), (k, n) in dims()) {
        let m = ModelManifold::new(k, n).unwrap();
        let mut r = rng(seed);
        let h = random_hamiltonian(&mut r, m, 2);
        let g = random_hamiltonian(&mut r, m, 2);
        let c = rat(-5, 3);
        let combo = h.scale(&c).checked_add(&g).unwrap();
        let lhs = hamiltonian_field(&combo).unwrap();
        let rhs = hamiltonian_field(&h).unwrap().scale(&c).checked_add(&hamiltonian_field(&g).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(contract_theta(&hamiltonian_field(&h).unwrap()).unwrap(), differential(&h).unwrap().negated());
    }

    #[test]
    fn polarization_recovers_decomposition(seed in any::<u64>(), (k, n) in dims()) {
        let m = ModelManifold::new(k, n).unwrap();
        let mut r = rng(seed);
        let h = random_hamiltonian(&mut r, m, 2);
        prop_assert_eq!(is_polarized_hamiltonian(m, &h.components()).unwrap(), h.clone());
        if k == 2 && !h.a().iter().all(Poly::is_zero) {
            // doubling one component breaks the shared a
            let mut comps = h.components();
            comps[1] = comps[1].scale(&int(2));
            prop_assert!(is_polarized_hamiltonian(m, &comps).is_err());
        }
    }

    #[test]
    fn transitions_commute_with_fields(seed in any::<u64>(), (k, n) in dims()) {
        let m = ModelManifold::new(k, n).unwrap();
        let mut r = rng(seed);
        let t = random_transition(&mut r, m).unwrap();
        let h = random_hamiltonian(&mut r, m, 2);
        let via_h = hamiltonian_field(&t.transform_hamiltonian(&h).unwrap()).unwrap();
        let via_field = t.transform_field(&hamiltonian_field(&h).unwrap()).unwrap();
        prop_assert_eq!(via_h, via_field);
        let back = t.inverse().unwrap();
        prop_assert_eq!(back.transform_hamiltonian(&t.transform_hamiltonian(&h).unwrap()).unwrap(), h);
    }

    #[test]
    fn subordinate_axioms_hold(seed in any::<u64>(), (k, n) in dims()) {
        let m = ModelManifold::new(k, n).unwrap();
        let mut r = rng(seed);
        let samples: Vec<_> = (0..4).map(|_| random_hamiltonian(&mut r, m, 2)).collect();
        let report = verify_axioms(&BracketKind::Subordinate, m, &samples).unwrap();
        prop_assert!(report.all_passed(), "{}", report);
    }
}

#[test]
fn maurer_cartan_round_trip() {
    for (_, l) in LieAlgebra::catalog() {
        let data = l.to_maurer_cartan();
        assert_eq!(from_maurer_cartan(&data).unwrap(), l);
        assert_eq!(from_maurer_cartan(&data).unwrap().to_maurer_cartan(), data);
    }
}

#[test]
fn jacobi_report_matches_brute_force() {
    let mut r = rng(99);
    for _ in 0..20 {
        let n = 3;
        let mut entries = Vec::new();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            for l in 0..n {
                if r.gen_range(0..3) == 0 {
                    entries.push((i, j, l, int(r.gen_range(-1..=1))));
                }
            }
        }
        let alg = LieAlgebra::from_brackets(n, entries).unwrap();
        let c = |i: usize, j: usize, l: usize| alg.constant(i, j, l).clone();
        let mut brute = 0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = int(0);
                        for m in 0..n {
                            s += c(i, j, m) * c(m, k, l) + c(j, k, m) * c(m, i, l) + c(k, i, m) * c(m, j, l);
                        }
                        if s != int(0) {
                            brute += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(alg.validate().jacobi.len(), brute);
    }
}


/// A genuine negative control: `[e1,e2] = e3`, `[e1,e3] = e1` violates Jacobi
/// at `(1,2,3)` in component `e3`, and the jacobiator sees it.
#[test]
fn genuine_jacobi_violation_is_witnessed() {
    let bad = LieAlgebra::from_brackets(3, [(0, 1, 2, int(1)), (0, 2, 0, int(1))]).unwrap();
    let report = bad.validate();
    assert!(report
        .jacobi
        .iter()
        .any(|v| (v.i, v.j, v.k, v.l) == (0, 1, 2, 2) && v.value == int(-1)));
    let (triple, jac) = jacobi_witness(&bad, 2).unwrap().expect("witness");
    assert!(!jac.is_zero());
    let kind = BracketKind::linear_unchecked(bad.clone());
    assert_eq!(jacobiator(&kind, &triple[0], &triple[1], &triple[2]).unwrap(), jac);
    let m = ModelManifold::for_lie_algebra(2, &bad).unwrap();
    let samples = vec![triple[0].clone(), triple[1].clone(), triple[2].clone()];
    let report = verify_axioms(&kind, m, &samples).unwrap();
    assert!(!report.check("jacobi").unwrap().passed());
}

/// The injection named in the acceptance criteria, `C[1][3][2] = 1` on top of
/// heisenberg3, yields a Lie algebra; it is not a negative control.
#[test]
fn heisenberg_with_c132_is_a_lie_algebra() {
    let alg = LieAlgebra::from_brackets(3, [(0, 1, 2, int(1)), (0, 2, 1, int(1))]).unwrap();
    assert!(alg.is_valid());
    assert!(jacobi_witness(&alg, 1).unwrap().is_none());
}

#[test]
fn sample_hamiltonians_are_deterministic() {
    let m = ModelManifold::new(2, 3).unwrap();
    let a: Vec<_> = (0..3).map(|_| random_hamiltonian(&mut rng(42), m, 2)).collect();
    assert!(a.windows(2).all(|w| w[0] == w[1]));
}
