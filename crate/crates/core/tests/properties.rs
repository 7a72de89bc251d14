use planefol_core::coeff::int;
use planefol_core::foliation::xyz;
use planefol_core::invariants::flex_polynomial;
use planefol_core::poly::{gcd, resultant, squarefree_decomposition};
use planefol_core::series::{implicit_series_solve, PowerSeries1D, Vanishing};
use planefol_core::singular::{milnor_fulton, milnor_resultant};
use planefol_core::{Chart, Coeff, Foliation, Monomial, Poly, ProjectiveMap, QPoly, Vars};
use proptest::prelude::*;

fn xy() -> Vars {
    Vars::new(&["x", "y"])
}

fn from_terms(vars: &Vars, terms: &[(u16, u16, i64)]) -> Poly {
    Poly::from_terms(vars, terms.iter().map(|&(i, j, c)| (Monomial([i, j].into_iter().collect()), Coeff::from(c))))
}

/// Bivariate polynomial of total degree at most `d` with small integer coefficients.
fn poly2(d: u16) -> impl Strategy<Value = Poly> {
    prop::collection::vec((0..=d, 0..=d, -3i64..=3), 0..8)
        .prop_map(move |ts| {
            let ts: Vec<_> = ts.into_iter().filter(|&(i, j, _)| i + j <= d).collect();
            from_terms(&xy(), &ts)
        })
}

fn univariate(coeffs: &[i64]) -> Poly {
    let v = Vars::new(&["x"]);
    Poly::from_qpoly(&v, 0, &QPoly::from_ints(coeffs))
}

fn invertible() -> impl Strategy<Value = ProjectiveMap> {
    prop::array::uniform3(prop::array::uniform3(-2i64..=2))
        .prop_filter_map("singular matrix", |m| ProjectiveMap::from_ints(m).ok())
}

fn quadratic_foliation() -> impl Strategy<Value = Foliation> {
    (poly2(2), poly2(2)).prop_filter_map("not a degree-2 foliation", |(p, q)| {
        Foliation::from_affine(&p, &q, Chart::Z).ok().filter(|f| f.degree() == 2)
    })
}

fn proportional(a: &Poly, b: &Poly) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    &a.scale(&b.leading_coeff()) - &b.scale(&a.leading_coeff()) == Poly::zero(a.vars())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn addition_round_trips(p in poly2(4), q in poly2(4)) {
        prop_assert_eq!(&(&p + &q) - &q, p.clone());
        prop_assert_eq!(&p * &q, &q * &p);
    }

    #[test]
    fn pullback_is_a_right_action(f in quadratic_foliation(), s in invertible(), t in invertible()) {
        let st = s.compose(&t).unwrap();
        prop_assert_eq!(f.pullback(&s).unwrap().pullback(&t).unwrap(), f.pullback(&st).unwrap());
        prop_assert_eq!(f.pullback(&ProjectiveMap::identity()).unwrap(), f);
    }

    #[test]
    fn flex_polynomial_is_covariant(f in quadratic_foliation(), t in invertible()) {
        let moved = flex_polynomial(&f.pullback(&t).unwrap()).unwrap();
        let images = t.images(&xyz());
        let composed = flex_polynomial(&f).unwrap().compose(&images);
        prop_assert!(proportional(&moved, &composed));
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(a in poly2(2), b in poly2(2), c in poly2(1), share in any::<bool>()) {
        let (p, q) = if share { (&a * &c, &b * &c) } else { (a, b) };
        prop_assume!(!p.is_zero() && !q.is_zero());
        let common = gcd(&p, &q).unwrap().degree_in(1).unwrap_or(0) > 0;
        prop_assert_eq!(resultant(&p, &q, 1).unwrap().is_zero(), common);
    }

    #[test]
    fn squarefree_parts_rebuild_the_input(
        roots in prop::collection::vec((-4i64..=4, 1usize..=3), 1..4),
        extra in prop::collection::vec(-3i64..=3, 0..3),
    ) {
        let mut p = univariate(&[1]);
        for &(r, m) in &roots {
            for _ in 0..m {
                p = &p * &univariate(&[-r, 1]);
            }
        }
        let mut tail = extra.clone();
        tail.push(1);
        p = &p * &univariate(&tail);
        let mut rebuilt = univariate(&[1]);
        for (f, m) in squarefree_decomposition(&p).unwrap() {
            prop_assert!(f.leading_coeff().is_one());
            rebuilt = &rebuilt * &f.pow(m as u32);
        }
        prop_assert_eq!(rebuilt, p.monic().unwrap());
    }

    /// On a graph `y = f(x)` each root of `Res_y` is one point, so the two
    /// multiplicity computations must agree there.
    #[test]
    fn fulton_agrees_with_resultant(
        graph in prop::collection::vec(-2i64..=2, 1..4),
        r1 in -3i64..=3,
        m1 in 1usize..=3,
        r2 in -3i64..=3,
        k in poly2(1),
    ) {
        let v = xy();
        let fx = Poly::from_qpoly(&v, 0, &QPoly::from_ints(&graph));
        let p = &Poly::var(&v, 1) - &fx;
        let mut h = Poly::from_qpoly(&v, 0, &QPoly::from_ints(&[-r2, 1]));
        for _ in 0..m1 {
            h = &h * &Poly::from_qpoly(&v, 0, &QPoly::from_ints(&[-r1, 1]));
        }
        let q = &h + &(&p * &k);
        let orbits = milnor_resultant(&p, &q).unwrap();
        let total: usize = orbits.iter().map(|(m, mu)| m.degree().unwrap_or(0) * mu).sum();
        prop_assert_eq!(total, h.total_degree().unwrap());
        for r in [r1, r2] {
            let x0 = int(r);
            let (_, mu) = orbits.iter().find(|(m, _)| m.eval(&x0) == int(0)).unwrap();
            let y0 = fx.eval(&[Coeff::from(r), Coeff::zero()]);
            prop_assert_eq!(milnor_fulton(&p, &q, &[Coeff::from(r), y0]).unwrap(), *mu);
        }
    }

    #[test]
    fn implicit_solution_annihilates(q in poly2(3), a in 1i64..=3, order in 1usize..10) {
        let v = xy();
        let lin = from_terms(&v, &[(1, 0, a)]);
        // drop the constant and the `x` term so that `g_x(0, 0) = a`
        let keep = |m: &Monomial| m.degree() >= 1 && m.0[..] != [1, 0];
        let low = Poly::from_terms(&v, q.terms().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())));
        let g = &lin + &low;
        let x = implicit_series_solve(&g, order).unwrap();
        let y = PowerSeries1D::variable("y", order);
        let back = PowerSeries1D::compose(&g, &[x, y]).unwrap();
        prop_assert_eq!(back.vanishing(), Vanishing::Beyond { order });
    }
}
