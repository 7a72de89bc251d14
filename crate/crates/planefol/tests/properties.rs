use planefol::config::Config;
use planefol::portrait::{orthogonal_foliation, NumericForm, PortraitConfig};
use planefol_core::text::{parse_affine, parse_homogeneous};
use planefol_core::{Chart, Coeff, Foliation, Monomial, Poly, Vars};
use proptest::prelude::*;

fn poly2(d: u16) -> impl Strategy<Value = Poly> {
    prop::collection::vec((0..=d, 0..=d, -5i64..=5, 1i64..=3), 1..7).prop_map(move |ts| {
        let v = Vars::new(&["x", "y"]);
        Poly::from_terms(
            &v,
            ts.into_iter()
                .filter(|&(i, j, _, _)| i + j <= d)
                .map(|(i, j, n, q)| (Monomial([i, j].into_iter().collect()), Coeff::frac(n, q))),
        )
    })
}

fn foliation() -> impl Strategy<Value = Foliation> {
    (poly2(3), poly2(3)).prop_filter_map("not a foliation", |(p, q)| Foliation::from_affine(&p, &q, Chart::Z).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_forms_parse_back(f in foliation()) {
        prop_assert_eq!(parse_homogeneous(&f.to_string()).unwrap(), f.clone());
        let a = f.affine(Chart::Z);
        prop_assert_eq!(parse_affine(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn orthogonal_fields_are_perpendicular(f in foliation(), pts in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 8)) {
        let a = f.affine(Chart::Z);
        let (n, m) = (NumericForm::new(&a).unwrap(), NumericForm::new(&orthogonal_foliation(&a).unwrap()).unwrap());
        for (x, y) in pts {
            let ((p, q), (p2, q2)) = (n.eval(x, y), m.eval(x, y));
            // tangents (Q, −P) and (Q₂, −P₂)
            let dot = q * q2 + p * p2;
            prop_assert!(dot.abs() <= 1e-9 * (1.0 + p.hypot(q) * p2.hypot(q2)));
        }
    }

    #[test]
    fn portrait_config_survives_toml(
        x0 in -10.0f64..0.0, w in 0.5f64..10.0, y0 in -10.0f64..0.0, hgt in 0.5f64..10.0,
        seeds in 1usize..40, tol in 1e-12f64..1e-3, width in 16u32..2000,
    ) {
        let cfg = PortraitConfig { viewport: [x0, x0 + w, y0, y0 + hgt], seeds, tolerance: tol, width, ..PortraitConfig::default() };
        let text = format!("[portrait]\n{}", toml::to_string(&cfg).unwrap());
        prop_assert_eq!(Config::parse(&text).unwrap().portrait, cfg);
    }
}
