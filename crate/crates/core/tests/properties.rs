use std::f64::consts::TAU;

use proptest::prelude::*;

use harmlab::analytic::{catalog_lookup, AnalyticFunction, Jet, CATALOG};
use harmlab::family::{
    affine_map, family_member, member_dilatation_closed_form, rotate_parts, special_case_family,
    type1_family_member, FamilyParams, Type1Params,
};
use harmlab::harmonic::{is_sense_preserving, GridSpec, HarmonicMap};
use harmlab::schwarzian::{
    compute_q_analytic, default_probes, disk_automorphism, fit_disk_automorphism,
    is_disk_automorphism, q_series_from_dilatation, schwarzian, solve_schwarzian_series,
    DiskAutomorphismParams, Mobius,
};
use harmlab::Cx;

fn point_in(r_min: f64, r_max: f64) -> impl Strategy<Value = Cx> {
    (r_min..=r_max, 0.0..TAU).prop_map(|(r, t)| Cx::from_polar(r, t))
}

fn unit_square() -> impl Strategy<Value = Cx> {
    (-1.0..=1.0f64, -1.0..=1.0f64).prop_map(|(a, b)| Cx::new(a, b))
}

fn jet4() -> impl Strategy<Value = Jet> {
    prop::collection::vec(unit_square(), 5).prop_map(|c| Jet::from_coeffs(c).unwrap())
}

fn family_params() -> impl Strategy<Value = FamilyParams> {
    (0.0..TAU, 0.0..TAU, point_in(0.0, 0.8), unit_square())
        .prop_map(|(alpha, beta, z0, c)| FamilyParams::new(alpha, beta, z0, c).unwrap())
}

/// Möbius map whose pole stays outside `|w| <= 1.4`.
fn mobius() -> impl Strategy<Value = Mobius> {
    (
        unit_square(),
        unit_square(),
        unit_square(),
        point_in(0.0, 0.5),
    )
        .prop_map(|(a, b, c, e)| (a, b, c, Cx::new(3.0, 0.0) + e))
        .prop_filter("nondegenerate", |(a, b, c, d)| (a * d - b * c).norm() > 0.1)
        .prop_map(|(a, b, c, d)| Mobius::new(a, b, c, d).unwrap())
}

fn catalog_functions() -> Vec<AnalyticFunction> {
    let mut out = Vec::new();
    for e in CATALOG {
        let (h, g) = catalog_lookup(e.name).unwrap();
        out.push(h);
        out.push(g);
    }
    out
}

fn type2_maps() -> Vec<HarmonicMap> {
    [
        "shear",
        "expmap",
        "blaschke-dil",
        "exp-dil",
        "cubic",
        "square",
    ]
    .iter()
    .map(|n| HarmonicMap::from_catalog(n).unwrap())
    .collect()
}

fn close(a: Cx, b: Cx) -> f64 {
    (a - b).norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jet_first_coefficient_matches_central_difference(z in point_in(0.0, 0.7)) {
        let h = 1e-5;
        for f in catalog_functions() {
            let c1 = f.eval_jet(z, 1).unwrap().coeff(1);
            let fd = (f.eval(z + h).unwrap() - f.eval(z - h).unwrap()) / (2.0 * h);
            prop_assert!(close(c1, fd) <= 1e-7 * c1.norm().max(1.0), "{c1} vs {fd}");
        }
    }

    #[test]
    fn jet_product_is_commutative_and_associative(a in jet4(), b in jet4(), c in jet4()) {
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        let left = ab.mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        for k in 0..=4 {
            prop_assert!(close(ab.coeff(k), ba.coeff(k)) <= 1e-14);
            prop_assert!(close(left.coeff(k), right.coeff(k)) <= 1e-14);
        }
    }

    #[test]
    fn series_matches_direct_evaluation(z in point_in(0.0, 0.5)) {
        for f in catalog_functions() {
            let s = f.to_series(48).unwrap();
            prop_assert!(close(s.eval(z).unwrap(), f.eval(z).unwrap()) <= s.tail_bound(z.norm()) + 1e-14);
        }
    }

    #[test]
    fn jacobian_blind_to_constants(z in point_in(0.0, 0.7), c in unit_square(), k in unit_square()) {
        for f in type2_maps() {
            let shifted = HarmonicMap {
                h: AnalyticFunction::linear(vec![(Cx::new(1.0, 0.0), f.h.clone()), (k, AnalyticFunction::constant(Cx::new(1.0, 0.0)))]),
                g: AnalyticFunction::linear(vec![(Cx::new(1.0, 0.0), f.g.clone()), (k, AnalyticFunction::constant(Cx::new(1.0, 0.0)))]),
                c,
            };
            prop_assert_eq!(shifted.jacobian(z).unwrap(), f.jacobian(z).unwrap());
            prop_assert_eq!(f.clone().with_constant(c).jacobian(z).unwrap(), f.jacobian(z).unwrap());
        }
    }

    #[test]
    fn jacobian_matches_real_partials(z in point_in(0.0, 0.65)) {
        let h = 1e-6;
        for f in type2_maps() {
            let dx = (f.eval(z + h).unwrap() - f.eval(z - h).unwrap()) / (2.0 * h);
            let dy = (f.eval(z + Cx::new(0.0, h)).unwrap() - f.eval(z - Cx::new(0.0, h)).unwrap()) / (2.0 * h);
            let det = dx.re * dy.im - dx.im * dy.re;
            let j = f.jacobian(z).unwrap();
            prop_assert!((det - j).abs() <= 1e-7 * (1.0 + j.abs()), "{det} vs {j}");
        }
    }

    #[test]
    fn levy_criteria_agree_on_members(p in family_params(), nr in 2usize..8, na in 4usize..16) {
        let grid = GridSpec::polar(0.7, nr, na).unwrap();
        for f in type2_maps() {
            let report = is_sense_preserving(&family_member(&f, &p).unwrap(), &grid);
            prop_assert!(report.get("levy_criteria_agree").unwrap().pass);
            prop_assert_eq!(report.checks[0].pass, report.checks[1].pass);
        }
    }

    #[test]
    fn schwarzian_invariant_under_mobius(m in mobius(), z in point_in(0.2, 0.6)) {
        for f in catalog_functions() {
            let Ok(s) = schwarzian(&f, z) else { continue };
            let composed = f.post_compose(m.to_expr());
            prop_assert!(close(schwarzian(&composed, z).unwrap(), s) <= 1e-9);
        }
        let pure = AnalyticFunction::identity().post_compose(m.to_expr());
        prop_assert!(schwarzian(&pure, z).unwrap().norm() <= 1e-12);
    }

    #[test]
    fn q_cancels_to_twice_schwarzian(z in point_in(0.0, 0.7)) {
        for f in type2_maps() {
            let omega = f.dilatation_fn();
            if f.dilatation_jet(z, 1).unwrap().coeff(1).norm() < 0.1 {
                continue;
            }
            let q = compute_q_analytic(&omega, z).unwrap();
            prop_assert!(close(q, 2.0 * schwarzian(&omega, z).unwrap()) <= 1e-9);
        }
    }

    #[test]
    fn mobius_group_laws(a in mobius(), b in mobius(), c in mobius(), w in point_in(0.0, 1.0)) {
        let left = a.compose(&b).compose(&c);
        let right = a.compose(&b.compose(&c));
        prop_assert!(close(left.apply(w).unwrap(), right.apply(w).unwrap()) <= 1e-12);
        let id = a.compose(&a.inverse());
        prop_assert!(close(id.apply(w).unwrap(), w) <= 1e-12);
        let id = a.inverse().compose(&a);
        prop_assert!(close(id.apply(w).unwrap(), w) <= 1e-12);
    }

    #[test]
    fn automorphism_zero_and_phase(gamma in -3.0..3.0f64, z0 in point_in(0.0, 0.9)) {
        let t = disk_automorphism(&DiskAutomorphismParams::new(gamma, z0).unwrap()).unwrap();
        prop_assert!(t.apply(-z0).unwrap().norm() <= 1e-12);
        // T'(-z0) = e^{iγ}/(1-|z0|²)
        let d = t.apply_jet(&Jet::variable(-z0, 1)).unwrap().coeff(1);
        prop_assert!((d.arg() - gamma).abs() <= 1e-12);
        prop_assert!(is_disk_automorphism(&t));
    }

    #[test]
    fn equal_jacobian_closure(p in family_params(), z in point_in(0.0, 0.7)) {
        for f in type2_maps() {
            let member = family_member(&f, &p).unwrap();
            let j = f.jacobian(z).unwrap();
            prop_assert!((member.jacobian(z).unwrap() - j).abs() <= 1e-11 * (1.0 + j));
        }
    }

    #[test]
    fn member_is_affine_image_of_rotation(p in family_params(), z in point_in(0.0, 0.7)) {
        let a = affine_map(&p).unwrap();
        for f in type2_maps() {
            let lhs = family_member(&f, &p).unwrap().eval(z).unwrap();
            let rhs = a.apply(rotate_parts(&f, p.alpha, p.beta).eval(z).unwrap());
            prop_assert!(close(lhs, rhs) <= 1e-12);
        }
    }

    #[test]
    fn member_dilatation_law(p in family_params(), z in point_in(0.0, 0.7)) {
        for f in type2_maps() {
            let got = family_member(&f, &p).unwrap().dilatation(z).unwrap();
            let want = member_dilatation_closed_form(f.dilatation(z).unwrap(), &p);
            prop_assert!(close(got, want) <= 1e-11);
        }
    }

    #[test]
    fn member_of_member_is_member(p in family_params(), q in family_params()) {
        for f in type2_maps() {
            let twice = family_member(&family_member(&f, &p).unwrap(), &q).unwrap();
            let fit = fit_disk_automorphism(&twice.dilatation_fn(), &f.dilatation_fn(), &default_probes()).unwrap();
            prop_assert!(fit.validation_residual <= 1e-8);
        }
    }

    #[test]
    fn type1_jacobian_law(
        a in point_in(0.0, 0.95),
        b in unit_square(),
        alpha in 0.0..TAU,
        beta in 0.0..TAU,
        z in point_in(0.0, 0.7),
    ) {
        let p = Type1Params::new(a, b, alpha, beta).unwrap();
        for h in catalog_functions() {
            let dh = h.eval_derivative(z).unwrap();
            if dh.norm() < 1e-6 {
                continue;
            }
            let j = type1_family_member(&h, &p).unwrap().jacobian(z).unwrap();
            prop_assert!((j - (1.0 - a.norm_sqr()) * dh.norm_sqr()).abs() <= 1e-12 * (1.0 + dh.norm_sqr()));
        }
    }

    #[test]
    fn special_case_jacobian(c1 in point_in(0.05, 0.5), c2 in point_in(0.0, 0.4), p in family_params(), z in point_in(0.0, 0.5)) {
        // |v| <= 0.5·0.5 + 0.4·0.25 < 1 on |z| <= 0.5
        let v = AnalyticFunction::linear(vec![
            (c1, AnalyticFunction::identity()),
            (c2, AnalyticFunction::parse("z^2").unwrap()),
        ]);
        let f = special_case_family(&v, &p, 64).unwrap();
        let vz = v.eval(z).unwrap();
        prop_assert!((f.jacobian(z).unwrap() - (1.0 - vz.norm_sqr())).abs() <= 1e-12);
    }
}

#[test]
fn reconstruction_reproduces_q_for_catalog() {
    for f in type2_maps() {
        let omega = f.dilatation_fn();
        let Ok(q) = q_series_from_dilatation(&omega, 64) else {
            continue;
        };
        let rec = AnalyticFunction::Series(solve_schwarzian_series(&q, 64).unwrap());
        for z in GridSpec::polar(0.5, 5, 12).unwrap().points() {
            let got = 2.0 * schwarzian(&rec, z).unwrap();
            let want = q.eval(z).unwrap();
            assert!(
                close(got, want) <= 1e-9_f64.max(q.tail_bound(z.norm())),
                "{got} vs {want} at {z}"
            );
        }
    }
}
