use num_complex::Complex64;
use zeta_atlas::critical::*;
use zeta_atlas::dynamics::{iterate_orbit, FamilyKind, FixedPointClass, IterationParams, OrbitStatus};
use zeta_atlas::special::zeta;
use zeta_atlas::transfer::*;
use zeta_atlas::viewport::Viewport;
use zeta_atlas::{EvalParams, FunctionId};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ep() -> EvalParams {
    EvalParams::default()
}

fn critical(label: &str) -> CriticalPoint {
    resolve_label(FunctionId::Zeta, label, &ep()).unwrap().unwrap()
}

#[test]
fn plateau_principal() {
    let cp = quasi_critical(FunctionId::Zeta, &ep()).unwrap();
    let p = principal_point(&cp, FamilyKind::Additive).unwrap();
    assert!((p - c(999.0, 0.0)).norm() < 1e-12);
    let t = transfer_value(FunctionId::Zeta, &cp, FamilyKind::Additive, c(999.0, 0.0), &ep()).unwrap();
    assert!(t.norm() < 1e-12);
    let region = Viewport::new(c(1000.0, 0.0), 20.0, 64, 64).unwrap();
    let a = find_fixed_values(FunctionId::Zeta, &cp, FamilyKind::Additive, &region, &ep()).unwrap();
    let fv = a
        .fixed_values
        .iter()
        .find(|f| (f.c - c(999.0, 0.0)).norm() < 1e-9)
        .unwrap();
    assert_eq!(fv.class, FixedPointClass::Attracting);
    assert!(fv.deriv_mod < 1e-6);
}

#[test]
fn multiplicative_principals_against_high_precision_oracle() {
    // oracle: c_r / ζ(c_r) with c_r from 30-digit root finding on ζ'
    let cases = [
        ("z95", c(40.6968, 214.492), 1e-3),
        ("z31", c(2.5137, 44.7886), 1e-3),
        ("z42", c(10.0436, 51.7172), 1e-3),
    ];
    for (label, want, tol) in cases {
        let p = principal_point(&critical(label), FamilyKind::Multiplicative).unwrap();
        assert!(
            (p.re - want.re).abs() < tol && (p.im - want.im).abs() < tol,
            "{label}: {p}"
        );
    }
    // published figures: z95's real part and both parts of z42 (to 5e-3) agree
    let p95 = principal_point(&critical("z95"), FamilyKind::Multiplicative).unwrap();
    assert!((p95.re - 40.7).abs() < 0.5);
    let p42 = principal_point(&critical("z42"), FamilyKind::Multiplicative).unwrap();
    assert!((p42 - c(10.0451, 51.7145)).norm() < 5e-3);
}

#[test]
fn principal_is_a_root_for_every_cataloged_critical() {
    let mut cat = find_real_criticals(FunctionId::Zeta, -20.0, 0.0, &ep()).unwrap();
    cat.extend(find_unreal_criticals(FunctionId::Zeta, 1.0, 100.0, &ep()).unwrap());
    assert!(cat.len() > 25);
    for cp in &cat {
        for fam in [FamilyKind::Additive, FamilyKind::Multiplicative] {
            if fam == FamilyKind::Multiplicative && cp.value.norm() < 1e-12 {
                continue;
            }
            let p = principal_point(cp, fam).unwrap();
            let t = transfer_value(FunctionId::Zeta, cp, fam, p, &ep()).unwrap();
            assert!(t.norm() < ROOT_TOL, "{} {fam}: {t}", cp.label);
        }
    }
}

#[test]
fn transfer_is_not_identically_zero() {
    let cp = critical("z-15");
    let t = transfer_value(FunctionId::Zeta, &cp, FamilyKind::Additive, c(0.0, 0.0), &ep()).unwrap();
    let direct = zeta(cp.value, &ep()).unwrap() - cp.value;
    assert!((t - direct).norm() < 1e-15);
    assert!(t.is_finite() && t.norm() > 0.1);
}

fn check_analysis(a: &TransferAnalysis) {
    let ip = IterationParams::default();
    for (i, fv) in a.fixed_values.iter().enumerate() {
        let t = transfer_value(FunctionId::Zeta, &a.critical, a.family, fv.c, &ep()).unwrap();
        assert!(t.norm() < ROOT_TOL);
        assert_eq!(fv.class, FixedPointClass::from_modulus(fv.deriv_mod));
        for other in &a.fixed_values[i + 1..] {
            assert!((other.c - fv.c).norm() >= 1e-6);
        }
        // the dynamics agree with the classification
        let orbit = iterate_orbit(FunctionId::Zeta, a.family, fv.c, a.critical.location, &ip, &ep()).unwrap();
        let locked_here = match &orbit.status {
            OrbitStatus::Periodic { period: 1, cycle, .. } => (cycle[0] - fv.fixed_point).norm() < 1e-6,
            _ => false,
        };
        match fv.class {
            FixedPointClass::Attracting => assert!(locked_here, "{}: {:?}", fv.c, orbit.status),
            FixedPointClass::Repelling => assert!(!locked_here, "{}: {:?}", fv.c, orbit.status),
            FixedPointClass::Indifferent => {}
        }
    }
}

#[test]
fn central_valley_classification() {
    let z23 = find_fixed_values(
        FunctionId::Zeta,
        &critical("z23"),
        FamilyKind::Additive,
        &central_valley(),
        &ep(),
    )
    .unwrap();
    assert!(!z23.fixed_values.is_empty());
    assert!(z23.fixed_values.iter().all(|f| f.class == FixedPointClass::Repelling));
    check_analysis(&z23);

    let z13 = find_fixed_values(
        FunctionId::Zeta,
        &critical("z-13"),
        FamilyKind::Additive,
        &central_valley(),
        &ep(),
    )
    .unwrap();
    assert!(z13.fixed_values.len() >= 3);
    assert!(z13.fixed_values.iter().all(|f| f.class == FixedPointClass::Attracting));
    // the principal point is among them, superattracting
    assert!(z13
        .fixed_values
        .iter()
        .any(|f| (f.c - z13.principal).norm() < 1e-9 && f.deriv_mod < 1e-6));
    check_analysis(&z13);
}

#[test]
fn wider_region_mixes_classes() {
    let region = Viewport::new(c(0.0, 0.0), 40.0, 256, 256).unwrap();
    let a = find_fixed_values(
        FunctionId::Zeta,
        &critical("z-13"),
        FamilyKind::Additive,
        &region,
        &ep(),
    )
    .unwrap();
    assert!(a.fixed_values.iter().any(|f| f.class == FixedPointClass::Repelling));
    assert!(a.fixed_values.iter().any(|f| f.class == FixedPointClass::Attracting));
    check_analysis(&a);
    let m = find_fixed_values(
        FunctionId::Zeta,
        &critical("z23"),
        FamilyKind::Multiplicative,
        &region,
        &ep(),
    )
    .unwrap();
    check_analysis(&m);
}

#[test]
fn analysis_json_shape() {
    let a = find_fixed_values(
        FunctionId::Zeta,
        &critical("z-13"),
        FamilyKind::Additive,
        &central_valley(),
        &ep(),
    )
    .unwrap();
    let v = serde_json::to_value(&a).unwrap();
    assert_eq!(v["family"], "additive");
    assert_eq!(v["critical"]["label"], "z-13");
    assert!(v["principal"].is_array());
    let first = &v["fixed_values"][0];
    for key in ["c", "fixed_point", "deriv_mod", "class"] {
        assert!(first.get(key).is_some(), "{key}");
    }
    let back: TransferAnalysis = serde_json::from_value(v).unwrap();
    assert_eq!(back, a);
}
