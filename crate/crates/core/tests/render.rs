use std::path::PathBuf;

use num_complex::Complex64;
use proptest::prelude::*;
use zeta_atlas::critical::{quasi_critical, resolve_label};
use zeta_atlas::dynamics::{iterate_orbit, FamilyKind, IterationParams, OrbitStatus};
use zeta_atlas::render::*;
use zeta_atlas::special::{zeta, zeta_deriv};
use zeta_atlas::viewport::{PixelWindow, Viewport};
use zeta_atlas::{EvalParams, FunctionId};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ep() -> EvalParams {
    EvalParams::default()
}

fn ip() -> IterationParams {
    IterationParams::default()
}

fn escape() -> ColorScheme {
    ColorScheme::new(SchemeTag::EscapeSteps)
}

/// Colour of the pixel containing `z`.
fn at(tile: &ImageTile, vp: &Viewport, z: Complex64) -> Rgba {
    let (i, j) = vp.pixel_of(z).expect("point in view");
    tile.pixel(i, j)
}

#[test]
fn portrait_zero_is_dark() {
    let vp = Viewport::new(c(-5.0, 0.0), 10.0, 64, 64).unwrap();
    let tile = render_portrait(FunctionId::Zeta, &vp, &ColorScheme::default(), &ep()).unwrap();
    assert_eq!(tile.pixels.len(), 4 * 64 * 64);
    assert!(luma(at(&tile, &vp, c(-2.0, 0.0))) < 20.0);
    assert!(tile.pixels.chunks(4).all(|p| p[3] == 255));
    // the pole is magenta only when a pixel centre lands on it exactly
    let vp1 = Viewport::new(c(1.0, 0.0), 2.0, 5, 5).unwrap();
    let tile = render_portrait(FunctionId::Zeta, &vp1, &ColorScheme::default(), &ep()).unwrap();
    assert_eq!(tile.pixel(2, 2), POLE_COLOR);
    assert_ne!(tile.pixel(1, 2), POLE_COLOR);
}

#[test]
fn derivative_band_separates_valley_from_highlands() {
    let vp = Viewport::new(c(-15.5, 0.0), 2.0, 401, 9).unwrap();
    let cs = ColorScheme::default();
    let tile = render_derivative_portrait(FunctionId::Zeta, &vp, &cs, &ep()).unwrap();
    let is_band = |p: Rgba| p[2] == 255 && (p[0] == p[1] || p == [40, 90, 255, 255]);
    let (i0, j) = vp.pixel_of(c(-15.339, 0.0)).unwrap();
    assert!(
        zeta_deriv(vp.pixel_to_plane(i0 as i64, j as i64), &ep())
            .unwrap()
            .norm()
            < 1.0
    );
    assert!(!is_band(tile.pixel(i0, j)));
    // walking left from z-15, |ζ'| reaches 1 near −15.76 and then exceeds it
    let band: Vec<u32> = (0..i0).filter(|&i| is_band(tile.pixel(i, j))).collect();
    assert!(!band.is_empty());
    for &i in &band {
        let x = vp.pixel_to_plane(i as i64, j as i64).re;
        assert!(x < -15.6 && x > -15.9, "band at {x}");
    }
    let far = vp.pixel_of(c(-16.4, 0.0)).unwrap();
    assert!(zeta_deriv(c(-16.4, 0.0), &ep()).unwrap().norm() > 1.0);
    assert!(!is_band(tile.pixel(far.0, far.1)));
}

#[test]
fn tiles_are_deterministic() {
    let vp = Viewport::new(c(0.3, 14.1), 0.5, 4, 4).unwrap();
    let a = render_portrait(FunctionId::Zeta, &vp, &ColorScheme::default(), &ep()).unwrap();
    let b = render_portrait(FunctionId::Zeta, &vp, &ColorScheme::default(), &ep()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_png().unwrap(), b.to_png().unwrap());
}

#[test]
fn quadratic_parameter_plane() {
    let start = resolve_label(FunctionId::Quadratic, "q0", &ep()).unwrap().unwrap();
    let vp = Viewport::new(c(-0.7, 0.0), 3.0, 64, 64).unwrap();
    let tile = render_parameter_plane(
        FunctionId::Quadratic,
        FamilyKind::Additive,
        &start,
        &vp,
        &escape(),
        &ip(),
        &ep(),
    )
    .unwrap();
    assert_eq!(at(&tile, &vp, c(0.0, 0.0)), BLACK);
    assert_eq!(at(&tile, &vp, c(-1.0, 0.0)), BLACK);
    assert_ne!(at(&tile, &vp, c(0.5, 0.0)), BLACK);
    assert_ne!(at(&tile, &vp, c(-2.1, 1.2)), BLACK);
}

#[test]
fn plateau_parameter_plane() {
    let start = quasi_critical(FunctionId::Zeta, &ep()).unwrap();
    // pixel centres fall on 999 and 1000 exactly
    let vp = Viewport::new(c(999.5, 0.0), 4.0, 4, 1).unwrap();
    assert_eq!(vp.pixel_to_plane(1, 0), c(999.0, 0.0));
    assert_eq!(vp.pixel_to_plane(2, 0), c(1000.0, 0.0));
    let tile = render_parameter_plane(
        FunctionId::Zeta,
        FamilyKind::Additive,
        &start,
        &vp,
        &escape(),
        &ip(),
        &ep(),
    )
    .unwrap();
    assert_eq!(tile.pixel(1, 0), BLACK);
    assert_eq!(tile.pixel(2, 0), BLACK);
}

#[test]
fn julia_examples() {
    let alpha = -0.295_905_005_575_214;
    let vp = Viewport::new(c(alpha, 0.0), 1.0, 5, 5).unwrap();
    let tile = render_julia(
        FunctionId::Zeta,
        FamilyKind::Additive,
        c(0.0, 0.0),
        &vp,
        &escape(),
        &ip(),
        &ep(),
    )
    .unwrap();
    assert_eq!(tile.pixel(2, 2), BLACK);
    // −30 itself is a trivial zero and falls into the basin of α, but the
    // pixel around it escapes: |ζ'(−30)| is about 1.5·10⁸
    let vp = Viewport::new(c(-20.0, 0.0), 40.0, 64, 64).unwrap();
    let tile = render_julia(
        FunctionId::Zeta,
        FamilyKind::Additive,
        c(0.0, 0.0),
        &vp,
        &escape(),
        &ip(),
        &ep(),
    )
    .unwrap();
    assert_ne!(at(&tile, &vp, c(-30.0, 0.0)), BLACK);
    assert_eq!(at(&tile, &vp, c(alpha, 0.0)), BLACK);
    let exact = iterate_orbit(
        FunctionId::Zeta,
        FamilyKind::Additive,
        c(0.0, 0.0),
        c(-30.0, 0.0),
        &ip(),
        &ep(),
    )
    .unwrap();
    assert!(!exact.status.is_escaped());

    let vp = Viewport::new(c(0.0, 0.0), 4.0, 40, 40).unwrap();
    let tile = render_julia(
        FunctionId::Quadratic,
        FamilyKind::Additive,
        c(0.0, 0.0),
        &vp,
        &escape(),
        &ip(),
        &ep(),
    )
    .unwrap();
    for k in 0..16 {
        let u = Complex64::from_polar(1.0, k as f64 * 0.39);
        assert_eq!(at(&tile, &vp, u * 0.5), BLACK);
        assert_ne!(at(&tile, &vp, u * 1.5), BLACK);
    }

    // the zero near 613.6 lies on an attracting 4-cycle of c·ζ with c = ρ
    let rho = c(0.5, 613.599_778_675_637_1);
    let vp = Viewport::new(rho, 1e-3, 3, 3).unwrap();
    let cs = ColorScheme::new(SchemeTag::StepPeriod);
    let tile = render_julia(
        FunctionId::Zeta,
        FamilyKind::Multiplicative,
        rho,
        &vp,
        &cs,
        &ip(),
        &ep(),
    )
    .unwrap();
    assert_eq!(tile.pixel(1, 1)[0], 4 * 32);
}

fn stitched(job: &RenderJob, windows: &[PixelWindow]) -> ImageTile {
    let mut out = ImageTile::new(job.viewport.px_w, job.viewport.px_h);
    for w in windows {
        out.blit(&job.render_window(*w).unwrap(), w.x0, w.y0);
    }
    out
}

#[test]
fn quadrants_stitch_at_any_thread_count() {
    let start = resolve_label(FunctionId::Zeta, "z-15", &ep()).unwrap().unwrap();
    let job = RenderJob {
        view: View::ParameterPlane {
            function: FunctionId::Zeta,
            family: FamilyKind::Additive,
            start: start.location,
        },
        viewport: Viewport::new(c(-15.9, 0.1), 1.5, 33, 31).unwrap(),
        scheme: ColorScheme::new(SchemeTag::StepPeriod),
        iteration: ip(),
        eval: ep(),
    };
    let whole = job.render().unwrap();
    for threads in [1, 2, 5] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let (one, four) = pool.install(|| {
            (
                job.render().unwrap(),
                stitched(&job, &PixelWindow::quadrants(&job.viewport)),
            )
        });
        assert_eq!(one, whole);
        assert_eq!(four, whole);
    }
    assert_eq!(stitched(&job, &PixelWindow::tiles(&job.viewport, 7)), whole);
}

#[test]
fn renders_larger_than_a_tile_stitch() {
    let job = RenderJob {
        view: View::Julia {
            function: FunctionId::Quadratic,
            family: FamilyKind::Additive,
            c: c(-0.12, 0.75),
        },
        viewport: Viewport::new(c(0.0, 0.0), 3.0, 300, 20).unwrap(),
        scheme: ColorScheme::new(SchemeTag::StepPeriod),
        iteration: ip(),
        eval: ep(),
    };
    let whole = job.render().unwrap();
    assert_eq!(stitched(&job, &PixelWindow::quadrants(&job.viewport)), whole);
    assert_eq!(stitched(&job, &PixelWindow::tiles(&job.viewport, 64)), whole);
}

#[test]
fn parameter_plane_matches_orbits() {
    let start = resolve_label(FunctionId::Zeta, "z-15", &ep()).unwrap().unwrap();
    let vp = Viewport::new(c(-15.9, 0.0), 1.2, 20, 20).unwrap();
    let tile = render_parameter_plane(
        FunctionId::Zeta,
        FamilyKind::Additive,
        &start,
        &vp,
        &escape(),
        &ip(),
        &ep(),
    )
    .unwrap();
    let (mut black, mut coloured) = (0, 0);
    for j in 0..20 {
        for i in 0..20 {
            let cc = vp.pixel_to_plane(i, j);
            let orbit =
                iterate_orbit(FunctionId::Zeta, FamilyKind::Additive, cc, start.location, &ip(), &ep()).unwrap();
            let px = tile.pixel(i as u32, j as u32);
            assert_eq!(px == BLACK, !orbit.status.is_escaped(), "pixel {i},{j} at {cc}");
            if px == BLACK {
                black += 1;
            } else {
                coloured += 1;
            }
        }
    }
    assert!(black > 0 && coloured > 0, "{black} / {coloured}");
}

#[test]
fn plateau_steps_match_julia_steps() {
    // every start right of the plateau line maps to c + 1, so the parameter
    // plane from 1000 and the Julia orbit of any plateau point agree
    let start = quasi_critical(FunctionId::Zeta, &ep()).unwrap();
    let vp = Viewport::new(c(-4.0, 1.0), 24.0, 16, 16).unwrap();
    let tile = render_parameter_plane(
        FunctionId::Zeta,
        FamilyKind::Additive,
        &start,
        &vp,
        &escape(),
        &ip(),
        &ep(),
    )
    .unwrap();
    let mut escaped = 0;
    for j in 0..16 {
        for i in 0..16 {
            let cc = vp.pixel_to_plane(i, j);
            let m = iterate_orbit(FunctionId::Zeta, FamilyKind::Additive, cc, start.location, &ip(), &ep()).unwrap();
            let z0 = c(500.0, 3.0 * i as f64 - 7.0 * j as f64);
            let jl = iterate_orbit(FunctionId::Zeta, FamilyKind::Additive, cc, z0, &ip(), &ep()).unwrap();
            assert_eq!(m.status.steps(), jl.status.steps(), "{cc}");
            assert_eq!(m.status.is_escaped(), jl.status.is_escaped());
            assert_eq!(
                tile.pixel(i as u32, j as u32),
                escape().orbit_color(Some(&jl.status), ip().max_iter)
            );
            escaped += jl.status.is_escaped() as usize;
        }
    }
    assert!(escaped > 0 && escaped < 256);
}

#[test]
fn portrait_is_conjugate_symmetric() {
    let vp = Viewport::new(c(-3.0, 0.0), 16.0, 32, 32).unwrap();
    let cs = ColorScheme::default();
    let tile = render_portrait(FunctionId::Zeta, &vp, &cs, &ep()).unwrap();
    let mut mismatched = 0;
    for j in 0..16 {
        for i in 0..32 {
            let top = vp.pixel_to_plane(i, j);
            let bottom = vp.pixel_to_plane(i, 31 - j);
            assert!((top.conj() - bottom).norm() < 1e-12);
            let (ft, fb) = (zeta(top, &ep()).unwrap(), zeta(bottom, &ep()).unwrap());
            assert!((ft.norm() - fb.norm()).abs() <= 1e-12 * ft.norm().max(1.0));
            // mirrored hue: the bottom pixel is the colour of conj f(top)
            if tile.pixel(i as u32, 31 - j as u32) != cs.value_color(Some(ft.conj())) {
                mismatched += 1;
            }
        }
    }
    assert!(mismatched <= 5, "{mismatched}");
}

fn golden(name: &str, tile: &ImageTile) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    let bytes = tile.to_png().unwrap();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &bytes).unwrap();
    }
    let want = std::fs::read(&path).unwrap_or_else(|_| panic!("missing snapshot {}", path.display()));
    assert_eq!(
        ImageTile::from_png(&want).unwrap(),
        *tile,
        "{name} differs from its snapshot"
    );
}

#[test]
fn golden_snapshots() {
    let vp = Viewport::new(c(-2.0, 8.0), 24.0, 32, 32).unwrap();
    golden(
        "zeta-portrait.png",
        &render_portrait(FunctionId::Zeta, &vp, &ColorScheme::default(), &ep()).unwrap(),
    );
    let vp = Viewport::new(c(-0.7, 0.0), 3.0, 32, 32).unwrap();
    let q0 = resolve_label(FunctionId::Quadratic, "q0", &ep()).unwrap().unwrap();
    let cs = ColorScheme::new(SchemeTag::StepPeriod);
    golden(
        "quadratic-periods.png",
        &render_parameter_plane(FunctionId::Quadratic, FamilyKind::Additive, &q0, &vp, &cs, &ip(), &ep()).unwrap(),
    );
    let start = quasi_critical(FunctionId::Zeta, &ep()).unwrap();
    let vp = Viewport::new(c(-4.0, 0.0), 24.0, 32, 32).unwrap();
    golden(
        "plateau-steps.png",
        &render_parameter_plane(
            FunctionId::Zeta,
            FamilyKind::Additive,
            &start,
            &vp,
            &escape(),
            &ip(),
            &ep(),
        )
        .unwrap(),
    );
}

#[test]
fn preset_renders_at_reduced_size() {
    let table = PresetTable::builtin();
    let mut p = table.get("fig1-julia0").unwrap().clone();
    p.px_w = 24;
    p.px_h = 24;
    let tile = p.resolve().unwrap().render().unwrap();
    assert_eq!((tile.px_w, tile.px_h), (24, 24));
    assert!(tile.pixels.chunks(4).any(|px| px == BLACK));
    assert!(tile.pixels.chunks(4).any(|px| px != BLACK));
}

#[test]
fn escaped_orbits_are_never_black() {
    // z² + c from 0 escapes right of 1/4 on the real line
    let q0 = resolve_label(FunctionId::Quadratic, "q0", &ep()).unwrap().unwrap();
    let vp = Viewport::new(c(1.0, 0.0), 1.0, 9, 1).unwrap();
    for tag in [SchemeTag::EscapeSteps, SchemeTag::StepPeriod] {
        let tile = render_parameter_plane(
            FunctionId::Quadratic,
            FamilyKind::Additive,
            &q0,
            &vp,
            &ColorScheme::new(tag),
            &ip(),
            &ep(),
        )
        .unwrap();
        for i in 0..9 {
            let cc = vp.pixel_to_plane(i, 0);
            let o = iterate_orbit(
                FunctionId::Quadratic,
                FamilyKind::Additive,
                cc,
                c(0.0, 0.0),
                &ip(),
                &ep(),
            )
            .unwrap();
            assert!(matches!(o.status, OrbitStatus::Escaped { .. }));
            assert!(luma(tile.pixel(i as u32, 0)) > 10.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_splits_stitch(
        re in -2.0f64..1.0, im in -1.0f64..1.0, w in 0.1f64..4.0,
        pw in 2u32..40, ph in 2u32..40, sx in 0.0f64..1.0, sy in 0.0f64..1.0,
        cre in -1.0f64..0.5, cim in -1.0f64..1.0,
    ) {
        let job = RenderJob {
            view: View::Julia { function: FunctionId::Quadratic, family: FamilyKind::Additive, c: c(cre, cim) },
            viewport: Viewport::new(c(re, im), w, pw, ph).unwrap(),
            scheme: ColorScheme::new(SchemeTag::StepPeriod),
            iteration: IterationParams { max_iter: 64, ..ip() },
            eval: ep(),
        };
        let x = ((pw as f64 * sx) as u32).clamp(1, pw - 1);
        let y = ((ph as f64 * sy) as u32).clamp(1, ph - 1);
        let parts = [
            PixelWindow { x0: 0, y0: 0, w: x, h: y },
            PixelWindow { x0: x, y0: 0, w: pw - x, h: y },
            PixelWindow { x0: 0, y0: y, w: x, h: ph - y },
            PixelWindow { x0: x, y0: y, w: pw - x, h: ph - y },
        ];
        prop_assert_eq!(stitched(&job, &parts), job.render().unwrap());
    }
}
