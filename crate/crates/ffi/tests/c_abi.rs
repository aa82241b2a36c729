use std::f64::consts::PI;
use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use mirror_qed_ffi::*;

#[test]
fn geometry_and_grid_round_trip() {
    unsafe {
        let mut geom = ptr::null_mut();
        assert_eq!(
            mq_geometry_new(20.0 * PI, PI / 2.0, 1.0, &mut geom),
            MqStatus::Ok
        );
        let mut grid = ptr::null_mut();
        assert_eq!(mq_grid_new(64, 64, &mut grid), MqStatus::Ok);
        let r = [0.0; 3];
        let d = [1.0, 0.0, 0.0];
        let mut g = f64::NAN;
        assert_eq!(
            mq_decay_rate(geom, grid, r.as_ptr(), d.as_ptr(), &mut g),
            MqStatus::Ok
        );
        assert!(g.abs() < 1e-8);
        let mut s = f64::NAN;
        assert_eq!(
            mq_excited_shift(geom, ptr::null(), r.as_ptr(), d.as_ptr(), &mut s),
            MqStatus::Ok
        );
        assert!(s.abs() < 1e-8);
        mq_grid_free(grid);
        mq_geometry_free(geom);

        let mut anti = ptr::null_mut();
        assert_eq!(
            mq_geometry_new(20.5 * PI, PI / 2.0, 1.0, &mut anti),
            MqStatus::Ok
        );
        assert_eq!(
            mq_decay_rate(anti, ptr::null(), r.as_ptr(), d.as_ptr(), &mut g),
            MqStatus::Ok
        );
        assert!((g - 2.0).abs() < 1e-8);
        mq_geometry_free(anti);
    }
}

#[test]
fn invalid_inputs_map_to_codes() {
    unsafe {
        let mut geom = ptr::null_mut();
        assert_eq!(
            mq_geometry_new(10.0, 2.0, 1.0, &mut geom),
            MqStatus::InvalidParameter
        );
        assert!(geom.is_null());
        let msg = CStr::from_ptr(mq_last_error_message()).to_str().unwrap();
        assert!(!msg.is_empty());
        let mut grid = ptr::null_mut();
        assert_eq!(mq_grid_new(2, 2, &mut grid), MqStatus::InvalidParameter);
        assert_eq!(
            mq_geometry_new(10.0, 1.0, 1.0, ptr::null_mut()),
            MqStatus::NullPointer
        );
        let mut v = 0.0;
        assert_eq!(mq_sph_bessel_j(3, -1.0, &mut v), MqStatus::Domain);
        assert_eq!(
            mq_decay_rate(
                ptr::null(),
                ptr::null(),
                [0.0; 3].as_ptr(),
                [1.0, 0.0, 0.0].as_ptr(),
                &mut v
            ),
            MqStatus::NullPointer
        );
    }
}

#[test]
fn scalar_functions_match_library() {
    unsafe {
        let mut v = 0.0;
        assert_eq!(mq_gamma_1d(PI / 2.0, &mut v), MqStatus::Ok);
        assert_eq!(v, 2.0);
        assert_eq!(mq_shift_1d(PI / 4.0, &mut v), MqStatus::Ok);
        assert!((v - 1.0).abs() < 1e-15);
        assert_eq!(mq_sph_bessel_j(0, 1.5, &mut v), MqStatus::Ok);
        assert!((v - 1.5f64.sin() / 1.5).abs() < 1e-15);

        let (a, kappa) = (30.0 * PI, 1e3);
        let mut parts = MqCasimirParts::default();
        assert_eq!(mq_casimir_decomposition(a, kappa, &mut parts), MqStatus::Ok);
        let mut direct = 0.0;
        assert_eq!(mq_lamb_direct(a, kappa, &mut direct), MqStatus::Ok);
        let total = parts.delta_se + parts.delta_fs + parts.delta_cp;
        assert!((total - direct).abs() < 1e-6 * direct.abs());
        let mut cp = 0.0;
        assert_eq!(mq_delta_cp(a, &mut cp), MqStatus::Ok);
        assert_eq!(cp, parts.delta_cp);
        assert_eq!(
            CStr::from_ptr(mq_version()).to_str().unwrap(),
            env!("CARGO_PKG_VERSION")
        );
    }
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/mirror_qed.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "mq_decay_rate",
        "mq_casimir_decomposition",
        "MQ_STATUS_NULL_POINTER",
        "mq_last_error_message",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(&src, "#include \"mirror_qed.h\"\nint main(void) { double v; return mq_gamma_1d(1.0, &v) == MQ_STATUS_OK ? 0 : 1; }\n").unwrap();
    let Ok(status) = Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header.parent().unwrap())
        .arg(&src)
        .status()
    else {
        eprintln!("no C compiler; skipped syntax check");
        return;
    };
    assert!(status.success());
}
