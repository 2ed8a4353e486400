use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use rogonlab::rogon;
use rogonlab::{Order, PointST, RogonParams};
use rogonlab_ffi::*;

const FIG: RglParams = RglParams {
    alpha: 1.5,
    beta: 1.0,
    a: 2.0,
    b: 5.0,
    k: 0.0,
};

fn last_error() -> String {
    let p = rgl_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn sim_config() -> RglSimConfig {
    RglSimConfig {
        length: 80.0,
        n: 1024,
        dt: 1e-3,
        t0: -0.5,
        dealias: false,
        snap_k: false,
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(rgl_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn eval_matches_the_library_bit_for_bit() {
    let p = RogonParams::new(1.5, 1.0, 2.0, 5.0, 0.3).unwrap();
    let c = RglParams { k: 0.3, ..FIG };
    for (order, n) in [(Order::One, 1), (Order::Two, 2)] {
        for &(s, t) in &[(0.0, 0.0), (0.7, -0.2), (-3.1, 1.4)] {
            let mut out = RglField::default();
            assert_eq!(unsafe { rgl_eval(&c, n, s, t, &mut out) }, RglStatus::Ok);
            let v = rogon::eval_rogon(&p, order, PointST::new(s, t)).unwrap();
            assert_eq!(out.sigma_re.to_bits(), v.sigma.re.to_bits());
            assert_eq!(out.sigma_im.to_bits(), v.sigma.im.to_bits());
            assert_eq!(out.psi_re.to_bits(), v.psi.re.to_bits());
            assert_eq!(out.psi_im.to_bits(), v.psi.im.to_bits());
        }
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut out = RglField::default();
    let bad = RglParams { alpha: 0.0, ..FIG };
    assert_eq!(
        unsafe { rgl_eval(&bad, 1, 0.0, 0.0, &mut out) },
        RglStatus::InvalidParam
    );
    assert!(last_error().contains("alpha"));

    assert_eq!(
        unsafe { rgl_eval(&FIG, 3, 0.0, 0.0, &mut out) },
        RglStatus::InvalidParam
    );
    assert_eq!(
        unsafe { rgl_eval(ptr::null(), 1, 0.0, 0.0, &mut out) },
        RglStatus::NullPointer
    );
    assert_eq!(
        unsafe { rgl_eval(&FIG, 1, 0.0, 0.0, ptr::null_mut()) },
        RglStatus::NullPointer
    );
    assert_eq!(unsafe { rgl_params_validate(&FIG) }, RglStatus::Ok);
    assert!(rgl_last_error_message().is_null());
}

#[test]
fn grid_is_t_major_and_checks_buffer_size() {
    let (ns, nt) = (5usize, 3usize);
    let mut buf = vec![RglField::default(); ns * nt];
    let status = unsafe {
        rgl_eval_grid(
            &FIG,
            2,
            -1.0,
            1.0,
            -0.5,
            0.5,
            ns,
            nt,
            buf.as_mut_ptr(),
            buf.len() - 1,
        )
    };
    assert_eq!(status, RglStatus::BufferTooSmall);

    let status = unsafe {
        rgl_eval_grid(
            &FIG,
            2,
            -1.0,
            1.0,
            -0.5,
            0.5,
            ns,
            nt,
            buf.as_mut_ptr(),
            buf.len(),
        )
    };
    assert_eq!(status, RglStatus::Ok);
    let p = RogonParams::figure(0.0);
    let v = rogon::eval_rogon(&p, Order::Two, PointST::new(0.5, 0.5)).unwrap();
    assert_eq!(buf[2 * ns + 3].psi_re, v.psi.re);
}

#[test]
fn peak_and_residual() {
    let mut peak = RglPeak::default();
    assert_eq!(unsafe { rgl_peak_info(&FIG, 2, &mut peak) }, RglStatus::Ok);
    assert_eq!((peak.s, peak.t, peak.intensity_ratio), (0.0, 0.0, 25.0));

    let mut r = RglResidual::default();
    let status =
        unsafe { rgl_residual_scan(&FIG, 1, -5.0, 5.0, -3.0, 3.0, 11, 7, 5e-3, 8, &mut r) };
    assert_eq!(status, RglStatus::Ok);
    assert!(r.max_abs_r_sigma < 1e-8 && r.max_abs_r_psi < 1e-8, "{r:?}");

    let status =
        unsafe { rgl_residual_scan(&FIG, 1, -5.0, 5.0, -3.0, 3.0, 11, 7, 5e-3, 3, &mut r) };
    assert_eq!(status, RglStatus::InvalidParam);
}

#[test]
fn simulation_handle_lifecycle() {
    let mut sim = ptr::null_mut();
    let cfg = sim_config();
    assert_eq!(
        unsafe { rgl_sim_new(&FIG, 1, &cfg, &mut sim) },
        RglStatus::Ok
    );
    assert!(!sim.is_null());
    assert_eq!(unsafe { rgl_sim_len(sim) }, 1024);
    assert_eq!(unsafe { rgl_sim_time(sim) }, -0.5);

    let mut before = RglConserved::default();
    assert_eq!(
        unsafe { rgl_sim_conserved(sim, &mut before) },
        RglStatus::Ok
    );
    assert_eq!(unsafe { rgl_sim_evolve(sim, 0.5) }, RglStatus::Ok);
    assert_eq!(unsafe { rgl_sim_time(sim) }, 0.5);
    let mut after = RglConserved::default();
    assert_eq!(unsafe { rgl_sim_conserved(sim, &mut after) }, RglStatus::Ok);
    assert!(((after.n_sigma - before.n_sigma) / before.n_sigma).abs() < 1e-12);
    assert_eq!(after.t, 0.5);

    let mut err = RglAnalyticError::default();
    assert_eq!(unsafe { rgl_sim_compare(sim, &mut err) }, RglStatus::Ok);
    assert!(err.l2_rel < 1e-2, "{err:?}");

    let mut s = vec![0.0; 1024];
    assert_eq!(
        unsafe { rgl_sim_grid(sim, s.as_mut_ptr(), s.len()) },
        RglStatus::Ok
    );
    let mut fields = vec![RglField::default(); 1024];
    assert_eq!(
        unsafe { rgl_sim_fields(sim, fields.as_mut_ptr(), fields.len()) },
        RglStatus::Ok
    );
    let peak = fields
        .iter()
        .enumerate()
        .max_by(|x, y| {
            let ix = x.1.sigma_re.hypot(x.1.sigma_im);
            let iy = y.1.sigma_re.hypot(y.1.sigma_im);
            ix.total_cmp(&iy)
        })
        .unwrap()
        .0;
    assert!(s[peak].abs() < 0.1);

    assert_eq!(unsafe { rgl_sim_evolve(sim, 0.0) }, RglStatus::InvalidParam);
    unsafe { rgl_sim_free(sim) };
    unsafe { rgl_sim_free(ptr::null_mut()) };
}

#[test]
fn simulation_requires_periodic_carrier() {
    let mut sim = ptr::null_mut();
    let p = RglParams { k: 0.5, ..FIG };
    let mut cfg = sim_config();
    assert_eq!(
        unsafe { rgl_sim_new(&p, 2, &cfg, &mut sim) },
        RglStatus::NonPeriodicCarrier
    );
    assert!(sim.is_null());
    assert!(last_error().contains("0.4712"));

    cfg.snap_k = true;
    assert_eq!(unsafe { rgl_sim_new(&p, 2, &cfg, &mut sim) }, RglStatus::Ok);
    let mut eff = FIG;
    assert_eq!(unsafe { rgl_sim_params(sim, &mut eff) }, RglStatus::Ok);
    assert!((eff.k - 6.0 * std::f64::consts::TAU / 80.0).abs() < 1e-15);
    unsafe { rgl_sim_free(sim) };
}

#[test]
fn overflowing_simulation_aborts() {
    let mut sim = ptr::null_mut();
    let p = RglParams {
        alpha: 1e160,
        ..FIG
    };
    let cfg = RglSimConfig {
        n: 64,
        t0: 0.0,
        ..sim_config()
    };
    assert_eq!(unsafe { rgl_sim_new(&p, 1, &cfg, &mut sim) }, RglStatus::Ok);
    assert_eq!(
        unsafe { rgl_sim_evolve(sim, 0.01) },
        RglStatus::NumericalAbort
    );
    assert!(last_error().contains("non-finite"));
    unsafe { rgl_sim_free(sim) };
}

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("librogonlab_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let out = tempfile::tempdir().unwrap();
    let exe = out.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".to_string());
    let build = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .expect("C compiler not found; set CC");
    assert!(
        build.status.success(),
        "{}",
        String::from_utf8_lossy(&build.stderr)
    );
    let run = Command::new(&exe).output().unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).contains("ok"));
}
