//! C interface to `mirror_qed`.
//!
//! Every function returns an `MqStatus`; results go through out-pointers.
//! On failure `mq_last_error_message` describes the most recent error on the
//! calling thread. Handles are created with `*_new` and released with
//! `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mirror_qed::error::QedError;
use mirror_qed::mirror1d::{gamma_1d, shift_1d, PhaseDistance};
use mirror_qed::modefield::{
    make_grid, AngularGrid, DipoleOrientation, Displacement, MirrorGeometry,
};
use mirror_qed::observables::{
    auto_grid, casimir_decomposition, decay_rate_on, delta_cp, excited_shift_on, lamb_direct,
    CasimirParams,
};
use mirror_qed::specfun::sph_bessel_j;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MqStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Index = 3,
    Dimension = 4,
    InvalidParameter = 5,
    Consistency = 6,
    Io = 7,
    Panic = 8,
}

/// Mirror phase distance, half-aperture and reflectivity.
pub struct MqGeometry(MirrorGeometry);

/// Angular quadrature grid.
pub struct MqGrid(AngularGrid);

/// Ground-state shift split into its three parts, in units of the
/// free-space rate.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MqCasimirParts {
    pub delta_se: f64,
    pub delta_fs: f64,
    pub delta_cp: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &QedError) -> MqStatus {
    match e {
        QedError::Domain { .. } => MqStatus::Domain,
        QedError::Index(_) => MqStatus::Index,
        QedError::Dimension { .. } => MqStatus::Dimension,
        QedError::InvalidParameter { .. } => MqStatus::InvalidParameter,
        QedError::Consistency(_) => MqStatus::Consistency,
        QedError::Io(_) => MqStatus::Io,
    }
}

enum Fail {
    Null(&'static str),
    Qed(QedError),
}

impl From<QedError> for Fail {
    fn from(e: QedError) -> Self {
        Fail::Qed(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MqStatus::Ok
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(&format!("null pointer: {what}"));
            MqStatus::NullPointer
        }
        Ok(Err(Fail::Qed(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            MqStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn triple(p: *const f64, what: &'static str) -> Result<[f64; 3], Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok([*p, *p.add(1), *p.add(2)])
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library.
#[no_mangle]
pub extern "C" fn mq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out_geom` must be a valid pointer. The handle is released with
/// `mq_geometry_free`.
#[no_mangle]
pub unsafe extern "C" fn mq_geometry_new(
    a: f64,
    alpha: f64,
    rho: f64,
    out_geom: *mut *mut MqGeometry,
) -> MqStatus {
    guard(|| {
        let slot = out(out_geom, "out_geom")?;
        let g = MirrorGeometry::new(PhaseDistance::new(a)?, alpha, rho)?;
        *slot = Box::into_raw(Box::new(MqGeometry(g)));
        Ok(())
    })
}

/// # Safety
/// `geom` must come from `mq_geometry_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mq_geometry_free(geom: *mut MqGeometry) {
    if !geom.is_null() {
        drop(Box::from_raw(geom));
    }
}

/// # Safety
/// `out_grid` must be a valid pointer. The handle is released with
/// `mq_grid_free`.
#[no_mangle]
pub unsafe extern "C" fn mq_grid_new(
    n_theta: usize,
    n_phi: usize,
    out_grid: *mut *mut MqGrid,
) -> MqStatus {
    guard(|| {
        let slot = out(out_grid, "out_grid")?;
        *slot = Box::into_raw(Box::new(MqGrid(make_grid(n_theta, n_phi)?)));
        Ok(())
    })
}

/// # Safety
/// `grid` must come from `mq_grid_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mq_grid_free(grid: *mut MqGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

type Observable = fn(
    &Displacement,
    &MirrorGeometry,
    &DipoleOrientation,
    &AngularGrid,
) -> mirror_qed::error::Result<f64>;

unsafe fn observable(
    f: Observable,
    geom: *const MqGeometry,
    grid: *const MqGrid,
    r_wavelengths: *const f64,
    dipole: *const f64,
    out_value: *mut f64,
) -> MqStatus {
    guard(|| {
        let slot = out(out_value, "out_value")?;
        let geom = geom.as_ref().ok_or(Fail::Null("geom"))?;
        let r = Displacement::new(triple(r_wavelengths, "r_wavelengths")?)?;
        let d = DipoleOrientation::new(triple(dipole, "dipole")?)?;
        *slot = match grid.as_ref() {
            Some(g) => f(&r, &geom.0, &d, &g.0)?,
            None => f(&r, &geom.0, &d, &auto_grid(&r)?)?,
        };
        Ok(())
    })
}

/// Normalized decay rate at displacement `r_wavelengths[3]` (in
/// wavelengths) for dipole direction `dipole[3]`. A null `grid` picks one
/// from the displacement.
///
/// # Safety
/// Pointers must be valid; the arrays must hold three doubles.
#[no_mangle]
pub unsafe extern "C" fn mq_decay_rate(
    geom: *const MqGeometry,
    grid: *const MqGrid,
    r_wavelengths: *const f64,
    dipole: *const f64,
    out_value: *mut f64,
) -> MqStatus {
    observable(decay_rate_on, geom, grid, r_wavelengths, dipole, out_value)
}

/// Normalized excited-state shift; arguments as for `mq_decay_rate`.
///
/// # Safety
/// Pointers must be valid; the arrays must hold three doubles.
#[no_mangle]
pub unsafe extern "C" fn mq_excited_shift(
    geom: *const MqGeometry,
    grid: *const MqGrid,
    r_wavelengths: *const f64,
    dipole: *const f64,
    out_value: *mut f64,
) -> MqStatus {
    observable(
        excited_shift_on,
        geom,
        grid,
        r_wavelengths,
        dipole,
        out_value,
    )
}

/// Cutoff-regularized ground-state integral evaluated directly.
///
/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mq_lamb_direct(a: f64, kappa: f64, out_value: *mut f64) -> MqStatus {
    guard(|| {
        let slot = out(out_value, "out_value")?;
        *slot = lamb_direct(&CasimirParams::new(PhaseDistance::new(a)?, kappa)?)?;
        Ok(())
    })
}

/// # Safety
/// `out_parts` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mq_casimir_decomposition(
    a: f64,
    kappa: f64,
    out_parts: *mut MqCasimirParts,
) -> MqStatus {
    guard(|| {
        let slot = out(out_parts, "out_parts")?;
        let p = casimir_decomposition(&CasimirParams::new(PhaseDistance::new(a)?, kappa)?)?;
        *slot = MqCasimirParts {
            delta_se: p.delta_se,
            delta_fs: p.delta_fs,
            delta_cp: p.delta_cp,
        };
        Ok(())
    })
}

/// Cutoff-independent ground-state shift at phase distance `a`.
///
/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mq_delta_cp(a: f64, out_value: *mut f64) -> MqStatus {
    guard(|| {
        *out(out_value, "out_value")? = delta_cp(a)?;
        Ok(())
    })
}

/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mq_gamma_1d(a: f64, out_value: *mut f64) -> MqStatus {
    guard(|| {
        *out(out_value, "out_value")? = gamma_1d(PhaseDistance::new(a)?);
        Ok(())
    })
}

/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mq_shift_1d(a: f64, out_value: *mut f64) -> MqStatus {
    guard(|| {
        *out(out_value, "out_value")? = shift_1d(PhaseDistance::new(a)?);
        Ok(())
    })
}

/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mq_sph_bessel_j(l: usize, x: f64, out_value: *mut f64) -> MqStatus {
    guard(|| {
        *out(out_value, "out_value")? = sph_bessel_j(l, x)?;
        Ok(())
    })
}
