//! C ABI over the `areatrap` solvers.
//!
//! Clouds and solutions are opaque heap handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns an
//! [`AreatrapStatus`]; on failure the message is kept per thread and can be
//! copied out with [`areatrap_last_error`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use areatrap::constrained::{save_solution, solve_constrained, ConstrainedSolution, Method, SolverOptions};
use areatrap::limitshape::LimitShape;
use areatrap::lpp::lpp_length;
use areatrap::roughness::analyze;
use areatrap::sampler::{load_cloud, sample_poisson_square, save_cloud};
use areatrap::{Error, Point, PointCloud, SeedSpec};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AreatrapStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Infeasible = 3,
    SizeCapExceeded = 4,
    Io = 5,
    Parse = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AreatrapMethod {
    #[default]
    Auto = 0,
    Lagrangian = 1,
    Exact = 2,
}

/// Opaque Poisson cloud.
pub struct AreatrapCloud(PointCloud);

/// Opaque constrained solution.
pub struct AreatrapSolution(ConstrainedSolution);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AreatrapSolutionInfo {
    pub n: f64,
    pub alpha: f64,
    pub threshold: f64,
    pub length: usize,
    pub achieved_area: f64,
    pub upper_bound: f64,
    pub gap: usize,
    /// The solver that produced the answer: `Lagrangian` or `Exact`.
    pub method: AreatrapMethod,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AreatrapRoughness {
    pub mfl_all: f64,
    pub mfl_interior: f64,
    pub mlr_all: f64,
    pub mlr_interior: f64,
    pub facets: usize,
    pub interior_facets: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> AreatrapStatus {
    match e {
        Error::Infeasible { .. } => AreatrapStatus::Infeasible,
        Error::SizeCapExceeded { .. } => AreatrapStatus::SizeCapExceeded,
        Error::Io { .. } => AreatrapStatus::Io,
        Error::Parse { .. } | Error::Json(_) | Error::Csv(_) => AreatrapStatus::Parse,
        Error::Interrupted { .. } => AreatrapStatus::Internal,
        _ => AreatrapStatus::InvalidArgument,
    }
}

struct Fail(AreatrapStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(AreatrapStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording any failure or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> AreatrapStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AreatrapStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            AreatrapStatus::Internal
        }
    }
}

unsafe fn path_arg<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(AreatrapStatus::InvalidArgument, "path is not UTF-8".into()))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn copy_points(pts: &[Point], xy: *mut f64, capacity: usize, count: *mut usize) -> Result<(), Fail> {
    write_out(count, pts.len())?;
    if xy.is_null() {
        // size query
        return Ok(());
    }
    if capacity < pts.len() {
        return Err(Fail(
            AreatrapStatus::BufferTooSmall,
            format!("need room for {} points, got {capacity}", pts.len()),
        ));
    }
    for (i, p) in pts.iter().enumerate() {
        *xy.add(2 * i) = p.x;
        *xy.add(2 * i + 1) = p.y;
    }
    Ok(())
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length in bytes.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn areatrap_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let k = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, k);
            *buf.add(k) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn areatrap_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Samples a rate-one Poisson cloud on `[0,n]²`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn areatrap_cloud_sample(
    n: f64,
    master_seed: u64,
    trial_index: u64,
    out: *mut *mut AreatrapCloud,
) -> AreatrapStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let cloud = sample_poisson_square(n, SeedSpec::new(master_seed, trial_index))?;
        write_out(out, Box::into_raw(Box::new(AreatrapCloud(cloud))))
    })
}

/// Builds a cloud from `count` interleaved `x, y` pairs inside `[0,n]²`.
///
/// # Safety
/// `xy` must be valid for `2 * count` reads; `out` for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn areatrap_cloud_from_points(
    n: f64,
    xy: *const f64,
    count: usize,
    out: *mut *mut AreatrapCloud,
) -> AreatrapStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if xy.is_null() && count > 0 {
            return Err(null("xy"));
        }
        let pts = (0..count)
            .map(|i| Point::new(*xy.add(2 * i), *xy.add(2 * i + 1)))
            .collect();
        let cloud = PointCloud::new(n, 0, pts)?;
        write_out(out, Box::into_raw(Box::new(AreatrapCloud(cloud))))
    })
}

/// Reads a cloud file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn areatrap_cloud_load(path: *const c_char, out: *mut *mut AreatrapCloud) -> AreatrapStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let cloud = load_cloud(path_arg(path)?)?;
        write_out(out, Box::into_raw(Box::new(AreatrapCloud(cloud))))
    })
}

/// Writes a cloud file.
///
/// # Safety
/// `cloud` must come from this library; `path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn areatrap_cloud_save(cloud: *const AreatrapCloud, path: *const c_char) -> AreatrapStatus {
    guard(|| {
        let cloud = cloud.as_ref().ok_or_else(|| null("cloud"))?;
        save_cloud(&cloud.0, path_arg(path)?)?;
        Ok(())
    })
}

/// Releases a cloud. Null is ignored.
///
/// # Safety
/// `cloud` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn areatrap_cloud_free(cloud: *mut AreatrapCloud) {
    if !cloud.is_null() {
        drop(Box::from_raw(cloud));
    }
}

/// # Safety
/// `cloud` must come from this library; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn areatrap_cloud_count(cloud: *const AreatrapCloud, out: *mut usize) -> AreatrapStatus {
    guard(|| {
        let cloud = cloud.as_ref().ok_or_else(|| null("cloud"))?;
        write_out(out, cloud.0.count())
    })
}

/// Copies the points, sorted by x then y, as interleaved pairs. Pass a null
/// `xy` to query the count only.
///
/// # Safety
/// `xy` must be null or valid for `2 * capacity` writes; `count` for a write.
#[no_mangle]
pub unsafe extern "C" fn areatrap_cloud_points(
    cloud: *const AreatrapCloud,
    xy: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> AreatrapStatus {
    guard(|| {
        let cloud = cloud.as_ref().ok_or_else(|| null("cloud"))?;
        copy_points(cloud.0.points(), xy, capacity, count)
    })
}

/// Last passage value `L(u, v)`.
///
/// # Safety
/// `cloud` must come from this library; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn areatrap_lpp_length(
    cloud: *const AreatrapCloud,
    ux: f64,
    uy: f64,
    vx: f64,
    vy: f64,
    out: *mut usize,
) -> AreatrapStatus {
    guard(|| {
        let cloud = cloud.as_ref().ok_or_else(|| null("cloud"))?;
        let l = lpp_length(&cloud.0, Point::new(ux, uy), Point::new(vx, vy))?;
        write_out(out, l)
    })
}

/// Solves the area-constrained problem on `(0,0) → (n,n)`.
///
/// # Safety
/// `cloud` must come from this library; `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn areatrap_solve(
    cloud: *const AreatrapCloud,
    alpha: f64,
    method: AreatrapMethod,
    out: *mut *mut AreatrapSolution,
) -> AreatrapStatus {
    guard(|| {
        let cloud = cloud.as_ref().ok_or_else(|| null("cloud"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mode = match method {
            AreatrapMethod::Auto => Method::Auto,
            AreatrapMethod::Lagrangian => Method::Lagrangian,
            AreatrapMethod::Exact => Method::Exact,
        };
        let sol = solve_constrained(&cloud.0, cloud.0.n(), alpha, &SolverOptions::with_mode(mode))?;
        write_out(out, Box::into_raw(Box::new(AreatrapSolution(sol))))
    })
}

/// Releases a solution. Null is ignored.
///
/// # Safety
/// `sol` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn areatrap_solution_free(sol: *mut AreatrapSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// # Safety
/// `sol` must come from this library; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn areatrap_solution_info(
    sol: *const AreatrapSolution,
    out: *mut AreatrapSolutionInfo,
) -> AreatrapStatus {
    guard(|| {
        let s = &sol.as_ref().ok_or_else(|| null("solution"))?.0;
        write_out(
            out,
            AreatrapSolutionInfo {
                n: s.path.n(),
                alpha: s.alpha,
                threshold: s.threshold,
                length: s.length,
                achieved_area: s.achieved_area,
                upper_bound: s.upper_bound,
                gap: s.gap,
                method: match s.method {
                    Method::Exact => AreatrapMethod::Exact,
                    Method::Lagrangian => AreatrapMethod::Lagrangian,
                    Method::Auto => AreatrapMethod::Auto,
                },
            },
        )
    })
}

/// Copies the path vertices, including `(0,0)` and `(n,n)`. Pass a null
/// `xy` to query the count only.
///
/// # Safety
/// As for [`areatrap_cloud_points`].
#[no_mangle]
pub unsafe extern "C" fn areatrap_solution_vertices(
    sol: *const AreatrapSolution,
    xy: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> AreatrapStatus {
    guard(|| {
        let s = &sol.as_ref().ok_or_else(|| null("solution"))?.0;
        copy_points(s.path.vertices(), xy, capacity, count)
    })
}

/// Writes the solved path in the `areatrap-path v1` format.
///
/// # Safety
/// `sol` must come from this library; `path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn areatrap_solution_save(sol: *const AreatrapSolution, path: *const c_char) -> AreatrapStatus {
    guard(|| {
        let s = &sol.as_ref().ok_or_else(|| null("solution"))?.0;
        save_solution(s, path_arg(path)?)?;
        Ok(())
    })
}

/// Facet and roughness statistics of the solved path.
///
/// # Safety
/// `sol` must come from this library; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn areatrap_solution_roughness(
    sol: *const AreatrapSolution,
    delta: f64,
    out: *mut AreatrapRoughness,
) -> AreatrapStatus {
    guard(|| {
        let s = &sol.as_ref().ok_or_else(|| null("solution"))?.0;
        let r = analyze(&s.path, s.path.n(), delta)?;
        write_out(
            out,
            AreatrapRoughness {
                mfl_all: r.mfl_all,
                mfl_interior: r.mfl_interior,
                mlr_all: r.mlr_all,
                mlr_interior: r.mlr_interior,
                facets: r.facets.len(),
                interior_facets: r.interior_facets().count(),
            },
        )
    })
}

/// Limit-shape constants `c_α` and `w_α`.
///
/// # Safety
/// `c` and `w` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn areatrap_limit_shape(alpha: f64, c: *mut f64, w: *mut f64) -> AreatrapStatus {
    guard(|| {
        if c.is_null() || w.is_null() {
            return Err(null("output pointer"));
        }
        let s = LimitShape::new(alpha)?;
        write_out(c, s.c)?;
        write_out(w, s.w)
    })
}
