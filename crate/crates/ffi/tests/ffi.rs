use std::ffi::{c_char, CStr, CString};
use std::ptr;

use areatrap_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe {
        areatrap_last_error(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn sample(n: f64, seed: u64) -> *mut AreatrapCloud {
    let mut cloud = ptr::null_mut();
    assert_eq!(unsafe { areatrap_cloud_sample(n, seed, 0, &mut cloud) }, AreatrapStatus::Ok);
    assert!(!cloud.is_null());
    cloud
}

#[test]
fn sample_solve_and_inspect() {
    unsafe {
        let cloud = sample(20.0, 7);
        let mut count = 0;
        assert_eq!(areatrap_cloud_count(cloud, &mut count), AreatrapStatus::Ok);
        assert!(count > 300);

        let mut queried = 0;
        assert_eq!(areatrap_cloud_points(cloud, ptr::null_mut(), 0, &mut queried), AreatrapStatus::Ok);
        assert_eq!(queried, count);
        let mut xy = vec![0.0; 2 * count];
        assert_eq!(areatrap_cloud_points(cloud, xy.as_mut_ptr(), count, &mut queried), AreatrapStatus::Ok);
        assert!(xy.iter().all(|&v| (0.0..=20.0).contains(&v)));

        let mut l = 0;
        assert_eq!(areatrap_lpp_length(cloud, 0.0, 0.0, 20.0, 20.0, &mut l), AreatrapStatus::Ok);

        let mut sol = ptr::null_mut();
        assert_eq!(areatrap_solve(cloud, 0.25, AreatrapMethod::Exact, &mut sol), AreatrapStatus::Ok);
        let mut info = AreatrapSolutionInfo::default();
        assert_eq!(areatrap_solution_info(sol, &mut info), AreatrapStatus::Ok);
        assert_eq!(info.method, AreatrapMethod::Exact);
        assert!(info.length <= l);
        assert!(info.achieved_area >= info.threshold);
        assert_eq!(info.threshold, 0.75 * 400.0);

        let mut k = 0;
        areatrap_solution_vertices(sol, ptr::null_mut(), 0, &mut k);
        assert_eq!(k, info.length + 2);
        let mut v = vec![0.0; 2 * k];
        assert_eq!(areatrap_solution_vertices(sol, v.as_mut_ptr(), k, &mut k), AreatrapStatus::Ok);
        assert_eq!(&v[..2], &[0.0, 0.0]);
        assert_eq!(&v[2 * k - 2..], &[20.0, 20.0]);

        let mut r = AreatrapRoughness::default();
        assert_eq!(
            areatrap_solution_roughness(sol, std::f64::consts::PI / 10.0, &mut r),
            AreatrapStatus::Ok
        );
        assert!(r.interior_facets <= r.facets && r.facets >= 1);

        areatrap_solution_free(sol);
        areatrap_cloud_free(cloud);
    }
}

#[test]
fn from_points_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("c.txt").to_str().unwrap()).unwrap();
    let xy = [1.0, 1.0, 2.0, 3.0, 3.0, 2.0];
    unsafe {
        let mut cloud = ptr::null_mut();
        assert_eq!(areatrap_cloud_from_points(4.0, xy.as_ptr(), 3, &mut cloud), AreatrapStatus::Ok);
        assert_eq!(areatrap_cloud_save(cloud, path.as_ptr()), AreatrapStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(areatrap_cloud_load(path.as_ptr(), &mut back), AreatrapStatus::Ok);
        let mut l = 0;
        assert_eq!(areatrap_lpp_length(back, 0.0, 0.0, 4.0, 4.0, &mut l), AreatrapStatus::Ok);
        assert_eq!(l, 2);
        areatrap_cloud_free(cloud);
        areatrap_cloud_free(back);
    }
}

#[test]
fn errors_are_codes_with_messages() {
    unsafe {
        let mut cloud = ptr::null_mut();
        assert_eq!(areatrap_cloud_sample(-1.0, 0, 0, &mut cloud), AreatrapStatus::InvalidArgument);
        assert!(cloud.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(areatrap_cloud_sample(5.0, 0, 0, ptr::null_mut()), AreatrapStatus::NullPointer);
        assert_eq!(last_error(), "out is null");

        let mut c = 0.0;
        let mut w = 0.0;
        assert_eq!(areatrap_limit_shape(0.7, &mut c, &mut w), AreatrapStatus::InvalidArgument);
        assert_eq!(areatrap_limit_shape(0.25, &mut c, &mut w), AreatrapStatus::Ok);
        assert!(c > 0.0 && w > 0.0 && w < 1.0);

        let missing = CString::new("/nonexistent/cloud.txt").unwrap();
        assert_eq!(areatrap_cloud_load(missing.as_ptr(), &mut cloud), AreatrapStatus::Io);

        // a single point cannot trap half the square
        let xy = [0.5, 0.5];
        areatrap_cloud_from_points(1.0, xy.as_ptr(), 1, &mut cloud);
        let mut sol = ptr::null_mut();
        assert_eq!(areatrap_solve(cloud, 0.49, AreatrapMethod::Auto, &mut sol), AreatrapStatus::Infeasible);
        let mut small = [0.0; 2];
        let mut k = 0;
        assert_eq!(areatrap_cloud_points(cloud, small.as_mut_ptr(), 0, &mut k), AreatrapStatus::BufferTooSmall);
        areatrap_cloud_free(cloud);

        areatrap_cloud_free(ptr::null_mut());
        areatrap_solution_free(ptr::null_mut());
        let mut info = AreatrapSolutionInfo::default();
        assert_eq!(areatrap_solution_info(ptr::null(), &mut info), AreatrapStatus::NullPointer);
    }
}

#[test]
fn truncated_error_copy_reports_full_length() {
    unsafe {
        areatrap_cloud_sample(5.0, 0, 0, ptr::null_mut());
        let mut buf = [0 as c_char; 4];
        let full = areatrap_last_error(buf.as_mut_ptr(), buf.len());
        assert_eq!(full, "out is null".len());
        assert_eq!(CStr::from_ptr(buf.as_ptr()).to_str().unwrap(), "out");
        assert_eq!(areatrap_last_error(ptr::null_mut(), 0), full);
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(areatrap_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
