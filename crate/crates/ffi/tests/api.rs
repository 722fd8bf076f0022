use std::ffi::{c_char, CStr, CString};
use std::ptr;

use birat_ffi::*;

fn load(spec: &str, params: Option<&str>) -> (BiratStatus, *mut BiratInstance) {
    let spec = CString::new(spec).unwrap();
    let params = params.map(|p| CString::new(p).unwrap());
    let mut out = ptr::null_mut();
    let s = unsafe {
        birat_instance_load(
            spec.as_ptr(),
            params.as_ref().map_or(ptr::null(), |p| p.as_ptr()),
            &mut out,
        )
    };
    (s, out)
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(birat_last_error_message()) }
        .to_str()
        .unwrap()
        .to_string()
}

fn take(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { birat_string_free(p) };
    s
}

#[test]
fn dp1_degrees() {
    let (s, inst) = load("dp1-ercolani", None);
    assert_eq!(s, BiratStatus::Ok);
    assert_eq!(unsafe { birat_chart_count(inst) }, 4);
    let mut buf = [0u64; 8];
    let mut written = 0;
    let s = unsafe { birat_degrees(inst, 5, buf.as_mut_ptr(), buf.len(), &mut written) };
    assert_eq!(s, BiratStatus::Ok);
    assert_eq!(&buf[..written], &[1, 2, 4, 8, 14, 22]);
    let mut aff = [0i64; 11];
    let s = unsafe { birat_affine_degrees(inst, 10, aff.as_mut_ptr(), aff.len()) };
    assert_eq!(s, BiratStatus::Ok);
    assert_eq!(aff[10], 92);
    unsafe { birat_instance_free(inst) };
}

#[test]
fn strings_round_trip() {
    let (_, inst) = load("inflated-qrt", Some("a=2"));
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { birat_orbit_csv(inst, 2, &mut out) }, BiratStatus::Ok);
    let csv = take(out);
    assert!(csv.starts_with("n,d,nu3,nu6,nu9,nu10\n0,1,"));
    assert_eq!(csv.lines().count(), 4);
    assert_eq!(unsafe { birat_orbit_json(inst, 2, &mut out) }, BiratStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    unsafe { birat_instance_free(inst) };
}

#[test]
fn recurrence_and_darboux() {
    let (_, inst) = load("khk-euler", None);
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { birat_recurrence_json(inst, 5, &mut out) },
        BiratStatus::Ok
    );
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["coefficients"], serde_json::json!(["3", "-3", "1"]));
    assert_eq!(
        unsafe { birat_darboux_json(inst, 2, true, &mut out) },
        BiratStatus::Ok
    );
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["dimension"], 2);
    unsafe { birat_instance_free(inst) };
}

#[test]
fn error_codes() {
    let (s, inst) = load("no-such-instance", None);
    assert_eq!(s, BiratStatus::UnknownInstance);
    assert!(inst.is_null());
    assert!(last_error().contains("no-such-instance"));

    let (s, _) = load("dp1-ercolani", Some("zeta=2"));
    assert_eq!(s, BiratStatus::InvalidInstance);
    let (s, _) = load("dp1-ercolani", Some("gamma"));
    assert_eq!(s, BiratStatus::InvalidInstance);

    let mut out = ptr::null_mut();
    let s = unsafe { birat_instance_load(ptr::null(), ptr::null(), &mut out) };
    assert_eq!(s, BiratStatus::NullPointer);
    let bad = [0xffu8 as c_char, 0];
    let s = unsafe { birat_instance_load(bad.as_ptr(), ptr::null(), &mut out) };
    assert_eq!(s, BiratStatus::InvalidUtf8);

    let (_, inst) = load("dp1-ercolani", None);
    assert!(last_error().is_empty());
    let mut buf = [0u64; 2];
    let mut written = 0;
    let s = unsafe { birat_degrees(inst, 5, buf.as_mut_ptr(), buf.len(), &mut written) };
    assert_eq!(s, BiratStatus::BufferTooSmall);
    let s = unsafe { birat_degrees(ptr::null(), 1, buf.as_mut_ptr(), buf.len(), &mut written) };
    assert_eq!(s, BiratStatus::NullPointer);
    unsafe { birat_instance_free(inst) };

    let mut doc: serde_json::Value =
        serde_json::from_str(birat::instance::builtin_source("inflated-qrt").unwrap()).unwrap();
    doc.as_object_mut().unwrap().remove("affine");
    let src = CString::new(doc.to_string()).unwrap();
    let mut bare = ptr::null_mut();
    assert_eq!(
        unsafe { birat_instance_from_json(src.as_ptr(), &mut bare) },
        BiratStatus::Ok
    );
    let mut aff = [0i64; 4];
    assert_eq!(
        unsafe { birat_affine_degrees(bare, 3, aff.as_mut_ptr(), 4) },
        BiratStatus::Unavailable
    );
    unsafe { birat_instance_free(bare) };
    unsafe { birat_instance_free(ptr::null_mut()) };
}

#[test]
fn from_json_document() {
    let src = CString::new(birat::instance::builtin_source("dp1-ercolani").unwrap()).unwrap();
    let mut inst = ptr::null_mut();
    assert_eq!(
        unsafe { birat_instance_from_json(src.as_ptr(), &mut inst) },
        BiratStatus::Ok
    );
    assert!(unsafe { birat_default_nmax(inst) } > 0);
    unsafe { birat_instance_free(inst) };
    let junk = CString::new("{").unwrap();
    assert_eq!(
        unsafe { birat_instance_from_json(junk.as_ptr(), &mut inst) },
        BiratStatus::InvalidInstance
    );
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(birat_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
