use std::ffi::{c_char, CString};
use std::ptr;

use rlem_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let mut needed = 0usize;
    unsafe {
        assert_eq!(rlem_last_error(ptr::null_mut(), 0, &mut needed), RlemStatus::Ok);
        let mut buf = vec![0u8; needed];
        assert_eq!(rlem_last_error(buf.as_mut_ptr() as *mut c_char, buf.len(), &mut needed), RlemStatus::Ok);
        String::from_utf8(buf[..needed - 1].to_vec()).unwrap()
    }
}

#[test]
fn census_counts() {
    let (mut total, mut classes, mut nondeg) = (0u64, 0usize, 0usize);
    unsafe {
        assert_eq!(rlem_census(3, &mut total, &mut classes, &mut nondeg), RlemStatus::Ok);
        assert_eq!((total, classes, nondeg), (720, 24, 14));
        assert_eq!(rlem_census(7, &mut total, ptr::null_mut(), ptr::null_mut()), RlemStatus::OutOfRange);
    }
    assert!(last_error().contains("between 1 and 4"));
}

#[test]
fn tables() {
    unsafe {
        let (mut re, mut anchor) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(rlem_table_parse(c("RE").as_ptr(), &mut re), RlemStatus::Ok);
        assert_eq!(rlem_table_parse(c("4-289").as_ptr(), &mut anchor), RlemStatus::Ok);
        let (mut k, mut serial, mut canon) = (0, 0, 0);
        assert_eq!(rlem_table_id(re, &mut k, &mut serial, &mut canon), RlemStatus::Ok);
        assert_eq!((k, canon), (4, 289));
        assert_eq!(rlem_table_equivalent(re, anchor), RlemStatus::Ok);
        let mut two = ptr::null_mut();
        assert_eq!(rlem_table_parse(c("2-2").as_ptr(), &mut two), RlemStatus::Ok);
        assert_eq!(rlem_table_equivalent(re, two), RlemStatus::Negative);
        let (mut q, mut y) = (9, 9);
        assert_eq!(rlem_table_step(two, 0, 1, &mut q, &mut y), RlemStatus::Ok);
        assert_eq!((q, y), (1, 0));
        assert_eq!(rlem_table_step(two, 0, 5, &mut q, &mut y), RlemStatus::OutOfRange);
        let mut bad = ptr::null_mut();
        assert_eq!(rlem_table_parse(c("2-99").as_ptr(), &mut bad), RlemStatus::Parse);
        assert!(bad.is_null());
        assert_eq!(rlem_table_parse(ptr::null(), &mut bad), RlemStatus::NullPointer);
        rlem_table_free(re);
        rlem_table_free(anchor);
        rlem_table_free(two);
        rlem_table_free(ptr::null_mut());
    }
}

const RE_CKT: &str = include_str!("../../core/fixtures/re.ckt");

#[test]
fn circuits_run_both_ways() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(rlem_circuit_parse(c(RE_CKT).as_ptr(), &mut h), RlemStatus::Ok);
        let (mut i, mut o, mut e) = (0, 0, 0);
        assert_eq!(rlem_circuit_shape(h, &mut i, &mut o, &mut e), RlemStatus::Ok);
        assert_eq!((i, o, e), (4, 4, 1));
        assert_eq!(rlem_circuit_verify(h, c("RE").as_ptr()), RlemStatus::Ok);
        assert_eq!(rlem_circuit_verify(h, c("4-0").as_ptr()), RlemStatus::Negative);
        let mut before = [9usize; 1];
        assert_eq!(rlem_circuit_states(h, before.as_mut_ptr(), 1), RlemStatus::Ok);
        let (mut port, mut steps) = (0, 0);
        assert_eq!(rlem_circuit_inject(h, 0, &mut port, &mut steps), RlemStatus::Ok);
        assert_eq!(steps, 1);
        let mut back = 9;
        assert_eq!(rlem_circuit_backward(h, port, &mut back), RlemStatus::Ok);
        assert_eq!(back, 0);
        let mut after = [9usize; 1];
        assert_eq!(rlem_circuit_states(h, after.as_mut_ptr(), 1), RlemStatus::Ok);
        assert_eq!(before, after);
        assert_eq!(rlem_circuit_inject(h, 4, &mut port, ptr::null_mut()), RlemStatus::OutOfRange);
        assert_eq!(rlem_circuit_states(h, after.as_mut_ptr(), 0), RlemStatus::BufferTooSmall);
        assert_eq!(rlem_circuit_reset(h), RlemStatus::Ok);
        rlem_circuit_free(h);
        let mut bad = ptr::null_mut();
        assert_eq!(rlem_circuit_parse(c("in a\nout a\nwire a -> nowhere\n").as_ptr(), &mut bad), RlemStatus::Parse);
        assert!(!last_error().is_empty());
    }
}

#[test]
fn rtm_parity() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(rlem_rtm_parse(c(include_str!("../../core/fixtures/parity.rtm")).as_ptr(), &mut m), RlemStatus::Ok);
        assert_eq!(rlem_rtm_check(m), RlemStatus::Ok);
        let mut v = RlemVerdict::Running;
        for (w, want) in [("", RlemVerdict::Accept), ("1", RlemVerdict::Reject), ("1111", RlemVerdict::Accept)] {
            assert_eq!(rlem_rtm_run(m, c(w).as_ptr(), 1000, &mut v, ptr::null_mut()), RlemStatus::Ok);
            assert_eq!(v, want, "{w}");
        }
        assert_eq!(rlem_rtm_run(m, c("2").as_ptr(), 1000, &mut v, ptr::null_mut()), RlemStatus::Parse);
        rlem_rtm_free(m);
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/rlem.h");
    let src = include_str!("../src/lib.rs");
    let names: Vec<&str> = src
        .lines()
        .filter_map(|l| l.strip_prefix("pub unsafe extern \"C\" fn "))
        .map(|l| &l[..l.find('(').unwrap()])
        .collect();
    assert!(names.len() >= 15);
    for n in names {
        assert!(header.contains(&format!("{n}(")), "{n} missing from header");
    }
}
