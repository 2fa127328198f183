//! C ABI for the rlem toolkit.
//!
//! Every function returns an [`RlemStatus`]. Results are written through out
//! pointers. Handles are opaque and must be released with their `_free`
//! function. After a non-`Ok` status, [`rlem_last_error`] describes the
//! failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rlem::circuit::{find_state_map, Circuit, Configuration, SimulationMaps, DEFAULT_MAX_STEPS};
use rlem::rtm::{Rtm, Verdict};
use rlem::{are_equivalent, canonical_serial, census, MoveTable};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RlemStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    OutOfRange = 4,
    Simulation = 5,
    /// The call completed and the answer is no.
    Negative = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RlemVerdict {
    Accept = 0,
    Reject = 1,
    Halted = 2,
    Running = 3,
    WindowExceeded = 4,
}

/// A 2-state RLEM.
pub struct RlemTable(MoveTable);

/// A compiled circuit together with its current configuration.
pub struct RlemCircuit {
    circuit: Circuit,
    config: Configuration,
}

/// A reversible Turing machine.
pub struct RlemRtm(Rtm);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl ToString) {
    let s = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn fail(status: RlemStatus, msg: impl ToString) -> RlemStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), RlemStatus>) -> RlemStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RlemStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(RlemStatus::Panic, "internal panic"),
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, RlemStatus> {
    if p.is_null() {
        return Err(fail(RlemStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|e| fail(RlemStatus::InvalidUtf8, e))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, RlemStatus> {
    p.as_mut().ok_or_else(|| fail(RlemStatus::NullPointer, "null out pointer"))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, RlemStatus> {
    p.as_ref().ok_or_else(|| fail(RlemStatus::NullPointer, "null handle"))
}

fn write_str(s: &str, buf: *mut c_char, len: usize, needed: Option<&mut usize>) -> Result<(), RlemStatus> {
    if let Some(n) = needed {
        *n = s.len() + 1;
    }
    if buf.is_null() {
        return if len == 0 { Ok(()) } else { Err(fail(RlemStatus::NullPointer, "null buffer")) };
    }
    if len < s.len() + 1 {
        return Err(fail(RlemStatus::BufferTooSmall, format!("need {} bytes", s.len() + 1)));
    }
    unsafe {
        ptr::copy_nonoverlapping(s.as_ptr(), buf.cast(), s.len());
        *buf.add(s.len()) = 0;
    }
    Ok(())
}

/// Copies the calling thread's last error message into `buf`. `needed`
/// receives the size including the terminator; pass a null `buf` with
/// `len` 0 to query it.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes; `needed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn rlem_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> RlemStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().to_string_lossy().into_owned());
    match write_str(&msg, buf, len, needed.as_mut()) {
        Ok(()) => RlemStatus::Ok,
        Err(s) => s,
    }
}

/// Counts equivalence classes of 2-state `k`-symbol RLEMs, `1 <= k <= 4`.
///
/// # Safety
/// Out pointers must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn rlem_census(
    k: usize,
    total: *mut u64,
    classes: *mut usize,
    nondegenerate: *mut usize,
) -> RlemStatus {
    guard(|| {
        if !(1..=4).contains(&k) {
            return Err(fail(RlemStatus::OutOfRange, "k must be between 1 and 4"));
        }
        let c = census(k);
        if let Some(t) = total.as_mut() {
            *t = c.total;
        }
        if let Some(n) = classes.as_mut() {
            *n = c.class_count();
        }
        if let Some(n) = nondegenerate.as_mut() {
            *n = c.nondegenerate().len();
        }
        Ok(())
    })
}

/// Parses `K-N`, `RE`, `perm=...` or `rlem k=K perm=...`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `table` writable.
#[no_mangle]
pub unsafe extern "C" fn rlem_table_parse(spec: *const c_char, table: *mut *mut RlemTable) -> RlemStatus {
    guard(|| {
        let slot = out(table)?;
        let t = MoveTable::parse_spec(text(spec)?).map_err(|e| fail(RlemStatus::Parse, e))?;
        *slot = Box::into_raw(Box::new(RlemTable(t)));
        Ok(())
    })
}

/// # Safety
/// `table` must be null or a handle from [`rlem_table_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rlem_table_free(table: *mut RlemTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Symbol count and serial number; `canonical` receives the class
/// representative's serial.
///
/// # Safety
/// `table` must be a live handle; out pointers null or writable.
#[no_mangle]
pub unsafe extern "C" fn rlem_table_id(
    table: *const RlemTable,
    k: *mut usize,
    serial: *mut u64,
    canonical: *mut u64,
) -> RlemStatus {
    guard(|| {
        let t = &handle(table)?.0;
        if let Some(x) = k.as_mut() {
            *x = t.k();
        }
        if let Some(x) = serial.as_mut() {
            *x = t.serial();
        }
        if let Some(x) = canonical.as_mut() {
            *x = canonical_serial(t).serial;
        }
        Ok(())
    })
}

/// One move: from `state` on `input`, the next state and output symbol.
///
/// # Safety
/// `table` must be a live handle; out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn rlem_table_step(
    table: *const RlemTable,
    state: usize,
    input: usize,
    next: *mut usize,
    output: *mut usize,
) -> RlemStatus {
    guard(|| {
        let t = &handle(table)?.0;
        if state > 1 || input >= t.k() {
            return Err(fail(RlemStatus::OutOfRange, "state or input out of range"));
        }
        let (q, y) = t.step(state, input);
        *out(next)? = q;
        *out(output)? = y;
        Ok(())
    })
}

/// `Ok` if the two RLEMs are equivalent under renaming, `Negative` if not.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn rlem_table_equivalent(a: *const RlemTable, b: *const RlemTable) -> RlemStatus {
    guard(|| {
        if are_equivalent(&handle(a)?.0, &handle(b)?.0) {
            Ok(())
        } else {
            Err(fail(RlemStatus::Negative, "not equivalent"))
        }
    })
}

/// Parses and compiles a netlist; the circuit starts in its declared
/// initial configuration.
///
/// # Safety
/// `netlist` must be a NUL-terminated string; `circuit` writable.
#[no_mangle]
pub unsafe extern "C" fn rlem_circuit_parse(netlist: *const c_char, circuit: *mut *mut RlemCircuit) -> RlemStatus {
    guard(|| {
        let slot = out(circuit)?;
        let n = rlem::Netlist::parse(text(netlist)?).map_err(|e| fail(RlemStatus::Parse, e))?;
        let c = n.compile().map_err(|v| {
            let msg = v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ");
            fail(RlemStatus::Parse, msg)
        })?;
        let config = c.initial_configuration();
        *slot = Box::into_raw(Box::new(RlemCircuit { circuit: c, config }));
        Ok(())
    })
}

/// # Safety
/// `circuit` must be null or a handle from [`rlem_circuit_parse`] not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn rlem_circuit_free(circuit: *mut RlemCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// # Safety
/// `circuit` must be a live handle; out pointers null or writable.
#[no_mangle]
pub unsafe extern "C" fn rlem_circuit_shape(
    circuit: *const RlemCircuit,
    inputs: *mut usize,
    outputs: *mut usize,
    elements: *mut usize,
) -> RlemStatus {
    guard(|| {
        let c = &handle(circuit)?.circuit;
        if let Some(x) = inputs.as_mut() {
            *x = c.num_inputs();
        }
        if let Some(x) = outputs.as_mut() {
            *x = c.num_outputs();
        }
        if let Some(x) = elements.as_mut() {
            *x = c.num_elements();
        }
        Ok(())
    })
}

/// Restores the declared initial configuration.
///
/// # Safety
/// `circuit` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rlem_circuit_reset(circuit: *mut RlemCircuit) -> RlemStatus {
    guard(|| {
        let h = out(circuit)?;
        h.config = h.circuit.initial_configuration();
        Ok(())
    })
}

/// Sends a token into input port `input`; `output` receives the port it
/// leaves by and `steps` the number of element transitions.
///
/// # Safety
/// `circuit` must be a live handle; `output` writable, `steps` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn rlem_circuit_inject(
    circuit: *mut RlemCircuit,
    input: usize,
    output: *mut usize,
    steps: *mut usize,
) -> RlemStatus {
    guard(|| {
        let h = out(circuit)?;
        let slot = out(output)?;
        if input >= h.circuit.num_inputs() {
            return Err(fail(RlemStatus::OutOfRange, "no such input"));
        }
        let e = h
            .circuit
            .inject(&mut h.config, input, DEFAULT_MAX_STEPS)
            .map_err(|e| fail(RlemStatus::Simulation, e))?;
        *slot = e.port;
        if let Some(s) = steps.as_mut() {
            *s = e.steps;
        }
        Ok(())
    })
}

/// Runs a token backwards from output port `output`.
///
/// # Safety
/// `circuit` must be a live handle; `input` writable.
#[no_mangle]
pub unsafe extern "C" fn rlem_circuit_backward(circuit: *mut RlemCircuit, output: usize, input: *mut usize) -> RlemStatus {
    guard(|| {
        let h = out(circuit)?;
        let slot = out(input)?;
        if output >= h.circuit.num_outputs() {
            return Err(fail(RlemStatus::OutOfRange, "no such output"));
        }
        let e = h
            .circuit
            .backward(&mut h.config, output, DEFAULT_MAX_STEPS)
            .map_err(|e| fail(RlemStatus::Simulation, e))?;
        *slot = e.port;
        Ok(())
    })
}

/// Copies the element states into `states`, which holds `len` entries.
///
/// # Safety
/// `circuit` must be a live handle; `states` valid for `len` entries.
#[no_mangle]
pub unsafe extern "C" fn rlem_circuit_states(circuit: *const RlemCircuit, states: *mut usize, len: usize) -> RlemStatus {
    guard(|| {
        let h = handle(circuit)?;
        let s = &h.config.states;
        if states.is_null() {
            return Err(fail(RlemStatus::NullPointer, "null buffer"));
        }
        if len < s.len() {
            return Err(fail(RlemStatus::BufferTooSmall, format!("need {} entries", s.len())));
        }
        ptr::copy_nonoverlapping(s.as_ptr(), states, s.len());
        Ok(())
    })
}

/// `Ok` if the circuit simulates `target` (an RLEM spec) with positional
/// port maps, `Negative` otherwise. Without a declared state map one is
/// derived.
///
/// # Safety
/// `circuit` must be a live handle; `target` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn rlem_circuit_verify(circuit: *const RlemCircuit, target: *const c_char) -> RlemStatus {
    guard(|| {
        let c = &handle(circuit)?.circuit;
        let m = MoveTable::parse_spec(text(target)?).map_err(|e| fail(RlemStatus::Parse, e))?.to_rsm();
        let mut maps = SimulationMaps::positional(c, &m);
        if maps.state_map.is_empty() {
            maps.state_map = find_state_map(c, &m, &maps.in_map, &maps.out_map, DEFAULT_MAX_STEPS)
                .ok_or_else(|| fail(RlemStatus::Negative, "no state map makes the circuit follow the target"))?;
        }
        c.verify_simulation(&m, &maps, DEFAULT_MAX_STEPS).map_err(|e| fail(RlemStatus::Negative, e))
    })
}

/// # Safety
/// `source` must be a NUL-terminated string; `rtm` writable.
#[no_mangle]
pub unsafe extern "C" fn rlem_rtm_parse(source: *const c_char, rtm: *mut *mut RlemRtm) -> RlemStatus {
    guard(|| {
        let slot = out(rtm)?;
        let m = Rtm::parse(text(source)?).map_err(|e| fail(RlemStatus::Parse, e))?;
        *slot = Box::into_raw(Box::new(RlemRtm(m)));
        Ok(())
    })
}

/// # Safety
/// `rtm` must be null or a handle from [`rlem_rtm_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rlem_rtm_free(rtm: *mut RlemRtm) {
    if !rtm.is_null() {
        drop(Box::from_raw(rtm));
    }
}

/// `Ok` if the machine is deterministic and reversible, `Negative` with
/// the first violation otherwise.
///
/// # Safety
/// `rtm` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rlem_rtm_check(rtm: *const RlemRtm) -> RlemStatus {
    guard(|| {
        let m = &handle(rtm)?.0;
        match m.check().first() {
            None => Ok(()),
            Some(v) => Err(fail(RlemStatus::Negative, m.describe(v))),
        }
    })
}

/// Interprets the machine on `input`, a word of one-character symbols.
///
/// # Safety
/// `rtm` must be a live handle; `input` a NUL-terminated string; `verdict`
/// writable, `steps` null or writable.
#[no_mangle]
pub unsafe extern "C" fn rlem_rtm_run(
    rtm: *const RlemRtm,
    input: *const c_char,
    fuel: usize,
    verdict: *mut RlemVerdict,
    steps: *mut usize,
) -> RlemStatus {
    guard(|| {
        let m = &handle(rtm)?.0;
        let slot = out(verdict)?;
        let w = m.parse_input(text(input)?).map_err(|e| fail(RlemStatus::Parse, e))?;
        let o = m.interpret(&w, fuel);
        *slot = match o.verdict {
            Verdict::Accept => RlemVerdict::Accept,
            Verdict::Reject => RlemVerdict::Reject,
            Verdict::Halted(_) => RlemVerdict::Halted,
            Verdict::Running => RlemVerdict::Running,
            Verdict::WindowExceeded | Verdict::Exit(_) => RlemVerdict::WindowExceeded,
        };
        if let Some(s) = steps.as_mut() {
            *s = o.steps;
        }
        Ok(())
    })
}
