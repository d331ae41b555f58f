//! Text format for listed states.
//!
//! ```text
//! STATE qubits=3 class=Q_2
//! AMP 010 0100000001
//! ```
//!
//! One `AMP` line per nonzero amplitude, encoded in the header class.

use std::collections::BTreeMap;

use super::{AmplitudeQuery, ExplicitState, StateError};
use crate::basis;
use crate::exactnum::{decode, encode, fit_class, BitString, ClassDescriptor, ExactValue, Family};

fn perr(line: usize, msg: impl std::fmt::Display) -> StateError {
    StateError::Invalid(format!("line {line}: {msg}"))
}

pub fn write_statefile(n: usize, amps: &BTreeMap<u64, ExactValue>) -> Result<String, StateError> {
    let vals: Vec<ExactValue> = amps.values().filter(|v| !v.is_zero()).cloned().collect();
    let family = if vals.iter().all(|v| v.is_real()) { Family::Q } else { Family::C };
    let cls = fit_class(&vals, family)?;
    let mut out = format!("STATE qubits={n} class={cls}\n");
    for (x, v) in amps {
        if !v.is_zero() {
            out.push_str(&format!("AMP {} {}\n", basis::format(*x, n), encode(v, &cls)?));
        }
    }
    Ok(out)
}

/// Every nonzero amplitude of `q`, from its support hint when it has one
/// and by enumeration otherwise (up to `cap` qubits).
pub fn collect_state(q: &dyn AmplitudeQuery, cap: usize) -> Result<BTreeMap<u64, ExactValue>, StateError> {
    let strings: Vec<u64> = match q.support_hint() {
        Some(s) => s,
        None if q.arity() <= cap => (0..1u64 << q.arity()).collect(),
        None => return Err(StateError::Invalid(format!("{}-qubit state has no support hint and is past the cap {cap}", q.arity()))),
    };
    let mut out = BTreeMap::new();
    for x in strings {
        let v = q.query(x)?;
        if !v.is_zero() {
            out.insert(x, v);
        }
    }
    Ok(out)
}

pub fn read_statefile(text: &str) -> Result<ExplicitState, StateError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty file"))?;
    let mut fields = header.split_whitespace();
    if fields.next() != Some("STATE") {
        return Err(perr(hl, "expected STATE header"));
    }
    let (mut n, mut cls) = (None, None);
    for f in fields {
        match f.split_once('=') {
            Some(("qubits", v)) => n = Some(v.parse::<usize>().map_err(|_| perr(hl, "bad qubit count"))?),
            Some(("class", v)) => cls = Some(v.parse::<ClassDescriptor>().map_err(|e| perr(hl, e))?),
            _ => return Err(perr(hl, format!("bad header field {f}"))),
        }
    }
    let n = n.ok_or_else(|| perr(hl, "missing qubits="))?;
    if n == 0 || n > basis::MAX_QUBITS {
        return Err(perr(hl, format!("qubit count {n} out of range")));
    }
    let cls = cls.ok_or_else(|| perr(hl, "missing class="))?;
    let mut amps = Vec::new();
    for (ln, l) in lines {
        let tok: Vec<&str> = l.split_whitespace().collect();
        let [rec, x, v] = tok[..] else {
            return Err(perr(ln, "expected AMP <basis> <bits>"));
        };
        if rec != "AMP" {
            return Err(perr(ln, format!("unknown record {rec}")));
        }
        let x = match basis::parse(x) {
            Some((x, len)) if len == n => x,
            _ => return Err(perr(ln, format!("bad basis string {x}"))),
        };
        let b: BitString = v.parse().map_err(|e| perr(ln, e))?;
        amps.push((x, decode(&b, &cls).map_err(|e| perr(ln, e))?));
    }
    ExplicitState::new(n, amps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_radicals() {
        let amps: BTreeMap<u64, ExactValue> =
            [(0b01, ExactValue::sqrt_half(1)), (0b10, ExactValue::from_ratio(-3, 4).unwrap()), (0b11, ExactValue::omega(3))].into_iter().collect();
        let text = write_statefile(2, &amps).unwrap();
        let back = read_statefile(&text).unwrap();
        for (x, v) in &amps {
            assert_eq!(&back.query(*x).unwrap(), v);
        }
        assert!(back.query(0).unwrap().is_zero());
    }

    #[test]
    fn errors_name_the_line() {
        let e = read_statefile("STATE qubits=2 class=Q_1\nAMP 0 0000").unwrap_err();
        assert!(e.to_string().starts_with("line 2"), "{e}");
        assert!(read_statefile("HAM qubits=2").is_err());
    }
}
