//! Text format for Hamiltonians.
//!
//! ```text
//! HAM qubits=3 locality=2 variant=4local class=Q_2
//! TERM prop(1) 1,3
//! 0000 0000 0000 0000
//! ...
//! ENTRY 010 011 0110
//! ```
//!
//! `TERM` lines give a label and the 1-based support; the next 2^k lines
//! are the matrix rows, entries encoded in the header class. `ENTRY x y v`
//! records set single entries of a row-stored Hamiltonian. A file holds
//! one kind of record, not both. Lines starting with `#` are comments.

use super::{ExactMatrix, ExplicitHam, HamError, LocalSumHam, LocalTerm, SparseHam, TermLabel};
use crate::basis;
use crate::exactnum::{decode, encode, fit_class, BitString, ClassDescriptor, ExactValue, Family};

#[derive(Clone, Debug)]
pub enum StoredHam {
    Local(LocalSumHam),
    Explicit(ExplicitHam),
}

impl SparseHam for StoredHam {
    fn qubits(&self) -> usize {
        match self {
            StoredHam::Local(h) => h.qubits(),
            StoredHam::Explicit(h) => h.qubits(),
        }
    }

    fn entry(&self, x: u64, y: u64) -> Result<ExactValue, HamError> {
        match self {
            StoredHam::Local(h) => h.entry(x, y),
            StoredHam::Explicit(h) => h.entry(x, y),
        }
    }

    fn row(&self, x: u64) -> Result<Vec<(u64, ExactValue)>, HamError> {
        match self {
            StoredHam::Local(h) => h.row(x),
            StoredHam::Explicit(h) => h.row(x),
        }
    }

    fn is_real(&self) -> bool {
        match self {
            StoredHam::Local(h) => h.is_real(),
            StoredHam::Explicit(h) => h.is_real(),
        }
    }

    fn locality(&self) -> Option<usize> {
        match self {
            StoredHam::Local(h) => h.locality(),
            StoredHam::Explicit(h) => h.locality(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HamFile {
    pub variant: String,
    pub class: ClassDescriptor,
    pub ham: StoredHam,
}

fn all_values(h: &StoredHam) -> Vec<ExactValue> {
    match h {
        StoredHam::Local(h) => h
            .terms()
            .iter()
            .flat_map(|t| (0..t.matrix.dim()).flat_map(move |r| t.matrix.row_entries(r).into_iter().map(|(_, v)| v)))
            .collect(),
        StoredHam::Explicit(h) => h.entries().map(|(_, _, v)| v.clone()).collect(),
    }
}

pub fn write_hamfile(h: &StoredHam, variant: &str) -> Result<String, HamError> {
    let vals = all_values(h);
    let family = if h.is_real() { Family::Q } else { Family::C };
    let cls = fit_class(&vals, family)?;
    let n = h.qubits();
    let loc = h.locality().map(|l| l.to_string()).unwrap_or_else(|| "-".into());
    let mut out = format!("HAM qubits={n} locality={loc} variant={variant} class={cls}\n");
    match h {
        StoredHam::Local(l) => {
            for t in l.terms() {
                let sup: Vec<String> = t.support.iter().map(|q| (q + 1).to_string()).collect();
                out.push_str(&format!("TERM {} {}\n", t.label, sup.join(",")));
                for r in 0..t.matrix.dim() {
                    let row: Vec<String> = (0..t.matrix.dim())
                        .map(|c| encode(t.matrix.get(r, c), &cls).map(|b| b.to_string()))
                        .collect::<Result<_, _>>()?;
                    out.push_str(&row.join(" "));
                    out.push('\n');
                }
            }
        }
        StoredHam::Explicit(e) => {
            for (x, y, v) in e.entries() {
                out.push_str(&format!("ENTRY {} {} {}\n", basis::format(x, n), basis::format(y, n), encode(v, &cls)?));
            }
        }
    }
    Ok(out)
}

fn perr(line: usize, msg: impl Into<String>) -> HamError {
    HamError::Parse { line, msg: msg.into() }
}

pub fn read_hamfile(text: &str) -> Result<HamFile, HamError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty file"))?;
    let mut fields = header.split_whitespace();
    if fields.next() != Some("HAM") {
        return Err(perr(hl, "expected HAM header"));
    }
    let (mut n, mut variant, mut cls) = (None, String::from("explicit"), None);
    for f in fields {
        let (k, v) = f.split_once('=').ok_or_else(|| perr(hl, format!("bad header field {f}")))?;
        match k {
            "qubits" => n = Some(v.parse::<usize>().map_err(|_| perr(hl, "bad qubit count"))?),
            "variant" => variant = v.to_string(),
            "class" => cls = Some(v.parse::<ClassDescriptor>().map_err(|e| perr(hl, e.to_string()))?),
            "locality" => {}
            _ => return Err(perr(hl, format!("unknown header field {k}"))),
        }
    }
    let n = n.ok_or_else(|| perr(hl, "missing qubits="))?;
    if n == 0 || n > basis::MAX_QUBITS {
        return Err(perr(hl, format!("qubit count {n} out of range")));
    }
    let cls = cls.ok_or_else(|| perr(hl, "missing class="))?;
    let value = |line: usize, s: &str| -> Result<ExactValue, HamError> {
        let b: BitString = s.parse().map_err(|e: crate::exactnum::ExactError| perr(line, e.to_string()))?;
        decode(&b, &cls).map_err(|e| perr(line, e.to_string()))
    };

    let mut terms = Vec::new();
    let mut explicit = ExplicitHam::new(n);
    let mut saw_entry = false;
    let mut pending = lines.peekable();
    while let Some((ln, l)) = pending.next() {
        let mut tok = l.split_whitespace();
        match tok.next() {
            Some("TERM") => {
                let label: TermLabel = tok.next().ok_or_else(|| perr(ln, "missing label"))?.parse().map_err(|e: String| perr(ln, e))?;
                let sup: Vec<usize> = tok
                    .next()
                    .ok_or_else(|| perr(ln, "missing support"))?
                    .split(',')
                    .map(|q| match q.parse::<usize>() {
                        Ok(q) if q >= 1 && q <= n => Ok(q - 1),
                        _ => Err(perr(ln, format!("bad qubit {q}"))),
                    })
                    .collect::<Result<_, _>>()?;
                if sup.len() > 8 {
                    return Err(perr(ln, "term support too large"));
                }
                let dim = 1 << sup.len();
                let mut rows = Vec::with_capacity(dim);
                for _ in 0..dim {
                    let (rl, row) = pending.next().ok_or_else(|| perr(ln, "term matrix cut short"))?;
                    let vals: Vec<ExactValue> = row.split_whitespace().map(|s| value(rl, s)).collect::<Result<_, _>>()?;
                    if vals.len() != dim {
                        return Err(perr(rl, format!("expected {dim} entries, found {}", vals.len())));
                    }
                    rows.push(vals);
                }
                let m = ExactMatrix::from_rows(rows).map_err(|e| perr(ln, e.to_string()))?;
                terms.push(LocalTerm::new(sup, m, label).map_err(|e| perr(ln, e.to_string()))?);
            }
            Some("ENTRY") => {
                let mut idx = || -> Result<u64, HamError> {
                    let s = tok.next().ok_or_else(|| perr(ln, "short ENTRY"))?;
                    match basis::parse(s) {
                        Some((x, len)) if len == n => Ok(x),
                        _ => Err(perr(ln, format!("bad basis string {s}"))),
                    }
                };
                let (x, y) = (idx()?, idx()?);
                let v = value(ln, tok.next().ok_or_else(|| perr(ln, "missing value"))?)?;
                explicit.set(x, y, v);
                saw_entry = true;
            }
            Some(other) => return Err(perr(ln, format!("unknown record {other}"))),
            None => {}
        }
    }
    let ham = match (terms.is_empty(), saw_entry) {
        (false, true) => return Err(perr(hl, "file mixes TERM and ENTRY records")),
        (false, false) => StoredHam::Local(LocalSumHam::new(n, terms)?),
        _ => StoredHam::Explicit(explicit),
    };
    Ok(HamFile { variant, class: cls, ham })
}
