//! Query-level Hamiltonian transforms: complex → real doubling, real →
//! fixed-node, and the sign gauge that makes a fixed-node operator
//! stoquastic.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::basis;
use crate::exactnum::ExactValue;
use crate::ham::{check_index, sum, HamError, HamRef, SparseHam};
use crate::qstate::StateRef;

/// Ĥ on n+1 qubits, the extra qubit last: Ĥ(x‖u, y‖v) is Re H(x,y) on
/// the diagonal blocks, −Im H(x,y) for (u,v) = (0,1) and +Im H(x,y) for
/// (1,0).
pub struct RealDoubled {
    h: HamRef,
}

pub fn complexify_to_real(h: HamRef) -> Result<RealDoubled, HamError> {
    if h.qubits() + 1 > basis::MAX_QUBITS {
        return Err(HamError::Invalid("no room for the extra qubit".into()));
    }
    Ok(RealDoubled { h })
}

impl RealDoubled {
    pub fn inner(&self) -> &HamRef {
        &self.h
    }
}

fn block(e: &ExactValue, u: u64, v: u64) -> Result<ExactValue, HamError> {
    Ok(match (u, v) {
        (0, 1) => e.im()?.neg()?,
        (1, 0) => e.im()?,
        _ => e.re()?,
    })
}

impl SparseHam for RealDoubled {
    fn qubits(&self) -> usize {
        self.h.qubits() + 1
    }

    fn entry(&self, x: u64, y: u64) -> Result<ExactValue, HamError> {
        check_index(self, x)?;
        check_index(self, y)?;
        let e = self.h.entry(x >> 1, y >> 1)?;
        block(&e, x & 1, y & 1)
    }

    fn row(&self, x: u64) -> Result<Vec<(u64, ExactValue)>, HamError> {
        check_index(self, x)?;
        let u = x & 1;
        let mut out = Vec::new();
        for (y, e) in self.h.row(x >> 1)? {
            for v in [0, 1] {
                let b = block(&e, u, v)?;
                if !b.is_zero() {
                    out.push(((y << 1) | v, b));
                }
            }
        }
        Ok(out)
    }

    fn is_real(&self) -> bool {
        true
    }

    fn locality(&self) -> Option<usize> {
        self.h.locality().map(|k| k + 1)
    }
}

/// Which side of the fixed-node partition an off-diagonal pair falls on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeClass {
    /// α(x)H(x,y)α(y) > 0: dropped and folded into the diagonal.
    Positive,
    /// Product ≤ 0: kept.
    Negative,
}

fn real_amp(xi: &StateRef, x: u64) -> Result<ExactValue, HamError> {
    let a = xi.query(x)?;
    if !a.is_zero() && !a.is_real() {
        return Err(HamError::Invalid(format!("guiding amplitude at {x:#b} is not real")));
    }
    Ok(a)
}

fn sign(v: &ExactValue) -> Ordering {
    v.real_sign().unwrap_or(Ordering::Equal)
}

/// Fixed-node operator F(ξ, H) for real H and real ξ.
pub struct FixedNode {
    h: HamRef,
    xi: StateRef,
}

pub fn fixed_node(h: HamRef, xi: StateRef) -> Result<FixedNode, HamError> {
    if !h.is_real() {
        return Err(HamError::Invalid("fixed-node needs a real Hamiltonian".into()));
    }
    if xi.arity() != h.qubits() {
        return Err(HamError::Invalid(format!("{}-qubit state for a {}-qubit Hamiltonian", xi.arity(), h.qubits())));
    }
    Ok(FixedNode { h, xi })
}

impl FixedNode {
    pub fn classify(&self, x: u64, y: u64, hxy: &ExactValue) -> Result<NodeClass, HamError> {
        let p = sign(&real_amp(&self.xi, x)?) as i8 * sign(hxy) as i8 * sign(&real_amp(&self.xi, y)?) as i8;
        Ok(if p > 0 { NodeClass::Positive } else { NodeClass::Negative })
    }

    fn diagonal(&self, x: u64, row: &[(u64, ExactValue)]) -> Result<ExactValue, HamError> {
        let ax = real_amp(&self.xi, x)?;
        if ax.is_zero() {
            return Err(HamError::ZeroAmplitudeVisited(x));
        }
        let mut acc = ExactValue::zero();
        for (y, hxy) in row {
            if *y == x {
                acc = sum(&acc, hxy)?;
                continue;
            }
            let ay = real_amp(&self.xi, *y)?;
            let p = sign(&ax) as i8 * sign(hxy) as i8 * sign(&ay) as i8;
            if p > 0 {
                acc = sum(&acc, &ay.div(&ax)?.mul(hxy)?)?;
            }
        }
        Ok(acc)
    }
}

impl SparseHam for FixedNode {
    fn qubits(&self) -> usize {
        self.h.qubits()
    }

    fn entry(&self, x: u64, y: u64) -> Result<ExactValue, HamError> {
        if x == y {
            let row = self.h.row(x)?;
            return self.diagonal(x, &row);
        }
        let hxy = self.h.entry(x, y)?;
        if hxy.is_zero() {
            return Ok(hxy);
        }
        Ok(match self.classify(x, y, &hxy)? {
            NodeClass::Positive => ExactValue::zero(),
            NodeClass::Negative => hxy,
        })
    }

    fn row(&self, x: u64) -> Result<Vec<(u64, ExactValue)>, HamError> {
        let row = self.h.row(x)?;
        let d = self.diagonal(x, &row)?;
        let mut out = Vec::with_capacity(row.len() + 1);
        let mut placed = d.is_zero();
        for (y, hxy) in row {
            if y == x {
                continue;
            }
            if !placed && y > x {
                out.push((x, d.clone()));
                placed = true;
            }
            if self.classify(x, y, &hxy)? == NodeClass::Negative {
                out.push((y, hxy));
            }
        }
        if !placed {
            out.push((x, d));
        }
        Ok(out)
    }

    fn is_real(&self) -> bool {
        true
    }
}

/// sgn(α(x))·F(x,y)·sgn(α(y)).
pub struct SignGauged {
    f: HamRef,
    xi: StateRef,
}

pub fn sign_gauge(f: HamRef, xi: StateRef) -> Result<SignGauged, HamError> {
    if xi.arity() != f.qubits() {
        return Err(HamError::Invalid(format!("{}-qubit state for a {}-qubit Hamiltonian", xi.arity(), f.qubits())));
    }
    Ok(SignGauged { f, xi })
}

impl SignGauged {
    fn flips(&self, x: u64) -> Result<bool, HamError> {
        let a = real_amp(&self.xi, x)?;
        match sign(&a) {
            Ordering::Equal => Err(HamError::ZeroAmplitudeVisited(x)),
            s => Ok(s == Ordering::Less),
        }
    }
}

impl SparseHam for SignGauged {
    fn qubits(&self) -> usize {
        self.f.qubits()
    }

    fn entry(&self, x: u64, y: u64) -> Result<ExactValue, HamError> {
        let e = self.f.entry(x, y)?;
        if e.is_zero() || self.flips(x)? == self.flips(y)? {
            Ok(e)
        } else {
            Ok(e.neg()?)
        }
    }

    fn row(&self, x: u64) -> Result<Vec<(u64, ExactValue)>, HamError> {
        let fx = self.flips(x)?;
        self.f
            .row(x)?
            .into_iter()
            .map(|(y, e)| Ok((y, if fx == self.flips(y)? { e } else { e.neg()? })))
            .collect()
    }

    fn is_real(&self) -> bool {
        self.f.is_real()
    }

    fn locality(&self) -> Option<usize> {
        self.f.locality()
    }
}

/// Convenience for chaining transforms.
pub fn arc<H: SparseHam + 'static>(h: H) -> HamRef {
    Arc::new(h)
}
