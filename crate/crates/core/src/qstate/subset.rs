use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{check_arity, product_class, AmplitudeQuery, ScaleClass, StateError, StateRef};
use crate::basis;
use crate::circuit::{CircuitDescriptor, QubitRole};
use crate::exactnum::{ClassDescriptor, ExactValue, Family, Flag};

type Pred = Arc<dyn Fn(u64) -> bool + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Explicit(BTreeSet<u64>),
    /// Per qubit: fixed to a bit, or free.
    Product(Vec<Option<bool>>),
    Predicate { f: Pred, size: Option<BigUint> },
}

/// A set S of n-bit strings, given by listing, by per-qubit constraints,
/// or by a membership predicate.
#[derive(Clone)]
pub struct SubsetSpec {
    n: usize,
    kind: Kind,
}

impl fmt::Debug for SubsetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Explicit(s) => write!(f, "SubsetSpec({} bits, {} members)", self.n, s.len()),
            Kind::Product(c) => write!(f, "SubsetSpec(product {:?})", c),
            Kind::Predicate { size, .. } => write!(f, "SubsetSpec(predicate, size {:?})", size),
        }
    }
}

impl SubsetSpec {
    pub fn explicit(n: usize, members: impl IntoIterator<Item = u64>) -> Self {
        SubsetSpec { n, kind: Kind::Explicit(members.into_iter().collect()) }
    }

    pub fn product(constraints: Vec<Option<bool>>) -> Self {
        SubsetSpec { n: constraints.len(), kind: Kind::Product(constraints) }
    }

    /// Membership by predicate; `size` is |S| if known.
    pub fn predicate(n: usize, f: impl Fn(u64) -> bool + Send + Sync + 'static, size: Option<BigUint>) -> Self {
        SubsetSpec { n, kind: Kind::Predicate { f: Arc::new(f), size } }
    }

    pub fn single(n: usize, x: u64) -> Self {
        SubsetSpec::explicit(n, [x])
    }

    /// {x} × {ξ} × {0}^m × {0,1}^p laid out by the circuit's qubit roles.
    pub fn mpq_initial(c: &CircuitDescriptor, x: u64, xi: u64) -> Self {
        let r = c.regs;
        let cons = c
            .roles()
            .into_iter()
            .map(|role| match role {
                QubitRole::Input(i) => Some(basis::bit(x, r.n, i)),
                QubitRole::Proof(i) => Some(basis::bit(xi, r.w, i)),
                QubitRole::Zero => Some(false),
                QubitRole::Plus => None,
            })
            .collect();
        SubsetSpec::product(cons)
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn contains(&self, x: u64) -> bool {
        match &self.kind {
            Kind::Explicit(s) => s.contains(&x),
            Kind::Product(c) => c.iter().enumerate().all(|(q, con)| match con {
                Some(b) => basis::bit(x, self.n, q) == *b,
                None => true,
            }),
            Kind::Predicate { f, .. } => f(x),
        }
    }

    pub fn cardinality(&self) -> Option<BigUint> {
        match &self.kind {
            Kind::Explicit(s) => Some(BigUint::from(s.len())),
            Kind::Product(c) => Some(BigUint::one() << c.iter().filter(|x| x.is_none()).count()),
            Kind::Predicate { size, .. } => size.clone(),
        }
    }

    /// Lists the members when there are at most `limit` of them (or, for a
    /// predicate, when the whole cube has at most `limit` strings).
    pub fn members(&self, limit: usize) -> Option<Vec<u64>> {
        match &self.kind {
            Kind::Explicit(s) => (s.len() <= limit).then(|| s.iter().copied().collect()),
            Kind::Product(c) => {
                let free: Vec<usize> = (0..self.n).filter(|&q| c[q].is_none()).collect();
                if free.len() >= 63 || (1usize << free.len()) > limit {
                    return None;
                }
                let mut base = 0u64;
                for (q, con) in c.iter().enumerate() {
                    if *con == Some(true) {
                        base = basis::with_bit(base, self.n, q, true);
                    }
                }
                Some(
                    (0..1u64 << free.len())
                        .map(|bits| {
                            free.iter().enumerate().fold(base, |acc, (i, &q)| {
                                basis::with_bit(acc, self.n, q, (bits >> (free.len() - 1 - i)) & 1 == 1)
                            })
                        })
                        .collect(),
                )
            }
            Kind::Predicate { f, .. } => {
                if self.n >= 63 || (1usize << self.n) > limit {
                    return None;
                }
                Some((0..1u64 << self.n).filter(|&x| f(x)).collect())
            }
        }
    }
}

/// |S⟩ = Σ_{s∈S} |s⟩/√|S|. Membership mode answers 1 on members (scale
/// √|S|); exact mode answers √(1/|S|) (scale 1).
pub struct SubsetState {
    set: SubsetSpec,
    exact: bool,
    amp: ExactValue,
}

pub fn subset_query(set: SubsetSpec, exact: bool) -> Result<SubsetState, StateError> {
    let amp = if exact {
        let size = set
            .cardinality()
            .ok_or_else(|| StateError::Invalid("exact amplitudes need |S|".into()))?;
        if size.is_zero() {
            return Err(StateError::EmptySubset);
        }
        ExactValue::sqrt_of(&BigRational::new(1.into(), size.into()))?
    } else {
        ExactValue::one()
    };
    Ok(SubsetState { set, exact, amp })
}

impl SubsetState {
    pub fn set(&self) -> &SubsetSpec {
        &self.set
    }
}

impl AmplitudeQuery for SubsetState {
    fn arity(&self) -> usize {
        self.set.n
    }

    fn query(&self, x: u64) -> Result<ExactValue, StateError> {
        check_arity(self, x)?;
        Ok(if self.set.contains(x) { self.amp.clone() } else { ExactValue::zero() })
    }

    fn scale(&self) -> ScaleClass {
        if self.exact {
            return ScaleClass::Exact(ExactValue::one());
        }
        match self.set.cardinality() {
            Some(s) => ScaleClass::Exact(
                ExactValue::sqrt_of(&BigRational::from_integer(s.into())).expect("cardinality is non-negative"),
            ),
            None => ScaleClass::AtMost { log2: (self.set.n as u32).div_ceil(2) },
        }
    }

    fn codomain(&self) -> ClassDescriptor {
        if self.exact {
            let bits = self.set.cardinality().map(|s| s.bits() as u32).unwrap_or(self.set.n as u32 + 1);
            ClassDescriptor::new(Family::QPlus, bits.max(1)).with_flag(Flag::Sqrt(1))
        } else {
            ClassDescriptor::new(Family::N, 1)
        }
    }

    fn support_hint(&self) -> Option<Vec<u64>> {
        self.set.members(1 << 16)
    }
}

/// (a ⊗ b)(x‖y) = a(x)·b(y).
pub struct TensorState {
    a: StateRef,
    b: StateRef,
}

pub fn tensor(a: StateRef, b: StateRef) -> TensorState {
    TensorState { a, b }
}

/// a ⊗ |0^m⟩.
pub fn pad_zeros(a: StateRef, m: usize) -> TensorState {
    let z: StateRef = Arc::new(subset_query(SubsetSpec::single(m, 0), false).expect("singleton"));
    tensor(a, z)
}

impl AmplitudeQuery for TensorState {
    fn arity(&self) -> usize {
        self.a.arity() + self.b.arity()
    }

    fn query(&self, z: u64) -> Result<ExactValue, StateError> {
        check_arity(self, z)?;
        let (x, y) = basis::split(z, self.b.arity());
        let ax = self.a.query(x)?;
        if ax.is_zero() {
            return Ok(ExactValue::zero());
        }
        Ok(ax.mul(&self.b.query(y)?)?)
    }

    fn scale(&self) -> ScaleClass {
        self.a.scale().times(&self.b.scale())
    }

    fn codomain(&self) -> ClassDescriptor {
        product_class(&self.a.codomain(), &self.b.codomain())
    }

    fn support_hint(&self) -> Option<Vec<u64>> {
        let sa = self.a.support_hint()?;
        let sb = self.b.support_hint()?;
        if sa.len().saturating_mul(sb.len()) > 1 << 20 {
            return None;
        }
        let nb = self.b.arity();
        Some(sa.iter().flat_map(|&x| sb.iter().map(move |&y| basis::concat(x, y, nb))).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{encode, rat};

    #[test]
    fn membership_and_exact_modes() {
        let s = SubsetSpec::explicit(2, [0b00, 0b11]);
        let m = subset_query(s.clone(), false).unwrap();
        assert_eq!(m.query(0b11).unwrap(), ExactValue::one());
        assert!(m.query(0b01).unwrap().is_zero());
        assert_eq!(encode(&m.query(0b11).unwrap(), &m.codomain()).unwrap().to_string(), "1");

        let e = subset_query(s, true).unwrap();
        let v = e.query(0).unwrap();
        assert_eq!(v.mul(&v).unwrap().as_rational(), Some(rat(1, 2)));
        let bits = encode(&v, &e.codomain()).unwrap();
        // sqrt flag, then 1/2 in two-bit blocks
        assert_eq!(bits.to_string(), "10110");
    }

    #[test]
    fn product_sets_enumerate() {
        let s = SubsetSpec::product(vec![Some(true), None, Some(false), None]);
        let mut m = s.members(100).unwrap();
        m.sort();
        assert_eq!(m, vec![0b1000, 0b1001, 0b1100, 0b1101]);
        assert_eq!(s.cardinality(), Some(BigUint::from(4u32)));
        assert!(s.contains(0b1101) && !s.contains(0b0101));
    }

    #[test]
    fn tensor_and_padding() {
        let a: StateRef = Arc::new(subset_query(SubsetSpec::explicit(1, [1]), false).unwrap());
        let t = pad_zeros(a, 2);
        assert_eq!(t.arity(), 3);
        assert_eq!(t.query(0b100).unwrap(), ExactValue::one());
        assert!(t.query(0b101).unwrap().is_zero());
        assert!(t.query(0b1000).is_err());
    }
}
