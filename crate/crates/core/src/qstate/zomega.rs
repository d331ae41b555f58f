use crate::exactnum::{Algebraic, Zeta8, Q};

/// Element of ℤ[ω], ω = e^{iπ/4}, as coefficients of 1, ω, ω², ω³
/// (ω⁴ = −1). Branch weights while pulling a bra back through a
/// Clifford+T circuit stay in this ring.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ZOmega(pub [i64; 4]);

impl ZOmega {
    pub const ONE: ZOmega = ZOmega([1, 0, 0, 0]);

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }

    /// Multiplies by ω^s.
    pub fn rotate(self, s: u8) -> ZOmega {
        let mut out = [0i64; 4];
        for (j, &c) in self.0.iter().enumerate() {
            let e = (j + s as usize) % 8;
            if e < 4 {
                out[e] += c;
            } else {
                out[e - 4] -= c;
            }
        }
        ZOmega(out)
    }

    pub fn neg(self) -> ZOmega {
        ZOmega(self.0.map(|c| -c))
    }

    pub fn add(self, o: ZOmega) -> ZOmega {
        ZOmega([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2], self.0[3] + o.0[3]])
    }

    pub fn to_algebraic(self) -> Algebraic {
        let mut z = Zeta8::zero();
        for (j, &c) in self.0.iter().enumerate() {
            if c != 0 {
                z = z.add(&Zeta8::omega(j as u8).scale(&Q::from_integer(c.into())));
            }
        }
        Algebraic::from_zeta(z)
    }
}
