use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ExactError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Naturals, p bits.
    N,
    /// Non-negative rationals, numerator then denominator.
    QPlus,
    /// Signed rationals: two sign bits, then numerator and denominator.
    Q,
    /// Complex: a signed rational real part followed by the imaginary part.
    C,
}

impl Family {
    pub fn body_width(self, p: u32) -> usize {
        let p = p as usize;
        match self {
            Family::N => p,
            Family::QPlus => 2 * p,
            Family::Q => 2 * p + 2,
            Family::C => 4 * p + 4,
        }
    }

    /// Field widths of the body, most significant first.
    pub fn body_layout(self, p: u32) -> Vec<usize> {
        let p = p as usize;
        match self {
            Family::N => vec![p],
            Family::QPlus => vec![p, p],
            Family::Q => vec![1, 1, p, p],
            Family::C => vec![1, 1, p, p, 1, 1, p, p],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::N => "N",
            Family::QPlus => "Q+",
            Family::Q => "Q",
            Family::C => "C",
        })
    }
}

impl FromStr for Family {
    type Err = ExactError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "N" | "n" => Ok(Family::N),
            "Q+" | "q+" | "QPlus" => Ok(Family::QPlus),
            "Q" | "q" => Ok(Family::Q),
            "C" | "c" => Ok(Family::C),
            other => Err(ExactError::Parse(format!("unknown family {other}"))),
        }
    }
}

/// Algebraic characteristics written ahead of the number body.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flag {
    /// Exponent s of ω^s, three bits.
    Omega,
    /// Power h of (1/√2)^h in the given number of bits.
    SqrtHalf(u32),
    /// Square-root marker: one bit covering both components, or (complex
    /// only) two bits, real then imaginary.
    Sqrt(u32),
}

impl Flag {
    pub fn width(self) -> usize {
        match self {
            Flag::Omega => 3,
            Flag::SqrtHalf(w) | Flag::Sqrt(w) => w as usize,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassDescriptor {
    pub family: Family,
    pub p: u32,
    pub flags: Vec<Flag>,
}

impl ClassDescriptor {
    pub fn new(family: Family, p: u32) -> Self {
        ClassDescriptor { family, p, flags: Vec::new() }
    }

    pub fn with_flag(mut self, f: Flag) -> Self {
        self.flags.push(f);
        self
    }

    pub fn validate(&self) -> Result<(), ExactError> {
        if self.p == 0 {
            return Err(ExactError::BadClass("p must be at least 1".into()));
        }
        let mut seen = Vec::new();
        for f in &self.flags {
            let kind = std::mem::discriminant(f);
            if seen.contains(&kind) {
                return Err(ExactError::BadClass("flag listed twice".into()));
            }
            seen.push(kind);
            match *f {
                Flag::Sqrt(2) if self.family != Family::C => {
                    return Err(ExactError::BadClass("two square-root bits need the complex family".into()))
                }
                Flag::Sqrt(w) if w != 1 && w != 2 => {
                    return Err(ExactError::BadClass("square-root flag is 1 or 2 bits".into()))
                }
                Flag::SqrtHalf(0) => return Err(ExactError::BadClass("empty (1/√2) flag".into())),
                _ => {}
            }
        }
        Ok(())
    }

    pub fn has_omega(&self) -> bool {
        self.flags.contains(&Flag::Omega)
    }

    pub fn sqrt_half_width(&self) -> Option<u32> {
        self.flags.iter().find_map(|f| match f {
            Flag::SqrtHalf(w) => Some(*w),
            _ => None,
        })
    }

    pub fn sqrt_width(&self) -> Option<u32> {
        self.flags.iter().find_map(|f| match f {
            Flag::Sqrt(w) => Some(*w),
            _ => None,
        })
    }

    pub fn width(&self) -> usize {
        self.flags.iter().map(|f| f.width()).sum::<usize>() + self.family.body_width(self.p)
    }

    /// Field widths for the whole string: one group per flag, then the body.
    pub fn layout(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.flags.iter().map(|f| f.width()).collect();
        v.extend(self.family.body_layout(self.p));
        v
    }

    /// Class that holds exact quotients of two members of this class.
    pub fn ratio_class(&self) -> Result<ClassDescriptor, ExactError> {
        if self.flags.iter().any(|f| *f != Flag::Omega) {
            return Err(ExactError::UnsupportedRatio);
        }
        let (family, p) = match self.family {
            Family::N => (Family::QPlus, self.p),
            Family::QPlus => (Family::QPlus, 2 * self.p),
            Family::Q => (Family::Q, 2 * self.p),
            Family::C => (Family::C, 8 * self.p + 2),
        };
        Ok(ClassDescriptor { family, p, flags: self.flags.clone() })
    }
}

impl fmt::Display for ClassDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.family, self.p)?;
        if !self.flags.is_empty() {
            let names: Vec<String> = self
                .flags
                .iter()
                .map(|fl| match fl {
                    Flag::Omega => "omega".to_string(),
                    Flag::SqrtHalf(w) => format!("sqrthalf:{w}"),
                    Flag::Sqrt(w) => format!("sqrt:{w}"),
                })
                .collect();
            write!(f, "[{}]", names.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for ClassDescriptor {
    type Err = ExactError;

    /// Reads the display form, e.g. `C_3` or `Q+_4[omega,sqrthalf:2]`.
    fn from_str(s: &str) -> Result<Self, ExactError> {
        let s = s.trim();
        let (head, flags) = match s.split_once('[') {
            Some((h, rest)) => (h, rest.strip_suffix(']').ok_or_else(|| ExactError::Parse(s.into()))?),
            None => (s, ""),
        };
        let (fam, p) = head.split_once('_').ok_or_else(|| ExactError::Parse(s.into()))?;
        let cls = ClassDescriptor {
            family: fam.parse()?,
            p: p.parse().map_err(|_| ExactError::Parse(s.into()))?,
            flags: parse_flags(flags)?,
        };
        cls.validate()?;
        Ok(cls)
    }
}

/// Parses a comma separated flag list such as `omega,sqrthalf:2,sqrt:1`.
pub fn parse_flags(s: &str) -> Result<Vec<Flag>, ExactError> {
    let mut out = Vec::new();
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (name, w) = match tok.split_once(':') {
            Some((n, w)) => (n, Some(w.parse::<u32>().map_err(|_| ExactError::Parse(tok.into()))?)),
            None => (tok, None),
        };
        out.push(match name {
            "omega" => Flag::Omega,
            "sqrthalf" => Flag::SqrtHalf(w.unwrap_or(1)),
            "sqrt" => Flag::Sqrt(w.unwrap_or(1)),
            _ => return Err(ExactError::Parse(format!("unknown flag {tok}"))),
        });
    }
    Ok(out)
}

/// A string of bits, most significant first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BitString(pub Vec<bool>);

impl BitString {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Writes the string in space separated fields of the given widths.
    pub fn grouped(&self, layout: &[usize]) -> String {
        let mut out = Vec::new();
        let mut at = 0;
        for &w in layout {
            let end = (at + w).min(self.0.len());
            out.push(self.0[at..end].iter().map(|&b| if b { '1' } else { '0' }).collect::<String>());
            at = end;
        }
        if at < self.0.len() {
            out.push(self.0[at..].iter().map(|&b| if b { '1' } else { '0' }).collect());
        }
        out.join(" ")
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = ExactError;

    /// Whitespace is ignored, so grouped output parses back.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(ExactError::Parse(format!("not a bit: {c}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths_per_family() {
        for p in 1..=16u32 {
            let pu = p as usize;
            assert_eq!(ClassDescriptor::new(Family::N, p).width(), pu);
            assert_eq!(ClassDescriptor::new(Family::QPlus, p).width(), 2 * pu);
            assert_eq!(ClassDescriptor::new(Family::Q, p).width(), 2 * pu + 2);
            assert_eq!(ClassDescriptor::new(Family::C, p).width(), 4 * pu + 4);
            let w = ClassDescriptor::new(Family::C, p).with_flag(Flag::Omega);
            assert_eq!(w.width(), 4 * pu + 7);
        }
    }

    #[test]
    fn flag_lists_parse() {
        let f = parse_flags("omega, sqrthalf:2,sqrt").unwrap();
        assert_eq!(f, vec![Flag::Omega, Flag::SqrtHalf(2), Flag::Sqrt(1)]);
        assert!(parse_flags("cube").is_err());
    }

    #[test]
    fn grouped_bits_parse_back() {
        let b: BitString = "1 0 110 011".parse().unwrap();
        assert_eq!(b.grouped(&[1, 1, 3, 3]), "1 0 110 011");
        assert_eq!(b.to_string(), "10110011");
    }
}
