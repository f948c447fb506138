use alloc::string::String;
use alloc::vec::Vec;

use super::gf2::BitRow;
use crate::{Error, Result};

/// `i^phase · P₁ ⊗ … ⊗ P_n` with letters from `(x, z)`: `(1,0)=X`, `(0,1)=Z`, `(1,1)=Y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: BitRow,
    z: BitRow,
    /// Exponent of `i`, in `0..4`.
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self { n, x: BitRow::zeros(n), z: BitRow::zeros(n), phase: 0 }
    }

    pub fn single(n: usize, qubit: usize, letter: char) -> Result<Self> {
        let mut p = Self::identity(n);
        if qubit >= n {
            return Err(Error::TargetOutOfRange { target: qubit, n });
        }
        p.set_letter(qubit, letter)?;
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn set_phase(&mut self, phase: u8) {
        self.phase = phase & 3;
    }

    pub fn x(&self, q: usize) -> bool {
        self.x.get(q)
    }

    pub fn z(&self, q: usize) -> bool {
        self.z.get(q)
    }

    pub fn x_bits(&self) -> &BitRow {
        &self.x
    }

    pub fn z_bits(&self) -> &BitRow {
        &self.z
    }

    pub(crate) fn set_x(&mut self, q: usize, v: bool) {
        self.x.set(q, v);
    }

    pub(crate) fn set_z(&mut self, q: usize, v: bool) {
        self.z.set(q, v);
    }

    /// Flips the sign.
    pub(crate) fn negate(&mut self) {
        self.phase = (self.phase + 2) & 3;
    }

    pub(crate) fn negate_if(&mut self, v: bool) {
        if v {
            self.negate();
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    pub fn letter(&self, q: usize) -> char {
        match (self.x(q), self.z(q)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    fn set_letter(&mut self, q: usize, c: char) -> Result<()> {
        let (x, z) = match c {
            'I' | '_' => (false, false),
            'X' => (true, false),
            'Y' => (true, true),
            'Z' => (false, true),
            other => return Err(Error::InvalidRegion(alloc::format!("unknown Pauli letter {other:?}"))),
        };
        self.x.set(q, x);
        self.z.set(q, z);
        Ok(())
    }

    /// Symplectic product: `true` when the two strings anticommute.
    pub fn anticommutes(&self, other: &PauliString) -> bool {
        (self.x.and_count(&other.z) + self.z.and_count(&other.x)) % 2 == 1
    }

    /// `self ← self · other`.
    pub fn mul_assign_right(&mut self, other: &PauliString) {
        // i-exponent picked up when multiplying single-qubit letters P_a · P_b
        let mut e: i32 = 0;
        for q in 0..self.n {
            let (x1, z1, x2, z2) = (self.x(q), self.z(q), other.x(q), other.z(q));
            e += letter_product_exponent(x1, z1, x2, z2);
        }
        self.phase = ((self.phase as i32 + other.phase as i32 + e).rem_euclid(4)) as u8;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// Parses `+XYZI`, `-ZZ`, `XX`; a leading U+2212 minus sign is accepted, `i` phases too.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, body) = parse_sign(s);
        let letters: Vec<char> = body.chars().collect();
        let mut p = Self::identity(letters.len());
        for (q, &c) in letters.iter().enumerate() {
            p.set_letter(q, c)?;
        }
        p.phase = phase;
        Ok(p)
    }

    /// ASCII text form, e.g. `+XXI` or `-iZ`.
    pub fn to_text(&self) -> String {
        let mut s = String::from(match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        });
        for q in 0..self.n {
            s.push(self.letter(q));
        }
        s
    }
}

fn parse_sign(s: &str) -> (u8, &str) {
    let (neg, rest) = if let Some(r) = s.strip_prefix('-') {
        (true, r)
    } else if let Some(r) = s.strip_prefix('\u{2212}') {
        (true, r)
    } else if let Some(r) = s.strip_prefix('+') {
        (false, r)
    } else {
        (false, s)
    };
    let (imag, rest) = match rest.strip_prefix('i') {
        Some(r) => (true, r),
        None => (false, rest),
    };
    let phase = match (neg, imag) {
        (false, false) => 0,
        (false, true) => 1,
        (true, false) => 2,
        (true, true) => 3,
    };
    (phase, rest)
}

/// Exponent `e` with `P(x1,z1) · P(x2,z2) = i^e P(x1^x2, z1^z2)` for single-qubit letters.
fn letter_product_exponent(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    match (x1, z1) {
        (false, false) => 0,
        // Y · P
        (true, true) => z2 as i32 - x2 as i32,
        // X · P
        (true, false) => z2 as i32 * (2 * x2 as i32 - 1),
        // Z · P
        (false, true) => x2 as i32 * (1 - 2 * z2 as i32),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_of_letters() {
        // X·Y = iZ, Y·X = -iZ, Z·X = iY, X·Z = -iY
        let mut x = PauliString::parse("X").unwrap();
        x.mul_assign_right(&PauliString::parse("Y").unwrap());
        assert_eq!(x.to_text(), "+iZ");
        let mut y = PauliString::parse("Y").unwrap();
        y.mul_assign_right(&PauliString::parse("X").unwrap());
        assert_eq!(y.to_text(), "-iZ");
        let mut z = PauliString::parse("Z").unwrap();
        z.mul_assign_right(&PauliString::parse("X").unwrap());
        assert_eq!(z.to_text(), "+iY");
        let mut x = PauliString::parse("X").unwrap();
        x.mul_assign_right(&PauliString::parse("Z").unwrap());
        assert_eq!(x.to_text(), "-iY");
    }

    #[test]
    fn text_round_trip() {
        for s in ["+XXI", "-ZZI", "+iY", "-iXZ", "+IIII"] {
            assert_eq!(PauliString::parse(s).unwrap().to_text(), s);
        }
        assert_eq!(PauliString::parse("\u{2212}ZZI").unwrap().to_text(), "-ZZI");
        assert_eq!(PauliString::parse("XY").unwrap().to_text(), "+XY");
    }

    #[test]
    fn commutation() {
        let a = PauliString::parse("XX").unwrap();
        let b = PauliString::parse("ZZ").unwrap();
        let c = PauliString::parse("ZI").unwrap();
        assert!(!a.anticommutes(&b));
        assert!(a.anticommutes(&c));
    }
}
