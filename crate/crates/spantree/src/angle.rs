//! Exact angles as reduced rational fractions of a full turn.
//!
//! Zero-eigenvalue detection and conjugation symmetry checks are decided on
//! these rationals, never on floating point.

/// An angle `2*pi*num/den`, stored reduced with `0 <= num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TurnAngle {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl TurnAngle {
    /// Reduces `p/q` turns modulo one full turn. `q` must be nonzero.
    pub fn new(p: u64, q: u64) -> Self {
        assert!(q > 0, "angle denominator must be positive");
        let p = p % q;
        if p == 0 {
            return TurnAngle { num: 0, den: 1 };
        }
        let g = gcd(p, q);
        TurnAngle { num: p / g, den: q / g }
    }

    pub const ZERO: TurnAngle = TurnAngle { num: 0, den: 1 };

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// True exactly when the angle is `0 mod 2*pi`.
    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// The conjugate angle `-2*pi*num/den mod 2*pi`.
    pub fn conjugate(&self) -> Self {
        if self.num == 0 {
            *self
        } else {
            TurnAngle { num: self.den - self.num, den: self.den }
        }
    }

    /// `cos(2*pi*num/den)` when it is an exact dyadic rational, i.e. for
    /// denominators 1, 2, 3, 4 and 6. Returned as (numerator, log2 of
    /// denominator) so callers can build exact floats.
    pub fn cos_exact(&self) -> Option<(i64, u32)> {
        match self.den {
            1 => Some((1, 0)),
            2 => Some((-1, 0)),
            3 => Some((-1, 1)),
            4 => Some((0, 0)),
            6 => Some((1, 1)),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::fmt::Display for TurnAngle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}
