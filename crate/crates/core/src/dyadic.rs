//! Carry-free binary arithmetic on dyadic rationals.
//!
//! A [`DyadicNumber`] stores `sign * mantissa / 2^frac_depth` with an integer
//! mantissa, so the binary expansion is finite and dyadic addition is a plain
//! XOR of aligned mantissas.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;

use crate::error::{Error, Result};

/// Deepest fractional resolution accepted by [`to_dyadic`].
pub const MAX_FRAC_DEPTH: u32 = 64;

#[derive(Clone, Copy, Debug)]
pub struct DyadicNumber {
    negative: bool,
    mantissa: u128,
    frac_depth: u32,
}

impl DyadicNumber {
    pub const ZERO: DyadicNumber = DyadicNumber {
        negative: false,
        mantissa: 0,
        frac_depth: 0,
    };

    /// `mantissa / 2^frac_depth`.
    pub fn from_parts(mantissa: u128, frac_depth: u32) -> Self {
        assert!(frac_depth <= MAX_FRAC_DEPTH, "frac_depth {frac_depth} too deep");
        DyadicNumber {
            negative: false,
            mantissa,
            frac_depth,
        }
    }

    pub fn from_int(k: u64) -> Self {
        Self::from_parts(k as u128, 0)
    }

    /// Grid point `j / 2^depth`.
    pub fn grid_point(j: u64, depth: u32) -> Self {
        Self::from_parts(j as u128, depth)
    }

    pub fn mantissa(&self) -> u128 {
        self.mantissa
    }

    pub fn frac_depth(&self) -> u32 {
        self.frac_depth
    }

    pub fn is_negative(&self) -> bool {
        self.negative && self.mantissa != 0
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0
    }

    /// Absolute value.
    pub fn abs(&self) -> Self {
        DyadicNumber {
            negative: false,
            ..*self
        }
    }

    /// Exponents `i` with `x_i = 1`, ascending.
    pub fn bits(&self) -> Vec<i32> {
        let mut out = Vec::new();
        let mut m = self.mantissa;
        while m != 0 {
            let tz = m.trailing_zeros();
            out.push(tz as i32 - self.frac_depth as i32);
            m &= m - 1;
        }
        out
    }

    /// Binary digit `x_i`.
    pub fn bit(&self, exponent: i32) -> u8 {
        let pos = exponent + self.frac_depth as i32;
        if !(0..128).contains(&pos) {
            return 0;
        }
        ((self.mantissa >> pos) & 1) as u8
    }

    pub fn value(&self) -> f64 {
        let v = self.mantissa as f64 / 2f64.powi(self.frac_depth as i32);
        if self.is_negative() {
            -v
        } else {
            v
        }
    }

    /// Integer part `[x]` of `|x|`.
    pub fn integer_part(&self) -> u128 {
        self.mantissa >> self.frac_depth
    }

    /// Fractional part of `|x|`, in `[0, 1)`.
    pub fn fractional_part(&self) -> Self {
        let mask = if self.frac_depth == 0 {
            0
        } else {
            (1u128 << self.frac_depth) - 1
        };
        Self::from_parts(self.mantissa & mask, self.frac_depth)
    }

    /// Mantissa rescaled to `depth >= self.frac_depth`.
    fn mantissa_at(&self, depth: u32) -> u128 {
        debug_assert!(depth >= self.frac_depth);
        self.mantissa << (depth - self.frac_depth)
    }

    /// `2^k * x` for `k >= 0`.
    pub fn scale_pow2(&self, k: u32) -> Self {
        if k <= self.frac_depth {
            DyadicNumber {
                frac_depth: self.frac_depth - k,
                ..*self
            }
        } else {
            DyadicNumber {
                mantissa: self.mantissa << (k - self.frac_depth),
                frac_depth: 0,
                ..*self
            }
        }
    }
}

impl Neg for DyadicNumber {
    type Output = DyadicNumber;

    fn neg(self) -> DyadicNumber {
        DyadicNumber {
            negative: !self.negative,
            ..self
        }
    }
}

impl PartialEq for DyadicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for DyadicNumber {}

impl PartialOrd for DyadicNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        let depth = self.frac_depth.max(other.frac_depth);
        let a = self.mantissa_at(depth);
        let b = other.mantissa_at(depth);
        match (self.is_negative(), other.is_negative()) {
            (false, false) => a.cmp(&b),
            (true, true) => b.cmp(&a),
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
        }
    }
}

impl fmt::Display for DyadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Exact binary expansion of a non-negative dyadic rational `x` whose
/// fractional part fits in `frac_depth` bits.
pub fn to_dyadic(x: f64, frac_depth: u32) -> Result<DyadicNumber> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Negative(x));
    }
    if frac_depth > MAX_FRAC_DEPTH {
        return Err(Error::NotRepresentable { value: x, frac_depth });
    }
    // Scaling by a power of two is exact in binary floating point.
    let scaled = x * 2f64.powi(frac_depth as i32);
    if !scaled.is_finite() || scaled.fract() != 0.0 || scaled >= 2f64.powi(127) {
        return Err(Error::NotRepresentable { value: x, frac_depth });
    }
    Ok(DyadicNumber::from_parts(scaled as u128, frac_depth))
}

/// Dyadic sum `x ⊕ y`: XOR of the binary digits, with the sign rule
/// `-x ⊕ y = x ⊕ -y = -(x ⊕ y)`.
pub fn dyadic_add(x: &DyadicNumber, y: &DyadicNumber) -> DyadicNumber {
    let depth = x.frac_depth.max(y.frac_depth);
    let mantissa = x.mantissa_at(depth) ^ y.mantissa_at(depth);
    DyadicNumber {
        negative: x.is_negative() ^ y.is_negative(),
        mantissa,
        frac_depth: depth,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn expansions() {
        assert_eq!(to_dyadic(0.5, 4).unwrap().bits(), vec![-1]);
        assert_eq!(to_dyadic(5.0, 4).unwrap().bits(), vec![0, 2]);
        // 0.828125 · 2^6 = 53 = 110101₂
        assert_eq!(to_dyadic(0.828125, 6).unwrap().bits(), vec![-6, -4, -2, -1]);
    }

    #[test]
    fn repeated_doubling_matches_bits() {
        // Peel fractional digits by doubling, independent of the mantissa path.
        let x = 0.828125_f64;
        let mut frac = x;
        let mut digits = Vec::new();
        for i in 1..=6 {
            frac *= 2.0;
            if frac >= 1.0 {
                digits.push(-i);
                frac -= 1.0;
            }
        }
        let mut got = to_dyadic(x, 6).unwrap().bits();
        got.reverse();
        assert_eq!(got, digits);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(to_dyadic(-1.0, 3), Err(Error::Negative(_))));
        assert!(matches!(
            to_dyadic(0.3, 10),
            Err(Error::NotRepresentable { .. })
        ));
        assert!(matches!(
            to_dyadic(0.125, 2),
            Err(Error::NotRepresentable { .. })
        ));
    }

    #[test]
    fn addition_examples() {
        let d = |x| to_dyadic(x, 8).unwrap();
        assert_eq!(dyadic_add(&d(0.5), &d(3.0)).value(), 3.5);
        assert!(dyadic_add(&d(0.828125), &d(0.828125)).is_zero());
        assert_eq!(dyadic_add(&d(0.75), &d(0.25)).value(), 0.5);
    }

    #[test]
    fn sign_rule() {
        let x = to_dyadic(0.75, 2).unwrap();
        let y = to_dyadic(0.25, 2).unwrap();
        assert_eq!(dyadic_add(&-x, &y).value(), -0.5);
        assert_eq!(dyadic_add(&x, &-y).value(), -0.5);
        assert_eq!(dyadic_add(&-x, &-y).value(), 0.5);
    }

    #[test]
    fn frac_depth_is_max_of_operands() {
        let x = to_dyadic(0.5, 3).unwrap();
        let y = to_dyadic(2.0, 7).unwrap();
        assert_eq!(dyadic_add(&x, &y).frac_depth(), 7);
    }

    fn dyadic() -> impl Strategy<Value = DyadicNumber> {
        (0u64..1 << 20, 0u32..12).prop_map(|(m, q)| DyadicNumber::from_parts(m as u128, q))
    }

    proptest! {
        #[test]
        fn integer_shift_is_decimal_sum(j in 0u64..1 << 12, m in 0u64..1 << 10) {
            let x = DyadicNumber::grid_point(j, 12);
            let s = dyadic_add(&x, &DyadicNumber::from_int(m));
            prop_assert_eq!(s.value(), x.value() + m as f64);
        }

        #[test]
        fn zero_iff_equal(x in dyadic(), y in dyadic()) {
            prop_assert_eq!(dyadic_add(&x, &y).is_zero(), x == y);
        }

        #[test]
        fn commutative_associative(x in dyadic(), y in dyadic(), z in dyadic()) {
            prop_assert_eq!(dyadic_add(&x, &y), dyadic_add(&y, &x));
            prop_assert_eq!(
                dyadic_add(&dyadic_add(&x, &y), &z),
                dyadic_add(&x, &dyadic_add(&y, &z))
            );
        }

        #[test]
        fn round_trip(m in 0u64..1 << 40, q in 0u32..30) {
            let x = m as f64 / 2f64.powi(q as i32);
            prop_assert_eq!(to_dyadic(x, q).unwrap().value(), x);
        }
    }
}
