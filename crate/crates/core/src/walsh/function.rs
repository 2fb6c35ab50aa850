use std::fmt;
use std::str::FromStr;

use crate::dyadic::DyadicNumber;
use crate::error::{Error, Result};

/// Index ordering of the classical Walsh system.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum WalshOrdering {
    /// Sequency ordering: `wal(s; ·)` has exactly `s` sign changes.
    #[default]
    Kaczmarz,
    /// Paley (dyadic) ordering.
    Paley,
    /// Walsh–Kronecker (natural Hadamard) ordering at a fixed bit width.
    Natural,
}

impl WalshOrdering {
    pub const ALL: [WalshOrdering; 3] = [
        WalshOrdering::Kaczmarz,
        WalshOrdering::Paley,
        WalshOrdering::Natural,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            WalshOrdering::Kaczmarz => "kaczmarz",
            WalshOrdering::Paley => "paley",
            WalshOrdering::Natural => "natural",
        }
    }
}

impl fmt::Display for WalshOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WalshOrdering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kaczmarz" | "sequency" => Ok(WalshOrdering::Kaczmarz),
            "paley" | "dyadic" => Ok(WalshOrdering::Paley),
            "natural" | "hadamard" | "kronecker" => Ok(WalshOrdering::Natural),
            other => Err(Error::Parse(format!("unknown Walsh ordering '{other}'"))),
        }
    }
}

/// The `n × n` 0/1 ordering matrix.
///
/// Kaczmarz: ones on the anti-diagonal and the diagonal just above it.
/// Paley: the reversal (anti-identity) matrix. Natural: the identity.
pub fn omega_matrix(ordering: WalshOrdering, n: usize) -> Vec<Vec<u8>> {
    let mut w = vec![vec![0u8; n]; n];
    for (i, row) in w.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            let hit = match ordering {
                WalshOrdering::Kaczmarz => i + j + 1 == n || i + j + 2 == n,
                WalshOrdering::Paley => i + j + 1 == n,
                WalshOrdering::Natural => i == j,
            };
            *e = hit as u8;
        }
    }
    w
}

/// Number of binary digits of `s` (`n(s)`, zero for `s = 0`).
fn digit_count(s: u64) -> usize {
    (u64::BITS - s.leading_zeros()) as usize
}

/// Classical Walsh function `wal(s; x)` for `x ∈ [0, 1)`, evaluated from
/// the ordering matrix at width `n(s)`.
pub fn wal(s: u64, x: &DyadicNumber, ordering: WalshOrdering) -> Result<i8> {
    wal_fixed_width(s, x, ordering, digit_count(s))
}

/// `wal(s; x)` with the ordering matrix taken at `width >= n(s)` bits.
///
/// Kaczmarz and Paley values do not depend on the width; the natural
/// ordering does, which is why it is only meaningful at a fixed width.
pub fn wal_fixed_width(s: u64, x: &DyadicNumber, ordering: WalshOrdering, width: usize) -> Result<i8> {
    if x.is_negative() || x.integer_part() != 0 {
        return Err(Error::OutsideUnitInterval(x.value()));
    }
    assert!(width >= digit_count(s), "width {width} below n(s) for s = {s}");
    let omega = omega_matrix(ordering, width);
    // Row i pairs with digit s_{n-1-i}; column j pairs with x_{-(j+1)}.
    let mut parity = 0u8;
    for (i, row) in omega.iter().enumerate() {
        let si = ((s >> (width - 1 - i)) & 1) as u8;
        if si == 0 {
            continue;
        }
        for (j, &w) in row.iter().enumerate() {
            parity ^= w & x.bit(-(j as i32) - 1);
        }
    }
    Ok(if parity == 0 { 1 } else { -1 })
}

/// `wal(s; k / 2^bits)` for `s, k < 2^bits`, via integer bit tricks.
#[inline]
pub fn wal_grid(s: u64, k: u64, bits: u32, ordering: WalshOrdering) -> i8 {
    debug_assert!(bits == 64 || (s >> bits == 0 && k >> bits == 0));
    let mask = match ordering {
        WalshOrdering::Natural => s & k,
        WalshOrdering::Paley => s & super::bit_reverse(k, bits),
        WalshOrdering::Kaczmarz => super::gray(s) & super::bit_reverse(k, bits),
    };
    if mask.count_ones() & 1 == 0 {
        1
    } else {
        -1
    }
}

/// Generalized Walsh function `Wal(s, x)` on dyadic rationals.
///
/// Evaluates `(-1)^{Σ_i s_i (x_{-i-1} + x_{-i})}` over all binary digits,
/// which agrees with `(-1)^{s_0 x_0} wal([s]; x) wal([x]; s)` and is
/// symmetric in its arguments. Negative arguments flip the sign.
pub fn gwal(s: &DyadicNumber, x: &DyadicNumber) -> i8 {
    let qs = s.frac_depth() as i32;
    let qx = x.frac_depth() as i32;
    let xm = x.mantissa();
    let xbit = |e: i32| -> u32 {
        let pos = e + qx;
        if (0..128).contains(&pos) {
            ((xm >> pos) & 1) as u32
        } else {
            0
        }
    };
    let mut parity = 0u32;
    let mut m = s.mantissa();
    while m != 0 {
        let i = m.trailing_zeros() as i32 - qs;
        parity ^= xbit(-i - 1) ^ xbit(-i);
        m &= m - 1;
    }
    let mut v: i8 = if parity == 0 { 1 } else { -1 };
    if s.is_negative() {
        v = -v;
    }
    if x.is_negative() {
        v = -v;
    }
    v
}

/// Tensor-product Walsh function `Π_k Wal(s_k, x_k)`.
pub fn gwal_nd(s: &[DyadicNumber], x: &[DyadicNumber]) -> Result<i8> {
    if s.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: s.len(),
            got: x.len(),
        });
    }
    Ok(s.iter().zip(x).map(|(a, b)| gwal(a, b)).product())
}

/// Number of sign changes of a ±1 sequence.
pub fn sign_changes(values: &[i8]) -> usize {
    values.windows(2).filter(|w| w[0] != w[1]).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::{dyadic_add, to_dyadic};
    use proptest::prelude::*;

    fn gp(j: u64, q: u32) -> DyadicNumber {
        DyadicNumber::grid_point(j, q)
    }

    #[test]
    fn wal_zero_is_one() {
        for ord in WalshOrdering::ALL {
            for j in 0..64 {
                assert_eq!(wal(0, &gp(j, 6), ord).unwrap(), 1);
            }
        }
    }

    #[test]
    fn wal_one() {
        for ord in WalshOrdering::ALL {
            assert_eq!(wal(1, &to_dyadic(0.25, 2).unwrap(), ord).unwrap(), 1);
            assert_eq!(wal(1, &to_dyadic(0.75, 2).unwrap(), ord).unwrap(), -1);
        }
    }

    #[test]
    fn rejects_outside_unit_interval() {
        let x = to_dyadic(1.5, 1).unwrap();
        assert!(matches!(
            wal(3, &x, WalshOrdering::Kaczmarz),
            Err(Error::OutsideUnitInterval(_))
        ));
        assert!(wal(3, &-to_dyadic(0.5, 1).unwrap(), WalshOrdering::Kaczmarz).is_err());
    }

    #[test]
    fn kaczmarz_is_sequency_ordered() {
        let q = 12;
        for s in 0..32u64 {
            let vals: Vec<i8> = (0..1u64 << q)
                .map(|j| wal(s, &gp(j, q), WalshOrdering::Kaczmarz).unwrap())
                .collect();
            assert_eq!(sign_changes(&vals), s as usize, "s = {s}");
        }
    }

    #[test]
    fn paley_is_product_of_rademachers() {
        // pal(s; x) = Π_a r_a(x)^{s_a} with r_a(x) = (-1)^{x_{-(a+1)}}
        let q = 6;
        for s in 0..64u64 {
            for j in 0..64u64 {
                let x = gp(j, q);
                let mut v = 1i8;
                for a in 0..6 {
                    if (s >> a) & 1 == 1 && x.bit(-a - 1) == 1 {
                        v = -v;
                    }
                }
                assert_eq!(wal(s, &x, WalshOrdering::Paley).unwrap(), v);
            }
        }
    }

    #[test]
    fn grid_fast_path_matches_definition() {
        let bits = 5;
        for ord in WalshOrdering::ALL {
            for s in 0..32u64 {
                for k in 0..32u64 {
                    let def = wal_fixed_width(s, &gp(k, bits), ord, bits as usize).unwrap();
                    assert_eq!(wal_grid(s, k, bits, ord), def, "{ord} s={s} k={k}");
                }
            }
        }
    }

    #[test]
    fn generalized_matches_classical_on_integers() {
        for s in 0..64u64 {
            for j in 0..128u64 {
                let x = gp(j, 7);
                assert_eq!(
                    gwal(&DyadicNumber::from_int(s), &x),
                    wal(s, &x, WalshOrdering::Kaczmarz).unwrap()
                );
            }
        }
    }

    #[test]
    fn product_formula() {
        // Wal(s, x) = (-1)^{s_0 x_0} wal([s]; {x}) wal([x]; {s})
        let mut rng_state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            rng_state
        };
        for _ in 0..2000 {
            let s = DyadicNumber::from_parts((next() % (1 << 14)) as u128, 6);
            let x = DyadicNumber::from_parts((next() % (1 << 14)) as u128, 7);
            let sign = if s.bit(0) & x.bit(0) == 1 { -1 } else { 1 };
            let a = wal(
                s.integer_part() as u64,
                &x.fractional_part(),
                WalshOrdering::Kaczmarz,
            )
            .unwrap();
            let b = wal(
                x.integer_part() as u64,
                &s.fractional_part(),
                WalshOrdering::Kaczmarz,
            )
            .unwrap();
            assert_eq!(gwal(&s, &x), sign * a * b);
        }
    }

    #[test]
    fn nd_examples() {
        let z = DyadicNumber::ZERO;
        let x = [gp(3, 2), gp(1, 3)];
        assert_eq!(gwal_nd(&[z, z], &x).unwrap(), 1);
        let one = DyadicNumber::from_int(1);
        let x = [to_dyadic(0.75, 2).unwrap(), to_dyadic(0.75, 2).unwrap()];
        assert_eq!(gwal_nd(&[one, one], &x).unwrap(), 1);
        assert!(matches!(
            gwal_nd(&[one], &x),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    fn dy(max_m: u64, max_q: u32) -> impl Strategy<Value = DyadicNumber> {
        (0..max_m, 0..=max_q).prop_map(|(m, q)| DyadicNumber::from_parts(m as u128, q))
    }

    proptest! {
        #[test]
        fn symmetric(s in dy(1 << 16, 10), x in dy(1 << 16, 10)) {
            prop_assert_eq!(gwal(&s, &x), gwal(&x, &s));
        }

        #[test]
        fn negative_arguments(s in dy(1 << 16, 10), x in dy(1 << 16, 10)) {
            prop_assume!(!s.is_zero() && !x.is_zero());
            prop_assert_eq!(gwal(&-s, &x), -gwal(&s, &x));
            prop_assert_eq!(gwal(&s, &-x), -gwal(&s, &x));
        }

        #[test]
        fn scaling(s in dy(1 << 16, 10), x in dy(1 << 16, 10), k in 1u32..=3) {
            prop_assert_eq!(gwal(&s.scale_pow2(k), &x), gwal(&s, &x.scale_pow2(k)));
        }

        #[test]
        fn multiplicative(s in dy(1 << 16, 10), x in dy(1 << 16, 10), t in dy(1 << 16, 10)) {
            prop_assert_eq!(gwal(&s, &x) * gwal(&s, &t), gwal(&s, &dyadic_add(&x, &t)));
        }

        #[test]
        fn separable(a in dy(1 << 12, 8), b in dy(1 << 12, 8), x in dy(1 << 12, 8), y in dy(1 << 12, 8)) {
            prop_assert_eq!(gwal_nd(&[a, b], &[x, y]).unwrap(), gwal(&a, &x) * gwal(&b, &y));
        }
    }
}
