//! Exact rational arithmetic helpers. Every threshold, ratio and slack in
//! this crate is a `BigRational`; floats never enter a verdict.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rat {
    Rat::from_integer(n.into())
}

pub fn rat_usize(n: usize) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `base^exp` for a nonnegative integer exponent.
pub fn rat_pow(base: &Rat, exp: u32) -> Rat {
    let mut out = Rat::one();
    for _ in 0..exp {
        out *= base;
    }
    out
}

pub fn floor_to_i64(q: &Rat) -> i64 {
    q.floor().to_integer().to_i64().expect("floor fits in i64")
}

/// Compare `count` against `threshold * scale` exactly.
pub fn count_lt(count: usize, threshold: &Rat, scale: usize) -> bool {
    rat_usize(count) < threshold * rat_usize(scale)
}

pub fn count_le(count: usize, threshold: &Rat, scale: usize) -> bool {
    rat_usize(count) <= threshold * rat_usize(scale)
}

/// `count >= threshold^(1/4) * scale`, evaluated as `count^4 >= threshold * scale^4`
/// so no irrational root is ever taken. Requires `threshold >= 0`.
pub fn count_ge_quartic_root(count: usize, threshold: &Rat, scale: usize) -> bool {
    debug_assert!(!threshold.is_negative());
    rat_pow(&rat_usize(count), 4) >= threshold * rat_pow(&rat_usize(scale), 4)
}

/// `count < sqrt(threshold) * scale`, evaluated as `count^2 < threshold * scale^2`.
pub fn count_lt_sqrt(count: usize, threshold: &Rat, scale: usize) -> bool {
    debug_assert!(!threshold.is_negative());
    rat_pow(&rat_usize(count), 2) < threshold * rat_pow(&rat_usize(scale), 2)
}

pub fn rat_to_string(q: &Rat) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn rat_from_str(s: &str) -> crate::error::Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| crate::error::Error::input(format!("bad rational numerator in {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| crate::error::Error::input(format!("bad rational denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(crate::error::Error::input(format!(
            "zero denominator in rational {s:?}"
        )));
    }
    Ok(Rat::new(num, den))
}

/// Serde adapter serializing a `Rat` as a `"num/den"` string.
pub mod rat_serde {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rat, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&rat_to_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(de)?;
        rat_from_str(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Option<Rat>`.
pub mod opt_rat_serde {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Rat>, ser: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => ser.serialize_some(&rat_to_string(q)),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<Rat>, D::Error> {
        let s: Option<String> = Option::deserialize(de)?;
        s.map(|s| rat_from_str(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let q = rat_from_str("3/10").unwrap();
        assert_eq!(q, rat(3, 10));
        assert_eq!(rat_to_string(&q), "3/10");
        assert_eq!(rat_from_str("7").unwrap(), rat(7, 1));
        assert_eq!(rat_from_str("-4/6").unwrap(), rat(-2, 3));
        assert!(rat_from_str("1/0").is_err());
    }

    #[test]
    fn quartic_root_comparison_matches_float_intuition() {
        // 2 >= (1/16)^(1/4) * 4  <=>  2 >= 0.5 * 4 = 2
        assert!(count_ge_quartic_root(2, &rat(1, 16), 4));
        assert!(!count_ge_quartic_root(1, &rat(1, 16), 4));
    }
}
