//! JSON representation of exact integers.
//!
//! Values that fit in `i64` are written as plain JSON numbers; anything larger is
//! written as a decimal string. Both forms are accepted on input.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

pub(crate) struct IntOut<'a>(pub &'a BigInt);

impl Serialize for IntOut<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub(crate) struct IntIn(pub BigInt);

impl<'de> Deserialize<'de> for IntIn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = IntIn;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<IntIn, E> {
                Ok(IntIn(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<IntIn, E> {
                Ok(IntIn(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<IntIn, E> {
                v.trim().parse::<BigInt>().map(IntIn).map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
            }
        }
        d.deserialize_any(V)
    }
}

pub(crate) fn serialize_int<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    IntOut(v).serialize(s)
}

pub(crate) fn deserialize_int<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    IntIn::deserialize(d).map(|x| x.0)
}

pub(crate) fn serialize_ints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&IntOut(x))?;
    }
    seq.end()
}

pub(crate) fn deserialize_ints<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
    struct V;
    impl<'de> Visitor<'de> for V {
        type Value = Vec<BigInt>;
        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a list of integers")
        }
        fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Vec<BigInt>, A::Error> {
            let mut out = Vec::with_capacity(seq.size_hint().unwrap_or(0));
            while let Some(IntIn(x)) = seq.next_element()? {
                out.push(x);
            }
            Ok(out)
        }
    }
    d.deserialize_seq(V)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Wrap(#[serde(serialize_with = "serialize_ints", deserialize_with = "deserialize_ints")] Vec<BigInt>);

    #[test]
    fn small_values_are_numbers_big_values_are_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let w = Wrap(vec![BigInt::from(-3), big.clone()]);
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"[-3,"123456789012345678901234567890"]"#);
        let back: Wrap = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn rejects_non_integers() {
        assert!(serde_json::from_str::<Wrap>("[1.5]").is_err());
        assert!(serde_json::from_str::<Wrap>(r#"["x1"]"#).is_err());
    }
}
