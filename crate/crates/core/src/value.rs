//! Opaque value labels of recognisers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An element of some recogniser's finite value set `K`.
///
/// Atomic labels come from input files; pairs arise from product
/// recognisers. Serialized as its display string, `(a,b)` for pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Label(String),
    Pair(Box<Value>, Box<Value>),
}

impl Value {
    pub fn label(s: impl Into<String>) -> Self {
        Value::Label(s.into())
    }

    pub fn pair(a: Value, b: Value) -> Self {
        Value::Pair(Box::new(a), Box::new(b))
    }

    /// Swap the components of a pair; labels are returned unchanged.
    pub fn swapped(&self) -> Value {
        match self {
            Value::Pair(a, b) => Value::Pair(b.clone(), a.clone()),
            v => v.clone(),
        }
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::label(s)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Label(s) => f.write_str(s),
            Value::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

impl FromStr for Value {
    type Err = std::convert::Infallible;

    /// Inverse of `Display` whenever the atomic labels contain none of `(`, `,`, `)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(parse_pair(s).unwrap_or_else(|| Value::label(s)))
    }
}

fn parse_pair(s: &str) -> Option<Value> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let mut depth = 0usize;
    for (i, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1)?,
            ',' if depth == 0 => {
                let (a, b) = (&inner[..i], &inner[i + 1..]);
                let a = a.parse().ok()?;
                let b = b.parse().ok()?;
                return Some(Value::pair(a, b));
            }
            _ => {}
        }
    }
    None
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(s.parse().expect("infallible"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_value() -> impl Strategy<Value = Value> {
        let leaf = "[a-z][a-z0-9_]{0,5}".prop_map(Value::Label);
        leaf.prop_recursive(3, 16, 2, |inner| {
            (inner.clone(), inner).prop_map(|(a, b)| Value::pair(a, b))
        })
    }

    #[test]
    fn pair_display() {
        let v = Value::pair("even".into(), Value::pair("yes".into(), "x".into()));
        assert_eq!(v.to_string(), "(even,(yes,x))");
        assert_eq!(v.swapped().to_string(), "((yes,x),even)");
    }

    #[test]
    fn unbalanced_strings_stay_labels() {
        assert_eq!("(a".parse::<Value>().unwrap(), Value::label("(a"));
        assert_eq!("(ab)".parse::<Value>().unwrap(), Value::label("(ab)"));
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(v in arb_value()) {
            let s = v.to_string();
            prop_assert_eq!(s.parse::<Value>().unwrap(), v.clone());
            let json = serde_json::to_string(&v).unwrap();
            prop_assert_eq!(serde_json::from_str::<Value>(&json).unwrap(), v);
        }
    }
}
