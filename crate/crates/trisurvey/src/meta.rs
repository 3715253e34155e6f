//! Metadata payloads attached to vertices and edges.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::wire::{Decode, Encode};

/// A single metadata value on a vertex or edge.
///
/// Values are totally ordered: `None < Int < Float < Text` across variants,
/// numeric/lexicographic within a variant. Floats compare by `total_cmp`, so
/// the order (and the derived equality) is total even for NaN.
#[derive(Debug, Clone, Default)]
pub enum MetaValue {
    #[default]
    None,
    Int(i64),
    Float(f64),
    Text(String),
}

impl MetaValue {
    /// Parse text as integer, else float, else keep it as text.
    pub fn parse(s: &str) -> MetaValue {
        if let Ok(i) = s.parse::<i64>() {
            MetaValue::Int(i)
        } else if let Ok(f) = s.parse::<f64>() {
            MetaValue::Float(f)
        } else {
            MetaValue::Text(s.to_string())
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, MetaValue::None)
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, MetaValue::Int(_) | MetaValue::Float(_))
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            MetaValue::Int(i) => Some(*i as f64),
            MetaValue::Float(f) => Some(*f),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            MetaValue::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            MetaValue::Text(s) => Some(s),
            _ => None,
        }
    }

    /// Numeric value for timestamp use; `Err` carries `context` when the
    /// value is absent or non-numeric.
    pub fn numeric_or_err(&self, context: &str) -> Result<f64> {
        self.as_f64()
            .ok_or_else(|| Error::Validation(format!("{context}: expected numeric metadata, found {self}")))
    }

    fn variant_rank(&self) -> u8 {
        match self {
            MetaValue::None => 0,
            MetaValue::Int(_) => 1,
            MetaValue::Float(_) => 2,
            MetaValue::Text(_) => 3,
        }
    }
}

impl fmt::Display for MetaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetaValue::None => Ok(()),
            MetaValue::Int(i) => write!(f, "{i}"),
            MetaValue::Float(x) => write!(f, "{x}"),
            MetaValue::Text(s) => write!(f, "{s}"),
        }
    }
}

impl Ord for MetaValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (MetaValue::None, MetaValue::None) => Ordering::Equal,
            (MetaValue::Int(a), MetaValue::Int(b)) => a.cmp(b),
            (MetaValue::Float(a), MetaValue::Float(b)) => a.total_cmp(b),
            (MetaValue::Text(a), MetaValue::Text(b)) => a.cmp(b),
            _ => self.variant_rank().cmp(&other.variant_rank()),
        }
    }
}

impl PartialOrd for MetaValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for MetaValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for MetaValue {}

impl Hash for MetaValue {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.variant_rank().hash(state);
        match self {
            MetaValue::None => {}
            MetaValue::Int(i) => i.hash(state),
            MetaValue::Float(f) => f.to_bits().hash(state),
            MetaValue::Text(s) => s.hash(state),
        }
    }
}

impl Encode for MetaValue {
    fn encode(&self, out: &mut Vec<u8>) {
        out.push(self.variant_rank());
        match self {
            MetaValue::None => {}
            MetaValue::Int(i) => i.encode(out),
            MetaValue::Float(f) => f.encode(out),
            MetaValue::Text(s) => s.encode(out),
        }
    }
}

impl Decode for MetaValue {
    fn decode(input: &mut &[u8]) -> Result<Self> {
        match u8::decode(input)? {
            0 => Ok(MetaValue::None),
            1 => Ok(MetaValue::Int(i64::decode(input)?)),
            2 => Ok(MetaValue::Float(f64::decode(input)?)),
            3 => Ok(MetaValue::Text(String::decode(input)?)),
            t => Err(Error::Wire(format!("invalid metadata tag {t}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wire::{from_bytes, to_bytes};

    #[test]
    fn parse_precedence() {
        assert_eq!(MetaValue::parse("42"), MetaValue::Int(42));
        assert_eq!(MetaValue::parse("-7"), MetaValue::Int(-7));
        assert_eq!(MetaValue::parse("2.5"), MetaValue::Float(2.5));
        assert_eq!(MetaValue::parse("abc"), MetaValue::Text("abc".into()));
    }

    #[test]
    fn total_order_across_variants() {
        let mut vals = vec![
            MetaValue::Text("a".into()),
            MetaValue::Float(0.5),
            MetaValue::Int(9),
            MetaValue::None,
            MetaValue::Int(-3),
        ];
        vals.sort();
        assert_eq!(
            vals,
            vec![
                MetaValue::None,
                MetaValue::Int(-3),
                MetaValue::Int(9),
                MetaValue::Float(0.5),
                MetaValue::Text("a".into()),
            ]
        );
    }

    #[test]
    fn wire_roundtrip() {
        for v in [
            MetaValue::None,
            MetaValue::Int(i64::MIN),
            MetaValue::Float(-0.0),
            MetaValue::Text(String::new()),
            MetaValue::Text("x,y z".into()),
        ] {
            let got: MetaValue = from_bytes(&to_bytes(&v)).unwrap();
            assert_eq!(got, v);
        }
    }
}
