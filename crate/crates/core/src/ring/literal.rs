//! JSON ring specs and element literals.
//!
//! Specs are nested objects such as
//! `{"type":"matrix","n":2,"base":{"type":"zmod","m":2}}`. Element literals
//! are integers for `zmod`/`integers` (large integers may be strings), nested
//! row arrays for matrices, arrays for products, and ambient literals for
//! corners.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Elem, Ring, RingKind, RingRef};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RingSpec {
    Zmod {
        m: u64,
    },
    Integers,
    Matrix {
        n: usize,
        base: Box<RingSpec>,
    },
    Triangular {
        n: usize,
        base: Box<RingSpec>,
    },
    Product {
        factors: Vec<RingSpec>,
    },
    Corner {
        ambient: Box<RingSpec>,
        p: Value,
    },
}

impl RingSpec {
    pub fn build(&self) -> Result<RingRef> {
        match self {
            RingSpec::Zmod { m } => Ring::zmod(*m),
            RingSpec::Integers => Ok(Ring::integers()),
            RingSpec::Matrix { n, base } => Ring::matrix(&base.build()?, *n),
            RingSpec::Triangular { n, base } => Ring::triangular(&base.build()?, *n),
            RingSpec::Product { factors } => {
                let fs = factors.iter().map(|f| f.build()).collect::<Result<Vec<_>>>()?;
                Ring::product(&fs)
            }
            RingSpec::Corner { ambient, p } => {
                let a = ambient.build()?;
                let pe = parse_literal(&a, p)?;
                Ring::corner(&a, &pe)
            }
        }
    }

    pub fn from_json(s: &str) -> Result<RingSpec> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl Ring {
    pub fn spec(&self) -> RingSpec {
        match self.kind() {
            RingKind::ZMod { m } => RingSpec::Zmod { m: *m },
            RingKind::Integers => RingSpec::Integers,
            RingKind::Matrix { base, n } => RingSpec::Matrix {
                n: *n,
                base: Box::new(base.spec()),
            },
            RingKind::Triangular { base, n } => RingSpec::Triangular {
                n: *n,
                base: Box::new(base.spec()),
            },
            RingKind::Product(fs) => RingSpec::Product {
                factors: fs.iter().map(|f| f.spec()).collect(),
            },
            RingKind::Corner { ambient, p } => RingSpec::Corner {
                ambient: Box::new(ambient.spec()),
                p: to_literal(p),
            },
        }
    }

    pub fn parse(&self, v: &Value) -> Result<Elem> {
        parse_literal(self, v)
    }
}

fn int_literal(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) => Value::from(x),
        None => Value::String(v.to_string()),
    }
}

pub fn to_literal(e: &Elem) -> Value {
    match e {
        Elem::Int(v) => int_literal(v),
        Elem::Res(v) => Value::from(*v),
        Elem::Mat(v) => {
            let n = (v.len() as f64).sqrt().round() as usize;
            Value::Array(
                (0..n)
                    .map(|i| Value::Array(v[i * n..(i + 1) * n].iter().map(to_literal).collect()))
                    .collect(),
            )
        }
        Elem::Tup(v) => Value::Array(v.iter().map(to_literal).collect()),
    }
}

fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(Error::Parse(format!("not an integer: {n}")))
            }
        }
        Value::String(s) => s
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("not an integer: {s}"))),
        other => Err(Error::Parse(format!("expected integer literal, got {other}"))),
    }
}

pub fn parse_literal(ring: &Ring, v: &Value) -> Result<Elem> {
    let e = match ring.kind() {
        RingKind::ZMod { m } => {
            let x = parse_int(v)?;
            let mb = BigInt::from(*m);
            let r = ((x % &mb) + &mb) % &mb;
            Elem::Res(r.to_u64().unwrap())
        }
        RingKind::Integers => Elem::Int(parse_int(v)?),
        RingKind::Matrix { base, n } | RingKind::Triangular { base, n } => {
            let rows = v
                .as_array()
                .ok_or_else(|| Error::Parse("matrix literal must be an array of rows".into()))?;
            if rows.len() != *n {
                return Err(Error::Parse(format!("expected {n} rows, got {}", rows.len())));
            }
            let mut out = Vec::with_capacity(n * n);
            for row in rows {
                let row = row
                    .as_array()
                    .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
                if row.len() != *n {
                    return Err(Error::Parse(format!(
                        "expected {n} columns, got {}",
                        row.len()
                    )));
                }
                for x in row {
                    out.push(parse_literal(base, x)?);
                }
            }
            Elem::Mat(out)
        }
        RingKind::Product(fs) => {
            let items = v
                .as_array()
                .ok_or_else(|| Error::Parse("product literal must be an array".into()))?;
            if items.len() != fs.len() {
                return Err(Error::Parse(format!(
                    "expected {} components, got {}",
                    fs.len(),
                    items.len()
                )));
            }
            Elem::Tup(
                items
                    .iter()
                    .zip(fs)
                    .map(|(x, f)| parse_literal(f, x))
                    .collect::<Result<Vec<_>>>()?,
            )
        }
        RingKind::Corner { ambient, .. } => parse_literal(ambient, v)?,
    };
    if !ring.contains(&e) {
        return Err(Error::NotAMember(v.to_string()));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn spec_roundtrip() {
        let s = RingSpec::from_json(
            r#"{"type":"corner","ambient":{"type":"matrix","n":2,"base":{"type":"zmod","m":2}},"p":[[1,0],[0,0]]}"#,
        )
        .unwrap();
        let r = s.build().unwrap();
        assert_eq!(r.cardinality().as_u64(), Some(2));
        assert_eq!(r.spec(), s);
        let back: RingSpec = serde_json::from_value(serde_json::to_value(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn literals() {
        let m = Ring::matrix(&Ring::integers(), 2).unwrap();
        let e = m.parse(&json!([[1, "123456789012345678901234567890"], [0, -4]])).unwrap();
        assert_eq!(to_literal(&e), json!([[1, "123456789012345678901234567890"], [0, -4]]));
        let z4 = Ring::zmod(4).unwrap();
        assert_eq!(z4.parse(&json!(-1)).unwrap(), Elem::Res(3));
        let t = Ring::triangular(&Ring::zmod(2).unwrap(), 2).unwrap();
        assert!(t.parse(&json!([[1, 0], [1, 1]])).is_err());
        let p = Ring::product(&[Ring::zmod(2).unwrap(), Ring::zmod(3).unwrap()]).unwrap();
        assert_eq!(
            p.parse(&json!([1, 2])).unwrap(),
            Elem::Tup(vec![Elem::Res(1), Elem::Res(2)])
        );
        assert!(p.parse(&json!([1])).is_err());
    }
}
