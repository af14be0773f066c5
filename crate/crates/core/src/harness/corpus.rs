//! Named ring specs for batteries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::literal::RingSpec;
use crate::ring::{RingRef, DEFAULT_ENUMERATION_CAP};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub spec: RingSpec,
    #[serde(default = "default_cap")]
    pub enumeration_cap: u64,
}

fn default_cap() -> u64 {
    DEFAULT_ENUMERATION_CAP
}

impl CorpusEntry {
    pub fn new(name: &str, spec: RingSpec) -> Self {
        CorpusEntry {
            name: name.into(),
            spec,
            enumeration_cap: default_cap(),
        }
    }

    /// Builds the ring and checks it against the enumeration cap.
    pub fn ring(&self) -> Result<RingRef> {
        let r = self.spec.build()?;
        match r.cardinality().as_u64() {
            Some(n) if n <= self.enumeration_cap => Ok(r),
            Some(_) | None if r.is_finite() => Err(Error::CapExceeded {
                cardinality: r.cardinality().to_string(),
                cap: self.enumeration_cap,
            }),
            _ => Err(Error::Unsupported("enumeration unsupported for infinite rings".into())),
        }
    }
}

fn zmod(m: u64) -> RingSpec {
    RingSpec::Zmod { m }
}

/// The seven small rings every battery runs on.
pub fn builtin_corpus() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry::new("zmod2", zmod(2)),
        CorpusEntry::new("zmod3", zmod(3)),
        CorpusEntry::new("zmod4", zmod(4)),
        CorpusEntry::new(
            "zmod2xzmod2",
            RingSpec::Product {
                factors: vec![zmod(2), zmod(2)],
            },
        ),
        CorpusEntry::new(
            "zmod2xzmod3",
            RingSpec::Product {
                factors: vec![zmod(2), zmod(3)],
            },
        ),
        CorpusEntry::new(
            "t2-zmod2",
            RingSpec::Triangular {
                n: 2,
                base: Box::new(zmod(2)),
            },
        ),
        CorpusEntry::new(
            "m2-zmod2",
            RingSpec::Matrix {
                n: 2,
                base: Box::new(zmod(2)),
            },
        ),
    ]
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CorpusFile {
    List(Vec<CorpusEntry>),
    Wrapped { entries: Vec<CorpusEntry> },
}

/// A JSON list of entries, or `{"entries": [...]}`.
pub fn parse_corpus(s: &str) -> Result<Vec<CorpusEntry>> {
    let f: CorpusFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    let entries = match f {
        CorpusFile::List(v) | CorpusFile::Wrapped { entries: v } => v,
    };
    for e in &entries {
        e.spec.build()?;
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_is_small() {
        let c = builtin_corpus();
        assert_eq!(c.len(), 7);
        for e in &c {
            let r = e.ring().unwrap();
            assert!(r.cardinality().as_u64().unwrap() <= 16);
        }
    }

    #[test]
    fn parse_forms() {
        let list = r#"[{"name":"z4","spec":{"type":"zmod","m":4}}]"#;
        let c = parse_corpus(list).unwrap();
        assert_eq!(c[0].enumeration_cap, DEFAULT_ENUMERATION_CAP);
        let wrapped = r#"{"entries":[{"name":"z","spec":{"type":"integers"},"enumeration_cap":5}]}"#;
        let c = parse_corpus(wrapped).unwrap();
        assert!(matches!(c[0].ring(), Err(Error::Unsupported(_))));
        assert!(parse_corpus(r#"[{"name":"x","spec":{"type":"zmod","m":1}}]"#).is_err());
        let capped = CorpusEntry {
            enumeration_cap: 3,
            ..CorpusEntry::new("z4", zmod(4))
        };
        assert!(matches!(capped.ring(), Err(Error::CapExceeded { .. })));
    }
}
