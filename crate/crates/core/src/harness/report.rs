//! Versioned JSON reports and witness replay.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::idempotent::EquivalenceWitness;
use crate::ring::literal::{to_literal, RingSpec};
use crate::ring::{Elem, RingRef};
use crate::stablerank::{
    is_reducible, is_right_unimodular, is_unsolvable, verify_reduction, verify_solution, CornerEquation,
    CornerSolution, Reduction, SkewCorner,
};
use crate::transforms::{corner_idempotent, vaserstein_bound};
use crate::zsolvers::z_sr_lower_witness;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Unsupported,
}

/// Self-contained evidence; every variant can be rechecked from its fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `(a_1 + b c_1, ...)` is right unimodular with the given inverse.
    Reduction {
        ring: RingSpec,
        row: Vec<Value>,
        c: Vec<Value>,
        inverse: Vec<Value>,
    },
    /// A right unimodular row no `c` reduces (finite rings).
    IrreducibleRow { ring: RingSpec, row: Vec<Value> },
    Solution {
        ring: RingSpec,
        p: Value,
        q: Value,
        a: Value,
        x: Value,
        b: Value,
        y: Value,
        z: Value,
    },
    /// No `(y, z)` solves the equation (finite rings).
    Unsolvable {
        ring: RingSpec,
        p: Value,
        q: Value,
        a: Value,
        x: Value,
        b: Value,
    },
    /// `ab = p` with `a in pAq`, `b in qAp`.
    Subequivalence {
        ring: RingSpec,
        p: Value,
        q: Value,
        a: Value,
        b: Value,
    },
    CornerIdempotent {
        ring: RingSpec,
        p: Value,
        pairs: Vec<(Value, Value)>,
        q: Value,
        sr_ring: u64,
        sr_corner: u64,
        bound: u64,
    },
    IntegerReduction {
        a1: String,
        a2: String,
        b: String,
        c1: String,
        c2: String,
    },
    ResidueArgument {
        pair: (i64, i64),
        inverse: (i64, i64),
        residue: i64,
        unit_residues: Vec<i64>,
    },
    /// `sr(M_n(A)) = ceil((sr(A) - 1)/n) + 1` evaluated.
    Formula { sr_ring: u64, n: u64, value: u64 },
}

fn lits(v: &[Elem]) -> Vec<Value> {
    v.iter().map(to_literal).collect()
}

fn parse_all(ring: &RingRef, v: &[Value]) -> Result<Vec<Elem>> {
    v.iter().map(|x| ring.parse(x)).collect()
}

fn big(s: &str) -> Result<BigInt> {
    s.parse().map_err(|_| Error::Parse(format!("not an integer: {s}")))
}

impl Witness {
    pub fn reduction(ring: &RingRef, row: &[Elem], red: &Reduction) -> Self {
        Witness::Reduction {
            ring: ring.spec(),
            row: lits(row),
            c: lits(&red.c),
            inverse: lits(&red.inverse),
        }
    }

    pub fn irreducible(ring: &RingRef, row: &[Elem]) -> Self {
        Witness::IrreducibleRow {
            ring: ring.spec(),
            row: lits(row),
        }
    }

    pub fn solution(corner: &SkewCorner, eq: &CornerEquation, sol: &CornerSolution) -> Self {
        Witness::Solution {
            ring: corner.ring().spec(),
            p: to_literal(corner.p()),
            q: to_literal(corner.q()),
            a: to_literal(&eq.a),
            x: to_literal(&eq.x),
            b: to_literal(&eq.b),
            y: to_literal(&sol.y),
            z: to_literal(&sol.z),
        }
    }

    pub fn unsolvable(corner: &SkewCorner, eq: &CornerEquation) -> Self {
        Witness::Unsolvable {
            ring: corner.ring().spec(),
            p: to_literal(corner.p()),
            q: to_literal(corner.q()),
            a: to_literal(&eq.a),
            x: to_literal(&eq.x),
            b: to_literal(&eq.b),
        }
    }

    pub fn subequivalence(ring: &RingRef, p: &Elem, q: &Elem, w: &EquivalenceWitness) -> Self {
        Witness::Subequivalence {
            ring: ring.spec(),
            p: to_literal(p),
            q: to_literal(q),
            a: to_literal(&w.a),
            b: to_literal(&w.b),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Reduction { .. } => "reduction",
            Witness::IrreducibleRow { .. } => "irreducible_row",
            Witness::Solution { .. } => "solution",
            Witness::Unsolvable { .. } => "unsolvable",
            Witness::Subequivalence { .. } => "subequivalence",
            Witness::CornerIdempotent { .. } => "corner_idempotent",
            Witness::IntegerReduction { .. } => "integer_reduction",
            Witness::ResidueArgument { .. } => "residue_argument",
            Witness::Formula { .. } => "formula",
        }
    }

    /// Rechecks the claim from the stored data alone.
    pub fn verify(&self) -> Result<bool> {
        match self {
            Witness::Reduction { ring, row, c, inverse } => {
                let r = ring.build()?;
                let red = Reduction {
                    c: parse_all(&r, c)?,
                    inverse: parse_all(&r, inverse)?,
                };
                Ok(verify_reduction(&r, &parse_all(&r, row)?, &red))
            }
            Witness::IrreducibleRow { ring, row } => {
                let r = ring.build()?;
                let row = parse_all(&r, row)?;
                Ok(is_right_unimodular(&r, &row)? && is_reducible(&r, &row)?.is_none())
            }
            Witness::Solution { ring, p, q, a, x, b, y, z } => {
                let r = ring.build()?;
                let corner = SkewCorner::new(&r, r.parse(p)?, r.parse(q)?)?;
                let eq = CornerEquation::new(r.parse(a)?, r.parse(x)?, r.parse(b)?);
                if eq.validate(&corner).is_err() {
                    return Ok(false);
                }
                Ok(verify_solution(&corner, &eq, &CornerSolution::new(r.parse(y)?, r.parse(z)?)))
            }
            Witness::Unsolvable { ring, p, q, a, x, b } => {
                let r = ring.build()?;
                let corner = SkewCorner::new(&r, r.parse(p)?, r.parse(q)?)?;
                let eq = CornerEquation::new(r.parse(a)?, r.parse(x)?, r.parse(b)?);
                if eq.validate(&corner).is_err() {
                    return Ok(false);
                }
                is_unsolvable(&corner, &eq)
            }
            Witness::Subequivalence { ring, p, q, a, b } => {
                let r = ring.build()?;
                let w = EquivalenceWitness::new(r.parse(a)?, r.parse(b)?);
                Ok(w.verifies_subequivalence(&r, &r.parse(p)?, &r.parse(q)?))
            }
            Witness::CornerIdempotent {
                ring,
                p,
                pairs,
                q,
                sr_ring,
                sr_corner,
                bound,
            } => {
                let r = ring.build()?;
                let pairs = pairs
                    .iter()
                    .map(|(x, y)| Ok((r.parse(x)?, r.parse(y)?)))
                    .collect::<Result<Vec<_>>>()?;
                let c = corner_idempotent(&r, &r.parse(p)?, &pairs)?;
                let n = pairs.len() as u64;
                Ok(c.checks.passed()
                    && c.ring.parse(q)? == c.q
                    && *bound == n * sr_ring - n + 1
                    && bound >= sr_corner)
            }
            Witness::IntegerReduction { a1, a2, b, c1, c2 } => {
                let (a1, a2, b) = (big(a1)?, big(a2)?, big(b)?);
                let (c1, c2) = (big(c1)?, big(c2)?);
                Ok((a1 + &b * c1).gcd(&(a2 + b * c2)).is_one())
            }
            Witness::ResidueArgument {
                pair,
                inverse,
                residue,
                unit_residues,
            } => {
                let w = crate::zsolvers::LowerWitness {
                    pair: *pair,
                    inverse: *inverse,
                    residue: *residue,
                    unit_residues: unit_residues.clone(),
                };
                Ok(w.is_unimodular() && w.residue_argument_holds() && w == z_sr_lower_witness())
            }
            Witness::Formula { sr_ring, n, value } => Ok(vaserstein_bound(*sr_ring, *n)? == *value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ring: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub spec: Option<RingSpec>,
    pub parameters: Value,
    pub result: Outcome,
    pub detail: Value,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<Value>,
    /// Timing field, excluded from determinism comparisons.
    pub elapsed_ms: f64,
}

impl Record {
    pub fn new(check: &str, ring: Option<(&str, &RingRef)>) -> Self {
        Record {
            check: check.to_string(),
            ring: ring.map(|(n, _)| n.to_string()),
            spec: ring.map(|(_, r)| r.spec()),
            parameters: Value::Null,
            result: Outcome::Pass,
            detail: Value::Null,
            witnesses: vec![],
            trace: None,
            elapsed_ms: 0.0,
        }
    }

    pub fn fail(&mut self, why: impl Into<String>) {
        self.result = Outcome::Fail;
        let why = why.into();
        match &mut self.detail {
            Value::Object(m) => {
                m.insert("failure".into(), Value::String(why));
            }
            d => *d = serde_json::json!({ "failure": why }),
        }
    }

    /// Replaces `detail`, keeping any recorded failure.
    pub fn set_detail(&mut self, v: Value) {
        let failure = self.detail.get("failure").cloned();
        self.detail = v;
        if let Some(f) = failure {
            match &mut self.detail {
                Value::Object(m) => {
                    m.insert("failure".into(), f);
                }
                d => *d = serde_json::json!({ "failure": f }),
            }
        }
    }

    /// Turns a library error into the record outcome.
    pub fn error(&mut self, e: &Error) {
        if super::exit_code(e) == 2 {
            self.result = Outcome::Unsupported;
            self.detail = serde_json::json!({ "unsupported": e.to_string() });
        } else {
            self.fail(e.to_string());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: "cornerrank".into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed,
            records: vec![],
        }
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.result == Outcome::Pass)
    }

    pub fn outcome(&self) -> Outcome {
        if self.records.iter().any(|r| r.result == Outcome::Fail) {
            Outcome::Fail
        } else if self.records.iter().any(|r| r.result == Outcome::Unsupported) {
            Outcome::Unsupported
        } else {
            Outcome::Pass
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: Report = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema version {}", r.schema_version)));
        }
        Ok(r)
    }

    /// Copy with timing fields zeroed.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        for rec in &mut r.records {
            rec.elapsed_ms = 0.0;
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplayFailure {
    pub record: usize,
    pub check: String,
    pub witness: usize,
    pub kind: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Replay {
    pub records: usize,
    pub witnesses: usize,
    /// Pass records that carry no witness.
    pub unwitnessed: Vec<usize>,
    pub failures: Vec<ReplayFailure>,
}

impl Replay {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.unwitnessed.is_empty()
    }
}

/// Rechecks every witness in the report.
pub fn replay(report: &Report) -> Replay {
    use rayon::prelude::*;
    let jobs: Vec<(usize, usize, &Witness)> = report
        .records
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.witnesses.iter().enumerate().map(move |(j, w)| (i, j, w)))
        .collect();
    let failures: Vec<ReplayFailure> = jobs
        .par_iter()
        .filter_map(|&(i, j, w)| {
            let reason = match w.verify() {
                Ok(true) => return None,
                Ok(false) => "witness does not verify".to_string(),
                Err(e) => e.to_string(),
            };
            Some(ReplayFailure {
                record: i,
                check: report.records[i].check.clone(),
                witness: j,
                kind: w.kind().into(),
                reason,
            })
        })
        .collect();
    Replay {
        records: report.records.len(),
        witnesses: jobs.len(),
        unwitnessed: report
            .records
            .iter()
            .enumerate()
            .filter(|(_, r)| r.result == Outcome::Pass && r.witnesses.is_empty())
            .map(|(i, _)| i)
            .collect(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::embed::matrix_unit;
    use crate::ring::Ring;

    #[test]
    fn witnesses_round_trip_and_replay() {
        let z4 = Ring::zmod(4).unwrap();
        let row = [Elem::Res(2), Elem::Res(1)];
        let red = Reduction::certify(&z4, &row, vec![Elem::Res(1)]).unwrap();
        let good = Witness::reduction(&z4, &row, &red);
        let bad = Witness::reduction(
            &z4,
            &row,
            &Reduction {
                c: vec![Elem::Res(0)],
                inverse: vec![Elem::Res(1)],
            },
        );
        let m = Ring::matrix(&Ring::zmod(2).unwrap(), 2).unwrap();
        let (e11, e22) = (matrix_unit(&m, 0, 0, &Elem::Res(1)), matrix_unit(&m, 1, 1, &Elem::Res(1)));
        let sub = Witness::subequivalence(
            &m,
            &e11,
            &e22,
            &EquivalenceWitness::new(matrix_unit(&m, 0, 1, &Elem::Res(1)), matrix_unit(&m, 1, 0, &Elem::Res(1))),
        );
        let mut rep = Report::new("test", Some(1));
        let mut rec = Record::new("demo", Some(("zmod4", &z4)));
        rec.witnesses = vec![good, bad, sub, Witness::Formula { sr_ring: 5, n: 2, value: 3 }];
        rep.records.push(rec);
        let back = Report::from_json(&rep.to_json()).unwrap();
        assert_eq!(back, rep);
        let r = replay(&back);
        assert_eq!(r.witnesses, 4);
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].witness, 1);
    }

    #[test]
    fn integer_witnesses() {
        let w = Witness::IntegerReduction {
            a1: "2".into(),
            a2: "4".into(),
            b: "3".into(),
            c1: "0".into(),
            c2: "1".into(),
        };
        assert_eq!(w.verify(), Ok(true));
        let l = z_sr_lower_witness();
        let w = Witness::ResidueArgument {
            pair: l.pair,
            inverse: l.inverse,
            residue: l.residue,
            unit_residues: l.unit_residues,
        };
        assert_eq!(w.verify(), Ok(true));
    }
}
