//! Stable rank reports and the integer demos.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::corpus::CorpusEntry;
use super::report::{Record, Report, Witness};
use crate::error::{Error, Result};
use crate::idempotent::FullnessCertificate;
use crate::ring::embed::matrix_unit;
use crate::ring::{Elem, Ring};
use crate::stablerank::{reduced_row, FiniteReducer, RangeIndex, Reducer};
use crate::trace::PipelineTrace;
use crate::transforms::{reducer_from_full_corner, CornerSource};
use crate::zsolvers::{m2z, m2z_ring, m2z_unimodular, z_reducer, z_sr_lower_witness, ZReducer};

fn timed(f: impl FnOnce() -> Record) -> Record {
    let t0 = Instant::now();
    let mut r = f();
    r.elapsed_ms = t0.elapsed().as_secs_f64() * 1e3;
    r
}

/// Exact stable rank up to `max_n`, with an irreducible row for every
/// ruled-out rank and a reduction at the rank found.
pub fn sr_report(entry: &CorpusEntry, max_n: usize) -> Report {
    let mut report = Report::new("sr", None);
    report.records.push(timed(|| {
        let run = |rec: &mut Record| -> Result<()> {
            if max_n < 1 {
                return Err(Error::InvalidSize(max_n));
            }
            let ring = entry.ring()?;
            *rec = Record::new("sr", Some((&entry.name, &ring)));
            rec.parameters = json!({ "max_n": max_n });
            let idx = Arc::new(RangeIndex::build(&ring)?);
            let mut rank = None;
            for n in 1..=max_n {
                match idx.irreducible_row(n)? {
                    None => {
                        rank = Some(n);
                        break;
                    }
                    Some(row) => {
                        let row: Vec<Elem> = row.iter().map(|&i| idx.element(i).clone()).collect();
                        rec.witnesses.push(Witness::irreducible(&ring, &row));
                    }
                }
            }
            if let Some(n) = rank {
                let mut row = vec![ring.zero(); n + 1];
                row[n] = ring.one();
                let red = FiniteReducer::from_index(idx.clone(), n)?.reduce(&row)?;
                rec.witnesses.push(Witness::reduction(&ring, &row, &red));
            }
            rec.set_detail(json!({
                "cardinality": ring.cardinality().to_string(),
                "stable_rank": rank,
                "lower_bound": rank.unwrap_or(max_n + 1),
            }));
            Ok(())
        };
        let mut rec = Record::new("sr", None);
        rec.ring = Some(entry.name.clone());
        rec.spec = Some(entry.spec.clone());
        if let Err(e) = run(&mut rec) {
            rec.error(&e);
        }
        rec
    }));
    report
}

/// Random coprime triples over `Z` reduced by the rank-2 integer reducer,
/// plus the residue argument that `sr(Z) > 1`.
pub fn z_reduce(seed: u64, count: usize, magnitude: u64) -> Report {
    let mut report = Report::new("demo z-reduce", Some(seed));
    if count > 0 {
        report.records.push(timed(|| {
            let mut rec = Record::new("z-reduce", None);
            rec.parameters = json!({ "count": count, "magnitude": magnitude });
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = magnitude.min(i64::MAX as u64) as i64;
            let (mut done, mut trivial) = (0, 0);
            while done < count {
                let t: [BigInt; 3] = std::array::from_fn(|_| BigInt::from(rng.gen_range(-m..=m)));
                if !t[0].gcd(&t[1]).gcd(&t[2]).is_one() {
                    continue;
                }
                match z_reducer(&t[0], &t[1], &t[2]) {
                    Ok((c1, c2)) => {
                        if !(&t[0] + &t[2] * &c1).gcd(&(&t[1] + &t[2] * &c2)).is_one() {
                            rec.fail(format!("({}, {}, {}) not reduced by ({c1}, {c2})", t[0], t[1], t[2]));
                        }
                        if t[0].gcd(&t[1]).is_one() {
                            trivial += 1;
                        }
                        rec.witnesses.push(Witness::IntegerReduction {
                            a1: t[0].to_string(),
                            a2: t[1].to_string(),
                            b: t[2].to_string(),
                            c1: c1.to_string(),
                            c2: c2.to_string(),
                        });
                    }
                    Err(e) => rec.fail(e.to_string()),
                }
                done += 1;
            }
            rec.set_detail(json!({ "reduced": done, "already_coprime": trivial }));
            rec
        }));
    }
    report.records.push(timed(|| {
        let mut rec = Record::new("z-lower-bound", None);
        let w = z_sr_lower_witness();
        let bound = 10_000;
        if !(w.is_unimodular() && w.residue_argument_holds() && w.replay(bound)) {
            rec.fail("residue argument does not hold");
        }
        rec.set_detail(json!({ "replayed_c_range": bound }));
        rec.witnesses.push(Witness::ResidueArgument {
            pair: w.pair,
            inverse: w.inverse,
            residue: w.residue,
            unit_residues: w.unit_residues,
        });
        rec
    }));
    report
}

/// Random right unimodular triples over `M_2(Z)` reduced through the corner
/// `e_11 M_2(Z) e_11 = Z`. Non-unimodular draws are rejected and redrawn.
pub fn m2z_reduce(seed: u64, count: usize, magnitude: u64, trace: bool) -> Report {
    let mut report = Report::new("demo m2z-reduce", Some(seed));
    let m = m2z_ring();
    let setup = || -> Result<_> {
        let u = |i, j| matrix_unit(&m, i, j, &Elem::int(1));
        let p = u(0, 0);
        let cert = FullnessCertificate::from_pairs(&m, &p, &[(u(0, 0), u(0, 0)), (u(1, 0), u(0, 1))])?;
        let b = Ring::corner(&m, &p)?;
        let red = Arc::new(ZReducer::corner(&b)?);
        reducer_from_full_corner(&m, &p, CornerSource::Reducer(red), &cert)
    };
    let full = match setup() {
        Ok(f) => f,
        Err(e) => {
            let mut rec = Record::new("m2z-reduce", Some(("m2-integers", &m)));
            rec.error(&e);
            report.records.push(rec);
            return report;
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = magnitude.min(i64::MAX as u64) as i64;
    let mut rejected = 0u64;
    for i in 0..count {
        let row: Vec<Elem> = loop {
            let row: Vec<Elem> = (0..3)
                .map(|_| m2z([[0i64; 2]; 2].map(|r| r.map(|_| rng.gen_range(-k..=k)))))
                .collect();
            if m2z_unimodular(&row).map(|c| c.unimodular).unwrap_or(false) {
                break row;
            }
            rejected += 1;
        };
        report.records.push(timed(|| {
            let mut rec = Record::new("m2z-reduce", Some(("m2-integers", &m)));
            rec.parameters = json!({ "instance": i, "magnitude": magnitude });
            let mut tr = if trace { PipelineTrace::new() } else { PipelineTrace::disabled() };
            match full.reduce_with(&row, &mut tr) {
                Ok(red) => {
                    let reduced = reduced_row(&m, &row, &red.c);
                    let snf = m2z_unimodular(&reduced);
                    if !matches!(snf, Ok(ref c) if c.unimodular) {
                        rec.fail("reduced row is not unimodular by Smith form");
                    }
                    rec.witnesses.push(Witness::reduction(&m, &row, &red));
                }
                Err(e) => rec.error(&e),
            }
            if trace {
                rec.trace = Some(tr.to_json());
            }
            rec
        }));
    }
    if let Some(first) = report.records.first_mut() {
        first.set_detail(json!({ "rejected_draws": rejected }));
    }
    report
}
