//! Check batteries over a corpus. Each corpus entry yields one record with
//! counts in `detail` and replayable witnesses.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use super::corpus::CorpusEntry;
use super::report::{Outcome, Record, Report, Witness};
use crate::error::{Error, Result};
use crate::idempotent::{enumerate_idempotents, is_full, subequivalent, EquivalenceWitness, Idempotent};
use crate::ring::embed::{diagonal_at, matrix_unit};
use crate::ring::{Elem, Ring, RingRef};
use crate::stablerank::{
    is_unsolvable, skew_sr1_check, sweep, CornerEquation, FiniteReducer, RangeIndex, Reducer, SkewCorner,
    Solver, SolverRef, Sr1Outcome,
};
use crate::transforms::{
    absorb, combine, corner_idempotent, corner_solver_from_reducer, extend, grow, reducer_from_corner_solver,
    reducer_from_full_corner, restrict, row_corner, subequivalence_from_solver, transport, vaserstein_bound,
    BlockLayout, CornerSource, Step, StepStack,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Battery {
    /// Every idempotent pair: a solver that sweeps clean, or a confirmed
    /// unsolvable equation.
    Sr1,
    /// `sr(A) <= n` against solvability of the row corner of `M_n(A)`.
    RowCorner,
    /// Solvers yield subequivalences; no subequivalence means no solver.
    Subequivalence,
    /// Transport, extension, restriction and step stacks on `M_2(Z/2)`.
    Transforms,
    /// Combining and absorbing orthogonal idempotents.
    Combine,
    /// Reducers for `A` built from reducers for full corners.
    FullCorner,
    /// Corner idempotents from fullness certificates and their bounds.
    CornerIdempotent,
    /// Brute-force `sr(M_2(A))` against the matrix formula.
    Vaserstein,
}

impl Battery {
    pub const ALL: [Battery; 8] = [
        Battery::Sr1,
        Battery::RowCorner,
        Battery::Subequivalence,
        Battery::Transforms,
        Battery::Combine,
        Battery::FullCorner,
        Battery::CornerIdempotent,
        Battery::Vaserstein,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Battery::Sr1 => "sr1",
            Battery::RowCorner => "row-corner",
            Battery::Subequivalence => "subequivalence",
            Battery::Transforms => "transforms",
            Battery::Combine => "combine",
            Battery::FullCorner => "full-corner",
            Battery::CornerIdempotent => "corner-idempotent",
            Battery::Vaserstein => "vaserstein",
        }
    }

    pub fn parse(s: &str) -> Option<Battery> {
        Battery::ALL.into_iter().find(|b| b.name() == s)
    }
}

pub fn run_battery(battery: Battery, corpus: &[CorpusEntry]) -> Report {
    let mut report = Report::new(&format!("check {}", battery.name()), None);
    let name = battery.name();
    report.records = match battery {
        Battery::Sr1 => per_entry(name, corpus, sr1),
        Battery::RowCorner => per_entry(name, corpus, row_corner_agreement),
        Battery::Subequivalence => per_entry(name, corpus, subequivalence),
        Battery::Transforms => transforms(),
        Battery::Combine => combines(),
        Battery::FullCorner => per_entry(name, corpus, full_corner),
        Battery::CornerIdempotent => {
            let mut v = per_entry(name, corpus, corner_idempotents);
            v.push(timed(|| given_pairs_record(name)));
            v
        }
        Battery::Vaserstein => {
            let mut v = per_entry(name, corpus, vaserstein);
            v.push(timed(|| hand_values_record(name)));
            v
        }
    };
    report
}

fn timed(f: impl FnOnce() -> Record) -> Record {
    let t0 = Instant::now();
    let mut r = f();
    r.elapsed_ms = t0.elapsed().as_secs_f64() * 1e3;
    r
}

fn per_entry<F>(check: &str, corpus: &[CorpusEntry], f: F) -> Vec<Record>
where
    F: Fn(&RingRef, &mut Record) -> Result<()> + Sync,
{
    corpus
        .par_iter()
        .map(|e| {
            timed(|| match e.ring() {
                Ok(r) => {
                    let mut rec = Record::new(check, Some((&e.name, &r)));
                    if let Err(err) = f(&r, &mut rec) {
                        rec.error(&err);
                    }
                    rec
                }
                Err(err) => {
                    let mut rec = Record::new(check, None);
                    rec.ring = Some(e.name.clone());
                    rec.spec = Some(e.spec.clone());
                    rec.error(&err);
                    rec
                }
            })
        })
        .collect()
}

/// Fixed-scenario record: runs `f` and converts errors.
fn scenario(check: &str, name: &str, ring: &RingRef, f: impl FnOnce(&mut Record) -> Result<()>) -> Record {
    timed(|| {
        let mut rec = Record::new(check, Some((name, ring)));
        if let Err(e) = f(&mut rec) {
            rec.error(&e);
        }
        rec
    })
}

/// Solves the last equation in carrier order.
fn sample_solution(solver: &dyn Solver) -> Result<Witness> {
    let c = solver.corner();
    let r = c.ring();
    let a = c.elements()?.pop().unwrap_or_else(|| r.zero());
    let x = c.opposite_elements()?.pop().unwrap_or_else(|| r.zero());
    let eq = CornerEquation::new(a.clone(), x.clone(), r.sub(c.p(), &r.mul(&a, &x)));
    let sol = solver.solve(&eq)?;
    Ok(Witness::solution(c, &eq, &sol))
}

/// Sweeps the solver; records counts, failures and a sample solution.
fn sweep_into(rec: &mut Record, solver: &dyn Solver) -> Result<usize> {
    let sw = sweep(solver)?;
    if let Some((eq, why)) = &sw.first_failure {
        let r = solver.corner().ring();
        rec.fail(format!(
            "{} of {} equations failed; first a={} x={}: {why}",
            sw.failures,
            sw.equations,
            r.show(&eq.a),
            r.show(&eq.x)
        ));
    } else {
        rec.witnesses.push(sample_solution(solver)?);
    }
    Ok(sw.equations)
}

fn idempotent_pairs(r: &RingRef) -> Result<Vec<(Idempotent, Idempotent)>> {
    let ids = enumerate_idempotents(r)?;
    Ok(ids
        .iter()
        .flat_map(|p| ids.iter().map(move |q| (p.clone(), q.clone())))
        .collect())
}

fn sr1(r: &RingRef, rec: &mut Record) -> Result<()> {
    let pairs = idempotent_pairs(r)?;
    let (mut solvable, mut unsolvable, mut equations) = (0, 0, 0);
    for (p, q) in &pairs {
        let corner = SkewCorner::new(r, p.value().clone(), q.value().clone())?;
        match skew_sr1_check(&corner)? {
            Sr1Outcome::Solver(s) => {
                solvable += 1;
                equations += sweep_into(rec, s.as_ref())?;
            }
            Sr1Outcome::Counterexample(eq) => {
                unsolvable += 1;
                if !is_unsolvable(&corner, &eq)? {
                    rec.fail(format!("counterexample for ({}, {}) is solvable", r.show(p.value()), r.show(q.value())));
                }
                rec.witnesses.push(Witness::unsolvable(&corner, &eq));
            }
        }
    }
    rec.set_detail(json!({
        "pairs": pairs.len(),
        "solvable": solvable,
        "unsolvable": unsolvable,
        "equations_checked": equations,
    }));
    Ok(())
}

/// Up to `limit` right unimodular rows of length `len`, preferring rows whose
/// `a`-part alone is not unimodular.
fn sample_rows(idx: &RangeIndex, len: usize, limit: usize) -> Vec<Vec<usize>> {
    let size = idx.len();
    let (mut hard, mut easy) = (vec![], vec![]);
    let mut t = vec![0usize; len];
    let mut visited = 0usize;
    loop {
        if idx.is_unimodular(&t) {
            if idx.is_unimodular(&t[..len - 1]) {
                if easy.len() < limit {
                    easy.push(t.clone());
                }
            } else {
                hard.push(t.clone());
            }
        }
        visited += 1;
        if hard.len() >= limit || visited >= 1 << 16 {
            break;
        }
        let mut k = len;
        loop {
            if k == 0 {
                hard.extend(easy);
                hard.truncate(limit);
                return hard;
            }
            k -= 1;
            t[k] += 1;
            if t[k] < size {
                break;
            }
            t[k] = 0;
        }
    }
    hard.extend(easy);
    hard.truncate(limit);
    hard
}

fn elems(idx: &RangeIndex, row: &[usize]) -> Vec<Elem> {
    row.iter().map(|&i| idx.element(i).clone()).collect()
}

fn reduce_into(rec: &mut Record, reducer: &dyn Reducer, row: &[Elem]) -> Result<()> {
    let red = reducer.reduce(row)?;
    rec.witnesses.push(Witness::reduction(reducer.ring(), row, &red));
    Ok(())
}

fn row_corner_agreement(r: &RingRef, rec: &mut Record) -> Result<()> {
    let idx = Arc::new(RangeIndex::build(r)?);
    let mut rows = vec![];
    for n in 1..=2 {
        let violation = idx.irreducible_row(n)?;
        let corner = row_corner(r, n)?;
        let outcome = skew_sr1_check(&corner)?;
        let solvable = outcome.solver().is_some();
        if violation.is_none() != solvable {
            rec.fail(format!("n = {n}: sr <= n is {}, corner solvable is {solvable}", violation.is_none()));
        }
        let mut checked = 0;
        match (&violation, &outcome) {
            (None, Sr1Outcome::Solver(s)) => {
                rec.witnesses.push(sample_solution(s.as_ref())?);
                let back = reducer_from_corner_solver(s.clone())?;
                let forward = corner_solver_from_reducer(Arc::new(FiniteReducer::from_index(idx.clone(), n)?))?;
                checked += sweep_into(rec, forward.as_ref())?;
                let sample = sample_rows(&idx, n + 1, 32);
                for (i, row) in sample.iter().enumerate() {
                    let row = elems(&idx, row);
                    if i == 0 {
                        reduce_into(rec, back.as_ref(), &row)?;
                    } else {
                        back.reduce(&row)?;
                    }
                }
                checked += sample.len();
            }
            _ => {
                if let Some(row) = &violation {
                    rec.witnesses.push(Witness::irreducible(r, &elems(&idx, row)));
                }
                if let Some(eq) = outcome.counterexample() {
                    rec.witnesses.push(Witness::unsolvable(&corner, eq));
                }
            }
        }
        rows.push(json!({"n": n, "sr_at_most_n": violation.is_none(), "corner_solvable": solvable, "checked": checked}));
    }
    rec.set_detail(json!({ "ranks": rows }));
    Ok(())
}

fn subequivalence(r: &RingRef, rec: &mut Record) -> Result<()> {
    let pairs = idempotent_pairs(r)?;
    let (mut solvers, mut refuted) = (0, 0);
    for (p, q) in &pairs {
        let corner = SkewCorner::new(r, p.value().clone(), q.value().clone())?;
        let sub = subequivalent(p, q)?;
        match skew_sr1_check(&corner)? {
            Sr1Outcome::Solver(s) => {
                solvers += 1;
                if sub.is_none() {
                    rec.fail(format!("solver for ({}, {}) without subequivalence", r.show(p.value()), r.show(q.value())));
                }
                let w = subequivalence_from_solver(s.as_ref())?;
                if &r.mul(&w.a, &w.b) != p.value() {
                    rec.fail("probe witness does not multiply to p");
                }
                rec.witnesses.push(Witness::subequivalence(r, p.value(), q.value(), &w));
            }
            Sr1Outcome::Counterexample(eq) => {
                if sub.is_none() {
                    refuted += 1;
                    rec.witnesses.push(Witness::unsolvable(&corner, &eq));
                }
            }
        }
    }
    rec.set_detail(json!({"pairs": pairs.len(), "solvers": solvers, "not_subequivalent": refuted}));
    Ok(())
}

fn m2z2() -> RingRef {
    Ring::matrix(&Ring::zmod(2).unwrap(), 2).unwrap()
}

fn unit(r: &Ring, i: usize, j: usize) -> Elem {
    matrix_unit(r, i, j, &Elem::Res(1))
}

fn table(r: &RingRef, p: Elem, q: Elem) -> Result<SolverRef> {
    let c = SkewCorner::new(r, p, q)?;
    skew_sr1_check(&c)?
        .solver()
        .map(|s| s.clone() as SolverRef)
        .ok_or_else(|| Error::SolverFailure("corner is not stable rank one".into()))
}

fn with_sweep(check: &str, name: &str, r: &RingRef, build: impl FnOnce() -> Result<SolverRef>) -> Record {
    scenario(check, name, r, |rec| {
        let s = build()?;
        let n = sweep_into(rec, s.as_ref())?;
        rec.parameters = json!({"p": r.show(s.corner().p()), "q": r.show(s.corner().q())});
        rec.set_detail(json!({ "equations_checked": n }));
        Ok(())
    })
}

fn transforms() -> Vec<Record> {
    let r = m2z2();
    let (e11, e22, e12, e21) = (unit(&r, 0, 0), unit(&r, 1, 1), unit(&r, 0, 1), unit(&r, 1, 0));
    let w = EquivalenceWitness::new(e12.clone(), e21.clone());
    let name = "m2-zmod2";
    let check = "transforms";
    let mut out = vec![
        with_sweep(&format!("{check}/transport"), name, &r, || {
            Ok(transport(table(&r, e11.clone(), e11.clone())?, &w, &w, e22.clone(), e22.clone())?)
        }),
        with_sweep(&format!("{check}/extend"), name, &r, || {
            Ok(extend(table(&r, e11.clone(), e11.clone())?, e22.clone())?)
        }),
        with_sweep(&format!("{check}/restrict"), name, &r, || {
            Ok(restrict(table(&r, r.one(), r.one())?, e22.clone())?)
        }),
        with_sweep(&format!("{check}/combine"), name, &r, || {
            combine(table(&r, e11.clone(), e11.clone())?, &w, e22.clone())
        }),
    ];
    out.push(scenario(&format!("{check}/steps"), name, &r, |rec| {
        // shift, right and left units on every equation of (1, 1), solved
        // on the rewritten equation and carried back
        let corner = SkewCorner::new(&r, r.one(), r.one())?;
        let solver = table(&r, r.one(), r.one())?;
        let one = r.one();
        let (u, v) = (r.add(&one, &e12), r.add(&one, &e21));
        let steps = [
            Step::Shift { c: e12.clone() },
            Step::RightUnit { u: u.clone(), u_inv: u },
            Step::LeftUnit { v: v.clone(), v_inv: v },
        ];
        let (els, opp) = (corner.elements()?, corner.opposite_elements()?);
        let mut n = 0;
        for a in &els {
            for x in &opp {
                let eq = CornerEquation::new(a.clone(), x.clone(), r.sub(&one, &r.mul(a, x)));
                let mut st = StepStack::new(&corner, &eq);
                for s in &steps {
                    st.push(s)?;
                }
                let sol = st.unwind(solver.solve(st.eq())?)?;
                if !crate::stablerank::verify_solution(&corner, &eq, &sol) {
                    rec.fail(format!("carried-back solution fails for a={} x={}", r.show(a), r.show(x)));
                } else if n == 0 || (a == els.last().unwrap() && x == opp.last().unwrap()) {
                    rec.witnesses.push(Witness::solution(&corner, &eq, &sol));
                }
                n += 1;
            }
        }
        rec.set_detail(json!({ "equations_checked": n, "steps": steps.len() }));
        Ok(())
    }));
    out
}

fn combines() -> Vec<Record> {
    let check = "combine";
    let r = m2z2();
    let (e11, e22) = (unit(&r, 0, 0), unit(&r, 1, 1));
    let w = EquivalenceWitness::new(unit(&r, 0, 1), unit(&r, 1, 0));
    let mut out = vec![with_sweep(&format!("{check}/equivalent"), "m2-zmod2", &r, || {
        combine(table(&r, e11.clone(), e11.clone())?, &w, e22.clone())
    })];

    let r3 = Ring::matrix(&Ring::zmod(2).unwrap(), 3).unwrap();
    out.push(with_sweep(&format!("{check}/not-below"), "m3-zmod2", &r3, || {
        let w = EquivalenceWitness::new(unit(&r3, 0, 2), unit(&r3, 2, 0));
        combine(table(&r3, unit(&r3, 0, 0), unit(&r3, 1, 1))?, &w, unit(&r3, 2, 2))
    }));

    let t = Ring::triangular(&Ring::zmod(2).unwrap(), 2).unwrap();
    let mt = Ring::matrix(&t, 2).unwrap();
    out.push(scenario(&format!("{check}/triangular"), "m2-t2-zmod2", &mt, |rec| {
        let one = t.one();
        let w = EquivalenceWitness::new(matrix_unit(&mt, 0, 1, &one), matrix_unit(&mt, 1, 0, &one));
        let p = matrix_unit(&mt, 0, 0, &one);
        let s = combine(table(&mt, p.clone(), p)?, &w, matrix_unit(&mt, 1, 1, &one))?;
        let els = s.corner().elements()?;
        let mut n = 0;
        for (i, a) in els.iter().enumerate().step_by(37) {
            for x in els.iter().skip(i % 23).step_by(53) {
                let eq = CornerEquation::new(a.clone(), x.clone(), mt.sub(&mt.one(), &mt.mul(a, x)));
                let sol = s.solve(&eq)?;
                if n % 64 == 0 {
                    rec.witnesses.push(Witness::solution(s.corner(), &eq, &sol));
                }
                n += 1;
            }
        }
        rec.set_detail(json!({ "equations_checked": n, "sampled": true }));
        Ok(())
    }));

    // Z/2 in M_21: p = q = slot 0, r = slots 1..3, r <~ 2.p, two doublings
    let z2 = Ring::zmod(2).unwrap();
    let big = Ring::matrix(&z2, 21).unwrap();
    out.push(scenario(&format!("{check}/doubling"), "m21-zmod2", &big, |rec| {
        let layout = BlockLayout { block: 3, copies: 2 };
        let rr = diagonal_at(&big, 1..3, &Elem::Res(1));
        let (mut a, mut b) = (big.zero(), big.zero());
        for j in 0..2 {
            a = big.add(&a, &unit(&big, 1 + j, 3 * j));
            b = big.add(&b, &unit(&big, 3 * j, 1 + j));
        }
        let one = Ring::matrix(&z2, 1)?;
        let base = grow(table(&one, one.one(), one.one())?, &big)?;
        let s = absorb(base, rr, &EquivalenceWitness::new(a, b), layout)?;
        let small = Ring::matrix(&z2, 3)?;
        let emb = crate::ring::embed::MatrixEmbedding::between(&small, &big)?;
        let els = small.enumerate(1 << 16)?.elements().to_vec();
        let pr = s.corner().p().clone();
        let mut n = 0;
        for (i, a) in els.iter().enumerate().step_by(5) {
            let x = &els[(i * 7 + 3) % els.len()];
            let (a, x) = (emb.embed(a), emb.embed(x));
            let eq = CornerEquation::new(a.clone(), x.clone(), big.sub(&pr, &big.mul(&a, &x)));
            let sol = s.solve(&eq)?;
            if n == 0 {
                rec.witnesses.push(Witness::solution(s.corner(), &eq, &sol));
            }
            n += 1;
        }
        rec.parameters = json!({"block": layout.block, "copies": layout.copies, "ambient": layout.required_size()});
        rec.set_detail(json!({ "equations_checked": n, "sampled": true }));
        Ok(())
    }));
    out
}

/// Least `n <= 3` satisfying the stable range condition, from an index.
fn rank_of(idx: &RangeIndex) -> Result<(usize, Vec<Vec<usize>>)> {
    let mut bad = vec![];
    for n in 1..=3 {
        match idx.irreducible_row(n)? {
            None => return Ok((n, bad)),
            Some(row) => bad.push(row),
        }
    }
    Err(Error::Unsupported("stable rank above 3".into()))
}

fn full_idempotents(r: &RingRef) -> Result<Vec<(Idempotent, crate::idempotent::FullnessCertificate)>> {
    let mut out = vec![];
    for p in enumerate_idempotents(r)? {
        if r.is_zero(p.value()) {
            continue;
        }
        if let Some(cert) = is_full(&p)?.certificate {
            out.push((p, cert));
        }
    }
    Ok(out)
}

fn full_corner(r: &RingRef, rec: &mut Record) -> Result<()> {
    let idx = RangeIndex::build(r)?;
    let mut rows_checked = 0;
    let mut per = vec![];
    for (p, cert) in full_idempotents(r)? {
        let b = Ring::corner(r, p.value())?;
        let bidx = Arc::new(RangeIndex::build(&b)?);
        let (n, _) = rank_of(&bidx)?;
        let red = Arc::new(FiniteReducer::from_index(bidx, n)?);
        let full = reducer_from_full_corner(r, p.value(), CornerSource::Reducer(red), &cert)?;
        let (mut agree, mut reduced) = (0, 0);
        let size = idx.len();
        let mut t = vec![0usize; n + 1];
        let mut first = true;
        loop {
            if idx.is_unimodular(&t) {
                let expected = idx.first_reduction(&t).is_some();
                let row = elems(&idx, &t);
                let got = full.reduce(&row);
                if got.is_ok() == expected {
                    agree += 1;
                } else {
                    rec.fail(format!("row {:?}: search says {expected}, pipeline {:?}", t, got.as_ref().err()));
                }
                if let Ok(red) = got {
                    reduced += 1;
                    let nontrivial = !idx.is_unimodular(&t[..n]);
                    if nontrivial && first {
                        rec.witnesses.push(Witness::reduction(r, &row, &red));
                        first = false;
                    }
                }
                rows_checked += 1;
            }
            let mut k = n + 1;
            let done = loop {
                if k == 0 {
                    break true;
                }
                k -= 1;
                t[k] += 1;
                if t[k] < size {
                    break false;
                }
                t[k] = 0;
            };
            if done {
                break;
            }
        }
        if first {
            let row = vec![r.one(); n + 1];
            reduce_into(rec, full.as_ref(), &row)?;
        }
        let plan = full.plan();
        per.push(json!({
            "p": r.show(p.value()), "n": n, "t": plan.t, "ambient_size": plan.size,
            "unimodular_rows": agree, "reduced": reduced,
        }));
    }
    rec.set_detail(json!({ "full_idempotents": per, "rows_checked": rows_checked }));
    Ok(())
}

fn corner_idempotents(r: &RingRef, rec: &mut Record) -> Result<()> {
    let (sr_a, _) = rank_of(&RangeIndex::build(r)?)?;
    let mut per = vec![];
    for (p, cert) in full_idempotents(r)? {
        let pairs = cert.pairs(r);
        let c = corner_idempotent(r, p.value(), &pairs)?;
        let b = Ring::corner(r, p.value())?;
        let (sr_b, _) = rank_of(&RangeIndex::build(&b)?)?;
        let bound = c.bound(sr_a as u64);
        if !c.checks.passed() {
            rec.fail(format!("checks failed for p = {}: {:?}", r.show(p.value()), c.checks));
        }
        if bound < sr_b as u64 {
            rec.fail(format!("bound {bound} below sr(pAp) = {sr_b}"));
        }
        rec.witnesses.push(corner_witness(r, p.value(), &pairs, &c.q, sr_a, sr_b, bound));
        per.push(json!({"p": r.show(p.value()), "n": pairs.len(), "checks": c.checks, "bound": bound, "sr_corner": sr_b}));
    }
    rec.set_detail(json!({ "sr_ring": sr_a, "full_idempotents": per }));
    Ok(())
}

fn corner_witness(r: &RingRef, p: &Elem, pairs: &[(Elem, Elem)], q: &Elem, sr_a: usize, sr_b: usize, bound: u64) -> Witness {
    use crate::ring::literal::to_literal;
    Witness::CornerIdempotent {
        ring: r.spec(),
        p: to_literal(p),
        pairs: pairs.iter().map(|(a, b)| (to_literal(a), to_literal(b))).collect(),
        q: to_literal(q),
        sr_ring: sr_a as u64,
        sr_corner: sr_b as u64,
        bound,
    }
}

fn given_pairs_record(check: &str) -> Record {
    let r = m2z2();
    scenario(&format!("{check}/given-pairs"), "m2-zmod2", &r, |rec| {
        let p = unit(&r, 0, 0);
        let pairs = [(p.clone(), p.clone()), (unit(&r, 1, 0), unit(&r, 0, 1))];
        let c = corner_idempotent(&r, &p, &pairs)?;
        let (sr_a, _) = rank_of(&RangeIndex::build(&r)?)?;
        let (sr_b, _) = rank_of(&RangeIndex::build(&Ring::corner(&r, &p)?)?)?;
        let bound = c.bound(sr_a as u64);
        if !c.checks.passed() || c.checks.full_by_closure != Some(true) || bound < sr_b as u64 {
            rec.fail(format!("checks {:?}, bound {bound}, sr(pAp) {sr_b}", c.checks));
        }
        rec.parameters = json!({"n": 2});
        rec.set_detail(json!({"checks": c.checks, "q": c.ring.show(&c.q), "sr_ring": sr_a, "sr_corner": sr_b, "bound": bound}));
        rec.witnesses.push(corner_witness(&r, &p, &pairs, &c.q, sr_a, sr_b, bound));
        Ok(())
    })
}

fn vaserstein(r: &RingRef, rec: &mut Record) -> Result<()> {
    let (sr_a, _) = rank_of(&RangeIndex::build(r)?)?;
    let m = Ring::matrix(r, 2)?;
    let midx = Arc::new(RangeIndex::build(&m)?);
    let (sr_m, bad) = rank_of(&midx)?;
    let formula = vaserstein_bound(sr_a as u64, 2)?;
    if sr_m as u64 != formula {
        rec.fail(format!("sr(M_2(A)) = {sr_m}, formula gives {formula}"));
    }
    rec.witnesses.push(Witness::Formula {
        sr_ring: sr_a as u64,
        n: 2,
        value: formula,
    });
    for row in bad {
        rec.witnesses.push(Witness::irreducible(&m, &elems(&midx, &row)));
    }
    let red = FiniteReducer::from_index(midx.clone(), sr_m)?;
    if let Some(row) = sample_rows(&midx, sr_m + 1, 1).first() {
        reduce_into(rec, &red, &elems(&midx, row))?;
    }
    rec.set_detail(json!({"sr_ring": sr_a, "sr_matrix": sr_m, "formula": formula}));
    Ok(())
}

fn hand_values_record(check: &str) -> Record {
    timed(|| {
        let mut rec = Record::new(&format!("{check}/formula"), None);
        let cases = [(1u64, 3u64, 1u64), (2, 2, 2), (5, 2, 3)];
        for (sr, n, want) in cases {
            match vaserstein_bound(sr, n) {
                Ok(v) if v == want => rec.witnesses.push(Witness::Formula { sr_ring: sr, n, value: v }),
                other => rec.fail(format!("({sr}, {n}) gave {other:?}, expected {want}")),
            }
        }
        rec.set_detail(json!({ "cases": cases.len() }));
        rec
    })
}

/// Overall outcome, for exit codes.
pub fn outcome_of(records: &[Record]) -> Outcome {
    let mut r = Report::new("", None);
    r.records = records.to_vec();
    r.outcome()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::corpus::builtin_corpus;
    use crate::harness::report::replay;

    fn small() -> Vec<CorpusEntry> {
        builtin_corpus().into_iter().filter(|e| ["zmod4", "zmod2xzmod2"].contains(&e.name.as_str())).collect()
    }

    #[test]
    fn names_round_trip() {
        for b in Battery::ALL {
            assert_eq!(Battery::parse(b.name()), Some(b));
        }
        assert_eq!(Battery::parse("nope"), None);
    }

    #[test]
    fn small_batteries_pass_and_replay() {
        for b in [
            Battery::Sr1,
            Battery::RowCorner,
            Battery::Subequivalence,
            Battery::FullCorner,
            Battery::CornerIdempotent,
            Battery::Vaserstein,
        ] {
            let rep = run_battery(b, &small());
            assert!(rep.passed(), "{}: {}", b.name(), rep.to_json());
            let rp = replay(&rep);
            assert!(rp.passed(), "{}: {rp:?}", b.name());
        }
    }

    #[test]
    fn infinite_entry_is_unsupported() {
        let e = CorpusEntry::new("z", crate::ring::literal::RingSpec::Integers);
        let rep = run_battery(Battery::Sr1, &[e]);
        assert_eq!(rep.outcome(), Outcome::Unsupported);
    }
}
