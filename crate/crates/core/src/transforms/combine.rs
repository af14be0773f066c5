//! Growing a stable-rank-one corner `(p, q)` to `(p + r, q + r)` for an
//! idempotent `r` orthogonal to `p` and `q`: directly when `r ~ p`, and by
//! repeated doubling inside a larger matrix ring when only `r <~ k.p`.

use std::sync::Arc;

use serde_json::json;

use super::blocks::{shift, shift_witness, support};
use super::corner_ops::{restrict, subequivalence_from_solver, transport};
use super::steps::{Step, StepStack};
use crate::error::{Error, Result};
use crate::idempotent::{leq_elems, orthogonal_elems, EquivalenceWitness};
use crate::ring::Elem;
use crate::stablerank::{CornerEquation, CornerSolution, SkewCorner, Solver, SolverRef};
use crate::trace::{lit, PipelineTrace};

/// Solver for `(p + r, q + r)` with `p <= q`, `p ~ r` and `r` orthogonal
/// to `q`.
pub struct CombineSolver {
    corner: SkewCorner,
    p: Elem,
    q: Elem,
    r: Elem,
    pq: SolverRef,
    rq: SolverRef,
}

/// Solver for `(p + r, q + r)` from a solver for `(p, q)`, a witness
/// `p ~ r` and `r` orthogonal to `p` and `q`. When `p` is not below `q`,
/// `p` is first replaced by the equivalent `p' <= q` read off the solver.
pub fn combine(pq: SolverRef, w: &EquivalenceWitness, r: Elem) -> Result<SolverRef> {
    let c = pq.corner().clone();
    let ring = c.ring();
    let (p, q) = (c.p().clone(), c.q().clone());
    if !w.verifies_equivalence(ring, &p, &r) {
        return Err(Error::InvalidWitness("witness is not an equivalence p ~ r".into()));
    }
    if !orthogonal_elems(ring, &r, &p) || !orthogonal_elems(ring, &r, &q) {
        return Err(Error::InvalidWitness("r is not orthogonal to p and q".into()));
    }
    if leq_elems(ring, &p, &q) {
        return Ok(combine_below(pq, w, r)?);
    }
    // p ~ p' = zy <= q via the probe witness (y, z)
    let probe = subequivalence_from_solver(pq.as_ref())?;
    let p2 = probe.induced(ring);
    let moved = transport(pq, &probe, &EquivalenceWitness::identity(&q), p2.clone(), q.clone())?;
    let back = probe.reversed();
    let w2 = back.compose(ring, w);
    let inner = combine_below(moved, &w2, r.clone())?;
    let rr = EquivalenceWitness::identity(&r);
    let to_p = back.orthogonal_sum(ring, &rr);
    let qr = ring.add(&q, &r);
    Ok(transport(
        inner,
        &to_p,
        &EquivalenceWitness::identity(&qr),
        ring.add(&p, &r),
        qr,
    )?)
}

fn combine_below(pq: SolverRef, w: &EquivalenceWitness, r: Elem) -> Result<Arc<CombineSolver>> {
    let c = pq.corner().clone();
    let ring = c.ring();
    let (p, q) = (c.p().clone(), c.q().clone());
    let rq = transport(pq.clone(), w, &EquivalenceWitness::identity(&q), r.clone(), q.clone())?;
    let corner = SkewCorner::new(ring, ring.add(&p, &r), ring.add(&q, &r))?;
    Ok(Arc::new(CombineSolver {
        corner,
        p,
        q,
        r,
        pq,
        rq,
    }))
}

impl Solver for CombineSolver {
    fn corner(&self) -> &SkewCorner {
        &self.corner
    }

    fn solve_traced(&self, eq: &CornerEquation, trace: &mut PipelineTrace) -> Result<CornerSolution> {
        let ring = self.corner.ring().clone();
        let (p, q, r) = (&self.p, &self.q, &self.r);
        let (pr, e) = (self.corner.p().clone(), self.corner.q().clone());
        let mut stack = StepStack::new(&self.corner, eq);

        // r-row equation on (r, q)
        let (a, x, b) = (&eq.a, &eq.x, &eq.b);
        let rx = ring.mul_all(&[r, x, r]);
        let row_r = CornerEquation::new(
            ring.mul_all(&[r, a, q]),
            ring.mul_all(&[q, x, r]),
            ring.add(&ring.mul_all(&[r, a, &rx]), &ring.mul_all(&[r, b, r])),
        );
        let s1 = self.rq.solve_with(&row_r, trace)?;
        let rxy = ring.mul_all(&[r, x, &s1.y]);
        push(
            &mut stack,
            trace,
            Step::RightUnit {
                u: ring.add(&e, &rxy),
                u_inv: ring.sub(&e, &rxy),
            },
        )?;
        push(&mut stack, trace, Step::Shift { c: s1.y.clone() })?;
        let a1 = stack.eq().a.clone();
        if ring.mul_all(&[r, &a1, &s1.z]) != *r {
            return Err(Error::Invariant("r a z1 != r after the first unit".into()));
        }

        // force r a r = r
        let rar = ring.mul_all(&[r, &a1, r]);
        let n = ring.mul(&s1.z, &ring.sub(r, &rar));
        push(
            &mut stack,
            trace,
            Step::RightUnit {
                u: ring.add(&e, &n),
                u_inv: ring.sub(&e, &n),
            },
        )?;
        let a2 = stack.eq().a.clone();
        if ring.mul_all(&[r, &a2, r]) != *r {
            return Err(Error::Invariant("r a r != r".into()));
        }

        // force p a r = 0
        let par = ring.mul_all(&[p, &a2, r]);
        push(
            &mut stack,
            trace,
            Step::LeftUnit {
                v: ring.sub(&pr, &par),
                v_inv: ring.add(&pr, &par),
            },
        )?;
        let cur = stack.eq().clone();
        if !ring.is_zero(&ring.mul_all(&[p, &cur.a, r])) {
            return Err(Error::Invariant("p a r != 0".into()));
        }

        // p-row equation on (p, q)
        let row_p = CornerEquation::new(
            ring.mul_all(&[p, &cur.a, q]),
            ring.mul_all(&[q, &cur.x, p]),
            ring.mul_all(&[p, &cur.b, p]),
        );
        let s2 = self.pq.solve_with(&row_p, trace)?;
        let a3 = ring.add(&cur.a, &ring.mul(&cur.b, &s2.y));
        let z = ring.add(&ring.sub(&s2.z, &ring.mul_all(&[r, &a3, &s2.z])), r);
        let sol = CornerSolution::new(s2.y.clone(), z);
        trace.record("combine", || {
            vec![
                ("p", lit(p)),
                ("q", lit(q)),
                ("r", lit(r)),
                ("steps", json!(stack.len())),
            ]
        });
        stack.unwind(sol)
    }
}

fn push(stack: &mut StepStack, trace: &mut PipelineTrace, step: Step) -> Result<()> {
    trace.record(step.name(), || step.to_json());
    stack.push(&step).map_err(|e| match e {
        Error::InvalidWitness(s) => Error::Invariant(s),
        other => other,
    })
}

/// Layout for [`absorb`]: `p`, `q` and `r` live in the first `block` slots
/// of a matrix ring `M_N(A)`, and `k.p` means copies of `p` shifted by
/// multiples of `block`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockLayout {
    pub block: usize,
    pub copies: usize,
}

impl BlockLayout {
    /// Least `m` with `2^m - 1 >= copies`.
    pub fn doublings(&self) -> u32 {
        let mut m = 0;
        while (1usize << m) - 1 < self.copies {
            m += 1;
        }
        m
    }

    /// Slots needed by [`absorb`] when the witness is not already an
    /// equivalence with `p`.
    pub fn required_size(&self) -> usize {
        if self.copies == 0 {
            self.block
        } else {
            ((1usize << (self.doublings() + 1)) - 1) * self.block
        }
    }
}

/// `k.p`: copies of `p` in blocks `0..k`.
pub fn copies(ring: &crate::ring::Ring, p: &Elem, block: usize, k: usize) -> Result<Elem> {
    (0..k).try_fold(ring.zero(), |acc, j| Ok(ring.add(&acc, &shift(ring, p, j * block)?)))
}

/// Solver for `(p + r, q + r)` from a solver for `(p, q)` with `p <= q`,
/// given `r` orthogonal to both and a witness `r <~ k.p`. Doubles `p` by
/// repeated [`combine`] until `2^m - 1 >= k`, trades the surplus copies
/// for `r` plus a padding idempotent `s` in the last blocks, and restricts
/// `s` away.
pub fn absorb(
    pq: SolverRef,
    r: Elem,
    w: &EquivalenceWitness,
    layout: BlockLayout,
) -> Result<SolverRef> {
    let c = pq.corner().clone();
    let ring = c.ring().clone();
    let (p, q) = (c.p().clone(), c.q().clone());
    let size = ring
        .matrix_size()
        .ok_or_else(|| Error::Unsupported("absorb needs a matrix ring".into()))?;
    let wb = layout.block;
    for e in [&p, &q, &r] {
        if support(&ring, e).last().is_some_and(|&s| s >= wb) {
            return Err(Error::InvalidWitness("idempotent outside the home block".into()));
        }
    }
    if !leq_elems(&ring, &p, &q) {
        return Err(Error::InvalidWitness("absorb expects p <= q".into()));
    }
    if !orthogonal_elems(&ring, &r, &p) || !orthogonal_elems(&ring, &r, &q) {
        return Err(Error::InvalidWitness("r is not orthogonal to p and q".into()));
    }
    if ring.is_zero(&r) {
        return Ok(pq);
    }
    let k = layout.copies;
    let kp = copies(&ring, &p, wb, k)?;
    if k == 0 || !w.verifies_subequivalence(&ring, &r, &kp) {
        return Err(Error::InvalidWitness("witness is not r <~ k.p".into()));
    }
    if k == 1 && w.verifies_equivalence(&ring, &r, &p) {
        return combine(pq, &w.reversed(), r);
    }
    let need = layout.required_size();
    if size < need {
        return Err(Error::AmbientTooSmall {
            required: need,
            available: size,
        });
    }
    let m = layout.doublings();
    let (mut pm, mut qm, mut sl) = (p.clone(), q.clone(), pq);
    for i in 0..m {
        let d = (1usize << i) * wb;
        let rk = shift(&ring, &pm, d)?;
        let wk = shift_witness(&ring, &pm, d)?;
        sl = combine(sl, &wk, rk.clone())?;
        pm = ring.add(&pm, &rk);
        qm = ring.add(&qm, &rk);
    }
    // surplus F = copies in blocks 1..2^m, split as r' + r''
    let surplus = ring.sub(&pm, &p);
    let ba = w.induced(&ring);
    let r1 = shift(&ring, &ba, wb)?;
    let r_to_r1 = w.compose(&ring, &shift_witness(&ring, &ba, wb)?);
    if !leq_elems(&ring, &r1, &surplus) {
        return Err(Error::Invariant("shifted copy of r is not inside the surplus".into()));
    }
    let r2 = ring.sub(&surplus, &r1);
    let last = ((1usize << m) - 1) * wb;
    let s = shift(&ring, &r2, last)?;
    let r2_to_s = shift_witness(&ring, &r2, last)?;
    let swap = r_to_r1.reversed().orthogonal_sum(&ring, &r2_to_s);
    let pw = EquivalenceWitness::identity(&p).orthogonal_sum(&ring, &swap);
    let qw = EquivalenceWitness::identity(&q).orthogonal_sum(&ring, &swap);
    let rs = ring.add(&r, &s);
    let moved = transport(sl, &pw, &qw, ring.add(&p, &rs), ring.add(&q, &rs))?;
    Ok(restrict(moved, s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::embed::{diagonal_at, matrix_unit};
    use crate::ring::{Ring, RingRef};
    use crate::stablerank::{skew_sr1_check, sweep};

    fn m2z2() -> RingRef {
        Ring::matrix(&Ring::zmod(2).unwrap(), 2).unwrap()
    }

    fn unit(r: &RingRef, i: usize, j: usize) -> Elem {
        matrix_unit(r, i, j, &Elem::Res(1))
    }

    fn brute(r: &RingRef, p: Elem, q: Elem) -> SolverRef {
        let c = SkewCorner::new(r, p, q).unwrap();
        skew_sr1_check(&c).unwrap().solver().unwrap().clone()
    }

    #[test]
    fn combine_on_m2z2() {
        let r = m2z2();
        let (e11, e22) = (unit(&r, 0, 0), unit(&r, 1, 1));
        let w = EquivalenceWitness::new(unit(&r, 0, 1), unit(&r, 1, 0));
        let s = combine(brute(&r, e11.clone(), e11.clone()), &w, e22.clone()).unwrap();
        assert_eq!(s.corner().p(), &r.one());
        let sw = sweep(s.as_ref()).unwrap();
        assert_eq!(sw.equations, 256);
        assert!(sw.passed(), "{sw:?}");
        let eq = CornerEquation::new(r.one(), r.one(), r.zero());
        let sol = s.solve(&eq).unwrap();
        assert_eq!(sol.z, r.one());
    }

    #[test]
    fn combine_when_p_is_not_below_q() {
        // p = e11 and q = e22 in M_3(Z/2); r = e33
        let r = Ring::matrix(&Ring::zmod(2).unwrap(), 3).unwrap();
        let (e11, e22, e33) = (unit(&r, 0, 0), unit(&r, 1, 1), unit(&r, 2, 2));
        let w = EquivalenceWitness::new(unit(&r, 0, 2), unit(&r, 2, 0));
        let s = combine(brute(&r, e11.clone(), e22.clone()), &w, e33.clone()).unwrap();
        assert_eq!(s.corner().p(), &r.add(&e11, &e33));
        assert_eq!(s.corner().q(), &r.add(&e22, &e33));
        assert!(sweep(s.as_ref()).unwrap().passed());
    }

    #[test]
    fn combine_on_triangular_inside_m2() {
        // upper-triangular matrices over Z/2 sit in M_2(Z/2); use the
        // diagonal idempotents of M_2(T_2) as p and r
        let t = Ring::triangular(&Ring::zmod(2).unwrap(), 2).unwrap();
        let m = Ring::matrix(&t, 2).unwrap();
        let (e11, e22) = (matrix_unit(&m, 0, 0, &t.one()), matrix_unit(&m, 1, 1, &t.one()));
        let w = EquivalenceWitness::new(matrix_unit(&m, 0, 1, &t.one()), matrix_unit(&m, 1, 0, &t.one()));
        let s = combine(brute(&m, e11.clone(), e11), &w, e22).unwrap();
        let el = s.corner().elements().unwrap();
        assert_eq!(el.len(), 4096);
        for (i, a) in el.iter().enumerate().step_by(37) {
            for x in el.iter().skip(i % 23).step_by(53) {
                let b = m.sub(&m.one(), &m.mul(a, x));
                s.solve(&CornerEquation::new(a.clone(), x.clone(), b)).unwrap();
            }
        }
    }

    #[test]
    fn absorb_degenerate_and_single() {
        let r = Ring::matrix(&Ring::zmod(2).unwrap(), 2).unwrap();
        let (e11, e22) = (unit(&r, 0, 0), unit(&r, 1, 1));
        let base = brute(&r, e11.clone(), e11.clone());
        let same = absorb(
            base.clone(),
            r.zero(),
            &EquivalenceWitness::new(r.zero(), r.zero()),
            BlockLayout { block: 2, copies: 0 },
        )
        .unwrap();
        assert_eq!(same.corner(), base.corner());
        let w = EquivalenceWitness::new(unit(&r, 1, 0), unit(&r, 0, 1));
        let one = absorb(base, e22, &w, BlockLayout { block: 2, copies: 1 }).unwrap();
        assert!(sweep(one.as_ref()).unwrap().passed());
    }

    #[test]
    fn absorb_with_doubling() {
        // A = Z/2, p = q = slot 0, r = slots 1..3 (r <~ 3.p), home block 4
        let z2 = Ring::zmod(2).unwrap();
        let layout = BlockLayout { block: 4, copies: 3 };
        assert_eq!(layout.doublings(), 2);
        assert_eq!(layout.required_size(), 28);
        let ring = Ring::matrix(&z2, 28).unwrap();
        let p = matrix_unit(&ring, 0, 0, &Elem::Res(1));
        let r = diagonal_at(&ring, 1..4, &Elem::Res(1));
        let mut a = ring.zero();
        let mut b = ring.zero();
        for j in 0..3 {
            a = ring.add(&a, &matrix_unit(&ring, 1 + j, 4 * j, &Elem::Res(1)));
            b = ring.add(&b, &matrix_unit(&ring, 4 * j, 1 + j, &Elem::Res(1)));
        }
        let w = EquivalenceWitness::new(a, b);
        let base: SolverRef = {
            let small = Ring::matrix(&z2, 1).unwrap();
            let c = SkewCorner::new(&small, small.one(), small.one()).unwrap();
            let s = skew_sr1_check(&c).unwrap().solver().unwrap().clone();
            crate::transforms::blocks::grow(s, &ring).unwrap()
        };
        let s = absorb(base, r.clone(), &w, layout).unwrap();
        let pr = ring.add(&p, &r);
        assert_eq!(s.corner().p(), &pr);
        // every equation on (p + r, p + r) lives in the 4x4 upper-left block
        let small = Ring::matrix(&z2, 4).unwrap();
        let emb = crate::ring::embed::MatrixEmbedding::between(&small, &ring).unwrap();
        let en = small.enumerate(1 << 16).unwrap();
        let el = en.elements();
        let mut checked = 0;
        let t0 = std::time::Instant::now();
        for i in 0..40 {
            let (a, x) = (emb.embed(&el[(i * 7919) % el.len()]), emb.embed(&el[(i * 104729 + 13) % el.len()]));
            let b = ring.sub(&pr, &ring.mul(&a, &x));
            s.solve(&CornerEquation::new(a, x, b)).unwrap();
            checked += 1;
        }
        eprintln!("absorb solves: {:?}", t0.elapsed());
        assert_eq!(checked, 40);
    }

    #[test]
    fn absorb_needs_room() {
        let z2 = Ring::zmod(2).unwrap();
        let ring = Ring::matrix(&z2, 20).unwrap();
        let base: SolverRef = {
            let small = Ring::matrix(&z2, 1).unwrap();
            let c = SkewCorner::new(&small, small.one(), small.one()).unwrap();
            let s = skew_sr1_check(&c).unwrap().solver().unwrap().clone();
            crate::transforms::blocks::grow(s, &ring).unwrap()
        };
        let r = diagonal_at(&ring, 1..4, &Elem::Res(1));
        let mut a = ring.zero();
        let mut b = ring.zero();
        for j in 0..3 {
            a = ring.add(&a, &matrix_unit(&ring, 1 + j, 4 * j, &Elem::Res(1)));
            b = ring.add(&b, &matrix_unit(&ring, 4 * j, 1 + j, &Elem::Res(1)));
        }
        let res = absorb(base, r, &EquivalenceWitness::new(a, b), BlockLayout { block: 4, copies: 3 });
        assert!(matches!(
            res,
            Err(Error::AmbientTooSmall {
                required: 28,
                available: 20
            })
        ));
    }
}
