//! Solver transforms inside one ring: reading off a subequivalence,
//! transport along equivalences, extension by an orthogonal idempotent on
//! the right, and restriction along a common orthogonal summand.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::idempotent::{orthogonal_elems, EquivalenceWitness};
use crate::ring::Elem;
use crate::stablerank::{CornerEquation, CornerSolution, SkewCorner, Solver, SolverRef};
use crate::trace::{lit, PipelineTrace};

/// Witness `p <~ q` from a solver for `(p, q)`: the probe `0.0 + p = p`
/// yields `pyqzp = p`, hence `(py, zp)`.
pub fn subequivalence_from_solver(solver: &dyn Solver) -> Result<EquivalenceWitness> {
    let c = solver.corner();
    let r = c.ring();
    let eq = CornerEquation::new(r.zero(), r.zero(), c.p().clone());
    let sol = solver.solve(&eq)?;
    let w = EquivalenceWitness::new(r.mul(c.p(), &sol.y), r.mul(&sol.z, c.p()));
    if !w.verifies_subequivalence(r, c.p(), c.q()) {
        return Err(Error::Invariant("probe solution is not a subequivalence".into()));
    }
    Ok(w)
}

/// Solver for `(p', q')` from one for `(p, q)` and witnesses `p ~ p'`,
/// `q ~ q'`.
pub struct TransportSolver {
    inner: SolverRef,
    corner: SkewCorner,
    pw: EquivalenceWitness,
    qw: EquivalenceWitness,
}

pub fn transport(
    inner: SolverRef,
    pw: &EquivalenceWitness,
    qw: &EquivalenceWitness,
    p2: Elem,
    q2: Elem,
) -> Result<Arc<TransportSolver>> {
    let c = inner.corner();
    let r = c.ring();
    if !pw.verifies_equivalence(r, c.p(), &p2) {
        return Err(Error::InvalidWitness("left witness is not an equivalence p ~ p'".into()));
    }
    if !qw.verifies_equivalence(r, c.q(), &q2) {
        return Err(Error::InvalidWitness("right witness is not an equivalence q ~ q'".into()));
    }
    let corner = SkewCorner::new(r, p2, q2)?;
    Ok(Arc::new(TransportSolver {
        inner,
        corner,
        pw: pw.clone(),
        qw: qw.clone(),
    }))
}

impl Solver for TransportSolver {
    fn corner(&self) -> &SkewCorner {
        &self.corner
    }

    fn solve_traced(&self, eq: &CornerEquation, trace: &mut PipelineTrace) -> Result<CornerSolution> {
        let r = self.corner.ring();
        let (u, u2) = (&self.pw.a, &self.pw.b);
        let (v, v2) = (&self.qw.a, &self.qw.b);
        let moved = CornerEquation::new(
            r.mul_all(&[u, &eq.a, v2]),
            r.mul_all(&[v, &eq.x, u2]),
            r.mul_all(&[u, &eq.b, u2]),
        );
        trace.record("transport", || {
            vec![
                ("p", lit(self.inner.corner().p())),
                ("q", lit(self.inner.corner().q())),
                ("to_p", lit(self.corner.p())),
                ("to_q", lit(self.corner.q())),
            ]
        });
        let sol = self.inner.solve_with(&moved, trace)?;
        Ok(CornerSolution::new(r.mul_all(&[u2, &sol.y, v]), r.mul_all(&[v2, &sol.z, u])))
    }
}

/// Solver for `(p, q + s)` from one for `(p, q)`, where `s` is an
/// idempotent orthogonal to `q`.
pub struct ExtendSolver {
    inner: SolverRef,
    corner: SkewCorner,
    s: Elem,
}

pub fn extend(inner: SolverRef, s: Elem) -> Result<Arc<ExtendSolver>> {
    let c = inner.corner();
    let r = c.ring();
    r.ensure_member(&s)?;
    if !r.is_idempotent(&s) {
        return Err(Error::NotIdempotent(r.show(&s)));
    }
    if !orthogonal_elems(r, &s, c.q()) {
        return Err(Error::InvalidWitness("extension is not orthogonal to q".into()));
    }
    let corner = SkewCorner::new(r, c.p().clone(), r.add(c.q(), &s))?;
    Ok(Arc::new(ExtendSolver { inner, corner, s }))
}

impl Solver for ExtendSolver {
    fn corner(&self) -> &SkewCorner {
        &self.corner
    }

    fn solve_traced(&self, eq: &CornerEquation, trace: &mut PipelineTrace) -> Result<CornerSolution> {
        let r = self.corner.ring();
        let q = self.inner.corner().q();
        let s = &self.s;
        let folded = CornerEquation::new(
            r.mul(&eq.a, q),
            r.mul(q, &eq.x),
            r.add(&eq.b, &r.mul_all(&[&eq.a, s, &eq.x])),
        );
        let sol = self.inner.solve_with(&folded, trace)?;
        let qs = self.corner.q();
        let sxy = r.mul_all(&[s, &eq.x, &sol.y]);
        let u = r.add(qs, &sxy);
        let u_inv = r.sub(qs, &sxy);
        if &r.mul(&u, &u_inv) != qs {
            return Err(Error::Invariant("q + s + sxy is not inverted by q + s - sxy".into()));
        }
        trace.record("extend", || vec![("s", lit(s)), ("u", lit(&u))]);
        Ok(CornerSolution::new(r.mul(&sol.y, &u_inv), r.mul(&u, &sol.z)))
    }
}

/// Solver for `(p, q)` from one for `(p + r, q + r)`, where `r` is an
/// idempotent orthogonal to `p` and `q`.
pub struct RestrictSolver {
    inner: SolverRef,
    corner: SkewCorner,
    r: Elem,
}

pub fn restrict(inner: SolverRef, r: Elem) -> Result<Arc<RestrictSolver>> {
    let c = inner.corner();
    let ring = c.ring();
    ring.ensure_member(&r)?;
    if !ring.is_idempotent(&r) {
        return Err(Error::NotIdempotent(ring.show(&r)));
    }
    let p = ring.sub(c.p(), &r);
    let q = ring.sub(c.q(), &r);
    for e in [&p, &q] {
        if !ring.is_idempotent(e) || !orthogonal_elems(ring, e, &r) {
            return Err(Error::InvalidWitness(
                "restricted summand is not orthogonal to the remaining idempotents".into(),
            ));
        }
    }
    let corner = SkewCorner::new(ring, p, q)?;
    Ok(Arc::new(RestrictSolver { inner, corner, r }))
}

impl Solver for RestrictSolver {
    fn corner(&self) -> &SkewCorner {
        &self.corner
    }

    fn solve_traced(&self, eq: &CornerEquation, trace: &mut PipelineTrace) -> Result<CornerSolution> {
        let ring = self.corner.ring();
        let (p, q, r) = (self.corner.p(), self.corner.q(), &self.r);
        let lifted = CornerEquation::new(ring.add(&eq.a, r), ring.add(&eq.x, r), eq.b.clone());
        trace.record("restrict", || vec![("r", lit(r))]);
        let sol = self.inner.solve_with(&lifted, trace)?;
        if &ring.mul(r, &sol.z) != r {
            return Err(Error::Invariant("rz != r".into()));
        }
        let lhs = ring.mul(&ring.add(&eq.a, &ring.mul(&eq.b, &sol.y)), &sol.z);
        if &ring.mul(p, &lhs) != p {
            return Err(Error::Invariant("(a + by)z != p".into()));
        }
        Ok(CornerSolution::new(ring.mul_all(&[p, &sol.y, q]), ring.mul(&sol.z, p)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idempotent::{equivalent, Idempotent};
    use crate::ring::embed::matrix_unit;
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
    fn probe_witnesses() {
        let r = m2z2();
        let (e11, e22) = (unit(&r, 0, 0), unit(&r, 1, 1));
        let w = subequivalence_from_solver(brute(&r, e11.clone(), r.one()).as_ref()).unwrap();
        assert_eq!(r.mul(&w.a, &w.b), e11);
        let w = subequivalence_from_solver(brute(&r, e11.clone(), e22.clone()).as_ref()).unwrap();
        assert!(w.verifies_equivalence(&r, &e11, &e22));
        let w = subequivalence_from_solver(brute(&r, e11.clone(), e11.clone()).as_ref()).unwrap();
        assert_eq!(w, EquivalenceWitness::identity(&e11));
    }

    #[test]
    fn transport_there_and_back() {
        let r = m2z2();
        let (e11, e22) = (unit(&r, 0, 0), unit(&r, 1, 1));
        let w = equivalent(
            &Idempotent::new(&r, e11.clone()).unwrap(),
            &Idempotent::new(&r, e22.clone()).unwrap(),
        )
        .unwrap()
        .unwrap();
        let s = transport(brute(&r, e11.clone(), e11.clone()), &w, &w, e22.clone(), e22.clone()).unwrap();
        assert!(sweep(s.as_ref()).unwrap().passed());
        let back = transport(s, &w.reversed(), &w.reversed(), e11.clone(), e11.clone()).unwrap();
        assert!(sweep(back.as_ref()).unwrap().passed());
        let id = EquivalenceWitness::identity(&e11);
        let same = transport(brute(&r, e11.clone(), e11.clone()), &id, &id, e11.clone(), e11).unwrap();
        assert!(sweep(same.as_ref()).unwrap().passed());
    }

    #[test]
    fn extend_and_restrict() {
        let r = m2z2();
        let (e11, e22) = (unit(&r, 0, 0), unit(&r, 1, 1));
        let ext = extend(brute(&r, e11.clone(), e11.clone()), e22.clone()).unwrap();
        assert_eq!(ext.corner().q(), &r.one());
        assert!(sweep(ext.as_ref()).unwrap().passed());
        let zero = extend(brute(&r, e11.clone(), e11.clone()), r.zero()).unwrap();
        assert!(sweep(zero.as_ref()).unwrap().passed());
        assert!(extend(brute(&r, e11.clone(), e11.clone()), e11.clone()).is_err());

        let res = restrict(brute(&r, r.one(), r.one()), e22.clone()).unwrap();
        assert_eq!(res.corner().p(), &e11);
        assert!(sweep(res.as_ref()).unwrap().passed());
        let id = restrict(brute(&r, e11.clone(), r.one()), r.zero()).unwrap();
        assert!(sweep(id.as_ref()).unwrap().passed());
        assert!(restrict(brute(&r, e11.clone(), r.one()), e22).is_err());
    }
}
