//! A reducer for `A` at rank `n` from a reducer for the corner `pAp` at rank
//! `n`, when `p` is full.
//!
//! Everything happens in `M_N(A)` with home block width `W = n + t - 1`:
//! `p` sits in slot 0, the target row corner uses slots `0..n`, and the
//! `t - 1` extra copies of `p` needed to reach `1_A` sit in slots
//! `n..n+t-1`. Slots from `W` on hold the doubling copies, if any.

use std::sync::Arc;

use serde_json::json;

use super::blocks::{grow, shrink};
use super::combine::{absorb, BlockLayout};
use super::corner_ops::{extend, restrict, transport};
use super::row_corner::{corner_solver_from_reducer, reducer_from_corner_solver, CornerReducer};
use crate::error::{Error, Result};
use crate::idempotent::{EquivalenceWitness, FullnessCertificate};
use crate::ring::embed::{diagonal_at, matrix_unit};
use crate::ring::{Elem, Ring, RingRef};
use crate::stablerank::{Reducer, ReducerRef, Reduction, SkewCorner, SolverRef};
use crate::trace::{lit, PipelineTrace};

/// Where the corner solver for `(p, n.p)` comes from.
#[derive(Clone)]
pub enum CornerSource {
    /// A reducer for `pAp` at rank `n`.
    Reducer(ReducerRef),
    /// A solver for the corner `(p.e_11, n.p)` of `M_n(A)` (or of a larger
    /// matrix ring over `A`, in its upper-left block).
    Solver { solver: SolverRef, rank: usize },
}

/// The idempotents chosen inside `M_N(A)`.
#[derive(Debug, Clone)]
pub struct FullCornerPlan {
    pub rank: usize,
    pub t: usize,
    pub block: usize,
    pub size: usize,
    /// Equivalent to `1_A` in slot 0.
    pub e: Elem,
    /// `t.p - e`.
    pub f: Elem,
    /// `p` in slots `1..n`.
    pub g: Elem,
    /// `1 - p` in slots `1..n`.
    pub s: Elem,
}

pub struct FullCornerReducer {
    ring: RingRef,
    plan: FullCornerPlan,
    inner: Arc<CornerReducer>,
}

impl FullCornerReducer {
    pub fn plan(&self) -> &FullCornerPlan {
        &self.plan
    }
}

/// Ambient size for rank `n` and certificate length `t`.
pub fn ambient_size(n: usize, t: usize) -> usize {
    let layout = BlockLayout {
        block: n + t - 1,
        copies: t - 1,
    };
    if t <= 2 {
        layout.block
    } else {
        layout.required_size()
    }
}

pub fn reducer_from_full_corner(
    a: &RingRef,
    p: &Elem,
    source: CornerSource,
    cert: &FullnessCertificate,
) -> Result<Arc<FullCornerReducer>> {
    a.ensure_member(p)?;
    if !a.is_idempotent(p) {
        return Err(Error::NotIdempotent(a.show(p)));
    }
    if !cert.verify(a, p)? {
        return Err(Error::InvalidWitness("fullness certificate does not give 1 <~ t.p".into()));
    }
    let t = cert.t;
    let n = match &source {
        CornerSource::Reducer(r) => r.rank(),
        CornerSource::Solver { rank, .. } => *rank,
    };
    if n == 0 {
        return Err(Error::InvalidSize(0));
    }
    let w = n + t - 1;
    let size = ambient_size(n, t);
    let big = Ring::matrix(a, size)?;

    let base: SolverRef = match source {
        CornerSource::Reducer(red) => {
            if **red.ring() != *Ring::corner(a, p)? {
                return Err(Error::InvalidWitness("reducer is not for the corner pAp".into()));
            }
            grow(corner_solver_from_reducer(red)?, &big)?
        }
        CornerSource::Solver { solver, .. } => grow(solver, &big)?,
    };
    let p0 = matrix_unit(&big, 0, 0, p);
    let q0 = diagonal_at(&big, 0..n, p);
    if base.corner().p() != &p0 || base.corner().q() != &q0 {
        return Err(Error::InvalidWitness("base solver is not for the corner (p, n.p)".into()));
    }

    // r = copies of p in slots n..n+t-1, r <~ (t-1).p along the blocks
    let r = diagonal_at(&big, n..w, p);
    let (mut ra, mut rb) = (big.zero(), big.zero());
    for j in 0..t - 1 {
        ra = big.add(&ra, &matrix_unit(&big, n + j, j * w, p));
        rb = big.add(&rb, &matrix_unit(&big, j * w, n + j, p));
    }
    let layout = BlockLayout {
        block: w,
        copies: t - 1,
    };
    let grown = absorb(base, r, &EquivalenceWitness::new(ra, rb), layout)?;

    // e = beta.alpha placed on slots 0, n, .., n+t-2
    let slot = |j: usize| if j == 0 { 0 } else { n + j - 1 };
    let (mut row, mut col) = (big.zero(), big.zero());
    for (j, (aj, bj)) in cert.pairs(a).into_iter().enumerate() {
        row = big.add(&row, &matrix_unit(&big, 0, slot(j), &aj));
        col = big.add(&col, &matrix_unit(&big, slot(j), 0, &bj));
    }
    let e = big.mul(&col, &row);
    let tp = grown.corner().p().clone();
    let f = big.sub(&tp, &e);
    let g = diagonal_at(&big, 1..n, p);
    let s = diagonal_at(&big, 1..n, &a.sub(&a.one(), p));
    let one0 = matrix_unit(&big, 0, 0, &a.one());
    let to_one = EquivalenceWitness::new(col, row);
    if !to_one.verifies_equivalence(&big, &e, &one0) {
        return Err(Error::Invariant("e is not equivalent to 1_A".into()));
    }

    let cut = restrict(grown, f.clone())?;
    let wide = extend(cut, s.clone())?;
    let gg = diagonal_at(&big, 1..n, &a.one());
    let qw = to_one.orthogonal_sum(&big, &EquivalenceWitness::identity(&gg));
    let moved = transport(wide, &to_one, &qw, one0.clone(), big.add(&one0, &gg))?;
    let small = Ring::matrix(a, n)?;
    let inner = reducer_from_corner_solver(shrink(moved, &small)?)?;
    Ok(Arc::new(FullCornerReducer {
        ring: a.clone(),
        plan: FullCornerPlan {
            rank: n,
            t,
            block: w,
            size,
            e,
            f,
            g,
            s,
        },
        inner,
    }))
}

impl Reducer for FullCornerReducer {
    fn ring(&self) -> &RingRef {
        &self.ring
    }

    fn rank(&self) -> usize {
        self.plan.rank
    }

    fn reduce_traced(&self, row: &[Elem], trace: &mut PipelineTrace) -> Result<Reduction> {
        let pl = &self.plan;
        trace.record("full_corner_plan", || {
            vec![
                ("n", json!(pl.rank)),
                ("t", json!(pl.t)),
                ("block", json!(pl.block)),
                ("ambient_size", json!(pl.size)),
                ("e", lit(&pl.e)),
                ("f", lit(&pl.f)),
                ("g", lit(&pl.g)),
                ("s", lit(&pl.s)),
            ]
        });
        self.inner.reduce_with(row, trace)
    }
}

/// Certificate helper: the corner `(p.e_11, n.p)` of `M_n(A)`.
pub fn block_corner(a: &RingRef, p: &Elem, n: usize) -> Result<SkewCorner> {
    let m = Ring::matrix(a, n)?;
    SkewCorner::new(&m, matrix_unit(&m, 0, 0, p), diagonal_at(&m, 0..n, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idempotent::{is_full, Idempotent};
    use crate::stablerank::{is_reducible, is_right_unimodular, verify_reduction, FiniteReducer};

    fn pairs_rows(r: &RingRef) -> Vec<Vec<Elem>> {
        let el = r.enumerate(1 << 16).unwrap().elements().to_vec();
        let mut out = vec![];
        for x in &el {
            for y in &el {
                out.push(vec![x.clone(), y.clone()]);
            }
        }
        out
    }

    #[test]
    fn sizes() {
        assert_eq!(ambient_size(1, 1), 1);
        assert_eq!(ambient_size(1, 2), 2);
        assert_eq!(ambient_size(2, 2), 3);
        assert_eq!(ambient_size(1, 3), 21);
        assert_eq!(ambient_size(2, 4), 35);
    }

    #[test]
    fn m2z2_corner_agrees_with_search() {
        let z2 = Ring::zmod(2).unwrap();
        let a = Ring::matrix(&z2, 2).unwrap();
        let p = matrix_unit(&a, 0, 0, &Elem::Res(1));
        let cert = is_full(&Idempotent::new(&a, p.clone()).unwrap())
            .unwrap()
            .certificate
            .unwrap();
        assert_eq!(cert.t, 2);
        let b = Ring::corner(&a, &p).unwrap();
        let red = Arc::new(FiniteReducer::new(&b, 1).unwrap());
        let full = reducer_from_full_corner(&a, &p, CornerSource::Reducer(red), &cert).unwrap();
        assert_eq!(full.plan().size, 2);
        let mut seen = 0;
        for row in pairs_rows(&a) {
            if !is_right_unimodular(&a, &row).unwrap() {
                continue;
            }
            seen += 1;
            assert!(is_reducible(&a, &row).unwrap().is_some());
            let r = full.reduce(&row).unwrap();
            assert!(verify_reduction(&a, &row, &r));
        }
        assert!(seen > 0);
        let mut trace = PipelineTrace::new();
        full.reduce_traced(&[a.one(), a.zero()], &mut trace).unwrap();
        assert_eq!(trace.steps()[0].name, "full_corner_plan");
    }

    #[test]
    fn unit_idempotent_degenerates() {
        let z4 = Ring::zmod(4).unwrap();
        let cert = FullnessCertificate::from_pairs(&z4, &z4.one(), &[(z4.one(), z4.one())]).unwrap();
        let b = Ring::corner(&z4, &z4.one()).unwrap();
        let red = Arc::new(FiniteReducer::new(&b, 1).unwrap());
        let full = reducer_from_full_corner(&z4, &z4.one(), CornerSource::Reducer(red), &cert).unwrap();
        assert_eq!(full.plan().size, 1);
        for row in pairs_rows(&z4) {
            if is_right_unimodular(&z4, &row).unwrap() {
                assert!(verify_reduction(&z4, &row, &full.reduce(&row).unwrap()));
            }
        }
    }

    #[test]
    fn padded_certificate_uses_doubling() {
        // (1,1), (0,0), (0,0) over Z/2: t = 3 forces two doublings
        let z2 = Ring::zmod(2).unwrap();
        let one = z2.one();
        let pairs = [(one.clone(), one.clone()), (z2.zero(), z2.zero()), (z2.zero(), z2.zero())];
        let cert = FullnessCertificate::from_pairs(&z2, &one, &pairs).unwrap();
        let b = Ring::corner(&z2, &one).unwrap();
        let red = Arc::new(FiniteReducer::new(&b, 1).unwrap());
        let full = reducer_from_full_corner(&z2, &one, CornerSource::Reducer(red), &cert).unwrap();
        assert_eq!(full.plan().size, 21);
        for row in pairs_rows(&z2) {
            if is_right_unimodular(&z2, &row).unwrap() {
                assert!(verify_reduction(&z2, &row, &full.reduce(&row).unwrap()));
            }
        }
    }

    #[test]
    fn solver_source_and_bad_certificate() {
        let z2 = Ring::zmod(2).unwrap();
        let a = Ring::matrix(&z2, 2).unwrap();
        let p = matrix_unit(&a, 0, 0, &Elem::Res(1));
        let corner = block_corner(&a, &p, 1).unwrap();
        let slv = crate::stablerank::skew_sr1_check(&corner).unwrap().solver().unwrap().clone();
        let cert = is_full(&Idempotent::new(&a, p.clone()).unwrap()).unwrap().certificate.unwrap();
        let full = reducer_from_full_corner(
            &a,
            &p,
            CornerSource::Solver {
                solver: slv.clone(),
                rank: 1,
            },
            &cert,
        )
        .unwrap();
        let row = [p.clone(), matrix_unit(&a, 1, 1, &Elem::Res(1))];
        assert!(verify_reduction(&a, &row, &full.reduce(&row).unwrap()));
        let bad = FullnessCertificate::from_pairs(&a, &p, &[(p.clone(), p.clone())]).unwrap();
        assert!(matches!(
            reducer_from_full_corner(&a, &p, CornerSource::Solver { solver: slv, rank: 1 }, &bad),
            Err(Error::InvalidWitness(_))
        ));
    }
}
