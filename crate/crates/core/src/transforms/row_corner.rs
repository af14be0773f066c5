//! Rows versus the corner `(1_A, n.1_A)` of `M_n(A)`.
//!
//! An equation on that corner is a row `alpha = (a_1..a_n)` in the first
//! row, a column `chi = (x_1..x_n)` in the first column and `beta = b` at
//! `(1,1)`, with `sum a_i x_i + b = 1`. Reducing `(a_1, ..., a_n, b)` gives
//! `zeta = (c_1..c_n)` and the column of inverse coefficients `xi`.

use std::sync::Arc;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::ring::embed::{entry, matrix_unit};
use crate::ring::ideal::solve_right_inverse;
use crate::ring::{Elem, Ring, RingRef};
use crate::stablerank::{
    CornerEquation, CornerSolution, Reducer, ReducerRef, Reduction, SkewCorner, Solver, SolverRef,
};
use crate::trace::{lit, PipelineTrace};

fn lits(v: &[Elem]) -> Value {
    Value::Array(v.iter().map(lit).collect())
}

/// The corner `(1_A, n.1_A)` of `M_n(A)`.
pub fn row_corner(a: &RingRef, n: usize) -> Result<SkewCorner> {
    let m = Ring::matrix(a, n)?;
    let p = matrix_unit(&m, 0, 0, &a.one());
    let q = m.one();
    SkewCorner::new(&m, p, q)
}

fn first_row(m: &Ring, v: &[Elem]) -> Elem {
    v.iter().enumerate().fold(m.zero(), |acc, (i, c)| m.add(&acc, &matrix_unit(m, 0, i, c)))
}

fn first_col(m: &Ring, v: &[Elem]) -> Elem {
    v.iter().enumerate().fold(m.zero(), |acc, (i, c)| m.add(&acc, &matrix_unit(m, i, 0, c)))
}

/// Solver for the row corner of `M_n(A)` backed by a reducer of `A`.
pub struct RowCornerSolver {
    reducer: ReducerRef,
    corner: SkewCorner,
}

pub fn corner_solver_from_reducer(reducer: ReducerRef) -> Result<Arc<RowCornerSolver>> {
    let corner = row_corner(reducer.ring(), reducer.rank())?;
    Ok(Arc::new(RowCornerSolver { reducer, corner }))
}

impl Solver for RowCornerSolver {
    fn corner(&self) -> &SkewCorner {
        &self.corner
    }

    fn solve_traced(&self, eq: &CornerEquation, trace: &mut PipelineTrace) -> Result<CornerSolution> {
        let m = self.corner.ring();
        let n = self.reducer.rank();
        let mut row: Vec<Elem> = (0..n).map(|i| entry(m, &eq.a, 0, i).clone()).collect();
        row.push(entry(m, &eq.b, 0, 0).clone());
        let red = self.reducer.reduce_with(&row, trace).map_err(|e| match e {
            Error::SolverFailure(s) => Error::SolverFailure(format!("reducer failed: {s}")),
            other => other,
        })?;
        trace.record("row_from_corner", || {
            vec![("row", lits(&row)), ("c", lits(&red.c))]
        });
        Ok(CornerSolution::new(first_row(m, &red.c), first_col(m, &red.inverse)))
    }
}

/// Reducer for `A` at rank `n` backed by a solver for the row corner of
/// `M_n(A)`. Needs right inverses over `A` (finite rings, the integers and
/// matrix rings over them).
pub struct CornerReducer {
    solver: SolverRef,
    ring: RingRef,
    rank: usize,
}

pub fn reducer_from_corner_solver(solver: SolverRef) -> Result<Arc<CornerReducer>> {
    let m = solver.corner().ring().clone();
    let (Some(n), Some(a)) = (m.matrix_size(), m.matrix_base().cloned()) else {
        return Err(Error::Unsupported("row corner solver must live in a matrix ring".into()));
    };
    let expected = row_corner(&a, n)?;
    if expected.p() != solver.corner().p() || expected.q() != solver.corner().q() {
        return Err(Error::InvalidWitness(
            "solver is not for the corner (e11, 1) of its matrix ring".into(),
        ));
    }
    Ok(Arc::new(CornerReducer {
        solver,
        ring: a,
        rank: n,
    }))
}

impl Reducer for CornerReducer {
    fn ring(&self) -> &RingRef {
        &self.ring
    }

    fn rank(&self) -> usize {
        self.rank
    }

    fn reduce_traced(&self, row: &[Elem], trace: &mut PipelineTrace) -> Result<Reduction> {
        let a = &self.ring;
        let n = self.rank;
        let xs = solve_right_inverse(a, row)?.ok_or(Error::NotUnimodular)?;
        let (x, xi) = xs.split_last().unwrap();
        let (b, ai) = row.split_last().unwrap();
        let bx = a.mul(b, x);
        let m = self.solver.corner().ring();
        let eq = CornerEquation::new(first_row(m, ai), first_col(m, xi), matrix_unit(m, 0, 0, &bx));
        trace.record("corner_from_row", || {
            vec![("row", lits(row)), ("right_inverse", lits(&xs))]
        });
        let sol = self.solver.solve_with(&eq, trace)?;
        let c: Vec<Elem> = (0..n).map(|i| a.mul(x, entry(m, &sol.y, 0, i))).collect();
        let inverse: Vec<Elem> = (0..n).map(|i| entry(m, &sol.z, i, 0).clone()).collect();
        Ok(Reduction { c, inverse })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stablerank::{
        is_right_unimodular, is_reducible, skew_sr1_check, sweep, verify_reduction, FiniteReducer,
    };

    fn rows(r: &RingRef, n: usize) -> Vec<Vec<Elem>> {
        let el = r.enumerate(1 << 16).unwrap().elements().to_vec();
        let mut out: Vec<Vec<Elem>> = vec![vec![]];
        for _ in 0..=n {
            out = out
                .into_iter()
                .flat_map(|v| {
                    el.iter().map(move |e| {
                        let mut w = v.clone();
                        w.push(e.clone());
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn forward_agrees_with_brute_force_on_z4() {
        let z4 = Ring::zmod(4).unwrap();
        let red = Arc::new(FiniteReducer::new(&z4, 1).unwrap());
        let slv = corner_solver_from_reducer(red).unwrap();
        assert!(sweep(slv.as_ref()).unwrap().passed());
        let brute = skew_sr1_check(slv.corner()).unwrap();
        assert!(brute.solver().is_some());
    }

    #[test]
    fn trivial_forward_pattern() {
        let z = Ring::zmod(3).unwrap();
        let red = Arc::new(FiniteReducer::new(&z, 2).unwrap());
        let slv = corner_solver_from_reducer(red).unwrap();
        let m = slv.corner().ring().clone();
        let alpha = matrix_unit(&m, 0, 0, &Elem::Res(1));
        let eq = CornerEquation::new(alpha.clone(), alpha.clone(), m.zero());
        let sol = slv.solve(&eq).unwrap();
        assert_eq!(sol.y, m.zero());
        assert_eq!(sol.z, alpha);
    }

    #[test]
    fn backward_reduces_every_triple_over_z4() {
        let z4 = Ring::zmod(4).unwrap();
        let c = row_corner(&z4, 2).unwrap();
        let slv = skew_sr1_check(&c).unwrap().solver().unwrap().clone();
        let red = reducer_from_corner_solver(slv).unwrap();
        for row in rows(&z4, 2) {
            if !is_right_unimodular(&z4, &row).unwrap() {
                assert_eq!(red.reduce(&row), Err(Error::NotUnimodular));
                continue;
            }
            let r = red.reduce(&row).unwrap();
            assert!(verify_reduction(&z4, &row, &r));
        }
        let r = red.reduce(&[Elem::Res(1), Elem::Res(0), Elem::Res(2)]).unwrap();
        assert_eq!(r.c, vec![Elem::Res(0), Elem::Res(0)]);
    }

    #[test]
    fn round_trip_on_z2_and_m2z2() {
        for a in [
            Ring::zmod(2).unwrap(),
            Ring::matrix(&Ring::zmod(2).unwrap(), 2).unwrap(),
        ] {
            let red: ReducerRef = Arc::new(FiniteReducer::new(&a, 1).unwrap());
            let back = reducer_from_corner_solver(corner_solver_from_reducer(red).unwrap()).unwrap();
            for row in rows(&a, 1) {
                if is_right_unimodular(&a, &row).unwrap() {
                    assert!(is_reducible(&a, &row).unwrap().is_some());
                    let r = back.reduce(&row).unwrap();
                    assert!(verify_reduction(&a, &row, &r));
                }
            }
        }
    }
}
