//! Exhaustive stable-rank-one check of a finite skew corner.
//!
//! Works on the carriers `pAq`, `qAp` and `pAp` only, never on the whole
//! ring: products and sums are tabulated once over indices, then every
//! equation `(a, x, p - ax)` is searched for `y` with `(a + by)z = p`.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::{verify_solution, CornerEquation, CornerSolution, SkewCorner, Solver};
use crate::error::{Error, Result};
use crate::ring::Elem;
use crate::trace::PipelineTrace;

/// Largest product table built by [`skew_sr1_check`].
const TABLE_LIMIT: usize = 1 << 22;
const NONE: u32 = u32::MAX;

struct Carrier {
    elems: Vec<Elem>,
    index: HashMap<Elem, u32>,
}

impl Carrier {
    fn new(elems: Vec<Elem>) -> Self {
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as u32))
            .collect();
        Carrier { elems, index }
    }

    fn len(&self) -> usize {
        self.elems.len()
    }

    fn idx(&self, e: &Elem) -> u32 {
        self.index[e]
    }
}

fn table<F>(rows: usize, cols: usize, f: F) -> Vec<u32>
where
    F: Fn(usize, usize) -> u32 + Sync,
{
    (0..rows)
        .into_par_iter()
        .flat_map_iter(|i| (0..cols).map(move |j| (i, j)).collect::<Vec<_>>())
        .map(|(i, j)| f(i, j))
        .collect()
}

/// A solver backed by a finite lookup table keyed by `(a, b)`.
pub struct TableSolver {
    corner: SkewCorner,
    left: Carrier,
    right: Carrier,
    diag: Carrier,
    table: HashMap<(u32, u32), (u32, u32)>,
}

impl std::fmt::Debug for TableSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TableSolver")
            .field("corner", &self.corner)
            .field("entries", &self.table.len())
            .finish()
    }
}

impl TableSolver {
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl Solver for TableSolver {
    fn corner(&self) -> &SkewCorner {
        &self.corner
    }

    fn solve_traced(&self, eq: &CornerEquation, trace: &mut PipelineTrace) -> Result<CornerSolution> {
        let key = (
            self.left.index.get(&eq.a).copied(),
            self.diag.index.get(&eq.b).copied(),
        );
        let (Some(a), Some(b)) = key else {
            return Err(Error::InvalidEquation("equation outside the tabulated corner".into()));
        };
        let &(y, z) = self
            .table
            .get(&(a, b))
            .ok_or_else(|| Error::SolverFailure("no table entry".into()))?;
        trace.record("table_lookup", Vec::new);
        Ok(CornerSolution::new(
            self.left.elems[y as usize].clone(),
            self.right.elems[z as usize].clone(),
        ))
    }
}

#[derive(Debug, Clone)]
pub enum Sr1Outcome {
    Solver(Arc<TableSolver>),
    Counterexample(CornerEquation),
}

impl Sr1Outcome {
    pub fn solver(&self) -> Option<&Arc<TableSolver>> {
        match self {
            Sr1Outcome::Solver(s) => Some(s),
            Sr1Outcome::Counterexample(_) => None,
        }
    }

    pub fn counterexample(&self) -> Option<&CornerEquation> {
        match self {
            Sr1Outcome::Solver(_) => None,
            Sr1Outcome::Counterexample(e) => Some(e),
        }
    }
}

/// Decides stable rank one of a finite skew corner. Equations are visited
/// as pairs `(a, x)` in carrier order with `b = p - ax`; the first
/// unsolvable one is returned as a counterexample.
pub fn skew_sr1_check(corner: &SkewCorner) -> Result<Sr1Outcome> {
    let ring = corner.ring();
    if !ring.is_finite() {
        return Err(Error::Unsupported("stable rank one check needs a finite ring".into()));
    }
    let left = Carrier::new(corner.elements()?);
    let right = Carrier::new(corner.opposite_elements()?);
    let diag = Carrier::new(corner.diagonal_elements()?);
    let (nl, nr, nd) = (left.len(), right.len(), diag.len());
    for cells in [nl * nr, nd * nl, nl * nl] {
        if cells > TABLE_LIMIT {
            return Err(Error::CapExceeded {
                cardinality: cells.to_string(),
                cap: TABLE_LIMIT as u64,
            });
        }
    }
    let p = corner.p();
    // a x in pAp
    let mul_lr = table(nl, nr, |i, j| diag.idx(&ring.mul(&left.elems[i], &right.elems[j])));
    // b y in pAq
    let mul_dl = table(nd, nl, |i, j| left.idx(&ring.mul(&diag.elems[i], &left.elems[j])));
    let add_l = table(nl, nl, |i, j| left.idx(&ring.add(&left.elems[i], &left.elems[j])));
    let p_minus: Vec<u32> = diag.elems.iter().map(|e| diag.idx(&ring.sub(p, e))).collect();
    let p_idx = diag.idx(p);
    // first z with c z = p
    let right_inverse: Vec<u32> = (0..nl)
        .map(|c| {
            (0..nr)
                .find(|&z| mul_lr[c * nr + z] == p_idx)
                .map_or(NONE, |z| z as u32)
        })
        .collect();

    let mut table_out = HashMap::new();
    for a in 0..nl {
        for x in 0..nr {
            let b = p_minus[mul_lr[a * nr + x] as usize];
            if table_out.contains_key(&(a as u32, b)) {
                continue;
            }
            let hit = (0..nl).find_map(|y| {
                let c = add_l[a * nl + mul_dl[b as usize * nl + y] as usize];
                let z = right_inverse[c as usize];
                (z != NONE).then_some((y as u32, z))
            });
            match hit {
                Some(sol) => {
                    table_out.insert((a as u32, b), sol);
                }
                None => {
                    return Ok(Sr1Outcome::Counterexample(CornerEquation::new(
                        left.elems[a].clone(),
                        right.elems[x].clone(),
                        diag.elems[b as usize].clone(),
                    )))
                }
            }
        }
    }
    Ok(Sr1Outcome::Solver(Arc::new(TableSolver {
        corner: corner.clone(),
        left,
        right,
        diag,
        table: table_out,
    })))
}

/// Result of replaying every equation of a finite corner through a solver.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub equations: usize,
    pub failures: usize,
    pub first_failure: Option<(CornerEquation, String)>,
}

impl Sweep {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Runs the solver on all equations `(a, x, p - ax)` of its (finite) corner
/// and verifies each answer independently.
pub fn sweep(solver: &dyn Solver) -> Result<Sweep> {
    let corner = solver.corner();
    let ring = corner.ring();
    let left = corner.elements()?;
    let right = corner.opposite_elements()?;
    let pairs: Vec<(usize, usize)> = (0..left.len())
        .flat_map(|a| (0..right.len()).map(move |x| (a, x)))
        .collect();
    let outcomes: Vec<Option<(CornerEquation, String)>> = pairs
        .par_iter()
        .map(|&(a, x)| {
            let b = ring.sub(corner.p(), &ring.mul(&left[a], &right[x]));
            let eq = CornerEquation::new(left[a].clone(), right[x].clone(), b);
            match solver.solve_traced(&eq, &mut PipelineTrace::disabled()) {
                Ok(sol) if verify_solution(corner, &eq, &sol) => None,
                Ok(_) => Some((eq, "solution does not verify".to_string())),
                Err(e) => Some((eq, e.to_string())),
            }
        })
        .collect();
    let failures = outcomes.iter().filter(|o| o.is_some()).count();
    Ok(Sweep {
        equations: pairs.len(),
        failures,
        first_failure: outcomes.into_iter().flatten().next(),
    })
}

/// Whether no `(y, z)` solves the equation, by exhaustive search.
pub fn is_unsolvable(corner: &SkewCorner, eq: &CornerEquation) -> Result<bool> {
    let ys = corner.elements()?;
    let zs = corner.opposite_elements()?;
    let ring = corner.ring();
    Ok(!ys.iter().any(|y| {
        let c = ring.add(&eq.a, &ring.mul(&eq.b, y));
        zs.iter().any(|z| &ring.mul(&c, z) == corner.p())
    }))
}
