//! Matrix layout helpers: slot shifts, block moves between matrix rings and
//! solvers carried along them.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::idempotent::EquivalenceWitness;
use crate::ring::embed::{shift_isometry, transpose};
use crate::ring::{Elem, Ring, RingRef};
use crate::stablerank::{CornerEquation, CornerSolution, SkewCorner, Solver, SolverRef};
use crate::trace::{lit, PipelineTrace};

/// `E e E^T` for an idempotent `e`, where `E` moves slot `i` to slot `i + d`.
pub fn shift(ring: &Ring, e: &Elem, d: usize) -> Result<Elem> {
    let (a, b) = shift_pair(ring, e, d)?;
    Ok(ring.mul(&b, &a))
}

/// Witness `e ~ shift(e, d)`: `(e E^T, E e)`.
pub fn shift_witness(ring: &Ring, e: &Elem, d: usize) -> Result<EquivalenceWitness> {
    let (a, b) = shift_pair(ring, e, d)?;
    Ok(EquivalenceWitness::new(a, b))
}

fn shift_pair(ring: &Ring, e: &Elem, d: usize) -> Result<(Elem, Elem)> {
    let n = ring
        .matrix_size()
        .ok_or_else(|| Error::Unsupported("slot shifts need a full matrix ring".into()))?;
    let used = support(ring, e);
    if let Some(&last) = used.last() {
        if last + d >= n {
            return Err(Error::AmbientTooSmall {
                required: last + d + 1,
                available: n,
            });
        }
    }
    let iso = shift_isometry(ring, 0..n.saturating_sub(d), d)?;
    Ok((ring.mul(e, &transpose(ring, &iso)), ring.mul(&iso, e)))
}

/// Slots whose row or column carries a nonzero entry.
pub fn support(ring: &Ring, e: &Elem) -> Vec<usize> {
    let n = ring.matrix_size().expect("matrix ring");
    let base = ring.matrix_base().unwrap();
    let v = e.entries();
    (0..n)
        .filter(|&i| (0..n).any(|j| !base.is_zero(&v[i * n + j]) || !base.is_zero(&v[j * n + i])))
        .collect()
}

fn resize(e: &Elem, from: usize, to: usize, zero: &Elem) -> Result<Elem> {
    let src = e.entries();
    let mut out = vec![zero.clone(); to * to];
    for i in 0..from {
        for j in 0..from {
            let v = &src[i * from + j];
            if i < to && j < to {
                out[i * to + j] = v.clone();
            } else if v != zero {
                return Err(Error::NotAMember(format!(
                    "entry ({i},{j}) lies outside the upper-left {to}x{to} block"
                )));
            }
        }
    }
    Ok(Elem::Mat(out))
}

/// Relates the upper-left `n x n` block of `big = M_N(A)` to a matrix ring
/// `small = M_n(B)` whose entries are elements of `A` (for instance `B` a
/// corner of `A`). Payloads are copied entrywise.
#[derive(Debug, Clone)]
pub struct BlockMap {
    small: RingRef,
    big: RingRef,
}

impl BlockMap {
    pub fn new(small: &RingRef, big: &RingRef) -> Result<Self> {
        let (n, nn) = match (small.matrix_size(), big.matrix_size()) {
            (Some(n), Some(nn)) => (n, nn),
            _ => return Err(Error::Unsupported("block maps need matrix rings".into())),
        };
        if nn < n {
            return Err(Error::EmbedSize { from: n, to: nn });
        }
        Ok(BlockMap {
            small: small.clone(),
            big: big.clone(),
        })
    }

    pub fn small(&self) -> &RingRef {
        &self.small
    }

    pub fn big(&self) -> &RingRef {
        &self.big
    }

    pub fn up(&self, e: &Elem) -> Result<Elem> {
        let zero = self.big.matrix_base().unwrap().zero();
        resize(e, self.small.matrix_size().unwrap(), self.big.matrix_size().unwrap(), &zero)
    }

    pub fn down(&self, e: &Elem) -> Result<Elem> {
        let zero = self.big.matrix_base().unwrap().zero();
        let d = resize(e, self.big.matrix_size().unwrap(), self.small.matrix_size().unwrap(), &zero)?;
        self.small.ensure_member(&d)?;
        Ok(d)
    }

    fn up_eq(&self, eq: &CornerEquation) -> Result<CornerEquation> {
        Ok(CornerEquation::new(self.up(&eq.a)?, self.up(&eq.x)?, self.up(&eq.b)?))
    }

    fn down_eq(&self, eq: &CornerEquation) -> Result<CornerEquation> {
        Ok(CornerEquation::new(self.down(&eq.a)?, self.down(&eq.x)?, self.down(&eq.b)?))
    }
}

/// A solver on the big ring from one on the upper-left block.
pub struct GrownSolver {
    inner: SolverRef,
    map: BlockMap,
    corner: SkewCorner,
}

/// A solver on the upper-left block from one on the big ring.
pub struct ShrunkSolver {
    inner: SolverRef,
    map: BlockMap,
    corner: SkewCorner,
}

/// Carries `inner` (on a corner of `M_n(B)`) to the image corner in `big`.
pub fn grow(inner: SolverRef, big: &RingRef) -> Result<Arc<GrownSolver>> {
    let map = BlockMap::new(inner.corner().ring(), big)?;
    let c = inner.corner();
    let corner = SkewCorner::new(big, map.up(c.p())?, map.up(c.q())?)?;
    Ok(Arc::new(GrownSolver { inner, map, corner }))
}

/// Carries `inner` (on a corner of `M_N(A)` inside the upper-left block)
/// down to `small`.
pub fn shrink(inner: SolverRef, small: &RingRef) -> Result<Arc<ShrunkSolver>> {
    let map = BlockMap::new(small, inner.corner().ring())?;
    let c = inner.corner();
    let corner = SkewCorner::new(small, map.down(c.p())?, map.down(c.q())?)?;
    Ok(Arc::new(ShrunkSolver { inner, map, corner }))
}

impl Solver for GrownSolver {
    fn corner(&self) -> &SkewCorner {
        &self.corner
    }

    fn solve_traced(&self, eq: &CornerEquation, trace: &mut PipelineTrace) -> Result<CornerSolution> {
        let small = self.map.down_eq(eq)?;
        let sol = self.inner.solve_with(&small, trace)?;
        trace.record("block_up", || vec![("size", self.map.big.matrix_size().into())]);
        Ok(CornerSolution::new(self.map.up(&sol.y)?, self.map.up(&sol.z)?))
    }
}

impl Solver for ShrunkSolver {
    fn corner(&self) -> &SkewCorner {
        &self.corner
    }

    fn solve_traced(&self, eq: &CornerEquation, trace: &mut PipelineTrace) -> Result<CornerSolution> {
        let big = self.map.up_eq(eq)?;
        trace.record("enlarge", || {
            vec![
                ("size", self.map.big.matrix_size().into()),
                ("a", lit(&big.a)),
            ]
        });
        let sol = self.inner.solve_with(&big, trace)?;
        Ok(CornerSolution::new(self.map.down(&sol.y)?, self.map.down(&sol.z)?))
    }
}
