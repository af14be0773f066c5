//! Stable rank of finite rings, stable rank one of skew corners, and the
//! witness oracles ([`Solver`], [`Reducer`]) that make both constructive.

mod corner;
mod range;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::ideal::{right_ideal_contains, solve_right_inverse};
use crate::ring::{Elem, Ring, RingRef};
use crate::trace::PipelineTrace;

pub use corner::{is_unsolvable, skew_sr1_check, sweep, Sr1Outcome, Sweep, TableSolver};
pub use range::{FiniteReducer, RangeIndex};

/// The skew corner `pAq` for idempotents `p`, `q` of a common ring.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewCorner {
    ring: RingRef,
    p: Elem,
    q: Elem,
}

impl SkewCorner {
    pub fn new(ring: &RingRef, p: Elem, q: Elem) -> Result<Self> {
        for e in [&p, &q] {
            ring.ensure_member(e)?;
            if !ring.is_idempotent(e) {
                return Err(Error::NotIdempotent(ring.show(e)));
            }
        }
        Ok(SkewCorner {
            ring: ring.clone(),
            p,
            q,
        })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn p(&self) -> &Elem {
        &self.p
    }

    pub fn q(&self) -> &Elem {
        &self.q
    }

    fn sandwiched(&self, l: &Elem, a: &Elem, r: &Elem) -> bool {
        self.ring.contains(a) && &self.ring.mul_all(&[l, a, r]) == a
    }

    /// `a = paq`
    pub fn contains(&self, a: &Elem) -> bool {
        self.sandwiched(&self.p, a, &self.q)
    }

    /// `x = qxp`
    pub fn opposite_contains(&self, x: &Elem) -> bool {
        self.sandwiched(&self.q, x, &self.p)
    }

    /// `b = pbp`
    pub fn diagonal_contains(&self, b: &Elem) -> bool {
        self.sandwiched(&self.p, b, &self.p)
    }

    /// Elements of `pAq`, in coordinate order.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        crate::idempotent::skew_corner_elements(&self.ring, &self.p, &self.q)
    }

    /// Elements of `qAp`.
    pub fn opposite_elements(&self) -> Result<Vec<Elem>> {
        crate::idempotent::skew_corner_elements(&self.ring, &self.q, &self.p)
    }

    /// Elements of `pAp`.
    pub fn diagonal_elements(&self) -> Result<Vec<Elem>> {
        crate::idempotent::skew_corner_elements(&self.ring, &self.p, &self.p)
    }
}

/// `a in pAq`, `x in qAp`, `b in pAp` with `ax + b = p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CornerEquation {
    pub a: Elem,
    pub x: Elem,
    pub b: Elem,
}

impl CornerEquation {
    /// The equation determined by `(a, x)`, with `b = p - ax`.
    pub fn from_pair(corner: &SkewCorner, a: Elem, x: Elem) -> Result<Self> {
        let r = corner.ring();
        let b = r.sub(corner.p(), &r.mul(&a, &x));
        let eq = CornerEquation { a, x, b };
        eq.validate(corner)?;
        Ok(eq)
    }

    pub fn new(a: Elem, x: Elem, b: Elem) -> Self {
        CornerEquation { a, x, b }
    }

    pub fn validate(&self, corner: &SkewCorner) -> Result<()> {
        let r = corner.ring();
        if !corner.contains(&self.a) {
            return Err(Error::InvalidEquation(format!("a = {} not in pAq", r.show(&self.a))));
        }
        if !corner.opposite_contains(&self.x) {
            return Err(Error::InvalidEquation(format!("x = {} not in qAp", r.show(&self.x))));
        }
        if !corner.diagonal_contains(&self.b) {
            return Err(Error::InvalidEquation(format!("b = {} not in pAp", r.show(&self.b))));
        }
        if &r.add(&r.mul(&self.a, &self.x), &self.b) != corner.p() {
            return Err(Error::InvalidEquation("ax + b != p".into()));
        }
        Ok(())
    }
}

/// `y in pAq`, `z in qAp` with `(a + by)z = p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CornerSolution {
    pub y: Elem,
    pub z: Elem,
}

impl CornerSolution {
    pub fn new(y: Elem, z: Elem) -> Self {
        CornerSolution { y, z }
    }
}

/// Membership of `y`, `z` and the identity `(a + by)z = p`.
pub fn verify_solution(corner: &SkewCorner, eq: &CornerEquation, sol: &CornerSolution) -> bool {
    let r = corner.ring();
    corner.contains(&sol.y)
        && corner.opposite_contains(&sol.z)
        && &r.mul(&r.add(&eq.a, &r.mul(&eq.b, &sol.y)), &sol.z) == corner.p()
}

/// A total witness oracle for stable rank one of a fixed skew corner.
pub trait Solver: Send + Sync {
    fn corner(&self) -> &SkewCorner;

    /// Answers a valid equation; callers go through [`Solver::solve`].
    fn solve_traced(&self, eq: &CornerEquation, trace: &mut PipelineTrace) -> Result<CornerSolution>;

    /// Validates the equation, answers it and verifies the answer.
    fn solve_with(&self, eq: &CornerEquation, trace: &mut PipelineTrace) -> Result<CornerSolution> {
        eq.validate(self.corner())?;
        let sol = self.solve_traced(eq, trace)?;
        if !verify_solution(self.corner(), eq, &sol) {
            return Err(Error::SolverFailure(format!(
                "returned y = {}, z = {} does not verify",
                self.corner().ring().show(&sol.y),
                self.corner().ring().show(&sol.z)
            )));
        }
        Ok(sol)
    }

    fn solve(&self, eq: &CornerEquation) -> Result<CornerSolution> {
        self.solve_with(eq, &mut PipelineTrace::disabled())
    }
}

pub type SolverRef = Arc<dyn Solver>;

/// `c_1..c_n` for a row `(a_1, ..., a_n, b)`, with the certificate
/// `sum (a_i + b c_i) z_i = 1` in `inverse`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub c: Vec<Elem>,
    pub inverse: Vec<Elem>,
}

impl Reduction {
    /// Fills in the inverse certificate for a reducing tuple `c`.
    pub fn certify(ring: &Ring, row: &[Elem], c: Vec<Elem>) -> Result<Self> {
        let reduced = reduced_row(ring, row, &c);
        let inverse = solve_right_inverse(ring, &reduced)?
            .ok_or_else(|| Error::SolverFailure("reduced row is not right unimodular".into()))?;
        Ok(Reduction { c, inverse })
    }
}

/// `(a_1 + b c_1, ..., a_n + b c_n)`
pub fn reduced_row(ring: &Ring, row: &[Elem], c: &[Elem]) -> Vec<Elem> {
    let (b, a) = row.split_last().expect("nonempty row");
    a.iter()
        .zip(c)
        .map(|(ai, ci)| ring.add(ai, &ring.mul(b, ci)))
        .collect()
}

pub fn verify_reduction(ring: &Ring, row: &[Elem], red: &Reduction) -> bool {
    let n = row.len().saturating_sub(1);
    if n == 0 || red.c.len() != n || red.inverse.len() != n {
        return false;
    }
    if !red.c.iter().chain(&red.inverse).all(|e| ring.contains(e)) {
        return false;
    }
    let reduced = reduced_row(ring, row, &red.c);
    let mut sum = ring.zero();
    for (r, z) in reduced.iter().zip(&red.inverse) {
        sum = ring.add(&sum, &ring.mul(r, z));
    }
    sum == ring.one()
}

/// A witness oracle for the stable range condition at rank `n`: maps right
/// unimodular `(n+1)`-rows to reducing `n`-tuples.
pub trait Reducer: Send + Sync {
    fn ring(&self) -> &RingRef;

    fn rank(&self) -> usize;

    /// Answers a right unimodular row; callers go through [`Reducer::reduce`].
    fn reduce_traced(&self, row: &[Elem], trace: &mut PipelineTrace) -> Result<Reduction>;

    fn reduce_with(&self, row: &[Elem], trace: &mut PipelineTrace) -> Result<Reduction> {
        let ring = self.ring();
        if row.len() != self.rank() + 1 {
            return Err(Error::InvalidSize(row.len()));
        }
        for e in row {
            ring.ensure_member(e)?;
        }
        let red = self.reduce_traced(row, trace)?;
        if !verify_reduction(ring, row, &red) {
            return Err(Error::SolverFailure("reduction does not verify".into()));
        }
        Ok(red)
    }

    fn reduce(&self, row: &[Elem]) -> Result<Reduction> {
        self.reduce_with(row, &mut PipelineTrace::disabled())
    }
}

pub type ReducerRef = Arc<dyn Reducer>;

/// Whether `sum a_i A = A`.
pub fn is_right_unimodular(ring: &Ring, row: &[Elem]) -> Result<bool> {
    right_ideal_contains(ring, row, &ring.one())
}

/// The first `c` in enumeration order that reduces the right unimodular
/// row `(a_1, ..., a_n, b)`, or `None` when the row is irreducible.
pub fn is_reducible(ring: &RingRef, row: &[Elem]) -> Result<Option<Vec<Elem>>> {
    if row.len() < 2 {
        return Err(Error::InvalidSize(row.len()));
    }
    let idx = RangeIndex::build(ring)?;
    let ids = idx.indices_of(row)?;
    if !idx.is_unimodular(&ids) {
        return Err(Error::NotUnimodular);
    }
    Ok(idx
        .first_reduction(&ids)
        .map(|c| c.into_iter().map(|i| idx.element(i).clone()).collect()))
}

/// Outcome of [`stable_rank`].
#[derive(Debug, Clone, PartialEq)]
pub struct StableRank {
    /// The least `n <= max_n` satisfying the stable range condition.
    pub rank: Option<usize>,
    /// An irreducible right unimodular `(n+1)`-row for every ruled-out `n`.
    pub irreducible: Vec<Vec<Elem>>,
}

/// Least `n <= max_n` such that every right unimodular `(n+1)`-row over the
/// finite ring is reducible, by exhaustive search.
pub fn stable_rank(ring: &RingRef, max_n: usize) -> Result<StableRank> {
    if max_n < 1 {
        return Err(Error::InvalidSize(max_n));
    }
    let idx = RangeIndex::build(ring)?;
    let mut irreducible = Vec::new();
    for n in 1..=max_n {
        match idx.irreducible_row(n)? {
            None => {
                return Ok(StableRank {
                    rank: Some(n),
                    irreducible,
                })
            }
            Some(row) => irreducible.push(row.into_iter().map(|i| idx.element(i).clone()).collect()),
        }
    }
    Ok(StableRank {
        rank: None,
        irreducible,
    })
}

/// An irreducible right unimodular `(n+1)`-row, or `None` if the stable
/// range condition holds at `n`.
pub fn stable_range_violation(ring: &RingRef, n: usize) -> Result<Option<Vec<Elem>>> {
    if n < 1 {
        return Err(Error::InvalidSize(n));
    }
    let idx = RangeIndex::build(ring)?;
    Ok(idx
        .irreducible_row(n)?
        .map(|row| row.into_iter().map(|i| idx.element(i).clone()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::embed::matrix_unit;

    fn res(v: &[u64]) -> Vec<Elem> {
        v.iter().map(|&x| Elem::Res(x)).collect()
    }

    #[test]
    fn unimodularity() {
        let z = Ring::integers();
        assert!(is_right_unimodular(&z, &[Elem::int(3), Elem::int(5)]).unwrap());
        assert!(!is_right_unimodular(&z, &[Elem::int(2), Elem::int(4)]).unwrap());
        let z4 = Ring::zmod(4).unwrap();
        assert!(is_right_unimodular(&z4, &res(&[2, 3])).unwrap());
    }

    #[test]
    fn reducibility_examples() {
        let z4 = Ring::zmod(4).unwrap();
        assert_eq!(is_reducible(&z4, &res(&[2, 3])).unwrap(), Some(res(&[1])));
        for b in 0..4 {
            assert_eq!(is_reducible(&z4, &res(&[1, b])).unwrap(), Some(res(&[0])));
        }
        let z2 = Ring::zmod(2).unwrap();
        assert_eq!(is_reducible(&z2, &res(&[0, 1])).unwrap(), Some(res(&[1])));
        assert_eq!(is_reducible(&z4, &res(&[2, 2])), Err(Error::NotUnimodular));
        assert!(is_reducible(&Ring::integers(), &[Elem::int(5), Elem::int(7)]).is_err());
    }

    #[test]
    fn stable_rank_examples() {
        let z2 = Ring::zmod(2).unwrap();
        let rings = vec![
            Ring::zmod(4).unwrap(),
            Ring::product(&[z2.clone(), Ring::zmod(3).unwrap()]).unwrap(),
            Ring::matrix(&z2, 2).unwrap(),
        ];
        for r in rings {
            let s = stable_rank(&r, 3).unwrap();
            assert_eq!(s.rank, Some(1));
            assert!(s.irreducible.is_empty());
        }
        assert!(matches!(
            stable_rank(&Ring::integers(), 2),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn verify_solution_examples() {
        let r = Ring::matrix(&Ring::zmod(2).unwrap(), 2).unwrap();
        let p = matrix_unit(&r, 0, 0, &Elem::Res(1));
        let c = SkewCorner::new(&r, p.clone(), p.clone()).unwrap();
        let eq = CornerEquation::new(p.clone(), p.clone(), r.zero());
        eq.validate(&c).unwrap();
        assert!(verify_solution(&c, &eq, &CornerSolution::new(r.zero(), p.clone())));
        let off = r.add(&p, &matrix_unit(&r, 1, 0, &Elem::Res(1)));
        assert!(!verify_solution(&c, &eq, &CornerSolution::new(r.zero(), off)));
    }

    #[test]
    fn brute_force_reducibility_matches_index() {
        let z2 = Ring::zmod(2).unwrap();
        let m2 = Ring::matrix(&Ring::zmod(4).unwrap(), 2).unwrap();
        let corner = Ring::corner(&m2, &matrix_unit(&m2, 0, 0, &Elem::Res(1))).unwrap();
        for r in [Ring::zmod(4).unwrap(), Ring::triangular(&z2, 2).unwrap(), corner] {
            let en = r.enumerate(1 << 16).unwrap();
            for a in en.elements() {
                for b in en.elements() {
                    let row = [a.clone(), b.clone()];
                    if !is_right_unimodular(&r, &row).unwrap() {
                        continue;
                    }
                    let brute = en.elements().iter().find(|c| {
                        is_right_unimodular(&r, &[r.add(a, &r.mul(b, c))]).unwrap()
                    });
                    assert_eq!(is_reducible(&r, &row).unwrap(), brute.map(|c| vec![c.clone()]));
                }
            }
        }
    }
}
