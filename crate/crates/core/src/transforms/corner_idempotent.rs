//! An idempotent of `M_n(pAp)`-shape equivalent to `1_A`, built from a
//! fullness certificate `sum a_i p b_i = 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::idempotent::{is_full, EquivalenceWitness, Idempotent};
use crate::ring::embed::{diagonal_at, matrix_unit};
use crate::ring::{Elem, Ring, RingRef};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CornerIdempotentChecks {
    pub idempotent: bool,
    /// `(n.p) alpha q beta (n.p) = p e_11`.
    pub reaches_corner_unit: bool,
    /// Fullness in `(n.p) M_n(A) (n.p)` by ideal closure; `None` when that
    /// ring is infinite or too large to enumerate.
    pub full_by_closure: Option<bool>,
    pub equivalent_to_one: bool,
}

impl CornerIdempotentChecks {
    pub fn passed(&self) -> bool {
        self.idempotent
            && self.reaches_corner_unit
            && self.full_by_closure != Some(false)
            && self.equivalent_to_one
    }
}

#[derive(Debug, Clone)]
pub struct CornerIdempotent {
    pub ring: RingRef,
    /// Row `(a_i p)` in the first row of `M_n(A)`.
    pub alpha: Elem,
    /// Column `(p b_i)` in the first column.
    pub beta: Elem,
    /// `beta alpha`.
    pub q: Elem,
    pub checks: CornerIdempotentChecks,
}

impl CornerIdempotent {
    pub fn n(&self) -> usize {
        self.ring.matrix_size().unwrap()
    }

    /// `n.sr(A) - n + 1`, a bound on `sr(pAp)`.
    pub fn bound(&self, sr_a: u64) -> u64 {
        let n = self.n() as u64;
        n * sr_a - n + 1
    }
}

pub fn corner_idempotent(a: &RingRef, p: &Elem, pairs: &[(Elem, Elem)]) -> Result<CornerIdempotent> {
    a.ensure_member(p)?;
    if !a.is_idempotent(p) {
        return Err(Error::NotIdempotent(a.show(p)));
    }
    if pairs.is_empty() {
        return Err(Error::InvalidWitness("no pairs".into()));
    }
    let mut sum = a.zero();
    for (x, y) in pairs {
        a.ensure_member(x)?;
        a.ensure_member(y)?;
        sum = a.add(&sum, &a.mul_all(&[x, p, y]));
    }
    if sum != a.one() {
        return Err(Error::InvalidWitness(format!(
            "sum a_i p b_i = {} is not 1",
            a.show(&sum)
        )));
    }
    let n = pairs.len();
    let m = Ring::matrix(a, n)?;
    let (mut alpha, mut beta) = (m.zero(), m.zero());
    for (i, (x, y)) in pairs.iter().enumerate() {
        alpha = m.add(&alpha, &matrix_unit(&m, 0, i, &a.mul(x, p)));
        beta = m.add(&beta, &matrix_unit(&m, i, 0, &a.mul(p, y)));
    }
    let q = m.mul(&beta, &alpha);
    let np = diagonal_at(&m, 0..n, p);
    let one0 = matrix_unit(&m, 0, 0, &a.one());
    let reaches = m.mul_all(&[&np, &alpha, &q, &beta, &np]) == matrix_unit(&m, 0, 0, p);
    let full_by_closure = if m.is_finite() {
        match Ring::corner(&m, &np).and_then(|c| Idempotent::new(&c, q.clone())) {
            Ok(qi) => match is_full(&qi) {
                Ok(f) => Some(f.full),
                Err(Error::CapExceeded { .. }) => None,
                Err(e) => return Err(e),
            },
            Err(Error::CapExceeded { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let w = EquivalenceWitness::new(alpha.clone(), beta.clone());
    let checks = CornerIdempotentChecks {
        idempotent: m.is_idempotent(&q),
        reaches_corner_unit: reaches,
        full_by_closure,
        equivalent_to_one: w.verifies_equivalence(&m, &one0, &q),
    };
    Ok(CornerIdempotent {
        ring: m,
        alpha,
        beta,
        q,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_units_over_z2() {
        let a = Ring::matrix(&Ring::zmod(2).unwrap(), 2).unwrap();
        let u = |i, j| matrix_unit(&a, i, j, &Elem::Res(1));
        let pairs = [(u(0, 0), u(0, 0)), (u(1, 0), u(0, 1))];
        let c = corner_idempotent(&a, &u(0, 0), &pairs).unwrap();
        assert!(c.checks.passed(), "{:?}", c.checks);
        assert_eq!(c.checks.full_by_closure, Some(true));
        assert_eq!(c.bound(1), 1);
        assert_eq!(c.n(), 2);
    }

    #[test]
    fn unit_idempotent() {
        let z = Ring::integers();
        let c = corner_idempotent(&z, &z.one(), &[(z.one(), z.one())]).unwrap();
        assert_eq!(c.q, c.ring.one());
        assert!(c.checks.passed());
        assert_eq!(c.checks.full_by_closure, None);
        assert_eq!(c.bound(2), 2);
    }

    #[test]
    fn bad_sum() {
        let a = Ring::matrix(&Ring::zmod(2).unwrap(), 2).unwrap();
        let p = matrix_unit(&a, 0, 0, &Elem::Res(1));
        assert!(matches!(
            corner_idempotent(&a, &p, &[(p.clone(), p.clone())]),
            Err(Error::InvalidWitness(_))
        ));
    }
}
